#include "eclink/rng.hpp"

#include <algorithm>
#include <cmath>

namespace eclink {

std::uint32_t sample_tail(Rng& rng, const TailDistribution& dist) {
  if (dist.max_value <= dist.min_value) return dist.min_value;
  const double lo = dist.min_value;
  const double hi = static_cast<double>(dist.max_value) + 1.0;
  const double u = rng.unit();
  // Bounded Pareto inverse CDF.
  const double x = lo * std::pow(1.0 - u * (1.0 - std::pow(lo / hi, dist.alpha)), -1.0 / dist.alpha);
  const auto v = static_cast<std::uint32_t>(x);
  return std::clamp(v, dist.min_value, dist.max_value);
}

}  // namespace eclink
