#include "eclink/timeseries.hpp"

#include <algorithm>
#include <map>
#include <ostream>
#include <set>

namespace eclink {

std::string_view to_string(SeriesMetric metric) {
  switch (metric) {
    case SeriesMetric::Domains: return "domain";
    case SeriesMetric::Emails: return "email";
    case SeriesMetric::MatomoServers: return "matomo";
    case SeriesMetric::La51Ids: return "la51";
  }
  return "?";
}

std::optional<SeriesMetric> series_metric_from_string(std::string_view name) {
  if (name == "domain") return SeriesMetric::Domains;
  if (name == "email") return SeriesMetric::Emails;
  if (name == "matomo") return SeriesMetric::MatomoServers;
  if (name == "la51") return SeriesMetric::La51Ids;
  return std::nullopt;
}

namespace {

template <typename Cell>
GroupAssignment assignment_from_cells(const EntityGraph& g, std::span<const Cell> cells) {
  GroupAssignment assignment;
  for (const auto& cell : cells)
    for (const NodeId id : cell.members)
      if (g.is_domain(id)) assignment.emplace(g.node(id).key, cell.id);
  return assignment;
}

}  // namespace

GroupAssignment assignment_from_groups(const EntityGraph& g, std::span<const Group> groups) {
  return assignment_from_cells(g, groups);
}

GroupAssignment assignment_from_subgroups(const EntityGraph& g, std::span<const Subgroup> subgroups) {
  return assignment_from_cells(g, subgroups);
}

BucketOutcome bucket_by_month(std::span<const SiteRecord> records, const GroupAssignment& assignment,
                              const CollectionWindow& window, SeriesMetric metric) {
  BucketOutcome outcome;
  // (group, month) -> distinct member keys observed
  std::map<std::string, std::map<YearMonth, std::set<std::string>>> seen;
  std::set<std::string> unassigned;
  for (const auto& rec : records) {
    if (!window.contains(rec.observed_at)) {
      ++outcome.out_of_window;
      continue;
    }
    const auto it = assignment.find(rec.domain);
    if (it == assignment.end()) {
      unassigned.insert(rec.domain);
      continue;
    }
    auto& bucket = seen[it->second][YearMonth::of(rec.observed_at)];
    switch (metric) {
      case SeriesMetric::Domains: bucket.insert(rec.domain); break;
      case SeriesMetric::Emails: bucket.insert(rec.emails.begin(), rec.emails.end()); break;
      case SeriesMetric::MatomoServers: bucket.insert(rec.matomo_urls.begin(), rec.matomo_urls.end()); break;
      case SeriesMetric::La51Ids: bucket.insert(rec.la51_ids.begin(), rec.la51_ids.end()); break;
    }
  }
  outcome.unassigned_domains = unassigned.size();

  const YearMonth first = YearMonth::of(window.start_date);
  const YearMonth last = YearMonth::of(window.end_date);
  for (const auto& [group_id, months] : seen) {
    MonthlySeries series;
    series.group_id = group_id;
    for (YearMonth m = first;; m = m.next()) {
      const auto it = months.find(m);
      series.buckets.push_back({m, it == months.end() ? 0 : it->second.size()});
      if (m == last) break;
    }
    outcome.series.push_back(std::move(series));
  }
  return outcome;
}

std::vector<MonthlySeries> trim_partial_months(std::vector<MonthlySeries> series,
                                               const CollectionWindow& window) {
  const bool drop_first = !window.start_date.first_of_month();
  const bool drop_last = !window.end_date.last_of_month();
  const YearMonth first = YearMonth::of(window.start_date);
  const YearMonth last = YearMonth::of(window.end_date);
  for (auto& s : series) {
    if (drop_first && !s.buckets.empty() && s.buckets.front().month == first)
      s.buckets.erase(s.buckets.begin());
    if (drop_last && !s.buckets.empty() && s.buckets.back().month == last) s.buckets.pop_back();
  }
  return series;
}

void write_series_csv(std::ostream& out, std::span<const MonthlySeries> series, SeriesMetric metric) {
  out << "group_id,month," << to_string(metric) << "_count\n";
  for (const auto& s : series)
    for (const auto& b : s.buckets)
      out << s.group_id << ',' << b.month.to_string() << ',' << b.count << '\n';
}

}  // namespace eclink
