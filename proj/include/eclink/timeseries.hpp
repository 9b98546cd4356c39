#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "eclink/refine.hpp"

namespace eclink {

struct MonthlyBucket {
  YearMonth month;
  std::size_t count = 0;
};

struct MonthlySeries {
  std::string group_id;
  std::vector<MonthlyBucket> buckets;  // strictly increasing by month
};

// What gets counted per month: distinct fake-EC domains by default; other
// entity kinds behind the metric switch.
enum class SeriesMetric { Domains, Emails, MatomoServers, La51Ids };

std::string_view to_string(SeriesMetric metric);
std::optional<SeriesMetric> series_metric_from_string(std::string_view name);

// domain key -> group/subgroup id
using GroupAssignment = std::unordered_map<std::string, std::string>;

GroupAssignment assignment_from_groups(const EntityGraph& g, std::span<const Group> groups);
GroupAssignment assignment_from_subgroups(const EntityGraph& g, std::span<const Subgroup> subgroups);

struct BucketOutcome {
  std::vector<MonthlySeries> series;    // sorted by group id; dense month range over the window
  std::size_t out_of_window = 0;        // excluded observations
  std::size_t unassigned_domains = 0;   // records whose domain is in no cell
};

// Distinct members per (group, calendar month); a domain seen twice in one
// month counts once, a domain seen in two months counts in both.
BucketOutcome bucket_by_month(std::span<const SiteRecord> records, const GroupAssignment& assignment,
                              const CollectionWindow& window,
                              SeriesMetric metric = SeriesMetric::Domains);

// Drops the leading bucket when the window starts mid-month and the trailing
// bucket when it ends mid-month; interior buckets are never touched.
std::vector<MonthlySeries> trim_partial_months(std::vector<MonthlySeries> series,
                                               const CollectionWindow& window);

// "group_id,month,domain_count" rows sorted by (group_id, month).
void write_series_csv(std::ostream& out, std::span<const MonthlySeries> series,
                      SeriesMetric metric = SeriesMetric::Domains);

}  // namespace eclink
