#pragma once

#include <span>
#include <string>
#include <vector>

#include "eclink/refine.hpp"
#include "eclink/suffix.hpp"

namespace eclink {

enum class MatchLevel { Site, Domain, None };

std::string_view to_string(MatchLevel level);

struct AttributionResult {
  std::string query_url;           // defanged unless raw output requested
  MatchLevel match_level = MatchLevel::None;
  std::string group_id;            // empty iff match_level == None
  std::string matched_key;         // the site host or domain that matched
  std::size_t evidence_count = 0;  // known sites under the matched domain
  std::string assignment_level;    // "subgroup" or "group"
};

// Read-only index over one immutable partition snapshot; safe for concurrent
// queries. A known host whose domain sits in no cell (filtered out or a
// removed cut entity) yields None: a match without a group does not exist.
class AttributionIndex {
 public:
  AttributionIndex(const EntityGraph& g, std::span<const Group> groups);
  AttributionIndex(const EntityGraph& g, std::span<const Subgroup> subgroups);

  // Throws InputError when url has no parseable hostname.
  AttributionResult attribute(std::string_view url, const PublicSuffixList& psl,
                              bool defang_output = true) const;

  const std::string& level() const { return level_; }

 private:
  const EntityGraph* graph_;
  std::unordered_map<std::string, std::string> domain_to_group_;
  std::string level_;
};

struct GroupIndicators {
  std::string group_id;
  std::vector<std::string> matomo_urls;   // full URLs, raw form
  std::vector<std::string> matomo_hosts;  // distinct hosts of those URLs
  std::vector<std::string> la51_ids;      // weak fingerprints; see low_confidence
  bool la51_low_confidence = true;        // ID churn makes these weak indicators
};

std::string matomo_url_host(std::string_view url);

// One entry per group, groups with no Matomo servers included with empty
// lists. Host aggregation deduplicates URLs sharing a server host.
std::vector<GroupIndicators> matomo_indicators(const EntityGraph& g, std::span<const Group> groups);
std::vector<GroupIndicators> matomo_indicators(const EntityGraph& g, std::span<const Subgroup> subgroups);

}  // namespace eclink
