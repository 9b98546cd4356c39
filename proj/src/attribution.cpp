#include "eclink/attribution.hpp"

#include <algorithm>

#include "eclink/defang.hpp"
#include "eclink/errors.hpp"
#include "eclink/ingest.hpp"

namespace eclink {

std::string_view to_string(MatchLevel level) {
  switch (level) {
    case MatchLevel::Site: return "Site";
    case MatchLevel::Domain: return "Domain";
    case MatchLevel::None: return "None";
  }
  return "?";
}

namespace {

template <typename Cell>
std::unordered_map<std::string, std::string> domain_map(const EntityGraph& g,
                                                        std::span<const Cell> cells) {
  std::unordered_map<std::string, std::string> map;
  for (const auto& cell : cells)
    for (const NodeId id : cell.members)
      if (g.is_domain(id)) map.emplace(g.node(id).key, cell.id);
  return map;
}

}  // namespace

AttributionIndex::AttributionIndex(const EntityGraph& g, std::span<const Group> groups)
    : graph_(&g), domain_to_group_(domain_map(g, groups)), level_("group") {}

AttributionIndex::AttributionIndex(const EntityGraph& g, std::span<const Subgroup> subgroups)
    : graph_(&g), domain_to_group_(domain_map(g, subgroups)), level_("subgroup") {}

AttributionResult AttributionIndex::attribute(std::string_view url, const PublicSuffixList& psl,
                                              bool defang_output) const {
  std::string err;
  const auto site = normalize_site(url, psl, &err);
  if (!site) throw InputError("cannot attribute '" + std::string(url) + "': " + err);

  AttributionResult result;
  result.query_url = defang_output ? defang(site->host) : site->host;
  result.assignment_level = level_;

  auto group_of = [&](const std::string& domain) -> const std::string* {
    const auto it = domain_to_group_.find(domain);
    return it == domain_to_group_.end() ? nullptr : &it->second;
  };
  auto finish = [&](MatchLevel level, const std::string& key, const std::string& group) {
    result.match_level = level;
    result.group_id = group;
    result.matched_key = defang_output ? defang(key) : key;
    if (const auto dom = graph_->find(EntityKind::Domain, site->domain))
      result.evidence_count = graph_->site_count(*dom);
  };

  if (graph_->domain_of_site(site->host)) {
    if (const auto* group = group_of(site->domain)) {
      finish(MatchLevel::Site, site->host, *group);
      return result;
    }
  }
  if (graph_->find(EntityKind::Domain, site->domain)) {
    if (const auto* group = group_of(site->domain)) {
      finish(MatchLevel::Domain, site->domain, *group);
      return result;
    }
  }
  return result;  // None
}

std::string matomo_url_host(std::string_view url) {
  std::string_view rest = url;
  if (const auto pos = rest.find("://"); pos != std::string_view::npos) rest = rest.substr(pos + 3);
  const auto end = rest.find_first_of("/:?#");
  return std::string(end == std::string_view::npos ? rest : rest.substr(0, end));
}

namespace {

template <typename Cell>
std::vector<GroupIndicators> indicators_for(const EntityGraph& g, std::span<const Cell> cells) {
  std::vector<GroupIndicators> out;
  out.reserve(cells.size());
  for (const auto& cell : cells) {
    GroupIndicators ind;
    ind.group_id = cell.id;
    for (const NodeId id : cell.members) {
      const auto& node = g.node(id);
      if (node.kind == EntityKind::MatomoServer)
        ind.matomo_urls.push_back(node.key);
      else if (node.kind == EntityKind::La51Id)
        ind.la51_ids.push_back(node.key);
    }
    std::sort(ind.matomo_urls.begin(), ind.matomo_urls.end());
    std::sort(ind.la51_ids.begin(), ind.la51_ids.end());
    for (const auto& url : ind.matomo_urls) ind.matomo_hosts.push_back(matomo_url_host(url));
    std::sort(ind.matomo_hosts.begin(), ind.matomo_hosts.end());
    ind.matomo_hosts.erase(std::unique(ind.matomo_hosts.begin(), ind.matomo_hosts.end()),
                           ind.matomo_hosts.end());
    out.push_back(std::move(ind));
  }
  return out;
}

}  // namespace

std::vector<GroupIndicators> matomo_indicators(const EntityGraph& g, std::span<const Group> groups) {
  return indicators_for(g, groups);
}

std::vector<GroupIndicators> matomo_indicators(const EntityGraph& g, std::span<const Subgroup> subgroups) {
  return indicators_for(g, subgroups);
}

}  // namespace eclink
