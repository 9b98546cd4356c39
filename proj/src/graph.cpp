#include "eclink/graph.hpp"

#include <algorithm>
#include <cassert>
#include <map>

namespace eclink {

std::string_view to_string(EntityKind kind) {
  switch (kind) {
    case EntityKind::Domain: return "domain";
    case EntityKind::Email: return "email";
    case EntityKind::MatomoServer: return "matomo_server";
    case EntityKind::La51Id: return "la51_id";
  }
  return "?";
}

std::optional<EntityKind> entity_kind_from_string(std::string_view name) {
  for (const auto kind : kEntityKinds)
    if (name == to_string(kind)) return kind;
  return std::nullopt;
}

LinkKind link_kind_for(EntityKind non_domain_kind) {
  switch (non_domain_kind) {
    case EntityKind::Email: return LinkKind::DomainEmail;
    case EntityKind::MatomoServer: return LinkKind::DomainMatomo;
    case EntityKind::La51Id: return LinkKind::DomainLa51;
    case EntityKind::Domain: break;
  }
  assert(false && "domain-domain links do not exist");
  return LinkKind::DomainEmail;
}

std::string_view to_string(LinkKind kind) {
  switch (kind) {
    case LinkKind::DomainEmail: return "link1_email";
    case LinkKind::DomainMatomo: return "link2_matomo";
    case LinkKind::DomainLa51: return "link3_la51";
  }
  return "?";
}

EntityGraph EntityGraph::build(std::span<const SiteRecord> records) {
  EntityGraph g;

  // Pass 1: distinct keys per kind, then canonical ids by sorted order.
  std::array<std::vector<std::string>, 4> keys;
  {
    std::array<std::unordered_map<std::string, bool>, 4> seen;
    auto note = [&](EntityKind kind, const std::string& key) {
      seen[static_cast<std::size_t>(kind)].emplace(key, true);
    };
    for (const auto& rec : records) {
      note(EntityKind::Domain, rec.domain);
      for (const auto& e : rec.emails) note(EntityKind::Email, e);
      for (const auto& m : rec.matomo_urls) note(EntityKind::MatomoServer, m);
      for (const auto& id : rec.la51_ids) note(EntityKind::La51Id, id);
    }
    for (std::size_t k = 0; k < 4; ++k) {
      keys[k].reserve(seen[k].size());
      for (auto& [key, _] : seen[k]) keys[k].push_back(key);
      std::sort(keys[k].begin(), keys[k].end());
    }
  }

  std::size_t total = 0;
  for (std::size_t k = 0; k < 4; ++k) {
    g.kind_offsets_[k] = total;
    total += keys[k].size();
  }
  g.kind_offsets_[4] = total;
  g.nodes_.reserve(total);
  for (std::size_t k = 0; k < 4; ++k) {
    auto& lookup = g.lookup_[k];
    lookup.reserve(keys[k].size() * 2);
    for (auto& key : keys[k]) {
      const auto id = static_cast<NodeId>(g.nodes_.size());
      lookup.emplace(key, id);
      g.nodes_.push_back({static_cast<EntityKind>(k), std::move(key)});
    }
  }

  // Pass 2: edges (deduplicated) and the per-domain site index.
  std::vector<std::pair<NodeId, NodeId>> edges;
  std::vector<std::map<std::string, std::vector<Date>>> site_accum(g.count(EntityKind::Domain));
  for (const auto& rec : records) {
    const NodeId d = g.lookup_[0].at(rec.domain);
    auto link = [&](EntityKind kind, const std::string& key) {
      edges.emplace_back(d, g.lookup_[static_cast<std::size_t>(kind)].at(key));
    };
    for (const auto& e : rec.emails) link(EntityKind::Email, e);
    for (const auto& m : rec.matomo_urls) link(EntityKind::MatomoServer, m);
    for (const auto& id : rec.la51_ids) link(EntityKind::La51Id, id);
    site_accum[d][rec.site_host].push_back(rec.observed_at);
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  std::vector<std::size_t> deg(total, 0);
  for (const auto& [a, b] : edges) {
    ++deg[a];
    ++deg[b];
  }
  g.adj_offsets_.assign(total + 1, 0);
  for (std::size_t i = 0; i < total; ++i) g.adj_offsets_[i + 1] = g.adj_offsets_[i] + deg[i];
  g.adj_.resize(edges.size() * 2);
  std::vector<std::size_t> cursor(g.adj_offsets_.begin(), g.adj_offsets_.end() - 1);
  for (const auto& [a, b] : edges) {
    g.adj_[cursor[a]++] = b;
    g.adj_[cursor[b]++] = a;
  }
  for (std::size_t i = 0; i < total; ++i)
    std::sort(g.adj_.begin() + static_cast<std::ptrdiff_t>(g.adj_offsets_[i]),
              g.adj_.begin() + static_cast<std::ptrdiff_t>(g.adj_offsets_[i + 1]));

  g.sites_.resize(site_accum.size());
  for (std::size_t d = 0; d < site_accum.size(); ++d) {
    auto& entries = g.sites_[d];
    entries.reserve(site_accum[d].size());
    for (auto& [host, dates] : site_accum[d]) {
      std::sort(dates.begin(), dates.end());
      dates.erase(std::unique(dates.begin(), dates.end()), dates.end());
      g.site_to_domain_.emplace(host, static_cast<NodeId>(d));
      entries.push_back({host, std::move(dates)});
    }
    g.total_sites_ += entries.size();
  }
  return g;
}

std::optional<NodeId> EntityGraph::find(EntityKind kind, std::string_view key) const {
  const auto& lookup = lookup_[static_cast<std::size_t>(kind)];
  const auto it = lookup.find(std::string(key));
  if (it == lookup.end()) return std::nullopt;
  return it->second;
}

std::size_t EntityGraph::count(EntityKind kind) const {
  const auto k = static_cast<std::size_t>(kind);
  return kind_offsets_[k + 1] - kind_offsets_[k];
}

std::optional<NodeId> EntityGraph::domain_of_site(std::string_view host) const {
  const auto it = site_to_domain_.find(std::string(host));
  if (it == site_to_domain_.end()) return std::nullopt;
  return it->second;
}

DatasetStats stats(const EntityGraph& g) {
  DatasetStats s;
  s.domains = g.count(EntityKind::Domain);
  s.emails = g.count(EntityKind::Email);
  s.matomo_servers = g.count(EntityKind::MatomoServer);
  s.la51_ids = g.count(EntityKind::La51Id);
  s.total_entities = s.domains + s.emails + s.matomo_servers + s.la51_ids;
  s.total_sites = g.total_sites();
  return s;
}

}  // namespace eclink
