#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "eclink/record.hpp"

namespace eclink {

enum class EntityKind : std::uint8_t { Domain = 0, Email = 1, MatomoServer = 2, La51Id = 3 };

inline constexpr std::array<EntityKind, 4> kEntityKinds = {
    EntityKind::Domain, EntityKind::Email, EntityKind::MatomoServer, EntityKind::La51Id};

std::string_view to_string(EntityKind kind);
std::optional<EntityKind> entity_kind_from_string(std::string_view name);

// Edge kinds of the multipartite graph; every edge joins a Domain node to a
// node of the kind that names the link.
enum class LinkKind : std::uint8_t { DomainEmail = 1, DomainMatomo = 2, DomainLa51 = 3 };

LinkKind link_kind_for(EntityKind non_domain_kind);
std::string_view to_string(LinkKind kind);

using NodeId = std::uint32_t;

struct EntityNode {
  EntityKind kind;
  std::string key;
};

struct SiteEntry {
  std::string host;
  std::vector<Date> observed;  // sorted, unique
};

// Immutable entity-link graph. Node ids are canonical: nodes are sorted by
// (kind, key) with Domain first, so ids and every derived artifact are
// independent of record order. Construction is single-writer; the finished
// graph is safe for any number of concurrent readers.
class EntityGraph {
 public:
  EntityGraph() { kind_offsets_.fill(0); }

  static EntityGraph build(std::span<const SiteRecord> records);

  std::size_t node_count() const { return nodes_.size(); }
  const EntityNode& node(NodeId id) const { return nodes_[id]; }
  bool is_domain(NodeId id) const { return id < kind_offsets_[1]; }

  std::span<const NodeId> neighbors(NodeId id) const {
    return {adj_.data() + adj_offsets_[id], adj_offsets_[id + 1] - adj_offsets_[id]};
  }
  std::size_t degree(NodeId id) const { return adj_offsets_[id + 1] - adj_offsets_[id]; }
  std::size_t edge_count() const { return adj_.size() / 2; }

  std::optional<NodeId> find(EntityKind kind, std::string_view key) const;

  std::size_t count(EntityKind kind) const;

  // Sites observed under a Domain node, sorted by host.
  std::span<const SiteEntry> sites(NodeId domain_id) const { return sites_[domain_id]; }
  std::size_t site_count(NodeId domain_id) const { return sites_[domain_id].size(); }
  std::size_t total_sites() const { return total_sites_; }

  std::optional<NodeId> domain_of_site(std::string_view host) const;

 private:
  std::vector<EntityNode> nodes_;
  std::array<std::size_t, 5> kind_offsets_{};  // per-kind start index; [4] = node count
  std::vector<std::size_t> adj_offsets_;
  std::vector<NodeId> adj_;
  std::vector<std::vector<SiteEntry>> sites_;  // indexed by Domain node id
  std::size_t total_sites_ = 0;
  std::array<std::unordered_map<std::string, NodeId>, 4> lookup_;
  std::unordered_map<std::string, NodeId> site_to_domain_;
};

struct DatasetStats {
  std::size_t domains = 0;
  std::size_t emails = 0;
  std::size_t matomo_servers = 0;
  std::size_t la51_ids = 0;
  std::size_t total_entities = 0;
  std::size_t total_sites = 0;
};

DatasetStats stats(const EntityGraph& g);

}  // namespace eclink
