#include "eclink/grouping.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

namespace eclink {

Group make_group(const EntityGraph& g, std::vector<NodeId> members) {
  std::sort(members.begin(), members.end());
  Group group;
  group.members = std::move(members);
  for (const NodeId id : group.members) {
    const auto& node = g.node(id);
    switch (node.kind) {
      case EntityKind::Domain:
        ++group.domain_count;
        group.site_count += g.site_count(id);
        if (group.min_domain.empty() || node.key < group.min_domain) group.min_domain = node.key;
        break;
      case EntityKind::Email: ++group.email_count; break;
      case EntityKind::MatomoServer: ++group.matomo_count; break;
      case EntityKind::La51Id: ++group.la51_count; break;
    }
  }
  return group;
}

namespace {

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n), rank_(n, 0) {
    std::iota(parent_.begin(), parent_.end(), NodeId{0});
  }

  NodeId find(NodeId v) {
    while (parent_[v] != v) {
      parent_[v] = parent_[parent_[v]];  // path halving
      v = parent_[v];
    }
    return v;
  }

  void unite(NodeId a, NodeId b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (rank_[a] < rank_[b]) std::swap(a, b);
    parent_[b] = a;
    if (rank_[a] == rank_[b]) ++rank_[a];
  }

 private:
  std::vector<NodeId> parent_;
  std::vector<std::uint8_t> rank_;
};

}  // namespace

GroupPartition connected_components(const EntityGraph& g) {
  const auto n = static_cast<NodeId>(g.node_count());
  UnionFind uf(n);
  for (NodeId v = 0; v < n; ++v)
    for (const NodeId w : g.neighbors(v))
      if (v < w) uf.unite(v, w);

  // Cells cover every node with an edge; edgeless Domain nodes become
  // singleton cells, edgeless non-domain nodes cannot exist by construction.
  std::map<NodeId, std::vector<NodeId>> cells;
  for (NodeId v = 0; v < n; ++v) {
    if (g.degree(v) > 0)
      cells[uf.find(v)].push_back(v);
    else if (g.is_domain(v))
      cells[v].push_back(v);
  }

  GroupPartition partition;
  partition.cells.reserve(cells.size());
  for (auto& [root, members] : cells) partition.cells.push_back(make_group(g, std::move(members)));
  return partition;
}

namespace {

// Transcription of the preliminary grouping procedure: a links table of
// node -> neighbor set (both directions), grown from a seed until stable.
std::set<NodeId> detect_one_group(NodeId key, const std::map<NodeId, std::set<NodeId>>& links) {
  std::set<NodeId> group;
  group.insert(key);
  std::size_t prev_len = 0;
  while (prev_len < group.size()) {
    prev_len = group.size();
    std::set<NodeId> next = group;
    for (const auto& [src, dsts] : links)
      if (group.count(src)) next.insert(dsts.begin(), dsts.end());
    group = std::move(next);
  }
  return group;
}

}  // namespace

GroupPartition naive_fixpoint_components(const EntityGraph& g) {
  std::map<NodeId, std::set<NodeId>> links;
  const auto n = static_cast<NodeId>(g.node_count());
  for (NodeId v = 0; v < n; ++v) {
    const auto nbrs = g.neighbors(v);
    if (!nbrs.empty()) links[v] = std::set<NodeId>(nbrs.begin(), nbrs.end());
  }

  GroupPartition partition;
  while (!links.empty()) {
    const NodeId key = links.begin()->first;
    const auto detected = detect_one_group(key, links);
    for (const NodeId k : detected) links.erase(k);
    partition.cells.push_back(make_group(g, {detected.begin(), detected.end()}));
  }
  for (NodeId v = 0; v < n; ++v)
    if (g.degree(v) == 0 && g.is_domain(v)) partition.cells.push_back(make_group(g, {v}));
  return partition;
}

bool same_partition(const GroupPartition& a, const GroupPartition& b) {
  if (a.cells.size() != b.cells.size()) return false;
  auto normalized = [](const GroupPartition& p) {
    std::vector<std::vector<NodeId>> cells;
    cells.reserve(p.cells.size());
    for (const auto& c : p.cells) cells.push_back(c.members);  // members already sorted
    std::sort(cells.begin(), cells.end());
    return cells;
  };
  return normalized(a) == normalized(b);
}

FilterOutcome filter_groups(const GroupPartition& partition, const FilterConfig& cfg) {
  FilterOutcome out;
  for (const auto& cell : partition.cells) {
    if (cell.domain_count >= cfg.min_domains && cell.site_count >= cfg.min_sites)
      out.kept.push_back(cell);
    else
      out.dropped.push_back(cell);
  }
  return out;
}

std::vector<Group> assign_group_ids(std::vector<Group> kept) {
  std::sort(kept.begin(), kept.end(), [](const Group& a, const Group& b) {
    if (a.domain_count != b.domain_count) return a.domain_count > b.domain_count;
    if (a.site_count != b.site_count) return a.site_count > b.site_count;
    return a.min_domain < b.min_domain;
  });
  for (std::size_t i = 0; i < kept.size(); ++i) kept[i].id = "G" + std::to_string(i + 1);
  return kept;
}

}  // namespace eclink
