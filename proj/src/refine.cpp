#include "eclink/refine.hpp"

#include <algorithm>
#include <cassert>
#include <limits>

namespace eclink {

namespace {

// Induced subgraph over a sorted member set, locally indexed.
struct LocalGraph {
  std::span<const NodeId> members;
  std::vector<std::vector<std::uint32_t>> adj;

  LocalGraph(const EntityGraph& g, std::span<const NodeId> m) : members(m), adj(m.size()) {
    for (std::size_t i = 0; i < m.size(); ++i) {
      for (const NodeId w : g.neighbors(m[i])) {
        const auto it = std::lower_bound(m.begin(), m.end(), w);
        if (it != m.end() && *it == w) adj[i].push_back(static_cast<std::uint32_t>(it - m.begin()));
      }
    }
  }
};

struct SubtreePiece {
  std::size_t domains;
  std::size_t size;
};

// Per-vertex profile of the components left by removing that vertex.
struct RemovalProfile {
  std::vector<SubtreePiece> severed;  // child subtrees with no back edge above v
  // The remainder component (everything else) is derived from totals.
};

constexpr std::uint32_t kUnvisited = std::numeric_limits<std::uint32_t>::max();

}  // namespace

std::vector<CutCandidate> find_cut_entities(const EntityGraph& g, std::span<const NodeId> members,
                                            const SplitPolicy& policy) {
  const std::size_t n = members.size();
  std::vector<CutCandidate> out;
  if (n < 3) return out;  // removing one node of a 2-node graph leaves one component

  const LocalGraph local(g, members);
  std::size_t total_domains = 0;
  std::vector<bool> is_dom(n);
  for (std::size_t i = 0; i < n; ++i) {
    is_dom[i] = g.is_domain(members[i]);
    total_domains += is_dom[i];
  }

  // Iterative DFS computing discovery/low values plus subtree domain and
  // node counts; a child subtree with low >= disc(parent) becomes its own
  // component when the parent is removed.
  std::vector<std::uint32_t> disc(n, kUnvisited), low(n, 0), parent(n, kUnvisited);
  std::vector<std::size_t> sub_dom(n, 0), sub_size(n, 0), edge_ix(n, 0);
  std::vector<RemovalProfile> profile(n);
  std::uint32_t timer = 0;

  std::vector<std::uint32_t> stack;
  stack.push_back(0);
  disc[0] = low[0] = timer++;
  sub_dom[0] = is_dom[0];
  sub_size[0] = 1;
  while (!stack.empty()) {
    const std::uint32_t v = stack.back();
    if (edge_ix[v] < local.adj[v].size()) {
      const std::uint32_t w = local.adj[v][edge_ix[v]++];
      if (w == parent[v]) continue;
      if (disc[w] == kUnvisited) {
        parent[w] = v;
        disc[w] = low[w] = timer++;
        sub_dom[w] = is_dom[w];
        sub_size[w] = 1;
        stack.push_back(w);
      } else {
        low[v] = std::min(low[v], disc[w]);
      }
    } else {
      stack.pop_back();
      if (!stack.empty()) {
        const std::uint32_t p = stack.back();
        low[p] = std::min(low[p], low[v]);
        sub_dom[p] += sub_dom[v];
        sub_size[p] += sub_size[v];
        // Root children are always severed; elsewhere only when the subtree
        // has no back edge above p.
        if (parent[p] == kUnvisited || low[v] >= disc[p])
          profile[p].severed.push_back({sub_dom[v], sub_size[v]});
      }
    }
  }
  assert(sub_size[0] == n && "member set must be connected");

  for (std::size_t v = 0; v < n; ++v) {
    if (policy.excluded_kinds.count(g.node(members[v]).kind)) continue;
    const auto& severed = profile[v].severed;
    if (severed.empty()) continue;  // not an articulation point

    std::size_t qualifying = 0, largest = 0;
    std::size_t severed_dom = 0, severed_size = 0;
    for (const auto& piece : severed) {
      if (piece.domains >= policy.min_domains) ++qualifying;
      largest = std::max(largest, piece.domains);
      severed_dom += piece.domains;
      severed_size += piece.size;
    }
    const std::size_t rest_size = n - 1 - severed_size;
    if (rest_size > 0) {
      const std::size_t rest_dom = total_domains - (is_dom[v] ? 1 : 0) - severed_dom;
      if (rest_dom >= policy.min_domains) ++qualifying;
      largest = std::max(largest, rest_dom);
    }
    if (qualifying >= 2) out.push_back({members[v], qualifying, largest});
  }
  return out;  // members sorted => candidates sorted by node id
}

namespace {

Subgroup make_subgroup(const EntityGraph& g, std::vector<NodeId> members, std::vector<NodeId> path) {
  Group counts = make_group(g, std::move(members));
  Subgroup sg;
  sg.members = std::move(counts.members);
  sg.removed_cut_entities = std::move(path);
  sg.domain_count = counts.domain_count;
  sg.site_count = counts.site_count;
  sg.email_count = counts.email_count;
  sg.matomo_count = counts.matomo_count;
  sg.la51_count = counts.la51_count;
  sg.min_domain = std::move(counts.min_domain);
  return sg;
}

// Connected components of the member set with one node removed; each
// component sorted, components ordered by smallest member.
std::vector<std::vector<NodeId>> components_without(const EntityGraph& g,
                                                    std::span<const NodeId> members, NodeId removed) {
  const LocalGraph local(g, members);
  const std::size_t n = members.size();
  std::size_t removed_ix = n;
  {
    const auto it = std::lower_bound(members.begin(), members.end(), removed);
    assert(it != members.end() && *it == removed);
    removed_ix = static_cast<std::size_t>(it - members.begin());
  }
  std::vector<bool> seen(n, false);
  seen[removed_ix] = true;
  std::vector<std::vector<NodeId>> components;
  std::vector<std::uint32_t> queue;
  for (std::size_t start = 0; start < n; ++start) {
    if (seen[start]) continue;
    queue.assign(1, static_cast<std::uint32_t>(start));
    seen[start] = true;
    std::vector<NodeId> comp;
    while (!queue.empty()) {
      const auto v = queue.back();
      queue.pop_back();
      comp.push_back(members[v]);
      for (const auto w : local.adj[v])
        if (!seen[w]) {
          seen[w] = true;
          queue.push_back(w);
        }
    }
    std::sort(comp.begin(), comp.end());
    components.push_back(std::move(comp));
  }
  std::sort(components.begin(), components.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  return components;
}

std::size_t count_domains(const EntityGraph& g, std::span<const NodeId> members) {
  std::size_t n = 0;
  for (const NodeId id : members) n += g.is_domain(id);
  return n;
}

void split_recurse(const EntityGraph& g, std::vector<NodeId> members, const SplitPolicy& policy,
                   std::vector<NodeId>& path, std::vector<Subgroup>& out) {
  const auto cuts = find_cut_entities(g, members, policy);
  if (cuts.empty()) {
    out.push_back(make_subgroup(g, std::move(members), path));
    return;
  }
  const auto best = std::min_element(cuts.begin(), cuts.end(), [&](const CutCandidate& a, const CutCandidate& b) {
    if (a.qualifying_components != b.qualifying_components)
      return a.qualifying_components > b.qualifying_components;
    if (a.largest_component_domains != b.largest_component_domains)
      return a.largest_component_domains < b.largest_component_domains;
    return g.node(a.entity).key < g.node(b.entity).key;
  });
  path.push_back(best->entity);
  for (auto& comp : components_without(g, members, best->entity)) {
    if (count_domains(g, comp) >= policy.min_domains)
      split_recurse(g, std::move(comp), policy, path, out);
    // smaller fragments are discarded, not merged
  }
  path.pop_back();
}

}  // namespace

std::vector<Subgroup> split_group(const EntityGraph& g, const Group& group, const SplitPolicy& policy) {
  std::vector<Subgroup> out;
  std::vector<NodeId> path;
  split_recurse(g, group.members, policy, path, out);
  for (auto& sg : out) sg.parent_id = group.id;
  return out;
}

std::vector<Subgroup> assign_subgroup_ids(const std::string& parent_id, std::vector<Subgroup> subgroups) {
  std::sort(subgroups.begin(), subgroups.end(), [](const Subgroup& a, const Subgroup& b) {
    if (a.domain_count != b.domain_count) return a.domain_count > b.domain_count;
    if (a.site_count != b.site_count) return a.site_count > b.site_count;
    return a.min_domain < b.min_domain;
  });
  for (std::size_t i = 0; i < subgroups.size(); ++i) {
    subgroups[i].parent_id = parent_id;
    subgroups[i].id = parent_id + "-" + std::to_string(i + 1);
  }
  return subgroups;
}

std::vector<Subgroup> second_stage_filter(std::span<const Subgroup> named, const SplitPolicy& policy) {
  std::vector<Subgroup> kept;
  for (const auto& sg : named)
    if (sg.site_count >= policy.min_sites) kept.push_back(sg);
  return kept;
}

RefineResult refine_groups(const EntityGraph& g, std::span<const Group> kept_groups,
                           const SplitPolicy& policy) {
  RefineResult result;
  for (const auto& group : kept_groups) {
    auto named = assign_subgroup_ids(group.id, split_group(g, group, policy));
    for (auto& sg : named) result.first_stage.push_back(std::move(sg));
  }
  result.kept = second_stage_filter(result.first_stage, policy);
  return result;
}

}  // namespace eclink
