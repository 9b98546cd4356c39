#pragma once

#include <span>
#include <string>
#include <vector>

#include "eclink/graph.hpp"

namespace eclink {

// A partition cell: members are sorted node ids, counts are derived from the
// graph (site_count = distinct site hosts under the member domains).
struct Group {
  std::string id;  // "G1"... once assigned
  std::vector<NodeId> members;
  std::size_t domain_count = 0;
  std::size_t site_count = 0;
  std::size_t email_count = 0;
  std::size_t matomo_count = 0;
  std::size_t la51_count = 0;
  std::string min_domain;  // smallest member domain key; naming tie-break
};

struct GroupPartition {
  std::vector<Group> cells;
};

struct FilterConfig {
  std::size_t min_domains = 200;
  std::size_t min_sites = 2000;
};

Group make_group(const EntityGraph& g, std::vector<NodeId> members);

// Connected components by union-find; one cell per component, plus singleton
// cells for edgeless Domain nodes. Near-linear in nodes + edges.
GroupPartition connected_components(const EntityGraph& g);

// Reference implementation: grows each cell from a seed by repeated
// neighbor-set unions until a fixpoint, removes the used keys, repeats.
// Quadratic; kept permanently as the equivalence oracle for
// connected_components.
GroupPartition naive_fixpoint_components(const EntityGraph& g);

// Exact member-set equality, ignoring cell order.
bool same_partition(const GroupPartition& a, const GroupPartition& b);

struct FilterOutcome {
  std::vector<Group> kept;
  std::vector<Group> dropped;
};

// kept = cells meeting BOTH thresholds (inclusive); dropped cells stay
// available for reporting.
FilterOutcome filter_groups(const GroupPartition& partition, const FilterConfig& cfg);

// Sorts by (domain_count desc, site_count desc, min_domain asc) and names
// the cells "G1", "G2", ...
std::vector<Group> assign_group_ids(std::vector<Group> kept);

}  // namespace eclink
