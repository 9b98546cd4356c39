#pragma once

#include <set>
#include <span>
#include <string>
#include <vector>

#include "eclink/grouping.hpp"

namespace eclink {

// Splitting rules for weakly connected groups. Matomo servers are excluded
// from removal by default: distinct actors are unlikely to share one.
struct SplitPolicy {
  std::set<EntityKind> excluded_kinds = {EntityKind::MatomoServer};
  std::size_t min_domains = 200;  // first-stage gate on split fragments
  std::size_t min_sites = 2000;   // second-stage gate on named subgroups
};

struct Subgroup {
  std::string parent_id;
  std::string id;  // "Gk-N" once assigned
  std::vector<NodeId> members;
  std::vector<NodeId> removed_cut_entities;  // removals on the path to this cell
  std::size_t domain_count = 0;
  std::size_t site_count = 0;
  std::size_t email_count = 0;
  std::size_t matomo_count = 0;
  std::size_t la51_count = 0;
  std::string min_domain;
};

struct CutCandidate {
  NodeId entity;
  std::size_t qualifying_components;       // components of (subgraph - entity) with
                                           // domain_count >= policy.min_domains
  std::size_t largest_component_domains;   // over all resulting components; tie-break
};

// Entities outside policy.excluded_kinds whose single removal splits the
// connected member set into >= 2 qualifying components. members must be the
// sorted node set of one connected subgraph. Articulation-point detection
// prunes the candidates; results equal exhaustive single-removal
// recomputation. Returned sorted by node id.
std::vector<CutCandidate> find_cut_entities(const EntityGraph& g, std::span<const NodeId> members,
                                            const SplitPolicy& policy);

// Recursive split: repeatedly remove the best cut entity (max qualifying
// components; ties by smaller largest-component domain count, then smaller
// entity key), recurse into qualifying components, discard the rest.
// Removed entities join no subgroup.
std::vector<Subgroup> split_group(const EntityGraph& g, const Group& group, const SplitPolicy& policy);

// Ranks by (domain_count desc, site_count desc, min_domain asc) and names
// "<parent>-1", "<parent>-2", ... Naming happens before the second-stage
// filter so dropped ranks leave ID gaps.
std::vector<Subgroup> assign_subgroup_ids(const std::string& parent_id, std::vector<Subgroup> subgroups);

// Keeps subgroups with site_count >= policy.min_sites. IDs are not
// renumbered; gaps are preserved.
std::vector<Subgroup> second_stage_filter(std::span<const Subgroup> named, const SplitPolicy& policy);

// Convenience: split + name + second-stage filter for every kept group.
struct RefineResult {
  std::vector<Subgroup> first_stage;  // all named subgroups
  std::vector<Subgroup> kept;         // after the second-stage site filter
};
RefineResult refine_groups(const EntityGraph& g, std::span<const Group> kept_groups,
                           const SplitPolicy& policy);

}  // namespace eclink
