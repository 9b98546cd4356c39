#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <unordered_map>

#include "eclink/graph.hpp"

namespace eclink {

// node id -> group/subgroup id, for the GraphML group_id attribute
using NodeGroupMap = std::unordered_map<NodeId, std::string>;

// GraphML with node attributes kind/key/group_id and edge attribute
// link_kind. Node order is canonical id order, so the output is byte-stable.
// members, when given, restricts the export to one cell's subgraph.
void export_graphml(std::ostream& out, const EntityGraph& g, const NodeGroupMap& groups,
                    std::optional<std::span<const NodeId>> members = std::nullopt);

// "source_key,source_kind,target_key,target_kind,link_kind" edge list for
// tools without GraphML import; same ordering and slicing rules.
void export_edge_csv(std::ostream& out, const EntityGraph& g,
                     std::optional<std::span<const NodeId>> members = std::nullopt);

// Rebuilds synthetic records from an exported edge list (one record per
// domain, the domain itself standing in as its site). Rebuilding a graph
// from them reproduces the exported link structure.
std::vector<SiteRecord> import_edge_csv(std::istream& in);

}  // namespace eclink
