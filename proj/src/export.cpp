#include "eclink/export.hpp"

#include <algorithm>
#include <istream>
#include <map>
#include <ostream>

#include "eclink/errors.hpp"
#include "eclink/ingest.hpp"

namespace eclink {

namespace {

std::string xml_escape(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (const char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string csv_field(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string out = "\"";
  for (const char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

bool in_members(std::optional<std::span<const NodeId>> members, NodeId id) {
  if (!members) return true;
  return std::binary_search(members->begin(), members->end(), id);
}

}  // namespace

void export_graphml(std::ostream& out, const EntityGraph& g, const NodeGroupMap& groups,
                    std::optional<std::span<const NodeId>> members) {
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n"
      << "  <key id=\"kind\" for=\"node\" attr.name=\"kind\" attr.type=\"string\"/>\n"
      << "  <key id=\"key\" for=\"node\" attr.name=\"key\" attr.type=\"string\"/>\n"
      << "  <key id=\"group_id\" for=\"node\" attr.name=\"group_id\" attr.type=\"string\"/>\n"
      << "  <key id=\"link_kind\" for=\"edge\" attr.name=\"link_kind\" attr.type=\"string\"/>\n"
      << "  <graph id=\"entity-links\" edgedefault=\"undirected\">\n";
  const auto n = static_cast<NodeId>(g.node_count());
  for (NodeId v = 0; v < n; ++v) {
    if (!in_members(members, v)) continue;
    const auto& node = g.node(v);
    out << "    <node id=\"n" << v << "\">"
        << "<data key=\"kind\">" << to_string(node.kind) << "</data>"
        << "<data key=\"key\">" << xml_escape(node.key) << "</data>";
    if (const auto it = groups.find(v); it != groups.end())
      out << "<data key=\"group_id\">" << xml_escape(it->second) << "</data>";
    out << "</node>\n";
  }
  for (NodeId v = 0; v < n; ++v) {
    if (!g.is_domain(v) || !in_members(members, v)) continue;
    for (const NodeId w : g.neighbors(v)) {
      if (!in_members(members, w)) continue;
      out << "    <edge source=\"n" << v << "\" target=\"n" << w << "\">"
          << "<data key=\"link_kind\">" << to_string(link_kind_for(g.node(w).kind)) << "</data>"
          << "</edge>\n";
    }
  }
  out << "  </graph>\n</graphml>\n";
}

void export_edge_csv(std::ostream& out, const EntityGraph& g,
                     std::optional<std::span<const NodeId>> members) {
  out << "source_key,source_kind,target_key,target_kind,link_kind\n";
  const auto n = static_cast<NodeId>(g.node_count());
  for (NodeId v = 0; v < n; ++v) {
    if (!g.is_domain(v) || !in_members(members, v)) continue;
    for (const NodeId w : g.neighbors(v)) {
      if (!in_members(members, w)) continue;
      const auto& target = g.node(w);
      out << csv_field(g.node(v).key) << ",domain," << csv_field(target.key) << ','
          << to_string(target.kind) << ',' << to_string(link_kind_for(target.kind)) << '\n';
    }
  }
}

std::vector<SiteRecord> import_edge_csv(std::istream& in) {
  std::map<std::string, SiteRecord> by_domain;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line_no == 1 && line.rfind("source_key,", 0) == 0) continue;
    const auto fields = split_csv_line(line);
    if (!fields || fields->size() != 5)
      throw InputError("edge csv line " + std::to_string(line_no) + ": expected 5 columns");
    const auto kind = entity_kind_from_string((*fields)[3]);
    if (!kind || *kind == EntityKind::Domain)
      throw InputError("edge csv line " + std::to_string(line_no) + ": bad target kind");
    auto& rec = by_domain[(*fields)[0]];
    if (rec.domain.empty()) {
      rec.domain = (*fields)[0];
      rec.site_host = (*fields)[0];
      rec.site_url = (*fields)[0];
      rec.observed_at = Date{1970, 1, 1};
    }
    switch (*kind) {
      case EntityKind::Email: rec.emails.push_back((*fields)[2]); break;
      case EntityKind::MatomoServer: rec.matomo_urls.push_back((*fields)[2]); break;
      case EntityKind::La51Id: rec.la51_ids.push_back((*fields)[2]); break;
      case EntityKind::Domain: break;
    }
  }
  std::vector<SiteRecord> records;
  records.reserve(by_domain.size());
  for (auto& [domain, rec] : by_domain) {
    std::sort(rec.emails.begin(), rec.emails.end());
    rec.emails.erase(std::unique(rec.emails.begin(), rec.emails.end()), rec.emails.end());
    std::sort(rec.matomo_urls.begin(), rec.matomo_urls.end());
    rec.matomo_urls.erase(std::unique(rec.matomo_urls.begin(), rec.matomo_urls.end()),
                          rec.matomo_urls.end());
    std::sort(rec.la51_ids.begin(), rec.la51_ids.end());
    rec.la51_ids.erase(std::unique(rec.la51_ids.begin(), rec.la51_ids.end()), rec.la51_ids.end());
    records.push_back(std::move(rec));
  }
  return records;
}

}  // namespace eclink
