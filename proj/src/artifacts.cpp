#include "eclink/artifacts.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "eclink/defang.hpp"
#include "eclink/errors.hpp"

namespace eclink {

std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const char c : data) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string to_hex(std::uint64_t value) {
  char buf[24];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(value));
  return buf;
}

nlohmann::json PipelineConfig::to_json() const {
  nlohmann::json j;
  j["input"] = input;
  j["format"] = format;
  j["suffix_list"] = suffix_list;
  j["out_dir"] = out_dir;
  j["min_domains"] = min_domains;
  j["min_sites"] = min_sites;
  j["split_min_domains"] = split_min_domains;
  j["split_min_sites"] = split_min_sites;
  j["window_start"] = window_start;
  j["window_end"] = window_end;
  j["seed"] = seed;
  j["defang"] = defang;
  j["metric"] = metric;
  j["level"] = level;
  return j;
}

PipelineConfig PipelineConfig::from_json(const nlohmann::json& j) {
  PipelineConfig cfg;
  auto get = [&](const char* key, auto& field) {
    if (j.contains(key)) field = j.at(key).get<std::decay_t<decltype(field)>>();
  };
  get("input", cfg.input);
  get("format", cfg.format);
  get("suffix_list", cfg.suffix_list);
  get("out_dir", cfg.out_dir);
  get("min_domains", cfg.min_domains);
  get("min_sites", cfg.min_sites);
  get("split_min_domains", cfg.split_min_domains);
  get("split_min_sites", cfg.split_min_sites);
  get("window_start", cfg.window_start);
  get("window_end", cfg.window_end);
  get("seed", cfg.seed);
  get("defang", cfg.defang);
  get("metric", cfg.metric);
  get("level", cfg.level);
  return cfg;
}

PipelineConfig PipelineConfig::load(const std::string& path) {
  return from_json(read_json_file(path));
}

std::optional<CollectionWindow> PipelineConfig::window() const {
  if (window_start.empty() && window_end.empty()) return std::nullopt;
  if (window_start.empty() || window_end.empty())
    throw InputError("config: window_start and window_end must both be set");
  const auto start = Date::parse(window_start);
  const auto end = Date::parse(window_end);
  if (!start || !end) throw InputError("config: window dates must be YYYY-MM-DD");
  if (*end < *start) throw InputError("config: window_end before window_start");
  return CollectionWindow{*start, *end};
}

std::string PipelineConfig::hash() const { return to_hex(fnv1a64(to_json().dump())); }

nlohmann::json artifact_envelope(std::string_view artifact, const PublicSuffixList& psl,
                                 const PipelineConfig& cfg) {
  nlohmann::json j;
  j["schema_version"] = kSchemaVersion;
  j["artifact"] = artifact;
  j["psl_version"] = psl.version();
  j["config_hash"] = cfg.hash();
  return j;
}

void require_artifact(const nlohmann::json& j, std::string_view artifact) {
  if (!j.is_object() || j.value("artifact", "") != artifact)
    throw InputError("artifact file is not a '" + std::string(artifact) + "' artifact");
  if (j.value("schema_version", -1) != kSchemaVersion)
    throw InputError("unsupported artifact schema version");
}

void write_text_file(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write file: " + path.string());
  out << content;
  if (!out) throw InputError("write failed: " + path.string());
}

nlohmann::json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read file: " + path.string());
  const auto j = nlohmann::json::parse(in, nullptr, false);
  if (j.is_discarded()) throw InputError("malformed JSON in " + path.string());
  return j;
}

void write_json_file(const std::filesystem::path& path, const nlohmann::json& j) {
  write_text_file(path, j.dump(2) + "\n");
}

void write_records_artifact(const std::filesystem::path& path, std::vector<SiteRecord> records) {
  std::sort(records.begin(), records.end(), record_less);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write file: " + path.string());
  for (const auto& rec : records) out << record_to_jsonl(rec) << '\n';
  if (!out) throw InputError("write failed: " + path.string());
}

std::vector<SiteRecord> read_records_artifact(const std::filesystem::path& path,
                                              const PublicSuffixList& psl) {
  ParseOptions opts;
  opts.format = InputFormat::Jsonl;
  opts.suffix_list = &psl;
  auto result = parse_records_file(path.string(), opts);
  if (!result.errors.empty())
    throw InputError("records artifact " + path.string() + " is corrupt (line " +
                     std::to_string(result.errors.front().line_no) + ": " +
                     result.errors.front().reason + ")");
  return std::move(result.records);
}

namespace {

nlohmann::json members_json(const EntityGraph& g, std::span<const NodeId> members) {
  auto arr = nlohmann::json::array();
  for (const NodeId id : members) {
    const auto& node = g.node(id);
    arr.push_back({{"kind", to_string(node.kind)}, {"key", node.key}});
  }
  return arr;
}

std::vector<NodeId> members_from_json(const nlohmann::json& arr, const EntityGraph& g,
                                      const std::string& what) {
  std::vector<NodeId> members;
  members.reserve(arr.size());
  for (const auto& m : arr) {
    const auto kind = entity_kind_from_string(m.at("kind").get<std::string>());
    if (!kind) throw InputError(what + ": unknown entity kind");
    const auto id = g.find(*kind, m.at("key").get<std::string>());
    if (!id)
      throw InputError(what + ": member '" + m.at("key").get<std::string>() +
                       "' is not in the graph; re-run with the matching records artifact");
    members.push_back(*id);
  }
  std::sort(members.begin(), members.end());
  return members;
}

void fill_counts(nlohmann::json& j, std::size_t domains, std::size_t sites, std::size_t emails,
                 std::size_t matomo, std::size_t la51, const std::string& min_domain) {
  j["domain_count"] = domains;
  j["site_count"] = sites;
  j["email_count"] = emails;
  j["matomo_count"] = matomo;
  j["la51_count"] = la51;
  j["min_domain"] = min_domain;
}

}  // namespace

nlohmann::json group_to_json(const EntityGraph& g, const Group& group, bool with_members) {
  nlohmann::json j;
  j["group_id"] = group.id;
  fill_counts(j, group.domain_count, group.site_count, group.email_count, group.matomo_count,
              group.la51_count, group.min_domain);
  if (with_members) j["members"] = members_json(g, group.members);
  return j;
}

nlohmann::json subgroup_to_json(const EntityGraph& g, const Subgroup& sg, bool kept) {
  nlohmann::json j;
  j["subgroup_id"] = sg.id;
  j["parent_id"] = sg.parent_id;
  j["kept"] = kept;
  fill_counts(j, sg.domain_count, sg.site_count, sg.email_count, sg.matomo_count, sg.la51_count,
              sg.min_domain);
  j["removed_cut_entities"] = members_json(g, sg.removed_cut_entities);
  j["members"] = members_json(g, sg.members);
  return j;
}

void write_groups_artifact(const std::filesystem::path& path, const EntityGraph& g,
                           const std::vector<Group>& kept, const std::vector<Group>& dropped,
                           const PublicSuffixList& psl, const PipelineConfig& cfg) {
  auto j = artifact_envelope("groups", psl, cfg);
  j["min_domains"] = cfg.min_domains;
  j["min_sites"] = cfg.min_sites;
  auto kept_arr = nlohmann::json::array();
  for (const auto& group : kept) kept_arr.push_back(group_to_json(g, group, true));
  j["kept"] = std::move(kept_arr);

  // Dropped cells keep their statistics reportable without member rosters.
  std::vector<Group> dropped_sorted = dropped;
  std::sort(dropped_sorted.begin(), dropped_sorted.end(), [](const Group& a, const Group& b) {
    if (a.domain_count != b.domain_count) return a.domain_count > b.domain_count;
    if (a.site_count != b.site_count) return a.site_count > b.site_count;
    return a.min_domain < b.min_domain;
  });
  auto dropped_arr = nlohmann::json::array();
  std::size_t dd = 0, ds = 0, de = 0, dm = 0, dl = 0;
  for (const auto& group : dropped_sorted) {
    dropped_arr.push_back(group_to_json(g, group, false));
    dd += group.domain_count;
    ds += group.site_count;
    de += group.email_count;
    dm += group.matomo_count;
    dl += group.la51_count;
  }
  j["dropped"] = std::move(dropped_arr);
  j["dropped_totals"] = {{"cells", dropped.size()}, {"domain_count", dd}, {"site_count", ds},
                         {"email_count", de},       {"matomo_count", dm}, {"la51_count", dl}};
  write_json_file(path, j);
}

GroupsArtifact read_groups_artifact(const std::filesystem::path& path, const EntityGraph& g) {
  GroupsArtifact artifact;
  artifact.raw = read_json_file(path);
  require_artifact(artifact.raw, "groups");
  for (const auto& gj : artifact.raw.at("kept")) {
    Group group = make_group(g, members_from_json(gj.at("members"), g, "groups artifact"));
    group.id = gj.at("group_id").get<std::string>();
    artifact.kept.push_back(std::move(group));
  }
  return artifact;
}

void write_subgroups_artifact(const std::filesystem::path& path, const EntityGraph& g,
                              const RefineResult& refined, const PublicSuffixList& psl,
                              const PipelineConfig& cfg) {
  auto j = artifact_envelope("subgroups", psl, cfg);
  j["split_min_domains"] = cfg.split_min_domains;
  j["split_min_sites"] = cfg.split_min_sites;
  auto arr = nlohmann::json::array();
  for (const auto& sg : refined.first_stage) {
    const bool kept = std::any_of(refined.kept.begin(), refined.kept.end(),
                                  [&](const Subgroup& k) { return k.id == sg.id; });
    arr.push_back(subgroup_to_json(g, sg, kept));
  }
  j["first_stage"] = std::move(arr);
  write_json_file(path, j);
}

SubgroupsArtifact read_subgroups_artifact(const std::filesystem::path& path, const EntityGraph& g) {
  SubgroupsArtifact artifact;
  artifact.raw = read_json_file(path);
  require_artifact(artifact.raw, "subgroups");
  for (const auto& sj : artifact.raw.at("first_stage")) {
    Subgroup sg;
    sg.id = sj.at("subgroup_id").get<std::string>();
    sg.parent_id = sj.at("parent_id").get<std::string>();
    sg.members = members_from_json(sj.at("members"), g, "subgroups artifact");
    sg.removed_cut_entities = members_from_json(sj.at("removed_cut_entities"), g, "subgroups artifact");
    Group counts = make_group(g, sg.members);
    sg.domain_count = counts.domain_count;
    sg.site_count = counts.site_count;
    sg.email_count = counts.email_count;
    sg.matomo_count = counts.matomo_count;
    sg.la51_count = counts.la51_count;
    sg.min_domain = counts.min_domain;
    artifact.first_stage.push_back(sg);
    if (sj.value("kept", false)) artifact.kept.push_back(std::move(sg));
  }
  return artifact;
}

void write_timeseries_artifacts(const std::filesystem::path& csv_path,
                                const std::filesystem::path& json_path,
                                std::span<const MonthlySeries> series, SeriesMetric metric,
                                const PublicSuffixList& psl, const PipelineConfig& cfg) {
  std::ostringstream csv;
  write_series_csv(csv, series, metric);
  write_text_file(csv_path, csv.str());

  auto j = artifact_envelope("timeseries", psl, cfg);
  j["metric"] = to_string(metric);
  auto arr = nlohmann::json::array();
  for (const auto& s : series) {
    auto buckets = nlohmann::json::array();
    for (const auto& b : s.buckets) buckets.push_back({{"month", b.month.to_string()}, {"count", b.count}});
    arr.push_back({{"group_id", s.group_id}, {"buckets", std::move(buckets)}});
  }
  j["series"] = std::move(arr);
  write_json_file(json_path, j);
}

namespace {

std::string csv_quote(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string out = "\"";
  for (const char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace

void write_indicators_artifacts(const std::filesystem::path& json_path,
                                const std::filesystem::path& csv_path,
                                std::span<const GroupIndicators> indicators, bool defang_output,
                                const PublicSuffixList& psl, const PipelineConfig& cfg) {
  auto maybe_defang = [&](const std::string& s) { return defang_output ? defang(s) : s; };

  auto j = artifact_envelope("indicators", psl, cfg);
  auto arr = nlohmann::json::array();
  std::ostringstream csv;
  csv << "group_id,indicator_type,value,confidence\n";
  for (const auto& ind : indicators) {
    nlohmann::json gj;
    gj["group_id"] = ind.group_id;
    auto urls = nlohmann::json::array();
    for (const auto& u : ind.matomo_urls) {
      urls.push_back(maybe_defang(u));
      csv << ind.group_id << ",matomo_url," << csv_quote(maybe_defang(u)) << ",high\n";
    }
    auto hosts = nlohmann::json::array();
    for (const auto& h : ind.matomo_hosts) {
      hosts.push_back(maybe_defang(h));
      csv << ind.group_id << ",matomo_host," << csv_quote(maybe_defang(h)) << ",high\n";
    }
    auto ids = nlohmann::json::array();
    for (const auto& id : ind.la51_ids) {
      ids.push_back(id);
      csv << ind.group_id << ",la51_id," << csv_quote(id) << ",low\n";
    }
    gj["matomo_urls"] = std::move(urls);
    gj["matomo_hosts"] = std::move(hosts);
    gj["la51_ids"] = std::move(ids);
    gj["la51_low_confidence"] = ind.la51_low_confidence;
    arr.push_back(std::move(gj));
  }
  j["groups"] = std::move(arr);
  write_json_file(json_path, j);
  write_text_file(csv_path, csv.str());
}

nlohmann::json attribution_to_json(const AttributionResult& r) {
  nlohmann::json j;
  j["query_url"] = r.query_url;
  j["match_level"] = to_string(r.match_level);
  if (r.match_level != MatchLevel::None) {
    j["group_id"] = r.group_id;
    j["matched_key"] = r.matched_key;
  }
  j["evidence_count"] = r.evidence_count;
  j["assignment_level"] = r.assignment_level;
  return j;
}

void write_truth_artifact(const std::filesystem::path& path, const SynthGroundTruth& truth) {
  std::vector<std::pair<std::string, std::string>> rows(truth.domain_actor.begin(),
                                                        truth.domain_actor.end());
  std::sort(rows.begin(), rows.end());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write file: " + path.string());
  for (const auto& [domain, actor] : rows)
    out << nlohmann::json{{"domain", domain}, {"actor", actor}}.dump() << '\n';
}

SynthGroundTruth read_truth_artifact(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read truth file: " + path.string());
  SynthGroundTruth truth;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.contains("domain") || !j.contains("actor"))
      throw InputError("malformed truth line " + std::to_string(line_no) + " in " + path.string());
    truth.domain_actor[j.at("domain").get<std::string>()] = j.at("actor").get<std::string>();
  }
  return truth;
}

}  // namespace eclink
