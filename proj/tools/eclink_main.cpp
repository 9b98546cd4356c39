// eclink: entity-link analysis pipeline for fake e-commerce site attribution.
// Subcommands cover the full flow: synth/ingest -> group -> refine ->
// timeseries / attribute / indicators / evaluate / export. Every command
// reads and writes plain JSON artifacts in the output directory and is
// re-runnable: identical inputs produce byte-identical outputs.

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "eclink/artifacts.hpp"
#include "eclink/errors.hpp"
#include "eclink/export.hpp"

namespace fs = std::filesystem;
using namespace eclink;

namespace {

struct Paths {
  fs::path out;
  fs::path records() const { return out / "records.norm.jsonl"; }
  fs::path ingest_summary() const { return out / "ingest.json"; }
  fs::path groups() const { return out / "groups.json"; }
  fs::path subgroups() const { return out / "subgroups.json"; }
  fs::path timeseries_csv() const { return out / "timeseries.csv"; }
  fs::path timeseries_json() const { return out / "timeseries.json"; }
  fs::path indicators_json() const { return out / "indicators.json"; }
  fs::path indicators_csv() const { return out / "indicators.csv"; }
  fs::path attribution() const { return out / "attribution.json"; }
  fs::path synth_records() const { return out / "records.jsonl"; }
  fs::path truth() const { return out / "truth.jsonl"; }
  fs::path synth_summary() const { return out / "synth.json"; }
  fs::path evaluation() const { return out / "evaluation.json"; }
  fs::path graphml() const { return out / "graph.graphml"; }
  fs::path edges() const { return out / "edges.csv"; }
};

void require_file(const fs::path& path, const std::string& producer) {
  if (!fs::exists(path))
    throw InputError("missing " + path.string() + "; run `eclink " + producer + "` first");
}

const PublicSuffixList& load_psl(const PipelineConfig& cfg) {
  static std::optional<PublicSuffixList> from_file;
  if (cfg.suffix_list.empty()) return PublicSuffixList::bundled();
  if (!from_file) from_file = PublicSuffixList::from_file(cfg.suffix_list);
  return *from_file;
}

std::vector<SiteRecord> load_records(const Paths& paths, const PublicSuffixList& psl) {
  require_file(paths.records(), "ingest");
  return read_records_artifact(paths.records(), psl);
}

CollectionWindow effective_window(const PipelineConfig& cfg, std::span<const SiteRecord> records) {
  if (const auto w = cfg.window()) return *w;
  if (records.empty()) return {Date{1970, 1, 1}, Date{1970, 1, 1}};
  Date lo = records.front().observed_at, hi = records.front().observed_at;
  for (const auto& rec : records) {
    lo = std::min(lo, rec.observed_at);
    hi = std::max(hi, rec.observed_at);
  }
  return {lo, hi};
}

struct LevelCells {
  std::vector<Group> groups;
  std::vector<Subgroup> subgroups;
  bool use_subgroups = false;
};

LevelCells load_cells(const PipelineConfig& cfg, const Paths& paths, const EntityGraph& graph) {
  LevelCells cells;
  require_file(paths.groups(), "group");
  cells.groups = read_groups_artifact(paths.groups(), graph).kept;
  const bool have_subgroups = fs::exists(paths.subgroups());
  if (cfg.level == "subgroup" && !have_subgroups)
    throw InputError("missing " + paths.subgroups().string() + "; run `eclink refine` first");
  cells.use_subgroups = cfg.level != "group" && have_subgroups;
  if (cells.use_subgroups)
    cells.subgroups = read_subgroups_artifact(paths.subgroups(), graph).kept;
  return cells;
}

GroupAssignment cell_assignment(const EntityGraph& graph, const LevelCells& cells) {
  return cells.use_subgroups ? assignment_from_subgroups(graph, cells.subgroups)
                             : assignment_from_groups(graph, cells.groups);
}

nlohmann::json synth_config_to_json(const SynthConfig& cfg) {
  nlohmann::json j;
  j["preset"] = cfg.preset;
  j["actor_count"] = cfg.actor_count;
  j["domains_per_actor"] = {{"min", cfg.domains_per_actor.min_value},
                            {"max", cfg.domains_per_actor.max_value},
                            {"alpha", cfg.domains_per_actor.alpha}};
  j["sites_per_domain"] = {{"min", cfg.sites_per_domain.min_value},
                           {"max", cfg.sites_per_domain.max_value},
                           {"alpha", cfg.sites_per_domain.alpha}};
  j["emails_per_actor"] = cfg.emails_per_actor;
  j["email_reuse_prob"] = cfg.email_reuse_prob;
  j["matomo_adoption_prob"] = cfg.matomo_adoption_prob;
  j["matomo_servers_per_actor"] = cfg.matomo_servers_per_actor;
  j["matomo_link_prob"] = cfg.matomo_link_prob;
  j["la51_adoption_prob"] = cfg.la51_adoption_prob;
  j["la51_link_prob"] = cfg.la51_link_prob;
  j["cross_actor_bridge_count"] = cfg.cross_actor_bridge_count;
  j["start_date"] = cfg.start_date.to_string();
  j["end_date"] = cfg.end_date.to_string();
  j["seed"] = cfg.seed;
  return j;
}

SynthConfig synth_config_from_json(const nlohmann::json& j) {
  SynthConfig cfg;
  auto get = [&](const char* key, auto& field) {
    if (j.contains(key)) field = j.at(key).get<std::decay_t<decltype(field)>>();
  };
  get("preset", cfg.preset);
  get("actor_count", cfg.actor_count);
  auto tail = [&](const char* key, TailDistribution& dist) {
    if (!j.contains(key)) return;
    const auto& t = j.at(key);
    dist.min_value = t.value("min", dist.min_value);
    dist.max_value = t.value("max", dist.max_value);
    dist.alpha = t.value("alpha", dist.alpha);
  };
  tail("domains_per_actor", cfg.domains_per_actor);
  tail("sites_per_domain", cfg.sites_per_domain);
  get("emails_per_actor", cfg.emails_per_actor);
  get("email_reuse_prob", cfg.email_reuse_prob);
  get("matomo_adoption_prob", cfg.matomo_adoption_prob);
  get("matomo_servers_per_actor", cfg.matomo_servers_per_actor);
  get("matomo_link_prob", cfg.matomo_link_prob);
  get("la51_adoption_prob", cfg.la51_adoption_prob);
  get("la51_link_prob", cfg.la51_link_prob);
  get("cross_actor_bridge_count", cfg.cross_actor_bridge_count);
  if (j.contains("start_date")) {
    const auto d = Date::parse(j.at("start_date").get<std::string>());
    if (!d) throw InputError("synth config: bad start_date");
    cfg.start_date = *d;
  }
  if (j.contains("end_date")) {
    const auto d = Date::parse(j.at("end_date").get<std::string>());
    if (!d) throw InputError("synth config: bad end_date");
    cfg.end_date = *d;
  }
  get("seed", cfg.seed);
  return cfg;
}

// --config must be applied before the regular parse so flags and env vars
// override it.
std::string prescan_config_path(int argc, char** argv) {
  for (int i = 1; i < argc; ++i) {
    const std::string_view arg = argv[i];
    if (arg == "--config" && i + 1 < argc) return argv[i + 1];
    if (arg.rfind("--config=", 0) == 0) return std::string(arg.substr(9));
  }
  if (const char* env = std::getenv("ECLINK_CONFIG")) return env;
  return {};
}

int run(int argc, char** argv) {
  PipelineConfig cfg;
  if (const auto config_path = prescan_config_path(argc, argv); !config_path.empty())
    cfg = PipelineConfig::load(config_path);

  CLI::App app{"entity-link analysis for fake EC site attribution"};
  app.require_subcommand(1);
  std::string config_path_opt;
  app.add_option("--config", config_path_opt, "pipeline config JSON (applied before flags)");
  app.add_option("--out", cfg.out_dir, "artifact directory")->envname("ECLINK_OUT");
  app.add_option("--suffix-list", cfg.suffix_list, "public suffix list file (default: bundled)")
      ->envname("ECLINK_SUFFIX_LIST");
  app.add_option("--min-domains", cfg.min_domains, "group filter: minimum domains")
      ->envname("ECLINK_MIN_DOMAINS");
  app.add_option("--min-sites", cfg.min_sites, "group filter: minimum sites")
      ->envname("ECLINK_MIN_SITES");
  app.add_option("--split-min-domains", cfg.split_min_domains, "refine: first-stage domain gate")
      ->envname("ECLINK_SPLIT_MIN_DOMAINS");
  app.add_option("--split-min-sites", cfg.split_min_sites, "refine: second-stage site gate")
      ->envname("ECLINK_SPLIT_MIN_SITES");
  app.add_option("--window-start", cfg.window_start, "collection window start (YYYY-MM-DD)")
      ->envname("ECLINK_WINDOW_START");
  app.add_option("--window-end", cfg.window_end, "collection window end (YYYY-MM-DD)")
      ->envname("ECLINK_WINDOW_END");
  app.add_option("--seed", cfg.seed, "generator seed")->envname("ECLINK_SEED");
  app.add_flag("--defang,!--no-defang", cfg.defang, "defang hostnames in reports (default on)")
      ->envname("ECLINK_DEFANG");
  app.add_option("--level", cfg.level, "partition level for reports: group|subgroup|auto")
      ->check(CLI::IsMember({"group", "subgroup", "auto"}))
      ->envname("ECLINK_LEVEL");

  // ingest
  auto* c_ingest = app.add_subcommand("ingest", "parse raw records into the normalized artifact");
  c_ingest->add_option("--input", cfg.input, "records file (jsonl or csv)");
  c_ingest->add_option("--format", cfg.format, "input format")->check(CLI::IsMember({"jsonl", "csv"}));
  c_ingest->callback([&] {
    const Paths paths{cfg.out_dir};
    if (cfg.input.empty()) throw InputError("ingest: --input is required");
    const auto& psl = load_psl(cfg);
    ParseOptions opts;
    const auto format = input_format_from_string(cfg.format);
    if (!format) throw InputError("ingest: unknown format '" + cfg.format + "'");
    opts.format = *format;
    opts.suffix_list = &psl;
    opts.window = cfg.window();
    auto result = parse_records_file(cfg.input, opts);

    fs::create_directories(paths.out);
    const auto graph = EntityGraph::build(result.records);
    const auto s = stats(graph);
    auto j = artifact_envelope("ingest", psl, cfg);
    j["input"] = cfg.input;
    j["format"] = cfg.format;
    j["record_count"] = result.records.size();
    j["error_count"] = result.errors.size();
    j["warning_count"] = result.warnings.size();
    auto errors = nlohmann::json::array();
    for (std::size_t i = 0; i < result.errors.size() && i < 1000; ++i)
      errors.push_back({{"line", result.errors[i].line_no}, {"reason", result.errors[i].reason}});
    j["errors"] = std::move(errors);
    j["errors_truncated"] = result.errors.size() > 1000;
    j["stats"] = {{"domains", s.domains},
                  {"emails", s.emails},
                  {"matomo_servers", s.matomo_servers},
                  {"la51_ids", s.la51_ids},
                  {"total_entities", s.total_entities},
                  {"total_sites", s.total_sites}};
    write_json_file(paths.ingest_summary(), j);
    write_records_artifact(paths.records(), std::move(result.records));
    std::cout << "ingest: " << j["record_count"] << " records, " << j["error_count"]
              << " errors, " << j["warning_count"] << " warnings -> " << paths.records().string()
              << "\n";
  });

  // group
  auto* c_group = app.add_subcommand("group", "detect and filter preliminary groups");
  c_group->callback([&] {
    const Paths paths{cfg.out_dir};
    const auto& psl = load_psl(cfg);
    const auto records = load_records(paths, psl);
    const auto graph = EntityGraph::build(records);
    const auto partition = connected_components(graph);
    auto outcome = filter_groups(partition, cfg.filter_config());
    const auto kept = assign_group_ids(std::move(outcome.kept));
    fs::create_directories(paths.out);
    write_groups_artifact(paths.groups(), graph, kept, outcome.dropped, psl, cfg);
    std::cout << "group: " << partition.cells.size() << " cells, " << kept.size() << " kept, "
              << outcome.dropped.size() << " dropped -> " << paths.groups().string() << "\n";
  });

  // refine
  auto* c_refine = app.add_subcommand("refine", "split weakly connected groups into subgroups");
  c_refine->callback([&] {
    const Paths paths{cfg.out_dir};
    const auto& psl = load_psl(cfg);
    const auto records = load_records(paths, psl);
    require_file(paths.groups(), "group");
    const auto graph = EntityGraph::build(records);
    const auto groups = read_groups_artifact(paths.groups(), graph);
    const auto refined = refine_groups(graph, groups.kept, cfg.split_policy());
    write_subgroups_artifact(paths.subgroups(), graph, refined, psl, cfg);
    std::cout << "refine: " << groups.kept.size() << " groups -> " << refined.first_stage.size()
              << " subgroups, " << refined.kept.size() << " kept -> " << paths.subgroups().string()
              << "\n";
  });

  // timeseries
  auto* c_ts = app.add_subcommand("timeseries", "monthly activity per group");
  std::string metric_name;
  c_ts->add_option("--metric", metric_name, "domain|email|matomo|la51 (default domain)")
      ->check(CLI::IsMember({"domain", "email", "matomo", "la51"}));
  c_ts->callback([&] {
    const Paths paths{cfg.out_dir};
    if (!metric_name.empty()) cfg.metric = metric_name;
    const auto metric = series_metric_from_string(cfg.metric);
    if (!metric) throw InputError("timeseries: unknown metric '" + cfg.metric + "'");
    const auto& psl = load_psl(cfg);
    const auto records = load_records(paths, psl);
    const auto graph = EntityGraph::build(records);
    const auto cells = load_cells(cfg, paths, graph);
    const auto window = effective_window(cfg, records);
    const auto outcome = bucket_by_month(records, cell_assignment(graph, cells), window, *metric);
    const auto series = trim_partial_months(outcome.series, window);
    write_timeseries_artifacts(paths.timeseries_csv(), paths.timeseries_json(), series, *metric,
                               psl, cfg);
    std::cout << "timeseries: " << series.size() << " series over "
              << window.start_date.to_string() << ".." << window.end_date.to_string() << " ("
              << outcome.out_of_window << " out-of-window) -> " << paths.timeseries_csv().string()
              << "\n";
  });

  // attribute
  auto* c_attr = app.add_subcommand("attribute", "attribute URLs to identified groups");
  std::vector<std::string> urls;
  bool urls_from_stdin = false;
  c_attr->add_option("urls", urls, "URLs to attribute");
  c_attr->add_flag("--stdin", urls_from_stdin, "read URLs from stdin, one per line");
  c_attr->callback([&] {
    const Paths paths{cfg.out_dir};
    if (urls_from_stdin) {
      std::string line;
      while (std::getline(std::cin, line))
        if (!line.empty()) urls.push_back(line);
    }
    if (urls.empty()) throw InputError("attribute: no URLs given");
    const auto& psl = load_psl(cfg);
    const auto records = load_records(paths, psl);
    const auto graph = EntityGraph::build(records);
    const auto cells = load_cells(cfg, paths, graph);
    const AttributionIndex index =
        cells.use_subgroups ? AttributionIndex(graph, cells.subgroups)
                            : AttributionIndex(graph, cells.groups);
    auto j = artifact_envelope("attribution", psl, cfg);
    auto arr = nlohmann::json::array();
    for (const auto& url : urls) {
      const auto result = index.attribute(url, psl, cfg.defang);
      arr.push_back(attribution_to_json(result));
      std::cout << result.query_url << "\t" << to_string(result.match_level) << "\t"
                << (result.match_level == MatchLevel::None ? "-" : result.group_id)
                << "\tevidence=" << result.evidence_count << "\n";
    }
    j["results"] = std::move(arr);
    write_json_file(paths.attribution(), j);
  });

  // indicators
  auto* c_ind = app.add_subcommand("indicators", "per-group infrastructure indicators");
  c_ind->callback([&] {
    const Paths paths{cfg.out_dir};
    const auto& psl = load_psl(cfg);
    const auto records = load_records(paths, psl);
    const auto graph = EntityGraph::build(records);
    const auto cells = load_cells(cfg, paths, graph);
    const auto indicators = cells.use_subgroups
                                ? matomo_indicators(graph, std::span<const Subgroup>(cells.subgroups))
                                : matomo_indicators(graph, std::span<const Group>(cells.groups));
    write_indicators_artifacts(paths.indicators_json(), paths.indicators_csv(), indicators,
                               cfg.defang, psl, cfg);
    std::cout << "indicators: " << indicators.size() << " groups -> "
              << paths.indicators_json().string() << "\n";
  });

  // synth
  auto* c_synth = app.add_subcommand("synth", "generate a synthetic dataset with ground truth");
  std::string preset, synth_config_path;
  std::uint32_t actors = 0, bridges_opt = 0;
  bool bridges_set = false;
  c_synth->add_option("--preset", preset, "named preset (jc3-shape)");
  c_synth->add_option("--synth-config", synth_config_path, "full generator config JSON");
  c_synth->add_option("--actors", actors, "actor count");
  c_synth->add_option("--bridges", bridges_opt, "planted cross-actor bridges")
      ->each([&](const std::string&) { bridges_set = true; });
  c_synth->callback([&] {
    const Paths paths{cfg.out_dir};
    SynthConfig synth_cfg;
    if (!synth_config_path.empty()) synth_cfg = synth_config_from_json(read_json_file(synth_config_path));
    if (!preset.empty()) synth_cfg.preset = preset;
    if (actors > 0) synth_cfg.actor_count = actors;
    if (bridges_set) synth_cfg.cross_actor_bridge_count = bridges_opt;
    synth_cfg.seed = cfg.seed;
    if (const auto w = cfg.window()) {
      synth_cfg.start_date = w->start_date;
      synth_cfg.end_date = w->end_date;
    }
    const auto output = generate(synth_cfg);

    fs::create_directories(paths.out);
    std::ofstream recs(paths.synth_records(), std::ios::binary);
    if (!recs) throw InputError("cannot write " + paths.synth_records().string());
    for (const auto& rec : output.records) recs << record_to_jsonl(rec) << '\n';
    recs.close();
    write_truth_artifact(paths.truth(), output.truth);

    const auto& psl = load_psl(cfg);
    auto j = artifact_envelope("synth", psl, cfg);
    j["generator_config"] = synth_config_to_json(synth_cfg);
    j["record_count"] = output.records.size();
    j["domain_count"] = output.truth.domain_actor.size();
    j["bridge_entities"] = output.truth.bridge_entities;
    write_json_file(paths.synth_summary(), j);
    std::cout << "synth: " << output.records.size() << " records over "
              << output.truth.domain_actor.size() << " domains -> "
              << paths.synth_records().string() << "\n";
  });

  // evaluate
  auto* c_eval = app.add_subcommand("evaluate", "score recovered groups against planted truth");
  std::string truth_path;
  c_eval->add_option("--truth", truth_path, "truth.jsonl path (default: <out>/truth.jsonl)");
  c_eval->callback([&] {
    const Paths paths{cfg.out_dir};
    const auto& psl = load_psl(cfg);
    const fs::path tpath = truth_path.empty() ? paths.truth() : fs::path(truth_path);
    require_file(tpath, "synth");
    const auto truth = read_truth_artifact(tpath);
    const auto records = load_records(paths, psl);
    const auto graph = EntityGraph::build(records);
    const auto cells = load_cells(cfg, paths, graph);
    GroupAssignment predicted = cell_assignment(graph, cells);
    const auto scores = evaluate({predicted.begin(), predicted.end()}, truth);
    auto j = artifact_envelope("evaluation", psl, cfg);
    j["level"] = cells.use_subgroups ? "subgroup" : "group";
    j["pairwise_precision"] = scores.precision;
    j["pairwise_recall"] = scores.recall;
    j["pairwise_f1"] = scores.f1;
    j["exact_match"] = scores.exact_match;
    j["true_pairs"] = scores.true_pairs;
    j["false_pairs"] = scores.false_pairs;
    j["missed_pairs"] = scores.missed_pairs;
    write_json_file(paths.evaluation(), j);
    std::cout << "evaluate: precision=" << scores.precision << " recall=" << scores.recall
              << " f1=" << scores.f1 << " exact_match=" << (scores.exact_match ? "true" : "false")
              << "\n";
  });

  // export
  auto* c_export = app.add_subcommand("export", "GraphML + edge CSV for external link analysis");
  std::string slice_group;
  std::string graphml_path, edges_path;
  c_export->add_option("--group", slice_group, "restrict the export to one group/subgroup");
  c_export->add_option("--graphml", graphml_path, "GraphML output path");
  c_export->add_option("--edges", edges_path, "edge CSV output path");
  c_export->callback([&] {
    const Paths paths{cfg.out_dir};
    const auto& psl = load_psl(cfg);
    const auto records = load_records(paths, psl);
    const auto graph = EntityGraph::build(records);

    NodeGroupMap node_groups;
    std::optional<std::vector<NodeId>> slice;
    if (fs::exists(paths.groups())) {
      const auto cells = load_cells(cfg, paths, graph);
      auto note = [&](const auto& cell_list) {
        for (const auto& cell : cell_list) {
          for (const NodeId id : cell.members) node_groups[id] = cell.id;
          if (!slice_group.empty() && cell.id == slice_group)
            slice = std::vector<NodeId>(cell.members.begin(), cell.members.end());
        }
      };
      note(cells.groups);
      if (cells.use_subgroups) {
        node_groups.clear();
        note(cells.subgroups);
      }
      if (!slice_group.empty() && !slice) {
        note(cells.groups);  // a parent id also names a valid slice
        if (!slice) throw InputError("export: unknown group '" + slice_group + "'");
      }
    } else if (!slice_group.empty()) {
      throw InputError("export: --group needs groups.json; run `eclink group` first");
    }

    fs::create_directories(paths.out);
    const fs::path gpath = graphml_path.empty() ? paths.graphml() : fs::path(graphml_path);
    const fs::path epath = edges_path.empty() ? paths.edges() : fs::path(edges_path);
    std::ostringstream gml, csv;
    std::optional<std::span<const NodeId>> member_span;
    if (slice) member_span = std::span<const NodeId>(*slice);
    export_graphml(gml, graph, node_groups, member_span);
    export_edge_csv(csv, graph, member_span);
    write_text_file(gpath, gml.str());
    write_text_file(epath, csv.str());
    std::cout << "export: " << graph.node_count() << " nodes, " << graph.edge_count()
              << " edges -> " << gpath.string() << ", " << epath.string() << "\n";
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  }
}
