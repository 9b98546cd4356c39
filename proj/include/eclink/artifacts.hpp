#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "eclink/attribution.hpp"
#include "eclink/ingest.hpp"
#include "eclink/synth.hpp"
#include "eclink/timeseries.hpp"

namespace eclink {

inline constexpr int kSchemaVersion = 1;

std::uint64_t fnv1a64(std::string_view data);
std::string to_hex(std::uint64_t value);

// Everything a pipeline run needs; round-trips losslessly through JSON.
struct PipelineConfig {
  std::string input;
  std::string format = "jsonl";
  std::string suffix_list;  // empty = bundled snapshot
  std::string out_dir = "out";
  std::size_t min_domains = 200;
  std::size_t min_sites = 2000;
  std::size_t split_min_domains = 200;
  std::size_t split_min_sites = 2000;
  std::string window_start;  // ISO dates; empty = derive from records
  std::string window_end;
  std::uint64_t seed = 1;
  bool defang = true;
  std::string metric = "domain";
  std::string level = "auto";  // group | subgroup | auto

  nlohmann::json to_json() const;
  static PipelineConfig from_json(const nlohmann::json& j);
  static PipelineConfig load(const std::string& path);

  FilterConfig filter_config() const { return {min_domains, min_sites}; }
  SplitPolicy split_policy() const {
    SplitPolicy p;
    p.min_domains = split_min_domains;
    p.min_sites = split_min_sites;
    return p;
  }
  std::optional<CollectionWindow> window() const;  // throws InputError on bad dates
  std::string hash() const;                        // over the canonical JSON form
};

// Envelope shared by all JSON artifacts: schema version, artifact name,
// suffix-snapshot version and config hash. Never wall-clock time.
nlohmann::json artifact_envelope(std::string_view artifact, const PublicSuffixList& psl,
                                 const PipelineConfig& cfg);
void require_artifact(const nlohmann::json& j, std::string_view artifact);

void write_text_file(const std::filesystem::path& path, std::string_view content);
nlohmann::json read_json_file(const std::filesystem::path& path);  // throws InputError
void write_json_file(const std::filesystem::path& path, const nlohmann::json& j);

// records.norm.jsonl: canonically sorted normalized records.
void write_records_artifact(const std::filesystem::path& path, std::vector<SiteRecord> records);
std::vector<SiteRecord> read_records_artifact(const std::filesystem::path& path,
                                              const PublicSuffixList& psl);

nlohmann::json group_to_json(const EntityGraph& g, const Group& group, bool with_members);
nlohmann::json subgroup_to_json(const EntityGraph& g, const Subgroup& sg, bool kept);

struct GroupsArtifact {
  std::vector<Group> kept;
  nlohmann::json raw;
};
void write_groups_artifact(const std::filesystem::path& path, const EntityGraph& g,
                           const std::vector<Group>& kept, const std::vector<Group>& dropped,
                           const PublicSuffixList& psl, const PipelineConfig& cfg);
GroupsArtifact read_groups_artifact(const std::filesystem::path& path, const EntityGraph& g);

struct SubgroupsArtifact {
  std::vector<Subgroup> first_stage;
  std::vector<Subgroup> kept;
  nlohmann::json raw;
};
void write_subgroups_artifact(const std::filesystem::path& path, const EntityGraph& g,
                              const RefineResult& refined, const PublicSuffixList& psl,
                              const PipelineConfig& cfg);
SubgroupsArtifact read_subgroups_artifact(const std::filesystem::path& path, const EntityGraph& g);

void write_timeseries_artifacts(const std::filesystem::path& csv_path,
                                const std::filesystem::path& json_path,
                                std::span<const MonthlySeries> series, SeriesMetric metric,
                                const PublicSuffixList& psl, const PipelineConfig& cfg);

void write_indicators_artifacts(const std::filesystem::path& json_path,
                                const std::filesystem::path& csv_path,
                                std::span<const GroupIndicators> indicators, bool defang_output,
                                const PublicSuffixList& psl, const PipelineConfig& cfg);

nlohmann::json attribution_to_json(const AttributionResult& r);

void write_truth_artifact(const std::filesystem::path& path, const SynthGroundTruth& truth);
SynthGroundTruth read_truth_artifact(const std::filesystem::path& path);

}  // namespace eclink
