#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "eclink/record.hpp"
#include "eclink/rng.hpp"

namespace eclink {

// Synthetic scam-ecosystem generator: planted actors with intra-actor entity
// reuse, optional single-entity bridges between actor pairs, uniform
// observation dates. Output is fully determined by the seed.
struct SynthConfig {
  std::string preset;  // "" or "jc3-shape"
  std::uint32_t actor_count = 10;
  TailDistribution domains_per_actor{8, 30, 1.3};
  TailDistribution sites_per_domain{1, 12, 1.4};
  std::uint32_t emails_per_actor = 4;   // shared pool; every domain links two of them
  double email_reuse_prob = 0.6;        // extra link into the pool vs a fresh leaf email
  double matomo_adoption_prob = 0.5;    // per actor
  std::uint32_t matomo_servers_per_actor = 2;
  double matomo_link_prob = 0.5;        // per domain of an adopting actor
  double la51_adoption_prob = 0.5;      // per actor
  double la51_link_prob = 0.4;          // per domain of an adopting actor
  std::uint32_t cross_actor_bridge_count = 0;  // joins disjoint actor pairs
  Date start_date{2022, 5, 20};
  Date end_date{2024, 12, 31};
  std::uint64_t seed = 1;
};

// Configuration whose scale mirrors the shapes this pipeline is sized for:
// ~105k domains on ~693k site records, ~125k entities, 8 large actors built
// from bridged sub-actors plus ~1,110 small ones.
SynthConfig jc3_shape_config(std::uint64_t seed = 1);

struct SynthGroundTruth {
  std::unordered_map<std::string, std::string> domain_actor;  // every domain labeled once
  std::vector<std::string> bridge_entities;                   // planted bridge emails
};

struct SynthOutput {
  std::vector<SiteRecord> records;
  SynthGroundTruth truth;
};

// Throws InputError on infeasible configs (probabilities outside [0,1],
// bridge count exceeding disjoint actor pairs, inverted date range).
SynthOutput generate(const SynthConfig& cfg);

struct PairwiseScores {
  double precision = 1.0;
  double recall = 1.0;
  double f1 = 1.0;
  bool exact_match = false;
  std::uint64_t true_pairs = 0;   // TP
  std::uint64_t false_pairs = 0;  // FP
  std::uint64_t missed_pairs = 0; // FN
};

// Pairwise clustering recovery over unordered domain pairs. Domains absent
// from predicted are scored as singletons; a predicted domain unknown to the
// truth throws InputError. Guards: precision (recall) is 1 when no predicted
// (true) pairs exist; f1 is 0 when precision + recall is 0.
PairwiseScores evaluate(const std::unordered_map<std::string, std::string>& predicted,
                        const SynthGroundTruth& truth);

}  // namespace eclink
