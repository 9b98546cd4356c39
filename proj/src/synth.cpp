#include "eclink/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>

#include "eclink/errors.hpp"

namespace eclink {

namespace {

constexpr const char* kTlds[] = {"shop", "top", "xyz", "online", "site", "store", "icu", "club"};

std::string token(Rng& rng, std::size_t min_len = 5, std::size_t max_len = 8) {
  const std::size_t len = min_len + rng.below(max_len - min_len + 1);
  std::string out;
  out.reserve(len);
  for (std::size_t i = 0; i < len; ++i) out.push_back(static_cast<char>('a' + rng.below(26)));
  return out;
}

std::string actor_label(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "A%04zu", index + 1);
  return buf;
}

// Everything one actor will stamp onto its records.
struct ActorPlan {
  std::uint32_t domains = 1;
  std::uint64_t total_sites = 0;  // 0 => sample sites_dist per domain
  TailDistribution sites_dist{1, 12, 1.4};
  std::uint32_t email_pool = 2;
  double extra_email_prob = 0.0;  // third link into the pool
  double fresh_email_prob = 0.0;  // leaf email minted for one domain
  std::uint32_t matomo_urls = 0;
  double matomo_link_prob = 0.6;
  std::vector<std::string> matomo_overrides;  // explicit URLs, e.g. shared hosts
  std::uint32_t la51_target = 0;              // distinct ids minted in this actor
  double la51_reuse_prob = 0.25;
};

struct BridgePlan {
  std::uint32_t a = 0;
  std::uint32_t b = 0;
};

struct DomainSpec {
  std::string name;
  std::uint32_t sites = 1;
  std::vector<std::string> emails;
  std::vector<std::string> matomo_urls;
  std::vector<std::string> la51_ids;
};

void validate_config(const SynthConfig& cfg) {
  auto prob = [](double p, const char* name) {
    if (!(p >= 0.0 && p <= 1.0)) throw InputError(std::string("synth config: ") + name + " outside [0,1]");
  };
  if (cfg.actor_count == 0) throw InputError("synth config: actor_count must be positive");
  prob(cfg.email_reuse_prob, "email_reuse_prob");
  prob(cfg.matomo_adoption_prob, "matomo_adoption_prob");
  prob(cfg.matomo_link_prob, "matomo_link_prob");
  prob(cfg.la51_adoption_prob, "la51_adoption_prob");
  prob(cfg.la51_link_prob, "la51_link_prob");
  if (cfg.domains_per_actor.min_value == 0) throw InputError("synth config: domains_per_actor.min_value must be >= 1");
  if (cfg.domains_per_actor.min_value > cfg.domains_per_actor.max_value ||
      cfg.sites_per_domain.min_value > cfg.sites_per_domain.max_value)
    throw InputError("synth config: distribution min above max");
  if (cfg.sites_per_domain.min_value == 0) throw InputError("synth config: sites_per_domain.min_value must be >= 1");
  if (cfg.end_date < cfg.start_date) throw InputError("synth config: end_date before start_date");
  if (static_cast<std::uint64_t>(cfg.cross_actor_bridge_count) * 2 > cfg.actor_count)
    throw InputError("synth config: more bridges than disjoint actor pairs");
}

std::vector<DomainSpec> build_actor(const ActorPlan& plan, std::size_t actor_index, Rng rng) {
  const std::uint32_t n = plan.domains;
  const std::string word = token(rng);
  const std::string tld = kTlds[actor_index % std::size(kTlds)];
  const std::string ai = std::to_string(actor_index);

  const std::uint32_t pool = std::max<std::uint32_t>(1, plan.email_pool);
  auto pool_email = [&](std::uint32_t e) { return "u" + ai + "-" + std::to_string(e) + "@" + word + "mail." + tld; };

  std::vector<std::string> matomo;
  for (std::uint32_t k = 0; k < plan.matomo_urls; ++k) {
    if (k < plan.matomo_overrides.size())
      matomo.push_back(plan.matomo_overrides[k]);
    else
      matomo.push_back("http://mt" + ai + "-" + std::to_string(k) + ".xyz/piwik.php");
  }

  std::vector<DomainSpec> specs(n);
  std::vector<std::string> la51_minted;

  // Exact per-domain site counts by largest remainder when a total is pinned.
  std::uint64_t base = 0, extra = 0;
  if (plan.total_sites > 0) {
    base = plan.total_sites / n;
    extra = plan.total_sites % n;
  }

  for (std::uint32_t j = 0; j < n; ++j) {
    DomainSpec& d = specs[j];
    d.name = word + "-" + ai + "-" + std::to_string(j) + "." + tld;
    d.sites = plan.total_sites > 0 ? static_cast<std::uint32_t>(base + (j < extra ? 1 : 0))
                                   : sample_tail(rng, plan.sites_dist);

    // Two links into the shared pool form a ring through the actor's
    // domains, so no single entity removal can shatter the actor.
    d.emails.push_back(pool_email(j % pool));
    if (pool > 1) d.emails.push_back(pool_email((j + 1) % pool));
    if (plan.extra_email_prob > 0 && rng.chance(plan.extra_email_prob))
      d.emails.push_back(pool_email(static_cast<std::uint32_t>(rng.below(pool))));
    if (plan.fresh_email_prob > 0 && rng.chance(plan.fresh_email_prob))
      d.emails.push_back("f" + ai + "-" + std::to_string(j) + "@" + word + "mail." + tld);

    if (!matomo.empty()) {
      const std::uint32_t slot = j % static_cast<std::uint32_t>(matomo.size());
      // Anchor domains guarantee every URL appears at least once.
      if (j < matomo.size() || rng.chance(plan.matomo_link_prob)) d.matomo_urls.push_back(matomo[slot]);
    }

    const std::uint64_t target = std::min<std::uint64_t>(plan.la51_target, n);
    if (target > 0) {
      const bool mint = (static_cast<std::uint64_t>(j) * target / n) !=
                        ((static_cast<std::uint64_t>(j) + 1) * target / n);
      if (mint) {
        la51_minted.push_back("51-" + ai + "-" + std::to_string(la51_minted.size()));
        d.la51_ids.push_back(la51_minted.back());
      } else if (!la51_minted.empty() && rng.chance(plan.la51_reuse_prob)) {
        d.la51_ids.push_back(la51_minted[rng.below(la51_minted.size())]);
      }
    }
  }
  return specs;
}

SynthOutput generate_from_plans(const std::vector<ActorPlan>& plans,
                                const std::vector<BridgePlan>& bridges, const Date& start,
                                const Date& end, std::uint64_t seed) {
  const Rng root(seed);
  SynthOutput out;

  std::vector<std::vector<DomainSpec>> actors(plans.size());
  std::uint64_t total_records = 0;
  for (std::size_t i = 0; i < plans.size(); ++i) {
    actors[i] = build_actor(plans[i], i, root.fork(2 * i));
    for (const auto& d : actors[i]) total_records += d.sites;
  }

  for (std::size_t k = 0; k < bridges.size(); ++k) {
    const auto& bridge = bridges[k];
    if (bridge.a >= actors.size() || bridge.b >= actors.size() || bridge.a == bridge.b)
      throw InputError("synth: bridge endpoints out of range");
    const std::string email = "bridge-" + std::to_string(k) + "@link.top";
    for (const auto side : {bridge.a, bridge.b}) {
      auto& specs = actors[side];
      // Two anchor domains per side keep the bridge entity the only cut.
      for (std::size_t j = 0; j < std::min<std::size_t>(2, specs.size()); ++j)
        specs[j].emails.push_back(email);
    }
    out.truth.bridge_entities.push_back(email);
  }

  out.records.reserve(total_records);
  const std::int32_t day0 = start.to_days();
  const std::uint64_t span = static_cast<std::uint64_t>(end.to_days() - day0) + 1;
  for (std::size_t i = 0; i < actors.size(); ++i) {
    Rng dates = root.fork(2 * i + 1);
    const std::string label = actor_label(i);
    for (auto& d : actors[i]) {
      out.truth.domain_actor.emplace(d.name, label);
      std::sort(d.emails.begin(), d.emails.end());
      d.emails.erase(std::unique(d.emails.begin(), d.emails.end()), d.emails.end());
      for (std::uint32_t s = 0; s < d.sites; ++s) {
        SiteRecord rec;
        rec.site_host = "s" + std::to_string(s) + "." + d.name;
        rec.site_url = rec.site_host;
        rec.domain = d.name;
        rec.emails = d.emails;
        rec.matomo_urls = d.matomo_urls;
        rec.la51_ids = d.la51_ids;
        rec.observed_at = Date::from_days(day0 + static_cast<std::int32_t>(dates.below(span)));
        out.records.push_back(std::move(rec));
      }
    }
  }
  return out;
}

std::vector<ActorPlan> plans_from_config(const SynthConfig& cfg, std::vector<BridgePlan>& bridges) {
  Rng plan_rng = Rng(cfg.seed).fork(0x70a5);
  std::vector<ActorPlan> plans(cfg.actor_count);
  for (auto& plan : plans) {
    plan.domains = sample_tail(plan_rng, cfg.domains_per_actor);
    plan.sites_dist = cfg.sites_per_domain;
    plan.email_pool = std::max<std::uint32_t>(1, cfg.emails_per_actor);
    plan.extra_email_prob = cfg.email_reuse_prob;
    plan.fresh_email_prob = (1.0 - cfg.email_reuse_prob) * 0.5;
    plan.matomo_urls = plan_rng.chance(cfg.matomo_adoption_prob) ? cfg.matomo_servers_per_actor : 0;
    plan.matomo_link_prob = cfg.matomo_link_prob;
    if (plan_rng.chance(cfg.la51_adoption_prob))
      plan.la51_target = std::max<std::uint32_t>(
          1, static_cast<std::uint32_t>(std::lround(plan.domains * cfg.la51_link_prob)));
  }
  for (std::uint32_t k = 0; k < cfg.cross_actor_bridge_count; ++k) bridges.push_back({2 * k, 2 * k + 1});
  return plans;
}

// Shape of the dataset this pipeline is sized for: eight large actors that
// are really chains of sub-actors joined by single bridge entities, plus a
// long tail of small independent ones.
void jc3_plans(std::uint64_t seed, std::vector<ActorPlan>& plans, std::vector<BridgePlan>& bridges) {
  struct Row {
    std::uint32_t domains;
    std::uint64_t sites;
    std::uint32_t emails;
    std::uint32_t la51;
    std::uint32_t matomo;
  };
  struct GroupShape {
    std::vector<Row> rows;
  };

  std::vector<GroupShape> groups;
  {
    GroupShape g1;
    g1.rows = {{11822, 94627, 2345, 2291, 0}, {8262, 10115, 336, 53, 0},  {3854, 17075, 411, 43, 3},
               {2115, 11248, 43, 43, 3},      {1200, 1900, 30, 43, 0},    {696, 2065, 52, 43, 0}};
    const std::uint32_t tail_domains[] = {690, 649, 632, 615, 598, 581, 564, 547, 530, 513, 496,
                                          479, 462, 445, 428, 411, 394, 377, 360, 343, 326, 309};
    for (const auto d : tail_domains)
      g1.rows.push_back({d, static_cast<std::uint64_t>(std::lround(d * 1.3)), 26, 43, 0});
    groups.push_back(std::move(g1));

    groups.push_back({{{16314, 206886, 4403, 23, 5},
                       {12498, 61310, 819, 0, 5},
                       {5372, 42961, 469, 0, 0},
                       {2986, 20382, 823, 1, 5},
                       {495, 700, 3, 0, 6}}});
    groups.push_back({{{1828, 16507, 114, 0, 1},
                       {1523, 9939, 109, 0, 0},
                       {853, 6116, 99, 0, 0},
                       {678, 6297, 86, 0, 0},
                       {15, 30, 2, 0, 0}}});
    groups.push_back({{{320, 1429, 17, 0, 1},
                       {320, 1429, 17, 0, 0},
                       {320, 1429, 17, 0, 0},
                       {320, 1429, 16, 0, 0},
                       {307, 1429, 16, 0, 0}}});
    groups.push_back({{{1361, 5514, 385, 46, 3}}});
    groups.push_back({{{1343, 15433, 381, 105, 0}}});
    groups.push_back({{{352, 13080, 37, 39, 0}}});
    groups.push_back({{{260, 2569, 8, 0, 1}}});
  }

  auto emails_to_pool = [](std::uint32_t target, std::uint32_t domains, ActorPlan& plan) {
    plan.email_pool = std::max<std::uint32_t>(2, std::min(target, std::max<std::uint32_t>(2, target / 4)));
    const double fresh = target > plan.email_pool
                             ? static_cast<double>(target - plan.email_pool) / domains
                             : 0.0;
    plan.fresh_email_prob = std::min(1.0, fresh);
  };

  for (std::size_t gi = 0; gi < groups.size(); ++gi) {
    const auto first = static_cast<std::uint32_t>(plans.size());
    for (std::size_t ri = 0; ri < groups[gi].rows.size(); ++ri) {
      const Row& row = groups[gi].rows[ri];
      ActorPlan plan;
      plan.domains = row.domains;
      plan.total_sites = std::max<std::uint64_t>(row.sites, row.domains);
      emails_to_pool(row.emails, row.domains, plan);
      plan.extra_email_prob = 0.3;
      plan.matomo_urls = row.matomo;
      plan.la51_target = row.la51;
      // Two groups sharing one Matomo host (distinct URLs) must stay
      // separate groups; reporting alone aggregates by host.
      if (gi == 1 && ri == 0) plan.matomo_overrides = {"http://la51-shared.xyz/g2/piwik.php"};
      if (gi == 2 && ri == 0) plan.matomo_overrides = {"http://la51-shared.xyz/g3/matomo.php"};
      plans.push_back(std::move(plan));
    }
    for (std::uint32_t k = first; k + 1 < plans.size(); ++k) bridges.push_back({k, k + 1});
  }

  Rng small_rng = Rng(seed).fork(0x51a11);
  for (std::size_t i = 0; i < 1110; ++i) {
    ActorPlan plan;
    plan.domains = sample_tail(small_rng, {1, 120, 0.78});
    plan.sites_dist = {1, 40, 1.05};
    plan.email_pool = 1 + (i % 3 == 0 ? 1 : 0) + (i % 5 == 0 ? 1 : 0);
    plan.extra_email_prob = 0.2;
    plan.la51_target = 1 + (i < 172 ? 1 : 0);
    if (i < 3) plan.matomo_urls = 1;
    plans.push_back(std::move(plan));
  }
}

}  // namespace

SynthConfig jc3_shape_config(std::uint64_t seed) {
  SynthConfig cfg;
  cfg.preset = "jc3-shape";
  cfg.seed = seed;
  cfg.start_date = {2022, 5, 20};
  cfg.end_date = {2024, 12, 31};
  return cfg;
}

SynthOutput generate(const SynthConfig& cfg) {
  validate_config(cfg);
  std::vector<ActorPlan> plans;
  std::vector<BridgePlan> bridges;
  if (cfg.preset.empty()) {
    plans = plans_from_config(cfg, bridges);
  } else if (cfg.preset == "jc3-shape") {
    jc3_plans(cfg.seed, plans, bridges);
  } else {
    throw InputError("synth config: unknown preset '" + cfg.preset + "'");
  }
  return generate_from_plans(plans, bridges, cfg.start_date, cfg.end_date, cfg.seed);
}

PairwiseScores evaluate(const std::unordered_map<std::string, std::string>& predicted,
                        const SynthGroundTruth& truth) {
  auto choose2 = [](std::uint64_t n) { return n * (n - 1) / 2; };

  // Predicted cells, completed with singleton cells for unlabeled domains.
  std::map<std::string, std::map<std::string, std::uint64_t>> cell_actor;  // cell -> actor -> n
  std::map<std::string, std::uint64_t> actor_sizes;
  std::uint64_t singleton_seq = 0;
  for (const auto& [domain, actor] : truth.domain_actor) {
    ++actor_sizes[actor];
    const auto it = predicted.find(domain);
    if (it != predicted.end())
      ++cell_actor["c:" + it->second][actor];
    else
      ++cell_actor["s:" + std::to_string(singleton_seq++)][actor];
  }
  for (const auto& [domain, cell] : predicted)
    if (!truth.domain_actor.count(domain))
      throw InputError("evaluate: predicted domain not in ground truth: " + domain);

  PairwiseScores scores;
  std::uint64_t same_cell_pairs = 0;
  bool exact = true;
  for (const auto& [cell, actors] : cell_actor) {
    std::uint64_t cell_size = 0;
    for (const auto& [actor, n] : actors) {
      scores.true_pairs += choose2(n);
      cell_size += n;
    }
    same_cell_pairs += choose2(cell_size);
    // Exact match: every cell is one whole actor.
    exact = exact && actors.size() == 1 && cell_size == actor_sizes[actors.begin()->first];
  }
  std::uint64_t true_total = 0;
  for (const auto& [actor, n] : actor_sizes) true_total += choose2(n);

  scores.false_pairs = same_cell_pairs - scores.true_pairs;
  scores.missed_pairs = true_total - scores.true_pairs;
  const std::uint64_t tp = scores.true_pairs;
  scores.precision = (tp + scores.false_pairs) == 0 ? 1.0
                                                    : static_cast<double>(tp) / (tp + scores.false_pairs);
  scores.recall = (tp + scores.missed_pairs) == 0 ? 1.0
                                                  : static_cast<double>(tp) / (tp + scores.missed_pairs);
  scores.f1 = (scores.precision + scores.recall) == 0.0
                  ? 0.0
                  : 2.0 * scores.precision * scores.recall / (scores.precision + scores.recall);
  scores.exact_match = exact;
  return scores;
}

}  // namespace eclink
