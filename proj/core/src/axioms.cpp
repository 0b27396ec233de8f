#include "catalloc/axioms.hpp"

#include <algorithm>
#include <numeric>
#include <random>

#include "catalloc/combinatorics.hpp"
#include "catalloc/errors.hpp"
#include "catalloc/mechanism.hpp"

namespace catalloc {
namespace {

__extension__ typedef unsigned __int128 u128;

constexpr const char* kStrategyProofness = "strategy-proofness";
constexpr const char* kNonBossiness = "non-bossiness";
constexpr const char* kNeutrality = "category-wise-neutrality";
constexpr const char* kPareto = "pareto-optimality";

void check_permutation(const std::vector<Item>& perm, int n) {
  if (static_cast<int>(perm.size()) != n) throw ValidationError("category permutation must have " + std::to_string(n) + " entries");
  std::vector<bool> seen(static_cast<std::size_t>(n) + 1, false);
  for (Item x : perm) {
    if (x < 1 || x > n || seen[static_cast<std::size_t>(x)]) {
      throw ValidationError("category permutation is not a permutation of 1.." + std::to_string(n));
    }
    seen[static_cast<std::size_t>(x)] = true;
  }
}

std::uint64_t mul_or_refuse(std::uint64_t a, std::uint64_t b, const std::string& what) {
  if (a != 0 && b > UINT64_MAX / a) throw CapacityError(what + " is too large to enumerate");
  return a * b;
}

std::uint64_t ranking_count(const DomainShape& shape) {
  const auto f = checked_factorial(shape.bundle_count());
  if (!f) throw CapacityError("bundle space of " + std::to_string(shape.bundle_count()) + " has too many rankings to enumerate");
  return *f;
}

std::uint64_t profile_count(const DomainShape& shape) {
  std::uint64_t total = 1;
  const std::uint64_t per_agent = ranking_count(shape);
  for (int j = 0; j < shape.agent_count(); ++j) total = mul_or_refuse(total, per_agent, "profile space");
  return total;
}

void require_budget(std::uint64_t work, const CheckMode& mode, const std::string& axiom) {
  if (work > mode.budget) {
    throw CapacityError("exhaustive " + axiom + " check needs " + std::to_string(work) +
                        " evaluations, above the budget of " + std::to_string(mode.budget));
  }
}

Preference ranking_at(const DomainShape& shape, std::uint64_t index) {
  auto perm = nth_permutation(shape.bundle_count(), index);
  return Preference(shape, std::vector<BundleIndex>(perm.begin(), perm.end()));
}

Preference random_ranking(const DomainShape& shape, std::mt19937_64& rng) {
  std::vector<BundleIndex> order(shape.bundle_count());
  std::iota(order.begin(), order.end(), BundleIndex{0});
  std::shuffle(order.begin(), order.end(), rng);
  return Preference(shape, std::move(order));
}

Profile random_profile(const DomainShape& shape, std::mt19937_64& rng) {
  std::vector<Preference> prefs;
  for (int j = 0; j < shape.agent_count(); ++j) prefs.push_back(random_ranking(shape, rng));
  return Profile(shape, std::move(prefs));
}

std::vector<Item> random_permutation(int n, std::mt19937_64& rng) {
  std::vector<Item> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 1);
  std::shuffle(perm.begin(), perm.end(), rng);
  return perm;
}

std::vector<Item> permutation_at(int n, std::uint64_t index) {
  std::vector<Item> perm;
  for (std::size_t x : nth_permutation(static_cast<std::size_t>(n), index)) perm.push_back(static_cast<Item>(x) + 1);
  return perm;
}

Allocation run_checked(const DirectMechanism& mech, const Profile& profile) {
  Allocation alloc = mech.run(profile);
  require_valid_allocation(profile.shape(), alloc);
  return alloc;
}

AxiomVerdict blank_verdict(const char* axiom, const CheckMode& mode) {
  if (mode.kind == CheckMode::Kind::kSampled && mode.samples == 0) {
    throw ValidationError("sampled axiom check needs a positive sample count");
  }
  AxiomVerdict v;
  v.axiom = axiom;
  v.coverage = mode.kind;
  v.samples = mode.samples;
  v.seed = mode.seed;
  return v;
}

// Shared driver for the two manipulation axioms. `violates` inspects
// (profile, agent, f(P), f(P')) and returns true on a violation.
template <typename Violates>
AxiomVerdict check_deviations(const char* axiom, const DirectMechanism& mech, const DomainShape& shape,
                              const CheckMode& mode, Violates violates) {
  AxiomVerdict verdict = blank_verdict(axiom, mode);
  auto record = [&](const Profile& profile, Agent j, const Preference& dev, const Allocation& before,
                    const Allocation& after) {
    verdict.pass = false;
    verdict.counterexample = Counterexample{profile, j, dev, 0, {}, before, after};
  };

  if (mode.kind == CheckMode::Kind::kExhaustive) {
    const std::uint64_t profiles = profile_count(shape);
    const std::uint64_t rankings = ranking_count(shape);
    require_budget(mul_or_refuse(profiles, mul_or_refuse(rankings, static_cast<std::uint64_t>(shape.agent_count()), axiom), axiom),
                   mode, axiom);
    for (std::uint64_t pi = 0; pi < profiles; ++pi) {
      const Profile profile = profile_at(shape, pi);
      const Allocation before = run_checked(mech, profile);
      for (Agent j = 1; j <= shape.agent_count(); ++j) {
        for (std::uint64_t d = 0; d < rankings; ++d) {
          Preference dev = ranking_at(shape, d);
          if (dev == profile.of(j)) continue;
          ++verdict.cases;
          const Allocation after = run_checked(mech, profile.with(j, dev));
          if (violates(profile, j, before, after)) {
            record(profile, j, dev, before, after);
            return verdict;
          }
        }
      }
    }
    return verdict;
  }

  std::mt19937_64 rng(mode.seed);
  std::uniform_int_distribution<int> agent_dist(1, shape.agent_count());
  for (std::uint64_t s = 0; s < mode.samples; ++s) {
    const Profile profile = random_profile(shape, rng);
    const Agent j = agent_dist(rng);
    Preference dev = random_ranking(shape, rng);
    ++verdict.cases;
    const Allocation before = run_checked(mech, profile);
    const Allocation after = run_checked(mech, profile.with(j, dev));
    if (violates(profile, j, before, after)) {
      record(profile, j, dev, before, after);
      return verdict;
    }
  }
  return verdict;
}

bool manipulates(const Profile& profile, Agent j, const Allocation& before, const Allocation& after) {
  return rank_of(profile.of(j), after.of(j)) < rank_of(profile.of(j), before.of(j));
}

bool bosses(const Profile&, Agent j, const Allocation& before, const Allocation& after) {
  return before.of(j) == after.of(j) && !(before == after);
}

bool dominates(const Profile& profile, const Allocation& candidate, const Allocation& base) {
  bool strict = false;
  for (Agent j = 1; j <= profile.agent_count(); ++j) {
    const int a = rank_of(profile.of(j), candidate.of(j));
    const int b = rank_of(profile.of(j), base.of(j));
    if (a > b) return false;
    strict = strict || a < b;
  }
  return strict;
}

std::optional<Allocation> dominating_allocation(const Profile& profile, const Allocation& base,
                                                const std::vector<Allocation>& space) {
  for (const Allocation& a : space) {
    if (dominates(profile, a, base)) return a;
  }
  return std::nullopt;
}

}  // namespace

std::string AxiomVerdict::coverage_label() const {
  if (coverage == CheckMode::Kind::kExhaustive) return "exhaustive";
  return "sampled:" + std::to_string(samples) + ":" + std::to_string(seed);
}

Bundle apply_category_permutation(const Bundle& bundle, Category c, const std::vector<Item>& perm) {
  check_permutation(perm, static_cast<int>(perm.size()));
  if (c < 1 || c > static_cast<Category>(bundle.size())) throw ValidationError("category " + std::to_string(c) + " out of range");
  if (bundle[c] < 1 || bundle[c] > static_cast<Item>(perm.size())) {
    throw ValidationError("item " + std::to_string(bundle[c]) + " outside the permutation's range");
  }
  Bundle out = bundle;
  out[c] = perm[static_cast<std::size_t>(bundle[c] - 1)];
  return out;
}

Preference apply_category_permutation(const Preference& pref, Category c, const std::vector<Item>& perm) {
  const auto& shape = pref.shape();
  check_permutation(perm, shape.item_count());
  if (c < 1 || c > shape.category_count()) throw ValidationError("category " + std::to_string(c) + " out of range");
  std::vector<BundleIndex> order;
  order.reserve(shape.bundle_count());
  for (BundleIndex b : pref.order()) {
    const Item x = shape.item_of(b, c);
    const Item y = perm[static_cast<std::size_t>(x - 1)];
    order.push_back(b - static_cast<BundleIndex>(x - 1) * shape.place_value(c) +
                    static_cast<BundleIndex>(y - 1) * shape.place_value(c));
  }
  return Preference(shape, std::move(order));
}

Profile apply_category_permutation(const Profile& profile, Category c, const std::vector<Item>& perm) {
  std::vector<Preference> prefs;
  for (const Preference& pref : profile.preferences()) prefs.push_back(apply_category_permutation(pref, c, perm));
  return Profile(profile.shape(), std::move(prefs));
}

Allocation apply_category_permutation(const Allocation& alloc, Category c, const std::vector<Item>& perm) {
  check_permutation(perm, static_cast<int>(perm.size()));
  std::vector<Bundle> bundles;
  for (const Bundle& b : alloc.bundles()) bundles.push_back(apply_category_permutation(b, c, perm));
  return Allocation(std::move(bundles));
}

Profile profile_at(const DomainShape& shape, std::uint64_t index) {
  const std::uint64_t per_agent = ranking_count(shape);
  const int n = shape.agent_count();
  std::vector<std::uint64_t> digits(static_cast<std::size_t>(n));
  for (int j = n - 1; j >= 0; --j) {
    digits[static_cast<std::size_t>(j)] = index % per_agent;
    index /= per_agent;
  }
  if (index != 0) throw ValidationError("profile index out of range");
  std::vector<Preference> prefs;
  for (std::uint64_t d : digits) prefs.push_back(ranking_at(shape, d));
  return Profile(shape, std::move(prefs));
}

std::vector<Allocation> all_allocations(const DomainShape& shape, std::uint64_t limit) {
  const int n = shape.agent_count();
  const int p = shape.category_count();
  const std::uint64_t per_category = checked_factorial(static_cast<std::uint64_t>(n)).value_or(UINT64_MAX);
  std::uint64_t total = 1;
  for (int c = 0; c < p; ++c) total = mul_or_refuse(total, per_category, "allocation space");
  if (total > limit) {
    throw CapacityError("allocation space has " + std::to_string(total) + " elements, above the limit of " +
                        std::to_string(limit));
  }
  std::vector<std::vector<Item>> perms;
  for (std::uint64_t i = 0; i < per_category; ++i) perms.push_back(permutation_at(n, i));

  std::vector<Allocation> out;
  out.reserve(total);
  for (std::uint64_t index = 0; index < total; ++index) {
    std::vector<Bundle> bundles(static_cast<std::size_t>(n), Bundle(std::vector<Item>(static_cast<std::size_t>(p))));
    std::uint64_t rest = index;
    for (Category c = p; c >= 1; --c) {
      const auto& perm = perms[rest % per_category];
      rest /= per_category;
      for (Agent j = 1; j <= n; ++j) bundles[static_cast<std::size_t>(j - 1)][c] = perm[static_cast<std::size_t>(j - 1)];
    }
    out.emplace_back(std::move(bundles));
  }
  return out;
}

AxiomVerdict check_strategy_proofness(const DirectMechanism& mech, const DomainShape& shape, const CheckMode& mode) {
  return check_deviations(kStrategyProofness, mech, shape, mode, manipulates);
}

AxiomVerdict check_non_bossiness(const DirectMechanism& mech, const DomainShape& shape, const CheckMode& mode) {
  return check_deviations(kNonBossiness, mech, shape, mode, bosses);
}

AxiomVerdict check_category_wise_neutrality(const DirectMechanism& mech, const DomainShape& shape,
                                            const CheckMode& mode) {
  AxiomVerdict verdict = blank_verdict(kNeutrality, mode);
  const int n = shape.agent_count();
  const int p = shape.category_count();
  auto probe = [&](const Profile& profile, const Allocation& base, Category c, std::vector<Item> perm) {
    ++verdict.cases;
    const Allocation expected = apply_category_permutation(base, c, perm);
    const Allocation actual = run_checked(mech, apply_category_permutation(profile, c, perm));
    if (actual == expected) return false;
    verdict.pass = false;
    verdict.counterexample = Counterexample{profile, 0, std::nullopt, c, std::move(perm), expected, actual};
    return true;
  };

  if (mode.kind == CheckMode::Kind::kExhaustive) {
    const std::uint64_t profiles = profile_count(shape);
    const std::uint64_t perms = checked_factorial(static_cast<std::uint64_t>(n)).value_or(UINT64_MAX);
    require_budget(mul_or_refuse(profiles, mul_or_refuse(perms, static_cast<std::uint64_t>(p), kNeutrality), kNeutrality),
                   mode, kNeutrality);
    for (std::uint64_t pi = 0; pi < profiles; ++pi) {
      const Profile profile = profile_at(shape, pi);
      const Allocation base = run_checked(mech, profile);
      for (Category c = 1; c <= p; ++c) {
        for (std::uint64_t k = 1; k < perms; ++k) {  // k = 0 is the identity
          if (probe(profile, base, c, permutation_at(n, k))) return verdict;
        }
      }
    }
    return verdict;
  }

  std::mt19937_64 rng(mode.seed);
  std::uniform_int_distribution<int> cat_dist(1, p);
  for (std::uint64_t s = 0; s < mode.samples; ++s) {
    const Profile profile = random_profile(shape, rng);
    const Category c = cat_dist(rng);
    std::vector<Item> perm = random_permutation(n, rng);
    if (probe(profile, run_checked(mech, profile), c, std::move(perm))) return verdict;
  }
  return verdict;
}

AxiomVerdict check_pareto_optimality(const DirectMechanism& mech, const DomainShape& shape, const CheckMode& mode) {
  AxiomVerdict verdict = blank_verdict(kPareto, mode);
  const std::vector<Allocation> space = all_allocations(shape);
  auto probe = [&](const Profile& profile) {
    ++verdict.cases;
    const Allocation base = run_checked(mech, profile);
    auto better = dominating_allocation(profile, base, space);
    if (!better) return false;
    verdict.pass = false;
    verdict.counterexample = Counterexample{profile, 0, std::nullopt, 0, {}, base, std::move(*better)};
    return true;
  };

  if (mode.kind == CheckMode::Kind::kExhaustive) {
    const std::uint64_t profiles = profile_count(shape);
    require_budget(mul_or_refuse(profiles, space.size(), kPareto), mode, kPareto);
    for (std::uint64_t pi = 0; pi < profiles; ++pi) {
      if (probe(profile_at(shape, pi))) return verdict;
    }
    return verdict;
  }
  std::mt19937_64 rng(mode.seed);
  for (std::uint64_t s = 0; s < mode.samples; ++s) {
    if (probe(random_profile(shape, rng))) return verdict;
  }
  return verdict;
}

bool confirm_counterexample(const DirectMechanism& mech, const AxiomVerdict& verdict) {
  if (verdict.pass || !verdict.counterexample) return false;
  const Counterexample& cx = verdict.counterexample.value();
  const Allocation base = mech.run(cx.profile);
  if (verdict.axiom == kStrategyProofness || verdict.axiom == kNonBossiness) {
    if (!cx.deviation) return false;
    const Allocation after = mech.run(cx.profile.with(cx.agent, *cx.deviation));
    return verdict.axiom == kStrategyProofness ? manipulates(cx.profile, cx.agent, base, after)
                                               : bosses(cx.profile, cx.agent, base, after);
  }
  if (verdict.axiom == kNeutrality) {
    const Allocation actual = mech.run(apply_category_permutation(cx.profile, cx.category, cx.permutation));
    return !(actual == apply_category_permutation(base, cx.category, cx.permutation));
  }
  if (verdict.axiom == kPareto) {
    return validate_allocation(cx.profile.shape(), cx.after).ok() && dominates(cx.profile, cx.after, base);
  }
  return false;
}

DirectMechanism sd_direct(std::vector<Agent> agent_order) {
  std::string name = "sd";
  for (Agent j : agent_order) name += (name.size() == 2 ? ":" : ">") + std::to_string(j);
  return {name, [agent_order = std::move(agent_order)](const Profile& profile) {
            return direct_serial_dictatorship(agent_order, profile);
          }};
}

DirectMechanism welfare_maximizer() {
  return {"welfare", [](const Profile& profile) {
            const auto& shape = profile.shape();
            const int n = shape.agent_count();
            const auto m = static_cast<std::uint64_t>(shape.bundle_count());
            // Scaled by (2m)^n: weight_j = (2m)^n + (2m)^(n-j).
            const auto top = checked_pow(2 * m, static_cast<unsigned>(n));
            if (!top) throw CapacityError("welfare weights overflow for this shape");
            std::vector<u128> weight;
            for (int j = 1; j <= n; ++j) {
              weight.push_back(static_cast<u128>(*top) + *checked_pow(2 * m, static_cast<unsigned>(n - j)));
            }
            std::optional<Allocation> best;
            u128 best_score = 0;
            for (Allocation& a : all_allocations(shape)) {
              u128 score = 0;
              for (Agent j = 1; j <= n; ++j) {
                const auto r = static_cast<std::uint64_t>(rank_of(profile.of(j), a.of(j)));
                score += static_cast<u128>(m - r) * weight[static_cast<std::size_t>(j - 1)];
              }
              if (!best || score > best_score) {
                best_score = score;
                best = std::move(a);
              }
            }
            return std::move(*best);
          }};
}

namespace {

std::vector<Agent> conditional_order(int n, bool forward) {
  std::vector<Agent> order{1};
  for (int k = 2; k <= n; ++k) order.push_back(forward ? k : n + 2 - k);
  return order;
}

}  // namespace

DirectMechanism bossy_conditional_sd() {
  return {"bossy-sd", [](const Profile& profile) {
            const auto& shape = profile.shape();
            const Preference& r1 = profile.of(1);
            bool forward = true;
            if (shape.bundle_count() > 1) forward = shape.item_of(r1.at_rank(2), 1) == shape.item_of(r1.top(), 1);
            return direct_serial_dictatorship(conditional_order(shape.agent_count(), forward), profile);
          }};
}

DirectMechanism non_neutral_conditional_sd() {
  return {"nonneutral-sd", [](const Profile& profile) {
            const auto& shape = profile.shape();
            const bool forward = profile.of(1).top() == encode_bundle(shape, uniform_bundle(shape, 1));
            return direct_serial_dictatorship(conditional_order(shape.agent_count(), forward), profile);
          }};
}

DirectMechanism constant_mechanism(Allocation allocation) {
  return {"constant", [allocation = std::move(allocation)](const Profile&) { return allocation; }};
}

}  // namespace catalloc
