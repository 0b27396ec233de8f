#include "catalloc/mallows.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <iomanip>
#include <numeric>
#include <ostream>
#include <thread>

#include "catalloc/bounds.hpp"
#include "catalloc/errors.hpp"

namespace catalloc {

std::uint64_t kendall_tau(const Preference& v, const Preference& w) {
  if (!(v.shape() == w.shape())) throw ValidationError("kendall distance between rankings of different domains");
  // Sequence of w-ranks read in v's order; discordant pairs are inversions.
  const std::size_t m = v.shape().bundle_count();
  std::vector<std::size_t> fenwick(m + 1, 0);
  std::uint64_t inversions = 0;
  std::size_t seen = 0;
  for (BundleIndex b : v.order()) {
    const auto r = static_cast<std::size_t>(w.rank(b));
    std::size_t not_greater = 0;
    for (std::size_t i = r; i > 0; i -= i & (~i + 1)) not_greater += fenwick[i];
    inversions += seen - not_greater;
    for (std::size_t i = r; i <= m; i += i & (~i + 1)) ++fenwick[i];
    ++seen;
  }
  return inversions;
}

void check_mallows(const MallowsParams& params) {
  if (!(params.phi > 0.0 && params.phi <= 1.0)) {
    throw ValidationError("Mallows dispersion must lie in (0, 1], got " + std::to_string(params.phi));
  }
}

Preference sample_mallows(const MallowsParams& params, std::mt19937_64& rng) {
  check_mallows(params);
  const auto center = params.center.order();
  std::vector<BundleIndex> partial;
  partial.reserve(center.size());
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::size_t k = 1; k <= center.size(); ++k) {
    // displacement r in 0..k-1 with weight phi^r
    std::size_t r = 0;
    if (params.phi == 1.0) {
      r = std::uniform_int_distribution<std::size_t>(0, k - 1)(rng);
    } else {
      const double total = (1.0 - std::pow(params.phi, static_cast<double>(k))) / (1.0 - params.phi);
      double u = unit(rng) * total;
      double weight = 1.0;
      while (r + 1 < k && u >= weight) {
        u -= weight;
        weight *= params.phi;
        ++r;
      }
    }
    partial.insert(partial.begin() + static_cast<std::ptrdiff_t>(k - 1 - r), center[k - 1]);
  }
  return Preference(params.center.shape(), std::move(partial));
}

double mallows_pmf(const MallowsParams& params, const Preference& v) {
  check_mallows(params);
  const std::size_t m = params.center.shape().bundle_count();
  if (m > kMaxPmfBundles) {
    throw CapacityError("exact Mallows probabilities are limited to " + std::to_string(kMaxPmfBundles) +
                        " bundles, got " + std::to_string(m));
  }
  double z = 1.0;
  for (std::size_t k = 1; k <= m; ++k) {
    double term = 0.0;
    for (std::size_t r = 0; r < k; ++r) term += std::pow(params.phi, static_cast<double>(r));
    z *= term;
  }
  return std::pow(params.phi, static_cast<double>(kendall_tau(v, params.center))) / z;
}

std::string family_tag(OrderFamily family) {
  return family == OrderFamily::kSerialDictatorship ? "sd" : "balanced";
}

std::vector<MechanismConfig> default_mechanisms() {
  return {{OrderFamily::kSerialDictatorship, BehaviorKind::kOptimistic},
          {OrderFamily::kSerialDictatorship, BehaviorKind::kPessimistic},
          {OrderFamily::kBalanced, BehaviorKind::kOptimistic},
          {OrderFamily::kBalanced, BehaviorKind::kPessimistic}};
}

namespace {

struct Outcome {
  long long utilitarian = 0;
  int egalitarian = 0;
  std::uint64_t violations = 0;
};

struct Prepared {
  MechanismConfig config;
  PickingOrder order;
  BehaviorAssignment behaviors;
  std::vector<long long> bounds;
};

Prepared prepare(const MechanismConfig& config, int n, int p) {
  std::vector<Agent> agents(static_cast<std::size_t>(n));
  std::iota(agents.begin(), agents.end(), 1);
  PickingOrder order = config.family == OrderFamily::kSerialDictatorship ? serial_dictatorship_order(agents, p)
                                                                         : balanced_order(agents, p);
  std::vector<long long> bounds;
  for (Agent j = 1; j <= n; ++j) bounds.push_back(bound_for(order, j, config.behavior));
  return {config, std::move(order), uniform_behaviors(n, config.behavior), std::move(bounds)};
}

std::vector<Outcome> run_replicate(const std::vector<Prepared>& mechs, const DomainShape& shape, double phi,
                                   std::mt19937_64& rng) {
  std::vector<BundleIndex> center(shape.bundle_count());
  std::iota(center.begin(), center.end(), BundleIndex{0});
  std::shuffle(center.begin(), center.end(), rng);
  const MallowsParams params{Preference(shape, std::move(center)), phi};
  std::vector<Preference> prefs;
  for (int j = 0; j < shape.agent_count(); ++j) prefs.push_back(sample_mallows(params, rng));
  const Profile profile(shape, std::move(prefs));

  std::vector<Outcome> out;
  for (const Prepared& mech : mechs) {
    const Allocation alloc = run_csam(mech.order, profile, mech.behaviors).allocation;
    const std::vector<int> ranks = agent_ranks(profile, alloc);
    Outcome o;
    for (std::size_t j = 0; j < ranks.size(); ++j) {
      o.utilitarian += ranks[j];
      o.egalitarian = std::max(o.egalitarian, ranks[j]);
      if (ranks[j] > mech.bounds[j]) ++o.violations;
    }
    out.push_back(o);
  }
  return out;
}

std::pair<double, double> mean_and_ci(const std::vector<double>& xs) {
  const double m = static_cast<double>(xs.size());
  double sum = 0.0;
  for (double x : xs) sum += x;
  const double mean = sum / m;
  if (xs.size() < 2) return {mean, 0.0};
  double sq = 0.0;
  for (double x : xs) sq += (x - mean) * (x - mean);
  return {mean, 1.96 * std::sqrt(sq / (m - 1.0)) / std::sqrt(m)};
}

}  // namespace

std::vector<ExperimentRow> run_experiment(const ExperimentConfig& config) {
  if (config.samples == 0) throw ValidationError("experiment needs at least one sample");
  if (config.agents.empty() || config.phis.empty() || config.mechanisms.empty()) {
    throw ValidationError("experiment grid is empty");
  }
  for (double phi : config.phis) {
    if (!(phi > 0.0 && phi <= 1.0)) throw ValidationError("Mallows dispersion must lie in (0, 1], got " + std::to_string(phi));
  }

  unsigned threads = config.threads != 0 ? config.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, config.samples));

  std::vector<ExperimentRow> rows;
  for (int n : config.agents) {
    const DomainShape shape(n, config.categories);
    std::vector<Prepared> mechs;
    for (const MechanismConfig& mc : config.mechanisms) mechs.push_back(prepare(mc, n, config.categories));

    for (std::size_t phi_index = 0; phi_index < config.phis.size(); ++phi_index) {
      const double phi = config.phis[phi_index];
      std::vector<std::vector<Outcome>> results(config.samples);
      std::vector<std::exception_ptr> failures(threads);
      auto worker = [&](unsigned w) {
        try {
          for (std::uint64_t rep = w; rep < config.samples; rep += threads) {
          std::seed_seq seq{static_cast<std::uint32_t>(config.seed), static_cast<std::uint32_t>(config.seed >> 32),
                            static_cast<std::uint32_t>(n), static_cast<std::uint32_t>(phi_index),
                            static_cast<std::uint32_t>(rep), static_cast<std::uint32_t>(rep >> 32)};
          std::mt19937_64 rng(seq);
          results[rep] = run_replicate(mechs, shape, phi, rng);
          }
        } catch (...) {
          failures[w] = std::current_exception();
        }
      };
      if (threads == 1) {
        worker(0);
      } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < threads; ++w) pool.emplace_back(worker, w);
        for (auto& t : pool) t.join();
      }
      for (const auto& f : failures) {
        if (f) std::rethrow_exception(f);
      }

      for (std::size_t k = 0; k < mechs.size(); ++k) {
        std::vector<double> util;
        std::vector<double> egal;
        std::uint64_t violations = 0;
        for (const auto& rep : results) {
          util.push_back(static_cast<double>(rep[k].utilitarian));
          egal.push_back(static_cast<double>(rep[k].egalitarian));
          violations += rep[k].violations;
        }
        ExperimentRow row;
        row.mechanism = mechs[k].config;
        row.agents = n;
        row.categories = config.categories;
        row.phi = phi;
        row.samples = config.samples;
        row.seed = config.seed;
        std::tie(row.mean_utilitarian, row.ci_utilitarian) = mean_and_ci(util);
        std::tie(row.mean_egalitarian, row.ci_egalitarian) = mean_and_ci(egal);
        row.bound_violations = violations;
        rows.push_back(row);
      }
    }
  }
  return rows;
}

void write_experiment_csv(std::ostream& out, const std::vector<ExperimentRow>& rows) {
  out << kExperimentCsvHeader << '\n';
  for (const ExperimentRow& r : rows) {
    out << family_tag(r.mechanism.family) << ',' << behavior_tag(r.mechanism.behavior) << ',' << r.agents << ','
        << r.categories << ',' << r.phi << ',' << r.samples << ',' << r.seed << ',' << std::fixed
        << std::setprecision(6) << r.mean_utilitarian << ',' << r.ci_utilitarian << ',' << r.mean_egalitarian << ','
        << r.ci_egalitarian << std::defaultfloat << std::setprecision(6) << '\n';
  }
}

}  // namespace catalloc
