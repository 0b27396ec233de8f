#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <ostream>
#include <sstream>

#include "catalloc/adversarial.hpp"
#include "catalloc/axioms.hpp"
#include "catalloc/bounds.hpp"
#include "catalloc/errors.hpp"
#include "catalloc/io.hpp"
#include "catalloc/mallows.hpp"
#include "catalloc/mechanism.hpp"
#include "catalloc/spne.hpp"

namespace catalloc::cli {
namespace {

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::stringstream in(text);
  std::string part;
  while (std::getline(in, part, sep)) parts.push_back(part);
  return parts;
}

long long parse_integer(const std::string& text) {
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size()) throw ValidationError("\"" + text + "\" is not an integer");
  return v;
}

std::vector<BehaviorKind> plain_behaviors(const std::string& spec, int agents) {
  std::vector<BehaviorKind> kinds;
  for (const Behavior& b : parse_behaviors(spec, agents)) kinds.push_back(b.kind);
  return kinds;
}

void emit(std::ostream& out, const Json& j) { out << j.dump(2) << '\n'; }

std::string tuple_text(const std::vector<int>& xs) {
  std::string s = "(";
  for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? "," : "") + std::to_string(xs[i]);
  return s + ")";
}

struct RunArgs {
  std::string order, profile, behaviors, format = "json";
  bool trace = false;
};

int do_run(const RunArgs& a, std::ostream& out) {
  const PickingOrder order = read_order(a.order);
  const Profile profile = read_profile(a.profile);
  if (!(order.shape() == profile.shape())) throw ValidationError(a.profile + ": profile shape differs from the order's");
  const CsamResult result = run_csam(order, profile, parse_behaviors(a.behaviors, order.shape().agent_count()));
  const auto ranks = agent_ranks(profile, result.allocation);
  if (a.format == "text") {
    out << "allocation " << result.allocation.to_string() << '\n' << "ranks " << tuple_text(ranks) << '\n';
    out << "utilitarian " << utilitarian_rank(profile, result.allocation) << '\n';
    out << "egalitarian " << egalitarian_rank(profile, result.allocation) << '\n';
    if (a.trace) write_trace_lines(out, result.trace);
    return 0;
  }
  Json j = {{"allocation", to_json(result.allocation)},
            {"ranks", ranks},
            {"utilitarian", utilitarian_rank(profile, result.allocation)},
            {"egalitarian", egalitarian_rank(profile, result.allocation)},
            {"messages", message_count(result.trace)}};
  if (a.trace) {
    Json rounds = Json::array();
    for (const TraceRound& r : result.trace.rounds) rounds.push_back(to_json(r));
    j["trace"] = rounds;
  }
  emit(out, j);
  return 0;
}

struct AnalyzeArgs {
  std::string order, format = "json";
};

int do_analyze(const AnalyzeArgs& a, std::ostream& out) {
  const PickingOrder order = read_order(a.order);
  const auto& analytics = order.analytics();
  if (a.format == "text") {
    for (Agent j = 1; j <= order.shape().agent_count(); ++j) {
      const auto& s = analytics.of(j);
      out << "agent " << j << ": suborder " << tuple_text(s.suborder) << " slack " << tuple_text(s.slack) << " K "
          << s.uninterrupted_index << '\n';
    }
    return 0;
  }
  Json agents = Json::array();
  for (Agent j = 1; j <= order.shape().agent_count(); ++j) {
    const auto& s = analytics.of(j);
    agents.push_back({{"agent", j},
                      {"suborder", s.suborder},
                      {"slack", s.slack},
                      {"pick_round", s.pick_round},
                      {"uninterrupted_index", s.uninterrupted_index}});
  }
  emit(out, {{"order", order.to_string()}, {"agents", agents}});
  return 0;
}

struct BoundsArgs {
  std::string order, behaviors;
  std::vector<int> interrupter;
  bool strategic = false;
};

int do_bounds(const BoundsArgs& a, std::ostream& out) {
  if (!a.interrupter.empty()) {
    const InterrupterAudit audit = audit_interrupter_order(a.interrupter[0], a.interrupter[1]);
    emit(out, {{"order", audit.order.to_string()},
               {"derived", to_json(audit.derived)},
               {"claimed_majority_bound", audit.claimed_majority_bound},
               {"claimed_interrupter_bound", audit.claimed_interrupter_bound},
               {"claimed_egalitarian", audit.claimed_egalitarian},
               {"balanced_pessimistic_egalitarian", audit.balanced_pessimistic_egalitarian},
               {"claim_matches", audit.claim_matches},
               {"note", audit.note}});
    return 0;
  }
  if (a.order.empty()) throw ValidationError("bounds needs --order or --interrupter");
  const PickingOrder order = read_order(a.order);
  const int n = order.shape().agent_count();
  Json j = Json::object();
  if (!a.behaviors.empty()) j["worst_case"] = to_json(worst_case_report(order, plain_behaviors(a.behaviors, n)));
  if (a.strategic || a.behaviors.empty()) {
    std::vector<long long> s;
    for (Agent agent = 1; agent <= n; ++agent) s.push_back(strategic_bound(order, agent));
    j["strategic"] = s;
  }
  emit(out, j);
  return 0;
}

struct SearchArgs {
  int n = 0, p = 0;
  std::string behaviors, objective = "utilitarian", mode = "exhaustive";
  std::uint64_t seed = 0, budget = 1'000'000;
};

int do_search(const SearchArgs& a, std::ostream& out) {
  const auto kinds = plain_behaviors(a.behaviors, a.n);
  Objective objective;
  if (a.objective == "utilitarian") {
    objective = Objective::kUtilitarian;
  } else if (a.objective == "egalitarian") {
    objective = Objective::kEgalitarian;
  } else {
    throw ValidationError("objective must be utilitarian or egalitarian");
  }
  const SearchMode mode = a.mode == "random" ? SearchMode::random(a.seed, a.budget) : SearchMode::exhaustive(a.budget);
  if (a.mode != "random" && a.mode != "exhaustive") throw ValidationError("mode must be exhaustive or random");
  const SearchResult r = search_orders(a.n, a.p, kinds, objective, mode);
  emit(out, {{"order", to_json(r.order)},
             {"order_text", r.order.to_string()},
             {"score", r.score},
             {"evaluated", r.evaluated},
             {"report", to_json(worst_case_report(r.order, kinds))}});
  return 0;
}

struct WorstArgs {
  std::string order, behaviors, out;
  bool strategic = false;
};

int do_worst(const WorstArgs& a, std::ostream& out) {
  const PickingOrder order = read_order(a.order);
  Json j;
  if (a.strategic) {
    const Profile profile = strategic_worst_profile(order);
    const SpneResult eq = solve_spne(order, profile);
    std::vector<long long> bounds;
    for (Agent agent = 1; agent <= 2; ++agent) bounds.push_back(strategic_bound(order, agent));
    j = {{"profile", to_json(profile)},
         {"equilibrium", to_json(eq.allocation)},
         {"ranks", agent_ranks(profile, eq.allocation)},
         {"bounds", bounds}};
  } else {
    if (a.behaviors.empty()) throw ValidationError("worst-case needs --behaviors or --strategic");
    const auto kinds = plain_behaviors(a.behaviors, order.shape().agent_count());
    const WorstCaseWitness w = construct_worst_case(order, kinds);
    j = {{"profile", to_json(w.profile)},
         {"realized", to_json(w.realized)},
         {"realized_ranks", w.realized_ranks},
         {"bounds", to_json(worst_case_report(order, kinds))},
         {"near_optimal", to_json(w.near_optimal)},
         {"near_optimal_ranks", w.near_optimal_ranks}};
  }
  if (!a.out.empty()) {
    std::ofstream file(a.out);
    if (!file) throw ValidationError(a.out + ": cannot write file");
    file << j["profile"].dump(2) << '\n';
  }
  emit(out, j);
  return 0;
}

struct SpneArgs {
  std::string order, profile;
  bool trace = false;
  std::uint64_t state_cap = SpneOptions{}.state_cap;
};

int do_spne(const SpneArgs& a, std::ostream& out) {
  const PickingOrder order = read_order(a.order);
  const Profile profile = read_profile(a.profile);
  SpneOptions options;
  options.state_cap = a.state_cap;
  options.record_path = a.trace;
  const SpneResult r = solve_spne(order, profile, options);
  std::vector<long long> bounds;
  for (Agent j = 1; j <= order.shape().agent_count(); ++j) bounds.push_back(strategic_bound(order, j));
  Json j = {{"allocation", to_json(r.allocation)},
            {"ranks", agent_ranks(profile, r.allocation)},
            {"strategic_bounds", bounds},
            {"states", r.memo_states}};
  if (a.trace) {
    Json path = Json::array();
    for (const SpneStep& s : r.path) {
      path.push_back({{"round", s.round}, {"agent", s.pick.agent}, {"category", s.pick.category}, {"item", s.item}});
    }
    j["path"] = path;
  }
  emit(out, j);
  return 0;
}

struct AxiomArgs {
  std::string mechanism, mode = "exhaustive", axiom = "all";
  int n = 2, p = 2;
  std::uint64_t budget = CheckMode{}.budget;
};

Json verdict_json(const AxiomVerdict& v, const DomainShape& shape) {
  Json j = {{"axiom", v.axiom}, {"pass", v.pass}, {"coverage", v.coverage_label()}, {"cases", v.cases}};
  if (v.coverage == CheckMode::Kind::kSampled) j["note"] = "sampled coverage can refute but not verify";
  if (v.counterexample) {
    const Counterexample& cx = *v.counterexample;
    Json c = {{"profile", to_json(cx.profile)}, {"before", to_json(cx.before)}, {"after", to_json(cx.after)}};
    if (cx.agent != 0) c["agent"] = cx.agent;
    if (cx.deviation) {
      Json ranking = Json::array();
      for (BundleIndex b : cx.deviation->order()) ranking.push_back(to_json(decode_bundle(shape, b)));
      c["deviation"] = ranking;
    }
    if (cx.category != 0) {
      c["category"] = cx.category;
      c["permutation"] = cx.permutation;
    }
    j["counterexample"] = c;
  }
  return j;
}

int do_axioms(const AxiomArgs& a, std::ostream& out) {
  const DomainShape shape(a.n, a.p);
  DirectMechanism mech;
  if (a.mechanism == "sd") {
    std::vector<Agent> order(static_cast<std::size_t>(a.n));
    for (int j = 0; j < a.n; ++j) order[static_cast<std::size_t>(j)] = j + 1;
    mech = sd_direct(order);
  } else if (a.mechanism == "welfare") {
    mech = welfare_maximizer();
  } else if (a.mechanism == "bossy-sd") {
    mech = bossy_conditional_sd();
  } else if (a.mechanism == "nonneutral-sd") {
    mech = non_neutral_conditional_sd();
  } else {
    throw ValidationError("unknown mechanism \"" + a.mechanism + "\"");
  }

  CheckMode mode = CheckMode::exhaustive(a.budget);
  if (a.mode.rfind("sampled:", 0) == 0) {
    const auto parts = split(a.mode, ':');
    if (parts.size() != 3) throw ValidationError("sampled mode is sampled:COUNT:SEED");
    mode = CheckMode::sampled(static_cast<std::uint64_t>(parse_integer(parts[1])),
                              static_cast<std::uint64_t>(parse_integer(parts[2])));
  } else if (a.mode != "exhaustive") {
    throw ValidationError("mode must be exhaustive or sampled:COUNT:SEED");
  }

  using Checker = AxiomVerdict (*)(const DirectMechanism&, const DomainShape&, const CheckMode&);
  const std::vector<std::pair<std::string, Checker>> checks = {{"sp", check_strategy_proofness},
                                                               {"nb", check_non_bossiness},
                                                               {"cwn", check_category_wise_neutrality},
                                                               {"po", check_pareto_optimality}};
  Json verdicts = Json::array();
  bool matched = false;
  for (const auto& [tag, check] : checks) {
    if (a.axiom != "all" && a.axiom != tag) continue;
    matched = true;
    verdicts.push_back(verdict_json(check(mech, shape, mode), shape));
  }
  if (!matched) throw ValidationError("axiom must be all, sp, nb, cwn or po");
  emit(out, {{"mechanism", mech.name}, {"n", a.n}, {"p", a.p}, {"verdicts", verdicts}});
  return 0;
}

struct ExperimentArgs {
  std::string config, n, phi, out;
  int p = 0;
  std::uint64_t samples = 0, seed = 0;
  unsigned threads = 0;
  bool seed_given = false;
};

MechanismConfig mechanism_from_json(const Json& j, const std::string& source) {
  if (!j.is_object() || !j.contains("family") || !j.contains("behavior")) {
    throw ValidationError(source + ":/mechanisms: each entry needs \"family\" and \"behavior\"");
  }
  MechanismConfig mc;
  const auto family = j["family"].get<std::string>();
  const auto behavior = j["behavior"].get<std::string>();
  if (family == "sd") {
    mc.family = OrderFamily::kSerialDictatorship;
  } else if (family == "balanced") {
    mc.family = OrderFamily::kBalanced;
  } else {
    throw ValidationError(source + ":/mechanisms: unknown family \"" + family + "\"");
  }
  if (behavior == "opt") {
    mc.behavior = BehaviorKind::kOptimistic;
  } else if (behavior == "pess") {
    mc.behavior = BehaviorKind::kPessimistic;
  } else {
    throw ValidationError(source + ":/mechanisms: unknown behavior \"" + behavior + "\"");
  }
  return mc;
}

int do_experiment(const ExperimentArgs& a, std::ostream& out) {
  ExperimentConfig config;
  config.phis.clear();
  if (!a.config.empty()) {
    const Json j = read_json_file(a.config);
    try {
      if (j.contains("p")) config.categories = j["p"].get<int>();
      if (j.contains("n")) {
        config.agents = j["n"].is_string() ? parse_int_list(j["n"].get<std::string>()) : j["n"].get<std::vector<int>>();
      }
      if (j.contains("phi")) config.phis = j["phi"].get<std::vector<double>>();
      if (j.contains("samples")) config.samples = j["samples"].get<std::uint64_t>();
      if (j.contains("seed")) config.seed = j["seed"].get<std::uint64_t>();
      if (j.contains("mechanisms")) {
        config.mechanisms.clear();
        for (const Json& m : j["mechanisms"]) config.mechanisms.push_back(mechanism_from_json(m, a.config));
      }
    } catch (const Json::exception& e) {
      throw ValidationError(a.config + ": " + e.what());
    }
  }
  if (a.p != 0) config.categories = a.p;
  if (!a.n.empty()) config.agents = parse_int_list(a.n);
  if (!a.phi.empty()) config.phis = parse_double_list(a.phi);
  if (a.samples != 0) config.samples = a.samples;
  if (a.seed_given) config.seed = a.seed;
  config.threads = a.threads;

  const auto rows = run_experiment(config);
  if (a.out.empty()) {
    write_experiment_csv(out, rows);
  } else {
    std::ofstream file(a.out);
    if (!file) throw ValidationError(a.out + ": cannot write file");
    write_experiment_csv(file, rows);
    std::uint64_t violations = 0;
    for (const auto& r : rows) violations += r.bound_violations;
    out << "wrote " << rows.size() << " rows to " << a.out << " (bound violations: " << violations << ")\n";
  }
  return 0;
}

}  // namespace

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  if (const auto dots = text.find(".."); dots != std::string::npos) {
    const long long lo = parse_integer(text.substr(0, dots));
    const long long hi = parse_integer(text.substr(dots + 2));
    if (lo > hi) throw ValidationError("empty range \"" + text + "\"");
    for (long long v = lo; v <= hi; ++v) out.push_back(static_cast<int>(v));
    return out;
  }
  for (const auto& part : split(text, ',')) out.push_back(static_cast<int>(parse_integer(part)));
  if (out.empty()) throw ValidationError("empty integer list");
  return out;
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  for (const auto& part : split(text, ',')) {
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(part, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != part.size()) throw ValidationError("\"" + part + "\" is not a number");
    out.push_back(v);
  }
  if (out.empty()) throw ValidationError("empty number list");
  return out;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Categorized sequential allocation toolkit", "catalloc"};
  app.require_subcommand(1);
  const std::vector<std::string> formats{"json", "text"};

  RunArgs run;
  auto* run_cmd = app.add_subcommand("run", "Execute a sequential allocation and report the outcome");
  run_cmd->add_option("--order", run.order, "Picking order JSON")->required();
  run_cmd->add_option("--profile", run.profile, "Profile JSON")->required();
  run_cmd->add_option("--behaviors", run.behaviors, "Comma list per agent: opt, pess or script:FILE")->required();
  run_cmd->add_flag("--trace", run.trace, "Include the per-round trace");
  run_cmd->add_option("--format", run.format, "json or text")->check(CLI::IsMember(formats));

  AnalyzeArgs analyze;
  auto* analyze_cmd = app.add_subcommand("analyze-order", "Per-agent suborders, slack and uninterrupted index");
  analyze_cmd->add_option("--order", analyze.order, "Picking order JSON")->required();
  analyze_cmd->add_option("--format", analyze.format, "json or text")->check(CLI::IsMember(formats));

  BoundsArgs bounds;
  auto* bounds_cmd = app.add_subcommand("bounds", "Worst-case rank bounds of an order");
  bounds_cmd->add_option("--order", bounds.order, "Picking order JSON");
  bounds_cmd->add_option("--behaviors", bounds.behaviors, "Comma list per agent: opt or pess");
  bounds_cmd->add_flag("--strategic", bounds.strategic, "Also report the strategic-agent bound");
  bounds_cmd->add_option("--interrupter", bounds.interrupter, "N P: audit the mixed interrupter order")
      ->expected(2)
      ->excludes("--order");

  SearchArgs search;
  auto* search_cmd = app.add_subcommand("search", "Find the order minimizing a worst-case objective");
  search_cmd->add_option("--n", search.n, "Agents")->required();
  search_cmd->add_option("--p", search.p, "Categories")->required();
  search_cmd->add_option("--behaviors", search.behaviors, "Comma list per agent: opt or pess")->required();
  search_cmd->add_option("--objective", search.objective, "utilitarian or egalitarian");
  search_cmd->add_option("--mode", search.mode, "exhaustive or random");
  search_cmd->add_option("--seed", search.seed, "Seed for random mode");
  search_cmd->add_option("--budget", search.budget, "Maximum orders examined");

  WorstArgs worst;
  auto* worst_cmd = app.add_subcommand("worst-case", "Build a profile attaining the worst-case bounds");
  worst_cmd->add_option("--order", worst.order, "Picking order JSON")->required();
  worst_cmd->add_option("--behaviors", worst.behaviors, "Comma list per agent: opt or pess");
  worst_cmd->add_flag("--strategic", worst.strategic, "Two strategic agents instead");
  worst_cmd->add_option("--out", worst.out, "Also write the profile JSON here");

  SpneArgs spne;
  auto* spne_cmd = app.add_subcommand("spne", "Subgame-perfect outcome with strategic agents");
  spne_cmd->add_option("--order", spne.order, "Picking order JSON")->required();
  spne_cmd->add_option("--profile", spne.profile, "Profile JSON")->required();
  spne_cmd->add_flag("--trace", spne.trace, "Include the equilibrium path");
  spne_cmd->add_option("--state-cap", spne.state_cap, "Refuse games with more states");

  AxiomArgs axioms;
  auto* axioms_cmd = app.add_subcommand("check-axioms", "Check axioms of a direct mechanism");
  axioms_cmd->add_option("--mechanism", axioms.mechanism, "sd, welfare, bossy-sd or nonneutral-sd")->required();
  axioms_cmd->add_option("--n", axioms.n, "Agents");
  axioms_cmd->add_option("--p", axioms.p, "Categories");
  axioms_cmd->add_option("--mode", axioms.mode, "exhaustive or sampled:COUNT:SEED");
  axioms_cmd->add_option("--axiom", axioms.axiom, "all, sp, nb, cwn or po");
  axioms_cmd->add_option("--budget", axioms.budget, "Evaluation budget for exhaustive mode");

  ExperimentArgs exp;
  auto* exp_cmd = app.add_subcommand("experiment", "Expected ranks under Mallows preferences (CSV)");
  exp_cmd->add_option("--config", exp.config, "Experiment JSON (flags override)");
  exp_cmd->add_option("--p", exp.p, "Categories");
  exp_cmd->add_option("--n", exp.n, "Agents: 2..11, 3 or 2,4,6");
  exp_cmd->add_option("--phi", exp.phi, "Dispersion list, e.g. 0.5 or 0.2,0.5,1");
  exp_cmd->add_option("--samples", exp.samples, "Replicates per grid point");
  exp_cmd->add_option("--seed", exp.seed, "Master seed")->each([&](const std::string&) { exp.seed_given = true; });
  exp_cmd->add_option("--threads", exp.threads, "Worker threads (0 = all cores)");
  exp_cmd->add_option("--out", exp.out, "CSV path (stdout when omitted)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n' << app.help();
    return 1;
  }

  try {
    if (*run_cmd) return do_run(run, out);
    if (*analyze_cmd) return do_analyze(analyze, out);
    if (*bounds_cmd) return do_bounds(bounds, out);
    if (*search_cmd) return do_search(search, out);
    if (*worst_cmd) return do_worst(worst, out);
    if (*spne_cmd) return do_spne(spne, out);
    if (*axioms_cmd) return do_axioms(axioms, out);
    if (*exp_cmd) return do_experiment(exp, out);
  } catch (const CapacityError& e) {
    err << "refused: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

}  // namespace catalloc::cli
