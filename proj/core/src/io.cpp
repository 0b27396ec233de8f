#include "catalloc/io.hpp"

#include <fstream>
#include <ostream>
#include <sstream>

#include "catalloc/errors.hpp"

namespace catalloc {
namespace {

[[noreturn]] void fail(const std::string& source, const std::string& where, const std::string& what) {
  throw ValidationError(source + ":" + (where.empty() ? "/" : where) + ": " + what);
}

const Json& field(const Json& j, const char* key, const std::string& source, const std::string& where) {
  if (!j.is_object()) fail(source, where, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) fail(source, where, std::string("missing field \"") + key + "\"");
  return *it;
}

int integer(const Json& j, const std::string& source, const std::string& where) {
  if (!j.is_number_integer()) fail(source, where, "expected an integer");
  return j.get<int>();
}

int positive(const Json& j, const std::string& source, const std::string& where) {
  const int v = integer(j, source, where);
  if (v < 1) fail(source, where, "expected a positive integer, got " + std::to_string(v));
  return v;
}

DomainShape shape_from(const Json& j, const std::string& source) {
  const int n = positive(field(j, "n", source, ""), source, "/n");
  const int p = positive(field(j, "p", source, ""), source, "/p");
  try {
    return DomainShape(n, p);
  } catch (const CapacityError& e) {
    throw CapacityError(source + ": " + e.what());
  }
}

Bundle bundle_from(const Json& j, const DomainShape& shape, const std::string& source, const std::string& where) {
  Bundle b;
  if (j.is_string()) {
    const auto text = j.get<std::string>();
    if (shape.item_count() > 9) fail(source, where, "digit-string bundles need n <= 9, use an array");
    for (char ch : text) {
      if (ch < '1' || ch > '9') fail(source, where, "bundle string \"" + text + "\" has a non-digit item");
      b.items.push_back(ch - '0');
    }
  } else if (j.is_array()) {
    for (std::size_t c = 0; c < j.size(); ++c) b.items.push_back(integer(j[c], source, where + "/" + std::to_string(c)));
  } else {
    fail(source, where, "expected a bundle (array of items or digit string)");
  }
  if (static_cast<int>(b.size()) != shape.category_count()) {
    fail(source, where, "bundle has " + std::to_string(b.size()) + " items, expected p = " +
                            std::to_string(shape.category_count()));
  }
  for (Category c = 1; c <= shape.category_count(); ++c) {
    if (b[c] < 1 || b[c] > shape.item_count()) {
      fail(source, where, "item " + std::to_string(b[c]) + " of category " + std::to_string(c) + " is outside 1.." +
                              std::to_string(shape.item_count()));
    }
  }
  return b;
}

}  // namespace

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError(path + ": cannot open file");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ValidationError(path + ": byte " + std::to_string(e.byte) + ": malformed JSON");
  }
}

PickingOrder order_from_json(const Json& j, const std::string& source) {
  const DomainShape shape = shape_from(j, source);
  const Json& rounds = field(j, "rounds", source, "");
  if (!rounds.is_array()) fail(source, "/rounds", "expected an array of [agent, category] pairs");
  std::vector<Pick> picks;
  for (std::size_t t = 0; t < rounds.size(); ++t) {
    const std::string where = "/rounds/" + std::to_string(t);
    const Json& r = rounds[t];
    if (!r.is_array() || r.size() != 2) fail(source, where, "expected an [agent, category] pair");
    picks.push_back({positive(r[0], source, where + "/0"), positive(r[1], source, where + "/1")});
  }
  try {
    return PickingOrder(shape, std::move(picks));
  } catch (const ValidationError& e) {
    fail(source, "/rounds", e.what());
  }
}

Profile profile_from_json(const Json& j, const std::string& source) {
  const DomainShape shape = shape_from(j, source);
  const Json& prefs = field(j, "preferences", source, "");
  if (!prefs.is_array()) fail(source, "/preferences", "expected one ranking per agent");
  if (static_cast<int>(prefs.size()) != shape.agent_count()) {
    fail(source, "/preferences", "has " + std::to_string(prefs.size()) + " rankings, expected n = " +
                                     std::to_string(shape.agent_count()));
  }
  std::vector<Preference> out;
  for (std::size_t a = 0; a < prefs.size(); ++a) {
    const std::string where = "/preferences/" + std::to_string(a);
    if (!prefs[a].is_array()) fail(source, where, "expected a ranking (array of bundles)");
    if (prefs[a].size() != shape.bundle_count()) {
      fail(source, where, "ranking lists " + std::to_string(prefs[a].size()) + " bundles, expected n^p = " +
                              std::to_string(shape.bundle_count()));
    }
    std::vector<bool> seen(shape.bundle_count(), false);
    std::vector<BundleIndex> order;
    for (std::size_t r = 0; r < prefs[a].size(); ++r) {
      const std::string at = where + "/" + std::to_string(r);
      const Bundle b = bundle_from(prefs[a][r], shape, source, at);
      const BundleIndex idx = encode_bundle(shape, b);
      if (seen[idx]) fail(source, at, "bundle " + b.to_string() + " is ranked twice");
      seen[idx] = true;
      order.push_back(idx);
    }
    out.emplace_back(shape, std::move(order));
  }
  return Profile(shape, std::move(out));
}

Allocation allocation_from_json(const Json& j, const DomainShape& shape, const std::string& source) {
  const Json& bundles = field(j, "bundles", source, "");
  if (!bundles.is_object()) fail(source, "/bundles", "expected an object keyed by agent");
  std::vector<Bundle> out(static_cast<std::size_t>(shape.agent_count()));
  std::vector<bool> given(out.size(), false);
  for (const auto& [key, value] : bundles.items()) {
    int agent = 0;
    try {
      agent = std::stoi(key);
    } catch (const std::exception&) {
      fail(source, "/bundles/" + key, "agent key is not a number");
    }
    if (agent < 1 || agent > shape.agent_count()) fail(source, "/bundles/" + key, "agent out of range");
    out[static_cast<std::size_t>(agent - 1)] = bundle_from(value, shape, source, "/bundles/" + key);
    given[static_cast<std::size_t>(agent - 1)] = true;
  }
  for (std::size_t a = 0; a < given.size(); ++a) {
    if (!given[a]) fail(source, "/bundles", "no bundle for agent " + std::to_string(a + 1));
  }
  Allocation alloc(std::move(out));
  const AllocationReport report = validate_allocation(shape, alloc);
  if (!report.ok()) fail(source, "/bundles", report.violation->message);
  return alloc;
}

PickingOrder read_order(const std::string& path) { return order_from_json(read_json_file(path), path); }

Profile read_profile(const std::string& path) { return profile_from_json(read_json_file(path), path); }

Json to_json(const Bundle& bundle) { return Json(bundle.items); }

Json to_json(const PickingOrder& order) {
  Json rounds = Json::array();
  for (const Pick& pk : order.rounds()) rounds.push_back({pk.agent, pk.category});
  return {{"n", order.shape().agent_count()}, {"p", order.shape().category_count()}, {"rounds", rounds}};
}

Json to_json(const Profile& profile) {
  const auto& shape = profile.shape();
  Json prefs = Json::array();
  for (const Preference& pref : profile.preferences()) {
    Json ranking = Json::array();
    for (BundleIndex b : pref.order()) ranking.push_back(to_json(decode_bundle(shape, b)));
    prefs.push_back(std::move(ranking));
  }
  return {{"n", shape.agent_count()}, {"p", shape.category_count()}, {"preferences", prefs}};
}

Json to_json(const Allocation& alloc) {
  Json bundles = Json::object();
  for (Agent j = 1; j <= alloc.agent_count(); ++j) bundles[std::to_string(j)] = to_json(alloc.of(j));
  return {{"bundles", bundles}};
}

Json to_json(const RankBoundReport& report) {
  Json agents = Json::array();
  for (std::size_t j = 0; j < report.agents.size(); ++j) {
    agents.push_back({{"agent", j + 1}, {"behavior", behavior_tag(report.agents[j].behavior)},
                      {"bound", report.agents[j].bound}});
  }
  return {{"agents", agents}, {"utilitarian", report.utilitarian}, {"egalitarian", report.egalitarian}};
}

Json to_json(const TraceRound& round) {
  Json available = Json::array();
  for (const auto& items : round.available) available.push_back(items);
  Json j = {{"round", round.round},
            {"agent", round.pick.agent},
            {"category", round.pick.category},
            {"item", round.item},
            {"available", available}};
  if (round.optimistic_target) j["target"] = to_json(*round.optimistic_target);
  if (!round.worst_cases.empty()) {
    Json worst = Json::array();
    for (const WorstCase& w : round.worst_cases) {
      worst.push_back({{"item", w.item}, {"worst", to_json(w.worst)}, {"worst_rank", w.worst_rank}});
    }
    j["worst_cases"] = worst;
  }
  return j;
}

BehaviorAssignment parse_behaviors(const std::string& spec, int agents) {
  BehaviorAssignment out;
  std::stringstream in(spec);
  std::string token;
  while (std::getline(in, token, ',')) {
    if (token == "opt") {
      out.push_back(Behavior::optimistic());
    } else if (token == "pess") {
      out.push_back(Behavior::pessimistic());
    } else if (token.rfind("script:", 0) == 0) {
      const std::string path = token.substr(7);
      const Json j = read_json_file(path);
      if (!j.is_array()) fail(path, "", "script must be an array of items");
      std::vector<Item> items;
      for (std::size_t i = 0; i < j.size(); ++i) items.push_back(positive(j[i], path, "/" + std::to_string(i)));
      out.push_back(Behavior::scripted(std::move(items)));
    } else {
      throw ValidationError("unknown behavior \"" + token + "\" (expected opt, pess or script:FILE)");
    }
  }
  if (static_cast<int>(out.size()) != agents) {
    throw ValidationError("behaviors list " + std::to_string(out.size()) + " agents, expected " + std::to_string(agents));
  }
  return out;
}

void write_trace_lines(std::ostream& out, const ExecutionTrace& trace) {
  for (const TraceRound& round : trace.rounds) out << to_json(round).dump() << '\n';
}

}  // namespace catalloc
