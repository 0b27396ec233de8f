#include "catalloc/adversarial.hpp"

#include <algorithm>
#include <string>

#include "catalloc/bounds.hpp"
#include "catalloc/errors.hpp"

namespace catalloc {
namespace {

void check_witness_size(const DomainShape& shape) {
  const auto entries = shape.bundle_count() * static_cast<std::size_t>(shape.agent_count());
  if (entries > kMaxWitnessEntries) {
    throw CapacityError("witness profile would hold " + std::to_string(entries) + " ranks, above " +
                        std::to_string(kMaxWitnessEntries));
  }
}

// (j, ..., j) with item d in category c
BundleIndex own_except(const DomainShape& shape, Agent j, Category c, Item d) {
  Bundle b = uniform_bundle(shape, j);
  b[c] = d;
  return encode_bundle(shape, b);
}

// All bundles whose component in category c lies in choices[c-1], ascending.
std::vector<BundleIndex> product_of(const DomainShape& shape, const std::vector<std::vector<Item>>& choices) {
  std::vector<BundleIndex> out{0};
  for (Category c = 1; c <= shape.category_count(); ++c) {
    std::vector<BundleIndex> next;
    next.reserve(out.size() * choices[static_cast<std::size_t>(c - 1)].size());
    for (BundleIndex prefix : out) {
      for (Item x : choices[static_cast<std::size_t>(c - 1)]) {
        next.push_back(prefix + static_cast<BundleIndex>(x - 1) * shape.place_value(c));
      }
    }
    out = std::move(next);
  }
  return out;
}

struct Layout {
  std::vector<BundleIndex> pins;    // ranked first, in this order
  std::vector<BundleIndex> bottom;  // ranked last, best first
  bool pin_may_be_bottom = false;
};

// Latest pick strictly between j's (K-1)-th and K-th picks whose category is
// one of j's tail categories; prefers the predecessor in her K-th category.
BundleIndex gap_pin(const PickingOrder& order, Agent j) {
  const auto& shape = order.shape();
  const auto& a = order.analytics().of(j);
  const int p = shape.category_count();
  const int k = a.uninterrupted_index;
  const int lo = a.round_of(a.suborder_at(k - 1));
  const int hi = a.round_of(a.suborder_at(k));

  const Category ck = a.suborder_at(k);
  const Agent pred = predecessor_in_category(order, ck, j);
  const int pred_round = order.round_of(pred, ck);
  if (pred_round > lo && pred_round < hi) return own_except(shape, j, ck, pred);

  for (int t = hi - 1; t > lo; --t) {
    const Pick pk = order.at_round(t);
    for (int l = k; l <= p; ++l) {
      if (a.suborder_at(l) == pk.category) return own_except(shape, j, pk.category, pk.agent);
    }
  }
  throw ConstructionError("agent " + std::to_string(j) + " has no interrupting pick before position " +
                          std::to_string(k) + " in " + order.to_string());
}

Layout optimistic_layout(const PickingOrder& order, const RemainingItemSets& remaining, Agent j) {
  const auto& shape = order.shape();
  const auto& a = order.analytics().of(j);
  const int p = shape.category_count();
  const int k = a.uninterrupted_index;
  const Pick first = order.at_round(1);

  std::vector<std::vector<Item>> choices(static_cast<std::size_t>(p));
  for (int l = 1; l <= p; ++l) {
    const Category c = a.suborder_at(l);
    choices[static_cast<std::size_t>(c - 1)] = l < k ? std::vector<Item>{j} : remaining.at(c, a.round_of(c));
  }
  Layout layout;
  const BundleIndex own = encode_bundle(shape, uniform_bundle(shape, j));
  layout.bottom.push_back(own);
  for (BundleIndex b : product_of(shape, choices)) {
    if (b != own) layout.bottom.push_back(b);
  }

  if (j == first.agent) {
    const Agent last = category_pickers(order, first.category).back();
    if (k == 1) {
      layout.pins.push_back(own);
      layout.pin_may_be_bottom = true;
    } else {
      layout.pins.push_back(gap_pin(order, j));
    }
    layout.pins.push_back(own_except(shape, j, first.category, last));
  } else {
    layout.pins.push_back(own_except(shape, j, first.category, predecessor_in_category(order, first.category, j)));
    if (k > 1) {
      const BundleIndex g = gap_pin(order, j);
      if (g != layout.pins.front()) layout.pins.push_back(g);
    }
  }
  return layout;
}

Layout pessimistic_layout(const PickingOrder& order, const RemainingItemSets& remaining, Agent j) {
  const auto& shape = order.shape();
  const auto& a = order.analytics().of(j);
  const int p = shape.category_count();
  const Pick first = order.at_round(1);
  const Agent last = category_pickers(order, first.category).back();
  const BundleIndex first_pin = j == first.agent
                                    ? own_except(shape, j, first.category, last)
                                    : own_except(shape, j, first.category,
                                                 predecessor_in_category(order, first.category, j));

  Layout layout;
  layout.pins.push_back(first_pin);
  layout.bottom.push_back(encode_bundle(shape, uniform_bundle(shape, j)));
  for (int l = p; l >= 1; --l) {
    const Category c = a.suborder_at(l);
    for (Item d : remaining.at(c, a.round_of(c))) {
      if (d == j) continue;
      const BundleIndex b = own_except(shape, j, c, d);
      if (b != first_pin) layout.bottom.push_back(b);
    }
  }
  // The first mover's pin came out of her own bottom block; its slot is
  // taken by the bundle made entirely of the pin's item.
  if (j == first.agent) layout.bottom.push_back(encode_bundle(shape, uniform_bundle(shape, last)));
  return layout;
}

Preference assemble(const PickingOrder& order, const Layout& layout, Agent j) {
  const auto& shape = order.shape();
  std::vector<char> role(shape.bundle_count(), 0);  // 1 pin, 2 bottom
  for (BundleIndex b : layout.bottom) role[b] = 2;
  for (BundleIndex b : layout.pins) {
    if (role[b] == 1) throw ConstructionError("duplicate pin for agent " + std::to_string(j));
    if (role[b] == 2 && !layout.pin_may_be_bottom) {
      throw ConstructionError("pin " + decode_bundle(shape, b).to_string() + " of agent " + std::to_string(j) +
                              " falls in her bottom block");
    }
    role[b] = 1;
  }
  std::vector<BundleIndex> ranking = layout.pins;
  ranking.reserve(shape.bundle_count());
  for (BundleIndex b = 0; b < shape.bundle_count(); ++b) {
    if (role[b] == 0) ranking.push_back(b);
  }
  for (BundleIndex b : layout.bottom) {
    if (role[b] == 2) ranking.push_back(b);
  }
  return Preference(shape, std::move(ranking));
}

void check_behaviors(const PickingOrder& order, const std::vector<BehaviorKind>& behaviors) {
  if (static_cast<int>(behaviors.size()) != order.shape().agent_count()) {
    throw ValidationError("behaviors cover " + std::to_string(behaviors.size()) + " agents, expected " +
                          std::to_string(order.shape().agent_count()));
  }
  for (BehaviorKind kind : behaviors) {
    if (kind == BehaviorKind::kScripted) throw UnsupportedError("worst-case witnesses need optimistic/pessimistic agents");
  }
}

}  // namespace

Allocation near_optimal_allocation(const PickingOrder& order) {
  const auto& shape = order.shape();
  const Pick first = order.at_round(1);
  std::vector<Bundle> bundles;
  for (Agent j = 1; j <= shape.agent_count(); ++j) {
    Bundle b = uniform_bundle(shape, j);
    b[first.category] = predecessor_in_category(order, first.category, j);
    bundles.push_back(std::move(b));
  }
  return Allocation(std::move(bundles));
}

Profile worst_case_profile(const PickingOrder& order, const std::vector<BehaviorKind>& behaviors) {
  check_behaviors(order, behaviors);
  const auto& shape = order.shape();
  check_witness_size(shape);
  const int n = shape.agent_count();
  if (n == 1) return Profile(shape, {Preference(shape, {0})});

  const RemainingItemSets remaining(order);
  std::vector<Preference> prefs;
  for (Agent j = 1; j <= n; ++j) {
    // With one category both behaviors take the best available item.
    const bool pessimistic =
        behaviors[static_cast<std::size_t>(j - 1)] == BehaviorKind::kPessimistic && shape.category_count() > 1;
    const Layout layout = pessimistic ? pessimistic_layout(order, remaining, j) : optimistic_layout(order, remaining, j);
    prefs.push_back(assemble(order, layout, j));
  }
  return Profile(shape, std::move(prefs));
}

WorstCaseWitness construct_worst_case(const PickingOrder& order, const std::vector<BehaviorKind>& behaviors) {
  Profile profile = worst_case_profile(order, behaviors);
  const auto& shape = order.shape();
  const int n = shape.agent_count();

  BehaviorAssignment assignment;
  for (BehaviorKind kind : behaviors) assignment.push_back(Behavior{kind, {}});
  Allocation realized = run_csam(order, profile, assignment).allocation;
  std::vector<int> realized_ranks = agent_ranks(profile, realized);
  for (Agent j = 1; j <= n; ++j) {
    const auto idx = static_cast<std::size_t>(j - 1);
    if (!(realized.of(j) == uniform_bundle(shape, j)) || realized_ranks[idx] != bound_for(order, j, behaviors[idx])) {
      throw ConstructionError("replay of the witness for " + order.to_string() + " gave agent " + std::to_string(j) +
                              " bundle " + realized.of(j).to_string() + " at rank " +
                              std::to_string(realized_ranks[idx]) + ", expected own label at rank " +
                              std::to_string(bound_for(order, j, behaviors[idx])));
    }
  }

  Allocation near = near_optimal_allocation(order);
  std::vector<int> near_ranks = agent_ranks(profile, near);
  const auto ones = std::count(near_ranks.begin(), near_ranks.end(), 1);
  const int worst = *std::max_element(near_ranks.begin(), near_ranks.end());
  if (ones < n - 1 || worst > 2) {
    throw ConstructionError("near-optimal allocation for " + order.to_string() + " is not within one rank of optimal");
  }
  return WorstCaseWitness{std::move(profile), std::move(realized), std::move(realized_ranks), std::move(near),
                          std::move(near_ranks)};
}

namespace {

using Partial = std::vector<Item>;  // length p, 0 for categories not yet fixed

struct StrategicPiece {
  std::vector<Partial> ranking[2];
  Partial outcome[2];
};

StrategicPiece strategic_piece(std::vector<Pick> rounds, int categories) {
  if (rounds.empty()) {
    StrategicPiece base;
    for (int i = 0; i < 2; ++i) {
      base.ranking[i] = {Partial(static_cast<std::size_t>(categories), 0)};
      base.outcome[i] = Partial(static_cast<std::size_t>(categories), 0);
    }
    return base;
  }
  const Pick first = rounds.front();
  const auto c = static_cast<std::size_t>(first.category - 1);
  const int f = first.agent - 1;
  const int o = 1 - f;
  std::erase_if(rounds, [&](const Pick& pk) { return pk.category == first.category; });
  StrategicPiece sub = strategic_piece(std::move(rounds), categories);

  StrategicPiece piece;
  for (const Partial& s : sub.ranking[f]) {
    for (Item x : {1, 2}) {
      Partial b = s;
      b[c] = x;
      piece.ranking[f].push_back(std::move(b));
    }
  }
  for (Item x : {1, 2}) {
    for (const Partial& s : sub.ranking[o]) {
      Partial b = s;
      b[c] = x;
      piece.ranking[o].push_back(std::move(b));
    }
  }
  piece.outcome[f] = sub.outcome[f];
  piece.outcome[f][c] = 1;
  piece.outcome[o] = sub.outcome[o];
  piece.outcome[o][c] = 2;
  return piece;
}

}  // namespace

Profile strategic_worst_profile(const PickingOrder& order) {
  const auto& shape = order.shape();
  if (shape.agent_count() != 2) throw UnsupportedError("strategic worst-case profiles are built for two agents only");
  check_witness_size(shape);
  const StrategicPiece piece =
      strategic_piece(std::vector<Pick>(order.rounds().begin(), order.rounds().end()), shape.category_count());
  std::vector<Preference> prefs;
  for (const auto& ranking : piece.ranking) {
    std::vector<BundleIndex> order_idx;
    order_idx.reserve(ranking.size());
    for (const Partial& b : ranking) order_idx.push_back(encode_bundle(shape, Bundle(b)));
    prefs.emplace_back(shape, std::move(order_idx));
  }
  return Profile(shape, std::move(prefs));
}

}  // namespace catalloc
