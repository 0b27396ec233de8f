#pragma once

#include <algorithm>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "catalloc/domain.hpp"
#include "catalloc/io.hpp"
#include "catalloc/picking_order.hpp"

namespace testing_support {

using namespace catalloc;

inline std::string data_path(const std::string& name) { return std::string(CATALLOC_DATA_DIR) + "/" + name; }

inline Preference ranking(const DomainShape& shape, const std::vector<std::string>& bundles) {
  std::vector<Bundle> out;
  for (const auto& s : bundles) {
    Bundle b;
    for (char ch : s) b.items.push_back(ch - '0');
    out.push_back(b);
  }
  return Preference::from_bundles(shape, out);
}

inline Bundle bundle(const std::string& s) {
  Bundle b;
  for (char ch : s) b.items.push_back(ch - '0');
  return b;
}

inline PickingOrder order_of(int n, int p, const std::vector<std::pair<int, int>>& rounds) {
  std::vector<Pick> picks;
  for (auto [a, c] : rounds) picks.push_back({a, c});
  return PickingOrder(DomainShape(n, p), picks);
}

inline PickingOrder random_order(int n, int p, std::mt19937_64& rng) {
  std::vector<Pick> picks;
  for (Agent j = 1; j <= n; ++j) {
    for (Category c = 1; c <= p; ++c) picks.push_back({j, c});
  }
  std::shuffle(picks.begin(), picks.end(), rng);
  return PickingOrder(DomainShape(n, p), picks);
}

inline Preference random_preference(const DomainShape& shape, std::mt19937_64& rng) {
  std::vector<BundleIndex> order(shape.bundle_count());
  std::iota(order.begin(), order.end(), BundleIndex{0});
  std::shuffle(order.begin(), order.end(), rng);
  return Preference(shape, order);
}

inline Profile random_profile(const DomainShape& shape, std::mt19937_64& rng) {
  std::vector<Preference> prefs;
  for (int j = 0; j < shape.agent_count(); ++j) prefs.push_back(random_preference(shape, rng));
  return Profile(shape, prefs);
}

// Every permutation of 0..m-1 in lexicographic order.
inline std::vector<std::vector<BundleIndex>> all_rankings(std::size_t m) {
  std::vector<BundleIndex> perm(m);
  std::iota(perm.begin(), perm.end(), BundleIndex{0});
  std::vector<std::vector<BundleIndex>> out;
  do {
    out.push_back(perm);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

// Every order over (agent, category) pairs.
inline std::vector<PickingOrder> all_orders(int n, int p) {
  std::vector<Pick> picks;
  for (Agent j = 1; j <= n; ++j) {
    for (Category c = 1; c <= p; ++c) picks.push_back({j, c});
  }
  std::vector<PickingOrder> out;
  do {
    out.emplace_back(DomainShape(n, p), picks);
  } while (std::next_permutation(picks.begin(), picks.end()));
  return out;
}

}  // namespace testing_support
