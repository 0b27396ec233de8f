#pragma once

// Basic categorized domain: p categories of n items each, allocated to n
// agents so that every agent receives exactly one item per category.
//
// Agents, categories and items are 1-based everywhere in the public API
// (item identifiers are category-local). Bundles are addressed internally by
// a 0-based mixed-radix index so that rank tables are flat arrays.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace catalloc {

using Agent = int;
using Category = int;
using Item = int;
using BundleIndex = std::size_t;

// Largest bundle space we are willing to tabulate per agent.
inline constexpr std::size_t kMaxBundleSpace = std::size_t{1} << 20;

class DomainShape {
 public:
  // Throws CapacityError when n^p exceeds kMaxBundleSpace.
  DomainShape(int agents, int categories);

  int agent_count() const noexcept { return agents_; }
  // Items per category equals the number of agents in a basic domain.
  int item_count() const noexcept { return agents_; }
  int category_count() const noexcept { return categories_; }
  std::size_t bundle_count() const noexcept { return bundle_count_; }

  // Item of category c (1-based) in the bundle with the given index.
  Item item_of(BundleIndex index, Category c) const noexcept {
    return static_cast<Item>((index / place_[static_cast<std::size_t>(c - 1)]) %
                             static_cast<std::size_t>(agents_)) + 1;
  }
  std::size_t place_value(Category c) const noexcept {
    return place_[static_cast<std::size_t>(c - 1)];
  }

  friend bool operator==(const DomainShape& a, const DomainShape& b) noexcept {
    return a.agents_ == b.agents_ && a.categories_ == b.categories_;
  }

 private:
  int agents_;
  int categories_;
  std::size_t bundle_count_;
  std::vector<std::size_t> place_;  // n^(p-c) for c = 1..p
};

struct Bundle {
  std::vector<Item> items;  // items[c-1] is the item from category c

  Bundle() = default;
  explicit Bundle(std::vector<Item> components) : items(std::move(components)) {}
  Bundle(std::initializer_list<Item> components) : items(components) {}

  Item operator[](Category c) const { return items.at(static_cast<std::size_t>(c - 1)); }
  Item& operator[](Category c) { return items.at(static_cast<std::size_t>(c - 1)); }
  std::size_t size() const noexcept { return items.size(); }

  // "12" style when every item is a single digit, "(1,12)" otherwise.
  std::string to_string() const;

  friend bool operator==(const Bundle&, const Bundle&) = default;
};

// (item, ..., item)
Bundle uniform_bundle(const DomainShape& shape, Item item);

// Throws ValidationError unless the bundle has p components in 1..n.
void check_bundle(const DomainShape& shape, const Bundle& bundle);

// index = sum_c (items[c]-1) * n^(p-c)
BundleIndex encode_bundle(const DomainShape& shape, const Bundle& bundle);
Bundle decode_bundle(const DomainShape& shape, BundleIndex index);

// A strict ranking of the whole bundle space, best first, together with
// its inverse (rank 1 = most preferred).
class Preference {
 public:
  // Throws ValidationError unless `order` is a permutation of the bundle space.
  Preference(DomainShape shape, std::vector<BundleIndex> order);
  static Preference from_bundles(const DomainShape& shape, const std::vector<Bundle>& ranking);

  const DomainShape& shape() const noexcept { return shape_; }
  std::span<const BundleIndex> order() const noexcept { return order_; }
  int rank(BundleIndex index) const { return rank_.at(index); }
  BundleIndex at_rank(int rank) const { return order_.at(static_cast<std::size_t>(rank - 1)); }
  BundleIndex top() const noexcept { return order_.front(); }
  BundleIndex bottom() const noexcept { return order_.back(); }

  friend bool operator==(const Preference& a, const Preference& b) noexcept {
    return a.shape_ == b.shape_ && a.order_ == b.order_;
  }

 private:
  DomainShape shape_;
  std::vector<BundleIndex> order_;
  std::vector<int> rank_;
};

int rank_of(const Preference& pref, const Bundle& bundle);

class Profile {
 public:
  // One preference per agent, all over `shape`.
  Profile(DomainShape shape, std::vector<Preference> preferences);

  const DomainShape& shape() const noexcept { return shape_; }
  const Preference& of(Agent agent) const { return prefs_.at(static_cast<std::size_t>(agent - 1)); }
  std::span<const Preference> preferences() const noexcept { return prefs_; }
  int agent_count() const noexcept { return static_cast<int>(prefs_.size()); }

  // Copy with one agent's ranking replaced.
  Profile with(Agent agent, Preference replacement) const;

  friend bool operator==(const Profile&, const Profile&) = default;

 private:
  DomainShape shape_;
  std::vector<Preference> prefs_;
};

class Allocation {
 public:
  Allocation() = default;
  explicit Allocation(std::vector<Bundle> bundles) : bundles_(std::move(bundles)) {}

  const Bundle& of(Agent agent) const { return bundles_.at(static_cast<std::size_t>(agent - 1)); }
  Bundle& of(Agent agent) { return bundles_.at(static_cast<std::size_t>(agent - 1)); }
  std::span<const Bundle> bundles() const noexcept { return bundles_; }
  int agent_count() const noexcept { return static_cast<int>(bundles_.size()); }

  std::string to_string() const;

  friend bool operator==(const Allocation&, const Allocation&) = default;

 private:
  std::vector<Bundle> bundles_;
};

struct AllocationViolation {
  enum class Kind { kAgentCount, kBundleLength, kItemOutOfRange, kDuplicateItem };
  Kind kind;
  Agent agent = 0;        // offending agent, when one can be named
  Category category = 0;  // offending category, when applicable
  Item item = 0;          // offending item, when applicable
  std::string message;
};

struct AllocationReport {
  std::optional<AllocationViolation> violation;
  bool ok() const noexcept { return !violation.has_value(); }
};

// Checks that every category's items are partitioned among the agents.
// Reports the first offending (category, item) in category-major order.
AllocationReport validate_allocation(const DomainShape& shape, const Allocation& alloc);

// Throws ValidationError carrying the violation message.
void require_valid_allocation(const DomainShape& shape, const Allocation& alloc);

// Sum and max over agents of the rank of the allocated bundle.
long long utilitarian_rank(const Profile& profile, const Allocation& alloc);
int egalitarian_rank(const Profile& profile, const Allocation& alloc);
std::vector<int> agent_ranks(const Profile& profile, const Allocation& alloc);

}  // namespace catalloc
