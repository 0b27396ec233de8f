#include "catalloc/domain.hpp"

#include <algorithm>
#include <sstream>

#include "catalloc/combinatorics.hpp"
#include "catalloc/errors.hpp"

namespace catalloc {

DomainShape::DomainShape(int agents, int categories) : agents_(agents), categories_(categories) {
  if (agents < 1 || categories < 1) {
    throw ValidationError("domain shape needs n >= 1 and p >= 1, got n=" + std::to_string(agents) +
                          ", p=" + std::to_string(categories));
  }
  auto count = checked_pow(static_cast<std::uint64_t>(agents), static_cast<unsigned>(categories));
  if (!count || *count > kMaxBundleSpace) {
    throw CapacityError("bundle space n^p for n=" + std::to_string(agents) + ", p=" +
                        std::to_string(categories) + " exceeds capacity " +
                        std::to_string(kMaxBundleSpace));
  }
  bundle_count_ = static_cast<std::size_t>(*count);
  place_.resize(static_cast<std::size_t>(categories));
  std::size_t value = 1;
  for (int c = categories; c >= 1; --c) {
    place_[static_cast<std::size_t>(c - 1)] = value;
    value *= static_cast<std::size_t>(agents);
  }
}

std::string Bundle::to_string() const {
  const bool compact = std::all_of(items.begin(), items.end(), [](Item x) { return x >= 0 && x <= 9; });
  std::ostringstream out;
  if (compact) {
    for (Item x : items) out << x;
    return out.str();
  }
  out << '(';
  for (std::size_t i = 0; i < items.size(); ++i) out << (i ? "," : "") << items[i];
  out << ')';
  return out.str();
}

Bundle uniform_bundle(const DomainShape& shape, Item item) {
  return Bundle(std::vector<Item>(static_cast<std::size_t>(shape.category_count()), item));
}

void check_bundle(const DomainShape& shape, const Bundle& bundle) {
  if (bundle.size() != static_cast<std::size_t>(shape.category_count())) {
    throw ValidationError("bundle " + bundle.to_string() + " has " + std::to_string(bundle.size()) +
                          " components, expected " + std::to_string(shape.category_count()));
  }
  for (Category c = 1; c <= shape.category_count(); ++c) {
    if (bundle[c] < 1 || bundle[c] > shape.item_count()) {
      throw ValidationError("bundle " + bundle.to_string() + ": item " + std::to_string(bundle[c]) +
                            " of category " + std::to_string(c) + " is outside 1.." +
                            std::to_string(shape.item_count()));
    }
  }
}

BundleIndex encode_bundle(const DomainShape& shape, const Bundle& bundle) {
  check_bundle(shape, bundle);
  BundleIndex index = 0;
  for (Category c = 1; c <= shape.category_count(); ++c) {
    index += static_cast<BundleIndex>(bundle[c] - 1) * shape.place_value(c);
  }
  return index;
}

Bundle decode_bundle(const DomainShape& shape, BundleIndex index) {
  if (index >= shape.bundle_count()) {
    throw ValidationError("bundle index " + std::to_string(index) + " outside bundle space of size " +
                          std::to_string(shape.bundle_count()));
  }
  std::vector<Item> items(static_cast<std::size_t>(shape.category_count()));
  for (Category c = 1; c <= shape.category_count(); ++c) {
    items[static_cast<std::size_t>(c - 1)] = shape.item_of(index, c);
  }
  return Bundle(std::move(items));
}

Preference::Preference(DomainShape shape, std::vector<BundleIndex> order)
    : shape_(std::move(shape)), order_(std::move(order)) {
  const std::size_t m = shape_.bundle_count();
  if (order_.size() != m) {
    throw ValidationError("preference lists " + std::to_string(order_.size()) + " bundles, expected " +
                          std::to_string(m));
  }
  rank_.assign(m, 0);
  for (std::size_t pos = 0; pos < m; ++pos) {
    const BundleIndex b = order_[pos];
    if (b >= m) {
      throw ValidationError("preference position " + std::to_string(pos + 1) + ": bundle index " +
                            std::to_string(b) + " out of range");
    }
    if (rank_[b] != 0) {
      throw ValidationError("preference lists bundle " + decode_bundle(shape_, b).to_string() +
                            " twice (positions " + std::to_string(rank_[b]) + " and " +
                            std::to_string(pos + 1) + ")");
    }
    rank_[b] = static_cast<int>(pos + 1);
  }
}

Preference Preference::from_bundles(const DomainShape& shape, const std::vector<Bundle>& ranking) {
  std::vector<BundleIndex> order;
  order.reserve(ranking.size());
  for (const Bundle& b : ranking) order.push_back(encode_bundle(shape, b));
  return Preference(shape, std::move(order));
}

int rank_of(const Preference& pref, const Bundle& bundle) {
  return pref.rank(encode_bundle(pref.shape(), bundle));
}

Profile::Profile(DomainShape shape, std::vector<Preference> preferences)
    : shape_(std::move(shape)), prefs_(std::move(preferences)) {
  if (static_cast<int>(prefs_.size()) != shape_.agent_count()) {
    throw ValidationError("profile has " + std::to_string(prefs_.size()) + " preferences, expected " +
                          std::to_string(shape_.agent_count()));
  }
  for (std::size_t j = 0; j < prefs_.size(); ++j) {
    if (!(prefs_[j].shape() == shape_)) {
      throw ValidationError("preference of agent " + std::to_string(j + 1) +
                            " is over a different domain shape");
    }
  }
}

Profile Profile::with(Agent agent, Preference replacement) const {
  Profile copy = *this;
  if (!(replacement.shape() == shape_)) throw ValidationError("replacement preference has wrong shape");
  copy.prefs_.at(static_cast<std::size_t>(agent - 1)) = std::move(replacement);
  return copy;
}

std::string Allocation::to_string() const {
  std::ostringstream out;
  out << '{';
  for (std::size_t j = 0; j < bundles_.size(); ++j) {
    out << (j ? ", " : "") << (j + 1) << "->" << bundles_[j].to_string();
  }
  out << '}';
  return out.str();
}

AllocationReport validate_allocation(const DomainShape& shape, const Allocation& alloc) {
  using Kind = AllocationViolation::Kind;
  const int n = shape.agent_count();
  const int p = shape.category_count();
  if (alloc.agent_count() != n) {
    return {AllocationViolation{Kind::kAgentCount, 0, 0, 0,
                                "allocation names " + std::to_string(alloc.agent_count()) +
                                    " agents, expected " + std::to_string(n)}};
  }
  for (Agent j = 1; j <= n; ++j) {
    if (alloc.of(j).size() != static_cast<std::size_t>(p)) {
      return {AllocationViolation{Kind::kBundleLength, j, 0, 0,
                                  "agent " + std::to_string(j) + " bundle " + alloc.of(j).to_string() +
                                      " has wrong length"}};
    }
  }
  for (Category c = 1; c <= p; ++c) {
    std::vector<Agent> owner(static_cast<std::size_t>(n) + 1, 0);
    for (Agent j = 1; j <= n; ++j) {
      const Item x = alloc.of(j)[c];
      if (x < 1 || x > n) {
        return {AllocationViolation{Kind::kItemOutOfRange, j, c, x,
                                    "agent " + std::to_string(j) + " holds item " + std::to_string(x) +
                                        " of category " + std::to_string(c) + ", outside 1.." +
                                        std::to_string(n)}};
      }
      if (owner[static_cast<std::size_t>(x)] != 0) {
        return {AllocationViolation{Kind::kDuplicateItem, j, c, x,
                                    "category " + std::to_string(c) + ", item " + std::to_string(x) +
                                        " allocated to both agent " +
                                        std::to_string(owner[static_cast<std::size_t>(x)]) +
                                        " and agent " + std::to_string(j)}};
      }
      owner[static_cast<std::size_t>(x)] = j;
    }
  }
  return {};
}

void require_valid_allocation(const DomainShape& shape, const Allocation& alloc) {
  auto report = validate_allocation(shape, alloc);
  if (!report.ok()) throw ValidationError("invalid allocation: " + report.violation->message);
}

std::vector<int> agent_ranks(const Profile& profile, const Allocation& alloc) {
  require_valid_allocation(profile.shape(), alloc);
  std::vector<int> ranks;
  ranks.reserve(static_cast<std::size_t>(profile.agent_count()));
  for (Agent j = 1; j <= profile.agent_count(); ++j) ranks.push_back(rank_of(profile.of(j), alloc.of(j)));
  return ranks;
}

long long utilitarian_rank(const Profile& profile, const Allocation& alloc) {
  long long total = 0;
  for (int r : agent_ranks(profile, alloc)) total += r;
  return total;
}

int egalitarian_rank(const Profile& profile, const Allocation& alloc) {
  const auto ranks = agent_ranks(profile, alloc);
  return *std::max_element(ranks.begin(), ranks.end());
}

}  // namespace catalloc
