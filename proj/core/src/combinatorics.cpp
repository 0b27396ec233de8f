#include "catalloc/combinatorics.hpp"

#include <limits>
#include <stdexcept>

namespace catalloc {

std::optional<std::uint64_t> checked_factorial(std::uint64_t n) {
  std::uint64_t result = 1;
  for (std::uint64_t k = 2; k <= n; ++k) {
    if (result > std::numeric_limits<std::uint64_t>::max() / k) return std::nullopt;
    result *= k;
  }
  return result;
}

std::optional<std::uint64_t> checked_pow(std::uint64_t base, unsigned exp) {
  std::uint64_t result = 1;
  for (unsigned e = 0; e < exp; ++e) {
    if (base != 0 && result > std::numeric_limits<std::uint64_t>::max() / base) {
      return std::nullopt;
    }
    result *= base;
  }
  return result;
}

std::vector<std::size_t> nth_permutation(std::size_t size, std::uint64_t index) {
  std::vector<std::size_t> pool(size);
  for (std::size_t i = 0; i < size; ++i) pool[i] = i;
  std::vector<std::uint64_t> radix(size, 1);
  for (std::size_t i = 1; i < size; ++i) {
    auto f = checked_factorial(i);
    if (!f) throw std::overflow_error("nth_permutation: factorial overflow");
    radix[i] = *f;
  }
  std::vector<std::size_t> perm;
  perm.reserve(size);
  for (std::size_t pos = size; pos-- > 0;) {
    const std::uint64_t block = radix[pos];
    const auto digit = static_cast<std::size_t>(index / block);
    index %= block;
    if (digit >= pool.size()) throw std::out_of_range("nth_permutation: index too large");
    perm.push_back(pool[digit]);
    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(digit));
  }
  return perm;
}

std::uint64_t permutation_index(const std::vector<std::size_t>& perm) {
  const std::size_t size = perm.size();
  std::uint64_t index = 0;
  for (std::size_t i = 0; i < size; ++i) {
    std::uint64_t smaller_after = 0;
    for (std::size_t k = i + 1; k < size; ++k) {
      if (perm[k] < perm[i]) ++smaller_after;
    }
    index += smaller_after * checked_factorial(size - 1 - i).value();
  }
  return index;
}

}  // namespace catalloc
