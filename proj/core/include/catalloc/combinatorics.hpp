#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

namespace catalloc {

// n! if it fits in 64 bits.
std::optional<std::uint64_t> checked_factorial(std::uint64_t n);

// base^exp if it fits in 64 bits.
std::optional<std::uint64_t> checked_pow(std::uint64_t base, unsigned exp);

// The index-th permutation of {0, ..., size-1} in lexicographic order.
// Requires index < size!.
std::vector<std::size_t> nth_permutation(std::size_t size, std::uint64_t index);

// Lexicographic index of a permutation of {0, ..., size-1}.
std::uint64_t permutation_index(const std::vector<std::size_t>& perm);

}  // namespace catalloc
