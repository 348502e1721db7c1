#pragma once

#include <cstdint>
#include <vector>

namespace rpm {

/// Pascal triangle up to n = 64, exact in 64-bit.
std::uint64_t binomial(int n, int k);

/// Colexicographic rank of an n-bit word with exactly k set bits
/// (combinatorial number system: sum over set bit positions p_j of C(p_j, j)).
std::uint64_t colex_rank(std::uint64_t word, int n);

/// Inverse of colex_rank for words of n bits with k set bits.
std::uint64_t colex_unrank(std::uint64_t rank, int n, int k);

/// All n-bit words with k set bits, in colex order.
std::vector<std::uint64_t> balanced_words(int n, int k);

}  // namespace rpm
