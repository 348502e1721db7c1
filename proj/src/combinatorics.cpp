#include "rpm/combinatorics.hpp"

#include <array>

#include "rpm/errors.hpp"

namespace rpm {

namespace {

constexpr int kMaxN = 64;

using Table = std::array<std::array<std::uint64_t, kMaxN + 1>, kMaxN + 1>;

constexpr Table make_table() {
  Table t{};
  for (int n = 0; n <= kMaxN; ++n) {
    t[n][0] = 1;
    for (int k = 1; k <= n; ++k) t[n][k] = t[n - 1][k - 1] + (k <= n - 1 ? t[n - 1][k] : 0);
  }
  return t;
}

constexpr Table kPascal = make_table();

}  // namespace

std::uint64_t binomial(int n, int k) {
  if (n < 0 || k < 0 || k > n) return 0;
  if (n > kMaxN) throw InvalidArgument("binomial: n exceeds 64");
  return kPascal[n][k];
}

std::uint64_t colex_rank(std::uint64_t word, int n) {
  std::uint64_t r = 0;
  int j = 0;
  for (int p = 0; p < n; ++p) {
    if ((word >> p) & 1u) {
      ++j;
      r += binomial(p, j);
    }
  }
  return r;
}

std::uint64_t colex_unrank(std::uint64_t rank, int n, int k) {
  if (rank >= binomial(n, k)) throw InvalidArgument("colex_unrank: rank out of range");
  std::uint64_t word = 0;
  int p = n - 1;
  for (int j = k; j >= 1; --j) {
    while (binomial(p, j) > rank) --p;
    word |= std::uint64_t{1} << p;
    rank -= binomial(p, j);
    --p;
  }
  return word;
}

std::vector<std::uint64_t> balanced_words(int n, int k) {
  const std::uint64_t count = binomial(n, k);
  std::vector<std::uint64_t> out;
  out.reserve(count);
  if (k == 0) {
    out.push_back(0);
    return out;
  }
  // Gosper's hack walks k-subsets in increasing numeric order, which is colex.
  std::uint64_t w = (std::uint64_t{1} << k) - 1;
  for (std::uint64_t i = 0; i < count; ++i) {
    out.push_back(w);
    const std::uint64_t c = w & (~w + 1);
    const std::uint64_t r = w + c;
    w = c == 0 ? 0 : (((r ^ w) >> 2) / c) | r;
  }
  return out;
}

}  // namespace rpm
