#include "rpm/dyck.hpp"

#include <algorithm>
#include <bit>
#include <cstdlib>

#include "rpm/combinatorics.hpp"
#include "rpm/errors.hpp"

namespace rpm {

namespace {

int wrap(int site, int width) {
  const int r = (site - 1) % width;
  return r < 0 ? r + width : r;
}

}  // namespace

void check_width(int width) {
  if (width < 2 || width % 2 != 0 || width > 64)
    throw InvalidArgument("lattice width must be even and in [2, 64], got " + std::to_string(width));
}

void check_even_width(int width) {
  if (width < 2 || width % 2 != 0) throw InvalidArgument("width must be even and at least 2, got " + std::to_string(width));
}

bool is_stable_profile(std::span<const int> h) {
  const int n = static_cast<int>(h.size());
  if (n < 2 || n % 2 != 0 || n > 64) return false;
  for (int i = 0; i < n; ++i) {
    if (std::abs(h[(i + 1) % n] - h[i]) != 1) return false;
    // site index is i + 1
    if (((h[i] - (i + 1)) % 2 + 2) % 2 != 0) return false;
  }
  const int lowest = *std::min_element(h.begin(), h.end());
  return lowest == 0 || lowest == 1;
}

DyckConfig::DyckConfig(std::vector<int> heights) : h_(std::move(heights)) {
  if (!is_stable_profile(h_)) throw InvalidArgument("height profile is not a stable configuration");
}

int DyckConfig::height(int site) const noexcept { return h_[wrap(site, width())]; }

std::uint64_t DyckConfig::step_word() const noexcept {
  const int n = width();
  std::uint64_t w = 0;
  for (int k = 0; k < n; ++k)
    if (h_[(k + 1) % n] > h_[k]) w |= std::uint64_t{1} << k;
  return w;
}

DyckConfig DyckConfig::from_step_word(std::uint64_t word, int width) {
  check_width(width);
  if (width < 64 && (word >> width) != 0) throw InvalidArgument("step word has bits beyond the width");
  if (std::popcount(word) != width / 2) throw InvalidArgument("step word is not balanced");
  std::vector<int> h(width);
  h[0] = 0;
  for (int k = 0; k + 1 < width; ++k) h[k + 1] = h[k] + (((word >> k) & 1u) ? 1 : -1);
  // Raw heights satisfy h_i = i - 1 (mod 2); an odd shift restores the parity
  // lock, and the smallest such shift puts the minimum at 0 or 1.
  const int lowest = *std::min_element(h.begin(), h.end());
  const int shift = (-lowest) % 2 != 0 ? -lowest : -lowest + 1;
  for (int& x : h) x += shift;
  return DyckConfig(std::move(h), Unchecked{});
}

std::string DyckConfig::to_hex() const {
  const int n = width();
  std::uint64_t v = 0;
  for (int k = 0; k < n; ++k) v = (v << 1) | ((h_[(k + 1) % n] > h_[k]) ? 1u : 0u);
  const int digits = (n + 3) / 4;
  std::string out(static_cast<std::size_t>(digits), '0');
  for (int d = digits - 1; d >= 0; --d, v >>= 4) out[static_cast<std::size_t>(d)] = "0123456789abcdef"[v & 0xf];
  return out;
}

DyckConfig DyckConfig::from_hex(std::string_view hex, int width) {
  check_width(width);
  if (hex.empty() || hex.size() > static_cast<std::size_t>((width + 3) / 4))
    throw InvalidArgument("hex string has the wrong length for width " + std::to_string(width));
  std::uint64_t v = 0;
  for (char ch : hex) {
    int d;
    if (ch >= '0' && ch <= '9') d = ch - '0';
    else if (ch >= 'a' && ch <= 'f') d = ch - 'a' + 10;
    else if (ch >= 'A' && ch <= 'F') d = ch - 'A' + 10;
    else throw InvalidArgument("invalid hex digit in configuration string");
    v = (v << 4) | static_cast<std::uint64_t>(d);
  }
  if (width < 64 && (v >> width) != 0) throw InvalidArgument("hex value has bits beyond the width");
  std::uint64_t word = 0;
  for (int k = 0; k < width; ++k)
    if ((v >> (width - 1 - k)) & 1u) word |= std::uint64_t{1} << k;
  return from_step_word(word, width);
}

DyckConfig substrate(int width) {
  check_width(width);
  std::vector<int> h(width);
  for (int i = 0; i < width; ++i) h[i] = (i % 2 == 0) ? 1 : 0;
  return DyckConfig(std::move(h));
}

SiteKind classify_site(const DyckConfig& c, int site) {
  const int n = c.width();
  if (site < 1 || site > n) throw InvalidArgument("site index out of range");
  const int here = c.height(site);
  const int left = c.height(site - 1);
  const int right = c.height(site + 1);
  if (left < here && right < here) return SiteKind::Peak;
  if (left < here) return SiteKind::SlopeUp;
  if (right < here) return SiteKind::SlopeDown;
  // Valley: it completes two layers when every other site sits at height >= 2
  // once this one is raised, i.e. the site is the unique lowest point at 1.
  for (int k = 1; k <= n; ++k)
    if (k != site && c.height(k) < 2) return SiteKind::Valley;
  return SiteKind::GlobalValley;
}

DropOutcome drop_tile(const DyckConfig& c, int site) {
  const int n = c.width();
  const SiteKind kind = classify_site(c, site);
  std::vector<int> h(c.heights().begin(), c.heights().end());
  const int i = site - 1;
  switch (kind) {
    case SiteKind::Peak:
      return {c, 0, false, DropKind::Reflection};
    case SiteKind::Valley:
      h[i] += 2;
      return {DyckConfig(std::move(h)), 0, false, DropKind::Adsorption};
    case SiteKind::GlobalValley:
      for (int k = 0; k < n; ++k) h[k] += (k == i ? 2 : 0) - 2;
      return {DyckConfig(std::move(h)), n, true, DropKind::GlobalAvalanche};
    case SiteKind::SlopeUp:
    case SiteKind::SlopeDown: {
      const int dir = kind == SiteKind::SlopeUp ? 1 : -1;
      const int level = h[i];
      int dist = 1;
      for (; dist < n; ++dist) {
        const int k = ((i + dir * dist) % n + n) % n;
        if (h[k] == level) break;
        h[k] -= 2;
      }
      if (dist >= n) throw InvalidArgument("avalanche scan did not terminate; profile is invalid");
      return {DyckConfig(std::move(h)), dist, false, DropKind::LocalAvalanche};
    }
  }
  return {c, 0, false, DropKind::Reflection};
}

int peaks_count(const DyckConfig& c) {
  int peaks = 0;
  for (int i = 1; i <= c.width(); ++i)
    if (classify_site(c, i) == SiteKind::Peak) ++peaks;
  return peaks;
}

std::uint64_t state_count(int width) {
  check_width(width);
  return binomial(width, width / 2);
}

StateIndex rank(const DyckConfig& c) { return {colex_rank(c.step_word(), c.width()), c.width()}; }

DyckConfig unrank(StateIndex s) {
  check_width(s.width);
  if (s.index >= state_count(s.width)) throw InvalidArgument("state index out of range");
  return DyckConfig::from_step_word(colex_unrank(s.index, s.width, s.width / 2), s.width);
}

std::vector<DyckConfig> enumerate_states(int width) {
  check_width(width);
  if (width > kMaxEnumerationWidth)
    throw ResourceLimit("exact enumeration supports widths up to " + std::to_string(kMaxEnumerationWidth));
  std::vector<DyckConfig> out;
  for (std::uint64_t w : balanced_words(width, width / 2)) out.push_back(DyckConfig::from_step_word(w, width));
  return out;
}

}  // namespace rpm
