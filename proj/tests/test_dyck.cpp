#include <algorithm>
#include <bit>
#include <random>
#include <set>

#include "doctest.h"
#include "rpm/combinatorics.hpp"
#include "rpm/dyck.hpp"
#include "rpm/errors.hpp"

using namespace rpm;

namespace {

std::vector<int> H(std::initializer_list<int> v) { return v; }

std::vector<int> heights_of(const DyckConfig& c) { return {c.heights().begin(), c.heights().end()}; }

}  // namespace

TEST_CASE("substrate profiles") {
  CHECK(heights_of(substrate(6)) == H({1, 0, 1, 0, 1, 0}));
  CHECK(heights_of(substrate(2)) == H({1, 0}));
  CHECK(heights_of(substrate(4)) == H({1, 0, 1, 0}));
  CHECK(peaks_count(substrate(8)) == 4);
  CHECK_THROWS_AS(substrate(5), InvalidArgument);
  CHECK_THROWS_AS(substrate(0), InvalidArgument);
  CHECK_THROWS_AS(substrate(-2), InvalidArgument);
}

TEST_CASE("invalid profiles are rejected") {
  CHECK_THROWS_AS(DyckConfig(H({1, 0, 1})), InvalidArgument);        // odd width
  CHECK_THROWS_AS(DyckConfig(H({0, 1, 0, 1})), InvalidArgument);     // parity
  CHECK_THROWS_AS(DyckConfig(H({3, 2, 3, 2})), InvalidArgument);     // floating above the substrate
  CHECK_THROWS_AS(DyckConfig(H({1, 2, 3, 2, 1, 4})), InvalidArgument);  // broken step
}

TEST_CASE("site classification") {
  const DyckConfig s = substrate(6);
  CHECK(classify_site(s, 1) == SiteKind::Peak);
  CHECK(classify_site(s, 2) == SiteKind::Valley);
  const DyckConfig m(H({1, 2, 3, 4, 3, 2}));
  CHECK(classify_site(m, 1) == SiteKind::GlobalValley);
  CHECK(classify_site(m, 2) == SiteKind::SlopeUp);
  CHECK(classify_site(m, 4) == SiteKind::Peak);
  CHECK(classify_site(m, 5) == SiteKind::SlopeDown);
  CHECK_THROWS_AS(classify_site(m, 0), InvalidArgument);
  CHECK_THROWS_AS(classify_site(m, 7), InvalidArgument);
}

TEST_CASE("tile drops reproduce the pictured moves") {
  const DyckConfig m(H({1, 2, 3, 4, 3, 2}));

  const DropOutcome local = drop_tile(m, 2);
  CHECK(heights_of(local.next) == H({1, 2, 1, 2, 1, 2}));
  CHECK(local.tiles_removed == 4);
  CHECK_FALSE(local.global);
  CHECK(local.kind == DropKind::LocalAvalanche);

  const DropOutcome global = drop_tile(m, 1);
  CHECK(heights_of(global.next) == H({1, 0, 1, 2, 1, 0}));
  CHECK(global.tiles_removed == 6);
  CHECK(global.global);
  CHECK(global.kind == DropKind::GlobalAvalanche);

  const DropOutcome refl = drop_tile(substrate(6), 1);
  CHECK(refl.next == substrate(6));
  CHECK(refl.tiles_removed == 0);
  CHECK(refl.kind == DropKind::Reflection);

  const DropOutcome ads = drop_tile(substrate(6), 2);
  CHECK(heights_of(ads.next) == H({1, 2, 1, 0, 1, 0}));
  CHECK(ads.tiles_removed == 0);
  CHECK(ads.kind == DropKind::Adsorption);

  // mirror image: the left-going avalanche on the same mountain
  const DropOutcome left = drop_tile(m, 6);
  CHECK(heights_of(left.next) == H({1, 2, 1, 2, 1, 2}));
  CHECK(left.tiles_removed == 4);
}

TEST_CASE("peaks") {
  CHECK(peaks_count(substrate(6)) == 3);
  CHECK(peaks_count(DyckConfig(H({1, 2, 3, 4, 3, 2}))) == 1);
}

TEST_CASE("L = 2 state space from brute-force step sequences") {
  // Oracle: enumerate every length-2 step sequence, keep the balanced ones,
  // integrate and shift so that h_1 is odd and the minimum is 0 or 1.
  std::set<std::vector<int>> profiles;
  for (int bits = 0; bits < 4; ++bits) {
    const int s1 = (bits & 1) ? 1 : -1, s2 = (bits & 2) ? 1 : -1;
    if (s1 + s2 != 0) continue;
    std::vector<int> h = {0, s1};
    const int lo = std::min(h[0], h[1]);
    const int shift = ((-lo) % 2 != 0) ? -lo : -lo + 1;
    for (int& x : h) x += shift;
    profiles.insert(h);
  }
  CHECK(profiles.size() == binomial(2, 1));
  std::set<std::vector<int>> enumerated;
  for (const auto& c : enumerate_states(2)) enumerated.insert(heights_of(c));
  CHECK(enumerated == profiles);
  CHECK(enumerated == std::set<std::vector<int>>{{1, 0}, {1, 2}});
}

TEST_CASE("rank and unrank are inverse bijections in colex order") {
  CHECK(state_count(4) == 6);
  CHECK(enumerate_states(4).size() == 6);
  for (int L : {2, 4, 6, 8, 10}) {
    // brute force: balanced words in increasing numeric order == colex order
    std::uint64_t expected = 0;
    for (std::uint64_t w = 0; w < (std::uint64_t{1} << L); ++w) {
      if (std::popcount(w) != L / 2) continue;
      const DyckConfig c = DyckConfig::from_step_word(w, L);
      CHECK(c.step_word() == w);
      CHECK(rank(c).index == expected);
      CHECK(unrank({expected, L}) == c);
      ++expected;
    }
    CHECK(expected == state_count(L));
  }
  CHECK_THROWS_AS(unrank({6, 4}), InvalidArgument);
}

TEST_CASE("hex serialization") {
  const DyckConfig m(H({1, 2, 3, 4, 3, 2}));
  // steps 1->2..6->1: up up up down down down
  CHECK(m.to_hex() == "38");
  CHECK(DyckConfig::from_hex("38", 6) == m);
  std::mt19937_64 rng(7);
  const auto states = enumerate_states(12);
  for (int k = 0; k < 50; ++k) {
    const auto& c = states[rng() % states.size()];
    CHECK(DyckConfig::from_hex(c.to_hex(), 12) == c);
  }
  CHECK_THROWS_AS(DyckConfig::from_hex("zz", 6), InvalidArgument);
  CHECK_THROWS_AS(DyckConfig::from_hex("3f", 6), InvalidArgument);
}

TEST_CASE("closure and avalanche properties over all states") {
  for (int L : {2, 4, 6, 8, 10, 12}) {
    for (const DyckConfig& c : enumerate_states(L)) {
      int reflections = 0, valleys = 0;
      for (int i = 1; i <= L; ++i) {
        const SiteKind k = classify_site(c, i);
        if (k == SiteKind::Valley || k == SiteKind::GlobalValley) ++valleys;
        const DropOutcome d = drop_tile(c, i);
        CHECK(is_stable_profile(d.next.heights()));
        CHECK(d.tiles_removed % 2 == 0);
        switch (d.kind) {
          case DropKind::Reflection:
            ++reflections;
            CHECK(d.next == c);
            CHECK(d.tiles_removed == 0);
            break;
          case DropKind::Adsorption:
            CHECK(d.tiles_removed == 0);
            CHECK_FALSE(d.global);
            break;
          case DropKind::LocalAvalanche:
            CHECK(d.tiles_removed >= 2);
            CHECK(d.tiles_removed < L);
            CHECK_FALSE(d.global);
            break;
          case DropKind::GlobalAvalanche: {
            CHECK(d.tiles_removed == L);
            CHECK(d.global);
            const auto h = d.next.heights();
            CHECK(*std::min_element(h.begin(), h.end()) == 0);
            break;
          }
        }
      }
      CHECK(reflections == peaks_count(c));
      CHECK(peaks_count(c) == valleys);
    }
  }
}

TEST_CASE("global valleys are exactly the lone level-1 minima") {
  for (int L : {4, 6, 8}) {
    for (const DyckConfig& c : enumerate_states(L)) {
      const auto h = c.heights();
      const auto zeros = std::count(h.begin(), h.end(), 0);
      const auto ones = std::count(h.begin(), h.end(), 1);
      bool has_global = false;
      for (int i = 1; i <= L; ++i) has_global |= classify_site(c, i) == SiteKind::GlobalValley;
      CHECK(has_global == (zeros == 0 && ones == 1));
    }
  }
}
