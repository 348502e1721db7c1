#include <cmath>
#include <limits>
#include <vector>

#include "doctest.h"
#include "rpm/dyck.hpp"
#include "rpm/errors.hpp"
#include "rpm/generator.hpp"
#include "rpm/xxz.hpp"

using namespace rpm;

namespace {

double max_matched_distance(std::vector<std::complex<double>> a, std::vector<std::complex<double>> b) {
  REQUIRE(a.size() == b.size());
  double worst = 0;
  for (const auto& x : a) {
    std::size_t best = 0;
    double d = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < b.size(); ++k) {
      if (std::abs(x - b[k]) < d) {
        d = std::abs(x - b[k]);
        best = k;
      }
    }
    worst = std::max(worst, d);
    b.erase(b.begin() + static_cast<std::ptrdiff_t>(best));
  }
  return worst;
}

double column_sum_defect(const DeformedGenerator& g) {
  const Eigen::RowVectorXd sums = Eigen::RowVectorXd::Ones(g.dimension()) * g.matrix;
  return sums.cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("undeformed generator is stochastic") {
  for (int L : {2, 4, 6, 8}) CHECK(column_sum_defect(build_generator(L, 0, 0)) < 1e-14);
  const DeformedGenerator g = build_generator(4, 0, 0);
  const auto s = rank(substrate(4)).index;
  CHECK(g.matrix.coeff(s, s) == -2.0);
  for (int k = 0; k < g.matrix.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(g.matrix, k); it; ++it)
      if (it.row() != it.col()) CHECK(it.value() >= 0);
}

TEST_CASE("global avalanche weight") {
  const double a = 0.37, b = -0.21;
  const DeformedGenerator g = build_generator(6, a, b);
  const auto from = rank(DyckConfig(std::vector<int>{1, 2, 3, 4, 3, 2})).index;
  const auto to = rank(DyckConfig(std::vector<int>{1, 0, 1, 2, 1, 0})).index;
  CHECK(g.matrix.coeff(to, from) == doctest::Approx(std::exp(a + 6 * b)).epsilon(1e-15));
  const auto local = rank(DyckConfig(std::vector<int>{1, 2, 1, 2, 1, 2})).index;
  // drops on both slopes (sites 2 and 6) peel the same layer
  CHECK(g.matrix.coeff(local, from) == doctest::Approx(2 * std::exp(4 * b)).epsilon(1e-15));
}

TEST_CASE("sparsity pattern does not depend on the deformation") {
  const auto p = build_generator(6, 0, 0).matrix;
  const auto q = build_generator(6, 0.8, -1.3).matrix;
  REQUIRE(p.nonZeros() == q.nonZeros());
  for (int k = 0; k < p.outerSize(); ++k) {
    Eigen::SparseMatrix<double>::InnerIterator i(p, k), j(q, k);
    for (; i; ++i, ++j) CHECK(i.row() == j.row());
  }
}

TEST_CASE("enumeration ceiling") {
  CHECK_THROWS_AS(build_generator(22, 0, 0), ResourceLimit);
  CHECK_THROWS_AS(build_generator(5, 0, 0), InvalidArgument);
}

TEST_CASE("Perron root vanishes at the stochastic point") {
  for (int L : {4, 6, 8}) CHECK(std::abs(perron_root(L, 0, 0)) < 1e-10);
}

TEST_CASE("power iteration agrees with dense diagonalization") {
  PerronOptions force;
  force.force_power_iteration = true;
  for (auto [a, b] : {std::pair{0.0, 0.0}, {0.4, -0.3}, {-0.5, 0.5}}) {
    const DeformedGenerator g = build_generator(6, a, b);
    CHECK(largest_eigenvalue(g, force) == doctest::Approx(largest_eigenvalue(g)).epsilon(1e-10));
  }
}

TEST_CASE("spectral bridge to the XXZ chain") {
  for (int L : {4, 6}) {
    for (int i = 0; i < 5; ++i) {
      for (int j = 0; j < 5; ++j) {
        const double a = -0.5 + 0.25 * i, b = -0.5 + 0.25 * j;
        const auto gen = generator_spectrum(build_generator(L, a, b));
        std::vector<std::complex<double>> mapped;
        for (const auto& e : xxz_spectrum(map_params(a, b, L))) mapped.push_back(-std::exp(b) * e - 0.75 * L);
        CHECK(max_matched_distance(gen, mapped) < 1e-8);
        const double ground = ground_energy_dense(map_params(a, b, L));
        CHECK(perron_root(L, a, b) == doctest::Approx(-std::exp(b) * ground - 0.75 * L).epsilon(1e-10));
      }
    }
  }
}

TEST_CASE("Perron root is convex in each fugacity") {
  const double h = 0.1;
  for (int L : {4, 6}) {
    for (double x = -1.0; x <= 1.0; x += 0.25) {
      const double sa = perron_root(L, x + h, 0.2) - 2 * perron_root(L, x, 0.2) + perron_root(L, x - h, 0.2);
      const double sb = perron_root(L, 0.2, x + h) - 2 * perron_root(L, 0.2, x) + perron_root(L, 0.2, x - h);
      CHECK(sa >= -1e-8);
      CHECK(sb >= -1e-8);
    }
  }
}

TEST_CASE("stationary normalizations") {
  const double expected[] = {2, 10, 140, 5544};
  for (int L : {2, 4, 6, 8}) {
    const StationaryState s = stationary_state(L);
    CHECK(s.integer_form.sum() == doctest::Approx(expected[L / 2 - 1]).epsilon(1e-10));
    CHECK(s.integer_deviation < 1e-6);
    CHECK(s.kernel_residual < 1e-12);
    CHECK(s.probabilities.minCoeff() > 0);
    CHECK(s.probabilities.sum() == doctest::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("stationary observables follow the closed forms") {
  for (int L : {2, 4, 6, 8}) {
    const double l = L;
    const auto o = stationary_observables(stationary_state(L));
    CHECK(o.avg_peaks == doctest::Approx(l * 3 * l * l / (8 * (l * l - 1))).epsilon(1e-10));
    CHECK(o.prob_global_susceptible == doctest::Approx(3 * l / (4 * (l * l - 1))).epsilon(1e-10));
    CHECK(o.mean_tiles_rate == doctest::Approx(l * (5 * l * l - 8) / (8 * (l * l - 1))).epsilon(1e-10));
    CHECK(o.mean_global_rate == doctest::Approx(0.75 * l / (l * l - 1)).epsilon(1e-10));
  }
  const auto o4 = stationary_observables(stationary_state(4));
  CHECK(o4.avg_peaks == doctest::Approx(1.6));
  CHECK(o4.prob_global_susceptible == doctest::Approx(0.2));
  CHECK(o4.mean_tiles_rate == doctest::Approx(2.4));
}

TEST_CASE("first spectral cumulants equal the stationary fluxes") {
  for (int L : {4, 6, 8}) {
    const auto o = stationary_observables(stationary_state(L));
    CHECK(std::abs(spectral_cumulant(L, Counter::Tiles, 1) - o.mean_tiles_rate) < 1e-6);
    CHECK(std::abs(spectral_cumulant(L, Counter::Global, 1) - o.mean_global_rate) < 1e-6);
  }
  const double central = (perron_root(4, 0, 1e-3) - perron_root(4, 0, -1e-3)) / 2e-3;
  CHECK(central == doctest::Approx(2.4).epsilon(1e-6));
}
