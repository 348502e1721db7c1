#include <cmath>
#include <numbers>

#include <boost/math/special_functions/ellint_1.hpp>

#include "doctest.h"
#include "oracles.hpp"
#include "rpm/errors.hpp"
#include "rpm/numdiff.hpp"
#include "rpm/reference_values.hpp"
#include "rpm/thermo.hpp"

using namespace rpm;
using std::numbers::pi;

TEST_CASE("Y at pi/3 and its derivatives") {
  for (int n = 0; n <= 6; ++n) {
    CAPTURE(n);
    CHECK(std::abs(Y_deriv(pi / 3, n) - reference::kYAtPiThird[n]) < reference::kYAtPiThirdTolerance[n]);
  }
  CHECK(Y(pi / 3) == doctest::Approx(4.0 / 3).epsilon(1e-14));
  CHECK(reference::kYAtPiThird[1] == doctest::Approx(-2.4056261).epsilon(1e-7));
}

TEST_CASE("Y near pi/2") {
  CHECK(std::abs(Y(pi / 2) - 2 / pi) < 1e-12);
  auto y = [](double g) { return Y(g); };
  CHECK(richardson_derivative(y, pi / 2, 1) == doctest::Approx(reference::kYAtPiHalfSeries[1]).epsilon(1e-9));
  CHECK(Y_deriv(pi / 2, 1) == doctest::Approx(reference::kYAtPiHalfSeries[1]).epsilon(1e-12));
  CHECK(0.5 * Y_deriv(pi / 2, 2) == doctest::Approx(reference::kYAtPiHalfSeries[2]).epsilon(1e-12));
}

TEST_CASE("Y at small gamma") {
  const double g = 1e-3;
  CHECK(std::abs(g * g * Y(g) - reference::kYSmallGammaLeading) < 1e-4);
  const double sub = std::log(2.0) / 3 - 1.0 / 6;
  CHECK(Y(g) - reference::kYSmallGammaLeading / (g * g) == doctest::Approx(sub).epsilon(1e-2));
}

TEST_CASE("Y quadrature window and domain") {
  for (double g : {0.1, pi / 3, 1.4}) CHECK(std::abs(Y_windowed(g, 0, 2 * kYWindow) - Y(g)) < 1e-13);
  CHECK_THROWS_AS(Y(0.0), InvalidArgument);
  CHECK_THROWS_AS(Y(-0.2), InvalidArgument);
  CHECK_THROWS_AS(Y_deriv(1.0, 7), InvalidArgument);
}

TEST_CASE("Y derivatives agree with differences of Y") {
  for (double g : {0.4, 1.0}) {
    auto y = [](double x) { return Y(x); };
    CHECK(richardson_derivative(y, g, 1) == doctest::Approx(Y_deriv(g, 1)).epsilon(1e-9));
    CHECK(richardson_derivative(y, g, 2) == doctest::Approx(Y_deriv(g, 2)).epsilon(1e-8));
  }
}

TEST_CASE("Ytilde sum") {
  const double x = 10;
  CHECK(Ytilde(x) == doctest::Approx(2 * std::exp(-x) + 10 * std::exp(-3 * x)).epsilon(1e-14));
  CHECK(std::sinh(x) * Ytilde(x) - 1 == doctest::Approx(4 * std::exp(-2 * x)).epsilon(1e-6));
  CHECK(Ytilde_truncated(5, 200) == doctest::Approx(Ytilde(5)).epsilon(1e-14));
  CHECK(Ytilde_truncated(0.05, 4000) == doctest::Approx(Ytilde(0.05)).epsilon(1e-14));
  CHECK_THROWS_AS(Ytilde(0.0), InvalidArgument);
  for (double l : {0.3, 1.0, 3.0}) {
    auto f = [](double t) { return Ytilde(t); };
    CHECK(richardson_derivative(f, l, 1) == doctest::Approx(Ytilde_deriv(l, 1)).epsilon(1e-9));
    CHECK(richardson_derivative(f, l, 2) == doctest::Approx(Ytilde_deriv(l, 2)).epsilon(1e-8));
  }
}

TEST_CASE("Ytilde large-lambda expansion from a fit") {
  const auto c = oracle::ytilde_series_fit({4, 5, 6});
  for (int j = 0; j < 3; ++j) {
    CAPTURE(j);
    CHECK(std::abs(c[j] / reference::kYtildeSeries[j] - 1) < 1e-6);
  }
}

TEST_CASE("bulk energy") {
  CHECK(bulk_energy(-0.5) == doctest::Approx(-0.75).epsilon(1e-14));
  // free fermions: -(1/pi) int_{-pi/2}^{pi/2} 2 cos k dk
  CHECK(std::abs(bulk_energy(-1e-6) + 2 / pi) < 1e-4);
  CHECK(std::abs(bulk_energy(-1 + 1e-6) - bulk_energy(-1 - 1e-6)) < 1e-5);
  CHECK(bulk_energy(-1.0) == doctest::Approx(0.5 - 2 * std::log(2.0)).epsilon(1e-6));
  CHECK_THROWS_AS(bulk_energy(0.0), InvalidArgument);
  CHECK_THROWS_AS(bulk_energy(0.3), InvalidArgument);
}

TEST_CASE("gapless finite-size coefficient") {
  CHECK(std::abs(fsc_gapless(pi / 3, Twist::real(2 * pi / 3))) < 1e-14);
  for (double g : {0.3, 1.0, pi / 2})
    CHECK(fsc_gapless(g, Twist::real(0)) == doctest::Approx(-pi * pi * std::sin(g) / (6 * g)).epsilon(1e-15));
  CHECK(fsc_gapless(pi / 2, Twist::real(pi)) == doctest::Approx(2 * pi / 3).epsilon(1e-14));
  CHECK(fsc_gapless(pi / 3, Twist::real(0)) == doctest::Approx(-pi * std::sqrt(3.0) / 4).epsilon(1e-14));
}

TEST_CASE("elliptic moduli") {
  const EllipticModuli near = elliptic_moduli(0.05);
  CHECK(near.K_kprime / near.K_k == doctest::Approx(0.05 / pi).epsilon(1e-10));
  for (double l : {0.3, 1.0, 2.5, 4.0, 9.0}) {
    CAPTURE(l);
    const EllipticModuli m = elliptic_moduli(l);
    CHECK(m.K_kprime / m.K_k == doctest::Approx(l / pi).epsilon(1e-10));
    CHECK(m.k * m.k + m.k_prime * m.k_prime == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(m.k1 > 0);
    CHECK(m.k1 < 1);
    CHECK(m.k1 == doctest::Approx(k1_product(l)).epsilon(1e-10));
  }
  const EllipticModuli m = elliptic_moduli(1.0);
  CHECK(m.k1 == doctest::Approx(std::pow((1 - m.k_prime) / m.k, 2)).epsilon(1e-10));
  for (double l : {1.0, 4.0}) {
    const EllipticModuli e = elliptic_moduli(l);
    CHECK(e.K_k == doctest::Approx(boost::math::ellint_1(e.k)).epsilon(1e-10));
    CHECK(e.K_kprime == doctest::Approx(boost::math::ellint_1(e.k_prime)).epsilon(1e-10));
  }
}

TEST_CASE("gapped correction and its branches") {
  const Twist t = Twist::real(2 * pi / 3);
  const double g = fsc_gapped(12, 1.0, t), e = fsc_gapped(12, 1.0, t, GappedBranch::Excited);
  CHECK(g < 0);
  CHECK(e == doctest::Approx(-g).epsilon(1e-15));
  const double k1 = elliptic_moduli(1.0).k1;
  CHECK(fsc_gapped(14, 1.0, t) / g == doctest::Approx(k1 * std::sqrt(12.0 / 14)).epsilon(1e-12));
  CHECK(fsc_gapped(12, 1.0, Twist::real(pi)) == doctest::Approx(0.0));
}

TEST_CASE("a and xi below the critical fugacity") {
  CHECK_THROWS_AS(a_xi(-std::log(2.0)), InvalidArgument);
  CHECK_THROWS_AS(a_xi(0.0), InvalidArgument);
  CHECK(std::isfinite(a_xi(-1.0).xi));
  double previous = 0;
  for (double gap : {1.0, 0.3, 0.1, 0.03}) {
    const AXi r = a_xi(-std::log(2.0) - gap);
    CHECK(r.xi > previous);
    CHECK(r.a > 0);
    previous = r.xi;
  }
  for (auto [beta, L] : {std::pair{-1.0, 8}, {-2.5, 14}, {-0.9, 30}}) {
    const AXi r = a_xi(beta);
    const double lambda = std::acosh(0.5 * std::exp(-beta));
    const double direct = -std::exp(beta) * fsc_gapped(L, lambda, Twist::real(2 * pi / 3));
    CHECK(r.a * std::exp(-L / r.xi) / std::sqrt(L) == doctest::Approx(direct).epsilon(1e-12));
  }
}
