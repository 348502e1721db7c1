#include "rpm/thermo.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "rpm/combinatorics.hpp"
#include "rpm/dyck.hpp"
#include "rpm/errors.hpp"

namespace rpm {

namespace {

using std::numbers::pi;

constexpr int kMaxYOrder = 6;
constexpr double kPanel = 0.5;

// d^n/dgamma^n of 1 / (cosh(2 gamma x) - cos gamma), through the Leibniz rule
// applied to g * D = 1. D itself is written as 2 sinh^2(gamma x) + 2 sin^2(gamma/2)
// to keep full relative precision when both terms are small.
double kernel_derivative(double x, double gamma, int n) {
  std::array<double, kMaxYOrder + 1> d{}, g{};
  const double s = std::sinh(gamma * x), h = std::sin(0.5 * gamma);
  d[0] = 2 * s * s + 2 * h * h;
  const double ch = std::cosh(2 * gamma * x), sh = std::sinh(2 * gamma * x);
  double power = 1;
  for (int k = 1; k <= n; ++k) {
    power *= 2 * x;
    d[k] = power * (k % 2 == 0 ? ch : sh) - std::cos(gamma + 0.5 * k * pi);
  }
  g[0] = 1 / d[0];
  for (int m = 1; m <= n; ++m) {
    double acc = 0;
    for (int j = 0; j < m; ++j) acc += static_cast<double>(binomial(m, j)) * g[j] * d[m - j];
    g[m] = -acc * g[0];
  }
  return g[n];
}

void check_gamma(double gamma) {
  if (!(gamma > 0 && gamma < pi)) throw InvalidArgument("Y: gamma must lie in (0, pi)");
}

// Term e^{-m lambda}/cosh(m lambda) = 2/(e^{2 m lambda} + 1) and its lambda-derivatives.
double sum_term(double m, double lambda, int order) {
  const double c = std::cosh(m * lambda);
  switch (order) {
    case 0:
      return 2 / (std::exp(2 * m * lambda) + 1);
    case 1:
      return -m / (c * c);
    default:
      return 2 * m * m * std::sinh(m * lambda) / (c * c * c);
  }
}

int default_terms(double lambda) { return static_cast<int>(std::ceil(40.0 / (2 * lambda))) + 1; }

double ytilde_impl(double lambda, int order, int terms) {
  if (!(lambda > 0)) throw InvalidArgument("Ytilde: lambda must be positive");
  if (order < 0 || order > 2) throw InvalidArgument("Ytilde: order must be in 0..2");
  // S and its derivatives, summed from the smallest terms upward.
  std::array<double, 3> sum{};
  for (int m = terms; m >= 1; --m)
    for (int o = 0; o <= order; ++o) sum[o] += 2 * sum_term(m, lambda, o);
  sum[0] += 1;
  const double sh = std::sinh(lambda), co = std::cosh(lambda);
  const std::array<double, 3> c{1 / sh, -co / (sh * sh), (1 + co * co) / (sh * sh * sh)};
  double out = 0;
  for (int j = 0; j <= order; ++j) out += static_cast<double>(binomial(order, j)) * c[order - j] * sum[j];
  return out;
}

double agm(double a, double b) {
  for (int it = 0; it < 64 && std::abs(a - b) > 1e-16 * a; ++it) {
    const double m = 0.5 * (a + b);
    b = std::sqrt(a * b);
    a = m;
  }
  return 0.5 * (a + b);
}

struct Thetas {
  double t2, t3, t4;
};

Thetas thetas(double lambda) {
  const double q = std::exp(-lambda);
  double t2 = 0, t3 = 1, t4 = 1;
  for (int n = 0;; ++n) {
    const double a = std::exp(-lambda * n * (n + 1.0));
    t2 += a;
    if (n >= 1) {
      const double b = std::exp(-lambda * n * static_cast<double>(n));
      t3 += 2 * b;
      t4 += (n % 2 == 0 ? 2 : -2) * b;
    }
    if (a < 1e-18 && n >= 1) break;
  }
  return {2 * std::pow(q, 0.25) * t2, t3, t4};
}

// ln k1 = 2 (ln k - ln(1 + k')), with ln k taken from k' when k is close to 1.
double log_k1_of(const EllipticModuli& m) {
  const double log_k = m.k < 0.5 ? std::log(m.k) : 0.5 * std::log1p(-m.k_prime * m.k_prime);
  return 2 * (log_k - std::log1p(m.k_prime));
}

}  // namespace

double Y_windowed(double gamma, int order, double window) {
  check_gamma(gamma);
  if (order < 0 || order > kMaxYOrder) throw InvalidArgument("Y: derivative order must be in 0..6");
  if (!(window > 0)) throw InvalidArgument("Y: window must be positive");
  auto f = [&](double x) { return kernel_derivative(x, gamma, order) / std::cosh(pi * x); };
  const int panels = static_cast<int>(std::ceil(window / kPanel));
  const double width = window / panels;
  double total = 0, error = 0;
  for (int p = 0; p < panels; ++p) {
    double e = 0;
    total += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, p * width, (p + 1) * width, 0, 0, &e);
    error += e;
  }
  if (error > 1e-13 * std::max(1.0, std::abs(total))) throw NumericFailure("Y: quadrature did not converge", error);
  return 2 * total;
}

double Y_deriv(double gamma, int order) { return Y_windowed(gamma, order, kYWindow + 2 * order); }

double Y(double gamma) { return Y_windowed(gamma, 0, kYWindow); }

double Ytilde_truncated(double lambda, int terms) { return ytilde_impl(lambda, 0, terms); }

double Ytilde(double lambda) { return Ytilde_deriv(lambda, 0); }

double Ytilde_deriv(double lambda, int order) {
  if (!(lambda > 0)) throw InvalidArgument("Ytilde: lambda must be positive");
  return ytilde_impl(lambda, order, default_terms(lambda));
}

double bulk_energy(double delta) {
  if (!(delta < 0)) throw InvalidArgument("bulk_energy: Delta must be negative");
  if (delta > -1) {
    const double gamma = std::acos(-delta);
    const double s = std::sin(gamma);
    return 0.5 * std::cos(gamma) - s * s * Y(gamma);
  }
  if (delta < -1) {
    const double lambda = std::acosh(-delta);
    const double s = std::sinh(lambda);
    return 0.5 * std::cosh(lambda) - s * s * Ytilde(lambda);
  }
  return 0.5 * (bulk_energy(-1 + 1e-6) + bulk_energy(-1 - 1e-6));
}

double fsc_gapless(double gamma, Twist twist) {
  if (!(gamma > 0 && gamma <= 0.5 * pi)) throw InvalidArgument("fsc_gapless: gamma must lie in (0, pi/2]");
  const double s = std::sin(gamma);
  return -pi * pi * s / (6 * gamma) + twist.phi_squared() * pi * s / (4 * gamma * (pi - gamma));
}

EllipticModuli elliptic_moduli(double lambda) {
  if (!(lambda > 0)) throw InvalidArgument("elliptic_moduli: lambda must be positive");
  EllipticModuli m;
  m.lambda = lambda;
  // Work at whichever of the nomes e^{-lambda}, e^{-pi^2/lambda} is smaller.
  const bool dual = lambda < pi;
  const Thetas t = thetas(dual ? pi * pi / lambda : lambda);
  const double a = t.t2 * t.t2 / (t.t3 * t.t3), b = t.t4 * t.t4 / (t.t3 * t.t3);
  m.k = dual ? b : a;
  m.k_prime = dual ? a : b;
  m.K_k = pi / (2 * agm(1.0, m.k_prime));
  m.K_kprime = pi / (2 * agm(1.0, m.k));
  const double r = m.k / (1 + m.k_prime);
  m.k1 = r * r;
  return m;
}

double k1_product(double lambda) {
  if (!(lambda > 0)) throw InvalidArgument("k1_product: lambda must be positive");
  double p = 1;
  for (int n = 0;; ++n) {
    const double num = std::exp(-2 * lambda * (2 * n + 2)), den = std::exp(-2 * lambda * (2 * n + 1));
    p *= std::pow((1 + num) / (1 + den), 4);
    if (den < 1e-18) break;
  }
  return 4 * std::exp(-lambda) * p;
}

double fsc_gapped(int width, double lambda, Twist twist, GappedBranch branch) {
  check_even_width(width);
  const EllipticModuli m = elliptic_moduli(lambda);
  const double sign = branch == GappedBranch::Ground ? -1.0 : 1.0;
  const double log_k1 = log_k1_of(m);
  return sign * twist.cos_half() * std::sinh(lambda) * std::sqrt(8 * m.k_prime) / (std::pow(pi, 1.5) * std::sqrt(width)) *
         m.K_k * std::exp(0.5 * width * log_k1);
}

AXi a_xi(double beta) {
  if (!(beta < -std::numbers::ln2)) throw InvalidArgument("a_xi: beta must be below -ln 2");
  const double lambda = std::acosh(0.5 * std::exp(-beta));
  const EllipticModuli m = elliptic_moduli(lambda);
  const double log_k1 = log_k1_of(m);
  AXi r;
  r.xi = -2 / log_k1;
  r.a = std::exp(beta) * 0.5 * std::sinh(lambda) * std::sqrt(8 * m.k_prime) * m.K_k / std::pow(pi, 1.5);
  return r;
}

}  // namespace rpm
