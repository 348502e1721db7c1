#include "rpm/ldt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <boost/math/tools/roots.hpp>

#include "rpm/dyck.hpp"
#include "rpm/errors.hpp"
#include "rpm/jet.hpp"
#include "rpm/numdiff.hpp"
#include "rpm/reference_values.hpp"
#include "rpm/thermo.hpp"

namespace rpm {

namespace {

using std::numbers::pi;

// 9 sqrt(3) / (4 pi): curvature scale of the global CGF at the stochastic point.
constexpr double kGlobalScale = 9 * std::numbers::sqrt3 / (4 * pi);
const Twist kStochasticTwist = Twist::real(2 * pi / 3);

enum class Branch { Upper, Lower, Seam };

Branch branch_of(double beta) {
  const double c = 0.5 * std::exp(-beta);
  return c < 1 ? Branch::Upper : (c > 1 ? Branch::Lower : Branch::Seam);
}

double upper_bulk(double beta) {
  const double gamma = std::acos(0.5 * std::exp(-beta));
  return (std::exp(beta) - 0.25 * std::exp(-beta)) * Y(gamma) - 1;
}

double lower_bulk(double beta) {
  const double lambda = std::acosh(0.5 * std::exp(-beta));
  return (0.25 * std::exp(-beta) - std::exp(beta)) * Ytilde(lambda) - 1;
}

// theta / sin(theta) with cos(theta) = w, continued to eta / sinh(eta) for w > 1.
double arc_ratio(double w) {
  if (w <= 1) {
    const double t = std::acos(w);
    return t < 1e-4 ? 1 + t * t / 6 : t / std::sin(t);
  }
  const double e = std::acosh(w);
  return e < 1e-4 ? 1 - e * e / 6 : e / std::sinh(e);
}

// arccos(w)^2, continued to -arccosh(w)^2 for w > 1.
double arc_squared(double w) {
  if (w <= 1) {
    const double t = std::acos(w);
    return t * t;
  }
  const double e = std::acosh(w);
  return -e * e;
}

template <class F>
double solve_increasing(F&& f, double lo, double hi, double floor, double ceiling, const char* what) {
  while (f(lo) > 0) {
    if (lo <= floor) throw NumericFailure(std::string(what) + ": no bracket above " + std::to_string(lo), f(lo));
    lo = std::max(floor, lo - 2 * (hi - lo));
  }
  while (f(hi) < 0) {
    if (hi >= ceiling) throw NumericFailure(std::string(what) + ": no bracket below " + std::to_string(hi), f(hi));
    hi = std::min(ceiling, hi + 2 * (hi - lo));
  }
  boost::uintmax_t iterations = 200;
  const auto r = boost::math::tools::toms748_solve(f, lo, hi, boost::math::tools::eps_tolerance<double>(50), iterations);
  if (iterations >= 200) throw NumericFailure(std::string(what) + ": root iteration cap reached", r.second - r.first);
  return 0.5 * (r.first + r.second);
}

struct DiffStep {
  double h;
  int levels;
};

// Base steps per function: the global CGF is entire near 0, the tiles bulk
// and correction are analytic within |beta| < ln 2.
constexpr DiffStep kGlobalStep{0.2, 3};
constexpr DiffStep kBulkStep{0.3, 4};
constexpr DiffStep kCorrectionStep{0.05, 3};

using Jet4 = Jet<4>;

void check_order(int order) {
  if (order < 1 || order > 4) throw InvalidArgument("cumulant order must be in 1..4");
}

double relative_gap(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace

double critical_beta() { return -std::numbers::ln2; }

double tiles_bulk_per_site(double beta) {
  switch (branch_of(beta)) {
    case Branch::Upper:
      return upper_bulk(beta);
    case Branch::Lower:
      return lower_bulk(beta);
    default:
      return std::numbers::ln2 - 1;
  }
}

double tiles_bulk_per_site_derivative(double beta) {
  const double ep = std::exp(beta), em = std::exp(-beta);
  switch (branch_of(beta)) {
    case Branch::Upper: {
      const double gamma = std::acos(0.5 * em);
      return (ep + 0.25 * em) * Y(gamma) + ep * std::sin(gamma) * std::cos(gamma) * Y_deriv(gamma, 1);
    }
    case Branch::Lower: {
      const double lambda = std::acosh(0.5 * em);
      return -(ep + 0.25 * em) * Ytilde(lambda) - ep * std::sinh(lambda) * std::cosh(lambda) * Ytilde_deriv(lambda, 1);
    }
    default:
      return reference::kTilesCriticalPerSite;
  }
}

double tiles_fsc_scaled(double beta) {
  if (branch_of(beta) != Branch::Upper) throw InvalidArgument("tiles_fsc_scaled: beta must exceed -ln 2");
  const double gamma = std::acos(0.5 * std::exp(-beta));
  return -std::exp(beta) * fsc_gapless(gamma, kStochasticTwist);
}

double global_scaled(double alpha) {
  return kGlobalScale * (pi * pi / 9 - arc_squared(0.5 * std::exp(0.5 * alpha)));
}

double global_scaled_derivative(double alpha) {
  const double w = 0.5 * std::exp(0.5 * alpha);
  return kGlobalScale * w * arc_ratio(w);
}

CgfValue cgf_tiles(double beta, int width) {
  check_even_width(width);
  CgfValue v;
  v.beta = beta;
  v.width = width;
  v.bulk = width * tiles_bulk_per_site(beta);
  switch (branch_of(beta)) {
    case Branch::Upper:
      v.regime = Regime::Gapless;
      v.fsc = tiles_fsc_scaled(beta) / width;
      break;
    case Branch::Lower: {
      v.regime = Regime::Gapped;
      const AXi r = a_xi(beta);
      v.fsc = r.a * std::exp(-width / r.xi) / std::sqrt(static_cast<double>(width));
      break;
    }
    default:
      v.regime = Regime::Boundary;
  }
  return v;
}

CgfValue cgf_global(double alpha, int width) {
  check_even_width(width);
  CgfValue v;
  v.alpha = alpha;
  v.width = width;
  v.fsc = global_scaled(alpha) / width;
  return v;
}

CgfValue joint_cgf(double alpha, double beta, int width) {
  check_even_width(width);
  const XxzParams p = map_params(alpha, beta, width);
  CgfValue v;
  v.alpha = alpha;
  v.beta = beta;
  v.width = width;
  v.regime = p.regime;
  const double eb = std::exp(beta);
  v.bulk = -eb * width * bulk_energy(p.delta) - 0.75 * width;
  if (p.regime == Regime::Gapless)
    v.fsc = -eb * fsc_gapless(p.gamma, p.twist) / width;
  else if (p.regime == Regime::Gapped)
    v.fsc = -eb * fsc_gapped(width, p.lambda, p.twist);
  return v;
}

double CumulantCoefficients::at(Observable which, int width) const noexcept {
  const double l = width;
  return which == Observable::Tiles ? lead * l + sub / l : lead / l;
}

CumulantCoefficients cumulant_closed_form(Observable which, int order) {
  check_order(order);
  if (which == Observable::Tiles) {
    const Jet4 beta = Jet4::variable(0), ep = exp(beta), em = exp(-1.0 * beta);
    const Jet4 gamma = acos(0.5 * em);
    const Jet4 bulk = (ep - 0.25 * em) * compose<4>(reference::kYAtPiThird, gamma) - 1.0;
    // -e^beta times the gapless correction at the stochastic twist
    const Jet4 sin_gamma = pow(1.0 - 0.25 * em * em, 0.5);
    const double phi2 = 4 * pi * pi / 9;
    const Jet4 inner = -pi * pi / 6 * sin_gamma * pow(gamma, -1.0) +
                       phi2 * pi / 4 * sin_gamma * pow(gamma, -1.0) * pow(pi - gamma, -1.0);
    const Jet4 correction = -1.0 * ep * inner;
    return {bulk.derivative(order), correction.derivative(order)};
  }
  const Jet4 w = 0.5 * exp(0.5 * Jet4::variable(0));
  const Jet4 t = acos(w);
  return {(kGlobalScale * (pi * pi / 9 - t * t)).derivative(order), 0};
}

CumulantCoefficients cumulant_tabulated(Observable which, int order) {
  check_order(order);
  if (which == Observable::Tiles) return {reference::kTilesCumulantLead[order], reference::kTilesCumulantSub[order]};
  return {reference::kGlobalCumulant[order], 0};
}

CumulantCoefficients cumulant_numeric(Observable which, int order) {
  check_order(order);
  if (which == Observable::Tiles) {
    return {richardson_derivative([](double b) { return upper_bulk(b); }, 0.0, order, kBulkStep.h, kBulkStep.levels),
            richardson_derivative([](double b) { return tiles_fsc_scaled(b); }, 0.0, order, kCorrectionStep.h,
                                  kCorrectionStep.levels)};
  }
  return {richardson_derivative([](double a) { return global_scaled(a); }, 0.0, order, kGlobalStep.h, kGlobalStep.levels),
          0};
}

double cumulant(Observable which, int order, int width) {
  check_even_width(width);
  const CumulantCoefficients c = cumulant_closed_form(which, order), n = cumulant_numeric(which, order);
  const double gap = std::max(relative_gap(n.lead, c.lead), which == Observable::Tiles ? relative_gap(n.sub, c.sub) : 0.0);
  if (gap > 1e-6) throw NumericFailure("cumulant: closed form and numeric derivative disagree", gap);
  return c.at(which, width);
}

double covariance_scaled() {
  // The bulk does not depend on alpha, so only the correction (times L) contributes.
  auto f = [](double a, double b) { return 2 * joint_cgf(a, b, 2).fsc; };
  return richardson_mixed(f, 0.0, 0.0);
}

double beta_of_tiles_rate(double y) {
  if (!(y > 0)) throw InvalidArgument("tiles rate must be positive");
  if (y == reference::kTilesCriticalPerSite) return critical_beta();
  return solve_increasing([y](double b) { return tiles_bulk_per_site_derivative(b) - y; }, -1.0, 1.0, -60.0, 30.0,
                          "tiles rate");
}

RatePoint rate_point(Observable which, double y) {
  RatePoint p;
  p.y = y;
  if (which == Observable::Tiles) {
    if (!(y > 0)) {
      p.infinite = true;
      p.rate = std::numeric_limits<double>::infinity();
      p.parameter = -std::numeric_limits<double>::infinity();
      return p;
    }
    p.parameter = beta_of_tiles_rate(y);
    p.rate = p.parameter * y - tiles_bulk_per_site(p.parameter);
    return p;
  }
  if (y < 0) {
    p.infinite = true;
    p.rate = std::numeric_limits<double>::infinity();
    p.parameter = -std::numeric_limits<double>::infinity();
    return p;
  }
  if (y == 0) {
    p.parameter = -std::numeric_limits<double>::infinity();
    p.rate = kGlobalScale * (pi * pi / 4 - pi * pi / 9);
    return p;
  }
  p.parameter = solve_increasing([y](double a) { return global_scaled_derivative(a) - y; }, -1.0, 1.0, -700.0, 700.0,
                                 "global rate");
  p.rate = p.parameter * y - global_scaled(p.parameter);
  return p;
}

std::vector<RatePoint> rate_function(Observable which, std::span<const double> y_grid) {
  std::vector<RatePoint> out;
  out.reserve(y_grid.size());
  for (double y : y_grid) out.push_back(rate_point(which, y));
  return out;
}

double conditional_scale(double beta) {
  if (branch_of(beta) != Branch::Upper) throw InvalidArgument("conditional_scale: beta must exceed -ln 2");
  const double gamma = std::acos(0.5 * std::exp(-beta));
  return pi * std::sqrt(4 * std::exp(2 * beta) - 1) / (2 * gamma * (pi - gamma));
}

ConditionalCgf conditional_cgf(double alpha, double y, int width) {
  check_even_width(width);
  if (!(y > 0)) throw InvalidArgument("conditional_cgf: y must be positive");
  ConditionalCgf c;
  const double per_site = y / width;
  if (std::abs(per_site - reference::kTilesCriticalPerSite) <= 1e-12) {
    c.beta = critical_beta();
    c.regime = Regime::Boundary;
    c.value = c.tau = std::numeric_limits<double>::quiet_NaN();
    return c;
  }
  c.beta = beta_of_tiles_rate(per_site);
  if (c.beta > critical_beta()) {
    c.regime = Regime::Gapless;
    c.tau = width * kGlobalScale / conditional_scale(c.beta);
    c.value = global_scaled(alpha) / c.tau;
  } else {
    c.regime = Regime::Gapped;
    const AXi r = a_xi(c.beta);
    c.tau = std::sqrt(static_cast<double>(width)) * std::exp(width / r.xi) / r.a;
    c.value = std::expm1(0.5 * alpha) / c.tau;
  }
  return c;
}

double SewingReport::max_raw_gap() const noexcept {
  double m = 0;
  for (int k = 0; k < 4; ++k) m = std::max(m, std::abs(upper_raw[k] - lower_raw[k]));
  return m;
}

double SewingReport::max_seam_gap() const noexcept {
  double m = 0;
  for (int k = 0; k < 4; ++k) m = std::max(m, std::abs(upper_at_seam[k] - lower_at_seam[k]));
  return m;
}

SewingReport tiles_sewing(double offset) {
  if (!(offset > 0 && offset < 0.1)) throw InvalidArgument("tiles_sewing: offset must lie in (0, 0.1)");
  SewingReport r;
  r.offset = offset;
  const double bc = critical_beta(), h = 0.05;
  auto slope = [](double b) { return tiles_bulk_per_site_derivative(b); };
  std::array<double, 5> u{}, l{};
  u[0] = upper_bulk(bc + offset);
  l[0] = lower_bulk(bc - offset);
  u[1] = slope(bc + offset);
  l[1] = slope(bc - offset);
  for (int k = 2; k <= 4; ++k) {
    u[k] = one_sided_derivative(slope, bc + offset, k - 1, +1, h, 5);
    l[k] = one_sided_derivative(slope, bc - offset, k - 1, -1, h, 5);
  }
  for (int k = 0; k <= 3; ++k) {
    r.upper_raw[k] = u[k];
    r.lower_raw[k] = l[k];
    double us = 0, ls = 0, power = 1, fact = 1;
    for (int j = 0; k + j <= 4; ++j) {
      if (j > 0) {
        power *= offset;
        fact *= j;
      }
      us += u[k + j] * (j % 2 == 0 ? 1.0 : -1.0) * power / fact;
      ls += l[k + j] * power / fact;
    }
    r.upper_at_seam[k] = us;
    r.lower_at_seam[k] = ls;
  }
  return r;
}

}  // namespace rpm
