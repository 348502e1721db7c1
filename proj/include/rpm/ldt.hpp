#pragma once

#include <array>
#include <span>
#include <vector>

#include "rpm/xxz.hpp"

namespace rpm {

enum class Observable { Tiles, Global };

/// Critical tile fugacity: Delta(beta) = -1.
double critical_beta();

/// Scaled CGF split into the O(L) bulk and the subleading correction.
struct CgfValue {
  double alpha = 0;
  double beta = 0;
  int width = 0;
  double bulk = 0;
  double fsc = 0;
  Regime regime = Regime::Gapless;

  double total() const noexcept { return bulk + fsc; }
};

/// Tiles counter alone. At beta = -ln 2 the correction is omitted and the
/// regime is Boundary.
CgfValue cgf_tiles(double beta, int width);

/// Global avalanche counter alone (the bulk vanishes).
CgfValue cgf_global(double alpha, int width);

/// Both counters, from the chain's ground-state energy.
CgfValue joint_cgf(double alpha, double beta, int width);

/// Bulk tiles CGF per site, b(beta) = cgf_tiles(beta, L).bulk / L, and its
/// first derivative in closed form.
double tiles_bulk_per_site(double beta);
double tiles_bulk_per_site_derivative(double beta);

/// Finite-size part of the tiles CGF in the gapless regime, times L.
double tiles_fsc_scaled(double beta);

/// L * cgf_global(alpha, L) and its derivative in alpha.
double global_scaled(double alpha);
double global_scaled_derivative(double alpha);

/// Cumulant c_n = lead L + sub / L (tiles) or c_n = lead / L (global, sub = 0).
struct CumulantCoefficients {
  double lead = 0;
  double sub = 0;

  double at(Observable which, int width) const noexcept;
};

/// Coefficients for n = 1..4 from exact Taylor-series arithmetic on the
/// CGF, with Y entering only through its tabulated derivatives at pi/3.
CumulantCoefficients cumulant_closed_form(Observable which, int order);

/// The tabulated closed-form coefficients (reference_values.hpp).
CumulantCoefficients cumulant_tabulated(Observable which, int order);

/// Coefficients from Richardson-extrapolated derivatives of the CGF at zero.
CumulantCoefficients cumulant_numeric(Observable which, int order);

/// Closed-form cumulant; throws NumericFailure when the numeric
/// derivatives disagree by more than 1e-6 relative.
double cumulant(Observable which, int order, int width);

/// L times the mixed derivative of the joint CGF at the origin.
double covariance_scaled();

/// A point on a rate function in scaled units: for tiles, y and rate are
/// per site (y/L, I/L); for global avalanches they are multiplied by L.
/// `parameter` is the Legendre conjugate (beta or alpha).
struct RatePoint {
  double y = 0;
  double rate = 0;
  double parameter = 0;
  bool infinite = false;
};

RatePoint rate_point(Observable which, double y);
std::vector<RatePoint> rate_function(Observable which, std::span<const double> y_grid);

/// Solves b'(beta) = y for the per-site tiles rate y > 0.
double beta_of_tiles_rate(double y_per_site);

struct ConditionalCgf {
  double value = 0;
  double tau = 0;  // effective unit of time
  double beta = 0;
  Regime regime = Regime::Gapless;
};

/// g(beta) of the critical conditional CGF, beta > -ln 2.
double conditional_scale(double beta);

/// CGF of the global counter conditioned on the tiles rate y (not per site).
/// Gapless: value = F(alpha) / tau with F = global_scaled; gapped: value =
/// (e^{alpha/2} - 1) / tau. At the critical rate the regime is Boundary and
/// value, tau are NaN.
ConditionalCgf conditional_cgf(double alpha, double y, int width);

/// Value and first three derivatives of each bulk branch (per site), measured at
/// -ln 2 +- offset and Taylor-continued to -ln 2.
struct SewingReport {
  double offset = 0;
  std::array<double, 4> upper_raw{};
  std::array<double, 4> lower_raw{};
  std::array<double, 4> upper_at_seam{};
  std::array<double, 4> lower_at_seam{};

  double max_raw_gap() const noexcept;
  double max_seam_gap() const noexcept;
};

SewingReport tiles_sewing(double offset = 1e-4);

}  // namespace rpm
