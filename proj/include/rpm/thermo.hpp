#pragma once

#include "rpm/xxz.hpp"

namespace rpm {

/// Half-width of the quadrature window for Y; cosh(pi X) exceeds 1e16 there.
inline constexpr double kYWindow = 12.0;

/// Y(gamma) = int dx / [cosh(pi x) (cosh(2 gamma x) - cos gamma)] over the
/// real line, for 0 < gamma < pi.
double Y(double gamma);

/// n-th derivative in gamma, n = 0..6, differentiated under the integral.
double Y_deriv(double gamma, int order);

/// Same with an explicit window [-window, window].
double Y_windowed(double gamma, int order, double window);

/// Ytilde(lambda) = (1/sinh lambda) sum_m exp(-|m| lambda) / cosh(m lambda).
double Ytilde(double lambda);

/// Derivative of order 0..2 in lambda.
double Ytilde_deriv(double lambda, int order);

/// The sum cut after |m| <= terms, for truncation checks.
double Ytilde_truncated(double lambda, int terms);

/// Ground-state energy per site of the untwisted chain, Delta < 0.
double bulk_energy(double delta);

/// lim L (E_L - L e_inf) in the gapless regime.
double fsc_gapless(double gamma, Twist twist);

struct EllipticModuli {
  double lambda = 0;
  double k = 0;
  double k_prime = 0;
  double k1 = 0;  // modulus belonging to the nome exp(-2 lambda)
  double K_k = 0;
  double K_kprime = 0;
};

/// Moduli with K(k')/K(k) = lambda/pi.
EllipticModuli elliptic_moduli(double lambda);

/// 4 e^{-lambda} prod_n [(1 + e^{-2 lambda(2n+2)}) / (1 + e^{-2 lambda(2n+1)})]^4.
double k1_product(double lambda);

enum class GappedBranch { Ground, Excited };

/// Leading exponentially small correction E_L - L e_inf for Delta = -cosh(lambda).
double fsc_gapped(int width, double lambda, Twist twist, GappedBranch branch = GappedBranch::Ground);

struct AXi {
  double a = 0;
  double xi = 0;
};

/// Prefactor and correlation length of the tiles CGF correction below the
/// critical fugacity: FSC = a e^{-L/xi} / sqrt(L), for beta < -ln 2.
AXi a_xi(double beta);

}  // namespace rpm
