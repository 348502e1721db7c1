#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace rpm {

using cplx = std::complex<double>;

/// Largest chain for which the S_z = 0 sector is built densely (dim 924).
inline constexpr int kMaxDenseChain = 12;

enum class Regime { Gapless, Gapped, Boundary };

/// Twist angle phi with u = exp(i phi / L); phi is real in [0, pi] or purely
/// imaginary, so phi^2 is real and at most pi^2.
class Twist {
 public:
  static Twist real(double phi);
  static Twist imaginary(double magnitude);  // phi = i * magnitude
  static Twist from_phi_squared(double phi_squared);

  double phi_squared() const noexcept { return phi2_; }
  cplx phi() const noexcept;
  double cos_half() const noexcept;  // cos(phi/2), real on both branches
  cplx u(int width) const noexcept;  // exp(i phi / L)

 private:
  explicit Twist(double phi2) : phi2_(phi2) {}
  double phi2_ = 0;
};

/// Parameter bundle of the twisted XXZ chain in the RPM normalization.
struct XxzParams {
  int width = 0;
  double delta = 0;
  Twist twist = Twist::real(0.0);
  Regime regime = Regime::Gapless;
  double gamma = 0;   // Delta = -cos(gamma), meaningful when gapless
  double lambda = 0;  // Delta = -cosh(lambda), meaningful when gapped

  cplx u() const noexcept { return twist.u(width); }
};

/// Parameters with the given anisotropy and twist; regime fields derived.
XxzParams make_params(int width, double delta, Twist twist);

/// Deformation (alpha, beta) of the generator mapped onto the chain:
/// u^{L/2} + u^{-L/2} = e^{alpha/2}, 2 Delta = -e^{-beta}.
XxzParams map_params(double alpha, double beta, int width);

/// Twist reached from the global-avalanche fugacity alpha.
Twist twist_from_alpha(double alpha);

/// Basis of the S_z = 0 sector: L-bit words with L/2 down spins (bit = 1),
/// in colex order.
std::vector<std::uint64_t> sector_basis(int width);

/// H = -sum_i [u s+_i s-_{i+1} + u^{-1} s-_i s+_{i+1} + (Delta/2) sz_i sz_{i+1}]
/// restricted to S_z = 0, periodic in i.
Eigen::MatrixXcd build_xxz(const XxzParams& p);

/// Sector operator for an arbitrary complex twist factor u.
Eigen::MatrixXcd build_xxz_sector(int width, double delta, cplx u);

/// Same operator on the full 2^L space (validation only, L <= 10).
Eigen::MatrixXcd build_xxz_full(int width, double delta, cplx u);

std::vector<cplx> xxz_spectrum(const XxzParams& p);

/// Eigenvalue with the smallest real part; throws NumericFailure if its
/// imaginary part exceeds 1e-9.
double ground_energy_dense(const XxzParams& p);

/// The two lowest real parts of the sector spectrum, ascending.
std::pair<double, double> lowest_two_dense(const XxzParams& p);

// ---------------------------------------------------------------- Bethe ansatz

struct BetheRoots {
  int width = 0;
  int magnons = 0;
  std::vector<cplx> z;
  double residual = 0;
  double delta = 0;
  cplx u = 1.0;
};

struct BetheOptions {
  int delta_steps = 50;
  int twist_steps = 50;
  double newton_tolerance = 1e-12;
  int max_newton_iterations = 50;
  int max_halving_depth = 10;
};

/// Max over i of |z_i^L - (-1)^{m-1} prod_{j != i} N_ij / D_ij|.
double bethe_residual(std::span<const cplx> z, int width, double delta, cplx u);

/// Ground-state roots of the S_z = 0 sector at (delta, u), continued from the
/// free-fermion point Delta = 0, u = 1. Throws ContinuationFailure.
BetheRoots solve_bethe(int width, double delta, cplx u, const BetheOptions& opt = {});

/// E = Delta (2m - L/2) - sum_i [u z_i + (u z_i)^{-1}], real part; throws
/// NumericFailure if the imaginary part exceeds 1e-9.
double bethe_energy(const BetheRoots& r);

/// Assembles the coordinate Bethe vector and returns ||H^T v - E v|| / ||v||.
double verify_bethe_vector(const BetheRoots& r);

}  // namespace rpm
