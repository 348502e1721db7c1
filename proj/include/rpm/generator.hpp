#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "rpm/dyck.hpp"

namespace rpm {

/// Tilted forward generator on the Dyck basis. Column C holds the jumps out
/// of configuration C: entry (C', C) sums exp(alpha*global + beta*tiles) over
/// the sites whose drop leads to C', and the diagonal is -(L - peaks(C)).
struct DeformedGenerator {
  int width = 0;
  double alpha = 0;
  double beta = 0;
  Eigen::SparseMatrix<double> matrix;

  Eigen::Index dimension() const { return matrix.rows(); }
};

DeformedGenerator build_generator(int width, double alpha, double beta);

/// Above this dimension the Perron root is found by shifted power iteration.
inline constexpr Eigen::Index kDenseEigenLimit = 1000;

struct PerronOptions {
  int max_iterations = 2'000'000;
  double tolerance = 1e-12;
  bool force_power_iteration = false;
};

/// Perron root of the generator (the largest real eigenvalue).
double largest_eigenvalue(const DeformedGenerator& g, const PerronOptions& opt = {});

/// Full spectrum by dense nonsymmetric diagonalization.
std::vector<std::complex<double>> generator_spectrum(const DeformedGenerator& g);

/// Convenience: largest_eigenvalue(build_generator(width, alpha, beta)).
double perron_root(int width, double alpha, double beta);

struct StationaryState {
  int width = 0;
  Eigen::VectorXd probabilities;
  Eigen::VectorXd integer_form;  // scaled so that the smallest entry is 1
  double kernel_residual = 0;    // max-norm of G * pi
  double integer_deviation = 0;  // max distance of integer_form entries to integers
};

StationaryState stationary_state(int width);

struct StationaryObservables {
  double avg_peaks = 0;
  double prob_global_susceptible = 0;
  double mean_tiles_rate = 0;
  double mean_global_rate = 0;
};

StationaryObservables stationary_observables(const StationaryState& s);

enum class Counter { Tiles, Global };

/// n-th derivative (n = 1..4) of the Perron root with respect to beta (tiles)
/// or alpha (global) at the origin, by Richardson-extrapolated differences.
double spectral_cumulant(int width, Counter which, int order);

/// Mixed derivative d^2 Lambda / d alpha d beta at the origin.
double spectral_covariance(int width);

}  // namespace rpm
