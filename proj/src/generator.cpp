#include "rpm/generator.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include <Eigen/Eigenvalues>
#include <Eigen/SparseLU>

#include "rpm/errors.hpp"
#include "rpm/numdiff.hpp"

namespace rpm {

namespace {

// Fills the columns [begin, end) of the generator.
void fill_columns(const std::vector<DyckConfig>& states, double alpha, double beta, std::size_t begin,
                  std::size_t end, std::vector<Eigen::Triplet<double>>& out) {
  const int n = states.front().width();
  for (std::size_t col = begin; col < end; ++col) {
    const DyckConfig& c = states[col];
    int active = 0;
    for (int site = 1; site <= n; ++site) {
      const DropOutcome d = drop_tile(c, site);
      if (d.kind == DropKind::Reflection) continue;
      ++active;
      const double w = std::exp(alpha * (d.global ? 1.0 : 0.0) + beta * d.tiles_removed);
      out.emplace_back(static_cast<int>(rank(d.next).index), static_cast<int>(col), w);
    }
    out.emplace_back(static_cast<int>(col), static_cast<int>(col), -static_cast<double>(active));
  }
}

double max_abs(const Eigen::VectorXd& v) { return v.cwiseAbs().maxCoeff(); }

}  // namespace

DeformedGenerator build_generator(int width, double alpha, double beta) {
  check_width(width);
  if (width > kMaxEnumerationWidth)
    throw ResourceLimit("generator enumeration is limited to L <= " + std::to_string(kMaxEnumerationWidth));
  const std::vector<DyckConfig> states = enumerate_states(width);
  const std::size_t dim = states.size();

  const std::size_t workers =
      dim < 4096 ? 1 : std::max<std::size_t>(1, std::min<std::size_t>(std::thread::hardware_concurrency(), 16));
  std::vector<std::vector<Eigen::Triplet<double>>> parts(workers);
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      const std::size_t b = dim * w / workers, e = dim * (w + 1) / workers;
      pool.emplace_back([&, w, b, e] { fill_columns(states, alpha, beta, b, e, parts[w]); });
    }
  }
  std::vector<Eigen::Triplet<double>> triplets;
  for (auto& p : parts) triplets.insert(triplets.end(), p.begin(), p.end());

  DeformedGenerator g;
  g.width = width;
  g.alpha = alpha;
  g.beta = beta;
  g.matrix.resize(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  g.matrix.setFromTriplets(triplets.begin(), triplets.end());
  g.matrix.makeCompressed();
  return g;
}

std::vector<std::complex<double>> generator_spectrum(const DeformedGenerator& g) {
  if (g.dimension() > 4 * kDenseEigenLimit)
    throw ResourceLimit("dense spectrum requested for dimension " + std::to_string(g.dimension()));
  const Eigen::MatrixXd dense(g.matrix);
  Eigen::EigenSolver<Eigen::MatrixXd> es(dense, false);
  if (es.info() != Eigen::Success) throw NumericFailure("dense eigensolver failed", 0.0);
  const Eigen::VectorXcd ev = es.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

namespace {

// Power iteration on g + shift*I with shift = L, which makes the iteration
// matrix entrywise nonnegative. For a positive iterate v the Collatz-Wielandt
// quotients min/max (Av)_i / v_i bracket the Perron root.
double power_iteration(const DeformedGenerator& g, const PerronOptions& opt) {
  const double shift = g.width;
  const Eigen::Index n = g.dimension();
  Eigen::VectorXd v = Eigen::VectorXd::Ones(n) / std::sqrt(static_cast<double>(n));
  Eigen::VectorXd w(n);
  double lo = 0, hi = 0, previous = std::numeric_limits<double>::infinity();
  for (int it = 0; it < opt.max_iterations; ++it) {
    w = g.matrix * v + shift * v;
    lo = std::numeric_limits<double>::infinity();
    hi = -lo;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double q = w[i] / v[i];
      lo = std::min(lo, q);
      hi = std::max(hi, q);
    }
    const double estimate = 0.5 * (lo + hi) - shift;
    v = w / w.norm();
    const double residual = (g.matrix * v - estimate * v).lpNorm<Eigen::Infinity>();
    if ((hi - lo) < opt.tolerance * std::max(1.0, std::abs(hi)) ||
        (std::abs(estimate - previous) < opt.tolerance && residual < 1e-10))
      return estimate;
    previous = estimate;
  }
  throw NumericFailure("power iteration did not converge within " + std::to_string(opt.max_iterations) +
                           " iterations",
                       hi - lo);
}

}  // namespace

double largest_eigenvalue(const DeformedGenerator& g, const PerronOptions& opt) {
  if (!opt.force_power_iteration && g.dimension() <= kDenseEigenLimit) {
    const auto spectrum = generator_spectrum(g);
    const auto top = std::max_element(spectrum.begin(), spectrum.end(),
                                      [](auto a, auto b) { return a.real() < b.real(); });
    if (std::abs(top->imag()) > 1e-8)
      throw NumericFailure("Perron root has a nonzero imaginary part", std::abs(top->imag()));
    return top->real();
  }
  return power_iteration(g, opt);
}

double perron_root(int width, double alpha, double beta) {
  return largest_eigenvalue(build_generator(width, alpha, beta));
}

StationaryState stationary_state(int width) {
  const DeformedGenerator g = build_generator(width, 0.0, 0.0);
  const Eigen::Index n = g.dimension();

  // Replace the first balance equation by the normalization sum(pi) = 1.
  Eigen::SparseMatrix<double> a = g.matrix;
  a.prune([](Eigen::Index row, Eigen::Index, double) { return row != 0; });
  {
    std::vector<Eigen::Triplet<double>> ones;
    for (Eigen::Index j = 0; j < n; ++j) ones.emplace_back(0, static_cast<int>(j), 1.0);
    Eigen::SparseMatrix<double> first(n, n);
    first.setFromTriplets(ones.begin(), ones.end());
    a += first;
  }
  a.makeCompressed();
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.compute(a);
  if (lu.info() != Eigen::Success) throw NumericFailure("stationary LU factorization failed", 0.0);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  rhs[0] = 1.0;
  Eigen::VectorXd pi = lu.solve(rhs);
  for (int refine = 0; refine < 3; ++refine) pi += lu.solve(Eigen::VectorXd(rhs - a * pi));

  StationaryState s;
  s.width = width;
  s.kernel_residual = max_abs(g.matrix * pi);
  if (pi.minCoeff() <= 0 || s.kernel_residual > 1e-10)
    throw NumericFailure("stationary vector is not a positive kernel vector", s.kernel_residual);
  s.probabilities = pi / pi.sum();
  s.integer_form = s.probabilities / s.probabilities.minCoeff();
  s.integer_deviation = (s.integer_form.array() - s.integer_form.array().round()).abs().maxCoeff();
  s.kernel_residual = max_abs(g.matrix * s.probabilities);
  return s;
}

StationaryObservables stationary_observables(const StationaryState& s) {
  const std::vector<DyckConfig> states = enumerate_states(s.width);
  StationaryObservables o;
  for (std::size_t k = 0; k < states.size(); ++k) {
    const double p = s.probabilities[static_cast<Eigen::Index>(k)];
    bool susceptible = false;
    for (int site = 1; site <= s.width; ++site) {
      const DropOutcome d = drop_tile(states[k], site);
      if (d.kind == DropKind::Reflection) o.avg_peaks += p;
      if (d.global) susceptible = true;
      o.mean_tiles_rate += p * d.tiles_removed;
      o.mean_global_rate += p * (d.global ? 1.0 : 0.0);
    }
    if (susceptible) o.prob_global_susceptible += p;
  }
  return o;
}

double spectral_cumulant(int width, Counter which, int order) {
  auto f = [&](double x) {
    return which == Counter::Tiles ? perron_root(width, 0.0, x) : perron_root(width, x, 0.0);
  };
  // Higher orders amplify eigenvalue round-off; start from a wider step.
  const double h = order <= 2 ? 1e-2 : 5e-2;
  const int levels = order <= 2 ? 3 : 4;
  return richardson_derivative(f, 0.0, order, h, levels);
}

double spectral_covariance(int width) {
  return richardson_mixed([&](double a, double b) { return perron_root(width, a, b); }, 0.0, 0.0);
}

}  // namespace rpm
