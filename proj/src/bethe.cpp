#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include <Eigen/Dense>

#include "rpm/combinatorics.hpp"
#include "rpm/dyck.hpp"
#include "rpm/errors.hpp"
#include "rpm/xxz.hpp"

namespace rpm {

namespace {

// Scattering factors of the Bethe equations:
// N_ij = 1 - 2 u Delta z_i + u^2 z_i z_j,  D_ij = 1 - 2 u Delta z_j + u^2 z_i z_j.
struct Scattering {
  double delta;
  cplx u;
  cplx numer(cplx zi, cplx zj) const { return 1.0 - 2.0 * u * delta * zi + u * u * zi * zj; }
  cplx denom(cplx zi, cplx zj) const { return 1.0 - 2.0 * u * delta * zj + u * u * zi * zj; }
};

double sign_of(int m) { return (m - 1) % 2 == 0 ? 1.0 : -1.0; }

Eigen::VectorXcd equations(const std::vector<cplx>& z, int width, const Scattering& s) {
  const int m = static_cast<int>(z.size());
  Eigen::VectorXcd g(m);
  for (int i = 0; i < m; ++i) {
    cplx prod = 1.0;
    for (int j = 0; j < m; ++j)
      if (j != i) prod *= s.numer(z[i], z[j]) / s.denom(z[i], z[j]);
    g[i] = std::pow(z[i], width) - sign_of(m) * prod;
  }
  return g;
}

Eigen::MatrixXcd jacobian(const std::vector<cplx>& z, int width, const Scattering& s) {
  const int m = static_cast<int>(z.size());
  const cplx u2 = s.u * s.u, ud2 = 2.0 * s.u * s.delta;
  Eigen::MatrixXcd jac(m, m);
  for (int i = 0; i < m; ++i) {
    cplx prod = 1.0;
    for (int j = 0; j < m; ++j)
      if (j != i) prod *= s.numer(z[i], z[j]) / s.denom(z[i], z[j]);
    const cplx p = sign_of(m) * prod;
    cplx dlog_i = 0.0;
    for (int k = 0; k < m; ++k) {
      if (k == i) continue;
      const cplx n = s.numer(z[i], z[k]), d = s.denom(z[i], z[k]);
      dlog_i += (-ud2 + u2 * z[k]) / n - (u2 * z[k]) / d;
      jac(i, k) = -p * ((u2 * z[i]) / n - (-ud2 + u2 * z[i]) / d);
    }
    jac(i, i) = static_cast<double>(width) * std::pow(z[i], width - 1) - p * dlog_i;
  }
  return jac;
}

// Newton's method; returns false on divergence or collision of roots.
bool newton(std::vector<cplx>& z, int width, const Scattering& s, const BetheOptions& opt) {
  std::vector<cplx> trial = z;
  for (int it = 0; it < opt.max_newton_iterations; ++it) {
    const Eigen::VectorXcd g = equations(trial, width, s);
    const double res = g.cwiseAbs().maxCoeff();
    if (!std::isfinite(res)) return false;
    if (res < opt.newton_tolerance) {
      for (std::size_t a = 0; a < trial.size(); ++a)
        for (std::size_t b = a + 1; b < trial.size(); ++b)
          if (std::abs(trial[a] - trial[b]) < 1e-8) return false;
      z = trial;
      return true;
    }
    const Eigen::VectorXcd step = jacobian(trial, width, s).fullPivLu().solve(g);
    if (!step.allFinite() || step.cwiseAbs().maxCoeff() > 0.5) return false;
    for (std::size_t k = 0; k < trial.size(); ++k) trial[k] -= step[static_cast<Eigen::Index>(k)];
  }
  return false;
}

// Free-fermion ground state: the m solutions of z^L = (-1)^{m-1} closest to 1.
std::vector<cplx> free_fermion_roots(int width, int m) {
  std::vector<cplx> z;
  const double pi = std::numbers::pi;
  if (m % 2 == 1) {
    for (int k = -(m - 1) / 2; k <= (m - 1) / 2; ++k) z.push_back(std::polar(1.0, 2 * pi * k / width));
  } else {
    for (int k = -m / 2; k < m / 2; ++k) z.push_back(std::polar(1.0, pi * (2 * k + 1) / width));
  }
  return z;
}

// Follows the roots along param(t), t in [0, 1], with adaptive bisection.
template <class Path>
void continue_along(std::vector<cplx>& z, int width, int steps, Path&& path, const BetheOptions& opt,
                    double& last_delta, double& last_t, bool twist_leg) {
  double t = 0;
  const double base = 1.0 / steps;
  double h = base;
  int depth = 0;
  while (t < 1.0 - 1e-15) {
    const double next = std::min(1.0, t + h);
    std::vector<cplx> trial = z;
    if (newton(trial, width, path(next), opt)) {
      z = std::move(trial);
      t = next;
      if (twist_leg) last_t = t;
      else last_delta = path(t).delta;
      if (depth > 0 && h < base) {
        h *= 2;
        --depth;
      }
    } else {
      if (++depth > opt.max_halving_depth)
        throw ContinuationFailure("Bethe continuation failed", equations(z, width, path(t)).cwiseAbs().maxCoeff(),
                                  last_delta, last_t);
      h *= 0.5;
    }
  }
}

}  // namespace

double bethe_residual(std::span<const cplx> z, int width, double delta, cplx u) {
  return equations(std::vector<cplx>(z.begin(), z.end()), width, Scattering{delta, u}).cwiseAbs().maxCoeff();
}

BetheRoots solve_bethe(int width, double delta, cplx u, const BetheOptions& opt) {
  check_width(width);
  if (width > kMaxDenseChain) throw ResourceLimit("Bethe solver supports L <= 12");
  const int m = width / 2;
  std::vector<cplx> z = free_fermion_roots(width, m);
  double last_delta = 0, last_t = 0;

  continue_along(
      z, width, opt.delta_steps, [&](double t) { return Scattering{t * delta, 1.0}; }, opt, last_delta, last_t,
      false);
  const cplx log_u = std::log(u);
  continue_along(
      z, width, opt.twist_steps, [&](double t) { return Scattering{delta, std::exp(t * log_u)}; }, opt,
      last_delta, last_t, true);

  BetheRoots r;
  r.width = width;
  r.magnons = m;
  r.z = std::move(z);
  r.delta = delta;
  r.u = u;
  r.residual = bethe_residual(r.z, width, delta, u);
  if (r.residual >= 1e-10) throw ContinuationFailure("Bethe roots above residual tolerance", r.residual, delta, 1.0);
  return r;
}

double bethe_energy(const BetheRoots& r) {
  cplx e = r.delta * (2.0 * r.magnons - 0.5 * r.width);
  for (cplx zi : r.z) e -= r.u * zi + 1.0 / (r.u * zi);
  if (std::abs(e.imag()) > 1e-9) throw NumericFailure("Bethe energy is not real", std::abs(e.imag()));
  return e.real();
}

double verify_bethe_vector(const BetheRoots& r) {
  if (r.width > 8) throw ResourceLimit("Bethe vector assembly is limited to L <= 8");
  const int m = r.magnons;
  const Scattering s{r.delta, r.u};
  auto f = [&](cplx a, cplx b) { return s.numer(a, b); };

  const auto basis = sector_basis(r.width);
  Eigen::VectorXcd v(static_cast<Eigen::Index>(basis.size()));
  std::vector<int> perm(static_cast<std::size_t>(m));
  for (std::size_t b = 0; b < basis.size(); ++b) {
    std::vector<int> pos;  // 1-based positions of down spins, increasing
    for (int k = 0; k < r.width; ++k)
      if ((basis[b] >> k) & 1u) pos.push_back(k + 1);
    std::iota(perm.begin(), perm.end(), 0);
    cplx amp = 0.0;
    do {
      int inversions = 0;
      cplx a = 1.0;
      for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j) {
          if (perm[i] > perm[j]) ++inversions;
          a *= f(r.z[perm[i]], r.z[perm[j]]) / f(r.z[i], r.z[j]);
        }
      for (int k = 0; k < m; ++k) a *= std::pow(r.z[perm[k]], pos[k]);
      amp += (inversions % 2 == 0 ? 1.0 : -1.0) * a;
    } while (std::next_permutation(perm.begin(), perm.end()));
    v[static_cast<Eigen::Index>(b)] = amp;
  }
  const double e = bethe_energy(r);
  const Eigen::MatrixXcd h = build_xxz_sector(r.width, r.delta, r.u);
  // Amplitudes z^{position} diagonalize the transpose of H: with them a down
  // spin hopping from i+1 to i picks up u. The spectra of H and H^T agree.
  return (h.transpose() * v - e * v).norm() / v.norm();
}

}  // namespace rpm
