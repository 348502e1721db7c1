#include "rpm/xxz.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "rpm/combinatorics.hpp"
#include "rpm/dyck.hpp"
#include "rpm/errors.hpp"

namespace rpm {

Twist Twist::real(double phi) { return Twist(phi * phi); }
Twist Twist::imaginary(double magnitude) { return Twist(-magnitude * magnitude); }
Twist Twist::from_phi_squared(double phi_squared) {
  if (phi_squared > std::numbers::pi * std::numbers::pi * (1 + 1e-14))
    throw InvalidArgument("twist: phi^2 must not exceed pi^2");
  return Twist(phi_squared);
}

cplx Twist::phi() const noexcept {
  return phi2_ >= 0 ? cplx(std::sqrt(phi2_), 0.0) : cplx(0.0, std::sqrt(-phi2_));
}

double Twist::cos_half() const noexcept {
  return phi2_ >= 0 ? std::cos(0.5 * std::sqrt(phi2_)) : std::cosh(0.5 * std::sqrt(-phi2_));
}

cplx Twist::u(int width) const noexcept { return std::exp(cplx(0.0, 1.0) * phi() / static_cast<double>(width)); }

XxzParams make_params(int width, double delta, Twist twist) {
  check_even_width(width);
  if (delta > 0) throw InvalidArgument("anisotropy must be non-positive");
  XxzParams p;
  p.width = width;
  p.delta = delta;
  p.twist = twist;
  if (delta > -1) {
    p.regime = Regime::Gapless;
    p.gamma = std::acos(-delta);
  } else if (delta < -1) {
    p.regime = Regime::Gapped;
    p.lambda = std::acosh(-delta);
  } else {
    p.regime = Regime::Boundary;
  }
  return p;
}

Twist twist_from_alpha(double alpha) {
  const double w = 0.5 * std::exp(0.5 * alpha);
  if (w <= 1) return Twist::real(2 * std::acos(w));
  return Twist::imaginary(2 * std::acosh(w));
}

XxzParams map_params(double alpha, double beta, int width) {
  return make_params(width, -0.5 * std::exp(-beta), twist_from_alpha(alpha));
}

std::vector<std::uint64_t> sector_basis(int width) {
  check_width(width);
  return balanced_words(width, width / 2);
}

namespace {

void check_dense_size(int width, int limit) {
  if (width > limit)
    throw ResourceLimit("dense XXZ construction is limited to L <= " + std::to_string(limit));
}

// Applies every bond of H to one basis word, reporting (target word, amplitude).
template <class Sink>
void apply_bonds(std::uint64_t word, int width, double delta, cplx u, Sink&& sink) {
  double diag = 0;
  for (int i = 0; i < width; ++i) {
    const int j = (i + 1) % width;
    const bool di = (word >> i) & 1u, dj = (word >> j) & 1u;
    diag += -0.5 * delta * (di == dj ? 1.0 : -1.0);
    if (di && !dj) sink(word ^ ((std::uint64_t{1} << i) | (std::uint64_t{1} << j)), -u);        // s+_i s-_j
    if (!di && dj) sink(word ^ ((std::uint64_t{1} << i) | (std::uint64_t{1} << j)), -1.0 / u);  // s-_i s+_j
  }
  sink(word, cplx(diag, 0.0));
}

bool is_unit(cplx u) { return std::abs(std::abs(u) - 1.0) < 1e-14; }

}  // namespace

Eigen::MatrixXcd build_xxz_sector(int width, double delta, cplx u) {
  check_width(width);
  check_dense_size(width, kMaxDenseChain);
  const auto basis = sector_basis(width);
  const auto dim = static_cast<Eigen::Index>(basis.size());
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);
  for (Eigen::Index col = 0; col < dim; ++col) {
    apply_bonds(basis[static_cast<std::size_t>(col)], width, delta, u, [&](std::uint64_t target, cplx amp) {
      h(static_cast<Eigen::Index>(colex_rank(target, width)), col) += amp;
    });
  }
  return h;
}

Eigen::MatrixXcd build_xxz(const XxzParams& p) { return build_xxz_sector(p.width, p.delta, p.u()); }

Eigen::MatrixXcd build_xxz_full(int width, double delta, cplx u) {
  check_width(width);
  check_dense_size(width, 10);
  const Eigen::Index dim = Eigen::Index{1} << width;
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);
  for (Eigen::Index col = 0; col < dim; ++col)
    apply_bonds(static_cast<std::uint64_t>(col), width, delta, u,
                [&](std::uint64_t target, cplx amp) { h(static_cast<Eigen::Index>(target), col) += amp; });
  return h;
}

std::vector<cplx> xxz_spectrum(const XxzParams& p) {
  const Eigen::MatrixXcd h = build_xxz(p);
  if (is_unit(p.u())) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw NumericFailure("Hermitian eigensolver failed", 0.0);
    std::vector<cplx> out;
    for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) out.emplace_back(es.eigenvalues()[k], 0.0);
    return out;
  }
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(h, false);
  if (es.info() != Eigen::Success) throw NumericFailure("complex eigensolver failed", 0.0);
  std::vector<cplx> out(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  std::sort(out.begin(), out.end(), [](cplx a, cplx b) { return a.real() < b.real(); });
  return out;
}

double ground_energy_dense(const XxzParams& p) {
  const auto spectrum = xxz_spectrum(p);
  const cplx e0 = *std::min_element(spectrum.begin(), spectrum.end(),
                                    [](cplx a, cplx b) { return a.real() < b.real(); });
  if (std::abs(e0.imag()) > 1e-9) throw NumericFailure("ground energy is not real", std::abs(e0.imag()));
  return e0.real();
}

std::pair<double, double> lowest_two_dense(const XxzParams& p) {
  auto spectrum = xxz_spectrum(p);
  std::sort(spectrum.begin(), spectrum.end(), [](cplx a, cplx b) { return a.real() < b.real(); });
  return {spectrum[0].real(), spectrum[1].real()};
}

}  // namespace rpm
