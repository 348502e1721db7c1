#pragma once

#include <array>
#include <cmath>
#include <span>

namespace rpm {

/// Truncated Taylor series c_0 + c_1 t + ... + c_N t^N about a fixed point.
template <int N>
struct Jet {
  std::array<double, N + 1> c{};

  static Jet constant(double v) {
    Jet j;
    j.c[0] = v;
    return j;
  }
  static Jet variable(double v) {
    Jet j;
    j.c[0] = v;
    if constexpr (N >= 1) j.c[1] = 1;
    return j;
  }

  /// k-th derivative at the expansion point.
  double derivative(int k) const {
    double f = 1;
    for (int i = 2; i <= k; ++i) f *= i;
    return f * c[k];
  }

  friend Jet operator+(Jet a, const Jet& b) {
    for (int k = 0; k <= N; ++k) a.c[k] += b.c[k];
    return a;
  }
  friend Jet operator-(Jet a, const Jet& b) {
    for (int k = 0; k <= N; ++k) a.c[k] -= b.c[k];
    return a;
  }
  friend Jet operator*(Jet a, double s) {
    for (auto& x : a.c) x *= s;
    return a;
  }
  friend Jet operator*(double s, Jet a) { return a * s; }
  friend Jet operator+(Jet a, double s) {
    a.c[0] += s;
    return a;
  }
  friend Jet operator+(double s, Jet a) { return a + s; }
  friend Jet operator-(Jet a, double s) {
    a.c[0] -= s;
    return a;
  }
  friend Jet operator-(double s, const Jet& a) { return Jet::constant(s) - a; }
  friend Jet operator*(const Jet& a, const Jet& b) {
    Jet r;
    for (int i = 0; i <= N; ++i)
      for (int j = 0; i + j <= N; ++j) r.c[i + j] += a.c[i] * b.c[j];
    return r;
  }
};

template <int N>
Jet<N> exp(const Jet<N>& a) {
  Jet<N> b;
  b.c[0] = std::exp(a.c[0]);
  for (int k = 1; k <= N; ++k) {
    double s = 0;
    for (int j = 1; j <= k; ++j) s += j * a.c[j] * b.c[k - j];
    b.c[k] = s / k;
  }
  return b;
}

/// a^p for a.c[0] > 0.
template <int N>
Jet<N> pow(const Jet<N>& a, double p) {
  Jet<N> b;
  b.c[0] = std::pow(a.c[0], p);
  for (int k = 1; k <= N; ++k) {
    double s = 0;
    for (int j = 1; j <= k; ++j) s += (p * j - (k - j)) * a.c[j] * b.c[k - j];
    b.c[k] = s / (k * a.c[0]);
  }
  return b;
}

template <int N>
Jet<N> derivative(const Jet<N>& a) {
  Jet<N> d;
  for (int k = 0; k < N; ++k) d.c[k] = (k + 1) * a.c[k + 1];
  return d;
}

template <int N>
Jet<N> integrate(const Jet<N>& a, double c0) {
  Jet<N> r;
  r.c[0] = c0;
  for (int k = 1; k <= N; ++k) r.c[k] = a.c[k - 1] / k;
  return r;
}

/// acos(u) for |u.c[0]| < 1, through acos' = -(1 - u^2)^{-1/2}.
template <int N>
Jet<N> acos(const Jet<N>& u) {
  return integrate(-1.0 * pow(1.0 - u * u, -0.5) * derivative(u), std::acos(u.c[0]));
}

/// f(x) where f is given by its derivatives at x.c[0] (at least N + 1 of them).
template <int N>
Jet<N> compose(std::span<const double> f_derivatives, const Jet<N>& x) {
  Jet<N> d = x;
  d.c[0] = 0;
  Jet<N> r = Jet<N>::constant(f_derivatives[0]), power = Jet<N>::constant(1);
  double fact = 1;
  for (int k = 1; k <= N; ++k) {
    power = power * d;
    fact *= k;
    r = r + power * (f_derivatives[k] / fact);
  }
  return r;
}

}  // namespace rpm
