#pragma once

#include <cmath>

#include "mlab/common.hpp"

/// Central-difference stencils for scalar fields on R^n.  Step sizes follow
/// the usual truncation/roundoff balance: eps^(1/3)-scaled steps for first
/// and second derivatives, eps^(1/4)-scaled for third derivatives.  One
/// Richardson extrapolation level is available; it widens the base step so
/// the extrapolated value stays roundoff-limited rather than noise-limited.
namespace mlab::fd {

inline constexpr double kCbrtEps = 6.0554544523933395e-06;  // eps^(1/3)
inline constexpr double kQurtEps = 1.220703125e-04;         // eps^(1/4)

// Width factor for the third-derivative stencil; keeps the widest stencil
// point near the truncation/roundoff balance for an 8-point formula.
inline constexpr double kThirdStep = 6.0 * kQurtEps;

inline double scale_of(const Vector& v) { return std::max(v.norm(), 1.0); }

template <class F>
double partial1(F&& f, const Vector& x, int i, double h) {
  Vector a = x, b = x;
  a[i] += h;
  b[i] -= h;
  return (f(a) - f(b)) / (2.0 * h);
}

/// d^2 f / dx_i dx_j by the 4-point cross stencil; for i == j this reduces
/// to the stride-2h second difference.
template <class F>
double partial2(F&& f, const Vector& x, int i, int j, double h) {
  Vector a = x, b = x, c = x, d = x;
  a[i] += h; a[j] += h;
  b[i] += h; b[j] -= h;
  c[i] -= h; c[j] += h;
  d[i] -= h; d[j] -= h;
  return (f(a) - f(b) - f(c) + f(d)) / (4.0 * h * h);
}

/// d^3 f / dx_i dx_j dx_k by the 8-point signed-corner stencil; repeated
/// indices collapse to the classical wide one-dimensional formulas.
template <class F>
double partial3(F&& f, const Vector& x, int i, int j, int k, double h) {
  double acc = 0.0;
  for (int si = -1; si <= 1; si += 2)
    for (int sj = -1; sj <= 1; sj += 2)
      for (int sk = -1; sk <= 1; sk += 2) {
        Vector y = x;
        y[i] += si * h;
        y[j] += sj * h;
        y[k] += sk * h;
        acc += si * sj * sk * f(y);
      }
  return acc / (8.0 * h * h * h);
}

// All central stencils above have O(h^2) truncation error, so one Richardson
// level is (4 D(h/2) - D(h)) / 3.
template <class D>
double richardson(D&& stencil, double h) {
  return (4.0 * stencil(h / 2.0) - stencil(h)) / 3.0;
}

template <class F>
Vector gradient(F&& f, const Vector& x, double h, bool rich = false) {
  Vector g(x.size());
  for (int i = 0; i < x.size(); ++i) {
    if (rich) {
      const double hb = 8.0 * h;
      g[i] = richardson([&](double hh) { return partial1(f, x, i, hh); }, hb);
    } else {
      g[i] = partial1(f, x, i, h);
    }
  }
  return g;
}

template <class F>
Matrix hessian(F&& f, const Vector& x, double h, bool rich = false) {
  const int n = static_cast<int>(x.size());
  Matrix H(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      double v;
      if (rich) {
        const double hb = 8.0 * h;
        v = richardson([&](double hh) { return partial2(f, x, i, j, hh); }, hb);
      } else {
        v = partial2(f, x, i, j, h);
      }
      H(i, j) = H(j, i) = v;
    }
  return H;
}

template <class F>
Tensor3 third(F&& f, const Vector& x, double h, bool rich = false) {
  const int n = static_cast<int>(x.size());
  Tensor3 T(n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j)
      for (int k = j; k < n; ++k) {
        double v;
        if (rich) {
          const double hb = 8.0 * h;
          v = richardson([&](double hh) { return partial3(f, x, i, j, k, hh); }, hb);
        } else {
          v = partial3(f, x, i, j, k, h);
        }
        // the stencil is permutation-symmetric by construction
        T(i, j, k) = T(i, k, j) = T(j, i, k) = T(j, k, i) = T(k, i, j) = T(k, j, i) = v;
      }
  return T;
}

}  // namespace mlab::fd
