#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <queue>
#include <vector>

#include "dyson/common.hpp"

namespace dyson::quad {

template <typename T>
struct Result {
  T value{};
  Real error = 0.0;
  int intervals = 0;
};

namespace detail {

// 15-point Kronrod abscissae with the embedded 7-point Gauss rule.
inline constexpr std::array<Real, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<Real, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<Real, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

inline Real magnitude(Real v) { return std::abs(v); }
inline Real magnitude(const std::complex<Real>& v) { return std::abs(v); }

template <typename T, typename F>
Result<T> kronrod15(F&& f, Real a, Real b) {
  const Real c = 0.5 * (a + b);
  const Real h = 0.5 * (b - a);
  const T fc = f(c);
  T gauss = fc * kWg[3];
  T kron = fc * kWgk[7];
  for (int j = 0; j < 7; ++j) {
    const Real dx = h * kXgk[j];
    const T f1 = f(c - dx);
    const T f2 = f(c + dx);
    kron += (f1 + f2) * kWgk[j];
    if (j % 2 == 1) gauss += (f1 + f2) * kWg[j / 2];
  }
  Result<T> r;
  r.value = kron * h;
  r.error = magnitude((kron - gauss) * h);
  r.intervals = 1;
  return r;
}

}  // namespace detail

/// Globally adaptive Gauss-Kronrod (7/15) integration of f over [a, b].
///
/// T may be Real or std::complex<Real>. Stops when the summed error estimate
/// is below max(abs_tol, rel_tol * |I|). Throws NumericError if the interval
/// budget runs out first.
template <typename T, typename F>
Result<T> integrate(F&& f, Real a, Real b, Real abs_tol, Real rel_tol,
                    int max_intervals = 4000) {
  struct Piece {
    Real a, b;
    Result<T> r;
    bool operator<(const Piece& o) const { return r.error < o.r.error; }
  };
  std::priority_queue<Piece> heap;
  auto first = detail::kronrod15<T>(f, a, b);
  T total = first.value;
  Real err = first.error;
  heap.push({a, b, first});
  int n = 1;
  while (err > std::max(abs_tol, rel_tol * detail::magnitude(total))) {
    if (n >= max_intervals) {
      throw NumericError("adaptive quadrature did not converge (error " +
                         std::to_string(err) + ")");
    }
    Piece worst = heap.top();
    heap.pop();
    const Real m = 0.5 * (worst.a + worst.b);
    if (!(m > worst.a && m < worst.b)) {
      throw NumericError("adaptive quadrature interval underflow");
    }
    auto left = detail::kronrod15<T>(f, worst.a, m);
    auto right = detail::kronrod15<T>(f, m, worst.b);
    total += left.value + right.value - worst.r.value;
    err += left.error + right.error - worst.r.error;
    heap.push({worst.a, m, left});
    heap.push({m, worst.b, right});
    ++n;
  }
  // Re-sum from the pieces to shed the running-update rounding.
  T sum{};
  Real esum = 0.0;
  while (!heap.empty()) {
    sum += heap.top().r.value;
    esum += heap.top().r.error;
    heap.pop();
  }
  return {sum, esum, n};
}

/// Integral over [a, inf) through the map t = a + s / (1 - s).
template <typename T, typename F>
Result<T> integrate_to_infinity(F&& f, Real a, Real abs_tol, Real rel_tol,
                                int max_intervals = 4000) {
  auto g = [&](Real s) -> T {
    if (s >= 1.0) return T{};
    const Real om = 1.0 - s;
    const T v = f(a + s / om);
    return v * (1.0 / (om * om));
  };
  return integrate<T>(g, 0.0, 1.0, abs_tol, rel_tol, max_intervals);
}

}  // namespace dyson::quad
