#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "dyson/common.hpp"

namespace dyson {

template <typename S>
using Vec = Eigen::Matrix<S, Eigen::Dynamic, 1>;

/// Real symmetric tridiagonal matrix.
template <typename S>
struct SymTridiag {
  Vec<S> diag;
  Vec<S> offdiag;

  SymTridiag() = default;
  SymTridiag(Vec<S> d, Vec<S> e) : diag(std::move(d)), offdiag(std::move(e)) {
    if (diag.size() == 0 || offdiag.size() != diag.size() - 1) {
      throw ParameterError("SymTridiag: need n >= 1 diagonal and n-1 off-diagonal entries");
    }
  }

  Eigen::Index size() const { return diag.size(); }

  Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic> dense() const {
    const auto n = size();
    Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic> m =
        Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>::Zero(n, n);
    m.diagonal() = diag;
    if (n > 1) {
      m.diagonal(1) = offdiag;
      m.diagonal(-1) = offdiag;
    }
    return m;
  }
};

/// Real antisymmetric tridiagonal matrix: +upper above the diagonal, -upper below.
template <typename S>
struct AntisymTridiag {
  Vec<S> upper;

  AntisymTridiag() = default;
  explicit AntisymTridiag(Vec<S> u) : upper(std::move(u)) {}

  Eigen::Index size() const { return upper.size() + 1; }

  Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic> dense() const {
    const auto n = size();
    Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic> m =
        Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>::Zero(n, n);
    if (n > 1) {
      m.diagonal(1) = upper;
      m.diagonal(-1) = -upper;
    }
    return m;
  }

  /// The real symmetric matrix unitarily similar to i times this one:
  /// conjugating iA by diag(i^j) leaves zero diagonal and off-diagonals |upper|.
  SymTridiag<S> hermitian_form() const {
    return SymTridiag<S>(Vec<S>::Zero(size()), upper.cwiseAbs());
  }
};

/// General real tridiagonal matrix with positive off-diagonal products.
template <typename S>
struct Tridiag {
  Vec<S> diag;
  Vec<S> upper;
  Vec<S> lower;

  Eigen::Index size() const { return diag.size(); }

  Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic> dense() const {
    const auto n = size();
    Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic> m =
        Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>::Zero(n, n);
    m.diagonal() = diag;
    if (n > 1) {
      m.diagonal(1) = upper;
      m.diagonal(-1) = lower;
    }
    return m;
  }

  /// Diagonal similarity to a symmetric matrix; needs upper*lower >= 0.
  SymTridiag<S> symmetrized() const {
    Vec<S> e(std::max<Eigen::Index>(size() - 1, 0));
    for (Eigen::Index i = 0; i < e.size(); ++i) {
      const S p = upper[i] * lower[i];
      if (p < S(0)) throw ParameterError("symmetrized: off-diagonal product is negative");
      e[i] = std::sqrt(p);
    }
    return SymTridiag<S>(diag, e);
  }
};

/// Ascending eigenvalues with the bracket width used to find them.
template <typename S>
struct Spectrum {
  Vec<S> values;
  S tol{};
  std::string source;
};

namespace detail {

template <typename S>
S pivot_floor(const Vec<S>& e2) {
  const S big = e2.size() > 0 ? std::max(S(1), e2.maxCoeff()) : S(1);
  return std::numeric_limits<S>::min() * big;
}

// Sturm count from the diagonal and squared off-diagonals.
template <typename S>
Eigen::Index sturm_count(const Vec<S>& d, const Vec<S>& e2, S x, S pivmin) {
  Eigen::Index count = 0;
  S q = d[0] - x;
  if (std::abs(q) <= pivmin) q = pivmin;
  if (q < S(0)) ++count;
  for (Eigen::Index j = 1; j < d.size(); ++j) {
    q = d[j] - x - e2[j - 1] / q;
    if (std::abs(q) <= pivmin) q = pivmin;
    if (q < S(0)) ++count;
  }
  return count;
}

}  // namespace detail

/// Number of eigenvalues strictly below x.
///
/// Uses the pivot form of the Sturm recurrence, q_j = d_j - x - e_{j-1}^2 / q_{j-1},
/// whose sign count equals the eigenvalue count. A pivot within the floor of
/// zero is replaced by +floor, i.e. the probe is nudged downward, so an
/// eigenvalue sitting exactly at x is not counted and q never overflows.
template <typename S>
Eigen::Index count_below(const SymTridiag<S>& t, S x) {
  if (!std::isfinite(x)) throw RangeError("count_below: non-finite probe");
  const Vec<S> e2 = t.offdiag.cwiseAbs2();
  return detail::sturm_count<S>(t.diag, e2, x, detail::pivot_floor(e2));
}

/// Count for a general tridiagonal with non-negative off-diagonal products.
template <typename S>
Eigen::Index count_below(const Tridiag<S>& t, S x) {
  if (!std::isfinite(x)) throw RangeError("count_below: non-finite probe");
  const Vec<S> e2 = t.upper.cwiseProduct(t.lower);
  if (e2.size() > 0 && e2.minCoeff() < S(0)) {
    throw ParameterError("count_below: off-diagonal product is negative");
  }
  return detail::sturm_count<S>(t.diag, e2, x, detail::pivot_floor(e2));
}

/// Gershgorin interval containing the spectrum.
template <typename S>
std::pair<S, S> gershgorin(const SymTridiag<S>& t) {
  const auto n = t.size();
  S lo = std::numeric_limits<S>::max(), hi = -lo;
  for (Eigen::Index i = 0; i < n; ++i) {
    S r = 0;
    if (i > 0) r += std::abs(t.offdiag[i - 1]);
    if (i + 1 < n) r += std::abs(t.offdiag[i]);
    lo = std::min(lo, t.diag[i] - r);
    hi = std::max(hi, t.diag[i] + r);
  }
  return {lo, hi};
}

/// All eigenvalues by bisection on Sturm counts.
///
/// Brackets are shared: an interval is split until every eigenvalue in it
/// is isolated to width tol. tol <= 0 selects 1e-12 times the Gershgorin
/// diameter.
template <typename S>
Spectrum<S> eigenvalues(const SymTridiag<S>& t, S tol = S(0)) {
  const auto n = t.size();
  auto [lo, hi] = gershgorin(t);
  if (hi == lo) return {Vec<S>::Constant(n, lo), tol, "bisection"};
  const S diam = std::max(hi - lo, std::numeric_limits<S>::min());
  if (!(tol > S(0))) tol = S(1e-12) * diam;
  lo -= tol;
  hi += tol;
  const Vec<S> e2 = t.offdiag.cwiseAbs2();
  const S pivmin = detail::pivot_floor(e2);
  auto count = [&](S x) { return detail::sturm_count<S>(t.diag, e2, x, pivmin); };

  Vec<S> out(n);
  struct Job {
    S lo, hi;
    Eigen::Index clo, chi;
  };
  std::vector<Job> stack{{lo, hi, 0, n}};
  while (!stack.empty()) {
    Job j = stack.back();
    stack.pop_back();
    if (j.chi == j.clo) continue;
    const S mid = j.lo + (j.hi - j.lo) / 2;
    if (j.hi - j.lo <= tol || !(mid > j.lo && mid < j.hi)) {
      for (Eigen::Index k = j.clo; k < j.chi; ++k) out[k] = mid;
      continue;
    }
    const Eigen::Index cm = std::clamp(count(mid), j.clo, j.chi);
    stack.push_back({mid, j.hi, cm, j.chi});
    stack.push_back({j.lo, mid, j.clo, cm});
  }
  return {out, tol, "bisection"};
}

/// Squares of the positive eigenvalues of a zero-diagonal symmetric
/// tridiagonal of odd size 2N+1, ascending.
///
/// The square of such a matrix splits over even and odd sites; the odd-site
/// block is N x N and carries each nonzero square exactly once.
template <typename S>
Spectrum<S> squared_positive_spectrum(const SymTridiag<S>& t, S tol = S(0)) {
  const auto n = t.size();
  if (n % 2 == 0) throw ParameterError("squared_positive_spectrum: size must be odd");
  const auto half = (n - 1) / 2;
  if (half == 0) return {Vec<S>(0), tol, "odd-site block"};
  const auto& e = t.offdiag;
  Vec<S> d(half), f(half - 1);
  for (Eigen::Index k = 0; k < half; ++k) {
    const auto i = 2 * k + 1;
    d[k] = e[i - 1] * e[i - 1] + e[i] * e[i];
    if (k + 1 < half) f[k] = e[i] * e[i + 1];
  }
  auto s = eigenvalues(SymTridiag<S>(d, f), tol);
  s.source = "odd-site block";
  return s;
}

/// Ratios r_n = P_n(y) / P_{n-1}(y) of the leading-minor polynomials
/// P_n(y) = det(I - y T_n), from
/// r_n = (1 - y a_n) - y^2 b_{n-1}^2 / r_{n-1}.
/// Their product is det(I - y T). Throws EigenvalueHit on an exact zero.
template <typename S>
Vec<S> charpoly_ratios(const SymTridiag<S>& t, S y) {
  const auto n = t.size();
  Vec<S> r(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    S v = S(1) - y * t.diag[i];
    if (i > 0) v -= y * y * t.offdiag[i - 1] * t.offdiag[i - 1] / r[i - 1];
    if (v == S(0) && i + 1 < n) throw EigenvalueHit(static_cast<std::size_t>(i), y);
    r[i] = v;
  }
  return r;
}

template <typename S>
struct RatioResult {
  Vec<S> ratios;
  S y_used{};
  int retries = 0;
};

/// charpoly_ratios with the eigenvalue-hit policy: the probe is moved by
/// 10 tol and retried, at most three times.
template <typename S>
RatioResult<S> charpoly_ratios_retry(const SymTridiag<S>& t, S y, S tol) {
  for (int attempt = 0;; ++attempt) {
    try {
      return {charpoly_ratios(t, y), y, attempt};
    } catch (const EigenvalueHit&) {
      if (attempt == 3) throw;
      y += S(10) * tol;
    }
  }
}

/// Determinant of I - y T by the plain three-term recurrence.
template <typename S>
S det_identity_minus(const SymTridiag<S>& t, S y) {
  S pm2 = 1, pm1 = 1;
  for (Eigen::Index i = 0; i < t.size(); ++i) {
    S p = (S(1) - y * t.diag[i]) * pm1;
    if (i > 0) p -= y * y * t.offdiag[i - 1] * t.offdiag[i - 1] * pm2;
    pm2 = pm1;
    pm1 = p;
  }
  return pm1;
}

/// Both sides of sum_j log(1 + x w_j^2) = (1/2) Tr log(I - x L^2) for an
/// antisymmetric L with eigenvalues +-i w_j: first the truncated series
/// -(1/2) sum_{m=1}^{terms} x^m Tr(L^{2m}) / m, then the eigenvalue sum.
template <typename S>
std::pair<S, S> tracelog_check(const AntisymTridiag<S>& lam, S x, int m_terms) {
  const auto ev = eigenvalues(lam.hermitian_form());
  const S rho = ev.values.size() ? ev.values.cwiseAbs().maxCoeff() : S(0);
  if (!(std::abs(x) * rho * rho < S(1))) {
    throw RangeError("tracelog_check: |x| rho^2 >= 1, series diverges");
  }
  using Mat = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;
  const Mat l = lam.dense();
  const Mat l2 = l * l;
  Mat power = Mat::Identity(l.rows(), l.cols());
  S series = 0, xm = 1;
  for (int m = 1; m <= m_terms; ++m) {
    power = power * l2;
    xm *= x;
    series -= xm * power.trace() / S(m);
  }
  series /= S(2);
  S direct = 0;
  for (Eigen::Index i = 0; i < ev.values.size(); ++i) {
    direct += std::log1p(x * ev.values[i] * ev.values[i]);
  }
  direct /= S(2);
  return {series, direct};
}

}  // namespace dyson
