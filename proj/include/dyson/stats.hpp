#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "dyson/common.hpp"

namespace dyson::stats {

struct KsResult {
  Real statistic = 0.0;
  Real p_value = 1.0;
};

/// Kolmogorov survival function Q(t) = 2 sum_{k>=1} (-1)^(k-1) e^(-2 k^2 t^2).
inline Real kolmogorov_q(Real t) {
  if (t < 0.2) return 1.0;
  Real sum = 0.0;
  for (int k = 1; k < 200; ++k) {
    const Real term = std::exp(-2.0 * k * k * t * t);
    sum += (k % 2 ? 1.0 : -1.0) * term;
    if (term < 1e-18) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

inline Real effective_scale(Real n) { return std::sqrt(n) + 0.12 + 0.11 / std::sqrt(n); }

/// One-sample statistic against a continuous CDF. Sorts a copy.
inline KsResult ks_one_sample(std::vector<Real> xs, const std::function<Real(Real)>& cdf) {
  std::sort(xs.begin(), xs.end());
  const Real n = static_cast<Real>(xs.size());
  Real d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const Real f = cdf(xs[i]);
    d = std::max({d, f - i / n, (i + 1) / n - f});
  }
  return {d, kolmogorov_q(effective_scale(n) * d)};
}

inline KsResult ks_two_sample(std::vector<Real> a, std::vector<Real> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const Real na = static_cast<Real>(a.size()), nb = static_cast<Real>(b.size());
  std::size_t i = 0, j = 0;
  Real d = 0.0;
  while (i < a.size() && j < b.size()) {
    const Real v = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == v) ++i;
    while (j < b.size() && b[j] == v) ++j;
    d = std::max(d, std::abs(i / na - j / nb));
  }
  return {d, kolmogorov_q(effective_scale(na * nb / (na + nb)) * d)};
}

}  // namespace dyson::stats
