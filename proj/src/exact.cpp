#include "dyson/exact.hpp"

#include <cmath>

#include "dyson/quadrature.hpp"
#include "dyson/specfun.hpp"

namespace dyson::exact {

namespace {

constexpr Real kQuadRel = 1e-12;
constexpr Real kCutoff = 46.0;

void check(const GammaChainParams& p) {
  if (!(p.alpha > 0.0) || !(p.rate > 0.0)) throw ParameterError("alpha and rate must be positive");
}

// int_0^inf (1 - e^-v)^(alpha-1) exp(-rate (e^v - 1) / x) v^power dv,
// which is the defining integral after t = e^v - 1.
Real log_substituted(const GammaChainParams& p, Real x, int power) {
  check(p);
  if (!(x > 0.0)) throw RangeError("argument must be positive");
  const Real a = p.alpha;
  const Real r = p.rate / x;
  // Log of the integrand without the v^power factor.
  auto h = [&](Real v) { return (a - 1.0) * std::log(-std::expm1(-v)) - r * std::expm1(v); };
  // Peak of h (v = 0 when alpha <= 1), then the point where h has dropped
  // by kCutoff below it.
  Real peak = 0.0;
  if (a > 1.0) {
    Real lo = 0.0, hi = 1.0;
    auto slope = [&](Real v) { return (a - 1.0) / std::expm1(v) - r * std::exp(v); };
    while (slope(hi) > 0.0) hi *= 2.0;
    for (int i = 0; i < 200 && hi - lo > 1e-15 * hi; ++i) {
      const Real m = 0.5 * (lo + hi);
      (slope(m) > 0.0 ? lo : hi) = m;
    }
    peak = 0.5 * (lo + hi);
  }
  const Real top = a > 1.0 ? h(peak) : -r * std::expm1(peak);
  Real vmax = std::max(peak, 1e-300) * 2.0 + std::log1p(kCutoff / r);
  {
    Real lo = peak, hi = vmax;
    while (h(hi) > top - kCutoff) hi *= 2.0;
    for (int i = 0; i < 200 && hi - lo > 1e-12 * hi; ++i) {
      const Real m = 0.5 * (lo + hi);
      (h(m) > top - kCutoff ? lo : hi) = m;
    }
    vmax = hi;
  }
  auto body = [&](Real v) {
    const Real w = std::exp(-r * std::expm1(v) - (a >= 1.0 ? top : 0.0));
    return power ? v * w : w;
  };
  if (a >= 1.0) {
    auto f = [&](Real v) {
      return a == 1.0 ? body(v) : std::exp((a - 1.0) * std::log(-std::expm1(-v))) * body(v);
    };
    // Split at the peak so narrow peaks are resolved.
    Real total = 0.0;
    if (peak > 0.0) total += quad::integrate<Real>(f, 0.0, peak, 0.0, kQuadRel).value;
    total += quad::integrate<Real>(f, peak, vmax, 0.0, kQuadRel).value;
    return total * std::exp(top);
  }
  // v = w^(1/alpha) removes the v^(alpha-1) endpoint singularity.
  const Real v1 = std::min(1.0, vmax);
  auto g = [&](Real w) {
    if (w <= 0.0) return power ? 0.0 : 1.0 / a;
    const Real v = std::pow(w, 1.0 / a);
    return std::pow(-std::expm1(-v) / v, a - 1.0) * body(v) / a;
  };
  Real total = quad::integrate<Real>(g, 0.0, std::pow(v1, a), 0.0, kQuadRel).value;
  if (vmax > v1) {
    auto f = [&](Real v) { return std::pow(-std::expm1(-v), a - 1.0) * body(v); };
    total += quad::integrate<Real>(f, v1, vmax, 0.0, kQuadRel).value;
  }
  return total;
}

int integer_alpha(const GammaChainParams& p) {
  check(p);
  const Real r = std::round(p.alpha);
  if (std::abs(p.alpha - r) > 1e-12 || r < 1.0) {
    throw ParameterError("analytic continuation needs a positive integer alpha");
  }
  return static_cast<int>(r);
}

struct Terms {
  Complex k, l, dk, dl;
};

// Contour pieces for int t^(alpha-1) (1+t)^(-alpha) e^(c t) {1, log(1+t)} {1, rate t} dt
// from 0 to infinity in the upper-left direction, c = rate x. Everything is
// multiplied by exp(-scale) to keep magnitudes near one.
Terms contour_terms(int alpha, Real rate, Real x, Real rel) {
  const Real a = alpha;
  const Real c = rate * x;
  const Real nu = c / a;
  Terms out{};

  auto accumulate = [&](auto&& weight, auto&& path, auto&& jac, auto integrate_piece) {
    auto make = [&](int which) {
      return [&, which](Real s) -> Complex {
        const Complex t = path(s);
        const Complex w = weight(t) * jac(s);
        switch (which) {
          case 0: return w;
          case 1: return w * std::log(1.0 + t);
          case 2: return w * rate * t;
          default: return w * rate * t * std::log(1.0 + t);
        }
      };
    };
    out.k += integrate_piece(make(0));
    out.l += integrate_piece(make(1));
    out.dk += integrate_piece(make(2));
    out.dl += integrate_piece(make(3));
  };

  Real scale;
  Complex start;
  Real ray_angle;
  if (nu < 4.0) {
    start = saddle(nu);
    scale = a * (std::log(std::abs(start)) - std::log(std::abs(1.0 + start))) + c * start.real();
    ray_angle = 0.75 * kPi;
  } else {
    const Real root = std::sqrt(1.0 - 4.0 / nu);
    const Real t_hi = 0.5 * (-1.0 + root);
    start = Complex(0.5 * (-1.0 - root), 0.0);
    scale = a * (std::log(-t_hi) - std::log1p(t_hi)) + c * t_hi;
    ray_angle = 2.0 * kPi / 3.0;
  }

  auto weight = [&](Complex t) {
    return std::exp((a - 1.0) * std::log(t) - a * std::log(1.0 + t) + c * t - scale);
  };

  if (nu < 4.0) {
    auto path = [&](Real s) { return s * start; };
    auto jac = [&](Real) { return start; };
    accumulate(weight, path, jac, [&](auto&& f) {
      return quad::integrate<Complex>(f, 0.0, 1.0, 0.0, rel, 20000).value;
    });
  } else {
    // Real segment (0, t_lo): the integrand is real there, so do it in real
    // arithmetic and keep its rounding out of the imaginary part.
    const Real tl = start.real();
    const Real sign = (alpha - 1) % 2 ? -1.0 : 1.0;
    auto real_weight = [&](Real t) {
      return sign * std::exp((a - 1.0) * std::log(-t) - a * std::log1p(t) + c * t - scale);
    };
    auto seg = [&](int which) {
      return [&, which](Real s) -> Real {
        const Real t = s * tl;
        const Real w = real_weight(t) * tl;
        switch (which) {
          case 0: return w;
          case 1: return w * std::log1p(t);
          case 2: return w * rate * t;
          default: return w * rate * t * std::log1p(t);
        }
      };
    };
    auto run = [&](int which) {
      return Complex(quad::integrate<Real>(seg(which), 0.0, 1.0, 0.0, rel, 20000).value, 0.0);
    };
    out.k += run(0);
    out.l += run(1);
    out.dk += run(2);
    out.dl += run(3);
  }

  const Complex dir = std::polar(1.0, ray_angle);
  const Real length = 1.0 / c + std::abs(start) + 1.0;
  auto path = [&](Real r) { return start + (length * r) * dir; };
  auto jac = [&](Real) { return length * dir; };
  accumulate(weight, path, jac, [&](auto&& f) {
    return quad::integrate_to_infinity<Complex>(f, 0.0, 0.0, rel, 20000).value;
  });
  return out;
}

ContinuedOmega continued_from(const Terms& t) {
  ContinuedOmega r;
  r.omega = 2.0 * t.l / t.k;
  r.omega_prime = 2.0 * (t.dl * t.k - t.l * t.dk) / (t.k * t.k);
  return r;
}

}  // namespace

Real k_alpha(const GammaChainParams& p, Real x) { return log_substituted(p, x, 0); }

Real l_alpha(const GammaChainParams& p, Real x) { return log_substituted(p, x, 1); }

Real omega_exact(const GammaChainParams& p, Real x) {
  if (x == 0.0) return 0.0;
  return 2.0 * l_alpha(p, x) / k_alpha(p, x);
}

Real stationary_density(const GammaChainParams& p, Real x, Real xi) {
  if (!(xi > 0.0)) return 0.0;
  const Real a = p.alpha;
  const Real logf = (a - 1.0) * std::log(xi) - a * std::log1p(xi) - p.rate * xi / x;
  return std::exp(logf) / k_alpha(p, x);
}

Complex saddle(Real nu) {
  if (!(nu > 0.0 && nu < 4.0)) throw RangeError("saddle: needs 0 < nu < 4");
  return {-0.5, 0.5 * std::sqrt(4.0 / nu - 1.0)};
}

ContinuedOmega omega_continued(const GammaChainParams& p, Real x) {
  const int a = integer_alpha(p);
  if (!(x > 0.0)) throw RangeError("omega_continued: x must be positive");
  // The derivative is taken in z = -1/x; the dK, dL terms carry rate t and
  // dz/dx = 1/x^2, so rescale by x^2 here.
  auto coarse = continued_from(contour_terms(a, p.rate, x, 1e-9));
  auto fine = continued_from(contour_terms(a, p.rate, x, 1e-12));
  fine.omega_prime *= x * x;
  fine.refinement_gap = std::abs(fine.omega.imag() - coarse.omega.imag());
  if (!(fine.refinement_gap < 1e-6) || !std::isfinite(std::abs(fine.omega))) {
    throw NumericError("contour integral not stable under refinement at x=" + std::to_string(x));
  }
  return fine;
}

IdosValue idos_exact_detail(const GammaChainParams& p, Real x) {
  const auto c = omega_continued(p, x);
  IdosValue v;
  v.raw = 1.0 - c.omega.imag() / kPi;
  v.value = std::clamp(v.raw, 0.0, 1.0);
  v.clamp = std::abs(v.value - v.raw);
  return v;
}

Real idos_exact(const GammaChainParams& p, Real x) { return idos_exact_detail(p, x).value; }

Real dos_exact(const GammaChainParams& p, Real mu) {
  const auto c = omega_continued(p, mu);
  // dM/dmu = -(1/pi) Im Omega'(z) dz/dmu with z = -1/mu.
  return -c.omega_prime.imag() / (kPi * mu * mu);
}

PureChainValues pure_chain(Real x) {
  PureChainValues v;
  if (x >= 0.0) {
    const Real s = std::sqrt(1.0 + 4.0 * x);
    v.xi = 0.5 * (s - 1.0);
    v.omega = 2.0 * std::log(0.5 * (1.0 + s));
  }
  v.dos = (x > 0.0 && x < 4.0) ? 1.0 / (kPi * std::sqrt(4.0 * x - x * x)) : 0.0;
  if (x <= 0.0) {
    v.idos = 0.0;
  } else if (x < 4.0) {
    v.idos = std::acos(1.0 - 0.5 * x) / kPi;
  } else {
    v.idos = 1.0;
  }
  return v;
}

Real weak_disorder_idos(Real n, Real x) {
  if (!(n > 0.0) || !(x > 0.0)) throw RangeError("weak_disorder_idos: n, x must be positive");
  if (x < 4.0) {
    return std::acos(1.0 - 0.5 * x) / kPi + 1.0 / (2.0 * kPi * n * std::sqrt(4.0 / x - 1.0));
  }
  if (x == 4.0) {
    const Real g = specfun::gamma(1.0 / 3.0);
    return 1.0 - std::cbrt(12.0 / n) / (g * g);
  }
  const Real g = std::acosh(0.5 * x - 1.0);
  return 1.0 - g / kPi * std::exp(-g - 2.0 * n * (std::sinh(g) - g));
}

Real gamma1_coefficient(Real omega_sq) {
  if (!(omega_sq > 0.0 && omega_sq < 4.0)) throw RangeError("gamma1_coefficient: needs 0 < w^2 < 4");
  return 1.0 / (8.0 * (4.0 / omega_sq - 1.0));
}

std::vector<CurvePoint> tabulate_idos(const GammaChainParams& p, const std::vector<Real>& xs) {
  std::vector<CurvePoint> out;
  out.reserve(xs.size());
  for (Real x : xs) out.push_back({x, idos_exact(p, x)});
  return out;
}

std::vector<CurvePoint> tabulate_dos(const GammaChainParams& p, const std::vector<Real>& mus) {
  std::vector<CurvePoint> out;
  out.reserve(mus.size());
  for (Real m : mus) out.push_back({m, dos_exact(p, m)});
  return out;
}

}  // namespace dyson::exact
