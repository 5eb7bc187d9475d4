#include "dyson/specfun.hpp"

#include <array>
#include <cmath>

namespace dyson::specfun {

namespace {

using LD = long double;

constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

}  // namespace

Real log_gamma(Real x) {
  if (!(x > 0.0)) throw RangeError("log_gamma: argument must be positive");
  if (x < 0.5) {
    // Reflection keeps the Lanczos sum in its accurate range.
    return std::log(kPi / std::sin(kPi * x)) - log_gamma(1.0 - x);
  }
  const Real z = x - 1.0;
  Real a = kLanczos[0];
  for (int i = 1; i < 9; ++i) a += kLanczos[i] / (z + i);
  const Real t = z + 7.5;
  return 0.5 * std::log(2.0 * kPi) + (z + 0.5) * std::log(t) - t + std::log(a);
}

Real gamma(Real x) { return std::exp(log_gamma(x)); }

Real digamma(Real x) {
  if (!(x > 0.0)) throw RangeError("digamma: argument must be positive");
  Real acc = 0.0;
  while (x < 10.0) {
    acc -= 1.0 / x;
    x += 1.0;
  }
  const Real r = 1.0 / (x * x);
  const Real series =
      r * (1.0 / 12 - r * (1.0 / 120 - r * (1.0 / 252 - r * (1.0 / 240 - r * (1.0 / 132)))));
  return acc + std::log(x) - 0.5 / x - series;
}

// ---------------------------------------------------------------------------
// Airy functions

namespace {

struct AiryLD {
  LD ai, aip, bi, bip;
};

struct MaclaurinParts {
  LD f, fp, g, gp;
};

// f, g: the two power series solutions of y'' = x y with f(0)=1, g'(0)=1.
MaclaurinParts maclaurin_parts(LD x) {
  const LD x3 = x * x * x;
  LD tf = 1.0L, tfp = 0.5L * x * x, tg = x, tgp = 1.0L;
  MaclaurinParts s{tf, tfp, tg, tgp};
  for (int k = 1; k < 400; ++k) {
    const LD k3 = 3.0L * k;
    tf *= x3 / ((k3 - 1.0L) * k3);
    tfp *= x3 / (k3 * (k3 + 2.0L));
    tg *= x3 / (k3 * (k3 + 1.0L));
    tgp *= x3 / ((k3 - 2.0L) * k3);
    s.f += tf;
    s.fp += tfp;
    s.g += tg;
    s.gp += tgp;
    const LD scale = std::fabs(s.f) + std::fabs(s.g) + std::fabs(s.fp) + std::fabs(s.gp);
    const LD last = std::fabs(tf) + std::fabs(tg) + std::fabs(tfp) + std::fabs(tgp);
    if (last < 1e-22L * scale) break;
  }
  return s;
}

struct AiryConstants {
  LD c1, c2;
};

const AiryConstants& airy_constants() {
  static const AiryConstants k{
      static_cast<LD>(std::pow(3.0, -2.0 / 3.0) / gamma(2.0 / 3.0)),
      static_cast<LD>(std::pow(3.0, -1.0 / 3.0) / gamma(1.0 / 3.0))};
  return k;
}

AiryLD airy_maclaurin(LD x) {
  const auto& k = airy_constants();
  const auto s = maclaurin_parts(x);
  const LD sqrt3 = std::sqrt(3.0L);
  return {k.c1 * s.f - k.c2 * s.g, k.c1 * s.fp - k.c2 * s.gp,
          sqrt3 * (k.c1 * s.f + k.c2 * s.g), sqrt3 * (k.c1 * s.fp + k.c2 * s.gp)};
}

// Advances (y, y') of y'' = x y from x0 to x0 + h by the exact Taylor series.
void taylor_step(LD x0, LD h, LD& y, LD& yp) {
  std::array<LD, 64> a{};
  a[0] = y;
  a[1] = yp;
  a[2] = x0 * a[0] / 2.0L;
  for (int n = 1; n + 2 < 64; ++n) {
    a[n + 2] = (x0 * a[n] + a[n - 1]) / static_cast<LD>((n + 2) * (n + 1));
  }
  LD v = 0.0L, d = 0.0L, hp = 1.0L;
  for (int n = 0; n < 64; ++n) {
    v += a[n] * hp;
    if (n + 1 < 64) d += static_cast<LD>(n + 1) * a[n + 1] * hp;
    hp *= h;
  }
  y = v;
  yp = d;
}

void taylor_march(LD from, LD to, LD& y, LD& yp) {
  const LD max_step = 0.25L;
  LD x = from;
  while (x != to) {
    LD h = to - x;
    if (std::fabs(h) > max_step) h = h > 0 ? max_step : -max_step;
    taylor_step(x, h, y, yp);
    x += h;
    if (std::fabs(to - x) < 1e-18L) x = to;
  }
}

// Coefficients u_k, v_k of the Airy asymptotic expansions.
struct AsymptoticCoeffs {
  std::array<LD, 40> u{}, v{};
  AsymptoticCoeffs() {
    u[0] = v[0] = 1.0L;
    for (int k = 1; k < 40; ++k) {
      const LD kk = k;
      u[k] = u[k - 1] * (6 * kk - 5) * (6 * kk - 3) * (6 * kk - 1) /
             ((2 * kk - 1) * 216.0L * kk);
      v[k] = -u[k] * (6 * kk + 1) / (6 * kk - 1);
    }
  }
};

const AsymptoticCoeffs& asym() {
  static const AsymptoticCoeffs c;
  return c;
}

// Number of asymptotic terms before the smallest one.
int optimal_terms(LD zeta) {
  const auto& c = asym();
  int n = 1;
  LD prev = 1.0L, zp = 1.0L;
  for (int k = 1; k < 40; ++k) {
    zp *= zeta;
    const LD t = std::fabs(c.u[k]) / zp;
    if (t > prev) break;
    prev = t;
    n = k + 1;
    if (t < 1e-22L) break;
  }
  return n;
}

AiryLD airy_asymptotic_positive(LD x) {
  const auto& c = asym();
  const LD zeta = 2.0L / 3.0L * x * std::sqrt(x);
  const int n = optimal_terms(zeta);
  LD su_alt = 0, sv_alt = 0, su = 0, sv = 0, zp = 1.0L;
  for (int k = 0; k < n; ++k) {
    const LD sign = (k % 2 == 0) ? 1.0L : -1.0L;
    su_alt += sign * c.u[k] / zp;
    sv_alt += sign * c.v[k] / zp;
    su += c.u[k] / zp;
    sv += c.v[k] / zp;
    zp *= zeta;
  }
  const LD sqrtpi = std::sqrt(static_cast<LD>(kPi));
  const LD x14 = std::pow(x, 0.25L);
  const LD em = std::exp(-zeta), ep = std::exp(zeta);
  return {em / (2 * sqrtpi * x14) * su_alt, -x14 * em / (2 * sqrtpi) * sv_alt,
          ep / (sqrtpi * x14) * su, x14 * ep / sqrtpi * sv};
}

AiryLD airy_asymptotic_negative(LD x) {
  const auto& c = asym();
  const LD z = -x;
  const LD zeta = 2.0L / 3.0L * z * std::sqrt(z);
  const int n = optimal_terms(zeta);
  // Even and odd partial sums with alternating signs.
  LD ue = 0, uo = 0, ve = 0, vo = 0, zp = 1.0L;
  for (int k = 0; k < n; ++k) {
    const int j = k / 2;
    const LD sign = (j % 2 == 0) ? 1.0L : -1.0L;
    if (k % 2 == 0) {
      ue += sign * c.u[k] / zp;
      ve += sign * c.v[k] / zp;
    } else {
      uo += sign * c.u[k] / zp;
      vo += sign * c.v[k] / zp;
    }
    zp *= zeta;
  }
  const LD sqrtpi = std::sqrt(static_cast<LD>(kPi));
  const LD z14 = std::pow(z, 0.25L);
  const LD phase = zeta - static_cast<LD>(kPi) / 4.0L;
  const LD cs = std::cos(phase), sn = std::sin(phase);
  return {(cs * ue + sn * uo) / (sqrtpi * z14), z14 / sqrtpi * (sn * ve - cs * vo),
          (-sn * ue + cs * uo) / (sqrtpi * z14), z14 / sqrtpi * (cs * ve + sn * vo)};
}

AiryLD airy_ld(LD x) {
  const LD lim = kAiryMaclaurinLimit;
  const LD far = kAiryAsymptoticStart;
  if (std::fabs(x) <= lim) return airy_maclaurin(x);
  if (x >= far) return airy_asymptotic_positive(x);
  if (x <= -far) return airy_asymptotic_negative(x);
  if (x < 0) {
    // Oscillatory band: march all four outward from the Maclaurin edge.
    AiryLD r = airy_maclaurin(-lim);
    taylor_march(-lim, x, r.ai, r.aip);
    taylor_march(-lim, x, r.bi, r.bip);
    return r;
  }
  // Bi has no cancellation in its power series; Ai is marched inward
  // from the asymptotic region, the direction in which it grows.
  AiryLD r = airy_maclaurin(x);
  AiryLD a = airy_asymptotic_positive(far);
  taylor_march(far, x, a.ai, a.aip);
  r.ai = a.ai;
  r.aip = a.aip;
  return r;
}

void check_airy_range(Real x, Real limit) {
  if (!(std::fabs(x) <= limit)) {
    throw RangeError("Airy argument " + std::to_string(x) + " outside supported range");
  }
}

}  // namespace

AiryPair airy(Real x) {
  check_airy_range(x, kAiryMaxArgument);
  const AiryLD r = airy_ld(static_cast<LD>(x));
  return {static_cast<Real>(r.ai), static_cast<Real>(r.aip), static_cast<Real>(r.bi),
          static_cast<Real>(r.bip)};
}

RotatedAiry airy_rotated(Real x) {
  check_airy_range(x, kAiryMaxArgument);
  const Complex w = std::polar(1.0, -2.0 * kPi / 3.0);
  if (std::fabs(x) <= kAiryMaclaurinLimit) {
    // z = w x has z^3 = x^3, so the real series carry over up to phases.
    const auto& k = airy_constants();
    const auto s = maclaurin_parts(static_cast<LD>(x));
    const Real c1 = static_cast<Real>(k.c1), c2 = static_cast<Real>(k.c2);
    const Complex ai = c1 * static_cast<Real>(s.f) - c2 * w * static_cast<Real>(s.g);
    const Complex aip = c1 * w * w * static_cast<Real>(s.fp) - c2 * static_cast<Real>(s.gp);
    return {ai, aip};
  }
  // Connection formula Ai(x e^{-2 pi i/3}) = e^{-pi i/3} (Ai(x) + i Bi(x)) / 2.
  const AiryPair p = airy(x);
  const Complex i(0.0, 1.0);
  return {0.5 * std::polar(1.0, -kPi / 3.0) * (p.ai + i * p.bi),
          0.5 * std::polar(1.0, kPi / 3.0) * (p.ai_prime + i * p.bi_prime)};
}

namespace {
constexpr Real kScalingLimit = 30.0;

Complex rotated_log_derivative(Real x) {
  check_airy_range(x, kScalingLimit);
  const RotatedAiry r = airy_rotated(x);
  return std::polar(1.0, -2.0 * kPi / 3.0) * r.ai_prime / r.ai;
}
}  // namespace

Real scaling_f(Real x) {
  check_airy_range(x, kScalingLimit);
  const AiryPair p = airy(x);
  return (p.ai * p.ai_prime + p.bi * p.bi_prime) / (p.ai * p.ai + p.bi * p.bi);
}

Real scaling_f_rotated(Real x) { return rotated_log_derivative(x).real(); }

Real scaling_dos(Real x) {
  check_airy_range(x, kScalingLimit);
  const AiryPair p = airy(x);
  return 1.0 / (kPi * (p.ai * p.ai + p.bi * p.bi));
}

Real scaling_dos_rotated(Real x) { return rotated_log_derivative(x).imag(); }

// ---------------------------------------------------------------------------
// Whittaker function

namespace {

struct OdeState {
  Complex w, dw;
};

// Large-|z| expansion of W_{kappa,0}(z) / exp(scale) and its derivative,
// kappa = 1/2 - c.
OdeState whittaker_asymptotic(Real c, Complex z, Real& log_scale) {
  const Real kappa = 0.5 - c;
  Complex s = 1.0, ds = 0.0, term = 1.0;
  const Complex inv = -1.0 / z;
  Real prev = 1.0;
  for (int k = 0; k < 200; ++k) {
    const Complex next = term * (c + k) * (c + k) / static_cast<Real>(k + 1) * inv;
    const Real mag = std::abs(next);
    if (mag > prev && k > 2) break;
    s += next;
    // d/dz of (-1/z)^(k+1) is (k+1) (-1/z)^(k+1) / (-z).
    ds += next * static_cast<Real>(k + 1) / (-z);
    term = next;
    prev = mag;
    if (mag < 1e-18 * std::abs(s)) break;
  }
  const Complex lead = -0.5 * z + kappa * std::log(z);
  log_scale = lead.real();
  const Complex pref = std::exp(Complex(0.0, lead.imag()));
  const Complex w = pref * s;
  const Complex dw = pref * (s * (-0.5 + kappa / z) + ds);
  return {w, dw};
}

}  // namespace

namespace {
// Convergent logarithmic series of W_{kappa,0}(z) with 1/2 - kappa = c, at z = -mu + i0.
Real whittaker_msq_series(Real c, Real mu) {
  const Real log_mu = std::log(mu);
  Real term = 1.0, re = 0.0, im = 0.0;
  Real psi_c = digamma(c), psi_1 = -kEulerGamma;
  for (int k = 0; k < 500; ++k) {
    re += term * (log_mu + psi_c - 2.0 * psi_1);
    im += term * kPi;
    if (std::abs(term) < 1e-18 * (std::abs(re) + std::abs(im))) break;
    term *= -(c + k) * mu / ((k + 1.0) * (k + 1.0));
    psi_c += 1.0 / (c + k);
    psi_1 += 1.0 / (k + 1.0);
  }
  const Real g = gamma(c);
  return mu * std::exp(mu) / (g * g) * (re * re + im * im);
}
}  // namespace

Real whittaker_msq(Real c, Real mu, const WhittakerOptions& opts) {
  if (!(c > 0.0)) throw RangeError("whittaker_msq: c must be positive");
  if (!(mu > 0.0) || mu > opts.mu_max) {
    throw RangeError("whittaker_msq: mu outside (0, mu_max]");
  }
  if (mu <= kWhittakerSeriesLimit) return whittaker_msq_series(c, mu);
  const Real kappa = 0.5 - c;
  const Real radius = std::max(40.0, 10.0 * mu);
  const Complex z0 = std::polar(radius, kPi / 6.0);
  const Complex z1(-mu, 0.0);
  const Complex dz = z1 - z0;

  Real log_scale = 0.0;
  OdeState y = whittaker_asymptotic(c, z0, log_scale);
  // Work in the path parameter s in [0, 1]: y'' = dz^2 q(z) y.
  y.dw *= dz;
  auto rhs = [&](Real s, const OdeState& st) -> OdeState {
    const Complex z = z0 + s * dz;
    const Complex q = 0.25 - kappa / z - 0.25 / (z * z);
    return {st.dw, dz * dz * q * st.w};
  };

  // Dormand-Prince 5(4) with standard step control.
  static constexpr Real a21 = 1.0 / 5, a31 = 3.0 / 40, a32 = 9.0 / 40, a41 = 44.0 / 45,
                        a42 = -56.0 / 15, a43 = 32.0 / 9, a51 = 19372.0 / 6561,
                        a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729,
                        a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                        a64 = 49.0 / 176, a65 = -5103.0 / 18656, b1 = 35.0 / 384,
                        b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                        b6 = 11.0 / 84, e1 = 71.0 / 57600, e3 = -71.0 / 16695,
                        e4 = 71.0 / 1920, e5 = -17253.0 / 339200, e6 = 22.0 / 525,
                        e7 = -1.0 / 40;
  auto axpy = [](const OdeState& a, Real h, std::initializer_list<std::pair<Real, const OdeState*>> ks) {
    OdeState r = a;
    for (const auto& [coef, k] : ks) {
      r.w += h * coef * k->w;
      r.dw += h * coef * k->dw;
    }
    return r;
  };

  const Real tol = std::min(opts.rel_tol, 1e-9) * 1e-2;
  Real s = 0.0;
  Real h = 1e-3;
  int steps = 0;
  OdeState k1 = rhs(s, y);
  while (s < 1.0) {
    if (++steps > opts.max_steps) {
      throw NumericError("whittaker_msq: step budget exhausted at s=" + std::to_string(s));
    }
    if (s + h > 1.0) h = 1.0 - s;
    const OdeState k2 = rhs(s + h * a21, axpy(y, h, {{a21, &k1}}));
    const OdeState k3 = rhs(s + h * 0.3, axpy(y, h, {{a31, &k1}, {a32, &k2}}));
    const OdeState k4 = rhs(s + h * 0.8, axpy(y, h, {{a41, &k1}, {a42, &k2}, {a43, &k3}}));
    const OdeState k5 = rhs(s + h * 8.0 / 9.0,
                            axpy(y, h, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}));
    const OdeState k6 =
        rhs(s + h, axpy(y, h, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}));
    const OdeState yn =
        axpy(y, h, {{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}});
    const OdeState k7 = rhs(s + h, yn);
    const OdeState err =
        axpy(OdeState{0.0, 0.0}, h,
             {{e1, &k1}, {e3, &k3}, {e4, &k4}, {e5, &k5}, {e6, &k6}, {e7, &k7}});
    const Real scale_w = std::max(std::abs(y.w), std::abs(yn.w));
    const Real scale_d = std::max(std::abs(y.dw), std::abs(yn.dw));
    const Real ratio = std::max(std::abs(err.w) / (tol * scale_w + 1e-300),
                                std::abs(err.dw) / (tol * scale_d + 1e-300));
    if (!std::isfinite(ratio)) throw NumericError("whittaker_msq: non-finite ODE state");
    if (ratio <= 1.0) {
      s += h;
      y = yn;
      k1 = k7;
      // Keep the state O(1); the exponent is carried separately.
      const Real mag = std::abs(y.w);
      if (mag > 1e100 || mag < 1e-100) {
        log_scale += std::log(mag);
        y.w /= mag;
        y.dw /= mag;
        k1.w /= mag;
        k1.dw /= mag;
      }
    }
    const Real factor = ratio == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(ratio, -0.2), 0.2, 5.0);
    h *= factor;
    if (h < 1e-16) {
      throw NumericError("whittaker_msq: step size underflow at s=" + std::to_string(s));
    }
  }
  return std::exp(2.0 * (std::log(std::abs(y.w)) + log_scale));
}

// ---------------------------------------------------------------------------
// Gamma sampling

Real draw_gamma(Rng& rng, Real alpha, Real rate) {
  if (!(alpha > 0.0) || !(rate > 0.0)) throw ParameterError("draw_gamma: alpha, rate > 0");
  if (alpha < 1.0) {
    const Real g = draw_gamma(rng, alpha + 1.0, 1.0);
    return g * std::pow(rng.uniform(), 1.0 / alpha) / rate;
  }
  const Real d = alpha - 1.0 / 3.0;
  const Real cc = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    Real x, v;
    do {
      x = rng.normal();
      v = 1.0 + cc * x;
    } while (v <= 0.0);
    v = v * v * v;
    const Real u = rng.uniform();
    const Real x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return d * v / rate;
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v / rate;
  }
}

RealVector sample_gamma(Real alpha, Real rate, Seed seed, std::size_t n) {
  Rng rng(seed);
  RealVector out(static_cast<Eigen::Index>(n));
  for (auto& v : out) v = draw_gamma(rng, alpha, rate);
  return out;
}

}  // namespace dyson::specfun
