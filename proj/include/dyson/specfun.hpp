#pragma once

#include <complex>

#include "dyson/common.hpp"

namespace dyson::specfun {

using Complex = std::complex<Real>;

/// log Gamma(x) for x > 0 (Lanczos, g = 7).
Real log_gamma(Real x);
/// Gamma(x) for x > 0.
Real gamma(Real x);
/// psi(x) = d/dx log Gamma(x) for x > 0.
Real digamma(Real x);

struct AiryPair {
  Real ai = 0.0;
  Real ai_prime = 0.0;
  Real bi = 0.0;
  Real bi_prime = 0.0;

  Real wronskian() const { return ai * bi_prime - ai_prime * bi; }
};

/// Ai, Ai', Bi, Bi' at real x, |x| <= 50.
///
/// Maclaurin series (long double) for |x| <= kAiryMaclaurinLimit, exact
/// Taylor stepping of y'' = x y out to kAiryAsymptoticStart, and the
/// standard asymptotic expansions beyond. The asymptotic series alone is
/// only good to ~1e-6 at |x| = 4.5, hence the stepping band.
AiryPair airy(Real x);

inline constexpr Real kAiryMaclaurinLimit = 4.5;
inline constexpr Real kAiryAsymptoticStart = 9.0;
inline constexpr Real kAiryMaxArgument = 50.0;

/// Ai and Ai' at the rotated argument exp(-2 pi i / 3) x.
struct RotatedAiry {
  Complex ai;
  Complex ai_prime;
};
RotatedAiry airy_rotated(Real x);

/// Band-edge scaling function (Ai Ai' + Bi Bi') / (Ai^2 + Bi^2).
Real scaling_f(Real x);
/// Same function as Re[w Ai'(w x) / Ai(w x)], w = exp(-2 pi i / 3).
Real scaling_f_rotated(Real x);
/// Band-edge density scaling function 1 / (pi (Ai^2 + Bi^2)).
Real scaling_dos(Real x);
/// Same function as Im[w Ai'(w x) / Ai(w x)].
Real scaling_dos_rotated(Real x);

inline constexpr Real kWhittakerSeriesLimit = 2.0;

struct WhittakerOptions {
  Real mu_max = 100.0;
  Real rel_tol = 1e-9;
  int max_steps = 200000;
};

/// |W_{-c+1/2, 0}(-mu + i0)|^2. The logarithmic power series for
/// mu <= kWhittakerSeriesLimit; beyond, the Whittaker equation integrated
/// from the large-|z| asymptotic region down to the negative real axis.
Real whittaker_msq(Real c, Real mu, const WhittakerOptions& opts = {});

/// Draws from the gamma law with density proportional to x^(alpha-1) e^(-rate x).
/// Marsaglia-Tsang squeeze for alpha >= 1, alpha + 1 boosted by U^(1/alpha) below.
Real draw_gamma(Rng& rng, Real alpha, Real rate = 1.0);

/// n i.i.d. gamma draws, deterministic in seed.
RealVector sample_gamma(Real alpha, Real rate, Seed seed, std::size_t n);

}  // namespace dyson::specfun
