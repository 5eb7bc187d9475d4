#pragma once

#include <complex>
#include <vector>

#include "dyson/common.hpp"

namespace dyson::exact {

using Complex = std::complex<Real>;

/// Gamma law alpha, rate for the spring ratios.
struct GammaChainParams {
  Real alpha = 1.0;
  Real rate = 1.0;
};

/// Normaliser K(x) = int_0^inf t^(alpha-1) (1+t)^(-alpha) e^(-rate t / x) dt.
Real k_alpha(const GammaChainParams& p, Real x);
/// Same integral weighted by log(1+t).
Real l_alpha(const GammaChainParams& p, Real x);
/// Characteristic function 2 L(x) / K(x).
Real omega_exact(const GammaChainParams& p, Real x);
/// Stationary density of the continued fraction at xi.
Real stationary_density(const GammaChainParams& p, Real x, Real xi);

/// Saddle point of log t - log(1+t) + nu t in the upper half plane, 0 < nu < 4.
Complex saddle(Real nu);

struct ContinuedOmega {
  Complex omega;        ///< Omega(-1/x + i0)
  Complex omega_prime;  ///< dOmega/dz at the same point
  Real refinement_gap;  ///< |Im Omega| change under a tighter tolerance
};

/// Omega and its derivative continued to z = -1/x + i0 by contour integration.
/// Needs integer alpha. Throws NumericError if the imaginary part is not
/// stable to 1e-6 under refinement.
ContinuedOmega omega_continued(const GammaChainParams& p, Real x);

struct IdosValue {
  Real value = 0.0;  ///< clamped to [0, 1]
  Real raw = 0.0;
  Real clamp = 0.0;  ///< |value - raw|
};

/// Integrated density of squared frequencies, M(x) = 1 - Im Omega(-1/x + i0) / pi.
IdosValue idos_exact_detail(const GammaChainParams& p, Real x);
Real idos_exact(const GammaChainParams& p, Real x);
/// Density D(mu) = dM/dmu from the same continuation.
Real dos_exact(const GammaChainParams& p, Real mu);

/// Closed forms for the chain without disorder.
struct PureChainValues {
  Real xi = 0.0;
  Real omega = 0.0;
  Real dos = 0.0;
  Real idos = 0.0;
};
PureChainValues pure_chain(Real x);

/// Large-n form of M for alpha = rate = n.
Real weak_disorder_idos(Real n, Real x);

/// Coefficient of 1/alpha in the Lyapunov exponent, 1 / (8 (4/w^2 - 1)).
Real gamma1_coefficient(Real omega_sq);

struct CurvePoint {
  Real x;
  Real value;
};
std::vector<CurvePoint> tabulate_idos(const GammaChainParams& p, const std::vector<Real>& xs);
std::vector<CurvePoint> tabulate_dos(const GammaChainParams& p, const std::vector<Real>& mus);

}  // namespace dyson::exact
