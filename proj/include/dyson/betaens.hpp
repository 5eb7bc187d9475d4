#pragma once

#include <variant>
#include <vector>

#include "dyson/common.hpp"
#include "dyson/tridiag.hpp"

namespace dyson::betaens {

struct FixedBeta {};
/// beta = c / N.
struct COverN {
  Real c = 1.0;
};
using Regime = std::variant<FixedBeta, COverN>;

struct BetaEnsembleSpec {
  Eigen::Index n_pairs = 1;  ///< matrix size 2N + 1
  Real beta = 2.0;           ///< ignored for COverN
  Regime regime = FixedBeta{};
  Seed seed = 0;

  Real effective_beta() const;
};

/// Gamma shape of the squared superdiagonal entry at row i (0 at the top):
/// (2N - i) beta / 2.
Real entry_shape(const BetaEnsembleSpec& spec, Eigen::Index i);

/// (2N+1) x (2N+1) antisymmetric tridiagonal; the superdiagonal entry at
/// row i is the square root of a Gamma(entry_shape(i), 1) draw.
AntisymTridiag<Real> sample_matrix(const BetaEnsembleSpec& spec);

/// Squares y_j = x_j^2 of the N positive frequencies of the +-i x_j pairs.
Spectrum<Real> squared_spectrum(const AntisymTridiag<Real>& m, Real tol = 0.0);

/// Pooled squared spectra of n_samples matrices drawn with derived seeds.
std::vector<Real> pooled_squared_spectra(const BetaEnsembleSpec& spec, std::size_t n_samples);

/// (2/pi) sqrt((1 - mu) / mu) on (0, 1); y maps to mu = y / (4 N beta).
Real mp_density(Real mu);
Real mp_cdf(Real mu);

/// 1 / (Gamma(c) Gamma(c+1) |W_{-c+1/2,0}(-mu)|^2) with mu = y at beta = c / N.
Real con_density(Real c, Real mu);

/// Mass of con_density on (0, eps] from the small-argument law,
/// (pi/2 + atan((log eps + psi(c) + 2 gamma_E) / pi)) / (c pi).
Real con_small_mass(Real c, Real eps);

/// Distribution function of con_density, tabulated on a log grid.
class ConCdf {
 public:
  explicit ConCdf(Real c, Real mu_lo = 1e-7, Real mu_hi = 80.0, Eigen::Index points = 3000);

  Real operator()(Real mu) const;
  /// Mass of the table up to mu_hi, including the small-argument piece.
  Real total() const { return cum_[cum_.size() - 1]; }

 private:
  Real c_, log_lo_, step_;
  RealVector cum_;
};

}  // namespace dyson::betaens
