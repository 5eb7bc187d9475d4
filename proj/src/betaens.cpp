#include "dyson/betaens.hpp"

#include <algorithm>
#include <cmath>

#include "dyson/specfun.hpp"

namespace dyson::betaens {

Real BetaEnsembleSpec::effective_beta() const {
  if (const auto* r = std::get_if<COverN>(&regime)) return r->c / static_cast<Real>(n_pairs);
  return beta;
}

namespace {
void check(const BetaEnsembleSpec& spec) {
  if (spec.n_pairs < 1) throw ParameterError("beta ensemble: need at least one pair");
  if (!(spec.effective_beta() > 0.0)) throw ParameterError("beta ensemble: beta must be positive");
}
}  // namespace

Real entry_shape(const BetaEnsembleSpec& spec, Eigen::Index i) {
  return static_cast<Real>(2 * spec.n_pairs - i) * spec.effective_beta() / 2.0;
}

AntisymTridiag<Real> sample_matrix(const BetaEnsembleSpec& spec) {
  check(spec);
  Rng rng(spec.seed);
  Vec<Real> upper(2 * spec.n_pairs);
  for (Eigen::Index i = 0; i < upper.size(); ++i) {
    upper[i] = std::sqrt(specfun::draw_gamma(rng, entry_shape(spec, i)));
  }
  return AntisymTridiag<Real>(upper);
}

Spectrum<Real> squared_spectrum(const AntisymTridiag<Real>& m, Real tol) {
  if (m.size() % 2 == 0) throw ParameterError("squared_spectrum: odd size expected");
  return squared_positive_spectrum(m.hermitian_form(), tol);
}

std::vector<Real> pooled_squared_spectra(const BetaEnsembleSpec& spec, std::size_t n_samples) {
  std::vector<Real> out;
  out.reserve(n_samples * static_cast<std::size_t>(spec.n_pairs));
  for (std::size_t s = 0; s < n_samples; ++s) {
    BetaEnsembleSpec one = spec;
    one.seed = derive_seed(spec.seed, s);
    const auto y = squared_spectrum(sample_matrix(one));
    out.insert(out.end(), y.values.begin(), y.values.end());
  }
  return out;
}

Real mp_density(Real mu) {
  if (!(mu > 0.0 && mu < 1.0)) throw RangeError("mp_density: mu must lie in (0, 1)");
  return 2.0 / kPi * std::sqrt((1.0 - mu) / mu);
}

Real mp_cdf(Real mu) {
  if (mu <= 0.0) return 0.0;
  if (mu >= 1.0) return 1.0;
  return 2.0 / kPi * (std::asin(std::sqrt(mu)) + std::sqrt(mu * (1.0 - mu)));
}

Real con_density(Real c, Real mu) {
  if (!(c > 0.0) || !(mu > 0.0)) throw RangeError("con_density: c and mu must be positive");
  const Real norm = specfun::gamma(c) * specfun::gamma(c + 1.0);
  return 1.0 / (norm * specfun::whittaker_msq(c, mu));
}

Real con_small_mass(Real c, Real eps) {
  const Real lead = std::log(eps) + specfun::digamma(c) + 2.0 * kEulerGamma;
  return (0.5 * kPi + std::atan(lead / kPi)) / (c * kPi);
}

ConCdf::ConCdf(Real c, Real mu_lo, Real mu_hi, Eigen::Index points)
    : c_(c), log_lo_(std::log(mu_lo)), step_((std::log(mu_hi) - std::log(mu_lo)) / static_cast<Real>(points - 1)) {
  if (points < 3 || !(mu_hi > mu_lo)) throw ParameterError("ConCdf: bad table");
  RealVector g(points);
  for (Eigen::Index k = 0; k < points; ++k) {
    const Real mu = std::exp(log_lo_ + step_ * static_cast<Real>(k));
    g[k] = mu * con_density(c, mu);
  }
  cum_.resize(points);
  cum_[0] = con_small_mass(c, mu_lo);
  for (Eigen::Index k = 1; k < points; ++k) {
    cum_[k] = cum_[k - 1] + 0.5 * step_ * (g[k - 1] + g[k]);
  }
}

Real ConCdf::operator()(Real mu) const {
  if (mu <= 0.0) return 0.0;
  const Real pos = (std::log(mu) - log_lo_) / step_;
  if (pos <= 0.0) return std::min(cum_[0], con_small_mass(c_, mu));
  const auto last = cum_.size() - 1;
  if (pos >= static_cast<Real>(last)) return cum_[last];
  const auto i = static_cast<Eigen::Index>(pos);
  const Real t = pos - static_cast<Real>(i);
  return (1.0 - t) * cum_[i] + t * cum_[i + 1];
}

}  // namespace dyson::betaens
