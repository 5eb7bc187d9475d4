#pragma once

#include <complex>
#include <vector>

#include "dyson/chain.hpp"
#include "dyson/common.hpp"
#include "dyson/schmidt.hpp"

namespace dyson::lyapunov {

/// One 2x2 step acting on (psi_{j+1}, psi_j) <- (psi_j, psi_{j-1}).
struct TransferStep {
  Real a11 = 0.0, a12 = 0.0, a21 = 1.0, a22 = 0.0;
};

struct LyapunovEstimate {
  Real gamma = 0.0;
  Real stderr_ = 0.0;
  std::size_t steps = 0;
  std::size_t resets = 0;  ///< renormalisations performed
};

struct TransferOptions {
  std::size_t renorm_interval = 1;
  int blocks = 50;
};

/// Growth rate of the transfer product along a chain streamed from `seed`.
///
/// TypeII: per mass, argument w^2, step [[2 - w^2 m/K, -1], [1, 0]].
/// TypeI: per site of the hopping lattice with hoppings sqrt(lambda),
///   argument w^2 and energy w = sqrt(w^2).
/// Anderson: per site of -(psi_{n+1} + psi_{n-1}) + V psi = E psi, argument E.
/// The draws follow the same order as realize(), so a TypeII or TypeI run
/// of N steps reproduces the realization with n_masses = N and this seed.
LyapunovEstimate transfer_lyapunov(const ChainSpec& spec, Real omega_sq_or_e, std::size_t n_steps,
                                   Seed seed, const TransferOptions& opts = {});

/// log|U_{N+1}| of the fixed-wall TypeII recursion with U_0 = 0, U_1 = 1,
/// or -inf when w^2 is an eigenvalue.
Real log_abs_u(const ChainRealization& r, Real omega_sq);

struct FiniteIdentity {
  Real from_recursion = 0.0;  ///< (1/N) log|U_{N+1}|
  Real from_spectrum = 0.0;   ///< (1/N) sum log|w^2 - mu_l| + (1/N) sum log(m_l / K)
};

/// Both sides of the product identity for one TypeII realization; mu_l are
/// the eigenvalues of fixed_end_matrix.
FiniteIdentity finite_identity(const ChainRealization& r, Real omega_sq);

/// Histogram of a spectrum on [lo, hi]: cell masses from exact eigenvalue
/// counts divided by the matrix size. Throws RangeError if some eigenvalue
/// falls outside the range.
schmidt::DensityGrid spectral_grid(const SymTridiag<Real>& m, Real lo, Real hi, Eigen::Index cells);

/// Sum over cells of mass times the cell average of log|w^2 - mu| for a
/// density uniform inside each cell. Needs cell edges.
Real log_potential(const schmidt::DensityGrid& idos, Real omega_sq);

/// TypeII per-mass exponent: log_potential + <log m> - log K.
Real thouless_gamma(const schmidt::DensityGrid& idos, Real omega_sq, const DisorderLaw& law, Real spring_k);

/// TypeI per-site exponent at energy w: (log_potential - <log lambda>) / 2.
Real thouless_gamma_type1(const schmidt::DensityGrid& idos, Real omega_sq, const DisorderLaw& law);

/// Dyson's function of the squared frequencies shifted by y^2,
/// lim (1/N) sum log(w_j^2 - y^2). Real part gamma - <log m> + log K from
/// the transfer exponent,
/// imaginary part pi M(y^2) from node counting.
struct ShiftedOmega {
  std::complex<Real> value;
  Real stderr_re = 0.0;
  Real stderr_im = 0.0;
};
ShiftedOmega omega_shifted(const DisorderLaw& law, Real spring_k, Real y_sq, std::size_t n_steps, Seed seed);

struct CollapsePoint {
  Real energy = 0.0;
  Real gamma = 0.0;
  Real gamma_stderr = 0.0;
  Real scaled_x = 0.0;      ///< (2 alpha)^(2/3) (|E| - 2)
  Real scaled_gamma = 0.0;  ///< gamma (2 alpha)^(1/3)
  Real target = 0.0;        ///< scaling_f(scaled_x)
  Real rel_dev = 0.0;
};

struct CollapseReport {
  Real alpha = 0.0;
  std::vector<CollapsePoint> points;
  Real max_rel_dev = 0.0;
};

/// Anderson exponents near the band edge for site energies of variance
/// 1/alpha, rescaled and compared with the Airy scaling function.
CollapseReport band_edge_collapse(Real alpha, const std::vector<Real>& energies, std::size_t n_steps, Seed seed);

/// Statistics of log|psi_n| over independent TypeI walks started at
/// (psi_1, psi_0) = (1, 0), at energy sqrt(omega_sq).
struct GrowthProfile {
  std::vector<std::size_t> lengths;
  std::vector<Real> mean;
  std::vector<Real> sd;
};
GrowthProfile growth_profile(const DisorderLaw& law, Real omega_sq, const std::vector<std::size_t>& lengths,
                             std::size_t walks, Seed seed);

}  // namespace dyson::lyapunov
