#pragma once

#include <ostream>
#include <variant>

#include "dyson/chain.hpp"
#include "dyson/common.hpp"
#include "dyson/stats.hpp"

namespace dyson::schmidt {

/// xi -> x lambda / (1 + xi)
struct XiTypeI {
  Real x = 1.0;
};
/// z -> (2 - w^2 m / K) - 1/z
struct RatioTypeII {
  Real omega_sq = 1.0;
  Real spring_k = 1.0;
};
/// s -> -(lambda / y^2) / (1 + s)
struct AntisymRatio {
  Real y = 1.0;
};
using RecursionKind = std::variant<XiTypeI, RatioTypeII, AntisymRatio>;

inline constexpr std::size_t kDefaultBurnIn = 1000;
inline constexpr int kBlocks = 50;

struct McSamples {
  RealVector samples;
  std::size_t redraws = 0;  ///< steps redrawn after an exact zero denominator
  std::size_t burn_in = 0;
};

/// Iterates the recursion from its fixed start and returns n_samples
/// post-burn-in values. Continuous laws redraw on an exact zero
/// denominator; atomic laws let the infinity propagate through one step.
McSamples mc_stationary(const RecursionKind& kind, const DisorderLaw& law, std::size_t n_samples,
                        std::size_t burn_in, Seed seed);

struct Estimate {
  Real value = 0.0;
  Real stderr_ = 0.0;
  std::size_t samples = 0;
};

/// 2 E[log(1 + xi)] over the TypeI stationary law.
Estimate omega_mc(const XiTypeI& kind, const DisorderLaw& law, std::size_t n_samples, Seed seed,
                  std::size_t burn_in = kDefaultBurnIn);

/// E[log(1 + xi_even + x K / m)] for the TypeII chain, m independent of xi_even.
Estimate omega_type2_mc(const DisorderLaw& law, Real spring_k, Real x, std::size_t n, Seed seed,
                        std::size_t burn_in = kDefaultBurnIn);

/// Fraction of negative ratios of z -> (2 - w^2 m / K) - 1/z, an estimate of M(w^2).
Estimate idos_node_fraction(const DisorderLaw& law, Real spring_k, Real omega_sq, std::size_t n_steps,
                            Seed seed, std::size_t burn_in = kDefaultBurnIn);

/// Negative ratios of the finite free-ended TypeII chain,
/// z_j = (K_{j-1} + K_j - w^2 m_j) - K_{j-1}^2 / z_{j-1}. Equals the number of
/// squared frequencies strictly below w^2.
Eigen::Index node_count(const ChainRealization& r, Real omega_sq);

/// Tabulated density. weights[k] is the mass of the cell around points[k];
/// edges, when present, are the n+1 cell boundaries in the point variable.
struct DensityGrid {
  enum class Kind { LogXi, Angle, Plain };
  Kind kind = Kind::Plain;
  RealVector points;
  RealVector weights;
  RealVector edges;
  Real total_mass = 0.0;
  Real step = 0.0;  ///< spacing in log xi or in the angle atan z

  void refresh_mass() { total_mass = weights.sum(); }
};

/// Log-uniform grid for xi in [lo, hi] with n points, zero weights.
DensityGrid make_xi_grid(Real lo, Real hi, Eigen::Index n);
/// n cells uniform in atan z over (-pi/2, pi/2); points are z = tan(center).
DensityGrid make_ratio_grid(Eigen::Index n);
/// Fills weights from a density in the point variable (xi or z).
void fill_from_density(DensityGrid& g, const std::function<Real(Real)>& density);
/// Density in the point variable at each grid point.
RealVector density_values(const DensityGrid& g);
/// CSV with header "point,weight", values printed with 17 significant digits.
void write_csv(const DensityGrid& g, std::ostream& out);

struct IterationResult {
  DensityGrid grid;
  Real residual = 0.0;  ///< L1 distance between the last two iterates
  Real leaked = 0.0;    ///< mass lost off the grid in the last step
};

/// Applies the Dyson-Schmidt integral map n_iter times. XiTypeI needs a
/// LogXi grid, RatioTypeII an Angle grid. Throws GridError if a step loses
/// more than 1% of the mass.
IterationResult density_iteration(const RecursionKind& kind, const DisorderLaw& law,
                                  const DensityGrid& grid, int n_iter);

/// Draws from the Kummer law with density proportional to x^(a-1) e^(-p x) (1+x)^(-(a+b)).
/// Gamma(a, p) proposals accepted with probability (1+x)^(-(a+b)); needs a + b >= 0.
Real draw_kummer(Rng& rng, Real a, Real b, Real p);

/// Two-sample KS between X/(1+Y), X ~ Gamma(alpha, p), Y ~ Kummer(alpha+beta, -beta, p),
/// and direct Kummer(alpha, beta, p) draws.
stats::KsResult letac_check(Real alpha, Real beta, Real p, std::size_t n, Seed seed);

}  // namespace dyson::schmidt
