#include "dyson/lyapunov.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dyson/specfun.hpp"

namespace dyson::lyapunov {

namespace {

// Produces the steps of one kind of chain from a random stream.
class StepSource {
 public:
  StepSource(const ChainSpec& spec, Real arg, Seed seed) : spec_(spec), rng_(seed) {
    validate(spec.law);
    const bool potential = std::holds_alternative<GaussianPotential>(spec.law);
    if (potential != (spec.kind == ChainKind::Anderson)) {
      throw ParameterError("transfer_lyapunov: a potential law goes with the Anderson kind only");
    }
    switch (spec.kind) {
      case ChainKind::TypeII:
        if (!(spec.spring_k > 0.0)) throw ParameterError("transfer_lyapunov: spring constant must be positive");
        scale_ = arg / spec.spring_k;
        break;
      case ChainKind::TypeI:
        if (!(arg >= 0.0)) throw ParameterError("transfer_lyapunov: TypeI needs w^2 >= 0");
        energy_ = std::sqrt(arg);
        break;
      case ChainKind::Anderson:
        energy_ = arg;
        break;
    }
  }

  TransferStep next() {
    const Real v = draw(spec_.law, rng_);
    switch (spec_.kind) {
      case ChainKind::TypeII:
        return {2.0 - scale_ * v, -1.0, 1.0, 0.0};
      case ChainKind::TypeI: {
        const Real t = std::sqrt(v);
        const TransferStep s{energy_ / t, -prev_hop_ / t, 1.0, 0.0};
        prev_hop_ = t;
        return s;
      }
      case ChainKind::Anderson:
        return {v - energy_, -1.0, 1.0, 0.0};
    }
    return {};
  }

 private:
  const ChainSpec& spec_;
  Rng rng_;
  Real scale_ = 0.0;
  Real energy_ = 0.0;
  Real prev_hop_ = 1.0;
};

inline void apply(const TransferStep& s, Real& u, Real& w) {
  const Real nu = s.a11 * u + s.a12 * w;
  w = s.a21 * u + s.a22 * w;
  u = nu;
}

// Normalises (u, w) and returns the log of the removed norm.
inline Real renormalise(Real& u, Real& w) {
  const Real n = std::hypot(u, w);
  u /= n;
  w /= n;
  return std::log(n);
}

// Cell average of log|t| over [a, b].
Real mean_log_abs(Real a, Real b) {
  auto prim = [](Real t) { return t == 0.0 ? 0.0 : t * std::log(std::abs(t)) - t; };
  if (b - a <= 0.0) return std::log(std::abs(a));
  return (prim(b) - prim(a)) / (b - a);
}

}  // namespace

LyapunovEstimate transfer_lyapunov(const ChainSpec& spec, Real omega_sq_or_e, std::size_t n_steps, Seed seed,
                                   const TransferOptions& opts) {
  if (n_steps < 1000) throw ParameterError("transfer_lyapunov: need at least 1000 steps");
  if (opts.blocks < 2 || opts.renorm_interval < 1) throw ParameterError("transfer_lyapunov: bad options");
  StepSource src(spec, omega_sq_or_e, seed);
  const auto blocks = static_cast<std::size_t>(opts.blocks);
  const std::size_t per = n_steps / blocks;

  LyapunovEstimate out;
  Real u = 1.0, w = 0.0, total = 0.0;
  std::vector<Real> means;
  std::size_t done = 0;
  for (std::size_t b = 0; b < blocks; ++b) {
    const std::size_t len = b + 1 == blocks ? n_steps - done : per;
    Real acc = 0.0;
    for (std::size_t i = 0; i < len; ++i) {
      apply(src.next(), u, w);
      if ((i + 1) % opts.renorm_interval == 0 || i + 1 == len) {
        acc += renormalise(u, w);
        ++out.resets;
      }
    }
    done += len;
    total += acc;
    means.push_back(acc / static_cast<Real>(len));
  }
  out.steps = n_steps;
  out.gamma = total / static_cast<Real>(n_steps);
  out.stderr_ = block_stats(means).stderr_;
  return out;
}

Real log_abs_u(const ChainRealization& r, Real omega_sq) {
  if (r.spec.kind != ChainKind::TypeII) throw ParameterError("log_abs_u: TypeII only");
  const Real scale = omega_sq / r.spec.spring_k;
  Real u = 1.0, w = 0.0, acc = 0.0;
  for (Eigen::Index j = 0; j < r.masses.size(); ++j) {
    apply({2.0 - scale * r.masses[j], -1.0, 1.0, 0.0}, u, w);
    acc += renormalise(u, w);
  }
  return acc + std::log(std::abs(u));
}

FiniteIdentity finite_identity(const ChainRealization& r, Real omega_sq) {
  const auto n = static_cast<Real>(r.n());
  const auto ev = eigenvalues(fixed_end_matrix(r));
  FiniteIdentity out;
  out.from_recursion = log_abs_u(r, omega_sq) / n;
  Real s = 0.0;
  for (Real mu : ev.values) s += std::log(std::abs(omega_sq - mu));
  for (Real m : r.masses) s += std::log(m / r.spec.spring_k);
  out.from_spectrum = s / n;
  return out;
}

schmidt::DensityGrid spectral_grid(const SymTridiag<Real>& m, Real lo, Real hi, Eigen::Index cells) {
  if (!(hi > lo) || cells < 1) throw ParameterError("spectral_grid: bad range");
  const auto n = m.size();
  schmidt::DensityGrid g;
  g.kind = schmidt::DensityGrid::Kind::Plain;
  g.step = (hi - lo) / static_cast<Real>(cells);
  g.edges = RealVector::LinSpaced(cells + 1, lo, hi);
  g.points.resize(cells);
  g.weights.resize(cells);
  Eigen::Index below = count_below(m, lo);
  if (below != 0) throw RangeError("spectral_grid: eigenvalues below the range");
  for (Eigen::Index k = 0; k < cells; ++k) {
    const Eigen::Index next =
        k + 1 == cells ? count_below(m, std::nextafter(hi, std::numeric_limits<Real>::infinity()))
                       : count_below(m, g.edges[k + 1]);
    g.points[k] = 0.5 * (g.edges[k] + g.edges[k + 1]);
    g.weights[k] = static_cast<Real>(next - below) / static_cast<Real>(n);
    below = next;
  }
  if (below != n) throw RangeError("spectral_grid: eigenvalues above the range");
  g.refresh_mass();
  return g;
}

Real log_potential(const schmidt::DensityGrid& idos, Real omega_sq) {
  if (idos.edges.size() != idos.weights.size() + 1) throw ParameterError("log_potential: grid needs cell edges");
  Real s = 0.0;
  for (Eigen::Index k = 0; k < idos.weights.size(); ++k) {
    if (idos.weights[k] == 0.0) continue;
    s += idos.weights[k] * mean_log_abs(idos.edges[k] - omega_sq, idos.edges[k + 1] - omega_sq);
  }
  return s;
}

Real thouless_gamma(const schmidt::DensityGrid& idos, Real omega_sq, const DisorderLaw& law, Real spring_k) {
  return log_potential(idos, omega_sq) + mean_log(law) - std::log(spring_k);
}

Real thouless_gamma_type1(const schmidt::DensityGrid& idos, Real omega_sq, const DisorderLaw& law) {
  return 0.5 * (log_potential(idos, omega_sq) - mean_log(law));
}

ShiftedOmega omega_shifted(const DisorderLaw& law, Real spring_k, Real y_sq, std::size_t n_steps, Seed seed) {
  const auto g = transfer_lyapunov({ChainKind::TypeII, 1, law, spring_k, seed}, y_sq, n_steps, derive_seed(seed, 0));
  ShiftedOmega out;
  Real im = 0.0;
  if (y_sq > 0.0) {
    const auto m = schmidt::idos_node_fraction(law, spring_k, y_sq, n_steps, derive_seed(seed, 1));
    im = kPi * m.value;
    out.stderr_im = kPi * m.stderr_;
  }
  out.value = {g.gamma - mean_log(law) + std::log(spring_k), im};
  out.stderr_re = g.stderr_;
  return out;
}

CollapseReport band_edge_collapse(Real alpha, const std::vector<Real>& energies, std::size_t n_steps, Seed seed) {
  if (!(alpha > 0.0)) throw ParameterError("band_edge_collapse: alpha must be positive");
  CollapseReport rep;
  rep.alpha = alpha;
  const Real s = std::cbrt(2.0 * alpha);
  const ChainSpec spec{ChainKind::Anderson, 1, GaussianPotential{1.0 / alpha}, 1.0, seed};
  for (std::size_t i = 0; i < energies.size(); ++i) {
    CollapsePoint p;
    p.energy = energies[i];
    const auto est = transfer_lyapunov(spec, p.energy, n_steps, derive_seed(seed, i));
    p.gamma = est.gamma;
    p.gamma_stderr = est.stderr_;
    p.scaled_x = s * s * (std::abs(p.energy) - 2.0);
    p.scaled_gamma = s * p.gamma;
    p.target = specfun::scaling_f(p.scaled_x);
    p.rel_dev = std::abs(p.scaled_gamma - p.target) / p.target;
    rep.max_rel_dev = std::max(rep.max_rel_dev, p.rel_dev);
    rep.points.push_back(p);
  }
  return rep;
}

GrowthProfile growth_profile(const DisorderLaw& law, Real omega_sq, const std::vector<std::size_t>& lengths,
                             std::size_t walks, Seed seed) {
  if (walks < 2 || lengths.empty()) throw ParameterError("growth_profile: need two walks and a length");
  GrowthProfile out;
  out.lengths = lengths;
  std::sort(out.lengths.begin(), out.lengths.end());
  const std::size_t nl = out.lengths.size();
  std::vector<Real> sum(nl, 0.0), sum_sq(nl, 0.0);
  const ChainSpec spec{ChainKind::TypeI, 1, law, 1.0, seed};
  for (std::size_t w = 0; w < walks; ++w) {
    StepSource src(spec, omega_sq, derive_seed(seed, w));
    Real u = 1.0, v = 0.0, acc = 0.0;
    std::size_t step = 0;
    for (std::size_t k = 0; k < nl; ++k) {
      for (; step < out.lengths[k]; ++step) {
        apply(src.next(), u, v);
        acc += renormalise(u, v);
      }
      sum[k] += acc;
      sum_sq[k] += acc * acc;
    }
  }
  const auto n = static_cast<Real>(walks);
  for (std::size_t k = 0; k < nl; ++k) {
    const Real m = sum[k] / n;
    out.mean.push_back(m);
    out.sd.push_back(std::sqrt(std::max(0.0, (sum_sq[k] - n * m * m) / (n - 1.0))));
  }
  return out;
}

}  // namespace dyson::lyapunov
