#include "dyson/schmidt.hpp"

#include <cmath>
#include <cstdio>
#include <vector>

#include "dyson/specfun.hpp"

namespace dyson::schmidt {

namespace {

bool is_atomic(const DisorderLaw& law) {
  return std::holds_alternative<Constant>(law) || std::holds_alternative<TwoPoint>(law);
}

// Atoms of an atomic law as (value, probability).
std::vector<std::pair<Real, Real>> atoms(const DisorderLaw& law) {
  if (const auto* c = std::get_if<Constant>(&law)) return {{c->value, 1.0}};
  const auto& t = std::get<TwoPoint>(law);
  std::vector<std::pair<Real, Real>> out;
  if (t.p > 0.0) out.emplace_back(t.light, t.p);
  if (t.p < 1.0) out.emplace_back(t.heavy, 1.0 - t.p);
  return out;
}

void require_positive_law(const DisorderLaw& law) {
  validate(law);
  if (std::holds_alternative<GaussianPotential>(law)) {
    throw ParameterError("recursions need a positive law, not a potential");
  }
}

Estimate blocked(const std::vector<Real>& values) {
  const std::size_t n = values.size();
  std::vector<Real> means;
  const std::size_t per = std::max<std::size_t>(1, n / kBlocks);
  for (std::size_t b = 0; b + per <= n && means.size() < static_cast<std::size_t>(kBlocks); b += per) {
    Real s = 0.0;
    for (std::size_t i = b; i < b + per; ++i) s += values[i];
    means.push_back(s / static_cast<Real>(per));
  }
  const auto st = block_stats(means);
  return {st.mean, st.stderr_, n};
}

// Uniform-grid cubic (Catmull-Rom) interpolation.
Real cubic(const RealVector& f, Real pos, bool periodic) {
  const Eigen::Index n = f.size();
  const Real fl = std::floor(pos);
  const Eigen::Index i = static_cast<Eigen::Index>(fl);
  const Real t = pos - fl;
  auto at = [&](Eigen::Index k) -> Real {
    if (periodic) return f[((k % n) + n) % n];
    if (k < 0 || k >= n) return 0.0;
    return f[k];
  };
  const Real p0 = at(i - 1), p1 = at(i), p2 = at(i + 1), p3 = at(i + 2);
  return p1 + 0.5 * t * (p2 - p0 + t * (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3 + t * (3.0 * (p1 - p2) + p3 - p0)));
}

}  // namespace

McSamples mc_stationary(const RecursionKind& kind, const DisorderLaw& law, std::size_t n_samples,
                        std::size_t burn_in, Seed seed) {
  require_positive_law(law);
  if (n_samples == 0) throw ParameterError("mc_stationary: need at least one sample");
  Rng rng(seed);
  McSamples out;
  out.samples.resize(static_cast<Eigen::Index>(n_samples));
  out.burn_in = burn_in;
  const bool atomic = is_atomic(law);

  std::visit(
      [&](const auto& k) {
        using K = std::decay_t<decltype(k)>;
        Real v;
        if constexpr (std::is_same_v<K, XiTypeI>) {
          if (!(k.x >= 0.0)) throw ParameterError("XiTypeI: x must be non-negative");
          v = k.x;
        } else if constexpr (std::is_same_v<K, RatioTypeII>) {
          if (!(k.spring_k > 0.0)) throw ParameterError("RatioTypeII: spring must be positive");
          v = 1.0;
        } else {
          if (k.y == 0.0) throw ParameterError("AntisymRatio: y must be nonzero");
          v = 0.0;
        }
        auto step = [&](Real prev) -> Real {
          for (;;) {
            const Real d = draw(law, rng);
            Real denom, next;
            if constexpr (std::is_same_v<K, XiTypeI>) {
              denom = 1.0 + prev;
              next = k.x * d / denom;
            } else if constexpr (std::is_same_v<K, RatioTypeII>) {
              denom = prev;
              next = (2.0 - k.omega_sq * d / k.spring_k) - 1.0 / prev;
            } else {
              denom = 1.0 + prev;
              next = -(d / (k.y * k.y)) / denom;
            }
            if (denom != 0.0 || atomic) return next;
            ++out.redraws;
          }
        };
        for (std::size_t i = 0; i < burn_in; ++i) v = step(v);
        for (std::size_t i = 0; i < n_samples; ++i) {
          v = step(v);
          out.samples[static_cast<Eigen::Index>(i)] = v;
        }
      },
      kind);
  return out;
}

Estimate omega_mc(const XiTypeI& kind, const DisorderLaw& law, std::size_t n_samples, Seed seed,
                  std::size_t burn_in) {
  if (kind.x == 0.0) return {0.0, 0.0, n_samples};
  const auto s = mc_stationary(kind, law, n_samples, burn_in, seed);
  std::vector<Real> v(s.samples.size());
  for (Eigen::Index i = 0; i < s.samples.size(); ++i) v[i] = 2.0 * std::log1p(s.samples[i]);
  return blocked(v);
}

Estimate omega_type2_mc(const DisorderLaw& law, Real spring_k, Real x, std::size_t n, Seed seed,
                        std::size_t burn_in) {
  require_positive_law(law);
  if (!(x > 0.0) || !(spring_k > 0.0)) throw ParameterError("omega_type2_mc: x, K must be positive");
  Rng rng(seed);
  Real even = x * spring_k;
  std::vector<Real> v;
  v.reserve(n);
  for (std::size_t i = 0; i < burn_in + n; ++i) {
    const Real xl = x * spring_k / draw(law, rng);
    if (i >= burn_in) v.push_back(std::log(1.0 + even + xl));
    const Real odd = xl / (1.0 + even);
    even = xl / (1.0 + odd);
  }
  return blocked(v);
}

Estimate idos_node_fraction(const DisorderLaw& law, Real spring_k, Real omega_sq, std::size_t n_steps,
                            Seed seed, std::size_t burn_in) {
  if (!(omega_sq >= 0.0)) throw ParameterError("idos_node_fraction: omega_sq must be >= 0");
  const auto s = mc_stationary(RatioTypeII{omega_sq, spring_k}, law, n_steps, burn_in, seed);
  std::vector<Real> v(s.samples.size());
  for (Eigen::Index i = 0; i < s.samples.size(); ++i) v[i] = s.samples[i] < 0.0 ? 1.0 : 0.0;
  return blocked(v);
}

Eigen::Index node_count(const ChainRealization& r, Real omega_sq) {
  if (r.spec.kind != ChainKind::TypeII) throw ParameterError("node_count: TypeII chains only");
  const Real k = r.spec.spring_k;
  const auto n = r.n();
  const Real floor = std::numeric_limits<Real>::min() * std::max(1.0, k * k);
  Eigen::Index negatives = 0;
  Real z = 1.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    const Real left = j > 0 ? k : 0.0;
    const Real right = j + 1 < n ? k : 0.0;
    z = (left + right - omega_sq * r.masses[j]) - (j > 0 ? left * left / z : 0.0);
    if (std::abs(z) <= floor) z = floor;
    if (z < 0.0) ++negatives;
  }
  return negatives;
}

DensityGrid make_xi_grid(Real lo, Real hi, Eigen::Index n) {
  if (!(lo > 0.0 && hi > lo) || n < 3) throw GridError("make_xi_grid: need 0 < lo < hi, n >= 3");
  DensityGrid g;
  g.kind = DensityGrid::Kind::LogXi;
  const Real a = std::log(lo), b = std::log(hi);
  g.step = (b - a) / static_cast<Real>(n - 1);
  g.points.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) g.points[i] = std::exp(a + g.step * static_cast<Real>(i));
  g.weights = RealVector::Zero(n);
  return g;
}

DensityGrid make_ratio_grid(Eigen::Index n) {
  if (n < 8) throw GridError("make_ratio_grid: need n >= 8");
  DensityGrid g;
  g.kind = DensityGrid::Kind::Angle;
  g.step = kPi / static_cast<Real>(n);
  g.points.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    g.points[i] = std::tan(-0.5 * kPi + g.step * (static_cast<Real>(i) + 0.5));
  }
  g.weights = RealVector::Zero(n);
  return g;
}

void fill_from_density(DensityGrid& g, const std::function<Real(Real)>& density) {
  for (Eigen::Index i = 0; i < g.points.size(); ++i) {
    const Real p = g.points[i];
    switch (g.kind) {
      case DensityGrid::Kind::LogXi: g.weights[i] = density(p) * p * g.step; break;
      case DensityGrid::Kind::Angle: g.weights[i] = density(p) * (1.0 + p * p) * g.step; break;
      case DensityGrid::Kind::Plain: throw GridError("fill_from_density: plain grids carry no step");
    }
  }
  g.refresh_mass();
}

void write_csv(const DensityGrid& g, std::ostream& out) {
  out << "point,weight\n";
  char buf[64];
  for (Eigen::Index i = 0; i < g.points.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", g.points[i], g.weights[i]);
    out << buf;
  }
}

RealVector density_values(const DensityGrid& g) {
  RealVector out(g.points.size());
  for (Eigen::Index i = 0; i < g.points.size(); ++i) {
    const Real p = g.points[i];
    switch (g.kind) {
      case DensityGrid::Kind::LogXi: out[i] = g.weights[i] / (g.step * p); break;
      case DensityGrid::Kind::Angle: out[i] = g.weights[i] / (g.step * (1.0 + p * p)); break;
      case DensityGrid::Kind::Plain: {
        if (g.edges.size() != g.points.size() + 1) throw GridError("density_values: plain grid without edges");
        out[i] = g.weights[i] / (g.edges[i + 1] - g.edges[i]);
      }
    }
  }
  return out;
}

namespace {

RealVector xi_step(const XiTypeI& k, const DisorderLaw& law, const DensityGrid& g) {
  const Eigen::Index n = g.points.size();
  const Real s0 = std::log(g.points[0]);
  RealVector phi_new = RealVector::Zero(n);
  if (is_atomic(law)) {
    const RealVector phi = g.weights / g.step;
    for (const auto& [lam, prob] : atoms(law)) {
      const Real top = k.x * lam;
      for (Eigen::Index i = 0; i < n; ++i) {
        const Real t = g.points[i];
        if (t >= top) continue;
        const Real xi = top / t - 1.0;
        const Real pos = (std::log(xi) - s0) / g.step;
        phi_new[i] += prob * cubic(phi, pos, false) * top / (top - t);
      }
    }
  } else {
    const auto* gl = std::get_if<GammaLaw>(&law);
    if (!gl) throw ParameterError("density_iteration: unsupported law for the xi map");
    const Real lognorm = gl->alpha * std::log(gl->rate) - specfun::log_gamma(gl->alpha);
    for (Eigen::Index i = 0; i < n; ++i) {
      const Real t = g.points[i];
      Real acc = 0.0;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (g.weights[j] == 0.0) continue;
        const Real scale = (1.0 + g.points[j]) / k.x;
        const Real lam = t * scale;
        acc += g.weights[j] * std::exp(lognorm + (gl->alpha - 1.0) * std::log(lam) - gl->rate * lam) * scale;
      }
      phi_new[i] = t * acc;
    }
  }
  return phi_new * g.step;
}

RealVector ratio_step(const RatioTypeII& k, const DisorderLaw& law, const DensityGrid& g) {
  if (!is_atomic(law)) throw ParameterError("density_iteration: ratio map needs an atomic mass law");
  const Eigen::Index n = g.points.size();
  const RealVector psi = g.weights / g.step;
  RealVector psi_new = RealVector::Zero(n);
  for (const auto& [mass, prob] : atoms(law)) {
    const Real a = 2.0 - k.omega_sq * mass / k.spring_k;
    for (Eigen::Index i = 0; i < n; ++i) {
      const Real u = g.points[i];
      // Preimage angle: cot(phi) = a - u.
      const Real phi = std::atan2(1.0, a - u);
      const Real wrapped = phi > 0.5 * kPi ? phi - kPi : phi;
      const Real pos = (wrapped + 0.5 * kPi) / g.step - 0.5;
      const Real jac = (1.0 + u * u) / (1.0 + (a - u) * (a - u));
      psi_new[i] += prob * cubic(psi, pos, true) * jac;
    }
  }
  return psi_new * g.step;
}

}  // namespace

IterationResult density_iteration(const RecursionKind& kind, const DisorderLaw& law,
                                  const DensityGrid& grid, int n_iter) {
  require_positive_law(law);
  if (n_iter < 1) throw ParameterError("density_iteration: n_iter must be >= 1");
  IterationResult res;
  res.grid = grid;
  for (int it = 0; it < n_iter; ++it) {
    const Real before = res.grid.weights.sum();
    RealVector next;
    if (const auto* xk = std::get_if<XiTypeI>(&kind)) {
      if (grid.kind != DensityGrid::Kind::LogXi) throw GridError("xi map needs a log grid");
      next = xi_step(*xk, law, res.grid);
    } else if (const auto* rk = std::get_if<RatioTypeII>(&kind)) {
      if (grid.kind != DensityGrid::Kind::Angle) throw GridError("ratio map needs an angle grid");
      next = ratio_step(*rk, law, res.grid);
    } else {
      throw ParameterError("density_iteration: no integral map for the antisymmetric ratio");
    }
    res.leaked = (before - next.sum()) / before;
    res.residual = (next - res.grid.weights).cwiseAbs().sum();
    res.grid.weights = next;
    res.grid.refresh_mass();
    if (std::abs(res.leaked) > 0.01) {
      throw GridError("density_iteration: " + std::to_string(100.0 * res.leaked) +
                      "% of the mass left the grid at step " + std::to_string(it + 1));
    }
  }
  return res;
}

namespace {
class KummerSampler {
 public:
  KummerSampler(Real a, Real b, Real p) : a_(a), b_(b), p_(p) {
    if (!(a > 0.0) || !(p > 0.0) || a + b < 0.0) throw ParameterError("Kummer law needs a, p > 0, a + b >= 0");
  }
  Real operator()(Rng& rng) {
    for (;;) {
      ++proposed_;
      const Real x = specfun::draw_gamma(rng, a_, p_);
      if (std::log(rng.uniform()) < -(a_ + b_) * std::log1p(x)) {
        ++accepted_;
        return x;
      }
      if (proposed_ > 10000 && acceptance() < 0.01) {
        throw ParameterError("Kummer envelope acceptance below 1%");
      }
    }
  }
  Real acceptance() const { return static_cast<Real>(accepted_) / static_cast<Real>(proposed_); }

 private:
  Real a_, b_, p_;
  std::size_t proposed_ = 0, accepted_ = 0;
};
}  // namespace

Real draw_kummer(Rng& rng, Real a, Real b, Real p) { return KummerSampler(a, b, p)(rng); }

stats::KsResult letac_check(Real alpha, Real beta, Real p, std::size_t n, Seed seed) {
  if (!(alpha > 0.0) || !(alpha + beta > 0.0) || !(p > 0.0)) {
    throw ParameterError("letac_check: needs alpha > 0, alpha + beta > 0, p > 0");
  }
  Rng rng_a(derive_seed(seed, 0)), rng_b(derive_seed(seed, 1));
  KummerSampler y_law(alpha + beta, -beta, p), direct(alpha, beta, p);
  std::vector<Real> lhs(n), rhs(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Real x = specfun::draw_gamma(rng_a, alpha, p);
    lhs[i] = x / (1.0 + y_law(rng_a));
    rhs[i] = direct(rng_b);
  }
  return stats::ks_two_sample(std::move(lhs), std::move(rhs));
}

}  // namespace dyson::schmidt
