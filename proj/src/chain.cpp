#include "dyson/chain.hpp"

#include <cstdio>

#include "dyson/specfun.hpp"

namespace dyson {

namespace {
template <class... Ts>
struct Overload : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overload(Ts...) -> Overload<Ts...>;

bool positive(Real v) { return v > 0.0 && std::isfinite(v); }
}  // namespace

void validate(const DisorderLaw& law) {
  const bool ok = std::visit(
      Overload{[](const Constant& c) { return positive(c.value); },
               [](const GammaLaw& g) { return positive(g.alpha) && positive(g.rate); },
               [](const TwoPoint& t) {
                 return positive(t.light) && positive(t.heavy) && t.p >= 0.0 && t.p <= 1.0;
               },
               [](const GaussianPotential& g) { return positive(g.variance); }},
      law);
  if (!ok) throw ParameterError("invalid disorder law: " + describe(law));
}

Real draw(const DisorderLaw& law, Rng& rng) {
  return std::visit(
      Overload{[](const Constant& c) { return c.value; },
               [&](const GammaLaw& g) { return specfun::draw_gamma(rng, g.alpha, g.rate); },
               [&](const TwoPoint& t) { return rng.uniform() < t.p ? t.light : t.heavy; },
               [&](const GaussianPotential& g) { return std::sqrt(g.variance) * rng.normal(); }},
      law);
}

Real mean(const DisorderLaw& law) {
  return std::visit(Overload{[](const Constant& c) { return c.value; },
                             [](const GammaLaw& g) { return g.alpha / g.rate; },
                             [](const TwoPoint& t) { return t.p * t.light + (1 - t.p) * t.heavy; },
                             [](const GaussianPotential&) { return 0.0; }},
                    law);
}

Real mean_log(const DisorderLaw& law) {
  return std::visit(
      Overload{[](const Constant& c) { return std::log(c.value); },
               [](const GammaLaw& g) { return specfun::digamma(g.alpha) - std::log(g.rate); },
               [](const TwoPoint& t) {
                 return t.p * std::log(t.light) + (1 - t.p) * std::log(t.heavy);
               },
               [](const GaussianPotential&) -> Real {
                 throw ParameterError("mean_log: undefined for a potential law");
               }},
      law);
}

std::string describe(const DisorderLaw& law) {
  char buf[128];
  std::visit(Overload{[&](const Constant& c) { std::snprintf(buf, sizeof buf, "constant(%g)", c.value); },
                      [&](const GammaLaw& g) {
                        std::snprintf(buf, sizeof buf, "gamma(%g,%g)", g.alpha, g.rate);
                      },
                      [&](const TwoPoint& t) {
                        std::snprintf(buf, sizeof buf, "twopoint(%g,%g,%g)", t.light, t.heavy, t.p);
                      },
                      [&](const GaussianPotential& g) {
                        std::snprintf(buf, sizeof buf, "gaussian(%g)", g.variance);
                      }},
             law);
  return buf;
}

ChainRealization realize(const ChainSpec& spec) {
  if (spec.n_masses < 1) throw ParameterError("realize: need at least one mass");
  validate(spec.law);
  if (!positive(spec.spring_k)) throw ParameterError("realize: spring constant must be positive");
  const bool potential = std::holds_alternative<GaussianPotential>(spec.law);
  if (potential != (spec.kind == ChainKind::Anderson)) {
    throw ParameterError("realize: a potential law goes with the Anderson kind only");
  }
  ChainRealization r;
  r.spec = spec;
  Rng rng(spec.seed);
  const auto n = spec.n_masses;
  switch (spec.kind) {
    case ChainKind::TypeI:
      r.lambdas.resize(2 * n - 1);
      for (auto& v : r.lambdas) v = draw(spec.law, rng);
      break;
    case ChainKind::TypeII:
      r.masses.resize(n);
      for (auto& v : r.masses) v = draw(spec.law, rng);
      r.lambdas.resize(2 * n - 1);
      for (Eigen::Index j = 0; j < n; ++j) {
        const Real l = spec.spring_k / r.masses[j];
        if (j > 0) r.lambdas[2 * j - 1] = l;
        r.lambdas[2 * j] = l;
      }
      break;
    case ChainKind::Anderson:
      r.potentials.resize(n);
      for (auto& v : r.potentials) v = draw(spec.law, rng);
      break;
  }
  return r;
}

namespace {
void require_lambdas(const ChainRealization& r) {
  if (r.spec.kind == ChainKind::Anderson) {
    throw ParameterError("Anderson realizations carry no spring ratios");
  }
}
}  // namespace

AntisymTridiag<Real> lambda_matrix(const ChainRealization& r) {
  require_lambdas(r);
  const auto m = 2 * r.n() - 2;
  return AntisymTridiag<Real>(r.lambdas.head(m).cwiseSqrt());
}

Tridiag<Real> dynamical_matrix(const ChainRealization& r) {
  require_lambdas(r);
  const auto n = r.n();
  const auto& l = r.lambdas;
  Tridiag<Real> a;
  a.diag.resize(n);
  a.upper.resize(n - 1);
  a.lower.resize(n - 1);
  for (Eigen::Index j = 0; j < n; ++j) {
    const Real left = j > 0 ? l[2 * j - 1] : 0.0;
    const Real right = j + 1 < n ? l[2 * j] : 0.0;
    a.diag[j] = -(left + right);
    if (j + 1 < n) {
      a.upper[j] = l[2 * j];
      a.lower[j] = l[2 * j + 1];
    }
  }
  return a;
}

SymTridiag<Real> squared_frequency_matrix(const ChainRealization& r) {
  const auto a = dynamical_matrix(r);
  auto s = a.symmetrized();
  s.diag = -s.diag;
  return s;
}

SymTridiag<Real> fixed_end_matrix(const ChainRealization& r) {
  if (r.spec.kind != ChainKind::TypeII) throw ParameterError("fixed_end_matrix: TypeII only");
  const auto n = r.n();
  const Real k = r.spec.spring_k;
  Vec<Real> d = (2.0 * k) * r.masses.cwiseInverse();
  Vec<Real> e(n - 1);
  for (Eigen::Index j = 0; j + 1 < n; ++j) e[j] = -k / std::sqrt(r.masses[j] * r.masses[j + 1]);
  return SymTridiag<Real>(d, e);
}

SymTridiag<Real> anderson_hopping(const ChainSpec& spec) {
  if (spec.kind != ChainKind::TypeI) throw ParameterError("anderson_hopping: needs a TypeI spec");
  return lambda_matrix(realize(spec)).hermitian_form();
}

}  // namespace dyson
