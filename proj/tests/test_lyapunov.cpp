#include <cmath>

#include "doctest.h"
#include "dyson/lyapunov.hpp"
#include "dyson/specfun.hpp"

using namespace dyson;
using namespace dyson::lyapunov;

namespace {
const ChainSpec kPure{ChainKind::TypeII, 1, Constant{1.0}, 1.0, 0};
const ChainSpec kDiatomic{ChainKind::TypeII, 1, TwoPoint{1.0, 2.0, 0.5}, 1.0, 0};
}  // namespace

TEST_CASE("pure chain exponents") {
  const auto rot = transfer_lyapunov(kPure, 2.0, 100000, 1);
  CHECK(std::abs(rot.gamma) < 1e-10);
  const auto out = transfer_lyapunov(kPure, 6.0, 10000000, 1);
  CHECK(out.gamma == doctest::Approx(std::log(2.0 + std::sqrt(3.0))).epsilon(1e-6));
  CHECK(out.steps == 10000000);
  CHECK(out.stderr_ >= 0.0);
  CHECK_THROWS_AS(transfer_lyapunov(kPure, 1.0, 10, 1), ParameterError);
}

TEST_CASE("renormalisation interval does not matter") {
  const auto a = transfer_lyapunov(kDiatomic, 1.3, 200000, 4, {1, 50});
  const auto b = transfer_lyapunov(kDiatomic, 1.3, 200000, 4, {2, 50});
  CHECK(std::abs(a.gamma - b.gamma) < 1e-12);
  CHECK(b.resets < a.resets);
}

TEST_CASE("exponents are non-negative") {
  for (double w2 : {0.2, 1.0, 2.5, 3.5}) {
    const auto e = transfer_lyapunov(kDiatomic, w2, 100000, 7);
    CHECK(e.gamma >= -2.0 * e.stderr_);
  }
  const ChainSpec gi{ChainKind::TypeI, 1, GammaLaw{1.0, 1.0}, 1.0, 0};
  const auto e = transfer_lyapunov(gi, 1.0, 100000, 7);
  CHECK(e.gamma >= -2.0 * e.stderr_);
}

TEST_CASE("transfer matches the direct recursion of one realization") {
  const std::size_t n = 1000000;
  const auto e = transfer_lyapunov(kDiatomic, 1.0, n, 21);
  ChainSpec s = kDiatomic;
  s.n_masses = static_cast<Eigen::Index>(n);
  s.seed = 21;
  const double direct = log_abs_u(realize(s), 1.0) / static_cast<double>(n);
  CHECK(std::abs(e.gamma - direct) < 2.0 * e.stderr_);
}

TEST_CASE("finite product identity") {
  for (Seed seed : {1u, 2u}) {
    ChainSpec s = kDiatomic;
    s.n_masses = 2000;
    s.seed = seed;
    const auto r = realize(s);
    for (double w2 : {0.5, 1.0, 3.0}) {
      const auto id = finite_identity(r, w2);
      CHECK(std::abs(id.from_recursion - id.from_spectrum) < 1e-9);
    }
  }
  ChainSpec s = kPure;
  s.n_masses = 5;
  const auto id = finite_identity(realize(s), 1.0);
  // 1 = 2 - 2 cos(pi/3) is a fixed-wall eigenvalue of five unit masses.
  CHECK(std::isinf(log_abs_u(realize(s), 1.0)));
  CHECK(id.from_spectrum < -3.0);
}

TEST_CASE("spectral grid") {
  ChainSpec s = kDiatomic;
  s.n_masses = 500;
  const auto m = squared_frequency_matrix(realize(s));
  const auto g = spectral_grid(m, -1e-9, 4.5, 300);
  CHECK(g.total_mass == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(g.edges.size() == 301);
  CHECK_THROWS_AS(spectral_grid(m, 0.5, 4.5, 10), RangeError);
  CHECK_THROWS_AS(spectral_grid(m, -1e-9, 1.0, 10), RangeError);
}

TEST_CASE("log potential of a single cell") {
  schmidt::DensityGrid g;
  g.edges = RealVector::LinSpaced(2, 0.0, 2.0);
  g.weights = RealVector::Constant(1, 1.0);
  g.points = RealVector::Constant(1, 1.0);
  // (1/2) int_0^2 log|1 - mu| dmu = -1
  CHECK(log_potential(g, 1.0) == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(log_potential(g, 0.0) == doctest::Approx(std::log(2.0) - 1.0).epsilon(1e-14));
}

TEST_CASE("Thouless formula") {
  SUBCASE("pure chain inside the band") {
    ChainSpec s = kPure;
    s.n_masses = 20000;
    const auto g = spectral_grid(squared_frequency_matrix(realize(s)), -1e-9, 4.0, 4000);
    for (double w2 : {0.5, 2.0, 3.3}) CHECK(std::abs(thouless_gamma(g, w2, Constant{1.0}, 1.0)) < 1e-3);
    CHECK(thouless_gamma(g, 6.0, Constant{1.0}, 1.0) ==
          doctest::Approx(std::log(2.0 + std::sqrt(3.0))).epsilon(1e-3));
  }
  SUBCASE("diatomic chain against transfer products") {
    std::vector<double> per_chain[2];
    const double probes[2] = {0.5, 3.0};
    for (Seed seed = 0; seed < 10; ++seed) {
      ChainSpec s = kDiatomic;
      s.n_masses = 10000;
      s.seed = 500 + seed;
      const auto g = spectral_grid(squared_frequency_matrix(realize(s)), -1e-9, 4.2, 1500);
      for (int k = 0; k < 2; ++k) per_chain[k].push_back(thouless_gamma(g, probes[k], s.law, 1.0));
    }
    for (int k = 0; k < 2; ++k) {
      const auto th = block_stats(per_chain[k]);
      const auto tr = transfer_lyapunov(kDiatomic, probes[k], 1000000, 31);
      const double se = std::hypot(th.stderr_, tr.stderr_);
      CHECK_MESSAGE(std::abs(th.mean - tr.gamma) < 3.0 * se, th.mean, " ", tr.gamma, " ", se);
    }
  }
  SUBCASE("TypeI per-site form") {
    const GammaLaw law{2.0, 1.0};
    std::vector<double> per_chain;
    for (Seed seed = 0; seed < 10; ++seed) {
      const ChainSpec s{ChainKind::TypeI, 5000, law, 1.0, 900 + seed};
      const auto m = squared_frequency_matrix(realize(s));
      const auto [lo, hi] = gershgorin(m);
      per_chain.push_back(thouless_gamma_type1(spectral_grid(m, std::min(lo, 0.0) - 1e-9, hi, 1500), 1.0, law));
    }
    const auto th = block_stats(per_chain);
    const auto tr = transfer_lyapunov({ChainKind::TypeI, 1, law, 1.0, 0}, 1.0, 1000000, 3);
    const double se = std::hypot(th.stderr_, tr.stderr_);
    CHECK_MESSAGE(std::abs(th.mean - tr.gamma) < 3.0 * se + 1e-3, th.mean, " ", tr.gamma, " ", se);
  }
}

TEST_CASE("shifted characteristic function") {
  const TwoPoint law{1.0, 2.0, 0.5};
  for (double z : {0.5, 1.0, 2.0}) {
    const auto lhs = omega_shifted(law, 1.0, -1.0 / z, 400000, 11);
    const auto rhs = schmidt::omega_type2_mc(law, 1.0, z, 400000, 12);
    CHECK(lhs.value.imag() == 0.0);
    const double se = std::hypot(lhs.stderr_re, rhs.stderr_);
    CHECK(std::abs(lhs.value.real() - (rhs.value - std::log(z))) < 3.0 * se);
  }
  const auto in_band = omega_shifted(law, 1.0, 1.0, 200000, 13);
  CHECK(in_band.value.imag() > 0.0);
  CHECK(in_band.value.imag() < kPi);
}

TEST_CASE("band edge collapse, short runs") {
  const double alpha = 64.0;
  const double s = std::cbrt(2.0 * alpha);
  const auto rep = band_edge_collapse(alpha, {2.0, 2.0 + 4.0 / (s * s)}, 2000000, 5);
  REQUIRE(rep.points.size() == 2);
  CHECK(rep.points[0].scaled_x == doctest::Approx(0.0));
  CHECK(rep.points[1].scaled_x == doctest::Approx(4.0));
  CHECK_MESSAGE(rep.points[0].rel_dev < 0.15, rep.points[0].scaled_gamma, " ", rep.points[0].target);
  CHECK_MESSAGE(rep.points[1].rel_dev < 0.15, rep.points[1].scaled_gamma, " ", rep.points[1].target);

  const auto mid = transfer_lyapunov({ChainKind::Anderson, 1, GaussianPotential{1.0 / alpha}, 1.0, 0}, 0.0,
                                     2000000, 6);
  CHECK_MESSAGE(std::abs(mid.gamma * 8.0 * alpha - 1.0) < 0.15, mid.gamma * 8.0 * alpha);
}

TEST_CASE("zero mode grows like the square root of the length") {
  const GammaLaw law{1.0, 1.0};
  const auto zero = growth_profile(law, 0.0, {2000, 8000}, 400, 3);
  const double r0 = (zero.sd[1] / std::sqrt(8000.0)) / (zero.sd[0] / std::sqrt(2000.0));
  CHECK_MESSAGE(std::abs(r0 - 1.0) < 0.15, r0);
  const double drift0 = std::abs(zero.mean[1]) / 8000.0;
  CHECK(drift0 < 0.01);

  const auto band = growth_profile(law, 0.25, {2000, 8000}, 400, 4);
  const double r1 = (band.mean[1] / 8000.0) / (band.mean[0] / 2000.0);
  CHECK_MESSAGE(std::abs(r1 - 1.0) < 0.1, r1);
  CHECK(band.mean[1] > 0.0);
}
