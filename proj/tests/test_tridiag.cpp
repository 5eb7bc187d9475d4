#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "doctest.h"
#include "dyson/tridiag.hpp"

using namespace dyson;

namespace {

SymTridiag<double> random_sym(Eigen::Index n, Seed seed) {
  Rng rng(seed);
  Vec<double> d(n), e(n - 1);
  for (auto& v : d) v = rng.normal();
  for (auto& v : e) v = rng.normal();
  return {d, e};
}

Eigen::VectorXd dense_eigs(const SymTridiag<double>& t) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t.dense(), Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

}  // namespace

TEST_CASE("count_below on small hand-solved matrices") {
  const SymTridiag<double> two(Vec<double>::Zero(2), Vec<double>::Constant(1, 0.7));
  CHECK(count_below(two, 0.0) == 1);
  const SymTridiag<double> three(Vec<double>::Zero(3), Vec<double>::Ones(2));
  CHECK(count_below(three, -1.0) == 1);
  CHECK(count_below(three, -1.5) == 0);
  CHECK(count_below(three, 0.0) == 1);
  CHECK(count_below(three, 1e-300) == 2);
  CHECK(count_below(three, 2.0) == 3);
}

TEST_CASE("count_below is monotone and matches dense eigenvalues") {
  const auto t = random_sym(50, 3);
  const auto ev = dense_eigs(t);
  Rng rng(4);
  for (int trial = 0; trial < 100; ++trial) {
    double a = -6 + 12 * rng.uniform(), b = -6 + 12 * rng.uniform();
    if (a > b) std::swap(a, b);
    const auto inside = std::count_if(ev.begin(), ev.end(), [&](double v) { return v >= a && v < b; });
    CHECK(count_below(t, b) - count_below(t, a) == inside);
  }
  Eigen::Index prev = 0;
  for (int i = 0; i <= 400; ++i) {
    const auto c = count_below(t, -8.0 + 0.04 * i);
    CHECK(c >= prev);
    prev = c;
  }
  CHECK(prev == 50);
}

TEST_CASE("count_below survives huge sizes and scales without overflow") {
  const Eigen::Index n = 200001;
  SymTridiag<double> t(Vec<double>::Zero(n), Vec<double>::Constant(n - 1, 1e150));
  CHECK(count_below(t, -1e140) == (n - 1) / 2);
  CHECK(count_below(t, 1e140) == (n + 1) / 2);
  SymTridiag<double> s(Vec<double>::Zero(n), Vec<double>::Constant(n - 1, 1e-150));
  CHECK(count_below(s, -1e-160) == (n - 1) / 2);
  CHECK(count_below(s, 1e-160) == (n + 1) / 2);
}

TEST_CASE("bisection eigenvalues") {
  const SymTridiag<double> three(Vec<double>::Zero(3), Vec<double>::Ones(2));
  const auto sp = eigenvalues(three, 1e-13);
  CHECK(sp.values[0] == doctest::Approx(-std::sqrt(2.0)).epsilon(1e-12));
  CHECK(std::abs(sp.values[1]) < 1e-12);
  CHECK(sp.values[2] == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));

  Tridiag<double> a{Vec<double>::Constant(2, -1.0), Vec<double>::Ones(1), Vec<double>::Ones(1)};
  const auto sa = eigenvalues(a.symmetrized(), 1e-13);
  CHECK(sa.values[0] == doctest::Approx(-2.0).epsilon(1e-12));
  CHECK(std::abs(sa.values[1]) < 1e-12);

  const auto t = random_sym(500, 9);
  const auto sp500 = eigenvalues(t);
  const auto ev = dense_eigs(t);
  CHECK((sp500.values - ev).cwiseAbs().maxCoeff() < 1e-9);
  for (int k = 0; k < 500; k += 25) {
    const double probe = 0.5 * (sp500.values[k] + (k ? sp500.values[k - 1] : sp500.values[k] - 1.0));
    CHECK(count_below(t, probe) == k);
  }
  for (Eigen::Index i = 1; i < 500; ++i) CHECK(sp500.values[i] >= sp500.values[i - 1] - sp500.tol);
}

TEST_CASE("odd-site block gives the squared positive spectrum") {
  const SymTridiag<double> three(Vec<double>::Zero(3), Vec<double>::Constant(2, 1.5));
  const auto y = squared_positive_spectrum(three);
  REQUIRE(y.values.size() == 1);
  CHECK(y.values[0] == doctest::Approx(2 * 1.5 * 1.5));

  Rng rng(2);
  Vec<double> e(40);
  for (auto& v : e) v = 0.1 + rng.uniform();
  const SymTridiag<double> t(Vec<double>::Zero(41), e);
  const auto full = eigenvalues(t, 1e-14);
  const auto sq = squared_positive_spectrum(t, 1e-14);
  for (Eigen::Index k = 0; k < 20; ++k) {
    CHECK(sq.values[k] == doctest::Approx(full.values[21 + k] * full.values[21 + k]).epsilon(1e-10));
    CHECK(full.values[21 + k] == doctest::Approx(-full.values[19 - k]).epsilon(1e-10));
  }
}

TEST_CASE("characteristic polynomial ratios") {
  const SymTridiag<double> three(Vec<double>::Zero(3), Vec<double>::Ones(2));
  const auto r0 = charpoly_ratios(three, 0.0);
  CHECK(r0.prod() == 1.0);
  CHECK((r0.array() == 1.0).all());
  for (double y : {0.1, 0.3, 0.6}) {
    // With x = -y^2 the product is 1 + x w^2 for the single pair w^2 = 2.
    const double x = -y * y;
    CHECK(charpoly_ratios(three, y).prod() == doctest::Approx(1.0 + 2.0 * x).epsilon(1e-14));
  }
  const auto t = random_sym(30, 11);
  for (double y : {0.05, 0.13, -0.2}) {
    const auto r = charpoly_ratios(t, y);
    const double direct = (Eigen::MatrixXd::Identity(30, 30) - y * t.dense()).determinant();
    CHECK(std::abs(r.prod() - direct) / std::abs(direct) < 1e-8);
    CHECK(std::abs(det_identity_minus(t, y) - direct) / std::abs(direct) < 1e-8);
  }
}

TEST_CASE("eigenvalue hits are reported and retried") {
  // Leading 1x1 minor of diag(2) vanishes at y = 1/2.
  const SymTridiag<double> t(Vec<double>::Constant(3, 2.0), Vec<double>::Constant(2, 0.5));
  CHECK_THROWS_AS(charpoly_ratios(t, 0.5), EigenvalueHit);
  const auto res = charpoly_ratios_retry(t, 0.5, 1e-6);
  CHECK(res.retries == 1);
  CHECK(res.y_used == doctest::Approx(0.5 + 1e-5));
}

TEST_CASE("trace-log identity") {
  const AntisymTridiag<double> three(Vec<double>::Ones(2));
  auto [s0, d0] = tracelog_check(three, 0.0, 10);
  CHECK(s0 == 0.0);
  CHECK(d0 == 0.0);
  auto [s, d] = tracelog_check(three, 0.1, 40);
  CHECK(std::abs(d - std::log(1.2)) < 1e-12);
  CHECK(std::abs(s - std::log(1.2)) < 1e-10);

  Rng rng(5);
  Vec<double> u(8);
  for (auto& v : u) v = 0.2 + rng.uniform();
  const AntisymTridiag<double> nine(u);
  CHECK(nine.dense() == -nine.dense().transpose());
  const double rho = eigenvalues(nine.hermitian_form()).values.cwiseAbs().maxCoeff();
  auto [s9, d9] = tracelog_check(nine, 0.4 / (rho * rho), 60);
  CHECK(std::abs(s9 - d9) < 1e-8);
  CHECK_THROWS_AS(tracelog_check(nine, 1.1 / (rho * rho), 10), RangeError);
}

TEST_CASE("hermitian form of an antisymmetric matrix has the same spectrum as iL") {
  Rng rng(8);
  Vec<double> u(6);
  for (auto& v : u) v = 0.3 + rng.uniform();
  const AntisymTridiag<double> l(u);
  Eigen::MatrixXcd h = std::complex<double>(0, 1) * l.dense().cast<std::complex<double>>();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
  const auto sp = eigenvalues(l.hermitian_form(), 1e-14);
  CHECK((sp.values - es.eigenvalues()).cwiseAbs().maxCoeff() < 1e-10);
}
