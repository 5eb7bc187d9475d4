#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "dyson/quadrature.hpp"
#include "dyson/specfun.hpp"

using namespace dyson;
using namespace dyson::specfun;

namespace {

// Exponential integral Ei(x), x > 0, by its power series.
double ei_series(double x) {
  double term = 1.0, sum = 0.0;
  for (int k = 1; k < 400; ++k) {
    term *= x / k;
    sum += term / k;
    if (term / k < 1e-17 * std::abs(sum)) break;
  }
  return kEulerGamma + std::log(x) + sum;
}

// Ai(x) for large positive x from the asymptotic series, written independently
// of the library with coefficients from Gamma ratios.
double ai_asymptotic(double x) {
  const double zeta = 2.0 / 3.0 * std::pow(x, 1.5);
  double sum = 0.0;
  for (int k = 0; k < 8; ++k) {
    const double uk = std::tgamma(3 * k + 0.5) /
                      (std::pow(54.0, k) * std::tgamma(k + 1.0) * std::tgamma(k + 0.5));
    sum += (k % 2 ? -1.0 : 1.0) * uk / std::pow(zeta, k);
  }
  return std::exp(-zeta) / (2.0 * std::sqrt(kPi) * std::pow(x, 0.25)) * sum;
}

}  // namespace

TEST_CASE("log_gamma and digamma against the C library") {
  for (double x : {0.01, 0.3, 0.5, 1.0, 1.0 / 3.0, 2.5, 7.0, 40.0, 170.0}) {
    CHECK(log_gamma(x) == doctest::Approx(std::lgamma(x)).epsilon(1e-13));
  }
  CHECK(digamma(1.0) == doctest::Approx(-kEulerGamma).epsilon(1e-13));
  // psi(x+1) - psi(x) = 1/x
  for (double x : {0.2, 1.7, 9.3}) {
    CHECK(digamma(x + 1.0) - digamma(x) == doctest::Approx(1.0 / x).epsilon(1e-12));
  }
  CHECK_THROWS_AS(log_gamma(0.0), RangeError);
}

TEST_CASE("Airy values at the origin and asymptotically") {
  const auto p = airy(0.0);
  CHECK(p.ai == doctest::Approx(std::pow(3.0, -2.0 / 3.0) / std::tgamma(2.0 / 3.0)).epsilon(1e-14));
  CHECK(p.ai == doctest::Approx(0.3550280539).epsilon(1e-9));
  CHECK(p.ai_prime == doctest::Approx(-std::pow(3.0, -1.0 / 3.0) / std::tgamma(1.0 / 3.0)).epsilon(1e-14));
  CHECK(p.bi == doctest::Approx(std::sqrt(3.0) * p.ai).epsilon(1e-14));

  CHECK(airy(5.0).ai == doctest::Approx(ai_asymptotic(5.0)).epsilon(1e-4));
  CHECK(airy(12.0).ai == doctest::Approx(ai_asymptotic(12.0)).epsilon(1e-9));
  // Tabulated reference values.
  CHECK(airy(5.0).ai == doctest::Approx(1.0834442813607441e-4).epsilon(1e-11));
  CHECK(airy(-5.0).ai == doctest::Approx(0.3507610090241142).epsilon(1e-11));
  CHECK(airy(2.0).bi == doctest::Approx(3.2980949999782147).epsilon(1e-12));
  CHECK(airy(-7.0).bi == doctest::Approx(0.293762071854414).epsilon(1e-10));
}

TEST_CASE("Airy Wronskian over the supported range") {
  Rng rng(17);
  for (int i = 0; i < 1000; ++i) {
    const double x = -50.0 + 100.0 * rng.uniform();
    const auto p = airy(x);
    CHECK(std::abs(p.wronskian() * kPi - 1.0) < 1e-10);
  }
  for (double x : {-9.0, -4.5, 4.5, 9.0, -8.999, 8.999, 4.5001}) {
    CHECK(std::abs(airy(x).wronskian() * kPi - 1.0) < 1e-10);
  }
  CHECK_THROWS_AS(airy(50.5), RangeError);
}

TEST_CASE("Airy functions are continuous across the method boundaries") {
  for (double edge : {-9.0, -4.5, 4.5, 9.0}) {
    const auto a = airy(std::nextafter(edge, -100.0));
    const auto b = airy(std::nextafter(edge, 100.0));
    CHECK(a.ai == doctest::Approx(b.ai).epsilon(1e-11));
    CHECK(a.bi == doctest::Approx(b.bi).epsilon(1e-11));
    CHECK(a.ai_prime == doctest::Approx(b.ai_prime).epsilon(1e-11));
  }
}

TEST_CASE("scaling functions and their rotated-argument forms") {
  const auto p0 = airy(0.0);
  CHECK(scaling_f(0.0) == doctest::Approx((p0.ai * p0.ai_prime + p0.bi * p0.bi_prime) /
                                          (p0.ai * p0.ai + p0.bi * p0.bi)));
  CHECK(scaling_dos(0.0) == doctest::Approx(1.0 / (kPi * (p0.ai * p0.ai + p0.bi * p0.bi))));
  const double r10 = scaling_f(10.0) / std::sqrt(10.0);
  CHECK(r10 >= 0.95);
  CHECK(r10 <= 1.05);
  for (int i = 0; i <= 60; ++i) {
    const double x = -6.0 + 0.2 * i;
    CHECK(std::abs(scaling_f(x) - scaling_f_rotated(x)) < 1e-8);
    CHECK(std::abs(scaling_dos(x) - scaling_dos_rotated(x)) < 1e-8);
  }
  CHECK(std::abs(scaling_dos(1.0) - scaling_dos_rotated(1.0)) < 1e-8);
  const double x = 9.0;
  const double tail = std::sqrt(x) * std::exp(-4.0 / 3.0 * std::pow(x, 1.5));
  CHECK(scaling_dos(x) / tail > 1.0 / 1.1);
  CHECK(scaling_dos(x) / tail < 1.1);
  CHECK_THROWS_AS(scaling_f(31.0), RangeError);
}

TEST_CASE("Whittaker modulus matches the c = 1 closed form") {
  for (double mu : {1e-3, 0.1, 1.0, 3.0, 10.0, 40.0}) {
    const double ei = ei_series(mu);
    const double expect = mu * std::exp(-mu) * (ei * ei + kPi * kPi);
    CHECK(whittaker_msq(1.0, mu) == doctest::Approx(expect).epsilon(1e-7));
  }
  CHECK_THROWS_AS(whittaker_msq(1.0, 200.0), RangeError);
  CHECK_THROWS_AS(whittaker_msq(-1.0, 1.0), RangeError);
}

TEST_CASE("Whittaker small-argument law") {
  for (double c : {0.5, 2.0}) {
    const double mu = 1e-6;
    const double lead = std::log(mu) + digamma(c) + 2.0 * kEulerGamma;
    const double g = specfun::gamma(c);
    const double expect = mu / (g * g) * (lead * lead + kPi * kPi);
    CHECK(whittaker_msq(c, mu) == doctest::Approx(expect).epsilon(1e-3));
  }
  for (double c : {0.5, 1.0, 2.0}) {
    for (double mu : {1e-4, 0.5, 5.0, 60.0}) CHECK(whittaker_msq(c, mu) > 0.0);
  }
}

TEST_CASE("gamma sampler") {
  SUBCASE("determinism") {
    CHECK(sample_gamma(0.7, 2.0, 99, 100) == sample_gamma(0.7, 2.0, 99, 100));
  }
  SUBCASE("mean") {
    const auto s = sample_gamma(2.0, 1.0, 1, 1000000);
    const double sigma = std::sqrt(2.0 / 1e6);
    CHECK(std::abs(s.mean() - 2.0) < 3.0 * sigma);
  }
  SUBCASE("KS against closed-form CDFs") {
    struct Case {
      double alpha;
      double (*cdf)(double);
    };
    const Case cases[] = {
        {0.5, [](double x) { return std::erf(std::sqrt(x)); }},
        {1.0, [](double x) { return 1.0 - std::exp(-x); }},
        {2.0, [](double x) { return 1.0 - std::exp(-x) * (1.0 + x); }},
    };
    for (const auto& c : cases) {
      auto s = sample_gamma(c.alpha, 1.0, 5, 1000000);
      std::vector<double> v(s.begin(), s.end());
      std::sort(v.begin(), v.end());
      double d = 0.0;
      const double n = static_cast<double>(v.size());
      for (std::size_t i = 0; i < v.size(); ++i) {
        const double f = c.cdf(v[i]);
        d = std::max({d, std::abs(f - i / n), std::abs(f - (i + 1) / n)});
      }
      CHECK(d < 0.002);
    }
  }
}

TEST_CASE("Whittaker modulus is continuous across the series limit") {
  for (double c : {0.5, 1.0, 3.7}) {
    const double lo = whittaker_msq(c, kWhittakerSeriesLimit);
    const double hi = whittaker_msq(c, std::nextafter(kWhittakerSeriesLimit, 10.0));
    CHECK(std::abs(hi / lo - 1.0) < 1e-8);
  }
  CHECK(whittaker_msq(2.0, 1.0) == doctest::Approx(std::exp(1.0)).epsilon(1e-13));
  CHECK(std::isfinite(whittaker_msq(1.0, 1e-14)));
}
