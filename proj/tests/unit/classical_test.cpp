// Copyright 2026 The embrmt Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "embrmt/classical.hpp"
#include "embrmt/eigensolve.hpp"
#include "embrmt/errors.hpp"
#include "embrmt/unfolding.hpp"

using namespace embrmt;

namespace {

double rayleigh_unit_mean_cdf(double s) { return 1.0 - std::exp(-std::numbers::pi * s * s / 4.0); }

}  // namespace

TEST_SUITE("classical") {

TEST_CASE("spec validation") {
  CHECK_THROWS_AS(ClassicalEnsembleSpec({3, 4, 1.0}).validate(), SpecError);
  CHECK_THROWS_AS(ClassicalEnsembleSpec({1, 0, 1.0}).validate(), SpecError);
  CHECK_THROWS_AS(ClassicalEnsembleSpec({1, 4, 0.0}).validate(), SpecError);
  RandomStream rng(1, 0);
  CHECK_THROWS_AS(sample_classical({3, 4, 1.0}, rng), SpecError);
  CHECK(ClassicalEnsembleSpec({4, 3, 1.0}).stored_dim() == 6);
}

TEST_CASE("class structure holds exactly") {
  RandomStream rng(2, 0);
  const auto goe = sample_classical({1, 17, 1.0}, rng);
  REQUIRE(goe.is_real());
  CHECK(goe.real() == goe.real().transpose());

  const auto gue = sample_classical({2, 17, 1.0}, rng);
  REQUIRE_FALSE(gue.is_real());
  CHECK(gue.complex() == gue.complex().adjoint());
  CHECK(gue.complex().diagonal().imag().isZero(0.0));

  const auto gse = sample_classical({4, 6, 1.0}, rng);
  REQUIRE(gse.dim() == 12);
  const ComplexMatrix& h = gse.complex();
  CHECK(h == h.adjoint());
  // Quaternion-real blocks [[a + i d, c + i b], [-c + i b, a - i d]].
  for (int i = 0; i < 6; ++i) {
    for (int j = 0; j < 6; ++j) {
      const auto q = h.block(2 * i, 2 * j, 2, 2);
      CHECK(q(0, 0) == std::conj(q(1, 1)));
      CHECK(q(0, 1) == -std::conj(q(1, 0)));
    }
  }
}

TEST_CASE("GSE spectra are Kramers degenerate") {
  RandomStream rng(3, 0);
  for (int trial = 0; trial < 20; ++trial) {
    const auto s = eigvals_symmetric(sample_classical({4, 2, 1.0}, rng));
    REQUIRE(s.size() == 4);
    for (int p = 0; p < 2; ++p) {
      const double a = s.eigenvalues[2 * p], b = s.eigenvalues[2 * p + 1];
      CHECK(std::abs(a - b) <= 1e-8 * std::max(1.0, std::abs(a)));
    }
  }
  RandomStream big(4, 0);
  const auto s = eigvals_symmetric(sample_classical({4, 40, 1.0}, big));
  double scale = 0.0;
  for (double e : s.eigenvalues) scale = std::max(scale, std::abs(e));
  for (std::size_t p = 0; p < 40; ++p) {
    CHECK(std::abs(s.eigenvalues[2 * p] - s.eigenvalues[2 * p + 1]) < 1e-8 * scale);
  }
}

TEST_CASE("n = 1 GOE element has variance 2") {
  const int members = 100000;
  double s2 = 0.0;
  for (int i = 0; i < members; ++i) {
    RandomStream rng(10, static_cast<std::uint64_t>(i));
    const double x = sample_classical({1, 1, 1.0}, rng).real()(0, 0);
    s2 += x * x;
  }
  // Var of x^2 is 2 * 2^2 = 8.
  CHECK(std::abs(s2 / members - 2.0) < 3.0 * std::sqrt(8.0 / members));
}

TEST_CASE("element variances follow (1 + delta) v2 for every class") {
  const int members = 4000;
  const double v2 = 0.7;
  for (int beta : {1, 2, 4}) {
    CAPTURE(beta);
    const int n = 3;
    const int d = beta == 4 ? 2 * n : n;
    std::vector<double> sum_re(d * d, 0.0), sum_im(d * d, 0.0);
    for (int m = 0; m < members; ++m) {
      RandomStream rng(20, static_cast<std::uint64_t>(m));
      const auto s = sample_classical({beta, n, v2}, rng);
      for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
          const Complex z = s.is_real() ? Complex(s.real()(i, j), 0.0) : s.complex()(i, j);
          sum_re[i * d + j] += z.real() * z.real();
          sum_im[i * d + j] += z.imag() * z.imag();
        }
      }
    }
    const double tol = 3.0 * std::sqrt(2.0 / members);  // relative 3 sigma
    if (beta == 1 || beta == 2) {
      for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
          const double expect_re = i == j ? 2.0 * v2 : v2;
          const double expect_im = i == j ? 0.0 : (beta == 2 ? v2 : 0.0);
          CHECK(std::abs(sum_re[i * d + j] / members / expect_re - 1.0) < tol);
          if (expect_im == 0.0) {
            CHECK(sum_im[i * d + j] == 0.0);
          } else {
            CHECK(std::abs(sum_im[i * d + j] / members / expect_im - 1.0) < tol);
          }
        }
      }
    } else {
      // Quaternion diagonal: H0_ii only, variance 2 v2 on the 2x2 identity.
      CHECK(std::abs(sum_re[0] / members / (2.0 * v2) - 1.0) < tol);
      CHECK(sum_im[0] == 0.0);
      // Off-diagonal quaternion: real part carries H0 or H2, imaginary part H1 or H3.
      CHECK(std::abs(sum_re[0 * d + 2] / members / v2 - 1.0) < tol);
      CHECK(std::abs(sum_im[0 * d + 2] / members / v2 - 1.0) < tol);
      CHECK(std::abs(sum_re[0 * d + 3] / members / v2 - 1.0) < tol);
      CHECK(std::abs(sum_im[0 * d + 3] / members / v2 - 1.0) < tol);
    }
  }
}

TEST_CASE("semicircle density and CDF") {
  const double r = 2.5;
  CHECK(semicircle_density(0.0, r) == doctest::Approx(2.0 / (std::numbers::pi * r)).epsilon(1e-15));
  CHECK(semicircle_density(r, r) == 0.0);
  CHECK(semicircle_density(-r, r) == 0.0);
  CHECK(semicircle_density(3.0 * r, r) == 0.0);
  CHECK_THROWS_AS(semicircle_density(0.0, 0.0), DomainError);
  CHECK_THROWS_AS(semicircle_cdf(0.0, -1.0), DomainError);

  // Composite Simpson on a substitution e = r sin(theta), which removes the
  // square-root edge singularity.
  const int steps = 2000;
  const double h = std::numbers::pi / steps;
  double integral = 0.0;
  for (int i = 0; i <= steps; ++i) {
    const double th = -std::numbers::pi / 2 + i * h;
    const double w = (i == 0 || i == steps) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    integral += w * semicircle_density(r * std::sin(th) * (1 - 1e-16), r) * r * std::cos(th);
  }
  CHECK(std::abs(integral * h / 3.0 - 1.0) < 1e-9);

  CHECK(semicircle_cdf(0.0, r) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(semicircle_cdf(-r, r) == 0.0);
  CHECK(semicircle_cdf(r, r) == 1.0);
  double prev = 0.0;
  for (int i = -99; i < 100; ++i) {
    const double e = r * i / 100.0;
    const double eps = 1e-5;
    const double fd = (semicircle_cdf(e + eps, r) - semicircle_cdf(e - eps, r)) / (2 * eps);
    CHECK(std::abs(fd - semicircle_density(e, r)) < 1e-6);
    CHECK(semicircle_cdf(e, r) >= prev);
    prev = semicircle_cdf(e, r);
  }
}

TEST_CASE("catalan numbers") {
  CHECK(catalan(0) == 1);
  CHECK(catalan(1) == 1);
  CHECK(catalan(2) == 2);
  CHECK(catalan(3) == 5);
  CHECK(catalan(10) == 16796);
  CHECK(catalan(35) == 3116285494907301262ULL);
  CHECK(catalan(36) == 11959798385860453492ULL);
  CHECK_THROWS_AS(catalan(37), CapacityError);
}

TEST_CASE("log_jpdf") {
  const std::vector<double> one{1.7};
  CHECK(log_jpdf(std::vector<double>{0.0}, 1) == 0.0);
  CHECK(log_jpdf(one, 2) == doctest::Approx(-0.5 * 1.7 * 1.7));
  CHECK(log_jpdf(std::vector<double>{0.3, 0.3}, 1) == -std::numeric_limits<double>::infinity());
  CHECK_THROWS_AS(log_jpdf(std::vector<double>{}, 1), DomainError);
  CHECK_THROWS_AS(log_jpdf(one, 3), SpecError);
  const std::vector<double> e{-1.0, 0.5, 2.0};
  const double expect = 4.0 * (std::log(1.5) + std::log(3.0) + std::log(1.5)) - (1.0 + 0.25 + 4.0);
  CHECK(log_jpdf(e, 4) == doctest::Approx(expect).epsilon(1e-14));
}

TEST_CASE("2x2 GOE spacing follows the jpdf marginal") {
  // The N = 2, beta = 1 jpdf |E1 - E2| exp(-(E1^2 + E2^2) / 4) has spacing
  // marginal s exp(-s^2 / 8): Rayleigh with mean 2 sqrt(pi / 2).
  const std::vector<double> a{-0.4, 1.1}, b{-1.3, 0.9};
  CHECK(log_jpdf(a, 1) - log_jpdf(b, 1) ==
        doctest::Approx(std::log(1.5 / 2.2) - (0.16 + 1.21 - 1.69 - 0.81) / 4.0));
  const int samples = 1000000;
  const double mean = 2.0 * std::sqrt(std::numbers::pi / 2.0);
  std::vector<double> s(samples);
  RandomStream rng(30, 0);
  for (int i = 0; i < samples; ++i) {
    const RealMatrix h = sample_goe(2, 1.0, rng);
    const double d = h(0, 0) - h(1, 1);
    s[i] = std::sqrt(d * d + 4.0 * h(0, 1) * h(0, 1)) / mean;
  }
  std::sort(s.begin(), s.end());
  double ks = 0.0;
  for (int i = 0; i < samples; ++i) {
    const double f = rayleigh_unit_mean_cdf(s[i]);
    ks = std::max({ks, std::abs(f - double(i) / samples), std::abs(f - double(i + 1) / samples)});
  }
  CHECK(ks < 0.01);
}

TEST_CASE("GOE moments follow the Catalan pattern") {
  const std::size_t n = 252, members = 100;
  const double v2 = 1.0;
  std::vector<double> m2(members), m4(members);
  for (std::size_t k = 0; k < members; ++k) {
    RandomStream rng(40, k);
    const auto s = eigvals_symmetric(sample_goe(n, v2, rng));
    double a = 0, b = 0;
    for (double e : s.eigenvalues) {
      a += e * e;
      b += e * e * e * e;
    }
    m2[k] = a / n;
    m4[k] = b / n;
  }
  const auto mean_se = [](const std::vector<double>& x) {
    double mu = 0, v = 0;
    for (double t : x) mu += t;
    mu /= x.size();
    for (double t : x) v += (t - mu) * (t - mu);
    return std::pair{mu, std::sqrt(v / (x.size() - 1) / x.size())};
  };
  const double r = goe_semicircle_radius(n, v2);
  const auto [mu2, se2] = mean_se(m2);
  CHECK(std::abs(mu2 - std::pow(r / 2, 2) * catalan(1)) < 3.0 * se2);
  // Exact finite-n value (2 n^2 + 5 n + 5) v2^2 differs from the
  // semicircle's (R/2)^4 C_2 = 2 (n + 1)^2 v2^2 by (n + 3) v2^2.
  const auto [mu4, se4] = mean_se(m4);
  const double exact4 = (2.0 * n * n + 5.0 * n + 5.0) * v2 * v2;
  CHECK(std::abs(mu4 - exact4) < 3.0 * se4);
  CHECK(std::abs(mu4 / (std::pow(r / 2, 4) * catalan(2)) - 1.0) < 0.01);
}

TEST_CASE("uniform deviates give the same semicircle") {
  const std::size_t n = 252, members = 100;
  std::vector<double> pooled;
  for (std::size_t k = 0; k < members; ++k) {
    RandomStream rng(50, k);
    const auto s = eigvals_symmetric(sample_classical({1, n, 1.0, Deviate::kUniform}, rng));
    for (double e : s.eigenvalues) pooled.push_back(e / std::sqrt(double(n)));
  }
  const auto h = histogram(pooled, 40, -2.5, 2.5, double(pooled.size()));
  const double r = fit_semicircle_radius(h, 1.0, 3.0);
  CHECK(r == doctest::Approx(2.0).epsilon(0.02));
  const double dev = max_interior_deviation(
      h, [r](double e) { return semicircle_density(e, r); }, -0.9 * r, 0.9 * r);
  CHECK(dev <= 0.05);
}

}
