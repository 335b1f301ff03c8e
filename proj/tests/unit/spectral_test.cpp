// Copyright 2026 The embrmt Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "embrmt/classical.hpp"
#include "embrmt/eigensolve.hpp"
#include "embrmt/errors.hpp"
#include "embrmt/moments.hpp"
#include "embrmt/unfolding.hpp"

using namespace embrmt;

namespace {

// Semicircle quantiles F^{-1}((i + 1/2) / n) by bisection.
std::vector<double> semicircle_nodes(std::size_t n, double r) {
  std::vector<double> out;
  for (std::size_t i = 0; i < n; ++i) {
    const double p = (i + 0.5) / n;
    double lo = -r, hi = r;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      (semicircle_cdf(mid, r) < p ? lo : hi) = mid;
    }
    out.push_back(0.5 * (lo + hi));
  }
  return out;
}

}  // namespace

TEST_SUITE("spectral") {

TEST_CASE("eigvals of simple matrices") {
  const auto id = eigvals_symmetric(RealMatrix(RealMatrix::Identity(5, 5)));
  REQUIRE(id.size() == 5);
  for (double e : id.eigenvalues) CHECK(e == doctest::Approx(1.0).epsilon(1e-15));

  RealMatrix d = RealMatrix::Zero(3, 3);
  d.diagonal() << 3.0, 1.0, 2.0;
  const auto s = eigvals_symmetric(d);
  CHECK(s.eigenvalues == std::vector<double>{1.0, 2.0, 3.0});
}

TEST_CASE("eigenvalue sum equals the trace and residuals are small") {
  RandomStream rng(1, 0);
  const RealMatrix h = sample_goe(6, 1.0, rng);
  const auto s = eigvals_symmetric(h);
  double sum = 0.0;
  for (double e : s.eigenvalues) sum += e;
  CHECK(std::abs(sum - h.trace()) < 1e-10);

  const auto sys = eigh(h);
  const double norm = h.norm();
  for (Eigen::Index k = 0; k < 6; ++k) {
    const RealVector x = sys.vectors.col(k);
    CHECK((h * x - sys.values(k) * x).norm() <= 1e-8 * norm);
    CHECK(sys.values(k) == doctest::Approx(s.eigenvalues[k]).epsilon(1e-12));
  }

  const ComplexMatrix c = sample_classical({2, 5, 1.0}, rng).complex();
  const auto cs = eigvals_symmetric(c);
  double csum = 0.0;
  for (double e : cs.eigenvalues) csum += e;
  CHECK(std::abs(csum - c.trace().real()) < 1e-10);
}

TEST_CASE("asymmetric input is rejected") {
  RealMatrix h = RealMatrix::Identity(3, 3);
  h(0, 1) = 1e-9;
  CHECK_THROWS_AS(eigvals_symmetric(h), DomainError);
  h(0, 1) = 1e-14;
  CHECK_NOTHROW(eigvals_symmetric(h));
  CHECK_THROWS_AS(eigvals_symmetric(RealMatrix(2, 3)), DomainError);
  ComplexMatrix c = ComplexMatrix::Identity(2, 2);
  c(0, 1) = Complex(0.0, 1.0);
  c(1, 0) = Complex(0.0, 1.0);
  CHECK_THROWS_AS(eigvals_symmetric(c), DomainError);
}

TEST_CASE("Kramers deduplication") {
  Spectrum s{{1.0, 1.0, 2.0, 2.0}, 0, ""};
  CHECK(kramers_deduplicate(s).eigenvalues == std::vector<double>{1.0, 2.0});
  s.eigenvalues.push_back(3.0);
  CHECK_THROWS_AS(kramers_deduplicate(s), DomainError);
}

TEST_CASE("moments") {
  const std::vector<double> sym{-3.0, -1.0, -0.5, 0.5, 1.0, 3.0};
  const auto m = moments(sym);
  CHECK(std::abs(m.gamma1) < 1e-12);
  CHECK(m.centroid == doctest::Approx(0.0));
  CHECK(m.variance == doctest::Approx((9 + 1 + 0.25) * 2 / 6.0));

  CHECK_THROWS_AS(moments(std::vector<double>{1.0, 2.0, 3.0}), DomainError);
  CHECK_THROWS_AS(moments(std::vector<double>{2.0, 2.0, 2.0, 2.0}), DomainError);

  // M4 / M2^2 = C_2 / C_1^2 = 2 for the semicircle.
  double prev = 1.0;
  for (std::size_t n : {50, 500, 5000}) {
    const double g2 = moments(semicircle_nodes(n, 2.0)).gamma2;
    CHECK(std::abs(g2 + 1.0) < prev);
    prev = std::abs(g2 + 1.0);
  }
  CHECK(prev < 2e-3);
}

TEST_CASE("Hermite polynomials") {
  for (double x : {-1.7, 0.0, 0.4, 2.3}) {
    CHECK(hermite_he(0, x) == 1.0);
    CHECK(hermite_he(3, x) == doctest::Approx(x * x * x - 3 * x));
    CHECK(hermite_he(4, x) == doctest::Approx(std::pow(x, 4) - 6 * x * x + 3));
    CHECK(hermite_he(6, x) == doctest::Approx(std::pow(x, 6) - 15 * std::pow(x, 4) + 45 * x * x - 15));
  }
}

TEST_CASE("Edgeworth density") {
  const double inv = 1.0 / std::sqrt(2.0 * std::numbers::pi);
  for (double x : {-2.0, 0.0, 0.7}) {
    CHECK(edgeworth_density(x, 0.0, 0.0) == doctest::Approx(inv * std::exp(-x * x / 2)).epsilon(1e-15));
  }
  const double g1 = 0.4, g2 = -0.8;
  CHECK(edgeworth_density(0.0, g1, g2) ==
        doctest::Approx(inv * (1 + 3 * g2 / 24 - 15 * g1 * g1 / 72)).epsilon(1e-14));

  for (double a : {-1.0, 0.0, 0.5, 1.0}) {
    for (double b : {-1.0, -0.3, 0.0, 1.0}) {
      const int steps = 4000;
      const double h = 16.0 / steps;
      double sum = 0.0;
      for (int i = 0; i <= steps; ++i) {
        const double w = (i == 0 || i == steps) ? 1.0 : (i % 2 ? 4.0 : 2.0);
        sum += w * edgeworth_density(-8.0 + i * h, a, b);
      }
      CHECK(std::abs(sum * h / 3.0 - 1.0) < 1e-6);
      // CDF is the running integral of the density.
      const double x = 0.3, eps = 1e-5;
      CHECK((edgeworth_cdf(x + eps, a, b) - edgeworth_cdf(x - eps, a, b)) / (2 * eps) ==
            doctest::Approx(edgeworth_density(x, a, b)).epsilon(1e-7));
      CHECK(std::abs(edgeworth_cdf(-12.0, a, b)) < 1e-12);
      CHECK(std::abs(edgeworth_cdf(12.0, a, b) - 1.0) < 1e-12);
    }
  }
}

TEST_CASE("unfolding a uniform spectrum") {
  Spectrum s;
  for (int i = 1; i <= 200; ++i) s.eigenvalues.push_back(i);
  for (int order : {1, 3, 7}) {
    UnfoldOptions opt;
    opt.method = UnfoldMethod::kPolynomial;
    opt.poly_order = order;
    const auto u = unfold(s, opt);
    REQUIRE(u.values.size() == 160);
    for (std::size_t i = 1; i < u.values.size(); ++i) {
      CHECK(std::abs(u.values[i] - u.values[i - 1] - 1.0) < 1e-9);
    }
  }
}

TEST_CASE("unfolding preconditions") {
  Spectrum tiny{{1, 2, 3, 4, 5}, 0, ""};
  CHECK_THROWS_AS(unfold(tiny, {}), DomainError);
  Spectrum s;
  for (int i = 0; i < 50; ++i) s.eigenvalues.push_back(i);
  UnfoldOptions opt;
  opt.edge_trim = 0.5;
  CHECK_THROWS_AS(unfold(s, opt), DomainError);
  opt.edge_trim = 0.1;
  opt.method = UnfoldMethod::kEnsembleSemicircle;
  opt.center = 25.0;
  opt.radius = 10.0;
  CHECK_THROWS_AS(unfold(s, opt), UnfoldingError);
}

TEST_CASE("every method yields unit mean spacing") {
  RandomStream rng(2, 0);
  const std::size_t n = 252;
  const auto s = eigvals_symmetric(sample_goe(n, 1.0, rng));
  for (auto method : {UnfoldMethod::kEnsembleSemicircle, UnfoldMethod::kSpectralEdgeworth,
                      UnfoldMethod::kEnsembleEdgeworth, UnfoldMethod::kPolynomial}) {
    CAPTURE(to_string(method));
    UnfoldOptions opt;
    opt.method = method;
    opt.radius = goe_semicircle_radius(n, 1.0);
    opt.ensemble = moments(s.eigenvalues);
    const auto u = unfold_adaptive(s, opt);
    CHECK(std::abs(u.mean_spacing() - 1.0) < 1e-6);
    CHECK(std::is_sorted(u.values.begin(), u.values.end()));
  }
}

TEST_CASE("ensemble semicircle frame is close to unit spacing") {
  const std::size_t n = 252;
  std::vector<UnfoldedSpectrum> members;
  double frame = 0.0;
  for (std::size_t k = 0; k < 100; ++k) {
    RandomStream rng(3, k);
    UnfoldOptions opt;
    opt.method = UnfoldMethod::kEnsembleSemicircle;
    opt.radius = goe_semicircle_radius(n, 1.0);
    opt.rescale = Rescale::kNone;
    members.push_back(unfold(eigvals_symmetric(sample_goe(n, 1.0, rng)), opt));
    frame += members.back().frame_spacing / 100.0;
  }
  CHECK(std::abs(frame - 1.0) < 0.01);
  rescale_common(members);
  double pooled = 0.0;
  for (const auto& m : members) pooled += m.mean_spacing() / 100.0;
  CHECK(std::abs(pooled - 1.0) < 1e-12);
}

TEST_CASE("recenter and pooled moments") {
  Spectrum a{{1, 2, 3, 6}, 0, ""};
  const auto c = recenter(a);
  CHECK(c.eigenvalues == std::vector<double>{-2, -1, 0, 3});
  std::vector<Spectrum> both{a, c};
  const auto pm = pooled_moments(both);
  CHECK(pm.centroid == doctest::Approx(1.5));
  CHECK(semicircle_radius_from_variance(4.0) == 4.0);
}

TEST_CASE("histogram and fits") {
  const std::vector<double> v{0.1, 0.2, 0.6, 0.9, 1.5};
  const auto h = histogram(v, 2, 0.0, 1.0, 4.0);
  CHECK(h.counts == std::vector<double>{2.0, 2.0});
  CHECK(h.density[0] == doctest::Approx(1.0));
  CHECK(h.center(1) == doctest::Approx(0.75));
  CHECK(l2_error(h, [](double) { return 1.0; }) == doctest::Approx(0.0));
  CHECK(l2_error(h, [](double) { return 0.0; }) == doctest::Approx(1.0));
  CHECK_THROWS_AS(histogram(v, 0, 0.0, 1.0, 1.0), DomainError);

  // Exact semicircle bin masses recover the radius.
  Histogram sc{-3.0, 3.0, std::vector<double>(60, 0.0), std::vector<double>(60, 0.0)};
  for (std::size_t i = 0; i < 60; ++i) {
    sc.density[i] = (semicircle_cdf(sc.right(i), 2.2) - semicircle_cdf(sc.left(i), 2.2)) / sc.width();
  }
  CHECK(fit_semicircle_radius(sc, 1.0, 3.0) == doctest::Approx(2.2).epsilon(0.01));
  CHECK(max_interior_deviation(sc, [](double e) { return semicircle_density(e, 2.2); }, -2.0, 2.0) < 0.02);
}

}
