// Copyright 2026 The embrmt Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <vector>

#include "embrmt/basis.hpp"
#include "embrmt/eigensolve.hpp"
#include "embrmt/embedded.hpp"
#include "embrmt/errors.hpp"
#include "oracles/fock_oracle.hpp"

using namespace embrmt;

namespace {

std::vector<double> sorted(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace

TEST_SUITE("embedded") {

TEST_CASE("k-body coefficient shapes") {
  RandomStream rng(1, 0);
  const auto f = sample_kbody(10, 2, Statistics::kFermion, 1.0, rng);
  CHECK(f.coeffs.rows() == 45);
  CHECK(f.coeffs == f.coeffs.transpose());
  const auto b = sample_kbody(2, 2, Statistics::kBoson, 1.0, rng);
  CHECK(b.coeffs.rows() == 3);
  CHECK(b.coeffs == b.coeffs.transpose());
  CHECK_THROWS_AS(sample_kbody(3, 4, Statistics::kFermion, 1.0, rng), DomainError);
  CHECK_THROWS_AS(sample_kbody(3, 0, Statistics::kBoson, 1.0, rng), DomainError);
  CHECK_THROWS_AS(sample_kbody(200, 2, Statistics::kFermion, 1.0, rng), CapacityError);
}

TEST_CASE("k-body coefficients follow the two-delta covariance") {
  const int members = 10000;
  const double v2 = 1.5;
  const int d = 6;  // ell = 4, k = 2 fermions
  std::vector<double> s1(d * d, 0.0), s2(d * d, 0.0);
  for (int m = 0; m < members; ++m) {
    RandomStream rng(2, static_cast<std::uint64_t>(m));
    const auto c = sample_kbody(4, 2, Statistics::kFermion, v2, rng).coeffs;
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j) {
        s1[i * d + j] += c(i, j);
        s2[i * d + j] += c(i, j) * c(i, j);
      }
    }
  }
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      const double var = i == j ? 2.0 * v2 : v2;
      CHECK(std::abs(s1[i * d + j] / members) < 3.0 * std::sqrt(var / members));
      CHECK(std::abs(s2[i * d + j] / members - var) < 3.0 * var * std::sqrt(2.0 / members));
    }
  }
}

TEST_CASE("embedding matches the second-quantization oracle") {
  struct Case {
    std::size_t ell, m, k;
    Statistics stats;
  };
  for (const Case c : {Case{4, 3, 2, Statistics::kFermion}, Case{3, 3, 2, Statistics::kBoson},
                       Case{4, 2, 1, Statistics::kFermion}, Case{3, 4, 1, Statistics::kBoson},
                       Case{4, 4, 2, Statistics::kBoson}, Case{4, 2, 2, Statistics::kFermion}}) {
    CAPTURE(c.ell);
    CAPTURE(c.m);
    CAPTURE(c.k);
    RandomStream rng(3, c.ell * 100 + c.m * 10 + c.k);
    const auto coeffs = sample_kbody(c.ell, c.k, c.stats, 1.0, rng);
    const auto h = embed(coeffs, c.m);
    const bool bosons = c.stats == Statistics::kBoson;
    const oracle::FockSpace fock(int(c.ell), bosons, int(c.m));
    const oracle::Mat ref = fock.embed(coeffs.coeffs, int(c.k), int(c.m));
    REQUIRE(ref.rows() == h.entries.rows());
    CHECK((h.entries - ref).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK(h.entries == h.entries.transpose());
  }
}

TEST_CASE("embedding errors") {
  RandomStream rng(4, 0);
  const auto coeffs = sample_kbody(4, 2, Statistics::kFermion, 1.0, rng);
  CHECK_THROWS_AS(embed(coeffs, 1), DomainError);
  CHECK_THROWS_AS(embed(coeffs, 2, 3), CapacityError);
  auto other = std::make_shared<const ManyBodyBasis>(SingleParticleSpace{5, Statistics::kFermion, {}}, 2);
  CHECK_THROWS_AS(embed(coeffs, other), DomainError);
}

TEST_CASE("selection rules give exact zeros") {
  RandomStream rng(5, 0);
  const auto coeffs = sample_kbody(10, 2, Statistics::kFermion, 1.0, rng);
  const auto h = embed(coeffs, 5);
  REQUIRE(h.dim() == 252);
  CHECK(h.entries == h.entries.transpose());
  std::size_t zeros = 0, allowed_nonzero = 0;
  for (std::size_t a = 0; a < h.dim(); ++a) {
    for (std::size_t b = 0; b < h.dim(); ++b) {
      const auto d = transfer_distance(h.basis->state(a), h.basis->state(b));
      if (d > 2) {
        REQUIRE(h.entries(a, b) == 0.0);
        ++zeros;
      } else if (h.entries(a, b) != 0.0) {
        ++allowed_nonzero;
      }
    }
  }
  // Three-or-more transfers: 252^2 minus pairs within two transfers.
  // Pairs at distance t from a state: binom(5,t)^2.
  CHECK(zeros == 252 * (252 - 1 - 25 - 100));
  CHECK(allowed_nonzero == 252 * (1 + 25 + 100));
}

TEST_CASE("k = m reproduces the coefficient matrix") {
  RandomStream rng(6, 0);
  for (auto stats : {Statistics::kFermion, Statistics::kBoson}) {
    const auto coeffs = sample_kbody(5, 3, stats, 1.0, rng);
    const auto h = embed(coeffs, 3);
    CAPTURE(to_string(stats));
    CHECK((h.entries - coeffs.coeffs).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("k = m pooled variances follow the GOE pattern") {
  const int members = 2000;
  const int d = 20;  // binom(6, 3)
  double diag = 0.0, off = 0.0;
  const auto basis = std::make_shared<const ManyBodyBasis>(SingleParticleSpace{6, Statistics::kFermion, {}}, 3);
  for (int m = 0; m < members; ++m) {
    RandomStream rng(7, static_cast<std::uint64_t>(m));
    const auto h = embed(sample_kbody(6, 3, Statistics::kFermion, 1.0, rng), basis);
    for (int i = 0; i < d; ++i) {
      diag += h.entries(i, i) * h.entries(i, i);
      for (int j = i + 1; j < d; ++j) off += h.entries(i, j) * h.entries(i, j);
    }
  }
  const double nd = double(members) * d, no = double(members) * d * (d - 1) / 2;
  CHECK(std::abs(diag / nd - 2.0) < 3.0 * 2.0 * std::sqrt(2.0 / nd));
  CHECK(std::abs(off / no - 1.0) < 3.0 * std::sqrt(2.0 / no));
}

TEST_CASE("embedding is linear") {
  RandomStream rng(8, 0);
  for (auto stats : {Statistics::kFermion, Statistics::kBoson}) {
    auto a = sample_kbody(6, 2, stats, 1.0, rng);
    const auto b = sample_kbody(6, 2, stats, 1.0, rng);
    const auto ha = embed(a, 3), hb = embed(b, 3);
    a.coeffs += b.coeffs;
    const auto hab = embed(a, 3);
    CHECK((hab.entries - ha.entries - hb.entries).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("one-body embedding gives occupation sums") {
  const std::vector<double> eps{0.3, 1.1, 1.7, 2.9, 4.2};
  for (auto stats : {Statistics::kFermion, Statistics::kBoson}) {
    const std::size_t m = 3;
    const auto h = embed(one_body_coefficients(stats, eps), m);
    CHECK(h.entries.isDiagonal(0.0));
    std::vector<double> expect;
    for (const auto& s : h.basis->states()) {
      double e = 0.0;
      for (std::size_t i = 0; i < eps.size(); ++i) e += s[i] * eps[i];
      expect.push_back(e);
    }
    const auto got = eigvals_symmetric(h.entries).eigenvalues;
    expect = sorted(expect);
    for (std::size_t i = 0; i < got.size(); ++i) CHECK(got[i] == doctest::Approx(expect[i]).epsilon(1e-13));
  }
}

TEST_CASE("one-plus-two composition") {
  RandomStream rng(9, 0);
  const std::vector<double> eps{1, 2, 3, 4, 5, 6};
  const auto basis = std::make_shared<const ManyBodyBasis>(SingleParticleSpace{6, Statistics::kFermion, {}}, 3);
  const auto h1 = embed(one_body_coefficients(Statistics::kFermion, eps), basis);
  const auto v = embed(sample_kbody(6, 2, Statistics::kFermion, 1.0, rng), basis);

  CHECK(compose_one_plus_two(h1, v, 0.0).entries == h1.entries);

  ManyBodyHamiltonian zero{basis, RealMatrix::Zero(20, 20)};
  const auto s1 = eigvals_symmetric(compose_one_plus_two(zero, v, 1.0).entries).eigenvalues;
  const auto s3 = eigvals_symmetric(compose_one_plus_two(zero, v, 3.0).entries).eigenvalues;
  for (std::size_t i = 0; i < s1.size(); ++i) CHECK(s3[i] == doctest::Approx(3.0 * s1[i]).epsilon(1e-12));

  const double lam = 0.37;
  const auto h = compose_one_plus_two(h1, v, lam);
  CHECK(h.entries == h.entries.transpose());
  CHECK(trace_moments(h.entries).centroid ==
        doctest::Approx(trace_moments(h1.entries).centroid + lam * trace_moments(v.entries).centroid));
  for (std::size_t a = 0; a < 20; ++a) {
    for (std::size_t b = 0; b < 20; ++b) {
      if (transfer_distance(basis->state(a), basis->state(b)) > 2) CHECK(h.entries(a, b) == 0.0);
    }
  }

  const auto other = embed(sample_kbody(6, 2, Statistics::kFermion, 1.0, rng), 2);
  CHECK_THROWS_AS(compose_one_plus_two(h1, other, 1.0), DomainError);
}

TEST_CASE("ensemble spec validation and sampling") {
  EmbeddedEnsembleSpec spec;
  spec.ell = 4;
  spec.m = 5;
  CHECK_THROWS(spec.validate());
  spec.m = 3;
  spec.k = 4;
  CHECK_THROWS_AS(spec.validate(), SpecError);
  spec.k = 2;
  spec.one_body = OneBodyPart{SpEnergies::kUnitSpacing, {}, 0.5};
  spec.validate();
  RandomStream a(10, 0), b(10, 0);
  const auto h = sample_embedded(spec, a);
  CHECK(h.dim() == 4);
  CHECK(h.entries == sample_embedded(spec, b).entries);
  spec.one_body->energies = {1.0, 2.0};
  CHECK_THROWS_AS(spec.validate(), SpecError);
}

TEST_CASE("trace moments") {
  RealMatrix h(2, 2);
  h << 1.0, 2.0, 2.0, 3.0;
  const auto t = trace_moments(h);
  CHECK(t.centroid == doctest::Approx(2.0));
  // Tr H^2 / d - centroid^2 = (1 + 4 + 4 + 9) / 2 - 4.
  CHECK(t.variance == doctest::Approx(5.0));
}

TEST_CASE("cross-moment fluctuations") {
  EmbeddedEnsembleSpec spec;
  spec.ell = 8;
  spec.k = 2;
  spec.member_count = 200;
  spec.seed = 11;
  const std::vector<std::size_t> ms{3, 4};
  const auto cm = cross_moment_fluctuations(spec, ms);
  for (int i = 0; i < 2; ++i) {
    CHECK(cm.sigma11(i, i) >= 0.0);
    CHECK(cm.sigma22(i, i) >= 0.0);
  }
  CHECK(cm.sigma11(0, 1) == doctest::Approx(cm.sigma11(1, 0)));
  CHECK(cm.z11(0, 1) > 3.0);

  const auto ctl = cross_moment_goe_control(spec, ms);
  CHECK(std::abs(ctl.z11(0, 1)) < 3.0);
  CHECK(std::abs(ctl.z22(0, 1)) < 3.0);

  std::vector<std::vector<TraceMoments>> one{{TraceMoments{0.0, 1.0}}};
  CHECK_THROWS_AS(reduce_cross_moments(one, {4}), DomainError);
}

TEST_CASE("BEGOE centroid fluctuations fall with ell") {
  std::vector<double> s11;
  for (std::size_t ell : {4, 6, 8}) {
    EmbeddedEnsembleSpec spec;
    spec.ell = ell;
    spec.m = 4;
    spec.k = 2;
    spec.statistics = Statistics::kBoson;
    spec.member_count = 400;
    spec.seed = 12;
    const std::vector<std::size_t> ms{4};
    s11.push_back(cross_moment_fluctuations(spec, ms).sigma11(0, 0));
  }
  CHECK(s11[0] > s11[1]);
  CHECK(s11[1] > s11[2]);
}

}
