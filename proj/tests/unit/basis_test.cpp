// Copyright 2026 The embrmt Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <set>
#include <vector>

#include "embrmt/basis.hpp"
#include "embrmt/errors.hpp"
#include "oracles/fock_oracle.hpp"

using namespace embrmt;

namespace {

OccupationVector occ(std::vector<std::uint32_t> v) { return OccupationVector{std::move(v)}; }

// First-quantized fermion wavefunctions: antisymmetric tensors over
// {0..ell-1}^n stored flat, slot 0 most significant.
struct Wavefunction {
  std::size_t ell = 0;
  std::size_t n = 0;
  std::vector<double> amp;

  double at(const std::vector<std::size_t>& x) const {
    std::size_t idx = 0;
    for (std::size_t v : x) idx = idx * ell + v;
    return amp[idx];
  }
};

std::vector<std::size_t> digits(std::size_t idx, std::size_t ell, std::size_t n) {
  std::vector<std::size_t> x(n);
  for (std::size_t i = n; i-- > 0;) {
    x[i] = idx % ell;
    idx /= ell;
  }
  return x;
}

std::size_t ipow(std::size_t b, std::size_t e) {
  std::size_t r = 1;
  while (e--) r *= b;
  return r;
}

Wavefunction vacuum(std::size_t ell) { return {ell, 0, {1.0}}; }

// (a+_p chi)(x_1..x_n) = n^{-1/2} sum_i (-1)^(i-1) delta(x_i, p) chi(x without x_i).
Wavefunction create(const Wavefunction& chi, std::size_t p) {
  Wavefunction out{chi.ell, chi.n + 1, std::vector<double>(ipow(chi.ell, chi.n + 1), 0.0)};
  const double norm = 1.0 / std::sqrt(double(out.n));
  for (std::size_t idx = 0; idx < out.amp.size(); ++idx) {
    const auto x = digits(idx, out.ell, out.n);
    double sum = 0.0;
    for (std::size_t i = 0; i < out.n; ++i) {
      if (x[i] != p) continue;
      std::vector<std::size_t> rest;
      for (std::size_t j = 0; j < out.n; ++j) {
        if (j != i) rest.push_back(x[j]);
      }
      sum += (i % 2 ? -1.0 : 1.0) * chi.at(rest);
    }
    out.amp[idx] = norm * sum;
  }
  return out;
}

// (a_q chi)(x_1..x_{n-1}) = sqrt(n) chi(q, x_1..x_{n-1}).
Wavefunction annihilate(const Wavefunction& chi, std::size_t q) {
  Wavefunction out{chi.ell, chi.n - 1, std::vector<double>(ipow(chi.ell, chi.n - 1), 0.0)};
  for (std::size_t idx = 0; idx < out.amp.size(); ++idx) {
    auto x = digits(idx, out.ell, out.n);
    x.insert(x.begin(), q);
    out.amp[idx] = std::sqrt(double(chi.n)) * chi.at(x);
  }
  return out;
}

// Slater determinant a+_{o1} ... a+_{om} |0> with o ascending.
Wavefunction slater(const OccupationVector& s) {
  Wavefunction w = vacuum(s.levels());
  for (std::size_t i = s.levels(); i-- > 0;) {
    if (s[i]) w = create(w, i);
  }
  return w;
}

double overlap(const Wavefunction& a, const Wavefunction& b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.amp.size(); ++i) sum += a.amp[i] * b.amp[i];
  return sum;
}

// <bra| a+_{c1}..a+_{ck} a_{ak}..a_{a1} |ket> from wavefunctions.
double slater_element(const OccupationVector& bra, const OccupationVector& ket,
                      const std::vector<std::size_t>& c, const std::vector<std::size_t>& a) {
  Wavefunction w = slater(ket);
  for (std::size_t q : a) w = annihilate(w, q);
  for (std::size_t i = c.size(); i-- > 0;) w = create(w, c[i]);
  return overlap(slater(bra), w);
}

std::vector<std::vector<std::size_t>> tuples(std::size_t ell, std::size_t k, bool bosons) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> t;
  std::function<void(std::size_t)> rec = [&](std::size_t start) {
    if (t.size() == k) {
      out.push_back(t);
      return;
    }
    for (std::size_t i = start; i < ell; ++i) {
      t.push_back(i);
      rec(bosons ? i : i + 1);
      t.pop_back();
    }
  };
  rec(0);
  return out;
}

}  // namespace

TEST_SUITE("basis") {

TEST_CASE("dimension") {
  CHECK(dimension(10, 5, Statistics::kFermion) == 252);
  CHECK(dimension(2, 251, Statistics::kBoson) == 252);
  CHECK(dimension(7, 0, Statistics::kFermion) == 1);
  CHECK(dimension(7, 0, Statistics::kBoson) == 1);
  CHECK(dimension(4, 2, Statistics::kFermion) == 6);
  CHECK(dimension(3, 3, Statistics::kBoson) == 10);
  CHECK_THROWS_AS(dimension(3, 4, Statistics::kFermion), DomainError);
  CHECK_THROWS_AS(binomial(200, 100), CapacityError);
  CHECK(binomial(12, 8) == 495);
}

TEST_CASE("enumeration order") {
  const ManyBodyBasis f({4, Statistics::kFermion, {}}, 2);
  REQUIRE(f.size() == 6);
  CHECK(f.state(0) == occ({1, 1, 0, 0}));
  CHECK(f.state(5) == occ({0, 0, 1, 1}));
  for (std::size_t i = 1; i < f.size(); ++i) CHECK(f.state(i - 1) > f.state(i));

  const ManyBodyBasis b({2, Statistics::kBoson, {}}, 3);
  REQUIRE(b.size() == 4);
  CHECK(b.state(0) == occ({3, 0}));
  CHECK(b.state(1) == occ({2, 1}));
  CHECK(b.state(2) == occ({1, 2}));
  CHECK(b.state(3) == occ({0, 3}));
}

TEST_CASE("index_of inverts enumeration") {
  for (auto stats : {Statistics::kFermion, Statistics::kBoson}) {
    const ManyBodyBasis basis({10, stats, {}}, stats == Statistics::kFermion ? 5 : 3);
    CHECK(basis.size() == dimension(10, basis.particles(), stats));
    std::set<OccupationVector> seen;
    for (std::size_t i = 0; i < basis.size(); ++i) {
      CHECK(basis.index_of(basis.state(i)) == i);
      CHECK(basis.state(i).particles() == basis.particles());
      seen.insert(basis.state(i));
    }
    CHECK(seen.size() == basis.size());
  }
  const ManyBodyBasis f({4, Statistics::kFermion, {}}, 2);
  CHECK_FALSE(f.index_of(occ({1, 1, 1, 0})).has_value());
  CHECK_FALSE(f.index_of(occ({2, 0, 0, 0})).has_value());
  CHECK_FALSE(f.index_of(occ({1, 1, 0})).has_value());
}

TEST_CASE("capacity limit") {
  CHECK_THROWS_AS(ManyBodyBasis({30, Statistics::kFermion, {}}, 15, 1000), CapacityError);
  CHECK_THROWS_AS(ManyBodyBasis({3, Statistics::kFermion, {}}, 4), DomainError);
}

TEST_CASE("apply_kbody_term examples") {
  const ManyBodyBasis one({2, Statistics::kFermion, {}}, 1);
  const std::vector<std::size_t> c1{1}, a0{0};
  const auto t = apply_kbody_term(one, *one.index_of(occ({1, 0})), c1, a0);
  REQUIRE(t.has_value());
  CHECK(one.state(t->bra) == occ({0, 1}));
  CHECK(t->amplitude == 1.0);

  const ManyBodyBasis two({3, Statistics::kFermion, {}}, 2);
  CHECK_FALSE(apply_kbody_term(two, *two.index_of(occ({1, 1, 0})), c1, a0).has_value());
  CHECK_FALSE(apply_kbody_term(two, *two.index_of(occ({0, 1, 1})), c1, a0).has_value());

  const std::vector<std::size_t> bad{1, 0}, pair{0, 1};
  CHECK_THROWS_AS(apply_kbody_term(two, 0, bad, pair), DomainError);
  CHECK_THROWS_AS(apply_kbody_term(two, 0, c1, pair), DomainError);
  const std::vector<std::size_t> out_of_range{5};
  CHECK_THROWS_AS(apply_kbody_term(two, 0, out_of_range, a0), DomainError);
  CHECK_THROWS_AS(apply_kbody_term(two, 99, c1, a0), DomainError);
}

TEST_CASE("two-body term matches the Slater determinant oracle") {
  // a+_1 a+_2 a_4 a_3 on (0,1,1,1) in one-based labels: a_4 a_3 leaves level 2
  // occupied, so a+_2 is Pauli blocked and every bra sees zero.
  const ManyBodyBasis basis({4, Statistics::kFermion, {}}, 3);
  const std::vector<std::size_t> c{0, 1}, a{2, 3};
  const OccupationVector ket = occ({0, 1, 1, 1});
  CHECK_FALSE(apply_kbody_term(basis, *basis.index_of(ket), c, a).has_value());
  for (const auto& bra : basis.states()) CHECK(slater_element(bra, ket, c, a) == 0.0);

  // a+_1 a+_3 a_4 a_3 moves one particle from level 4 to level 1.
  const std::vector<std::size_t> c13{0, 2};
  const auto t = apply_kbody_term(basis, *basis.index_of(ket), c13, a);
  REQUIRE(t.has_value());
  CHECK(basis.state(t->bra) == occ({1, 1, 1, 0}));
  const double expect = slater_element(basis.state(t->bra), ket, c13, a);
  CHECK(std::abs(expect) == doctest::Approx(1.0));
  CHECK(t->amplitude == doctest::Approx(expect).epsilon(1e-14));
}

TEST_CASE("fermion terms match Slater determinants exhaustively") {
  for (std::size_t ell = 1; ell <= 4; ++ell) {
    for (std::size_t m = 0; m <= ell; ++m) {
      const ManyBodyBasis basis({ell, Statistics::kFermion, {}}, m);
      for (std::size_t k = 1; k <= std::min<std::size_t>(2, m); ++k) {
        const auto ts = tuples(ell, k, false);
        for (std::size_t ket = 0; ket < basis.size(); ++ket) {
          for (const auto& c : ts) {
            for (const auto& a : ts) {
              const auto t = apply_kbody_term(basis, ket, c, a);
              for (std::size_t bra = 0; bra < basis.size(); ++bra) {
                const double lib = (t && t->bra == bra) ? t->amplitude : 0.0;
                const double ref = slater_element(basis.state(bra), basis.state(ket), c, a);
                REQUIRE(std::abs(lib - ref) < 1e-12);
              }
            }
          }
        }
      }
    }
  }
}

TEST_CASE("terms match the Fock-space oracle exhaustively") {
  for (bool bosons : {false, true}) {
    for (int ell = 1; ell <= 4; ++ell) {
      const int m_max = bosons ? 4 : ell;
      for (int m = 0; m <= m_max; ++m) {
        CAPTURE(bosons);
        CAPTURE(ell);
        CAPTURE(m);
        const auto stats = bosons ? Statistics::kBoson : Statistics::kFermion;
        const ManyBodyBasis basis({std::size_t(ell), stats, {}}, std::size_t(m));
        const oracle::FockSpace fock(ell, bosons, std::max(m, 1));
        const auto sector = fock.sector(m);
        REQUIRE(sector.size() == basis.size());
        for (std::size_t i = 0; i < sector.size(); ++i) {
          const auto o = fock.occupation(sector[i]);
          for (int l = 0; l < ell; ++l) REQUIRE(int(basis.state(i)[l]) == o[l]);
        }
        for (int k = 1; k <= std::min(2, m); ++k) {
          const auto ts = tuples(std::size_t(ell), std::size_t(k), bosons);
          std::vector<oracle::Mat> ann;
          for (const auto& t : ts) {
            oracle::Occ g(std::size_t(ell), 0);
            for (std::size_t l : t) ++g[l];
            const oracle::Mat full = fock.annihilator(g);
            const auto lower = fock.sector(m - k);
            oracle::Mat sub(lower.size(), sector.size());
            for (std::size_t r = 0; r < lower.size(); ++r) {
              for (std::size_t s = 0; s < sector.size(); ++s) sub(r, s) = full(lower[r], sector[s]);
            }
            ann.push_back(sub);
          }
          for (std::size_t x = 0; x < ts.size(); ++x) {
            for (std::size_t y = 0; y < ts.size(); ++y) {
              const oracle::Mat ref = ann[x].transpose() * ann[y];
              for (std::size_t ket = 0; ket < basis.size(); ++ket) {
                const auto t = apply_kbody_term(basis, ket, ts[x], ts[y]);
                for (std::size_t bra = 0; bra < basis.size(); ++bra) {
                  const double lib = (t && t->bra == bra) ? t->amplitude : 0.0;
                  REQUIRE(std::abs(lib - ref(bra, ket)) < 1e-12);
                }
              }
            }
          }
        }
      }
    }
  }
}

TEST_CASE("level tuples") {
  CHECK(level_tuple(occ({0, 1, 0, 1})) == std::vector<std::size_t>{1, 3});
  CHECK(level_tuple(occ({2, 0, 1})) == std::vector<std::size_t>{0, 0, 2});
}

TEST_CASE("transfer distance examples") {
  const auto x = occ({1, 1, 0, 0});
  CHECK(transfer_distance(x, x) == 0);
  CHECK(transfer_distance(x, occ({1, 0, 1, 0})) == 1);
  CHECK(transfer_distance(x, occ({0, 0, 1, 1})) == 2);
  CHECK_THROWS_AS(transfer_distance(x, occ({1, 1, 1, 0})), DomainError);
  CHECK_THROWS_AS(transfer_distance(x, occ({1, 1, 0})), DomainError);
}

TEST_CASE("transfer distance is a metric") {
  for (auto stats : {Statistics::kFermion, Statistics::kBoson}) {
    for (std::size_t ell = 1; ell <= 6; ++ell) {
      for (std::size_t m = 0; m <= 4; ++m) {
        if (stats == Statistics::kFermion && m > ell) continue;
        const ManyBodyBasis basis({ell, stats, {}}, m);
        const auto states = basis.states();
        const std::size_t d = states.size();
        std::vector<std::size_t> dist(d * d);
        for (std::size_t i = 0; i < d; ++i) {
          for (std::size_t j = 0; j < d; ++j) dist[i * d + j] = transfer_distance(states[i], states[j]);
        }
        for (std::size_t i = 0; i < d; ++i) {
          REQUIRE(dist[i * d + i] == 0);
          for (std::size_t j = 0; j < d; ++j) {
            REQUIRE(dist[i * d + j] == dist[j * d + i]);
            if (i != j) REQUIRE(dist[i * d + j] > 0);
            for (std::size_t l = 0; l < d; ++l) {
              REQUIRE(dist[i * d + l] <= dist[i * d + j] + dist[j * d + l]);
            }
          }
        }
      }
    }
  }
}

TEST_CASE("configuration blocks for capacities (6,4,2), m = 8") {
  const SingleParticleSpace space{12, Statistics::kFermion, {6, 4, 2}};
  const auto blocks = configuration_blocks(space, 8);
  REQUIRE(blocks.blocks.size() == 12);
  CHECK(blocks.total_dim() == 495);
  CHECK(blocks.total_dim() == binomial(12, 8));
  for (std::size_t i = 1; i < blocks.blocks.size(); ++i) {
    CHECK(blocks.blocks[i - 1].dim >= blocks.blocks[i].dim);
  }

  // Brute force: group the explicit 8-particle basis by orbit occupancy.
  const ManyBodyBasis basis(space, 8);
  std::map<std::vector<std::size_t>, std::uint64_t> groups;
  for (const auto& s : basis.states()) ++groups[orbit_occupancies(space, s)];
  REQUIRE(groups.size() == 12);
  for (const auto& b : blocks.blocks) CHECK(groups.at(b.occupancies) == b.dim);

  for (std::size_t i = 0; i < 12; ++i) {
    CHECK(blocks.distance[i][i] == 0);
    for (std::size_t j = 0; j < 12; ++j) CHECK(blocks.distance[i][j] == blocks.distance[j][i]);
  }
  CHECK(transfer_code(0, 2) == 0);
  CHECK(transfer_code(2, 2) == 2);
  CHECK(transfer_code(3, 2) == 9);
}

TEST_CASE("single orbit and infeasible particle numbers") {
  const SingleParticleSpace space{7, Statistics::kFermion, {7}};
  const auto one = configuration_blocks(space, 3);
  REQUIRE(one.blocks.size() == 1);
  CHECK(one.blocks[0].dim == 35);
  CHECK(configuration_blocks(space, 8).blocks.empty());
  CHECK_THROWS_AS(SingleParticleSpace({7, Statistics::kFermion, {3, 3}}).validate(), DomainError);
}

TEST_CASE("block dimensions satisfy the Vandermonde identity") {
  // Every integer partition with sum <= 14, every m.
  std::vector<std::vector<std::size_t>> partitions;
  std::vector<std::size_t> work;
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t left, std::size_t max_part) {
    if (!work.empty()) partitions.push_back(work);
    for (std::size_t p = std::min(left, max_part); p >= 1; --p) {
      work.push_back(p);
      rec(left - p, p);
      work.pop_back();
    }
  };
  rec(14, 14);
  CHECK(partitions.size() == 507);  // sum_{n=1}^{14} p(n)
  for (const auto& caps : partitions) {
    std::size_t total = 0;
    for (std::size_t c : caps) total += c;
    const SingleParticleSpace space{total, Statistics::kFermion, caps};
    for (std::size_t m = 0; m <= total; ++m) {
      REQUIRE(configuration_blocks(space, m).total_dim() == binomial(total, m));
    }
  }
}

}
