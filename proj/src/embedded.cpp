// Copyright 2026 The embrmt Authors
// SPDX-License-Identifier: Apache-2.0

#include "embrmt/embedded.hpp"

#include <cmath>
#include <string>

#include "basis_detail.hpp"
#include "embrmt/classical.hpp"
#include "embrmt/errors.hpp"
#include "embrmt/parallel.hpp"

namespace embrmt {

KBodyCoefficients sample_kbody(std::size_t ell, std::size_t k, Statistics statistics, double v2,
                               RandomStream& rng) {
  if (k < 1) throw DomainError("interaction rank k must be at least 1");
  if (statistics == Statistics::kFermion && k > ell) {
    throw DomainError("k-body rank exceeds the number of fermion levels");
  }
  if (!(v2 > 0.0)) throw DomainError("coefficient variance must be positive");
  const std::uint64_t dim = dimension(ell, k, statistics);
  if (dim > kDefaultMaxDenseDim) {
    throw CapacityError("k-particle dimension " + std::to_string(dim) + " exceeds the dense cap");
  }
  return {ell, k, statistics, v2, sample_goe(static_cast<std::size_t>(dim), v2, rng)};
}

KBodyCoefficients one_body_coefficients(Statistics statistics, std::span<const double> energies) {
  if (energies.empty()) throw DomainError("need at least one single-particle energy");
  const auto n = static_cast<Eigen::Index>(energies.size());
  RealMatrix c = RealMatrix::Zero(n, n);
  // In the one-particle basis, state i (descending order) occupies level i.
  for (Eigen::Index i = 0; i < n; ++i) c(i, i) = energies[static_cast<std::size_t>(i)];
  return {energies.size(), 1, statistics, 1.0, std::move(c)};
}

ManyBodyHamiltonian embed(const KBodyCoefficients& coeffs, std::size_t m, std::size_t max_dim) {
  if (m < coeffs.k) {
    throw DomainError("particle number " + std::to_string(m) + " is below the rank k = " +
                      std::to_string(coeffs.k));
  }
  SingleParticleSpace space{coeffs.ell, coeffs.statistics, {}};
  space.validate_particles(m);
  if (dimension(coeffs.ell, m, coeffs.statistics) > max_dim) {
    throw CapacityError("embedded dimension exceeds the dense cap of " + std::to_string(max_dim));
  }
  return embed(coeffs, std::make_shared<const ManyBodyBasis>(space, m), max_dim);
}

ManyBodyHamiltonian embed(const KBodyCoefficients& coeffs,
                          std::shared_ptr<const ManyBodyBasis> basis, std::size_t max_dim) {
  if (!basis) throw DomainError("embed needs a basis");
  if (basis->ell() != coeffs.ell || basis->statistics() != coeffs.statistics) {
    throw DomainError("basis does not match the k-body coefficient space");
  }
  if (basis->particles() < coeffs.k) throw DomainError("particle number below the rank k");
  if (basis->size() > max_dim) {
    throw CapacityError("embedded dimension exceeds the dense cap of " + std::to_string(max_dim));
  }

  const ManyBodyBasis kbasis(SingleParticleSpace{coeffs.ell, coeffs.statistics, {}}, coeffs.k);
  if (static_cast<Eigen::Index>(kbasis.size()) != coeffs.coeffs.rows()) {
    throw DomainError("coefficient matrix does not match the k-particle dimension");
  }
  std::vector<std::vector<std::size_t>> tuples;
  std::vector<double> norms;
  tuples.reserve(kbasis.size());
  for (const auto& s : kbasis.states()) {
    tuples.push_back(level_tuple(s));
    norms.push_back(detail::boson_normalization(tuples.back()));
  }

  const auto d = static_cast<Eigen::Index>(basis->size());
  const auto nk = static_cast<Eigen::Index>(kbasis.size());
  RealMatrix h = RealMatrix::Zero(d, d);
  const RealMatrix& v = coeffs.coeffs;

  if (coeffs.statistics == Statistics::kFermion) {
    std::vector<std::uint32_t> work(coeffs.ell);
    for (Eigen::Index ket = 0; ket < d; ++ket) {
      const detail::Mask ket_mask = detail::to_mask(basis->state(static_cast<std::size_t>(ket)).occ);
      for (Eigen::Index g = 0; g < nk; ++g) {
        detail::Mask mid = ket_mask;
        const int s1 = detail::fermion_annihilate(mid, tuples[static_cast<std::size_t>(g)]);
        if (s1 == 0) continue;
        for (Eigen::Index a = 0; a < nk; ++a) {
          detail::Mask out = mid;
          const int s2 = detail::fermion_create(out, tuples[static_cast<std::size_t>(a)]);
          if (s2 == 0) continue;
          for (std::size_t i = 0; i < work.size(); ++i) work[i] = (out >> i) & 1U;
          const auto bra = static_cast<Eigen::Index>(basis->rank(work));
          h(bra, ket) += v(a, g) * (s1 * s2);
        }
      }
    }
  } else {
    std::vector<std::uint32_t> mid(coeffs.ell);
    std::vector<std::uint32_t> out(coeffs.ell);
    for (Eigen::Index ket = 0; ket < d; ++ket) {
      const auto& ket_occ = basis->state(static_cast<std::size_t>(ket)).occ;
      for (Eigen::Index g = 0; g < nk; ++g) {
        mid = ket_occ;
        const double a1 = detail::boson_annihilate(mid, tuples[static_cast<std::size_t>(g)]);
        if (a1 == 0.0) continue;
        const double left = a1 * norms[static_cast<std::size_t>(g)];
        for (Eigen::Index a = 0; a < nk; ++a) {
          out = mid;
          const double a2 = detail::boson_create(out, tuples[static_cast<std::size_t>(a)]);
          const auto bra = static_cast<Eigen::Index>(basis->rank(out));
          h(bra, ket) += v(a, g) * (left * a2 * norms[static_cast<std::size_t>(a)]);
        }
      }
    }
  }
  // Both triangles are accumulated in different orders; mirror the upper one
  // so the stored matrix is symmetric bit for bit.
  h.triangularView<Eigen::StrictlyLower>() = h.transpose().triangularView<Eigen::StrictlyLower>();
  return {std::move(basis), std::move(h)};
}

ManyBodyHamiltonian compose_one_plus_two(const ManyBodyHamiltonian& h1,
                                         const ManyBodyHamiltonian& v2body, double lambda2) {
  const bool same_basis =
      h1.basis && v2body.basis &&
      (h1.basis == v2body.basis ||
       (h1.basis->ell() == v2body.basis->ell() &&
        h1.basis->particles() == v2body.basis->particles() &&
        h1.basis->statistics() == v2body.basis->statistics()));
  if (!same_basis || h1.entries.rows() != v2body.entries.rows()) {
    throw DomainError("one-body and two-body parts live in different bases");
  }
  return {h1.basis, h1.entries + lambda2 * v2body.entries};
}

void EmbeddedEnsembleSpec::validate() const {
  if (k < 1 || k > m) throw SpecError("need 1 <= k <= m");
  SingleParticleSpace{ell, statistics, {}}.validate_particles(m);
  if (!(v2 > 0.0)) throw SpecError("coefficient variance must be positive");
  if (one_body && !one_body->energies.empty() && one_body->energies.size() != ell) {
    throw SpecError("one-body part needs exactly ell single-particle energies");
  }
}

ManyBodyHamiltonian sample_embedded(const EmbeddedEnsembleSpec& spec, RandomStream& rng,
                                    std::shared_ptr<const ManyBodyBasis> basis) {
  spec.validate();
  if (!basis) {
    basis = std::make_shared<const ManyBodyBasis>(
        SingleParticleSpace{spec.ell, spec.statistics, {}}, spec.m);
  }
  const KBodyCoefficients coeffs = sample_kbody(spec.ell, spec.k, spec.statistics, spec.v2, rng);
  ManyBodyHamiltonian v = embed(coeffs, basis);
  if (!spec.one_body) return v;

  std::vector<double> energies = spec.one_body->energies;
  if (energies.empty()) {
    if (spec.one_body->mode == SpEnergies::kUnitSpacing) {
      for (std::size_t i = 0; i < spec.ell; ++i) energies.push_back(static_cast<double>(i + 1));
    } else {
      const RealMatrix g = sample_goe(spec.ell, spec.v2, rng);
      const Eigen::SelfAdjointEigenSolver<RealMatrix> es(g, Eigen::EigenvaluesOnly);
      energies.assign(es.eigenvalues().data(), es.eigenvalues().data() + spec.ell);
    }
  }
  const ManyBodyHamiltonian h1 = embed(one_body_coefficients(spec.statistics, energies), basis);
  return compose_one_plus_two(h1, v, spec.one_body->lambda2);
}

TraceMoments trace_moments(const RealMatrix& h) {
  const double d = static_cast<double>(h.rows());
  const double c = h.trace() / d;
  return {c, h.squaredNorm() / d - c * c};
}

CrossMoments reduce_cross_moments(std::span<const std::vector<TraceMoments>> samples,
                                  std::vector<std::size_t> m_list) {
  const std::size_t n = samples.size();
  if (n < 2) throw DomainError("cross-moment fluctuations need at least two members");
  const std::size_t q = m_list.size();
  std::vector<double> mean_c(q, 0.0), mean_v(q, 0.0);
  for (const auto& s : samples) {
    if (s.size() != q) throw DomainError("member moment rows do not match the particle list");
    for (std::size_t i = 0; i < q; ++i) {
      mean_c[i] += s[i].centroid / static_cast<double>(n);
      mean_v[i] += s[i].variance / static_cast<double>(n);
    }
  }
  const auto covariance = [&](std::size_t i, std::size_t j, bool centroids) {
    // Returns (cov, z) with the standard error of the mean product.
    double sum = 0.0, sum2 = 0.0;
    for (const auto& s : samples) {
      const double x = centroids ? s[i].centroid - mean_c[i] : s[i].variance - mean_v[i];
      const double y = centroids ? s[j].centroid - mean_c[j] : s[j].variance - mean_v[j];
      sum += x * y;
      sum2 += x * y * x * y;
    }
    const double nd = static_cast<double>(n);
    const double mean = sum / nd;
    const double var = std::max(0.0, sum2 / nd - mean * mean);
    const double se = std::sqrt(var / nd);
    const double cov = sum / (nd - 1.0);
    return std::pair{cov, se > 0.0 ? mean / se : 0.0};
  };

  CrossMoments out;
  out.m_list = std::move(m_list);
  const auto qi = static_cast<Eigen::Index>(q);
  out.sigma11.resize(qi, qi);
  out.sigma22.resize(qi, qi);
  out.z11.resize(qi, qi);
  out.z22.resize(qi, qi);
  for (std::size_t i = 0; i < q; ++i) {
    for (std::size_t j = 0; j < q; ++j) {
      const auto [c11, z11] = covariance(i, j, true);
      const auto [c22, z22] = covariance(i, j, false);
      const auto ii = static_cast<Eigen::Index>(i), jj = static_cast<Eigen::Index>(j);
      out.sigma11(ii, jj) = c11 / std::sqrt(mean_v[i] * mean_v[j]);
      out.sigma22(ii, jj) = c22 / (mean_v[i] * mean_v[j]);
      out.z11(ii, jj) = z11;
      out.z22(ii, jj) = z22;
    }
  }
  return out;
}

CrossMoments cross_moment_fluctuations(const EmbeddedEnsembleSpec& spec,
                                       std::span<const std::size_t> m_list, std::size_t workers) {
  if (m_list.empty()) throw DomainError("empty particle-number list");
  std::vector<std::shared_ptr<const ManyBodyBasis>> bases;
  for (std::size_t m : m_list) {
    EmbeddedEnsembleSpec s = spec;
    s.m = m;
    s.validate();
    bases.push_back(std::make_shared<const ManyBodyBasis>(
        SingleParticleSpace{spec.ell, spec.statistics, {}}, m));
  }
  const auto rows = parallel_map<std::vector<TraceMoments>>(
      spec.member_count, workers, [&](std::size_t member) {
        RandomStream rng(spec.seed, member);
        const KBodyCoefficients coeffs =
            sample_kbody(spec.ell, spec.k, spec.statistics, spec.v2, rng);
        std::vector<TraceMoments> row;
        for (const auto& b : bases) row.push_back(trace_moments(embed(coeffs, b).entries));
        return row;
      });
  return reduce_cross_moments(rows, {m_list.begin(), m_list.end()});
}

CrossMoments cross_moment_goe_control(const EmbeddedEnsembleSpec& spec,
                                      std::span<const std::size_t> m_list, std::size_t workers) {
  if (m_list.empty()) throw DomainError("empty particle-number list");
  std::vector<std::size_t> dims;
  for (std::size_t m : m_list) {
    const std::uint64_t d = dimension(spec.ell, m, spec.statistics);
    if (d > kDefaultMaxDenseDim) throw CapacityError("control dimension exceeds the dense cap");
    dims.push_back(static_cast<std::size_t>(d));
  }
  const auto rows = parallel_map<std::vector<TraceMoments>>(
      spec.member_count, workers, [&](std::size_t member) {
        RandomStream rng(spec.seed, member);
        std::vector<TraceMoments> row;
        for (std::size_t d : dims) row.push_back(trace_moments(sample_goe(d, spec.v2, rng)));
        return row;
      });
  return reduce_cross_moments(rows, {m_list.begin(), m_list.end()});
}

}  // namespace embrmt
