// Copyright 2026 The embrmt Authors
// SPDX-License-Identifier: Apache-2.0

#include "embrmt/classical.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "embrmt/errors.hpp"

namespace embrmt {

void ClassicalEnsembleSpec::validate() const {
  if (beta != 1 && beta != 2 && beta != 4) {
    throw SpecError("Dyson index must be 1, 2 or 4, got " + std::to_string(beta));
  }
  if (n < 1) throw SpecError("matrix dimension must be at least 1");
  if (!(v2 > 0.0)) throw SpecError("element variance must be positive");
}

std::size_t MatrixSample::dim() const {
  return std::visit([](const auto& m) { return static_cast<std::size_t>(m.rows()); }, entries);
}

namespace {

double draw(RandomStream& rng, double variance, Deviate deviate) {
  return deviate == Deviate::kGaussian ? rng.gaussian(variance)
                                       : rng.centered_uniform(variance);
}

RealMatrix symmetric(std::size_t n, double v2, Deviate deviate, RandomStream& rng) {
  const auto dim = static_cast<Eigen::Index>(n);
  RealMatrix h(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    h(i, i) = draw(rng, 2.0 * v2, deviate);
    for (Eigen::Index j = i + 1; j < dim; ++j) {
      const double x = draw(rng, v2, deviate);
      h(i, j) = x;
      h(j, i) = x;
    }
  }
  return h;
}

RealMatrix antisymmetric(std::size_t n, double v2, Deviate deviate, RandomStream& rng) {
  const auto dim = static_cast<Eigen::Index>(n);
  RealMatrix h = RealMatrix::Zero(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    for (Eigen::Index j = i + 1; j < dim; ++j) {
      const double x = draw(rng, v2, deviate);
      h(i, j) = x;
      h(j, i) = -x;
    }
  }
  return h;
}

ComplexMatrix hermitian(std::size_t n, double v2, Deviate deviate, RandomStream& rng) {
  const auto dim = static_cast<Eigen::Index>(n);
  ComplexMatrix h(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    h(i, i) = Complex(draw(rng, 2.0 * v2, deviate), 0.0);
    for (Eigen::Index j = i + 1; j < dim; ++j) {
      const double re = draw(rng, v2, deviate);
      const double im = draw(rng, v2, deviate);
      h(i, j) = Complex(re, -im);
      h(j, i) = Complex(re, im);
    }
  }
  return h;
}

// H = H0 (x) 1 + i (H1 (x) s1 + H2 (x) s2 + H3 (x) s3), written out blockwise:
// block (a,b) of size 2x2 is
//   [ H0 + i H3        i H1 + H2 ]
//   [ i H1 - H2        H0 - i H3 ]
ComplexMatrix quaternion_real(std::size_t n, double v2, Deviate deviate, RandomStream& rng) {
  const RealMatrix h0 = symmetric(n, v2, deviate, rng);
  const RealMatrix h1 = antisymmetric(n, v2, deviate, rng);
  const RealMatrix h2 = antisymmetric(n, v2, deviate, rng);
  const RealMatrix h3 = antisymmetric(n, v2, deviate, rng);
  const auto dim = static_cast<Eigen::Index>(n);
  ComplexMatrix h(2 * dim, 2 * dim);
  const Complex i(0.0, 1.0);
  for (Eigen::Index a = 0; a < dim; ++a) {
    for (Eigen::Index b = 0; b < dim; ++b) {
      h(2 * a, 2 * b) = h0(a, b) + i * h3(a, b);
      h(2 * a, 2 * b + 1) = i * h1(a, b) + h2(a, b);
      h(2 * a + 1, 2 * b) = i * h1(a, b) - h2(a, b);
      h(2 * a + 1, 2 * b + 1) = h0(a, b) - i * h3(a, b);
    }
  }
  return h;
}

}  // namespace

MatrixSample sample_classical(const ClassicalEnsembleSpec& spec, RandomStream& rng) {
  spec.validate();
  switch (spec.beta) {
    case 1: return {1, symmetric(spec.n, spec.v2, spec.deviate, rng)};
    case 2: return {2, hermitian(spec.n, spec.v2, spec.deviate, rng)};
    default: return {4, quaternion_real(spec.n, spec.v2, spec.deviate, rng)};
  }
}

RealMatrix sample_goe(std::size_t n, double v2, RandomStream& rng) {
  return symmetric(n, v2, Deviate::kGaussian, rng);
}

double semicircle_density(double e, double radius) {
  if (!(radius > 0.0)) throw DomainError("semicircle radius must be positive");
  if (std::abs(e) >= radius) return 0.0;
  return 2.0 * std::sqrt(radius * radius - e * e) / (std::numbers::pi * radius * radius);
}

double semicircle_cdf(double e, double radius) {
  if (!(radius > 0.0)) throw DomainError("semicircle radius must be positive");
  if (e <= -radius) return 0.0;
  if (e >= radius) return 1.0;
  const double x = e / radius;
  return 0.5 + (x * std::sqrt(1.0 - x * x) + std::asin(x)) / std::numbers::pi;
}

double goe_semicircle_radius(std::size_t n, double v2) {
  return 2.0 * std::sqrt((static_cast<double>(n) + 1.0) * v2);
}

std::uint64_t catalan(unsigned p) {
  // C_{q+1} = C_q * 2(2q+1) / (q+2); the division is exact.
  unsigned __int128 c = 1;
  for (unsigned q = 0; q < p; ++q) {
    c = c * (2 * (2 * static_cast<unsigned __int128>(q) + 1)) / (q + 2);
    if (c > std::numeric_limits<std::uint64_t>::max()) {
      throw CapacityError("Catalan number C_" + std::to_string(p) + " overflows 64 bits");
    }
  }
  return static_cast<std::uint64_t>(c);
}

double log_jpdf(std::span<const double> eigenvalues, int beta) {
  if (eigenvalues.empty()) throw DomainError("log_jpdf needs at least one eigenvalue");
  if (beta != 1 && beta != 2 && beta != 4) throw SpecError("Dyson index must be 1, 2 or 4");
  const double b = beta;
  double repulsion = 0.0;
  double confinement = 0.0;
  for (std::size_t i = 0; i < eigenvalues.size(); ++i) {
    confinement += eigenvalues[i] * eigenvalues[i];
    for (std::size_t j = i + 1; j < eigenvalues.size(); ++j) {
      const double gap = std::abs(eigenvalues[i] - eigenvalues[j]);
      if (gap == 0.0) return -std::numeric_limits<double>::infinity();
      repulsion += std::log(gap);
    }
  }
  return b * repulsion - 0.25 * b * confinement;
}

}  // namespace embrmt
