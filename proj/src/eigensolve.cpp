// Copyright 2026 The embrmt Authors
// SPDX-License-Identifier: Apache-2.0

#include "embrmt/eigensolve.hpp"

#include <Eigen/Eigenvalues>

#include "embrmt/errors.hpp"

namespace embrmt {
namespace {

template <typename Matrix>
void check_symmetric(const Matrix& h) {
  if (h.rows() != h.cols()) throw DomainError("eigensolve needs a square matrix");
  if (h.size() == 0) throw DomainError("eigensolve needs a non-empty matrix");
  const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
  const double asym = (h - h.adjoint()).cwiseAbs().maxCoeff();
  if (asym > kSymmetryTolerance * scale) {
    throw DomainError("matrix is not symmetric (asymmetry " + std::to_string(asym) + ")");
  }
}

template <typename Matrix>
Spectrum solve(const Matrix& h) {
  check_symmetric(h);
  const Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericalError("symmetric eigensolve did not converge");
  const RealVector& ev = es.eigenvalues();
  return {std::vector<double>(ev.data(), ev.data() + ev.size()), 0, {}};
}

}  // namespace

Spectrum eigvals_symmetric(const RealMatrix& h) { return solve(h); }

Spectrum eigvals_symmetric(const ComplexMatrix& h) { return solve(h); }

Spectrum eigvals_symmetric(const MatrixSample& sample) {
  return sample.is_real() ? solve(sample.real()) : solve(sample.complex());
}

Eigensystem eigh(const RealMatrix& h) {
  check_symmetric(h);
  const Eigen::SelfAdjointEigenSolver<RealMatrix> es(h, Eigen::ComputeEigenvectors);
  if (es.info() != Eigen::Success) throw NumericalError("symmetric eigensolve did not converge");
  return {es.eigenvalues(), es.eigenvectors()};
}

Spectrum kramers_deduplicate(const Spectrum& s) {
  if (s.size() % 2 != 0) throw DomainError("Kramers doublets need an even number of levels");
  Spectrum out{{}, s.member_id, s.tag};
  out.eigenvalues.reserve(s.size() / 2);
  for (std::size_t i = 0; i < s.size(); i += 2) out.eigenvalues.push_back(s.eigenvalues[i]);
  return out;
}

}  // namespace embrmt
