// Copyright 2026 The embrmt Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "embrmt/classical.hpp"
#include "embrmt/types.hpp"

namespace embrmt {

/// Ascending eigenvalues of one ensemble member.
struct Spectrum {
  std::vector<double> eigenvalues;
  std::size_t member_id = 0;
  std::string tag;

  std::size_t size() const { return eigenvalues.size(); }
};

/// Relative asymmetry tolerance accepted by the symmetric eigensolvers.
inline constexpr double kSymmetryTolerance = 1e-12;

/// Full ascending spectrum. Throws DomainError when the input is not
/// symmetric (Hermitian) to within kSymmetryTolerance * max|H|.
Spectrum eigvals_symmetric(const RealMatrix& h);
Spectrum eigvals_symmetric(const ComplexMatrix& h);
Spectrum eigvals_symmetric(const MatrixSample& sample);

/// Eigenvalues (ascending) and orthonormal eigenvectors as columns.
struct Eigensystem {
  RealVector values;
  RealMatrix vectors;
};

Eigensystem eigh(const RealMatrix& h);

/// Keeps one level of each Kramers doublet (even positions of the sorted
/// list). Throws DomainError on an odd-length spectrum.
Spectrum kramers_deduplicate(const Spectrum& s);

}  // namespace embrmt
