// Copyright 2026 The embrmt Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>

namespace embrmt {

struct MemberMoments {
  double centroid = 0.0;
  double variance = 0.0;
  double gamma1 = 0.0;  // skewness
  double gamma2 = 0.0;  // excess kurtosis

  double sigma() const;
};

/// Central moments of a spectrum. Needs at least four values; a spectrum
/// with zero variance raises DomainError.
MemberMoments moments(std::span<const double> values);

/// Probabilists' Hermite polynomial He_n(x).
double hermite_he(int n, double x);

/// Edgeworth-corrected Gaussian density of the standardized variable x:
///   phi(x) [1 + g1/6 He3 + g2/24 He4 + g1^2/72 He6].
/// Not positive definite; tails can go negative for large |g1|, |g2|.
double edgeworth_density(double x, double gamma1, double gamma2);

/// Integral of edgeworth_density from -inf to x.
double edgeworth_cdf(double x, double gamma1, double gamma2);

}  // namespace embrmt
