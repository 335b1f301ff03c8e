// Copyright 2026 The embrmt Authors
// SPDX-License-Identifier: Apache-2.0

#include "embrmt/moments.hpp"

#include <cmath>
#include <numbers>

#include "embrmt/errors.hpp"

namespace embrmt {

double MemberMoments::sigma() const { return std::sqrt(variance); }

MemberMoments moments(std::span<const double> values) {
  if (values.size() < 4) throw DomainError("moments need at least four values");
  const double n = static_cast<double>(values.size());
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= n;
  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (double v : values) {
    const double d = v - mean;
    const double d2 = d * d;
    m2 += d2;
    m3 += d2 * d;
    m4 += d2 * d2;
  }
  m2 /= n;
  m3 /= n;
  m4 /= n;
  if (!(m2 > 0.0) || m2 <= 1e-28 * std::max(1.0, mean * mean)) {
    throw DomainError("spectrum has zero variance");
  }
  return {mean, m2, m3 / std::pow(m2, 1.5), m4 / (m2 * m2) - 3.0};
}

double hermite_he(int n, double x) {
  if (n < 0) throw DomainError("Hermite degree must be non-negative");
  double prev = 1.0;
  if (n == 0) return prev;
  double cur = x;
  for (int k = 1; k < n; ++k) {
    const double next = x * cur - k * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

namespace {

double phi(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi); }

}  // namespace

double edgeworth_density(double x, double gamma1, double gamma2) {
  return phi(x) * (1.0 + gamma1 / 6.0 * hermite_he(3, x) + gamma2 / 24.0 * hermite_he(4, x) +
                   gamma1 * gamma1 / 72.0 * hermite_he(6, x));
}

double edgeworth_cdf(double x, double gamma1, double gamma2) {
  // d/dx [phi He_{n-1}] = -phi He_n.
  const double big_phi = 0.5 * std::erfc(-x / std::sqrt(2.0));
  return big_phi - phi(x) * (gamma1 / 6.0 * hermite_he(2, x) + gamma2 / 24.0 * hermite_he(3, x) +
                             gamma1 * gamma1 / 72.0 * hermite_he(5, x));
}

}  // namespace embrmt
