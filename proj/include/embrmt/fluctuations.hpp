// Copyright 2026 The embrmt Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "embrmt/unfolding.hpp"

namespace embrmt {

/// Statistic on a strictly increasing abscissa grid with labeled reference curves.
struct StatCurve {
  std::string name;
  std::vector<double> grid;
  std::vector<double> values;
  std::vector<double> stderrs;
  std::vector<std::pair<std::string, std::vector<double>>> references;

  /// Throws DomainError unless the grid is strictly increasing and every
  /// column matches its length.
  void validate() const;
  const std::vector<double>& reference(const std::string& label) const;
};

inline constexpr double kEulerGamma = 0.57721566490153286061;

// Spacing distributions normalized to unit area and unit mean.
double wigner_surmise(double s, int beta);
double wigner_surmise_cdf(double s, int beta);
double poisson_spacing(double s);
double poisson_spacing_cdf(double s);
double semi_poisson_spacing(double s);
double semi_poisson_spacing_cdf(double s);

/// Adjacent spacings of every member, concatenated in member order.
std::vector<double> pooled_spacings(std::span<const UnfoldedSpectrum> members);

/// Kolmogorov-Smirnov distance between a sample and a continuous CDF.
double ks_distance(std::vector<double> sample, const std::function<double(double)>& cdf);

struct NnsdOptions {
  std::size_t bins = 50;
  double s_max = 4.0;
  int beta = 1;  // Wigner reference
};

/// Density-normalized pooled spacing histogram. The curve's grid holds bin
/// centers; the histogram keeps the bin edges. References: "wigner",
/// "poisson", "semipoisson" evaluated at bin centers.
struct NnsdResult {
  Histogram histogram;
  StatCurve curve;
  std::size_t spacing_count = 0;
};

NnsdResult nnsd(std::span<const UnfoldedSpectrum> members, const NnsdOptions& options = {});

double sigma2_goe(double r);
double delta3_goe(double l);
double delta3_poisson(double l);

enum class Averaging {
  kEnsemble,  // variance of counts pooled over all windows of all members
  kSpectral,  // variance within each member, then averaged over members
};

inline constexpr double kWindowStep = 0.5;

/// Variance of the number of levels in windows (x, x + r], x stepped by
/// kWindowStep across each member. Each r must satisfy 0.25 <= r <= span/4
/// where span is the shortest member extent. References: "goe", "poisson".
StatCurve number_variance(std::span<const UnfoldedSpectrum> members, std::span<const double> r_grid,
                          Averaging averaging = Averaging::kEnsemble);

/// Least-squares staircase rigidity over windows [x, x + L], x stepped by
/// kWindowStep. Each L must satisfy 1 <= L <= span. References: "goe",
/// "poisson" (L/15), "poisson_linear" (L).
StatCurve delta3(std::span<const UnfoldedSpectrum> members, std::span<const double> l_grid);

/// Delta3 from a measured number variance through
///   (2/L^4) int_0^L (L^3 - 2 L^2 r + r^3) Sigma2(r) dr,
/// with Sigma2 sampled on a uniform grid of step `dr` (Simpson's rule).
StatCurve delta3_from_sigma2(std::span<const UnfoldedSpectrum> members,
                             std::span<const double> l_grid, double dr = 0.05);

/// Delta3 of one window's levels (positions relative to the window start,
/// all inside [0, L]).
double delta3_window(std::span<const double> levels, double l);

/// Sigma2_s = [Sigma2_e - (L^2 - 1/6) s2] / (1 - s2), s2 = sigma^2 / D^2.
/// Needs 0 <= s2 < 1.
StatCurve flores_correction(const StatCurve& sigma2_ensemble, double s2);

/// Relative variance of the members' mean spacings in a common unfolding
/// frame: var(frame_spacing) / mean(frame_spacing)^2.
double spacing_scatter(std::span<const UnfoldedSpectrum> members);

}  // namespace embrmt
