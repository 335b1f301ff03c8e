// Copyright 2026 The embrmt Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "embrmt/eigensolve.hpp"
#include "embrmt/moments.hpp"

namespace embrmt {

enum class UnfoldMethod {
  kEnsembleSemicircle,  // one semicircle CDF shared by all members
  kSpectralEdgeworth,   // Edgeworth CDF from the member's own moments
  kEnsembleEdgeworth,   // Edgeworth CDF from pooled ensemble moments
  kPolynomial,          // least-squares polynomial fit to the member's staircase
};

const char* to_string(UnfoldMethod method) noexcept;

enum class Rescale {
  kPerMember,  // divide by the member's own mean retained spacing
  kNone,       // keep the common N F(E) frame (see rescale_common)
};

struct UnfoldOptions {
  UnfoldMethod method = UnfoldMethod::kSpectralEdgeworth;
  double edge_trim = 0.1;  // fraction of levels dropped at each edge
  int poly_order = 7;
  // Ensemble semicircle parameters.
  double center = 0.0;
  double radius = 0.0;
  // Ensemble Edgeworth parameters.
  MemberMoments ensemble{};
  Rescale rescale = Rescale::kPerMember;
};

struct UnfoldedSpectrum {
  std::vector<double> values;  // ascending, retained levels only
  UnfoldMethod method = UnfoldMethod::kSpectralEdgeworth;
  int poly_order = 0;
  double edge_trim = 0.0;
  double frame_spacing = 1.0;  // mean retained spacing before rescaling
  std::size_t member_id = 0;

  double mean_spacing() const;
};

/// Maps E_i -> N F(E_i) through a smooth CDF, drops floor(edge_trim N) levels
/// at each edge and rescales the rest to unit mean spacing. Raises
/// UnfoldingError when the fitted density is negative over the retained range.
UnfoldedSpectrum unfold(const Spectrum& spectrum, const UnfoldOptions& options);

/// Retries `unfold` with the trim widened by `step` until it succeeds or the
/// trim would exceed `max_trim`.
UnfoldedSpectrum unfold_adaptive(const Spectrum& spectrum, UnfoldOptions options,
                                 double max_trim = 0.4, double step = 0.05);

/// Divides every member by the ensemble-mean frame spacing so the pooled
/// sequence has unit mean spacing while each member keeps its own scale.
void rescale_common(std::span<UnfoldedSpectrum> members);

/// Shifts a spectrum to zero centroid.
Spectrum recenter(const Spectrum& s);

/// Moments of all eigenvalues pooled across members.
MemberMoments pooled_moments(std::span<const Spectrum> members);

/// Radius of the semicircle with the given second central moment (R = 2 sigma).
double semicircle_radius_from_variance(double variance);

/// Histogram with `bins` equal bins on [lo, hi). Values outside are ignored.
/// Densities are count / (scale * width).
struct Histogram {
  double lo = 0.0;
  double hi = 1.0;
  std::vector<double> counts;
  std::vector<double> density;

  std::size_t bins() const { return counts.size(); }
  double width() const;
  double center(std::size_t i) const;
  double left(std::size_t i) const;
  double right(std::size_t i) const;
};

Histogram histogram(std::span<const double> values, std::size_t bins, double lo, double hi,
                    double scale);

/// Squared L2 distance between a histogram density and a reference density
/// evaluated at bin centers: sum (h_i - f(c_i))^2 width.
double l2_error(const Histogram& h, const std::function<double(double)>& reference);

/// Largest |h_i - f(c_i)| over bins whose centers lie inside (lo_in, hi_in),
/// divided by the peak of the reference.
double max_interior_deviation(const Histogram& h, const std::function<double(double)>& reference,
                              double lo_in, double hi_in);

/// Semicircle radius minimizing l2_error over [r_lo, r_hi] (golden section).
double fit_semicircle_radius(const Histogram& h, double r_lo, double r_hi);

}  // namespace embrmt
