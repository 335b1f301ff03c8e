// Copyright 2026 The embrmt Authors
// SPDX-License-Identifier: Apache-2.0

#include "embrmt/unfolding.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "embrmt/classical.hpp"
#include "embrmt/errors.hpp"
#include "embrmt/types.hpp"

namespace embrmt {

const char* to_string(UnfoldMethod method) noexcept {
  switch (method) {
    case UnfoldMethod::kEnsembleSemicircle: return "ensemble-semicircle";
    case UnfoldMethod::kSpectralEdgeworth: return "spectral-edgeworth";
    case UnfoldMethod::kEnsembleEdgeworth: return "ensemble-edgeworth";
    case UnfoldMethod::kPolynomial: return "polynomial";
  }
  return "unknown";
}

double UnfoldedSpectrum::mean_spacing() const {
  if (values.size() < 2) return 0.0;
  return (values.back() - values.front()) / static_cast<double>(values.size() - 1);
}

namespace {

constexpr std::size_t kDensityGrid = 256;

// Smooth CDF and its density for one member.
struct SmoothCdf {
  std::function<double(double)> cdf;
  std::function<double(double)> density;
};

SmoothCdf edgeworth_map(const MemberMoments& mm) {
  const double c = mm.centroid, s = mm.sigma();
  const double g1 = mm.gamma1, g2 = mm.gamma2;
  return {[=](double e) { return edgeworth_cdf((e - c) / s, g1, g2); },
          [=](double e) { return edgeworth_density((e - c) / s, g1, g2) / s; }};
}

SmoothCdf polynomial_map(const std::vector<double>& ev, int order) {
  const std::size_t n = ev.size();
  const double lo = ev.front(), hi = ev.back();
  const double mid = 0.5 * (lo + hi);
  const double half = hi > lo ? 0.5 * (hi - lo) : 1.0;
  const int p = std::clamp(order, 1, static_cast<int>(n) - 1);
  RealMatrix a(static_cast<Eigen::Index>(n), p + 1);
  RealVector y(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const double x = (ev[i] - mid) / half;
    // Legendre basis keeps the normal equations well conditioned on [-1, 1].
    double p0 = 1.0, p1 = x;
    a(static_cast<Eigen::Index>(i), 0) = p0;
    if (p >= 1) a(static_cast<Eigen::Index>(i), 1) = p1;
    for (int k = 1; k < p; ++k) {
      const double p2 = ((2.0 * k + 1.0) * x * p1 - k * p0) / (k + 1.0);
      a(static_cast<Eigen::Index>(i), k + 1) = p2;
      p0 = p1;
      p1 = p2;
    }
    y(static_cast<Eigen::Index>(i)) = (static_cast<double>(i) + 0.5) / static_cast<double>(n);
  }
  const RealVector coef = a.colPivHouseholderQr().solve(y);
  auto eval = [coef, p, mid, half](double e, bool derivative) {
    const double x = (e - mid) / half;
    // P_k and P_k' by recurrence; P'_{k+1} = P'_{k-1} + (2k+1) P_k.
    double p0 = 1.0, p1 = x, d0 = 0.0, d1 = 1.0;
    double value = coef(0) + coef(1) * p1;
    double slope = coef(1);
    for (int k = 1; k < p; ++k) {
      const double p2 = ((2.0 * k + 1.0) * x * p1 - k * p0) / (k + 1.0);
      const double d2 = d0 + (2.0 * k + 1.0) * p1;
      value += coef(k + 1) * p2;
      slope += coef(k + 1) * d2;
      p0 = p1;
      p1 = p2;
      d0 = d1;
      d1 = d2;
    }
    return derivative ? slope / half : value;
  };
  return {[eval](double e) { return eval(e, false); },
          [eval](double e) { return eval(e, true); }};
}

}  // namespace

UnfoldedSpectrum unfold(const Spectrum& spectrum, const UnfoldOptions& options) {
  const std::vector<double>& ev = spectrum.eigenvalues;
  const std::size_t n = ev.size();
  if (n < 10) throw DomainError("unfolding needs at least 10 levels");
  if (!std::is_sorted(ev.begin(), ev.end())) throw DomainError("spectrum is not ascending");
  if (!(options.edge_trim >= 0.0 && options.edge_trim < 0.5)) {
    throw DomainError("edge trim must lie in [0, 0.5)");
  }
  const auto trim =
      static_cast<std::size_t>(std::floor(options.edge_trim * static_cast<double>(n)));
  if (n - 2 * trim < 3) throw DomainError("edge trim leaves fewer than three levels");
  const double lo = ev[trim], hi = ev[n - trim - 1];

  SmoothCdf map;
  switch (options.method) {
    case UnfoldMethod::kEnsembleSemicircle: {
      const double c = options.center, r = options.radius;
      if (!(r > 0.0)) throw DomainError("ensemble semicircle unfolding needs a positive radius");
      if (lo <= c - r || hi >= c + r) {
        throw UnfoldingError("retained levels fall outside the semicircle support");
      }
      map = {[=](double e) { return semicircle_cdf(e - c, r); },
             [=](double e) { return semicircle_density(e - c, r); }};
      break;
    }
    case UnfoldMethod::kSpectralEdgeworth: map = edgeworth_map(moments(ev)); break;
    case UnfoldMethod::kEnsembleEdgeworth:
      if (!(options.ensemble.variance > 0.0)) {
        throw DomainError("ensemble Edgeworth unfolding needs pooled moments");
      }
      map = edgeworth_map(options.ensemble);
      break;
    case UnfoldMethod::kPolynomial: map = polynomial_map(ev, options.poly_order); break;
  }

  for (std::size_t g = 0; g <= kDensityGrid; ++g) {
    const double e = lo + (hi - lo) * static_cast<double>(g) / kDensityGrid;
    if (!(map.density(e) > 0.0)) {
      throw UnfoldingError(std::string("fitted ") + to_string(options.method) +
                           " density is not positive inside the retained range");
    }
  }

  UnfoldedSpectrum out;
  out.method = options.method;
  out.poly_order = options.method == UnfoldMethod::kPolynomial ? options.poly_order : 0;
  out.edge_trim = options.edge_trim;
  out.member_id = spectrum.member_id;
  out.values.reserve(n - 2 * trim);
  const double scale = static_cast<double>(n);
  for (std::size_t i = trim; i < n - trim; ++i) out.values.push_back(scale * map.cdf(ev[i]));
  const double d = out.mean_spacing();
  if (!(d > 0.0) || !std::isfinite(d)) throw UnfoldingError("unfolded spectrum has no spread");
  out.frame_spacing = d;
  if (options.rescale == Rescale::kPerMember) {
    for (double& v : out.values) v /= d;
  }
  return out;
}

UnfoldedSpectrum unfold_adaptive(const Spectrum& spectrum, UnfoldOptions options, double max_trim,
                                 double step) {
  for (;;) {
    try {
      return unfold(spectrum, options);
    } catch (const UnfoldingError&) {
      if (options.edge_trim + step > max_trim + 1e-12) throw;
      options.edge_trim += step;
    }
  }
}

void rescale_common(std::span<UnfoldedSpectrum> members) {
  if (members.empty()) return;
  double mean = 0.0;
  for (const auto& m : members) mean += m.frame_spacing;
  mean /= static_cast<double>(members.size());
  for (auto& m : members) {
    for (double& v : m.values) v /= mean;
  }
}

Spectrum recenter(const Spectrum& s) {
  if (s.eigenvalues.empty()) return s;
  const double c = std::accumulate(s.eigenvalues.begin(), s.eigenvalues.end(), 0.0) /
                   static_cast<double>(s.size());
  Spectrum out = s;
  for (double& v : out.eigenvalues) v -= c;
  return out;
}

MemberMoments pooled_moments(std::span<const Spectrum> members) {
  std::vector<double> all;
  for (const auto& m : members) all.insert(all.end(), m.eigenvalues.begin(), m.eigenvalues.end());
  return moments(all);
}

double semicircle_radius_from_variance(double variance) {
  if (!(variance > 0.0)) throw DomainError("semicircle variance must be positive");
  return 2.0 * std::sqrt(variance);
}

double Histogram::width() const { return (hi - lo) / static_cast<double>(counts.size()); }
double Histogram::left(std::size_t i) const { return lo + width() * static_cast<double>(i); }
double Histogram::right(std::size_t i) const { return lo + width() * static_cast<double>(i + 1); }
double Histogram::center(std::size_t i) const {
  return lo + width() * (static_cast<double>(i) + 0.5);
}

Histogram histogram(std::span<const double> values, std::size_t bins, double lo, double hi,
                    double scale) {
  if (bins == 0 || !(hi > lo)) throw DomainError("histogram needs bins > 0 and hi > lo");
  if (!(scale > 0.0)) throw DomainError("histogram scale must be positive");
  Histogram h{lo, hi, std::vector<double>(bins, 0.0), {}};
  const double w = h.width();
  for (double v : values) {
    if (!(v >= lo && v < hi)) continue;
    const auto b = std::min(bins - 1, static_cast<std::size_t>((v - lo) / w));
    h.counts[b] += 1.0;
  }
  h.density.resize(bins);
  for (std::size_t i = 0; i < bins; ++i) h.density[i] = h.counts[i] / (scale * w);
  return h;
}

double l2_error(const Histogram& h, const std::function<double(double)>& reference) {
  double sum = 0.0;
  for (std::size_t i = 0; i < h.bins(); ++i) {
    const double d = h.density[i] - reference(h.center(i));
    sum += d * d;
  }
  return sum * h.width();
}

double max_interior_deviation(const Histogram& h, const std::function<double(double)>& reference,
                              double lo_in, double hi_in) {
  double peak = 0.0, worst = 0.0;
  for (std::size_t i = 0; i < h.bins(); ++i) {
    const double f = reference(h.center(i));
    peak = std::max(peak, f);
    if (h.center(i) > lo_in && h.center(i) < hi_in) {
      worst = std::max(worst, std::abs(h.density[i] - f));
    }
  }
  if (!(peak > 0.0)) throw DomainError("reference density vanishes on the histogram range");
  return worst / peak;
}

double fit_semicircle_radius(const Histogram& h, double r_lo, double r_hi) {
  if (!(r_lo > 0.0 && r_hi > r_lo)) throw DomainError("invalid semicircle radius bracket");
  const auto cost = [&](double r) {
    return l2_error(h, [r](double e) { return semicircle_density(e, r); });
  };
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = r_lo, b = r_hi;
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = cost(c), fd = cost(d);
  for (int it = 0; it < 100 && (b - a) > 1e-10 * r_hi; ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = cost(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = cost(d);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace embrmt
