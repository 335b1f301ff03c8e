// Copyright 2026 The embrmt Authors
// SPDX-License-Identifier: Apache-2.0

#include "embrmt/fluctuations.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "embrmt/errors.hpp"

namespace embrmt {

using std::numbers::pi;

void StatCurve::validate() const {
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) throw DomainError(name + ": grid is not strictly increasing");
  }
  if (values.size() != grid.size() || (!stderrs.empty() && stderrs.size() != grid.size())) {
    throw DomainError(name + ": value count does not match the grid");
  }
  for (const auto& [label, ref] : references) {
    if (ref.size() != grid.size()) throw DomainError(name + ": reference " + label + " mismatch");
  }
}

const std::vector<double>& StatCurve::reference(const std::string& label) const {
  for (const auto& [l, ref] : references) {
    if (l == label) return ref;
  }
  throw DomainError(name + ": no reference labeled " + label);
}

double wigner_surmise(double s, int beta) {
  if (s < 0.0) return 0.0;
  switch (beta) {
    case 1: return pi / 2.0 * s * std::exp(-pi * s * s / 4.0);
    case 2: return 32.0 / (pi * pi) * s * s * std::exp(-4.0 * s * s / pi);
    case 4:
      return std::pow(2.0, 18) / (729.0 * pi * pi * pi) * std::pow(s, 4) *
             std::exp(-64.0 * s * s / (9.0 * pi));
    default: throw SpecError("Wigner surmise needs beta in {1, 2, 4}");
  }
}

double wigner_surmise_cdf(double s, int beta) {
  if (s <= 0.0) {
    if (beta != 1 && beta != 2 && beta != 4) throw SpecError("Wigner surmise needs beta in {1, 2, 4}");
    return 0.0;
  }
  switch (beta) {
    case 1: return 1.0 - std::exp(-pi * s * s / 4.0);
    case 2: {
      const double a = 4.0 / pi;
      return std::erf(std::sqrt(a) * s) - 2.0 * std::sqrt(a / pi) * s * std::exp(-a * s * s);
    }
    case 4: {
      // int_0^s t^4 e^{-a t^2} dt in closed form.
      const double a = 64.0 / (9.0 * pi);
      const double c = std::pow(2.0, 18) / (729.0 * pi * pi * pi);
      const double g = std::exp(-a * s * s);
      const double integral = 3.0 * std::sqrt(pi) / (8.0 * std::pow(a, 2.5)) * std::erf(std::sqrt(a) * s) -
                              g * (s * s * s / (2.0 * a) + 3.0 * s / (4.0 * a * a));
      return c * integral;
    }
    default: throw SpecError("Wigner surmise needs beta in {1, 2, 4}");
  }
}

double poisson_spacing(double s) { return s < 0.0 ? 0.0 : std::exp(-s); }
double poisson_spacing_cdf(double s) { return s <= 0.0 ? 0.0 : -std::expm1(-s); }
double semi_poisson_spacing(double s) { return s < 0.0 ? 0.0 : 4.0 * s * std::exp(-2.0 * s); }
double semi_poisson_spacing_cdf(double s) {
  return s <= 0.0 ? 0.0 : 1.0 - (1.0 + 2.0 * s) * std::exp(-2.0 * s);
}

std::vector<double> pooled_spacings(std::span<const UnfoldedSpectrum> members) {
  std::vector<double> out;
  for (const auto& m : members) {
    for (std::size_t i = 1; i < m.values.size(); ++i) out.push_back(m.values[i] - m.values[i - 1]);
  }
  return out;
}

double ks_distance(std::vector<double> sample, const std::function<double(double)>& cdf) {
  if (sample.empty()) throw DomainError("KS distance of an empty sample");
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = cdf(sample[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

NnsdResult nnsd(std::span<const UnfoldedSpectrum> members, const NnsdOptions& options) {
  if (members.empty()) throw DomainError("NNSD needs at least one member");
  const std::vector<double> s = pooled_spacings(members);
  if (s.empty()) throw DomainError("no spacings to histogram");
  NnsdResult out;
  out.spacing_count = s.size();
  out.histogram = histogram(s, options.bins, 0.0, options.s_max, static_cast<double>(s.size()));
  StatCurve& c = out.curve;
  c.name = "nnsd";
  std::vector<double> wig, poi, semi;
  for (std::size_t i = 0; i < out.histogram.bins(); ++i) {
    const double x = out.histogram.center(i);
    c.grid.push_back(x);
    c.values.push_back(out.histogram.density[i]);
    // Poisson counting error of the bin.
    c.stderrs.push_back(std::sqrt(out.histogram.counts[i]) /
                        (static_cast<double>(s.size()) * out.histogram.width()));
    wig.push_back(wigner_surmise(x, options.beta));
    poi.push_back(poisson_spacing(x));
    semi.push_back(semi_poisson_spacing(x));
  }
  c.references = {{"wigner", wig}, {"poisson", poi}, {"semipoisson", semi}};
  return out;
}

double sigma2_goe(double r) {
  if (!(r > 0.0)) throw DomainError("GOE number variance needs r > 0");
  return 2.0 / (pi * pi) * (std::log(2.0 * pi * r) + 1.0 + kEulerGamma - pi * pi / 8.0);
}

double delta3_goe(double l) {
  if (!(l > 0.0)) throw DomainError("GOE Delta3 needs L > 0");
  return (std::log(2.0 * pi * l) + kEulerGamma - 1.25 - pi * pi / 8.0) / (pi * pi);
}

double delta3_poisson(double l) { return l / 15.0; }

namespace {

double shortest_span(std::span<const UnfoldedSpectrum> members) {
  if (members.empty()) throw DomainError("statistic needs at least one member");
  double span = std::numeric_limits<double>::infinity();
  for (const auto& m : members) {
    if (m.values.size() < 2) throw DomainError("member has fewer than two levels");
    span = std::min(span, m.values.back() - m.values.front());
  }
  return span;
}

struct Pooled {
  double value = 0.0;
  double stderr_ = 0.0;
};

// Per-member window statistics: count mean / second moment / variance.
struct MemberCounts {
  double windows = 0.0;
  double sum = 0.0;
  double sum2 = 0.0;
};

MemberCounts window_counts(const std::vector<double>& v, double r) {
  MemberCounts mc;
  const double last = v.back() - r;
  for (double x = v.front(); x <= last; x += kWindowStep) {
    const auto a = std::upper_bound(v.begin(), v.end(), x);
    const auto b = std::upper_bound(a, v.end(), x + r);
    const double n = static_cast<double>(b - a);
    mc.windows += 1.0;
    mc.sum += n;
    mc.sum2 += n * n;
  }
  return mc;
}

double member_stderr(const std::vector<double>& per_member) {
  const std::size_t m = per_member.size();
  if (m < 2) return 0.0;
  double mean = 0.0;
  for (double v : per_member) mean += v;
  mean /= static_cast<double>(m);
  double ss = 0.0;
  for (double v : per_member) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / static_cast<double>(m - 1) / static_cast<double>(m));
}

Pooled sigma2_at(std::span<const UnfoldedSpectrum> members, double r, Averaging averaging) {
  if (r == 0.0) return {};
  double windows = 0.0, sum = 0.0, sum2 = 0.0;
  std::vector<double> per_member;
  per_member.reserve(members.size());
  for (const auto& m : members) {
    const MemberCounts mc = window_counts(m.values, r);
    if (mc.windows == 0.0) throw DomainError("window longer than a member spectrum");
    windows += mc.windows;
    sum += mc.sum;
    sum2 += mc.sum2;
    const double mean = mc.sum / mc.windows;
    per_member.push_back(std::max(0.0, mc.sum2 / mc.windows - mean * mean));
  }
  double value;
  if (averaging == Averaging::kEnsemble) {
    const double mean = sum / windows;
    value = std::max(0.0, sum2 / windows - mean * mean);
  } else {
    value = 0.0;
    for (double v : per_member) value += v;
    value /= static_cast<double>(per_member.size());
  }
  return {value, member_stderr(per_member)};
}

}  // namespace

namespace {

// Grid check for a curve whose values are not filled yet.
void check_grid(const StatCurve& c) {
  StatCurve probe = c;
  probe.values.assign(c.grid.size(), 0.0);
  probe.validate();
}

}  // namespace

StatCurve number_variance(std::span<const UnfoldedSpectrum> members, std::span<const double> r_grid,
                          Averaging averaging) {
  const double span = shortest_span(members);
  StatCurve c;
  c.name = averaging == Averaging::kEnsemble ? "sigma2" : "sigma2_spectral";
  c.grid.assign(r_grid.begin(), r_grid.end());
  check_grid(c);
  std::vector<double> goe, poisson;
  for (double r : r_grid) {
    if (r < 0.25 || r > span / 4.0) {
      throw DomainError("number variance at r = " + std::to_string(r) +
                        " needs 0.25 <= r <= span/4 = " + std::to_string(span / 4.0));
    }
    const Pooled p = sigma2_at(members, r, averaging);
    c.values.push_back(p.value);
    c.stderrs.push_back(p.stderr_);
    goe.push_back(sigma2_goe(r));
    poisson.push_back(r);
  }
  c.references = {{"goe", goe}, {"poisson", poisson}};
  return c;
}

double delta3_window(std::span<const double> levels, double l) {
  if (!(l > 0.0)) throw DomainError("Delta3 window length must be positive");
  // Staircase N(u) on u in [-L/2, L/2], fitted by A u + B. The linear and
  // constant parts decouple because u is centered.
  double i0 = 0.0, i1 = 0.0, j2 = 0.0;
  double prev = -l / 2.0;
  double count = 0.0;
  const auto accumulate = [&](double to) {
    const double w = to - prev;
    i0 += count * count * w;
    i1 += count * w;
    j2 += count * 0.5 * (to * to - prev * prev);
    prev = to;
  };
  for (double y : levels) {
    accumulate(std::clamp(y - l / 2.0, -l / 2.0, l / 2.0));
    count += 1.0;
  }
  accumulate(l / 2.0);
  const double a = j2 / (l * l * l / 12.0);
  const double b = i1 / l;
  return std::max(0.0, (i0 - a * j2 - b * i1) / l);
}

StatCurve delta3(std::span<const UnfoldedSpectrum> members, std::span<const double> l_grid) {
  const double span = shortest_span(members);
  StatCurve c;
  c.name = "delta3";
  c.grid.assign(l_grid.begin(), l_grid.end());
  check_grid(c);
  std::vector<double> goe, poisson, linear, rel;
  for (double l : l_grid) {
    if (l < 1.0 || l > span) {
      throw DomainError("Delta3 at L = " + std::to_string(l) + " needs 1 <= L <= span");
    }
    double total = 0.0, windows = 0.0;
    std::vector<double> per_member;
    for (const auto& m : members) {
      const auto& v = m.values;
      double msum = 0.0, mwin = 0.0;
      for (double x = v.front(); x <= v.back() - l; x += kWindowStep) {
        const auto a = std::lower_bound(v.begin(), v.end(), x);
        const auto b = std::upper_bound(a, v.end(), x + l);
        rel.assign(a, b);
        for (double& y : rel) y -= x;
        msum += delta3_window(rel, l);
        mwin += 1.0;
      }
      if (mwin == 0.0) throw DomainError("window longer than a member spectrum");
      total += msum;
      windows += mwin;
      per_member.push_back(msum / mwin);
    }
    c.values.push_back(total / windows);
    c.stderrs.push_back(member_stderr(per_member));
    goe.push_back(delta3_goe(l));
    poisson.push_back(delta3_poisson(l));
    linear.push_back(l);
  }
  c.references = {{"goe", goe}, {"poisson", poisson}, {"poisson_linear", linear}};
  return c;
}

StatCurve delta3_from_sigma2(std::span<const UnfoldedSpectrum> members,
                             std::span<const double> l_grid, double dr) {
  const double span = shortest_span(members);
  if (!(dr > 0.0)) throw DomainError("integration step must be positive");
  StatCurve c;
  c.name = "delta3_integral";
  c.grid.assign(l_grid.begin(), l_grid.end());
  check_grid(c);
  std::vector<double> goe, poisson, linear;
  for (double l : l_grid) {
    if (l < 1.0 || l > span) {
      throw DomainError("Delta3 at L = " + std::to_string(l) + " needs 1 <= L <= span");
    }
    auto n = static_cast<std::size_t>(std::ceil(l / dr));
    n += n % 2;
    const double h = l / static_cast<double>(n);
    double sum = 0.0;
    for (std::size_t i = 0; i <= n; ++i) {
      const double r = h * static_cast<double>(i);
      const double w = (i == 0 || i == n) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
      const double kernel = l * l * l - 2.0 * l * l * r + r * r * r;
      sum += w * kernel * sigma2_at(members, r, Averaging::kEnsemble).value;
    }
    c.values.push_back(2.0 / (l * l * l * l) * sum * h / 3.0);
    goe.push_back(delta3_goe(l));
    poisson.push_back(delta3_poisson(l));
    linear.push_back(l);
  }
  c.stderrs.assign(c.grid.size(), 0.0);
  c.references = {{"goe", goe}, {"poisson", poisson}, {"poisson_linear", linear}};
  return c;
}

StatCurve flores_correction(const StatCurve& sigma2_ensemble, double s2) {
  if (!(s2 >= 0.0 && s2 < 1.0)) throw DomainError("Flores correction needs 0 <= sigma^2/D^2 < 1");
  sigma2_ensemble.validate();
  StatCurve c = sigma2_ensemble;
  c.name = "sigma2_flores";
  for (std::size_t i = 0; i < c.grid.size(); ++i) {
    const double l = c.grid[i];
    c.values[i] = (c.values[i] - (l * l - 1.0 / 6.0) * s2) / (1.0 - s2);
    if (i < c.stderrs.size()) c.stderrs[i] /= (1.0 - s2);
  }
  return c;
}

double spacing_scatter(std::span<const UnfoldedSpectrum> members) {
  if (members.size() < 2) throw DomainError("spacing scatter needs at least two members");
  double mean = 0.0;
  for (const auto& m : members) mean += m.frame_spacing;
  mean /= static_cast<double>(members.size());
  double ss = 0.0;
  for (const auto& m : members) ss += (m.frame_spacing - mean) * (m.frame_spacing - mean);
  return ss / static_cast<double>(members.size() - 1) / (mean * mean);
}

}  // namespace embrmt
