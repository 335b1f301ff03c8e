// Copyright 2026 The embrmt Authors
// SPDX-License-Identifier: Apache-2.0

#include "embrmt/decoherence.hpp"

#include <cmath>
#include <memory>
#include <numbers>
#include <string>

#include "embrmt/classical.hpp"
#include "embrmt/eigensolve.hpp"
#include "embrmt/embedded.hpp"
#include "embrmt/errors.hpp"
#include "embrmt/parallel.hpp"
#include "embrmt/unfolding.hpp"

namespace embrmt {

const char* to_string(EnvKind kind) noexcept {
  switch (kind) {
    case EnvKind::kGoe: return "goe";
    case EnvKind::kFegoe: return "fegoe";
    case EnvKind::kBegoe: return "begoe";
  }
  return "unknown";
}

namespace {

Statistics statistics_of(EnvKind kind) {
  return kind == EnvKind::kBegoe ? Statistics::kBoson : Statistics::kFermion;
}

// Polynomial orders tried after a failed Edgeworth unfolding.
constexpr int kFallbackMaxOrder = 9;

}  // namespace

void QubitEnvSpec::validate() const {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw ConfigError("lambda must be >= 0");
  if (member_count == 0) throw ConfigError("purity trace needs at least one member");
  if (env_kind == EnvKind::kGoe) {
    if (n < 2) throw ConfigError("GOE environment needs n >= 2");
  } else {
    try {
      const SingleParticleSpace space{ell, statistics_of(env_kind), {}};
      space.validate_particles(m);
      if (m < 2) throw ConfigError("embedded environment needs m >= 2 for a two-body H_e");
      if (statistics_of(env_kind) == Statistics::kFermion && ell < 2) {
        throw ConfigError("fermion environment needs ell >= 2");
      }
    } catch (const ConfigError&) {
      throw;
    } catch (const Error& e) {
      throw ConfigError(std::string("environment: ") + e.what());
    }
    const std::uint64_t d = dimension(ell, m, statistics_of(env_kind));
    if (n != 0 && d != n) {
      throw ConfigError("environment dimension " + std::to_string(d) + " of " +
                        to_string(env_kind) + " does not match n = " + std::to_string(n));
    }
    if (d < 2 || d > kDefaultMaxDenseDim) throw ConfigError("environment dimension out of range");
  }
  if (!times.empty()) {
    if (times.front() != 0.0) throw ConfigError("time grid must start at 0");
    for (std::size_t i = 1; i < times.size(); ++i) {
      if (!(times[i] > times[i - 1])) throw ConfigError("time grid must be strictly increasing");
    }
  }
  if (qubit_initial == QubitInitial::kCustom && std::norm(amp0) + std::norm(amp1) == 0.0) {
    throw ConfigError("custom qubit state has zero norm");
  }
}

std::size_t QubitEnvSpec::env_dim() const {
  if (env_kind == EnvKind::kGoe) return n;
  return static_cast<std::size_t>(dimension(ell, m, statistics_of(env_kind)));
}

std::vector<double> QubitEnvSpec::time_grid() const {
  return times.empty() ? default_time_grid() : times;
}

std::pair<Complex, Complex> QubitEnvSpec::qubit_amplitudes() const {
  switch (qubit_initial) {
    case QubitInitial::kSigmaXPlus: return {Complex(1.0 / std::numbers::sqrt2, 0.0), Complex(1.0 / std::numbers::sqrt2, 0.0)};
    case QubitInitial::kSigmaZEigenstate: return {Complex(1.0, 0.0), Complex(0.0, 0.0)};
    case QubitInitial::kCustom: {
      const double norm = std::sqrt(std::norm(amp0) + std::norm(amp1));
      return {amp0 / norm, amp1 / norm};
    }
  }
  return {};
}

std::vector<double> default_time_grid() {
  constexpr std::size_t kPoints = 512;
  std::vector<double> t(kPoints);
  for (std::size_t i = 0; i < kPoints; ++i) {
    t[i] = 10.0 * kHeisenbergTime * static_cast<double>(i) / static_cast<double>(kPoints - 1);
  }
  return t;
}

RealVector unfold_environment(const std::vector<double>& eigenvalues, EnvKind kind) {
  const std::size_t n = eigenvalues.size();
  if (n < 2) throw DomainError("environment spectrum needs at least two levels");
  std::vector<double> mapped;
  if (kind == EnvKind::kGoe) {
    // Levels beyond the analytic radius clamp onto the edges.
    const double r = goe_semicircle_radius(n, 1.0);
    for (double e : eigenvalues) mapped.push_back(static_cast<double>(n) * semicircle_cdf(e, r));
  } else {
    const Spectrum s{eigenvalues, 0, {}};
    UnfoldOptions opt;
    opt.edge_trim = 0.0;
    opt.rescale = Rescale::kNone;
    opt.method = UnfoldMethod::kSpectralEdgeworth;
    std::optional<UnfoldedSpectrum> u;
    try {
      u = unfold(s, opt);
    } catch (const UnfoldingError&) {
      opt.method = UnfoldMethod::kPolynomial;
      for (int order = kFallbackMaxOrder; order >= 1 && !u; --order) {
        opt.poly_order = order;
        try {
          u = unfold(s, opt);
        } catch (const UnfoldingError&) {
        }
      }
    }
    if (!u) throw UnfoldingError("no monotone unfolding for the environment spectrum");
    mapped = std::move(u->values);
  }
  const double d = (mapped.back() - mapped.front()) / static_cast<double>(n - 1);
  if (!(d > 0.0)) throw UnfoldingError("environment spectrum has no spread");
  RealVector out(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) out(static_cast<Eigen::Index>(i)) = mapped[i] / d;
  return out;
}

EnvironmentPair build_environment(const QubitEnvSpec& spec, const RandomStream& rng) {
  spec.validate();
  RandomStream hs = rng.split(0);
  RandomStream vs = rng.split(1);
  RealMatrix h, v;
  if (spec.env_kind == EnvKind::kGoe) {
    h = sample_goe(spec.n, 1.0, hs);
    v = sample_goe(spec.n, 1.0, vs);
  } else {
    const Statistics st = statistics_of(spec.env_kind);
    const auto basis =
        std::make_shared<const ManyBodyBasis>(SingleParticleSpace{spec.ell, st, {}}, spec.m);
    h = embed(sample_kbody(spec.ell, 2, st, 1.0, hs), basis).entries;
    v = embed(sample_kbody(spec.ell, 1, st, 1.0, vs), basis).entries;
  }
  std::vector<double> eig;
  if (spec.v_basis_mode == VBasisMode::kHeEigenbasis) {
    const Eigensystem es = eigh(h);
    eig.assign(es.values.data(), es.values.data() + es.values.size());
    const RealMatrix rotated = es.vectors.transpose() * v * es.vectors;
    v = 0.5 * (rotated + rotated.transpose());
  } else {
    eig = eigvals_symmetric(h).eigenvalues;
  }
  return {unfold_environment(eig, spec.env_kind), std::move(v)};
}

RealVector environment_state(std::size_t n, const RandomStream& rng) {
  RandomStream s = rng.split(2);
  RealVector psi(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < psi.size(); ++i) psi(i) = s.normal();
  return psi / psi.norm();
}

ComplexVector initial_state(const QubitEnvSpec& spec, const RealVector& psi_e) {
  const auto [a, b] = spec.qubit_amplitudes();
  const Eigen::Index n = psi_e.size();
  ComplexVector psi(2 * n);
  psi.head(n) = a * psi_e.cast<Complex>();
  psi.tail(n) = b * psi_e.cast<Complex>();
  return psi;
}

RealMatrix composite_hamiltonian(const EnvironmentPair& env, double lambda) {
  const Eigen::Index n = env.he_diagonal.size();
  if (env.ve.rows() != n || env.ve.cols() != n) throw DomainError("H_e and V_e sizes differ");
  RealMatrix h = RealMatrix::Zero(2 * n, 2 * n);
  h.topLeftCorner(n, n) = lambda * env.ve;
  h.bottomRightCorner(n, n) = -lambda * env.ve;
  for (Eigen::Index i = 0; i < n; ++i) {
    h(i, i) += 0.5 + env.he_diagonal(i);
    h(n + i, n + i) += -0.5 + env.he_diagonal(i);
  }
  return h;
}

FullEvolution::FullEvolution(const RealMatrix& h) {
  Eigensystem es = eigh(h);
  values_ = std::move(es.values);
  vectors_ = std::move(es.vectors);
}

ComplexVector FullEvolution::evolve(const ComplexVector& psi0, double t) const {
  if (psi0.size() != values_.size()) throw DomainError("state size does not match H");
  if (t == 0.0) return psi0;
  ComplexVector c = vectors_.transpose().cast<Complex>() * psi0;
  for (Eigen::Index i = 0; i < c.size(); ++i) c(i) *= std::polar(1.0, -values_(i) * t);
  return vectors_.cast<Complex>() * c;
}

std::vector<Complex> evolve_dephasing_fast(const EnvironmentPair& env, double lambda,
                                           const RealVector& psi_e,
                                           const std::vector<double>& times) {
  const Eigen::Index n = env.he_diagonal.size();
  if (psi_e.size() != n || env.ve.rows() != n) throw DomainError("environment sizes differ");
  RealMatrix hp = lambda * env.ve;
  hp.diagonal() += env.he_diagonal;
  RealMatrix hm = -lambda * env.ve;
  hm.diagonal() += env.he_diagonal;
  const Eigensystem ep = eigh(hp);
  const Eigensystem em = eigh(hm);
  const RealVector cp = ep.vectors.transpose() * psi_e;
  const RealVector cm = em.vectors.transpose() * psi_e;
  // f(t) = sum_jk cm_j e^{i em_j t} O_jk cp_k e^{-i ep_k t}, O = Wm^T Wp.
  const RealMatrix overlap = em.vectors.transpose() * ep.vectors;

  std::vector<Complex> f(times.size());
  constexpr std::size_t kChunk = 256;
  for (std::size_t start = 0; start < times.size(); start += kChunk) {
    const std::size_t count = std::min(kChunk, times.size() - start);
    const auto cols = static_cast<Eigen::Index>(count);
    RealMatrix ap_re(n, cols), ap_im(n, cols), am_re(n, cols), am_im(n, cols);
    for (Eigen::Index c = 0; c < cols; ++c) {
      const double t = times[start + static_cast<std::size_t>(c)];
      for (Eigen::Index j = 0; j < n; ++j) {
        const double pp = -ep.values(j) * t;
        const double pm = -em.values(j) * t;
        ap_re(j, c) = cp(j) * std::cos(pp);
        ap_im(j, c) = cp(j) * std::sin(pp);
        am_re(j, c) = cm(j) * std::cos(pm);
        am_im(j, c) = cm(j) * std::sin(pm);
      }
    }
    const RealMatrix b_re = overlap * ap_re;
    const RealMatrix b_im = overlap * ap_im;
    for (Eigen::Index c = 0; c < cols; ++c) {
      const std::size_t k = start + static_cast<std::size_t>(c);
      if (times[k] == 0.0) {
        f[k] = Complex(1.0, 0.0);
        continue;
      }
      // conj(am) . b
      const double re = am_re.col(c).dot(b_re.col(c)) + am_im.col(c).dot(b_im.col(c));
      const double im = am_re.col(c).dot(b_im.col(c)) - am_im.col(c).dot(b_re.col(c));
      f[k] = Complex(re, im);
    }
  }
  return f;
}

Eigen::Matrix2cd reduced_density(const ComplexVector& state) {
  if (state.size() % 2 != 0 || state.size() == 0) {
    throw DomainError("composite state needs an even, nonzero length");
  }
  if (std::abs(state.squaredNorm() - 1.0) > 1e-6) throw DomainError("state is not normalized");
  const Eigen::Index n = state.size() / 2;
  const auto top = state.head(n);
  const auto bottom = state.tail(n);
  Eigen::Matrix2cd rho;
  rho(0, 0) = top.squaredNorm();
  rho(1, 1) = bottom.squaredNorm();
  rho(0, 1) = bottom.dot(top);  // sum_e psi[0,e] conj(psi[1,e])
  rho(1, 0) = std::conj(rho(0, 1));
  return rho;
}

double purity(const Eigen::Matrix2cd& rho) { return (rho * rho).trace().real(); }

double dephasing_purity(Complex a, Complex b, Complex f) {
  // |a|^4 + |b|^4 + 2|a|^2|b|^2|f|^2 with |a|^2 + |b|^2 = 1; exactly 1 at |f| = 1.
  const double na = std::norm(a), nb = std::norm(b);
  const double pa = na / (na + nb), pb = nb / (na + nb);
  return 1.0 - 2.0 * pa * pb * (1.0 - std::norm(f));
}

std::vector<double> member_purity(const QubitEnvSpec& spec, std::size_t member,
                                  EvolutionPath path) {
  const RandomStream rng(spec.seed, member);
  const EnvironmentPair env = build_environment(spec, rng);
  const RealVector psi_e = environment_state(spec.env_dim(), rng);
  const std::vector<double> times = spec.time_grid();
  std::vector<double> p(times.size());
  if (path == EvolutionPath::kFast) {
    const auto [a, b] = spec.qubit_amplitudes();
    const std::vector<Complex> f = evolve_dephasing_fast(env, spec.lambda, psi_e, times);
    for (std::size_t i = 0; i < times.size(); ++i) p[i] = dephasing_purity(a, b, f[i]);
  } else {
    const FullEvolution u(composite_hamiltonian(env, spec.lambda));
    const ComplexVector psi0 = initial_state(spec, psi_e);
    for (std::size_t i = 0; i < times.size(); ++i) {
      p[i] = purity(reduced_density(u.evolve(psi0, times[i])));
    }
  }
  return p;
}

PurityTrace purity_trace(const QubitEnvSpec& spec, std::size_t workers, EvolutionPath path,
                         bool keep_members) {
  spec.validate();
  auto rows = parallel_map<std::vector<double>>(
      spec.member_count, workers, [&](std::size_t i) { return member_purity(spec, i, path); });
  PurityTrace out;
  out.times = spec.time_grid();
  const std::size_t t = out.times.size();
  const double count = static_cast<double>(rows.size());
  out.mean.assign(t, 0.0);
  out.stderrs.assign(t, 0.0);
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < t; ++i) out.mean[i] += r[i] / count;
  }
  if (rows.size() > 1) {
    for (std::size_t i = 0; i < t; ++i) {
      double ss = 0.0;
      for (const auto& r : rows) ss += (r[i] - out.mean[i]) * (r[i] - out.mean[i]);
      out.stderrs[i] = std::sqrt(ss / (count - 1.0) / count);
    }
  }
  if (keep_members) out.members = std::move(rows);
  return out;
}

std::optional<double> first_crossing(const PurityTrace& trace, double level) {
  for (std::size_t i = 0; i < trace.mean.size(); ++i) {
    if (trace.mean[i] < level) {
      if (i == 0) return trace.times[0];
      const double t0 = trace.times[i - 1], t1 = trace.times[i];
      const double p0 = trace.mean[i - 1], p1 = trace.mean[i];
      return t0 + (p0 - level) / (p0 - p1) * (t1 - t0);
    }
  }
  return std::nullopt;
}

double plateau(const PurityTrace& trace, double tail) {
  if (trace.mean.empty()) throw DomainError("empty purity trace");
  if (!(tail > 0.0 && tail <= 1.0)) throw DomainError("plateau tail must lie in (0, 1]");
  const std::size_t n = trace.mean.size();
  const std::size_t start = n - std::max<std::size_t>(1, static_cast<std::size_t>(tail * n));
  double sum = 0.0;
  for (std::size_t i = start; i < n; ++i) sum += trace.mean[i];
  return sum / static_cast<double>(n - start);
}

}  // namespace embrmt
