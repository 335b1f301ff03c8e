// Copyright 2026 The embrmt Authors
// SPDX-License-Identifier: Apache-2.0

#include "embrmt/orchestrator.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <sstream>

#include "embrmt/classical.hpp"
#include "embrmt/decoherence.hpp"
#include "embrmt/embedded.hpp"
#include "embrmt/errors.hpp"
#include "embrmt/fluctuations.hpp"
#include "embrmt/moments.hpp"
#include "embrmt/parallel.hpp"
#include "embrmt/version.hpp"
#include "json.hpp"

namespace embrmt {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string RunManifest::to_json() const {
  nlohmann::ordered_json j;
  j["tool_version"] = version;
  j["config"] = nlohmann::json::parse(config_json);
  j["config_hash"] = config_hash;
  j["stream_ids"] = stream_ids;
  nlohmann::ordered_json t = nlohmann::ordered_json::object();
  for (const auto& [name, seconds] : timings) t[name] = seconds;
  j["timings_seconds"] = t;
  nlohmann::ordered_json arts = nlohmann::ordered_json::array();
  for (const auto& a : artifacts) {
    arts.push_back({{"path", a.path}, {"sha256", a.sha256}, {"bytes", a.bytes}});
  }
  j["artifacts"] = arts;
  return j.dump(2) + "\n";
}

namespace {

using Clock = std::chrono::steady_clock;

// Accumulates CSV text; written in one piece so the recorded hash matches
// the file.
class Csv {
 public:
  Csv(const RunConfig& config, const std::string& hash, const std::vector<std::string>& columns) {
    out_ << "# embrmt " << version() << "\n";
    out_ << "# config_hash " << hash << "\n";
    out_ << "# command " << to_string(config.command) << "\n";
    for (std::size_t i = 0; i < columns.size(); ++i) out_ << (i ? "," : "") << columns[i];
    out_ << "\n";
  }

  void comment(const std::string& text) { comments_ << "# " << text << "\n"; }

  template <typename... Cells>
  void row(const Cells&... cells) {
    bool first = true;
    ((out_ << (first ? "" : ",") << cell(cells), first = false), ...);
    out_ << "\n";
  }

  std::string text() const {
    // Extra comments go after the fixed header block, before the column line.
    const std::string body = out_.str();
    if (comments_.str().empty()) return body;
    std::size_t pos = 0;
    for (int i = 0; i < 3; ++i) pos = body.find('\n', pos) + 1;
    return body.substr(0, pos) + comments_.str() + body.substr(pos);
  }

 private:
  static std::string cell(double v) { return format_double(v); }
  static std::string cell(const std::string& s) { return s; }
  static std::string cell(const char* s) { return s; }
  template <typename T>
    requires std::is_integral_v<T>
  static std::string cell(T v) {
    return std::to_string(v);
  }

  std::ostringstream out_;
  std::ostringstream comments_;
};

class Emitter {
 public:
  Emitter(const RunConfig& config, RunManifest& manifest)
      : config_(config), manifest_(manifest), dir_(config.output_dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    if (ec) throw IoError("cannot create output directory " + dir_.string() + ": " + ec.message());
  }

  Csv csv(const std::vector<std::string>& columns) const {
    return Csv(config_, manifest_.config_hash, columns);
  }

  void write(const std::string& name, const std::string& text) {
    const auto path = dir_ / name;
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    out << text;
    out.close();
    if (!out) throw IoError("write failed for " + path.string());
    manifest_.artifacts.push_back({name, sha256_hex(text), static_cast<std::uint64_t>(text.size())});
  }

  void write(const std::string& name, const Csv& csv) { write(name, csv.text()); }

 private:
  const RunConfig& config_;
  RunManifest& manifest_;
  std::filesystem::path dir_;
};

class PhaseTimer {
 public:
  explicit PhaseTimer(RunManifest& m) : manifest_(m), start_(Clock::now()) {}
  void lap(const std::string& name) {
    const auto now = Clock::now();
    manifest_.timings.emplace_back(name, std::chrono::duration<double>(now - start_).count());
    start_ = now;
  }

 private:
  RunManifest& manifest_;
  Clock::time_point start_;
};

int nnsd_beta(EnsembleKind kind) {
  return kind == EnsembleKind::kGue ? 2 : kind == EnsembleKind::kGse ? 4 : 1;
}

void write_curve(Emitter& em, const std::string& name, const StatCurve& c,
                 const std::vector<std::string>& extra_comments = {}) {
  Csv csv = em.csv({"abscissa", "value", "stderr", "ref_goe", "ref_poisson"});
  for (const auto& text : extra_comments) csv.comment(text);
  const auto& goe = c.reference("goe");
  const auto& poisson = c.reference("poisson");
  for (std::size_t i = 0; i < c.grid.size(); ++i) {
    csv.row(c.grid[i], c.values[i], c.stderrs[i], goe[i], poisson[i]);
  }
  em.write(name, csv);
}

void run_sample(const RunConfig& config, Emitter& em, PhaseTimer& timer) {
  const auto spectra = sample_spectra(config, false);
  timer.lap("sample_diagonalize");
  Csv csv = em.csv({"member", "index", "eigenvalue"});
  for (const auto& s : spectra) {
    for (std::size_t i = 0; i < s.size(); ++i) csv.row(s.member_id, i, s.eigenvalues[i]);
  }
  em.write("eigenvalues.csv", csv);
}

void run_moments(const RunConfig& config, Emitter& em, PhaseTimer& timer) {
  const auto spectra = sample_spectra(config, true);
  timer.lap("sample_diagonalize");
  Csv csv = em.csv({"member", "centroid", "variance", "gamma1", "gamma2"});
  std::vector<MemberMoments> all;
  for (const auto& s : spectra) {
    const MemberMoments mm = moments(s.eigenvalues);
    all.push_back(mm);
    csv.row(s.member_id, mm.centroid, mm.variance, mm.gamma1, mm.gamma2);
  }
  em.write("moments.csv", csv);

  Csv summary = em.csv({"statistic", "mean", "stderr"});
  const auto add = [&](const char* name, double MemberMoments::*field) {
    double mean = 0.0, ss = 0.0;
    const double n = static_cast<double>(all.size());
    for (const auto& mm : all) mean += mm.*field / n;
    for (const auto& mm : all) ss += (mm.*field - mean) * (mm.*field - mean);
    const double se = all.size() > 1 ? std::sqrt(ss / (n - 1.0) / n) : 0.0;
    summary.row(name, mean, se);
  };
  add("centroid", &MemberMoments::centroid);
  add("variance", &MemberMoments::variance);
  add("gamma1", &MemberMoments::gamma1);
  add("gamma2", &MemberMoments::gamma2);
  em.write("moments_summary.csv", summary);
  timer.lap("moments");
}

void run_density(const RunConfig& config, Emitter& em, PhaseTimer& timer) {
  const auto spectra = sample_spectra(config, true);
  timer.lap("sample_diagonalize");
  const StatisticsConfig& st = config.statistics;
  const MemberMoments pooled = pooled_moments(spectra);
  std::vector<double> x;
  for (const auto& s : spectra) {
    for (double e : s.eigenvalues) x.push_back((e - pooled.centroid) / pooled.sigma());
  }
  const double total = static_cast<double>(x.size());
  const double scale =
      st.density_scale == DensityScale::kUnit ? total : static_cast<double>(spectra.size());
  const double mass = total / scale;  // integral of the histogram density
  const Histogram h = histogram(x, st.density_bins, -st.density_range, st.density_range, scale);

  Csv counts = em.csv({"bin_left", "bin_right", "count"});
  for (std::size_t i = 0; i < h.bins(); ++i) counts.row(h.left(i), h.right(i), h.counts[i]);
  em.write("density.csv", counts);

  // Reference fits compare unit-mass densities.
  Histogram unit = h;
  for (double& d : unit.density) d /= mass;
  const double radius = fit_semicircle_radius(unit, 0.5, 2.0 * st.density_range);
  const auto semicircle = [radius](double e) { return semicircle_density(e, radius); };
  const auto edgeworth = [&pooled](double e) {
    return edgeworth_density(e, pooled.gamma1, pooled.gamma2);
  };
  Csv fit = em.csv({"x", "density", "edgeworth", "semicircle"});
  fit.comment("gamma1 " + format_double(pooled.gamma1) + " gamma2 " + format_double(pooled.gamma2) +
              " semicircle_radius " + format_double(radius));
  for (std::size_t i = 0; i < h.bins(); ++i) {
    const double c = h.center(i);
    fit.row(c, h.density[i], mass * edgeworth(c), mass * semicircle(c));
  }
  em.write("density_fit.csv", fit);

  Csv summary = em.csv({"reference", "l2_error", "max_interior_deviation"});
  summary.row("edgeworth", l2_error(unit, edgeworth),
              max_interior_deviation(unit, edgeworth, -st.density_range, st.density_range));
  summary.row("semicircle", l2_error(unit, semicircle),
              max_interior_deviation(unit, semicircle, -0.9 * radius, 0.9 * radius));
  em.write("density_summary.csv", summary);
  timer.lap("density");
}

void run_nnsd(const RunConfig& config, Emitter& em, PhaseTimer& timer) {
  const auto spectra = sample_spectra(config, true);
  timer.lap("sample_diagonalize");
  const auto unfolded = unfold_members(config, spectra);
  timer.lap("unfold");
  NnsdOptions opt;
  opt.bins = config.statistics.nnsd_bins;
  opt.s_max = config.statistics.s_max;
  opt.beta = nnsd_beta(config.ensemble.kind);
  const NnsdResult r = nnsd(unfolded, opt);
  Csv csv = em.csv({"bin_left", "bin_right", "density", "ref_wigner", "ref_poisson", "ref_semipoisson"});
  csv.comment("wigner_beta " + std::to_string(opt.beta) + " spacings " + std::to_string(r.spacing_count));
  const auto& wig = r.curve.reference("wigner");
  const auto& poi = r.curve.reference("poisson");
  const auto& semi = r.curve.reference("semipoisson");
  for (std::size_t i = 0; i < r.histogram.bins(); ++i) {
    csv.row(r.histogram.left(i), r.histogram.right(i), r.histogram.density[i], wig[i], poi[i], semi[i]);
  }
  em.write("nnsd.csv", csv);

  const std::vector<double> s = pooled_spacings(unfolded);
  Csv ks = em.csv({"reference", "ks_distance"});
  ks.row("wigner", ks_distance(s, [&](double x) { return wigner_surmise_cdf(x, opt.beta); }));
  ks.row("poisson", ks_distance(s, poisson_spacing_cdf));
  ks.row("semipoisson", ks_distance(s, semi_poisson_spacing_cdf));
  em.write("nnsd_ks.csv", ks);
  timer.lap("nnsd");
}

void run_sigma2(const RunConfig& config, Emitter& em, PhaseTimer& timer) {
  const auto spectra = sample_spectra(config, true);
  timer.lap("sample_diagonalize");
  const auto unfolded = unfold_members(config, spectra);
  timer.lap("unfold");
  const auto grid = config.resolved_r_grid();
  write_curve(em, "sigma2.csv", number_variance(unfolded, grid, Averaging::kEnsemble));
  timer.lap("sigma2");
  if (!config.statistics.flores) return;

  // Common-frame ensemble unfolding of re-centered members.
  std::vector<Spectrum> centered;
  for (const auto& s : spectra) centered.push_back(recenter(s));
  UnfoldOptions opt;
  opt.method = UnfoldMethod::kEnsembleEdgeworth;
  opt.ensemble = pooled_moments(centered);
  opt.edge_trim = config.statistics.edge_trim;
  opt.rescale = Rescale::kNone;
  std::vector<UnfoldedSpectrum> common;
  for (const auto& s : centered) {
    common.push_back(unfold_adaptive(s, opt, config.statistics.max_trim));
  }
  rescale_common(common);
  const double s2 = spacing_scatter(common);
  const StatCurve ensemble_curve = number_variance(common, grid, Averaging::kEnsemble);
  const std::vector<std::string> note{"spacing_scatter " + format_double(s2)};
  write_curve(em, "sigma2_ensemble.csv", ensemble_curve, note);
  write_curve(em, "sigma2_flores.csv", flores_correction(ensemble_curve, s2), note);
  timer.lap("sigma2_correction");
}

void run_delta3(const RunConfig& config, Emitter& em, PhaseTimer& timer) {
  const auto spectra = sample_spectra(config, true);
  timer.lap("sample_diagonalize");
  const auto unfolded = unfold_members(config, spectra);
  timer.lap("unfold");
  const auto grid = config.resolved_l_grid();
  write_curve(em, "delta3.csv", delta3(unfolded, grid));
  timer.lap("delta3_direct");
  write_curve(em, "delta3_integral.csv",
              delta3_from_sigma2(unfolded, grid, config.statistics.integral_step));
  timer.lap("delta3_integral");
}

void run_blocks(const RunConfig& config, Emitter& em, PhaseTimer& timer) {
  const EnsembleConfig& e = config.ensemble;
  const std::size_t m = config.blocks.m == 0 ? e.m : config.blocks.m;
  const SingleParticleSpace space{e.ell, e.statistics(), config.blocks.capacities};
  if (e.kind == EnsembleKind::kFegoe) {
    const BlockStructure bs = configuration_blocks(space, m);
    Csv blocks = em.csv({"block", "occupancies", "dim"});
    for (std::size_t b = 0; b < bs.blocks.size(); ++b) {
      std::string occ;
      for (std::size_t i = 0; i < bs.blocks[b].occupancies.size(); ++i) {
        occ += (i ? " " : "") + std::to_string(bs.blocks[b].occupancies[i]);
      }
      blocks.row(b, occ, bs.blocks[b].dim);
    }
    em.write("blocks.csv", blocks);
    Csv dist = em.csv({"block_i", "block_j", "distance", "code"});
    for (std::size_t i = 0; i < bs.blocks.size(); ++i) {
      for (std::size_t j = 0; j < bs.blocks.size(); ++j) {
        dist.row(i, j, bs.distance[i][j], transfer_code(bs.distance[i][j], e.k));
      }
    }
    em.write("block_transfer.csv", dist);
  }
  const ZeroPattern zp = zero_pattern(space, m, e.k, config.blocks.max_pattern_dim);
  std::string text = em.csv({"codes"}).text();
  for (std::size_t r = 0; r < zp.dim; ++r) {
    for (std::size_t c = 0; c < zp.dim; ++c) {
      text += (c ? "," : "");
      text += std::to_string(zp.at(r, c));
    }
    text += "\n";
  }
  em.write("zero_pattern.csv", text);
  timer.lap("blocks");
}

void write_cross(Emitter& em, const std::string& name, const CrossMoments& cm) {
  Csv csv = em.csv({"m", "m_prime", "sigma11", "sigma22", "z11", "z22"});
  for (std::size_t i = 0; i < cm.m_list.size(); ++i) {
    for (std::size_t j = 0; j < cm.m_list.size(); ++j) {
      const auto a = static_cast<Eigen::Index>(i), b = static_cast<Eigen::Index>(j);
      csv.row(cm.m_list[i], cm.m_list[j], cm.sigma11(a, b), cm.sigma22(a, b), cm.z11(a, b),
              cm.z22(a, b));
    }
  }
  em.write(name, csv);
}

void run_crossmoments(const RunConfig& config, Emitter& em, PhaseTimer& timer) {
  const EmbeddedEnsembleSpec spec = config.embedded_spec();
  write_cross(em, "crossmoments.csv",
              cross_moment_fluctuations(spec, config.crossmoments.m_list, config.workers));
  timer.lap("crossmoments");
  if (config.crossmoments.control) {
    write_cross(em, "crossmoments_goe_control.csv",
                cross_moment_goe_control(spec, config.crossmoments.m_list, config.workers));
    timer.lap("crossmoments_goe_control");
  }
}

void run_decohere(const RunConfig& config, Emitter& em, PhaseTimer& timer) {
  const DecohereConfig& d = config.decohere;
  for (const auto& env : d.resolved_environments()) {
    for (double lambda : d.lambdas) {
      QubitEnvSpec q;
      q.env_kind = env.kind;
      q.n = env.kind == EnvKind::kGoe ? env.n : 0;
      q.ell = env.ell;
      q.m = env.m;
      q.lambda = lambda;
      q.member_count = config.members;
      q.seed = *config.seed;
      q.times = d.resolved_times();
      q.qubit_initial = d.qubit;
      q.amp0 = d.amp0;
      q.amp1 = d.amp1;
      q.v_basis_mode = d.v_basis_mode;
      const PurityTrace trace = purity_trace(q, config.workers, d.path);
      Csv csv = em.csv({"t", "purity_mean", "purity_stderr"});
      csv.comment(std::string("environment ") + to_string(env.kind) + " dim " +
                  std::to_string(q.env_dim()) + " lambda " + format_double(lambda));
      for (std::size_t i = 0; i < trace.times.size(); ++i) {
        csv.row(trace.times[i], trace.mean[i], trace.stderrs[i]);
      }
      char label[64];
      std::snprintf(label, sizeof label, "%g", lambda);
      const std::string name = std::string("purity_") + to_string(env.kind) + "_lambda_" + label;
      em.write(name + ".csv", csv);
      timer.lap(name);
    }
  }
}

}  // namespace

std::vector<Spectrum> sample_spectra(const RunConfig& config, bool deduplicate) {
  const std::uint64_t seed = config.seed.value_or(0);
  if (config.ensemble.embedded()) {
    const EmbeddedEnsembleSpec spec = config.embedded_spec();
    const auto basis = std::make_shared<const ManyBodyBasis>(
        SingleParticleSpace{spec.ell, spec.statistics, {}}, spec.m);
    return parallel_map<Spectrum>(config.members, config.workers, [&](std::size_t i) {
      RandomStream rng(seed, i);
      Spectrum s = eigvals_symmetric(sample_embedded(spec, rng, basis).entries);
      s.member_id = i;
      s.tag = to_string(config.ensemble.kind);
      return s;
    });
  }
  const ClassicalEnsembleSpec spec = config.classical_spec();
  return parallel_map<Spectrum>(config.members, config.workers, [&](std::size_t i) {
    RandomStream rng(seed, i);
    Spectrum s = eigvals_symmetric(sample_classical(spec, rng));
    if (deduplicate && spec.beta == 4) s = kramers_deduplicate(s);
    s.member_id = i;
    s.tag = to_string(config.ensemble.kind);
    return s;
  });
}

std::vector<UnfoldedSpectrum> unfold_members(const RunConfig& config,
                                             const std::vector<Spectrum>& spectra) {
  UnfoldOptions opt;
  opt.method = config.resolved_unfolding();
  opt.edge_trim = config.statistics.edge_trim;
  opt.poly_order = config.statistics.poly_order;
  if (opt.method == UnfoldMethod::kEnsembleSemicircle) {
    if (config.ensemble.kind == EnsembleKind::kGoe) {
      opt.radius = goe_semicircle_radius(config.ensemble.n, config.ensemble.v2);
    } else {
      const MemberMoments pooled = pooled_moments(spectra);
      opt.center = pooled.centroid;
      opt.radius = semicircle_radius_from_variance(pooled.variance);
    }
  } else if (opt.method == UnfoldMethod::kEnsembleEdgeworth) {
    opt.ensemble = pooled_moments(spectra);
  }
  return parallel_map<UnfoldedSpectrum>(spectra.size(), config.workers, [&](std::size_t i) {
    return unfold_adaptive(spectra[i], opt, config.statistics.max_trim);
  });
}

ZeroPattern zero_pattern(const SingleParticleSpace& space, std::size_t m, std::size_t k,
                         std::size_t max_dim) {
  space.validate_particles(m);
  const std::uint64_t d = dimension(space.ell, m, space.statistics);
  if (d > max_dim) {
    throw CapacityError("zero pattern dimension " + std::to_string(d) + " exceeds the cap " +
                        std::to_string(max_dim));
  }
  const ManyBodyBasis basis(space, m);
  ZeroPattern zp;
  zp.dim = basis.size();
  zp.order.resize(zp.dim);
  for (std::size_t i = 0; i < zp.dim; ++i) zp.order[i] = i;
  if (!space.orbit_partition.empty() && space.statistics == Statistics::kFermion) {
    const BlockStructure bs = configuration_blocks(space, m);
    std::map<std::vector<std::size_t>, std::size_t> block_rank;
    for (std::size_t b = 0; b < bs.blocks.size(); ++b) block_rank[bs.blocks[b].occupancies] = b;
    std::vector<std::size_t> key(zp.dim);
    for (std::size_t i = 0; i < zp.dim; ++i) {
      key[i] = block_rank.at(orbit_occupancies(space, basis.state(i)));
    }
    std::stable_sort(zp.order.begin(), zp.order.end(),
                     [&](std::size_t a, std::size_t b) { return key[a] < key[b]; });
  }
  zp.codes.resize(zp.dim * zp.dim);
  for (std::size_t r = 0; r < zp.dim; ++r) {
    for (std::size_t c = 0; c < zp.dim; ++c) {
      zp.codes[r * zp.dim + c] =
          transfer_code(transfer_distance(basis.state(zp.order[r]), basis.state(zp.order[c])), k);
    }
  }
  return zp;
}

RunManifest run(const RunConfig& config) {
  config.validate();
  RunManifest manifest;
  manifest.version = std::string(version());
  manifest.config_json = to_json(config, -1);
  manifest.config_hash = config_hash(config);
  const std::size_t streams = config.members;
  manifest.stream_ids.resize(streams);
  for (std::size_t i = 0; i < streams; ++i) manifest.stream_ids[i] = i;

  const auto start = Clock::now();
  Emitter em(config, manifest);
  PhaseTimer timer(manifest);
  switch (config.command) {
    case Command::kSample: run_sample(config, em, timer); break;
    case Command::kDensity: run_density(config, em, timer); break;
    case Command::kNnsd: run_nnsd(config, em, timer); break;
    case Command::kSigma2: run_sigma2(config, em, timer); break;
    case Command::kDelta3: run_delta3(config, em, timer); break;
    case Command::kMoments: run_moments(config, em, timer); break;
    case Command::kBlocks: run_blocks(config, em, timer); break;
    case Command::kCrossmoments: run_crossmoments(config, em, timer); break;
    case Command::kDecohere: run_decohere(config, em, timer); break;
  }
  manifest.timings.emplace_back("total",
                                std::chrono::duration<double>(Clock::now() - start).count());

  const auto path = std::filesystem::path(config.output_dir) / "manifest.json";
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << manifest.to_json();
  return manifest;
}

}  // namespace embrmt
