// Copyright 2026 The embrmt Authors
// SPDX-License-Identifier: Apache-2.0

#include "embrmt/run_config.hpp"

#include <openssl/evp.h>

#include <array>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "embrmt/errors.hpp"
#include "json.hpp"

namespace embrmt {

using nlohmann::json;

namespace {

template <typename Enum, std::size_t N>
using Names = std::array<std::pair<Enum, const char*>, N>;

constexpr Names<Command, 9> kCommands{{{Command::kSample, "sample"},
                                       {Command::kDensity, "density"},
                                       {Command::kNnsd, "nnsd"},
                                       {Command::kSigma2, "sigma2"},
                                       {Command::kDelta3, "delta3"},
                                       {Command::kMoments, "moments"},
                                       {Command::kBlocks, "blocks"},
                                       {Command::kCrossmoments, "crossmoments"},
                                       {Command::kDecohere, "decohere"}}};
constexpr Names<EnsembleKind, 5> kKinds{{{EnsembleKind::kGoe, "goe"},
                                         {EnsembleKind::kGue, "gue"},
                                         {EnsembleKind::kGse, "gse"},
                                         {EnsembleKind::kFegoe, "fegoe"},
                                         {EnsembleKind::kBegoe, "begoe"}}};
constexpr Names<Deviate, 2> kDeviates{{{Deviate::kGaussian, "gaussian"},
                                       {Deviate::kUniform, "uniform"}}};
constexpr Names<SpEnergies, 2> kSpEnergies{{{SpEnergies::kUnitSpacing, "unit_spacing"},
                                            {SpEnergies::kGoeEigenvalues, "goe_eigenvalues"}}};
constexpr Names<UnfoldMethod, 4> kUnfold{{{UnfoldMethod::kEnsembleSemicircle, "ensemble-semicircle"},
                                          {UnfoldMethod::kSpectralEdgeworth, "spectral-edgeworth"},
                                          {UnfoldMethod::kEnsembleEdgeworth, "ensemble-edgeworth"},
                                          {UnfoldMethod::kPolynomial, "polynomial"}}};
constexpr Names<DensityScale, 2> kScales{{{DensityScale::kUnit, "unit"},
                                          {DensityScale::kDimension, "dimension"}}};
constexpr Names<EnvKind, 3> kEnvKinds{{{EnvKind::kGoe, "goe"},
                                       {EnvKind::kFegoe, "fegoe"},
                                       {EnvKind::kBegoe, "begoe"}}};
constexpr Names<QubitInitial, 3> kQubits{{{QubitInitial::kSigmaXPlus, "sigma_x_plus"},
                                          {QubitInitial::kSigmaZEigenstate, "sigma_z_eigenstate"},
                                          {QubitInitial::kCustom, "custom"}}};
constexpr Names<VBasisMode, 2> kVModes{{{VBasisMode::kOccupationBasis, "occupation_basis"},
                                        {VBasisMode::kHeEigenbasis, "he_eigenbasis"}}};
constexpr Names<EvolutionPath, 2> kPaths{{{EvolutionPath::kFast, "fast"},
                                          {EvolutionPath::kFull, "full"}}};

template <typename Enum, std::size_t N>
const char* name_of(const Names<Enum, N>& names, Enum e) {
  for (const auto& [v, s] : names) {
    if (v == e) return s;
  }
  return "unknown";
}

template <typename Enum, std::size_t N>
Enum enum_from(const Names<Enum, N>& names, const json& j, const std::string& key) {
  if (!j.is_string()) throw ConfigError(key + " must be a string");
  const auto s = j.get<std::string>();
  for (const auto& [v, n] : names) {
    if (s == n) return v;
  }
  std::string allowed;
  for (const auto& [v, n] : names) allowed += std::string(allowed.empty() ? "" : ", ") + n;
  throw ConfigError(key + ": unknown value '" + s + "' (expected one of " + allowed + ")");
}

// Reads object members, rejecting keys nobody asked for.
class Reader {
 public:
  Reader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(where() + " must be a JSON object");
  }

  ~Reader() noexcept(false) {
    if (std::uncaught_exceptions() > 0) return;
    for (const auto& [key, value] : j_.items()) {
      if (!seen_.contains(key)) throw ConfigError("unknown key " + qualified(key));
    }
  }

  const json* get(const std::string& key) {
    seen_.insert(key);
    const auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  template <typename T>
  void read(const std::string& key, T& out) {
    if (const json* v = get(key)) {
      try {
        out = v->get<T>();
      } catch (const json::exception&) {
        throw ConfigError(qualified(key) + " has the wrong type");
      }
    }
  }

  void read_size(const std::string& key, std::size_t& out) {
    if (const json* v = get(key)) {
      if (!v->is_number_unsigned()) throw ConfigError(qualified(key) + " must be a non-negative integer");
      out = v->get<std::size_t>();
    }
  }

  void read_sizes(const std::string& key, std::vector<std::size_t>& out) {
    if (const json* v = get(key)) {
      if (!v->is_array()) throw ConfigError(qualified(key) + " must be an array");
      out.clear();
      for (const auto& e : *v) {
        if (!e.is_number_unsigned()) throw ConfigError(qualified(key) + " entries must be non-negative integers");
        out.push_back(e.get<std::size_t>());
      }
    }
  }

  void read_doubles(const std::string& key, std::vector<double>& out) {
    if (const json* v = get(key)) {
      if (!v->is_array()) throw ConfigError(qualified(key) + " must be an array");
      out.clear();
      for (const auto& e : *v) {
        if (!e.is_number()) throw ConfigError(qualified(key) + " entries must be numbers");
        out.push_back(e.get<double>());
      }
    }
  }

  template <typename Enum, std::size_t N>
  void read_enum(const std::string& key, const Names<Enum, N>& names, Enum& out) {
    if (const json* v = get(key)) out = enum_from(names, *v, qualified(key));
  }

  std::string qualified(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

 private:
  std::string where() const { return path_.empty() ? "config" : path_; }

  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

Complex complex_from(const json& j, const std::string& key) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return {j[0].get<double>(), j[1].get<double>()};
  }
  throw ConfigError(key + " must be a number or [re, im]");
}

void apply_ensemble(EnsembleConfig& e, const json& j) {
  Reader r(j, "ensemble");
  r.read_enum("kind", kKinds, e.kind);
  r.read_size("n", e.n);
  r.read("v2", e.v2);
  r.read_enum("deviate", kDeviates, e.deviate);
  r.read_size("ell", e.ell);
  r.read_size("m", e.m);
  r.read_size("k", e.k);
  r.read_sizes("orbit_partition", e.orbit_partition);
  if (const json* ob = r.get("one_body")) {
    if (ob->is_null()) {
      e.one_body.reset();
    } else {
      OneBodyPart part = e.one_body.value_or(OneBodyPart{});
      Reader o(*ob, "ensemble.one_body");
      o.read_enum("energies", kSpEnergies, part.mode);
      o.read_doubles("values", part.energies);
      o.read("lambda2", part.lambda2);
      e.one_body = std::move(part);
    }
  }
}

void apply_statistics(StatisticsConfig& s, const json& j) {
  Reader r(j, "statistics");
  r.read_size("density_bins", s.density_bins);
  r.read("density_range", s.density_range);
  r.read_enum("density_scale", kScales, s.density_scale);
  r.read("edge_trim", s.edge_trim);
  r.read("max_trim", s.max_trim);
  if (const json* u = r.get("unfolding")) {
    if (u->is_null() || (u->is_string() && u->get<std::string>() == "auto")) {
      s.unfolding.reset();
    } else {
      s.unfolding = enum_from(kUnfold, *u, "statistics.unfolding");
    }
  }
  r.read("poly_order", s.poly_order);
  r.read_size("nnsd_bins", s.nnsd_bins);
  r.read("s_max", s.s_max);
  r.read_doubles("r_grid", s.r_grid);
  r.read_doubles("l_grid", s.l_grid);
  r.read("integral_step", s.integral_step);
  r.read("flores", s.flores);
}

void apply_decohere(DecohereConfig& d, const json& j) {
  Reader r(j, "decohere");
  if (const json* envs = r.get("environments")) {
    if (!envs->is_array()) throw ConfigError("decohere.environments must be an array");
    d.environments.clear();
    for (const auto& e : *envs) {
      EnvironmentConfig env;
      if (e.is_string()) {
        env.kind = enum_from(kEnvKinds, e, "decohere.environments");
        if (env.kind == EnvKind::kBegoe) {
          env.ell = 2;
          env.m = 251;
        }
      } else {
        Reader er(e, "decohere.environments[]");
        er.read_enum("kind", kEnvKinds, env.kind);
        if (env.kind == EnvKind::kBegoe) {
          env.ell = 2;
          env.m = 251;
        }
        er.read_size("n", env.n);
        er.read_size("ell", env.ell);
        er.read_size("m", env.m);
      }
      d.environments.push_back(env);
    }
  }
  r.read_doubles("lambdas", d.lambdas);
  r.read_doubles("times", d.times);
  r.read("t_max", d.t_max);
  r.read_size("t_points", d.t_points);
  r.read_enum("qubit", kQubits, d.qubit);
  if (const json* a = r.get("amplitudes")) {
    if (!a->is_array() || a->size() != 2) throw ConfigError("decohere.amplitudes needs two entries");
    d.amp0 = complex_from((*a)[0], "decohere.amplitudes[0]");
    d.amp1 = complex_from((*a)[1], "decohere.amplitudes[1]");
  }
  r.read_enum("v_basis_mode", kVModes, d.v_basis_mode);
  r.read_enum("path", kPaths, d.path);
}

void apply_config(RunConfig& c, const json& j) {
  Reader r(j, "");
  r.read_enum("command", kCommands, c.command);
  if (const json* s = r.get("seed")) {
    if (s->is_null()) {
      c.seed.reset();
    } else if (s->is_number_unsigned()) {
      c.seed = s->get<std::uint64_t>();
    } else {
      throw ConfigError("seed must be a non-negative integer");
    }
  }
  r.read_size("members", c.members);
  r.read_size("workers", c.workers);
  r.read("output_dir", c.output_dir);
  if (const json* e = r.get("ensemble")) apply_ensemble(c.ensemble, *e);
  if (const json* s = r.get("statistics")) apply_statistics(c.statistics, *s);
  if (const json* x = r.get("crossmoments")) {
    Reader cr(*x, "crossmoments");
    cr.read_sizes("m_list", c.crossmoments.m_list);
    cr.read("control", c.crossmoments.control);
  }
  if (const json* b = r.get("blocks")) {
    Reader br(*b, "blocks");
    br.read_sizes("capacities", c.blocks.capacities);
    br.read_size("m", c.blocks.m);
    br.read_size("max_pattern_dim", c.blocks.max_pattern_dim);
  }
  if (const json* d = r.get("decohere")) apply_decohere(c.decohere, *d);
}

json parse_json(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
}

json complex_json(Complex z) { return json::array({z.real(), z.imag()}); }

json to_json_value(const RunConfig& c) {
  json e = {{"kind", name_of(kKinds, c.ensemble.kind)},
            {"n", c.ensemble.n},
            {"v2", c.ensemble.v2},
            {"deviate", name_of(kDeviates, c.ensemble.deviate)},
            {"ell", c.ensemble.ell},
            {"m", c.ensemble.m},
            {"k", c.ensemble.k},
            {"orbit_partition", c.ensemble.orbit_partition},
            {"one_body", nullptr}};
  if (c.ensemble.one_body) {
    e["one_body"] = {{"energies", name_of(kSpEnergies, c.ensemble.one_body->mode)},
                     {"values", c.ensemble.one_body->energies},
                     {"lambda2", c.ensemble.one_body->lambda2}};
  }
  const StatisticsConfig& s = c.statistics;
  json st = {{"density_bins", s.density_bins},
             {"density_range", s.density_range},
             {"density_scale", name_of(kScales, s.density_scale)},
             {"edge_trim", s.edge_trim},
             {"max_trim", s.max_trim},
             {"unfolding", s.unfolding ? json(name_of(kUnfold, *s.unfolding)) : json("auto")},
             {"poly_order", s.poly_order},
             {"nnsd_bins", s.nnsd_bins},
             {"s_max", s.s_max},
             {"r_grid", s.r_grid},
             {"l_grid", s.l_grid},
             {"integral_step", s.integral_step},
             {"flores", s.flores}};
  json envs = json::array();
  for (const auto& env : c.decohere.environments) {
    envs.push_back({{"kind", name_of(kEnvKinds, env.kind)},
                    {"n", env.n},
                    {"ell", env.ell},
                    {"m", env.m}});
  }
  const DecohereConfig& d = c.decohere;
  json dec = {{"environments", envs},
              {"lambdas", d.lambdas},
              {"times", d.times},
              {"t_max", d.t_max},
              {"t_points", d.t_points},
              {"qubit", name_of(kQubits, d.qubit)},
              {"amplitudes", json::array({complex_json(d.amp0), complex_json(d.amp1)})},
              {"v_basis_mode", name_of(kVModes, d.v_basis_mode)},
              {"path", name_of(kPaths, d.path)}};
  return {{"command", to_string(c.command)},
          {"seed", c.seed ? json(*c.seed) : json(nullptr)},
          {"members", c.members},
          {"workers", c.workers},
          {"output_dir", c.output_dir},
          {"ensemble", e},
          {"statistics", st},
          {"crossmoments", {{"m_list", c.crossmoments.m_list}, {"control", c.crossmoments.control}}},
          {"blocks",
           {{"capacities", c.blocks.capacities},
            {"m", c.blocks.m},
            {"max_pattern_dim", c.blocks.max_pattern_dim}}},
          {"decohere", dec}};
}

void check_grid(const std::vector<double>& g, const std::string& name) {
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!std::isfinite(g[i]) || g[i] <= 0.0) throw ConfigError(name + " entries must be positive");
    if (i > 0 && !(g[i] > g[i - 1])) throw ConfigError(name + " must be strictly increasing");
  }
}

std::vector<double> arithmetic(double start, double stop, double step) {
  std::vector<double> g;
  for (int i = 0;; ++i) {
    const double v = start + step * i;
    if (v > stop + 1e-12) break;
    g.push_back(v);
  }
  return g;
}

}  // namespace

const char* to_string(Command c) noexcept { return name_of(kCommands, c); }

std::optional<Command> parse_command(std::string_view name) noexcept {
  for (const auto& [v, s] : kCommands) {
    if (name == s) return v;
  }
  return std::nullopt;
}

const char* to_string(EnsembleKind k) noexcept { return name_of(kKinds, k); }

Statistics EnsembleConfig::statistics() const {
  return kind == EnsembleKind::kBegoe ? Statistics::kBoson : Statistics::kFermion;
}

std::uint64_t EnsembleConfig::level_count() const {
  return embedded() ? dimension(ell, m, statistics()) : n;
}

std::vector<EnvironmentConfig> DecohereConfig::resolved_environments() const {
  if (!environments.empty()) return environments;
  return {{EnvKind::kGoe, 252, 10, 5}, {EnvKind::kFegoe, 252, 10, 5}, {EnvKind::kBegoe, 252, 2, 251}};
}

std::vector<double> DecohereConfig::resolved_times() const {
  if (!times.empty()) return times;
  if (t_max <= 0.0) return default_time_grid();
  std::vector<double> t(t_points);
  for (std::size_t i = 0; i < t_points; ++i) {
    t[i] = t_max * static_cast<double>(i) / static_cast<double>(t_points - 1);
  }
  return t;
}

std::vector<double> RunConfig::resolved_r_grid() const {
  return statistics.r_grid.empty() ? arithmetic(1.0, 10.0, 0.5) : statistics.r_grid;
}

std::vector<double> RunConfig::resolved_l_grid() const {
  return statistics.l_grid.empty() ? arithmetic(2.0, 20.0, 1.0) : statistics.l_grid;
}

UnfoldMethod RunConfig::resolved_unfolding() const {
  if (statistics.unfolding) return *statistics.unfolding;
  return ensemble.embedded() ? UnfoldMethod::kSpectralEdgeworth : UnfoldMethod::kEnsembleSemicircle;
}

EmbeddedEnsembleSpec RunConfig::embedded_spec() const {
  EmbeddedEnsembleSpec s;
  s.ell = ensemble.ell;
  s.m = ensemble.m;
  s.k = ensemble.k;
  s.statistics = ensemble.statistics();
  s.v2 = ensemble.v2;
  s.member_count = members;
  s.seed = seed.value_or(0);
  s.one_body = ensemble.one_body;
  return s;
}

ClassicalEnsembleSpec RunConfig::classical_spec() const {
  const int beta = ensemble.kind == EnsembleKind::kGue ? 2 : ensemble.kind == EnsembleKind::kGse ? 4 : 1;
  return {beta, ensemble.n, ensemble.v2, ensemble.deviate};
}

void RunConfig::validate() const {
  if (!seed) throw ConfigError("seed is mandatory");
  if (members == 0) throw ConfigError("members must be at least 1");
  if (workers == 0) throw ConfigError("workers must be at least 1");
  if (output_dir.empty()) throw ConfigError("output_dir must not be empty");
  try {
    if (command != Command::kDecohere) {
      if (ensemble.embedded()) {
        embedded_spec().validate();
        SingleParticleSpace{ensemble.ell, ensemble.statistics(), ensemble.orbit_partition}.validate();
        if (ensemble.level_count() > kDefaultMaxDenseDim) {
          throw ConfigError("embedded dimension " + std::to_string(ensemble.level_count()) +
                            " exceeds the dense cap");
        }
      } else {
        classical_spec().validate();
        if (classical_spec().stored_dim() > kDefaultMaxDenseDim) {
          throw ConfigError("matrix dimension exceeds the dense cap");
        }
      }
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(std::string("ensemble: ") + e.what());
  }

  const StatisticsConfig& s = statistics;
  if (!(s.edge_trim >= 0.0 && s.edge_trim < 0.5)) throw ConfigError("edge_trim must lie in [0, 0.5)");
  if (!(s.max_trim >= s.edge_trim && s.max_trim < 0.5)) {
    throw ConfigError("max_trim must lie in [edge_trim, 0.5)");
  }
  if (s.density_bins == 0 || s.nnsd_bins == 0) throw ConfigError("bin counts must be positive");
  if (!(s.density_range > 0.0) || !(s.s_max > 0.0)) throw ConfigError("histogram ranges must be positive");
  if (s.poly_order < 1) throw ConfigError("poly_order must be at least 1");
  if (!(s.integral_step > 0.0)) throw ConfigError("integral_step must be positive");
  check_grid(s.r_grid, "statistics.r_grid");
  check_grid(s.l_grid, "statistics.l_grid");
  if (s.flores && !ensemble.embedded()) {
    throw ConfigError("the spectral-averaging correction applies to embedded ensembles");
  }

  switch (command) {
    case Command::kSigma2:
    case Command::kDelta3:
      if (members < 1) throw ConfigError("statistics need members");
      if (s.flores && members < 2) throw ConfigError("the correction needs at least two members");
      break;
    case Command::kCrossmoments: {
      if (!ensemble.embedded()) throw ConfigError("crossmoments needs an embedded ensemble");
      if (members < 2) throw ConfigError("crossmoments needs at least two members");
      if (crossmoments.m_list.empty()) throw ConfigError("crossmoments.m_list is empty");
      for (std::size_t m : crossmoments.m_list) {
        EmbeddedEnsembleSpec e = embedded_spec();
        e.m = m;
        try {
          e.validate();
        } catch (const Error& err) {
          throw ConfigError("crossmoments m = " + std::to_string(m) + ": " + err.what());
        }
        if (e.dim() > kDefaultMaxDenseDim) throw ConfigError("crossmoments dimension exceeds the dense cap");
      }
      break;
    }
    case Command::kBlocks: {
      if (!ensemble.embedded()) throw ConfigError("blocks needs an embedded ensemble");
      if (!blocks.capacities.empty() && ensemble.kind != EnsembleKind::kFegoe) {
        throw ConfigError("orbit capacities apply to fermions only");
      }
      if (!blocks.capacities.empty()) {
        std::size_t total = 0;
        for (std::size_t cap : blocks.capacities) total += cap;
        if (total != ensemble.ell) throw ConfigError("blocks.capacities must sum to ell");
      }
      const std::size_t m = blocks.m == 0 ? ensemble.m : blocks.m;
      try {
        SingleParticleSpace{ensemble.ell, ensemble.statistics(), {}}.validate_particles(m);
      } catch (const Error& err) {
        throw ConfigError(std::string("blocks: ") + err.what());
      }
      break;
    }
    case Command::kDecohere: {
      if (decohere.lambdas.empty()) throw ConfigError("decohere.lambdas is empty");
      if (decohere.times.empty() && decohere.t_max > 0.0 && decohere.t_points < 2) {
        throw ConfigError("decohere.t_points must be at least 2");
      }
      for (const auto& env : decohere.resolved_environments()) {
        for (double lambda : decohere.lambdas) {
          QubitEnvSpec q;
          q.env_kind = env.kind;
          q.n = env.kind == EnvKind::kGoe ? env.n : 0;
          q.ell = env.ell;
          q.m = env.m;
          q.lambda = lambda;
          q.member_count = members;
          q.seed = *seed;
          q.times = decohere.resolved_times();
          q.qubit_initial = decohere.qubit;
          q.amp0 = decohere.amp0;
          q.amp1 = decohere.amp1;
          q.validate();
        }
      }
      break;
    }
    default: break;
  }
}

RunConfig parse_run_config(std::string_view text) {
  RunConfig c;
  apply_config(c, parse_json(text));
  return c;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_run_config(ss.str());
}

RunConfig merge_run_config(const RunConfig& base, std::string_view text) {
  RunConfig c = base;
  apply_config(c, parse_json(text));
  return c;
}

std::string to_json(const RunConfig& config, int indent) { return to_json_value(config).dump(indent); }

std::string config_hash(const RunConfig& config) {
  json j = to_json_value(config);
  j.erase("workers");
  j.erase("output_dir");
  return sha256_hex(j.dump());
}

std::string sha256_hex(std::string_view data) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest.data(), &len, EVP_sha256(), nullptr) != 1) {
    throw IoError("SHA-256 failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 0xF]);
  }
  return out;
}

}  // namespace embrmt
