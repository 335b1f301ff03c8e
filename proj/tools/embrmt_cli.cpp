// Copyright 2026 The embrmt Authors
// SPDX-License-Identifier: Apache-2.0

// Command-line front end over the C API.

#include <cstdint>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "embrmt/embrmt.h"
#include "json.hpp"

namespace {

using nlohmann::json;

struct Options {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> members;
  std::optional<std::size_t> workers;
  std::optional<std::string> out;
  bool dry_run = false;

  // ensemble
  std::optional<std::string> ensemble;
  std::optional<std::size_t> n, ell, m, k;
  std::optional<double> v2;

  // statistics
  std::optional<std::size_t> bins;
  std::optional<double> trim;
  std::optional<std::string> unfolding;
  std::optional<std::string> density_scale;
  std::vector<double> r_grid, l_grid;
  bool flores = false;

  // crossmoments / blocks
  std::vector<std::size_t> m_list;
  bool no_control = false;
  std::vector<std::size_t> capacities;

  // decohere
  std::vector<std::string> envs;
  std::vector<double> lambdas;
  std::optional<double> t_max;
  std::optional<std::size_t> t_points;
  std::optional<std::string> qubit;
  std::optional<std::string> v_basis;
  std::optional<std::string> path;
};

int exit_code(embrmt_status s) {
  switch (s) {
    case EMBRMT_OK: return 0;
    case EMBRMT_ERR_CONFIG:
    case EMBRMT_ERR_SPEC:
    case EMBRMT_ERR_DOMAIN:
    case EMBRMT_ERR_CAPACITY:
    case EMBRMT_ERR_INVALID_ARGUMENT: return 2;
    case EMBRMT_ERR_NUMERICAL: return 3;
    default: return 1;
  }
}

int fail(embrmt_status s) {
  std::cerr << "embrmt: " << embrmt_status_string(s) << ": " << embrmt_last_error() << "\n";
  return exit_code(s);
}

void add_common(CLI::App* sub, Options& o) {
  sub->add_option("--config", o.config_path, "JSON run configuration");
  sub->add_option("--seed", o.seed, "Master seed (mandatory here or in the config)");
  sub->add_option("--members", o.members, "Ensemble members");
  sub->add_option("--workers", o.workers, "Worker threads");
  sub->add_option("--out", o.out, "Output directory");
  sub->add_flag("--dry-run", o.dry_run, "Print the merged config and exit");
}

void add_ensemble(CLI::App* sub, Options& o) {
  sub->add_option("--ensemble", o.ensemble, "goe | gue | gse | fegoe | begoe");
  sub->add_option("--n", o.n, "Classical matrix dimension");
  sub->add_option("--ell", o.ell, "Single-particle levels");
  sub->add_option("-m,--particles", o.m, "Particle number");
  sub->add_option("-k,--rank", o.k, "Interaction body rank");
  sub->add_option("--v2", o.v2, "Off-diagonal variance");
}

void add_unfolding(CLI::App* sub, Options& o) {
  sub->add_option("--trim", o.trim, "Edge trim fraction per side");
  sub->add_option("--unfolding", o.unfolding,
                  "auto | ensemble-semicircle | spectral-edgeworth | ensemble-edgeworth | polynomial");
}

json overlay(const Options& o, const std::string& command) {
  json j = {{"command", command}};
  if (o.seed) j["seed"] = *o.seed;
  if (o.members) j["members"] = *o.members;
  if (o.workers) j["workers"] = *o.workers;
  if (o.out) j["output_dir"] = *o.out;

  json e = json::object();
  if (o.ensemble) e["kind"] = *o.ensemble;
  if (o.n) e["n"] = *o.n;
  if (o.ell) e["ell"] = *o.ell;
  if (o.m) e["m"] = *o.m;
  if (o.k) e["k"] = *o.k;
  if (o.v2) e["v2"] = *o.v2;
  if (!e.empty()) j["ensemble"] = e;

  json s = json::object();
  if (o.bins) s[command == "nnsd" ? "nnsd_bins" : "density_bins"] = *o.bins;
  if (o.trim) s["edge_trim"] = *o.trim;
  if (o.unfolding) s["unfolding"] = *o.unfolding;
  if (o.density_scale) s["density_scale"] = *o.density_scale;
  if (!o.r_grid.empty()) s["r_grid"] = o.r_grid;
  if (!o.l_grid.empty()) s["l_grid"] = o.l_grid;
  if (o.flores) s["flores"] = true;
  if (!s.empty()) j["statistics"] = s;

  json x = json::object();
  if (!o.m_list.empty()) x["m_list"] = o.m_list;
  if (o.no_control) x["control"] = false;
  if (!x.empty()) j["crossmoments"] = x;

  if (!o.capacities.empty()) j["blocks"] = {{"capacities", o.capacities}};

  json d = json::object();
  if (!o.envs.empty()) d["environments"] = o.envs;
  if (!o.lambdas.empty()) d["lambdas"] = o.lambdas;
  if (o.t_max) d["t_max"] = *o.t_max;
  if (o.t_points) d["t_points"] = *o.t_points;
  if (o.qubit) d["qubit"] = *o.qubit;
  if (o.v_basis) d["v_basis_mode"] = *o.v_basis;
  if (o.path) d["path"] = *o.path;
  if (!d.empty()) j["decohere"] = d;
  return j;
}

int execute(const Options& o, const std::string& command) {
  embrmt_run_config* cfg = nullptr;
  embrmt_status s = o.config_path.empty() ? embrmt_config_new(&cfg)
                                          : embrmt_config_load(o.config_path.c_str(), &cfg);
  if (s != EMBRMT_OK) return fail(s);
  const std::string patch = overlay(o, command).dump();
  s = embrmt_config_merge_json(cfg, patch.c_str());
  if (s == EMBRMT_OK) s = embrmt_config_validate(cfg);
  if (s != EMBRMT_OK) {
    embrmt_config_free(cfg);
    return fail(s);
  }
  if (o.dry_run) {
    char* text = nullptr;
    s = embrmt_config_to_json(cfg, &text);
    if (s == EMBRMT_OK) {
      std::cout << text << "\n";
      embrmt_string_free(text);
    }
    embrmt_config_free(cfg);
    return s == EMBRMT_OK ? 0 : fail(s);
  }
  embrmt_manifest* manifest = nullptr;
  s = embrmt_run(cfg, &manifest);
  embrmt_config_free(cfg);
  if (s != EMBRMT_OK) {
    const int code = fail(s);
    std::uint64_t member = 0;
    if (embrmt_last_error_member(&member)) std::cerr << "embrmt: failing member " << member << "\n";
    return code;
  }
  for (std::size_t i = 0; i < embrmt_manifest_artifact_count(manifest); ++i) {
    std::cout << embrmt_manifest_artifact_path(manifest, i) << "  "
              << embrmt_manifest_artifact_sha256(manifest, i) << "\n";
  }
  std::fprintf(stdout, "total %.3f s\n", embrmt_manifest_total_seconds(manifest));
  embrmt_manifest_free(manifest);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Random-matrix ensembles, spectral statistics and qubit decoherence"};
  app.set_version_flag("--version", std::string(embrmt_version()));
  app.require_subcommand(1);

  Options o;
  std::string command;
  const auto sub = [&](const char* name, const char* help) {
    CLI::App* s = app.add_subcommand(name, help);
    add_common(s, o);
    s->callback([&command, name] { command = name; });
    return s;
  };

  CLI::App* sample = sub("sample", "Write member eigenvalues");
  add_ensemble(sample, o);

  CLI::App* density = sub("density", "Pooled density histogram with semicircle and Edgeworth fits");
  add_ensemble(density, o);
  density->add_option("--bins", o.bins, "Histogram bins");
  density->add_option("--scale", o.density_scale, "unit | dimension");

  CLI::App* nnsd = sub("nnsd", "Nearest-neighbor spacing distribution");
  add_ensemble(nnsd, o);
  add_unfolding(nnsd, o);
  nnsd->add_option("--bins", o.bins, "Histogram bins on [0, s_max]");

  CLI::App* sigma2 = sub("sigma2", "Number variance");
  add_ensemble(sigma2, o);
  add_unfolding(sigma2, o);
  sigma2->add_option("--r", o.r_grid, "Window lengths")->delimiter(',');
  sigma2->add_flag("--flores", o.flores, "Also emit the spectral-averaging correction");

  CLI::App* delta3 = sub("delta3", "Spectral rigidity, direct and from the number variance");
  add_ensemble(delta3, o);
  add_unfolding(delta3, o);
  delta3->add_option("--L", o.l_grid, "Window lengths")->delimiter(',');

  CLI::App* mom = sub("moments", "Per-member centroid, variance, skewness and excess kurtosis");
  add_ensemble(mom, o);

  CLI::App* blocks = sub("blocks", "Configuration blocks and the transfer-code zero pattern");
  add_ensemble(blocks, o);
  blocks->add_option("--capacities", o.capacities, "Orbit capacities")->delimiter(',');

  CLI::App* cross = sub("crossmoments", "Cross-particle-number centroid and variance fluctuations");
  add_ensemble(cross, o);
  cross->add_option("--m-list", o.m_list, "Particle numbers")->delimiter(',');
  cross->add_flag("--no-control", o.no_control, "Skip the independent GOE control");

  CLI::App* dec = sub("decohere", "Ensemble-averaged qubit purity");
  dec->add_option("--env", o.envs, "goe | fegoe | begoe (repeatable)")->delimiter(',');
  dec->add_option("--lambda", o.lambdas, "Coupling strengths")->delimiter(',');
  dec->add_option("--t-max", o.t_max, "Last time point");
  dec->add_option("--t-points", o.t_points, "Number of time points");
  dec->add_option("--qubit", o.qubit, "sigma_x_plus | sigma_z_eigenstate");
  dec->add_option("--v-basis", o.v_basis, "occupation_basis | he_eigenbasis");
  dec->add_option("--path", o.path, "fast | full");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  return execute(o, command);
}
