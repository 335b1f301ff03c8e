// Copyright 2026 The embrmt Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "embrmt/classical.hpp"
#include "embrmt/decoherence.hpp"
#include "embrmt/embedded.hpp"
#include "embrmt/unfolding.hpp"

namespace embrmt {

enum class Command {
  kSample,
  kDensity,
  kNnsd,
  kSigma2,
  kDelta3,
  kMoments,
  kBlocks,
  kCrossmoments,
  kDecohere,
};

const char* to_string(Command c) noexcept;
std::optional<Command> parse_command(std::string_view name) noexcept;

enum class EnsembleKind { kGoe, kGue, kGse, kFegoe, kBegoe };

const char* to_string(EnsembleKind k) noexcept;

struct EnsembleConfig {
  EnsembleKind kind = EnsembleKind::kGoe;
  std::size_t n = 252;  // classical dimension (quaternion dimension for GSE)
  double v2 = 1.0;
  Deviate deviate = Deviate::kGaussian;
  std::size_t ell = 10;
  std::size_t m = 5;
  std::size_t k = 2;
  std::vector<std::size_t> orbit_partition;
  std::optional<OneBodyPart> one_body;

  bool embedded() const { return kind == EnsembleKind::kFegoe || kind == EnsembleKind::kBegoe; }
  Statistics statistics() const;
  /// Dimension of the spectrum each member produces after Kramers deduplication.
  std::uint64_t level_count() const;
};

enum class DensityScale {
  kUnit,       // histogram integrates to 1
  kDimension,  // histogram integrates to the number of levels per member
};

struct StatisticsConfig {
  std::size_t density_bins = 40;
  double density_range = 4.0;  // histogram over [-range, range] in units of sigma
  DensityScale density_scale = DensityScale::kUnit;
  double edge_trim = 0.1;
  double max_trim = 0.4;
  std::optional<UnfoldMethod> unfolding;  // unset: ensemble semicircle for classical, spectral Edgeworth for embedded
  int poly_order = 7;
  std::size_t nnsd_bins = 50;
  double s_max = 4.0;
  std::vector<double> r_grid;  // empty: 1, 1.5, ..., 10
  std::vector<double> l_grid;  // empty: 2, 3, ..., 20
  double integral_step = 0.05;
  bool flores = false;
};

struct CrossmomentsConfig {
  std::vector<std::size_t> m_list{4, 5};
  bool control = true;
};

struct BlocksConfig {
  std::vector<std::size_t> capacities;  // orbit partition for configuration blocks
  std::size_t m = 0;                    // 0: use the ensemble's m
  std::size_t max_pattern_dim = 4096;
};

struct EnvironmentConfig {
  EnvKind kind = EnvKind::kGoe;
  std::size_t n = 252;
  std::size_t ell = 10;
  std::size_t m = 5;
};

struct DecohereConfig {
  std::vector<EnvironmentConfig> environments;  // empty: GOE 252, FEGOE (10,5), BEGOE (2,251)
  std::vector<double> lambdas{1e-4, 1e-2};
  std::vector<double> times;  // explicit grid; overrides t_max / t_points
  double t_max = 0.0;         // 0: default grid
  std::size_t t_points = 512;
  QubitInitial qubit = QubitInitial::kSigmaXPlus;
  Complex amp0{1.0, 0.0};
  Complex amp1{0.0, 0.0};
  VBasisMode v_basis_mode = VBasisMode::kOccupationBasis;
  EvolutionPath path = EvolutionPath::kFast;

  std::vector<EnvironmentConfig> resolved_environments() const;
  std::vector<double> resolved_times() const;
};

struct RunConfig {
  Command command = Command::kDensity;
  std::optional<std::uint64_t> seed;
  std::size_t members = 100;
  std::size_t workers = 1;
  std::string output_dir = ".";
  EnsembleConfig ensemble;
  StatisticsConfig statistics;
  CrossmomentsConfig crossmoments;
  BlocksConfig blocks;
  DecohereConfig decohere;

  /// Throws ConfigError on any invalid field or combination. Runs before
  /// any sampling.
  void validate() const;
  std::vector<double> resolved_r_grid() const;
  std::vector<double> resolved_l_grid() const;
  UnfoldMethod resolved_unfolding() const;
  EmbeddedEnsembleSpec embedded_spec() const;
  ClassicalEnsembleSpec classical_spec() const;
};

/// Parses a JSON document. Unknown keys raise ConfigError.
RunConfig parse_run_config(std::string_view json);
RunConfig load_run_config(const std::string& path);

/// Overlays the fields present in `json` onto `base`.
RunConfig merge_run_config(const RunConfig& base, std::string_view json);

/// Canonical JSON of every field.
std::string to_json(const RunConfig& config, int indent = 2);

/// SHA-256 (hex) of the canonical JSON without the scheduling fields
/// (workers, output_dir); runs differing only in those share a hash.
std::string config_hash(const RunConfig& config);

std::string sha256_hex(std::string_view data);

}  // namespace embrmt
