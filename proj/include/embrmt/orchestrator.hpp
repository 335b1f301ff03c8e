// Copyright 2026 The embrmt Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "embrmt/basis.hpp"
#include "embrmt/eigensolve.hpp"
#include "embrmt/run_config.hpp"
#include "embrmt/unfolding.hpp"

namespace embrmt {

struct ArtifactRecord {
  std::string path;  // relative to the output directory
  std::string sha256;
  std::uint64_t bytes = 0;
};

struct RunManifest {
  std::string version;
  std::string config_json;
  std::string config_hash;
  std::vector<std::uint64_t> stream_ids;
  std::vector<std::pair<std::string, double>> timings;  // seconds
  std::vector<ArtifactRecord> artifacts;

  std::string to_json() const;
};

/// Validates the config, runs the command's pipeline and writes its CSV
/// artifacts plus manifest.json into config.output_dir.
RunManifest run(const RunConfig& config);

/// Spectrum of every member, in member order. `deduplicate` keeps one level
/// per Kramers doublet for the GSE.
std::vector<Spectrum> sample_spectra(const RunConfig& config, bool deduplicate);

/// Unfolds every member with the configured method, widening the edge trim
/// of members whose fitted density turns negative.
std::vector<UnfoldedSpectrum> unfold_members(const RunConfig& config,
                                             const std::vector<Spectrum>& spectra);

/// d x d transfer-code map: 0, 1, ..., k for states connected by that many
/// particle transfers and 9 for pairs a k-body operator cannot connect.
/// With an orbit partition the states are grouped by configuration block
/// (blocks in decreasing dimension).
struct ZeroPattern {
  std::vector<std::size_t> order;  // basis index of each row
  std::vector<int> codes;          // row-major
  std::size_t dim = 0;

  int at(std::size_t row, std::size_t col) const { return codes[row * dim + col]; }
};

ZeroPattern zero_pattern(const SingleParticleSpace& space, std::size_t m, std::size_t k,
                         std::size_t max_dim);

/// 17 significant digits.
std::string format_double(double v);

}  // namespace embrmt
