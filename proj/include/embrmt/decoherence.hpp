// Copyright 2026 The embrmt Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "embrmt/basis.hpp"
#include "embrmt/random_stream.hpp"
#include "embrmt/types.hpp"

namespace embrmt {

inline constexpr double kHeisenbergTime = 6.283185307179586476925;  // 2 pi with hbar = 1

enum class EnvKind { kGoe, kFegoe, kBegoe };
const char* to_string(EnvKind kind) noexcept;

enum class QubitInitial { kSigmaXPlus, kSigmaZEigenstate, kCustom };

/// Basis in which the coupling V_e acts once H_e is replaced by its unfolded
/// diagonal.
enum class VBasisMode {
  kOccupationBasis,  // V_e used as sampled
  kHeEigenbasis,     // V_e conjugated into the eigenbasis of the sampled H_e
};

struct QubitEnvSpec {
  EnvKind env_kind = EnvKind::kGoe;
  std::size_t n = 252;   // GOE dimension; for embedded kinds, 0 or the expected dimension
  std::size_t ell = 10;  // embedded kinds
  std::size_t m = 5;
  double lambda = 1e-4;
  std::size_t member_count = 100;
  std::uint64_t seed = 0;
  std::vector<double> times;  // empty selects default_time_grid()
  QubitInitial qubit_initial = QubitInitial::kSigmaXPlus;
  Complex amp0{1.0, 0.0};  // custom qubit amplitudes on |0>, |1> (normalized on use)
  Complex amp1{0.0, 0.0};
  VBasisMode v_basis_mode = VBasisMode::kOccupationBasis;

  /// Throws ConfigError on an invalid combination.
  void validate() const;
  std::size_t env_dim() const;
  std::vector<double> time_grid() const;
  /// Normalized qubit amplitudes (a, b).
  std::pair<Complex, Complex> qubit_amplitudes() const;
};

/// 512 uniform points on [0, 10 t_H].
std::vector<double> default_time_grid();

struct EnvironmentPair {
  RealVector he_diagonal;  // unfolded, ascending, unit mean spacing
  RealMatrix ve;
};

/// Samples H_e, unfolds its full spectrum onto unit mean spacing and samples
/// V_e from the matching one-body (or GOE) ensemble. The three draws use the
/// child streams 0 (H_e) and 1 (V_e) of `rng`.
EnvironmentPair build_environment(const QubitEnvSpec& spec, const RandomStream& rng);

/// Full-spectrum unfolding used for H_e: semicircle CDF with the analytic
/// GOE radius for the GOE kind, the member's Edgeworth CDF otherwise, falling
/// back to polynomial fits of decreasing order when the Edgeworth density
/// turns negative inside the spectrum.
RealVector unfold_environment(const std::vector<double>& eigenvalues, EnvKind kind);

/// Real Gaussian vector of unit norm, drawn from child stream 2 of `rng`.
RealVector environment_state(std::size_t n, const RandomStream& rng);

/// Qubit-major product state (a |0> + b |1>) (x) psi_e.
ComplexVector initial_state(const QubitEnvSpec& spec, const RealVector& psi_e);

/// H = sigma_z/2 (x) 1 + 1 (x) H_e + lambda sigma_z (x) V_e, with sigma_z |0> = |0>.
RealMatrix composite_hamiltonian(const EnvironmentPair& env, double lambda);

/// exp(-i H t) through one eigendecomposition of H.
class FullEvolution {
 public:
  explicit FullEvolution(const RealMatrix& h);
  ComplexVector evolve(const ComplexVector& psi0, double t) const;

 private:
  RealVector values_;
  RealMatrix vectors_;
};

/// f(t) = <psi_e| exp(i H_- t) exp(-i H_+ t) |psi_e>, H_pm = H_e pm lambda V_e.
std::vector<Complex> evolve_dephasing_fast(const EnvironmentPair& env, double lambda,
                                           const RealVector& psi_e,
                                           const std::vector<double>& times);

/// 2x2 reduced density of the qubit. Throws DomainError when the state norm
/// deviates from 1 by more than 1e-6.
Eigen::Matrix2cd reduced_density(const ComplexVector& state);

double purity(const Eigen::Matrix2cd& rho);

/// Purity of a (a, b) qubit under dephasing with coherence factor f.
double dephasing_purity(Complex a, Complex b, Complex f);

struct PurityTrace {
  std::vector<double> times;
  std::vector<double> mean;
  std::vector<double> stderrs;
  std::vector<std::vector<double>> members;  // filled on request
};

enum class EvolutionPath { kFast, kFull };

PurityTrace purity_trace(const QubitEnvSpec& spec, std::size_t workers = 1,
                         EvolutionPath path = EvolutionPath::kFast, bool keep_members = false);

/// Purities of one member on the time grid of `spec`.
std::vector<double> member_purity(const QubitEnvSpec& spec, std::size_t member,
                                  EvolutionPath path);

/// First time the mean purity falls below `level` (linear interpolation
/// between grid points); nullopt when it never does.
std::optional<double> first_crossing(const PurityTrace& trace, double level);

/// Mean purity over the final `tail` fraction of the grid.
double plateau(const PurityTrace& trace, double tail = 0.2);

}  // namespace embrmt
