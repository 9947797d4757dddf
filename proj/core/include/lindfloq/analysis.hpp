// Copyright 2026 The lindfloq Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "lindfloq/floquet.hpp"
#include "lindfloq/observables.hpp"

namespace lindfloq {

struct NessRecord {
  double period = 0.0;
  double t0_fraction = 0.0;
  Direction direction = Direction::kCW;
  Operator rho;
  BlochRecord bloch;
  double residual = 0.0;  // ||G vec(rho) - vec(rho)||_2
};

/// Fixed point of the one-period map: the eigenvector of G whose eigenvalue
/// is nearest 1, Hermitized, trace-normalized, with eigenvalues down to -1e-8
/// clipped to zero.
NessRecord ness_from_propagator(const PropagatorResult& p, double eigen_residual_tol = 1e-10);

/// State after `periods` applications of G to rho0; the finite-time stand-in
/// for the steady state used by tomography-style experiments.
NessRecord tenth_period_ness(const PropagatorResult& p, const ComplexMatrix& rho0,
                             int periods = 10);

/// Null vector of a static Liouvillian as a density matrix. Throws
/// kAmbiguousSteadyState when the null space is not one-dimensional.
Operator static_steady_state(const Superoperator& l);

enum class Component { kX, kY, kZ };
enum class TransientKind { kUnderdamped, kOverdamped };

std::string_view to_string(Component c);
std::string_view to_string(TransientKind k);

/// Least-squares fit of a stroboscopic component against t = n T.
///   underdamped: A exp(-kappa t) cos(omega t + phi) + C   (A, kappa, omega, phi, C)
///   overdamped:  A exp(-kappa t) + C                      (A, kappa, C)
/// omega is reported folded into [0, pi/T], the range the samples resolve.
struct TransientFit {
  TransientKind kind = TransientKind::kOverdamped;
  std::vector<double> params;
  std::vector<std::string> names;
  Eigen::MatrixXd covariance;
  double rms = 0.0;
  int points = 0;
  double window = 0.0;  // time spanned by the samples, us

  double amplitude() const { return params.at(0); }
  double decay() const { return params.at(1); }
  double frequency() const { return kind == TransientKind::kUnderdamped ? params.at(2) : 0.0; }
  double offset() const { return params.back(); }
};

/// Multi-start Levenberg-Marquardt. Start points cover a fixed (kappa, omega)
/// grid plus the decay rates and frequencies of `seed_eigenvalues`.
TransientFit fit_transient(const StroboscopicSeries& series, Component component,
                           TransientKind kind, std::span<const Complex> seed_eigenvalues = {});

struct ModelSelection {
  TransientKind chosen = TransientKind::kOverdamped;
  std::optional<TransientFit> overdamped;
  std::optional<TransientFit> underdamped;
  std::string overdamped_error;
  std::string underdamped_error;
  double improvement = 0.0;  // 1 - rms_under / rms_over, when both exist

  const TransientFit& best() const {
    return chosen == TransientKind::kUnderdamped ? *underdamped : *overdamped;
  }
};

/// Keeps pure decay unless the damped cosine lowers the rms residual by at
/// least `min_improvement` and completes half a cycle inside the window.
/// A model whose fit fails is dropped; kFitFailure when both fail or only an
/// unresolved oscillation remains.
ModelSelection select_transient_model(const StroboscopicSeries& series, Component component,
                                      std::span<const Complex> seed_eigenvalues = {},
                                      double min_improvement = 0.2);

/// Single-shot projective readout along x, y and z: `shots` Bernoulli draws
/// per axis with success probability (1 + <sigma>)/2, estimate 2 k/shots - 1.
BlochVector sample_tomography(const ComplexMatrix& rho, long long shots, std::uint64_t seed);

}  // namespace lindfloq
