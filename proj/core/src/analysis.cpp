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

#include "lindfloq/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace lindfloq {

namespace {

constexpr double kClipTolerance = 1e-8;

Operator state_from_vector(const StateVector& v) {
  Operator rho = unvec(v);
  rho = 0.5 * (rho + rho.adjoint()).eval();
  const Complex tr = rho.trace();
  if (std::abs(tr) < 1e-14) {
    throw Error(ErrorCode::kNumericalFailure, "fixed vector has vanishing trace");
  }
  rho /= tr.real();

  Eigen::SelfAdjointEigenSolver<Operator> solver(rho);
  Eigen::Vector2d p = solver.eigenvalues();
  if (p(0) < -kClipTolerance) {
    throw Error(ErrorCode::kNumericalFailure, "fixed point is not positive semidefinite", {p(0)});
  }
  if (p(0) < 0.0) {
    p(0) = 0.0;
    p /= p.sum();
    rho = solver.eigenvectors() * p.cast<Complex>().asDiagonal() *
          solver.eigenvectors().adjoint();
    rho = 0.5 * (rho + rho.adjoint()).eval();
  }
  return rho;
}

NessRecord make_record(const PropagatorResult& p, const Operator& rho) {
  NessRecord rec;
  rec.period = p.period();
  rec.t0_fraction = p.phase;
  rec.direction = p.waveform.direction;
  rec.rho = rho;
  rec.bloch = make_bloch_record(rho, p.t0);
  const StateVector v = vec(rho);
  rec.residual = (p.g * v - v).norm();
  return rec;
}

}  // namespace

NessRecord ness_from_propagator(const PropagatorResult& p, double eigen_residual_tol) {
  const EigenDecomposition dec = eig(ComplexMatrix(p.g), eigen_residual_tol);
  std::size_t best = 0;
  double nearest = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < dec.eigenvalues.size(); ++k) {
    const double dist = std::abs(dec.eigenvalues[k] - 1.0);
    if (dist < nearest) {
      nearest = dist;
      best = k;
    }
  }
  if (nearest > 1e-4) {
    throw Error(ErrorCode::kNoSteadyState, "no Floquet multiplier near 1", {nearest});
  }
  const StateVector v = dec.right_eigenvectors.col(static_cast<Eigen::Index>(best));
  return make_record(p, state_from_vector(v));
}

NessRecord tenth_period_ness(const PropagatorResult& p, const ComplexMatrix& rho0, int periods) {
  validate_state(rho0);
  if (periods < 0) throw Error(ErrorCode::kInvalidInput, "periods must be >= 0");
  StateVector v = vec(rho0);
  for (int n = 0; n < periods; ++n) v = p.g * v;
  return make_record(p, state_from_vector(v));
}

Operator static_steady_state(const Superoperator& l) {
  Eigen::JacobiSVD<Superoperator> svd(l, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double scale = std::max(1.0, sv(0));
  if (sv(2) <= 1e-9 * scale) {
    throw Error(ErrorCode::kAmbiguousSteadyState, "Liouvillian null space is degenerate",
                {sv(2), sv(3)});
  }
  const StateVector v = svd.matrixV().col(3);
  const Operator rho = state_from_vector(v);
  const double residual = (l * vec(rho)).norm();
  if (residual > 1e-9) {
    throw Error(ErrorCode::kNumericalFailure, "static steady state residual too large",
                {residual});
  }
  return rho;
}

BlochVector sample_tomography(const ComplexMatrix& rho, long long shots, std::uint64_t seed) {
  if (shots < 1) throw Error(ErrorCode::kInvalidInput, "shots must be >= 1");
  const BlochVector exact = bloch_from_rho(rho);
  std::mt19937_64 gen(seed);
  auto axis = [&](double expectation) {
    std::bernoulli_distribution draw(std::clamp(0.5 * (1.0 + expectation), 0.0, 1.0));
    long long hits = 0;
    for (long long s = 0; s < shots; ++s) hits += draw(gen) ? 1 : 0;
    return 2.0 * static_cast<double>(hits) / static_cast<double>(shots) - 1.0;
  };
  BlochVector out;
  out.x = axis(exact.x);
  out.y = axis(exact.y);
  out.z = axis(exact.z);
  return out;
}

}  // namespace lindfloq
