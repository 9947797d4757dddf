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

#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "lindfloq/numerics.hpp"

// The driven, dissipative qubit. Basis order is (|g>, |e>) and
// sigma_z = |g><g| - |e><e|, so the ground state sits at Bloch z = +1.
// Density matrices are vectorized by column stacking:
// vec(rho) = (rho00, rho10, rho01, rho11) and vec(A rho B) = (B^T (x) A) vec(rho).

namespace lindfloq {

using Operator = Eigen::Matrix2cd;
using Superoperator = Eigen::Matrix4cd;
using StateVector = Eigen::Vector4cd;

enum class PathFamily { kCircle, kCosSquared };
enum class Direction { kCCW, kCW };

std::string_view to_string(PathFamily family);
std::string_view to_string(Direction direction);
PathFamily parse_path_family(std::string_view text);
Direction parse_direction(std::string_view text);
Direction reversed(Direction direction);

/// +1 for counterclockwise, -1 for clockwise.
double direction_sign(Direction direction);

/// Spontaneous emission and pure dephasing rates, both in 1/us.
struct DissipationParams {
  double gamma_e = 4.0;
  double gamma_phi = 0.0;

  void validate() const;
  bool operator==(const DissipationParams&) const = default;
};

/// Closed drive loop (J(t), Delta(t)) with period `period` (us). Rates are
/// in rad/us. `j_min` only enters the CosSquared family.
struct DriveWaveform {
  PathFamily family = PathFamily::kCircle;
  double j_max = 20.0;
  double j_min = 0.0;
  double delta_max = 0.0;
  Direction direction = Direction::kCW;
  double period = 0.2;

  void validate() const;
  DriveWaveform with_period(double t) const;
  DriveWaveform with_direction(Direction d) const;
  bool operator==(const DriveWaveform&) const = default;
};

struct ControlPoint {
  double j = 0.0;
  double delta = 0.0;
  bool operator==(const ControlPoint&) const = default;
};

/// Drive at time t (us). The phase is reduced with fmod before any
/// trigonometry, so t and t + k*period give identical control points
/// whenever t + k*period is representable.
ControlPoint drive_at(const DriveWaveform& w, double t);

/// Drive at a phase given in turns (fractions of the period). Phases p and
/// 1 - p fold onto the same reduced argument, which makes the CCW point at p
/// bitwise equal to the CW point at 1 - p when 1 - p is computed exactly.
ControlPoint drive_at_phase(const DriveWaveform& w, double phase);

/// [[Delta/2, J], [J, -Delta/2]].
Operator hamiltonian(const ControlPoint& p);

/// sqrt(gamma_e)|g><e| and sqrt(gamma_phi/2) sigma_z, in that order.
std::vector<Operator> jump_operators(const DissipationParams& d);

Superoperator liouvillian(const ControlPoint& p, const DissipationParams& d);

/// L(J, Delta) = dissipator + J * coupling + Delta * detuning, precomputed
/// once per dissipation setting for the slice loops.
struct LiouvillianParts {
  Superoperator dissipator;
  Superoperator coupling;
  Superoperator detuning;

  explicit LiouvillianParts(const DissipationParams& d);
  Superoperator at(const ControlPoint& p) const {
    return dissipator + p.j * coupling + p.delta * detuning;
  }
};

StateVector vec(const ComplexMatrix& rho);
Operator unvec(const ComplexVector& v);

namespace pauli {
Operator identity();
Operator sigma_x();
Operator sigma_y();
Operator sigma_z();
}  // namespace pauli

namespace states {
Operator ground();
Operator excited();
Operator plus_x();
Operator minus_x();
Operator maximally_mixed();
/// (I + x sigma_x + y sigma_y + z sigma_z) / 2.
Operator from_bloch(double x, double y, double z);
}  // namespace states

}  // namespace lindfloq
