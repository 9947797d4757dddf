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

#include "lindfloq/lindblad.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace lindfloq {

namespace {

bool finite_all(std::initializer_list<double> xs) {
  for (double x : xs) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

struct SinCos {
  double sin;
  double cos;
};

// sin and cos of 2*pi*v for v in [0, 1/2], reduced to the first octant so
// that quarter and half turns come out exact.
SinCos sincos_turns(double v) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  if (v > 0.25) {
    const double w = 0.5 - v;  // exact: v in (1/4, 1/2]
    const SinCos r = sincos_turns(w);
    return {r.sin, -r.cos};
  }
  if (v > 0.125) {
    const double w = 0.25 - v;  // exact: v in (1/8, 1/4]
    return {std::cos(two_pi * w), std::sin(two_pi * w) + 0.0};
  }
  return {std::sin(two_pi * v), std::cos(two_pi * v)};
}

}  // namespace

std::string_view to_string(PathFamily family) {
  return family == PathFamily::kCircle ? "circle" : "cos_squared";
}

std::string_view to_string(Direction direction) {
  return direction == Direction::kCCW ? "CCW" : "CW";
}

PathFamily parse_path_family(std::string_view text) {
  if (text == "circle" || text == "Circle") return PathFamily::kCircle;
  if (text == "cos_squared" || text == "CosSquared" || text == "cos2") {
    return PathFamily::kCosSquared;
  }
  throw Error(ErrorCode::kInvalidInput, "unknown path family '" + std::string(text) + "'");
}

Direction parse_direction(std::string_view text) {
  if (text == "CCW" || text == "ccw") return Direction::kCCW;
  if (text == "CW" || text == "cw") return Direction::kCW;
  throw Error(ErrorCode::kInvalidInput, "unknown direction '" + std::string(text) + "'");
}

Direction reversed(Direction direction) {
  return direction == Direction::kCCW ? Direction::kCW : Direction::kCCW;
}

double direction_sign(Direction direction) {
  return direction == Direction::kCCW ? 1.0 : -1.0;
}

void DissipationParams::validate() const {
  if (!finite_all({gamma_e, gamma_phi}) || gamma_e < 0.0 || gamma_phi < 0.0) {
    throw Error(ErrorCode::kInvalidInput, "dissipation rates must be finite and non-negative");
  }
}

void DriveWaveform::validate() const {
  if (!finite_all({j_max, j_min, delta_max, period})) {
    throw Error(ErrorCode::kInvalidInput, "waveform parameters must be finite");
  }
  if (!(period > 0.0)) {
    throw Error(ErrorCode::kInvalidInput, "waveform period must be positive");
  }
  if (family == PathFamily::kCosSquared && !(j_max >= j_min && j_min >= 0.0)) {
    throw Error(ErrorCode::kInvalidInput, "cos_squared path needs j_max >= j_min >= 0");
  }
}

DriveWaveform DriveWaveform::with_period(double t) const {
  DriveWaveform w = *this;
  w.period = t;
  return w;
}

DriveWaveform DriveWaveform::with_direction(Direction d) const {
  DriveWaveform w = *this;
  w.direction = d;
  return w;
}

ControlPoint drive_at(const DriveWaveform& w, double t) {
  double reduced = std::fmod(t, w.period);
  if (reduced < 0.0) reduced += w.period;
  return drive_at_phase(w, reduced / w.period);
}

ControlPoint drive_at_phase(const DriveWaveform& w, double phase) {
  double p = phase - std::floor(phase);
  if (p >= 1.0) p = 0.0;

  // Fold onto [0, 1/2]: cos is even about the half turn, sin odd.
  const bool upper = p > 0.5;
  const double v = upper ? 1.0 - p : p;
  const SinCos sc = sincos_turns(v);
  const double sin_full = upper ? -sc.sin : sc.sin;

  ControlPoint out;
  if (w.family == PathFamily::kCircle) {
    out.j = w.j_max * sc.cos;
  } else {
    // cos^2(pi t / T) = (1 + cos(2 pi t / T)) / 2
    out.j = (w.j_max - w.j_min) * (0.5 + 0.5 * sc.cos) + w.j_min;
  }
  out.delta = direction_sign(w.direction) * w.delta_max * sin_full;
  return out;
}

Operator hamiltonian(const ControlPoint& p) {
  Operator h;
  h << p.delta / 2.0, p.j, p.j, -p.delta / 2.0;
  return h;
}

std::vector<Operator> jump_operators(const DissipationParams& d) {
  Operator lower = Operator::Zero();
  lower(0, 1) = std::sqrt(d.gamma_e);
  const Operator dephasing = std::sqrt(d.gamma_phi / 2.0) * pauli::sigma_z();
  return {lower, dephasing};
}

namespace {

Superoperator commutator_generator(const Operator& h) {
  const ComplexMatrix id = ComplexMatrix::Identity(2, 2);
  return Complex(0.0, -1.0) * (kron(id, h) - kron(h.transpose(), id));
}

}  // namespace

Superoperator liouvillian(const ControlPoint& p, const DissipationParams& d) {
  return LiouvillianParts(d).at(p);
}

LiouvillianParts::LiouvillianParts(const DissipationParams& d) {
  const ComplexMatrix id = ComplexMatrix::Identity(2, 2);
  dissipator.setZero();
  for (const Operator& l : jump_operators(d)) {
    const Operator ldl = l.adjoint() * l;
    dissipator += kron(l.conjugate(), l) - 0.5 * kron(id, ldl) - 0.5 * kron(ldl.transpose(), id);
  }
  coupling = commutator_generator(pauli::sigma_x());
  detuning = commutator_generator(0.5 * pauli::sigma_z());
}

StateVector vec(const ComplexMatrix& rho) {
  if (rho.rows() != 2 || rho.cols() != 2) {
    throw Error(ErrorCode::kInvalidInput, "vec expects a 2x2 density matrix");
  }
  StateVector v;
  v << rho(0, 0), rho(1, 0), rho(0, 1), rho(1, 1);
  return v;
}

Operator unvec(const ComplexVector& v) {
  if (v.size() != 4) {
    throw Error(ErrorCode::kInvalidInput, "unvec expects a length-4 vector");
  }
  Operator rho;
  rho << v(0), v(2), v(1), v(3);
  return rho;
}

namespace pauli {

Operator identity() { return Operator::Identity(); }

Operator sigma_x() {
  Operator s;
  s << 0.0, 1.0, 1.0, 0.0;
  return s;
}

Operator sigma_y() {
  Operator s;
  s << 0.0, Complex(0.0, -1.0), Complex(0.0, 1.0), 0.0;
  return s;
}

Operator sigma_z() {
  Operator s;
  s << 1.0, 0.0, 0.0, -1.0;
  return s;
}

}  // namespace pauli

namespace states {

Operator ground() {
  Operator r = Operator::Zero();
  r(0, 0) = 1.0;
  return r;
}

Operator excited() {
  Operator r = Operator::Zero();
  r(1, 1) = 1.0;
  return r;
}

Operator plus_x() { return from_bloch(1.0, 0.0, 0.0); }
Operator minus_x() { return from_bloch(-1.0, 0.0, 0.0); }
Operator maximally_mixed() { return from_bloch(0.0, 0.0, 0.0); }

Operator from_bloch(double x, double y, double z) {
  Operator r;
  r << 0.5 * (1.0 + z), Complex(0.5 * x, -0.5 * y), Complex(0.5 * x, 0.5 * y), 0.5 * (1.0 - z);
  return r;
}

}  // namespace states

}  // namespace lindfloq
