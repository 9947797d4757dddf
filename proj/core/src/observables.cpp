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

#include "lindfloq/observables.hpp"

#include <algorithm>
#include <cmath>

namespace lindfloq {

namespace {

void require_qubit(const ComplexMatrix& rho) {
  if (rho.rows() != 2 || rho.cols() != 2) {
    throw Error(ErrorCode::kInvalidState, "expected a 2x2 density matrix");
  }
}

void require_unit_trace(const ComplexMatrix& rho, double tol) {
  const Complex tr = rho.trace();
  if (std::abs(tr - 1.0) > tol) {
    throw Error(ErrorCode::kInvalidState, "density matrix trace differs from 1",
                {tr.real(), tr.imag()});
  }
}

}  // namespace

double BlochVector::norm() const { return std::sqrt(x * x + y * y + z * z); }

void validate_state(const ComplexMatrix& rho, double tol) {
  require_qubit(rho);
  const double defect = hermitian_defect(rho);
  if (defect > 1e-10) {
    throw Error(ErrorCode::kInvalidState, "density matrix is not Hermitian", {defect});
  }
  require_unit_trace(rho, 1e-10);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(rho, Eigen::EigenvaluesOnly);
  const double smallest = solver.eigenvalues()(0);
  if (smallest < -tol) {
    throw Error(ErrorCode::kInvalidState, "density matrix has a negative eigenvalue",
                {smallest});
  }
}

BlochVector bloch_from_rho(const ComplexMatrix& rho) {
  require_qubit(rho);
  require_unit_trace(rho, 1e-8);
  // Tr(rho sigma_x) = 2 Re rho10, Tr(rho sigma_y) = 2 Im rho10, Tr(rho sigma_z) = rho00 - rho11
  return {2.0 * rho(1, 0).real(), 2.0 * rho(1, 0).imag(),
          rho(0, 0).real() - rho(1, 1).real()};
}

BlochRecord make_bloch_record(const ComplexMatrix& rho, double t) {
  const BlochVector b = bloch_from_rho(rho);
  BlochRecord r;
  r.t = t;
  r.x = b.x;
  r.y = b.y;
  r.z = b.z;
  r.entropy = entropy(rho);
  r.purity = purity(rho);
  return r;
}

double entropy(const ComplexMatrix& rho) {
  require_qubit(rho);
  require_unit_trace(rho, 1e-8);
  const ComplexMatrix herm = 0.5 * (rho + rho.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(herm, Eigen::EigenvaluesOnly);
  double s = 0.0;
  for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
    const double p = std::clamp(solver.eigenvalues()(i), 0.0, 1.0);
    if (p > 0.0) s -= p * std::log2(p);
  }
  return std::clamp(s, 0.0, 1.0);
}

double purity(const ComplexMatrix& rho) {
  const BlochVector b = bloch_from_rho(rho);
  const double r2 = b.x * b.x + b.y * b.y + b.z * b.z;
  return std::clamp(0.5 * (1.0 + r2), 0.5, 1.0);
}

double trace_distance(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(ErrorCode::kInvalidInput, "trace_distance needs equal shapes");
  }
  Eigen::JacobiSVD<ComplexMatrix> svd(a - b);
  return 0.5 * svd.singularValues().sum();
}

}  // namespace lindfloq
