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

#include "lindfloq/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

namespace lindfloq {

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

std::vector<int> spectral_order(std::span<const Complex> values) {
  std::vector<int> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int l, int r) {
    return values[l].real() > values[r].real();
  });

  double scale = 1.0;
  for (const auto& v : values) scale = std::max(scale, std::abs(v));
  const double tie = 1e-9 * scale;

  // Conjugate pairs come out of the solver with real parts that differ in
  // the last bits; group those and order the group by imaginary part.
  std::size_t begin = 0;
  while (begin < order.size()) {
    std::size_t end = begin + 1;
    while (end < order.size() &&
           values[order[begin]].real() - values[order[end]].real() <= tie) {
      ++end;
    }
    std::stable_sort(order.begin() + begin, order.begin() + end, [&](int l, int r) {
      return values[l].imag() < values[r].imag();
    });
    begin = end;
  }
  return order;
}

EigenDecomposition eig(const ComplexMatrix& a, double residual_tol) {
  if (a.rows() != a.cols() || a.rows() == 0) {
    throw Error(ErrorCode::kInvalidInput, "eig requires a non-empty square matrix");
  }
  Eigen::ComplexEigenSolver<ComplexMatrix> solver(a, true);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::kNumericalFailure, "complex Schur iteration did not converge");
  }

  const ComplexVector& raw_values = solver.eigenvalues();
  const ComplexMatrix& raw_vectors = solver.eigenvectors();
  const auto n = static_cast<std::size_t>(a.rows());

  std::vector<Complex> values(raw_values.data(), raw_values.data() + n);
  const auto order = spectral_order(values);

  EigenDecomposition out;
  out.eigenvalues.resize(n);
  out.right_eigenvectors.resize(a.rows(), a.cols());
  out.residuals.resize(n);

  const double bound =
      residual_tol * std::max(a.norm(), std::numeric_limits<double>::min());
  bool ok = true;
  for (std::size_t k = 0; k < n; ++k) {
    const int src = order[k];
    ComplexVector v = raw_vectors.col(src);
    v.normalize();
    Eigen::Index pivot = 0;
    v.cwiseAbs().maxCoeff(&pivot);
    v *= std::conj(v(pivot)) / std::abs(v(pivot));
    v(pivot) = Complex(v(pivot).real(), 0.0);

    out.eigenvalues[k] = values[src];
    out.right_eigenvectors.col(static_cast<Eigen::Index>(k)) = v;
    out.residuals[k] = (a * v - values[src] * v).norm();
    if (!(out.residuals[k] <= bound)) ok = false;
  }
  if (!ok) {
    throw Error(ErrorCode::kNumericalFailure, "eigenpair residual above bound",
                out.residuals);
  }
  return out;
}

std::vector<Complex> principal_log_eigenvalues(std::span<const Complex> multipliers,
                                               double t_period) {
  if (!(t_period > 0.0) || !std::isfinite(t_period)) {
    throw Error(ErrorCode::kInvalidInput, "period must be positive and finite");
  }
  std::vector<Complex> out;
  out.reserve(multipliers.size());
  for (const auto& mu : multipliers) {
    const double modulus = std::abs(mu);
    if (modulus == 0.0) {
      throw Error(ErrorCode::kSingularMap, "zero Floquet multiplier");
    }
    double phase = std::arg(mu);
    // std::arg returns -pi for a negative real with a -0 imaginary part.
    if (phase <= -std::numbers::pi) phase = std::numbers::pi;
    out.emplace_back(std::log(modulus) / t_period, phase / t_period);
  }
  return out;
}

double eigenvalue_set_distance(std::span<const Complex> a, std::span<const Complex> b) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::kInvalidInput, "eigenvalue sets differ in size");
  }
  if (a.size() > 8) {
    throw Error(ErrorCode::kInvalidInput, "exhaustive matching limited to 8 elements");
  }
  std::vector<std::size_t> perm(a.size());
  std::iota(perm.begin(), perm.end(), 0);
  double best = std::numeric_limits<double>::infinity();
  do {
    double cost = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) cost += std::abs(a[i] - b[perm[i]]);
    best = std::min(best, cost);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return a.empty() ? 0.0 : best;
}

double hermitian_defect(const ComplexMatrix& a) {
  if (a.rows() != a.cols()) return std::numeric_limits<double>::infinity();
  return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

bool is_hermitian(const ComplexMatrix& a, double rel_tol) {
  if (a.rows() != a.cols()) return false;
  if (a.size() == 0) return true;
  return hermitian_defect(a) <= rel_tol * a.cwiseAbs().maxCoeff();
}

double condition_number(const ComplexMatrix& a) {
  Eigen::JacobiSVD<ComplexMatrix> svd(a);
  const auto& s = svd.singularValues();
  if (s.size() == 0) return 1.0;
  const double smallest = s(s.size() - 1);
  if (smallest == 0.0) return std::numeric_limits<double>::infinity();
  return s(0) / smallest;
}

}  // namespace lindfloq
