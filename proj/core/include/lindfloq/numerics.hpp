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

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "lindfloq/detail/pade_expm.hpp"
#include "lindfloq/error.hpp"

namespace lindfloq {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

/// Right eigenpairs of a general (non-normal) complex matrix.
///
/// Eigenvalues are ordered by real part descending; values whose real parts
/// agree to within a relative 1e-9 are ordered by imaginary part ascending.
/// Each eigenvector column has unit 2-norm and its largest-magnitude entry
/// is real and positive. `residuals[i]` is ||A v_i - lambda_i v_i||_2.
struct EigenDecomposition {
  std::vector<Complex> eigenvalues;
  ComplexMatrix right_eigenvectors;
  std::vector<double> residuals;
};

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// Throws kNumericalFailure (with residuals as diagnostics) when the solver
/// does not converge or a residual exceeds residual_tol * ||A||_F.
EigenDecomposition eig(const ComplexMatrix& a, double residual_tol = 1e-10);

/// Permutation putting `values` into the deterministic spectral order used by eig.
std::vector<int> spectral_order(std::span<const Complex> values);

/// Inverts mu = exp(T lambda) on the principal branch, Im lambda in (-pi/T, pi/T].
std::vector<Complex> principal_log_eigenvalues(std::span<const Complex> multipliers,
                                               double t_period);

/// Minimal total |a_i - b_sigma(i)| over all perfect matchings sigma.
/// Exhaustive search; sets larger than 8 elements are rejected.
double eigenvalue_set_distance(std::span<const Complex> a, std::span<const Complex> b);

/// max |A - A^dagger|.
double hermitian_defect(const ComplexMatrix& a);
bool is_hermitian(const ComplexMatrix& a, double rel_tol = 1e-12);

/// Ratio of extreme singular values; +inf for rank-deficient input.
double condition_number(const ComplexMatrix& a);

}  // namespace lindfloq
