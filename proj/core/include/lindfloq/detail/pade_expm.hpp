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

#include <cmath>
#include <complex>

#include <Eigen/Dense>

#include "lindfloq/error.hpp"

namespace lindfloq::detail {

// Scaling-and-squaring with diagonal Pade approximants of degree 3..13.
// Degree thresholds on the 1-norm are the backward-error bounds for double
// precision from Higham (2005).
inline constexpr double kTheta3 = 1.495585217958292e-2;
inline constexpr double kTheta5 = 2.539398330063230e-1;
inline constexpr double kTheta7 = 9.504178996162932e-1;
inline constexpr double kTheta9 = 2.097847961257068e0;
inline constexpr double kTheta13 = 5.371920351148152e0;

template <typename M>
M pade_low(const M& a, int degree) {
  static constexpr double b3[] = {120.0, 60.0, 12.0, 1.0};
  static constexpr double b5[] = {30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0};
  static constexpr double b7[] = {17297280.0, 8648640.0, 1995840.0, 277200.0,
                                  25200.0,    1512.0,    56.0,      1.0};
  static constexpr double b9[] = {17643225600.0, 8821612800.0, 2075673600.0, 302702400.0,
                                  30270240.0,    2162160.0,    110880.0,     3960.0,
                                  90.0,          1.0};
  const double* b = degree == 3 ? b3 : degree == 5 ? b5 : degree == 7 ? b7 : b9;

  const M ident = M::Identity(a.rows(), a.cols());
  const M a2 = a * a;
  M power = ident;
  M u_inner = b[1] * ident;
  M v = b[0] * ident;
  for (int k = 2; k <= degree; k += 2) {
    power = power * a2;
    v += b[k] * power;
    u_inner += b[k + 1] * power;
  }
  const M u = a * u_inner;
  return (v - u).partialPivLu().solve(v + u);
}

template <typename M>
M pade13(const M& a) {
  static constexpr double b[] = {64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
                                 1187353796428800.0,  129060195264000.0,   10559470521600.0,
                                 670442572800.0,      33522128640.0,       1323241920.0,
                                 40840800.0,          960960.0,            16380.0,
                                 182.0,               1.0};
  const M ident = M::Identity(a.rows(), a.cols());
  const M a2 = a * a;
  const M a4 = a2 * a2;
  const M a6 = a4 * a2;
  const M u = a * (a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) + b[7] * a6 + b[5] * a4 +
                   b[3] * a2 + b[1] * ident);
  const M v = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 + b[4] * a4 +
              b[2] * a2 + b[0] * ident;
  return (v - u).partialPivLu().solve(v + u);
}

}  // namespace lindfloq::detail

namespace lindfloq {

// Matrix exponential of a square complex matrix. Exact identity for the zero
// matrix; throws kInvalidInput on non-finite entries.
template <typename Derived>
typename Derived::PlainObject expm(const Eigen::MatrixBase<Derived>& input) {
  using M = typename Derived::PlainObject;
  if (input.rows() != input.cols()) {
    throw Error(ErrorCode::kInvalidInput, "expm requires a square matrix");
  }
  const M a = input;
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      const auto z = std::complex<double>(a(i, j));
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
        throw Error(ErrorCode::kInvalidInput, "expm input has non-finite entries");
      }
    }
  }
  const double norm1 = a.cwiseAbs().colwise().sum().maxCoeff();
  if (norm1 <= detail::kTheta3) return detail::pade_low(a, 3);
  if (norm1 <= detail::kTheta5) return detail::pade_low(a, 5);
  if (norm1 <= detail::kTheta7) return detail::pade_low(a, 7);
  if (norm1 <= detail::kTheta9) return detail::pade_low(a, 9);

  const int squarings =
      std::max(0, static_cast<int>(std::ceil(std::log2(norm1 / detail::kTheta13))));
  M result = detail::pade13(M(a * std::ldexp(1.0, -squarings)));
  for (int s = 0; s < squarings; ++s) result = result * result;
  return result;
}

}  // namespace lindfloq
