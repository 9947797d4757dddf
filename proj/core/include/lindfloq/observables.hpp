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

#include <array>

#include "lindfloq/lindblad.hpp"

namespace lindfloq {

struct BlochVector {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  double norm() const;
  bool operator==(const BlochVector&) const = default;
};

/// Pauli expectations at time t (us) with entropy in bits and purity Tr(rho^2).
struct BlochRecord {
  double t = 0.0;
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
  double entropy = 0.0;
  double purity = 1.0;

  BlochVector bloch() const { return {x, y, z}; }
};

/// Throws kInvalidState unless rho is Hermitian (1e-10), unit trace (1e-10)
/// and positive semidefinite down to -tol.
void validate_state(const ComplexMatrix& rho, double tol = 1e-10);

/// Throws kInvalidState when |Tr rho - 1| > 1e-8.
BlochVector bloch_from_rho(const ComplexMatrix& rho);

BlochRecord make_bloch_record(const ComplexMatrix& rho, double t);

/// Base-2 von Neumann entropy, clamped to [0, 1].
double entropy(const ComplexMatrix& rho);
double purity(const ComplexMatrix& rho);

/// Half the sum of singular values of a - b.
double trace_distance(const ComplexMatrix& a, const ComplexMatrix& b);

}  // namespace lindfloq
