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

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <unsupported/Eigen/LevenbergMarquardt>

#include "lindfloq/analysis.hpp"

namespace lindfloq {

namespace {

using Eigen::VectorXd;
using Eigen::MatrixXd;

struct Samples {
  VectorXd t;
  VectorXd y;
  double period = 0.0;
};

Samples collect(const StroboscopicSeries& series, Component c) {
  if (!(series.period > 0.0)) throw Error(ErrorCode::kInvalidInput, "series period must be > 0");
  Samples s;
  s.period = series.period;
  const auto m = static_cast<Eigen::Index>(series.records.size());
  s.t.resize(m);
  s.y.resize(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const auto& r = series.records[static_cast<std::size_t>(i)];
    s.t(i) = r.n * series.period;
    s.y(i) = c == Component::kX ? r.bloch.x : c == Component::kY ? r.bloch.y : r.bloch.z;
    if (!std::isfinite(s.y(i))) throw Error(ErrorCode::kInvalidInput, "non-finite sample");
  }
  return s;
}

struct Model : Eigen::DenseFunctor<double> {
  const Samples* s;
  bool underdamped;

  Model(const Samples& samples, bool under)
      : Eigen::DenseFunctor<double>(under ? 5 : 3, static_cast<int>(samples.t.size())),
        s(&samples),
        underdamped(under) {}

  int operator()(const InputType& p, ValueType& f) const {
    for (Eigen::Index i = 0; i < s->t.size(); ++i) {
      const double t = s->t(i);
      const double e = std::exp(-p(1) * t);
      const double shape = underdamped ? std::cos(p(2) * t + p(3)) : 1.0;
      f(i) = p(0) * e * shape + p(inputs() - 1) - s->y(i);
    }
    return 0;
  }

  int df(const InputType& p, JacobianType& jac) const {
    for (Eigen::Index i = 0; i < s->t.size(); ++i) {
      const double t = s->t(i);
      const double e = std::exp(-p(1) * t);
      if (underdamped) {
        const double c = std::cos(p(2) * t + p(3));
        const double sn = std::sin(p(2) * t + p(3));
        jac(i, 0) = e * c;
        jac(i, 1) = -t * p(0) * e * c;
        jac(i, 2) = -t * p(0) * e * sn;
        jac(i, 3) = -p(0) * e * sn;
        jac(i, 4) = 1.0;
      } else {
        jac(i, 0) = e;
        jac(i, 1) = -t * p(0) * e;
        jac(i, 2) = 1.0;
      }
    }
    return 0;
  }
};

// Linear amplitudes for fixed (kappa, omega).
VectorXd linear_start(const Samples& s, bool under, double kappa, double omega) {
  const Eigen::Index m = s.t.size();
  MatrixXd a(m, under ? 3 : 2);
  for (Eigen::Index i = 0; i < m; ++i) {
    const double e = std::exp(-kappa * s.t(i));
    if (under) {
      a(i, 0) = e * std::cos(omega * s.t(i));
      a(i, 1) = e * std::sin(omega * s.t(i));
      a(i, 2) = 1.0;
    } else {
      a(i, 0) = e;
      a(i, 1) = 1.0;
    }
  }
  const VectorXd c = a.colPivHouseholderQr().solve(s.y);
  VectorXd p(under ? 5 : 3);
  if (under) {
    p << std::hypot(c(0), c(1)), kappa, omega, std::atan2(-c(1), c(0)), c(2);
  } else {
    p << c(0), kappa, c(1);
  }
  return p;
}

double wrap_phase(double phi) {
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  phi = std::remainder(phi, kTwoPi);
  if (phi <= -std::numbers::pi) phi += kTwoPi;
  return phi;
}

// Same curve at the sample times, with A >= 0 and omega in [0, pi/T].
void canonicalize(VectorXd& p, double period) {
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  if (p(0) < 0.0) {
    p(0) = -p(0);
    p(3) += std::numbers::pi;
  }
  const double nyquist = std::numbers::pi / period;
  double omega = std::remainder(p(2), kTwoPi / period);
  if (omega < 0.0) {
    omega = -omega;
    p(3) = -p(3);
  }
  if (omega > nyquist) omega = nyquist;
  p(2) = omega;
  p(3) = wrap_phase(p(3));
}

bool converged(Eigen::LevenbergMarquardtSpace::Status status) {
  using namespace Eigen::LevenbergMarquardtSpace;
  return status != ImproperInputParameters && status != TooManyFunctionEvaluation &&
         status != NotStarted && status != Running;
}

}  // namespace

std::string_view to_string(Component c) {
  switch (c) {
    case Component::kX: return "x";
    case Component::kY: return "y";
    case Component::kZ: return "z";
  }
  return "?";
}

std::string_view to_string(TransientKind k) {
  return k == TransientKind::kUnderdamped ? "underdamped" : "overdamped";
}

TransientFit fit_transient(const StroboscopicSeries& series, Component component,
                           TransientKind kind, std::span<const Complex> seed_eigenvalues) {
  const Samples s = collect(series, component);
  const bool under = kind == TransientKind::kUnderdamped;
  const int nparams = under ? 5 : 3;
  const Eigen::Index m = s.t.size();
  if (m <= nparams) {
    throw Error(ErrorCode::kFitFailure, "too few samples for the model",
                {static_cast<double>(m), static_cast<double>(nparams)});
  }
  const double window = s.t(m - 1) - s.t(0);
  if (!(window > 0.0)) throw Error(ErrorCode::kFitFailure, "samples span no time");
  const double nyquist = std::numbers::pi / s.period;

  std::vector<double> kappas;
  for (int k = -1; k <= 4; ++k) kappas.push_back(std::ldexp(1.0 / window, k));
  std::vector<double> omegas;
  if (under) {
    for (double f : {0.25, 0.5, 0.75, 0.95}) omegas.push_back(f * nyquist);
    for (double m_cycles : {0.5, 1.0, 2.0}) omegas.push_back(2.0 * std::numbers::pi * m_cycles / window);
  } else {
    omegas.push_back(0.0);
  }
  for (const Complex& lam : seed_eigenvalues) {
    if (lam.real() < 0.0) kappas.push_back(-lam.real());
    if (under && std::abs(lam.imag()) > 0.0) omegas.push_back(std::abs(lam.imag()));
  }

  Model model(s, under);
  double best_rms = std::numeric_limits<double>::infinity();
  VectorXd best;
  for (double kappa : kappas) {
    for (double omega : omegas) {
      VectorXd p = linear_start(s, under, kappa, omega);
      if (!p.allFinite()) continue;
      Eigen::LevenbergMarquardt<Model> lm(model);
      lm.setMaxfev(2000);
      lm.setXtol(1e-14);
      lm.setFtol(1e-14);
      const auto status = lm.minimize(p);
      if (!converged(status) || !p.allFinite()) continue;
      VectorXd f(m);
      model(p, f);
      const double rms = std::sqrt(f.squaredNorm() / static_cast<double>(m));
      if (rms < best_rms) {
        best_rms = rms;
        best = p;
      }
    }
  }
  if (best.size() == 0) throw Error(ErrorCode::kFitFailure, "no start point converged");

  Model::JacobianType jac(m, nparams);
  model.df(best, jac);
  Eigen::JacobiSVD<MatrixXd> svd(jac);
  const auto& sv = svd.singularValues();
  const double ratio = sv(nparams - 1) / sv(0);
  if (!(ratio > 1e-10)) {
    throw Error(ErrorCode::kFitFailure, "fit Jacobian is rank deficient", {ratio});
  }

  TransientFit fit;
  fit.kind = kind;
  fit.points = static_cast<int>(m);
  fit.window = window;
  fit.rms = best_rms;
  const double dof = static_cast<double>(m - nparams);
  const MatrixXd jtj = jac.transpose() * jac;
  fit.covariance = (best_rms * best_rms * static_cast<double>(m) / dof) *
                   jtj.ldlt().solve(MatrixXd::Identity(nparams, nparams));
  if (under) {
    canonicalize(best, s.period);
    fit.names = {"amplitude", "decay", "frequency", "phase", "offset"};
  } else {
    fit.names = {"amplitude", "decay", "offset"};
  }
  fit.params.assign(best.data(), best.data() + best.size());
  return fit;
}

ModelSelection select_transient_model(const StroboscopicSeries& series, Component component,
                                      std::span<const Complex> seed_eigenvalues,
                                      double min_improvement) {
  ModelSelection sel;
  auto attempt = [&](TransientKind kind, std::optional<TransientFit>& slot, std::string& error) {
    try {
      slot = fit_transient(series, component, kind, seed_eigenvalues);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kFitFailure) throw;
      error = e.what();
    }
  };
  attempt(TransientKind::kOverdamped, sel.overdamped, sel.overdamped_error);
  attempt(TransientKind::kUnderdamped, sel.underdamped, sel.underdamped_error);

  const bool resolved = sel.underdamped && sel.underdamped->frequency() *
                                                   sel.underdamped->window >= std::numbers::pi;
  if (sel.overdamped && sel.underdamped) {
    const double over = sel.overdamped->rms;
    sel.improvement = over > 0.0 ? 1.0 - sel.underdamped->rms / over : 0.0;
    if (resolved && sel.improvement >= min_improvement) sel.chosen = TransientKind::kUnderdamped;
  } else if (sel.underdamped && resolved) {
    sel.chosen = TransientKind::kUnderdamped;
  } else if (!sel.overdamped) {
    throw Error(ErrorCode::kFitFailure, "no transient model fits: " + sel.overdamped_error +
                                            (sel.underdamped ? "; oscillation unresolved"
                                                             : "; " + sel.underdamped_error));
  }
  return sel;
}

}  // namespace lindfloq
