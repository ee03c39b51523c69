// Copyright 2026 The dmftqsim Authors
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

#include "dmftqsim/ground_state.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <numbers>
#include <stdexcept>

#include <ceres/ceres.h>
#include <glog/logging.h>

#include "dmftqsim/rng.hpp"

namespace dmftqsim {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kDegenerateGap = 1e-8;

void fix_phase(Eigen::VectorXcd& v) {
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < v.size(); ++i) {
    if (std::abs(v[i]) > std::abs(v[best]) + 1e-12) best = i;
  }
  v *= std::polar(1.0, -std::arg(v[best]));
}

class AnsatzEnergy final : public ceres::FirstOrderFunction {
 public:
  AnsatzEnergy(const Eigen::MatrixXcd& h, int* evals) : h_(h), evals_(evals) {}

  double energy(const double* x) const {
    ++*evals_;
    const Eigen::VectorXcd psi = ansatz_state(std::span<const double>(x, 8));
    return psi.dot(h_ * psi).real();
  }

  bool Evaluate(const double* x, double* cost, double* gradient) const override {
    *cost = energy(x);
    if (gradient != nullptr) {
      // Each angle enters through exactly one Ry gate.
      std::array<double, 8> y;
      std::copy(x, x + 8, y.begin());
      for (int j = 0; j < 8; ++j) {
        y[j] = x[j] + kPi / 2.0;
        const double plus = energy(y.data());
        y[j] = x[j] - kPi / 2.0;
        const double minus = energy(y.data());
        y[j] = x[j];
        gradient[j] = 0.5 * (plus - minus);
      }
    }
    return true;
  }

  int NumParameters() const override { return 8; }

 private:
  const Eigen::MatrixXcd& h_;
  int* evals_;
};

// BFGS restarts after a non-descent update are routine here; keep glog
// warnings about them off stderr while any solve runs.
class QuietGlog {
 public:
  QuietGlog() {
    std::lock_guard lock(mutex_);
    if (depth_++ == 0) {
      saved_ = FLAGS_minloglevel;
      FLAGS_minloglevel = std::max(saved_, static_cast<int>(google::GLOG_ERROR));
    }
  }
  ~QuietGlog() {
    std::lock_guard lock(mutex_);
    if (--depth_ == 0) FLAGS_minloglevel = saved_;
  }
  QuietGlog(const QuietGlog&) = delete;
  QuietGlog& operator=(const QuietGlog&) = delete;

 private:
  static inline std::mutex mutex_;
  static inline int depth_ = 0;
  static inline int saved_ = 0;
};

class BudgetCallback final : public ceres::IterationCallback {
 public:
  BudgetCallback(const int* evals, int budget) : evals_(evals), budget_(budget) {}
  ceres::CallbackReturnType operator()(const ceres::IterationSummary&) override {
    return *evals_ >= budget_ ? ceres::SOLVER_TERMINATE_SUCCESSFULLY : ceres::SOLVER_CONTINUE;
  }

 private:
  const int* evals_;
  int budget_;
};

}  // namespace

Eigen::VectorXcd atomic_reference_state() {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(kSystemDim);
  v[6] = v[9] = 1.0 / std::numbers::sqrt2;
  return v;
}

std::array<double, 8> atomic_limit_angles() {
  return {kPi / 2.0, -kPi, kPi / 2.0, kPi, 0.0, kPi / 2.0, kPi / 2.0, -kPi / 2.0};
}

GroundState exact_ground_state(const AimParameters& p) {
  p.validate();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(aim_matrix(p));
  const Eigen::VectorXd& w = es.eigenvalues();
  int deg = 1;
  while (deg < w.size() && w[deg] - w[0] < kDegenerateGap) ++deg;

  Eigen::VectorXcd v;
  if (deg == 1) {
    v = es.eigenvectors().col(0);
  } else {
    const Eigen::MatrixXcd basis = es.eigenvectors().leftCols(deg);
    auto project = [&](const Eigen::VectorXcd& r) -> Eigen::VectorXcd {
      return basis * (basis.adjoint() * r);
    };
    v = project(atomic_reference_state());
    for (int i = 0; v.norm() < 1e-6 && i < kSystemDim; ++i) {
      v = project(Eigen::VectorXcd::Unit(kSystemDim, i));
    }
    v.normalize();
  }
  fix_phase(v);
  return {w[0] + fermionic_energy_offset(p), v, deg};
}

Eigen::VectorXcd ansatz_state(std::span<const double> thetas) {
  auto s = QuantumState::zero(kSystemQubits);
  apply_circuit(s, ansatz_circuit(thetas));
  return s.vector();
}

double fidelity(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
  if (a.size() != b.size()) throw std::invalid_argument("fidelity: dimension mismatch");
  const double na = a.norm(), nb = b.norm();
  if (na == 0.0 || nb == 0.0) throw std::invalid_argument("fidelity: zero-norm input");
  return std::norm(a.dot(b)) / (na * na * nb * nb);
}

VariationalResult optimize_ansatz(const AimParameters& p, const VariationalOptions& opts) {
  if (!(opts.tolerance > 0.0)) throw std::invalid_argument("optimize_ansatz: tolerance must be > 0");
  const Eigen::MatrixXcd h = aim_matrix(p);
  const GroundState exact = exact_ground_state(p);
  const double offset = fermionic_energy_offset(p);

  int evals = 0;
  VariationalResult best;
  best.fidelity = -1.0;
  double lowest = std::numeric_limits<double>::infinity();

  for (int r = 0; r < opts.max_restarts && evals < opts.max_evals; ++r) {
    Rng rng(derive_seed(opts.seed, {static_cast<std::uint64_t>(r)}));
    std::array<double, 8> x;
    for (double& t : x) t = rng.uniform(-kPi, kPi);

    BudgetCallback budget(&evals, opts.max_evals);
    ceres::GradientProblemSolver::Options o;
    o.line_search_direction_type = ceres::BFGS;
    o.max_num_iterations = 1000;
    o.function_tolerance = 1e-16;
    o.gradient_tolerance = 1e-13;
    o.parameter_tolerance = 1e-16;
    o.logging_type = ceres::SILENT;
    o.callbacks.push_back(&budget);
    ceres::GradientProblem problem(new AnsatzEnergy(h, &evals));
    ceres::GradientProblemSolver::Summary summary;
    {
      QuietGlog quiet;
      ceres::Solve(o, problem, x.data(), &summary);
    }

    const Eigen::VectorXcd psi = ansatz_state(x);
    const double e = psi.dot(h * psi).real() + offset;
    const double f = fidelity(psi, exact.vector);
    lowest = std::min(lowest, e);
    best.best_energy_by_restart.push_back(lowest);
    best.iterations += static_cast<int>(summary.iterations.size());
    if (f > best.fidelity) {
      best.thetas = x;
      best.energy = e;
      best.fidelity = f;
    }
    best.restarts = r + 1;
    if (1.0 - best.fidelity <= opts.tolerance) break;
  }
  best.evaluations = evals;
  best.converged = 1.0 - best.fidelity <= opts.tolerance;
  return best;
}

PreparedState prepare_ground_state(const AimParameters& p, double v_cutoff,
                                   const VariationalOptions& opts) {
  PreparedState out;
  if (p.v < v_cutoff) {
    const auto angles = atomic_limit_angles();
    out.exact_path = true;
    out.result.thetas = angles;
    out.vector = ansatz_state(angles);
    out.result.energy = out.vector.dot(aim_matrix(p) * out.vector).real() + fermionic_energy_offset(p);
    out.result.fidelity = fidelity(out.vector, exact_ground_state(p).vector);
    out.result.converged = true;
  } else {
    out.result = optimize_ansatz(p, opts);
    out.vector = ansatz_state(out.result.thetas);
  }
  out.circuit = ansatz_circuit(out.result.thetas);
  return out;
}

}  // namespace dmftqsim
