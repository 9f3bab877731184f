#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <string>

namespace brayton {

// RHS callback; returns false to signal an invalid state (negative density,
// temperature, ...) so the integrator can retreat instead of crashing.
using OdeRhs =
    std::function<bool(double t, const Eigen::VectorXd& y, Eigen::VectorXd& dydt)>;

struct OdeOptions {
  double rel_tol = 1e-6;
  double abs_tol = 1e-9;          // multiplied by per-variable scale
  Eigen::VectorXd scale;          // per-variable magnitude; empty -> ones
  double initial_step = 1e-6;
  double min_step = 1e-12;
  double max_step = 1e30;
  long max_steps = 50'000'000;
  int jacobian_max_age = 20;      // accepted steps between refreshes
};

struct OdeFailure {
  double time = 0.0;
  std::string reason;
};

struct OdeResult {
  bool ok = true;
  std::optional<OdeFailure> failure;
  long steps_accepted = 0;
  long steps_rejected = 0;
  long rhs_evals = 0;
};

// Adaptive linearly-implicit (Rosenbrock W-method, order 2, L-stable with
// exact Jacobian) integrator with finite-difference Jacobian. Second order
// holds for an arbitrary Jacobian approximation, so the Jacobian is reused
// across steps.
class StiffIntegrator {
 public:
  explicit StiffIntegrator(OdeOptions opts = {}) : opts_(std::move(opts)) {}

  // Advances y from t0 to t1. If observer is set it is called at t0 and then
  // at every multiple of sample_dt (exactly hit), and at t1.
  OdeResult integrate(
      const OdeRhs& rhs, double t0, double t1, Eigen::VectorXd& y,
      double sample_dt = 0.0,
      const std::function<void(double, const Eigen::VectorXd&)>& observer = {});

  const OdeOptions& options() const { return opts_; }
  OdeOptions& options() { return opts_; }

 private:
  OdeOptions opts_;
};

}  // namespace brayton
