#include "brayton/ode.hpp"

#include <algorithm>
#include <cmath>

namespace brayton {

namespace {
// Rosenbrock W-method of order 2 with a third-order error estimate
// (Shampine & Reichelt). Second order holds for an arbitrary Jacobian
// approximation, so the Jacobian is reused across steps.
constexpr double kD = 0.29289321881345254;   // 1 / (2 + sqrt(2))
constexpr double kE32 = 7.414213562373095;   // 6 + sqrt(2)

// Forward-difference Jacobian. Returns false if any probe lands on an
// invalid state.
bool numerical_jacobian(const OdeRhs& rhs, double t, const Eigen::VectorXd& y,
                        const Eigen::VectorXd& f0, Eigen::MatrixXd& jac,
                        long& evals) {
  const int n = static_cast<int>(y.size());
  Eigen::VectorXd yp = y, fp(n);
  for (int j = 0; j < n; ++j) {
    const double dy = 1e-7 * std::max(std::abs(y[j]), 1e-4);
    yp[j] = y[j] + dy;
    ++evals;
    if (!rhs(t, yp, fp)) {
      yp[j] = y[j] - dy;
      ++evals;
      if (!rhs(t, yp, fp)) return false;
      jac.col(j) = (f0 - fp) / dy;
    } else {
      jac.col(j) = (fp - f0) / dy;
    }
    yp[j] = y[j];
  }
  return true;
}
}  // namespace

OdeResult StiffIntegrator::integrate(
    const OdeRhs& rhs, double t0, double t1, Eigen::VectorXd& y,
    double sample_dt,
    const std::function<void(double, const Eigen::VectorXd&)>& observer) {
  OdeResult res;
  const int n = static_cast<int>(y.size());

  Eigen::VectorXd scale = opts_.scale.size() == n
                              ? opts_.scale
                              : Eigen::VectorXd::Ones(n);

  Eigen::MatrixXd jac(n, n);
  Eigen::PartialPivLU<Eigen::MatrixXd> lu;
  Eigen::VectorXd f0(n), f1(n), f2(n), ft(n), k1(n), k2(n), k3(n), ynew(n),
      err(n);
  int jac_age = -1;  // -1: no Jacobian yet

  double t = t0;
  double h = std::min(opts_.initial_step, t1 - t0);

  if (observer) observer(t0, y);
  double next_sample = sample_dt > 0.0 ? t0 + sample_dt : t1 + 1.0;

  ++res.rhs_evals;
  if (!rhs(t, y, f0)) {
    res.ok = false;
    res.failure = OdeFailure{t, "invalid state at start of integration"};
    return res;
  }

  while (t < t1 - 1e-12 * std::max(1.0, std::abs(t1))) {
    if (res.steps_accepted + res.steps_rejected > opts_.max_steps) {
      res.ok = false;
      res.failure = OdeFailure{t, "step budget exhausted"};
      return res;
    }
    h = std::min({h, opts_.max_step, t1 - t, next_sample - t});
    if (h < opts_.min_step) h = opts_.min_step;

    if (jac_age < 0 || jac_age > opts_.jacobian_max_age) {
      if (!numerical_jacobian(rhs, t, y, f0, jac, res.rhs_evals)) {
        res.ok = false;
        res.failure = OdeFailure{t, "invalid state while forming Jacobian"};
        return res;
      }
      jac_age = 0;
    }

    Eigen::MatrixXd a = Eigen::MatrixXd::Identity(n, n) - kD * h * jac;
    lu.compute(a);

    // df/dt at constant y, needed by the non-autonomous Rosenbrock terms
    const double dt_fd = 1e-7 * (std::abs(t) + 1.0);
    ++res.rhs_evals;
    if (!rhs(t + dt_fd, y, ft)) {
      res.ok = false;
      res.failure = OdeFailure{t, "invalid state while probing df/dt"};
      return res;
    }
    ft = (ft - f0) / dt_fd;

    bool step_ok = false;
    k1 = lu.solve(f0 + kD * h * ft);
    ++res.rhs_evals;
    if (rhs(t + 0.5 * h, y + 0.5 * h * k1, f1)) {
      k2 = lu.solve(f1 - k1) + k1;
      ynew = y + h * k2;
      ++res.rhs_evals;
      if (ynew.allFinite() && rhs(t + h, ynew, f2)) {
        k3 = lu.solve(f2 - kE32 * (k2 - f1) - 2.0 * (k1 - f0) + kD * h * ft);
        err = (h / 6.0) * (k1 - 2.0 * k2 + k3);

        double err_norm = 0.0;
        for (int i = 0; i < n; ++i) {
          const double tol =
              opts_.abs_tol * scale[i] + opts_.rel_tol * std::abs(y[i]);
          const double e = err[i] / tol;
          err_norm += e * e;
        }
        err_norm = std::sqrt(err_norm / n);
        if (!std::isfinite(err_norm)) err_norm = 1e30;

        if (err_norm <= 1.0) {
          t += h;
          y = ynew;
          f0 = f2;  // FSAL: the end-of-step evaluation seeds the next step
          ++res.steps_accepted;
          ++jac_age;
          step_ok = true;

          if (sample_dt > 0.0 &&
              t >= next_sample - 1e-9 * std::max(1.0, next_sample)) {
            if (observer) observer(next_sample, y);
            next_sample += sample_dt;
          }

          const double grow = std::clamp(
              0.9 / std::cbrt(std::max(err_norm, 1e-10)), 0.2, 5.0);
          h *= grow;
          continue;
        }
      }
    }

    if (!step_ok) {
      ++res.steps_rejected;
      jac_age = -1;  // refresh on retry
      h *= 0.25;
      if (h < opts_.min_step) {
        res.ok = false;
        res.failure = OdeFailure{t, "step size collapsed below minimum"};
        return res;
      }
    }
  }

  if (observer && sample_dt > 0.0) {
    // emit the horizon sample when it does not coincide with a grid point
    if (std::abs(next_sample - sample_dt - t1) > 1e-9 * std::max(1.0, t1))
      observer(t1, y);
  } else if (observer) {
    observer(t1, y);
  }
  res.ok = true;
  return res;
}

}  // namespace brayton
