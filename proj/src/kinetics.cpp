#include "brayton/kinetics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace brayton {

double KineticsParams::beta_total() const {
  double s = 0.0;
  for (double b : beta) s += b;
  return s;
}

void KineticsParams::validate() const {
  for (double b : beta)
    if (!(b > 0.0)) throw std::invalid_argument("all beta_i must be positive");
  for (double l : lambda)
    if (!(l > 0.0)) throw std::invalid_argument("all lambda_i must be positive");
  if (!(generation_time > 0.0))
    throw std::invalid_argument("generation time must be positive");
  const double bt = beta_total();
  if (!(bt > 0.0 && bt < 0.02))
    throw std::invalid_argument("beta_total must lie in (0, 0.02)");
}

namespace {
double eval_cubic(const std::array<double, 4>& c, double dt) {
  return c[0] + dt * (c[1] + dt * (c[2] + dt * c[3]));
}

double eval_cubic_deriv(const std::array<double, 4>& c, double dt) {
  return c[1] + dt * (2.0 * c[2] + dt * 3.0 * c[3]);
}
}  // namespace

double FeedbackPolys::fuel_reactivity(double t) const {
  const double tc = std::clamp(t, band_min, band_max);
  return eval_cubic(fuel, tc - fuel_ref_temperature);
}

double FeedbackPolys::block_reactivity(double t) const {
  const double tc = std::clamp(t, band_min, band_max);
  return eval_cubic(block, tc - block_ref_temperature);
}

void FeedbackPolys::validate() const {
  if (std::abs(fuel[0]) > 1e-8 || std::abs(block[0]) > 1e-8)
    throw std::invalid_argument(
        "feedback polynomials must vanish at their reference temperature");
  for (double t = band_min; t <= band_max; t += 1.0) {
    if (eval_cubic_deriv(fuel, t - fuel_ref_temperature) >= 0.0)
      throw std::invalid_argument("fuel feedback must have drho/dT < 0");
    if (eval_cubic_deriv(block, t - block_ref_temperature) >= 0.0)
      throw std::invalid_argument("block feedback must have drho/dT < 0");
  }
}

KineticsState equilibrium_init(const KineticsParams& params, double p0) {
  if (!(p0 > 0.0)) throw std::invalid_argument("initial power must be positive");
  KineticsState s;
  s.fission_power = p0;
  for (int i = 0; i < kDelayedGroups; ++i)
    s.precursors[i] =
        params.beta[i] * p0 / (params.generation_time * params.lambda[i]);
  return s;
}

double total_reactivity(double rho_in, double t_fuel_avg, double t_block_avg,
                        const FeedbackPolys& polys) {
  return rho_in + polys.fuel_reactivity(t_fuel_avg) +
         polys.block_reactivity(t_block_avg);
}

KineticsDeriv kinetics_rhs(const KineticsState& state, double rho,
                           const KineticsParams& params) {
  KineticsDeriv d;
  double precursor_sum = 0.0;
  for (int i = 0; i < kDelayedGroups; ++i)
    precursor_sum += params.lambda[i] * state.precursors[i];
  d.d_power = (rho - params.beta_total()) / params.generation_time *
                  state.fission_power +
              precursor_sum;
  for (int i = 0; i < kDelayedGroups; ++i)
    d.d_precursors[i] =
        params.beta[i] / params.generation_time * state.fission_power -
        params.lambda[i] * state.precursors[i];
  return d;
}

}  // namespace brayton
