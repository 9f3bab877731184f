#pragma once

#include <array>
#include <string>
#include <vector>

namespace brayton {

// One piecewise-linear control series: knots at strictly increasing times,
// linear interpolation between them, held constant beyond either end.
struct ControlSeries {
  std::vector<double> times;   // s
  std::vector<double> values;

  void validate() const;
  double at(double t) const;
  void add(double t, double v);
};

// The three scheduled plant inputs during startup.
struct ControlSchedule {
  ControlSeries reactivity;  // inserted reactivity [pcm]
  ControlSeries speed;       // shaft speed demand [fraction of rated]
  ControlSeries sink;        // cooler sink temperature [K]

  void validate() const;
  void save(const std::string& path) const;
  static ControlSchedule load(const std::string& path);
};

struct ControlSignals {
  double reactivity_pcm = 0.0;
  double speed_fraction = 0.0;
  double sink_temperature = 0.0;
};

ControlSignals evaluate_at(const ControlSchedule& schedule, double t);

// Fourteen-gene startup parameterization,
//   x = (t1, w2, t3, w3, t4, t5, r5, t6, r6, t7, r7, t8, t9, t10):
// speed is zero until t1, ramps to w2 over a fixed duration, holds, steps to
// w3 at t3 and ramps to rated at t4; reactivity holds at r5 from time zero
// until t5, ramps to r6 at t6, holds, steps to r7 at t7 and ramps to the
// fixed total insertion at t8; the sink holds at its initial value until t9
// and ramps to the space value at t10.
struct ControlVector {
  static constexpr int kGenes = 14;
  std::array<double, kGenes> x{};

  double& operator[](int i) { return x[size_t(i)]; }
  double operator[](int i) const { return x[size_t(i)]; }

  // gene indices
  enum Gene {
    kT1 = 0, kW2, kT3, kW3, kT4, kT5, kR5, kT6, kR6, kT7, kR7, kT8, kT9,
    kT10
  };
};

// Fixed (non-gene) parameters of the encoding plus the gene box bounds.
struct ControlTemplate {
  double speed_ramp_duration = 200.0;  // s, first speed ramp
  double total_insertion = 965.0;      // pcm reached at t8
  double sink_initial = 292.0;         // K
  double sink_final = 2.725;           // K
  double time_quantum = 1.0;           // s, minimal knot separation

  std::array<double, ControlVector::kGenes> lower{};
  std::array<double, ControlVector::kGenes> upper{};

  void validate() const;
};

ControlTemplate default_template();
ControlVector baseline_vector();

// True when x satisfies the box bounds, the ordering chains with the
// template's minimal gaps, and w2 <= w3.
bool is_feasible(const ControlVector& x, const ControlTemplate& tmpl);

// Clamp to bounds, sort each time chain, then space the chains out by the
// time quantum (capping at the upper bounds). Idempotent; output is always
// feasible.
ControlVector repair(const ControlVector& x, const ControlTemplate& tmpl);

// Build the schedule for a feasible vector; throws std::invalid_argument
// otherwise.
ControlSchedule decode(const ControlVector& x, const ControlTemplate& tmpl);

}  // namespace brayton
