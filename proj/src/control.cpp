#include "brayton/control.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace brayton {

void ControlSeries::validate() const {
  if (times.empty() || times.size() != values.size())
    throw std::invalid_argument("control series needs matching knot arrays");
  for (size_t i = 1; i < times.size(); ++i)
    if (!(times[i] > times[i - 1]))
      throw std::invalid_argument("control series knot times must increase");
  for (double t : times)
    if (!std::isfinite(t) || t < 0.0)
      throw std::invalid_argument("control series knot times must be >= 0");
  for (double v : values)
    if (!std::isfinite(v))
      throw std::invalid_argument("control series values must be finite");
}

double ControlSeries::at(double t) const {
  if (t <= times.front()) return values.front();
  if (t >= times.back()) return values.back();
  const auto it = std::upper_bound(times.begin(), times.end(), t);
  const size_t i = size_t(it - times.begin());
  const double f = (t - times[i - 1]) / (times[i] - times[i - 1]);
  return values[i - 1] + f * (values[i] - values[i - 1]);
}

void ControlSeries::add(double t, double v) {
  times.push_back(t);
  values.push_back(v);
}

void ControlSchedule::validate() const {
  reactivity.validate();
  speed.validate();
  sink.validate();
  for (double v : reactivity.values)
    if (v < 0.0)
      throw std::invalid_argument("inserted reactivity must be >= 0");
  for (double v : speed.values)
    if (v < 0.0 || v > 1.0)
      throw std::invalid_argument("speed demand must lie in [0, 1]");
  for (double v : sink.values)
    if (!(v > 0.0))
      throw std::invalid_argument("sink temperature must be > 0");
}

namespace {

void write_series(std::ostream& out, const std::string& name,
                  const ControlSeries& s) {
  out << "series " << name << " " << s.times.size() << "\n";
  out.precision(17);
  for (size_t i = 0; i < s.times.size(); ++i)
    out << s.times[i] << " " << s.values[i] << "\n";
}

ControlSeries read_series(std::istream& in, const std::string& name) {
  std::string tag, got;
  size_t n = 0;
  if (!(in >> tag >> got >> n) || tag != "series" || got != name)
    throw std::runtime_error("schedule file: expected series " + name);
  ControlSeries s;
  for (size_t i = 0; i < n; ++i) {
    double t, v;
    if (!(in >> t >> v))
      throw std::runtime_error("schedule file: truncated series " + name);
    s.add(t, v);
  }
  return s;
}

}  // namespace

void ControlSchedule::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write schedule file " + path);
  write_series(out, "reactivity", reactivity);
  write_series(out, "speed", speed);
  write_series(out, "sink", sink);
}

ControlSchedule ControlSchedule::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open schedule file " + path);
  ControlSchedule s;
  s.reactivity = read_series(in, "reactivity");
  s.speed = read_series(in, "speed");
  s.sink = read_series(in, "sink");
  s.validate();
  return s;
}

ControlSignals evaluate_at(const ControlSchedule& schedule, double t) {
  if (t < 0.0) throw std::invalid_argument("evaluate_at: t must be >= 0");
  ControlSignals sig;
  sig.reactivity_pcm = schedule.reactivity.at(t);
  sig.speed_fraction = schedule.speed.at(t);
  sig.sink_temperature = schedule.sink.at(t);
  return sig;
}

namespace {

using V = ControlVector;

// Ordering chains over the gene times: indices plus the minimal gap that
// must separate consecutive members (decode inserts step knots one quantum
// wide, hence the doubled gaps before the final ramp targets).
struct Chain {
  std::vector<int> idx;
  std::vector<double> gaps;  // gaps.size() == idx.size() - 1
};

std::vector<Chain> chains(const ControlTemplate& tmpl) {
  const double q = tmpl.time_quantum;
  const double r = tmpl.speed_ramp_duration;
  return {
      {{V::kT1, V::kT3, V::kT4}, {r + q, 2.0 * q}},
      {{V::kT5, V::kT6, V::kT7, V::kT8}, {q, q, 2.0 * q}},
      {{V::kT9, V::kT10}, {q}},
      {{V::kW2, V::kW3}, {0.0}},
  };
}

}  // namespace

void ControlTemplate::validate() const {
  if (!(time_quantum > 0.0) || !(speed_ramp_duration > 0.0))
    throw std::invalid_argument("template durations must be > 0");
  if (!(total_insertion > 0.0) || !(sink_initial > 0.0) ||
      !(sink_final > 0.0))
    throw std::invalid_argument("template levels must be > 0");
  for (int i = 0; i < ControlVector::kGenes; ++i)
    if (!(lower[size_t(i)] <= upper[size_t(i)]))
      throw std::invalid_argument("template bounds must satisfy lo <= hi");
  // repair relies on the chained boxes being monotone: successive bounds
  // must themselves be separated by at least the required gap
  for (const auto& ch : chains(*this)) {
    for (size_t k = 0; k + 1 < ch.idx.size(); ++k) {
      const size_t a = size_t(ch.idx[k]), b = size_t(ch.idx[k + 1]);
      if (lower[a] + ch.gaps[k] > lower[b] ||
          upper[a] + ch.gaps[k] > upper[b])
        throw std::invalid_argument(
            "template bounds are not chain-monotone");
    }
  }
  if (lower[V::kT1] < time_quantum || lower[V::kT5] < time_quantum ||
      lower[V::kT9] < time_quantum)
    throw std::invalid_argument("first knot times must be >= one quantum");
  if (upper[V::kR6] > total_insertion || upper[V::kR7] > total_insertion)
    throw std::invalid_argument(
        "plateau reactivities must not exceed the total insertion");
}

ControlTemplate default_template() {
  ControlTemplate t;
  auto set = [&](int i, double lo, double hi) {
    t.lower[size_t(i)] = lo;
    t.upper[size_t(i)] = hi;
  };
  set(V::kT1, 500.0, 4000.0);
  set(V::kW2, 0.20, 0.70);
  set(V::kT3, 1000.0, 9000.0);
  set(V::kW3, 0.20, 1.00);
  set(V::kT4, 2000.0, 11800.0);
  set(V::kT5, 500.0, 4000.0);
  set(V::kR5, 20.0, 200.0);
  set(V::kT6, 1500.0, 7000.0);
  set(V::kR6, 300.0, 700.0);
  set(V::kT7, 4000.0, 9500.0);
  set(V::kR7, 300.0, 800.0);
  set(V::kT8, 5000.0, 11000.0);
  set(V::kT9, 500.0, 6000.0);
  set(V::kT10, 2000.0, 9000.0);
  t.validate();
  return t;
}

ControlVector baseline_vector() {
  ControlVector v;
  v.x = {2000.0, 0.40, 7800.0, 0.40, 9780.0, 1500.0, 78.0,
         3500.0, 553.0, 7500.0, 553.0, 9000.0, 2000.0, 5000.0};
  return v;
}

bool is_feasible(const ControlVector& x, const ControlTemplate& tmpl) {
  for (int i = 0; i < ControlVector::kGenes; ++i)
    if (!(x[i] >= tmpl.lower[size_t(i)] && x[i] <= tmpl.upper[size_t(i)]))
      return false;
  for (const auto& ch : chains(tmpl))
    for (size_t k = 0; k + 1 < ch.idx.size(); ++k)
      if (x[ch.idx[k]] + ch.gaps[k] > x[ch.idx[k + 1]]) return false;
  return true;
}

ControlVector repair(const ControlVector& x, const ControlTemplate& tmpl) {
  ControlVector y = x;
  for (int i = 0; i < ControlVector::kGenes; ++i) {
    if (!std::isfinite(y[i])) y[i] = tmpl.lower[size_t(i)];
    y[i] = std::clamp(y[i], tmpl.lower[size_t(i)], tmpl.upper[size_t(i)]);
  }
  for (const auto& ch : chains(tmpl)) {
    const size_t n = ch.idx.size();
    std::vector<double> v(n);
    for (size_t k = 0; k < n; ++k) v[k] = y[ch.idx[k]];
    std::sort(v.begin(), v.end());
    // forward: own lower bound plus the gap from the predecessor
    v[0] = std::max(v[0], tmpl.lower[size_t(ch.idx[0])]);
    for (size_t k = 1; k < n; ++k)
      v[k] = std::max({v[k], tmpl.lower[size_t(ch.idx[k])],
                       v[k - 1] + ch.gaps[k - 1]});
    // backward: own upper bound plus the gap to the successor
    v[n - 1] = std::min(v[n - 1], tmpl.upper[size_t(ch.idx[n - 1])]);
    for (size_t k = n - 1; k-- > 0;)
      v[k] = std::min({v[k], tmpl.upper[size_t(ch.idx[k])],
                       v[k + 1] - ch.gaps[k]});
    for (size_t k = 0; k < n; ++k) y[ch.idx[k]] = v[k];
  }
  return y;
}

ControlSchedule decode(const ControlVector& x, const ControlTemplate& tmpl) {
  if (!is_feasible(x, tmpl))
    throw std::invalid_argument("decode: infeasible control vector");
  const double q = tmpl.time_quantum;
  ControlSchedule s;

  s.speed.add(0.0, 0.0);
  s.speed.add(x[V::kT1], 0.0);
  s.speed.add(x[V::kT1] + tmpl.speed_ramp_duration, x[V::kW2]);
  s.speed.add(x[V::kT3], x[V::kW2]);
  s.speed.add(x[V::kT3] + q, x[V::kW3]);
  s.speed.add(x[V::kT4], 1.0);

  s.reactivity.add(0.0, x[V::kR5]);
  s.reactivity.add(x[V::kT5], x[V::kR5]);
  s.reactivity.add(x[V::kT6], x[V::kR6]);
  s.reactivity.add(x[V::kT7], x[V::kR6]);
  s.reactivity.add(x[V::kT7] + q, x[V::kR7]);
  s.reactivity.add(x[V::kT8], tmpl.total_insertion);

  s.sink.add(0.0, tmpl.sink_initial);
  s.sink.add(x[V::kT9], tmpl.sink_initial);
  s.sink.add(x[V::kT10], tmpl.sink_final);

  s.validate();
  return s;
}

}  // namespace brayton
