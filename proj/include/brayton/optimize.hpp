#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "brayton/control.hpp"
#include "brayton/plant.hpp"

namespace brayton {

// One evaluated candidate. Objectives are minimized; failed simulations
// carry the death-penalty value (horizon + penalty margin) on both.
struct Individual {
  std::vector<double> genes;
  double f1 = 0.0;  // s
  double f2 = 0.0;  // s
  bool failed = false;
  double eval_seconds = 0.0;
};

struct GenerationStat {
  int generation = 0;
  double best_f1 = 0.0;
  double best_f2 = 0.0;
  double hypervolume = 0.0;  // of the accumulated archive, fixed reference
};

// Accumulated non-dominated set plus per-generation history.
struct ParetoArchive {
  std::vector<Individual> members;
  int generation = 0;  // generations completed
  std::uint64_t seed = 0;
  std::vector<GenerationStat> history;
};

struct EvalResult {
  double f1 = 0.0;
  double f2 = 0.0;
  bool failed = false;
};

// Generic real-coded 2-objective problem. `repair` (optional) projects an
// arbitrary gene vector into the feasible set and is applied before every
// evaluation; `evaluate` must be safe to call concurrently.
struct Nsga2Problem {
  std::vector<double> lower;
  std::vector<double> upper;
  std::function<std::vector<double>(const std::vector<double>&)> repair;
  std::function<EvalResult(const std::vector<double>&)> evaluate;
};

struct Nsga2Options {
  int population_size = 40;  // even, >= 4
  int generations = 50;
  std::uint64_t seed = 0;
  int workers = 1;
  double crossover_probability = 0.9;
  double eta_crossover = 15.0;
  double eta_mutation = 20.0;
  double mutation_rate = -1.0;     // < 0 -> 1/genes
  std::string checkpoint_dir;      // empty -> no checkpoints
  // genes injected into the initial population (after repair); the rest is
  // sampled uniformly. Lets a campaign warm-start from a known schedule.
  std::vector<std::vector<double>> initial_genes;
  std::array<double, 2> hypervolume_reference{2.0e4, 2.0e4};
  std::function<void(const GenerationStat&)> on_generation;
};

// Fast non-dominated sort (minimization). Fronts partition [0, n);
// members of front k are dominated only by members of earlier fronts.
std::vector<std::vector<int>> non_dominated_sort(
    const std::vector<std::array<double, 2>>& objectives);

// Crowding distance over one front's objectives; boundary members get
// +infinity, interior members the normalized neighbor-gap sum.
std::vector<double> crowding_distance(
    const std::vector<std::array<double, 2>>& front);

// Area dominated by the non-dominated subset of `points` up to `reference`
// (minimization, 2-D). Points beyond the reference contribute nothing.
double hypervolume_2d(const std::vector<std::array<double, 2>>& points,
                      const std::array<double, 2>& reference);

// Standard NSGA-II: SBX crossover + polynomial mutation, repair before
// evaluation, binary tournament on (rank, crowding), elitist environmental
// selection. Deterministic per seed and independent of worker count. If
// checkpoints are enabled, an interrupted run resumes from the last complete
// generation found in the checkpoint directory.
ParetoArchive nsga2_run(const Nsga2Problem& problem,
                        const Nsga2Options& options);

// Checkpoint persistence (plain text, round-trip exact).
void save_checkpoint(const std::string& path, const ParetoArchive& archive,
                     const std::vector<Individual>& population);
bool load_checkpoint(const std::string& path, ParetoArchive& archive,
                     std::vector<Individual>& population);

// --- plant-problem wiring -------------------------------------------------

// Startup-schedule objectives for one control vector: decode, integrate,
// startup_metrics. All failure paths produce penalty objectives.
EvalResult evaluate_startup(const PlantModel& plant, const ControlVector& x,
                            const ControlTemplate& tmpl, double horizon,
                            double penalty_margin = 1e4);

// Gene box: template bounds intersected with +/-50% around the baseline
// vector (times and levels alike), per the declared default.
void plant_gene_bounds(const ControlTemplate& tmpl, const ControlVector& base,
                       std::vector<double>& lower, std::vector<double>& upper);

// Bundles the plant evaluator. Each worker evaluates on its own PlantModel
// instance; the returned problem references `plant` and `tmpl`, which must
// outlive it.
Nsga2Problem make_plant_problem(const PlantModel& plant,
                                const ControlTemplate& tmpl, double horizon,
                                double penalty_margin = 1e4);

}  // namespace brayton
