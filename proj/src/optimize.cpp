#include "brayton/optimize.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "brayton/csv.hpp"

namespace brayton {

namespace {

double next_uniform(std::mt19937_64& rng) {
  // 53-bit mantissa draw; avoids distribution objects whose sequences are
  // implementation-defined.
  return double(rng() >> 11) * 0x1.0p-53;
}

// SBX crossover on one gene pair (bounded, canonical form).
void sbx_pair(double& a, double& b, double lo, double hi, double eta,
              std::mt19937_64& rng) {
  if (std::abs(a - b) < 1e-14) return;
  double y1 = std::min(a, b), y2 = std::max(a, b);
  const double u = next_uniform(rng);
  auto spread = [&](double beta) {
    const double alpha = 2.0 - std::pow(beta, -(eta + 1.0));
    if (u <= 1.0 / alpha) return std::pow(u * alpha, 1.0 / (eta + 1.0));
    return std::pow(1.0 / (2.0 - u * alpha), 1.0 / (eta + 1.0));
  };
  const double beta1 = 1.0 + 2.0 * (y1 - lo) / (y2 - y1);
  const double beta2 = 1.0 + 2.0 * (hi - y2) / (y2 - y1);
  double c1 = 0.5 * ((y1 + y2) - spread(beta1) * (y2 - y1));
  double c2 = 0.5 * ((y1 + y2) + spread(beta2) * (y2 - y1));
  c1 = std::clamp(c1, lo, hi);
  c2 = std::clamp(c2, lo, hi);
  if (next_uniform(rng) < 0.5) std::swap(c1, c2);
  a = c1;
  b = c2;
}

void polynomial_mutation(std::vector<double>& x,
                         const std::vector<double>& lo,
                         const std::vector<double>& hi, double rate,
                         double eta, std::mt19937_64& rng) {
  for (size_t i = 0; i < x.size(); ++i) {
    if (next_uniform(rng) >= rate) continue;
    const double span = hi[i] - lo[i];
    if (span <= 0.0) continue;
    const double u = next_uniform(rng);
    const double d1 = (x[i] - lo[i]) / span;
    const double d2 = (hi[i] - x[i]) / span;
    double dq;
    if (u < 0.5) {
      const double v = 2.0 * u + (1.0 - 2.0 * u) * std::pow(1.0 - d1, eta + 1.0);
      dq = std::pow(v, 1.0 / (eta + 1.0)) - 1.0;
    } else {
      const double v = 2.0 * (1.0 - u) +
                       2.0 * (u - 0.5) * std::pow(1.0 - d2, eta + 1.0);
      dq = 1.0 - std::pow(v, 1.0 / (eta + 1.0));
    }
    x[i] = std::clamp(x[i] + dq * span, lo[i], hi[i]);
  }
}

bool dominates(const std::array<double, 2>& a, const std::array<double, 2>& b) {
  return a[0] <= b[0] && a[1] <= b[1] && (a[0] < b[0] || a[1] < b[1]);
}

std::array<double, 2> objs(const Individual& ind) { return {ind.f1, ind.f2}; }

// Per-generation RNG stream so resumed runs replay the identical sequence.
std::mt19937_64 generation_rng(std::uint64_t seed, int generation) {
  const std::uint64_t mix =
      seed ^ (std::uint64_t(generation) * 0x9e3779b97f4a7c15ull + 0x2545f4914f6cdd1dull);
  return std::mt19937_64(mix);
}

void evaluate_population(const Nsga2Problem& problem, int workers,
                         std::vector<Individual>& pop) {
  std::vector<int> todo;
  for (size_t i = 0; i < pop.size(); ++i)
    if (pop[i].genes.empty() == false && pop[i].eval_seconds < 0.0)
      todo.push_back(int(i));
  if (todo.empty()) return;
  std::atomic<size_t> next{0};
  auto work = [&]() {
    for (;;) {
      const size_t k = next.fetch_add(1);
      if (k >= todo.size()) break;
      Individual& ind = pop[size_t(todo[k])];
      const auto t0 = std::chrono::steady_clock::now();
      const EvalResult r = problem.evaluate(ind.genes);
      ind.f1 = r.f1;
      ind.f2 = r.f2;
      ind.failed = r.failed;
      ind.eval_seconds =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
              .count();
    }
  };
  const int nthreads = std::max(1, std::min<int>(workers, int(todo.size())));
  if (nthreads == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(size_t(nthreads));
    for (int i = 0; i < nthreads; ++i) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
}

void archive_insert(ParetoArchive& archive, const Individual& ind) {
  for (const auto& m : archive.members) {
    if (dominates(objs(m), objs(ind))) return;
    if (m.genes == ind.genes && m.f1 == ind.f1 && m.f2 == ind.f2) return;
  }
  std::erase_if(archive.members, [&](const Individual& m) {
    return dominates(objs(ind), objs(m));
  });
  archive.members.push_back(ind);
}

struct Ranked {
  std::vector<int> rank;
  std::vector<double> crowd;
};

Ranked rank_population(const std::vector<Individual>& pop) {
  std::vector<std::array<double, 2>> pts(pop.size());
  for (size_t i = 0; i < pop.size(); ++i) pts[i] = objs(pop[i]);
  const auto fronts = non_dominated_sort(pts);
  Ranked r;
  r.rank.assign(pop.size(), 0);
  r.crowd.assign(pop.size(), 0.0);
  for (size_t f = 0; f < fronts.size(); ++f) {
    std::vector<std::array<double, 2>> fo;
    fo.reserve(fronts[f].size());
    for (int idx : fronts[f]) fo.push_back(pts[size_t(idx)]);
    const auto cd = crowding_distance(fo);
    for (size_t k = 0; k < fronts[f].size(); ++k) {
      r.rank[size_t(fronts[f][k])] = int(f);
      r.crowd[size_t(fronts[f][k])] = cd[k];
    }
  }
  return r;
}

// (rank asc, crowding desc, index asc) -- the crowded-comparison operator
// with a deterministic tiebreak.
int better(int i, int j, const Ranked& r) {
  if (r.rank[size_t(i)] != r.rank[size_t(j)])
    return r.rank[size_t(i)] < r.rank[size_t(j)] ? i : j;
  if (r.crowd[size_t(i)] != r.crowd[size_t(j)])
    return r.crowd[size_t(i)] > r.crowd[size_t(j)] ? i : j;
  return std::min(i, j);
}

std::string checkpoint_path(const std::string& dir, int generation) {
  std::ostringstream os;
  os << dir << "/checkpoint_gen_";
  os.width(4);
  os.fill('0');
  os << generation << ".txt";
  return os.str();
}

}  // namespace

std::vector<std::vector<int>> non_dominated_sort(
    const std::vector<std::array<double, 2>>& objectives) {
  const int n = int(objectives.size());
  std::vector<int> domination_count(size_t(n), 0);
  std::vector<std::vector<int>> dominated{size_t(n)};
  std::vector<std::vector<int>> fronts;
  std::vector<int> current;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      if (dominates(objectives[size_t(i)], objectives[size_t(j)]))
        dominated[size_t(i)].push_back(j);
      else if (dominates(objectives[size_t(j)], objectives[size_t(i)]))
        ++domination_count[size_t(i)];
    }
    if (domination_count[size_t(i)] == 0) current.push_back(i);
  }
  while (!current.empty()) {
    fronts.push_back(current);
    std::vector<int> next;
    for (int i : current)
      for (int j : dominated[size_t(i)])
        if (--domination_count[size_t(j)] == 0) next.push_back(j);
    std::sort(next.begin(), next.end());
    current = std::move(next);
  }
  return fronts;
}

std::vector<double> crowding_distance(
    const std::vector<std::array<double, 2>>& front) {
  const size_t n = front.size();
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> d(n, 0.0);
  if (n <= 2) {
    std::fill(d.begin(), d.end(), inf);
    return d;
  }
  for (int m = 0; m < 2; ++m) {
    std::vector<size_t> order(n);
    for (size_t i = 0; i < n; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
      return front[a][size_t(m)] < front[b][size_t(m)];
    });
    const double span =
        front[order.back()][size_t(m)] - front[order.front()][size_t(m)];
    d[order.front()] = inf;
    d[order.back()] = inf;
    if (span <= 0.0) continue;
    for (size_t k = 1; k + 1 < n; ++k)
      d[order[k]] += (front[order[k + 1]][size_t(m)] -
                      front[order[k - 1]][size_t(m)]) /
                     span;
  }
  return d;
}

double hypervolume_2d(const std::vector<std::array<double, 2>>& points,
                      const std::array<double, 2>& reference) {
  std::vector<std::array<double, 2>> nd;
  for (const auto& p : points) {
    if (p[0] >= reference[0] || p[1] >= reference[1]) continue;
    bool dom = false;
    for (const auto& q : points)
      if (&q != &p && dominates(q, p)) {
        dom = true;
        break;
      }
    if (!dom) nd.push_back(p);
  }
  std::sort(nd.begin(), nd.end());
  double hv = 0.0;
  double prev_f2 = reference[1];
  for (const auto& p : nd) {
    if (p[1] < prev_f2) {
      hv += (reference[0] - p[0]) * (prev_f2 - p[1]);
      prev_f2 = p[1];
    }
  }
  return hv;
}

void save_checkpoint(const std::string& path, const ParetoArchive& archive,
                     const std::vector<Individual>& population) {
  std::ofstream out(path + ".tmp");
  if (!out) throw std::runtime_error("cannot write checkpoint: " + path);
  auto put = [&](const Individual& ind) {
    out << int(ind.failed) << ' ' << format_double(ind.f1) << ' '
        << format_double(ind.f2) << ' ' << format_double(ind.eval_seconds);
    for (double g : ind.genes) out << ' ' << format_double(g);
    out << '\n';
  };
  out << "nsga2-checkpoint v1\n";
  out << "seed " << archive.seed << '\n';
  out << "generation " << archive.generation << '\n';
  out << "population " << population.size() << '\n';
  for (const auto& ind : population) put(ind);
  out << "archive " << archive.members.size() << '\n';
  for (const auto& ind : archive.members) put(ind);
  out << "history " << archive.history.size() << '\n';
  for (const auto& h : archive.history)
    out << h.generation << ' ' << format_double(h.best_f1) << ' '
        << format_double(h.best_f2) << ' ' << format_double(h.hypervolume)
        << '\n';
  out.close();
  std::filesystem::rename(path + ".tmp", path);
}

bool load_checkpoint(const std::string& path, ParetoArchive& archive,
                     std::vector<Individual>& population) {
  std::ifstream in(path);
  if (!in) return false;
  std::string line;
  if (!std::getline(in, line) || line != "nsga2-checkpoint v1") return false;
  std::string key;
  auto get = [&](std::vector<Individual>& dst, size_t n) {
    dst.clear();
    dst.reserve(n);
    for (size_t i = 0; i < n; ++i) {
      if (!std::getline(in, line)) throw std::runtime_error("truncated");
      std::istringstream is(line);
      Individual ind;
      int failed = 0;
      is >> failed >> ind.f1 >> ind.f2 >> ind.eval_seconds;
      ind.failed = failed != 0;
      double g;
      while (is >> g) ind.genes.push_back(g);
      dst.push_back(std::move(ind));
    }
  };
  try {
    size_t n = 0;
    in >> key >> archive.seed;
    in >> key >> archive.generation;
    in >> key >> n;
    in.ignore();
    get(population, n);
    in >> key >> n;
    in.ignore();
    get(archive.members, n);
    in >> key >> n;
    in.ignore();
    archive.history.clear();
    for (size_t i = 0; i < n; ++i) {
      GenerationStat h;
      in >> h.generation >> h.best_f1 >> h.best_f2 >> h.hypervolume;
      archive.history.push_back(h);
    }
  } catch (const std::exception&) {
    return false;
  }
  return true;
}

ParetoArchive nsga2_run(const Nsga2Problem& problem,
                        const Nsga2Options& options) {
  const int pop_size = options.population_size;
  if (pop_size < 4 || pop_size % 2 != 0)
    throw std::invalid_argument("population size must be even and >= 4");
  const size_t ngenes = problem.lower.size();
  if (ngenes == 0 || problem.upper.size() != ngenes)
    throw std::invalid_argument("inconsistent gene bounds");
  const double mrate =
      options.mutation_rate >= 0.0 ? options.mutation_rate : 1.0 / double(ngenes);

  auto repair = [&](std::vector<double> g) {
    for (size_t i = 0; i < ngenes; ++i)
      g[i] = std::clamp(g[i], problem.lower[i], problem.upper[i]);
    if (problem.repair) g = problem.repair(g);
    return g;
  };

  ParetoArchive archive;
  archive.seed = options.seed;
  std::vector<Individual> pop;
  int start_gen = 0;

  if (!options.checkpoint_dir.empty()) {
    std::filesystem::create_directories(options.checkpoint_dir);
    for (int g = options.generations; g >= 0; --g) {
      ParetoArchive a;
      std::vector<Individual> p;
      if (load_checkpoint(checkpoint_path(options.checkpoint_dir, g), a, p) &&
          a.seed == options.seed && int(p.size()) == pop_size) {
        archive = std::move(a);
        pop = std::move(p);
        start_gen = g;
        break;
      }
    }
  }

  auto record_generation = [&](int gen, const std::vector<Individual>& p) {
    for (const auto& ind : p) archive_insert(archive, ind);
    GenerationStat st;
    st.generation = gen;
    st.best_f1 = std::numeric_limits<double>::infinity();
    st.best_f2 = std::numeric_limits<double>::infinity();
    for (const auto& ind : p) {
      st.best_f1 = std::min(st.best_f1, ind.f1);
      st.best_f2 = std::min(st.best_f2, ind.f2);
    }
    std::vector<std::array<double, 2>> pts;
    pts.reserve(archive.members.size());
    for (const auto& m : archive.members) pts.push_back(objs(m));
    st.hypervolume = hypervolume_2d(pts, options.hypervolume_reference);
    archive.history.push_back(st);
    archive.generation = gen;
    if (!options.checkpoint_dir.empty())
      save_checkpoint(checkpoint_path(options.checkpoint_dir, gen), archive,
                      pop);
    if (options.on_generation) options.on_generation(st);
  };

  if (start_gen == 0 && pop.empty()) {
    auto rng = generation_rng(options.seed, 0);
    pop.resize(size_t(pop_size));
    for (size_t k = 0; k < pop.size(); ++k) {
      Individual& ind = pop[k];
      if (k < options.initial_genes.size() &&
          options.initial_genes[k].size() == ngenes) {
        ind.genes = options.initial_genes[k];
      } else {
        ind.genes.resize(ngenes);
        for (size_t i = 0; i < ngenes; ++i)
          ind.genes[i] =
              problem.lower[i] +
              next_uniform(rng) * (problem.upper[i] - problem.lower[i]);
      }
      ind.genes = repair(ind.genes);
      ind.eval_seconds = -1.0;  // marks "needs evaluation"
    }
    evaluate_population(problem, options.workers, pop);
    record_generation(0, pop);
  }

  for (int gen = start_gen + 1; gen <= options.generations; ++gen) {
    auto rng = generation_rng(options.seed, gen);
    const Ranked ranked = rank_population(pop);
    std::vector<Individual> offspring;
    offspring.reserve(size_t(pop_size));
    auto tournament = [&]() {
      const int i = int(rng() % std::uint64_t(pop_size));
      const int j = int(rng() % std::uint64_t(pop_size));
      return better(i, j, ranked);
    };
    for (int k = 0; k < pop_size / 2; ++k) {
      std::vector<double> a = pop[size_t(tournament())].genes;
      std::vector<double> b = pop[size_t(tournament())].genes;
      if (next_uniform(rng) < options.crossover_probability)
        for (size_t i = 0; i < ngenes; ++i)
          if (next_uniform(rng) < 0.5)
            sbx_pair(a[i], b[i], problem.lower[i], problem.upper[i],
                     options.eta_crossover, rng);
      polynomial_mutation(a, problem.lower, problem.upper, mrate,
                          options.eta_mutation, rng);
      polynomial_mutation(b, problem.lower, problem.upper, mrate,
                          options.eta_mutation, rng);
      Individual ia, ib;
      ia.genes = repair(std::move(a));
      ib.genes = repair(std::move(b));
      ia.eval_seconds = ib.eval_seconds = -1.0;
      offspring.push_back(std::move(ia));
      offspring.push_back(std::move(ib));
    }
    evaluate_population(problem, options.workers, offspring);

    // elitist environmental selection from parents + offspring
    std::vector<Individual> merged;
    merged.reserve(size_t(2 * pop_size));
    for (auto& ind : pop) merged.push_back(std::move(ind));
    for (auto& ind : offspring) merged.push_back(std::move(ind));
    const Ranked mr = rank_population(merged);
    std::vector<int> order(merged.size());
    for (size_t i = 0; i < merged.size(); ++i) order[i] = int(i);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      if (mr.rank[size_t(a)] != mr.rank[size_t(b)])
        return mr.rank[size_t(a)] < mr.rank[size_t(b)];
      return mr.crowd[size_t(a)] > mr.crowd[size_t(b)];
    });
    std::vector<Individual> next;
    next.reserve(size_t(pop_size));
    for (int i = 0; i < pop_size; ++i)
      next.push_back(std::move(merged[size_t(order[size_t(i)])]));
    pop = std::move(next);
    record_generation(gen, pop);
  }
  return archive;
}

EvalResult evaluate_startup(const PlantModel& plant, const ControlVector& x,
                            const ControlTemplate& tmpl, double horizon,
                            double penalty_margin) {
  EvalResult r;
  r.f1 = r.f2 = horizon + penalty_margin;
  r.failed = true;
  ControlVector v = is_feasible(x, tmpl) ? x : repair(x, tmpl);
  ControlSchedule schedule;
  try {
    schedule = decode(v, tmpl);
  } catch (const std::exception&) {
    return r;
  }
  const PlantRunResult run = plant.integrate(schedule, horizon);
  const StartupMetrics m = startup_metrics(run, horizon, penalty_margin);
  r.f1 = m.t_power;
  r.f2 = m.t_outlet;
  r.failed = !run.ok || m.penalized;
  return r;
}

void plant_gene_bounds(const ControlTemplate& tmpl, const ControlVector& base,
                       std::vector<double>& lower, std::vector<double>& upper) {
  lower.resize(ControlVector::kGenes);
  upper.resize(ControlVector::kGenes);
  for (int i = 0; i < ControlVector::kGenes; ++i) {
    double lo = std::max(tmpl.lower[size_t(i)], 0.5 * base[i]);
    double hi = std::min(tmpl.upper[size_t(i)], 1.5 * base[i]);
    if (lo > hi) {  // degenerate intersection; fall back to the template box
      lo = tmpl.lower[size_t(i)];
      hi = tmpl.upper[size_t(i)];
    }
    lower[size_t(i)] = lo;
    upper[size_t(i)] = hi;
  }
}

Nsga2Problem make_plant_problem(const PlantModel& plant,
                                const ControlTemplate& tmpl, double horizon,
                                double penalty_margin) {
  Nsga2Problem problem;
  plant_gene_bounds(tmpl, baseline_vector(), problem.lower, problem.upper);
  problem.repair = [&tmpl](const std::vector<double>& g) {
    ControlVector v;
    for (int i = 0; i < ControlVector::kGenes; ++i) v[i] = g[size_t(i)];
    v = repair(v, tmpl);
    std::vector<double> out(size_t(ControlVector::kGenes));
    for (int i = 0; i < ControlVector::kGenes; ++i) out[size_t(i)] = v[i];
    return out;
  };
  problem.evaluate = [&plant, &tmpl, horizon,
                      penalty_margin](const std::vector<double>& g) {
    ControlVector v;
    for (int i = 0; i < ControlVector::kGenes; ++i) v[i] = g[size_t(i)];
    return evaluate_startup(plant, v, tmpl, horizon, penalty_margin);
  };
  return problem;
}

}  // namespace brayton
