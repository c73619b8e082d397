// Copyright 2026 The mialloc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mialloc/offline.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <iterator>
#include <limits>
#include <sstream>
#include <vector>

#include "mialloc/errors.h"

namespace mialloc {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

double TotalDemand(std::span<const RevenueFunction> fns, double lambda,
                   std::vector<double>* out) {
  double total = 0.0;
  for (size_t k = 0; k < fns.size(); ++k) {
    const double d = fns[k].DemandAt(lambda).hi;
    if (out != nullptr) (*out)[k] = d;
    total += d;
  }
  return total;
}

double SingleDual(std::span<const RevenueFunction> fns, double lambda,
                  double capacity) {
  double total = lambda * capacity;
  for (const RevenueFunction& g : fns) total += g.Conjugate(lambda);
  return total;
}

// Minimizes b * x + sum_k h_k(x) over x >= 0 for convex conjugates h_k,
// given demand(x) = sum_k of the largest maximizer at price x.
double MinimizeCoordinate(double bound, double max_price,
                          const std::function<double(double)>& demand,
                          const std::function<double(double)>& value) {
  if (demand(0.0) <= bound) return 0.0;
  double lo = 0.0;
  double hi = max_price * (1.0 + 4.0 * kEps) + 1e-300;
  for (int iter = 0; iter < 200 && hi - lo > 2.0 * kEps * hi; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (demand(mid) > bound) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return value(lo) < value(hi) ? lo : hi;
}

// Successive shortest paths on source -> slots -> inventories -> sink. Each
// linear stretch of a cell becomes one arc; smooth cells are replaced by
// chords between knots that are refined around the current optimum until
// the dual certificate closes the gap.
class FlowSolver {
 public:
  FlowSolver(const Instance& instance, int upto, const Tolerances& tol)
      : instance_(instance), upto_(upto), tol_(tol) {}

  OfflineSolution Solve();

 private:
  struct Arc {
    int to;
    int rev;
    double cap;
    double cost;
    int cell;  // -1 for source and sink arcs
    double flow = 0.0;
  };
  struct Cell {
    int slot;
    int inventory;
    const RevenueFunction* g;  // not owned
    bool smooth;
    std::vector<double> knots;
  };

  int SlotNode(int t) const { return 1 + t; }
  int InventoryNode(int i) const { return 1 + upto_ + i; }
  int Sink() const { return 1 + upto_ + instance_.num_inventories(); }

  void BuildCells();
  void BuildGraph();
  void AddArc(int from, int to, double cap, double cost, int cell);
  // Bellman-Ford over residual arcs from the given seeds.
  void ShortestPaths(bool seed_sink, std::vector<double>& dist,
                     std::vector<std::pair<int, int>>* parent) const;
  void Augment();
  OfflineSolution Certificate();
  void PolishDual(std::vector<double>& alpha, std::vector<double>& beta) const;
  bool Refine(const OfflineSolution& sol);

  const Instance& instance_;
  int upto_;
  Tolerances tol_;
  std::vector<Cell> cells_;
  std::vector<std::vector<Arc>> graph_;
  double cap_eps_ = 0.0;
  double cost_eps_ = 0.0;
  double max_price_ = 0.0;
  int augmentations_ = 0;
};

void FlowSolver::BuildCells() {
  const int N = instance_.num_inventories();
  double scale = 0.0;
  for (int i = 0; i < N; ++i) scale = std::max(scale, instance_.capacity(i));
  for (int t = 0; t < upto_; ++t) {
    scale = std::max(scale, instance_.allowance(t));
    for (int i = 0; i < N; ++i) {
      const RevenueFunction& g = instance_.revenue(t, i);
      max_price_ = std::max(max_price_, g.MaxSlope());
      const double delta = g.delta();
      if (delta <= 0.0) continue;
      scale = std::max(scale, delta);
      Cell c{t, i, &g, false, {0.0}};
      if (const auto* p = std::get_if<PiecewiseLinearParams>(&g.params())) {
        for (double b : p->breakpoints) {
          if (b > c.knots.back() && b < delta) c.knots.push_back(b);
        }
      } else if (!std::holds_alternative<LinearParams>(g.params())) {
        c.smooth = true;
        constexpr int kInitialKnots = 16;
        for (int k = 1; k < kInitialKnots; ++k) {
          c.knots.push_back(delta * k / kInitialKnots);
        }
      }
      c.knots.push_back(delta);
      cells_.push_back(std::move(c));
    }
  }
  cap_eps_ = 1e-14 * std::max(scale, 1.0);
  cost_eps_ = 1e-14 * std::max(max_price_, 1.0);
}

void FlowSolver::AddArc(int from, int to, double cap, double cost, int cell) {
  if (!(cap > cap_eps_)) return;
  const int rf = static_cast<int>(graph_[to].size());
  const int rt = static_cast<int>(graph_[from].size());
  graph_[from].push_back({to, rf, cap, cost, cell});
  graph_[to].push_back({from, rt, 0.0, -cost, cell});
}

void FlowSolver::BuildGraph() {
  const int N = instance_.num_inventories();
  graph_.assign(Sink() + 1, {});
  for (int t = 0; t < upto_; ++t) {
    AddArc(0, SlotNode(t), instance_.allowance(t), 0.0, -1);
  }
  for (int i = 0; i < N; ++i) {
    AddArc(InventoryNode(i), Sink(), instance_.capacity(i), 0.0, -1);
  }
  for (size_t c = 0; c < cells_.size(); ++c) {
    const Cell& cell = cells_[c];
    if (instance_.allowance(cell.slot) <= 0.0 ||
        instance_.capacity(cell.inventory) <= 0.0) {
      continue;
    }
    for (size_t k = 0; k + 1 < cell.knots.size(); ++k) {
      const double a = cell.knots[k];
      const double b = cell.knots[k + 1];
      const double slope = (cell.g->Eval(b) - cell.g->Eval(a)) / (b - a);
      if (slope <= 0.0) break;
      AddArc(SlotNode(cell.slot), InventoryNode(cell.inventory), b - a, -slope,
             static_cast<int>(c));
    }
  }
}

void FlowSolver::ShortestPaths(bool seed_sink, std::vector<double>& dist,
                               std::vector<std::pair<int, int>>* parent) const {
  const int V = static_cast<int>(graph_.size());
  dist.assign(V, std::numeric_limits<double>::infinity());
  if (parent != nullptr) parent->assign(V, {-1, -1});
  dist[0] = 0.0;
  if (seed_sink) dist[Sink()] = 0.0;
  for (int pass = 0; pass < V; ++pass) {
    bool changed = false;
    for (int u = 0; u < V; ++u) {
      if (!std::isfinite(dist[u])) continue;
      for (size_t e = 0; e < graph_[u].size(); ++e) {
        const Arc& arc = graph_[u][e];
        if (arc.cap <= cap_eps_) continue;
        const double d = dist[u] + arc.cost;
        if (d < dist[arc.to] - cost_eps_) {
          dist[arc.to] = d;
          if (parent != nullptr) (*parent)[arc.to] = {u, static_cast<int>(e)};
          changed = true;
        }
      }
    }
    if (!changed) break;
  }
}

void FlowSolver::Augment() {
  std::vector<double> dist;
  std::vector<std::pair<int, int>> parent;
  constexpr int kMaxAugmentations = 200000;
  for (int iter = 0; iter < kMaxAugmentations; ++iter) {
    ShortestPaths(false, dist, &parent);
    if (!(dist[Sink()] < -cost_eps_)) return;
    double push = std::numeric_limits<double>::infinity();
    for (int v = Sink(); v != 0; v = parent[v].first) {
      push = std::min(push, graph_[parent[v].first][parent[v].second].cap);
    }
    for (int v = Sink(); v != 0; v = parent[v].first) {
      Arc& arc = graph_[parent[v].first][parent[v].second];
      arc.cap -= push;
      arc.flow += push;
      Arc& back = graph_[v][arc.rev];
      back.cap += push;
      back.flow -= push;
    }
    ++augmentations_;
  }
  throw NonConvergenceError("flow solver exceeded its augmentation limit", 0.0,
                            std::numeric_limits<double>::infinity());
}

void FlowSolver::PolishDual(std::vector<double>& alpha,
                            std::vector<double>& beta) const {
  const int N = instance_.num_inventories();
  for (int sweep = 0; sweep < 3; ++sweep) {
    for (int t = 0; t < upto_; ++t) {
      beta[t] = MinimizeCoordinate(
          instance_.allowance(t), max_price_,
          [&](double b) {
            double total = 0.0;
            for (int i = 0; i < N; ++i) {
              total += instance_.revenue(t, i).DemandAt(alpha[i] + b).hi;
            }
            return total;
          },
          [&](double b) {
            double total = instance_.allowance(t) * b;
            for (int i = 0; i < N; ++i) {
              total += instance_.revenue(t, i).Conjugate(alpha[i] + b);
            }
            return total;
          });
    }
    for (int i = 0; i < N; ++i) {
      alpha[i] = MinimizeCoordinate(
          instance_.capacity(i), max_price_,
          [&](double a) {
            double total = 0.0;
            for (int t = 0; t < upto_; ++t) {
              total += instance_.revenue(t, i).DemandAt(a + beta[t]).hi;
            }
            return total;
          },
          [&](double a) {
            double total = instance_.capacity(i) * a;
            for (int t = 0; t < upto_; ++t) {
              total += instance_.revenue(t, i).Conjugate(a + beta[t]);
            }
            return total;
          });
    }
  }
}

OfflineSolution FlowSolver::Certificate() {
  const int N = instance_.num_inventories();
  OfflineSolution sol;
  sol.v = ZeroMatrix(upto_, N);
  for (const std::vector<Arc>& arcs : graph_) {
    for (const Arc& arc : arcs) {
      if (arc.cell >= 0 && arc.flow > 0.0) {
        const Cell& c = cells_[arc.cell];
        sol.v[c.slot][c.inventory] += arc.flow;
      }
    }
  }
  for (int t = 0; t < upto_; ++t) {
    for (int i = 0; i < N; ++i) {
      sol.v[t][i] =
          std::clamp(sol.v[t][i], 0.0, instance_.revenue(t, i).delta());
    }
  }
  sol.objective = Objective(instance_, sol.v);

  // Node potentials from the final residual graph give the prices of the
  // slot and inventory rows.
  std::vector<double> dist;
  ShortestPaths(true, dist, nullptr);
  std::vector<double> alpha(N, 0.0), beta(upto_, 0.0);
  for (int i = 0; i < N; ++i) {
    const double d = dist[InventoryNode(i)];
    alpha[i] = std::isfinite(d) ? std::max(0.0, -d) : 0.0;
  }
  for (int t = 0; t < upto_; ++t) {
    const double d = dist[SlotNode(t)];
    beta[t] = std::isfinite(d) ? std::max(0.0, d) : 0.0;
  }
  sol.dual_value = DualValue(instance_, upto_, alpha, beta);
  if (sol.dual_value - sol.objective > 1e-3 * tol_.Gap(sol.objective)) {
    std::vector<double> a = alpha, b = beta;
    PolishDual(a, b);
    const double polished = DualValue(instance_, upto_, a, b);
    if (polished < sol.dual_value) {
      sol.dual_value = polished;
      alpha.swap(a);
      beta.swap(b);
    }
  }
  sol.capacity_multipliers = std::move(alpha);
  sol.allowance_multipliers = std::move(beta);
  sol.gap = std::max(0.0, sol.dual_value - sol.objective);
  sol.iterations = augmentations_;
  return sol;
}

bool FlowSolver::Refine(const OfflineSolution& sol) {
  bool added = false;
  for (Cell& c : cells_) {
    if (!c.smooth) continue;
    const double delta = c.g->delta();
    const double price = sol.capacity_multipliers[c.inventory] +
                         sol.allowance_multipliers[c.slot];
    const double response = std::clamp(c.g->DemandAt(price).hi, 0.0, delta);
    for (double x : {sol.v[c.slot][c.inventory], response}) {
      auto it = std::lower_bound(c.knots.begin(), c.knots.end(), x);
      const double min_gap = 1e-13 * delta;
      if (it != c.knots.end() && *it - x <= min_gap) continue;
      if (it != c.knots.begin() && x - *std::prev(it) <= min_gap) continue;
      c.knots.insert(it, x);
      added = true;
    }
  }
  return added;
}

OfflineSolution FlowSolver::Solve() {
  BuildCells();
  OfflineSolution best;
  best.gap = std::numeric_limits<double>::infinity();
  constexpr int kMaxRounds = 60;
  for (int round = 0; round < kMaxRounds; ++round) {
    BuildGraph();
    Augment();
    OfflineSolution sol = Certificate();
    const bool improved = sol.gap < best.gap;
    if (improved) best = sol;
    if (best.gap <= 1e-3 * tol_.Gap(best.objective)) break;
    if (!Refine(sol)) break;
  }
  if (best.gap > tol_.Gap(best.objective)) {
    std::ostringstream msg;
    msg << "flow solver stopped with gap " << best.gap;
    throw NonConvergenceError(msg.str(), best.objective, best.gap);
  }
  return best;
}

OfflineSolution SolveBySubgradient(const Instance& instance, int upto,
                                   const MultiOptions& options) {
  const int N = instance.num_inventories();
  const double s0 = instance.p_max();
  std::vector<double> alpha(N, 0.0), beta(upto, 0.0);
  std::vector<double> avg_alpha(N, 0.0), avg_beta(upto, 0.0);
  SlotMatrix v = ZeroMatrix(upto, N);
  // Step-weighted average of the Lagrangian maximizers.
  SlotMatrix ergodic = ZeroMatrix(upto, N);
  double weight = 0.0;

  OfflineSolution best;
  // The zero allocation is feasible.
  best.objective = Objective(instance, ZeroMatrix(upto, N));
  best.dual_value = std::numeric_limits<double>::infinity();
  best.v = ZeroMatrix(upto, N);

  auto repair = [&](SlotMatrix x) {
    for (int t = 0; t < upto; ++t) {
      double total = 0.0;
      for (int i = 0; i < N; ++i) total += x[t][i];
      if (total > instance.allowance(t)) {
        const double f = instance.allowance(t) / total;
        for (int i = 0; i < N; ++i) x[t][i] *= f;
      }
    }
    for (int i = 0; i < N; ++i) {
      double total = 0.0;
      for (int t = 0; t < upto; ++t) total += x[t][i];
      if (total > instance.capacity(i)) {
        const double f = instance.capacity(i) / total;
        for (int t = 0; t < upto; ++t) x[t][i] *= f;
      }
    }
    return x;
  };
  auto recover = [&](std::span<const double> a, std::span<const double> b) {
    SlotMatrix x = ZeroMatrix(upto, N);
    for (int t = 0; t < upto; ++t) {
      double total = 0.0;
      for (int i = 0; i < N; ++i) {
        const Demand d = instance.revenue(t, i).DemandAt(a[i] + b[t]);
        x[t][i] = d.lo;
        total += d.lo;
      }
      // Flat argmax stretches: fill lowest index first up to the allowance.
      double room = instance.allowance(t) - total;
      for (int i = 0; i < N && room > 0.0; ++i) {
        const Demand d = instance.revenue(t, i).DemandAt(a[i] + b[t]);
        const double extra = std::min(room, d.hi - d.lo);
        x[t][i] += extra;
        room -= extra;
      }
    }
    // Proportional repair of any violated allowance or capacity.
    return repair(std::move(x));
  };

  int k = 1;
  for (; k <= options.max_iters; ++k) {
    double dual = 0.0;
    std::vector<double> g_alpha(instance.capacity().begin(),
                                instance.capacity().end());
    std::vector<double> g_beta(instance.allowance().begin(),
                               instance.allowance().begin() + upto);
    for (int t = 0; t < upto; ++t) {
      for (int i = 0; i < N; ++i) {
        const RevenueFunction& g = instance.revenue(t, i);
        const double lambda = alpha[i] + beta[t];
        v[t][i] = g.DemandAt(lambda).hi;
        dual += g.Eval(v[t][i]) - lambda * v[t][i];
        g_alpha[i] -= v[t][i];
        g_beta[t] -= v[t][i];
      }
    }
    for (int i = 0; i < N; ++i) dual += instance.capacity(i) * alpha[i];
    for (int t = 0; t < upto; ++t) dual += instance.allowance(t) * beta[t];
    if (dual < best.dual_value) {
      best.dual_value = dual;
      best.capacity_multipliers = alpha;
      best.allowance_multipliers = beta;
    }

    const double step = s0 / std::sqrt(static_cast<double>(k));
    weight += step;
    for (int t = 0; t < upto; ++t) {
      for (int i = 0; i < N; ++i) {
        ergodic[t][i] += step / weight * (v[t][i] - ergodic[t][i]);
      }
    }
    for (int i = 0; i < N; ++i) {
      alpha[i] = std::max(0.0, alpha[i] - step * g_alpha[i]);
      avg_alpha[i] += (alpha[i] - avg_alpha[i]) / k;
    }
    for (int t = 0; t < upto; ++t) {
      beta[t] = std::max(0.0, beta[t] - step * g_beta[t]);
      avg_beta[t] += (beta[t] - avg_beta[t]) / k;
    }

    if (k % 25 == 0 || k == options.max_iters) {
      for (const auto& [a, b] : {std::pair{&avg_alpha, &avg_beta},
                                 std::pair{&alpha, &beta}}) {
        SlotMatrix x = recover(*a, *b);
        const double value = Objective(instance, x);
        if (value > best.objective) {
          best.objective = value;
          best.v = std::move(x);
        }
      }
      SlotMatrix x = repair(ergodic);
      const double value = Objective(instance, x);
      if (value > best.objective) {
        best.objective = value;
        best.v = std::move(x);
      }
    }
    if (options.on_iterate) options.on_iterate(dual, best.objective);
    if (best.dual_value - best.objective <=
        options.tol.Gap(best.objective)) {
      break;
    }
  }
  best.iterations = std::min(k, options.max_iters);
  best.gap = best.dual_value - best.objective;
  if (best.gap > options.tol.Gap(best.objective)) {
    std::ostringstream msg;
    msg << "subgradient solver stopped after " << options.max_iters
        << " iterations with gap " << best.gap;
    throw NonConvergenceError(msg.str(), best.objective, best.gap);
  }
  return best;
}

}  // namespace

SingleSolution SolveSingle(std::span<const RevenueFunction> revenues,
                           double capacity, const Tolerances& tol) {
  const size_t n = revenues.size();
  SingleSolution sol;
  sol.v.assign(n, 0.0);
  if (n == 0) return sol;

  double max_slope = 0.0;
  for (const RevenueFunction& g : revenues) {
    max_slope = std::max(max_slope, g.MaxSlope());
  }
  if (capacity <= 0.0) {
    sol.multiplier = max_slope;
    sol.dual_value = SingleDual(revenues, max_slope, 0.0);
    sol.gap = sol.dual_value;
    return sol;
  }

  std::vector<double> v_lo(n), v_hi(n);
  if (TotalDemand(revenues, 0.0, &v_hi) <= capacity) {
    sol.v = v_hi;
    sol.multiplier = 0.0;
  } else {
    double lo = 0.0;
    double hi = max_slope * (1.0 + 4.0 * kEps) + 1e-300;
    for (int iter = 0; iter < 300 && hi - lo > 2.0 * kEps * hi; ++iter) {
      const double mid = 0.5 * (lo + hi);
      if (TotalDemand(revenues, mid, nullptr) > capacity) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    const double total_lo = TotalDemand(revenues, lo, &v_lo);
    const double total_hi = TotalDemand(revenues, hi, &v_hi);
    const double w =
        total_lo > total_hi
            ? std::clamp((capacity - total_hi) / (total_lo - total_hi), 0.0, 1.0)
            : 0.0;
    for (size_t k = 0; k < n; ++k) {
      sol.v[k] = std::clamp(v_hi[k] + w * (v_lo[k] - v_hi[k]), 0.0,
                            revenues[k].delta());
    }
    sol.multiplier = SingleDual(revenues, lo, capacity) <
                             SingleDual(revenues, hi, capacity)
                         ? lo
                         : hi;
  }
  for (size_t k = 0; k < n; ++k) sol.objective += revenues[k].Eval(sol.v[k]);
  sol.dual_value = SingleDual(revenues, sol.multiplier, capacity);
  sol.gap = std::max(0.0, sol.dual_value - sol.objective);
  if (sol.gap > tol.Gap(sol.objective)) {
    throw NonConvergenceError("single-inventory bisection left a gap",
                              sol.objective, sol.gap);
  }
  return sol;
}

double DualValue(const Instance& instance, int upto,
                 std::span<const double> alpha, std::span<const double> beta) {
  double total = 0.0;
  for (int i = 0; i < instance.num_inventories(); ++i) {
    total += instance.capacity(i) * alpha[i];
  }
  for (int t = 0; t < upto; ++t) {
    total += instance.allowance(t) * beta[t];
    for (int i = 0; i < instance.num_inventories(); ++i) {
      total += instance.revenue(t, i).Conjugate(alpha[i] + beta[t]);
    }
  }
  return total;
}

OfflineSolution SolveMulti(const Instance& instance, int upto,
                           const MultiOptions& options) {
  if (upto < 1 || upto > instance.num_slots()) {
    throw DomainError("slot index outside [1, T]");
  }
  if (options.method == MultiMethod::kSubgradient) {
    return SolveBySubgradient(instance, upto, options);
  }
  return FlowSolver(instance, upto, options.tol).Solve();
}

double SolveG(std::span<const RevenueFunction> revenues,
              std::span<const double> past_allowance, double x, double a,
              const Tolerances& tol) {
  if (revenues.empty()) return 0.0;
  if (past_allowance.size() + 1 != revenues.size()) {
    throw DomainError("need one past allowance per earlier slot");
  }
  if (x < 0.0 || a < 0.0) throw DomainError("G(x, a) needs x, a >= 0");
  std::vector<RevenueFunction> limited;
  limited.reserve(revenues.size());
  for (size_t k = 0; k + 1 < revenues.size(); ++k) {
    limited.push_back(revenues[k].WithRateLimit(past_allowance[k]));
  }
  limited.push_back(revenues.back().WithRateLimit(a));
  return SolveSingle(limited, x, tol).objective;
}

double OracleGrid(const Instance& instance, double step, double budget) {
  if (!(step > 0.0)) throw DomainError("grid step must be positive");
  const int T = instance.num_slots();
  const int N = instance.num_inventories();
  struct Cell {
    int slot;
    int inventory;
    std::vector<double> values;  // g(k * step)
  };
  std::vector<Cell> cells;
  double points = 1.0;
  for (int t = 0; t < T; ++t) {
    for (int i = 0; i < N; ++i) {
      const RevenueFunction& g = instance.revenue(t, i);
      const int count =
          static_cast<int>(std::floor(g.delta() / step + 1e-9)) + 1;
      points *= count;
      if (points > budget) {
        throw BudgetExceededError("grid oracle exceeds its enumeration budget");
      }
      Cell c{t, i, {}};
      for (int k = 0; k < count; ++k) {
        c.values.push_back(g.Eval(std::min(k * step, g.delta())));
      }
      cells.push_back(std::move(c));
    }
  }
  std::vector<double> used(N, 0.0), slot_used(T, 0.0);
  double best = 0.0;
  const double slack = 1e-12;
  // Depth-first enumeration with feasibility pruning.
  std::function<void(size_t, double)> visit = [&](size_t depth, double value) {
    if (depth == cells.size()) {
      best = std::max(best, value);
      return;
    }
    const Cell& c = cells[depth];
    for (size_t k = 0; k < c.values.size(); ++k) {
      const double x = std::min(k * step, instance.revenue(c.slot, c.inventory).delta());
      if (used[c.inventory] + x > instance.capacity(c.inventory) + slack ||
          slot_used[c.slot] + x > instance.allowance(c.slot) + slack) {
        break;
      }
      used[c.inventory] += x;
      slot_used[c.slot] += x;
      visit(depth + 1, value + c.values[k]);
      used[c.inventory] -= x;
      slot_used[c.slot] -= x;
    }
  };
  visit(0, 0.0);
  return best;
}

}  // namespace mialloc
