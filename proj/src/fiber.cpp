#include "fiberwalk/fiber.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <limits>
#include <set>
#include <unordered_map>

namespace fiberwalk {

namespace {

struct CountVectorHash {
  std::size_t operator()(const std::vector<Count>& v) const {
    std::size_t h = 1469598103934665603ull;
    for (Count c : v) {
      h ^= static_cast<std::size_t>(c);
      h *= 1099511628211ull;
    }
    return h;
  }
};

}  // namespace

Fiber enumerate_fiber(const Configuration& a, const SufficientStatistic& t,
                      const EnumerationLimits& limits) {
  if (t.values.size() != a.rows()) throw ShapeError("statistic length does not match configuration");
  const std::size_t cells = a.cells();
  const std::size_t rows = a.rows();

  std::optional<Count> total = a.total_count(t);
  if (!total && !limits.total_bound)
    throw DomainError("fiber enumeration needs a weight row or an explicit total bound");

  Fiber fiber;
  fiber.statistic = t;

  if (total && *total < 0) return fiber;

  // remaining coefficient ranges per row over suffix cells
  std::vector<Count> min_suffix(rows * (cells + 1)), max_suffix(rows * (cells + 1));
  for (std::size_t r = 0; r < rows; ++r) {
    min_suffix[r * (cells + 1) + cells] = std::numeric_limits<Count>::max();
    max_suffix[r * (cells + 1) + cells] = std::numeric_limits<Count>::min();
    for (std::size_t c = cells; c-- > 0;) {
      min_suffix[r * (cells + 1) + c] = std::min(min_suffix[r * (cells + 1) + c + 1], a.at(r, c));
      max_suffix[r * (cells + 1) + c] = std::max(max_suffix[r * (cells + 1) + c + 1], a.at(r, c));
    }
  }

  std::vector<Count> residual = t.values;
  std::vector<Count> counts(cells, 0);
  // remaining total: exact when weighted, an upper bound otherwise
  Count budget = total ? *total : *limits.total_bound;
  const bool exact_budget = total.has_value();

  const auto feasible = [&](std::size_t next_cell) {
    for (std::size_t r = 0; r < rows; ++r) {
      if (residual[r] < 0) return false;
      if (next_cell == cells) {
        if (residual[r] != 0) return false;
        continue;
      }
      if (exact_budget) {
        Count lo = checked_mul(budget, min_suffix[r * (cells + 1) + next_cell]);
        Count hi = checked_mul(budget, max_suffix[r * (cells + 1) + next_cell]);
        if (residual[r] < lo || residual[r] > hi) return false;
      } else if (residual[r] > checked_mul(budget, max_suffix[r * (cells + 1) + next_cell])) {
        return false;
      }
    }
    if (exact_budget && next_cell == cells && budget != 0) return false;
    return true;
  };

  const std::function<void(std::size_t)> dfs = [&](std::size_t c) {
    if (!feasible(c)) return;
    if (c == cells) {
      if (fiber.tables.size() >= limits.node_guard)
        throw ResourceError("fiber for statistic " + t.to_string() + " exceeds the node guard of " +
                            std::to_string(limits.node_guard) + " tables");
      fiber.tables.emplace_back(counts, a.axes());
      return;
    }
    Count vmax = budget;
    for (std::size_t r = 0; r < rows; ++r)
      if (a.at(r, c) > 0) vmax = std::min(vmax, residual[r] / a.at(r, c));
    for (Count v = 0; v <= vmax; ++v) {
      counts[c] = v;
      budget -= v;
      for (std::size_t r = 0; r < rows; ++r) residual[r] -= a.at(r, c) * v;
      dfs(c + 1);
      for (std::size_t r = 0; r < rows; ++r) residual[r] += a.at(r, c) * v;
      budget += v;
    }
    counts[c] = 0;
  };
  dfs(0);
  // ascending DFS emits tables in lexicographic order already
  return fiber;
}

bool is_connected(const Fiber& f, const MoveSet& m) {
  if (f.tables.size() <= 1) return true;
  std::unordered_map<std::vector<Count>, std::size_t, CountVectorHash> index;
  index.reserve(f.tables.size());
  for (std::size_t i = 0; i < f.tables.size(); ++i) index.emplace(f.tables[i].counts, i);

  std::vector<bool> seen(f.tables.size(), false);
  std::deque<std::size_t> queue{0};
  seen[0] = true;
  std::size_t reached = 1;
  std::vector<Count> scratch;
  while (!queue.empty()) {
    std::size_t i = queue.front();
    queue.pop_front();
    const std::vector<Count>& x = f.tables[i].counts;
    for (const Move& z : m.moves()) {
      for (int sign : {1, -1}) {
        bool ok = true;
        for (const auto& [pos, delta] : z.deltas()) {
          if (pos >= x.size() || x[pos] + sign * delta < 0) {
            ok = false;
            break;
          }
        }
        if (!ok) continue;
        scratch = x;
        for (const auto& [pos, delta] : z.deltas()) scratch[pos] += sign * delta;
        auto it = index.find(scratch);
        if (it != index.end() && !seen[it->second]) {
          seen[it->second] = true;
          ++reached;
          queue.push_back(it->second);
        }
      }
    }
  }
  return reached == f.tables.size();
}

std::vector<SufficientStatistic> positive_marginal_statistics(const Configuration& base,
                                                              Count cap) {
  if (cap < 1) throw DomainError("trials cap must be at least 1");
  const std::size_t n = base.cells();
  std::set<SufficientStatistic> stats;

  std::vector<Count> trials(n, 1);
  std::vector<Count> layer1(n, 0);
  const auto emit = [&]() {
    SufficientStatistic t;
    t.values.assign(base.rows() + n, 0);
    for (std::size_t r = 0; r < base.rows(); ++r) {
      Count sum = 0;
      for (std::size_t c = 0; c < n; ++c) sum = checked_add(sum, checked_mul(base.at(r, c), layer1[c]));
      t.values[r] = sum;
    }
    for (std::size_t c = 0; c < n; ++c) t.values[base.rows() + c] = trials[c];
    stats.insert(std::move(t));
  };

  const std::function<void(std::size_t)> layer_loop = [&](std::size_t c) {
    if (c == n) {
      emit();
      return;
    }
    for (Count v = 0; v <= trials[c]; ++v) {
      layer1[c] = v;
      layer_loop(c + 1);
    }
    layer1[c] = 0;
  };
  const std::function<void(std::size_t)> trials_loop = [&](std::size_t c) {
    if (c == n) {
      layer_loop(0);
      return;
    }
    for (Count v = 1; v <= cap; ++v) {
      trials[c] = v;
      trials_loop(c + 1);
    }
    trials[c] = 1;
  };
  trials_loop(0);
  return {stats.begin(), stats.end()};
}

std::vector<SufficientStatistic> positive_marginal_statistics(int j_levels, int k_levels,
                                                              Count cap) {
  Configuration base =
      segre_product(univariate_poisson_config(j_levels), univariate_poisson_config(k_levels));
  return positive_marginal_statistics(base, cap);
}

namespace {

struct TheoremInstance {
  Configuration config;
  MoveSet moves;
  std::vector<SufficientStatistic> statistics;
};

TheoremInstance make_instance(TheoremId which, const std::vector<int>& sizes, Count cap) {
  const auto need_sizes = [&](std::size_t n) {
    if (sizes.size() != n) throw DomainError("wrong number of sizes for this theorem");
  };
  switch (which) {
    case TheoremId::prop1: {
      need_sizes(1);
      const int levels = sizes[0];
      Configuration a = univariate_poisson_config(levels);
      std::vector<SufficientStatistic> stats;
      for (Count n = 0; n <= cap; ++n)
        for (Count s = n; s <= n * levels; ++s) stats.push_back({{n, s}});
      return {std::move(a), poisson_moves(levels), std::move(stats)};
    }
    case TheoremId::thm1: {
      need_sizes(1);
      const int levels = sizes[0];
      Configuration base = univariate_poisson_config(levels);
      auto stats = positive_marginal_statistics(base, cap);
      return {lawrence_lifting(base), univariate_adjacent_moves(levels), std::move(stats)};
    }
    case TheoremId::thm2: {
      need_sizes(2);
      const int jl = sizes[0], kl = sizes[1];
      Configuration a = segre_product(univariate_poisson_config(jl), univariate_poisson_config(kl));
      std::vector<SufficientStatistic> stats;
      for (Count n = 0; n <= cap; ++n)
        for (Count sj = n; sj <= n * jl; ++sj)
          for (Count sk = n; sk <= n * kl; ++sk) stats.push_back({{n, sj, n, sk}});
      return {std::move(a), segre_markov_basis(poisson_moves(jl), poisson_moves(kl), jl, kl),
              std::move(stats)};
    }
    case TheoremId::thm3:
    case TheoremId::conj_b02: {
      need_sizes(2);
      const int jl = sizes[0], kl = sizes[1];
      Configuration base =
          segre_product(univariate_poisson_config(jl), univariate_poisson_config(kl));
      auto stats = positive_marginal_statistics(base, cap);
      MoveSet moves = which == TheoremId::thm3 ? bivariate_lifted_moves(jl, kl)
                                               : bivariate_unit_moves(jl, kl);
      return {lawrence_lifting(base), std::move(moves), std::move(stats)};
    }
  }
  throw DomainError("unknown theorem id");
}

}  // namespace

VerifyReport verify_connectivity_theorem(TheoremId which, const std::vector<int>& sizes, Count cap,
                                         std::size_t node_guard) {
  TheoremInstance inst = make_instance(which, sizes, cap);
  VerifyReport report;
  report.theorem = which;
  report.sizes = sizes;
  report.cap = cap;
  report.move_count = inst.moves.size();
  EnumerationLimits limits{node_guard, std::nullopt};
  for (const SufficientStatistic& t : inst.statistics) {
    Fiber fiber = enumerate_fiber(inst.config, t, limits);
    if (fiber.tables.empty()) continue;
    ++report.fibers_checked;
    report.largest_fiber = std::max(report.largest_fiber, fiber.tables.size());
    if (!is_connected(fiber, inst.moves)) {
      report.all_connected = false;
      report.counterexample = std::move(fiber);
      break;
    }
  }
  return report;
}

}  // namespace fiberwalk
