#include "fiberwalk/mcmc.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace fiberwalk {

void ChainConfig::validate() const {
  if (burn_in < 0) throw DomainError("burn_in must be nonnegative");
  if (samples < 1) throw DomainError("samples must be at least 1");
  if (thin < 1) throw DomainError("thin must be at least 1");
}

double log_factorial(Count n) {
  if (n < 0) throw DomainError("factorial of a negative count");
  static const std::vector<double> table = [] {
    std::vector<double> t(4096);
    t[0] = 0.0;
    for (std::size_t i = 1; i < t.size(); ++i) t[i] = t[i - 1] + std::log(static_cast<double>(i));
    return t;
  }();
  if (static_cast<std::size_t>(n) < table.size()) return table[static_cast<std::size_t>(n)];
  return std::lgamma(static_cast<double>(n) + 1.0);
}

double log_binomial(Count n, Count k) {
  if (k < 0 || k > n) throw DomainError("binomial coefficient out of range");
  return log_factorial(n) - log_factorial(k) - log_factorial(n - k);
}

namespace {

// layer pairing for 2 x ... tables: cell p on layer 1 pairs with p + base
std::size_t base_cells_of(const Table& x) {
  if (x.axes.empty() || x.axes.front() != 2)
    throw ShapeError("binomial weight needs a 2-layer response table");
  return x.counts.size() / 2;
}

}  // namespace

double TargetWeight::log_weight(const Table& x) const {
  switch (kind_) {
    case WeightKind::poisson_factorial: {
      double w = 0.0;
      for (Count c : x.counts) w -= log_factorial(c);
      return w;
    }
    case WeightKind::binomial_coefficient: {
      const std::size_t base = base_cells_of(x);
      double w = 0.0;
      for (std::size_t c = 0; c < base; ++c)
        w += log_binomial(x.counts[c] + x.counts[base + c], x.counts[c]);
      return w;
    }
  }
  throw DomainError("unknown weight kind");
}

double TargetWeight::delta(const Table& x, const Move& z, int sign) const {
  switch (kind_) {
    case WeightKind::poisson_factorial: {
      double d = 0.0;
      for (const auto& [pos, delta] : z.deltas())
        d += log_factorial(x.counts[pos]) - log_factorial(x.counts[pos] + sign * delta);
      return d;
    }
    case WeightKind::binomial_coefficient: {
      const std::size_t base = base_cells_of(x);
      // gather per-base-cell changes on both layers (moves are tiny)
      double d = 0.0;
      const auto& deltas = z.deltas();
      for (std::size_t i = 0; i < deltas.size(); ++i) {
        const std::size_t b = deltas[i].first % base;
        bool first_touch = true;
        for (std::size_t k = 0; k < i; ++k)
          if (deltas[k].first % base == b) first_touch = false;
        if (!first_touch) continue;
        Count d1 = 0, d2 = 0;
        for (std::size_t k = i; k < deltas.size(); ++k) {
          if (deltas[k].first == b) d1 = deltas[k].second;
          if (deltas[k].first == base + b) d2 = deltas[k].second;
        }
        const Count x1 = x.counts[b], x2 = x.counts[base + b];
        d += log_binomial(x1 + sign * d1 + x2 + sign * d2, x1 + sign * d1) -
             log_binomial(x1 + x2, x1);
      }
      return d;
    }
  }
  throw DomainError("unknown weight kind");
}

double log_weight(const Table& x, WeightKind kind) { return TargetWeight(kind).log_weight(x); }

bool metropolis_step_in_place(Table& x, const MoveSet& m, const TargetWeight& w, Rng& rng) {
  if (m.empty()) throw DomainError("metropolis step needs a nonempty move set");
  const Move& z = m[rng.below(m.size())];
  const int sign = rng.coin() ? 1 : -1;
  for (const auto& [pos, delta] : z.deltas())
    if (x.counts[pos] + sign * delta < 0) return false;
  const double delta_logw = w.delta(x, z, sign);
  const double u = rng.uniform();
  if (u < std::exp(delta_logw)) {
    for (const auto& [pos, delta] : z.deltas()) x.counts[pos] += sign * delta;
    return true;
  }
  return false;
}

Table metropolis_step(const Table& x, const MoveSet& m, const TargetWeight& w, Rng& rng) {
  Table out = x;
  metropolis_step_in_place(out, m, w, rng);
  return out;
}

std::vector<double> run_chain(const Table& x0, const MoveSet& m, const TargetWeight& w,
                              const TableStatistic& stat, const ChainConfig& cfg) {
  cfg.validate();
  Table x = x0;
  Rng rng(cfg.seed);
  for (long long i = 0; i < cfg.burn_in; ++i) metropolis_step_in_place(x, m, w, rng);
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(cfg.samples));
  for (long long s = 0; s < cfg.samples; ++s) {
    for (long long i = 0; i < cfg.thin; ++i) metropolis_step_in_place(x, m, w, rng);
    out.push_back(stat(x));
  }
  return out;
}

double estimate_pvalue(std::span<const double> samples, double observed) {
  if (samples.empty()) throw DomainError("p-value estimation needs at least one sample");
  const double cutoff = observed - 1e-9;
  std::size_t hits = 0;
  for (double s : samples)
    if (s >= cutoff) ++hits;
  return static_cast<double>(hits) / static_cast<double>(samples.size());
}

std::vector<Count> hypergeometric_split(std::span<const Count> urns, Count draws, Rng& rng) {
  Count total = 0;
  for (Count u : urns) {
    if (u < 0) throw DomainError("urn sizes must be nonnegative");
    total += u;
  }
  if (draws < 0 || draws > total) throw DomainError("draw count exceeds the urn total");
  std::vector<Count> out(urns.size(), 0);
  Count rem_total = total, rem_draws = draws;
  for (std::size_t i = 0; i < urns.size(); ++i) {
    if (i + 1 == urns.size()) {
      out[i] = rem_draws;
      break;
    }
    const Count u = urns[i];
    const Count rest = rem_total - u;
    const Count lo = std::max<Count>(0, rem_draws - rest);
    const Count hi = std::min(u, rem_draws);
    const double norm = log_binomial(rem_total, rem_draws);
    const double r = rng.uniform();
    double acc = 0.0;
    Count picked = hi;
    for (Count h = lo; h <= hi; ++h) {
      acc += std::exp(log_binomial(u, h) + log_binomial(rest, rem_draws - h) - norm);
      if (r < acc) {
        picked = h;
        break;
      }
    }
    out[i] = picked;
    rem_total -= u;
    rem_draws -= picked;
  }
  return out;
}

namespace {

struct ReducedChain {
  Table margins;                    // 2 x L success/failure margin table
  int levels = 0;                   // L
  bool margin_axis_is_j = false;
  int j_levels = 0;
  int k_levels = 0;
};

ReducedChain make_reduced(const Table& x, SubmodelNull which) {
  if (x.axes.size() != 3 || x.axes[0] != 2)
    throw ShapeError("submodel sampling needs a 2 x J x K table");
  const int jl = x.axes[1], kl = x.axes[2];
  const std::size_t base = static_cast<std::size_t>(jl) * static_cast<std::size_t>(kl);
  for (std::size_t c = 0; c < base; ++c)
    if (x.counts[c] + x.counts[base + c] <= 0)
      throw DomainError("submodel sampling needs positive trials in every cell");
  ReducedChain rc;
  rc.margin_axis_is_j = which == SubmodelNull::alpha_zero;
  rc.levels = rc.margin_axis_is_j ? jl : kl;
  rc.j_levels = jl;
  rc.k_levels = kl;
  std::vector<Count> counts(2 * static_cast<std::size_t>(rc.levels), 0);
  for (int j = 1; j <= jl; ++j)
    for (int k = 1; k <= kl; ++k) {
      const std::size_t c = static_cast<std::size_t>(j - 1) * static_cast<std::size_t>(kl) +
                            static_cast<std::size_t>(k - 1);
      const int level = rc.margin_axis_is_j ? j : k;
      counts[static_cast<std::size_t>(level - 1)] += x.counts[c];
      counts[static_cast<std::size_t>(rc.levels + level - 1)] += x.counts[base + c];
    }
  rc.margins = Table(std::move(counts), {2, rc.levels});
  return rc;
}

// allocate each margin's layer-1 total back over its slice by sampling
// without replacement from the fixed trials
Table reconstruct(const ReducedChain& rc, const Table& x, const Table& margins, Rng& rng) {
  const int jl = rc.j_levels, kl = rc.k_levels;
  const std::size_t base = static_cast<std::size_t>(jl) * static_cast<std::size_t>(kl);
  std::vector<Count> counts(2 * base, 0);
  const int other = rc.margin_axis_is_j ? kl : jl;
  std::vector<Count> urns(static_cast<std::size_t>(other));
  for (int level = 1; level <= rc.levels; ++level) {
    for (int o = 1; o <= other; ++o) {
      const int j = rc.margin_axis_is_j ? level : o;
      const int k = rc.margin_axis_is_j ? o : level;
      const std::size_t c = static_cast<std::size_t>(j - 1) * static_cast<std::size_t>(kl) +
                            static_cast<std::size_t>(k - 1);
      urns[static_cast<std::size_t>(o - 1)] = x.counts[c] + x.counts[base + c];
    }
    const Count draws = margins.counts[static_cast<std::size_t>(level - 1)];
    std::vector<Count> successes = hypergeometric_split(urns, draws, rng);
    for (int o = 1; o <= other; ++o) {
      const int j = rc.margin_axis_is_j ? level : o;
      const int k = rc.margin_axis_is_j ? o : level;
      const std::size_t c = static_cast<std::size_t>(j - 1) * static_cast<std::size_t>(kl) +
                            static_cast<std::size_t>(k - 1);
      counts[c] = successes[static_cast<std::size_t>(o - 1)];
      counts[base + c] = urns[static_cast<std::size_t>(o - 1)] - counts[c];
    }
  }
  return Table(std::move(counts), x.axes);
}

}  // namespace

void run_submodel_null_chain(const Table& x, SubmodelNull which, const MoveSet& reduced_moves,
                             const ChainConfig& cfg,
                             const std::function<void(const Table&)>& sink) {
  cfg.validate();
  ReducedChain rc = make_reduced(x, which);
  Table state = rc.margins;
  TargetWeight weight(WeightKind::binomial_coefficient);
  Rng rng(cfg.seed);
  const bool walk = !reduced_moves.empty();
  for (long long i = 0; walk && i < cfg.burn_in; ++i)
    metropolis_step_in_place(state, reduced_moves, weight, rng);
  for (long long s = 0; s < cfg.samples; ++s) {
    for (long long i = 0; walk && i < cfg.thin; ++i)
      metropolis_step_in_place(state, reduced_moves, weight, rng);
    sink(reconstruct(rc, x, state, rng));
  }
}

Table sample_submodel_null(const Table& x, SubmodelNull which, const ChainConfig& cfg) {
  ReducedChain rc = make_reduced(x, which);
  // the margin fiber is a singleton below 3 levels: two of its
  // constraints already pin both cells of every column
  MoveSet moves =
      rc.levels >= 3 ? univariate_adjacent_moves(rc.levels) : MoveSet({}, "adjacent");
  ChainConfig one = cfg;
  one.samples = 1;
  Table out;
  run_submodel_null_chain(x, which, moves, one, [&](const Table& t) { out = t; });
  return out;
}

}  // namespace fiberwalk
