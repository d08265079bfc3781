#pragma once

// Metropolis walks over fibers targeting the conditional null law
// (product binomial coefficients for success/failure tables, inverse
// factorials for Poisson counts), exceedance p-values, and the reduced
// sampler for submodel nulls (margin chain + hypergeometric allocation).

#include <functional>
#include <span>
#include <vector>

#include "fiberwalk/movesets.hpp"
#include "fiberwalk/rng.hpp"

namespace fiberwalk {

struct ChainConfig {
  long long burn_in = 50'000;
  long long samples = 100'000;
  std::uint64_t seed = 1;
  long long thin = 1;

  void validate() const;
};

enum class WeightKind { poisson_factorial, binomial_coefficient };

double log_factorial(Count n);
double log_binomial(Count n, Count k);

// Unnormalized log target on a fiber.
class TargetWeight {
 public:
  explicit TargetWeight(WeightKind kind) : kind_(kind) {}
  WeightKind kind() const { return kind_; }
  double log_weight(const Table& x) const;
  // log w(x + sign z) - log w(x); the proposal must be feasible
  double delta(const Table& x, const Move& z, int sign) const;

 private:
  WeightKind kind_;
};

double log_weight(const Table& x, WeightKind kind);

// One proposal: uniform (move, sign); infeasible proposals stay put and
// count as steps.  Returns whether the proposal was accepted.
bool metropolis_step_in_place(Table& x, const MoveSet& m, const TargetWeight& w, Rng& rng);
Table metropolis_step(const Table& x, const MoveSet& m, const TargetWeight& w, Rng& rng);

using TableStatistic = std::function<double(const Table&)>;

// burn_in discarded steps, then one statistic value every `thin` steps
// until `samples` values are collected; fully reproducible from the seed.
std::vector<double> run_chain(const Table& x0, const MoveSet& m, const TargetWeight& w,
                              const TableStatistic& stat, const ChainConfig& cfg);

// Exceedance proportion #{s : s >= observed - 1e-9} / N.
double estimate_pvalue(std::span<const double> samples, double observed);

// Draws from the conditional law of a submodel null on a 2 x J x K
// success/failure table: a margin table walks its univariate fiber, then
// successes are re-allocated within each slice by sampling without
// replacement from the fixed trials.
//   alpha_zero: the j-margin table (x_{1j+}) walks; tests the k-axis term.
//   beta_zero:  the k-margin table (x_{1+k}) walks; tests the j-axis term.
enum class SubmodelNull { alpha_zero, beta_zero };

Table sample_submodel_null(const Table& x, SubmodelNull which, const ChainConfig& cfg);

// Chain version: sink receives every retained reconstructed table.
// An empty move set is allowed when the reduced fiber is a singleton
// (margin axis with fewer than 3 levels).
void run_submodel_null_chain(const Table& x, SubmodelNull which, const MoveSet& reduced_moves,
                             const ChainConfig& cfg,
                             const std::function<void(const Table&)>& sink);

// Multivariate hypergeometric split: how many of `draws` balls drawn
// without replacement from urns of the given sizes land in each urn.
std::vector<Count> hypergeometric_split(std::span<const Count> urns, Count draws, Rng& rng);

}  // namespace fiberwalk
