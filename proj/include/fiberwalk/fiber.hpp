#pragma once

// Brute-force verification instrument: exact fiber enumeration on small
// instances, the move graph on a fiber, and exhaustive connectivity
// checks for the theorem families the move-set generators implement.

#include <optional>
#include <vector>

#include "fiberwalk/movesets.hpp"

namespace fiberwalk {

// All nonnegative integer tables sharing one sufficient statistic,
// sorted lexicographically by counts.
struct Fiber {
  SufficientStatistic statistic;
  std::vector<Table> tables;
};

struct EnumerationLimits {
  std::size_t node_guard = 1'000'000;     // max fiber members before bailing out
  std::optional<Count> total_bound;       // required when A carries no weight row
};

// Exact solution set {x >= 0 integer : A x = t} by depth-first search in
// canonical cell order with residual-feasibility pruning.
Fiber enumerate_fiber(const Configuration& a, const SufficientStatistic& t,
                      const EnumerationLimits& limits = {});

// Graph connectivity of the fiber under x -> x +/- z, z in m (BFS from
// the lexicographically smallest table).
bool is_connected(const Fiber& f, const MoveSet& m);

// Statistics of the Lawrence lifting of `base` whose cell totals (the
// identity-block rows) all lie in [1, cap], crossed with every layer-1
// statistic value attainable under those totals.
std::vector<SufficientStatistic> positive_marginal_statistics(const Configuration& base, Count cap);

// Bivariate logistic shortcut: base = univariate(J) (x) univariate(K).
std::vector<SufficientStatistic> positive_marginal_statistics(int j_levels, int k_levels,
                                                              Count cap);

enum class TheoremId { prop1, thm1, thm2, thm3, conj_b02 };

struct VerifyReport {
  TheoremId theorem;
  std::vector<int> sizes;
  Count cap = 0;
  std::size_t move_count = 0;
  std::size_t fibers_checked = 0;
  std::size_t largest_fiber = 0;
  bool all_connected = true;
  std::optional<Fiber> counterexample;  // first disconnected fiber, if any
};

// Exhaustively checks the statistic family of the given theorem at the
// given sizes: prop1/thm2 read `cap` as the maximum total count, thm1,
// thm3 and conj_b02 as the per-cell trials cap.
VerifyReport verify_connectivity_theorem(TheoremId which, const std::vector<int>& sizes, Count cap,
                                         std::size_t node_guard = 1'000'000);

}  // namespace fiberwalk
