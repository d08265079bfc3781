#include "fiberwalk/movesets.hpp"

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <set>

namespace fiberwalk {

MoveSet::MoveSet(std::vector<Move> moves, std::string source_tag)
    : source_tag_(std::move(source_tag)) {
  std::set<Move> unique;
  for (const Move& z : moves)
    if (!z.is_zero()) unique.insert(z.canonical());
  moves_.assign(unique.begin(), unique.end());
}

bool MoveSet::contains(const Move& z) const {
  return std::binary_search(moves_.begin(), moves_.end(), z.canonical());
}

Configuration univariate_poisson_config(int levels) {
  if (levels < 2) throw DomainError("univariate Poisson configuration needs at least 2 levels");
  std::vector<Count> entries;
  entries.reserve(2 * static_cast<std::size_t>(levels));
  for (int j = 1; j <= levels; ++j) entries.push_back(1);
  for (int j = 1; j <= levels; ++j) entries.push_back(j);
  return Configuration(2, {levels}, std::move(entries), std::vector<Count>{1, 0});
}

Configuration lawrence_lifting(const Configuration& a) {
  const std::size_t n = a.cells();
  const std::size_t rows = a.rows() + n;
  std::vector<Count> entries(rows * 2 * n, 0);
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < n; ++c) entries[r * 2 * n + c] = a.at(r, c);
  for (std::size_t c = 0; c < n; ++c) {
    entries[(a.rows() + c) * 2 * n + c] = 1;
    entries[(a.rows() + c) * 2 * n + n + c] = 1;
  }
  std::vector<int> axes{2};
  axes.insert(axes.end(), a.axes().begin(), a.axes().end());
  std::vector<Count> weight(rows, 0);
  for (std::size_t c = 0; c < n; ++c) weight[a.rows() + c] = 1;
  return Configuration(rows, std::move(axes), std::move(entries), std::move(weight));
}

Configuration segre_product(const Configuration& a, const Configuration& b) {
  if (!a.weight() || !b.weight())
    throw DomainError("Segre product requires homogeneity weights on both factors");
  const std::size_t rows = a.rows() + b.rows();
  const std::size_t cells = a.cells() * b.cells();
  std::vector<Count> entries(rows * cells, 0);
  for (std::size_t ca = 0; ca < a.cells(); ++ca)
    for (std::size_t cb = 0; cb < b.cells(); ++cb) {
      std::size_t c = ca * b.cells() + cb;
      for (std::size_t r = 0; r < a.rows(); ++r) entries[r * cells + c] = a.at(r, ca);
      for (std::size_t r = 0; r < b.rows(); ++r) entries[(a.rows() + r) * cells + c] = b.at(r, cb);
    }
  std::vector<int> axes = a.axes();
  axes.insert(axes.end(), b.axes().begin(), b.axes().end());
  std::vector<Count> weight = *a.weight();
  weight.resize(rows, 0);
  return Configuration(rows, std::move(axes), std::move(entries), std::move(weight));
}

MoveSet poisson_moves(int levels) {
  if (levels < 2) throw DomainError("poisson_moves needs at least 2 levels");
  std::vector<Move> out;
  for (int j1 = 1; j1 <= levels; ++j1)
    for (int j2 = j1 + 1; j2 <= levels; ++j2)
      for (int j3 = j2; j3 <= levels; ++j3) {
        int j4 = j3 + (j2 - j1);
        if (j4 > levels) continue;
        out.push_back(Move({{static_cast<std::size_t>(j1 - 1), 1},
                            {static_cast<std::size_t>(j4 - 1), 1},
                            {static_cast<std::size_t>(j2 - 1), -1},
                            {static_cast<std::size_t>(j3 - 1), -1}}));
      }
  return MoveSet(std::move(out), "poisson");
}

MoveSet univariate_adjacent_moves(int levels) {
  if (levels < 3) throw DomainError("adjacent move set needs at least 3 levels");
  std::vector<Move> out;
  for (int j1 = 1; j1 + 1 <= levels - 1; ++j1)
    for (int j3 = j1 + 1; j3 + 1 <= levels; ++j3) {
      Move base({{static_cast<std::size_t>(j1 - 1), 1},
                 {static_cast<std::size_t>(j1), -1},
                 {static_cast<std::size_t>(j3 - 1), -1},
                 {static_cast<std::size_t>(j3), 1}});
      out.push_back(lift_move(base, static_cast<std::size_t>(levels)));
    }
  return MoveSet(std::move(out), "adjacent");
}

Move lift_move(const Move& z, std::size_t base_cells) {
  std::vector<std::pair<std::size_t, Count>> deltas;
  deltas.reserve(2 * z.deltas().size());
  for (const auto& [pos, delta] : z.deltas()) {
    if (pos >= base_cells) throw ShapeError("move touches a cell outside the base table");
    deltas.emplace_back(pos, delta);
    deltas.emplace_back(base_cells + pos, -delta);
  }
  return Move(std::move(deltas));
}

MoveSet lift_moves(const MoveSet& ms, std::size_t base_cells, std::string source_tag) {
  std::vector<Move> out;
  out.reserve(ms.size());
  for (const Move& z : ms.moves()) out.push_back(lift_move(z, base_cells));
  return MoveSet(std::move(out), std::move(source_tag));
}

namespace {

// Positive and negative cell indices of a one-axis move, 1-based, sorted
// ascending, repeated with multiplicity.
void signed_indices(const Move& z, std::vector<int>& positives, std::vector<int>& negatives) {
  positives.clear();
  negatives.clear();
  for (const auto& [pos, delta] : z.deltas()) {
    for (Count r = 0; r < delta; ++r) positives.push_back(static_cast<int>(pos) + 1);
    for (Count r = 0; r < -delta; ++r) negatives.push_back(static_cast<int>(pos) + 1);
  }
}

Move distribute_impl(const Move& base, std::vector<int> coords, int j_levels, int k_levels,
                     bool base_on_j) {
  std::vector<int> positives, negatives;
  signed_indices(base, positives, negatives);
  if (coords.size() != positives.size())
    throw DomainError("coordinate multiset size must equal the move degree");
  const int base_levels = base_on_j ? j_levels : k_levels;
  const int other_levels = base_on_j ? k_levels : j_levels;
  for (int idx : positives)
    if (idx > base_levels) throw DomainError("move index exceeds its axis");
  for (int c : coords)
    if (c < 1 || c > other_levels) throw DomainError("distribution coordinate out of range");
  std::sort(coords.begin(), coords.end());
  std::vector<std::pair<std::size_t, Count>> deltas;
  const auto cell = [&](int j, int k) {
    return static_cast<std::size_t>(j - 1) * static_cast<std::size_t>(k_levels) +
           static_cast<std::size_t>(k - 1);
  };
  for (std::size_t h = 0; h < coords.size(); ++h) {
    if (base_on_j) {
      deltas.emplace_back(cell(positives[h], coords[h]), 1);
      deltas.emplace_back(cell(negatives[h], coords[h]), -1);
    } else {
      deltas.emplace_back(cell(coords[h], positives[h]), 1);
      deltas.emplace_back(cell(coords[h], negatives[h]), -1);
    }
  }
  return Move(std::move(deltas));
}

// All multisets of `size` values drawn from {1,...,n}, nondecreasing.
void for_each_multiset(int n, int size, const std::function<void(const std::vector<int>&)>& fn) {
  std::vector<int> pick(static_cast<std::size_t>(size), 1);
  if (size == 0) {
    fn(pick);
    return;
  }
  for (;;) {
    fn(pick);
    int i = size - 1;
    while (i >= 0 && pick[static_cast<std::size_t>(i)] == n) --i;
    if (i < 0) break;
    int v = ++pick[static_cast<std::size_t>(i)];
    for (int t = i + 1; t < size; ++t) pick[static_cast<std::size_t>(t)] = v;
  }
}

}  // namespace

Move distribute_move(const Move& za, int j_levels, std::vector<int> coords, int k_levels) {
  return distribute_impl(za, std::move(coords), j_levels, k_levels, true);
}

MoveSet segre_markov_basis(const MoveSet& a_basis, const MoveSet& b_basis, int j_levels,
                           int k_levels) {
  std::vector<Move> out;
  const auto cell = [&](int j, int k) {
    return static_cast<std::size_t>(j - 1) * static_cast<std::size_t>(k_levels) +
           static_cast<std::size_t>(k - 1);
  };
  for (int j1 = 1; j1 <= j_levels; ++j1)
    for (int j2 = j1 + 1; j2 <= j_levels; ++j2)
      for (int k1 = 1; k1 <= k_levels; ++k1)
        for (int k2 = k1 + 1; k2 <= k_levels; ++k2)
          out.push_back(Move({{cell(j1, k1), 1},
                              {cell(j2, k2), 1},
                              {cell(j1, k2), -1},
                              {cell(j2, k1), -1}}));
  for (const Move& za : a_basis.moves())
    for_each_multiset(k_levels, static_cast<int>(za.degree()), [&](const std::vector<int>& coords) {
      out.push_back(distribute_impl(za, coords, j_levels, k_levels, true));
    });
  for (const Move& zb : b_basis.moves())
    for_each_multiset(j_levels, static_cast<int>(zb.degree()), [&](const std::vector<int>& coords) {
      out.push_back(distribute_impl(zb, coords, j_levels, k_levels, false));
    });
  return MoveSet(std::move(out), "segre");
}

MoveSet multiway_segre_basis(const std::vector<MoveSet>& bases, const std::vector<int>& axes) {
  const std::size_t m = axes.size();
  if (m < 2) throw DomainError("multiway Segre basis needs at least 2 factors");
  if (bases.size() != m) throw DomainError("one basis per factor required");
  const std::size_t cells = cell_count(axes);
  std::vector<Move> out;

  // square-free degree-two moves of the complete independence model:
  // swap a proper subset of coordinates between two cells
  std::vector<int> u(m), v(m), w1(m), w2(m);
  for (std::size_t cu = 0; cu < cells; ++cu) {
    u = cell_coords(axes, cu);
    for (std::size_t cv = cu + 1; cv < cells; ++cv) {
      v = cell_coords(axes, cv);
      for (std::size_t mask = 1; mask + 1 < (std::size_t{1} << m); ++mask) {
        for (std::size_t i = 0; i < m; ++i) {
          bool swap = (mask >> i) & 1;
          w1[i] = swap ? v[i] : u[i];
          w2[i] = swap ? u[i] : v[i];
        }
        std::size_t cw1 = cell_position(axes, w1);
        std::size_t cw2 = cell_position(axes, w2);
        if (cw1 == cu || cw1 == cv) continue;  // swap did nothing
        out.push_back(Move({{cu, 1}, {cv, 1}, {cw1, -1}, {cw2, -1}}));
      }
    }
  }

  // distributions of each factor basis over the product of the other axes
  for (std::size_t axis = 0; axis < m; ++axis) {
    std::vector<int> rest_axes;
    for (std::size_t i = 0; i < m; ++i)
      if (i != axis) rest_axes.push_back(axes[i]);
    const std::size_t rest_cells = cell_count(rest_axes);
    const auto full_position = [&](int level, std::size_t rest_pos) {
      std::vector<int> rest = cell_coords(rest_axes, rest_pos);
      std::vector<int> coords;
      coords.reserve(m);
      coords.insert(coords.end(), rest.begin(), rest.begin() + static_cast<long>(axis));
      coords.push_back(level);
      coords.insert(coords.end(), rest.begin() + static_cast<long>(axis), rest.end());
      return cell_position(axes, coords);
    };
    std::vector<int> positives, negatives;
    for (const Move& z : bases[axis].moves()) {
      signed_indices(z, positives, negatives);
      for_each_multiset(static_cast<int>(rest_cells), static_cast<int>(z.degree()),
                        [&](const std::vector<int>& picks) {
                          std::vector<std::pair<std::size_t, Count>> deltas;
                          for (std::size_t h = 0; h < picks.size(); ++h) {
                            auto rest_pos = static_cast<std::size_t>(picks[h] - 1);
                            deltas.emplace_back(full_position(positives[h], rest_pos), 1);
                            deltas.emplace_back(full_position(negatives[h], rest_pos), -1);
                          }
                          out.push_back(Move(std::move(deltas)));
                        });
    }
  }
  return MoveSet(std::move(out), "multiway-segre");
}

namespace {

// Lifted array with +delta at (1,j,k) and -delta at (2,j,k), accumulated
// into a dense layer-1 slice.
MoveSet lifted_quadruple_moves(int j_levels, int k_levels, bool unit_only, std::string tag) {
  if (j_levels < 1 || k_levels < 1 || j_levels * k_levels < 3)
    throw DomainError("lifted bivariate moves need at least 3 cells");
  const std::size_t base = static_cast<std::size_t>(j_levels) * static_cast<std::size_t>(k_levels);
  const auto cell = [&](int j, int k) {
    return static_cast<std::size_t>(j - 1) * static_cast<std::size_t>(k_levels) +
           static_cast<std::size_t>(k - 1);
  };
  std::vector<Move> out;
  std::vector<Count> slice(base);
  for (int j1 = 1; j1 <= j_levels; ++j1)
    for (int k1 = 1; k1 <= k_levels; ++k1)
      for (int j2 = 1; j2 <= j_levels; ++j2)
        for (int k2 = 1; k2 <= k_levels; ++k2) {
          const int dj = j1 - j2;
          const int dk = k1 - k2;
          if (unit_only && (std::abs(dj) > 1 || std::abs(dk) > 1 || (dj == 0 && dk == 0)))
            continue;
          for (int j3 = 1; j3 <= j_levels; ++j3)
            for (int k3 = 1; k3 <= k_levels; ++k3) {
              const int j4 = j3 - dj;
              const int k4 = k3 - dk;
              if (j4 < 1 || j4 > j_levels || k4 < 1 || k4 > k_levels) continue;
              std::fill(slice.begin(), slice.end(), 0);
              slice[cell(j1, k1)] += 1;
              slice[cell(j2, k2)] -= 1;
              slice[cell(j3, k3)] -= 1;
              slice[cell(j4, k4)] += 1;
              Move layer1 = Move::from_dense(slice);
              if (layer1.is_zero()) continue;
              out.push_back(lift_move(layer1, base));
            }
        }
  return MoveSet(std::move(out), std::move(tag));
}

}  // namespace

MoveSet bivariate_lifted_moves(int j_levels, int k_levels) {
  return lifted_quadruple_moves(j_levels, k_levels, false, "bivariate-lifted");
}

MoveSet bivariate_unit_moves(int j_levels, int k_levels) {
  return lifted_quadruple_moves(j_levels, k_levels, true, "bivariate-unit");
}

}  // namespace fiberwalk
