#pragma once

// Constructions of the configurations and move sets used by the fiber
// samplers: univariate Poisson regression and its minimum-fiber Markov
// basis, Lawrence liftings for logistic (success/failure) data, Segre
// products for additive multi-covariate models, and the lifted bivariate
// move families with their unit-step subset.

#include <string>
#include <vector>

#include "fiberwalk/tables.hpp"

namespace fiberwalk {

// Finite collection of kernel moves, one representative per +/- pair,
// deduplicated and kept in a deterministic sorted order.
class MoveSet {
 public:
  MoveSet() = default;
  MoveSet(std::vector<Move> moves, std::string source_tag);

  const std::vector<Move>& moves() const { return moves_; }
  const Move& operator[](std::size_t i) const { return moves_[i]; }
  std::size_t size() const { return moves_.size(); }
  bool empty() const { return moves_.empty(); }
  const std::string& source_tag() const { return source_tag_; }

  // Membership up to global sign.
  bool contains(const Move& z) const;

 private:
  std::vector<Move> moves_;
  std::string source_tag_;
};

// 2 x J matrix with rows (1,...,1) and (1,2,...,J); weight (1,0).
Configuration univariate_poisson_config(int levels);

// Block matrix [[A,0],[E,E]] over 2n cells; the response layer i in {1,2}
// becomes the outermost axis.  Fibers fix every cell total x_{+c}.
Configuration lawrence_lifting(const Configuration& a);

// Columns a_j (+) b_k stacked; both factors must carry homogeneity weights.
Configuration segre_product(const Configuration& a, const Configuration& b);

// Minimum-fiber Markov basis for univariate Poisson regression:
// e_{j1}+e_{j4}-e_{j2}-e_{j3}, j1<j2<=j3<j4, j2-j1 = j4-j3.
MoveSet poisson_moves(int levels);

// Adjacent-step subset (gap 1) lifted to the 2 x J logistic table;
// connects every fiber with positive column totals.
MoveSet univariate_adjacent_moves(int levels);

// Layer 1 carries z, layer 2 carries -z; maps moves of A to moves of
// the Lawrence lifting.
Move lift_move(const Move& z, std::size_t base_cells);
MoveSet lift_moves(const MoveSet& ms, std::size_t base_cells, std::string source_tag);

// Distribution of a one-axis move over a J x K table: the h-th sorted
// positive and negative indices of za both land in column coords[h]
// (coords is an unordered multiset and is sorted internally).  Row sums
// reproduce za; column sums stay zero.
Move distribute_move(const Move& za, int j_levels, std::vector<int> coords, int k_levels);

// Markov basis for the Segre product A (x) B: 2x2 basic moves plus all
// multiset distributions of the factor bases.
MoveSet segre_markov_basis(const MoveSet& a_basis, const MoveSet& b_basis, int j_levels,
                           int k_levels);

// m-factor generalization: square-free degree-two complete-independence
// moves plus distributions of each factor basis over the product of the
// remaining axes.
MoveSet multiway_segre_basis(const std::vector<MoveSet>& bases, const std::vector<int>& axes);

// Lifted moves E_{j1k1} - E_{j2k2} - E_{j3k3} + E_{j4k4} over index
// quadruples with (j1,k1)-(j2,k2) = (j3,k3)-(j4,k4), degenerate shapes
// kept with merged coefficients, deduplicated up to sign.
MoveSet bivariate_lifted_moves(int j_levels, int k_levels);

// Subset whose common difference vector has entries in {-1,0,1}.
MoveSet bivariate_unit_moves(int j_levels, int k_levels);

}  // namespace fiberwalk
