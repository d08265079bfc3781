#pragma once

// Integer-lattice primitives for conditional inference on contingency
// tables: configurations (statistic matrices), count tables, kernel moves
// and their application.  Cells of a multiway table are ordered row-major
// over the declared axes with the first axis outermost; when a response
// layer i in {1,2} is present it is the first axis.  All counts are
// 64-bit signed integers and arithmetic is overflow-checked.

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace fiberwalk {

using Count = std::int64_t;

class ShapeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class OverflowError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Count checked_add(Count a, Count b);
Count checked_mul(Count a, Count b);

std::size_t cell_count(std::span<const int> axes);

// 1-based multi-index <-> row-major position.
std::size_t cell_position(std::span<const int> axes, std::span<const int> coords);
std::vector<int> cell_coords(std::span<const int> axes, std::size_t position);

struct SufficientStatistic {
  std::vector<Count> values;

  bool operator==(const SufficientStatistic&) const = default;
  auto operator<=>(const SufficientStatistic&) const = default;
  std::string to_string() const;
};

// Nonnegative integer matrix mapping cell counts to sufficient statistics.
// An optional weight row w with <w, column> = 1 for every column witnesses
// homogeneity; it pins the total count of any table in a fiber.
class Configuration {
 public:
  Configuration(std::size_t rows, std::vector<int> axes, std::vector<Count> entries,
                std::optional<std::vector<Count>> weight = std::nullopt);

  std::size_t rows() const { return rows_; }
  std::size_t cells() const { return cells_; }
  const std::vector<int>& axes() const { return axes_; }
  Count at(std::size_t row, std::size_t cell) const { return entries_[row * cells_ + cell]; }
  const std::optional<std::vector<Count>>& weight() const { return weight_; }

  // Total count of any table with statistic t, when a weight row exists.
  std::optional<Count> total_count(const SufficientStatistic& t) const;

 private:
  std::size_t rows_;
  std::size_t cells_;
  std::vector<int> axes_;
  std::vector<Count> entries_;  // rows x cells, row-major
  std::optional<std::vector<Count>> weight_;
};

struct Table {
  std::vector<Count> counts;
  std::vector<int> axes;

  Table() = default;
  Table(std::vector<Count> counts, std::vector<int> axes);

  Count at(std::span<const int> coords) const;
  Count total() const;

  bool operator==(const Table&) const = default;
};

// Integer vector in the kernel of a configuration, stored sparsely as
// (cell position, delta) pairs sorted by position.
class Move {
 public:
  Move() = default;
  explicit Move(std::vector<std::pair<std::size_t, Count>> deltas);
  static Move from_dense(std::span<const Count> deltas);

  const std::vector<std::pair<std::size_t, Count>>& deltas() const { return deltas_; }
  bool is_zero() const { return deltas_.empty(); }
  Count degree() const;  // sum of the positive part
  Move negated() const;
  // Sign-normalized representative: the smallest touched cell carries a
  // positive delta.
  Move canonical() const;
  std::vector<Count> dense(std::size_t cells) const;

  bool operator==(const Move&) const = default;
  auto operator<=>(const Move&) const = default;

 private:
  std::vector<std::pair<std::size_t, Count>> deltas_;
};

SufficientStatistic sufficient_statistic(const Configuration& a, const Table& x);
bool is_move(const Configuration& a, const Move& z);

// x + sign*z when every resulting count stays nonnegative; nullopt on
// rejection (x is left untouched).
std::optional<Table> apply_move(const Table& x, const Move& z, int sign);

// Long CSV, header "axis1,...,axisM,count", one row per nonzero cell.
// Moves serialize identically with a signed "delta" column.
std::string table_to_csv(const Table& x);
Table table_from_csv(std::string_view text, std::vector<int> axes);
std::string move_to_csv(const Move& z, std::span<const int> axes);
Move move_from_csv(std::string_view text, std::span<const int> axes);

}  // namespace fiberwalk
