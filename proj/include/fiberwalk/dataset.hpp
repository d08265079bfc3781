#pragma once

// Success/trial datasets over a J x K covariate lattice and their two
// text formats: a compact grid of s/n tokens (rows are the second
// covariate k, columns the first covariate j) and a long CSV.

#include <string>
#include <string_view>
#include <vector>

#include "fiberwalk/tables.hpp"

namespace fiberwalk {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, std::size_t line, std::size_t column)
      : std::runtime_error(message + " (line " + std::to_string(line) + ", column " +
                           std::to_string(column) + ")"),
        line_(line), column_(column) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

struct Dataset {
  int j_levels = 0;
  int k_levels = 0;
  std::vector<Count> successes;  // cell (j,k), j outer, k inner
  std::vector<Count> trials;

  Count successes_at(int j, int k) const;
  Count trials_at(int j, int k) const;
  bool trials_all_positive() const;

  // 2 x J x K table: layer 1 successes, layer 2 failures.
  Table lifted_table() const;
};

// Grid of s/n tokens, whitespace- or comma-separated, '#' lines skipped.
Dataset parse_grid(std::string_view text);

// Header "j,k,successes,trials"; each lattice cell exactly once.
Dataset parse_long_csv(std::string_view text);

std::string to_grid(const Dataset& d);
std::string to_long_csv(const Dataset& d);

enum class DataFormat { grid, long_csv };
Dataset parse_dataset(std::string_view text, DataFormat format);

}  // namespace fiberwalk
