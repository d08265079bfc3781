#include "fiberwalk/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <sstream>

namespace fiberwalk {

namespace {

std::size_t cell_of(int j, int k, int k_levels) {
  return static_cast<std::size_t>(j - 1) * static_cast<std::size_t>(k_levels) +
         static_cast<std::size_t>(k - 1);
}

Count parse_count(std::string_view field, std::size_t line, std::size_t column) {
  Count value = 0;
  auto res = std::from_chars(field.data(), field.data() + field.size(), value);
  if (res.ec != std::errc{} || res.ptr != field.data() + field.size())
    throw ParseError("expected an integer", line, column);
  if (value < 0) throw ParseError("counts must be nonnegative", line, column);
  return value;
}

}  // namespace

Count Dataset::successes_at(int j, int k) const { return successes[cell_of(j, k, k_levels)]; }
Count Dataset::trials_at(int j, int k) const { return trials[cell_of(j, k, k_levels)]; }

bool Dataset::trials_all_positive() const {
  return std::all_of(trials.begin(), trials.end(), [](Count t) { return t > 0; });
}

Table Dataset::lifted_table() const {
  const std::size_t base = successes.size();
  std::vector<Count> counts(2 * base);
  for (std::size_t c = 0; c < base; ++c) {
    counts[c] = successes[c];
    counts[base + c] = trials[c] - successes[c];
  }
  return Table(std::move(counts), {2, j_levels, k_levels});
}

Dataset parse_grid(std::string_view text) {
  struct Cell {
    Count s, n;
  };
  std::vector<std::vector<Cell>> rows;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    const bool last = end == text.size();
    start = end + 1;
    ++line_no;
    std::size_t i = 0;
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    if (i >= line.size() || line[i] == '#') {
      if (last) break;
      continue;
    }
    std::vector<Cell> row;
    while (i < line.size()) {
      while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == ',' || line[i] == '\r')) ++i;
      if (i >= line.size()) break;
      const std::size_t tok_start = i;
      while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != ',' && line[i] != '\r') ++i;
      std::string_view token = line.substr(tok_start, i - tok_start);
      const std::size_t column = tok_start + 1;
      const std::size_t slash = token.find('/');
      if (slash == std::string_view::npos || slash == 0 || slash + 1 == token.size())
        throw ParseError("expected a successes/trials token", line_no, column);
      Count s = parse_count(token.substr(0, slash), line_no, column);
      Count n = parse_count(token.substr(slash + 1), line_no, column + slash + 1);
      if (s > n) throw ParseError("successes exceed trials", line_no, column);
      row.push_back({s, n});
    }
    if (!rows.empty() && row.size() != rows.front().size())
      throw ParseError("grid is not rectangular", line_no, 1);
    rows.push_back(std::move(row));
    if (last) break;
  }
  if (rows.empty() || rows.front().empty()) throw ParseError("empty grid", line_no, 1);

  Dataset d;
  d.k_levels = static_cast<int>(rows.size());
  d.j_levels = static_cast<int>(rows.front().size());
  d.successes.assign(static_cast<std::size_t>(d.j_levels) * static_cast<std::size_t>(d.k_levels), 0);
  d.trials = d.successes;
  for (int k = 1; k <= d.k_levels; ++k)
    for (int j = 1; j <= d.j_levels; ++j) {
      const Cell& cell = rows[static_cast<std::size_t>(k - 1)][static_cast<std::size_t>(j - 1)];
      d.successes[cell_of(j, k, d.k_levels)] = cell.s;
      d.trials[cell_of(j, k, d.k_levels)] = cell.n;
    }
  return d;
}

Dataset parse_long_csv(std::string_view text) {
  std::map<std::pair<int, int>, std::pair<Count, Count>> cells;
  std::size_t line_no = 0;
  std::size_t start = 0;
  bool saw_header = false;
  int max_j = 0, max_k = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    const bool last = end == text.size();
    start = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') {
      if (last) break;
      continue;
    }
    std::vector<std::string_view> fields;
    std::size_t fstart = 0;
    while (fstart <= line.size()) {
      std::size_t fend = line.find(',', fstart);
      if (fend == std::string_view::npos) fend = line.size();
      fields.push_back(line.substr(fstart, fend - fstart));
      if (fend == line.size()) break;
      fstart = fend + 1;
    }
    if (!saw_header) {
      if (fields.size() != 4 || fields[0] != "j" || fields[1] != "k" ||
          fields[2] != "successes" || fields[3] != "trials")
        throw ParseError("expected header j,k,successes,trials", line_no, 1);
      saw_header = true;
      if (last) break;
      continue;
    }
    if (fields.size() != 4) throw ParseError("expected 4 fields", line_no, 1);
    Count j = parse_count(fields[0], line_no, 1);
    Count k = parse_count(fields[1], line_no, 1);
    if (j < 1 || k < 1) throw ParseError("indices are 1-based", line_no, 1);
    Count s = parse_count(fields[2], line_no, 1);
    Count n = parse_count(fields[3], line_no, 1);
    if (s > n) throw ParseError("successes exceed trials", line_no, 1);
    auto key = std::make_pair(static_cast<int>(j), static_cast<int>(k));
    if (!cells.emplace(key, std::make_pair(s, n)).second)
      throw ParseError("duplicate cell", line_no, 1);
    max_j = std::max(max_j, key.first);
    max_k = std::max(max_k, key.second);
    if (last) break;
  }
  if (!saw_header) throw ParseError("missing header", line_no, 1);
  if (cells.empty()) throw ParseError("no data rows", line_no, 1);
  if (cells.size() != static_cast<std::size_t>(max_j) * static_cast<std::size_t>(max_k))
    throw ParseError("missing cells: expected a complete " + std::to_string(max_j) + "x" +
                         std::to_string(max_k) + " lattice",
                     line_no, 1);

  Dataset d;
  d.j_levels = max_j;
  d.k_levels = max_k;
  d.successes.assign(cells.size(), 0);
  d.trials.assign(cells.size(), 0);
  for (const auto& [key, value] : cells) {
    d.successes[cell_of(key.first, key.second, max_k)] = value.first;
    d.trials[cell_of(key.first, key.second, max_k)] = value.second;
  }
  return d;
}

std::string to_grid(const Dataset& d) {
  std::ostringstream out;
  for (int k = 1; k <= d.k_levels; ++k) {
    for (int j = 1; j <= d.j_levels; ++j) {
      if (j > 1) out << ' ';
      out << d.successes_at(j, k) << '/' << d.trials_at(j, k);
    }
    out << '\n';
  }
  return out.str();
}

std::string to_long_csv(const Dataset& d) {
  std::ostringstream out;
  out << "j,k,successes,trials\n";
  for (int j = 1; j <= d.j_levels; ++j)
    for (int k = 1; k <= d.k_levels; ++k)
      out << j << ',' << k << ',' << d.successes_at(j, k) << ',' << d.trials_at(j, k) << '\n';
  return out.str();
}

Dataset parse_dataset(std::string_view text, DataFormat format) {
  return format == DataFormat::grid ? parse_grid(text) : parse_long_csv(text);
}

}  // namespace fiberwalk
