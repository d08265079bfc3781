#include "fiberwalk/tables.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

namespace fiberwalk {

Count checked_add(Count a, Count b) {
  Count r;
  if (__builtin_add_overflow(a, b, &r)) throw OverflowError("integer overflow in addition");
  return r;
}

Count checked_mul(Count a, Count b) {
  Count r;
  if (__builtin_mul_overflow(a, b, &r)) throw OverflowError("integer overflow in multiplication");
  return r;
}

std::size_t cell_count(std::span<const int> axes) {
  std::size_t n = 1;
  for (int a : axes) {
    if (a < 1) throw DomainError("axis size must be positive");
    n *= static_cast<std::size_t>(a);
  }
  return n;
}

std::size_t cell_position(std::span<const int> axes, std::span<const int> coords) {
  if (axes.size() != coords.size()) throw ShapeError("coordinate arity does not match axes");
  std::size_t pos = 0;
  for (std::size_t i = 0; i < axes.size(); ++i) {
    if (coords[i] < 1 || coords[i] > axes[i]) throw DomainError("coordinate out of range");
    pos = pos * static_cast<std::size_t>(axes[i]) + static_cast<std::size_t>(coords[i] - 1);
  }
  return pos;
}

std::vector<int> cell_coords(std::span<const int> axes, std::size_t position) {
  std::vector<int> coords(axes.size());
  for (std::size_t i = axes.size(); i-- > 0;) {
    auto size = static_cast<std::size_t>(axes[i]);
    coords[i] = static_cast<int>(position % size) + 1;
    position /= size;
  }
  if (position != 0) throw DomainError("cell position out of range");
  return coords;
}

std::string SufficientStatistic::to_string() const {
  std::ostringstream out;
  out << '(';
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out << ',';
    out << values[i];
  }
  out << ')';
  return out.str();
}

Configuration::Configuration(std::size_t rows, std::vector<int> axes, std::vector<Count> entries,
                             std::optional<std::vector<Count>> weight)
    : rows_(rows), cells_(cell_count(axes)), axes_(std::move(axes)), entries_(std::move(entries)),
      weight_(std::move(weight)) {
  if (entries_.size() != rows_ * cells_) throw ShapeError("configuration entry count mismatch");
  for (Count e : entries_)
    if (e < 0) throw DomainError("configuration entries must be nonnegative");
  if (weight_) {
    if (weight_->size() != rows_) throw ShapeError("weight length must equal row count");
    for (std::size_t c = 0; c < cells_; ++c) {
      Count dot = 0;
      for (std::size_t r = 0; r < rows_; ++r)
        dot = checked_add(dot, checked_mul((*weight_)[r], at(r, c)));
      if (dot != 1) throw DomainError("weight vector is not a homogeneity witness");
    }
  }
}

std::optional<Count> Configuration::total_count(const SufficientStatistic& t) const {
  if (!weight_) return std::nullopt;
  if (t.values.size() != rows_) throw ShapeError("statistic length does not match configuration");
  Count n = 0;
  for (std::size_t r = 0; r < rows_; ++r)
    n = checked_add(n, checked_mul((*weight_)[r], t.values[r]));
  return n;
}

Table::Table(std::vector<Count> counts, std::vector<int> axes)
    : counts(std::move(counts)), axes(std::move(axes)) {
  if (this->counts.size() != cell_count(this->axes)) throw ShapeError("table size does not match axes");
  for (Count c : this->counts)
    if (c < 0) throw DomainError("table counts must be nonnegative");
}

Count Table::at(std::span<const int> coords) const {
  return counts[cell_position(axes, coords)];
}

Count Table::total() const {
  Count n = 0;
  for (Count c : counts) n = checked_add(n, c);
  return n;
}

Move::Move(std::vector<std::pair<std::size_t, Count>> deltas) : deltas_(std::move(deltas)) {
  std::sort(deltas_.begin(), deltas_.end());
  // merge duplicate cells, drop zeros
  std::size_t out = 0;
  for (std::size_t i = 0; i < deltas_.size();) {
    std::size_t pos = deltas_[i].first;
    Count sum = 0;
    while (i < deltas_.size() && deltas_[i].first == pos) sum = checked_add(sum, deltas_[i++].second);
    if (sum != 0) deltas_[out++] = {pos, sum};
  }
  deltas_.resize(out);
}

Move Move::from_dense(std::span<const Count> deltas) {
  std::vector<std::pair<std::size_t, Count>> sparse;
  for (std::size_t i = 0; i < deltas.size(); ++i)
    if (deltas[i] != 0) sparse.emplace_back(i, deltas[i]);
  return Move(std::move(sparse));
}

Count Move::degree() const {
  Count d = 0;
  for (const auto& [pos, delta] : deltas_)
    if (delta > 0) d = checked_add(d, delta);
  return d;
}

Move Move::negated() const {
  Move z;
  z.deltas_ = deltas_;
  for (auto& [pos, delta] : z.deltas_) delta = -delta;
  return z;
}

Move Move::canonical() const {
  if (!deltas_.empty() && deltas_.front().second < 0) return negated();
  return *this;
}

std::vector<Count> Move::dense(std::size_t cells) const {
  std::vector<Count> out(cells, 0);
  for (const auto& [pos, delta] : deltas_) {
    if (pos >= cells) throw ShapeError("move touches a cell outside the table");
    out[pos] = delta;
  }
  return out;
}

SufficientStatistic sufficient_statistic(const Configuration& a, const Table& x) {
  if (x.axes != a.axes()) throw ShapeError("table axes do not match configuration");
  SufficientStatistic t;
  t.values.assign(a.rows(), 0);
  for (std::size_t r = 0; r < a.rows(); ++r) {
    Count sum = 0;
    for (std::size_t c = 0; c < a.cells(); ++c)
      sum = checked_add(sum, checked_mul(a.at(r, c), x.counts[c]));
    t.values[r] = sum;
  }
  return t;
}

bool is_move(const Configuration& a, const Move& z) {
  for (const auto& [pos, delta] : z.deltas())
    if (pos >= a.cells()) throw ShapeError("move touches a cell outside the configuration");
  for (std::size_t r = 0; r < a.rows(); ++r) {
    Count sum = 0;
    for (const auto& [pos, delta] : z.deltas())
      sum = checked_add(sum, checked_mul(a.at(r, pos), delta));
    if (sum != 0) return false;
  }
  return true;
}

std::optional<Table> apply_move(const Table& x, const Move& z, int sign) {
  if (sign != 1 && sign != -1) throw DomainError("sign must be +1 or -1");
  for (const auto& [pos, delta] : z.deltas()) {
    if (pos >= x.counts.size()) throw ShapeError("move touches a cell outside the table");
    if (x.counts[pos] + sign * delta < 0) return std::nullopt;
  }
  Table out = x;
  for (const auto& [pos, delta] : z.deltas()) out.counts[pos] += sign * delta;
  return out;
}

namespace {

void write_csv_header(std::ostringstream& out, std::size_t naxes, const char* value_column) {
  for (std::size_t i = 0; i < naxes; ++i) out << "axis" << (i + 1) << ',';
  out << value_column << '\n';
}

void write_csv_row(std::ostringstream& out, std::span<const int> coords, Count value) {
  for (int c : coords) out << c << ',';
  out << value << '\n';
}

struct CsvBody {
  std::vector<std::pair<std::size_t, Count>> entries;  // (position, value)
};

CsvBody parse_csv_body(std::string_view text, std::span<const int> axes, const char* value_column) {
  CsvBody body;
  std::size_t line_no = 0;
  std::size_t start = 0;
  bool saw_header = false;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (line.empty() || line.front() == '#') {
      if (end == text.size()) break;
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
      if (fields.size() != axes.size() + 1 || fields.back() != value_column)
        throw DomainError("bad CSV header on line " + std::to_string(line_no));
      saw_header = true;
      if (end == text.size()) break;
      continue;
    }
    if (fields.size() != axes.size() + 1)
      throw DomainError("bad CSV row on line " + std::to_string(line_no));
    std::vector<int> coords(axes.size());
    for (std::size_t i = 0; i < axes.size(); ++i) {
      auto res = std::from_chars(fields[i].data(), fields[i].data() + fields[i].size(), coords[i]);
      if (res.ec != std::errc{} || res.ptr != fields[i].data() + fields[i].size())
        throw DomainError("bad coordinate on line " + std::to_string(line_no));
    }
    Count value = 0;
    auto res = std::from_chars(fields.back().data(), fields.back().data() + fields.back().size(), value);
    if (res.ec != std::errc{} || res.ptr != fields.back().data() + fields.back().size())
      throw DomainError("bad value on line " + std::to_string(line_no));
    body.entries.emplace_back(cell_position(axes, coords), value);
    if (end == text.size()) break;
  }
  if (!saw_header) throw DomainError("missing CSV header");
  return body;
}

}  // namespace

std::string table_to_csv(const Table& x) {
  std::ostringstream out;
  write_csv_header(out, x.axes.size(), "count");
  for (std::size_t c = 0; c < x.counts.size(); ++c)
    if (x.counts[c] != 0) write_csv_row(out, cell_coords(x.axes, c), x.counts[c]);
  return out.str();
}

Table table_from_csv(std::string_view text, std::vector<int> axes) {
  CsvBody body = parse_csv_body(text, axes, "count");
  std::vector<Count> counts(cell_count(axes), 0);
  for (const auto& [pos, value] : body.entries) {
    if (value < 0) throw DomainError("table counts must be nonnegative");
    counts[pos] = value;
  }
  return Table(std::move(counts), std::move(axes));
}

std::string move_to_csv(const Move& z, std::span<const int> axes) {
  std::ostringstream out;
  write_csv_header(out, axes.size(), "delta");
  for (const auto& [pos, delta] : z.deltas()) write_csv_row(out, cell_coords(axes, pos), delta);
  return out.str();
}

Move move_from_csv(std::string_view text, std::span<const int> axes) {
  CsvBody body = parse_csv_body(text, axes, "delta");
  return Move(std::move(body.entries));
}

}  // namespace fiberwalk
