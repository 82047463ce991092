#include "relaynet/csv.hpp"

#include <array>
#include <charconv>
#include <stdexcept>

namespace relaynet {

void Table::add(std::vector<Cell> row) {
  if (row.size() != header.size()) throw std::logic_error("Table::add: row width mismatch");
  rows.push_back(std::move(row));
}

std::string format_double(double v) {
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v,
                                 std::chars_format::general, 17);
  return std::string(buf.data(), res.ptr);
}

namespace {

struct CellWriter {
  std::ostream& os;
  void operator()(double v) const { os << format_double(v); }
  void operator()(std::int64_t v) const {
    std::array<char, 24> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    os.write(buf.data(), res.ptr - buf.data());
  }
  void operator()(const std::string& s) const { os << s; }
};

}  // namespace

void write_csv(std::ostream& os, const Table& table) {
  for (std::size_t k = 0; k < table.header.size(); ++k) os << (k ? "," : "") << table.header[k];
  os << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t k = 0; k < row.size(); ++k) {
      if (k) os << ',';
      std::visit(CellWriter{os}, row[k]);
    }
    os << '\n';
  }
}

}  // namespace relaynet
