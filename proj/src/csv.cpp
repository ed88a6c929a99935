#include "donorspin/csv.hpp"

#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace donorspin {

std::string format_g9(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

CsvWriter::CsvWriter(std::vector<std::string> columns, std::vector<std::string> comments)
    : columns_(std::move(columns)), comments_(std::move(comments)) {}

void CsvWriter::add_row(const std::vector<double>& row) {
  if (row.size() != columns_.size())
    throw std::invalid_argument("CsvWriter: row width mismatch");
  rows_.push_back(row);
}

std::string CsvWriter::str() const {
  std::ostringstream os;
  for (const auto& c : comments_) os << "# " << c << "\n";
  os << "# ";
  for (std::size_t i = 0; i < columns_.size(); ++i)
    os << columns_[i] << (i + 1 < columns_.size() ? "," : "\n");
  for (const auto& row : rows_) {
    for (std::size_t i = 0; i < row.size(); ++i)
      os << format_g9(row[i]) << (i + 1 < row.size() ? "," : "\n");
  }
  return os.str();
}

void CsvWriter::write(const std::string& path) const {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  f << str();
}

void write_binary_grid(const std::string& path, const std::vector<double>& x,
                       const std::vector<double>& y,
                       const std::vector<const std::vector<double>*>& components) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  f.write("DSGRID1\n", 8);
  const std::uint32_t nx = static_cast<std::uint32_t>(x.size());
  const std::uint32_t ny = static_cast<std::uint32_t>(y.size());
  const std::uint32_t nc = static_cast<std::uint32_t>(components.size());
  f.write(reinterpret_cast<const char*>(&nx), 4);
  f.write(reinterpret_cast<const char*>(&ny), 4);
  f.write(reinterpret_cast<const char*>(&nc), 4);
  auto dump = [&](const std::vector<double>& v) {
    f.write(reinterpret_cast<const char*>(v.data()), static_cast<std::streamsize>(8 * v.size()));
  };
  dump(x);
  dump(y);
  for (const auto* c : components) {
    if (c->size() != x.size() * y.size())
      throw std::invalid_argument("write_binary_grid: component size mismatch");
    dump(*c);
  }
}

std::uint64_t fnv1a(const void* data, std::size_t size, std::uint64_t seed) {
  const auto* p = static_cast<const unsigned char*>(data);
  std::uint64_t h = seed;
  for (std::size_t i = 0; i < size; ++i) {
    h ^= p[i];
    h *= 1099511628211ull;
  }
  return h;
}

std::uint64_t fnv1a(const std::vector<double>& values) {
  return fnv1a(values.data(), values.size() * sizeof(double));
}

}  // namespace donorspin
