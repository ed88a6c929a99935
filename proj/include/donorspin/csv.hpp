#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace donorspin {

// CSV with '#'-prefixed header lines carrying column names and units, values
// rendered with 9 significant digits. Formatting is locale-independent so
// identical data gives identical bytes.
class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> columns, std::vector<std::string> comments = {});

  void add_row(const std::vector<double>& row);
  void write(const std::string& path) const;
  std::string str() const;

 private:
  std::vector<std::string> columns_;
  std::vector<std::string> comments_;
  std::vector<std::vector<double>> rows_;
};

// Compact binary grid: "DSGRID1\n", then uint32 nx, ny, ncomp, then the x
// axis (nx doubles), y axis (ny doubles) and ncomp row-major (y-outer)
// component blocks, all little-endian IEEE doubles.
void write_binary_grid(const std::string& path, const std::vector<double>& x,
                       const std::vector<double>& y,
                       const std::vector<const std::vector<double>*>& components);

std::uint64_t fnv1a(const void* data, std::size_t size, std::uint64_t seed = 1469598103934665603ull);
std::uint64_t fnv1a(const std::vector<double>& values);

std::string format_g9(double v);

}  // namespace donorspin
