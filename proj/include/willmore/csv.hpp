#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace willmore {

/// Shortest decimal string that reads back to the same double.
std::string format_double(double value);

/// Minimal CSV writer: a fixed header and rows of doubles. Refuses
/// non-finite values.
class CsvWriter {
 public:
  CsvWriter(std::ostream& out, std::vector<std::string> header);

  void row(const std::vector<double>& values);
  /// Row whose leading columns are preformatted text.
  void row(const std::vector<std::string>& leading, const std::vector<double>& values);

 private:
  std::ostream& out_;
  std::size_t columns_;
};

}  // namespace willmore
