#include "willmore/csv.hpp"

#include <charconv>
#include <cmath>
#include <ostream>

#include "willmore/types.hpp"

namespace willmore {

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

CsvWriter::CsvWriter(std::ostream& out, std::vector<std::string> header)
    : out_(out), columns_(header.size()) {
  for (std::size_t i = 0; i < header.size(); ++i) out_ << (i ? "," : "") << header[i];
  out_ << '\n';
}

void CsvWriter::row(const std::vector<double>& values) { row({}, values); }

void CsvWriter::row(const std::vector<std::string>& leading, const std::vector<double>& values) {
  if (leading.size() + values.size() != columns_) throw Error("csv: row width does not match header");
  bool first = true;
  for (const auto& s : leading) {
    out_ << (first ? "" : ",") << s;
    first = false;
  }
  for (double v : values) {
    if (!std::isfinite(v)) throw Error("csv: refusing to write a non-finite value");
    out_ << (first ? "" : ",") << format_double(v);
    first = false;
  }
  out_ << '\n';
}

}  // namespace willmore
