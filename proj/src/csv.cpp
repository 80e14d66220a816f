#include "mfgrid/csv.hpp"

#include <cstdio>
#include <stdexcept>

namespace mfgrid {

std::string format_double(double x) {
  char buf[32];
  const int n = std::snprintf(buf, sizeof buf, "%.17g", x);
  return std::string(buf, static_cast<std::size_t>(n));
}

CsvWriter::CsvWriter(std::ostream& os,
                     std::initializer_list<std::string_view> header)
    : os_(os), columns_(header.size()) {
  for (std::string_view h : header) cell(h);
  end_row();
}

void CsvWriter::sep() {
  if (in_row_ > 0) os_ << ',';
  ++in_row_;
}

CsvWriter& CsvWriter::cell(double x) {
  sep();
  os_ << format_double(x);
  return *this;
}

CsvWriter& CsvWriter::cell(std::string_view s) {
  sep();
  os_ << s;
  return *this;
}

CsvWriter& CsvWriter::cell(long long x) {
  sep();
  os_ << x;
  return *this;
}

void CsvWriter::end_row() {
  if (in_row_ != columns_) {
    throw std::logic_error("csv row has wrong number of cells");
  }
  os_ << '\n';
  in_row_ = 0;
}

}  // namespace mfgrid
