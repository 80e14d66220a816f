#pragma once

#include <initializer_list>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace mfgrid {

// 17 significant digits; round-trips every double.
std::string format_double(double x);

class CsvWriter {
 public:
  CsvWriter(std::ostream& os, std::initializer_list<std::string_view> header);

  CsvWriter& cell(double x);
  CsvWriter& cell(std::string_view s);
  CsvWriter& cell(long long x);
  void end_row();

 private:
  void sep();

  std::ostream& os_;
  std::size_t columns_;
  std::size_t in_row_ = 0;
};

}  // namespace mfgrid
