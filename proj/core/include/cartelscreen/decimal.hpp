#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "cartelscreen/errors.hpp"

namespace cartelscreen {

// Exact accumulator for decimal strings ("12", "3.45", "1.2e3"). Published
// offer quantities are short decimals; summing them as scaled integers makes
// totals independent of addition order. Converted to double once at the end.
class DecimalSum {
 public:
  void add(std::string_view text);
  double value() const;
  bool empty() const { return count_ == 0; }

 private:
  void rescale_to(int scale);

  __int128 sum_ = 0;
  int scale_ = 0;  // digits after the decimal point represented in sum_
  long count_ = 0;
};

// Parses a plain decimal (optionally with exponent) exactly into value*10^-scale.
// Throws InputError on malformed input or magnitudes outside the accumulator range.
void parse_decimal(std::string_view text, __int128& value, int& scale);

// Shortest round-trip formatting (std::to_chars) shared by all CSV writers.
std::string format_double(double x);

}  // namespace cartelscreen
