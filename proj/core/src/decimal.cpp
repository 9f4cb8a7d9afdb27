#include "cartelscreen/decimal.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>

namespace cartelscreen {

namespace {

// ~1e30 headroom; individual offers and their sums stay far below this.
const __int128 kMagnitudeCap = static_cast<__int128>(1e30L);

__int128 pow10_i128(int n) {
  __int128 r = 1;
  for (int i = 0; i < n; ++i) r *= 10;
  return r;
}

}  // namespace

void parse_decimal(std::string_view text, __int128& value, int& scale) {
  std::size_t i = 0;
  bool negative = false;
  if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
    negative = text[i] == '-';
    ++i;
  }
  __int128 mantissa = 0;
  int frac_digits = 0;
  bool seen_digit = false;
  bool in_fraction = false;
  for (; i < text.size(); ++i) {
    const char c = text[i];
    if (c >= '0' && c <= '9') {
      mantissa = mantissa * 10 + (c - '0');
      if (in_fraction) ++frac_digits;
      seen_digit = true;
      if (mantissa > kMagnitudeCap) {
        throw InputError("decimal out of range: " + std::string(text));
      }
    } else if (c == '.' && !in_fraction) {
      in_fraction = true;
    } else if ((c == 'e' || c == 'E') && seen_digit) {
      break;
    } else {
      throw InputError("malformed decimal: " + std::string(text));
    }
  }
  int exp10 = 0;
  if (i < text.size()) {  // exponent part
    ++i;
    int exp_sign = 1;
    if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
      if (text[i] == '-') exp_sign = -1;
      ++i;
    }
    if (i >= text.size()) throw InputError("malformed decimal: " + std::string(text));
    for (; i < text.size(); ++i) {
      if (text[i] < '0' || text[i] > '9') {
        throw InputError("malformed decimal: " + std::string(text));
      }
      exp10 = exp10 * 10 + (text[i] - '0');
      if (exp10 > 40) throw InputError("decimal out of range: " + std::string(text));
    }
    exp10 *= exp_sign;
  }
  if (!seen_digit) throw InputError("malformed decimal: " + std::string(text));

  int s = frac_digits - exp10;
  if (s < 0) {
    mantissa *= pow10_i128(-s);
    if (mantissa > kMagnitudeCap) {
      throw InputError("decimal out of range: " + std::string(text));
    }
    s = 0;
  }
  value = negative ? -mantissa : mantissa;
  scale = s;
}

void DecimalSum::rescale_to(int scale) {
  if (scale <= scale_) return;
  sum_ *= pow10_i128(scale - scale_);
  scale_ = scale;
}

void DecimalSum::add(std::string_view text) {
  __int128 v;
  int s;
  parse_decimal(text, v, s);
  rescale_to(s);
  if (s < scale_) v *= pow10_i128(scale_ - s);
  sum_ += v;
  ++count_;
}

double DecimalSum::value() const {
  long double x = static_cast<long double>(sum_);
  for (int i = 0; i < scale_; ++i) x /= 10.0L;
  return static_cast<double>(x);
}

std::string format_double(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

}  // namespace cartelscreen
