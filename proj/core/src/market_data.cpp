#include "cartelscreen/market_data.hpp"

#include <charconv>

#include "cartelscreen/errors.hpp"

namespace cartelscreen {
namespace {

int parse_int_field(const std::string& text, std::size_t pos, std::size_t len) {
  int value = 0;
  const char* first = text.data() + pos;
  const char* last = first + len;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) {
    throw InputError("bad date: " + text);
  }
  return value;
}

}  // namespace

Date parse_date(const std::string& text) {
  if (text.size() != 10 || text[4] != '-' || text[7] != '-') {
    throw InputError("bad date: " + text);
  }
  const int y = parse_int_field(text, 0, 4);
  const int m = parse_int_field(text, 5, 2);
  const int d = parse_int_field(text, 8, 2);
  const Date date{std::chrono::year(y), std::chrono::month(unsigned(m)),
                  std::chrono::day(unsigned(d))};
  if (!date.ok()) throw InputError("bad date: " + text);
  return date;
}

std::string format_date(const Date& d) {
  char buf[16];
  const int y = int(d.year());
  const unsigned m = unsigned(d.month());
  const unsigned day = unsigned(d.day());
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", y, m, day);
  return buf;
}

int day_number(const Date& d) {
  return std::chrono::sys_days(d).time_since_epoch().count();
}

bool is_sunday(const Date& d) {
  return std::chrono::weekday(std::chrono::sys_days(d)) ==
         std::chrono::Sunday;
}

std::string market_name(Market m) { return m == Market::MSD ? "MSD" : "MGP"; }

std::string label_name(Label l) {
  switch (l) {
    case Label::Collusive: return "collusive";
    case Label::Competitive: return "competitive";
    default: return "unlabeled";
  }
}

Label parse_label(const std::string& text) {
  if (text == "collusive") return Label::Collusive;
  if (text == "competitive") return Label::Competitive;
  if (text == "unlabeled") return Label::Unlabeled;
  throw InputError("bad label: " + text);
}

std::string Tender::tender_id() const {
  char buf[4];
  std::snprintf(buf, sizeof buf, "%02d", hour);
  return zone + ":" + format_date(date) + ":" + buf;
}

bool tender_before(const Tender& a, const Tender& b) {
  const int da = day_number(a.date), db = day_number(b.date);
  if (da != db) return da < db;
  if (a.hour != b.hour) return a.hour < b.hour;
  return a.zone < b.zone;
}

TenderKey key_of(const Tender& t) {
  return TenderKey{t.zone, day_number(t.date), t.hour};
}

}  // namespace cartelscreen
