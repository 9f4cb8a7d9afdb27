#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace cartelscreen {

using Date = std::chrono::year_month_day;

Date parse_date(const std::string& text);          // YYYY-MM-DD
std::string format_date(const Date& d);
int day_number(const Date& d);                     // days since 1970-01-01
bool is_sunday(const Date& d);

enum class Market { MSD, MGP };
enum class Label { Collusive, Competitive, Unlabeled };

std::string market_name(Market m);
std::string label_name(Label l);
Label parse_label(const std::string& text);

struct Offer {
  std::string unit_id;
  double price = 0.0;
  std::string price_text;     // original decimal string, kept for exact dedup
  double quantity = 0.0;      // MGP only
  std::string quantity_text;  // MGP only, kept for exact quantity sums
  bool accepted = false;      // MGP only
};

struct Tender {
  std::string zone;
  Date date{};
  int hour = 0;  // 1..24
  Market market = Market::MSD;
  std::vector<Offer> offers;
  Label label = Label::Unlabeled;

  std::string tender_id() const;  // "zone:YYYY-MM-DD:HH"
};

// Chronological-then-zone ordering used wherever a stable tender order is
// needed (dedup representatives, dataset assembly, CSV export).
bool tender_before(const Tender& a, const Tender& b);

struct TenderKey {
  std::string zone;
  int day = 0;
  int hour = 0;
  auto operator<=>(const TenderKey&) const = default;
};

TenderKey key_of(const Tender& t);

}  // namespace cartelscreen
