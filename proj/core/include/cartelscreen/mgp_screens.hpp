#pragma once

#include <array>

#include "cartelscreen/market_data.hpp"

namespace cartelscreen {

struct WithholdingScreens {
  double n_offers = 0;
  double total_qty = 0;
  double n_accepted = 0;
  double accepted_qty = 0;
};

inline constexpr std::array<const char*, 4> kMgpNames = {
    "mgp_offers", "mgp_quantity", "mgp_accepted_offers",
    "mgp_accepted_quantity"};

// Zone-wide counts and quantity totals. Quantities are summed in exact
// decimal from the ingested text, so the result is independent of offer
// order.
WithholdingScreens mgp_screens(const Tender& tender);

std::array<double, 4> mgp_vector(const Tender& tender);

}  // namespace cartelscreen
