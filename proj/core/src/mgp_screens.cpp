#include "cartelscreen/mgp_screens.hpp"

#include "cartelscreen/decimal.hpp"
#include "cartelscreen/errors.hpp"

namespace cartelscreen {

WithholdingScreens mgp_screens(const Tender& tender) {
  if (tender.market != Market::MGP) {
    throw InputError("withholding screens need an MGP tender, got " +
                     tender.tender_id());
  }
  WithholdingScreens out;
  DecimalSum total, accepted;
  for (const Offer& o : tender.offers) {
    if (o.quantity_text.empty()) {
      throw InputError("offer without quantity in " + tender.tender_id());
    }
    out.n_offers += 1;
    total.add(o.quantity_text);
    if (o.accepted) {
      out.n_accepted += 1;
      accepted.add(o.quantity_text);
    }
  }
  out.total_qty = total.empty() ? 0.0 : total.value();
  out.accepted_qty = accepted.empty() ? 0.0 : accepted.value();
  return out;
}

std::array<double, 4> mgp_vector(const Tender& tender) {
  const WithholdingScreens s = mgp_screens(tender);
  return {s.n_offers, s.total_qty, s.n_accepted, s.accepted_qty};
}

}  // namespace cartelscreen
