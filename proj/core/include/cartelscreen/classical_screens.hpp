#pragma once

#include <array>
#include <optional>
#include <vector>

namespace cartelscreen {

// Screens with an undefined value (zero denominator, too few offers) carry
// no value at all; nothing downstream ever sees a NaN.
using ScreenValue = std::optional<double>;

struct MomentScreens {
  ScreenValue var, cv, spread, kurt, skew;
};

struct LowBidScreens {
  ScreenValue diff, diffp, rd, rdnor, rdalt;
};

struct ClassicalScreens {
  ScreenValue var, cv, spread, kurt, diff, diffp, rd, rdnor, rdalt, skew, ks;
  double n_bids = 0;
};

inline constexpr std::array<const char*, 12> kClassicalNames = {
    "var", "cv",    "spread", "kurt", "diff", "diffp",
    "rd",  "rdnor", "rdalt",  "skew", "ks",   "n_bids"};

// var = sample variance (n-1), cv = sd/mean, spread = (max-min)/min,
// kurt = m4/m2^2 (raw moment ratio), skew = m3/m2^1.5.
MomentScreens moment_screens(const std::vector<double>& prices);

// Gaps around the lowest offer, with sorted prices b1 <= ... <= bn:
// diff = b2-b1, diffp = diff/b1, rd = diff/sd(losing offers b2..bn),
// rdnor = diff/mean adjacent gap among losing offers, rdalt = diff/mean
// adjacent gap over all offers.
LowBidScreens low_bid_screens(const std::vector<double>& prices);

// Sup distance between the ECDF of min-max normalized prices and the
// uniform CDF on [0,1].
ScreenValue ks_screen(const std::vector<double>& prices);

ClassicalScreens classical_screens(const std::vector<double>& prices);

// Values in kClassicalNames order.
std::array<ScreenValue, 12> classical_vector(const std::vector<double>& prices);

}  // namespace cartelscreen
