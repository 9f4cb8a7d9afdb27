#include "cartelscreen/classical_screens.hpp"

#include <algorithm>
#include <cmath>

#include "cartelscreen/errors.hpp"

namespace cartelscreen {
namespace {

double mean_of(const std::vector<double>& v) {
  double s = 0;
  for (const double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double central_moment(const std::vector<double>& v, double mu, int k) {
  double s = 0;
  for (const double x : v) s += std::pow(x - mu, k);
  return s / static_cast<double>(v.size());
}

}  // namespace

MomentScreens moment_screens(const std::vector<double>& prices) {
  if (prices.empty()) throw InputError("moment screens: no prices");
  MomentScreens out;
  const std::size_t n = prices.size();
  if (n < 2) return out;

  const double mu = mean_of(prices);
  double ss = 0;
  for (const double x : prices) ss += (x - mu) * (x - mu);
  const double sample_var = ss / static_cast<double>(n - 1);
  out.var = sample_var;
  if (mu != 0) out.cv = std::sqrt(sample_var) / mu;
  const auto [lo, hi] = std::minmax_element(prices.begin(), prices.end());
  if (*lo != 0) out.spread = (*hi - *lo) / *lo;

  const double m2 = ss / static_cast<double>(n);
  if (n >= 3 && m2 != 0) {
    out.skew = central_moment(prices, mu, 3) / std::pow(m2, 1.5);
  }
  if (n >= 4 && m2 != 0) {
    out.kurt = central_moment(prices, mu, 4) / (m2 * m2);
  }
  return out;
}

LowBidScreens low_bid_screens(const std::vector<double>& prices) {
  LowBidScreens out;
  const std::size_t n = prices.size();
  if (n < 2) return out;
  std::vector<double> b = prices;
  std::sort(b.begin(), b.end());

  const double diff = b[1] - b[0];
  out.diff = diff;
  if (b[0] != 0) out.diffp = diff / b[0];

  if (n >= 4) {
    // sample sd of the losing offers b2..bn
    double mu = 0;
    for (std::size_t i = 1; i < n; ++i) mu += b[i];
    mu /= static_cast<double>(n - 1);
    double ss = 0;
    for (std::size_t i = 1; i < n; ++i) ss += (b[i] - mu) * (b[i] - mu);
    const double sd = std::sqrt(ss / static_cast<double>(n - 2));
    if (sd != 0) out.rd = diff / sd;
  }

  if (n >= 3) {
    const double gap_mean =
        (b[n - 1] - b[1]) / static_cast<double>(n - 2);  // losing-offer gaps
    if (gap_mean != 0) out.rdnor = diff / gap_mean;
  }

  const double all_gap_mean = (b[n - 1] - b[0]) / static_cast<double>(n - 1);
  if (all_gap_mean != 0) out.rdalt = diff / all_gap_mean;
  return out;
}

ScreenValue ks_screen(const std::vector<double>& prices) {
  const std::size_t n = prices.size();
  if (n < 2) return std::nullopt;
  std::vector<double> b = prices;
  std::sort(b.begin(), b.end());
  const double lo = b.front(), hi = b.back();
  if (lo == hi) return std::nullopt;

  double d = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double u = (b[i] - lo) / (hi - lo);
    const double above = static_cast<double>(i + 1) / static_cast<double>(n) - u;
    const double below = u - static_cast<double>(i) / static_cast<double>(n);
    d = std::max({d, above, below});
  }
  return d;
}

ClassicalScreens classical_screens(const std::vector<double>& prices) {
  if (prices.empty()) throw InputError("classical screens: no prices");
  ClassicalScreens out;
  const MomentScreens m = moment_screens(prices);
  const LowBidScreens l = low_bid_screens(prices);
  out.var = m.var;
  out.cv = m.cv;
  out.spread = m.spread;
  out.kurt = m.kurt;
  out.skew = m.skew;
  out.diff = l.diff;
  out.diffp = l.diffp;
  out.rd = l.rd;
  out.rdnor = l.rdnor;
  out.rdalt = l.rdalt;
  out.ks = ks_screen(prices);
  out.n_bids = static_cast<double>(prices.size());
  return out;
}

std::array<ScreenValue, 12> classical_vector(const std::vector<double>& prices) {
  const ClassicalScreens s = classical_screens(prices);
  return {s.var, s.cv,    s.spread, s.kurt, s.diff, s.diffp,
          s.rd,  s.rdnor, s.rdalt,  s.skew, s.ks,   s.n_bids};
}

}  // namespace cartelscreen
