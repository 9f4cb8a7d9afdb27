#include "cartelscreen/simulator.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <numeric>

#include "cartelscreen/csv.hpp"
#include "cartelscreen/errors.hpp"
#include "cartelscreen/rng.hpp"

namespace cartelscreen {
namespace {

// Cent rounding keeps the in-memory double and the printed "%.2f" text in
// exact agreement: round(x*100) is an exact integer k and k/100.0 is the
// correctly rounded double for the decimal k/100, which is what parsing the
// text gives back.
double round2(double x) { return std::round(x * 100.0) / 100.0; }

std::string text2(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.2f", x);
  return buf;
}

Offer make_offer(std::string unit, double price) {
  Offer o;
  o.unit_id = std::move(unit);
  o.price = round2(price);
  o.price_text = text2(o.price);
  return o;
}

Date date_plus(const Date& d, int days) {
  return Date{std::chrono::sys_days(d) + std::chrono::days(days)};
}

void gen_msd_hour(const SimConfig& cfg, bool collusive, int rotation_index,
                  Rng& rng, Tender& t) {
  if (collusive && cfg.regime == Regime::Rotation) {
    // Designated winner posts an inflated price, the other cartel members
    // cover strictly above it. Outsiders keep bidding competitively.
    const int winner = rotation_index % cfg.n_cartel;
    const double base = rng.lognormal(cfg.msd_price_mu, cfg.msd_price_sigma);
    const double pw = round2(base * cfg.rotation_markup *
                             std::exp(cfg.rotation_jitter * rng.normal()));
    for (int u = 0; u < cfg.n_cartel; ++u) {
      if (u == winner) {
        t.offers.push_back(make_offer(sim_unit_id(u), pw));
        continue;
      }
      double cover =
          round2(pw * (1.0 + cfg.cover_markup + cfg.cover_jitter * rng.uniform()));
      if (cover <= pw) cover = round2(pw + 0.01);
      t.offers.push_back(make_offer(sim_unit_id(u), cover));
    }
    for (int u = cfg.n_cartel; u < cfg.n_units_msd; ++u) {
      if (!rng.bernoulli(cfg.msd_participation)) continue;
      t.offers.push_back(make_offer(
          sim_unit_id(u), rng.lognormal(cfg.msd_price_mu, cfg.msd_price_sigma)));
    }
    return;
  }

  const bool inflate = collusive && (cfg.regime == Regime::WithholdingPhysical ||
                                     cfg.regime == Regime::WithholdingEconomic);
  for (int u = 0; u < cfg.n_units_msd; ++u) {
    if (inflate && u < cfg.n_cartel) {
      // Withholding on MGP shifts cartel sales here at inflated prices.
      t.offers.push_back(make_offer(
          sim_unit_id(u), cfg.msd_inflate * rng.lognormal(cfg.msd_price_mu,
                                                          cfg.msd_price_sigma)));
      continue;
    }
    if (!rng.bernoulli(cfg.msd_participation)) continue;
    t.offers.push_back(make_offer(
        sim_unit_id(u), rng.lognormal(cfg.msd_price_mu, cfg.msd_price_sigma)));
  }
}

void gen_mgp_hour(const SimConfig& cfg, bool collusive, Rng& rng, Tender& t) {
  const double cap = rng.lognormal(cfg.cap_mu, cfg.cap_sigma);
  const bool absent = collusive && cfg.regime == Regime::WithholdingPhysical;
  const bool priced_out =
      collusive && (cfg.regime == Regime::Rotation ||
                    cfg.regime == Regime::WithholdingEconomic);
  for (int u = 0; u < cfg.n_units_mgp; ++u) {
    const bool cartel = u < cfg.n_cartel;
    // Draws happen unconditionally so the same hour seed yields the same
    // competitive offers under every regime; the cartel branches only decide
    // what is done with them.
    double price = rng.lognormal(cfg.mgp_price_mu, cfg.mgp_price_sigma);
    double qty = rng.lognormal(cfg.mgp_qty_mu, cfg.mgp_qty_sigma);
    if (cartel && absent) continue;
    if (cartel && priced_out) price = cap * cfg.withhold_price_factor;
    if (cartel) qty *= cfg.cartel_qty_scale;
    Offer o = make_offer(sim_unit_id(u), price);
    o.quantity = round2(qty);
    o.quantity_text = text2(o.quantity);
    t.offers.push_back(std::move(o));
  }

  // Clearing: cheapest offers first, while below the hourly clearing cap and,
  // when a quota is set, while the accepted quantity is still under it.
  std::vector<std::size_t> order(t.offers.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&t](std::size_t a, std::size_t b) {
    const Offer& x = t.offers[a];
    const Offer& y = t.offers[b];
    if (x.price != y.price) return x.price < y.price;
    return x.unit_id < y.unit_id;
  });
  double cum = 0;
  for (const std::size_t i : order) {
    Offer& o = t.offers[i];
    if (o.price > cap) break;
    if (cfg.quota >= 0 && cum >= cfg.quota) break;
    o.accepted = true;
    cum += o.quantity;
  }
}

void check(bool ok, const std::string& what) {
  if (!ok) throw SpecError("simulator: " + what);
}

}  // namespace

Regime parse_regime(const std::string& text) {
  if (text == "rotation") return Regime::Rotation;
  if (text == "withholding_physical") return Regime::WithholdingPhysical;
  if (text == "withholding_economic") return Regime::WithholdingEconomic;
  if (text == "null") return Regime::Null;
  throw SpecError("unknown regime '" + text + "'");
}

std::string regime_name(Regime r) {
  switch (r) {
    case Regime::Rotation: return "rotation";
    case Regime::WithholdingPhysical: return "withholding_physical";
    case Regime::WithholdingEconomic: return "withholding_economic";
    case Regime::Null: return "null";
  }
  return "?";
}

SimConfig sim_config_from(const Config& cfg) {
  SimConfig s;
  s.zone = cfg.get_str("sim.zone", s.zone);
  s.start_date = parse_date(cfg.get_str("sim.start_date", format_date(s.start_date)));
  s.days = cfg.get_int("sim.days", s.days);
  s.hours_per_day = cfg.get_int("sim.hours_per_day", s.hours_per_day);
  s.window_days = cfg.get_int("sim.window_days", s.window_days);
  s.regime = parse_regime(cfg.get_str("sim.regime", regime_name(s.regime)));
  s.n_units_mgp = cfg.get_int("sim.mgp_units", s.n_units_mgp);
  s.n_units_msd = cfg.get_int("sim.msd_units", s.n_units_msd);
  s.n_cartel = cfg.get_int("sim.cartel_size", s.n_cartel);
  s.mgp_price_mu = cfg.get_double("sim.mgp_price_mu", s.mgp_price_mu);
  s.mgp_price_sigma = cfg.get_double("sim.mgp_price_sigma", s.mgp_price_sigma);
  s.mgp_qty_mu = cfg.get_double("sim.mgp_qty_mu", s.mgp_qty_mu);
  s.mgp_qty_sigma = cfg.get_double("sim.mgp_qty_sigma", s.mgp_qty_sigma);
  s.cartel_qty_scale = cfg.get_double("sim.cartel_qty_scale", s.cartel_qty_scale);
  s.cap_mu = cfg.get_double("sim.cap_mu", s.cap_mu);
  s.cap_sigma = cfg.get_double("sim.cap_sigma", s.cap_sigma);
  s.quota = cfg.get_double("sim.quota", s.quota);
  s.msd_price_mu = cfg.get_double("sim.msd_price_mu", s.msd_price_mu);
  s.msd_price_sigma = cfg.get_double("sim.msd_price_sigma", s.msd_price_sigma);
  s.msd_participation = cfg.get_double("sim.participation", s.msd_participation);
  s.rotation_markup = cfg.get_double("sim.rotation_markup", s.rotation_markup);
  s.rotation_jitter = cfg.get_double("sim.rotation_jitter", s.rotation_jitter);
  s.cover_markup = cfg.get_double("sim.cover_markup", s.cover_markup);
  s.cover_jitter = cfg.get_double("sim.cover_jitter", s.cover_jitter);
  s.withhold_price_factor = cfg.get_double("sim.withhold_factor", s.withhold_price_factor);
  s.msd_inflate = cfg.get_double("sim.msd_inflate", s.msd_inflate);
  s.seed = cfg.get_u64("sim.seed", s.seed);
  return s;
}

std::string sim_unit_id(int index) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "G%03d", index + 1);
  return buf;
}

SimOutput generate(const SimConfig& cfg) {
  check(cfg.days >= 2, "days must be at least 2");
  check(cfg.hours_per_day >= 1 && cfg.hours_per_day <= 24,
        "hours_per_day must be in 1..24");
  check(cfg.window_days >= 1 && cfg.window_days < cfg.days,
        "window_days must leave at least one competitive day");
  check(cfg.n_cartel >= 1, "cartel_size must be positive");
  check(cfg.n_cartel <= cfg.n_units_msd, "cartel_size exceeds msd_units");
  check(cfg.n_cartel <= cfg.n_units_mgp, "cartel_size exceeds mgp_units");
  check(cfg.n_units_mgp <= 999 && cfg.n_units_msd <= 999,
        "unit counts above 999 are not supported");
  check(cfg.msd_participation >= 0.0 && cfg.msd_participation <= 1.0,
        "participation must be in [0,1]");
  check(cfg.withhold_price_factor > 1.0, "withhold_factor must exceed 1");

  SimOutput out;
  int rotation_index = 0;
  for (int d = 0; d < cfg.days; ++d) {
    const Date date = date_plus(cfg.start_date, d);
    const bool collusive = d < cfg.window_days;
    const Label label = collusive ? Label::Collusive : Label::Competitive;
    for (int h = 1; h <= cfg.hours_per_day; ++h) {
      // Two streams per hour: MSD draw counts depend on the regime and must
      // not shift the MGP draws.
      Rng rng_msd(derive_seed(cfg.seed, seed_tag("hour_msd"),
                              static_cast<std::uint64_t>(d),
                              static_cast<std::uint64_t>(h)));
      Rng rng_mgp(derive_seed(cfg.seed, seed_tag("hour_mgp"),
                              static_cast<std::uint64_t>(d),
                              static_cast<std::uint64_t>(h)));
      Tender msd;
      msd.zone = cfg.zone;
      msd.date = date;
      msd.hour = h;
      msd.market = Market::MSD;
      msd.label = label;
      Tender mgp = msd;
      mgp.market = Market::MGP;
      gen_msd_hour(cfg, collusive, rotation_index, rng_msd, msd);
      gen_mgp_hour(cfg, collusive, rng_mgp, mgp);
      if (!msd.offers.empty()) out.msd.push_back(std::move(msd));
      out.mgp.push_back(std::move(mgp));
      if (collusive) ++rotation_index;
    }
  }
  return out;
}

void write_sim_dataset(const SimOutput& out, const std::string& out_dir) {
  namespace fs = std::filesystem;
  const fs::path dir(out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory " + out_dir + ": " + ec.message());

  std::vector<std::vector<std::string>> rows;
  for (const Tender& t : out.msd) {
    for (const Offer& o : t.offers) {
      rows.push_back({t.zone, format_date(t.date), std::to_string(t.hour),
                      o.unit_id, o.price_text});
    }
  }
  write_csv((dir / "msd.csv").string(),
            {"zone", "date", "hour", "unit_id", "price"}, rows);

  rows.clear();
  for (const Tender& t : out.mgp) {
    for (const Offer& o : t.offers) {
      rows.push_back({t.zone, format_date(t.date), std::to_string(t.hour),
                      o.unit_id, o.price_text, o.quantity_text,
                      o.accepted ? "1" : "0"});
    }
  }
  write_csv((dir / "mgp.csv").string(),
            {"zone", "date", "hour", "unit_id", "price", "quantity", "accepted"},
            rows);

  rows.clear();
  for (const Tender& t : out.mgp) {
    rows.push_back({t.zone, format_date(t.date), std::to_string(t.hour),
                    label_name(t.label)});
  }
  write_csv((dir / "labels.csv").string(), {"zone", "date", "hour", "label"},
            rows);
}

DatasetSpec sim_dataset_spec(const SimConfig& cfg, CartelType type) {
  DatasetSpec spec;
  spec.case_id = CaseId::Custom;
  spec.cartel_type = type;
  spec.windows = {
      DateRange{cfg.start_date, date_plus(cfg.start_date, cfg.window_days - 1)}};
  spec.day_filter = false;
  for (int u = 0; u < cfg.n_cartel; ++u) {
    spec.cartel_units.push_back(sim_unit_id(u));
  }
  spec.zones = {cfg.zone};
  spec.seed = cfg.seed;
  return spec;
}

}  // namespace cartelscreen
