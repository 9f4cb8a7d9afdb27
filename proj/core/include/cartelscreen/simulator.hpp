#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cartelscreen/config.hpp"
#include "cartelscreen/dataset.hpp"
#include "cartelscreen/market_data.hpp"

namespace cartelscreen {

// Synthetic coupled MSD/MGP market. Hours are generated independently from
// per-hour derived seeds; all prices and quantities are drawn from lognormal
// laws and rounded to cents so the CSV text round-trips exactly.
//
// Regimes during the collusive window:
//   rotation              MSD bid rotation + economic withholding on MGP
//   withholding_physical  cartel absent from MGP, inflated MSD prices
//   withholding_economic  cartel priced above the clearing cap on MGP,
//                         inflated MSD prices
//   null                  competitive behavior, window labeled anyway
enum class Regime { Rotation, WithholdingPhysical, WithholdingEconomic, Null };

Regime parse_regime(const std::string& text);
std::string regime_name(Regime r);

struct SimConfig {
  std::string zone = "Z1";
  Date start_date{std::chrono::year(2016), std::chrono::month(1),
                  std::chrono::day(1)};
  int days = 24;
  int hours_per_day = 12;  // the traded peak block of each day
  int window_days = 6;     // collusive window = first window_days days
  Regime regime = Regime::Rotation;

  int n_units_mgp = 130;
  int n_units_msd = 8;
  int n_cartel = 4;

  double mgp_price_mu = 3.7;
  double mgp_price_sigma = 0.25;
  double mgp_qty_mu = 3.0;
  double mgp_qty_sigma = 0.5;
  double cartel_qty_scale = 10.0;
  double cap_mu = 3.78;
  double cap_sigma = 0.06;
  double quota = -1;  // accepted-quantity quota; negative = unlimited

  double msd_price_mu = 4.6;
  double msd_price_sigma = 0.25;
  double msd_participation = 0.95;
  double rotation_markup = 1.10;
  double rotation_jitter = 0.10;
  double cover_markup = 0.16;
  double cover_jitter = 0.55;
  double withhold_price_factor = 1.30;
  double msd_inflate = 1.30;

  std::uint64_t seed = 42;
};

SimConfig sim_config_from(const Config& cfg);

struct SimOutput {
  std::vector<Tender> msd;
  std::vector<Tender> mgp;  // offers carry accepted flags
};

// Tender labels are set from the window (collusive inside, competitive
// after), matching what labels.csv records.
SimOutput generate(const SimConfig& cfg);

// Writes msd.csv, mgp.csv and labels.csv under out_dir (created if needed).
void write_sim_dataset(const SimOutput& out, const std::string& out_dir);

// The DatasetSpec matching a generated dataset, window and cartel units
// included.
DatasetSpec sim_dataset_spec(const SimConfig& cfg, CartelType type);

std::string sim_unit_id(int index);  // G001, G002, ...

}  // namespace cartelscreen
