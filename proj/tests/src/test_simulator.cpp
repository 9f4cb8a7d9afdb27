#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cartelscreen/csv.hpp"
#include "cartelscreen/dataset.hpp"
#include "cartelscreen/decimal.hpp"
#include "cartelscreen/errors.hpp"
#include "cartelscreen/figures.hpp"
#include "cartelscreen/mgp_screens.hpp"
#include "cartelscreen/simulator.hpp"
#include "test_helpers.hpp"

using namespace cartelscreen;

namespace {

// Small market that still has outsiders on both sides.
SimConfig small_config(Regime regime, std::uint64_t seed = 42) {
  SimConfig cfg;
  cfg.regime = regime;
  cfg.days = 6;
  cfg.hours_per_day = 3;
  cfg.window_days = 2;
  cfg.n_units_mgp = 10;
  cfg.n_units_msd = 6;
  cfg.n_cartel = 3;
  cfg.msd_participation = 1.0;  // deterministic tender sizes
  cfg.seed = seed;
  return cfg;
}

std::string dump(const SimOutput& out) {
  std::ostringstream os;
  for (const std::vector<Tender>* side : {&out.msd, &out.mgp}) {
    for (const Tender& t : *side) {
      os << t.tender_id() << '|' << label_name(t.label);
      for (const Offer& o : t.offers) {
        os << ';' << o.unit_id << ',' << o.price_text << ',' << o.quantity_text
           << ',' << o.accepted;
      }
      os << '\n';
    }
  }
  return os.str();
}

bool same_offer(const Offer& a, const Offer& b) {
  return a.unit_id == b.unit_id && a.price == b.price &&
         a.price_text == b.price_text && a.quantity == b.quantity &&
         a.quantity_text == b.quantity_text && a.accepted == b.accepted;
}

bool is_cartel_unit(const SimConfig& cfg, const std::string& unit) {
  for (int u = 0; u < cfg.n_cartel; ++u) {
    if (unit == sim_unit_id(u)) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("regime names round-trip and bad names are rejected") {
  for (Regime r : {Regime::Rotation, Regime::WithholdingPhysical,
                   Regime::WithholdingEconomic, Regime::Null}) {
    CHECK(parse_regime(regime_name(r)) == r);
  }
  CHECK(regime_name(Regime::WithholdingEconomic) == "withholding_economic");
  CHECK_THROWS_AS(parse_regime("collusion"), SpecError);
  CHECK_THROWS_AS(parse_regime(""), SpecError);
}

TEST_CASE("unit ids are zero-padded") {
  CHECK(sim_unit_id(0) == "G001");
  CHECK(sim_unit_id(9) == "G010");
  CHECK(sim_unit_id(129) == "G130");
}

TEST_CASE("generate covers every hour with labeled, ordered tenders") {
  const SimConfig cfg = small_config(Regime::Null);
  const SimOutput out = generate(cfg);

  CHECK(out.mgp.size() == 18);  // 6 days x 3 hours
  CHECK(out.msd.size() == 18);  // participation 1 keeps every hour
  for (std::size_t i = 0; i < out.mgp.size(); ++i) {
    const Tender& g = out.mgp[i];
    const Tender& s = out.msd[i];
    CHECK(g.market == Market::MGP);
    CHECK(s.market == Market::MSD);
    CHECK(g.zone == "Z1");
    CHECK(g.tender_id() == s.tender_id());
    const bool in_window = i / 3 < 2;  // first two days
    const Label want = in_window ? Label::Collusive : Label::Competitive;
    CHECK(g.label == want);
    CHECK(s.label == want);
    CHECK(g.offers.size() == 10);
    CHECK(s.offers.size() == 6);
    if (i > 0) CHECK(tender_before(out.mgp[i - 1], g));
  }
  // prices land exactly on cents
  for (const Offer& o : out.mgp.front().offers) {
    CHECK(o.price == std::round(o.price * 100) / 100);
    CHECK(o.quantity == std::round(o.quantity * 100) / 100);
  }
}

TEST_CASE("generate is deterministic in the seed") {
  const SimConfig cfg = small_config(Regime::Rotation, 7);
  CHECK(dump(generate(cfg)) == dump(generate(cfg)));
  SimConfig other = cfg;
  other.seed = 8;
  CHECK(dump(generate(cfg)) != dump(generate(other)));
}

TEST_CASE("written dataset ingests back bit-exactly") {
  const SimConfig cfg = small_config(Regime::WithholdingEconomic, 11);
  const SimOutput out = generate(cfg);

  testutil::TempDir dir("simrt");
  write_sim_dataset(out, dir.root());
  REQUIRE(std::filesystem::exists(dir.path("msd.csv")));
  REQUIRE(std::filesystem::exists(dir.path("mgp.csv")));
  REQUIRE(std::filesystem::exists(dir.path("labels.csv")));

  const std::vector<Tender> msd = ingest(dir.path("msd.csv"), Market::MSD);
  std::vector<Tender> mgp = ingest(dir.path("mgp.csv"), Market::MGP);
  REQUIRE(msd.size() == out.msd.size());
  REQUIRE(mgp.size() == out.mgp.size());
  for (std::size_t i = 0; i < msd.size(); ++i) {
    CHECK(msd[i].tender_id() == out.msd[i].tender_id());
    REQUIRE(msd[i].offers.size() == out.msd[i].offers.size());
    for (std::size_t k = 0; k < msd[i].offers.size(); ++k) {
      CHECK(same_offer(msd[i].offers[k], out.msd[i].offers[k]));
    }
  }
  for (std::size_t i = 0; i < mgp.size(); ++i) {
    REQUIRE(mgp[i].offers.size() == out.mgp[i].offers.size());
    for (std::size_t k = 0; k < mgp[i].offers.size(); ++k) {
      CHECK(same_offer(mgp[i].offers[k], out.mgp[i].offers[k]));
    }
  }

  // labels.csv restores the generated labels exactly
  const std::map<TenderKey, Label> labels = load_labels(dir.path("labels.csv"));
  CHECK(labels.size() == out.mgp.size());
  set_labels(mgp, labels);
  for (std::size_t i = 0; i < mgp.size(); ++i) {
    CHECK(mgp[i].label == out.mgp[i].label);
  }
}

TEST_CASE("physical withholding removes the cartel from MGP in the window") {
  const SimConfig cfg = small_config(Regime::WithholdingPhysical);
  const SimOutput out = generate(cfg);

  for (std::size_t i = 0; i < out.mgp.size(); ++i) {
    const Tender& t = out.mgp[i];
    std::size_t cartel_offers = 0;
    for (const Offer& o : t.offers) {
      if (is_cartel_unit(cfg, o.unit_id)) ++cartel_offers;
    }
    if (t.label == Label::Collusive) {
      CHECK(t.offers.size() == 7);  // 10 units minus 3 absentees
      CHECK(cartel_offers == 0);
    } else {
      CHECK(t.offers.size() == 10);
      CHECK(cartel_offers == 3);
    }
  }

  // the displaced sales show up as inflated MSD prices
  double cartel_sum = 0, outsider_sum = 0;
  std::size_t cartel_n = 0, outsider_n = 0;
  for (const Tender& t : out.msd) {
    if (t.label != Label::Collusive) continue;
    std::set<std::string> units;
    for (const Offer& o : t.offers) {
      units.insert(o.unit_id);
      if (is_cartel_unit(cfg, o.unit_id)) {
        cartel_sum += o.price;
        ++cartel_n;
      } else {
        outsider_sum += o.price;
        ++outsider_n;
      }
    }
    for (int u = 0; u < cfg.n_cartel; ++u) {
      CHECK(units.count(sim_unit_id(u)) == 1);  // no participation gate
    }
  }
  REQUIRE(cartel_n > 0);
  REQUIRE(outsider_n > 0);
  CHECK(cartel_sum / cartel_n > 1.1 * (outsider_sum / outsider_n));
}

TEST_CASE("economic withholding prices the cartel out without moving others") {
  const SimConfig base = small_config(Regime::Null, 5);
  SimConfig econ_cfg = base;
  econ_cfg.regime = Regime::WithholdingEconomic;
  const SimOutput null_out = generate(base);
  const SimOutput econ_out = generate(econ_cfg);
  REQUIRE(null_out.mgp.size() == econ_out.mgp.size());

  double qty_null = 0, qty_econ = 0;
  for (std::size_t i = 0; i < econ_out.mgp.size(); ++i) {
    const Tender& e = econ_out.mgp[i];
    const Tender& n = null_out.mgp[i];
    REQUIRE(e.offers.size() == n.offers.size());
    if (e.label != Label::Collusive) {
      // outside the window the regimes coincide draw for draw
      for (std::size_t k = 0; k < e.offers.size(); ++k) {
        CHECK(same_offer(e.offers[k], n.offers[k]));
      }
      continue;
    }
    double cartel_price = -1;
    double max_accepted = -1, hour_null = 0, hour_econ = 0;
    for (std::size_t k = 0; k < e.offers.size(); ++k) {
      const Offer& eo = e.offers[k];
      if (is_cartel_unit(base, eo.unit_id)) {
        // one shared withheld price per hour, never cleared
        if (cartel_price < 0) cartel_price = eo.price;
        CHECK(eo.price == cartel_price);
        CHECK_FALSE(eo.accepted);
        // quantity draw is the shared competitive one
        CHECK(eo.quantity == n.offers[k].quantity);
      } else {
        CHECK(same_offer(eo, n.offers[k]));
      }
      if (eo.accepted) {
        max_accepted = std::max(max_accepted, eo.price);
        hour_econ += eo.quantity;
      }
      if (n.offers[k].accepted) hour_null += n.offers[k].quantity;
    }
    REQUIRE(cartel_price > 0);
    if (max_accepted >= 0) CHECK(cartel_price > max_accepted);
    CHECK(hour_econ <= hour_null);
    qty_null += hour_null;
    qty_econ += hour_econ;
  }
  CHECK(qty_econ < qty_null);  // scaled cartel quantity is withheld
}

TEST_CASE("rotation cycles the designated MSD winner through the cartel") {
  SimConfig cfg = small_config(Regime::Rotation, 3);
  cfg.days = 10;
  cfg.hours_per_day = 1;
  cfg.window_days = 8;
  cfg.n_cartel = 4;
  const SimOutput out = generate(cfg);
  REQUIRE(out.msd.size() == 10);

  for (int d = 0; d < 8; ++d) {
    const Tender& t = out.msd[static_cast<std::size_t>(d)];
    REQUIRE(t.label == Label::Collusive);
    // cartel offers come first, in unit order
    REQUIRE(t.offers.size() >= 4);
    int winner = -1;
    double best = 0;
    for (int u = 0; u < 4; ++u) {
      CHECK(t.offers[static_cast<std::size_t>(u)].unit_id == sim_unit_id(u));
      const double p = t.offers[static_cast<std::size_t>(u)].price;
      if (winner < 0 || p < best) {
        winner = u;
        best = p;
      }
    }
    CHECK(winner == d % 4);  // one win per member, in turn
    for (int u = 0; u < 4; ++u) {
      if (u != winner) {
        CHECK(t.offers[static_cast<std::size_t>(u)].price > best);
      }
    }
  }

  // on MGP the rotation window behaves like economic withholding
  for (const Tender& t : out.mgp) {
    if (t.label != Label::Collusive) continue;
    for (const Offer& o : t.offers) {
      if (is_cartel_unit(cfg, o.unit_id)) CHECK_FALSE(o.accepted);
    }
  }
}

TEST_CASE("null regime keeps the cartel competitive inside the window") {
  const SimConfig cfg = small_config(Regime::Null);
  const SimOutput out = generate(cfg);

  std::size_t cartel_accepted = 0;
  double cartel_qty = 0, outsider_qty = 0;
  std::size_t cartel_n = 0, outsider_n = 0;
  for (const Tender& t : out.mgp) {
    for (const Offer& o : t.offers) {
      if (is_cartel_unit(cfg, o.unit_id)) {
        if (t.label == Label::Collusive && o.accepted) ++cartel_accepted;
        cartel_qty += o.quantity;
        ++cartel_n;
      } else {
        outsider_qty += o.quantity;
        ++outsider_n;
      }
    }
  }
  CHECK(cartel_accepted > 0);
  // cartel units are larger by construction under every regime
  CHECK(cartel_qty / cartel_n > 3 * (outsider_qty / outsider_n));
}

TEST_CASE("clearing quota caps the accepted quantity") {
  SimConfig cfg = small_config(Regime::Null, 21);

  SUBCASE("zero quota accepts nothing") {
    cfg.quota = 0;
    for (const Tender& t : generate(cfg).mgp) {
      for (const Offer& o : t.offers) CHECK_FALSE(o.accepted);
    }
  }

  SUBCASE("finite quota accepts a cheapest-first prefix") {
    const SimOutput unlimited = generate(cfg);
    cfg.quota = 5.0;
    const SimOutput capped = generate(cfg);
    REQUIRE(capped.mgp.size() == unlimited.mgp.size());
    for (std::size_t i = 0; i < capped.mgp.size(); ++i) {
      const Tender& c = capped.mgp[i];
      const Tender& u = unlimited.mgp[i];
      double sum = 0, last_qty = 0, last_price = -1;
      for (std::size_t k = 0; k < c.offers.size(); ++k) {
        CHECK(c.offers[k].price == u.offers[k].price);
        if (!c.offers[k].accepted) continue;
        CHECK(u.offers[k].accepted);  // subset of the unlimited clearing
        sum += c.offers[k].quantity;
        if (c.offers[k].price > last_price) {
          last_price = c.offers[k].price;
          last_qty = c.offers[k].quantity;
        }
      }
      if (sum > 0) CHECK(sum - last_qty < 5.0);  // quota held before the last fill
    }
  }
}

TEST_CASE("config validation rejects impossible markets") {
  auto expect_reject = [](SimConfig cfg) {
    CHECK_THROWS_AS(generate(cfg), SpecError);
  };
  SimConfig cfg = small_config(Regime::Null);

  SimConfig c = cfg;
  c.days = 1;
  expect_reject(c);
  c = cfg;
  c.hours_per_day = 25;
  expect_reject(c);
  c = cfg;
  c.window_days = c.days;  // no competitive day left
  expect_reject(c);
  c = cfg;
  c.n_cartel = 0;
  expect_reject(c);
  c = cfg;
  c.n_cartel = c.n_units_msd + 1;
  expect_reject(c);
  c = cfg;
  c.msd_participation = 1.5;
  expect_reject(c);
  c = cfg;
  c.withhold_price_factor = 1.0;
  expect_reject(c);
}

TEST_CASE("generated data feeds the dataset pipeline end to end") {
  const SimConfig cfg = small_config(Regime::WithholdingPhysical, 13);
  const SimOutput out = generate(cfg);
  const DatasetSpec spec = sim_dataset_spec(cfg, CartelType::Incomplete);

  CHECK(spec.case_id == CaseId::Custom);
  CHECK(spec.cartel_type == CartelType::Incomplete);
  REQUIRE(spec.windows.size() == 1);
  CHECK(format_date(spec.windows[0].begin) == "2016-01-01");
  CHECK(format_date(spec.windows[0].end) == "2016-01-02");
  CHECK_FALSE(spec.day_filter);
  CHECK(spec.cartel_units == std::vector<std::string>{"G001", "G002", "G003"});
  CHECK(spec.zones == std::vector<std::string>{"Z1"});
  CHECK(spec.seed == cfg.seed);

  const LabeledDataset ds = build_dataset(out.msd, out.mgp, spec);
  CHECK(ds.provenance.labeled_collusive == 6);     // 2 days x 3 hours
  CHECK(ds.provenance.labeled_competitive == 12);  // everything after
  CHECK(ds.provenance.labeled_excluded == 0);
  CHECK(ds.records.size() == 12);  // undersampled to 6 + 6
  std::size_t collusive = 0;
  for (const Record& r : ds.records) {
    if (r.label == Label::Collusive) ++collusive;
    CHECK(r.mgp.offers.size() ==
          (r.label == Label::Collusive ? 7u : 10u));  // absentee cartel
    CHECK(r.msd.tender_id() == r.mgp.tender_id());
  }
  CHECK(collusive == 6);
}

TEST_CASE("hourly series extracts one MGP screen per tender") {
  std::vector<Tender> mgp;
  mgp.push_back(testutil::mgp_tender("Z1", "2016-03-05", 7,
                                     {{2.5, true}, {3.5, false}, {1.0, true}}));
  mgp.push_back(testutil::mgp_tender("Z1", "2016-03-05", 12, {{4.0, true}}));
  mgp[0].label = Label::Collusive;
  mgp[1].label = Label::Competitive;

  const auto series = hourly_series(mgp, "mgp_accepted_quantity");
  REQUIRE(series.size() == 2);
  CHECK(series[0].timestamp == "2016-03-05 07");
  CHECK(series[0].value == 3.5);
  CHECK(series[0].label == Label::Collusive);
  CHECK(series[1].timestamp == "2016-03-05 12");
  CHECK(series[1].value == 4.0);
  CHECK(series[1].label == Label::Competitive);

  CHECK(hourly_series(mgp, "mgp_offers")[0].value == 3.0);
  CHECK(hourly_series(mgp, "mgp_quantity")[0].value == 7.0);
  CHECK(hourly_series(mgp, "mgp_accepted_offers")[0].value == 2.0);
  CHECK_THROWS_WITH_AS(hourly_series(mgp, "var"),
                       doctest::Contains("unknown series metric"), InputError);
}

TEST_CASE("hourly series CSV round-trips") {
  std::vector<Tender> mgp;
  mgp.push_back(testutil::mgp_tender("Z1", "2016-03-05", 7,
                                     {{2.5, true}, {3.5, false}}));
  mgp[0].label = Label::Collusive;
  const auto series = hourly_series(mgp, "mgp_quantity");

  testutil::TempDir dir("series");
  export_hourly_series(series, dir.path("series.csv"));
  const CsvTable table = read_csv(dir.path("series.csv"));
  REQUIRE(table.header == std::vector<std::string>{"timestamp", "value", "label"});
  REQUIRE(table.rows.size() == 1);
  CHECK(table.rows[0][0] == "2016-03-05 07");
  CHECK(table.rows[0][1] == "6");
  CHECK(table.rows[0][2] == "collusive");
}

TEST_CASE("series SVG marks every point") {
  std::vector<Tender> mgp;
  for (int h = 1; h <= 5; ++h) {
    mgp.push_back(testutil::mgp_tender("Z1", "2016-03-05", h,
                                       {{1.0 * h, true}, {2.0, false}}));
    mgp.back().label = h <= 2 ? Label::Collusive : Label::Competitive;
  }
  const auto series = hourly_series(mgp, "mgp_quantity");

  testutil::TempDir dir("svg");
  export_series_svg(series, "mgp_quantity", dir.path("fig.svg"));
  const std::string svg = testutil::read_file(dir.path("fig.svg"));
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("</svg>") != std::string::npos);
  CHECK(svg.find("mgp_quantity by hour") != std::string::npos);
  std::size_t circles = 0;
  for (std::size_t at = svg.find("<circle"); at != std::string::npos;
       at = svg.find("<circle", at + 1)) {
    ++circles;
  }
  CHECK(circles == series.size() + 2);  // points plus two legend keys
}

TEST_CASE("label files validate their shape") {
  testutil::TempDir dir("labels");

  SUBCASE("labels apply by zone, date and hour") {
    testutil::write_file(dir.path("ok.csv"),
                         "zone,date,hour,label\n"
                         "Z1,2016-03-05,7,collusive\n"
                         "Z1,2016-03-05,8,competitive\n");
    const auto labels = load_labels(dir.path("ok.csv"));
    CHECK(labels.size() == 2);
    std::vector<Tender> ts;
    ts.push_back(testutil::mgp_tender("Z1", "2016-03-05", 7, {{1.0, true}}));
    ts.push_back(testutil::mgp_tender("Z1", "2016-03-05", 9, {{1.0, true}}));
    ts[0].label = Label::Competitive;  // stale label gets overwritten
    set_labels(ts, labels);
    CHECK(ts[0].label == Label::Collusive);
    CHECK(ts[1].label == Label::Unlabeled);  // no entry for hour 9
  }

  SUBCASE("missing column") {
    testutil::write_file(dir.path("bad.csv"), "zone,date,hour\nZ1,2016-03-05,7\n");
    CHECK_THROWS_AS(load_labels(dir.path("bad.csv")), SchemaError);
  }

  SUBCASE("unparseable fields carry line numbers") {
    testutil::write_file(dir.path("bad.csv"),
                         "zone,date,hour,label\n"
                         "Z1,2016-13-40,7,collusive\n");
    CHECK_THROWS_WITH_AS(load_labels(dir.path("bad.csv")),
                         doctest::Contains("line 2"), RowError);
    testutil::write_file(dir.path("bad2.csv"),
                         "zone,date,hour,label\n"
                         "Z1,2016-03-05,xx,collusive\n");
    CHECK_THROWS_AS(load_labels(dir.path("bad2.csv")), RowError);
    testutil::write_file(dir.path("bad3.csv"),
                         "zone,date,hour,label\n"
                         "Z1,2016-03-05,7,maybe\n");
    CHECK_THROWS_AS(load_labels(dir.path("bad3.csv")), InputError);
  }
}
