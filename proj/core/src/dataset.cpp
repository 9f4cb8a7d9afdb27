#include "cartelscreen/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "cartelscreen/csv.hpp"
#include "cartelscreen/errors.hpp"
#include "cartelscreen/rng.hpp"

namespace cartelscreen {
namespace {

struct RowErrors {
  std::vector<std::string> messages;

  void add(std::size_t line, const std::string& what) {
    messages.push_back("line " + std::to_string(line) + ": " + what);
  }

  void raise_if_any(const std::string& path) const {
    if (messages.empty()) return;
    std::string msg = path + ": " + std::to_string(messages.size()) +
                      " malformed row(s)";
    const std::size_t shown = std::min<std::size_t>(messages.size(), 10);
    for (std::size_t i = 0; i < shown; ++i) msg += "\n  " + messages[i];
    if (messages.size() > shown) {
      msg += "\n  ... and " + std::to_string(messages.size() - shown) + " more";
    }
    throw RowError(msg);
  }
};

bool parse_double_field(const std::string& text, double& out) {
  const char* first = text.data();
  const char* last = first + text.size();
  auto [p, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && p == last && std::isfinite(out);
}

bool parse_int_field(const std::string& text, int& out) {
  const char* first = text.data();
  const char* last = first + text.size();
  auto [p, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && p == last;
}

int require_column(const CsvTable& table, const std::string& name,
                   const std::string& path) {
  const int idx = table.column(name);
  if (idx < 0) throw SchemaError(path + ": missing required column " + name);
  return idx;
}

}  // namespace

std::vector<Tender> ingest(const std::string& path, Market market,
                           IngestStats* stats) {
  const CsvTable table = read_csv(path);
  const int c_zone = require_column(table, "zone", path);
  const int c_date = require_column(table, "date", path);
  const int c_hour = require_column(table, "hour", path);
  const int c_unit = require_column(table, "unit_id", path);
  const int c_price = require_column(table, "price", path);
  int c_qty = -1, c_acc = -1;
  if (market == Market::MGP) {
    c_qty = require_column(table, "quantity", path);
    c_acc = require_column(table, "accepted", path);
  }

  RowErrors errors;
  IngestStats local;
  std::vector<Tender> tenders;
  std::map<TenderKey, std::size_t> index;
  std::map<TenderKey, std::set<std::string>> seen_units;

  const std::size_t n_cols = table.header.size();
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    const std::size_t line = table.line_numbers[r];
    ++local.rows_total;
    if (row.size() != n_cols) {
      errors.add(line, "expected " + std::to_string(n_cols) + " fields, got " +
                           std::to_string(row.size()));
      continue;
    }

    int hour = 0;
    if (!parse_int_field(row[c_hour], hour)) {
      errors.add(line, "bad hour '" + row[c_hour] + "'");
      continue;
    }
    if (hour == 25) {  // DST long day, excluded by design
      ++local.rows_hour25;
      continue;
    }
    if (hour < 1 || hour > 24) {
      errors.add(line, "hour out of range: " + std::to_string(hour));
      continue;
    }

    Date date{};
    try {
      date = parse_date(row[c_date]);
    } catch (const InputError& e) {
      errors.add(line, e.what());
      continue;
    }

    Offer offer;
    offer.unit_id = row[c_unit];
    offer.price_text = row[c_price];
    if (!parse_double_field(offer.price_text, offer.price)) {
      errors.add(line, "bad price '" + offer.price_text + "'");
      continue;
    }
    if (offer.price < 0) {
      errors.add(line, "negative price " + offer.price_text);
      continue;
    }
    if (market == Market::MGP) {
      offer.quantity_text = row[c_qty];
      if (!parse_double_field(offer.quantity_text, offer.quantity)) {
        errors.add(line, "bad quantity '" + offer.quantity_text + "'");
        continue;
      }
      if (offer.quantity < 0) {
        errors.add(line, "negative quantity " + offer.quantity_text);
        continue;
      }
      if (row[c_acc] == "1") offer.accepted = true;
      else if (row[c_acc] == "0") offer.accepted = false;
      else {
        errors.add(line, "bad accepted flag '" + row[c_acc] + "'");
        continue;
      }
    }

    const TenderKey key{row[c_zone], day_number(date), hour};
    if (market == Market::MSD && !seen_units[key].insert(offer.unit_id).second) {
      errors.add(line, "duplicate unit " + offer.unit_id + " in tender " +
                           row[c_zone] + ":" + row[c_date] + ":" + row[c_hour]);
      continue;
    }
    auto [it, fresh] = index.try_emplace(key, tenders.size());
    if (fresh) {
      Tender t;
      t.zone = row[c_zone];
      t.date = date;
      t.hour = hour;
      t.market = market;
      tenders.push_back(std::move(t));
    }
    tenders[it->second].offers.push_back(std::move(offer));
  }

  errors.raise_if_any(path);
  std::sort(tenders.begin(), tenders.end(), tender_before);
  if (stats) *stats = local;
  return tenders;
}

void apply_labels(std::vector<Tender>& tenders, const DatasetSpec& spec) {
  if (spec.windows.empty()) {
    throw SpecError("at least one collusive window is required");
  }
  std::vector<DateRange> windows = spec.windows;
  std::sort(windows.begin(), windows.end(),
            [](const DateRange& a, const DateRange& b) {
              return day_number(a.begin) < day_number(b.begin);
            });
  for (std::size_t i = 1; i < windows.size(); ++i) {
    if (day_number(windows[i].begin) <= day_number(windows[i - 1].end)) {
      throw SpecError("collusive windows overlap: " +
                      format_date(windows[i - 1].begin) + ".." +
                      format_date(windows[i - 1].end) + " and " +
                      format_date(windows[i].begin) + ".." +
                      format_date(windows[i].end));
    }
  }
  int last_end = day_number(windows.front().end);
  for (const auto& w : windows) last_end = std::max(last_end, day_number(w.end));

  std::set<int> holidays;
  for (const Date& h : spec.holidays) holidays.insert(day_number(h));

  for (Tender& t : tenders) {
    const int d = day_number(t.date);
    bool in_window = false;
    for (const auto& w : windows) {
      if (d >= day_number(w.begin) && d <= day_number(w.end)) {
        in_window = true;
        break;
      }
    }
    if (in_window) {
      const bool day_ok =
          !spec.day_filter || is_sunday(t.date) || holidays.count(d) != 0;
      t.label = day_ok ? Label::Collusive : Label::Unlabeled;
    } else if (d > last_end) {
      t.label = Label::Competitive;
    } else {
      t.label = Label::Unlabeled;
    }
  }
}

std::vector<Tender> dedup_msd(const std::vector<Tender>& tenders) {
  std::set<std::pair<int, std::vector<double>>> seen;
  std::vector<Tender> kept;
  kept.reserve(tenders.size());
  for (const Tender& t : tenders) {
    std::vector<double> prices;
    prices.reserve(t.offers.size());
    for (const Offer& o : t.offers) prices.push_back(o.price);
    std::sort(prices.begin(), prices.end());
    if (seen.emplace(static_cast<int>(t.label), std::move(prices)).second) {
      kept.push_back(t);
    }
  }
  return kept;
}

std::vector<Tender> undersample(const std::vector<Tender>& tenders,
                                std::uint64_t seed) {
  std::vector<std::size_t> collusive, competitive;
  for (std::size_t i = 0; i < tenders.size(); ++i) {
    switch (tenders[i].label) {
      case Label::Collusive: collusive.push_back(i); break;
      case Label::Competitive: competitive.push_back(i); break;
      default:
        throw DatasetError("undersample: unlabeled tender " +
                           tenders[i].tender_id());
    }
  }
  if (collusive.empty() || competitive.empty()) {
    throw DatasetError("undersample: one class is empty (collusive " +
                       std::to_string(collusive.size()) + ", competitive " +
                       std::to_string(competitive.size()) + ")");
  }
  if (collusive.size() == competitive.size()) return tenders;

  const auto& majority =
      collusive.size() > competitive.size() ? collusive : competitive;
  const std::size_t target =
      std::min(collusive.size(), competitive.size());
  Rng rng(seed);
  const auto picks = rng.sample_without_replacement(majority.size(), target);
  std::vector<bool> keep(tenders.size(), true);
  for (const std::size_t i : majority) keep[i] = false;
  for (const std::size_t p : picks) keep[majority[p]] = true;

  std::vector<Tender> out;
  out.reserve(2 * target);
  for (std::size_t i = 0; i < tenders.size(); ++i) {
    if (keep[i]) out.push_back(tenders[i]);
  }
  return out;
}

LabeledDataset build_dataset(std::vector<Tender> msd, std::vector<Tender> mgp,
                             const DatasetSpec& spec) {
  if (!spec.zones.empty()) {
    auto zone_ok = [&spec](const Tender& t) {
      return std::find(spec.zones.begin(), spec.zones.end(), t.zone) !=
             spec.zones.end();
    };
    std::erase_if(msd, [&](const Tender& t) { return !zone_ok(t); });
    std::erase_if(mgp, [&](const Tender& t) { return !zone_ok(t); });
  }

  LabeledDataset ds;
  ds.provenance.spec = spec;
  ds.provenance.msd_ingested = msd.size();
  ds.provenance.mgp_ingested = mgp.size();

  apply_labels(msd, spec);
  std::vector<Tender> labeled;
  labeled.reserve(msd.size());
  for (Tender& t : msd) {
    switch (t.label) {
      case Label::Collusive: ++ds.provenance.labeled_collusive; break;
      case Label::Competitive: ++ds.provenance.labeled_competitive; break;
      case Label::Unlabeled: ++ds.provenance.labeled_excluded; continue;
    }
    labeled.push_back(std::move(t));
  }

  if (spec.cartel_type == CartelType::Complete) {
    if (spec.cartel_units.empty()) {
      throw SpecError("complete cartel type requires cartel_units");
    }
    std::set<std::string> units(spec.cartel_units.begin(),
                                spec.cartel_units.end());
    std::vector<Tender> restricted;
    restricted.reserve(labeled.size());
    for (Tender& t : labeled) {
      std::erase_if(t.offers, [&units](const Offer& o) {
        return units.count(o.unit_id) == 0;
      });
      if (t.offers.empty()) {
        ++ds.provenance.empty_after_restrict;
      } else {
        restricted.push_back(std::move(t));
      }
    }
    labeled = std::move(restricted);
  }

  std::vector<Tender> deduped = dedup_msd(labeled);
  ds.provenance.after_dedup = deduped.size();

  std::vector<Tender> sampled =
      undersample(deduped, derive_seed(spec.seed, seed_tag("undersample")));
  ds.provenance.after_undersample = sampled.size();

  std::map<TenderKey, std::size_t> mgp_index;
  for (std::size_t i = 0; i < mgp.size(); ++i) {
    if (!mgp_index.emplace(key_of(mgp[i]), i).second) {
      throw DatasetError("duplicate MGP tender " + mgp[i].tender_id());
    }
  }

  std::vector<std::string> unmatched;
  ds.records.reserve(sampled.size());
  for (Tender& t : sampled) {
    auto it = mgp_index.find(key_of(t));
    if (it == mgp_index.end()) {
      unmatched.push_back(t.tender_id());
      continue;
    }
    Record rec;
    rec.label = t.label;
    rec.mgp = mgp[it->second];
    rec.mgp.label = rec.label;
    rec.msd = std::move(t);
    ds.records.push_back(std::move(rec));
  }
  if (!unmatched.empty()) {
    std::string msg = "no MGP tender for " +
                      std::to_string(unmatched.size()) + " MSD tender(s):";
    const std::size_t shown = std::min<std::size_t>(unmatched.size(), 20);
    for (std::size_t i = 0; i < shown; ++i) msg += " " + unmatched[i];
    if (unmatched.size() > shown) msg += " ...";
    throw JoinError(msg);
  }
  return ds;
}

std::string provenance_summary(const Provenance& p) {
  std::ostringstream out;
  out << "case = " << case_name(p.spec.case_id)
      << ", cartel_type = " << cartel_type_name(p.spec.cartel_type) << "\n"
      << "msd tenders in = " << p.msd_ingested
      << ", mgp tenders in = " << p.mgp_ingested << "\n"
      << "labeled collusive = " << p.labeled_collusive
      << ", competitive = " << p.labeled_competitive
      << ", excluded = " << p.labeled_excluded << "\n";
  if (p.spec.cartel_type == CartelType::Complete) {
    out << "dropped empty after cartel restriction = "
        << p.empty_after_restrict << "\n";
  }
  out << "after dedup = " << p.after_dedup
      << ", after undersample = " << p.after_undersample << "\n";
  return out.str();
}

}  // namespace cartelscreen
