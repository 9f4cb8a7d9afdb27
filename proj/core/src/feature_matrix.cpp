#include "cartelscreen/feature_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cartelscreen/errors.hpp"
#include "cartelscreen/mgp_screens.hpp"
#include "cartelscreen/subgroup_screens.hpp"

namespace cartelscreen {
namespace {

std::vector<double> msd_prices(const Tender& t) {
  std::vector<double> prices;
  prices.reserve(t.offers.size());
  for (const Offer& o : t.offers) prices.push_back(o.price);
  return prices;
}

enum Part { kClassical = 1, kSubgroup = 2, kMgp = 4 };

int resolve_parts(ScreenBlock block, CartelType type) {
  switch (block) {
    case ScreenBlock::MsdClassical:
      if (type != CartelType::Complete) {
        throw SpecError(
            "classical block applies to the complete cartel type only");
      }
      return kClassical;
    case ScreenBlock::MsdSubgroup:
      if (type != CartelType::Incomplete) {
        throw SpecError(
            "subgroup block applies to the incomplete cartel type only");
      }
      return kSubgroup;
    case ScreenBlock::MgpNew:
      return kMgp;
    default:
      return (type == CartelType::Complete ? kClassical : kSubgroup) | kMgp;
  }
}

}  // namespace

ScreenBlock parse_block(const std::string& text) {
  if (text == "msd_classical") return ScreenBlock::MsdClassical;
  if (text == "msd_subgroup") return ScreenBlock::MsdSubgroup;
  if (text == "mgp_new") return ScreenBlock::MgpNew;
  if (text == "combined") return ScreenBlock::Combined;
  throw SpecError("unknown screen block '" + text + "'");
}

std::string block_name(ScreenBlock b) {
  switch (b) {
    case ScreenBlock::MsdClassical: return "msd_classical";
    case ScreenBlock::MsdSubgroup: return "msd_subgroup";
    case ScreenBlock::MgpNew: return "mgp_new";
    default: return "combined";
  }
}

NamedColumns screen_columns(const LabeledDataset& ds, ScreenBlock block,
                            long long subgroup_cap) {
  const int parts = resolve_parts(block, ds.cartel_type());
  NamedColumns out;
  if (parts & kClassical) {
    for (const char* name : kClassicalNames) out.names.push_back(name);
  }
  if (parts & kSubgroup) {
    for (const std::string& name : subgroup_names()) out.names.push_back(name);
  }
  if (parts & kMgp) {
    for (const char* name : kMgpNames) out.names.push_back(name);
  }
  out.columns.assign(out.names.size(), {});
  for (auto& col : out.columns) col.reserve(ds.records.size());

  for (const Record& rec : ds.records) {
    std::size_t c = 0;
    if (parts & kClassical) {
      const auto vec = classical_vector(msd_prices(rec.msd));
      for (const ScreenValue& v : vec) out.columns[c++].push_back(v);
    }
    if (parts & kSubgroup) {
      const SubgroupSummary s =
          subgroup_summary(msd_prices(rec.msd), subgroup_cap);
      for (const ScreenValue& v : s.values) out.columns[c++].push_back(v);
    }
    if (parts & kMgp) {
      const auto vec = mgp_vector(rec.mgp);
      for (const double v : vec) out.columns[c++].push_back(v);
    }
    out.labels.push_back(rec.label == Label::Collusive ? 1 : 0);
    out.tender_ids.push_back(rec.msd.tender_id());
  }
  return out;
}

FeatureTable build_features(const LabeledDataset& ds, ScreenBlock block,
                            long long subgroup_cap) {
  NamedColumns cols = screen_columns(ds, block, subgroup_cap);
  FeatureTable table;
  table.names = std::move(cols.names);
  table.labels = std::move(cols.labels);
  table.tender_ids = std::move(cols.tender_ids);
  const std::size_t n = table.labels.size();
  const std::size_t p = table.names.size();
  table.rows.assign(n, std::vector<double>(p, 0.0));
  for (std::size_t c = 0; c < p; ++c) {
    for (std::size_t i = 0; i < n; ++i) {
      table.rows[i][c] = cols.columns[c][i]
                             ? *cols.columns[c][i]
                             : std::numeric_limits<double>::quiet_NaN();
    }
  }
  return table;
}

void Preprocessor::fit(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) throw InputError("preprocessor: no training rows");
  const std::size_t p = rows[0].size();
  medians_.assign(p, 0.0);
  means_.assign(p, 0.0);
  sds_.assign(p, 0.0);

  std::vector<double> present;
  for (std::size_t c = 0; c < p; ++c) {
    present.clear();
    for (const auto& row : rows) {
      if (!std::isnan(row[c])) present.push_back(row[c]);
    }
    if (!present.empty()) {
      std::sort(present.begin(), present.end());
      const std::size_t m = present.size();
      medians_[c] =
          m % 2 ? present[m / 2] : 0.5 * (present[m / 2 - 1] + present[m / 2]);
    }
    double mean = 0;
    for (const auto& row : rows) {
      mean += std::isnan(row[c]) ? medians_[c] : row[c];
    }
    mean /= static_cast<double>(rows.size());
    double ss = 0;
    for (const auto& row : rows) {
      const double v = std::isnan(row[c]) ? medians_[c] : row[c];
      ss += (v - mean) * (v - mean);
    }
    means_[c] = mean;
    sds_[c] = std::sqrt(ss / static_cast<double>(rows.size()));
  }
}

std::vector<double> Preprocessor::transform(
    const std::vector<double>& row) const {
  if (row.size() != medians_.size()) {
    throw InputError("preprocessor: expected " +
                     std::to_string(medians_.size()) + " features, got " +
                     std::to_string(row.size()));
  }
  std::vector<double> out(row.size());
  for (std::size_t c = 0; c < row.size(); ++c) {
    const double v = std::isnan(row[c]) ? medians_[c] : row[c];
    out[c] = sds_[c] > 0 ? (v - means_[c]) / sds_[c] : 0.0;
  }
  return out;
}

std::vector<std::vector<double>> Preprocessor::transform(
    const std::vector<std::vector<double>>& rows) const {
  std::vector<std::vector<double>> out;
  out.reserve(rows.size());
  for (const auto& row : rows) out.push_back(transform(row));
  return out;
}

void Preprocessor::restore(std::vector<double> medians,
                           std::vector<double> means,
                           std::vector<double> sds) {
  medians_ = std::move(medians);
  means_ = std::move(means);
  sds_ = std::move(sds);
}

}  // namespace cartelscreen
