#pragma once

#include <string>
#include <vector>

#include "cartelscreen/classical_screens.hpp"
#include "cartelscreen/dataset.hpp"

namespace cartelscreen {

// Which screen columns feed the learners. Combined resolves by cartel type:
// Complete pairs the classical block with the MGP block, Incomplete pairs
// the subgroup block with the MGP block.
enum class ScreenBlock { MsdClassical, MsdSubgroup, MgpNew, Combined };

ScreenBlock parse_block(const std::string& text);
std::string block_name(ScreenBlock b);

struct NamedColumns {
  std::vector<std::string> names;
  std::vector<std::vector<ScreenValue>> columns;  // columns[c][row]
  std::vector<int> labels;                        // 1 = collusive
  std::vector<std::string> tender_ids;
};

NamedColumns screen_columns(const LabeledDataset& ds, ScreenBlock block,
                            long long subgroup_cap = 2000000);

struct FeatureTable {
  std::vector<std::string> names;
  std::vector<std::vector<double>> rows;  // rows[i][c], NaN = missing
  std::vector<int> labels;
  std::vector<std::string> tender_ids;

  std::size_t n() const { return rows.size(); }
  std::size_t p() const { return names.size(); }
};

FeatureTable build_features(const LabeledDataset& ds, ScreenBlock block,
                            long long subgroup_cap = 2000000);

// Training-split median imputation followed by standardization to mean 0,
// sd 1 (population sd; zero-sd columns stay at 0). fit() sees training rows
// only; transform() never updates statistics.
class Preprocessor {
 public:
  void fit(const std::vector<std::vector<double>>& rows);
  std::vector<double> transform(const std::vector<double>& row) const;
  std::vector<std::vector<double>> transform(
      const std::vector<std::vector<double>>& rows) const;

  const std::vector<double>& medians() const { return medians_; }
  const std::vector<double>& means() const { return means_; }
  const std::vector<double>& sds() const { return sds_; }

  void restore(std::vector<double> medians, std::vector<double> means,
               std::vector<double> sds);

 private:
  std::vector<double> medians_, means_, sds_;
};

}  // namespace cartelscreen
