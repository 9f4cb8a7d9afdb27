#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "cartelscreen/market_data.hpp"

namespace cartelscreen {

// Flat key=value config. '#' starts a comment, blank lines are skipped.
// Every lookup records the resolved value (explicit or default) so dump()
// shows the full effective configuration.
class Config {
 public:
  Config() = default;
  static Config from_file(const std::string& path);

  void set(const std::string& key, const std::string& value);
  bool has(const std::string& key) const;

  std::string get_str(const std::string& key, const std::string& def) const;
  double get_double(const std::string& key, double def) const;
  int get_int(const std::string& key, int def) const;
  std::uint64_t get_u64(const std::string& key, std::uint64_t def) const;
  bool get_bool(const std::string& key, bool def) const;
  // Comma-separated list; empty value or absent key -> def.
  std::vector<std::string> get_list(const std::string& key,
                                    const std::string& def) const;

  // "key = value" lines, sorted by key, one per line.
  std::string dump_resolved() const;

 private:
  std::string resolve(const std::string& key, const std::string& def) const;
  std::map<std::string, std::string> values_;
  mutable std::map<std::string, std::string> resolved_;
};

enum class CaseId { Campania2010, Brindisi2016, Combined, Custom };
enum class CartelType { Complete, Incomplete };

std::string case_name(CaseId c);
std::string cartel_type_name(CartelType t);

struct DateRange {
  Date begin{};  // inclusive
  Date end{};    // inclusive
};

// Parses "YYYY-MM-DD..YYYY-MM-DD"; list entries separated by ';'.
std::vector<DateRange> parse_windows(const std::string& text);

struct DatasetSpec {
  CaseId case_id = CaseId::Custom;
  CartelType cartel_type = CartelType::Complete;
  std::vector<DateRange> windows;
  bool day_filter = false;  // Collusive label requires Sunday or holiday
  std::vector<Date> holidays;
  std::vector<std::string> cartel_units;
  std::vector<std::string> zones;  // empty = keep all
  std::uint64_t seed = 0;
};

DatasetSpec dataset_spec_from(const Config& cfg);

struct LearnerConfig {
  double logistic_ridge = 1e-6;
  int logistic_max_iter = 100;
  double logistic_tol = 1e-10;

  int lasso_path_points = 50;
  double lasso_min_ratio = 1e-3;
  int lasso_cv_folds = 10;
  int lasso_max_sweeps = 1000;
  double lasso_tol = 1e-9;

  double svm_c = 1.0;
  int svm_epochs = 200;
  int svm_platt_folds = 5;

  int tree_min_leaf = 1;
  int bagging_trees = 500;
  int bagging_min_leaf = 1;
  int forest_trees = 500;
  int forest_min_leaf = 5;
  int forest_mtry = 0;  // 0 = ceil(sqrt(p))

  int ensemble_cv_folds = 10;
};

LearnerConfig learner_config_from(const Config& cfg);

struct TestConfig {
  bool continuity_correction = true;
};

TestConfig test_config_from(const Config& cfg);

// Combinatorial guard for subgroup enumeration.
long long subgroup_cap_from(const Config& cfg);

}  // namespace cartelscreen
