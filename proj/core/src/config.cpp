#include "cartelscreen/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "cartelscreen/errors.hpp"

namespace cartelscreen {
namespace {

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split_on(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string part;
  std::istringstream in(text);
  while (std::getline(in, part, sep)) {
    part = trim(part);
    if (!part.empty()) parts.push_back(part);
  }
  return parts;
}

// shortest decimal form that parses back to the same double; std::to_string
// would truncate small defaults like 1e-9 to "0.000000"
std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace

Config Config::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file " + path);
  Config cfg;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw SpecError(path + ":" + std::to_string(line_no) +
                      ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) {
      throw SpecError(path + ":" + std::to_string(line_no) + ": empty key");
    }
    cfg.values_[key] = trim(line.substr(eq + 1));
  }
  return cfg;
}

void Config::set(const std::string& key, const std::string& value) {
  values_[key] = value;
}

bool Config::has(const std::string& key) const {
  return values_.count(key) != 0;
}

std::string Config::resolve(const std::string& key,
                            const std::string& def) const {
  auto it = values_.find(key);
  const std::string value = it == values_.end() ? def : it->second;
  resolved_[key] = value;
  return value;
}

std::string Config::get_str(const std::string& key,
                            const std::string& def) const {
  return resolve(key, def);
}

double Config::get_double(const std::string& key, double def) const {
  const std::string text = resolve(key, format_double(def));
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw SpecError("config key " + key + ": bad number '" + text + "'");
  }
}

int Config::get_int(const std::string& key, int def) const {
  const std::string text = resolve(key, std::to_string(def));
  int v = 0;
  auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || p != text.data() + text.size()) {
    throw SpecError("config key " + key + ": bad integer '" + text + "'");
  }
  return v;
}

std::uint64_t Config::get_u64(const std::string& key,
                              std::uint64_t def) const {
  const std::string text = resolve(key, std::to_string(def));
  std::uint64_t v = 0;
  auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || p != text.data() + text.size()) {
    throw SpecError("config key " + key + ": bad integer '" + text + "'");
  }
  return v;
}

bool Config::get_bool(const std::string& key, bool def) const {
  const std::string text = resolve(key, def ? "true" : "false");
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw SpecError("config key " + key + ": bad boolean '" + text + "'");
}

std::vector<std::string> Config::get_list(const std::string& key,
                                          const std::string& def) const {
  return split_on(resolve(key, def), ',');
}

std::string Config::dump_resolved() const {
  std::string out;
  for (const auto& [key, value] : resolved_) {
    out += key;
    out += " = ";
    out += value;
    out += '\n';
  }
  return out;
}

std::string case_name(CaseId c) {
  switch (c) {
    case CaseId::Campania2010: return "campania2010";
    case CaseId::Brindisi2016: return "brindisi2016";
    case CaseId::Combined: return "combined";
    default: return "custom";
  }
}

std::string cartel_type_name(CartelType t) {
  return t == CartelType::Complete ? "complete" : "incomplete";
}

std::vector<DateRange> parse_windows(const std::string& text) {
  std::vector<DateRange> windows;
  for (const std::string& part : split_on(text, ';')) {
    const std::size_t dots = part.find("..");
    if (dots == std::string::npos) {
      throw SpecError("bad window '" + part + "', expected A..B");
    }
    DateRange r;
    r.begin = parse_date(trim(part.substr(0, dots)));
    r.end = parse_date(trim(part.substr(dots + 2)));
    if (day_number(r.end) < day_number(r.begin)) {
      throw SpecError("window '" + part + "' ends before it begins");
    }
    windows.push_back(r);
  }
  return windows;
}

DatasetSpec dataset_spec_from(const Config& cfg) {
  DatasetSpec spec;
  const std::string case_text = cfg.get_str("case", "custom");
  if (case_text == "campania2010") spec.case_id = CaseId::Campania2010;
  else if (case_text == "brindisi2016") spec.case_id = CaseId::Brindisi2016;
  else if (case_text == "combined") spec.case_id = CaseId::Combined;
  else if (case_text == "custom") spec.case_id = CaseId::Custom;
  else throw SpecError("config key case: unknown value '" + case_text + "'");

  const std::string type_text = cfg.get_str("cartel_type", "complete");
  if (type_text == "complete") spec.cartel_type = CartelType::Complete;
  else if (type_text == "incomplete") spec.cartel_type = CartelType::Incomplete;
  else throw SpecError("config key cartel_type: unknown value '" + type_text + "'");

  spec.windows = parse_windows(cfg.get_str("windows", ""));

  const std::string filter = cfg.get_str("day_filter", "none");
  if (filter == "sundays_holidays") spec.day_filter = true;
  else if (filter == "none") spec.day_filter = false;
  else throw SpecError("config key day_filter: unknown value '" + filter + "'");

  for (const std::string& d : cfg.get_list("holidays", "")) {
    spec.holidays.push_back(parse_date(d));
  }
  spec.cartel_units = cfg.get_list("cartel_units", "");
  spec.zones = cfg.get_list("zones", "");
  spec.seed = cfg.get_u64("seed", 42);
  return spec;
}

LearnerConfig learner_config_from(const Config& cfg) {
  LearnerConfig lc;
  lc.logistic_ridge = cfg.get_double("learners.logistic.ridge", lc.logistic_ridge);
  lc.logistic_max_iter = cfg.get_int("learners.logistic.max_iter", lc.logistic_max_iter);
  lc.logistic_tol = cfg.get_double("learners.logistic.tol", lc.logistic_tol);
  lc.lasso_path_points = cfg.get_int("learners.lasso.path_points", lc.lasso_path_points);
  lc.lasso_min_ratio = cfg.get_double("learners.lasso.min_ratio", lc.lasso_min_ratio);
  lc.lasso_cv_folds = cfg.get_int("learners.lasso.cv_folds", lc.lasso_cv_folds);
  lc.lasso_max_sweeps = cfg.get_int("learners.lasso.max_sweeps", lc.lasso_max_sweeps);
  lc.lasso_tol = cfg.get_double("learners.lasso.tol", lc.lasso_tol);
  lc.svm_c = cfg.get_double("learners.svm.c", lc.svm_c);
  lc.svm_epochs = cfg.get_int("learners.svm.epochs", lc.svm_epochs);
  lc.svm_platt_folds = cfg.get_int("learners.svm.platt_folds", lc.svm_platt_folds);
  lc.tree_min_leaf = cfg.get_int("learners.tree.min_leaf", lc.tree_min_leaf);
  lc.bagging_trees = cfg.get_int("learners.bagging.trees", lc.bagging_trees);
  lc.bagging_min_leaf = cfg.get_int("learners.bagging.min_leaf", lc.bagging_min_leaf);
  lc.forest_trees = cfg.get_int("learners.forest.trees", lc.forest_trees);
  lc.forest_min_leaf = cfg.get_int("learners.forest.min_leaf", lc.forest_min_leaf);
  lc.forest_mtry = cfg.get_int("learners.forest.mtry", lc.forest_mtry);
  lc.ensemble_cv_folds = cfg.get_int("learners.ensemble.cv_folds", lc.ensemble_cv_folds);
  if (lc.logistic_max_iter < 1 || lc.lasso_path_points < 1 ||
      lc.lasso_cv_folds < 2 || lc.svm_epochs < 1 || lc.svm_platt_folds < 2 ||
      lc.tree_min_leaf < 1 || lc.bagging_trees < 1 || lc.forest_trees < 1 ||
      lc.ensemble_cv_folds < 2) {
    throw SpecError("learner config: out-of-range value");
  }
  return lc;
}

TestConfig test_config_from(const Config& cfg) {
  TestConfig tc;
  tc.continuity_correction =
      cfg.get_bool("tests.continuity_correction", tc.continuity_correction);
  return tc;
}

long long subgroup_cap_from(const Config& cfg) {
  const long long cap = cfg.get_u64("subgroups.cap", 2000000);
  if (cap < 1) throw SpecError("subgroups.cap must be positive");
  return cap;
}

}  // namespace cartelscreen
