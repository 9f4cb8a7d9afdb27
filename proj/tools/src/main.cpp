// cartelscreen CLI: ingest tender data, compute screens, run the
// significance report, simulate markets, and train/evaluate the ensemble.
// Every run is a pure function of (input files, config, seed).

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cartelscreen/classical_screens.hpp"
#include "cartelscreen/config.hpp"
#include "cartelscreen/csv.hpp"
#include "cartelscreen/dataset.hpp"
#include "cartelscreen/decimal.hpp"
#include "cartelscreen/errors.hpp"
#include "cartelscreen/evaluation.hpp"
#include "cartelscreen/feature_matrix.hpp"
#include "cartelscreen/figures.hpp"
#include "cartelscreen/mgp_screens.hpp"
#include "cartelscreen/model_io.hpp"
#include "cartelscreen/rng.hpp"
#include "cartelscreen/simulator.hpp"
#include "cartelscreen/stat_tests.hpp"
#include "cartelscreen/subgroup_screens.hpp"
#include "cartelscreen/super_learner.hpp"

namespace {

using namespace cartelscreen;

struct Args {
  std::string config_path;
  std::uint64_t seed = 0;
  bool seed_given = false;
  std::string out;
  int jobs = 1;

  std::string msd_path, mgp_path, model_path;
  std::string block = "combined";
  int repetitions = 10;
  bool subgroups = false;
  bool figures = false;
};

Config load_config(const Args& a) {
  Config cfg =
      a.config_path.empty() ? Config() : Config::from_file(a.config_path);
  if (a.seed_given) {
    cfg.set("seed", std::to_string(a.seed));
    cfg.set("sim.seed", std::to_string(a.seed));
  }
  return cfg;
}

void echo_config(const Config& cfg, std::uint64_t master_seed) {
  std::cout << "# resolved configuration\n"
            << cfg.dump_resolved() << "# master seed = " << master_seed
            << "\n";
}

std::string opt_field(const std::optional<double>& v) {
  return v ? format_double(*v) : std::string();
}

std::vector<double> offer_prices(const Tender& t) {
  std::vector<double> prices;
  prices.reserve(t.offers.size());
  for (const Offer& o : t.offers) prices.push_back(o.price);
  return prices;
}

std::map<TenderKey, std::size_t> index_tenders(const std::vector<Tender>& ts) {
  std::map<TenderKey, std::size_t> index;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    if (!index.emplace(key_of(ts[i]), i).second) {
      throw DatasetError("duplicate tender " + ts[i].tender_id());
    }
  }
  return index;
}

void print_label_counts(const std::vector<Tender>& tenders,
                        const std::string& what) {
  long coll = 0, comp = 0, none = 0;
  for (const Tender& t : tenders) {
    if (t.label == Label::Collusive) ++coll;
    else if (t.label == Label::Competitive) ++comp;
    else ++none;
  }
  std::cout << what << ": " << coll << " collusive, " << comp
            << " competitive, " << none << " excluded\n";
}

// Classical + MGP screen columns of an assembled dataset, subgroup columns
// appended on demand. Used by test-screens and report.
void collect_columns(const LabeledDataset& ds, bool subgroups, long long cap,
                     std::vector<std::string>& names,
                     std::vector<std::vector<ScreenValue>>& columns,
                     std::vector<int>& labels) {
  for (const char* n : kClassicalNames) names.push_back(n);
  for (const char* n : kMgpNames) names.push_back(n);
  if (subgroups) {
    for (const std::string& n : subgroup_names()) names.push_back(n);
  }
  columns.assign(names.size(), {});
  for (const Record& r : ds.records) {
    labels.push_back(r.label == Label::Collusive ? 1 : 0);
    std::size_t c = 0;
    const auto classical = classical_vector(offer_prices(r.msd));
    for (const ScreenValue& v : classical) columns[c++].push_back(v);
    const auto mgp = mgp_vector(r.mgp);
    for (const double v : mgp) columns[c++].push_back(v);
    if (subgroups) {
      const auto sub = subgroup_summary(offer_prices(r.msd), cap);
      for (const ScreenValue& v : sub.values) columns[c++].push_back(v);
    }
  }
}

void write_significance_csv(const std::vector<SignificanceRow>& rows,
                            const std::string& dataset_name,
                            const std::string& path) {
  std::vector<std::vector<std::string>> out;
  out.reserve(rows.size());
  for (const SignificanceRow& r : rows) {
    out.push_back({r.screen, dataset_name, opt_field(r.stat_mw),
                   opt_field(r.p_mw), opt_field(r.stat_ks),
                   opt_field(r.p_ks)});
  }
  write_csv(path, {"screen", "dataset", "stat_MW", "p_MW", "stat_KS", "p_KS"},
            out);
}

int cmd_ingest(const Args& a) {
  const Config cfg = load_config(a);
  if (a.msd_path.empty() && a.mgp_path.empty()) {
    throw InputError("ingest: provide --msd and/or --mgp");
  }
  const bool windows = cfg.has("windows");
  const DatasetSpec spec = windows ? dataset_spec_from(cfg) : DatasetSpec{};

  for (const auto& [path, market, what] :
       {std::tuple{a.msd_path, Market::MSD, "msd"},
        std::tuple{a.mgp_path, Market::MGP, "mgp"}}) {
    if (path.empty()) continue;
    IngestStats st;
    std::vector<Tender> tenders = ingest(path, market, &st);
    std::cout << what << ": " << tenders.size() << " tenders from "
              << st.rows_total << " rows (" << st.rows_hour25
              << " hour-25 rows dropped)\n";
    if (windows) {
      apply_labels(tenders, spec);
      print_label_counts(tenders, what);
    }
  }
  echo_config(cfg, cfg.get_u64("seed", 42));
  return 0;
}

int cmd_screens(const Args& a) {
  const Config cfg = load_config(a);
  if (a.msd_path.empty()) throw InputError("screens: --msd is required");
  if (a.out.empty()) throw InputError("screens: --out is required");

  std::vector<Tender> msd = ingest(a.msd_path, Market::MSD, nullptr);
  std::vector<Tender> mgp;
  std::map<TenderKey, std::size_t> mgp_index;
  if (!a.mgp_path.empty()) {
    mgp = ingest(a.mgp_path, Market::MGP, nullptr);
    mgp_index = index_tenders(mgp);
  }
  if (cfg.has("windows")) apply_labels(msd, dataset_spec_from(cfg));
  const long long cap = subgroup_cap_from(cfg);

  std::vector<std::string> header = {"tender_id", "label"};
  for (const char* n : kClassicalNames) header.push_back(n);
  if (!a.mgp_path.empty()) {
    for (const char* n : kMgpNames) header.push_back(n);
  }
  if (a.subgroups) {
    for (const std::string& n : subgroup_names()) header.push_back(n);
  }

  std::vector<std::vector<std::string>> rows;
  rows.reserve(msd.size());
  for (const Tender& t : msd) {
    std::vector<std::string> row = {t.tender_id(), label_name(t.label)};
    const std::vector<double> prices = offer_prices(t);
    for (const ScreenValue& v : classical_vector(prices)) {
      row.push_back(opt_field(v));
    }
    if (!a.mgp_path.empty()) {
      const auto it = mgp_index.find(key_of(t));
      if (it == mgp_index.end()) {
        for (std::size_t j = 0; j < kMgpNames.size(); ++j) row.emplace_back();
      } else {
        for (const double v : mgp_vector(mgp[it->second])) {
          row.push_back(format_double(v));
        }
      }
    }
    if (a.subgroups) {
      for (const ScreenValue& v : subgroup_summary(prices, cap).values) {
        row.push_back(opt_field(v));
      }
    }
    rows.push_back(std::move(row));
  }
  write_csv(a.out, header, rows);
  std::cout << "screens: wrote " << rows.size() << " tenders x "
            << header.size() << " columns to " << a.out << "\n";
  echo_config(cfg, cfg.get_u64("seed", 42));
  return 0;
}

int cmd_test_screens(const Args& a) {
  const Config cfg = load_config(a);
  if (a.msd_path.empty() || a.mgp_path.empty()) {
    throw InputError("test-screens: --msd and --mgp are required");
  }
  if (a.out.empty()) throw InputError("test-screens: --out is required");
  const DatasetSpec spec = dataset_spec_from(cfg);
  const TestConfig tc = test_config_from(cfg);
  const long long cap = subgroup_cap_from(cfg);

  const LabeledDataset ds =
      build_dataset(ingest(a.msd_path, Market::MSD, nullptr),
                    ingest(a.mgp_path, Market::MGP, nullptr), spec);

  std::vector<std::string> names;
  std::vector<std::vector<ScreenValue>> columns;
  std::vector<int> labels;
  collect_columns(ds, a.subgroups, cap, names, columns, labels);
  const auto rows = screen_significance_report(names, columns, labels, tc);
  write_significance_csv(rows, case_name(spec.case_id), a.out);

  std::cout << "test-screens: " << rows.size() << " screens over "
            << ds.records.size() << " tenders to " << a.out << "\n";
  echo_config(cfg, spec.seed);
  return 0;
}

int cmd_simulate(const Args& a) {
  const Config cfg = load_config(a);
  if (a.out.empty()) throw InputError("simulate: --out directory is required");
  const SimConfig sc = sim_config_from(cfg);
  const SimOutput out = generate(sc);
  write_sim_dataset(out, a.out);

  long collusive = 0;
  for (const Tender& t : out.mgp) {
    if (t.label == Label::Collusive) ++collusive;
  }
  std::cout << "simulate: " << regime_name(sc.regime) << " regime, "
            << out.msd.size() << " msd tenders, " << out.mgp.size()
            << " mgp tenders (" << collusive << " collusive hours) in "
            << a.out << "\n";

  const DatasetSpec spec = sim_dataset_spec(sc, CartelType::Complete);
  std::string units;
  for (const std::string& u : spec.cartel_units) {
    if (!units.empty()) units += ",";
    units += u;
  }
  std::cout << "# dataset config for this output\n"
            << "case = custom\n"
            << "windows = " << format_date(spec.windows.front().begin) << ".."
            << format_date(spec.windows.front().end) << "\n"
            << "cartel_units = " << units << "\n"
            << "zones = " << sc.zone << "\n"
            << "seed = " << sc.seed << "\n";
  echo_config(cfg, sc.seed);
  return 0;
}

int cmd_train(const Args& a) {
  const Config cfg = load_config(a);
  if (a.msd_path.empty() || a.mgp_path.empty()) {
    throw InputError("train: --msd and --mgp are required");
  }
  if (a.out.empty()) throw InputError("train: --out model path is required");
  const DatasetSpec spec = dataset_spec_from(cfg);
  const LearnerConfig lc = learner_config_from(cfg);
  const long long cap = subgroup_cap_from(cfg);
  const ScreenBlock block = parse_block(a.block);

  const LabeledDataset ds =
      build_dataset(ingest(a.msd_path, Market::MSD, nullptr),
                    ingest(a.mgp_path, Market::MGP, nullptr), spec);
  std::cout << provenance_summary(ds.provenance);

  const FeatureTable table = build_features(ds, block, cap);
  const TrainedEnsemble model =
      fit_super_learner(table, lc, derive_seed(spec.seed, seed_tag("train")));
  save_ensemble(model, a.out);

  std::cout << "train: block " << block_name(block) << ", " << table.n()
            << " tenders x " << table.p() << " features\nweights:";
  for (std::size_t k = 0; k < kLearnerNames.size(); ++k) {
    std::cout << " " << kLearnerNames[k] << "=" << format_double(model.weights[k]);
  }
  std::cout << "\nmodel written to " << a.out << "\n";
  echo_config(cfg, spec.seed);
  return 0;
}

// The saved container records its feature names; infer block and cartel type
// from them so predict/evaluate build the matching table.
std::pair<ScreenBlock, CartelType> infer_block(
    const std::vector<std::string>& feature_names) {
  const auto candidates = [] {
    std::vector<std::pair<std::pair<ScreenBlock, CartelType>,
                          std::vector<std::string>>> all;
    std::vector<std::string> classical(kClassicalNames.begin(),
                                       kClassicalNames.end());
    std::vector<std::string> mgp(kMgpNames.begin(), kMgpNames.end());
    const std::vector<std::string>& sub = subgroup_names();
    auto cat = [](std::vector<std::string> x,
                  const std::vector<std::string>& y) {
      x.insert(x.end(), y.begin(), y.end());
      return x;
    };
    all.push_back({{ScreenBlock::MsdClassical, CartelType::Complete}, classical});
    all.push_back({{ScreenBlock::MsdSubgroup, CartelType::Incomplete}, sub});
    all.push_back({{ScreenBlock::MgpNew, CartelType::Complete}, mgp});
    all.push_back({{ScreenBlock::Combined, CartelType::Complete},
                   cat(classical, mgp)});
    all.push_back({{ScreenBlock::Combined, CartelType::Incomplete}, cat(sub, mgp)});
    return all;
  }();
  for (const auto& [key, names] : candidates) {
    if (names == feature_names) return key;
  }
  throw InputError(
      "model feature names do not match any screen block; was the container "
      "edited?");
}

int cmd_predict(const Args& a) {
  const Config cfg = load_config(a);
  if (a.model_path.empty()) throw InputError("predict: --model is required");
  if (a.msd_path.empty()) throw InputError("predict: --msd is required");
  if (a.out.empty()) throw InputError("predict: --out is required");

  const TrainedEnsemble model = load_ensemble(a.model_path);
  const auto [block, type] = infer_block(model.feature_names);
  const bool needs_mgp =
      block == ScreenBlock::MgpNew || block == ScreenBlock::Combined;
  if (needs_mgp && a.mgp_path.empty()) {
    throw InputError("predict: this model uses MGP screens; --mgp is required");
  }

  std::vector<Tender> msd = ingest(a.msd_path, Market::MSD, nullptr);
  std::vector<Tender> mgp;
  std::map<TenderKey, std::size_t> mgp_index;
  if (!a.mgp_path.empty()) {
    mgp = ingest(a.mgp_path, Market::MGP, nullptr);
    mgp_index = index_tenders(mgp);
  }

  LabeledDataset ds;
  ds.provenance.spec.cartel_type = type;
  std::vector<std::string> unmatched;
  for (Tender& t : msd) {
    Record rec;
    if (needs_mgp) {
      const auto it = mgp_index.find(key_of(t));
      if (it == mgp_index.end()) {
        unmatched.push_back(t.tender_id());
        continue;
      }
      rec.mgp = mgp[it->second];
    }
    rec.label = Label::Unlabeled;
    rec.msd = std::move(t);
    ds.records.push_back(std::move(rec));
  }
  if (!unmatched.empty()) {
    std::string msg = "predict: no MGP tender for " +
                      std::to_string(unmatched.size()) + " MSD tender(s):";
    const std::size_t shown = std::min<std::size_t>(unmatched.size(), 20);
    for (std::size_t i = 0; i < shown; ++i) msg += " " + unmatched[i];
    if (unmatched.size() > shown) msg += " ...";
    throw JoinError(msg);
  }

  const FeatureTable table = build_features(ds, block, subgroup_cap_from(cfg));
  std::vector<std::vector<std::string>> rows;
  rows.reserve(table.n());
  long flagged = 0;
  for (std::size_t i = 0; i < table.n(); ++i) {
    const double p = model.predict_proba(table.rows[i]);
    const bool collusive = p > 0.5;
    flagged += collusive;
    rows.push_back({table.tender_ids[i], format_double(p),
                    collusive ? "collusive" : "competitive"});
  }
  write_csv(a.out, {"tender_id", "probability", "classification"}, rows);
  std::cout << "predict: block " << block_name(block) << ", " << rows.size()
            << " tenders, " << flagged << " flagged collusive, written to "
            << a.out << "\n";
  echo_config(cfg, cfg.get_u64("seed", 42));
  return 0;
}

int cmd_evaluate(const Args& a) {
  const Config cfg = load_config(a);
  if (a.msd_path.empty() || a.mgp_path.empty()) {
    throw InputError("evaluate: --msd and --mgp are required");
  }
  if (a.out.empty()) throw InputError("evaluate: --out is required");
  const DatasetSpec spec = dataset_spec_from(cfg);
  const LearnerConfig lc = learner_config_from(cfg);
  const long long cap = subgroup_cap_from(cfg);
  const ScreenBlock block = parse_block(a.block);
  if (a.repetitions < 1) throw InputError("evaluate: --repetitions must be >= 1");

  const LabeledDataset ds =
      build_dataset(ingest(a.msd_path, Market::MSD, nullptr),
                    ingest(a.mgp_path, Market::MGP, nullptr), spec);
  std::cout << provenance_summary(ds.provenance);

  EvaluationReport report;
  if (!a.model_path.empty()) {
    // Score the whole assembled dataset with a saved model, no splitting.
    const TrainedEnsemble model = load_ensemble(a.model_path);
    const FeatureTable table = build_features(ds, block, cap);
    Metrics m;
    for (std::size_t i = 0; i < table.n(); ++i) {
      const bool hit = model.classify(table.rows[i]);
      if (table.labels[i] == 1) (hit ? m.tp : m.fn) += 1;
      else (hit ? m.fp : m.tn) += 1;
    }
    report.case_name = case_name(spec.case_id);
    report.cartel_type = cartel_type_name(spec.cartel_type);
    report.block = block_name(block);
    report.repetitions.push_back({spec.seed, m});
  } else {
    report = repeated_evaluation(ds, block, a.repetitions, spec.seed, lc, cap,
                                 a.jobs);
  }
  export_report({report}, a.out);

  std::cout << "evaluate: block " << report.block << ", "
            << report.repetitions.size() << " repetition(s)\n"
            << "accuracy = " << format_double(report.mean_accuracy())
            << ", recall = " << format_double(report.mean_recall())
            << ", specificity = " << format_double(report.mean_specificity())
            << "\nreport written to " << a.out << "\n";
  echo_config(cfg, spec.seed);
  return 0;
}

int cmd_report(const Args& a) {
  const Config cfg = load_config(a);
  if (a.msd_path.empty() || a.mgp_path.empty()) {
    throw InputError("report: --msd and --mgp are required");
  }
  if (a.out.empty()) throw InputError("report: --out directory is required");
  const DatasetSpec spec = dataset_spec_from(cfg);
  const TestConfig tc = test_config_from(cfg);
  const long long cap = subgroup_cap_from(cfg);

  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(fs::path(a.out), ec);
  if (ec) throw IoError("cannot create directory " + a.out + ": " + ec.message());

  std::vector<Tender> msd = ingest(a.msd_path, Market::MSD, nullptr);
  std::vector<Tender> mgp = ingest(a.mgp_path, Market::MGP, nullptr);
  const LabeledDataset ds = build_dataset(msd, mgp, spec);

  const std::string summary = provenance_summary(ds.provenance);
  std::cout << summary;
  {
    const std::string path = (fs::path(a.out) / "provenance.txt").string();
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path + " for writing");
    out << summary;
  }

  std::vector<std::string> names;
  std::vector<std::vector<ScreenValue>> columns;
  std::vector<int> labels;
  const bool subgroups =
      a.subgroups || spec.cartel_type == CartelType::Incomplete;
  collect_columns(ds, subgroups, cap, names, columns, labels);
  const auto rows = screen_significance_report(names, columns, labels, tc);
  write_significance_csv(rows, case_name(spec.case_id),
                         (fs::path(a.out) / "significance.csv").string());

  if (a.figures) {
    if (!spec.zones.empty()) {
      std::erase_if(mgp, [&spec](const Tender& t) {
        return std::find(spec.zones.begin(), spec.zones.end(), t.zone) ==
               spec.zones.end();
      });
    }
    apply_labels(mgp, spec);
    for (const char* metric : kMgpNames) {
      const auto series = hourly_series(mgp, metric);
      const std::string base = (fs::path(a.out) / "series_").string() + metric;
      export_hourly_series(series, base + ".csv");
      export_series_svg(series, metric, base + ".svg");
    }
  }
  std::cout << "report: significance over " << names.size()
            << " screens written to " << a.out
            << (a.figures ? " with hourly series figures" : "") << "\n";
  echo_config(cfg, spec.seed);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "cartelscreen: behavioral screens and ensemble classification for "
      "wholesale electricity tenders"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", "cartelscreen 0.1.0");

  Args a;
  app.add_option("--config", a.config_path, "key=value config file");
  CLI::Option* seed_opt =
      app.add_option("--seed", a.seed, "master seed (overrides config)");
  app.add_option("--out", a.out, "output file or directory");
  app.add_option("--jobs", a.jobs, "max worker threads")
      ->check(CLI::PositiveNumber);

  CLI::App* ingest = app.add_subcommand(
      "ingest", "Parse tender CSVs, report row and label counts");
  ingest->add_option("--msd", a.msd_path, "MSD offers CSV");
  ingest->add_option("--mgp", a.mgp_path, "MGP offers CSV");

  CLI::App* screens = app.add_subcommand(
      "screens", "Per-tender screen values as CSV (Missing = empty field)");
  screens->add_option("--msd", a.msd_path, "MSD offers CSV");
  screens->add_option("--mgp", a.mgp_path, "MGP offers CSV (adds MGP screens)");
  screens->add_flag("--subgroups", a.subgroups, "add the 96 subgroup columns");

  CLI::App* test_screens = app.add_subcommand(
      "test-screens", "Mann-Whitney and Kolmogorov-Smirnov screen report");
  test_screens->add_option("--msd", a.msd_path, "MSD offers CSV");
  test_screens->add_option("--mgp", a.mgp_path, "MGP offers CSV");
  test_screens->add_flag("--subgroups", a.subgroups,
                         "include the 96 subgroup screens");

  CLI::App* simulate = app.add_subcommand(
      "simulate", "Generate a synthetic labeled MSD/MGP dataset");

  CLI::App* train = app.add_subcommand(
      "train", "Fit the stacked ensemble and save the model container");
  train->add_option("--msd", a.msd_path, "MSD offers CSV");
  train->add_option("--mgp", a.mgp_path, "MGP offers CSV");
  train->add_option("--block", a.block,
                    "msd_classical | msd_subgroup | mgp_new | combined");

  CLI::App* predict = app.add_subcommand(
      "predict", "Score tenders with a saved model container");
  predict->add_option("--model", a.model_path, "model container path");
  predict->add_option("--msd", a.msd_path, "MSD offers CSV");
  predict->add_option("--mgp", a.mgp_path, "MGP offers CSV");

  CLI::App* evaluate = app.add_subcommand(
      "evaluate", "Repeated split/train/test protocol with mean metrics");
  evaluate->add_option("--msd", a.msd_path, "MSD offers CSV");
  evaluate->add_option("--mgp", a.mgp_path, "MGP offers CSV");
  evaluate->add_option("--block", a.block,
                       "msd_classical | msd_subgroup | mgp_new | combined");
  evaluate->add_option("--repetitions", a.repetitions,
                       "number of split/train/test repetitions");
  evaluate->add_option("--model", a.model_path,
                       "score this saved model on the whole dataset instead");

  CLI::App* report = app.add_subcommand(
      "report", "Provenance, significance report, optional hourly figures");
  report->add_option("--msd", a.msd_path, "MSD offers CSV");
  report->add_option("--mgp", a.mgp_path, "MGP offers CSV");
  report->add_flag("--figures", a.figures, "write hourly series CSV + SVG");
  report->add_flag("--subgroups", a.subgroups,
                   "include subgroup screens in the significance report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }
  a.seed_given = seed_opt->count() > 0;

  try {
    if (ingest->parsed()) return cmd_ingest(a);
    if (screens->parsed()) return cmd_screens(a);
    if (test_screens->parsed()) return cmd_test_screens(a);
    if (simulate->parsed()) return cmd_simulate(a);
    if (train->parsed()) return cmd_train(a);
    if (predict->parsed()) return cmd_predict(a);
    if (evaluate->parsed()) return cmd_evaluate(a);
    if (report->parsed()) return cmd_report(a);
    std::cerr << "error: no subcommand\n";
    return 1;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const ResourceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  }
}
