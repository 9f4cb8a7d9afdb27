#include "cartelscreen/evaluation.hpp"

#include <algorithm>
#include <cmath>

#include "cartelscreen/csv.hpp"
#include "cartelscreen/decimal.hpp"
#include "cartelscreen/errors.hpp"
#include "cartelscreen/parallel.hpp"
#include "cartelscreen/rng.hpp"

namespace cartelscreen {

double Metrics::accuracy() const {
  return static_cast<double>(tp + tn) / static_cast<double>(total());
}

double Metrics::recall() const {
  return static_cast<double>(tp) / static_cast<double>(tp + fn);
}

double Metrics::specificity() const {
  return static_cast<double>(tn) / static_cast<double>(tn + fp);
}

std::pair<std::vector<std::size_t>, std::vector<std::size_t>>
stratified_split(const std::vector<int>& y, std::uint64_t seed,
                 double fraction) {
  std::vector<std::size_t> train, test;
  for (const int cls : {0, 1}) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < y.size(); ++i) {
      if (y[i] == cls) members.push_back(i);
    }
    if (members.size() < 4) {
      throw DatasetError("split: class " + std::to_string(cls) + " has only " +
                         std::to_string(members.size()) + " members");
    }
    const std::size_t take = static_cast<std::size_t>(
        std::floor(fraction * static_cast<double>(members.size()) + 0.5));
    Rng rng(derive_seed(seed, seed_tag("split"), cls));
    const auto picks = rng.sample_without_replacement(members.size(), take);
    std::vector<bool> in_train(members.size(), false);
    for (const std::size_t p : picks) in_train[p] = true;
    for (std::size_t j = 0; j < members.size(); ++j) {
      (in_train[j] ? train : test).push_back(members[j]);
    }
  }
  std::sort(train.begin(), train.end());
  std::sort(test.begin(), test.end());
  return {train, test};
}

FeatureTable take_rows(const FeatureTable& table,
                       const std::vector<std::size_t>& idx) {
  FeatureTable out;
  out.names = table.names;
  out.rows.reserve(idx.size());
  for (const std::size_t i : idx) {
    out.rows.push_back(table.rows[i]);
    out.labels.push_back(table.labels[i]);
    out.tender_ids.push_back(table.tender_ids[i]);
  }
  return out;
}

Metrics evaluate_features_once(const FeatureTable& table,
                               const LearnerConfig& lc, std::uint64_t seed) {
  const auto [train_idx, test_idx] = stratified_split(table.labels, seed);
  const FeatureTable train = take_rows(table, train_idx);
  const FeatureTable test = take_rows(table, test_idx);

  const TrainedEnsemble model =
      fit_super_learner(train, lc, derive_seed(seed, seed_tag("fit")));

  Metrics m;
  for (std::size_t i = 0; i < test.rows.size(); ++i) {
    const bool flagged = model.classify(test.rows[i]);
    if (test.labels[i] == 1) {
      flagged ? ++m.tp : ++m.fn;
    } else {
      flagged ? ++m.fp : ++m.tn;
    }
  }
  return m;
}

Metrics evaluate_once(const LabeledDataset& ds, ScreenBlock block,
                      const LearnerConfig& lc, std::uint64_t seed,
                      long long subgroup_cap) {
  return evaluate_features_once(build_features(ds, block, subgroup_cap), lc,
                                seed);
}

double EvaluationReport::mean_accuracy() const {
  double s = 0;
  for (const auto& r : repetitions) s += r.metrics.accuracy();
  return s / static_cast<double>(repetitions.size());
}

double EvaluationReport::mean_recall() const {
  double s = 0;
  for (const auto& r : repetitions) s += r.metrics.recall();
  return s / static_cast<double>(repetitions.size());
}

double EvaluationReport::mean_specificity() const {
  double s = 0;
  for (const auto& r : repetitions) s += r.metrics.specificity();
  return s / static_cast<double>(repetitions.size());
}

EvaluationReport repeated_evaluation(const LabeledDataset& ds,
                                     ScreenBlock block, int repetitions,
                                     std::uint64_t master_seed,
                                     const LearnerConfig& lc,
                                     long long subgroup_cap, int jobs) {
  if (repetitions < 1) throw InputError("repetitions must be positive");
  const FeatureTable table = build_features(ds, block, subgroup_cap);

  EvaluationReport report;
  report.case_name = case_name(ds.provenance.spec.case_id);
  report.cartel_type = cartel_type_name(ds.cartel_type());
  report.block = block_name(block);
  report.repetitions.resize(repetitions);

  parallel_for(static_cast<std::size_t>(repetitions), jobs,
               [&](std::size_t r) {
                 const std::uint64_t rep_seed =
                     derive_seed(master_seed, seed_tag("rep"), r);
                 report.repetitions[r].seed = rep_seed;
                 report.repetitions[r].metrics =
                     evaluate_features_once(table, lc, rep_seed);
               });
  return report;
}

void export_report(const std::vector<EvaluationReport>& reports,
                   const std::string& path) {
  std::vector<const EvaluationReport*> ordered;
  ordered.reserve(reports.size());
  for (const auto& r : reports) ordered.push_back(&r);
  std::sort(ordered.begin(), ordered.end(),
            [](const EvaluationReport* a, const EvaluationReport* b) {
              if (a->case_name != b->case_name) {
                return a->case_name < b->case_name;
              }
              if (a->cartel_type != b->cartel_type) {
                return a->cartel_type < b->cartel_type;
              }
              return a->block < b->block;
            });

  std::vector<std::vector<std::string>> rows;
  for (const EvaluationReport* r : ordered) {
    rows.push_back({r->case_name, r->cartel_type, r->block,
                    std::to_string(r->repetitions.size()),
                    format_double(r->mean_accuracy()),
                    format_double(r->mean_recall()),
                    format_double(r->mean_specificity())});
  }
  write_csv(path,
            {"case", "cartel_type", "block", "repetitions", "accuracy",
             "recall", "specificity"},
            rows);
}

}  // namespace cartelscreen
