#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "cartelscreen/feature_matrix.hpp"
#include "cartelscreen/super_learner.hpp"

namespace cartelscreen {

struct Metrics {
  long tp = 0, tn = 0, fp = 0, fn = 0;

  long total() const { return tp + tn + fp + fn; }
  double accuracy() const;
  double recall() const;       // true positive rate
  double specificity() const;  // true negative rate
};

// Stratified 75/25 split; per-class train size = round(0.75 * class size)
// with .5 rounded up. Returns (train indices, test indices), both ascending.
std::pair<std::vector<std::size_t>, std::vector<std::size_t>>
stratified_split(const std::vector<int>& y, std::uint64_t seed,
                 double fraction = 0.75);

FeatureTable take_rows(const FeatureTable& table,
                       const std::vector<std::size_t>& idx);

// One split + fit + test pass at threshold 0.5 (strictly greater means
// collusive).
Metrics evaluate_features_once(const FeatureTable& table,
                               const LearnerConfig& lc, std::uint64_t seed);

Metrics evaluate_once(const LabeledDataset& ds, ScreenBlock block,
                      const LearnerConfig& lc, std::uint64_t seed,
                      long long subgroup_cap = 2000000);

struct RepetitionResult {
  std::uint64_t seed = 0;
  Metrics metrics;
};

struct EvaluationReport {
  std::string case_name;
  std::string cartel_type;
  std::string block;
  std::vector<RepetitionResult> repetitions;

  double mean_accuracy() const;
  double mean_recall() const;
  double mean_specificity() const;
};

EvaluationReport repeated_evaluation(const LabeledDataset& ds,
                                     ScreenBlock block, int repetitions,
                                     std::uint64_t master_seed,
                                     const LearnerConfig& lc,
                                     long long subgroup_cap = 2000000,
                                     int jobs = 1);

// CSV with one averaged row per report, ordered by (case, cartel_type,
// block); re-exporting the same reports is byte-identical.
void export_report(const std::vector<EvaluationReport>& reports,
                   const std::string& path);

}  // namespace cartelscreen
