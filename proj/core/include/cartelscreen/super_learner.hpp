#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "cartelscreen/feature_matrix.hpp"
#include "cartelscreen/lasso.hpp"
#include "cartelscreen/logistic.hpp"
#include "cartelscreen/svm.hpp"
#include "cartelscreen/tree.hpp"

namespace cartelscreen {

inline constexpr std::array<const char*, 5> kLearnerNames = {
    "logistic", "lasso", "svm", "bagging", "forest"};

struct TrainedEnsemble {
  Preprocessor prep;
  std::vector<std::string> feature_names;
  LinearModel logistic;
  LassoModel lasso;
  SvmModel svm;
  ForestModel bagging;
  ForestModel forest;
  std::array<double, 5> weights{};
  LearnerConfig hp;
  std::uint64_t seed = 0;

  // raw feature rows (may contain NaN); imputation and standardization
  // happen inside, with the statistics frozen at fit time
  std::array<double, 5> base_probabilities(const std::vector<double>& raw) const;
  double predict_proba(const std::vector<double>& raw) const;
  bool classify(const std::vector<double>& raw) const { // collusive iff > 0.5
    return predict_proba(raw) > 0.5;
  }
};

// min |b - Ax| over x >= 0, Lawson-Hanson active set. Ties in the entering
// variable go to the lowest column index, so duplicated columns put all
// weight on the first copy.
std::vector<double> nnls(const std::vector<std::vector<double>>& a_rows,
                         const std::vector<double>& b);

// Stratified K-fold out-of-fold probabilities for the five base learners,
// NNLS + normalization for the simplex weights (all-zero -> uniform), then
// a full refit of every base learner.
TrainedEnsemble fit_super_learner(const FeatureTable& train,
                                  const LearnerConfig& lc, std::uint64_t seed);

// The out-of-fold matrix behind the weights, exposed for inspection.
std::vector<std::vector<double>> super_learner_oof(const FeatureTable& train,
                                                   const LearnerConfig& lc,
                                                   std::uint64_t seed);

}  // namespace cartelscreen
