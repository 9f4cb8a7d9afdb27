#pragma once

#include <cstdint>
#include <vector>

#include "cartelscreen/config.hpp"
#include "cartelscreen/logistic.hpp"

namespace cartelscreen {

struct LassoModel {
  LinearModel model;
  double lambda = 0;
  std::vector<double> path;  // descending lambda grid used for selection
};

// Largest lambda with an all-zero slope vector: max_j |(1/n) X_j^T (y - ybar)|.
double lasso_lambda_max(const std::vector<std::vector<double>>& X,
                        const std::vector<int>& y);

// L1-penalized logistic regression at one lambda: IRLS outer loop, cyclic
// coordinate descent with soft thresholding inside. Objective is
// (1/n) sum nll_i + lambda * |coef|_1, intercept unpenalized.
LinearModel fit_lasso_at(const std::vector<std::vector<double>>& X,
                         const std::vector<int>& y, double lambda,
                         const LearnerConfig& lc = {},
                         const LinearModel* warm = nullptr);

// Picks lambda from a log-spaced path by stratified K-fold CV deviance
// (ties resolved toward the larger lambda), then refits on all rows.
LassoModel fit_lasso(const std::vector<std::vector<double>>& X,
                     const std::vector<int>& y, const LearnerConfig& lc,
                     std::uint64_t seed);

}  // namespace cartelscreen
