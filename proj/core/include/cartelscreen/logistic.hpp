#pragma once

#include <vector>

#include "cartelscreen/config.hpp"

namespace cartelscreen {

struct LinearModel {
  double intercept = 0;
  std::vector<double> coef;
  bool converged = false;

  double linear(const std::vector<double>& x) const;
  double predict_proba(const std::vector<double>& x) const;
};

double sigmoid(double eta);

// Penalized negative log-likelihood sum_i nll_i + (ridge/2)*|coef|^2; the
// intercept is never penalized.
double logistic_nll(const std::vector<std::vector<double>>& X,
                    const std::vector<int>& y, double intercept,
                    const std::vector<double>& coef, double ridge);

// Gradient of logistic_nll in (intercept, coef) order, length p+1.
std::vector<double> logistic_gradient(const std::vector<std::vector<double>>& X,
                                      const std::vector<int>& y,
                                      double intercept,
                                      const std::vector<double>& coef,
                                      double ridge);

// IRLS with a small ridge term. Without the ridge, perfect separation just
// exhausts the iteration cap and returns converged=false; the model stays
// usable either way.
LinearModel fit_logistic(const std::vector<std::vector<double>>& X,
                         const std::vector<int>& y,
                         const LearnerConfig& lc = {});

}  // namespace cartelscreen
