#pragma once

#include <cstdint>
#include <vector>

#include "cartelscreen/config.hpp"

namespace cartelscreen {

// Linear soft-margin SVM, J = (1/(2C))|w|^2 + (1/n) sum hinge, trained by
// deterministic full-batch subgradient descent with step C/(t+2) and
// averaged iterates. Probabilities come from a Platt map fitted on
// out-of-fold decision values.
struct SvmModel {
  std::vector<double> w;
  double b = 0;
  double platt_a = 1;
  double platt_c = 0;
  std::vector<double> objective_trace;  // J of the averaged iterate, one
                                        // entry per 20-epoch checkpoint

  double decision(const std::vector<double>& x) const;
  double predict_proba(const std::vector<double>& x) const;
};

double svm_objective(const std::vector<std::vector<double>>& X,
                     const std::vector<int>& y, const std::vector<double>& w,
                     double b, double c);

SvmModel fit_svm(const std::vector<std::vector<double>>& X,
                 const std::vector<int>& y, const LearnerConfig& lc,
                 std::uint64_t seed);

}  // namespace cartelscreen
