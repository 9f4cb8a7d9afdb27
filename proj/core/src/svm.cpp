#include "cartelscreen/svm.hpp"

#include <algorithm>
#include <cmath>

#include "cartelscreen/errors.hpp"
#include "cartelscreen/folds.hpp"
#include "cartelscreen/logistic.hpp"
#include "cartelscreen/rng.hpp"

namespace cartelscreen {
namespace {

struct RawSvm {
  std::vector<double> w;
  double b = 0;
  std::vector<double> trace;
};

double raw_decision(const RawSvm& m, const std::vector<double>& x) {
  double d = m.b;
  for (std::size_t j = 0; j < m.w.size(); ++j) d += m.w[j] * x[j];
  return d;
}

RawSvm fit_raw(const std::vector<std::vector<double>>& X,
               const std::vector<int>& y, const LearnerConfig& lc) {
  const std::size_t n = X.size();
  if (n == 0 || X[0].empty()) throw InputError("svm: empty training data");
  const std::size_t p = X[0].size();
  const double c = lc.svm_c;

  RawSvm cur, avg;
  cur.w.assign(p, 0.0);
  avg.w.assign(p, 0.0);

  std::vector<double> gw(p);
  for (int t = 0; t < lc.svm_epochs; ++t) {
    for (std::size_t j = 0; j < p; ++j) gw[j] = cur.w[j] / c;
    double gb = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double label = y[i] ? 1.0 : -1.0;
      double d = cur.b;
      for (std::size_t j = 0; j < p; ++j) d += cur.w[j] * X[i][j];
      if (label * d < 1.0) {
        const double scale = label / static_cast<double>(n);
        for (std::size_t j = 0; j < p; ++j) gw[j] -= scale * X[i][j];
        gb -= scale;
      }
    }
    const double eta = c / (t + 2.0);
    for (std::size_t j = 0; j < p; ++j) cur.w[j] -= eta * gw[j];
    cur.b -= eta * gb;

    const double frac = 1.0 / (t + 1.0);
    for (std::size_t j = 0; j < p; ++j) {
      avg.w[j] += frac * (cur.w[j] - avg.w[j]);
    }
    avg.b += frac * (cur.b - avg.b);

    if ((t + 1) % 20 == 0 || t + 1 == lc.svm_epochs) {
      avg.trace.push_back(svm_objective(X, y, avg.w, avg.b, c));
    }
  }
  return avg;
}

}  // namespace

double svm_objective(const std::vector<std::vector<double>>& X,
                     const std::vector<int>& y, const std::vector<double>& w,
                     double b, double c) {
  double norm2 = 0;
  for (const double v : w) norm2 += v * v;
  double hinge = 0;
  for (std::size_t i = 0; i < X.size(); ++i) {
    double d = b;
    for (std::size_t j = 0; j < w.size(); ++j) d += w[j] * X[i][j];
    const double label = y[i] ? 1.0 : -1.0;
    hinge += std::max(0.0, 1.0 - label * d);
  }
  return norm2 / (2.0 * c) + hinge / static_cast<double>(X.size());
}

double SvmModel::decision(const std::vector<double>& x) const {
  if (x.size() != w.size()) {
    throw InputError("svm: expected " + std::to_string(w.size()) +
                     " features, got " + std::to_string(x.size()));
  }
  double d = b;
  for (std::size_t j = 0; j < w.size(); ++j) d += w[j] * x[j];
  return d;
}

double SvmModel::predict_proba(const std::vector<double>& x) const {
  // eta clamp keeps calibrated probabilities strictly inside (0,1)
  const double eta =
      std::clamp(platt_a * decision(x) + platt_c, -34.0, 34.0);
  return sigmoid(eta);
}

SvmModel fit_svm(const std::vector<std::vector<double>>& X,
                 const std::vector<int>& y, const LearnerConfig& lc,
                 std::uint64_t seed) {
  const std::vector<int> folds = stratified_folds(
      y, lc.svm_platt_folds, derive_seed(seed, seed_tag("platt")));

  std::vector<std::vector<double>> oof(X.size(), std::vector<double>(1, 0.0));
  for (int f = 0; f < lc.svm_platt_folds; ++f) {
    std::vector<std::vector<double>> xtr;
    std::vector<int> ytr;
    for (std::size_t i = 0; i < X.size(); ++i) {
      if (folds[i] != f) {
        xtr.push_back(X[i]);
        ytr.push_back(y[i]);
      }
    }
    const RawSvm fold_model = fit_raw(xtr, ytr, lc);
    for (std::size_t i = 0; i < X.size(); ++i) {
      if (folds[i] == f) oof[i][0] = raw_decision(fold_model, X[i]);
    }
  }

  const RawSvm full = fit_raw(X, y, lc);
  const LinearModel platt = fit_logistic(oof, y, lc);

  SvmModel out;
  out.w = full.w;
  out.b = full.b;
  out.objective_trace = full.trace;
  out.platt_a = platt.coef[0];
  out.platt_c = platt.intercept;
  return out;
}

}  // namespace cartelscreen
