#include "cartelscreen/super_learner.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "cartelscreen/errors.hpp"
#include "cartelscreen/folds.hpp"

namespace cartelscreen {
namespace {

struct BaseFits {
  LinearModel logistic;
  LassoModel lasso;
  SvmModel svm;
  ForestModel bagging;
  ForestModel forest;
};

BaseFits fit_bases(const std::vector<std::vector<double>>& x,
                   const std::vector<int>& y, const LearnerConfig& lc,
                   std::uint64_t seed) {
  BaseFits fits;
  fits.logistic = fit_logistic(x, y, lc);
  fits.lasso = fit_lasso(x, y, lc, derive_seed(seed, seed_tag("lasso")));
  fits.svm = fit_svm(x, y, lc, derive_seed(seed, seed_tag("svm")));
  fits.bagging = fit_bagged_trees(x, y, lc, derive_seed(seed, seed_tag("bagging")));
  fits.forest = fit_random_forest(x, y, lc, derive_seed(seed, seed_tag("forest")));
  return fits;
}

std::array<double, 5> base_predict(const BaseFits& fits,
                                   const std::vector<double>& x) {
  return {fits.logistic.predict_proba(x), fits.lasso.model.predict_proba(x),
          fits.svm.predict_proba(x), fits.bagging.predict(x),
          fits.forest.predict(x)};
}

std::vector<std::vector<double>> oof_matrix(
    const std::vector<std::vector<double>>& x, const std::vector<int>& y,
    const LearnerConfig& lc, std::uint64_t seed) {
  const std::vector<int> folds = stratified_folds(
      y, lc.ensemble_cv_folds, derive_seed(seed, seed_tag("sl_cv")));
  std::vector<std::vector<double>> z(x.size(), std::vector<double>(5, 0.0));
  for (int f = 0; f < lc.ensemble_cv_folds; ++f) {
    std::vector<std::vector<double>> xtr;
    std::vector<int> ytr;
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (folds[i] != f) {
        xtr.push_back(x[i]);
        ytr.push_back(y[i]);
      }
    }
    const BaseFits fits = fit_bases(
        xtr, ytr, lc,
        derive_seed(seed, seed_tag("fold"), static_cast<std::uint64_t>(f)));
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (folds[i] == f) {
        const auto probs = base_predict(fits, x[i]);
        std::copy(probs.begin(), probs.end(), z[i].begin());
      }
    }
  }
  return z;
}

}  // namespace

std::vector<double> nnls(const std::vector<std::vector<double>>& a_rows,
                         const std::vector<double>& b) {
  const std::size_t n = a_rows.size();
  if (n == 0 || b.size() != n) throw InputError("nnls: bad shapes");
  const std::size_t k = a_rows[0].size();

  Eigen::MatrixXd a(n, k);
  Eigen::VectorXd bv(n);
  for (std::size_t i = 0; i < n; ++i) {
    bv(i) = b[i];
    for (std::size_t j = 0; j < k; ++j) a(i, j) = a_rows[i][j];
  }

  std::vector<bool> passive(k, false);
  Eigen::VectorXd x = Eigen::VectorXd::Zero(k);
  const double tol = 1e-12 * std::max(1.0, bv.norm());

  auto solve_passive = [&](Eigen::VectorXd& z) {
    std::vector<int> cols;
    for (std::size_t j = 0; j < k; ++j) {
      if (passive[j]) cols.push_back(static_cast<int>(j));
    }
    Eigen::MatrixXd ap(n, cols.size());
    for (std::size_t c = 0; c < cols.size(); ++c) ap.col(c) = a.col(cols[c]);
    const Eigen::VectorXd zp = ap.colPivHouseholderQr().solve(bv);
    z = Eigen::VectorXd::Zero(k);
    for (std::size_t c = 0; c < cols.size(); ++c) z(cols[c]) = zp(c);
  };

  for (std::size_t round = 0; round < 3 * k + 10; ++round) {
    const Eigen::VectorXd w = a.transpose() * (bv - a * x);
    int enter = -1;
    double best = tol;
    for (std::size_t j = 0; j < k; ++j) {
      if (!passive[j] && w(j) > best) {  // strict: ties keep the lowest index
        best = w(j);
        enter = static_cast<int>(j);
      }
    }
    if (enter < 0) break;
    passive[enter] = true;

    Eigen::VectorXd z;
    solve_passive(z);
    for (int guard = 0; guard < static_cast<int>(k) + 1; ++guard) {
      double zmin = 0;
      for (std::size_t j = 0; j < k; ++j) {
        if (passive[j]) zmin = std::min(zmin, z(j));
      }
      if (zmin > -1e-12) break;
      double alpha = 1.0;
      for (std::size_t j = 0; j < k; ++j) {
        if (passive[j] && z(j) <= 0 && x(j) - z(j) > 0) {
          alpha = std::min(alpha, x(j) / (x(j) - z(j)));
        }
      }
      x += alpha * (z - x);
      for (std::size_t j = 0; j < k; ++j) {
        if (passive[j] && x(j) <= 1e-14) {
          x(j) = 0;
          passive[j] = false;
        }
      }
      solve_passive(z);
    }
    x = z.cwiseMax(0.0);
  }

  std::vector<double> out(k);
  for (std::size_t j = 0; j < k; ++j) out[j] = x(j);
  return out;
}

std::vector<std::vector<double>> super_learner_oof(const FeatureTable& train,
                                                   const LearnerConfig& lc,
                                                   std::uint64_t seed) {
  Preprocessor prep;
  prep.fit(train.rows);
  return oof_matrix(prep.transform(train.rows), train.labels, lc, seed);
}

TrainedEnsemble fit_super_learner(const FeatureTable& train,
                                  const LearnerConfig& lc,
                                  std::uint64_t seed) {
  if (train.n() < 20) {
    throw DatasetError("super learner needs at least 20 rows, got " +
                       std::to_string(train.n()));
  }
  TrainedEnsemble model;
  model.hp = lc;
  model.seed = seed;
  model.feature_names = train.names;
  model.prep.fit(train.rows);
  const std::vector<std::vector<double>> xs = model.prep.transform(train.rows);

  const auto z = oof_matrix(xs, train.labels, lc, seed);
  std::vector<double> yv(train.labels.begin(), train.labels.end());
  const std::vector<double> raw_w = nnls(z, yv);

  const double total = std::accumulate(raw_w.begin(), raw_w.end(), 0.0);
  if (total > 0) {
    for (std::size_t m = 0; m < 5; ++m) model.weights[m] = raw_w[m] / total;
  } else {
    model.weights.fill(0.2);
  }

  const BaseFits fits =
      fit_bases(xs, train.labels, lc, derive_seed(seed, seed_tag("full")));
  model.logistic = fits.logistic;
  model.lasso = fits.lasso;
  model.svm = fits.svm;
  model.bagging = fits.bagging;
  model.forest = fits.forest;
  return model;
}

std::array<double, 5> TrainedEnsemble::base_probabilities(
    const std::vector<double>& raw) const {
  if (raw.size() != feature_names.size()) {
    std::string msg = "ensemble: expected " +
                      std::to_string(feature_names.size()) + " features (";
    for (std::size_t i = 0; i < feature_names.size(); ++i) {
      if (i) msg += ",";
      msg += feature_names[i];
    }
    msg += "), got " + std::to_string(raw.size());
    throw InputError(msg);
  }
  const std::vector<double> x = prep.transform(raw);
  return {logistic.predict_proba(x), lasso.model.predict_proba(x),
          svm.predict_proba(x), bagging.predict(x), forest.predict(x)};
}

double TrainedEnsemble::predict_proba(const std::vector<double>& raw) const {
  const auto probs = base_probabilities(raw);
  double p = 0;
  for (std::size_t m = 0; m < 5; ++m) p += weights[m] * probs[m];
  return p;
}

}  // namespace cartelscreen
