#include "cartelscreen/lasso.hpp"

#include <algorithm>
#include <cmath>

#include "cartelscreen/errors.hpp"
#include "cartelscreen/folds.hpp"
#include "cartelscreen/rng.hpp"

namespace cartelscreen {
namespace {

double soft_threshold(double rho, double lambda) {
  if (rho > lambda) return rho - lambda;
  if (rho < -lambda) return rho + lambda;
  return 0.0;
}

double deviance(const std::vector<std::vector<double>>& X,
                const std::vector<int>& y, const LinearModel& m) {
  double dev = 0;
  for (std::size_t i = 0; i < X.size(); ++i) {
    double p = m.predict_proba(X[i]);
    p = std::min(1.0 - 1e-12, std::max(1e-12, p));
    dev += y[i] ? -2.0 * std::log(p) : -2.0 * std::log(1.0 - p);
  }
  return dev;
}

std::vector<double> lambda_path(double lambda_max, const LearnerConfig& lc) {
  if (lambda_max <= 0) return {0.0};
  std::vector<double> path;
  path.reserve(lc.lasso_path_points);
  const int last = lc.lasso_path_points - 1;
  for (int k = 0; k <= last; ++k) {
    const double frac = last == 0 ? 1.0 : static_cast<double>(k) / last;
    path.push_back(lambda_max * std::pow(lc.lasso_min_ratio, frac));
  }
  return path;
}

}  // namespace

double lasso_lambda_max(const std::vector<std::vector<double>>& X,
                        const std::vector<int>& y) {
  const std::size_t n = X.size();
  if (n == 0) throw InputError("lasso: empty training data");
  const std::size_t p = X[0].size();
  double ybar = 0;
  for (const int v : y) ybar += v;
  ybar /= static_cast<double>(n);
  double best = 0;
  for (std::size_t j = 0; j < p; ++j) {
    double g = 0;
    for (std::size_t i = 0; i < n; ++i) g += X[i][j] * (y[i] - ybar);
    best = std::max(best, std::abs(g) / static_cast<double>(n));
  }
  return best;
}

LinearModel fit_lasso_at(const std::vector<std::vector<double>>& X,
                         const std::vector<int>& y, double lambda,
                         const LearnerConfig& lc, const LinearModel* warm) {
  const std::size_t n = X.size();
  if (n == 0 || X[0].empty()) throw InputError("lasso: empty training data");
  const std::size_t p = X[0].size();

  LinearModel m;
  if (warm && warm->coef.size() == p) {
    m = *warm;
  } else {
    double ybar = 0;
    for (const int v : y) ybar += v;
    ybar /= static_cast<double>(n);
    ybar = std::min(1.0 - 1e-9, std::max(1e-9, ybar));
    m.intercept = std::log(ybar / (1.0 - ybar));
    m.coef.assign(p, 0.0);
  }

  std::vector<double> eta(n), w(n), z(n), resid(n);
  std::vector<double> xw2(p);  // (1/n) sum_i w_i x_ij^2
  constexpr int kOuterCap = 50;
  m.converged = false;

  for (int outer = 0; outer < kOuterCap; ++outer) {
    // quadratic expansion at the current coefficients
    for (std::size_t i = 0; i < n; ++i) {
      eta[i] = m.intercept;
      for (std::size_t j = 0; j < p; ++j) eta[i] += m.coef[j] * X[i][j];
      const double mu = sigmoid(eta[i]);
      w[i] = std::max(mu * (1.0 - mu), 1e-5);
      z[i] = eta[i] + (y[i] - mu) / w[i];
      resid[i] = z[i] - eta[i];
    }
    double wsum = 0;
    for (std::size_t i = 0; i < n; ++i) wsum += w[i];
    for (std::size_t j = 0; j < p; ++j) {
      double s = 0;
      for (std::size_t i = 0; i < n; ++i) s += w[i] * X[i][j] * X[i][j];
      xw2[j] = s / static_cast<double>(n);
    }

    double outer_change = 0;
    for (int sweep = 0; sweep < lc.lasso_max_sweeps; ++sweep) {
      double change = 0;

      double num = 0;
      for (std::size_t i = 0; i < n; ++i) num += w[i] * resid[i];
      const double db0 = num / wsum;
      if (db0 != 0) {
        m.intercept += db0;
        for (std::size_t i = 0; i < n; ++i) resid[i] -= db0;
        change = std::max(change, std::abs(db0));
      }

      for (std::size_t j = 0; j < p; ++j) {
        if (xw2[j] <= 0) continue;  // constant-zero column
        double rho = 0;
        for (std::size_t i = 0; i < n; ++i) rho += w[i] * X[i][j] * resid[i];
        rho = rho / static_cast<double>(n) + xw2[j] * m.coef[j];
        const double updated = soft_threshold(rho, lambda) / xw2[j];
        const double delta = updated - m.coef[j];
        if (delta != 0) {
          m.coef[j] = updated;
          for (std::size_t i = 0; i < n; ++i) resid[i] -= delta * X[i][j];
          change = std::max(change, std::abs(delta));
        }
      }
      outer_change = std::max(outer_change, change);
      if (change < lc.lasso_tol) break;
    }
    if (outer_change < lc.lasso_tol) {
      m.converged = true;
      break;
    }
    // quasi-separation: the optimum runs off to infinity and every extra
    // IRLS pass just burns sweeps; on standardized features a coefficient
    // this large is already saturated, so accept the fit as-is
    double extreme = std::abs(m.intercept);
    for (const double b : m.coef) extreme = std::max(extreme, std::abs(b));
    if (extreme > 30.0) break;
  }
  return m;
}

LassoModel fit_lasso(const std::vector<std::vector<double>>& X,
                     const std::vector<int>& y, const LearnerConfig& lc,
                     std::uint64_t seed) {
  LassoModel out;
  out.path = lambda_path(lasso_lambda_max(X, y), lc);

  const std::vector<int> folds =
      stratified_folds(y, lc.lasso_cv_folds, derive_seed(seed, seed_tag("lasso_cv")));
  std::vector<double> cv_dev(out.path.size(), 0.0);

  for (int f = 0; f < lc.lasso_cv_folds; ++f) {
    std::vector<std::vector<double>> xtr, xval;
    std::vector<int> ytr, yval;
    for (std::size_t i = 0; i < X.size(); ++i) {
      if (folds[i] == f) {
        xval.push_back(X[i]);
        yval.push_back(y[i]);
      } else {
        xtr.push_back(X[i]);
        ytr.push_back(y[i]);
      }
    }
    LinearModel warm;
    for (std::size_t k = 0; k < out.path.size(); ++k) {
      warm = fit_lasso_at(xtr, ytr, out.path[k], lc, k ? &warm : nullptr);
      cv_dev[k] += deviance(xval, yval, warm);
    }
  }

  // path is descending, so scanning with a strict '<' keeps the larger
  // lambda on ties
  std::size_t best = 0;
  for (std::size_t k = 1; k < out.path.size(); ++k) {
    if (cv_dev[k] < cv_dev[best]) best = k;
  }
  out.lambda = out.path[best];

  LinearModel warm;
  for (std::size_t k = 0; k <= best; ++k) {
    warm = fit_lasso_at(X, y, out.path[k], lc, k ? &warm : nullptr);
  }
  out.model = warm;
  return out;
}

}  // namespace cartelscreen
