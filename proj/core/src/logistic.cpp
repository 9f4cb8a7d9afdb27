#include "cartelscreen/logistic.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "cartelscreen/errors.hpp"

namespace cartelscreen {
namespace {

// log(1 + e^eta) without overflow
double log1pexp(double eta) {
  if (eta > 35) return eta;
  if (eta < -35) return std::exp(eta);
  return std::log1p(std::exp(eta));
}

void check_inputs(const std::vector<std::vector<double>>& X,
                  const std::vector<int>& y) {
  if (X.size() != y.size() || X.empty()) {
    throw InputError("logistic: bad training data shape");
  }
  int pos = 0;
  for (const int v : y) pos += v;
  if (pos < 2 || static_cast<int>(y.size()) - pos < 2) {
    throw InputError("logistic: need at least 2 examples per class");
  }
}

}  // namespace

double sigmoid(double eta) {
  if (eta >= 0) return 1.0 / (1.0 + std::exp(-eta));
  const double e = std::exp(eta);
  return e / (1.0 + e);
}

double LinearModel::linear(const std::vector<double>& x) const {
  if (x.size() != coef.size()) {
    throw InputError("linear model: expected " + std::to_string(coef.size()) +
                     " features, got " + std::to_string(x.size()));
  }
  double eta = intercept;
  for (std::size_t j = 0; j < coef.size(); ++j) eta += coef[j] * x[j];
  return eta;
}

double LinearModel::predict_proba(const std::vector<double>& x) const {
  return sigmoid(linear(x));
}

double logistic_nll(const std::vector<std::vector<double>>& X,
                    const std::vector<int>& y, double intercept,
                    const std::vector<double>& coef, double ridge) {
  double nll = 0;
  for (std::size_t i = 0; i < X.size(); ++i) {
    double eta = intercept;
    for (std::size_t j = 0; j < coef.size(); ++j) eta += coef[j] * X[i][j];
    nll += log1pexp(eta) - (y[i] ? eta : 0.0);
  }
  double pen = 0;
  for (const double c : coef) pen += c * c;
  return nll + 0.5 * ridge * pen;
}

std::vector<double> logistic_gradient(const std::vector<std::vector<double>>& X,
                                      const std::vector<int>& y,
                                      double intercept,
                                      const std::vector<double>& coef,
                                      double ridge) {
  const std::size_t p = coef.size();
  std::vector<double> g(p + 1, 0.0);
  for (std::size_t i = 0; i < X.size(); ++i) {
    double eta = intercept;
    for (std::size_t j = 0; j < p; ++j) eta += coef[j] * X[i][j];
    const double r = sigmoid(eta) - y[i];
    g[0] += r;
    for (std::size_t j = 0; j < p; ++j) g[j + 1] += r * X[i][j];
  }
  for (std::size_t j = 0; j < p; ++j) g[j + 1] += ridge * coef[j];
  return g;
}

LinearModel fit_logistic(const std::vector<std::vector<double>>& X,
                         const std::vector<int>& y, const LearnerConfig& lc) {
  check_inputs(X, y);
  const std::size_t n = X.size();
  const std::size_t p = X[0].size();

  Eigen::MatrixXd design(n, p + 1);
  for (std::size_t i = 0; i < n; ++i) {
    design(i, 0) = 1.0;
    for (std::size_t j = 0; j < p; ++j) design(i, j + 1) = X[i][j];
  }

  Eigen::VectorXd yv(n);
  for (std::size_t i = 0; i < n; ++i) yv(i) = y[i];

  Eigen::VectorXd beta = Eigen::VectorXd::Zero(p + 1);
  LinearModel model;
  model.coef.assign(p, 0.0);

  for (int iter = 0; iter < lc.logistic_max_iter; ++iter) {
    const Eigen::VectorXd eta = design * beta;
    Eigen::VectorXd mu(n), w(n);
    for (std::size_t i = 0; i < n; ++i) {
      mu(i) = sigmoid(eta(i));
      w(i) = std::max(mu(i) * (1.0 - mu(i)), 1e-12);
    }
    Eigen::VectorXd grad = design.transpose() * (mu - yv);
    for (std::size_t j = 1; j <= p; ++j) grad(j) += lc.logistic_ridge * beta(j);

    Eigen::MatrixXd h = design.transpose() * w.asDiagonal() * design;
    for (std::size_t j = 1; j <= p; ++j) h(j, j) += lc.logistic_ridge;
    h(0, 0) += 1e-12;  // keeps the solve well-posed under separation

    const Eigen::VectorXd step = h.ldlt().solve(grad);
    beta -= step;
    if (step.cwiseAbs().maxCoeff() < lc.logistic_tol) {
      model.converged = true;
      break;
    }
  }

  model.intercept = beta(0);
  for (std::size_t j = 0; j < p; ++j) model.coef[j] = beta(j + 1);
  return model;
}

}  // namespace cartelscreen
