#pragma once

#include <vector>

#include <Eigen/Dense>

#include "nerb/rng.hpp"

namespace nerb {

// L2-regularized binary logistic loss (mean over rows; bias unregularized):
//   L(w, b) = (1/n) sum_i log(1 + exp(-y_i (x_i . w + b))) + (lambda/2) |w|^2
// with y in {-1, +1}. Exposed for the finite-difference gradient check.
double logistic_loss(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                     const Eigen::VectorXd& w, double bias, double lambda);
void logistic_grad(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                   const Eigen::VectorXd& w, double bias, double lambda,
                   Eigen::VectorXd& grad_w, double& grad_b);

struct BinaryLogReg {
  Eigen::VectorXd w;
  double bias = 0.0;

  double score(const Eigen::RowVectorXd& x) const {
    return x.dot(w) + bias;
  }
  Eigen::VectorXd scores(const Eigen::MatrixXd& x) const {
    return (x * w).array() + bias;
  }
};

// Gradient descent with Armijo backtracking, stopping at gradient norm
// <= tol or max_iter iterations.
BinaryLogReg fit_logistic(const Eigen::MatrixXd& x,
                          const std::vector<int>& y01, double lambda,
                          double tol = 1e-4, int max_iter = 1000);

// One-versus-rest multiclass classifier. Prediction is the argmax of the
// per-class raw scores, ties resolved toward the lowest class id.
struct OvrClassifier {
  std::vector<BinaryLogReg> models;  // one per class id 0..C-1
  double chosen_lambda = 0.0;

  int predict(const Eigen::RowVectorXd& x) const;
  std::vector<int> predict(const Eigen::MatrixXd& x) const;
};

// 5-fold (or fewer when a class is too small) stratified cross-validation
// over reg_grid by f1_micro; ties prefer the smaller strength. The winning
// strength is refit on all data. Single-class input yields a constant
// classifier.
OvrClassifier train_logreg_ovr(const Eigen::MatrixXd& x,
                               const std::vector<int>& labels, int folds,
                               const std::vector<double>& reg_grid, Rng& rng);

inline const std::vector<double>& default_reg_grid() {
  static const std::vector<double> grid{1e-4, 1e-3, 1e-2, 1e-1, 1.0};
  return grid;
}

}  // namespace nerb
