#include "nerb/logreg.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "nerb/metrics.hpp"

namespace nerb {

namespace {

double log1p_exp(double x) {
  // log(1 + exp(x)) without overflow
  if (x > 0.0) return x + std::log1p(std::exp(-x));
  return std::log1p(std::exp(x));
}

}  // namespace

double logistic_loss(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                     const Eigen::VectorXd& w, double bias, double lambda) {
  const Eigen::VectorXd margins = ((x * w).array() + bias) * y.array();
  double loss = 0.0;
  for (Eigen::Index i = 0; i < margins.size(); ++i) {
    loss += log1p_exp(-margins(i));
  }
  loss /= static_cast<double>(x.rows());
  loss += 0.5 * lambda * w.squaredNorm();
  return loss;
}

void logistic_grad(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                   const Eigen::VectorXd& w, double bias, double lambda,
                   Eigen::VectorXd& grad_w, double& grad_b) {
  const Eigen::VectorXd margins = ((x * w).array() + bias) * y.array();
  Eigen::VectorXd coeff(margins.size());
  for (Eigen::Index i = 0; i < margins.size(); ++i) {
    // d/dm log(1+exp(-m)) = -sigmoid(-m)
    coeff(i) = -y(i) / (1.0 + std::exp(margins(i)));
  }
  const double inv_n = 1.0 / static_cast<double>(x.rows());
  grad_w = inv_n * (x.transpose() * coeff) + lambda * w;
  grad_b = inv_n * coeff.sum();
}

BinaryLogReg fit_logistic(const Eigen::MatrixXd& x,
                          const std::vector<int>& y01, double lambda,
                          double tol, int max_iter) {
  if (static_cast<std::size_t>(x.rows()) != y01.size() || x.rows() == 0) {
    throw std::invalid_argument("fit_logistic: bad shapes");
  }
  Eigen::VectorXd y(x.rows());
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    y(i) = y01[i] > 0 ? 1.0 : -1.0;
  }
  Eigen::VectorXd w = Eigen::VectorXd::Zero(x.cols());
  double bias = 0.0;
  Eigen::VectorXd grad_w(x.cols());
  double grad_b = 0.0;
  double step = 1.0;
  double loss = logistic_loss(x, y, w, bias, lambda);
  for (int it = 0; it < max_iter; ++it) {
    logistic_grad(x, y, w, bias, lambda, grad_w, grad_b);
    const double gnorm =
        std::sqrt(grad_w.squaredNorm() + grad_b * grad_b);
    if (gnorm <= tol) break;
    // Armijo backtracking from the last accepted step (allowed to grow).
    step = std::min(step * 2.0, 1e4);
    const double g2 = gnorm * gnorm;
    while (true) {
      const Eigen::VectorXd w_new = w - step * grad_w;
      const double b_new = bias - step * grad_b;
      const double loss_new = logistic_loss(x, y, w_new, b_new, lambda);
      if (loss_new <= loss - 1e-4 * step * g2 || step < 1e-12) {
        w = w_new;
        bias = b_new;
        loss = loss_new;
        break;
      }
      step *= 0.5;
    }
  }
  return BinaryLogReg{std::move(w), bias};
}

int OvrClassifier::predict(const Eigen::RowVectorXd& x) const {
  int best = 0;
  double best_score = models.empty() ? 0.0 : models[0].score(x);
  for (std::size_t c = 1; c < models.size(); ++c) {
    const double s = models[c].score(x);
    if (s > best_score) {
      best_score = s;
      best = static_cast<int>(c);
    }
  }
  return best;
}

std::vector<int> OvrClassifier::predict(const Eigen::MatrixXd& x) const {
  std::vector<int> out(x.rows());
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    out[i] = predict(Eigen::RowVectorXd(x.row(i)));
  }
  return out;
}

namespace {

OvrClassifier fit_all(const Eigen::MatrixXd& x, const std::vector<int>& labels,
                      int num_classes, double lambda) {
  OvrClassifier clf;
  clf.chosen_lambda = lambda;
  clf.models.reserve(num_classes);
  std::vector<int> binary(labels.size());
  for (int c = 0; c < num_classes; ++c) {
    bool any_pos = false, any_neg = false;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      binary[i] = labels[i] == c ? 1 : 0;
      (binary[i] ? any_pos : any_neg) = true;
    }
    if (!any_pos || !any_neg) {
      // constant model: strongly for/against depending on presence
      BinaryLogReg m;
      m.w = Eigen::VectorXd::Zero(x.cols());
      m.bias = any_pos ? 1.0 : -1.0;
      clf.models.push_back(std::move(m));
      continue;
    }
    clf.models.push_back(fit_logistic(x, binary, lambda));
  }
  return clf;
}

// Stratified fold assignment: class members shuffled, dealt round-robin.
std::vector<int> stratified_folds(const std::vector<int>& labels,
                                  int num_classes, int folds, Rng& rng) {
  std::vector<int> fold_of(labels.size(), 0);
  for (int c = 0; c < num_classes; ++c) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (labels[i] == c) members.push_back(i);
    }
    for (std::size_t i = members.size(); i > 1; --i) {
      std::swap(members[i - 1], members[rng.uniform_index(i)]);
    }
    for (std::size_t i = 0; i < members.size(); ++i) {
      fold_of[members[i]] = static_cast<int>(i % folds);
    }
  }
  return fold_of;
}

}  // namespace

OvrClassifier train_logreg_ovr(const Eigen::MatrixXd& x,
                               const std::vector<int>& labels, int folds,
                               const std::vector<double>& reg_grid, Rng& rng) {
  if (static_cast<std::size_t>(x.rows()) != labels.size() || x.rows() == 0) {
    throw std::invalid_argument("train_logreg_ovr: bad shapes");
  }
  if (reg_grid.empty()) {
    throw std::invalid_argument("train_logreg_ovr: empty regularization grid");
  }
  std::set<int> classes(labels.begin(), labels.end());
  const int num_classes = *classes.rbegin() + 1;
  if (classes.size() < 2) {
    // Single-class training data: constant classifier.
    return fit_all(x, labels, num_classes, reg_grid.front());
  }
  // Reduce the fold count when the smallest class cannot fill the folds.
  std::size_t min_class = labels.size();
  for (int c : classes) {
    min_class = std::min<std::size_t>(
        min_class, std::count(labels.begin(), labels.end(), c));
  }
  folds = std::max(2, std::min<int>(folds, static_cast<int>(min_class)));

  const std::vector<int> fold_of =
      stratified_folds(labels, num_classes, folds, rng);

  std::vector<double> grid = reg_grid;
  std::sort(grid.begin(), grid.end());  // ties below prefer smaller strength
  double best_lambda = grid.front();
  double best_score = -1.0;
  for (double lambda : grid) {
    double score_sum = 0.0;
    int scored = 0;
    for (int f = 0; f < folds; ++f) {
      std::vector<Eigen::Index> train_rows, val_rows;
      for (std::size_t i = 0; i < labels.size(); ++i) {
        (fold_of[i] == f ? val_rows : train_rows)
            .push_back(static_cast<Eigen::Index>(i));
      }
      if (train_rows.empty() || val_rows.empty()) continue;
      Eigen::MatrixXd xt(train_rows.size(), x.cols());
      std::vector<int> yt(train_rows.size());
      for (std::size_t i = 0; i < train_rows.size(); ++i) {
        xt.row(i) = x.row(train_rows[i]);
        yt[i] = labels[train_rows[i]];
      }
      OvrClassifier clf = fit_all(xt, yt, num_classes, lambda);
      std::vector<int> yv(val_rows.size()), pv(val_rows.size());
      for (std::size_t i = 0; i < val_rows.size(); ++i) {
        yv[i] = labels[val_rows[i]];
        pv[i] = clf.predict(Eigen::RowVectorXd(x.row(val_rows[i])));
      }
      score_sum += f1_scores(yv, pv).micro;
      ++scored;
    }
    const double score = scored > 0 ? score_sum / scored : 0.0;
    if (score > best_score) {  // strict: ties keep the earlier, smaller lambda
      best_score = score;
      best_lambda = lambda;
    }
  }
  return fit_all(x, labels, num_classes, best_lambda);
}

}  // namespace nerb
