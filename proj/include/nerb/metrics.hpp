#pragma once

#include <span>
#include <utility>
#include <vector>

namespace nerb {

struct F1Scores {
  double micro = 0.0;
  double macro = 0.0;
};

// Single-label multiclass F1. Micro pools TP/FP/FN over all classes (and
// equals accuracy here); macro averages per-class F1 over classes present
// in y_true or y_pred (a class never predicted but present in y_true
// contributes 0).
F1Scores f1_scores(std::span<const int> y_true, std::span<const int> y_pred);

double accuracy(std::span<const int> y_true, std::span<const int> y_pred);

// Mann-Whitney AUC: probability that a random positive outscores a random
// negative, ties counted 1/2. Throws UndefinedStatistic when only one
// class is present.
double auc(std::span<const double> scores, std::span<const int> labels);

// Step-wise average precision over the score-descending ranking; ties keep
// stable input order. Throws std::invalid_argument when no positives.
double average_precision(std::span<const double> scores,
                         std::span<const int> labels);

}  // namespace nerb
