#include "nerb/metrics.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>

#include "nerb/error.hpp"

namespace nerb {

namespace {

void check_lengths(std::size_t a, std::size_t b) {
  if (a != b || a == 0) {
    throw std::invalid_argument("metric inputs must be non-empty and equal length");
  }
}

}  // namespace

F1Scores f1_scores(std::span<const int> y_true, std::span<const int> y_pred) {
  check_lengths(y_true.size(), y_pred.size());
  struct Counts {
    std::size_t tp = 0, fp = 0, fn = 0;
  };
  std::map<int, Counts> per_class;
  std::size_t correct = 0;
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    if (y_true[i] == y_pred[i]) {
      ++correct;
      ++per_class[y_true[i]].tp;
    } else {
      ++per_class[y_true[i]].fn;
      ++per_class[y_pred[i]].fp;
    }
  }
  double global_tp = 0.0, global_fp = 0.0, global_fn = 0.0;
  double macro_sum = 0.0;
  for (const auto& [cls, c] : per_class) {
    global_tp += c.tp;
    global_fp += c.fp;
    global_fn += c.fn;
    const double denom = c.tp + 0.5 * (c.fp + c.fn);
    macro_sum += denom > 0.0 ? c.tp / denom : 0.0;
  }
  F1Scores out;
  out.micro = global_tp / (global_tp + 0.5 * (global_fp + global_fn));
  out.macro = macro_sum / static_cast<double>(per_class.size());
  return out;
}

double accuracy(std::span<const int> y_true, std::span<const int> y_pred) {
  check_lengths(y_true.size(), y_pred.size());
  std::size_t correct = 0;
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    if (y_true[i] == y_pred[i]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(y_true.size());
}

double auc(std::span<const double> scores, std::span<const int> labels) {
  check_lengths(scores.size(), labels.size());
  const std::size_t n = scores.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return scores[a] < scores[b];
  });
  // Rank-sum with midranks for tied scores.
  double pos_rank_sum = 0.0;
  std::size_t pos = 0, neg = 0;
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j < n && scores[order[j]] == scores[order[i]]) ++j;
    const double midrank = 0.5 * static_cast<double>(i + j + 1);  // 1-based
    for (std::size_t k = i; k < j; ++k) {
      if (labels[order[k]] > 0) {
        pos_rank_sum += midrank;
        ++pos;
      } else {
        ++neg;
      }
    }
    i = j;
  }
  if (pos == 0 || neg == 0) {
    throw UndefinedStatistic("auc: both classes must be present");
  }
  const double u = pos_rank_sum - 0.5 * static_cast<double>(pos) *
                                      static_cast<double>(pos + 1);
  return u / (static_cast<double>(pos) * static_cast<double>(neg));
}

double average_precision(std::span<const double> scores,
                         std::span<const int> labels) {
  check_lengths(scores.size(), labels.size());
  const std::size_t n = scores.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return scores[a] > scores[b];
  });
  std::size_t total_pos = 0;
  for (int l : labels) total_pos += l > 0 ? 1 : 0;
  if (total_pos == 0) {
    throw std::invalid_argument("average_precision: no positive labels");
  }
  double ap = 0.0;
  std::size_t tp = 0;
  for (std::size_t k = 0; k < n; ++k) {
    if (labels[order[k]] > 0) {
      ++tp;
      const double precision = static_cast<double>(tp) / (k + 1);
      ap += precision / static_cast<double>(total_pos);
    }
  }
  return ap;
}

}  // namespace nerb
