#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <vector>

#include <doctest.h>

#include "nerb/error.hpp"
#include "nerb/metrics.hpp"
#include "nerb/rng.hpp"

using namespace nerb;

namespace {

// confusion-matrix brute force
std::pair<double, double> f1_oracle(const std::vector<int>& y_true,
                                    const std::vector<int>& y_pred) {
  std::set<int> classes(y_true.begin(), y_true.end());
  classes.insert(y_pred.begin(), y_pred.end());
  double tp_all = 0, fp_all = 0, fn_all = 0, macro = 0;
  for (int c : classes) {
    double tp = 0, fp = 0, fn = 0;
    for (std::size_t i = 0; i < y_true.size(); ++i) {
      const bool t = y_true[i] == c, p = y_pred[i] == c;
      tp += t && p;
      fp += !t && p;
      fn += t && !p;
    }
    tp_all += tp;
    fp_all += fp;
    fn_all += fn;
    macro += (tp + fp + fn) == 0 ? 0.0 : tp / (tp + 0.5 * (fp + fn));
  }
  const double micro = tp_all / (tp_all + 0.5 * (fp_all + fn_all));
  return {micro, macro / static_cast<double>(classes.size())};
}

// Mann-Whitney brute force: fraction of (pos, neg) pairs won, ties half
double auc_oracle(const std::vector<double>& scores,
                  const std::vector<int>& y) {
  double wins = 0, pairs = 0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (y[i] != 1) continue;
    for (std::size_t j = 0; j < y.size(); ++j) {
      if (y[j] != 0) continue;
      pairs += 1;
      if (scores[i] > scores[j]) wins += 1;
      else if (scores[i] == scores[j]) wins += 0.5;
    }
  }
  if (pairs == 0) throw UndefinedStatistic("one class");
  return wins / pairs;
}

// step-wise PR curve: sum precision at each positive hit
double ap_oracle(std::vector<double> scores, std::vector<int> y) {
  std::vector<std::size_t> order(scores.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return scores[a] > scores[b];
  });
  double tp = 0, total_pos = 0, sum = 0;
  for (int v : y) total_pos += v;
  for (std::size_t k = 0; k < order.size(); ++k) {
    if (y[order[k]] == 1) {
      tp += 1;
      sum += tp / static_cast<double>(k + 1);
    }
  }
  return sum / total_pos;
}

F1Scores f1v(std::vector<int> t, std::vector<int> p) { return f1_scores(t, p); }
double accv(std::vector<int> t, std::vector<int> p) { return accuracy(t, p); }
double aucv(std::vector<double> s, std::vector<int> y) { return auc(s, y); }
double apv(std::vector<double> s, std::vector<int> y) {
  return average_precision(s, y);
}

}  // namespace

TEST_CASE("f1 micro/macro against confusion-matrix oracle") {
  Rng rng(404);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 5 + rng.uniform_index(60);
    const int classes = 2 + static_cast<int>(rng.uniform_index(5));
    std::vector<int> y_true(n), y_pred(n);
    for (std::size_t i = 0; i < n; ++i) {
      y_true[i] = static_cast<int>(rng.uniform_index(classes));
      y_pred[i] = static_cast<int>(rng.uniform_index(classes));
    }
    const auto got = f1_scores(y_true, y_pred);
    const auto [micro, macro] = f1_oracle(y_true, y_pred);
    CHECK(got.micro == doctest::Approx(micro).epsilon(1e-12));
    CHECK(got.macro == doctest::Approx(macro).epsilon(1e-12));
  }
}

TEST_CASE("f1 exact cases") {
  const auto perfect = f1v({0, 1, 2, 1}, {0, 1, 2, 1});
  CHECK(perfect.micro == 1.0);
  CHECK(perfect.macro == 1.0);
  const auto wrong = f1v({0, 0, 0}, {1, 1, 1});
  CHECK(wrong.micro == 0.0);
  CHECK(wrong.macro == 0.0);
}

TEST_CASE("accuracy") {
  CHECK(accv({1, 2, 3}, {1, 2, 3}) == 1.0);
  CHECK(accv({1, 2, 3}, {1, 2, 4}) == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("AUC against pairwise Mann-Whitney oracle") {
  Rng rng(77);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 4 + rng.uniform_index(50);
    std::vector<double> scores(n);
    std::vector<int> y(n);
    bool has0 = false, has1 = false;
    for (std::size_t i = 0; i < n; ++i) {
      // coarse grid so ties actually occur
      scores[i] = std::floor(rng.uniform() * 8) / 8.0;
      y[i] = rng.coin() ? 1 : 0;
      (y[i] ? has1 : has0) = true;
    }
    if (!has0 || !has1) {
      CHECK_THROWS_AS(auc(scores, y), UndefinedStatistic);
      continue;
    }
    CHECK(auc(scores, y) == doctest::Approx(auc_oracle(scores, y)).epsilon(1e-12));
  }
}

TEST_CASE("AUC exact cases") {
  CHECK(aucv({0.9, 0.8, 0.2, 0.1}, {1, 1, 0, 0}) == 1.0);
  CHECK(aucv({0.1, 0.2, 0.8, 0.9}, {1, 1, 0, 0}) == 0.0);
  CHECK(aucv({0.5, 0.5, 0.5, 0.5}, {1, 1, 0, 0}) == 0.5);
  CHECK_THROWS_AS(aucv({0.1, 0.2}, {1, 1}), UndefinedStatistic);
}

TEST_CASE("average precision against step-wise oracle") {
  Rng rng(31);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 4 + rng.uniform_index(50);
    std::vector<double> scores(n);
    std::vector<int> y(n);
    bool has1 = false;
    for (std::size_t i = 0; i < n; ++i) {
      scores[i] = rng.uniform();
      y[i] = rng.uniform() < 0.3 ? 1 : 0;
      has1 |= y[i] == 1;
    }
    if (!has1) y[0] = 1;
    CHECK(average_precision(scores, y) ==
          doctest::Approx(ap_oracle(scores, y)).epsilon(1e-12));
  }
}

TEST_CASE("average precision exact cases") {
  // positives ranked 1st and 3rd: (1/1 + 2/3) / 2
  CHECK(apv({0.9, 0.5, 0.4, 0.1}, {1, 0, 1, 0}) ==
        doctest::Approx((1.0 + 2.0 / 3.0) / 2.0));
  CHECK(apv({0.9, 0.8}, {1, 1}) == 1.0);
}
