#include <cmath>
#include <stdexcept>

#include "nerb/embedding.hpp"

namespace nerb {

namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// log sigmoid with a numerically safe tail
double log_sigmoid(double x) {
  if (x >= 0.0) return -std::log1p(std::exp(-x));
  return x - std::log1p(std::exp(x));
}

// Cumulative weight table for unigram^0.75 negative sampling, drawn by
// binary search on a uniform double so sampling is stream-deterministic.
class NegativeSampler {
 public:
  NegativeSampler(const WalkCorpus& corpus, std::size_t num_nodes) {
    std::vector<double> counts(num_nodes, 0.0);
    for (const auto& walk : corpus.walks) {
      for (NodeId v : walk) counts[v] += 1.0;
    }
    cumulative_.resize(num_nodes);
    double acc = 0.0;
    for (std::size_t v = 0; v < num_nodes; ++v) {
      acc += std::pow(counts[v], 0.75);
      cumulative_[v] = acc;
    }
    total_ = acc;
  }

  NodeId sample(Rng& rng) const {
    const double r = rng.uniform() * total_;
    auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), r);
    if (it == cumulative_.end()) --it;
    return static_cast<NodeId>(it - cumulative_.begin());
  }

 private:
  std::vector<double> cumulative_;
  double total_ = 0.0;
};

}  // namespace

double skipgram_pair_loss(const Eigen::VectorXd& center,
                          const Eigen::VectorXd& context,
                          const std::vector<Eigen::VectorXd>& negs) {
  double loss = -log_sigmoid(center.dot(context));
  for (const auto& n : negs) loss -= log_sigmoid(-center.dot(n));
  return loss;
}

double skipgram_pair_grad(const Eigen::VectorXd& center,
                          const Eigen::VectorXd& context,
                          const std::vector<Eigen::VectorXd>& negs,
                          Eigen::VectorXd& grad_center,
                          Eigen::VectorXd& grad_context,
                          std::vector<Eigen::VectorXd>& grad_negs) {
  const double pos = sigmoid(center.dot(context)) - 1.0;  // d loss / d (c.ctx)
  grad_center = pos * context;
  grad_context = pos * center;
  grad_negs.resize(negs.size());
  double loss = -log_sigmoid(center.dot(context));
  for (std::size_t i = 0; i < negs.size(); ++i) {
    const double dot = center.dot(negs[i]);
    const double coeff = sigmoid(dot);
    grad_center += coeff * negs[i];
    grad_negs[i] = coeff * center;
    loss -= log_sigmoid(-dot);
  }
  return loss;
}

Embedding skipgram_train(const WalkCorpus& corpus, std::size_t num_nodes,
                         const MethodConfig& cfg, Rng& rng,
                         std::vector<double>* epoch_losses) {
  if (cfg.dim < 1) throw std::invalid_argument("skipgram: dim must be >= 1");
  if (corpus.walks.empty()) {
    throw std::invalid_argument("skipgram: empty walk corpus");
  }
  const int d = cfg.dim;
  Eigen::MatrixXd center(num_nodes, d);
  Eigen::MatrixXd context = Eigen::MatrixXd::Zero(num_nodes, d);
  for (Eigen::Index i = 0; i < center.rows(); ++i) {
    for (int j = 0; j < d; ++j) {
      center(i, j) = (rng.uniform() - 0.5) / d;
    }
  }

  NegativeSampler sampler(corpus, num_nodes);

  // total pair updates, for the linear learning-rate schedule
  std::size_t total_pairs = 0;
  for (const auto& walk : corpus.walks) {
    const std::size_t len = walk.size();
    for (std::size_t c = 0; c < len; ++c) {
      const std::size_t lo = c >= static_cast<std::size_t>(cfg.window)
                                 ? c - cfg.window
                                 : 0;
      const std::size_t hi = std::min(len, c + cfg.window + 1);
      total_pairs += hi - lo - 1;
    }
  }
  total_pairs *= static_cast<std::size_t>(cfg.epochs);
  const double lr0 = cfg.learning_rate;
  const double lr_min = lr0 * 1e-4;
  std::size_t step = 0;

  Eigen::VectorXd grad_center(d);
  std::vector<NodeId> negs(cfg.negatives);

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    double loss_sum = 0.0;
    std::size_t loss_count = 0;
    for (const auto& walk : corpus.walks) {
      const std::size_t len = walk.size();
      for (std::size_t c = 0; c < len; ++c) {
        const NodeId center_node = walk[c];
        const std::size_t lo = c >= static_cast<std::size_t>(cfg.window)
                                   ? c - cfg.window
                                   : 0;
        const std::size_t hi = std::min(len, c + cfg.window + 1);
        for (std::size_t t = lo; t < hi; ++t) {
          if (t == c) continue;
          const NodeId context_node = walk[t];
          const double lr =
              std::max(lr_min, lr0 * (1.0 - static_cast<double>(step) /
                                                static_cast<double>(
                                                    total_pairs)));
          ++step;
          for (int i = 0; i < cfg.negatives; ++i) {
            negs[i] = sampler.sample(rng);
          }
          auto c_row = center.row(center_node);
          auto ctx_row = context.row(context_node);
          const double pos_dot = c_row.dot(ctx_row);
          const double pos_coeff = sigmoid(pos_dot) - 1.0;
          grad_center = pos_coeff * ctx_row.transpose();
          double loss = -log_sigmoid(pos_dot);
          context.row(context_node) -= lr * pos_coeff * c_row;
          for (int i = 0; i < cfg.negatives; ++i) {
            auto n_row = context.row(negs[i]);
            const double dot = c_row.dot(n_row);
            const double coeff = sigmoid(dot);
            loss -= log_sigmoid(-dot);
            grad_center += coeff * n_row.transpose();
            context.row(negs[i]) -= lr * coeff * c_row;
          }
          center.row(center_node) -= lr * grad_center.transpose();
          loss_sum += loss;
          ++loss_count;
        }
      }
    }
    if (epoch_losses != nullptr) {
      epoch_losses->push_back(loss_count ? loss_sum / loss_count : 0.0);
    }
  }
  return Embedding{std::move(center), "skipgram"};
}

}  // namespace nerb
