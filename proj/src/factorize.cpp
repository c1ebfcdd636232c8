#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

#include "nerb/embedding.hpp"
#include "nerb/linalg.hpp"

namespace nerb {

namespace {

constexpr std::size_t kMaxDenseNodes = 20000;  // O(N^2) memory guard

void check_size(const Graph& g) {
  if (g.num_nodes() > kMaxDenseNodes) {
    throw std::invalid_argument(
        "factorization methods materialize dense N x N matrices; refusing N=" +
        std::to_string(g.num_nodes()));
  }
}

// Row-stochastic transition matrix; degree-0 rows stay zero.
Eigen::MatrixXd transition_matrix(const Graph& g) {
  Eigen::MatrixXd p = adjacency_matrix(g);
  for (Eigen::Index i = 0; i < p.rows(); ++i) {
    const double deg = p.row(i).sum();
    if (deg > 0.0) p.row(i) /= deg;
  }
  return p;
}

// U * diag(sqrt(s)), with zero-padding up to `dim` columns when the rank
// available is smaller than requested.
Eigen::MatrixXd scaled_factor(const Eigen::MatrixXd& u,
                              const Eigen::VectorXd& s, Eigen::Index dim) {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(u.rows(), dim);
  for (Eigen::Index j = 0; j < u.cols(); ++j) {
    out.col(j) = u.col(j) * std::sqrt(std::max(0.0, s(j)));
  }
  return out;
}

}  // namespace

Embedding hope_embed(const Graph& g, int dim, double katz_beta) {
  check_size(g);
  if (dim < 2 || dim % 2 != 0) {
    throw std::invalid_argument("hope: dim must be even and >= 2");
  }
  const auto n = static_cast<Eigen::Index>(g.num_nodes());
  Eigen::MatrixXd a = adjacency_matrix(g);
  double beta = katz_beta;
  if (g.num_edges() == 0) {
    // Katz similarity of the empty graph is identically zero.
    return Embedding{Eigen::MatrixXd::Zero(n, dim), "hope"};
  }
  const double rho = spectral_radius(a);
  if (beta == 0.0) beta = 0.5 / rho;
  if (beta * rho >= 1.0) {
    throw std::invalid_argument(
        "hope: katz_beta=" + std::to_string(beta) +
        " diverges; must be below 1/spectral_radius = " +
        std::to_string(1.0 / rho));
  }
  // S = (I - bA)^{-1} bA
  Eigen::MatrixXd lhs = Eigen::MatrixXd::Identity(n, n) - beta * a;
  Eigen::MatrixXd s = lhs.partialPivLu().solve(beta * a);
  const int rank = static_cast<int>(std::min<Eigen::Index>(dim / 2, n));
  TruncatedSvd svd = truncated_svd(s, rank);
  Eigen::MatrixXd x(n, dim);
  x.leftCols(dim / 2) = scaled_factor(svd.u, svd.singular_values, dim / 2);
  x.rightCols(dim / 2) = scaled_factor(svd.v, svd.singular_values, dim / 2);
  return Embedding{std::move(x), "hope"};
}

Embedding netmf_embed(const Graph& g, int dim, int window, double negatives) {
  check_size(g);
  if (dim < 1) throw std::invalid_argument("netmf: dim must be >= 1");
  if (window < 1) throw std::invalid_argument("netmf: window must be >= 1");
  if (negatives <= 0.0) {
    throw std::invalid_argument("netmf: negatives must be positive");
  }
  const auto n = static_cast<Eigen::Index>(g.num_nodes());
  if (g.num_edges() == 0) {
    return Embedding{Eigen::MatrixXd::Zero(n, dim), "netmf"};
  }
  const Eigen::MatrixXd p = transition_matrix(g);
  Eigen::MatrixXd p_power = Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd p_sum = Eigen::MatrixXd::Zero(n, n);
  for (int r = 0; r < window; ++r) {
    p_power = p_power * p;
    p_sum += p_power;
  }
  const double vol = 2.0 * static_cast<double>(g.num_edges());
  // M' = max(vol/(b T) * (sum_r P^r) D^{-1}, 1); isolated nodes keep zero
  // columns which the max then lifts to 1 (log 0).
  Eigen::MatrixXd m = p_sum * (vol / (negatives * window));
  for (Eigen::Index j = 0; j < n; ++j) {
    const double deg = static_cast<double>(g.degree(static_cast<NodeId>(j)));
    if (deg > 0.0) {
      m.col(j) /= deg;
    } else {
      m.col(j).setZero();
    }
  }
  Eigen::MatrixXd log_m =
      m.array().max(1.0).log().matrix();
  const int rank = static_cast<int>(std::min<Eigen::Index>(dim, n));
  TruncatedSvd svd = truncated_svd(log_m, rank);
  return Embedding{scaled_factor(svd.u, svd.singular_values, dim), "netmf"};
}

Embedding grarep_embed(const Graph& g, int dim, int k_steps) {
  check_size(g);
  if (k_steps < 1) throw std::invalid_argument("grarep: K must be >= 1");
  if (dim < 1 || dim % k_steps != 0) {
    throw std::invalid_argument("grarep: K must divide dim");
  }
  const auto n = static_cast<Eigen::Index>(g.num_nodes());
  if (g.num_edges() == 0) {
    return Embedding{Eigen::MatrixXd::Zero(n, dim), "grarep"};
  }
  const int block = dim / k_steps;
  const Eigen::MatrixXd p = transition_matrix(g);
  Eigen::MatrixXd p_power = Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd x(n, dim);
  const double log_shift = std::log(1.0 / static_cast<double>(n));
  for (int k = 0; k < k_steps; ++k) {
    p_power = p_power * p;
    // positive-shifted log: log(P^k_ij) - log(1/N), negatives clipped to 0
    Eigen::MatrixXd xk(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) {
        const double v = p_power(i, j);
        xk(i, j) = v > 0.0 ? std::max(0.0, std::log(v) - log_shift) : 0.0;
      }
    }
    const int rank = static_cast<int>(std::min<Eigen::Index>(block, n));
    TruncatedSvd svd = truncated_svd(xk, rank);
    x.middleCols(static_cast<Eigen::Index>(k) * block, block) =
        scaled_factor(svd.u, svd.singular_values, block);
  }
  return Embedding{std::move(x), "grarep"};
}

}  // namespace nerb
