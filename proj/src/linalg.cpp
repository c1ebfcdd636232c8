#include "nerb/linalg.hpp"

#include <stdexcept>
#include <string>

#include <Eigen/SVD>

namespace nerb {

TruncatedSvd truncated_svd(const Eigen::MatrixXd& m, int rank) {
  const int max_rank = static_cast<int>(std::min(m.rows(), m.cols()));
  if (rank < 1 || rank > max_rank) {
    throw std::invalid_argument("truncated_svd: rank " + std::to_string(rank) +
                                " out of range [1, " +
                                std::to_string(max_rank) + "]");
  }
  Eigen::BDCSVD<Eigen::MatrixXd> svd(m,
                                     Eigen::ComputeThinU | Eigen::ComputeThinV);
  TruncatedSvd out;
  out.u = svd.matrixU().leftCols(rank);
  out.singular_values = svd.singularValues().head(rank);
  out.v = svd.matrixV().leftCols(rank);
  return out;
}

Eigen::MatrixXd adjacency_matrix(const Graph& g) {
  const auto n = static_cast<Eigen::Index>(g.num_nodes());
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (const Edge& e : g.edges()) {
    a(e.u, e.v) = 1.0;
    a(e.v, e.u) = 1.0;
  }
  return a;
}

double spectral_radius(const Eigen::MatrixXd& a, int iterations) {
  if (a.rows() == 0) return 0.0;
  Eigen::VectorXd x = Eigen::VectorXd::Ones(a.rows());
  x.normalize();
  double lambda = 0.0;
  for (int i = 0; i < iterations; ++i) {
    Eigen::VectorXd y = a * x;
    const double norm = y.norm();
    if (norm == 0.0) return 0.0;
    x = y / norm;
    lambda = norm;
  }
  return lambda;
}

}  // namespace nerb
