#pragma once

#include <Eigen/Dense>

#include "nerb/graph.hpp"

namespace nerb {

struct TruncatedSvd {
  Eigen::MatrixXd u;                // rows x rank
  Eigen::VectorXd singular_values;  // non-increasing
  Eigen::MatrixXd v;                // cols x rank
};

// Top-`rank` singular triplets of a dense matrix. rank must be in
// [1, min(rows, cols)].
TruncatedSvd truncated_svd(const Eigen::MatrixXd& m, int rank);

// Dense adjacency matrix of g.
Eigen::MatrixXd adjacency_matrix(const Graph& g);

// Spectral radius estimate via power iteration (exact enough for Katz
// bounds; adjacency matrices are symmetric so this converges to |lambda|_max).
double spectral_radius(const Eigen::MatrixXd& a, int iterations = 100);

}  // namespace nerb
