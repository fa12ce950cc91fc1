#include "curvlab/bivector.hpp"

namespace curvlab {

BivectorBasis::BivectorBasis(int n) : n_(n) {
  if (n < 3) throw DimensionTooSmall("bivector basis requires n >= 3, got n = " + std::to_string(n));
  pairs_.reserve(static_cast<size_t>(n) * (n - 1) / 2);
  index_.assign(static_cast<size_t>(n) * n, -1);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      index_[static_cast<size_t>(i * n + j)] = static_cast<int>(pairs_.size());
      pairs_.emplace_back(i, j);
    }
  }
}

Eigen::VectorXd BivectorBasis::wedge_coords(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const {
  if (x.size() != n_ || y.size() != n_)
    throw DimensionMismatch("wedge_coords: vectors must have dimension " + std::to_string(n_));
  Eigen::VectorXd w(size());
  for (int a = 0; a < size(); ++a) {
    const auto [i, j] = pairs_[static_cast<size_t>(a)];
    w[a] = x[i] * y[j] - x[j] * y[i];
  }
  return w;
}

Eigen::VectorXcd BivectorBasis::wedge_coords(const Eigen::VectorXcd& x, const Eigen::VectorXcd& y) const {
  if (x.size() != n_ || y.size() != n_)
    throw DimensionMismatch("wedge_coords: vectors must have dimension " + std::to_string(n_));
  Eigen::VectorXcd w(size());
  for (int a = 0; a < size(); ++a) {
    const auto [i, j] = pairs_[static_cast<size_t>(a)];
    w[a] = x[i] * y[j] - x[j] * y[i];
  }
  return w;
}

Eigen::MatrixXd BivectorBasis::induced_map(const Eigen::MatrixXd& g) const {
  if (g.rows() != n_ || g.cols() != n_)
    throw DimensionMismatch("induced_map: g must be " + std::to_string(n_) + "x" + std::to_string(n_));
  Eigen::MatrixXd G(size(), size());
  for (int a = 0; a < size(); ++a) {
    const auto [i, j] = pairs_[static_cast<size_t>(a)];
    G.col(a) = wedge_coords(g.col(i), g.col(j));
  }
  return G;
}

}  // namespace curvlab
