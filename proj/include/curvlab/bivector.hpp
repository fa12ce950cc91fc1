#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "curvlab/errors.hpp"

namespace curvlab {

/// Ordered orthonormal basis {e_i ^ e_j : i < j} of two-vectors on R^n,
/// lexicographic. Indices are 0-based internally; file formats and error
/// messages convert to 1-based at the boundary.
class BivectorBasis {
 public:
  explicit BivectorBasis(int n);

  int n() const { return n_; }
  int size() const { return static_cast<int>(pairs_.size()); }

  std::pair<int, int> pair(int a) const { return pairs_[static_cast<size_t>(a)]; }

  // a = index of e_i ^ e_j, requires i < j
  int index(int i, int j) const { return index_[static_cast<size_t>(i * n_ + j)]; }

  /// Coordinates of x ^ y in this basis: (x ^ y)_(i,j) = x_i y_j - x_j y_i.
  Eigen::VectorXd wedge_coords(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const;
  Eigen::VectorXcd wedge_coords(const Eigen::VectorXcd& x, const Eigen::VectorXcd& y) const;

  /// Map on two-vector coordinates induced by g: R^n -> R^n
  /// (columns are images of basis bivectors g e_i ^ g e_j).
  Eigen::MatrixXd induced_map(const Eigen::MatrixXd& g) const;

 private:
  int n_;
  std::vector<std::pair<int, int>> pairs_;
  std::vector<int> index_;
};

}  // namespace curvlab
