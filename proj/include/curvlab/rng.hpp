#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <random>

namespace curvlab {

/// Deterministic substream derivation (splitmix64 over the combined words).
uint64_t derive_seed(uint64_t base, uint64_t a, uint64_t b = 0, uint64_t c = 0);

/// mt19937_64 with explicit uniform/gaussian transforms so that streams are
/// bit-identical across standard libraries.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  double uniform();                       // [0, 1)
  double uniform(double lo, double hi);   // [lo, hi)
  double gaussian();                      // Box-Muller
  int uniform_int(int lo, int hi);        // inclusive bounds

  Eigen::VectorXd gaussian_vector(int d);
  Eigen::MatrixXd gaussian_matrix(int rows, int cols);
  Eigen::MatrixXd symmetric_gaussian(int d);
  Eigen::VectorXd unit_vector(int d);
  /// n x k with orthonormal columns (QR of a gaussian matrix, R-diag sign fixed).
  Eigen::MatrixXd orthonormal_frame(int n, int k);
  Eigen::MatrixXd random_orthogonal(int n) { return orthonormal_frame(n, n); }

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// Orthonormalize columns of A in place via QR with positive R diagonal;
/// deterministic in A.
Eigen::MatrixXd orthonormalize(const Eigen::MatrixXd& A);

}  // namespace curvlab
