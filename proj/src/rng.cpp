#include "curvlab/rng.hpp"

#include <cmath>

namespace curvlab {

static uint64_t splitmix64(uint64_t& x) {
  x += 0x9e3779b97f4a7c15ULL;
  uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

uint64_t derive_seed(uint64_t base, uint64_t a, uint64_t b, uint64_t c) {
  uint64_t x = base;
  uint64_t h = splitmix64(x);
  x ^= a + 0x9e3779b97f4a7c15ULL;
  h ^= splitmix64(x);
  x ^= b + 0xd1b54a32d192ed03ULL;
  h ^= splitmix64(x);
  x ^= c + 0x2545f4914f6cdd1dULL;
  h ^= splitmix64(x);
  return h;
}

double Rng::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

int Rng::uniform_int(int lo, int hi) {
  const uint64_t span = static_cast<uint64_t>(hi - lo) + 1;
  return lo + static_cast<int>(engine_() % span);
}

double Rng::gaussian() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = 0.0;
  do {
    u1 = uniform();
  } while (u1 <= 0.0);
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * M_PI * u2;
  spare_ = r * std::sin(theta);
  has_spare_ = true;
  return r * std::cos(theta);
}

Eigen::VectorXd Rng::gaussian_vector(int d) {
  Eigen::VectorXd v(d);
  for (int i = 0; i < d; ++i) v[i] = gaussian();
  return v;
}

Eigen::MatrixXd Rng::gaussian_matrix(int rows, int cols) {
  Eigen::MatrixXd m(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) m(i, j) = gaussian();
  return m;
}

Eigen::MatrixXd Rng::symmetric_gaussian(int d) {
  Eigen::MatrixXd m(d, d);
  for (int i = 0; i < d; ++i) {
    m(i, i) = gaussian();
    for (int j = i + 1; j < d; ++j) m(i, j) = m(j, i) = gaussian();
  }
  return m;
}

Eigen::VectorXd Rng::unit_vector(int d) {
  Eigen::VectorXd v;
  double norm = 0.0;
  do {
    v = gaussian_vector(d);
    norm = v.norm();
  } while (norm < 1e-8);
  return v / norm;
}

Eigen::MatrixXd Rng::orthonormal_frame(int n, int k) {
  return orthonormalize(gaussian_matrix(n, k));
}

Eigen::MatrixXd orthonormalize(const Eigen::MatrixXd& A) {
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(A);
  Eigen::MatrixXd Q = qr.householderQ() * Eigen::MatrixXd::Identity(A.rows(), A.cols());
  const Eigen::MatrixXd R = qr.matrixQR().topLeftCorner(A.cols(), A.cols());
  for (int j = 0; j < A.cols(); ++j)
    if (R(j, j) < 0.0) Q.col(j) = -Q.col(j);
  return Q;
}

}  // namespace curvlab
