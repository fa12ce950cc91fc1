#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

namespace curvlab {

/// Smooth objective on the Stiefel manifold of n x k orthonormal frames.
/// value() may return +inf-like sentinels for skipped points; gradient is the
/// ambient (Euclidean) n x k gradient, projected internally.
struct StiefelObjective {
  int n = 0;
  int k = 0;
  std::function<double(const Eigen::MatrixXd&)> value;
  std::function<Eigen::MatrixXd(const Eigen::MatrixXd&)> gradient;
};

struct MultistartOptions {
  int starts = 64;
  long budget = 200000;  // objective evaluations across all starts
  uint64_t seed = 0;
  double grad_tol = 1e-11;
  int max_iters = 400;
  bool parallel = true;
};

struct StiefelResult {
  double value = 0.0;
  Eigen::MatrixXd argmin;
  long evaluations = 0;
};

/// Multistart projected-gradient descent with backtracking line search and QR
/// retraction. Starts are canonical frames first, then seeded random frames;
/// ties break on start index, so the result is deterministic for any worker
/// count.
StiefelResult minimize_multistart(const StiefelObjective& problem, const MultistartOptions& options,
                                  const std::vector<Eigen::MatrixXd>& canonical_starts);

/// Derivative-free fallback: top-K zoom refinement over a parameter cube
/// mapped onto the search space. Each level keeps the best cells and splits
/// them in half per coordinate. Returns the best parameter point found.
struct ZoomGridOptions {
  int initial_per_dim = 5;
  int top_k = 48;
  int levels = 24;
  long budget = 100000;
};

struct ZoomGridResult {
  double value = 0.0;
  Eigen::VectorXd argmin;
  long evaluations = 0;
};

ZoomGridResult minimize_zoom_grid(int dim, const Eigen::VectorXd& lo, const Eigen::VectorXd& hi,
                                  const std::function<double(const Eigen::VectorXd&)>& value,
                                  const ZoomGridOptions& options);

}  // namespace curvlab
