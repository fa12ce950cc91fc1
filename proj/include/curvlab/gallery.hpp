#pragma once

#include <cstdint>

#include "curvlab/functionals.hpp"
#include "curvlab/operator.hpp"

namespace curvlab {
namespace gallery {

/// Identity on two-vectors; every sectional curvature equals 1.
CurvatureOperator round_sphere(int n);

/// Diagonal operator with k(e1,e2) = 4, k(e1,ei) = k(e2,ei) = 2 for i >= 3,
/// k(ei,ej) = 1 for 3 <= i < j. Quarter-pinched sectional curvature but only
/// half-pinched flag curvature.
CurvatureOperator section4_example(int n);

/// Kaehler operator of constant holomorphic sectional curvature 4 on R^{2m}
/// with the standard complex structure (sectional range [1,4]).
CurvatureOperator fubini_study(int m);

/// The standard complex structure used by fubini_study, as a matrix on R^{2m}.
Eigen::MatrixXd standard_complex_structure(int m);

/// Symmetrized gaussian matrix projected onto the Bianchi subspace;
/// bit-reproducible in (n, seed).
CurvatureOperator random_bianchi(int n, uint64_t seed);

struct FlagPinchedSample {
  CurvatureOperator op;
  double measured_flag_pinching = 0.0;
  double mix = 0.0;  // weight of the identity in the final blend
};

struct FlagPinchedOptions {
  long pinching_budget = 4000;  // per flag_pinching probe during bisection
  int max_bisections = 40;
  double window = 0.05;  // accepted measured range [target, target + window]
};

/// Blend of a curvature-clipped random Bianchi operator with the identity,
/// bisected until the measured flag pinching lands in
/// [lambda_target, lambda_target + window]. lambda_target = 1 returns the
/// identity exactly. Throws SamplerFailed with the final bracket otherwise.
FlagPinchedSample random_flag_pinched(int n, double lambda_target, uint64_t seed,
                                      const FlagPinchedOptions& options = {});

}  // namespace gallery
}  // namespace curvlab
