#pragma once

#include <optional>
#include <string>
#include <vector>

#include "curvlab/functionals.hpp"
#include "curvlab/operator.hpp"

namespace curvlab {

/// Residual of the four-term polarization identity for 6 R(X,Y)Z.
double check_polarization_vec(const TwoFormOperator& op, const Eigen::VectorXd& X,
                              const Eigen::VectorXd& Y, const Eigen::VectorXd& Z);

/// Residual of the twelve-term k-polarization of -R(X,Y,Z,W).
double check_polarization_scalar(const TwoFormOperator& op, const Eigen::VectorXd& X,
                                 const Eigen::VectorXd& Y, const Eigen::VectorXd& Z,
                                 const Eigen::VectorXd& W);

struct FlagSumMargins {
  double lower = 0.0;
  double upper = 0.0;
  double min() const { return lower < upper ? lower : upper; }
};

/// Two-sided bound on b(Y+W, Y+W) for b = R_e with lambda-pinched flag
/// curvature at the pole e. Margins are signed; >= 0 means the bound holds.
FlagSumMargins check_flag_sum_bounds(const TwoFormOperator& op, const Eigen::VectorXd& e,
                                     const Eigen::VectorXd& Y, const Eigen::VectorXd& W,
                                     double lambda);

/// Division-free form of the generalized Berger bound:
/// (1-lambda) * k-sum - 6 (1+lambda) |R(X,Y,Z,W)|.
double check_berger_bound(const TwoFormOperator& op, double lambda, const Eigen::VectorXd& X,
                          const Eigen::VectorXd& Y, const Eigen::VectorXd& Z,
                          const Eigen::VectorXd& W);

/// Margin of the complex-sectional lower bound 2(4 lambda - 1)/3 * (k-terms).
double check_csc_lower_bound(const TwoFormOperator& op, double lambda, const CanonicalPlane& p);

/// Operator-norm residual of (Ric^id - Rm) - Rm # I.
double check_sharp_identity(const TwoFormOperator& op);

/// (n-3)/(4n-9) for odd n >= 5.
double vanishing_threshold(int n);

/// (8m-5) lambda^2 + (6m-3) lambda - 2(m-1) with m = (n-1)/2.
double bochner_discriminant(int n, double lambda);
bool bochner_discriminant_positive(int n, double lambda);

/// Smallest eigenvalue of the Bochner operator; odd dimensions only.
double check_bochner_positivity(const TwoFormOperator& op);

// ---------------------------------------------------------------------------
// randomized suite
// ---------------------------------------------------------------------------

struct WorstCase {
  CurvatureOperator op;
  std::vector<Eigen::VectorXd> vectors;  // checker-specific frame data
  double lambda = 0.0;
  int trial_index = -1;
};

struct CheckReport {
  std::string name;
  int trials = 0;
  double min_margin = 0.0;
  WorstCase worst_case;
  bool pass = false;
  double tolerance = 0.0;
  int trace_violations = 0;  // equality-case norm traces (flag_sum, berger)
};

const std::vector<std::string>& all_checker_names();
bool checker_applicable(const std::string& name, int n);

/// Runs the named checkers over seeded random trials at dimension n. Margins
/// are mined deterministically: trials shard across workers, the minimum
/// breaks ties on trial index. With fixed_op set, trials reuse that operator
/// and only draw frames.
std::vector<CheckReport> run_suite(const std::vector<std::string>& names, int n, int trials,
                                   uint64_t seed, double tol,
                                   const std::optional<CurvatureOperator>& fixed_op = std::nullopt);

/// Re-evaluates a report's worst case; used to assert replayability.
double replay_margin(const CheckReport& report);

}  // namespace curvlab
