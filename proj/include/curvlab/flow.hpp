#pragma once

#include <cstdint>
#include <vector>

#include "curvlab/functionals.hpp"
#include "curvlab/operator.hpp"

namespace curvlab {

struct FlowConfig {
  double t_end = 0.1;
  double dt = 1e-3;
  enum class Method { rk4, rk4_adaptive } method = Method::rk4;
  double factor = 2.0;       // coefficient of (Rm^2 + Rm^#)
  bool normalize = false;    // rescale each step so Scal keeps its initial value
  long monitor_budget = 2000;  // 0 disables the optimizer-backed monitors
  uint64_t seed = 0;
  bool allow_any_factor = false;
  double adaptive_tol = 1e-8;
};

struct MonitorRow {
  double t = 0.0;
  double scal = 0.0;
  double ric_min = 0.0, ric_max = 0.0;
  double lambda_flag = 0.0, lambda_sec = 0.0, min_csc = 0.0;  // NaN when disabled/undefined
  double dist_to_round = 0.0;  // || Rm/||Rm|| - I/||I|| ||_F
  bool step_accepted = true;
};

enum class Termination { t_end, blow_up, step_underflow };
const char* termination_name(Termination t);

struct TrajectoryPoint {
  double t = 0.0;
  CurvatureOperator op;
  MonitorRow row;
};

struct Trajectory {
  FlowConfig config;
  std::vector<TrajectoryPoint> points;  // one per accepted step
  Termination termination = Termination::t_end;
};

/// d/dt Rm = factor * (Rm^2 + Rm^#); the result satisfies the first Bianchi
/// identity whenever the input does.
CurvatureOperator ode_rhs(const CurvatureOperator& op, double factor);

/// Fixed-step RK4 or step-doubling adaptive RK4. Blow-up is declared when the
/// state grows past 1e12 ||op0|| or becomes non-finite; the adaptive stepper
/// underflows at dt < 1e-14.
Trajectory integrate(const CurvatureOperator& op0, const FlowConfig& cfg);

struct MembershipResult {
  bool scal_ok = false;
  bool flag_ok = false;
  bool csc_shift_ok = false;
  double scal = 0.0;
  double lambda_flag = 0.0;      // NaN when undefined
  double shifted_min_csc = 0.0;
  bool all() const { return scal_ok && flag_ok && csc_shift_ok; }
};

/// The three S(t) predicates: 1 <= Scal <= C + C2 t, flag pinching at least
/// (1 - eps - C3 t)/4, and nonnegative complex sectional curvature of
/// Rm + C3 eps e^{C3^2 t} I.
MembershipResult s_t_membership(const CurvatureOperator& op, double t, double eps, double C,
                                double C2, double C3, long budget = 20000, uint64_t seed = 0);

/// Largest grid value eps in (0, t_max] (geometric grid, grid_size points)
/// such that Rm + t (Rm^2 + Rm^#) has strictly positive minimum complex
/// sectional curvature for every grid t <= eps; 0 if the first point fails.
double epsilon_probe(const CurvatureOperator& op, double t_max, int grid_size = 64,
                     long budget = 20000, uint64_t seed = 0);

}  // namespace curvlab
