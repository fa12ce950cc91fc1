#include "curvlab/flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "curvlab/rng.hpp"

namespace curvlab {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

Eigen::MatrixXd rhs_matrix(int n, const Eigen::MatrixXd& M, double factor) {
  const TwoFormOperator T(n, M);
  const TwoFormOperator sq(n, (M * M).eval());
  const TwoFormOperator sh = sharp(T, T);
  return factor * (sq.M + sh.M);
}

Eigen::MatrixXd rk4_step(int n, const Eigen::MatrixXd& M, double h, double factor) {
  const Eigen::MatrixXd k1 = rhs_matrix(n, M, factor);
  const Eigen::MatrixXd k2 = rhs_matrix(n, M + 0.5 * h * k1, factor);
  const Eigen::MatrixXd k3 = rhs_matrix(n, M + 0.5 * h * k2, factor);
  const Eigen::MatrixXd k4 = rhs_matrix(n, M + h * k3, factor);
  return M + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

MonitorRow make_monitor_row(const CurvatureOperator& op, double t, const FlowConfig& cfg,
                            uint64_t step_index) {
  MonitorRow row;
  row.t = t;
  row.scal = scalar_curvature(op);
  const Eigen::VectorXd ric_ev =
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(ricci(op).S, Eigen::EigenvaluesOnly)
          .eigenvalues();
  row.ric_min = ric_ev[0];
  row.ric_max = ric_ev[ric_ev.size() - 1];

  const double norm = op.frobenius_norm();
  const int N = op.N();
  const Eigen::MatrixXd round = Eigen::MatrixXd::Identity(N, N) / std::sqrt(static_cast<double>(N));
  row.dist_to_round = norm > 0.0 ? (op.M / norm - round).norm() : round.norm();

  if (cfg.monitor_budget > 0) {
    PinchingOptions popt;
    popt.budget = cfg.monitor_budget;
    popt.seed = derive_seed(cfg.seed, 0xf10f, step_index);
    popt.grid_mode = PinchingOptions::GridMode::off;
    try {
      row.lambda_flag = flag_pinching(op, popt).value.value_or(kNaN);
    } catch (const NegativeSectional&) {
      row.lambda_flag = kNaN;
    }
    row.lambda_sec = sectional_pinching(op, popt).value.value_or(kNaN);
    row.min_csc = min_complex_sectional(op, popt).value;
  } else {
    row.lambda_flag = row.lambda_sec = row.min_csc = kNaN;
  }
  return row;
}

}  // namespace

const char* termination_name(Termination t) {
  switch (t) {
    case Termination::t_end:
      return "t_end";
    case Termination::blow_up:
      return "blow_up";
    case Termination::step_underflow:
      return "step_underflow";
  }
  return "unknown";
}

CurvatureOperator ode_rhs(const CurvatureOperator& op, double factor) {
  return CurvatureOperator::from_matrix(op.n, rhs_matrix(op.n, op.M, factor));
}

Trajectory integrate(const CurvatureOperator& op0, const FlowConfig& cfg) {
  if (!(cfg.t_end > 0.0) || !(cfg.dt > 0.0) || cfg.dt > cfg.t_end)
    throw ConfigInvalid("integrate: need 0 < dt <= t_end");
  if (!cfg.allow_any_factor && cfg.factor != 1.0 && cfg.factor != 2.0)
    throw ConfigInvalid("integrate: factor must be 1 or 2 unless explicitly overridden");

  Trajectory traj;
  traj.config = cfg;
  const int n = op0.n;
  const double norm0 = op0.frobenius_norm();
  const double blow_up_cap = 1e12 * norm0;
  const double scal0 = scalar_curvature(op0);
  if (cfg.normalize && std::abs(scal0) < 1e-12)
    throw ConfigInvalid("integrate: normalize mode needs nonzero initial scalar curvature");

  Eigen::MatrixXd M = op0.M;
  double t = 0.0;
  double h = cfg.dt;
  uint64_t step_index = 0;

  while (t < cfg.t_end - 1e-15 * cfg.t_end) {
    const double step = std::min(h, cfg.t_end - t);
    Eigen::MatrixXd next;

    if (cfg.method == FlowConfig::Method::rk4) {
      next = rk4_step(n, M, step, cfg.factor);
    } else {
      const Eigen::MatrixXd full = rk4_step(n, M, step, cfg.factor);
      const Eigen::MatrixXd half =
          rk4_step(n, rk4_step(n, M, step / 2.0, cfg.factor), step / 2.0, cfg.factor);
      const double err = (half - full).norm() / 15.0;
      const double tol = cfg.adaptive_tol * (1.0 + half.norm());
      if (!half.allFinite() || err > tol) {
        h = step * std::clamp(err > 0.0 && std::isfinite(err) ? 0.9 * std::pow(tol / err, 0.2) : 0.5,
                              0.1, 0.9);
        if (h < 1e-14) {
          traj.termination = Termination::step_underflow;
          return traj;
        }
        continue;
      }
      next = half;
      if (err > 0.0) h = step * std::clamp(0.9 * std::pow(tol / err, 0.2), 0.2, 5.0);
    }

    if (!next.allFinite() || (norm0 > 0.0 && next.norm() > blow_up_cap)) {
      traj.termination = Termination::blow_up;
      return traj;
    }

    if (cfg.normalize) {
      const TwoFormOperator probe(n, next);
      const double s = scalar_curvature(probe);
      if (std::abs(s) > 1e-300) next *= scal0 / s;
    }

    t += step;
    M = ((next + next.transpose()) / 2.0).eval();
    CurvatureOperator op = unchecked_curvature_operator(n, M);
    MonitorRow row = make_monitor_row(op, t, cfg, ++step_index);
    traj.points.push_back({t, std::move(op), row});
  }
  traj.termination = Termination::t_end;
  return traj;
}

MembershipResult s_t_membership(const CurvatureOperator& op, double t, double eps, double C,
                                double C2, double C3, long budget, uint64_t seed) {
  if (!(t >= 0.0) || !(eps > 0.0 && eps < 0.5) || !(C > 0.0) || !(C2 > 0.0) || !(C3 > 0.0))
    throw BadParams("s_t_membership: need t >= 0, eps in (0, 1/2), C, C2, C3 > 0");

  MembershipResult out;
  out.scal = scalar_curvature(op);
  out.scal_ok = out.scal >= 1.0 - 1e-9 && out.scal <= C + C2 * t + 1e-9;

  PinchingOptions popt;
  popt.budget = budget;
  popt.seed = derive_seed(seed, 0x57ab);
  popt.grid_mode = PinchingOptions::GridMode::off;
  try {
    out.lambda_flag = flag_pinching(op, popt).value.value_or(kNaN);
  } catch (const NegativeSectional&) {
    out.lambda_flag = kNaN;
  }
  out.flag_ok =
      std::isfinite(out.lambda_flag) && out.lambda_flag >= (1.0 - eps - C3 * t) / 4.0 - 1e-9;

  const CurvatureOperator shifted =
      op + (C3 * eps * std::exp(C3 * C3 * t)) * CurvatureOperator::identity(op.n);
  out.shifted_min_csc = min_complex_sectional(shifted, popt).value;
  out.csc_shift_ok = out.shifted_min_csc >= -1e-8;
  return out;
}

double epsilon_probe(const CurvatureOperator& op, double t_max, int grid_size, long budget,
                     uint64_t seed) {
  if (!(t_max > 0.0) || grid_size < 1) throw BadParams("epsilon_probe: need t_max > 0, grid_size >= 1");
  const double norm = op.frobenius_norm();
  if (norm <= 0.0) throw HypothesisNotMet("epsilon_probe: operator vanishes");

  PinchingOptions popt;
  popt.budget = budget;
  popt.seed = derive_seed(seed, 0xe9b);
  popt.grid_mode = PinchingOptions::GridMode::off;
  std::optional<double> lambda;
  try {
    lambda = flag_pinching(op, popt).value;
  } catch (const NegativeSectional& e) {
    throw HypothesisNotMet(std::string("epsilon_probe: sectional curvature is negative: ") + e.what());
  }
  if (!lambda || *lambda < 0.25 - 1e-9)
    throw HypothesisNotMet("epsilon_probe: flag pinching below 1/4");

  const CurvatureOperator direction = ode_rhs(op, 1.0);
  double largest_ok = 0.0;
  for (int k = 0; k < grid_size; ++k) {
    const double tk = t_max * std::pow(2.0, -static_cast<double>(grid_size - 1 - k));
    const CurvatureOperator probe = op + tk * direction;
    PinchingOptions point_opt = popt;
    point_opt.seed = derive_seed(seed, 0xe9b0, static_cast<uint64_t>(k));
    const double mcsc = min_complex_sectional(probe, point_opt).value;
    if (mcsc > 1e-10 * norm)
      largest_ok = tk;
    else
      break;
  }
  return largest_ok;
}

}  // namespace curvlab
