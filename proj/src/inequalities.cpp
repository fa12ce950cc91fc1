#include "curvlab/inequalities.hpp"

#include <algorithm>
#include <cmath>

#include "curvlab/gallery.hpp"
#include "curvlab/parallel.hpp"
#include "curvlab/rng.hpp"

namespace curvlab {

namespace {

void require_orthogonal(const std::vector<const Eigen::VectorXd*>& vs, const char* where) {
  for (size_t a = 0; a < vs.size(); ++a)
    for (size_t b = a + 1; b < vs.size(); ++b) {
      const double dot = vs[a]->dot(*vs[b]);
      if (std::abs(dot) > 1e-10 * (1.0 + vs[a]->norm() * vs[b]->norm()))
        throw BadFrame(std::string(where) + ": vectors are not mutually orthogonal");
    }
}

}  // namespace

double check_polarization_vec(const TwoFormOperator& op, const Eigen::VectorXd& X,
                              const Eigen::VectorXd& Y, const Eigen::VectorXd& Z) {
  const Eigen::VectorXd lhs = 6.0 * op.curvature_vector(X, Y, Z);
  const Eigen::VectorXd rhs = -op.curvature_vector(Y, Z + X, Z + X) +
                              op.curvature_vector(Y, Z - X, Z - X) +
                              op.curvature_vector(X, Z + Y, Z + Y) -
                              op.curvature_vector(X, Z - Y, Z - Y);
  return (lhs - rhs).norm();
}

double check_polarization_scalar(const TwoFormOperator& op, const Eigen::VectorXd& X,
                                 const Eigen::VectorXd& Y, const Eigen::VectorXd& Z,
                                 const Eigen::VectorXd& W) {
  auto k = [&](const Eigen::VectorXd& A, const Eigen::VectorXd& B) {
    return k_unnormalized(op, A, B);
  };
  const double lhs = -op.tensor(X, Y, Z, W);
  const double rhs = (-k(Y + W, Z + X) + k(Y, Z + X) + k(W, Z + X)  //
                      - k(X + W, Z - Y) + k(X, Z - Y) + k(W, Z - Y)  //
                      - k(Y - W, Z - X) + k(Y, Z - X) + k(W, Z - X)  //
                      - k(X - W, Z + Y) + k(X, Z + Y) + k(W, Z + Y)) /
                     12.0;
  return std::abs(lhs - rhs);
}

FlagSumMargins check_flag_sum_bounds(const TwoFormOperator& op, const Eigen::VectorXd& e,
                                     const Eigen::VectorXd& Y, const Eigen::VectorXd& W,
                                     double lambda) {
  require_orthogonal({&e, &Y, &W}, "check_flag_sum_bounds");
  auto b = [&](const Eigen::VectorXd& P) { return k_unnormalized(op, e, P); };
  const double sum = b(Y) + b(W);
  const double mixed = b(Y + W);
  FlagSumMargins m;
  m.lower = mixed - 2.0 * lambda / (1.0 + lambda) * sum;
  m.upper = 2.0 / (1.0 + lambda) * sum - mixed;
  return m;
}

double check_berger_bound(const TwoFormOperator& op, double lambda, const Eigen::VectorXd& X,
                          const Eigen::VectorXd& Y, const Eigen::VectorXd& Z,
                          const Eigen::VectorXd& W) {
  require_orthogonal({&X, &Y, &Z, &W}, "check_berger_bound");
  auto k = [&](const Eigen::VectorXd& A, const Eigen::VectorXd& B) {
    return k_unnormalized(op, A, B);
  };
  const double ksum =
      k(Y, Z) + k(X, Z) + k(X, W) + k(Y, W) + 2.0 * k(X, Y) + 2.0 * k(Z, W);
  return (1.0 - lambda) * ksum - 6.0 * (1.0 + lambda) * std::abs(op.tensor(X, Y, Z, W));
}

double check_csc_lower_bound(const TwoFormOperator& op, double lambda, const CanonicalPlane& p) {
  const double factor = 2.0 * (4.0 * lambda - 1.0) / 3.0;
  const double t = p.t(), xi = p.xi();
  double bound = 0.0;
  if (t > 0.0) {
    const Eigen::VectorXd Yhat = p.Y() / std::sqrt(t);
    bound += factor * k_unnormalized(op, p.X(), Yhat);
  }
  if (lambda <= 0.25 && xi > 0.0) {
    const Eigen::VectorXd What = p.W() / std::sqrt(xi);
    bound += factor * k_unnormalized(op, p.Z(), What);
  }
  return complex_sectional(op, p) - bound;
}

double check_sharp_identity(const TwoFormOperator& op) {
  const TwoFormOperator lhs = bochner_two_form_operator(op);
  const TwoFormOperator rhs = sharp(op, TwoFormOperator(op.n, Eigen::MatrixXd::Identity(op.N(), op.N())));
  return TwoFormOperator(op.n, (lhs.M - rhs.M).eval()).operator_norm();
}

double vanishing_threshold(int n) {
  if (n % 2 == 0) throw EvenDimension("vanishing_threshold requires odd n");
  if (n < 5) throw DimensionTooSmall("vanishing_threshold requires n >= 5");
  return static_cast<double>(n - 3) / static_cast<double>(4 * n - 9);
}

double bochner_discriminant(int n, double lambda) {
  if (n % 2 == 0) throw EvenDimension("bochner_discriminant requires odd n");
  if (n < 5) throw DimensionTooSmall("bochner_discriminant requires n >= 5");
  const double m = static_cast<double>((n - 1) / 2);
  return (8.0 * m - 5.0) * lambda * lambda + (6.0 * m - 3.0) * lambda - 2.0 * (m - 1.0);
}

bool bochner_discriminant_positive(int n, double lambda) {
  return bochner_discriminant(n, lambda) > 0.0;
}

double check_bochner_positivity(const TwoFormOperator& op) {
  if (op.n % 2 == 0) throw EvenDimension("check_bochner_positivity requires odd n");
  return bochner_min_eigenvalue(op);
}

// ---------------------------------------------------------------------------
// randomized suite
// ---------------------------------------------------------------------------

namespace {

constexpr double kLambdaSlack = 1e-9;

struct Trial {
  CurvatureOperator op;
  std::vector<Eigen::VectorXd> vectors;
  double lambda = 0.0;
  bool equal_norm_family = false;  // constant-curvature trials draw equal norms
};

/// Exact pinching ratio of the flag form at one pole (no optimization).
double pole_pinching(const TwoFormOperator& op, const Eigen::VectorXd& e) {
  const Eigen::VectorXd ev = flag_form(op, e).eigenvalues();
  const double lmax = ev[ev.size() - 1];
  if (lmax <= 1e-14 * (1.0 + op.frobenius_norm())) return 1.0;  // degenerate pole: no constraint
  return ev[0] / lmax;
}

double min_pole_pinching(const TwoFormOperator& op, const std::vector<Eigen::VectorXd>& poles) {
  double lo = 1.0;
  for (const auto& p : poles) {
    const double norm = p.norm();
    if (norm < 1e-12) continue;
    lo = std::min(lo, pole_pinching(op, (p / norm).eval()));
  }
  return lo;
}

double admissible_lambda(double raw) {
  return std::clamp(raw - kLambdaSlack, 1e-12, 1.0);
}

/// Operator families for hypothesis-bound checkers: mostly clipped random
/// draws, with constant-curvature and section4 members mixed in.
CurvatureOperator curvature_positive_op(int n, Rng& rng, bool& equal_norm_family) {
  const double pick = rng.uniform();
  equal_norm_family = false;
  if (pick < 0.25) {
    equal_norm_family = true;  // b is a multiple of the metric: equality for all norms
    return rng.uniform(0.5, 2.0) * CurvatureOperator::identity(n);
  }
  if (pick < 0.35) return rng.uniform(0.25, 2.0) * gallery::section4_example(n);
  const CurvatureOperator raw = gallery::random_bianchi(n, rng.uniform_int(0, 1 << 30));
  PinchingOptions scan;
  scan.budget = 1500;
  scan.seed = rng.uniform_int(0, 1 << 30);
  scan.grid_mode = PinchingOptions::GridMode::off;
  const SectionalPinchingResult kscan = sectional_pinching(raw, scan);
  const double shift = std::max(0.0, -kscan.k_min) * 1.05 + 1e-4 * raw.frobenius_norm();
  return raw + shift * CurvatureOperator::identity(n);
}

uint64_t checker_id(const std::string& name) {
  const auto& names = all_checker_names();
  const auto it = std::find(names.begin(), names.end(), name);
  return static_cast<uint64_t>(it - names.begin()) + 1;
}

Trial make_trial(const std::string& name, int n, int trial_index, uint64_t seed,
                 const std::optional<CurvatureOperator>& fixed_op) {
  Rng rng(derive_seed(seed, checker_id(name), static_cast<uint64_t>(trial_index)));
  Trial t;

  if (name == "polarization_vec" || name == "polarization_scalar" || name == "sharp_identity") {
    t.op = fixed_op ? *fixed_op : gallery::random_bianchi(n, rng.uniform_int(0, 1 << 30));
    const int count = name == "polarization_vec" ? 3 : (name == "polarization_scalar" ? 4 : 0);
    for (int i = 0; i < count; ++i)
      t.vectors.push_back(rng.uniform(0.5, 2.0) * rng.unit_vector(n));
    return t;
  }

  if (name == "bochner") {
    if (fixed_op) {
      t.op = *fixed_op;
      return t;
    }
    const double threshold = vanishing_threshold(n);
    const double target = std::min(0.9, threshold + 0.02 + 0.2 * rng.uniform());
    gallery::FlagPinchedOptions fopt;
    fopt.pinching_budget = 2500;
    // deterministic retries if a draw fails
    for (int attempt = 0; attempt < 8; ++attempt) {
      try {
        t.op = gallery::random_flag_pinched(n, target, rng.uniform_int(0, 1 << 30), fopt).op;
        return t;
      } catch (const SamplerFailed&) {
      }
    }
    throw SamplerFailed("bochner trial generator exhausted retries");
  }

  // hypothesis-bound checkers: flag_sum, berger, csc_lower
  t.op = fixed_op ? *fixed_op : curvature_positive_op(n, rng, t.equal_norm_family);

  if (name == "flag_sum") {
    const Eigen::MatrixXd F = rng.orthonormal_frame(n, 3);
    const double a = rng.uniform(0.2, 1.5);
    const double b = t.equal_norm_family ? a : rng.uniform(0.2, 1.5);
    t.vectors = {F.col(0), a * F.col(1), b * F.col(2)};
    t.lambda = admissible_lambda(pole_pinching(t.op, F.col(0)));
    return t;
  }

  if (name == "berger") {
    const Eigen::MatrixXd F = rng.orthonormal_frame(n, 4);
    std::vector<Eigen::VectorXd> v;
    const double common = rng.uniform(0.4, 1.5);
    for (int i = 0; i < 4; ++i) {
      const double norm = t.equal_norm_family ? common : rng.uniform(0.4, 1.5);
      v.push_back(norm * F.col(i));
    }
    t.vectors = v;
    const Eigen::VectorXd X = F.col(0), Y = F.col(1), Z = F.col(2);
    t.lambda = admissible_lambda(min_pole_pinching(t.op, {Z + X, Z - X, Z + Y, Z - Y}));
    return t;
  }

  if (name == "csc_lower") {
    const Eigen::MatrixXd F = rng.orthonormal_frame(n, 4);
    double tt = rng.uniform(), xi = rng.uniform() * tt;
    switch (trial_index % 10) {
      case 0:
        tt = xi = 1.0;
        break;
      case 1:
        xi = 0.0;
        break;
      case 2:
        tt = xi = 0.0;
        break;
      default:
        break;
    }
    t.vectors = {F.col(0), std::sqrt(tt) * F.col(1), F.col(2), std::sqrt(xi) * F.col(3)};
    const Eigen::VectorXd X = F.col(0), Yh = F.col(1), Z = F.col(2), Wh = F.col(3);
    t.lambda = admissible_lambda(min_pole_pinching(
        t.op, {X, Yh, Z, Wh, Z + X, Z - X, Z + Yh, Z - Yh, X + Wh, X - Wh}));
    return t;
  }

  throw UnknownChecker("unknown checker: " + name);
}

struct TrialOutcome {
  double margin = 0.0;
  bool trace_violation = false;
};

double evaluate_margin(const std::string& name, const Trial& t) {
  if (name == "polarization_vec") {
    const double res = check_polarization_vec(t.op, t.vectors[0], t.vectors[1], t.vectors[2]);
    double vmax = 1.0;
    for (const auto& v : t.vectors) vmax = std::max(vmax, v.norm());
    return -res / ((1.0 + t.op.frobenius_norm()) * std::pow(1.0 + vmax, 4));
  }
  if (name == "polarization_scalar") {
    const double res =
        check_polarization_scalar(t.op, t.vectors[0], t.vectors[1], t.vectors[2], t.vectors[3]);
    double vmax = 1.0;
    for (const auto& v : t.vectors) vmax = std::max(vmax, v.norm());
    return -res / ((1.0 + t.op.frobenius_norm()) * std::pow(1.0 + vmax, 4));
  }
  if (name == "sharp_identity")
    return -check_sharp_identity(t.op) / (1.0 + t.op.frobenius_norm());
  if (name == "flag_sum")
    return check_flag_sum_bounds(t.op, t.vectors[0], t.vectors[1], t.vectors[2], t.lambda).min();
  if (name == "berger")
    return check_berger_bound(t.op, t.lambda, t.vectors[0], t.vectors[1], t.vectors[2],
                              t.vectors[3]);
  if (name == "csc_lower")
    return check_csc_lower_bound(
        t.op, t.lambda, CanonicalPlane(t.vectors[0], t.vectors[1], t.vectors[2], t.vectors[3]));
  if (name == "bochner") return check_bochner_positivity(t.op);
  throw UnknownChecker("unknown checker: " + name);
}

TrialOutcome evaluate_trial(const std::string& name, const Trial& t) {
  TrialOutcome out;
  out.margin = evaluate_margin(name, t);

  // equality-case traces
  if (name == "flag_sum" && std::abs(out.margin) <= 1e-9) {
    const double b_norm = flag_form(t.op, t.vectors[0]).form.S.norm();
    if (b_norm > 1e-12 * (1.0 + t.op.frobenius_norm())) {
      const double ny = t.vectors[1].norm(), nw = t.vectors[2].norm();
      if (std::abs(ny - nw) > 1e-5) out.trace_violation = true;
    }
  }
  if (name == "berger" && std::abs(out.margin) <= 1e-9 &&
      t.op.frobenius_norm() > 1e-12) {
    double lo = t.vectors[0].norm(), hi = lo;
    for (const auto& v : t.vectors) {
      lo = std::min(lo, v.norm());
      hi = std::max(hi, v.norm());
    }
    if (hi - lo > 1e-5) out.trace_violation = true;
  }
  return out;
}

}  // namespace

const std::vector<std::string>& all_checker_names() {
  static const std::vector<std::string> names = {
      "polarization_vec", "polarization_scalar", "flag_sum", "berger",
      "csc_lower",        "sharp_identity",      "bochner"};
  return names;
}

bool checker_applicable(const std::string& name, int n) {
  if (name == "bochner") return n % 2 == 1 && n >= 5;
  if (name == "csc_lower" || name == "berger") return n >= 4;
  return n >= 3;
}

std::vector<CheckReport> run_suite(const std::vector<std::string>& names, int n, int trials,
                                   uint64_t seed, double tol,
                                   const std::optional<CurvatureOperator>& fixed_op) {
  const auto& known = all_checker_names();
  for (const auto& name : names)
    if (std::find(known.begin(), known.end(), name) == known.end())
      throw UnknownChecker("unknown checker: " + name);

  std::vector<CheckReport> reports;
  for (const auto& name : names) {
    if (!checker_applicable(name, n))
      throw BadParams("checker '" + name + "' is not applicable at n = " + std::to_string(n));
    CheckReport rep;
    rep.name = name;
    rep.trials = trials;
    rep.tolerance = tol;

    std::vector<TrialOutcome> outcomes(static_cast<size_t>(trials));
    parallel_for(static_cast<size_t>(trials), [&](size_t i) {
      const Trial t = make_trial(name, n, static_cast<int>(i), seed, fixed_op);
      outcomes[i] = evaluate_trial(name, t);
    });

    int worst = 0;
    for (int i = 1; i < trials; ++i)
      if (outcomes[static_cast<size_t>(i)].margin < outcomes[static_cast<size_t>(worst)].margin)
        worst = i;
    for (const auto& o : outcomes) rep.trace_violations += o.trace_violation ? 1 : 0;

    rep.min_margin = trials > 0 ? outcomes[static_cast<size_t>(worst)].margin : 0.0;
    if (trials > 0) {
      const Trial t = make_trial(name, n, worst, seed, fixed_op);
      rep.worst_case.op = t.op;
      rep.worst_case.vectors = t.vectors;
      rep.worst_case.lambda = t.lambda;
      rep.worst_case.trial_index = worst;
    }
    rep.pass = rep.min_margin >= -tol && rep.trace_violations == 0;
    reports.push_back(std::move(rep));
  }
  return reports;
}

double replay_margin(const CheckReport& report) {
  Trial t;
  t.op = report.worst_case.op;
  t.vectors = report.worst_case.vectors;
  t.lambda = report.worst_case.lambda;
  return evaluate_margin(report.name, t);
}

}  // namespace curvlab
