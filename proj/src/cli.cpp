#include "curvlab/cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <sstream>

#include "curvlab/flow.hpp"
#include "curvlab/gallery.hpp"
#include "curvlab/inequalities.hpp"
#include "curvlab/io.hpp"
#include "curvlab/rng.hpp"

namespace curvlab {

namespace {

nlohmann::json vec_json(const Eigen::VectorXd& v) {
  nlohmann::json arr = nlohmann::json::array();
  for (int i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

nlohmann::json plane_json(const CanonicalPlane& p) {
  nlohmann::json j;
  j["X"] = vec_json(p.X());
  j["Y"] = vec_json(p.Y());
  j["Z"] = vec_json(p.Z());
  j["W"] = vec_json(p.W());
  return j;
}

std::string csv_cell(double x) { return format_double(x); }

struct OutputStream {
  std::ofstream file;
  std::ostream* stream = nullptr;

  OutputStream(const std::string& path, std::ostream& fallback) {
    if (path.empty()) {
      stream = &fallback;
      return;
    }
    file.open(path);
    if (!file) throw ParseError("cannot open output file: " + path);
    stream = &file;
  }
  std::ostream& get() { return *stream; }
};

void echo_config(std::ostream& err, const std::string& name,
                 const std::vector<std::pair<std::string, std::string>>& kv) {
  err << "[curvlab] " << name << ":";
  for (const auto& [k, v] : kv) err << " " << k << "=" << v;
  err << "\n";
}

int cmd_report(const std::string& in_path, long budget, uint64_t seed, bool compact,
               std::ostream& out, std::ostream& err) {
  const CurvatureOperator op = read_operator_file(in_path);
  echo_config(err, "report",
              {{"in", in_path},
               {"n", std::to_string(op.n)},
               {"budget", std::to_string(budget)},
               {"seed", std::to_string(seed)}});

  PinchingOptions popt;
  popt.budget = budget;
  popt.seed = seed;

  nlohmann::json j;
  nlohmann::json witnesses;
  j["budget"] = budget;
  j["seed"] = seed;

  try {
    const FlagPinchingResult flag = flag_pinching(op, popt);
    if (flag.value) {
      j["lambda_flag"] = *flag.value;
      witnesses["flag_pole"] = vec_json(flag.pole);
      witnesses["flag_eigvec_min"] = vec_json(flag.eigvec_min);
      witnesses["flag_eigvec_max"] = vec_json(flag.eigvec_max);
    } else {
      j["lambda_flag"] = nullptr;
    }
  } catch (const NegativeSectional& e) {
    err << "[curvlab] note: " << e.what() << "; lambda_flag reported as null\n";
    j["lambda_flag"] = nullptr;
  }

  const SectionalPinchingResult sec = sectional_pinching(op, popt);
  if (sec.value) {
    j["lambda_sec"] = *sec.value;
    witnesses["sec_min_plane"] = {vec_json(sec.min_plane.X), vec_json(sec.min_plane.Y)};
    witnesses["sec_max_plane"] = {vec_json(sec.max_plane.X), vec_json(sec.max_plane.Y)};
  } else {
    j["lambda_sec"] = nullptr;
  }

  const CscResult csc = min_complex_sectional(op, popt);
  j["min_csc"] = csc.value;
  if (csc.witness) witnesses["csc_plane"] = plane_json(*csc.witness);

  if (op.n >= 4) {
    const CscResult iso = min_isotropic(op, popt);
    j["min_isotropic"] = iso.value;
    if (iso.witness) witnesses["iso_plane"] = plane_json(*iso.witness);
  } else {
    j["min_isotropic"] = nullptr;
  }

  j["scal"] = scalar_curvature(op);
  const Eigen::VectorXd ric_ev =
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(ricci(op).S, Eigen::EigenvaluesOnly)
          .eigenvalues();
  j["ric_min"] = ric_ev[0];
  j["ric_max"] = ric_ev[ric_ev.size() - 1];
  j["bochner_min"] = bochner_min_eigenvalue(op);
  j["witnesses"] = std::move(witnesses);

  out << (compact ? j.dump() : j.dump(2)) << "\n";
  return 0;
}

int cmd_verify(std::vector<std::string> suites, int n, int trials, uint64_t seed, double tol,
               const std::string& in_path, bool compact, std::ostream& out, std::ostream& err) {
  std::optional<CurvatureOperator> fixed_op;
  if (!in_path.empty()) {
    fixed_op = read_operator_file(in_path);
    n = fixed_op->n;
  }
  if (suites.empty()) {
    for (const auto& name : all_checker_names())
      if (checker_applicable(name, n)) suites.push_back(name);
  }
  std::ostringstream suite_list;
  for (const auto& s : suites) suite_list << s << ",";
  echo_config(err, "verify",
              {{"suites", suite_list.str()},
               {"n", std::to_string(n)},
               {"trials", std::to_string(trials)},
               {"seed", std::to_string(seed)},
               {"tol", format_double(tol)},
               {"in", in_path.empty() ? "-" : in_path}});

  const std::vector<CheckReport> reports = run_suite(suites, n, trials, seed, tol, fixed_op);
  nlohmann::json arr = nlohmann::json::array();
  bool all_pass = true;
  for (const auto& rep : reports) {
    arr.push_back(check_report_to_json(rep));
    all_pass = all_pass && rep.pass;
  }
  out << (compact ? arr.dump() : arr.dump(2)) << "\n";
  return all_pass ? 0 : 1;
}

int cmd_flow(const std::string& in_path, const std::string& out_path, double t_end, double dt,
             double factor, bool normalize, const std::string& method, long budget, uint64_t seed,
             std::ostream& out, std::ostream& err) {
  const CurvatureOperator op = read_operator_file(in_path);
  FlowConfig cfg;
  cfg.t_end = t_end;
  cfg.dt = dt;
  cfg.factor = factor;
  cfg.normalize = normalize;
  cfg.monitor_budget = budget;
  cfg.seed = seed;
  if (method == "rk4")
    cfg.method = FlowConfig::Method::rk4;
  else if (method == "rk4-adaptive")
    cfg.method = FlowConfig::Method::rk4_adaptive;
  else
    throw ConfigInvalid("unknown method \"" + method + "\" (rk4 | rk4-adaptive)");

  echo_config(err, "flow",
              {{"in", in_path},
               {"n", std::to_string(op.n)},
               {"t-end", format_double(t_end)},
               {"dt", format_double(dt)},
               {"factor", format_double(factor)},
               {"normalize", normalize ? "1" : "0"},
               {"method", method},
               {"budget", std::to_string(budget)},
               {"seed", std::to_string(seed)}});

  const Trajectory traj = integrate(op, cfg);
  OutputStream os(out_path, out);
  os.get() << "t,scal,ric_min,ric_max,lambda_flag,lambda_sec,min_csc,dist_to_round,step_accepted\n";
  for (const auto& pt : traj.points) {
    const MonitorRow& r = pt.row;
    os.get() << csv_cell(r.t) << "," << csv_cell(r.scal) << "," << csv_cell(r.ric_min) << ","
             << csv_cell(r.ric_max) << "," << csv_cell(r.lambda_flag) << ","
             << csv_cell(r.lambda_sec) << "," << csv_cell(r.min_csc) << ","
             << csv_cell(r.dist_to_round) << "," << (r.step_accepted ? 1 : 0) << "\n";
  }
  err << "[curvlab] termination=" << termination_name(traj.termination)
      << " steps=" << traj.points.size() << "\n";
  return 0;
}

int cmd_example(const std::string& name, int n, int m, uint64_t seed, double lambda_target,
                const std::string& out_path, std::ostream& out, std::ostream& err) {
  CurvatureOperator op;
  if (name == "round")
    op = gallery::round_sphere(n);
  else if (name == "section4")
    op = gallery::section4_example(n);
  else if (name == "fubini_study")
    op = gallery::fubini_study(m);
  else if (name == "random_bianchi")
    op = gallery::random_bianchi(n, seed);
  else if (name == "random_flag_pinched")
    op = gallery::random_flag_pinched(n, lambda_target, seed).op;
  else
    throw BadParams("unknown example name \"" + name + "\"");

  echo_config(err, "example",
              {{"name", name},
               {"n", std::to_string(n)},
               {"m", std::to_string(m)},
               {"seed", std::to_string(seed)},
               {"lambda-target", format_double(lambda_target)},
               {"out", out_path.empty() ? "-" : out_path}});

  if (out_path.empty())
    out << operator_to_json(op).dump(2) << "\n";
  else
    write_operator_file(out_path, op);
  return 0;
}

int cmd_sweep(const std::string& lambda_grid, int n, int trials, uint64_t seed, long budget,
              const std::string& out_path, std::ostream& out, std::ostream& err) {
  std::vector<double> grid;
  std::stringstream ss(lambda_grid);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) grid.push_back(std::stod(item));

  echo_config(err, "sweep",
              {{"lambda-grid", lambda_grid.empty() ? "-" : lambda_grid},
               {"n", std::to_string(n)},
               {"trials", std::to_string(trials)},
               {"seed", std::to_string(seed)},
               {"budget", std::to_string(budget)},
               {"out", out_path.empty() ? "-" : out_path}});

  OutputStream os(out_path, out);
  os.get() << "lambda_target,lambda_flag,lambda_sec,min_csc,bochner_min\n";

  PinchingOptions popt;
  popt.budget = budget;
  long row = 0;
  for (const double target : grid) {
    for (int s = 0; s < trials; ++s, ++row) {
      gallery::FlagPinchedSample sample;
      bool drawn = false;
      for (int attempt = 0; attempt < 8 && !drawn; ++attempt) {
        try {
          sample = gallery::random_flag_pinched(
              n, target, derive_seed(seed, static_cast<uint64_t>(row), static_cast<uint64_t>(attempt)));
          drawn = true;
        } catch (const SamplerFailed&) {
        }
      }
      if (!drawn)
        throw SamplerFailed("sweep: sampler failed 8 times for lambda_target = " +
                            format_double(target));
      popt.seed = derive_seed(seed, 0x5eed, static_cast<uint64_t>(row));
      double lambda_flag = sample.measured_flag_pinching;
      const SectionalPinchingResult sec = sectional_pinching(sample.op, popt);
      const double bochner = bochner_min_eigenvalue(sample.op);
      os.get() << csv_cell(target) << "," << csv_cell(lambda_flag) << ","
               << (sec.value ? csv_cell(*sec.value) : "n/a") << ",";
      if (n == 3)
        os.get() << "n/a";  // only the W = 0 stratum exists
      else
        os.get() << csv_cell(min_complex_sectional(sample.op, popt).value);
      os.get() << "," << csv_cell(bochner) << "\n";
    }
  }
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"curvature-operator laboratory"};
  app.require_subcommand(1);

  // report
  auto* report = app.add_subcommand("report", "pinching report for an operator file");
  std::string report_in;
  long report_budget = 200000;
  uint64_t report_seed = 0;
  bool report_json = false;
  report->add_option("--in", report_in, "operator JSON file")->required();
  report->add_option("--budget", report_budget, "objective evaluations per functional");
  report->add_option("--seed", report_seed, "random seed");
  report->add_flag("--json", report_json, "compact single-line JSON");

  // verify
  auto* verify = app.add_subcommand("verify", "run the inequality checker suites");
  std::vector<std::string> verify_suites;
  int verify_n = 4, verify_trials = 1000;
  uint64_t verify_seed = 42;
  double verify_tol = 1e-8;
  std::string verify_in;
  bool verify_json = false;
  verify->add_option("--suite", verify_suites, "checker names (default: all applicable)");
  verify->add_option("--n", verify_n, "dimension");
  verify->add_option("--trials", verify_trials, "trials per checker");
  verify->add_option("--seed", verify_seed, "random seed");
  verify->add_option("--tol", verify_tol, "margin tolerance");
  verify->add_option("--in", verify_in, "fixed operator file (frames stay random)");
  verify->add_flag("--json", verify_json, "compact single-line JSON");

  // flow
  auto* flow = app.add_subcommand("flow", "integrate the curvature ODE");
  std::string flow_in, flow_out;
  double flow_t_end = 0.1, flow_dt = 1e-3, flow_factor = 2.0;
  bool flow_normalize = false;
  std::string flow_method = "rk4";
  long flow_budget = 2000;
  uint64_t flow_seed = 0;
  flow->add_option("--in", flow_in, "operator JSON file")->required();
  flow->add_option("--out", flow_out, "CSV output path (default: stdout)");
  flow->add_option("--t-end", flow_t_end, "integration horizon");
  flow->add_option("--dt", flow_dt, "initial step size");
  flow->add_option("--factor", flow_factor, "ODE coefficient (1 or 2)");
  flow->add_flag("--normalize", flow_normalize, "rescale to constant scalar curvature");
  flow->add_option("--method", flow_method, "rk4 | rk4-adaptive");
  flow->add_option("--budget", flow_budget, "monitor budget per functional (0 disables)");
  flow->add_option("--seed", flow_seed, "random seed");

  // example
  auto* example = app.add_subcommand("example", "write a gallery operator");
  std::string example_name, example_out;
  int example_n = 4, example_m = 2;
  uint64_t example_seed = 0;
  double example_lambda = 0.5;
  example->add_option("--name", example_name, "round | section4 | fubini_study | random_bianchi | random_flag_pinched")
      ->required();
  example->add_option("--n", example_n, "dimension");
  example->add_option("--m", example_m, "complex dimension (fubini_study)");
  example->add_option("--seed", example_seed, "random seed");
  example->add_option("--lambda-target", example_lambda, "target flag pinching (sampler)");
  example->add_option("--out", example_out, "output path (default: stdout)");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "pinching sweep across sampled operators");
  std::string sweep_grid, sweep_out;
  int sweep_n = 5, sweep_trials = 20;
  uint64_t sweep_seed = 0;
  long sweep_budget = 200000;
  sweep->add_option("--lambda-grid", sweep_grid, "comma-separated lambda targets");
  sweep->add_option("--n", sweep_n, "dimension");
  sweep->add_option("--trials", sweep_trials, "samples per lambda");
  sweep->add_option("--seed", sweep_seed, "random seed");
  sweep->add_option("--budget", sweep_budget, "objective evaluations per functional");
  sweep->add_option("--out", sweep_out, "CSV output path (default: stdout)");

  std::vector<std::string> argv_storage;
  argv_storage.push_back("curvlab");
  for (const auto& a : args) argv_storage.push_back(a);
  std::vector<const char*> argv;
  argv.reserve(argv_storage.size());
  for (const auto& s : argv_storage) argv.push_back(s.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "[curvlab] usage error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (report->parsed())
      return cmd_report(report_in, report_budget, report_seed, report_json, out, err);
    if (verify->parsed())
      return cmd_verify(verify_suites, verify_n, verify_trials, verify_seed, verify_tol, verify_in,
                        verify_json, out, err);
    if (flow->parsed())
      return cmd_flow(flow_in, flow_out, flow_t_end, flow_dt, flow_factor, flow_normalize,
                      flow_method, flow_budget, flow_seed, out, err);
    if (example->parsed())
      return cmd_example(example_name, example_n, example_m, example_seed, example_lambda,
                         example_out, out, err);
    if (sweep->parsed())
      return cmd_sweep(sweep_grid, sweep_n, sweep_trials, sweep_seed, sweep_budget, sweep_out, out,
                       err);
  } catch (const Error& e) {
    err << "[curvlab] error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "[curvlab] error: " << e.what() << "\n";
    return 2;
  }
  err << "[curvlab] no subcommand\n";
  return 2;
}

}  // namespace curvlab
