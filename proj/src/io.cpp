#include "curvlab/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace curvlab {

std::string format_double(double x) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

nlohmann::json operator_to_json(const TwoFormOperator& op) {
  nlohmann::json j;
  j["n"] = op.n;
  j["format"] = "dense-lex";
  nlohmann::json rows = nlohmann::json::array();
  for (int r = 0; r < op.N(); ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (int c = 0; c < op.N(); ++c) row.push_back(op.M(r, c));
    rows.push_back(std::move(row));
  }
  j["matrix"] = std::move(rows);
  return j;
}

CurvatureOperator operator_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("n") || !j.contains("format"))
    throw ParseError("operator JSON must be an object with \"n\" and \"format\"");
  const int n = j.at("n").get<int>();
  if (n < 3) throw DimensionTooSmall("operator JSON: n must be >= 3");
  const std::string format = j.at("format").get<std::string>();

  if (format == "dense-lex") {
    if (!j.contains("matrix")) throw ParseError("dense-lex operator needs a \"matrix\" field");
    const auto& rows = j.at("matrix");
    const int N = n * (n - 1) / 2;
    if (!rows.is_array() || static_cast<int>(rows.size()) != N)
      throw ParseError("dense-lex matrix must have n(n-1)/2 rows");
    Eigen::MatrixXd M(N, N);
    for (int r = 0; r < N; ++r) {
      const auto& row = rows.at(static_cast<size_t>(r));
      if (!row.is_array() || static_cast<int>(row.size()) != N)
        throw ParseError("dense-lex matrix row " + std::to_string(r + 1) + " has wrong length");
      for (int c = 0; c < N; ++c) M(r, c) = row.at(static_cast<size_t>(c)).get<double>();
    }
    return CurvatureOperator::from_matrix(n, std::move(M));
  }

  if (format == "tensor") {
    if (!j.contains("entries")) throw ParseError("tensor operator needs an \"entries\" field");
    std::vector<TensorEntry> entries;
    for (const auto& item : j.at("entries")) {
      if (!item.contains("ijkl") || !item.contains("v"))
        throw ParseError("tensor entry needs \"ijkl\" and \"v\"");
      const auto& q = item.at("ijkl");
      if (!q.is_array() || q.size() != 4) throw ParseError("\"ijkl\" must hold four indices");
      TensorEntry e;
      for (int a = 0; a < 4; ++a) e.ijkl[static_cast<size_t>(a)] = q.at(static_cast<size_t>(a)).get<int>();
      e.value = item.at("v").get<double>();
      entries.push_back(e);
    }
    return make_operator_from_tensor(n, entries);
  }

  throw ParseError("unknown operator format \"" + format + "\"");
}

CurvatureOperator read_operator_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open operator file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("invalid JSON in " + path + ": " + e.what());
  }
  return operator_from_json(j);
}

void write_operator_file(const std::string& path, const TwoFormOperator& op) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open output file: " + path);
  out << operator_to_json(op).dump(2) << "\n";
}

nlohmann::json check_report_to_json(const CheckReport& report) {
  nlohmann::json j;
  j["name"] = report.name;
  j["trials"] = report.trials;
  j["min_margin"] = report.min_margin;
  j["pass"] = report.pass;
  j["tolerance"] = report.tolerance;
  j["trace_violations"] = report.trace_violations;
  nlohmann::json wc;
  wc["trial_index"] = report.worst_case.trial_index;
  wc["lambda"] = report.worst_case.lambda;
  if (report.worst_case.op.n >= 3) wc["op"] = operator_to_json(report.worst_case.op);
  nlohmann::json vecs = nlohmann::json::array();
  for (const auto& v : report.worst_case.vectors) {
    nlohmann::json arr = nlohmann::json::array();
    for (int i = 0; i < v.size(); ++i) arr.push_back(v[i]);
    vecs.push_back(std::move(arr));
  }
  wc["vectors"] = std::move(vecs);
  j["worst_case"] = std::move(wc);
  return j;
}

}  // namespace curvlab
