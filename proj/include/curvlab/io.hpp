#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "curvlab/inequalities.hpp"
#include "curvlab/operator.hpp"

namespace curvlab {

/// Shortest round-trip decimal form of a double ("nan"/"inf" spelled out).
std::string format_double(double x);

/// Operator file schema:
///   {"n": int, "format": "dense-lex", "matrix": [[...]]}
///   {"n": int, "format": "tensor", "entries": [{"ijkl": [i,j,k,l], "v": x}, ...]}
/// Indices are 1-based; floats are IEEE-754 doubles in shortest round-trip
/// decimal.
nlohmann::json operator_to_json(const TwoFormOperator& op);
CurvatureOperator operator_from_json(const nlohmann::json& j);
CurvatureOperator read_operator_file(const std::string& path);
void write_operator_file(const std::string& path, const TwoFormOperator& op);

nlohmann::json check_report_to_json(const CheckReport& report);

}  // namespace curvlab
