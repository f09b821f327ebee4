#pragma once

#include <iosfwd>
#include <string>

#include "json.hpp"

#include "qplanar/connection.hpp"
#include "qplanar/planar.hpp"
#include "qplanar/sym_tensor.hpp"

namespace qplanar::io {

using nlohmann::json;

/// {"dim": d, "coeffs": [i][j][k]}. Loading symmetrizes; asymmetry above 1e-12
/// is reported through `warning` (left empty otherwise).
json to_json(const SymTensor& p);
SymTensor sym_tensor_from_json(const json& j, std::string* warning = nullptr);

/// {"dim": d, "affinors": [d x d row-major nested arrays]}, affinor[r][c] acting on columns.
json to_json(const AStructure& a);
AStructure structure_from_json(const json& j);

/// {"dim": d, "kind": "flat" | "weyl" | "explicit", "upsilon": [4n], "gamma": [i][j][k]}.
json to_json(const Connection& c);
Connection connection_from_json(const json& j);

/// Header "t,x0,...,x{d-1}", one node per row, uniform grid.
void write_curve_csv(std::ostream& out, const Curve& curve);
Curve read_curve_csv(std::istream& in);

json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

/// Shortest decimal form that reads back to the same double.
std::string format_double(double v);

}  // namespace qplanar::io
