#include "qplanar/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "qplanar/errors.hpp"

namespace qplanar::io {

namespace {

int read_dim(const json& j, const char* what) {
  if (!j.is_object() || !j.contains("dim") || !j["dim"].is_number_integer())
    throw ConfigError(std::string(what) + ": missing integer field \"dim\"");
  const int d = j["dim"].get<int>();
  if (d < 1) throw ConfigError(std::string(what) + ": \"dim\" must be positive");
  return d;
}

std::vector<double> read_cube(const json& arr, int d, const char* what) {
  const auto bad = [what] { return ConfigError(std::string(what) + ": expected a d x d x d nested array"); };
  if (!arr.is_array() || static_cast<int>(arr.size()) != d) throw bad();
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(d) * d * d);
  for (const auto& plane : arr) {
    if (!plane.is_array() || static_cast<int>(plane.size()) != d) throw bad();
    for (const auto& row : plane) {
      if (!row.is_array() || static_cast<int>(row.size()) != d) throw bad();
      for (const auto& v : row) {
        if (!v.is_number()) throw bad();
        out.push_back(v.get<double>());
      }
    }
  }
  return out;
}

json write_cube(const std::vector<double>& c, int d) {
  json arr = json::array();
  for (int i = 0; i < d; ++i) {
    json plane = json::array();
    for (int j = 0; j < d; ++j) {
      json row = json::array();
      for (int k = 0; k < d; ++k) row.push_back(c[(static_cast<std::size_t>(i) * d + j) * d + k]);
      plane.push_back(std::move(row));
    }
    arr.push_back(std::move(plane));
  }
  return arr;
}

Eigen::MatrixXd read_matrix(const json& m, int d) {
  Eigen::MatrixXd out(d, d);
  if (m.is_array() && static_cast<int>(m.size()) == d * d && m[0].is_number()) {
    for (int r = 0; r < d; ++r)
      for (int c = 0; c < d; ++c) out(r, c) = m[static_cast<std::size_t>(r * d + c)].get<double>();
    return out;
  }
  if (!m.is_array() || static_cast<int>(m.size()) != d)
    throw ConfigError("AStructure JSON: affinor must be a d x d array");
  for (int r = 0; r < d; ++r) {
    const auto& row = m[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<int>(row.size()) != d)
      throw ConfigError("AStructure JSON: affinor must be a d x d array");
    for (int c = 0; c < d; ++c) out(r, c) = row[static_cast<std::size_t>(c)].get<double>();
  }
  return out;
}

}  // namespace

json to_json(const SymTensor& p) { return {{"dim", p.dim()}, {"coeffs", write_cube(p.coefficients(), p.dim())}}; }

SymTensor sym_tensor_from_json(const json& j, std::string* warning) {
  const int d = read_dim(j, "SymTensor JSON");
  if (!j.contains("coeffs")) throw ConfigError("SymTensor JSON: missing \"coeffs\"");
  SymTensor p(d, read_cube(j["coeffs"], d, "SymTensor JSON"));
  if (warning) {
    warning->clear();
    if (p.ingest_asymmetry() > 1e-12)
      *warning = "tensor was not symmetric (max asymmetry " + format_double(p.ingest_asymmetry()) +
                 "); symmetrized";
  }
  return p;
}

json to_json(const AStructure& a) {
  json affinors = json::array();
  for (const auto& f : a.affinors()) {
    json m = json::array();
    for (int r = 0; r < a.dim(); ++r) {
      json row = json::array();
      for (int c = 0; c < a.dim(); ++c) row.push_back(f(r, c));
      m.push_back(std::move(row));
    }
    affinors.push_back(std::move(m));
  }
  return {{"dim", a.dim()}, {"affinors", std::move(affinors)}};
}

AStructure structure_from_json(const json& j) {
  const int d = read_dim(j, "AStructure JSON");
  if (!j.contains("affinors") || !j["affinors"].is_array() || j["affinors"].empty())
    throw ConfigError("AStructure JSON: missing \"affinors\" list");
  std::vector<Eigen::MatrixXd> fs;
  for (const auto& m : j["affinors"]) fs.push_back(read_matrix(m, d));
  try {
    return AStructure(std::move(fs), j.value("name", std::string("custom")));
  } catch (const DegenerateInput& e) {
    throw ConfigError(std::string("AStructure JSON: ") + e.what());
  }
}

json to_json(const Connection& c) {
  json j = {{"dim", c.dim()}};
  switch (c.kind()) {
    case Connection::Kind::flat:
      j["kind"] = "flat";
      break;
    case Connection::Kind::weyl: {
      j["kind"] = "weyl";
      const Eigen::VectorXd u = c.upsilon().to_real();
      j["upsilon"] = std::vector<double>(u.data(), u.data() + u.size());
      break;
    }
    case Connection::Kind::explicit_coefficients:
      j["kind"] = "explicit";
      j["gamma"] = write_cube(c.coefficients(Eigen::VectorXd::Zero(c.dim())), c.dim());
      break;
    case Connection::Kind::field:
      throw ConfigError("Connection JSON: point-dependent connections cannot be serialized");
  }
  return j;
}

Connection connection_from_json(const json& j) {
  const int d = read_dim(j, "Connection JSON");
  const std::string kind = j.value("kind", std::string());
  if (kind == "flat") return Connection::flat(d);
  if (kind == "weyl") {
    if (d % 4 != 0) throw ConfigError("Connection JSON: weyl connections need dim = 4n");
    if (!j.contains("upsilon") || !j["upsilon"].is_array() || static_cast<int>(j["upsilon"].size()) != d)
      throw ConfigError("Connection JSON: \"upsilon\" must hold 4n reals");
    Eigen::VectorXd u(d);
    for (int i = 0; i < d; ++i) u[i] = j["upsilon"][static_cast<std::size_t>(i)].get<double>();
    return Connection::weyl(QuatCovector::from_real(u));
  }
  if (kind == "explicit") {
    if (!j.contains("gamma")) throw ConfigError("Connection JSON: explicit kind needs \"gamma\"");
    return Connection::constant(d, read_cube(j["gamma"], d, "Connection JSON"));
  }
  throw ConfigError("Connection JSON: unknown kind '" + kind + "'");
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void write_curve_csv(std::ostream& out, const Curve& curve) {
  out << 't';
  for (int i = 0; i < curve.dim(); ++i) out << ",x" << i;
  out << '\n';
  for (int k = 0; k < curve.node_count(); ++k) {
    out << format_double(curve.time(k));
    const Eigen::VectorXd x = curve.position(k);
    for (int i = 0; i < x.size(); ++i) out << ',' << format_double(x[i]);
    out << '\n';
  }
}

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
    out.push_back(cell);
  }
  return out;
}

double parse_double(const std::string& s) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw ConfigError("curve CSV: cannot parse number '" + s + "'");
  return v;
}

}  // namespace

Curve read_curve_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("curve CSV: empty input");
  const auto header = split_csv(line);
  if (header.size() < 2 || header[0] != "t") throw ConfigError("curve CSV: header must be t,x0,...");
  const int d = static_cast<int>(header.size()) - 1;
  for (int i = 0; i < d; ++i)
    if (header[static_cast<std::size_t>(i) + 1] != "x" + std::to_string(i))
      throw ConfigError("curve CSV: header must be t,x0,...,x{d-1}");
  std::vector<double> times;
  std::vector<double> values;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    const auto cells = split_csv(line);
    if (static_cast<int>(cells.size()) != d + 1) throw ConfigError("curve CSV: row has wrong column count");
    times.push_back(parse_double(cells[0]));
    for (int i = 0; i < d; ++i) values.push_back(parse_double(cells[static_cast<std::size_t>(i) + 1]));
  }
  if (times.size() < 2) throw ConfigError("curve CSV: need at least two nodes");
  const double h = (times.back() - times.front()) / static_cast<double>(times.size() - 1);
  if (!(h > 0.0)) throw ConfigError("curve CSV: times must increase");
  for (std::size_t k = 0; k < times.size(); ++k)
    if (std::abs(times[k] - (times.front() + h * static_cast<double>(k))) > 1e-9 * (1.0 + std::abs(times[k])))
      throw ConfigError("curve CSV: grid is not uniform");
  Eigen::MatrixXd pts(static_cast<Eigen::Index>(times.size()), d);
  for (std::size_t k = 0; k < times.size(); ++k)
    for (int i = 0; i < d; ++i) pts(static_cast<Eigen::Index>(k), i) = values[k * static_cast<std::size_t>(d) + static_cast<std::size_t>(i)];
  return Curve::sampled(times.front(), h, std::move(pts));
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("invalid JSON in '" + path + "': " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  out << text;
}

}  // namespace qplanar::io
