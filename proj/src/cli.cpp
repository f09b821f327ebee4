#include "qplanar/cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "qplanar/connection.hpp"
#include "qplanar/errors.hpp"
#include "qplanar/io.hpp"
#include "qplanar/planar.hpp"
#include "qplanar/scenarios.hpp"

namespace qplanar {

namespace {

using nlohmann::json;

struct Common {
  std::uint64_t seed = 1;
  int n = 2;
  int dim = 0;
  double tol_alg = 1e-9;
  double tol_ode = 1e-6;
  double tol_map = 1e-4;
  double step = 1e-3;
  int samples = 0;
  std::string out;
  std::string format = "json";
  bool serial = false;
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--seed", c.seed, "Random seed");
  app->add_option("--n", c.n, "Quaternionic dimension n (d = 4n)")->check(CLI::PositiveNumber);
  app->add_option("--dim", c.dim, "Real dimension override for the identity structure")
      ->check(CLI::NonNegativeNumber);
  app->add_option("--tol-alg", c.tol_alg, "Algebraic tolerance")->check(CLI::PositiveNumber);
  app->add_option("--tol-ode", c.tol_ode, "ODE and planarity tolerance")->check(CLI::PositiveNumber);
  app->add_option("--tol-map", c.tol_map, "Map test tolerance")->check(CLI::PositiveNumber);
  app->add_option("--step", c.step, "Integration step")->check(CLI::PositiveNumber);
  app->add_option("--samples", c.samples, "Sample count (0: scenario default)")->check(CLI::NonNegativeNumber);
  app->add_option("--out", c.out, "Output path (default: standard output)");
  app->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
  app->add_flag("--serial", c.serial, "Disable OpenMP parallel kernels");
}

Execution policy_of(const Common& c) { return c.serial ? Execution::serial : Execution::parallel; }

void emit(const Common& c, const std::string& text, std::ostream& out) {
  if (c.out.empty())
    out << text;
  else
    io::write_text_file(c.out, text);
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> v;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      v.push_back(std::stod(item, &used));
      if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError("cannot parse number '" + item + "'");
    }
  }
  return v;
}

Eigen::VectorXd to_vector(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

AStructure load_structure(const std::string& name, const std::string& file, const Common& c) {
  if (!file.empty()) return io::structure_from_json(io::read_json_file(file));
  if (name == "identity" || name == "projective") return AStructure::identity(c.dim > 0 ? c.dim : 4 * c.n);
  return AStructure::by_name(name, c.n);
}

Connection load_connection(const std::string& file, int d) {
  if (file.empty()) return Connection::flat(d);
  Connection conn = io::connection_from_json(io::read_json_file(file));
  if (d > 0 && conn.dim() != d)
    throw ConfigError("connection dimension " + std::to_string(conn.dim()) + " does not match " + std::to_string(d));
  return conn;
}

json forms_json(const OneFormList& forms) {
  json j = json::array();
  for (const auto& f : forms) j.push_back(std::vector<double>(f.data(), f.data() + f.size()));
  return j;
}

int run_decompose_cmd(const Common& c, const std::string& tensor, const std::string& structure,
                      const std::string& structure_file, std::ostream& out, std::ostream& err) {
  std::string warning;
  const SymTensor p = io::sym_tensor_from_json(io::read_json_file(tensor), &warning);
  if (!warning.empty()) err << "warning: " << warning << '\n';
  const AStructure a = load_structure(structure, structure_file, c);
  if (a.dim() != p.dim())
    throw ConfigError("tensor dimension " + std::to_string(p.dim()) + " does not match structure dimension " +
                      std::to_string(a.dim()));
  DecomposeOptions opt;
  opt.tolerance = c.tol_alg;
  opt.seed = c.seed;
  opt.policy = policy_of(c);
  if (c.samples > 0) opt.samples = c.samples;
  Decomposition dec;
  try {
    dec = decompose_A1(p, a, opt);
  } catch (const GenericRankFailure& e) {
    throw ConfigError(e.what());
  }
  if (c.format == "csv") {
    std::ostringstream s;
    s << "form";
    for (int k = 0; k < a.dim(); ++k) s << ",c" << k;
    s << '\n';
    if (dec.accepted)
      for (std::size_t i = 0; i < dec.forms.size(); ++i) {
        s << i;
        for (int k = 0; k < a.dim(); ++k) s << ',' << io::format_double(dec.forms[i][k]);
        s << '\n';
      }
    emit(c, s.str(), out);
  } else {
    json j = {{"accepted", dec.accepted},
              {"structure", a.name()},
              {"dim", a.dim()},
              {"residual", dec.residual},
              {"extraction_residual", dec.extraction_residual},
              {"lsq_residual", dec.lsq_residual},
              {"solver_gap", dec.solver_gap},
              {"condition_number", dec.condition_number},
              {"tolerance", c.tol_alg}};
    if (dec.accepted) j["forms"] = forms_json(dec.forms);
    emit(c, j.dump(2) + "\n", out);
  }
  return dec.accepted ? 0 : 1;
}

int run_geodesic_cmd(const Common& c, const std::string& connection, const std::string& x0s,
                     const std::string& v0s, double t_max, std::ostream& out) {
  int d = c.dim > 0 ? c.dim : 4 * c.n;
  const Connection conn = load_connection(connection, connection.empty() ? d : 0);
  d = conn.dim();
  Eigen::VectorXd x0 = Eigen::VectorXd::Zero(d);
  Eigen::VectorXd v0 = Eigen::VectorXd::Unit(d, 0);
  if (!x0s.empty()) x0 = to_vector(parse_list(x0s));
  if (!v0s.empty()) v0 = to_vector(parse_list(v0s));
  if (x0.size() != d || v0.size() != d) throw ConfigError("--x0 and --v0 need " + std::to_string(d) + " entries");
  if (t_max <= 0.0) throw ConfigError("--t-max must be positive");
  const Curve curve = integrate_geodesic(conn, x0, v0, t_max, c.step);
  if (c.format == "json") {
    json pts = json::array();
    for (int k = 0; k < curve.node_count(); ++k) {
      const Eigen::VectorXd p = curve.position(k);
      pts.push_back({{"t", curve.time(k)}, {"x", std::vector<double>(p.data(), p.data() + p.size())}});
    }
    emit(c, json{{"dim", d}, {"step", curve.step()}, {"nodes", pts}}.dump(2) + "\n", out);
  } else {
    std::ostringstream s;
    io::write_curve_csv(s, curve);
    emit(c, s.str(), out);
  }
  return 0;
}

int run_planarity_cmd(const Common& c, const std::string& curve_path, const std::string& connection,
                      const std::string& structure, const std::string& structure_file, std::ostream& out) {
  std::ifstream in(curve_path);
  if (!in) throw ConfigError("cannot open curve file '" + curve_path + "'");
  const Curve curve = io::read_curve_csv(in);
  const AStructure a = load_structure(structure, structure_file, c);
  if (a.dim() != curve.dim())
    throw ConfigError("curve dimension " + std::to_string(curve.dim()) + " does not match structure dimension " +
                      std::to_string(a.dim()));
  const Connection conn = load_connection(connection, curve.dim());
  const PlanarityReport rep = planarity_residual(conn, a, curve, policy_of(c));
  const bool pass = rep.max_residual <= c.tol_ode;
  if (c.format == "csv") {
    std::ostringstream s;
    s << "t,residual,flagged\n";
    for (std::size_t i = 0; i < rep.times.size(); ++i)
      s << io::format_double(rep.times[i]) << ',' << io::format_double(rep.residuals[i]) << ','
        << (rep.flagged[i] ? "true" : "false") << '\n';
    emit(c, s.str(), out);
  } else {
    json nodes = json::array();
    for (std::size_t i = 0; i < rep.times.size(); ++i) {
      const Eigen::VectorXd& q = rep.coefficients[i];
      nodes.push_back({{"t", rep.times[i]},
                       {"residual", rep.residuals[i]},
                       {"flagged", rep.flagged[i] != 0},
                       {"coefficients", std::vector<double>(q.data(), q.data() + q.size())}});
    }
    emit(c,
         json{{"structure", a.name()},
              {"max_residual", rep.max_residual},
              {"evaluated", rep.evaluated},
              {"tolerance", c.tol_ode},
              {"pass", pass},
              {"nodes", nodes}}
                 .dump(2) +
             "\n",
         out);
  }
  return pass ? 0 : 1;
}

int run_experiment_cmd(const Common& c, const std::string& scenario, const std::string& structure,
                       const std::string& structure_b, std::ostream& out) {
  ScenarioConfig cfg;
  cfg.scenario = scenario;
  cfg.seed = c.seed;
  cfg.n = c.n;
  cfg.dim = c.dim;
  cfg.tol_alg = c.tol_alg;
  cfg.tol_ode = c.tol_ode;
  cfg.tol_map = c.tol_map;
  cfg.step = c.step;
  cfg.samples = c.samples;
  cfg.structure = structure;
  cfg.structure_b = structure_b;
  cfg.policy = policy_of(c);
  const Report rep = run_scenario(cfg);
  emit(c, c.format == "csv" ? rep.to_csv() : rep.to_json().dump(2) + "\n", out);
  return rep.pass ? 0 : 1;
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Planarity experiments for quaternionic and related affinor structures", "qplanar"};
  app.require_subcommand(1);

  Common dec_c, geo_c, pl_c, exp_c, all_c;
  std::string tensor, dec_structure = "quaternionic", dec_structure_file;
  auto* dec = app.add_subcommand("decompose", "Test whether a symmetric tensor lies in A^(1) and recover its forms");
  add_common(dec, dec_c);
  dec->add_option("--tensor", tensor, "SymTensor JSON file")->required();
  auto* dec_s = dec->add_option("--structure", dec_structure, "identity | projective | complex | quaternionic");
  dec->add_option("--structure-file", dec_structure_file, "AStructure JSON file")->excludes(dec_s);

  std::string geo_conn, x0s, v0s;
  double t_max = 1.0;
  auto* geo = app.add_subcommand("geodesic", "Integrate a geodesic with RK4 and write the sampled curve");
  add_common(geo, geo_c);
  geo_c.format = "csv";
  geo->add_option("--connection", geo_conn, "Connection JSON file (default: flat)");
  geo->add_option("--x0", x0s, "Initial point, comma separated");
  geo->add_option("--v0", v0s, "Initial velocity, comma separated");
  geo->add_option("--t-max", t_max, "Integration horizon");

  std::string curve_path, pl_conn, pl_structure = "quaternionic", pl_structure_file;
  auto* pl = app.add_subcommand("planarity", "Planarity residual of a sampled curve");
  add_common(pl, pl_c);
  pl->add_option("--curve", curve_path, "Curve CSV file")->required();
  pl->add_option("--connection", pl_conn, "Connection JSON file (default: flat)");
  auto* pl_s = pl->add_option("--structure", pl_structure, "identity | projective | complex | quaternionic");
  pl->add_option("--structure-file", pl_structure_file, "AStructure JSON file")->excludes(pl_s);

  std::string scenario, exp_structure, exp_structure_b;
  auto* ex = app.add_subcommand("experiment", "Run one scenario and write its report");
  add_common(ex, exp_c);
  ex->add_option("scenario", scenario, "Scenario name")->required()->check(CLI::IsMember(scenario_names()));
  ex->add_option("--structure", exp_structure, "Structure (thm25) or structure A (thm26)");
  ex->add_option("--structure-b", exp_structure_b, "Structure B (thm26)");

  std::string all_structure, all_structure_b;
  auto* all = app.add_subcommand("all", "Run every theorem scenario and aggregate");
  add_common(all, all_c);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, err, err);
    return 2;
  }

  try {
    if (dec->parsed()) return run_decompose_cmd(dec_c, tensor, dec_structure, dec_structure_file, out, err);
    if (geo->parsed()) return run_geodesic_cmd(geo_c, geo_conn, x0s, v0s, t_max, out);
    if (pl->parsed()) return run_planarity_cmd(pl_c, curve_path, pl_conn, pl_structure, pl_structure_file, out);
    if (ex->parsed()) return run_experiment_cmd(exp_c, scenario, exp_structure, exp_structure_b, out);
    if (all->parsed()) return run_experiment_cmd(all_c, "all", all_structure, all_structure_b, out);
  } catch (const ConfigError& e) {
    err << "configuration error: " << e.what() << '\n';
    return 2;
  } catch (const nlohmann::json::exception& e) {
    err << "configuration error: " << e.what() << '\n';
    return 2;
  } catch (const BlowUp& e) {
    err << "integration aborted: " << e.what() << '\n';
    return 1;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

}  // namespace qplanar
