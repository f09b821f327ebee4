#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "qplanar/execution.hpp"
#include "qplanar/planar.hpp"
#include "qplanar/quaternion.hpp"
#include "qplanar/random.hpp"
#include "qplanar/sym_tensor.hpp"

namespace qplanar {

/// Linear connection on a chart of R^d.
///
/// Coefficients are stored in [i][j][k] order: gamma[(i*d + j)*d + k] is the
/// e_k component of nabla_{e_i} e_j, so nabla_X Y = dY(X) + Gamma(X, Y).
class Connection {
 public:
  enum class Kind { flat, weyl, explicit_coefficients, field };
  using Coefficients = std::vector<double>;
  using CoefficientField = std::function<Coefficients(const Eigen::VectorXd&)>;

  static Connection flat(int d);
  /// Constant connection on R^{4n} with Gamma(X, Y) = {{X, U}, Y}.
  static Connection weyl(const QuatCovector& u);
  /// Constant coefficients (d^3 values).
  static Connection constant(int d, Coefficients gamma);
  static Connection from_field(int d, CoefficientField field, bool torsion_free);

  /// This connection plus the constant tensor p.
  Connection plus(const SymTensor& p) const;
  /// This connection plus a constant, not necessarily symmetric, (1,2)-tensor.
  Connection plus(const Coefficients& t) const;

  int dim() const { return dim_; }
  Kind kind() const { return kind_; }
  bool constant_coefficients() const { return !field_; }
  bool torsion_free() const { return torsion_free_; }
  /// Parameter of a Weyl connection; empty for other kinds.
  const QuatCovector& upsilon() const { return upsilon_; }

  Coefficients coefficients(const Eigen::VectorXd& x) const;
  /// Gamma(x)(u, v).
  Eigen::VectorXd contract(const Eigen::VectorXd& x, const Eigen::VectorXd& u,
                           const Eigen::VectorXd& v) const;

 private:
  Connection(int d, Kind kind) : dim_(d), kind_(kind) {}

  int dim_;
  Kind kind_;
  bool torsion_free_ = true;
  Coefficients gamma_;
  CoefficientField field_;
  QuatCovector upsilon_;
};

/// A curve either in closed form or sampled on a uniform grid.
///
/// Sampled curves use second-order central differences for velocity and
/// acceleration, so only interior nodes can be evaluated. Closed-form
/// curves are evaluated on `nodes` grid points spanning [t0, t1], all usable.
class Curve {
 public:
  using PathFn = std::function<Eigen::VectorXd(double)>;

  static Curve closed_form(int d, double t0, double t1, PathFn position, PathFn velocity,
                           PathFn acceleration, int nodes = 201);
  /// points: one row per node, t_k = t0 + k h.
  static Curve sampled(double t0, double h, Eigen::MatrixXd points);

  bool is_sampled() const { return !position_; }
  int dim() const { return dim_; }
  int node_count() const { return nodes_; }
  double t0() const { return t0_; }
  double t1() const { return t0_ + step_ * (nodes_ - 1); }
  double step() const { return step_; }
  double time(int k) const { return t0_ + step_ * k; }
  bool is_interior(int k) const;
  /// Node index with time t (within 1e-9 h), if any.
  std::optional<int> node_at(double t) const;
  const Eigen::MatrixXd& points() const { return points_; }

  Eigen::VectorXd position(int k) const;
  Eigen::VectorXd velocity(int k) const;
  Eigen::VectorXd acceleration(int k) const;

  /// Closed form only: evaluation at arbitrary t in [t0, t1].
  Eigen::VectorXd position_at(double t) const;
  Eigen::VectorXd velocity_at(double t) const;
  Eigen::VectorXd acceleration_at(double t) const;

  /// Sampled curve with node points f(x_k) on the same grid.
  Curve mapped(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& f) const;

 private:
  Curve() = default;
  void require_node(int k) const;

  int dim_ = 0;
  int nodes_ = 0;
  double t0_ = 0.0;
  double step_ = 0.0;
  Eigen::MatrixXd points_;
  PathFn position_, velocity_, acceleration_;
};

/// c'' + Gamma(c)(c', c') at time t (a node time for sampled curves).
Eigen::VectorXd covariant_acceleration(const Connection& conn, const Curve& curve, double t);
/// Same, addressed by node index.
Eigen::VectorXd covariant_acceleration_at_node(const Connection& conn, const Curve& curve, int k);

/// Sym(Gamma_1 - Gamma_2) at x.
SymTensor symmetrized_difference(const Connection& c1, const Connection& c2, const Eigen::VectorXd& x);

/// Constant connection with Gamma(X, Y) = weyl_term(X, U, Y) on R^{4n}; n must match U.
Connection weyl_connection(const QuatCovector& u, int n);

/// Classical RK4 for x'' = -Gamma(x', x') on [0, t_max]. The step is shrunk so that
/// it divides t_max. Throws BlowUp on non-finite state.
Curve integrate_geodesic(const Connection& conn, const Eigen::VectorXd& x0, const Eigen::VectorXd& v0,
                         double t_max, double step);

using CoefficientCurve = std::function<Eigen::VectorXd(double)>;

/// RK4 for x'' = -Gamma(x', x') + sum_i q_i(t) F_i x'.
Curve integrate_planar_curve(const Connection& conn, const AStructure& a, const Eigen::VectorXd& x0,
                             const Eigen::VectorXd& v0, const CoefficientCurve& q, double t_max,
                             double step);

/// q_i(t) = a_i + b_i sin(2t) + c_i cos(3t) with Gaussian a, b, c scaled by `scale`.
CoefficientCurve random_coefficient_curve(Rng& rng, int ell, double scale);

struct PlanarityReport {
  std::vector<double> times;
  /// Distance of the covariant acceleration to A(c') divided by max(|acc|, |c'|^2).
  std::vector<double> residuals;
  /// Least-squares hull coefficients per node, one per affinor.
  std::vector<Eigen::VectorXd> coefficients;
  /// Nodes with vanishing velocity; excluded from max_residual.
  std::vector<char> flagged;
  double max_residual = 0.0;
  int evaluated = 0;
};

PlanarityReport planarity_residual(const Connection& conn, const AStructure& a, const Curve& curve,
                                   Execution policy = Execution::parallel);

/// Quaternion q with sum_i c_i F_i X = X q for the basis (E, I, J, K) = (1, i, j, -k).
Quaternion quaternion_coefficients(const Eigen::VectorXd& c);

struct UpsilonAlong {
  std::vector<double> times;
  std::vector<QuatCovector> upsilons;
  /// |acc + {{c', U_t}, c'}| / max(|acc|, |c'|^2) per node.
  std::vector<double> deformed_residuals;
  double max_deformed_residual = 0.0;
};

/// For an H-planar curve (flat connection, quaternionic structure) with c'' = c' q(t),
/// returns U_t = (-q/2) c'^* / |c'|^2 at each node, so that U_t(c') = -q/2.
/// Throws NotInHull if the flat planarity residual exceeds `tol`, DegenerateInput on
/// a vanishing velocity.
UpsilonAlong solve_upsilon_along(const Curve& curve, double tol = 1e-6);

/// A map with its derivative.
struct PlanarMap {
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> f;
  std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> df;

  static PlanarMap linear(const Eigen::MatrixXd& m);
};

struct CurveBatchSpec {
  int curves = 8;
  double t_max = 1.0;
  double step = 1e-3;
  /// Scale of the random coefficient curves q; 0 integrates geodesics of conn_a.
  double q_scale = 0.5;
};

struct MapCheckReport {
  std::vector<double> source_residuals;
  std::vector<double> image_residuals;
  double max_source_residual = 0.0;
  double max_image_residual = 0.0;
  double derivative_error = 0.0;
  bool verdict = false;
};

/// Integrates A-planar curves for conn_a with random x0, v0 and q, maps the nodes
/// through f and measures B-planarity of the images for conn_b. Pass iff every
/// image residual is <= tol. The derivative is checked against central differences
/// first; a relative mismatch above 1e-5 throws ConfigError.
MapCheckReport check_planar_map(const PlanarMap& map, const Connection& conn_a, const AStructure& a,
                                const Connection& conn_b, const AStructure& b,
                                const CurveBatchSpec& batch, std::uint64_t seed, double tol = 1e-4,
                                Execution policy = Execution::parallel);

}  // namespace qplanar
