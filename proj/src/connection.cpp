#include "qplanar/connection.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qplanar/errors.hpp"

namespace qplanar {

namespace {

std::size_t cube(int d) { return static_cast<std::size_t>(d) * d * d; }

bool symmetric_in_lower(const Connection::Coefficients& g, int d) {
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j)
      for (int k = 0; k < d; ++k)
        if (g[(static_cast<std::size_t>(i) * d + j) * d + k] != g[(static_cast<std::size_t>(j) * d + i) * d + k])
          return false;
  return true;
}

Eigen::VectorXd contract_coefficients(const Connection::Coefficients& g, int d, const Eigen::VectorXd& u,
                                      const Eigen::VectorXd& v) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(d);
  for (int i = 0; i < d; ++i) {
    if (u[i] == 0.0) continue;
    for (int j = 0; j < d; ++j) {
      const double w = u[i] * v[j];
      if (w == 0.0) continue;
      const double* row = &g[(static_cast<std::size_t>(i) * d + j) * d];
      for (int k = 0; k < d; ++k) out[k] += w * row[k];
    }
  }
  return out;
}

}  // namespace

Connection Connection::flat(int d) {
  if (d < 1) throw DegenerateInput("Connection::flat: dimension must be positive");
  Connection c(d, Kind::flat);
  c.gamma_.assign(cube(d), 0.0);
  return c;
}

Connection Connection::weyl(const QuatCovector& u) {
  const int n = u.size();
  if (n < 1) throw DegenerateInput("Connection::weyl: empty covector");
  const int d = 4 * n;
  Connection c(d, Kind::weyl);
  c.upsilon_ = u;
  c.gamma_.assign(cube(d), 0.0);
  const Eigen::MatrixXd E = Eigen::MatrixXd::Identity(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      const Eigen::VectorXd w =
          weyl_term(QuatVector::from_real(E.col(i)), u, QuatVector::from_real(E.col(j))).to_real();
      for (int k = 0; k < d; ++k) c.gamma_[(static_cast<std::size_t>(i) * d + j) * d + k] = w[k];
    }
  c.torsion_free_ = symmetric_in_lower(c.gamma_, d);
  return c;
}

Connection Connection::constant(int d, Coefficients gamma) {
  if (d < 1) throw DegenerateInput("Connection::constant: dimension must be positive");
  if (gamma.size() != cube(d)) throw DimensionMismatch("Connection::constant: expected d^3 coefficients");
  Connection c(d, Kind::explicit_coefficients);
  c.gamma_ = std::move(gamma);
  c.torsion_free_ = symmetric_in_lower(c.gamma_, d);
  return c;
}

Connection Connection::from_field(int d, CoefficientField field, bool torsion_free) {
  if (d < 1) throw DegenerateInput("Connection::from_field: dimension must be positive");
  if (!field) throw DegenerateInput("Connection::from_field: empty coefficient field");
  Connection c(d, Kind::field);
  c.field_ = std::move(field);
  c.torsion_free_ = torsion_free;
  return c;
}

Connection Connection::plus(const SymTensor& p) const {
  if (p.dim() != dim_) throw DimensionMismatch("Connection::plus: dimension mismatch");
  Connection c = plus(p.coefficients());
  c.torsion_free_ = torsion_free_;
  return c;
}

Connection Connection::plus(const Coefficients& t) const {
  if (t.size() != cube(dim_)) throw DimensionMismatch("Connection::plus: expected d^3 coefficients");
  if (field_) {
    const CoefficientField base = field_;
    auto c = from_field(
        dim_,
        [base, t](const Eigen::VectorXd& x) {
          Coefficients g = base(x);
          for (std::size_t i = 0; i < g.size(); ++i) g[i] += t[i];
          return g;
        },
        torsion_free_ && symmetric_in_lower(t, dim_));
    return c;
  }
  Coefficients g = gamma_;
  for (std::size_t i = 0; i < g.size(); ++i) g[i] += t[i];
  return constant(dim_, std::move(g));
}

Connection::Coefficients Connection::coefficients(const Eigen::VectorXd& x) const {
  if (x.size() != dim_) throw DimensionMismatch("Connection::coefficients: point dimension mismatch");
  if (!field_) return gamma_;
  Coefficients g = field_(x);
  if (g.size() != cube(dim_)) throw DimensionMismatch("Connection: field returned wrong coefficient count");
  return g;
}

Eigen::VectorXd Connection::contract(const Eigen::VectorXd& x, const Eigen::VectorXd& u,
                                     const Eigen::VectorXd& v) const {
  if (u.size() != dim_ || v.size() != dim_) throw DimensionMismatch("Connection::contract");
  if (kind_ == Kind::flat) return Eigen::VectorXd::Zero(dim_);
  if (!field_) return contract_coefficients(gamma_, dim_, u, v);
  return contract_coefficients(coefficients(x), dim_, u, v);
}

// ---------------------------------------------------------------------------

Curve Curve::closed_form(int d, double t0, double t1, PathFn position, PathFn velocity,
                         PathFn acceleration, int nodes) {
  if (!(t1 > t0)) throw DegenerateInput("Curve::closed_form: empty time interval");
  if (nodes < 2) throw DegenerateInput("Curve::closed_form: need at least two nodes");
  if (!position || !velocity || !acceleration)
    throw DegenerateInput("Curve::closed_form: position, velocity and acceleration are required");
  Curve c;
  c.dim_ = d;
  c.nodes_ = nodes;
  c.t0_ = t0;
  c.step_ = (t1 - t0) / (nodes - 1);
  c.position_ = std::move(position);
  c.velocity_ = std::move(velocity);
  c.acceleration_ = std::move(acceleration);
  return c;
}

Curve Curve::sampled(double t0, double h, Eigen::MatrixXd points) {
  if (!(h > 0.0)) throw DegenerateInput("Curve::sampled: step must be positive");
  if (points.rows() < 1 || points.cols() < 1) throw DegenerateInput("Curve::sampled: no nodes");
  Curve c;
  c.dim_ = static_cast<int>(points.cols());
  c.nodes_ = static_cast<int>(points.rows());
  c.t0_ = t0;
  c.step_ = h;
  c.points_ = std::move(points);
  return c;
}

bool Curve::is_interior(int k) const {
  if (k < 0 || k >= nodes_) return false;
  return !is_sampled() || (k > 0 && k < nodes_ - 1);
}

std::optional<int> Curve::node_at(double t) const {
  const double r = (t - t0_) / step_;
  const double k = std::round(r);
  if (std::abs(r - k) > 1e-9 || k < 0 || k >= nodes_) return std::nullopt;
  return static_cast<int>(k);
}

void Curve::require_node(int k) const {
  if (k < 0 || k >= nodes_) throw OutOfDomain("Curve: node index out of range");
}

Eigen::VectorXd Curve::position(int k) const {
  require_node(k);
  return is_sampled() ? Eigen::VectorXd(points_.row(k).transpose()) : position_(time(k));
}

Eigen::VectorXd Curve::velocity(int k) const {
  if (!is_sampled()) return velocity_at(time(k));
  if (!is_interior(k)) throw OutOfDomain("Curve: derivatives of a sampled curve need an interior node");
  return (points_.row(k + 1) - points_.row(k - 1)).transpose() / (2.0 * step_);
}

Eigen::VectorXd Curve::acceleration(int k) const {
  if (!is_sampled()) return acceleration_at(time(k));
  if (!is_interior(k)) throw OutOfDomain("Curve: derivatives of a sampled curve need an interior node");
  return (points_.row(k + 1) - 2.0 * points_.row(k) + points_.row(k - 1)).transpose() / (step_ * step_);
}

Eigen::VectorXd Curve::position_at(double t) const {
  if (is_sampled()) {
    const auto k = node_at(t);
    if (!k) throw OutOfDomain("Curve: sampled curves are only defined at nodes");
    return position(*k);
  }
  return position_(t);
}

Eigen::VectorXd Curve::velocity_at(double t) const {
  if (is_sampled()) {
    const auto k = node_at(t);
    if (!k) throw OutOfDomain("Curve: sampled curves are only defined at nodes");
    return velocity(*k);
  }
  return velocity_(t);
}

Eigen::VectorXd Curve::acceleration_at(double t) const {
  if (is_sampled()) {
    const auto k = node_at(t);
    if (!k) throw OutOfDomain("Curve: sampled curves are only defined at nodes");
    return acceleration(*k);
  }
  return acceleration_(t);
}

Curve Curve::mapped(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& f) const {
  const Eigen::VectorXd first = f(position(0));
  Eigen::MatrixXd img(nodes_, first.size());
  img.row(0) = first.transpose();
  for (int k = 1; k < nodes_; ++k) img.row(k) = f(position(k)).transpose();
  return sampled(t0_, step_, std::move(img));
}

// ---------------------------------------------------------------------------

Eigen::VectorXd covariant_acceleration_at_node(const Connection& conn, const Curve& curve, int k) {
  if (conn.dim() != curve.dim()) throw DimensionMismatch("covariant_acceleration: dimension mismatch");
  if (!curve.is_interior(k)) throw OutOfDomain("covariant_acceleration: boundary node of a sampled curve");
  const Eigen::VectorXd v = curve.velocity(k);
  return curve.acceleration(k) + conn.contract(curve.position(k), v, v);
}

Eigen::VectorXd covariant_acceleration(const Connection& conn, const Curve& curve, double t) {
  if (conn.dim() != curve.dim()) throw DimensionMismatch("covariant_acceleration: dimension mismatch");
  if (curve.is_sampled()) {
    const auto k = curve.node_at(t);
    if (!k) throw OutOfDomain("covariant_acceleration: t is not a node of the sampled curve");
    return covariant_acceleration_at_node(conn, curve, *k);
  }
  if (t < curve.t0() || t > curve.t1()) throw OutOfDomain("covariant_acceleration: t outside the curve");
  const Eigen::VectorXd v = curve.velocity_at(t);
  return curve.acceleration_at(t) + conn.contract(curve.position_at(t), v, v);
}

SymTensor symmetrized_difference(const Connection& c1, const Connection& c2, const Eigen::VectorXd& x) {
  if (c1.dim() != c2.dim()) throw DimensionMismatch("symmetrized_difference: dimension mismatch");
  const int d = c1.dim();
  const auto g1 = c1.coefficients(x);
  const auto g2 = c2.coefficients(x);
  std::vector<double> diff(g1.size());
  for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = g1[i] - g2[i];
  return SymTensor(d, diff);
}

Connection weyl_connection(const QuatCovector& u, int n) {
  if (u.size() != n) throw DimensionMismatch("weyl_connection: covector length differs from n");
  return Connection::weyl(u);
}

namespace {

using SecondOrderField = std::function<Eigen::VectorXd(double, const Eigen::VectorXd&, const Eigen::VectorXd&)>;

Curve integrate_rk4(const SecondOrderField& accel, const Eigen::VectorXd& x0, const Eigen::VectorXd& v0,
                    double t_max, double step) {
  if (!(step > 0.0)) throw DegenerateInput("integrate: step must be positive");
  if (!(t_max > 0.0)) throw DegenerateInput("integrate: t_max must be positive");
  if (x0.size() != v0.size()) throw DimensionMismatch("integrate: x0 and v0 differ in dimension");
  const int steps = std::max(1, static_cast<int>(std::ceil(t_max / step - 1e-9)));
  const double h = t_max / steps;
  Eigen::MatrixXd pts(steps + 1, x0.size());
  Eigen::VectorXd x = x0;
  Eigen::VectorXd v = v0;
  pts.row(0) = x.transpose();
  for (int s = 0; s < steps; ++s) {
    const double t = s * h;
    const Eigen::VectorXd k1x = v;
    const Eigen::VectorXd k1v = accel(t, x, v);
    const Eigen::VectorXd k2x = v + 0.5 * h * k1v;
    const Eigen::VectorXd k2v = accel(t + 0.5 * h, x + 0.5 * h * k1x, k2x);
    const Eigen::VectorXd k3x = v + 0.5 * h * k2v;
    const Eigen::VectorXd k3v = accel(t + 0.5 * h, x + 0.5 * h * k2x, k3x);
    const Eigen::VectorXd k4x = v + h * k3v;
    const Eigen::VectorXd k4v = accel(t + h, x + h * k3x, k4x);
    x += (h / 6.0) * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
    v += (h / 6.0) * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
    if (!x.allFinite() || !v.allFinite())
      throw BlowUp("integrate: non-finite state at t = " + std::to_string(t + h), t);
    pts.row(s + 1) = x.transpose();
  }
  return Curve::sampled(0.0, h, std::move(pts));
}

}  // namespace

Curve integrate_geodesic(const Connection& conn, const Eigen::VectorXd& x0, const Eigen::VectorXd& v0,
                         double t_max, double step) {
  if (x0.size() != conn.dim()) throw DimensionMismatch("integrate_geodesic: dimension mismatch");
  return integrate_rk4(
      [&conn](double, const Eigen::VectorXd& x, const Eigen::VectorXd& v) -> Eigen::VectorXd {
        return -conn.contract(x, v, v);
      },
      x0, v0, t_max, step);
}

Curve integrate_planar_curve(const Connection& conn, const AStructure& a, const Eigen::VectorXd& x0,
                             const Eigen::VectorXd& v0, const CoefficientCurve& q, double t_max,
                             double step) {
  if (x0.size() != conn.dim() || a.dim() != conn.dim())
    throw DimensionMismatch("integrate_planar_curve: dimension mismatch");
  return integrate_rk4(
      [&](double t, const Eigen::VectorXd& x, const Eigen::VectorXd& v) -> Eigen::VectorXd {
        Eigen::VectorXd acc = -conn.contract(x, v, v);
        if (q) {
          const Eigen::VectorXd c = q(t);
          if (c.size() != a.rank()) throw DimensionMismatch("integrate_planar_curve: q has wrong length");
          acc += a.frame(v) * c;
        }
        return acc;
      },
      x0, v0, t_max, step);
}

CoefficientCurve random_coefficient_curve(Rng& rng, int ell, double scale) {
  const Eigen::VectorXd a = scale * rng.normal_vector(ell);
  const Eigen::VectorXd b = scale * rng.normal_vector(ell);
  const Eigen::VectorXd c = scale * rng.normal_vector(ell);
  return [a, b, c](double t) -> Eigen::VectorXd {
    return a + std::sin(2.0 * t) * b + std::cos(3.0 * t) * c;
  };
}

// ---------------------------------------------------------------------------

namespace {

struct NodeResidual {
  double residual = 0.0;
  Eigen::VectorXd coefficients;
  bool flagged = false;
};

NodeResidual node_residual(const AStructure& a, const Eigen::VectorXd& v, const Eigen::VectorXd& acc) {
  NodeResidual r;
  const double speed2 = v.squaredNorm();
  if (!(speed2 > 0.0) || std::sqrt(speed2) <= 1e-12 * (1.0 + acc.norm())) {
    r.flagged = true;
    r.coefficients = Eigen::VectorXd::Zero(a.rank());
    return r;
  }
  const Eigen::MatrixXd frame = a.frame(v);
  r.coefficients = frame.completeOrthogonalDecomposition().solve(acc);
  const double denom = std::max(acc.norm(), speed2);
  r.residual = (acc - frame * r.coefficients).norm() / denom;
  return r;
}

}  // namespace

PlanarityReport planarity_residual(const Connection& conn, const AStructure& a, const Curve& curve,
                                   Execution policy) {
  if (conn.dim() != curve.dim() || a.dim() != curve.dim())
    throw DimensionMismatch("planarity_residual: dimension mismatch");
  if (curve.is_sampled() && curve.node_count() < 5)
    throw DegenerateInput("planarity_residual: sampled curves need at least 5 nodes");
  std::vector<int> nodes;
  for (int k = 0; k < curve.node_count(); ++k)
    if (curve.is_interior(k)) nodes.push_back(k);

  PlanarityReport rep;
  rep.times.resize(nodes.size());
  rep.residuals.resize(nodes.size());
  rep.coefficients.resize(nodes.size());
  rep.flagged.resize(nodes.size());
  for_each_index(policy, nodes.size(), [&](std::size_t i) {
    const int k = nodes[i];
    const Eigen::VectorXd v = curve.velocity(k);
    const Eigen::VectorXd acc = curve.acceleration(k) + conn.contract(curve.position(k), v, v);
    NodeResidual r = node_residual(a, v, acc);
    rep.times[i] = curve.time(k);
    rep.residuals[i] = r.residual;
    rep.coefficients[i] = std::move(r.coefficients);
    rep.flagged[i] = r.flagged;
  });
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (rep.flagged[i]) continue;
    ++rep.evaluated;
    rep.max_residual = std::max(rep.max_residual, rep.residuals[i]);
  }
  return rep;
}

Quaternion quaternion_coefficients(const Eigen::VectorXd& c) {
  if (c.size() != 4) throw DimensionMismatch("quaternion_coefficients: need 4 coefficients");
  return {c[0], c[1], c[2], -c[3]};
}

UpsilonAlong solve_upsilon_along(const Curve& curve, double tol) {
  if (curve.dim() % 4 != 0) throw DimensionMismatch("solve_upsilon_along: dimension must be 4n");
  const int n = curve.dim() / 4;
  const AStructure q_struct = AStructure::quaternionic(n);
  const Connection flat = Connection::flat(curve.dim());
  const PlanarityReport rep = planarity_residual(flat, q_struct, curve, Execution::serial);
  if (std::any_of(rep.flagged.begin(), rep.flagged.end(), [](char f) { return f != 0; }))
    throw DegenerateInput("solve_upsilon_along: vanishing velocity on the curve");
  if (rep.max_residual > tol)
    throw NotInHull("solve_upsilon_along: curve is not H-planar for the flat connection");

  UpsilonAlong out;
  int idx = 0;
  for (int k = 0; k < curve.node_count(); ++k) {
    if (!curve.is_interior(k)) continue;
    const Eigen::VectorXd vr = curve.velocity(k);
    const Eigen::VectorXd acc = curve.acceleration(k);
    const QuatVector v = QuatVector::from_real(vr);
    const Quaternion half = -0.5 * quaternion_coefficients(rep.coefficients[static_cast<std::size_t>(idx++)]);
    const double speed2 = vr.squaredNorm();
    QuatCovector u(n);
    for (int m = 0; m < n; ++m) u[m] = (1.0 / speed2) * (half * v[m].conj());
    const Eigen::VectorXd deformed = acc + weyl_term(v, u, v).to_real();
    const double r = deformed.norm() / std::max(acc.norm(), speed2);
    out.times.push_back(curve.time(k));
    out.upsilons.push_back(std::move(u));
    out.deformed_residuals.push_back(r);
    out.max_deformed_residual = std::max(out.max_deformed_residual, r);
  }
  return out;
}

PlanarMap PlanarMap::linear(const Eigen::MatrixXd& m) {
  return {[m](const Eigen::VectorXd& x) -> Eigen::VectorXd { return m * x; },
          [m](const Eigen::VectorXd&) -> Eigen::MatrixXd { return m; }};
}

MapCheckReport check_planar_map(const PlanarMap& map, const Connection& conn_a, const AStructure& a,
                                const Connection& conn_b, const AStructure& b,
                                const CurveBatchSpec& batch, std::uint64_t seed, double tol,
                                Execution policy) {
  const int d = conn_a.dim();
  if (a.dim() != d || conn_b.dim() != d || b.dim() != d)
    throw DimensionMismatch("check_planar_map: dimension mismatch");
  if (batch.curves < 1) throw ConfigError("check_planar_map: need at least one curve");

  MapCheckReport rep;
  Rng probe_rng(seed, 0xdf);
  for (int probe = 0; probe < 3; ++probe) {
    const Eigen::VectorXd x = probe_rng.normal_vector(d);
    const Eigen::MatrixXd jac = map.df(x);
    if (jac.rows() != d || jac.cols() != d) throw ConfigError("check_planar_map: derivative has wrong shape");
    const double h = 1e-5 * (1.0 + x.norm());
    Eigen::MatrixXd fd(d, d);
    for (int c = 0; c < d; ++c) {
      Eigen::VectorXd e = Eigen::VectorXd::Zero(d);
      e[c] = h;
      fd.col(c) = (map.f(x + e) - map.f(x - e)) / (2.0 * h);
    }
    rep.derivative_error = std::max(rep.derivative_error, (fd - jac).norm() / std::max(1.0, jac.norm()));
  }
  if (rep.derivative_error > 1e-5)
    throw ConfigError("check_planar_map: supplied derivative is inconsistent with the map");

  const auto count = static_cast<std::size_t>(batch.curves);
  rep.source_residuals.resize(count);
  rep.image_residuals.resize(count);
  for_each_index(policy, count, [&](std::size_t c) {
    Rng rng(seed, c + 1);
    const Eigen::VectorXd x0 = rng.normal_vector(d);
    const Eigen::VectorXd v0 = rng.normal_vector(d).normalized();
    const CoefficientCurve q =
        batch.q_scale > 0.0 ? random_coefficient_curve(rng, a.rank(), batch.q_scale) : CoefficientCurve{};
    const Curve src = integrate_planar_curve(conn_a, a, x0, v0, q, batch.t_max, batch.step);
    rep.source_residuals[c] = planarity_residual(conn_a, a, src, Execution::serial).max_residual;
    const Curve img = src.mapped(map.f);
    rep.image_residuals[c] = planarity_residual(conn_b, b, img, Execution::serial).max_residual;
  });
  rep.max_source_residual = *std::max_element(rep.source_residuals.begin(), rep.source_residuals.end());
  rep.max_image_residual = *std::max_element(rep.image_residuals.begin(), rep.image_residuals.end());
  rep.verdict = rep.max_image_residual <= tol;
  return rep;
}

}  // namespace qplanar
