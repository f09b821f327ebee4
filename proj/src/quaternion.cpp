#include "qplanar/quaternion.hpp"

#include <algorithm>
#include <string>

#include "qplanar/errors.hpp"

namespace qplanar {

Quaternion quat_mul(const Quaternion& p, const Quaternion& q) {
  return {p.w * q.w - p.x * q.x - p.y * q.y - p.z * q.z,
          p.w * q.x + p.x * q.w + p.y * q.z - p.z * q.y,
          p.w * q.y - p.x * q.z + p.y * q.w + p.z * q.x,
          p.w * q.z + p.x * q.y - p.y * q.x + p.z * q.w};
}

namespace {

std::vector<Quaternion> unpack(const Eigen::VectorXd& v, const char* what) {
  if (v.size() % 4 != 0)
    throw DimensionMismatch(std::string(what) + ": real dimension must be a multiple of 4");
  std::vector<Quaternion> out(static_cast<std::size_t>(v.size() / 4));
  for (std::size_t m = 0; m < out.size(); ++m) {
    const auto b = static_cast<Eigen::Index>(4 * m);
    out[m] = {v[b], v[b + 1], v[b + 2], v[b + 3]};
  }
  return out;
}

Eigen::VectorXd pack(const std::vector<Quaternion>& q) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(4 * q.size()));
  for (std::size_t m = 0; m < q.size(); ++m) {
    const auto b = static_cast<Eigen::Index>(4 * m);
    v[b] = q[m].w;
    v[b + 1] = q[m].x;
    v[b + 2] = q[m].y;
    v[b + 3] = q[m].z;
  }
  return v;
}

void require_same_n(int a, int b, const char* what) {
  if (a != b) throw DimensionMismatch(std::string(what) + ": quaternionic dimensions differ");
}

}  // namespace

QuatVector QuatVector::from_real(const Eigen::VectorXd& v) { return QuatVector(unpack(v, "QuatVector")); }
Eigen::VectorXd QuatVector::to_real() const { return pack(entries_); }

QuatVector QuatVector::operator*(const Quaternion& q) const {
  QuatVector out(size());
  for (int m = 0; m < size(); ++m) out[m] = (*this)[m] * q;
  return out;
}

QuatVector QuatVector::operator+(const QuatVector& o) const {
  require_same_n(size(), o.size(), "QuatVector +");
  QuatVector out(size());
  for (int m = 0; m < size(); ++m) out[m] = (*this)[m] + o[m];
  return out;
}

QuatCovector QuatCovector::from_real(const Eigen::VectorXd& v) {
  return QuatCovector(unpack(v, "QuatCovector"));
}
Eigen::VectorXd QuatCovector::to_real() const { return pack(entries_); }

Quaternion QuatCovector::operator()(const QuatVector& x) const {
  require_same_n(size(), x.size(), "covector evaluation");
  Quaternion s;
  for (int m = 0; m < size(); ++m) s += (*this)[m] * x[m];
  return s;
}

QuatMatrix QuatMatrix::operator*(const QuatMatrix& o) const {
  if (cols_ != o.rows_) throw DimensionMismatch("QuatMatrix product: inner dimensions differ");
  QuatMatrix out(rows_, o.cols_);
  for (int r = 0; r < rows_; ++r)
    for (int c = 0; c < o.cols_; ++c) {
      Quaternion s;
      for (int k = 0; k < cols_; ++k) s += (*this)(r, k) * o(k, c);
      out(r, c) = s;
    }
  return out;
}

QuatMatrix QuatMatrix::operator-(const QuatMatrix& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw DimensionMismatch("QuatMatrix difference");
  QuatMatrix out = *this;
  for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] -= o.data_[i];
  return out;
}

QuatMatrix QuatMatrix::operator+(const QuatMatrix& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw DimensionMismatch("QuatMatrix sum");
  QuatMatrix out = *this;
  for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] += o.data_[i];
  return out;
}

double QuatMatrix::max_abs() const {
  double m = 0.0;
  for (const auto& q : data_)
    m = std::max({m, std::abs(q.w), std::abs(q.x), std::abs(q.y), std::abs(q.z)});
  return m;
}

Eigen::MatrixXd left_matrix_action(const QuatMatrix& m) {
  const Quaternion basis[4] = {Quaternion::real(1.0), Quaternion::i(), Quaternion::j(),
                               Quaternion::k()};
  Eigen::MatrixXd out(4 * m.rows(), 4 * m.cols());
  for (int r = 0; r < m.rows(); ++r)
    for (int c = 0; c < m.cols(); ++c)
      for (int b = 0; b < 4; ++b) {
        const Quaternion img = m(r, c) * basis[b];
        out.block<4, 1>(4 * r, 4 * c + b) << img.w, img.x, img.y, img.z;
      }
  return out;
}

Eigen::MatrixXd right_multiplication_matrix(const Quaternion& q, int n) {
  if (n < 1) throw DegenerateInput("right_multiplication_matrix: n must be positive");
  const Quaternion basis[4] = {Quaternion::real(1.0), Quaternion::i(), Quaternion::j(),
                               Quaternion::k()};
  Eigen::Matrix4d block;
  for (int c = 0; c < 4; ++c) {
    const Quaternion img = basis[c] * q;
    block.col(c) << img.w, img.x, img.y, img.z;
  }
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(4 * n, 4 * n);
  for (int s = 0; s < n; ++s) m.block<4, 4>(4 * s, 4 * s) = block;
  return m;
}

double AffinorTriple::defect() const {
  const auto E = Eigen::MatrixXd::Identity(dim(), dim());
  return std::max({(I * I + E).cwiseAbs().maxCoeff(), (J * J + E).cwiseAbs().maxCoeff(),
                   (K - I * J).cwiseAbs().maxCoeff(), (I * J + J * I).cwiseAbs().maxCoeff()});
}

AffinorTriple make_affinor_triple(int n) {
  if (n < 1) throw DegenerateInput("make_affinor_triple: n must be at least 1");
  AffinorTriple t;
  t.I = right_multiplication_matrix(Quaternion::i(), n);
  t.J = right_multiplication_matrix(Quaternion::j(), n);
  t.K = t.I * t.J;
  return t;
}

AffinorTriple rotate_triple(const AffinorTriple& t, const Eigen::Matrix3d& R) {
  if ((R.transpose() * R - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() > 1e-10)
    throw DegenerateInput("rotate_triple: R is not orthogonal");
  if (R.determinant() < 0.0) throw DegenerateInput("rotate_triple: R has determinant -1");
  AffinorTriple out;
  out.I = R(0, 0) * t.I + R(0, 1) * t.J + R(0, 2) * t.K;
  out.J = R(1, 0) * t.I + R(1, 1) * t.J + R(1, 2) * t.K;
  out.K = R(2, 0) * t.I + R(2, 1) * t.J + R(2, 2) * t.K;
  return out;
}

Eigen::Matrix3d rotation_from_unit_quaternion(const Quaternion& u) {
  const double s = u.norm();
  if (s == 0.0) throw DegenerateInput("rotation_from_unit_quaternion: zero quaternion");
  const Quaternion v = (1.0 / s) * u;
  const Quaternion units[3] = {Quaternion::i(), Quaternion::j(), Quaternion::k()};
  Eigen::Matrix3d R;
  for (int c = 0; c < 3; ++c) {
    const Quaternion img = v * units[c] * v.conj();
    R.col(c) << img.x, img.y, img.z;
  }
  return R;
}

GradedElement::GradedElement(int n) : Z(n), X(n), A(n, n), n_(n) {
  if (n < 1) throw DegenerateInput("GradedElement: n must be at least 1");
}

GradedElement GradedElement::from_vector(const QuatVector& x) {
  GradedElement e(x.size());
  e.X = x;
  return e;
}

GradedElement GradedElement::from_covector(const QuatCovector& z) {
  GradedElement e(z.size());
  e.Z = z;
  return e;
}

GradedElement GradedElement::from_block_matrix(const QuatMatrix& m) {
  if (m.rows() != m.cols() || m.rows() < 2)
    throw DimensionMismatch("GradedElement: block matrix must be square of size n+1 >= 2");
  const int n = m.rows() - 1;
  GradedElement e(n);
  e.a = m(0, 0);
  for (int p = 0; p < n; ++p) {
    e.Z[p] = m(0, p + 1);
    e.X[p] = m(p + 1, 0);
    for (int q = 0; q < n; ++q) e.A(p, q) = m(p + 1, q + 1);
  }
  return e;
}

QuatMatrix GradedElement::block_matrix() const {
  QuatMatrix m(n_ + 1, n_ + 1);
  m(0, 0) = a;
  for (int p = 0; p < n_; ++p) {
    m(0, p + 1) = Z[p];
    m(p + 1, 0) = X[p];
    for (int q = 0; q < n_; ++q) m(p + 1, q + 1) = A(p, q);
  }
  return m;
}

GradedElement GradedElement::grade(int g) const {
  if (g < -1 || g > 1) throw DimensionMismatch("GradedElement::grade: grade must be -1, 0 or 1");
  GradedElement e(n_);
  if (g == -1) e.X = X;
  if (g == 0) {
    e.a = a;
    e.A = A;
  }
  if (g == 1) e.Z = Z;
  return e;
}

GradedElement GradedElement::operator+(const GradedElement& o) const {
  require_same_n(n_, o.n_, "GradedElement +");
  return from_block_matrix(block_matrix() + o.block_matrix());
}

GradedElement GradedElement::operator-(const GradedElement& o) const {
  require_same_n(n_, o.n_, "GradedElement -");
  return from_block_matrix(block_matrix() - o.block_matrix());
}

double GradedElement::max_abs() const { return block_matrix().max_abs(); }

GradedElement grade_bracket(const GradedElement& u, const GradedElement& v) {
  require_same_n(u.n(), v.n(), "grade_bracket");
  const QuatMatrix mu = u.block_matrix();
  const QuatMatrix mv = v.block_matrix();
  return GradedElement::from_block_matrix(mu * mv - mv * mu);
}

QuatVector weyl_term_bracket(const QuatVector& x, const QuatCovector& u, const QuatVector& y) {
  require_same_n(x.size(), u.size(), "weyl_term");
  require_same_n(x.size(), y.size(), "weyl_term");
  const GradedElement inner =
      grade_bracket(GradedElement::from_vector(x), GradedElement::from_covector(u));
  return grade_bracket(inner, GradedElement::from_vector(y)).X;
}

QuatVector weyl_term_closed(const QuatVector& x, const QuatCovector& u, const QuatVector& y) {
  require_same_n(x.size(), u.size(), "weyl_term");
  require_same_n(x.size(), y.size(), "weyl_term");
  return x * u(y) + y * u(x);
}

QuatVector weyl_term(const QuatVector& x, const QuatCovector& u, const QuatVector& y) {
  const QuatVector a = weyl_term_bracket(x, u, y);
  const QuatVector b = weyl_term_closed(x, u, y);
  const double scale = 1.0 + u.to_real().norm() * x.to_real().norm() * y.to_real().norm();
  if ((a.to_real() - b.to_real()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw InternalInconsistency("weyl_term: bracket and closed form disagree");
  return b;
}

LinearityTest is_quaternionic_linear(const Eigen::MatrixXd& f, const AffinorTriple& t, double tol) {
  const int d = t.dim();
  if (f.rows() != d || f.cols() != d)
    throw DimensionMismatch("is_quaternionic_linear: f must be d x d with d = 4n");
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(f);
  const auto& sv = svd.singularValues();
  if (sv[0] == 0.0 || sv[sv.size() - 1] <= 1e-12 * sv[0])
    throw DegenerateInput("is_quaternionic_linear: f is singular");

  const Eigen::MatrixXd f_inv = f.inverse();
  Eigen::MatrixXd conj[3];
  for (int a = 0; a < 3; ++a) conj[a] = f * t[a] * f_inv;

  // I, J, K are orthogonal in the Frobenius product with squared norm d.
  Eigen::Matrix3d fitted;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) fitted(a, b) = (conj[a].array() * t[b].array()).sum() / d;

  Eigen::JacobiSVD<Eigen::Matrix3d> polar(fitted, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Eigen::Matrix3d fix = Eigen::Matrix3d::Identity();
  if ((polar.matrixU() * polar.matrixV().transpose()).determinant() < 0.0) fix(2, 2) = -1.0;
  const Eigen::Matrix3d R = polar.matrixU() * fix * polar.matrixV().transpose();

  const AffinorTriple rotated = rotate_triple(t, R);
  LinearityTest out;
  out.rotation = R;
  for (int a = 0; a < 3; ++a)
    out.defect = std::max(out.defect, (conj[a] - rotated[a]).norm() / std::sqrt(double(d)));
  out.member = out.defect <= tol;
  return out;
}

}  // namespace qplanar
