#pragma once

#include <cmath>
#include <vector>

#include <Eigen/Dense>

namespace qplanar {

/// w + x i + y j + z k.
struct Quaternion {
  double w = 0.0;
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  static Quaternion real(double a) { return {a, 0.0, 0.0, 0.0}; }
  static Quaternion i() { return {0.0, 1.0, 0.0, 0.0}; }
  static Quaternion j() { return {0.0, 0.0, 1.0, 0.0}; }
  static Quaternion k() { return {0.0, 0.0, 0.0, 1.0}; }

  Quaternion conj() const { return {w, -x, -y, -z}; }
  double norm2() const { return w * w + x * x + y * y + z * z; }
  double norm() const { return std::sqrt(norm2()); }

  Quaternion& operator+=(const Quaternion& o) {
    w += o.w;
    x += o.x;
    y += o.y;
    z += o.z;
    return *this;
  }
  Quaternion& operator-=(const Quaternion& o) {
    w -= o.w;
    x -= o.x;
    y -= o.y;
    z -= o.z;
    return *this;
  }

  friend bool operator==(const Quaternion&, const Quaternion&) = default;
};

/// Hamilton product pq.
Quaternion quat_mul(const Quaternion& p, const Quaternion& q);

inline Quaternion operator*(const Quaternion& p, const Quaternion& q) { return quat_mul(p, q); }
inline Quaternion operator*(double s, const Quaternion& q) { return {s * q.w, s * q.x, s * q.y, s * q.z}; }
inline Quaternion operator*(const Quaternion& q, double s) { return s * q; }
inline Quaternion operator+(Quaternion p, const Quaternion& q) { return p += q; }
inline Quaternion operator-(Quaternion p, const Quaternion& q) { return p -= q; }
inline Quaternion operator-(const Quaternion& q) { return {-q.w, -q.x, -q.y, -q.z}; }

/// Element of H^n. Real layout: slot m occupies coordinates 4m..4m+3 as (w, x, y, z).
class QuatVector {
 public:
  QuatVector() = default;
  explicit QuatVector(int n) : entries_(static_cast<std::size_t>(n)) {}
  explicit QuatVector(std::vector<Quaternion> entries) : entries_(std::move(entries)) {}

  static QuatVector from_real(const Eigen::VectorXd& v);
  Eigen::VectorXd to_real() const;

  int size() const { return static_cast<int>(entries_.size()); }
  Quaternion& operator[](int m) { return entries_[static_cast<std::size_t>(m)]; }
  const Quaternion& operator[](int m) const { return entries_[static_cast<std::size_t>(m)]; }
  const std::vector<Quaternion>& entries() const { return entries_; }

  /// Right scalar action X q.
  QuatVector operator*(const Quaternion& q) const;
  QuatVector operator+(const QuatVector& o) const;

 private:
  std::vector<Quaternion> entries_;
};

/// Element of (H^n)^*, evaluated as Z(X) = sum_m Z_m X_m.
class QuatCovector {
 public:
  QuatCovector() = default;
  explicit QuatCovector(int n) : entries_(static_cast<std::size_t>(n)) {}
  explicit QuatCovector(std::vector<Quaternion> entries) : entries_(std::move(entries)) {}

  static QuatCovector from_real(const Eigen::VectorXd& v);
  Eigen::VectorXd to_real() const;

  int size() const { return static_cast<int>(entries_.size()); }
  Quaternion& operator[](int m) { return entries_[static_cast<std::size_t>(m)]; }
  const Quaternion& operator[](int m) const { return entries_[static_cast<std::size_t>(m)]; }
  const std::vector<Quaternion>& entries() const { return entries_; }

  Quaternion operator()(const QuatVector& x) const;

 private:
  std::vector<Quaternion> entries_;
};

/// Dense quaternionic matrix, row-major.
class QuatMatrix {
 public:
  QuatMatrix() = default;
  QuatMatrix(int rows, int cols)
      : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows * cols)) {}

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  Quaternion& operator()(int r, int c) { return data_[static_cast<std::size_t>(r * cols_ + c)]; }
  const Quaternion& operator()(int r, int c) const {
    return data_[static_cast<std::size_t>(r * cols_ + c)];
  }

  QuatMatrix operator*(const QuatMatrix& o) const;
  QuatMatrix operator-(const QuatMatrix& o) const;
  QuatMatrix operator+(const QuatMatrix& o) const;
  double max_abs() const;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<Quaternion> data_;
};

/// Real 4r x 4c matrix of X -> M X (left matrix action on columns of quaternions).
Eigen::MatrixXd left_matrix_action(const QuatMatrix& m);

/// Real 4n x 4n matrix of X -> X q on H^n.
Eigen::MatrixXd right_multiplication_matrix(const Quaternion& q, int n);

/// Hypercomplex triple on R^{4n}: I^2 = J^2 = -E, K = I J = -J I.
struct AffinorTriple {
  Eigen::MatrixXd I;
  Eigen::MatrixXd J;
  Eigen::MatrixXd K;

  int dim() const { return static_cast<int>(I.rows()); }
  const Eigen::MatrixXd& operator[](int a) const { return a == 0 ? I : (a == 1 ? J : K); }

  /// Largest of |I^2+E|, |J^2+E|, |K-IJ|, |IJ+JI| (max-abs entry).
  double defect() const;
};

/// I(X) = X i, J(X) = X j and K = I J on R^{4n}. Throws for n < 1.
AffinorTriple make_affinor_triple(int n);

/// (I', J', K')_a = sum_b R(a,b) F_b. R must be a rotation.
AffinorTriple rotate_triple(const AffinorTriple& t, const Eigen::Matrix3d& R);

/// Rotation matrix of the map v -> u v u^* on imaginary quaternions, u a unit quaternion.
Eigen::Matrix3d rotation_from_unit_quaternion(const Quaternion& u);

/// Element of gl(n+1, H) in the block form
///
///     | a  Z |
///     | X  A |
///
/// with a in H, Z a row in (H^n)^*, X a column in H^n, A in gl(n, H).
/// X spans grade -1, (a, A) grade 0 and Z grade 1.
class GradedElement {
 public:
  explicit GradedElement(int n);

  static GradedElement from_vector(const QuatVector& x);
  static GradedElement from_covector(const QuatCovector& z);
  static GradedElement from_block_matrix(const QuatMatrix& m);

  int n() const { return n_; }
  QuatMatrix block_matrix() const;

  /// Component of grade -1, 0 or 1.
  GradedElement grade(int g) const;
  GradedElement operator+(const GradedElement& o) const;
  GradedElement operator-(const GradedElement& o) const;
  double max_abs() const;

  Quaternion a;
  QuatCovector Z;
  QuatVector X;
  QuatMatrix A;

 private:
  int n_;
};

/// Commutator uv - vu.
GradedElement grade_bracket(const GradedElement& u, const GradedElement& v);

/// {{X, U}, Y} evaluated through nested block brackets.
QuatVector weyl_term_bracket(const QuatVector& x, const QuatCovector& u, const QuatVector& y);

/// X U(Y) + Y U(X).
QuatVector weyl_term_closed(const QuatVector& x, const QuatCovector& u, const QuatVector& y);

/// {{X, U}, Y}; both evaluation routes are computed and must agree to 1e-12
/// relative to the operand scale, otherwise InternalInconsistency is thrown.
QuatVector weyl_term(const QuatVector& x, const QuatCovector& u, const QuatVector& y);

struct LinearityTest {
  bool member = false;
  double defect = 0.0;
  Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
};

/// Decides whether f conjugates span{I, J, K} onto itself by a rotation of the triple,
/// i.e. f F_a f^{-1} = sum_b R(a,b) F_b. The rotation is fitted in the Frobenius
/// least-squares sense and projected onto SO(3); the defect is the largest
/// remaining Frobenius error divided by sqrt(d). Singular f throws DegenerateInput.
LinearityTest is_quaternionic_linear(const Eigen::MatrixXd& f, const AffinorTriple& t,
                                     double tol = 1e-9);

}  // namespace qplanar
