#include <gtest/gtest.h>

#include <cmath>

#include "oracle.hpp"
#include "qplanar/errors.hpp"
#include "qplanar/quaternion.hpp"
#include "qplanar/random.hpp"

using namespace qplanar;

namespace {

QuatVector random_qvector(Rng& rng, int n) { return QuatVector::from_real(rng.normal_vector(4 * n)); }
QuatCovector random_qcovector(Rng& rng, int n) { return QuatCovector::from_real(rng.normal_vector(4 * n)); }

GradedElement random_element(Rng& rng, int n) {
  GradedElement g(n);
  g.a = oracle::random_quaternion(rng);
  g.Z = random_qcovector(rng, n);
  g.X = random_qvector(rng, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) g.A(r, c) = oracle::random_quaternion(rng);
  return g;
}

oracle::QMat to_qmat(const GradedElement& g) {
  const int n = g.n();
  oracle::QMat m(n + 1);
  m(0, 0) = g.a;
  for (int i = 0; i < n; ++i) {
    m(0, 1 + i) = g.Z[i];
    m(1 + i, 0) = g.X[i];
    for (int j = 0; j < n; ++j) m(1 + i, 1 + j) = g.A(i, j);
  }
  return m;
}

double qmat_gap(const QuatMatrix& a, const oracle::QMat& b) {
  double m = 0.0;
  for (int r = 0; r < b.n; ++r)
    for (int c = 0; c < b.n; ++c) m = std::max(m, oracle::dist(a(r, c), b(r, c)));
  return m;
}

double qvec_gap(const QuatVector& a, const QuatVector& b) { return (a.to_real() - b.to_real()).cwiseAbs().maxCoeff(); }

}  // namespace

TEST(QuatMul, BasisRelations) {
  const Quaternion one = Quaternion::real(1), i = Quaternion::i(), j = Quaternion::j(), k = Quaternion::k();
  EXPECT_EQ(i * j, k);
  EXPECT_EQ(j * k, i);
  EXPECT_EQ(k * i, j);
  EXPECT_EQ(j * i, -k);
  EXPECT_EQ(i * i, -one);
  const Quaternion q{0.3, -1.2, 2.5, 0.7};
  EXPECT_EQ(one * q, q);
  EXPECT_EQ(q * one, q);
}

TEST(QuatMul, MatchesTableProductAndNormIsMultiplicative) {
  Rng rng(11);
  for (int s = 0; s < 1000; ++s) {
    const Quaternion p = oracle::random_quaternion(rng), q = oracle::random_quaternion(rng),
                     r = oracle::random_quaternion(rng);
    EXPECT_LE(oracle::dist(p * q, oracle::mul(p, q)), 1e-14);
    EXPECT_LE(oracle::dist((p * q) * r, p * (q * r)), 1e-12);
    EXPECT_NEAR((p * q).norm(), p.norm() * q.norm(), 1e-12 * (1 + p.norm() * q.norm()));
  }
}

TEST(QuatCovector, EvaluationIsRealBilinear) {
  Rng rng(12);
  for (int s = 0; s < 100; ++s) {
    const int n = 1 + s % 3;
    const QuatCovector z = random_qcovector(rng, n);
    const Eigen::VectorXd x = rng.normal_vector(4 * n), y = rng.normal_vector(4 * n);
    const double a = rng.normal(), b = rng.normal();
    const Quaternion lhs = z(QuatVector::from_real(a * x + b * y));
    const Quaternion rhs = a * z(QuatVector::from_real(x)) + b * z(QuatVector::from_real(y));
    EXPECT_LE(oracle::dist(lhs, rhs), 1e-12);
    Quaternion direct;
    for (int m = 0; m < n; ++m) direct += oracle::mul(z[m], QuatVector::from_real(x)[m]);
    EXPECT_LE(oracle::dist(z(QuatVector::from_real(x)), direct), 1e-13);
  }
}

TEST(AffinorTriple, HandEvaluationForN1) {
  const AffinorTriple t = make_affinor_triple(1);
  // (w + x i + y j + z k) i = -x + w i + z j - y k
  const Eigen::Vector4d v(1.0, 2.0, 3.0, 4.0);
  EXPECT_EQ(Eigen::Vector4d(t.I * v), Eigen::Vector4d(-2.0, 1.0, 4.0, -3.0));
  EXPECT_EQ(Eigen::Vector4d(t.I * Eigen::Vector4d(1, 0, 0, 0)), Eigen::Vector4d(0, 1, 0, 0));
}

TEST(AffinorTriple, RightActionAndRelations) {
  for (int n = 1; n <= 4; ++n) {
    const AffinorTriple t = make_affinor_triple(n);
    const Eigen::MatrixXd e = Eigen::MatrixXd::Identity(4 * n, 4 * n);
    EXPECT_LE((t.I * t.I + e).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LE((t.J * t.J + e).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LE((t.K * t.K + e).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LE((t.I * t.J + t.J * t.I).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LE(t.defect(), 1e-12);
    EXPECT_LE((t.I - oracle::right_mult(Quaternion::i(), n)).cwiseAbs().maxCoeff(), 0.0);
    EXPECT_LE((t.J - oracle::right_mult(Quaternion::j(), n)).cwiseAbs().maxCoeff(), 0.0);
    EXPECT_LE((t.K + oracle::right_mult(Quaternion::k(), n)).cwiseAbs().maxCoeff(), 0.0);
    for (int a = 0; a < 3; ++a) EXPECT_LE((t[a].transpose() * t[a] - e).cwiseAbs().maxCoeff(), 1e-12);
  }
  EXPECT_THROW(make_affinor_triple(0), Error);
}

TEST(RotateTriple, IdentityCyclicAndRandomRotations) {
  const AffinorTriple t = make_affinor_triple(2);
  const AffinorTriple same = rotate_triple(t, Eigen::Matrix3d::Identity());
  EXPECT_EQ(same.I, t.I);
  EXPECT_EQ(same.K, t.K);

  Eigen::Matrix3d cyc;
  cyc << 0, 1, 0, 0, 0, 1, 1, 0, 0;
  const AffinorTriple c = rotate_triple(t, cyc);
  EXPECT_LE((c.I - t.J).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_LE((t.J * t.K - t.I).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LE(c.defect(), 1e-12);

  Rng rng(13);
  for (int s = 0; s < 200; ++s) {
    Quaternion u = oracle::random_quaternion(rng);
    u = (1.0 / u.norm()) * u;
    const Eigen::Matrix3d r = rotation_from_unit_quaternion(u);
    EXPECT_LE((r.transpose() * r - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LE(rotate_triple(t, r).defect(), 1e-12);
  }

  Eigen::Matrix3d skew = Eigen::Matrix3d::Identity();
  skew(0, 1) = 0.5;
  EXPECT_THROW(rotate_triple(t, skew), Error);
  EXPECT_THROW(rotate_triple(t, -Eigen::Matrix3d::Identity()), Error);
}

TEST(GradeBracket, PureGradeExamples) {
  const int n = 1;
  const GradedElement x = GradedElement::from_vector(QuatVector({Quaternion::real(1)}));
  const GradedElement y = GradedElement::from_vector(QuatVector({Quaternion::i()}));
  EXPECT_EQ(grade_bracket(x, y).max_abs(), 0.0);

  const GradedElement z = GradedElement::from_covector(QuatCovector({Quaternion::real(1)}));
  const GradedElement b = grade_bracket(x, z);
  EXPECT_EQ(b.a, Quaternion::real(-1));
  EXPECT_EQ(b.A(0, 0), Quaternion::real(1));
  EXPECT_EQ(b.X.to_real().cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ(b.Z.to_real().cwiseAbs().maxCoeff(), 0.0);

  Rng rng(14);
  const GradedElement g0 = random_element(rng, n).grade(0);
  const GradedElement r = grade_bracket(g0, x);
  EXPECT_EQ((r - r.grade(-1)).max_abs(), 0.0);
}

TEST(GradeBracket, MatchesBlockCommutatorAndIsAGradedLieBracket) {
  Rng rng(15);
  for (int s = 0; s < 200; ++s) {
    const int n = 1 + s % 3;
    const GradedElement u = random_element(rng, n), v = random_element(rng, n), w = random_element(rng, n);
    EXPECT_LE(qmat_gap(grade_bracket(u, v).block_matrix(), oracle::commutator(to_qmat(u), to_qmat(v))), 1e-12);
    EXPECT_LE((grade_bracket(u, v) + grade_bracket(v, u)).max_abs(), 1e-12);
    const GradedElement jac = grade_bracket(u, grade_bracket(v, w)) + grade_bracket(v, grade_bracket(w, u)) +
                              grade_bracket(w, grade_bracket(u, v));
    EXPECT_LE(jac.max_abs(), 1e-10);
    EXPECT_LE((u.grade(-1) + u.grade(0) + u.grade(1) - u).max_abs(), 0.0);
    for (int gi = -1; gi <= 1; ++gi)
      for (int gj = -1; gj <= 1; ++gj) {
        const GradedElement b = grade_bracket(u.grade(gi), v.grade(gj));
        const int g = gi + gj;
        const GradedElement expected = (g < -1 || g > 1) ? GradedElement(n) : b.grade(g);
        EXPECT_LE((b - expected).max_abs(), 1e-12) << gi << " " << gj;
      }
  }
}

TEST(WeylTerm, Examples) {
  auto one = [](const Quaternion& q) { return QuatVector({q}); };
  const QuatVector r1 = weyl_term(one(Quaternion::real(1)), QuatCovector({Quaternion::real(1)}), one(Quaternion::real(1)));
  EXPECT_LE(oracle::dist(r1[0], Quaternion::real(2)), 1e-15);
  const QuatVector r2 = weyl_term(one(Quaternion::i()), QuatCovector({Quaternion::real(1)}), one(Quaternion::i()));
  EXPECT_LE(oracle::dist(r2[0], Quaternion::real(-2)), 1e-15);
  const QuatVector r3 = weyl_term(one(Quaternion::real(1)), QuatCovector({Quaternion::j()}), one(Quaternion::real(1)));
  EXPECT_LE(oracle::dist(r3[0], 2.0 * Quaternion::j()), 1e-15);
}

TEST(WeylTerm, BracketAndClosedFormAgree) {
  Rng rng(16);
  for (int s = 0; s < 1000; ++s) {
    const int n = 1 + s % 4;
    const QuatVector x = random_qvector(rng, n), y = random_qvector(rng, n);
    const QuatCovector u = random_qcovector(rng, n);
    const QuatVector a = weyl_term_bracket(x, u, y);
    const QuatVector b = weyl_term_closed(x, u, y);
    EXPECT_LE(qvec_gap(a, b), 1e-12);
    // Symmetric in X, Y, and 2 X U(X) on the diagonal.
    EXPECT_LE(qvec_gap(weyl_term(x, u, y), weyl_term(y, u, x)), 1e-12);
    EXPECT_LE(qvec_gap(weyl_term(x, u, x), x * (2.0 * u(x))), 1e-12);
  }
}

TEST(QuaternionicLinearity, StructureGroupMembers) {
  const AffinorTriple t = make_affinor_triple(2);
  const LinearityTest ident = is_quaternionic_linear(Eigen::MatrixXd::Identity(8, 8), t);
  EXPECT_TRUE(ident.member);
  EXPECT_LE(ident.defect, 1e-14);

  Rng rng(17);
  for (int s = 0; s < 20; ++s) {
    Quaternion u = oracle::random_quaternion(rng);
    u = (1.0 / u.norm()) * u;
    EXPECT_TRUE(is_quaternionic_linear(oracle::right_mult(u, 2), t).member);
    QuatMatrix m(2, 2);
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c) m(r, c) = oracle::random_quaternion(rng);
    const Eigen::MatrixXd f = left_matrix_action(m) * oracle::right_mult(u, 2);
    const LinearityTest lt = is_quaternionic_linear(f, t);
    EXPECT_TRUE(lt.member) << lt.defect;
  }
}

TEST(QuaternionicLinearity, RejectsStretchAndSingularMaps) {
  const AffinorTriple t = make_affinor_triple(2);
  Eigen::MatrixXd f = Eigen::MatrixXd::Identity(8, 8);
  f(0, 0) = 2.0;
  const LinearityTest lt = is_quaternionic_linear(f, t);
  EXPECT_FALSE(lt.member);
  EXPECT_GT(lt.defect, 0.1);
  Eigen::MatrixXd singular = Eigen::MatrixXd::Identity(8, 8);
  singular(3, 3) = 0.0;
  EXPECT_THROW(is_quaternionic_linear(singular, t), DegenerateInput);
}

TEST(LeftMatrixAction, MatchesTableProduct) {
  Rng rng(18);
  QuatMatrix m(2, 3);
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 3; ++c) m(r, c) = oracle::random_quaternion(rng);
  const QuatVector x = random_qvector(rng, 3);
  const Eigen::VectorXd got = left_matrix_action(m) * x.to_real();
  for (int r = 0; r < 2; ++r) {
    Quaternion want;
    for (int c = 0; c < 3; ++c) want += oracle::mul(m(r, c), x[c]);
    EXPECT_LE(oracle::dist(QuatVector::from_real(got)[r], want), 1e-13);
  }
}
