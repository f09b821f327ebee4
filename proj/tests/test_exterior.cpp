#include <gtest/gtest.h>

#include <cmath>

#include "oracle.hpp"
#include "qplanar/errors.hpp"
#include "qplanar/exterior.hpp"
#include "qplanar/planar.hpp"
#include "qplanar/random.hpp"

using namespace qplanar;

namespace {

Multivector e(int d, std::initializer_list<int> idx, double c = 1.0) { return Multivector::basis(d, idx, Variance::vector, c); }
Multivector f(int d, std::initializer_list<int> idx, double c = 1.0) { return Multivector::basis(d, idx, Variance::form, c); }

Multivector random_multivector(Rng& rng, int d, int p, Variance v = Variance::vector) {
  Multivector m(d, p, v);
  for (const auto& s : oracle::subsets(d, p)) m.add(Multivector::blade_of(s), rng.normal());
  return m;
}

Multivector random_decomposable(Rng& rng, int d, int p) { return wedge_columns(rng.normal_matrix(d, p)); }

}  // namespace

TEST(Wedge, BasisExamples) {
  EXPECT_EQ((wedge(e(4, {0}), e(4, {1})) - e(4, {0, 1})).max_abs(), 0.0);
  EXPECT_TRUE(wedge(e(4, {0}), e(4, {0})).is_zero());
  EXPECT_EQ((wedge(e(4, {1}), e(4, {0})) - e(4, {0, 1}, -1.0)).max_abs(), 0.0);
  EXPECT_EQ((e(4, {2, 0, 1}) - e(4, {0, 1, 2})).max_abs(), 0.0);  // cyclic shift is even
  EXPECT_EQ((e(4, {1, 0, 2}) + e(4, {0, 1, 2})).max_abs(), 0.0);
}

TEST(Wedge, Errors) {
  EXPECT_THROW(wedge(e(4, {0}), f(4, {1})), DimensionMismatch);
  EXPECT_THROW(wedge(e(4, {0}), e(5, {1})), DimensionMismatch);
  EXPECT_THROW(wedge(e(3, {0, 1}), e(3, {0, 2})), DimensionMismatch);
}

TEST(Wedge, ColumnsMatchMinors) {
  Rng rng(21);
  for (int s = 0; s < 100; ++s) {
    const int d = 3 + s % 5;
    const int p = 1 + s % d;
    const Eigen::MatrixXd m = rng.normal_matrix(d, p);
    const Multivector w = wedge_columns(m);
    for (const auto& sub : oracle::subsets(d, p))
      EXPECT_NEAR(w.coefficient(Multivector::blade_of(sub)), oracle::wedge_minor(m, sub), 1e-12);
  }
}

TEST(Wedge, AssociativeAndGradedAnticommutative) {
  Rng rng(22);
  for (int s = 0; s < 200; ++s) {
    const int d = 6;
    const int p = 1 + s % 2, q = 1 + (s / 2) % 2, r = 1 + (s / 4) % 2;
    const Multivector u = random_multivector(rng, d, p), v = random_multivector(rng, d, q),
                      w = random_multivector(rng, d, r);
    EXPECT_LE((wedge(wedge(u, v), w) - wedge(u, wedge(v, w))).max_abs(), 1e-12);
    const double sign = (p * q) % 2 == 0 ? 1.0 : -1.0;
    EXPECT_LE((wedge(u, v) - wedge(v, u).scaled(sign)).max_abs(), 1e-12);
  }
}

TEST(Pair, Examples) {
  EXPECT_EQ(pair(f(4, {0, 1}), e(4, {0, 1})), 1.0);
  EXPECT_EQ(pair(f(4, {0, 1}), e(4, {0, 2})), 0.0);
  EXPECT_EQ(pair(f(4, {0, 1}, 2.0) + f(4, {2, 3}), e(4, {0, 1}) - e(4, {2, 3})), 1.0);
  EXPECT_THROW(pair(e(4, {0, 1}), e(4, {0, 1})), DimensionMismatch);
  EXPECT_THROW(pair(f(4, {0}), e(4, {0, 1})), DimensionMismatch);
}

TEST(Chi, Examples) {
  EXPECT_EQ((chi(e(4, {0, 1})) - f(4, {0, 1})).max_abs(), 0.0);
  EXPECT_EQ((chi(e(4, {0, 1}, 2.0)) - f(4, {0, 1}, 0.5)).max_abs(), 0.0);
  EXPECT_LE((chi(e(4, {0, 1}) + e(4, {2, 3})) - (f(4, {0, 1}) + f(4, {2, 3})).scaled(0.5)).max_abs(), 1e-16);
  EXPECT_EQ(chi(e(4, {0, 1})).variance(), Variance::form);
  EXPECT_THROW(chi(Multivector(4, 2, Variance::vector)), DegenerateInput);
}

TEST(Chi, NormalizesAndIsHomogeneous) {
  Rng rng(23);
  for (int s = 0; s < 1000; ++s) {
    const int d = 4 + s % 5;
    const int p = 1 + s % 4;
    const Multivector m = s % 2 ? random_multivector(rng, d, p) : random_decomposable(rng, d, p);
    EXPECT_NEAR(pair(chi(m), m), 1.0, 1e-12);
    double k = rng.uniform(0.1, 10.0);
    if (s % 3 == 0) k = -k;
    EXPECT_LE((chi(m.scaled(k)) - chi(m).scaled(1.0 / k)).max_abs(), 1e-12 * (1.0 + chi(m).max_abs() / std::abs(k)));
  }
}

TEST(Tau, Examples) {
  const AStructure id = AStructure::identity(2);
  const Multivector t1 = tau(Eigen::Vector2d(1, 0), id.affinors());
  EXPECT_EQ((t1 - f(2, {0})).max_abs(), 0.0);

  // Frame of e_1 on R^8: (1, i, j, -k) in the first slot, so tau = -e^{0123}.
  const AStructure q = AStructure::quaternionic(2);
  const Eigen::VectorXd x = Eigen::VectorXd::Unit(8, 0);
  const Multivector t4 = tau(x, q.affinors());
  EXPECT_LE((t4 - f(8, {0, 1, 2, 3}, -1.0)).max_abs(), 1e-15);
  EXPECT_NEAR(pair(t4, wedge_columns(q.frame(x))), 1.0, 1e-15);

  EXPECT_THROW(tau(Eigen::VectorXd::Zero(8), q.affinors()), GenericSetViolation);
}

TEST(ExtractAlphas, IdentityExamples) {
  const AStructure id = AStructure::identity(2);
  const SymTensor p = make_A1({Eigen::Vector2d(1, 0)}, id);
  const auto a1 = extract_alphas(p, id.affinors(), Eigen::Vector2d(1, 0));
  ASSERT_EQ(a1.size(), 1u);
  EXPECT_NEAR(a1[0], 1.0, 1e-15);
  EXPECT_NEAR(extract_alphas(p, id.affinors(), Eigen::Vector2d(2, 0))[0], 2.0, 1e-15);
}

TEST(ExtractAlphas, RecoversConstructedCoefficients) {
  const AStructure q = AStructure::quaternionic(2);
  Rng rng(24);
  for (int s = 0; s < 100; ++s) {
    std::vector<Eigen::VectorXd> alphas;
    for (int i = 0; i < 4; ++i) alphas.push_back(rng.normal_vector(8));
    const SymTensor p = make_A1(alphas, q);
    const Eigen::VectorXd x = rng.normal_vector(8);
    const auto got = extract_alphas(p, q.affinors(), x);
    for (int i = 0; i < 4; ++i) EXPECT_NEAR(got[static_cast<std::size_t>(i)], alphas[static_cast<std::size_t>(i)].dot(x), 1e-9);
  }
}

TEST(ExtractAlphas, LinearAlongRays) {
  const AStructure q = AStructure::quaternionic(2);
  Rng rng(25);
  for (int s = 0; s < 100; ++s) {
    std::vector<Eigen::VectorXd> alphas;
    for (int i = 0; i < 4; ++i) alphas.push_back(rng.normal_vector(8));
    const SymTensor p = make_A1(alphas, q);
    const Eigen::VectorXd x = rng.normal_vector(8);
    const auto base = extract_alphas(p, q.affinors(), x);
    for (double k : {0.5, 2.0, 10.0}) {
      const auto scaled = extract_alphas(p, q.affinors(), k * x);
      for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(scaled[i], k * base[i], 1e-9);
    }
  }
}

TEST(ExtractAlphas, RejectsValuesOutsideTheHull) {
  const AStructure q = AStructure::quaternionic(2);
  SymTensor cube(8);
  for (int i = 0; i < 8; ++i) cube.set(i, i, i, 1.0);
  Rng rng(26);
  const Eigen::VectorXd x = rng.normal_vector(8);
  EXPECT_THROW(extract_alphas(cube, q.affinors(), x), NotInHull);
  EXPECT_GT(extract_alphas_with_residual(cube, q.affinors(), x).residual, 1e-3);
}
