#pragma once

// Reference implementations used only by the tests. They avoid the library's
// own kernels so that agreement is meaningful.

#include <algorithm>
#include <array>
#include <cstdint>
#include <numeric>
#include <vector>

#include <Eigen/Dense>

#include "qplanar/quaternion.hpp"
#include "qplanar/random.hpp"
#include "qplanar/sym_tensor.hpp"

namespace oracle {

using qplanar::Quaternion;

/// Hamilton product from the multiplication table of 1, i, j, k.
inline Quaternion mul(const Quaternion& p, const Quaternion& q) {
  static constexpr int idx[4][4] = {{0, 1, 2, 3}, {1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}};
  static constexpr int sgn[4][4] = {{1, 1, 1, 1}, {1, -1, 1, -1}, {1, -1, -1, 1}, {1, 1, -1, -1}};
  const std::array<double, 4> a{p.w, p.x, p.y, p.z}, b{q.w, q.x, q.y, q.z};
  std::array<double, 4> r{};
  for (int s = 0; s < 4; ++s)
    for (int t = 0; t < 4; ++t) r[static_cast<std::size_t>(idx[s][t])] += sgn[s][t] * a[s] * b[t];
  return {r[0], r[1], r[2], r[3]};
}

inline Quaternion random_quaternion(qplanar::Rng& rng) { return {rng.normal(), rng.normal(), rng.normal(), rng.normal()}; }

inline double dist(const Quaternion& a, const Quaternion& b) { return (a - b).norm(); }

/// Square quaternionic matrix, row-major.
struct QMat {
  int n = 0;
  std::vector<Quaternion> e;
  explicit QMat(int size) : n(size), e(static_cast<std::size_t>(size * size)) {}
  Quaternion& operator()(int r, int c) { return e[static_cast<std::size_t>(r * n + c)]; }
  const Quaternion& operator()(int r, int c) const { return e[static_cast<std::size_t>(r * n + c)]; }
};

inline QMat product(const QMat& a, const QMat& b) {
  QMat r(a.n);
  for (int i = 0; i < a.n; ++i)
    for (int j = 0; j < a.n; ++j)
      for (int k = 0; k < a.n; ++k) r(i, j) += mul(a(i, k), b(k, j));
  return r;
}

inline QMat commutator(const QMat& a, const QMat& b) {
  const QMat ab = product(a, b), ba = product(b, a);
  QMat r(a.n);
  for (std::size_t i = 0; i < r.e.size(); ++i) r.e[i] = ab.e[i] - ba.e[i];
  return r;
}

/// Real matrix of X -> X q on H^n, interleaved layout, built column by column from the table product.
inline Eigen::MatrixXd right_mult(const Quaternion& q, int n) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(4 * n, 4 * n);
  const Quaternion basis[4] = {Quaternion::real(1), Quaternion::i(), Quaternion::j(), Quaternion::k()};
  for (int slot = 0; slot < n; ++slot)
    for (int b = 0; b < 4; ++b) {
      const Quaternion v = mul(basis[b], q);
      const int c = 4 * slot + b;
      m(4 * slot, c) = v.w;
      m(4 * slot + 1, c) = v.x;
      m(4 * slot + 2, c) = v.y;
      m(4 * slot + 3, c) = v.z;
    }
  return m;
}

/// Coefficient of e_I in the wedge of the columns of m: the minor on rows I.
inline double wedge_minor(const Eigen::MatrixXd& m, const std::vector<int>& rows) {
  Eigen::MatrixXd sub(static_cast<Eigen::Index>(rows.size()), m.cols());
  for (std::size_t r = 0; r < rows.size(); ++r) sub.row(static_cast<Eigen::Index>(r)) = m.row(rows[r]);
  return sub.determinant();
}

/// All increasing index subsets of {0..d-1} of size p.
inline std::vector<std::vector<int>> subsets(int d, int p) {
  std::vector<std::vector<int>> out;
  std::vector<int> pick(static_cast<std::size_t>(p));
  std::iota(pick.begin(), pick.end(), 0);
  if (p > d) return out;
  while (true) {
    out.push_back(pick);
    int i = p - 1;
    while (i >= 0 && pick[static_cast<std::size_t>(i)] == d - p + i) --i;
    if (i < 0) break;
    ++pick[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < p; ++j) pick[static_cast<std::size_t>(j)] = pick[static_cast<std::size_t>(j - 1)] + 1;
  }
  return out;
}

/// P(X,Y) evaluated straight from the definition of the symmetric product, for affinors F_i.
inline Eigen::VectorXd a1_apply(const std::vector<Eigen::VectorXd>& alphas, const std::vector<Eigen::MatrixXd>& fs,
                                const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  Eigen::VectorXd r = Eigen::VectorXd::Zero(x.size());
  for (std::size_t i = 0; i < alphas.size(); ++i)
    r += 0.5 * (alphas[i].dot(x) * (fs[i] * y) + alphas[i].dot(y) * (fs[i] * x));
  return r;
}

/// Distance of the componentwise cube tensor from A^(1): least squares over the forms,
/// solved through the normal equations (a different route from the library's SVD).
inline double a1_distance(const qplanar::SymTensor& p, const std::vector<Eigen::MatrixXd>& fs) {
  const int d = p.dim();
  const int ell = static_cast<int>(fs.size());
  std::vector<Eigen::VectorXd> rows;
  std::vector<double> rhs;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k) {
        Eigen::VectorXd row = Eigen::VectorXd::Zero(ell * d);
        for (int f = 0; f < ell; ++f) {
          row[f * d + i] += 0.5 * fs[static_cast<std::size_t>(f)](k, j);
          row[f * d + j] += 0.5 * fs[static_cast<std::size_t>(f)](k, i);
        }
        rows.push_back(row);
        rhs.push_back(p.at(i, j, k));
      }
  Eigen::MatrixXd a(static_cast<Eigen::Index>(rows.size()), ell * d);
  Eigen::VectorXd b(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    a.row(static_cast<Eigen::Index>(r)) = rows[r].transpose();
    b[static_cast<Eigen::Index>(r)] = rhs[r];
  }
  const Eigen::VectorXd sol = (a.transpose() * a).ldlt().solve(a.transpose() * b);
  return (a * sol - b).cwiseAbs().maxCoeff();
}

}  // namespace oracle
