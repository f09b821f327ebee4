#pragma once

#include <cstdint>
#include <initializer_list>
#include <map>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "qplanar/sym_tensor.hpp"

namespace qplanar {

/// Basis e_I (vector type) or e^I (form type).
enum class Variance { vector, form };

/// Homogeneous degree-p element of the exterior algebra over R^d.
///
/// Terms are stored sparsely, keyed by the index set I as a bitmask
/// (bit i set means index i is in I), so d is limited to 64. Exact zeros
/// are never stored.
class Multivector {
 public:
  using Blade = std::uint64_t;
  static constexpr int max_dim = 64;

  Multivector(int dim, int degree, Variance variance);

  /// coeff * e_{i1 ... ip} with 0-based indices, sign-adjusted to sorted order.
  static Multivector basis(int dim, std::initializer_list<int> indices, Variance variance,
                           double coeff = 1.0);
  /// Degree-1 element with the given coordinates.
  static Multivector from_vector(const Eigen::VectorXd& v, Variance variance = Variance::vector);

  static Blade blade_of(std::span<const int> sorted_indices);
  static std::vector<int> indices_of(Blade blade);

  int dim() const { return dim_; }
  int degree() const { return degree_; }
  Variance variance() const { return variance_; }
  const std::map<Blade, double>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  double coefficient(Blade blade) const;
  void add(Blade blade, double value);

  Multivector scaled(double s) const;
  Multivector operator+(const Multivector& o) const;
  Multivector operator-(const Multivector& o) const;
  double max_abs() const;
  double norm2() const;

 private:
  int dim_;
  int degree_;
  Variance variance_;
  std::map<Blade, double> terms_;
};

/// Exterior product with shuffle signs. Requires equal dim and variance and p + q <= d.
Multivector wedge(const Multivector& u, const Multivector& v);

/// Wedge of the columns of a d x k matrix, left to right.
Multivector wedge_columns(const Eigen::MatrixXd& columns);

/// <form, mv> = sum_I a_I b_I over matching index sets.
double pair(const Multivector& form, const Multivector& mv);

/// Normalization map on nonzero vector-type multivectors:
/// a_I -> a_I / sum_J a_J^2, transposed to the dual basis, so that <chi(mv), mv> = 1.
Multivector chi(const Multivector& mv);

/// Smallest singular value of the frame [F_0 X ... F_{l-1} X] must exceed
/// generic_tolerance * |X| for X to count as generic.
inline constexpr double generic_tolerance = 1e-8;

/// d x l matrix with columns F_i X.
Eigen::MatrixXd affinor_frame(std::span<const Eigen::MatrixXd> affinors, const Eigen::VectorXd& x);

/// chi(X ^ F_1 X ^ ... ^ F_{l-1} X); F_0 must be the identity.
/// Throws GenericSetViolation when X is not generic (this includes X = 0).
Multivector tau(const Eigen::VectorXd& x, std::span<const Eigen::MatrixXd> affinors);

struct AlphaExtraction {
  std::vector<double> alphas;
  /// |P(X,X) - sum_i alpha_i F_i X|.
  double residual = 0.0;
};

/// Coefficients alpha_i(X) of P(X,X) along F_i X from the wedge formulas
///   alpha_i(X) = < X ^ ... ^ P(X,X) (slot i) ^ ... ^ F_{l-1} X, tau(X) >,
/// together with the reconstruction residual. Does not reject on the residual.
AlphaExtraction extract_alphas_with_residual(const SymTensor& p,
                                             std::span<const Eigen::MatrixXd> affinors,
                                             const Eigen::VectorXd& x);

/// As above, but throws NotInHull if the residual exceeds 1e-9 (1 + |P(X,X)|).
std::vector<double> extract_alphas(const SymTensor& p, std::span<const Eigen::MatrixXd> affinors,
                                   const Eigen::VectorXd& x);

}  // namespace qplanar
