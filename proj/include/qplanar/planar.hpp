#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qplanar/execution.hpp"
#include "qplanar/random.hpp"
#include "qplanar/sym_tensor.hpp"

namespace qplanar {

/// Default relative singular-value threshold for numerical rank.
inline constexpr double default_rank_tolerance = 1e-8;

/// Linear span A = <F_0 = E, F_1, ..., F_{l-1}> of constant affinors on R^d.
class AStructure {
 public:
  /// Throws DegenerateInput unless F_0 is the identity and the F_i are linearly independent.
  explicit AStructure(std::vector<Eigen::MatrixXd> affinors, std::string name = "custom",
                      double rank_tolerance = default_rank_tolerance);

  /// <E> on R^d.
  static AStructure identity(int d);
  /// <E, I> on R^{4n}.
  static AStructure complex(int n);
  /// <E, I, J, K> on R^{4n}.
  static AStructure quaternionic(int n);
  /// Looks up "identity" | "projective", "complex", "quaternionic" on R^{4n}
  /// ("identity" uses d = 4n as well).
  static AStructure by_name(const std::string& name, int n);

  int dim() const { return dim_; }
  int rank() const { return static_cast<int>(affinors_.size()); }
  const std::vector<Eigen::MatrixXd>& affinors() const { return affinors_; }
  const std::string& name() const { return name_; }
  double rank_tolerance() const { return rank_tolerance_; }

  /// d x l matrix [F_0 X ... F_{l-1} X].
  Eigen::MatrixXd frame(const Eigen::VectorXd& x) const;

 private:
  int dim_;
  std::vector<Eigen::MatrixXd> affinors_;
  std::string name_;
  double rank_tolerance_;
};

/// Numerical rank of a matrix: number of singular values above rel_tol * sigma_max.
int numerical_rank(const Eigen::MatrixXd& m, double rel_tol = default_rank_tolerance);

struct Hull {
  Eigen::MatrixXd basis;  // d x rank, orthonormal columns
  int rank = 0;
};

/// A(X) = span{F_i X}. X = 0 yields rank 0.
Hull hull(const AStructure& a, const Eigen::VectorXd& x);

struct GenericRankReport {
  int samples = 0;
  double fraction = 0.0;
  bool verdict = false;
  std::string reason;
};

/// Fraction of random Gaussian pairs (X, Y) with dim(A(X) + A(Y)) = 2l; verdict iff >= 0.99.
/// d < 2l short-circuits to verdict false with reason "dimension bound".
GenericRankReport generic_rank_check(const AStructure& a, int samples, std::uint64_t seed,
                                     Execution policy = Execution::parallel);

/// Draws a standard Gaussian vector in the generic set of `a`, retrying up to 100 times.
Eigen::VectorXd sample_generic_vector(const AStructure& a, Rng& rng);

using QuadraticMap = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

/// Recovers P from q(X) = P(X,X) by P(X,Y) = (q(X+Y) - q(X) - q(Y)) / 2.
/// q is validated as quadratic on random probes; throws NonQuadratic otherwise.
SymTensor polarize(const QuadraticMap& q, int dim, std::uint64_t seed = 0);

using OneFormList = std::vector<Eigen::VectorXd>;

/// P = sum_i alpha_i (.) F_i with (alpha (.) F)(X,Y) = (alpha(X) F Y + alpha(Y) F X) / 2,
/// so that P(X,X) = sum_i alpha_i(X) F_i X.
SymTensor make_A1(const OneFormList& alphas, const AStructure& a);

struct DecomposeOptions {
  /// Relative slot tolerance for acceptance.
  double tolerance = 1e-8;
  /// Maximum allowed difference between the forms produced by the two solvers.
  double agreement = 1e-7;
  /// Sample vectors for the extraction route; raised to at least 2d.
  int samples = 0;
  std::uint64_t seed = 0x5eed;
  Execution policy = Execution::parallel;
};

struct Decomposition {
  bool accepted = false;
  /// Forms from the global least-squares route.
  OneFormList forms;
  /// Forms fitted from pointwise extraction.
  OneFormList extracted_forms;
  /// max(extraction_residual, lsq_residual).
  double residual = 0.0;
  double extraction_residual = 0.0;
  double lsq_residual = 0.0;
  /// max |forms - extracted_forms|; meaningful when both routes accept.
  double solver_gap = 0.0;
  /// sigma_max / sigma_min of the least-squares system.
  double condition_number = 0.0;
};

/// Decides whether P lies in A^(1) using two independent routes:
///  (a) wedge extraction of alpha_i(X) at generic sample vectors, then a linear fit of each alpha_i;
///  (b) global least squares over the l*d form coefficients against every tensor slot.
/// Residuals are max-abs slot errors |P - make_A1(forms)| divided by max(1, |P|_max).
/// Throws GenericRankFailure if A fails the generic rank test or d < 2l, and
/// InternalInconsistency if the routes disagree on acceptance or on the forms.
Decomposition decompose_A1(const SymTensor& p, const AStructure& a, const DecomposeOptions& opt = {});

struct InclusionReport {
  bool included = false;
  double max_defect = 0.0;
};

/// Samples X and measures the relative distance of every F(X), F in A, to B(X).
InclusionReport hull_inclusion(const AStructure& a, const AStructure& b, int samples,
                               std::uint64_t seed, double tolerance = 1e-9);

}  // namespace qplanar
