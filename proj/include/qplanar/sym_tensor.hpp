#pragma once

#include <vector>

#include <Eigen/Dense>

namespace qplanar {

/// Symmetric vector-valued bilinear form P in S^2 V^* (x) V.
/// at(i, j, k) is the e_k component of P(e_i, e_j).
class SymTensor {
 public:
  SymTensor() = default;
  explicit SymTensor(int dim);

  /// Takes raw coefficients in [i][j][k] order (size d^3) and symmetrizes them in (i, j).
  /// The largest |P[i][j][k] - P[j][i][k]| seen on ingest is kept in ingest_asymmetry().
  SymTensor(int dim, const std::vector<double>& raw);

  int dim() const { return dim_; }
  double at(int i, int j, int k) const { return c_[index(i, j, k)]; }
  /// Sets both (i,j,k) and (j,i,k).
  void set(int i, int j, int k, double value);
  const std::vector<double>& coefficients() const { return c_; }
  double ingest_asymmetry() const { return asymmetry_; }

  Eigen::VectorXd apply(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const;
  Eigen::VectorXd diagonal(const Eigen::VectorXd& x) const { return apply(x, x); }

  double max_abs() const;
  SymTensor operator+(const SymTensor& o) const;
  SymTensor operator-(const SymTensor& o) const;
  SymTensor operator*(double s) const;

 private:
  std::size_t index(int i, int j, int k) const {
    return (static_cast<std::size_t>(i) * dim_ + j) * dim_ + k;
  }

  int dim_ = 0;
  std::vector<double> c_;
  double asymmetry_ = 0.0;
};

}  // namespace qplanar
