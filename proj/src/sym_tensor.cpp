#include "qplanar/sym_tensor.hpp"

#include <algorithm>
#include <cmath>

#include "qplanar/errors.hpp"

namespace qplanar {

SymTensor::SymTensor(int dim) : dim_(dim), c_(static_cast<std::size_t>(dim) * dim * dim, 0.0) {
  if (dim < 1) throw DegenerateInput("SymTensor: dimension must be positive");
}

SymTensor::SymTensor(int dim, const std::vector<double>& raw) : SymTensor(dim) {
  if (raw.size() != c_.size()) throw DimensionMismatch("SymTensor: expected d^3 coefficients");
  for (int i = 0; i < dim; ++i)
    for (int j = i; j < dim; ++j)
      for (int k = 0; k < dim; ++k) {
        const double a = raw[index(i, j, k)];
        const double b = raw[index(j, i, k)];
        asymmetry_ = std::max(asymmetry_, std::abs(a - b));
        const double s = 0.5 * (a + b);
        c_[index(i, j, k)] = s;
        c_[index(j, i, k)] = s;
      }
}

void SymTensor::set(int i, int j, int k, double value) {
  c_[index(i, j, k)] = value;
  c_[index(j, i, k)] = value;
}

Eigen::VectorXd SymTensor::apply(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const {
  if (x.size() != dim_ || y.size() != dim_) throw DimensionMismatch("SymTensor::apply");
  Eigen::VectorXd out = Eigen::VectorXd::Zero(dim_);
  for (int i = 0; i < dim_; ++i) {
    if (x[i] == 0.0) continue;
    for (int j = 0; j < dim_; ++j) {
      const double w = x[i] * y[j];
      if (w == 0.0) continue;
      const double* row = &c_[index(i, j, 0)];
      for (int k = 0; k < dim_; ++k) out[k] += w * row[k];
    }
  }
  return out;
}

double SymTensor::max_abs() const {
  double m = 0.0;
  for (double v : c_) m = std::max(m, std::abs(v));
  return m;
}

SymTensor SymTensor::operator+(const SymTensor& o) const {
  if (o.dim_ != dim_) throw DimensionMismatch("SymTensor +");
  SymTensor out = *this;
  for (std::size_t i = 0; i < c_.size(); ++i) out.c_[i] += o.c_[i];
  return out;
}

SymTensor SymTensor::operator-(const SymTensor& o) const {
  if (o.dim_ != dim_) throw DimensionMismatch("SymTensor -");
  SymTensor out = *this;
  for (std::size_t i = 0; i < c_.size(); ++i) out.c_[i] -= o.c_[i];
  return out;
}

SymTensor SymTensor::operator*(double s) const {
  SymTensor out = *this;
  for (double& v : out.c_) v *= s;
  return out;
}

}  // namespace qplanar
