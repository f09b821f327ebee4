#include "qplanar/exterior.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "qplanar/errors.hpp"

namespace qplanar {

Multivector::Multivector(int dim, int degree, Variance variance)
    : dim_(dim), degree_(degree), variance_(variance) {
  if (dim < 1 || dim > max_dim) throw DimensionMismatch("Multivector: dimension out of range");
  if (degree < 0 || degree > dim) throw DimensionMismatch("Multivector: degree out of range");
}

Multivector Multivector::basis(int dim, std::initializer_list<int> indices, Variance variance,
                               double coeff) {
  Multivector out(dim, static_cast<int>(indices.size()), variance);
  std::vector<int> idx(indices);
  for (int i : idx)
    if (i < 0 || i >= dim) throw DimensionMismatch("Multivector::basis: index out of range");
  // Bubble sort to count transpositions.
  double sign = 1.0;
  for (std::size_t a = 0; a < idx.size(); ++a)
    for (std::size_t b = 0; b + 1 < idx.size() - a; ++b)
      if (idx[b] > idx[b + 1]) {
        std::swap(idx[b], idx[b + 1]);
        sign = -sign;
      }
  if (std::adjacent_find(idx.begin(), idx.end()) != idx.end()) return out;
  out.add(blade_of(idx), sign * coeff);
  return out;
}

Multivector Multivector::from_vector(const Eigen::VectorXd& v, Variance variance) {
  Multivector out(static_cast<int>(v.size()), 1, variance);
  for (int i = 0; i < v.size(); ++i) out.add(Blade{1} << i, v[i]);
  return out;
}

Multivector::Blade Multivector::blade_of(std::span<const int> sorted_indices) {
  Blade b = 0;
  for (int i : sorted_indices) b |= Blade{1} << i;
  return b;
}

std::vector<int> Multivector::indices_of(Blade blade) {
  std::vector<int> out;
  while (blade) {
    out.push_back(std::countr_zero(blade));
    blade &= blade - 1;
  }
  return out;
}

double Multivector::coefficient(Blade blade) const {
  const auto it = terms_.find(blade);
  return it == terms_.end() ? 0.0 : it->second;
}

void Multivector::add(Blade blade, double value) {
  if (std::popcount(blade) != degree_) throw DimensionMismatch("Multivector::add: wrong degree");
  if (value == 0.0) return;
  auto [it, inserted] = terms_.try_emplace(blade, value);
  if (!inserted) {
    it->second += value;
    if (it->second == 0.0) terms_.erase(it);
  }
}

Multivector Multivector::scaled(double s) const {
  Multivector out(dim_, degree_, variance_);
  if (s == 0.0) return out;
  for (const auto& [b, v] : terms_) out.add(b, s * v);
  return out;
}

Multivector Multivector::operator+(const Multivector& o) const {
  if (o.dim_ != dim_ || o.degree_ != degree_ || o.variance_ != variance_)
    throw DimensionMismatch("Multivector +: incompatible operands");
  Multivector out = *this;
  for (const auto& [b, v] : o.terms_) out.add(b, v);
  return out;
}

Multivector Multivector::operator-(const Multivector& o) const { return *this + o.scaled(-1.0); }

double Multivector::max_abs() const {
  double m = 0.0;
  for (const auto& [b, v] : terms_) m = std::max(m, std::abs(v));
  return m;
}

double Multivector::norm2() const {
  double s = 0.0;
  for (const auto& [b, v] : terms_) s += v * v;
  return s;
}

namespace {

// Sign of e_A ^ e_B relative to e_{A u B}: one factor -1 per pair a in A, b in B with a > b.
double shuffle_sign(Multivector::Blade a, Multivector::Blade b) {
  int swaps = 0;
  while (b) {
    const int i = std::countr_zero(b);
    swaps += std::popcount(a >> (i + 1));
    b &= b - 1;
  }
  return (swaps & 1) ? -1.0 : 1.0;
}

}  // namespace

Multivector wedge(const Multivector& u, const Multivector& v) {
  if (u.dim() != v.dim()) throw DimensionMismatch("wedge: dimensions differ");
  if (u.variance() != v.variance()) throw DimensionMismatch("wedge: variance mismatch");
  if (u.degree() + v.degree() > u.dim()) throw DimensionMismatch("wedge: degree overflow");
  Multivector out(u.dim(), u.degree() + v.degree(), u.variance());
  for (const auto& [a, x] : u.terms())
    for (const auto& [b, y] : v.terms()) {
      if (a & b) continue;
      out.add(a | b, shuffle_sign(a, b) * x * y);
    }
  return out;
}

Multivector wedge_columns(const Eigen::MatrixXd& columns) {
  if (columns.cols() < 1) throw DegenerateInput("wedge_columns: no columns");
  Multivector acc = Multivector::from_vector(columns.col(0));
  for (Eigen::Index c = 1; c < columns.cols(); ++c)
    acc = wedge(acc, Multivector::from_vector(columns.col(c)));
  return acc;
}

double pair(const Multivector& form, const Multivector& mv) {
  if (form.dim() != mv.dim() || form.degree() != mv.degree())
    throw DimensionMismatch("pair: degree or dimension mismatch");
  if (form.variance() != Variance::form || mv.variance() != Variance::vector)
    throw DimensionMismatch("pair: expects (form, vector) operands");
  double s = 0.0;
  const auto& small = form.terms().size() <= mv.terms().size() ? form : mv;
  const auto& large = &small == &form ? mv : form;
  for (const auto& [b, v] : small.terms()) s += v * large.coefficient(b);
  return s;
}

Multivector chi(const Multivector& mv) {
  if (mv.variance() != Variance::vector) throw DimensionMismatch("chi: expects a vector-type input");
  const double n2 = mv.norm2();
  if (n2 == 0.0) throw DegenerateInput("chi: zero multivector");
  Multivector out(mv.dim(), mv.degree(), Variance::form);
  for (const auto& [b, v] : mv.terms()) out.add(b, v / n2);
  return out;
}

Eigen::MatrixXd affinor_frame(std::span<const Eigen::MatrixXd> affinors, const Eigen::VectorXd& x) {
  Eigen::MatrixXd frame(x.size(), static_cast<Eigen::Index>(affinors.size()));
  for (std::size_t i = 0; i < affinors.size(); ++i) {
    if (affinors[i].rows() != x.size() || affinors[i].cols() != x.size())
      throw DimensionMismatch("affinor_frame: affinor and vector dimensions differ");
    frame.col(static_cast<Eigen::Index>(i)) = affinors[i] * x;
  }
  return frame;
}

namespace {

void require_generic(const Eigen::MatrixXd& frame, const Eigen::VectorXd& x) {
  if (frame.cols() > frame.rows())
    throw GenericSetViolation("generic set is empty: more affinors than dimensions");
  const double sigma_min = Eigen::JacobiSVD<Eigen::MatrixXd>(frame).singularValues().minCoeff();
  if (!(sigma_min > generic_tolerance * x.norm()) || x.norm() == 0.0)
    throw GenericSetViolation("vector is outside the generic set of the affinor family");
}

}  // namespace

Multivector tau(const Eigen::VectorXd& x, std::span<const Eigen::MatrixXd> affinors) {
  if (affinors.empty()) throw DegenerateInput("tau: empty affinor list");
  const Eigen::MatrixXd frame = affinor_frame(affinors, x);
  require_generic(frame, x);
  return chi(wedge_columns(frame));
}

AlphaExtraction extract_alphas_with_residual(const SymTensor& p,
                                             std::span<const Eigen::MatrixXd> affinors,
                                             const Eigen::VectorXd& x) {
  if (p.dim() != x.size()) throw DimensionMismatch("extract_alphas: tensor and vector dimensions differ");
  if (affinors.empty()) throw DegenerateInput("extract_alphas: empty affinor list");
  const Eigen::MatrixXd frame = affinor_frame(affinors, x);
  require_generic(frame, x);
  const Multivector t = chi(wedge_columns(frame));
  const Eigen::VectorXd pxx = p.diagonal(x);

  const auto ell = static_cast<Eigen::Index>(affinors.size());
  AlphaExtraction out;
  out.alphas.resize(static_cast<std::size_t>(ell));
  Eigen::MatrixXd replaced = frame;
  Eigen::VectorXd recon = Eigen::VectorXd::Zero(x.size());
  for (Eigen::Index i = 0; i < ell; ++i) {
    replaced.col(i) = pxx;
    const double a = pair(t, wedge_columns(replaced));
    replaced.col(i) = frame.col(i);
    out.alphas[static_cast<std::size_t>(i)] = a;
    recon += a * frame.col(i);
  }
  out.residual = (pxx - recon).norm();
  return out;
}

std::vector<double> extract_alphas(const SymTensor& p, std::span<const Eigen::MatrixXd> affinors,
                                   const Eigen::VectorXd& x) {
  AlphaExtraction r = extract_alphas_with_residual(p, affinors, x);
  const double scale = 1.0 + p.diagonal(x).norm();
  if (r.residual > 1e-9 * scale)
    throw NotInHull("extract_alphas: P(X,X) is not in the hull A(X)");
  return std::move(r.alphas);
}

}  // namespace qplanar
