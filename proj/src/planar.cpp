#include "qplanar/planar.hpp"

#include <algorithm>
#include <cmath>

#include "qplanar/errors.hpp"
#include "qplanar/exterior.hpp"
#include "qplanar/quaternion.hpp"

namespace qplanar {

AStructure::AStructure(std::vector<Eigen::MatrixXd> affinors, std::string name, double rank_tolerance)
    : affinors_(std::move(affinors)), name_(std::move(name)), rank_tolerance_(rank_tolerance) {
  if (affinors_.empty()) throw DegenerateInput("AStructure: no affinors");
  dim_ = static_cast<int>(affinors_.front().rows());
  for (const auto& f : affinors_)
    if (f.rows() != dim_ || f.cols() != dim_)
      throw DimensionMismatch("AStructure: affinors must all be d x d");
  if ((affinors_.front() - Eigen::MatrixXd::Identity(dim_, dim_)).cwiseAbs().maxCoeff() > 1e-12)
    throw DegenerateInput("AStructure: F_0 must be the identity affinor");
  Eigen::MatrixXd flat(static_cast<Eigen::Index>(dim_) * dim_, rank());
  for (int i = 0; i < rank(); ++i)
    flat.col(i) = affinors_[static_cast<std::size_t>(i)].reshaped();
  if (numerical_rank(flat, rank_tolerance_) != rank())
    throw DegenerateInput("AStructure: affinors are linearly dependent");
}

AStructure AStructure::identity(int d) {
  if (d < 1) throw DegenerateInput("AStructure::identity: d must be positive");
  return AStructure({Eigen::MatrixXd::Identity(d, d)}, "identity");
}

AStructure AStructure::complex(int n) {
  const AffinorTriple t = make_affinor_triple(n);
  return AStructure({Eigen::MatrixXd::Identity(4 * n, 4 * n), t.I}, "complex");
}

AStructure AStructure::quaternionic(int n) {
  const AffinorTriple t = make_affinor_triple(n);
  return AStructure({Eigen::MatrixXd::Identity(4 * n, 4 * n), t.I, t.J, t.K}, "quaternionic");
}

AStructure AStructure::by_name(const std::string& name, int n) {
  if (name == "identity" || name == "projective") return identity(4 * n);
  if (name == "complex") return complex(n);
  if (name == "quaternionic") return quaternionic(n);
  throw ConfigError("unknown structure '" + name + "' (expected identity, complex or quaternionic)");
}

Eigen::MatrixXd AStructure::frame(const Eigen::VectorXd& x) const { return affinor_frame(affinors_, x); }

int numerical_rank(const Eigen::MatrixXd& m, double rel_tol) {
  if (m.size() == 0) return 0;
  const Eigen::VectorXd sv = Eigen::JacobiSVD<Eigen::MatrixXd>(m).singularValues();
  if (sv.size() == 0 || sv[0] == 0.0) return 0;
  return static_cast<int>((sv.array() > rel_tol * sv[0]).count());
}

Hull hull(const AStructure& a, const Eigen::VectorXd& x) {
  if (x.size() != a.dim()) throw DimensionMismatch("hull: vector dimension differs from structure");
  Hull h;
  const Eigen::MatrixXd frame = a.frame(x);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(frame, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  if (sv.size() > 0 && sv[0] > 0.0)
    h.rank = static_cast<int>((sv.array() > a.rank_tolerance() * sv[0]).count());
  h.basis = svd.matrixU().leftCols(h.rank);
  return h;
}

GenericRankReport generic_rank_check(const AStructure& a, int samples, std::uint64_t seed,
                                     Execution policy) {
  if (samples < 1) throw ConfigError("generic_rank_check: sample count must be at least 1");
  GenericRankReport r;
  r.samples = samples;
  const int ell = a.rank();
  if (a.dim() < 2 * ell) {
    r.reason = "dimension bound";
    return r;
  }
  std::vector<char> full(static_cast<std::size_t>(samples), 0);
  for_each_index(policy, full.size(), [&](std::size_t s) {
    Rng rng(seed, s);
    const Eigen::VectorXd x = rng.normal_vector(a.dim());
    const Eigen::VectorXd y = rng.normal_vector(a.dim());
    Eigen::MatrixXd frame(a.dim(), 2 * ell);
    frame << a.frame(x), a.frame(y);
    full[s] = numerical_rank(frame, a.rank_tolerance()) == 2 * ell;
  });
  r.fraction = static_cast<double>(std::count(full.begin(), full.end(), 1)) / samples;
  r.verdict = r.fraction >= 0.99;
  if (!r.verdict) r.reason = "rank deficient on a non-negligible set";
  return r;
}

Eigen::VectorXd sample_generic_vector(const AStructure& a, Rng& rng) {
  for (int attempt = 0; attempt < 100; ++attempt) {
    Eigen::VectorXd x = rng.normal_vector(a.dim());
    const Eigen::MatrixXd frame = a.frame(x);
    if (frame.cols() > frame.rows()) break;
    const double smin = Eigen::JacobiSVD<Eigen::MatrixXd>(frame).singularValues().minCoeff();
    if (smin > generic_tolerance * x.norm()) return x;
  }
  throw GenericSetViolation("sample_generic_vector: no generic vector after 100 draws");
}

SymTensor polarize(const QuadraticMap& q, int dim, std::uint64_t seed) {
  if (dim < 1) throw DegenerateInput("polarize: dimension must be positive");
  auto check_vec = [dim](const Eigen::VectorXd& v) {
    if (v.size() != dim) throw DimensionMismatch("polarize: map returns a vector of wrong dimension");
    return v;
  };
  const Eigen::MatrixXd E = Eigen::MatrixXd::Identity(dim, dim);
  std::vector<Eigen::VectorXd> diag(static_cast<std::size_t>(dim));
  for (int i = 0; i < dim; ++i) diag[static_cast<std::size_t>(i)] = check_vec(q(E.col(i)));

  SymTensor p(dim);
  for (int i = 0; i < dim; ++i)
    for (int j = i; j < dim; ++j) {
      Eigen::VectorXd v = diag[static_cast<std::size_t>(i)];
      if (i != j) {
        v = 0.5 * (check_vec(q(E.col(i) + E.col(j))) - diag[static_cast<std::size_t>(i)] -
                   diag[static_cast<std::size_t>(j)]);
      }
      for (int k = 0; k < dim; ++k) p.set(i, j, k, v[k]);
    }

  // Quadratic maps are determined by the probes above; confirm q agrees with P(X,X)
  // and obeys homogeneity and the parallelogram law elsewhere.
  Rng rng(seed, 0x9017);
  for (int probe = 0; probe < 8; ++probe) {
    const Eigen::VectorXd x = rng.normal_vector(dim);
    const Eigen::VectorXd y = rng.normal_vector(dim);
    const Eigen::VectorXd qx = check_vec(q(x));
    const Eigen::VectorXd qy = check_vec(q(y));
    const double scale = 1.0 + qx.norm() + qy.norm() + check_vec(q(x + y)).norm();
    const double homogeneity = (check_vec(q(2.0 * x)) - 4.0 * qx).norm();
    const double parallelogram = (check_vec(q(x + y)) + check_vec(q(x - y)) - 2.0 * qx - 2.0 * qy).norm();
    const double diagonal = (p.diagonal(x) - qx).norm();
    if (std::max({homogeneity / 4.0, parallelogram, diagonal}) > 1e-10 * scale)
      throw NonQuadratic("polarize: sampled map is not a quadratic form");
  }
  return p;
}

SymTensor make_A1(const OneFormList& alphas, const AStructure& a) {
  if (static_cast<int>(alphas.size()) != a.rank())
    throw DimensionMismatch("make_A1: need one form per affinor");
  const int d = a.dim();
  for (const auto& al : alphas)
    if (al.size() != d) throw DimensionMismatch("make_A1: form dimension differs from structure");
  SymTensor p(d);
  for (int i = 0; i < d; ++i)
    for (int j = i; j < d; ++j)
      for (int k = 0; k < d; ++k) {
        double s = 0.0;
        for (std::size_t f = 0; f < alphas.size(); ++f) {
          const auto& F = a.affinors()[f];
          s += alphas[f][i] * F(k, j) + alphas[f][j] * F(k, i);
        }
        p.set(i, j, k, 0.5 * s);
      }
  return p;
}

namespace {

double slot_residual(const SymTensor& p, const OneFormList& forms, const AStructure& a) {
  return (p - make_A1(forms, a)).max_abs() / std::max(1.0, p.max_abs());
}

double form_gap(const OneFormList& u, const OneFormList& v) {
  double g = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) g = std::max(g, (u[i] - v[i]).cwiseAbs().maxCoeff());
  return g;
}

}  // namespace

Decomposition decompose_A1(const SymTensor& p, const AStructure& a, const DecomposeOptions& opt) {
  const int d = a.dim();
  const int ell = a.rank();
  if (p.dim() != d) throw DimensionMismatch("decompose_A1: tensor and structure dimensions differ");
  if (d < 2 * ell) throw GenericRankFailure("decompose_A1: dimension bound d >= 2l violated");
  const GenericRankReport rank = generic_rank_check(a, 64, opt.seed, opt.policy);
  if (!rank.verdict) throw GenericRankFailure("decompose_A1: structure fails generic rank test");

  const double scale = std::max(1.0, p.max_abs());
  Decomposition out;

  // Route (a): pointwise wedge extraction, then a linear fit per coefficient.
  const int m = std::max(2 * d, opt.samples);
  Eigen::MatrixXd sample_points(m, d);
  Eigen::MatrixXd sample_alphas(m, ell);
  std::vector<double> pointwise(static_cast<std::size_t>(m), 0.0);
  for_each_index(opt.policy, static_cast<std::size_t>(m), [&](std::size_t s) {
    Rng rng(opt.seed ^ 0xa1fa, s);
    const Eigen::VectorXd x = sample_generic_vector(a, rng);
    const AlphaExtraction ex = extract_alphas_with_residual(p, a.affinors(), x);
    const auto row = static_cast<Eigen::Index>(s);
    sample_points.row(row) = x.transpose();
    for (int i = 0; i < ell; ++i) sample_alphas(row, i) = ex.alphas[static_cast<std::size_t>(i)];
    pointwise[s] = ex.residual / (x.squaredNorm() * scale);
  });
  const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> fit(sample_points);
  out.extracted_forms.resize(static_cast<std::size_t>(ell));
  for (int i = 0; i < ell; ++i) out.extracted_forms[static_cast<std::size_t>(i)] = fit.solve(sample_alphas.col(i));
  out.extraction_residual = std::max(slot_residual(p, out.extracted_forms, a),
                                     *std::max_element(pointwise.begin(), pointwise.end()));

  // Route (b): one equation per slot (i <= j, k), unknowns alpha_f[c].
  const int rows = d * (d + 1) / 2 * d;
  Eigen::MatrixXd design = Eigen::MatrixXd::Zero(rows, ell * d);
  Eigen::VectorXd rhs(rows);
  int r = 0;
  for (int i = 0; i < d; ++i)
    for (int j = i; j < d; ++j)
      for (int k = 0; k < d; ++k, ++r) {
        rhs[r] = p.at(i, j, k);
        for (int f = 0; f < ell; ++f) {
          const auto& F = a.affinors()[static_cast<std::size_t>(f)];
          design(r, f * d + i) += 0.5 * F(k, j);
          design(r, f * d + j) += 0.5 * F(k, i);
        }
      }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(design, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  out.condition_number = sv[sv.size() - 1] > 0.0 ? sv[0] / sv[sv.size() - 1]
                                                  : std::numeric_limits<double>::infinity();
  const Eigen::VectorXd coeffs = svd.solve(rhs);
  out.forms.resize(static_cast<std::size_t>(ell));
  for (int f = 0; f < ell; ++f) out.forms[static_cast<std::size_t>(f)] = coeffs.segment(f * d, d);
  out.lsq_residual = slot_residual(p, out.forms, a);

  out.residual = std::max(out.extraction_residual, out.lsq_residual);
  out.solver_gap = form_gap(out.forms, out.extracted_forms);
  const bool accept_a = out.extraction_residual <= opt.tolerance;
  const bool accept_b = out.lsq_residual <= opt.tolerance;
  if (accept_a != accept_b)
    throw InternalInconsistency("decompose_A1: extraction and least-squares routes disagree on membership");
  if (accept_a && out.solver_gap > opt.agreement)
    throw InternalInconsistency("decompose_A1: extraction and least-squares forms disagree");
  out.accepted = accept_a;
  if (!out.accepted) out.residual = out.lsq_residual;
  return out;
}

InclusionReport hull_inclusion(const AStructure& a, const AStructure& b, int samples,
                               std::uint64_t seed, double tolerance) {
  if (a.dim() != b.dim()) throw DimensionMismatch("hull_inclusion: structures differ in dimension");
  InclusionReport r;
  for (int s = 0; s < samples; ++s) {
    Rng rng(seed, static_cast<std::uint64_t>(s));
    const Eigen::VectorXd x = rng.normal_vector(a.dim());
    const Hull hb = hull(b, x);
    for (const auto& F : a.affinors()) {
      const Eigen::VectorXd v = F * x;
      const double nv = v.norm();
      if (nv == 0.0) continue;
      const Eigen::VectorXd proj = hb.basis * (hb.basis.transpose() * v);
      r.max_defect = std::max(r.max_defect, (v - proj).norm() / nv);
    }
  }
  r.included = r.max_defect <= tolerance;
  return r;
}

}  // namespace qplanar
