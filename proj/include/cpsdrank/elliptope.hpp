#pragma once

// Correlation matrices: membership, Gram factors, extremality, bipartite
// projections, C-systems and completions.

#include "cpsdrank/linalg.hpp"

#include <cstdint>
#include <limits>
#include <optional>
#include <random>

namespace cpsdrank::elliptope {

/// Real symmetric psd matrix with unit diagonal.
class CorrelationMatrix {
 public:
  /// Validates symmetry, unit diagonal and positive semidefiniteness.
  static CorrelationMatrix validated(RMatrix e, const Tolerances& tol = {}) {
    if (e.rows() != e.cols() || e.rows() == 0)
      throw Error(ErrorKind::NonSquare, "correlation matrix must be square and nonempty");
    if (!e.allFinite()) throw Error(ErrorKind::NotCorrelation, "non-finite entry");
    if (linalg::max_abs(e - e.transpose()) > tol.eq_tol)
      throw Error(ErrorKind::NotSymmetric, "matrix is not symmetric within eq_tol");
    if (linalg::max_abs(e.diagonal() - RVector::Ones(e.rows())) > tol.eq_tol)
      throw Error(ErrorKind::NotCorrelation, "diagonal entries must equal 1");
    if (!linalg::is_psd(e, tol))
      throw Error(ErrorKind::NotPsd, "matrix is not positive semidefinite");
    return CorrelationMatrix(std::move(e));
  }

  const RMatrix& matrix() const { return entries_; }
  Eigen::Index size() const { return entries_.rows(); }

 private:
  explicit CorrelationMatrix(RMatrix e) : entries_(std::move(e)) {}
  RMatrix entries_;
};

/// Real n×m matrix with entries in [-1, 1].
class BipartiteCorrelation {
 public:
  static BipartiteCorrelation validated(RMatrix c, const Tolerances& tol = {}) {
    if (c.size() == 0) throw Error(ErrorKind::DimensionMismatch, "empty bipartite correlation");
    if (!c.allFinite()) throw Error(ErrorKind::NotCorrelation, "non-finite entry");
    if (c.cwiseAbs().maxCoeff() > 1.0 + tol.eq_tol)
      throw Error(ErrorKind::NotCorrelation, "entries must lie in [-1, 1]");
    return BipartiteCorrelation(std::move(c));
  }

  const RMatrix& matrix() const { return entries_; }
  Eigen::Index n() const { return entries_.rows(); }
  Eigen::Index m() const { return entries_.cols(); }

 private:
  explicit BipartiteCorrelation(RMatrix c) : entries_(std::move(c)) {}
  RMatrix entries_;
};

/// Vectors u_i, v_j of norm at most one with c_ij = <u_i, v_j>.
struct CSystem {
  std::vector<RVector> us;
  std::vector<RVector> vs;
};

struct ExtremalityReport {
  int rank_e = 0;
  int rank_hadamard = 0;
  int required = 0;
  bool is_extreme = false;
  /// Smallest singular value of E∘E kept by the rank cutoff, relative to the largest.
  double hadamard_kept_ratio = 0.0;
  /// Largest singular value of E∘E dropped by the rank cutoff, relative to the largest.
  double hadamard_dropped_ratio = 0.0;
};

constexpr int binom2(int k) { return k * (k - 1) / 2; }

/// Unit diagonal within eq_tol and psd within psd_tol. Throws NotSymmetric.
inline bool check_membership(const RMatrix& e, const Tolerances& tol = {}) {
  if (e.rows() != e.cols()) throw Error(ErrorKind::NonSquare, "membership expects a square matrix");
  if (linalg::max_abs(e - e.transpose()) > tol.eq_tol)
    throw Error(ErrorKind::NotSymmetric, "matrix is not symmetric within eq_tol");
  if (linalg::max_abs(e.diagonal() - RVector::Ones(e.rows())) > tol.eq_tol) return false;
  return linalg::is_psd(e, tol);
}

/// Vectors x_1..x_n in R^rank(e) with Gram(x) = e.
///
/// Eigenpairs are taken in descending order and each eigenvector is signed
/// so that its largest-magnitude component is positive; the factor vectors
/// are the rows of U_r diag(√λ).
inline std::vector<RVector> gram_factors(const CorrelationMatrix& e, const Tolerances& tol = {}) {
  const RMatrix& m = e.matrix();
  const int rank = linalg::numerical_rank(m, tol);
  const Eigen::SelfAdjointEigenSolver<RMatrix> eig(m);
  if (eig.info() != Eigen::Success)
    throw Error(ErrorKind::NotPsd, "eigendecomposition failed");
  const Eigen::Index n = m.rows();
  RMatrix factors(n, rank);
  for (int k = 0; k < rank; ++k) {
    const Eigen::Index src = n - 1 - k;
    RVector u = eig.eigenvectors().col(src);
    Eigen::Index arg = 0;
    u.cwiseAbs().maxCoeff(&arg);
    if (u(arg) < 0) u = -u;
    const double lambda = eig.eigenvalues()(src);
    if (lambda < -tol.psd_tol) throw Error(ErrorKind::NotPsd, "negative eigenvalue");
    factors.col(k) = u * std::sqrt(std::max(lambda, 0.0));
  }
  std::vector<RVector> out;
  out.reserve(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) out.emplace_back(factors.row(i).transpose());
  return out;
}

/// Extremality test rank(E∘E) = binom(rank(E)+1, 2).
inline ExtremalityReport check_extreme(const CorrelationMatrix& e, const Tolerances& tol = {}) {
  ExtremalityReport rep;
  const RMatrix& m = e.matrix();
  rep.rank_e = linalg::numerical_rank(m, tol);
  const RMatrix had = m.cwiseProduct(m);
  const Eigen::BDCSVD<RMatrix> svd(had);
  const RVector& sv = svd.singularValues();
  const double top = sv(0);
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    const double ratio = top > 0 ? sv(i) / top : 0.0;
    if (top > 0 && sv(i) > tol.rank_tol * top) {
      ++rep.rank_hadamard;
      rep.hadamard_kept_ratio = ratio;
    } else {
      rep.hadamard_dropped_ratio = std::max(rep.hadamard_dropped_ratio, ratio);
    }
  }
  rep.required = binom2(rep.rank_e + 1);
  rep.is_extreme = rep.rank_hadamard == rep.required;
  return rep;
}

/// Largest r with r(r+1)/2 <= n.
inline int r_max(long long n) {
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "r_max expects n >= 1");
  auto r = static_cast<long long>((std::sqrt(1.0 + 8.0 * static_cast<double>(n)) - 1.0) / 2.0);
  while (r * (r + 1) / 2 > n) --r;
  while ((r + 1) * (r + 2) / 2 <= n) ++r;
  return static_cast<int>(r);
}

struct LexExtremePoint {
  CorrelationMatrix matrix;
  std::vector<RVector> vectors;
  /// 1-based (i, j) label of each vector, i <= j, in lexicographic order.
  std::vector<std::pair<int, int>> labels;
};

/// Gram matrix of u_ii = e_i and u_ij = (e_i + e_j)/√2 for 1 <= i <= j <= r,
/// ordered lexicographically.
inline LexExtremePoint gen_extreme_lex(int r, const Tolerances& tol = {}) {
  if (r < 1) throw Error(ErrorKind::InvalidArgument, "gen_extreme_lex expects r >= 1");
  std::vector<RVector> vectors;
  std::vector<std::pair<int, int>> labels;
  for (int i = 0; i < r; ++i) {
    for (int j = i; j < r; ++j) {
      RVector u = RVector::Zero(r);
      if (i == j) {
        u(i) = 1.0;
      } else {
        u(i) = u(j) = 1.0 / std::sqrt(2.0);
      }
      vectors.push_back(std::move(u));
      labels.emplace_back(i + 1, j + 1);
    }
  }
  auto matrix = CorrelationMatrix::validated(linalg::gram(vectors), tol);
  return {std::move(matrix), std::move(vectors), std::move(labels)};
}

/// Top-right n×m block of an (n+m)×(n+m) correlation matrix.
inline BipartiteCorrelation project_bipartite(const CorrelationMatrix& e, Eigen::Index n,
                                              Eigen::Index m, const Tolerances& tol = {}) {
  if (n < 1 || m < 1 || n + m != e.size())
    throw Error(ErrorKind::SizeMismatch, "bipartite split must satisfy n + m = size");
  return BipartiteCorrelation::validated(e.matrix().topRightCorner(n, m), tol);
}

inline RMatrix c_system_inner_products(const CSystem& sys) {
  RMatrix c(static_cast<Eigen::Index>(sys.us.size()), static_cast<Eigen::Index>(sys.vs.size()));
  for (std::size_t i = 0; i < sys.us.size(); ++i)
    for (std::size_t j = 0; j < sys.vs.size(); ++j)
      c(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = sys.us[i].dot(sys.vs[j]);
  return c;
}

inline Eigen::Index c_system_dimension(const CSystem& sys) {
  Eigen::Index dim = -1;
  for (const auto* family : {&sys.us, &sys.vs}) {
    for (const auto& v : *family) {
      if (dim < 0) dim = v.size();
      if (v.size() != dim)
        throw Error(ErrorKind::DimensionMismatch, "C-system vectors differ in dimension");
    }
  }
  return dim;
}

/// Checks c_ij = <u_i, v_j> and ‖u_i‖, ‖v_j‖ <= 1. Reports the extreme
/// vector norms as metrics `min_norm` and `max_norm`.
inline VerificationReport verify_c_system(const BipartiteCorrelation& c, const CSystem& sys,
                                          const Tolerances& tol = {}) {
  if (static_cast<Eigen::Index>(sys.us.size()) != c.n() ||
      static_cast<Eigen::Index>(sys.vs.size()) != c.m())
    throw Error(ErrorKind::DimensionMismatch, "C-system size does not match C");
  c_system_dimension(sys);
  VerificationReport report("c-system");
  report.add_check("inner-products", linalg::max_abs(c_system_inner_products(sys) - c.matrix()),
                   tol.eq_tol);
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (const auto* family : {&sys.us, &sys.vs}) {
    for (const auto& v : *family) {
      lo = std::min(lo, v.norm());
      hi = std::max(hi, v.norm());
    }
  }
  report.add_check("norms", std::max(0.0, hi - 1.0), tol.eq_tol);
  report.add_metric("min_norm", lo);
  report.add_metric("max_norm", hi);
  return report;
}

/// Gram matrix of (u_1..u_n, v_1..v_m). Requires unit vectors.
inline CorrelationMatrix complete(const CSystem& sys, const Tolerances& tol = {}) {
  c_system_dimension(sys);
  std::vector<RVector> all(sys.us);
  all.insert(all.end(), sys.vs.begin(), sys.vs.end());
  for (const auto& v : all)
    if (std::abs(v.norm() - 1.0) > tol.eq_tol)
      throw Error(ErrorKind::NonUnitVector, "completion requires unit vectors");
  return CorrelationMatrix::validated(linalg::gram(all), tol);
}

struct LambdaSolution {
  RMatrix lambda;
  /// ‖AΛ − C‖_max
  double residual = 0.0;
};

/// Solves AΛ = C for full-rank symmetric psd A.
inline LambdaSolution solve_lambda(const RMatrix& a, const RMatrix& c, const Tolerances& tol = {}) {
  if (a.rows() != a.cols()) throw Error(ErrorKind::NonSquare, "A must be square");
  if (c.rows() != a.rows()) throw Error(ErrorKind::DimensionMismatch, "C must have A's row count");
  if (linalg::numerical_rank(a, tol) < a.rows())
    throw Error(ErrorKind::SingularA, "A is not full rank");
  LambdaSolution out;
  out.lambda = a.ldlt().solve(c);
  out.residual = linalg::max_abs(a * out.lambda - c);
  return out;
}

/// Euclidean distance from v to span(family).
inline double distance_to_span(const RVector& v, std::span<const RVector> family,
                               const Tolerances& tol = {}) {
  if (family.empty()) return v.norm();
  RMatrix basis(v.size(), static_cast<Eigen::Index>(family.size()));
  for (std::size_t k = 0; k < family.size(); ++k) {
    if (family[k].size() != v.size())
      throw Error(ErrorKind::DimensionMismatch, "span family differs in dimension");
    basis.col(static_cast<Eigen::Index>(k)) = family[k];
  }
  Eigen::CompleteOrthogonalDecomposition<RMatrix> cod(basis);
  cod.setThreshold(tol.rank_tol);
  const RVector coeffs = cod.solve(v);
  return (basis * coeffs - v).norm();
}

/// Necessary conditions for C to be an extreme bipartite correlation,
/// checked on one C-system: all vectors have unit norm and
/// span{u_i} = span{v_j}. Passing does not certify extremality.
inline VerificationReport check_extreme_necessary(const BipartiteCorrelation& c,
                                                  const CSystem& sys,
                                                  const Tolerances& tol = {}) {
  VerificationReport base = verify_c_system(c, sys, tol);
  VerificationReport report("extreme-bipartite-necessary");
  for (const auto& chk : base.checks()) report.add_check(chk.name, chk.deviation, chk.threshold);
  const double lo = base.metric("min_norm");
  report.add_check("unit-norms", std::max(1.0 - lo, base.metric("max_norm") - 1.0), tol.eq_tol);

  double worst = 0.0;
  for (const auto& u : sys.us) worst = std::max(worst, distance_to_span(u, sys.vs, tol));
  for (const auto& v : sys.vs) worst = std::max(worst, distance_to_span(v, sys.us, tol));
  report.add_check("span-equality", worst, tol.eq_tol);
  report.add_metric("min_norm", lo);
  return report;
}

/// n unit vectors drawn uniformly from the sphere in R^dim, for sampling
/// elliptope points.
inline std::vector<RVector> random_unit_vectors(int n, int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<RVector> out;
  out.reserve(static_cast<std::size_t>(n));
  while (static_cast<int>(out.size()) < n) {
    RVector v(dim);
    for (int k = 0; k < dim; ++k) v(k) = normal(rng);
    const double len = v.norm();
    if (len < 1e-8) continue;
    out.emplace_back(v / len);
  }
  return out;
}

inline CorrelationMatrix random_correlation(int n, int dim, std::uint64_t seed,
                                            const Tolerances& tol = {}) {
  std::mt19937_64 rng(seed);
  return CorrelationMatrix::validated(linalg::gram(random_unit_vectors(n, dim, rng)), tol);
}

}  // namespace cpsdrank::elliptope
