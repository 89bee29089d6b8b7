#pragma once

// The three equivalent descriptions of a correlation matrix: unit Gram
// vectors, Hermitian matrices with A² = I/d, and matrix factorizations
// ({X_i}, {Y_j}, K).

#include "cpsdrank/clifford.hpp"
#include "cpsdrank/elliptope.hpp"

namespace cpsdrank::factorization {

using elliptope::CorrelationMatrix;

/// Hermitian d×d matrices with A_i² = B_j² = I/d whose Hilbert-Schmidt
/// Gram matrix is the source correlation matrix.
struct FormBFactorization {
  std::vector<CMatrix> a_mats;
  std::vector<CMatrix> b_mats;
  int d = 0;
};

/// Involutions X_i, Y_j and a positive definite K with Tr(K²) = 1 such that
/// E = Gram(KX_1, ..., KX_n, Y_1K, ..., Y_mK).
struct MatrixFactorization {
  std::vector<CMatrix> x_mats;
  std::vector<CMatrix> y_mats;
  CMatrix k;
  int d = 0;
};

/// Which products realize the Gram matrix in verify_factorization.
enum class GramForm {
  KxYk,  ///< Gram(KX_i, Y_jK)
  KxKy,  ///< Gram(KX_i, KY_j)
};

/// A_i = γ(a_i)/√d for Gram factors a_i of e; the first `n` factors form
/// the A family and the remainder the B family.
inline FormBFactorization factorize_clifford(const CorrelationMatrix& e, Eigen::Index n,
                                             const Tolerances& tol = {}) {
  if (n < 0 || n > e.size())
    throw Error(ErrorKind::SizeMismatch, "split exceeds matrix size");
  const auto factors = elliptope::gram_factors(e, tol);
  const int r = static_cast<int>(factors.front().size());
  const auto rep = clifford::gamma_generators(r);
  FormBFactorization fb;
  fb.d = rep.rep_dim;
  const double scale = 1.0 / std::sqrt(static_cast<double>(fb.d));
  for (Eigen::Index i = 0; i < e.size(); ++i) {
    CMatrix m = scale * clifford::gamma_of_vector(rep, factors[static_cast<std::size_t>(i)]);
    (i < n ? fb.a_mats : fb.b_mats).push_back(std::move(m));
  }
  return fb;
}

/// K = d^{-1/2} I, X_i = √d A_i, Y_j = √d B_j.
inline MatrixFactorization to_form_c(const FormBFactorization& fb) {
  MatrixFactorization mf;
  mf.d = fb.d;
  const double root = std::sqrt(static_cast<double>(fb.d));
  mf.k = CMatrix::Identity(fb.d, fb.d) / root;
  for (const auto& a : fb.a_mats) mf.x_mats.push_back(root * a);
  for (const auto& b : fb.b_mats) mf.y_mats.push_back(root * b);
  return mf;
}

namespace detail {

inline RVector realify(const CVector& v) {
  RVector out(2 * v.size());
  out << v.real(), v.imag();
  return out;
}

inline std::vector<CMatrix> gram_products(const MatrixFactorization& mf, GramForm form) {
  std::vector<CMatrix> out;
  for (const auto& x : mf.x_mats) out.push_back(mf.k * x);
  for (const auto& y : mf.y_mats) out.push_back(form == GramForm::KxYk ? CMatrix(y * mf.k)
                                                                       : CMatrix(mf.k * y));
  return out;
}

inline void check_square_family(std::span<const CMatrix> mats, Eigen::Index d) {
  for (const auto& m : mats)
    if (m.rows() != d || m.cols() != d)
      throw Error(ErrorKind::SizeMismatch, "factor matrices must all be d×d");
}

}  // namespace detail

/// Gram matrix of the real vectors (Re vec(KX_i), Im vec(KX_i)) and
/// (Re vec(Y_jK), Im vec(Y_jK)). Throws InvariantViolation unless every
/// diagonal entry is 1 within eq_tol.
inline CorrelationMatrix recover_correlation(const MatrixFactorization& mf,
                                             const Tolerances& tol = {}) {
  std::vector<RVector> vectors;
  for (const auto& x : mf.x_mats) vectors.push_back(detail::realify(linalg::vec(mf.k * x)));
  for (const auto& y : mf.y_mats) vectors.push_back(detail::realify(linalg::vec(y * mf.k)));
  const RMatrix g = linalg::gram(vectors);
  const double diag = linalg::max_abs(g.diagonal() - RVector::Ones(g.rows()));
  if (diag > tol.eq_tol)
    throw Error(ErrorKind::InvariantViolation,
                "recovered Gram matrix has a non-unit diagonal entry (deviation " +
                    std::to_string(diag) + ")");
  return CorrelationMatrix::validated(g, tol);
}

/// Checks (i) the Gram reconstruction of e, (ii) X_i² = Y_j² = I and
/// (iii) K positive definite with Tr(K²) = 1.
inline VerificationReport verify_factorization(const CorrelationMatrix& e,
                                               const MatrixFactorization& mf,
                                               GramForm form = GramForm::KxYk,
                                               const Tolerances& tol = {}) {
  const auto total = static_cast<Eigen::Index>(mf.x_mats.size() + mf.y_mats.size());
  if (total != e.size())
    throw Error(ErrorKind::SizeMismatch, "factor count does not match matrix size");
  const Eigen::Index d = mf.k.rows();
  if (mf.k.cols() != d) throw Error(ErrorKind::SizeMismatch, "K must be square");
  detail::check_square_family(mf.x_mats, d);
  detail::check_square_family(mf.y_mats, d);

  VerificationReport report("matrix-factorization");
  const auto products = detail::gram_products(mf, form);
  const CMatrix g = linalg::hs_gram(products);
  report.add_check("gram", linalg::max_abs(g - e.matrix().cast<Complex>()), tol.eq_tol);

  const CMatrix id = CMatrix::Identity(d, d);
  double invol = 0.0;
  double herm = 0.0;
  for (const auto* family : {&mf.x_mats, &mf.y_mats}) {
    for (const auto& m : *family) {
      invol = std::max(invol, linalg::max_abs(m * m - id));
      herm = std::max(herm, linalg::hermitian_deviation(m));
    }
  }
  report.add_check("hermitian", herm, tol.eq_tol);
  report.add_check("involutions", invol, tol.eq_tol);

  const double k_herm = linalg::hermitian_deviation(mf.k);
  report.add_check("k-hermitian", k_herm, tol.eq_tol);
  const CMatrix k_sym = (mf.k + mf.k.adjoint()) / 2.0;
  const RVector k_eigs = Eigen::SelfAdjointEigenSolver<CMatrix>(k_sym, Eigen::EigenvaluesOnly).eigenvalues();
  // positive definite: strictly above psd_tol
  report.add_check("k-positive-definite", std::max(0.0, tol.psd_tol - k_eigs(0)), 0.0);
  report.add_check("k-trace", std::abs((mf.k * mf.k).trace().real() - 1.0), tol.eq_tol);
  report.add_metric("k_min_eigenvalue", k_eigs(0));
  report.add_metric("d", static_cast<double>(d));
  return report;
}

/// Checks E = Gram(A_i, B_j) and A_i² = B_j² = I/d.
inline VerificationReport verify_form_b(const CorrelationMatrix& e, const FormBFactorization& fb,
                                        const Tolerances& tol = {}) {
  std::vector<CMatrix> all(fb.a_mats);
  all.insert(all.end(), fb.b_mats.begin(), fb.b_mats.end());
  if (static_cast<Eigen::Index>(all.size()) != e.size())
    throw Error(ErrorKind::SizeMismatch, "factor count does not match matrix size");
  detail::check_square_family(all, fb.d);
  VerificationReport report("form-b-factorization");
  report.add_check("gram", linalg::max_abs(linalg::hs_gram(all) - e.matrix().cast<Complex>()),
                   tol.eq_tol);
  const CMatrix target = CMatrix::Identity(fb.d, fb.d) / static_cast<double>(fb.d);
  double sq = 0.0;
  double herm = 0.0;
  for (const auto& m : all) {
    sq = std::max(sq, linalg::max_abs(m * m - target));
    herm = std::max(herm, linalg::hermitian_deviation(m));
  }
  report.add_check("hermitian", herm, tol.eq_tol);
  report.add_check("scaled-squares", sq, tol.eq_tol);
  return report;
}

/// Tests (Σ μ_i X_i)² = (μᵀAμ) I for `trials` standard-normal μ, and the
/// equivalent pairwise form X_iX_j + X_jX_i = 2A_ij I.
inline VerificationReport verify_clifford_identity(const RMatrix& a,
                                                   std::span<const CMatrix> x_mats, int trials,
                                                   std::uint64_t seed,
                                                   const Tolerances& tol = {}) {
  if (a.rows() != a.cols() || a.rows() != static_cast<Eigen::Index>(x_mats.size()))
    throw Error(ErrorKind::ShapeMismatch, "A must be n×n for n generator matrices");
  if (x_mats.empty()) throw Error(ErrorKind::ShapeMismatch, "no generator matrices");
  const Eigen::Index d = x_mats.front().rows();
  for (const auto& x : x_mats)
    if (x.rows() != d || x.cols() != d)
      throw Error(ErrorKind::ShapeMismatch, "generator matrices must be square and equal size");
  if (linalg::max_abs(a - a.transpose()) > tol.eq_tol)
    throw Error(ErrorKind::NotSymmetric, "A must be symmetric");

  VerificationReport report("clifford-identity");
  const CMatrix id = CMatrix::Identity(d, d);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  double identity_dev = 0.0;
  for (int t = 0; t < trials; ++t) {
    RVector mu(a.rows());
    for (Eigen::Index i = 0; i < mu.size(); ++i) mu(i) = normal(rng);
    CMatrix s = CMatrix::Zero(d, d);
    for (Eigen::Index i = 0; i < mu.size(); ++i) s += mu(i) * x_mats[static_cast<std::size_t>(i)];
    const double q = mu.dot(a * mu);
    identity_dev = std::max(identity_dev, linalg::max_abs(s * s - q * id));
  }
  report.add_check("random-identity", identity_dev, tol.eq_tol);

  double pair_dev = 0.0;
  for (std::size_t i = 0; i < x_mats.size(); ++i)
    for (std::size_t j = i; j < x_mats.size(); ++j) {
      const CMatrix rel = x_mats[i] * x_mats[j] + x_mats[j] * x_mats[i];
      const double aij = a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      pair_dev = std::max(pair_dev, linalg::max_abs(rel - 2.0 * aij * id));
    }
  report.add_check("anticommutators", pair_dev, tol.eq_tol);
  report.add_metric("trials", trials);
  return report;
}

/// X'_k = λ_k^{-1/2} Σ_i u_k(i) X_i over the spectral decomposition
/// A = Σ_k λ_k u_k u_kᵀ; the result satisfies the canonical Clifford
/// relations when the X_i anticommute according to A.
inline std::vector<CMatrix> orthonormalize_generators(const RMatrix& a,
                                                      std::span<const CMatrix> x_mats,
                                                      const Tolerances& tol = {}) {
  if (a.rows() != a.cols() || a.rows() != static_cast<Eigen::Index>(x_mats.size()))
    throw Error(ErrorKind::ShapeMismatch, "A must be n×n for n generator matrices");
  const Eigen::SelfAdjointEigenSolver<RMatrix> eig((a + a.transpose()) / 2.0);
  const RVector& lambda = eig.eigenvalues();
  const double top = lambda(lambda.size() - 1);
  if (top <= 0.0 || lambda(0) <= tol.rank_tol * top)
    throw Error(ErrorKind::SingularA, "A must be positive definite");
  const Eigen::Index d = x_mats.front().rows();
  std::vector<CMatrix> out;
  for (Eigen::Index k = 0; k < lambda.size(); ++k) {
    RVector u = eig.eigenvectors().col(k);
    Eigen::Index arg = 0;
    u.cwiseAbs().maxCoeff(&arg);
    if (u(arg) < 0) u = -u;
    CMatrix m = CMatrix::Zero(d, d);
    for (Eigen::Index i = 0; i < u.size(); ++i) m += u(i) * x_mats[static_cast<std::size_t>(i)];
    out.push_back(m / std::sqrt(lambda(k)));
  }
  return out;
}

}  // namespace cpsdrank::factorization
