#pragma once

// Tensor-product representations c_ij = Tr((M_i ⊗ N_j) ρ) of bipartite
// correlation matrices.

#include "cpsdrank/factorization.hpp"

#include <variant>

namespace cpsdrank::quantum {

using elliptope::BipartiteCorrelation;
using elliptope::CSystem;

/// Observables on C^d and a state on C^d ⊗ C^d: either a unit vector ψ or
/// a unit-trace density matrix ρ.
struct TensorProductRep {
  Eigen::Index local_dim = 0;
  std::vector<CMatrix> m_obs;
  std::vector<CMatrix> n_obs;
  std::variant<CVector, CMatrix> state;

  Eigen::Index n() const { return static_cast<Eigen::Index>(m_obs.size()); }
  Eigen::Index m() const { return static_cast<Eigen::Index>(n_obs.size()); }
  bool has_vector_state() const { return std::holds_alternative<CVector>(state); }

  CMatrix density() const {
    if (const auto* psi = std::get_if<CVector>(&state)) return (*psi) * psi->adjoint();
    return std::get<CMatrix>(state);
  }
};

struct ObservableCheck {
  bool ok = false;
  /// Largest |eigenvalue|.
  double max_abs_eigenvalue = 0.0;
};

struct CorrelationEvaluation {
  BipartiteCorrelation correlations;
  /// Largest |Im Tr((M_i ⊗ N_j) ρ)|.
  double imaginary_residue = 0.0;
};

/// ψ_d = d^{-1/2} Σ e_i ⊗ e_i.
inline CVector maximally_entangled(Eigen::Index d) {
  if (d < 1) throw Error(ErrorKind::InvalidArgument, "local dimension must be positive");
  CVector psi = CVector::Zero(d * d);
  const double amp = 1.0 / std::sqrt(static_cast<double>(d));
  for (Eigen::Index i = 0; i < d; ++i) psi(i * d + i) = amp;
  return psi;
}

/// Spectrum inside [-1-psd_tol, 1+psd_tol], i.e. H² ⪯ I.
inline ObservableCheck check_observable(const CMatrix& h, const Tolerances& tol = {}) {
  const RVector ev = linalg::hermitian_eigenvalues(h, tol);
  ObservableCheck out;
  out.max_abs_eigenvalue = ev.size() ? ev.cwiseAbs().maxCoeff() : 0.0;
  out.ok = out.max_abs_eigenvalue <= 1.0 + tol.psd_tol;
  return out;
}

/// Observables within [-1, 1], state psd with unit trace (or unit norm).
inline VerificationReport verify_rep(const TensorProductRep& rep, const Tolerances& tol = {}) {
  VerificationReport report("tensor-product-rep");
  const Eigen::Index d = rep.local_dim;
  double spectrum = 0.0;
  for (const auto* family : {&rep.m_obs, &rep.n_obs})
    for (const auto& h : *family) {
      if (h.rows() != d || h.cols() != d)
        throw Error(ErrorKind::SizeMismatch, "observables must be local_dim×local_dim");
      spectrum = std::max(spectrum, check_observable(h, tol).max_abs_eigenvalue);
    }
  report.add_check("observable-spectra", std::max(0.0, spectrum - 1.0), tol.psd_tol);
  if (const auto* psi = std::get_if<CVector>(&rep.state)) {
    if (psi->size() != d * d) throw Error(ErrorKind::SizeMismatch, "state must have length d^2");
    report.add_check("state-norm", std::abs(psi->squaredNorm() - 1.0), tol.eq_tol);
  } else {
    const CMatrix& rho = std::get<CMatrix>(rep.state);
    if (rho.rows() != d * d || rho.cols() != d * d)
      throw Error(ErrorKind::SizeMismatch, "density matrix must be d^2×d^2");
    report.add_check("state-hermitian", linalg::hermitian_deviation(rho), tol.eq_tol);
    report.add_check("state-psd", std::max(0.0, -linalg::min_eigenvalue(rho, tol)), tol.psd_tol);
    report.add_check("state-trace", std::abs(rho.trace() - 1.0), tol.eq_tol);
  }
  return report;
}

namespace detail {

/// Coordinates of every C-system vector in an orthonormal basis of their
/// common span. Vectors are used as given when they already span the
/// ambient space.
inline CSystem reduce_to_span(const CSystem& sys, const Tolerances& tol) {
  const Eigen::Index dim = elliptope::c_system_dimension(sys);
  RMatrix all(dim, static_cast<Eigen::Index>(sys.us.size() + sys.vs.size()));
  Eigen::Index col = 0;
  for (const auto& u : sys.us) all.col(col++) = u;
  for (const auto& v : sys.vs) all.col(col++) = v;
  const int rank = linalg::numerical_rank(all, tol);
  if (rank == dim) return sys;
  const Eigen::JacobiSVD<RMatrix> svd(all, Eigen::ComputeThinU);
  const RMatrix basis = svd.matrixU().leftCols(rank);
  CSystem out;
  for (const auto& u : sys.us) out.us.emplace_back(basis.transpose() * u);
  for (const auto& v : sys.vs) out.vs.emplace_back(basis.transpose() * v);
  return out;
}

}  // namespace detail

/// M_i = γ(u_i), N_j = γ(v_j)ᵀ and ψ = ψ_d for a unit C-system of c, with
/// γ the Clifford map on the span of the system.
inline TensorProductRep build_tensor_rep(const BipartiteCorrelation& c, const CSystem& sys,
                                         const Tolerances& tol = {}) {
  const auto report = elliptope::verify_c_system(c, sys, tol);
  if (!report.passed())
    throw Error(ErrorKind::CSystemMismatch, "vectors do not form a C-system for C");
  for (const auto* family : {&sys.us, &sys.vs})
    for (const auto& v : *family)
      if (std::abs(v.norm() - 1.0) > tol.eq_tol)
        throw Error(ErrorKind::NonUnitVector, "tensor representation needs unit vectors");

  const CSystem local = detail::reduce_to_span(sys, tol);
  const int r = static_cast<int>(local.us.front().size());
  const auto rep = clifford::gamma_generators(r);
  TensorProductRep out;
  out.local_dim = rep.rep_dim;
  for (const auto& u : local.us) out.m_obs.push_back(clifford::gamma_of_vector(rep, u));
  for (const auto& v : local.vs) out.n_obs.push_back(clifford::gamma_of_vector(rep, v).transpose());
  out.state = maximally_entangled(out.local_dim);
  return out;
}

/// c_ij = Tr((M_i ⊗ N_j) ρ); the real part is kept and the imaginary part
/// reported. Throws InvariantViolation if that residue exceeds eq_tol.
inline CorrelationEvaluation eval_correlations(const TensorProductRep& rep,
                                               const Tolerances& tol = {}) {
  const Eigen::Index d = rep.local_dim;
  RMatrix c(rep.n(), rep.m());
  double imag = 0.0;
  for (Eigen::Index i = 0; i < rep.n(); ++i) {
    for (Eigen::Index j = 0; j < rep.m(); ++j) {
      const CMatrix& mi = rep.m_obs[static_cast<std::size_t>(i)];
      const CMatrix& nj = rep.n_obs[static_cast<std::size_t>(j)];
      Complex value;
      if (const auto* psi = std::get_if<CVector>(&rep.state)) {
        // (M ⊗ N) vec(Ψ) = vec(M Ψ Nᵀ)
        const CMatrix big_psi = linalg::vec_inv(*psi, d);
        value = linalg::hs_inner(CMatrix(mi * big_psi * nj.transpose()), big_psi);
      } else {
        value = (linalg::kron(mi, nj) * std::get<CMatrix>(rep.state)).trace();
      }
      c(i, j) = value.real();
      imag = std::max(imag, std::abs(value.imag()));
    }
  }
  if (imag > tol.eq_tol)
    throw Error(ErrorKind::InvariantViolation, "correlations have a non-negligible imaginary part");
  return {BipartiteCorrelation::validated(c, tol), imag};
}

/// Unit vector φ with ρ = φφ^*; throws NotRankOne otherwise.
inline CVector rank_one_vector(const TensorProductRep& rep, const Tolerances& tol = {}) {
  if (const auto* psi = std::get_if<CVector>(&rep.state)) return *psi;
  const CMatrix& rho = std::get<CMatrix>(rep.state);
  if (linalg::numerical_rank(rho, tol) != 1)
    throw Error(ErrorKind::NotRankOne, "state is not rank one");
  const Eigen::SelfAdjointEigenSolver<CMatrix> eig((rho + rho.adjoint()) / 2.0);
  const Eigen::Index top = rho.rows() - 1;
  return eig.eigenvectors().col(top) * std::sqrt(std::max(eig.eigenvalues()(top), 0.0));
}

/// Rank-one representation with diagonal state ψ = Σ λ_k e_k ⊗ e_k.
///
/// With φ = Σ λ_k y_k ⊗ x_k a Schmidt decomposition, U = Σ e_k y_k^* and
/// V = Σ e_k x_k^*; observables become U M_i U^* and V N_j V^*. The local
/// dimension drops to the Schmidt rank of φ.
inline TensorProductRep reduce_rank_one_rep(const TensorProductRep& rep,
                                            const Tolerances& tol = {}) {
  const CVector phi = rank_one_vector(rep, tol);
  const auto sd = linalg::schmidt(phi, rep.local_dim, tol);
  const auto d = static_cast<Eigen::Index>(sd.rank());
  CMatrix u(d, rep.local_dim);
  CMatrix v(d, rep.local_dim);
  for (Eigen::Index k = 0; k < d; ++k) {
    u.row(k) = sd.left_vectors[static_cast<std::size_t>(k)].adjoint();
    v.row(k) = sd.right_vectors[static_cast<std::size_t>(k)].adjoint();
  }
  TensorProductRep out;
  out.local_dim = d;
  for (const auto& mi : rep.m_obs) out.m_obs.push_back(u * mi * u.adjoint());
  for (const auto& nj : rep.n_obs) out.n_obs.push_back(v * nj * v.adjoint());
  CVector psi = CVector::Zero(d * d);
  for (Eigen::Index k = 0; k < d; ++k) psi(k * d + k) = sd.coefficients(k);
  out.state = psi;
  return out;
}

/// Matrix factorization K = vec^{-1}(ψ), X_i = M_i, Y_j = N_jᵀ read off the
/// reduced form of a rank-one representation, so that
/// c_ij = <K X_i, Y_j K>.
inline factorization::MatrixFactorization to_matrix_factorization(const TensorProductRep& rep,
                                                                  const Tolerances& tol = {}) {
  const TensorProductRep reduced = reduce_rank_one_rep(rep, tol);
  factorization::MatrixFactorization mf;
  mf.d = static_cast<int>(reduced.local_dim);
  mf.k = linalg::vec_inv(std::get<CVector>(reduced.state), reduced.local_dim);
  mf.x_mats = reduced.m_obs;
  for (const auto& nj : reduced.n_obs) mf.y_mats.push_back(nj.transpose());
  return mf;
}

}  // namespace cpsdrank::quantum
