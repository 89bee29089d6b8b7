#pragma once

// Dense linear-algebra primitives with explicit tolerance policies.

#include "cpsdrank/types.hpp"

#include <cmath>
#include <span>

namespace cpsdrank::linalg {

/// Kronecker product; block (i,j) of the result is a(i,j) * b.
template <typename DerivedA, typename DerivedB>
auto kron(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  using Scalar = typename Eigen::ScalarBinaryOpTraits<typename DerivedA::Scalar,
                                                      typename DerivedB::Scalar>::ReturnType;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> out(a.rows() * b.rows(),
                                                           a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) =
          Scalar(a(i, j)) * b.template cast<Scalar>();
  return out;
}

/// Kronecker power a^{⊗k}; k = 0 gives the 1x1 identity.
inline CMatrix kron_power(const CMatrix& a, int k) {
  CMatrix out = CMatrix::Identity(1, 1);
  for (int i = 0; i < k; ++i) out = kron(out, a);
  return out;
}

/// Row-major flattening, so that vec(e_i e_j^*) = e_i ⊗ e_j.
inline CVector vec(const CMatrix& m) {
  if (m.rows() != m.cols())
    throw Error(ErrorKind::NonSquare, "vec expects a square matrix");
  const Eigen::Index d = m.rows();
  CVector out(d * d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) out(i * d + j) = m(i, j);
  return out;
}

inline CMatrix vec_inv(const CVector& v, Eigen::Index d) {
  if (v.size() != d * d)
    throw Error(ErrorKind::LengthMismatch, "vec_inv expects a vector of length d^2");
  CMatrix out(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) out(i, j) = v(i * d + j);
  return out;
}

/// Hilbert-Schmidt inner product Tr(x y^*).
template <typename DerivedX, typename DerivedY>
Complex hs_inner(const Eigen::MatrixBase<DerivedX>& x, const Eigen::MatrixBase<DerivedY>& y) {
  if (x.rows() != y.rows() || x.cols() != y.cols())
    throw Error(ErrorKind::ShapeMismatch, "hs_inner expects equal shapes");
  return (x.template cast<Complex>().array() * y.template cast<Complex>().conjugate().array())
      .sum();
}

template <typename Derived>
double max_abs(const Eigen::MatrixBase<Derived>& m) {
  return m.size() == 0 ? 0.0 : static_cast<double>(m.cwiseAbs().maxCoeff());
}

template <typename Derived>
double hermitian_deviation(const Eigen::MatrixBase<Derived>& m) {
  if (m.rows() != m.cols())
    throw Error(ErrorKind::NonSquare, "Hermitian test expects a square matrix");
  return max_abs(m - m.adjoint());
}

/// Number of singular values exceeding rank_tol times the largest one.
template <typename Derived>
int numerical_rank(const Eigen::MatrixBase<Derived>& m, const Tolerances& tol = {}) {
  if (m.size() == 0) return 0;
  using Plain = typename Derived::PlainObject;
  const Eigen::BDCSVD<Plain> svd(m.eval());
  const auto& sv = svd.singularValues();
  const double top = sv.size() ? static_cast<double>(sv(0)) : 0.0;
  if (top == 0.0) return 0;
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > tol.rank_tol * top) ++rank;
  return rank;
}

/// Eigenvalues of a Hermitian matrix, ascending. Throws NotHermitian.
template <typename Derived>
RVector hermitian_eigenvalues(const Eigen::MatrixBase<Derived>& m, const Tolerances& tol) {
  if (hermitian_deviation(m) > tol.eq_tol)
    throw Error(ErrorKind::NotHermitian, "matrix is not Hermitian within eq_tol");
  using Plain = typename Derived::PlainObject;
  const Plain sym = (m + m.adjoint()) / 2.0;
  return Eigen::SelfAdjointEigenSolver<Plain>(sym, Eigen::EigenvaluesOnly).eigenvalues();
}

template <typename Derived>
double min_eigenvalue(const Eigen::MatrixBase<Derived>& m, const Tolerances& tol = {}) {
  const RVector ev = hermitian_eigenvalues(m, tol);
  return ev.size() ? ev(0) : 0.0;
}

/// True iff the smallest eigenvalue is at least -psd_tol.
template <typename Derived>
bool is_psd(const Eigen::MatrixBase<Derived>& m, const Tolerances& tol = {}) {
  return min_eigenvalue(m, tol) >= -tol.psd_tol;
}

/// Gram matrix of a family of real vectors.
inline RMatrix gram(std::span<const RVector> vectors) {
  if (vectors.empty())
    throw Error(ErrorKind::DimensionMismatch, "gram expects a nonempty family");
  const Eigen::Index dim = vectors.front().size();
  RMatrix stacked(dim, static_cast<Eigen::Index>(vectors.size()));
  for (std::size_t k = 0; k < vectors.size(); ++k) {
    if (vectors[k].size() != dim)
      throw Error(ErrorKind::DimensionMismatch, "gram vectors differ in dimension");
    stacked.col(static_cast<Eigen::Index>(k)) = vectors[k];
  }
  RMatrix g = stacked.transpose() * stacked;
  return (g + g.transpose()) / 2.0;
}

/// Gram matrix under the Hilbert-Schmidt inner product; entry (i,j) is
/// <mats[i], mats[j]>.
inline CMatrix hs_gram(std::span<const CMatrix> mats) {
  const auto n = static_cast<Eigen::Index>(mats.size());
  CMatrix g(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) g(i, j) = hs_inner(mats[i], mats[j]);
  return g;
}

/// Schmidt decomposition psi = Σ_k coefficients[k] · left[k] ⊗ right[k].
struct SchmidtDecomposition {
  RVector coefficients;
  std::vector<CVector> left_vectors;
  std::vector<CVector> right_vectors;

  std::size_t rank() const { return left_vectors.size(); }

  CVector reconstruct() const {
    const Eigen::Index d = left_vectors.empty() ? 0 : left_vectors.front().size();
    CVector psi = CVector::Zero(d * d);
    for (std::size_t k = 0; k < rank(); ++k)
      psi += coefficients(static_cast<Eigen::Index>(k)) *
             kron(left_vectors[k], right_vectors[k]);
    return psi;
  }
};

/// Schmidt decomposition of psi ∈ C^d ⊗ C^d from the SVD of vec^{-1}(psi).
///
/// Coefficients at or below rank_tol times the largest are dropped. Each
/// left vector is rotated so its first nonzero component is real positive,
/// with the compensating phase moved onto the right vector.
inline SchmidtDecomposition schmidt(const CVector& psi, Eigen::Index d, const Tolerances& tol = {}) {
  if (psi.size() != d * d)
    throw Error(ErrorKind::LengthMismatch, "schmidt expects a vector of length d^2");
  const CMatrix m = vec_inv(psi, d);
  const Eigen::JacobiSVD<CMatrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const RVector sv = svd.singularValues();
  SchmidtDecomposition out;
  const double top = sv.size() ? sv(0) : 0.0;
  std::vector<double> kept;
  for (Eigen::Index k = 0; k < sv.size(); ++k) {
    if (top == 0.0 || sv(k) <= tol.rank_tol * top) break;
    CVector left = svd.matrixU().col(k);
    // vec(u v^*) = u ⊗ conj(v)
    CVector right = svd.matrixV().col(k).conjugate();
    for (Eigen::Index c = 0; c < left.size(); ++c) {
      if (std::abs(left(c)) > tol.eq_tol) {
        const Complex phase = left(c) / std::abs(left(c));
        left /= phase;
        right *= phase;
        break;
      }
    }
    kept.push_back(sv(k));
    out.left_vectors.push_back(std::move(left));
    out.right_vectors.push_back(std::move(right));
  }
  out.coefficients = Eigen::Map<const RVector>(kept.data(), static_cast<Eigen::Index>(kept.size()));
  return out;
}

}  // namespace cpsdrank::linalg
