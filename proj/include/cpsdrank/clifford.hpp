#pragma once

// Brauer-Weyl representation of the rank-r Clifford algebra.

#include "cpsdrank/linalg.hpp"

namespace cpsdrank::clifford {

namespace pauli {

inline CMatrix identity() { return CMatrix::Identity(2, 2); }

inline CMatrix x() {
  CMatrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

inline CMatrix y() {
  const Complex i(0, 1);
  CMatrix m(2, 2);
  m << 0, -i, i, 0;
  return m;
}

inline CMatrix z() {
  CMatrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

}  // namespace pauli

/// 2^{⌊r/2⌋}, the size of an irreducible representation of the rank-r
/// Clifford algebra.
constexpr int theoretical_dim(int r) { return 1 << (r / 2); }

/// Matrix size actually used by gamma_generators(r). Rank one is realized
/// on C^2 by Z so that every generator is traceless.
constexpr int construction_dim(int r) { return r == 1 ? 2 : theoretical_dim(r); }

/// Hermitian generators z_1..z_r with z_i z_j + z_j z_i = 2δ_ij I.
struct CliffordRep {
  int rank = 0;
  int rep_dim = 0;
  std::vector<CMatrix> generators;
};

/// Generators ordered as the ℓ X-type ones, then the ℓ Y-type ones, then
/// Z^{⊗ℓ} when r = 2ℓ+1.
inline CliffordRep gamma_generators(int r) {
  if (r < 1) throw Error(ErrorKind::InvalidArgument, "Clifford rank must be at least 1");
  CliffordRep rep;
  rep.rank = r;
  rep.rep_dim = construction_dim(r);
  if (r == 1) {
    rep.generators.push_back(pauli::z());
    return rep;
  }
  const int ell = r / 2;
  const auto tail = [&](const CMatrix& middle, int i) {
    return linalg::kron(linalg::kron(linalg::kron_power(pauli::z(), i - 1), middle),
                        linalg::kron_power(pauli::identity(), ell - i));
  };
  for (int i = 1; i <= ell; ++i) rep.generators.push_back(tail(pauli::x(), i));
  for (int i = 1; i <= ell; ++i) rep.generators.push_back(tail(pauli::y(), i));
  if (r % 2 == 1) rep.generators.push_back(linalg::kron_power(pauli::z(), ell));
  return rep;
}

/// γ(x) = Σ_i x_i z_i.
inline CMatrix gamma_of_vector(const CliffordRep& rep, const RVector& x) {
  if (x.size() != rep.rank)
    throw Error(ErrorKind::LengthMismatch, "vector length must equal the Clifford rank");
  CMatrix out = CMatrix::Zero(rep.rep_dim, rep.rep_dim);
  for (int i = 0; i < rep.rank; ++i) out += x(i) * rep.generators[static_cast<std::size_t>(i)];
  return out;
}

/// Checks M_i M_j + M_j M_i = 2 δ_ij I over all pairs i <= j.
inline VerificationReport verify_clifford_relations(std::span<const CMatrix> mats,
                                                    const Tolerances& tol = {}) {
  VerificationReport report("clifford-relations");
  if (mats.empty()) {
    report.add_flag("nonempty", false);
    return report;
  }
  const Eigen::Index d = mats.front().rows();
  double herm = 0.0;
  for (const auto& m : mats) {
    if (m.rows() != d || m.cols() != d)
      throw Error(ErrorKind::ShapeMismatch, "generators must be square and of equal size");
    herm = std::max(herm, linalg::hermitian_deviation(m));
  }
  if (herm > tol.eq_tol)
    throw Error(ErrorKind::NotHermitian, "generator is not Hermitian within eq_tol");

  const CMatrix id = CMatrix::Identity(d, d);
  double squares = 0.0;
  double anticomm = 0.0;
  for (std::size_t i = 0; i < mats.size(); ++i) {
    for (std::size_t j = i; j < mats.size(); ++j) {
      CMatrix rel = mats[i] * mats[j] + mats[j] * mats[i];
      if (i == j) {
        squares = std::max(squares, linalg::max_abs(rel - 2.0 * id));
      } else {
        anticomm = std::max(anticomm, linalg::max_abs(rel));
      }
    }
  }
  report.add_check("squares", squares, tol.eq_tol);
  report.add_check("anticommutation", anticomm, tol.eq_tol);
  report.add_metric("count", static_cast<double>(mats.size()));
  report.add_metric("dimension", static_cast<double>(d));
  return report;
}

}  // namespace cpsdrank::clifford
