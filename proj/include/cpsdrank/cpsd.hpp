#pragma once

// Witness matrices P_C, their Clifford-built cpsd factorizations, dimension
// lower-bound certificates, and the extraction of matrix factorizations
// from arbitrary cpsd factorizations of P_C.

#include "cpsdrank/factorization.hpp"

#include <array>
#include <optional>

namespace cpsdrank::cpsd {

using elliptope::CorrelationMatrix;

/// Row/column of P_C for the pair (i, a): i-major, a = +1 first.
constexpr Eigen::Index pc_index(Eigen::Index i, int a) { return 2 * i + (a == 1 ? 0 : 1); }

constexpr std::size_t outcome_slot(int a) { return a == 1 ? 0 : 1; }

/// The 2n×2n matrix whose (i,j) block is (1/4)[[1+c, 1-c], [1-c, 1+c]].
struct CpsdWitness {
  Eigen::Index n = 0;
  RMatrix entries;
};

/// Hermitian psd d×d matrices P^i_a for i ∈ [n], a ∈ {±1}.
struct CpsdFactorization {
  Eigen::Index n = 0;
  Eigen::Index dim = 0;
  /// mats[i][outcome_slot(a)] = P^i_a
  std::vector<std::array<CMatrix, 2>> mats;

  const CMatrix& at(Eigen::Index i, int a) const {
    return mats[static_cast<std::size_t>(i)][outcome_slot(a)];
  }
  CMatrix& at(Eigen::Index i, int a) { return mats[static_cast<std::size_t>(i)][outcome_slot(a)]; }
};

struct CpsdRankCertificate {
  int rank_c = 0;
  bool is_extreme = false;
  /// 2^{⌊rank/2⌋}; present only when C was certified extreme.
  std::optional<int> lower_bound;
  int construction_dim = 0;
  /// Max deviation of the constructed factorization against P_C.
  double construction_deviation = 0.0;
  elliptope::ExtremalityReport extremality;
};

inline CpsdWitness build_pc(const CorrelationMatrix& c) {
  CpsdWitness w;
  w.n = c.size();
  w.entries.resize(2 * w.n, 2 * w.n);
  for (Eigen::Index i = 0; i < w.n; ++i)
    for (Eigen::Index j = 0; j < w.n; ++j)
      for (int a : {1, -1})
        for (int b : {1, -1})
          w.entries(pc_index(i, a), pc_index(j, b)) = (1.0 + a * b * c.matrix()(i, j)) / 4.0;
  return w;
}

/// Γ^i_a = (I + a γ(u_i)) / (2√d) for unit Gram factors u_i of c.
inline CpsdFactorization build_cpsd_factorization(const CorrelationMatrix& c,
                                                  const Tolerances& tol = {}) {
  const auto factors = elliptope::gram_factors(c, tol);
  const int r = static_cast<int>(factors.front().size());
  const auto rep = clifford::gamma_generators(r);
  CpsdFactorization f;
  f.n = c.size();
  f.dim = rep.rep_dim;
  const CMatrix id = CMatrix::Identity(f.dim, f.dim);
  const double scale = 1.0 / (2.0 * std::sqrt(static_cast<double>(f.dim)));
  for (const auto& u : factors) {
    const CMatrix g = clifford::gamma_of_vector(rep, u);
    f.mats.push_back({scale * (id + g), scale * (id - g)});
  }
  return f;
}

/// Checks p[(i,a),(j,b)] = <P^i_a, P^j_b> and that every P^i_a is psd.
inline VerificationReport verify_cpsd_factorization(const RMatrix& p, const CpsdFactorization& f,
                                                    const Tolerances& tol = {}) {
  if (p.rows() != 2 * f.n || p.cols() != 2 * f.n ||
      static_cast<Eigen::Index>(f.mats.size()) != f.n)
    throw Error(ErrorKind::SizeMismatch, "P must be 2n×2n for n factor pairs");
  for (const auto& pair : f.mats)
    for (const auto& m : pair)
      if (m.rows() != f.dim || m.cols() != f.dim)
        throw Error(ErrorKind::SizeMismatch, "factor matrices must all be dim×dim");

  VerificationReport report("cpsd-factorization");
  double entry_dev = 0.0;
  double imag = 0.0;
  for (Eigen::Index i = 0; i < f.n; ++i)
    for (Eigen::Index j = 0; j < f.n; ++j)
      for (int a : {1, -1})
        for (int b : {1, -1}) {
          const Complex v = linalg::hs_inner(f.at(i, a), f.at(j, b));
          entry_dev = std::max(entry_dev, std::abs(v - p(pc_index(i, a), pc_index(j, b))));
          imag = std::max(imag, std::abs(v.imag()));
        }
  report.add_check("entries", entry_dev, tol.eq_tol);

  double herm = 0.0;
  double min_eig = std::numeric_limits<double>::infinity();
  for (const auto& pair : f.mats)
    for (const auto& m : pair) {
      herm = std::max(herm, linalg::hermitian_deviation(m));
      if (herm <= tol.eq_tol) min_eig = std::min(min_eig, linalg::min_eigenvalue(m, tol));
    }
  report.add_check("hermitian", herm, tol.eq_tol);
  report.add_check("psd", herm <= tol.eq_tol ? std::max(0.0, -min_eig) : 1.0, tol.psd_tol);

  double k_dev = 0.0;
  const CMatrix k = f.at(0, 1) + f.at(0, -1);
  for (Eigen::Index i = 1; i < f.n; ++i)
    k_dev = std::max(k_dev, linalg::max_abs(f.at(i, 1) + f.at(i, -1) - k));
  report.add_metric("k_consistency", k_dev);
  report.add_metric("imaginary_residue", imag);
  report.add_metric("dim", static_cast<double>(f.dim));
  return report;
}

/// Lower bound 2^{⌊rank(C)/2⌋} on the cpsd-rank of P_C, emitted only when C
/// passes the extremality test. The bound itself is not searched for; its
/// hypotheses are what gets checked here.
inline CpsdRankCertificate certify_lower_bound(const CorrelationMatrix& c,
                                               const Tolerances& tol = {}) {
  CpsdRankCertificate cert;
  cert.extremality = elliptope::check_extreme(c, tol);
  cert.rank_c = cert.extremality.rank_e;
  cert.is_extreme = cert.extremality.is_extreme;
  if (cert.is_extreme) cert.lower_bound = clifford::theoretical_dim(cert.rank_c);
  const auto f = build_cpsd_factorization(c, tol);
  cert.construction_dim = static_cast<int>(f.dim);
  cert.construction_deviation = verify_cpsd_factorization(build_pc(c).entries, f, tol).max_deviation();
  return cert;
}

struct ExtractionResult {
  /// X_i serve as both families; K is restricted to its support.
  factorization::MatrixFactorization factorization;
  /// ‖X_i² − I‖_max per i; X_i² ⪯ I always holds.
  std::vector<double> involution_deviation;
  /// Largest eigenvalue of X_i² per i (at most 1 up to roundoff).
  std::vector<double> max_square_eigenvalue;
  /// max_i ‖Σ_a P^i_a − K‖_max
  double k_consistency = 0.0;
  Eigen::Index input_dim = 0;
  Eigen::Index support_dim = 0;
};

/// Matrix factorization of the doubled completion [[C, C], [C, C]] built
/// from a cpsd factorization of P_C.
///
/// K = Σ_a P^i_a must not depend on i. K is diagonalized and every P^i_a
/// is restricted to the support of K; then P̃^i_a = K^{-1/2} P^i_a K^{-1/2}
/// and X_i = P̃^i_{+1} − P̃^i_{-1}. If K is already diagonal the eigenbasis
/// is the permutation sorting its diagonal in descending order.
inline ExtractionResult extract_matrix_factorization(const CpsdFactorization& f,
                                                     const Tolerances& tol = {}) {
  if (f.n < 1 || static_cast<Eigen::Index>(f.mats.size()) != f.n)
    throw Error(ErrorKind::SizeMismatch, "factorization has no factor pairs");
  ExtractionResult out;
  out.input_dim = f.dim;
  const CMatrix k = f.at(0, 1) + f.at(0, -1);
  for (Eigen::Index i = 0; i < f.n; ++i)
    out.k_consistency = std::max(out.k_consistency, linalg::max_abs(f.at(i, 1) + f.at(i, -1) - k));
  if (out.k_consistency > tol.eq_tol)
    throw Error(ErrorKind::InconsistentK, "sum over outcomes differs between indices");
  if (linalg::hermitian_deviation(k) > tol.eq_tol)
    throw Error(ErrorKind::NotHermitian, "K is not Hermitian");

  const Eigen::Index d = f.dim;
  CMatrix q(d, d);
  RVector lambda(d);
  const CMatrix off = k - CMatrix(k.diagonal().asDiagonal());
  if (linalg::max_abs(off) <= tol.eq_tol) {
    std::vector<Eigen::Index> order(static_cast<std::size_t>(d));
    for (Eigen::Index i = 0; i < d; ++i) order[static_cast<std::size_t>(i)] = i;
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index x, Eigen::Index y) {
      return k(x, x).real() > k(y, y).real();
    });
    q.setZero();
    for (Eigen::Index c = 0; c < d; ++c) {
      q(order[static_cast<std::size_t>(c)], c) = 1.0;
      lambda(c) = k(order[static_cast<std::size_t>(c)], order[static_cast<std::size_t>(c)]).real();
    }
  } else {
    const Eigen::SelfAdjointEigenSolver<CMatrix> eig((k + k.adjoint()) / 2.0);
    for (Eigen::Index c = 0; c < d; ++c) {
      q.col(c) = eig.eigenvectors().col(d - 1 - c);
      lambda(c) = eig.eigenvalues()(d - 1 - c);
    }
  }
  if (lambda(0) <= 0.0) throw Error(ErrorKind::ZeroK, "K has no positive eigenvalue");
  Eigen::Index support = 0;
  while (support < d && lambda(support) > tol.rank_tol * lambda(0)) ++support;
  out.support_dim = support;

  const CMatrix qs = q.leftCols(support);
  const RVector inv_root = lambda.head(support).cwiseSqrt().cwiseInverse();
  const auto whiten = [&](const CMatrix& p) -> CMatrix {
    const CMatrix restricted = qs.adjoint() * p * qs;
    return inv_root.asDiagonal() * restricted * inv_root.asDiagonal();
  };

  auto& mf = out.factorization;
  mf.d = static_cast<int>(support);
  mf.k = lambda.head(support).cast<Complex>().asDiagonal();
  const CMatrix id = CMatrix::Identity(support, support);
  for (Eigen::Index i = 0; i < f.n; ++i) {
    CMatrix x = whiten(f.at(i, 1)) - whiten(f.at(i, -1));
    x = (x + x.adjoint()) / 2.0;
    const CMatrix sq = x * x;
    out.involution_deviation.push_back(linalg::max_abs(sq - id));
    out.max_square_eigenvalue.push_back(
        Eigen::SelfAdjointEigenSolver<CMatrix>(sq, Eigen::EigenvaluesOnly).eigenvalues().maxCoeff());
    mf.x_mats.push_back(std::move(x));
  }
  mf.y_mats = mf.x_mats;
  return out;
}

}  // namespace cpsdrank::cpsd
