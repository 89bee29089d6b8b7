#pragma once

// Reading and writing factorization directories for each artifact kind.

#include "cpsdrank/cpsd.hpp"
#include "cpsdrank/io.hpp"
#include "cpsdrank/quantum.hpp"

namespace cpsdrank::artifacts {

namespace fs = std::filesystem;

inline void write_generators(const fs::path& dir, const clifford::CliffordRep& rep) {
  io::DirectoryWriter w(dir, "clifford-generators");
  w.set("rank", rep.rank);
  w.set("d", rep.rep_dim);
  for (std::size_t i = 0; i < rep.generators.size(); ++i)
    w.add("z", static_cast<int>(i) + 1, 0, rep.generators[i]);
  w.finish();
}

inline std::vector<CMatrix> read_generators(const fs::path& dir) {
  const auto m = io::read_manifest(dir);
  io::expect_kind(m, {"clifford-generators"}, dir);
  return io::read_role(dir, m, "z");
}

inline void write_matrix_factorization(const fs::path& dir,
                                       const factorization::MatrixFactorization& mf) {
  io::DirectoryWriter w(dir, "matrix-factorization");
  w.set("d", mf.k.rows());
  w.set("gram", "Gram(K X_1..K X_n, Y_1 K..Y_m K)");
  for (std::size_t i = 0; i < mf.x_mats.size(); ++i) w.add("X", static_cast<int>(i) + 1, 0, mf.x_mats[i]);
  for (std::size_t j = 0; j < mf.y_mats.size(); ++j) w.add("Y", static_cast<int>(j) + 1, 0, mf.y_mats[j]);
  w.add("K", 0, 0, mf.k);
  w.finish();
}

inline factorization::MatrixFactorization read_matrix_factorization(const fs::path& dir) {
  const auto m = io::read_manifest(dir);
  io::expect_kind(m, {"matrix-factorization"}, dir);
  factorization::MatrixFactorization mf;
  mf.x_mats = io::read_role(dir, m, "X");
  mf.y_mats = io::read_role(dir, m, "Y");
  mf.k = io::read_single(dir, m, "K");
  mf.d = static_cast<int>(mf.k.rows());
  return mf;
}

inline void write_form_b(const fs::path& dir, const factorization::FormBFactorization& fb) {
  io::DirectoryWriter w(dir, "form-b-factorization");
  w.set("d", fb.d);
  for (std::size_t i = 0; i < fb.a_mats.size(); ++i) w.add("A", static_cast<int>(i) + 1, 0, fb.a_mats[i]);
  for (std::size_t j = 0; j < fb.b_mats.size(); ++j) w.add("B", static_cast<int>(j) + 1, 0, fb.b_mats[j]);
  w.finish();
}

inline factorization::FormBFactorization read_form_b(const fs::path& dir) {
  const auto m = io::read_manifest(dir);
  io::expect_kind(m, {"form-b-factorization"}, dir);
  factorization::FormBFactorization fb;
  fb.a_mats = io::read_role(dir, m, "A");
  fb.b_mats = io::read_role(dir, m, "B");
  const auto& first = fb.a_mats.empty() ? fb.b_mats : fb.a_mats;
  if (first.empty()) throw io::FormatError(dir.string() + ": no A or B matrices");
  fb.d = static_cast<int>(first.front().rows());
  return fb;
}

inline void write_cpsd_factorization(const fs::path& dir, const cpsd::CpsdFactorization& f) {
  io::DirectoryWriter w(dir, "cpsd-factorization");
  w.set("n", f.n);
  w.set("d", f.dim);
  w.set("block_order", io::kPcBlockOrder);
  for (Eigen::Index i = 0; i < f.n; ++i)
    for (int a : {1, -1}) w.add("P", static_cast<int>(i) + 1, a, f.at(i, a));
  w.finish();
}

inline cpsd::CpsdFactorization read_cpsd_factorization(const fs::path& dir) {
  const auto m = io::read_manifest(dir);
  io::expect_kind(m, {"cpsd-factorization"}, dir);
  const auto entries = m.with_role("P");
  int n = 0;
  for (const auto* e : entries) n = std::max(n, e->i);
  cpsd::CpsdFactorization f;
  f.n = n;
  f.mats.resize(static_cast<std::size_t>(n));
  std::vector<int> seen(static_cast<std::size_t>(2 * n), 0);
  for (const auto* e : entries) {
    if (e->i < 1 || (e->a != 1 && e->a != -1))
      throw io::FormatError(dir.string() + ": P entries need i >= 1 and a = ±1");
    const auto slot = static_cast<std::size_t>(2 * (e->i - 1)) + cpsd::outcome_slot(e->a);
    if (seen[slot]++) throw io::FormatError(dir.string() + ": duplicate P entry");
    f.at(e->i - 1, e->a) = io::read_matrix(dir / e->file);
  }
  for (int s : seen)
    if (!s) throw io::FormatError(dir.string() + ": every i needs both a = +1 and a = -1");
  if (n == 0) throw io::FormatError(dir.string() + ": no P entries");
  f.dim = f.at(0, 1).rows();
  return f;
}

inline void write_tensor_rep(const fs::path& dir, const quantum::TensorProductRep& rep) {
  io::DirectoryWriter w(dir, "tensor-product-rep");
  w.set("local_dim", rep.local_dim);
  for (std::size_t i = 0; i < rep.m_obs.size(); ++i) w.add("M", static_cast<int>(i) + 1, 0, rep.m_obs[i]);
  for (std::size_t j = 0; j < rep.n_obs.size(); ++j) w.add("N", static_cast<int>(j) + 1, 0, rep.n_obs[j]);
  if (const auto* psi = std::get_if<CVector>(&rep.state)) {
    w.set("state", "vector");
    w.add("psi", 0, 0, CMatrix(*psi));
  } else {
    w.set("state", "density");
    w.add("rho", 0, 0, std::get<CMatrix>(rep.state));
  }
  w.finish();
}

inline quantum::TensorProductRep read_tensor_rep(const fs::path& dir) {
  const auto m = io::read_manifest(dir);
  io::expect_kind(m, {"tensor-product-rep"}, dir);
  quantum::TensorProductRep rep;
  rep.m_obs = io::read_role(dir, m, "M");
  rep.n_obs = io::read_role(dir, m, "N");
  if (rep.m_obs.empty() || rep.n_obs.empty())
    throw io::FormatError(dir.string() + ": representation needs M and N observables");
  rep.local_dim = rep.m_obs.front().rows();
  if (!m.with_role("psi").empty()) {
    const CMatrix psi = io::read_single(dir, m, "psi");
    if (psi.cols() != 1) throw io::FormatError(dir.string() + ": psi must be a column vector");
    rep.state = CVector(psi.col(0));
  } else {
    rep.state = io::read_single(dir, m, "rho");
  }
  return rep;
}

}  // namespace cpsdrank::artifacts
