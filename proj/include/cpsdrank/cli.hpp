#pragma once

// Command-line front end. Exit codes: 0 success, 1 verification failed,
// 2 usage or file-format error, 3 numerical precondition or invariant
// violation.

#include "cpsdrank/artifacts.hpp"

#include "CLI11.hpp"

#include <iostream>

namespace cpsdrank::cli {

namespace fs = std::filesystem;
using io::json;

enum ExitCode : int { kSuccess = 0, kFailed = 1, kUsage = 2, kPrecondition = 3 };

namespace detail {

struct Context {
  Tolerances tol;
  std::optional<std::uint64_t> seed;
  bool quiet = false;
  std::string report_path;
  std::ostream* out = &std::cout;
  std::ostream* err = &std::cerr;
};

inline int emit(const Context& ctx, const std::string& command, const VerificationReport& report,
                const json& extra = json::object()) {
  json j = io::report_to_json(command, report, ctx.tol, ctx.seed);
  for (const auto& [k, v] : extra.items()) j[k] = v;
  if (!ctx.report_path.empty()) io::write_json(ctx.report_path, j);
  if (ctx.quiet) {
    *ctx.out << command << ": " << (report.passed() ? "PASS" : "FAIL")
             << " max_deviation=" << report.max_deviation() << '\n';
  } else if (ctx.report_path.empty()) {
    *ctx.out << j.dump(2) << '\n';
  }
  return report.passed() ? kSuccess : kFailed;
}

inline void note(const Context& ctx, const std::string& line) {
  if (!ctx.quiet) *ctx.out << line << '\n';
}

inline elliptope::CorrelationMatrix read_correlation(const std::string& path, const Context& ctx) {
  return elliptope::CorrelationMatrix::validated(io::read_real_matrix(path), ctx.tol);
}

}  // namespace detail

/// Runs one command; `args` excludes the program name.
inline int run(const std::vector<std::string>& args, std::ostream& out = std::cout,
               std::ostream& err = std::cerr) {
  detail::Context ctx;
  ctx.out = &out;
  ctx.err = &err;

  CLI::App app{"Clifford, elliptope and cpsd factorization toolkit", "cpsdrank"};
  app.require_subcommand(1);
  std::uint64_t seed_value = 0;
  app.add_option("--eq-tol", ctx.tol.eq_tol, "Entrywise equality tolerance")->check(CLI::NonNegativeNumber);
  app.add_option("--psd-tol", ctx.tol.psd_tol, "Eigenvalue negativity tolerance")->check(CLI::NonNegativeNumber);
  app.add_option("--rank-tol", ctx.tol.rank_tol, "Relative singular-value cutoff")->check(CLI::NonNegativeNumber);
  auto* seed_opt = app.add_option("--seed", seed_value, "Seed for randomized checks");
  app.add_flag("--quiet", ctx.quiet, "Print one summary line instead of JSON");
  app.add_option("--report", ctx.report_path, "Write the report JSON to this file");

  const auto sub = [](CLI::App* parent, const std::string& name, const std::string& desc) {
    auto* s = parent->add_subcommand(name, desc);
    s->fallthrough();
    return s;
  };

  // clifford
  auto* clifford_cmd = sub(&app, "clifford", "Clifford generator construction and verification");
  clifford_cmd->require_subcommand(1);
  int rank = 0;
  std::string out_path;
  auto* cl_gen = sub(clifford_cmd, "gen", "Write the rank-R generators");
  cl_gen->add_option("-r", rank, "Clifford rank")->required()->check(CLI::PositiveNumber);
  cl_gen->add_option("-o", out_path, "Output directory")->required();
  std::string in_dir;
  auto* cl_verify = sub(clifford_cmd, "verify", "Verify the Clifford relations");
  cl_verify->add_option("DIR", in_dir)->required();

  // elliptope
  auto* ell_cmd = sub(&app, "elliptope", "Correlation matrix tools");
  ell_cmd->require_subcommand(1);
  std::string in_file;
  auto* ell_check = sub(ell_cmd, "check-extreme", "Extremality test rank(E∘E) = binom(rank+1, 2)");
  ell_check->add_option("E", in_file)->required();
  std::string vectors_path;
  auto* ell_gen = sub(ell_cmd, "gen-extreme", "Lexicographic extreme point of rank R");
  ell_gen->add_option("-r", rank, "Rank")->required()->check(CLI::PositiveNumber);
  ell_gen->add_option("-o", out_path, "Output matrix file")->required();
  ell_gen->add_option("--vectors", vectors_path, "Also write the generating vectors as rows");
  long long rmax_n = 0;
  auto* ell_rmax = sub(ell_cmd, "rmax", "Largest r with r(r+1)/2 <= N");
  ell_rmax->add_option("-n", rmax_n)->required()->check(CLI::PositiveNumber);

  // factorize
  auto* fac_cmd = sub(&app, "factorize", "Matrix factorizations of correlation matrices");
  fac_cmd->require_subcommand(0, 1);
  std::string form = "c";
  long long split = -1;
  fac_cmd->add_option("E", in_file);
  fac_cmd->add_option("-o", out_path, "Output directory");
  fac_cmd->add_option("--form", form, "b: A_i, B_j; c: X_i, Y_j, K")->check(CLI::IsMember({"b", "c"}));
  fac_cmd->add_option("--split", split, "Size n of the first family (default: all)");
  std::string mode = "i";
  auto* fac_verify = sub(fac_cmd, "verify", "Verify a factorization directory against E");
  fac_verify->add_option("E", in_file)->required();
  fac_verify->add_option("DIR", in_dir)->required();
  fac_verify->add_option("--mode", mode, "i: (KX, YK); i-prime: (KX, KY); b-form: (A, B)")
      ->check(CLI::IsMember({"i", "i-prime", "b-form"}));
  int trials = 100;
  auto* fac_identity = sub(fac_cmd, "clifford-identity", "Check (Σ μ_i X_i)² = (μᵀAμ) I");
  fac_identity->add_option("A", in_file)->required();
  fac_identity->add_option("DIR", in_dir)->required();
  fac_identity->add_option("--trials", trials)->check(CLI::PositiveNumber);

  // cpsd
  auto* cpsd_cmd = sub(&app, "cpsd", "P_C witnesses and cpsd factorizations");
  cpsd_cmd->require_subcommand(1);
  std::string factors_dir;
  auto* cp_build = sub(cpsd_cmd, "build-pc", "Build P_C and optionally its Γ factorization");
  cp_build->add_option("C", in_file)->required();
  cp_build->add_option("-o", out_path, "Output matrix file")->required();
  cp_build->add_option("--factors", factors_dir, "Write the cpsd factorization here");
  auto* cp_verify = sub(cpsd_cmd, "verify", "Verify a cpsd factorization of P");
  cp_verify->add_option("P", in_file)->required();
  cp_verify->add_option("DIR", in_dir)->required();
  auto* cp_certify = sub(cpsd_cmd, "certify", "cpsd-rank lower-bound certificate for P_C");
  cp_certify->add_option("C", in_file)->required();
  auto* cp_extract = sub(cpsd_cmd, "extract", "Matrix factorization from a cpsd factorization");
  cp_extract->add_option("DIR", in_dir)->required();
  cp_extract->add_option("-o", out_path, "Output directory")->required();

  // quantum
  auto* q_cmd = sub(&app, "quantum", "Tensor-product representations");
  q_cmd->require_subcommand(1);
  std::vector<std::string> gram_files;
  auto* q_rep = sub(q_cmd, "rep", "Build a representation from a unit C-system");
  q_rep->add_option("C", in_file)->required();
  q_rep->add_option("--gram", gram_files, "U.json V.json (vectors as rows)")->required()->expected(2);
  q_rep->add_option("-o", out_path, "Output directory")->required();
  auto* q_eval = sub(q_cmd, "eval", "Evaluate c_ij = Tr((M_i ⊗ N_j) ρ)");
  q_eval->add_option("DIR", in_dir)->required();
  q_eval->add_option("-o", out_path, "Output matrix file (default: stdout)");
  auto* q_reduce = sub(q_cmd, "reduce", "Reduce a rank-one representation to Schmidt form");
  q_reduce->add_option("DIR", in_dir)->required();
  q_reduce->add_option("-o", out_path, "Output directory")->required();

  std::vector<const char*> argv{"cpsdrank"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kUsage;
  }
  if (seed_opt->count()) ctx.seed = seed_value;

  try {
    if (cl_gen->parsed()) {
      const auto rep = clifford::gamma_generators(rank);
      artifacts::write_generators(out_path, rep);
      detail::note(ctx, "wrote " + std::to_string(rep.generators.size()) + " generators of size " +
                            std::to_string(rep.rep_dim) + " to " + out_path);
      return kSuccess;
    }
    if (cl_verify->parsed()) {
      const auto mats = artifacts::read_generators(in_dir);
      return detail::emit(ctx, "clifford verify", clifford::verify_clifford_relations(mats, ctx.tol));
    }
    if (ell_check->parsed()) {
      const auto e = detail::read_correlation(in_file, ctx);
      const auto ext = elliptope::check_extreme(e, ctx.tol);
      VerificationReport report("extremality");
      report.add_flag("extreme", ext.is_extreme);
      report.add_metric("rank_e", ext.rank_e);
      report.add_metric("rank_hadamard", ext.rank_hadamard);
      report.add_metric("required", ext.required);
      report.add_metric("hadamard_kept_ratio", ext.hadamard_kept_ratio);
      report.add_metric("hadamard_dropped_ratio", ext.hadamard_dropped_ratio);
      return detail::emit(ctx, "elliptope check-extreme", report,
                          {{"rank_e", ext.rank_e},
                           {"rank_hadamard", ext.rank_hadamard},
                           {"required", ext.required},
                           {"is_extreme", ext.is_extreme}});
    }
    if (ell_gen->parsed()) {
      const auto lex = elliptope::gen_extreme_lex(rank, ctx.tol);
      io::write_matrix(out_path, lex.matrix.matrix());
      if (!vectors_path.empty()) io::write_matrix(vectors_path, io::rows_to_matrix(lex.vectors));
      detail::note(ctx, "wrote " + std::to_string(lex.matrix.size()) + "x" +
                            std::to_string(lex.matrix.size()) + " extreme point to " + out_path);
      return kSuccess;
    }
    if (ell_rmax->parsed()) {
      out << elliptope::r_max(rmax_n) << '\n';
      return kSuccess;
    }
    if (fac_verify->parsed()) {
      const auto e = detail::read_correlation(in_file, ctx);
      if (mode == "b-form")
        return detail::emit(ctx, "factorize verify",
                            factorization::verify_form_b(e, artifacts::read_form_b(in_dir), ctx.tol));
      const auto gram_form =
          mode == "i" ? factorization::GramForm::KxYk : factorization::GramForm::KxKy;
      return detail::emit(ctx, "factorize verify",
                          factorization::verify_factorization(
                              e, artifacts::read_matrix_factorization(in_dir), gram_form, ctx.tol));
    }
    if (fac_identity->parsed()) {
      if (!ctx.seed) {
        err << "factorize clifford-identity requires --seed\n";
        return kUsage;
      }
      const RMatrix a = io::read_real_matrix(in_file);
      const auto mf = artifacts::read_matrix_factorization(in_dir);
      if (static_cast<Eigen::Index>(mf.x_mats.size()) != a.rows())
        throw Error(ErrorKind::ShapeMismatch, "A size must equal the number of X matrices");
      return detail::emit(ctx, "factorize clifford-identity",
                          factorization::verify_clifford_identity(a, mf.x_mats, trials, *ctx.seed,
                                                                  ctx.tol));
    }
    if (fac_cmd->parsed()) {
      if (in_file.empty() || out_path.empty()) {
        err << "factorize requires E and -o DIR\n";
        return kUsage;
      }
      const auto e = detail::read_correlation(in_file, ctx);
      const Eigen::Index n = split < 0 ? e.size() : static_cast<Eigen::Index>(split);
      const auto fb = factorization::factorize_clifford(e, n, ctx.tol);
      if (form == "b")
        artifacts::write_form_b(out_path, fb);
      else
        artifacts::write_matrix_factorization(out_path, factorization::to_form_c(fb));
      detail::note(ctx, "wrote form-" + form + " factorization of size " + std::to_string(fb.d) +
                            " to " + out_path);
      return kSuccess;
    }
    if (cp_build->parsed()) {
      const auto c = detail::read_correlation(in_file, ctx);
      io::write_matrix(out_path, cpsd::build_pc(c).entries);
      if (!factors_dir.empty())
        artifacts::write_cpsd_factorization(factors_dir, cpsd::build_cpsd_factorization(c, ctx.tol));
      detail::note(ctx, "wrote P_C to " + out_path);
      return kSuccess;
    }
    if (cp_verify->parsed()) {
      const RMatrix p = io::read_real_matrix(in_file);
      return detail::emit(ctx, "cpsd verify",
                          cpsd::verify_cpsd_factorization(
                              p, artifacts::read_cpsd_factorization(in_dir), ctx.tol));
    }
    if (cp_certify->parsed()) {
      const auto c = detail::read_correlation(in_file, ctx);
      const auto cert = cpsd::certify_lower_bound(c, ctx.tol);
      VerificationReport report("cpsd-rank-certificate");
      report.add_flag("extreme", cert.is_extreme);
      report.add_check("construction", cert.construction_deviation, ctx.tol.eq_tol);
      report.add_metric("rank_c", cert.rank_c);
      report.add_metric("construction_dim", cert.construction_dim);
      if (cert.lower_bound) report.add_metric("lower_bound", *cert.lower_bound);
      json extra = {{"rank_c", cert.rank_c},
                    {"is_extreme", cert.is_extreme},
                    {"construction_dim", cert.construction_dim}};
      extra["lower_bound"] = cert.lower_bound ? json(*cert.lower_bound) : json(nullptr);
      return detail::emit(ctx, "cpsd certify", report, extra);
    }
    if (cp_extract->parsed()) {
      const auto f = artifacts::read_cpsd_factorization(in_dir);
      const auto res = cpsd::extract_matrix_factorization(f, ctx.tol);
      artifacts::write_matrix_factorization(out_path, res.factorization);
      VerificationReport report("cpsd-extraction");
      double worst = 0.0;
      for (double v : res.involution_deviation) worst = std::max(worst, v);
      report.add_check("involutions", worst, ctx.tol.eq_tol);
      report.add_check("k-consistency", res.k_consistency, ctx.tol.eq_tol);
      report.add_metric("input_dim", static_cast<double>(res.input_dim));
      report.add_metric("support_dim", static_cast<double>(res.support_dim));
      return detail::emit(ctx, "cpsd extract", report,
                          {{"involution_deviation", res.involution_deviation},
                           {"max_square_eigenvalue", res.max_square_eigenvalue}});
    }
    if (q_rep->parsed()) {
      const auto c = elliptope::BipartiteCorrelation::validated(io::read_real_matrix(in_file), ctx.tol);
      elliptope::CSystem sys{io::read_row_vectors(gram_files[0]), io::read_row_vectors(gram_files[1])};
      const auto rep = quantum::build_tensor_rep(c, sys, ctx.tol);
      artifacts::write_tensor_rep(out_path, rep);
      detail::note(ctx, "wrote representation of local dimension " +
                            std::to_string(rep.local_dim) + " to " + out_path);
      return kSuccess;
    }
    if (q_eval->parsed()) {
      const auto rep = artifacts::read_tensor_rep(in_dir);
      const auto ev = quantum::eval_correlations(rep, ctx.tol);
      if (out_path.empty())
        out << io::matrix_to_json(ev.correlations.matrix()).dump(2) << '\n';
      else
        io::write_matrix(out_path, ev.correlations.matrix());
      return kSuccess;
    }
    if (q_reduce->parsed()) {
      const auto rep = artifacts::read_tensor_rep(in_dir);
      const auto reduced = quantum::reduce_rank_one_rep(rep, ctx.tol);
      artifacts::write_tensor_rep(out_path, reduced);
      detail::note(ctx, "reduced local dimension " + std::to_string(rep.local_dim) + " -> " +
                            std::to_string(reduced.local_dim));
      return kSuccess;
    }
  } catch (const io::FormatError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const json::exception& e) {
    err << "error: malformed file: " << e.what() << '\n';
    return kUsage;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kPrecondition;
  }
  err << app.help();
  return kUsage;
}

}  // namespace cpsdrank::cli
