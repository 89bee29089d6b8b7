// Acceptance suite: one PASS/FAIL line per criterion at pinned tolerances.
// Exits non-zero if any criterion fails.

#include "test_support.hpp"

#include "cpsdrank/cli.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>

namespace {

using namespace cpsdrank;
using namespace cpsdrank::testing;
namespace fs = std::filesystem;

struct Outcome {
  bool pass = true;
  std::string detail;

  // Records a named quantity that must satisfy `ok`.
  void expect(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Outcome clifford_relations() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0;
  for (int r = 1; r <= 10; ++r) {
    const auto rep = clifford::gamma_generators(r);
    const double dev = clifford::verify_clifford_relations(rep.generators).max_deviation();
    worst = std::max(worst, dev);
    o.expect(dev < 1e-12, "r=" + std::to_string(r) + " deviation " + fmt(dev));
    if (r >= 2) o.expect(rep.rep_dim == (1 << (r / 2)), "r=" + std::to_string(r) + " dimension");
  }
  const double secs = seconds_since(t0);
  o.expect(secs < 1.0, "runtime " + fmt(secs) + " s");
  if (o.pass) o.detail = "max deviation " + fmt(worst) + ", " + fmt(secs) + " s";
  return o;
}

Outcome gamma_trace_identity() {
  Outcome o;
  std::mt19937_64 rng(20240601);
  double trace_dev = 0.0;
  double square_dev = 0.0;
  for (int r = 1; r <= 8; ++r) {
    const auto rep = clifford::gamma_generators(r);
    const CMatrix id = CMatrix::Identity(rep.rep_dim, rep.rep_dim);
    for (int t = 0; t < 100; ++t) {
      const RVector x = random_real(r, rng);
      const RVector y = random_real(r, rng);
      const CMatrix gx = clifford::gamma_of_vector(rep, x);
      const CMatrix gy = clifford::gamma_of_vector(rep, y);
      trace_dev = std::max(trace_dev, std::abs(Complex(rep.rep_dim * x.dot(y)) - trace_product(gx, gy)));
      square_dev = std::max(square_dev, max_abs(gx * gx - x.squaredNorm() * id));
    }
  }
  o.expect(trace_dev < 1e-10, "trace deviation " + fmt(trace_dev));
  o.expect(square_dev < 1e-10, "square deviation " + fmt(square_dev));
  if (o.pass) o.detail = "trace " + fmt(trace_dev) + ", square " + fmt(square_dev);
  return o;
}

Outcome extremality() {
  Outcome o;
  const auto e3_rep = elliptope::check_extreme(e3());
  o.expect(e3_rep.is_extreme && e3_rep.rank_hadamard == 3, "E3");
  for (int r = 1; r <= 5; ++r) {
    const auto rep = elliptope::check_extreme(elliptope::gen_extreme_lex(r).matrix);
    o.expect(rep.is_extreme && rep.rank_hadamard == r * (r + 1) / 2, "lex r=" + std::to_string(r));
  }
  for (int n = 2; n <= 6; ++n)
    o.expect(!elliptope::check_extreme(identity_corr(n)).is_extreme, "I_" + std::to_string(n));
  int extreme = 0;
  for (int t = 0; t < 50; ++t) {
    const auto e = elliptope::random_correlation(3 + t % 6, 1 + t % 4, 7000 + t);
    if (elliptope::check_extreme(e).is_extreme) ++extreme;
  }
  if (o.pass) o.detail = "50 random points classified (" + std::to_string(extreme) + " extreme)";
  return o;
}

Outcome lemma_round_trip() {
  Outcome o;
  std::vector<elliptope::CorrelationMatrix> fixtures{identity_corr(2), identity_corr(4), e3()};
  for (int r = 2; r <= 5; ++r) fixtures.push_back(elliptope::gen_extreme_lex(r).matrix);
  for (int t = 0; t < 50; ++t) fixtures.push_back(elliptope::random_correlation(2 + t % 7, 1 + t % 5, 8100 + t));
  double worst = 0.0;
  for (const auto& e : fixtures) {
    const auto mf = factorization::to_form_c(factorization::factorize_clifford(e, e.size()));
    worst = std::max(worst, max_abs(factorization::recover_correlation(mf).matrix() - e.matrix()));
  }
  o.expect(worst < 1e-9, "deviation " + fmt(worst));
  if (o.pass) o.detail = std::to_string(fixtures.size()) + " fixtures, max deviation " + fmt(worst);
  return o;
}

Outcome cpsd_construction() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0;
  for (int r = 1; r <= 5; ++r) {
    const auto c = elliptope::gen_extreme_lex(r).matrix;
    const auto f = cpsd::build_cpsd_factorization(c);
    const double dev = cpsd::verify_cpsd_factorization(cpsd::build_pc(c).entries, f).max_deviation();
    worst = std::max(worst, dev);
    const std::string tag = "r=" + std::to_string(r);
    o.expect(dev < 1e-10, tag + " deviation " + fmt(dev));
    o.expect(f.dim == (r == 1 ? 2 : 1 << (r / 2)), tag + " dimension " + std::to_string(f.dim));
    if (r >= 2) {
      const auto cert = cpsd::certify_lower_bound(c);
      o.expect(cert.lower_bound == std::optional<int>(1 << (r / 2)) && cert.construction_dim == *cert.lower_bound,
               tag + " bound");
    }
  }
  const double secs = seconds_since(t0);
  o.expect(secs < 5.0, "runtime " + fmt(secs) + " s");
  if (o.pass) o.detail = "bound attained for r=2..5, max deviation " + fmt(worst) + ", " + fmt(secs) + " s";
  return o;
}

Outcome clifford_identity() {
  Outcome o;
  struct Fixture {
    std::string name;
    elliptope::CorrelationMatrix e;
    int lead;
  };
  std::vector<Fixture> fixtures{{"E3", e3(), 2}};
  for (int r = 2; r <= 5; ++r) fixtures.push_back({"lex" + std::to_string(r), elliptope::gen_extreme_lex(r).matrix, r});
  double id_dev = 0.0;
  double pair_dev = 0.0;
  for (const auto& fx : fixtures) {
    const RMatrix a = fx.e.matrix().topLeftCorner(fx.lead, fx.lead);
    if (psd_rank_by_eigenvalues(a) != fx.lead) {
      o.expect(false, fx.name + " leading block is singular");
      continue;
    }
    const auto mf = factorization::to_form_c(factorization::factorize_clifford(fx.e, fx.lead));
    const auto rep = factorization::verify_clifford_identity(a, mf.x_mats, 100, 1234);
    id_dev = std::max(id_dev, rep.find_check("random-identity")->deviation);
    pair_dev = std::max(pair_dev, rep.find_check("anticommutators")->deviation);
  }
  o.expect(id_dev < 1e-9, "identity deviation " + fmt(id_dev));
  o.expect(pair_dev < 1e-10, "anticommutator deviation " + fmt(pair_dev));
  if (o.pass) o.detail = "identity " + fmt(id_dev) + ", anticommutators " + fmt(pair_dev);
  return o;
}

Outcome cpsd_extraction() {
  Outcome o;
  const auto f = cpsd::build_cpsd_factorization(e3());
  const auto ex = cpsd::extract_matrix_factorization(f);
  const auto& mf = ex.factorization;
  double invol = 0.0;
  for (double v : ex.involution_deviation) invol = std::max(invol, v);
  o.expect(invol < 1e-10, "involutions " + fmt(invol));
  const double k_min = linalg::min_eigenvalue(mf.k);
  o.expect(k_min > 0.0, "K not positive definite");
  const double trace_dev = std::abs((mf.k * mf.k).trace().real() - 1.0);
  o.expect(trace_dev < 1e-10, "Tr K^2 deviation " + fmt(trace_dev));
  RMatrix big(6, 6);
  big << e3_matrix(), e3_matrix(), e3_matrix(), e3_matrix();
  const double rec = max_abs(factorization::recover_correlation(mf).matrix() - big);
  o.expect(rec < 1e-9, "doubled completion " + fmt(rec));

  cpsd::CpsdFactorization padded{f.n, 4, {}};
  for (const auto& pair : f.mats) {
    std::array<CMatrix, 2> p;
    for (std::size_t s = 0; s < 2; ++s) {
      p[s] = CMatrix::Zero(4, 4);
      p[s].topLeftCorner(2, 2) = pair[s];
    }
    padded.mats.push_back(p);
  }
  const auto ex2 = cpsd::extract_matrix_factorization(padded);
  double diff = max_abs(ex2.factorization.k - mf.k);
  for (std::size_t i = 0; i < mf.x_mats.size(); ++i)
    diff = std::max(diff, max_abs(ex2.factorization.x_mats[i] - mf.x_mats[i]));
  o.expect(ex2.support_dim == 2 && diff < 1e-10, "zero-padded input differs by " + fmt(diff));
  if (o.pass) o.detail = "involutions " + fmt(invol) + ", completion " + fmt(rec) + ", padded diff " + fmt(diff);
  return o;
}

Outcome quantum_round_trip() {
  Outcome o;
  const auto c = elliptope::BipartiteCorrelation::validated(chsh_matrix());
  const auto rep = quantum::build_tensor_rep(c, chsh_system());
  const double dev = max_abs(quantum::eval_correlations(rep).correlations.matrix() - chsh_matrix());
  o.expect(dev < 1e-12, "CHSH deviation " + fmt(dev));
  o.expect(rep.local_dim == 2, "local dimension " + std::to_string(rep.local_dim));

  quantum::TensorProductRep padded;
  padded.local_dim = 4;
  const auto pad = [](const CMatrix& h) {
    CMatrix m = CMatrix::Zero(4, 4);
    m.topLeftCorner(2, 2) = h;
    return m;
  };
  for (const auto& h : rep.m_obs) padded.m_obs.push_back(pad(h));
  for (const auto& h : rep.n_obs) padded.n_obs.push_back(pad(h));
  padded.state = linalg::vec(pad(linalg::vec_inv(std::get<CVector>(rep.state), 2)));
  const auto red = quantum::reduce_rank_one_rep(padded);
  o.expect(red.local_dim == 2, "reduced local dimension " + std::to_string(red.local_dim));
  const double red_dev = max_abs(quantum::eval_correlations(red).correlations.matrix() - chsh_matrix());
  o.expect(red_dev < 1e-10, "reduced deviation " + fmt(red_dev));
  for (const auto* family : {&red.m_obs, &red.n_obs})
    for (const auto& h : *family) o.expect(quantum::check_observable(h).ok, "reduced observable spectrum");
  if (o.pass) o.detail = "d=2 deviation " + fmt(dev) + ", reduced 4->2 deviation " + fmt(red_dev);
  return o;
}

Outcome completion_uniqueness() {
  Outcome o;
  std::mt19937_64 rng(99991);
  const RMatrix q = random_orthogonal(3, rng);
  elliptope::CSystem rotated;
  const auto lift = [&](const RVector& v) {
    RVector e = RVector::Zero(3);
    e.head(2) = v;
    return RVector(q * e);
  };
  for (const auto& u : chsh_system().us) rotated.us.push_back(lift(u));
  for (const auto& v : chsh_system().vs) rotated.vs.push_back(lift(v));
  const auto c = elliptope::BipartiteCorrelation::validated(chsh_matrix());
  o.expect(elliptope::verify_c_system(c, rotated).passed(), "rotated copy is not a C-system");
  const double dev = max_abs(elliptope::complete(chsh_system()).matrix() - elliptope::complete(rotated).matrix());
  o.expect(dev < 1e-9, "completions differ by " + fmt(dev));
  if (o.pass) o.detail = "completions agree within " + fmt(dev);
  return o;
}

Outcome span_counterexample() {
  Outcome o;
  const auto lex = elliptope::gen_extreme_lex(3);
  std::vector<RVector> cols;
  for (std::size_t k = 0; k < lex.labels.size(); ++k)
    if (lex.labels[k].first >= 2) cols.push_back(lex.vectors[k]);
  const double dist = elliptope::distance_to_span(basis(0, 3), cols);
  o.expect(cols.size() == 3, "expected three columns");
  o.expect(dist > 0.9, "distance " + fmt(dist));
  o.expect(elliptope::check_extreme(lex.matrix).is_extreme, "full matrix not extreme");
  if (o.pass) o.detail = "distance of e_1 from span " + fmt(dist) + ", full matrix extreme";
  return o;
}

Outcome cli_pipeline() {
  Outcome o;
  const fs::path dir = fs::temp_directory_path() / "cpsdrank_acceptance_cli";
  fs::remove_all(dir);
  const auto p = [&](const char* name) { return (dir / name).string(); };
  std::ostringstream out;
  std::ostringstream err;
  const auto stage = [&](const std::string& name, std::vector<std::string> args) {
    const int code = cli::run(args, out, err);
    o.expect(code == 0, name + " exited " + std::to_string(code) + ": " + err.str());
    return code == 0;
  };
  fs::create_directories(dir);
  if (stage("gen-extreme", {"elliptope", "gen-extreme", "-r", "3", "-o", p("c.json")}) &&
      stage("build-pc", {"cpsd", "build-pc", p("c.json"), "-o", p("p.json"), "--factors", p("f")}) &&
      stage("verify", {"--report", p("verify.json"), "cpsd", "verify", p("p.json"), p("f")}) &&
      stage("certify", {"--report", p("certify.json"), "cpsd", "certify", p("c.json")})) {
    const auto verify = io::read_json(p("verify.json"));
    const auto certify = io::read_json(p("certify.json"));
    const double dev = verify["max_deviation"].get<double>();
    o.expect(dev < 1e-10, "verify max_deviation " + fmt(dev));
    const double cdev = certify["max_deviation"].get<double>();
    o.expect(cdev < 1e-10, "certify max_deviation " + fmt(cdev));
    o.expect(certify["lower_bound"] == 2, "lower_bound " + certify["lower_bound"].dump());
    if (o.pass) o.detail = "all stages exit 0, max_deviation " + fmt(dev) + ", lower_bound 2";
  }
  fs::remove_all(dir);
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"clifford-relations", clifford_relations},
      {"gamma-trace-identity", gamma_trace_identity},
      {"extremality-test", extremality},
      {"factorization-round-trip", lemma_round_trip},
      {"cpsd-construction", cpsd_construction},
      {"clifford-identity", clifford_identity},
      {"cpsd-extraction", cpsd_extraction},
      {"quantum-round-trip", quantum_round_trip},
      {"completion-uniqueness", completion_uniqueness},
      {"span-counterexample", span_counterexample},
      {"cli-end-to-end", cli_pipeline},
  };
  int failures = 0;
  int index = 0;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::printf("[%2d] %-26s %s  %s\n", ++index, name.c_str(), o.pass ? "PASS" : "FAIL", o.detail.c_str());
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
