#pragma once

// JSON matrix files, factorization directory manifests and report files.
//
// A matrix file is
//   {"rows": R, "cols": C, "complex": false, "data": [x, ...]}
// with row-major data; complex files store each entry as [re, im].
// Directories hold one matrix file per factor plus manifest.json naming
// each file's role and indices.

#include "cpsdrank/types.hpp"

#include "json.hpp"

#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

namespace cpsdrank::io {

namespace fs = std::filesystem;
using nlohmann::json;

/// Malformed or unreadable input file.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr const char* kManifestName = "manifest.json";
inline constexpr const char* kPcBlockOrder =
    "i-major; row/col 2(i-1) holds a=+1 and 2(i-1)+1 holds a=-1 (1-based i)";

inline json matrix_to_json(const CMatrix& m) {
  const bool is_complex = (m.imag().array() != 0.0).any();
  json data = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (is_complex)
        data.push_back(json::array({m(i, j).real(), m(i, j).imag()}));
      else
        data.push_back(m(i, j).real());
    }
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"complex", is_complex}, {"data", std::move(data)}};
}

inline json matrix_to_json(const RMatrix& m) { return matrix_to_json(CMatrix(m.cast<Complex>())); }

namespace detail {

inline double finite_number(const json& v, const std::string& where) {
  if (!v.is_number()) throw FormatError(where + ": expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw FormatError(where + ": non-finite number");
  return x;
}

inline std::string line_col(std::string_view text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t col = 1;
  for (std::size_t k = 0; k < byte && k < text.size(); ++k) {
    if (text[k] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return std::to_string(line) + ":" + std::to_string(col);
}

}  // namespace detail

/// Parses JSON text, reporting syntax errors as source:line:column.
inline json parse_json(std::string_view text, const std::string& source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    const std::size_t byte = e.byte > 0 ? e.byte - 1 : 0;
    throw FormatError(source + ":" + detail::line_col(text, byte) + ": invalid JSON");
  } catch (const json::exception& e) {
    // e.g. out_of_range for numbers that overflow a double
    throw FormatError(source + ": " + e.what());
  }
}

inline CMatrix matrix_from_json(const json& j, const std::string& source) {
  if (!j.is_object()) throw FormatError(source + ": matrix file must be a JSON object");
  for (const char* key : {"rows", "cols", "data"})
    if (!j.contains(key)) throw FormatError(source + ": missing field '" + key + "'");
  if (!j["rows"].is_number_integer() || !j["cols"].is_number_integer())
    throw FormatError(source + ": rows and cols must be integers");
  const auto rows = j["rows"].get<long long>();
  const auto cols = j["cols"].get<long long>();
  if (rows < 1 || cols < 1) throw FormatError(source + ": rows and cols must be positive");
  const bool is_complex = j.value("complex", false);
  const json& data = j["data"];
  if (!data.is_array() || static_cast<long long>(data.size()) != rows * cols)
    throw FormatError(source + ": data must hold rows*cols = " + std::to_string(rows * cols) +
                      " entries");
  CMatrix m(rows, cols);
  for (long long k = 0; k < rows * cols; ++k) {
    const json& v = data[static_cast<std::size_t>(k)];
    const std::string where = source + ": data[" + std::to_string(k) + "]";
    if (is_complex) {
      if (!v.is_array() || v.size() != 2) throw FormatError(where + ": expected [re, im]");
      m(k / cols, k % cols) = Complex(detail::finite_number(v[0], where),
                                      detail::finite_number(v[1], where));
    } else {
      m(k / cols, k % cols) = detail::finite_number(v, where);
    }
  }
  return m;
}

inline std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError(path.string() + ": cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline void write_json(const fs::path& path, const json& j) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError(path.string() + ": cannot write file");
  out << j.dump(2) << '\n';
}

inline json read_json(const fs::path& path) { return parse_json(read_text(path), path.string()); }

inline CMatrix read_matrix(const fs::path& path) {
  return matrix_from_json(read_json(path), path.string());
}

/// Reads a matrix that must have zero imaginary parts.
inline RMatrix read_real_matrix(const fs::path& path) {
  const CMatrix m = read_matrix(path);
  if ((m.imag().array() != 0.0).any())
    throw FormatError(path.string() + ": expected a real matrix");
  return m.real();
}

template <typename M>
void write_matrix(const fs::path& path, const M& m) {
  write_json(path, matrix_to_json(CMatrix(m.template cast<Complex>())));
}

/// Rows of a matrix file as vectors.
inline std::vector<RVector> read_row_vectors(const fs::path& path) {
  const RMatrix m = read_real_matrix(path);
  std::vector<RVector> out;
  for (Eigen::Index i = 0; i < m.rows(); ++i) out.emplace_back(m.row(i).transpose());
  return out;
}

inline RMatrix rows_to_matrix(std::span<const RVector> rows) {
  if (rows.empty()) return {};
  RMatrix m(static_cast<Eigen::Index>(rows.size()), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) m.row(static_cast<Eigen::Index>(i)) = rows[i].transpose();
  return m;
}

struct ManifestEntry {
  std::string role;
  int i = 0;  // 1-based; 0 when the role has a single matrix
  int a = 0;  // outcome ±1 for cpsd factors, else 0
  std::string file;
};

/// Directory of factor matrices with a manifest of their roles.
struct Manifest {
  std::string kind;
  json attributes = json::object();
  std::vector<ManifestEntry> entries;

  std::vector<const ManifestEntry*> with_role(std::string_view role) const {
    std::vector<const ManifestEntry*> out;
    for (const auto& e : entries)
      if (e.role == role) out.push_back(&e);
    std::stable_sort(out.begin(), out.end(), [](const auto* x, const auto* y) {
      return x->i != y->i ? x->i < y->i : x->a > y->a;
    });
    return out;
  }
};

/// Collects matrices and writes them together with manifest.json.
class DirectoryWriter {
 public:
  DirectoryWriter(fs::path dir, std::string kind) : dir_(std::move(dir)) {
    manifest_.kind = std::move(kind);
  }

  void set(const std::string& key, json value) { manifest_.attributes[key] = std::move(value); }

  template <typename M>
  void add(const std::string& role, int i, int a, const M& m) {
    std::string file = role;
    if (i > 0) file += "_" + std::to_string(i);
    if (a != 0) file += a > 0 ? "_plus" : "_minus";
    file += ".json";
    fs::create_directories(dir_);
    write_matrix(dir_ / file, m);
    manifest_.entries.push_back({role, i, a, file});
  }

  void finish() const {
    json j = manifest_.attributes;
    j["kind"] = manifest_.kind;
    json entries = json::array();
    for (const auto& e : manifest_.entries) {
      json item = {{"role", e.role}, {"file", e.file}};
      if (e.i > 0) item["i"] = e.i;
      if (e.a != 0) item["a"] = e.a;
      entries.push_back(std::move(item));
    }
    j["entries"] = std::move(entries);
    fs::create_directories(dir_);
    write_json(dir_ / kManifestName, j);
  }

 private:
  fs::path dir_;
  Manifest manifest_;
};

inline Manifest read_manifest(const fs::path& dir) {
  const fs::path path = dir / kManifestName;
  const json j = read_json(path);
  const std::string source = path.string();
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string())
    throw FormatError(source + ": manifest needs a string 'kind'");
  if (!j.contains("entries") || !j["entries"].is_array())
    throw FormatError(source + ": manifest needs an 'entries' array");
  Manifest m;
  m.kind = j["kind"].get<std::string>();
  for (const auto& [key, value] : j.items())
    if (key != "kind" && key != "entries") m.attributes[key] = value;
  for (const auto& e : j["entries"]) {
    if (!e.is_object() || !e.contains("role") || !e.contains("file") || !e["role"].is_string() ||
        !e["file"].is_string())
      throw FormatError(source + ": every entry needs string 'role' and 'file'");
    ManifestEntry entry;
    entry.role = e["role"].get<std::string>();
    entry.file = e["file"].get<std::string>();
    entry.i = e.value("i", 0);
    entry.a = e.value("a", 0);
    m.entries.push_back(std::move(entry));
  }
  return m;
}

inline void expect_kind(const Manifest& m, std::initializer_list<std::string_view> kinds,
                        const fs::path& dir) {
  for (auto k : kinds)
    if (m.kind == k) return;
  throw FormatError((dir / kManifestName).string() + ": unexpected manifest kind '" + m.kind + "'");
}

inline std::vector<CMatrix> read_role(const fs::path& dir, const Manifest& m, std::string_view role) {
  std::vector<CMatrix> out;
  for (const auto* e : m.with_role(role)) out.push_back(read_matrix(dir / e->file));
  return out;
}

inline CMatrix read_single(const fs::path& dir, const Manifest& m, std::string_view role) {
  const auto found = m.with_role(role);
  if (found.size() != 1)
    throw FormatError((dir / kManifestName).string() + ": expected exactly one '" +
                      std::string(role) + "' entry");
  return read_matrix(dir / found.front()->file);
}

/// JSON report: command, pass, max_deviation, details, metrics,
/// tolerances and seed (null when absent).
inline json report_to_json(const std::string& command, const VerificationReport& report,
                           const Tolerances& tol, std::optional<std::uint64_t> seed) {
  json details = json::array();
  for (const auto& c : report.checks())
    details.push_back(
        {{"name", c.name}, {"value", c.deviation}, {"threshold", c.threshold}, {"pass", c.passed}});
  json metrics = json::object();
  for (const auto& [k, v] : report.metrics()) metrics[k] = v;
  json j = {{"command", command},
            {"pass", report.passed()},
            {"max_deviation", report.max_deviation()},
            {"details", std::move(details)},
            {"metrics", std::move(metrics)},
            {"tolerances",
             {{"eq_tol", tol.eq_tol}, {"psd_tol", tol.psd_tol}, {"rank_tol", tol.rank_tol}}}};
  j["seed"] = seed ? json(*seed) : json(nullptr);
  return j;
}

}  // namespace cpsdrank::io
