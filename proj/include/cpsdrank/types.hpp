#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <complex>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace cpsdrank {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

/// Thresholds shared by every numerical test in the library.
///
/// `eq_tol` bounds entrywise equality, `psd_tol` bounds how negative an
/// eigenvalue may be before a matrix stops counting as psd, and `rank_tol`
/// is the relative singular-value cutoff used for numerical rank.
struct Tolerances {
  double eq_tol = 1e-10;
  double psd_tol = 1e-9;
  double rank_tol = 1e-9;
};

enum class ErrorKind {
  NonSquare,
  LengthMismatch,
  DimensionMismatch,
  ShapeMismatch,
  SizeMismatch,
  NotHermitian,
  NotSymmetric,
  NotPsd,
  NotCorrelation,
  NonUnitVector,
  SingularA,
  InvariantViolation,
  InconsistentK,
  ZeroK,
  NotRankOne,
  CSystemMismatch,
  InvalidArgument,
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NonSquare: return "NonSquare";
    case ErrorKind::LengthMismatch: return "LengthMismatch";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ErrorKind::SizeMismatch: return "SizeMismatch";
    case ErrorKind::NotHermitian: return "NotHermitian";
    case ErrorKind::NotSymmetric: return "NotSymmetric";
    case ErrorKind::NotPsd: return "NotPsd";
    case ErrorKind::NotCorrelation: return "NotCorrelation";
    case ErrorKind::NonUnitVector: return "NonUnitVector";
    case ErrorKind::SingularA: return "SingularA";
    case ErrorKind::InvariantViolation: return "InvariantViolation";
    case ErrorKind::InconsistentK: return "InconsistentK";
    case ErrorKind::ZeroK: return "ZeroK";
    case ErrorKind::NotRankOne: return "NotRankOne";
    case ErrorKind::CSystemMismatch: return "CSystemMismatch";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

/// Precondition or invariant failure raised by library operations.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

struct CheckResult {
  std::string name;
  double deviation = 0.0;
  double threshold = 0.0;
  bool passed = false;
};

/// Outcome of a verifier: a list of named checks plus numeric diagnostics.
/// The report passes iff every check passes.
class VerificationReport {
 public:
  VerificationReport() = default;
  explicit VerificationReport(std::string subject) : subject_(std::move(subject)) {}

  /// Records a check that passes iff `deviation <= threshold`.
  void add_check(std::string name, double deviation, double threshold) {
    const bool ok = deviation <= threshold;
    checks_.push_back({std::move(name), deviation, threshold, ok});
  }

  /// Records a boolean check with no numeric deviation.
  void add_flag(std::string name, bool ok) {
    checks_.push_back({std::move(name), ok ? 0.0 : 1.0, 0.0, ok});
  }

  void add_metric(std::string name, double value) {
    metrics_.emplace_back(std::move(name), value);
  }

  bool passed() const {
    return std::all_of(checks_.begin(), checks_.end(),
                       [](const CheckResult& c) { return c.passed; });
  }

  double max_deviation() const {
    double worst = 0.0;
    for (const auto& c : checks_) worst = std::max(worst, c.deviation);
    return worst;
  }

  const CheckResult* find_check(std::string_view name) const {
    for (const auto& c : checks_)
      if (c.name == name) return &c;
    return nullptr;
  }

  /// Value of a named metric; throws if the metric was never recorded.
  double metric(std::string_view name) const {
    for (const auto& [key, value] : metrics_)
      if (key == name) return value;
    throw Error(ErrorKind::InvalidArgument, "no metric named " + std::string(name));
  }

  const std::string& subject() const { return subject_; }
  const std::vector<CheckResult>& checks() const { return checks_; }
  const std::vector<std::pair<std::string, double>>& metrics() const { return metrics_; }

 private:
  std::string subject_;
  std::vector<CheckResult> checks_;
  std::vector<std::pair<std::string, double>> metrics_;
};

}  // namespace cpsdrank
