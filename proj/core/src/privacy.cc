// Copyright 2026 The pkpram Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "pkpram/privacy.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "pkpram/status_macros.h"

namespace pkpram {
namespace {

absl::Status CheckRecordCount(double record_count) {
  if (!(record_count >= 1.0) || !std::isfinite(record_count)) {
    return absl::InvalidArgumentError(absl::StrCat(
        "empty table: record count must be at least 1, got ", record_count));
  }
  return absl::OkStatus();
}

absl::Status CheckDomains(std::span<const size_t> domains,
                          const RetentionProfile& rhos) {
  if (domains.size() != rhos.size()) {
    return absl::InvalidArgumentError(
        absl::StrCat("length mismatch: ", domains.size(), " domains, ",
                     rhos.size(), " retention probabilities"));
  }
  for (size_t d : domains) {
    if (d == 0) return absl::InvalidArgumentError("domain size must be positive");
  }
  return absl::OkStatus();
}

absl::Status CheckSolverDomains(std::span<const size_t> domains) {
  if (domains.empty()) {
    return absl::InvalidArgumentError("at least one attribute domain required");
  }
  for (size_t d : domains) {
    if (d == 0) return absl::InvalidArgumentError("domain size must be positive");
  }
  return absl::OkStatus();
}

// Heart of both solvers. `safe(rho)` is true on [0, rho*] and false beyond,
// i.e. the guarantee holds for small retention. Returns the lower end of the
// final bracket.
double BisectSafeBoundary(const std::function<double(double)>& f,
                          double target, bool decreasing, double lo, double hi,
                          const BisectionOptions& options) {
  auto safe = [&](double value) {
    return decreasing ? value >= target : value <= target;
  };
  for (int iter = 0; iter < options.max_iterations; ++iter) {
    if (hi - lo <= options.width_tolerance &&
        std::abs(f(lo) - target) <= 1e-12 * std::abs(target)) {
      break;
    }
    const double mid = lo + 0.5 * (hi - lo);  // 1/2 on the first step
    if (mid <= lo || mid >= hi) break;
    if (safe(f(mid))) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

double UniformRrpK(double rho, double record_count,
                   std::span<const size_t> domains) {
  double ratio = 1.0;
  for (size_t m : domains) ratio *= RrpAnonymityRatio(m, rho);
  return 1.0 + (record_count - 1.0) * ratio;
}

double UniformRrpEps(double rho, std::span<const size_t> domains) {
  double eps = 0.0;
  for (size_t m : domains) {
    if (m < 2) continue;
    eps += std::log((1.0 + (static_cast<double>(m) - 1.0) * rho) / (1.0 - rho));
  }
  return eps;
}

}  // namespace

double PrivacyBudget::value() const {
  return epsilon_.value_or(std::numeric_limits<double>::infinity());
}

std::string PrivacyBudget::ToString() const {
  if (unbounded()) return "Unbounded";
  return absl::StrFormat("%.12g", *epsilon_);
}

PrivacyBudget operator+(const PrivacyBudget& a, const PrivacyBudget& b) {
  if (a.unbounded() || b.unbounded()) return PrivacyBudget::Unbounded();
  return PrivacyBudget::Finite(a.value() + b.value());
}

absl::StatusOr<double> AnonymityRatio(const TransitionMatrix& matrix) {
  if (!matrix.strictly_positive()) {
    return absl::FailedPreconditionError(
        "zero entry: the anonymity ratio needs a strictly positive matrix");
  }
  // ratio(u, v, u', v') = (A[u][v'] / A[u][u']) * (A[v][u'] / A[v][v']), and
  // the two factors are independent given (u', v').
  const size_t m = matrix.domain_size();
  double best = 1.0;
  for (size_t up = 0; up < m; ++up) {
    for (size_t vp = 0; vp < m; ++vp) {
      if (up == vp) continue;
      double first = std::numeric_limits<double>::infinity();
      double second = std::numeric_limits<double>::infinity();
      for (size_t u = 0; u < m; ++u) {
        first = std::min(first, matrix(u, vp) / matrix(u, up));
        second = std::min(second, matrix(u, up) / matrix(u, vp));
      }
      best = std::min(best, first * second);
    }
  }
  return best;
}

double RrpAnonymityRatio(size_t domain_size, double rho) {
  // A one-value domain carries no information whatever rho is.
  if (domain_size < 2) return 1.0;
  const double ratio =
      (1.0 - rho) / (1.0 + (static_cast<double>(domain_size) - 1.0) * rho);
  return ratio * ratio;
}

absl::StatusOr<AnonymityLevel> KFromMatrix(const TransitionMatrix& matrix,
                                           double record_count) {
  PKPRAM_RETURN_IF_ERROR(CheckRecordCount(record_count));
  PKPRAM_ASSIGN_OR_RETURN(double ratio, AnonymityRatio(matrix));
  return AnonymityLevel{1.0 + (record_count - 1.0) * ratio};
}

absl::StatusOr<AnonymityLevel> KFromMatrixSet(const AttributeMatrixSet& set,
                                              double record_count) {
  PKPRAM_RETURN_IF_ERROR(CheckRecordCount(record_count));
  double product = 1.0;
  for (const TransitionMatrix& matrix : set.matrices()) {
    PKPRAM_ASSIGN_OR_RETURN(double ratio, AnonymityRatio(matrix));
    product *= ratio;
  }
  return AnonymityLevel{1.0 + (record_count - 1.0) * product};
}

absl::StatusOr<AnonymityLevel> KFromRrp(std::span<const size_t> domains,
                                        const RetentionProfile& rhos,
                                        double record_count) {
  PKPRAM_RETURN_IF_ERROR(CheckRecordCount(record_count));
  PKPRAM_RETURN_IF_ERROR(CheckDomains(domains, rhos));
  double product = 1.0;
  for (size_t a = 0; a < domains.size(); ++a) {
    product *= RrpAnonymityRatio(domains[a], rhos[a]);
  }
  return AnonymityLevel{1.0 + (record_count - 1.0) * product};
}

PrivacyBudget EpsFromMatrix(const TransitionMatrix& matrix) {
  const size_t m = matrix.domain_size();
  double worst = 1.0;
  for (size_t vp = 0; vp < m; ++vp) {
    double hi = 0.0;
    double lo = std::numeric_limits<double>::infinity();
    for (size_t u = 0; u < m; ++u) {
      hi = std::max(hi, matrix(u, vp));
      lo = std::min(lo, matrix(u, vp));
    }
    if (hi == 0.0) continue;  // unreachable output value
    if (lo == 0.0) return PrivacyBudget::Unbounded();
    worst = std::max(worst, hi / lo);
  }
  return PrivacyBudget::Finite(std::log(worst));
}

PrivacyBudget EpsFromMatrixSet(const AttributeMatrixSet& set) {
  PrivacyBudget total = PrivacyBudget::Finite(0.0);
  for (const TransitionMatrix& matrix : set.matrices()) {
    total = total + EpsFromMatrix(matrix);
  }
  return total;
}

absl::StatusOr<PrivacyBudget> EpsFromRrp(std::span<const size_t> domains,
                                         const RetentionProfile& rhos) {
  PKPRAM_RETURN_IF_ERROR(CheckDomains(domains, rhos));
  double eps = 0.0;
  for (size_t a = 0; a < domains.size(); ++a) {
    if (domains[a] < 2) continue;
    if (rhos[a] >= 1.0) return PrivacyBudget::Unbounded();
    eps += std::log((1.0 + (static_cast<double>(domains[a]) - 1.0) * rhos[a]) /
                    (1.0 - rhos[a]));
  }
  return PrivacyBudget::Finite(eps);
}

KAnonymityCheck CheckKAnonymity(const Table& table, size_t k) {
  KAnonymityCheck check;
  check.multiplicities = table.Multiplicities();
  const size_t n = table.record_count();
  check.min_multiplicity = n == 0 ? 0 : n;
  for (size_t r = 0; r < n; ++r) {
    std::span<const uint32_t> view = table.row(r);
    const size_t count =
        check.multiplicities.at(ValueTuple(view.begin(), view.end()));
    check.min_multiplicity = std::min(check.min_multiplicity, count);
    if (count < k) check.violating_records.push_back(r);
  }
  check.satisfied = check.violating_records.empty();
  return check;
}

absl::StatusOr<double> SolveRhoFromK(double k_target, double record_count,
                                     std::span<const size_t> domains,
                                     const BisectionOptions& options) {
  PKPRAM_RETURN_IF_ERROR(CheckRecordCount(record_count));
  PKPRAM_RETURN_IF_ERROR(CheckSolverDomains(domains));
  if (!(k_target >= 1.0) || k_target > record_count) {
    return absl::InvalidArgumentError(absl::StrCat(
        "infeasible: k = ", k_target, " must lie in [1, ", record_count, "]"));
  }
  auto k_of = [&](double rho) { return UniformRrpK(rho, record_count, domains); };
  if (k_of(1.0) >= k_target) return 1.0;
  return BisectSafeBoundary(k_of, k_target, /*decreasing=*/true, 0.0, 1.0,
                            options);
}

absl::StatusOr<double> SolveRhoFromEps(double eps_target,
                                       std::span<const size_t> domains,
                                       const BisectionOptions& options) {
  PKPRAM_RETURN_IF_ERROR(CheckSolverDomains(domains));
  if (!(eps_target > 0.0) || !std::isfinite(eps_target)) {
    return absl::InvalidArgumentError(absl::StrCat(
        "invalid target: epsilon must be positive and finite, got ",
        eps_target));
  }
  constexpr double kUpper = 1.0 - 1e-15;
  auto eps_of = [&](double rho) { return UniformRrpEps(rho, domains); };
  if (eps_of(kUpper) <= eps_target) return kUpper;
  return BisectSafeBoundary(eps_of, eps_target, /*decreasing=*/false, 0.0,
                            kUpper, options);
}

absl::StatusOr<CombinedSolution> SolveRhoCombined(
    double k_target, double eps_target, double record_count,
    std::span<const size_t> domains, const BisectionOptions& options) {
  CombinedSolution solution;
  PKPRAM_ASSIGN_OR_RETURN(solution.rho_k, SolveRhoFromK(k_target, record_count,
                                                        domains, options));
  PKPRAM_ASSIGN_OR_RETURN(solution.rho_eps,
                          SolveRhoFromEps(eps_target, domains, options));
  solution.rho = std::min(solution.rho_k, solution.rho_eps);
  return solution;
}

absl::StatusOr<PrivacyReport> ReportForRrp(const TableSchema& schema,
                                           const RetentionProfile& rhos,
                                           double record_count) {
  const std::vector<size_t> domains = schema.DomainSizes();
  PrivacyReport report;
  PKPRAM_ASSIGN_OR_RETURN(report.k, KFromRrp(domains, rhos, record_count));
  PKPRAM_ASSIGN_OR_RETURN(report.epsilon, EpsFromRrp(domains, rhos));
  report.record_count = record_count;
  report.attributes = schema.AttributeNames();
  for (size_t a = 0; a < domains.size(); ++a) {
    report.anonymity_ratios.push_back(RrpAnonymityRatio(domains[a], rhos[a]));
  }
  report.rhos = rhos.values();
  return report;
}

absl::StatusOr<PrivacyReport> ReportForMatrixSet(const AttributeMatrixSet& set,
                                                 double record_count) {
  PrivacyReport report;
  PKPRAM_ASSIGN_OR_RETURN(report.k, KFromMatrixSet(set, record_count));
  report.epsilon = EpsFromMatrixSet(set);
  report.record_count = record_count;
  report.attributes = set.schema().AttributeNames();
  for (const TransitionMatrix& matrix : set.matrices()) {
    PKPRAM_ASSIGN_OR_RETURN(double ratio, AnonymityRatio(matrix));
    report.anonymity_ratios.push_back(ratio);
  }
  return report;
}

}  // namespace pkpram
