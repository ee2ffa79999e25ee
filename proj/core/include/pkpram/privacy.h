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

#ifndef PKPRAM_PRIVACY_H_
#define PKPRAM_PRIVACY_H_

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "pkpram/tabular.h"
#include "pkpram/transition.h"

namespace pkpram {

// Pk-anonymity level. Real valued; any k' <= k is satisfied as well.
struct AnonymityLevel {
  double k = 1.0;
};

// epsilon of epsilon-DP, or unbounded when some output value is reachable
// from one input value and unreachable from another.
class PrivacyBudget {
 public:
  static PrivacyBudget Finite(double epsilon) { return PrivacyBudget(epsilon); }
  static PrivacyBudget Unbounded() { return PrivacyBudget(std::nullopt); }

  bool unbounded() const { return !epsilon_.has_value(); }
  // Infinity when unbounded.
  double value() const;
  // "Unbounded" or the value with 12 significant digits.
  std::string ToString() const;

 private:
  explicit PrivacyBudget(std::optional<double> epsilon) : epsilon_(epsilon) {}
  std::optional<double> epsilon_;
};

PrivacyBudget operator+(const PrivacyBudget& a, const PrivacyBudget& b);

// Anonymity ratio of one matrix:
//   min over u, v, u', v' of A[u][v'] A[v][u'] / (A[u][u'] A[v][v']).
// Fails with "zero entry" unless the matrix is strictly positive. Always lies
// in [0, 1] (u = v gives 1).
absl::StatusOr<double> AnonymityRatio(const TransitionMatrix& matrix);

// Closed-form AR_a of an RRP matrix: ((1 - rho) / (1 + (m - 1) rho))^2.
double RrpAnonymityRatio(size_t domain_size, double rho);

// Tight k = 1 + (n - 1) * AR. `record_count` may be an expected (real) count
// and must be >= 1 ("empty table" otherwise).
absl::StatusOr<AnonymityLevel> KFromMatrix(const TransitionMatrix& matrix,
                                           double record_count);
// k = 1 + (n - 1) * prod_a AR_a.
absl::StatusOr<AnonymityLevel> KFromMatrixSet(const AttributeMatrixSet& set,
                                              double record_count);
absl::StatusOr<AnonymityLevel> KFromRrp(std::span<const size_t> domains,
                                        const RetentionProfile& rhos,
                                        double record_count);

// epsilon = ln max over u, v, v' of A[u][v'] / A[v][v'].
PrivacyBudget EpsFromMatrix(const TransitionMatrix& matrix);
// Sum of the per-attribute budgets.
PrivacyBudget EpsFromMatrixSet(const AttributeMatrixSet& set);
// sum_a ln((1 + (m_a - 1) rho_a) / (1 - rho_a)); unbounded if any rho_a = 1.
absl::StatusOr<PrivacyBudget> EpsFromRrp(std::span<const size_t> domains,
                                         const RetentionProfile& rhos);

struct KAnonymityCheck {
  bool satisfied = false;
  // Occurrence count of every released value tuple.
  std::map<ValueTuple, size_t> multiplicities;
  // Smallest multiplicity over records; 0 for an empty table.
  size_t min_multiplicity = 0;
  // Records whose tuple occurs fewer than k times.
  std::vector<size_t> violating_records;
};

// Classical k-anonymity: every record's tuple occurs at least k times.
KAnonymityCheck CheckKAnonymity(const Table& table, size_t k);

// Solver settings. Defaults follow the bisection contract: start at 1/2,
// stop at bracket width 1e-12 or 200 iterations.
struct BisectionOptions {
  double width_tolerance = 1e-12;
  int max_iterations = 200;
};

// Uniform rho with k_from_rrp(rho) = k_target. The returned rho is the lower
// end of the final bracket, so the achieved k is never below the target.
// Errors: "infeasible" when k_target lies outside [1, record_count].
absl::StatusOr<double> SolveRhoFromK(double k_target, double record_count,
                                     std::span<const size_t> domains,
                                     const BisectionOptions& options = {});

// Uniform rho with eps_from_rrp(rho) = eps_target; the achieved epsilon is
// never above the target. Errors: "invalid target" for eps_target <= 0.
absl::StatusOr<double> SolveRhoFromEps(double eps_target,
                                       std::span<const size_t> domains,
                                       const BisectionOptions& options = {});

struct CombinedSolution {
  double rho = 0.0;
  double rho_k = 0.0;
  double rho_eps = 0.0;
};

// min(rho_k, rho_eps): satisfies k >= k_target and epsilon <= eps_target.
absl::StatusOr<CombinedSolution> SolveRhoCombined(
    double k_target, double eps_target, double record_count,
    std::span<const size_t> domains, const BisectionOptions& options = {});

// Everything needed to recompute k and epsilon of a release.
struct PrivacyReport {
  AnonymityLevel k;
  PrivacyBudget epsilon = PrivacyBudget::Finite(0.0);
  double record_count = 0.0;
  std::vector<std::string> attributes;
  std::vector<double> anonymity_ratios;
  // Retention probabilities for RRP releases; empty for custom matrices.
  std::vector<double> rhos;
};

absl::StatusOr<PrivacyReport> ReportForRrp(const TableSchema& schema,
                                           const RetentionProfile& rhos,
                                           double record_count);
absl::StatusOr<PrivacyReport> ReportForMatrixSet(const AttributeMatrixSet& set,
                                                 double record_count);

}  // namespace pkpram

#endif  // PKPRAM_PRIVACY_H_
