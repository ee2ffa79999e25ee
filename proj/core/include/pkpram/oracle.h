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

#ifndef PKPRAM_ORACLE_H_
#define PKPRAM_ORACLE_H_

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "absl/status/statusor.h"
#include "pkpram/privacy.h"
#include "pkpram/tabular.h"
#include "pkpram/transition.h"

// Exhaustive ground truth for the closed-form bounds in privacy.h. Everything
// here enumerates permutations of records and is only usable at desk scale.

namespace pkpram {

// Environment variable overriding the default record limit.
inline constexpr char kBruteForceLimitEnv[] = "PKPRAM_BRUTE_FORCE_LIMIT";

struct OracleLimits {
  // Largest record count whose n! permutations are enumerated.
  size_t max_records = 8;
  // Largest product domain |V| for searches over value configurations.
  size_t max_domain = 9;
};

// Default limits with max_records taken from PKPRAM_BRUTE_FORCE_LIMIT when set.
OracleLimits LimitsFromEnvironment();

// Adversary background knowledge: a finite-support distribution over private
// tables sharing one schema and record count.
class BackgroundKnowledge {
 public:
  static absl::StatusOr<BackgroundKnowledge> Create(
      std::vector<std::pair<Table, double>> support);
  static BackgroundKnowledge PointMass(Table table);

  const std::vector<std::pair<Table, double>>& support() const {
    return support_;
  }
  const TableSchema& schema() const { return support_.front().first.schema(); }
  size_t record_count() const {
    return support_.front().first.record_count();
  }

 private:
  explicit BackgroundKnowledge(std::vector<std::pair<Table, double>> support)
      : support_(std::move(support)) {}
  std::vector<std::pair<Table, double>> support_;
};

struct EstimationQuery {
  const BackgroundKnowledge& knowledge;
  const Table& released;
  size_t source_record = 0;
  size_t target_record = 0;
};

// Exact Pr[Pi(r) = r' | T' = tau'] under the PRAM mechanism of `set`:
//
//   sum_tau f(tau) sum_{pi : pi(r) = r'} prod_s A[tau(s)][tau'(pi(s))]
//   -----------------------------------------------------------------
//   sum_tau f(tau) sum_{pi}              prod_s A[tau(s)][tau'(pi(s))]
//
// Zero matrix entries are allowed (deterministic mechanisms). Errors:
// "too large" past limits.max_records, "degenerate denominator" when the
// release is unreachable from every support table.
absl::StatusOr<double> EstimationProbability(const EstimationQuery& query,
                                             const AttributeMatrixSet& set,
                                             const OracleLimits& limits = {});

// All target records at once: element r' of the result is the estimation
// probability for (source_record, r'). Sums to 1.
absl::StatusOr<std::vector<double>> EstimationRow(
    const BackgroundKnowledge& knowledge, const Table& released,
    size_t source_record, const AttributeMatrixSet& set,
    const OracleLimits& limits = {});

// Private / released pair that realizes an estimation probability.
struct EstimationWitness {
  ValueTuple source_value;       // tau(r)
  ValueTuple other_value;        // tau(s) for s != r
  ValueTuple target_value;       // tau'(r')
  ValueTuple other_release;      // tau'(s') for s' != r'
  double estimation = 0.0;
};

struct MaxEstimationResult {
  double max_estimation = 0.0;
  // 1 / max_estimation.
  double implied_k = 1.0;
  EstimationWitness witness;
  // Random non-worst-case configurations evaluated, and the largest
  // estimation among them.
  size_t random_configurations = 0;
  double max_random_estimation = 0.0;
  // Number of random configurations exceeding max_estimation (beyond 1e-12
  // relative). Non-zero means the worst-case construction is not worst.
  size_t exceedances = 0;
};

// Evaluates the two-value worst-case configuration for every quadruple
// (u, v, u', v') of product values: tau(r) = u and tau(s) = v elsewhere,
// tau'(r') = u' and tau'(s') = v' elsewhere, point-mass knowledge on tau.
// Then samples `random_trials` arbitrary configurations (random tables,
// mixture knowledge, records) and counts any that beat the maximum.
absl::StatusOr<MaxEstimationResult> MaxEstimationSearch(
    const AttributeMatrixSet& set, size_t record_count, size_t random_trials,
    uint64_t seed, const OracleLimits& limits = {});

// Pk level of a deterministic mechanism's output under point-mass knowledge:
// min over records of the multiplicity of the record's released tuple.
AnonymityLevel PkLevelDeterministic(const Table& released);

struct DpRatioResult {
  double max_ratio = 0.0;
  double bound = 0.0;  // exp(claimed_eps)
  bool passed = false;
  // Argmax: neighboring private tables and the release.
  std::vector<ValueTuple> table_a;
  std::vector<ValueTuple> table_b;
  std::vector<ValueTuple> release;
  size_t pairs_checked = 0;
};

struct DpOracleLimits {
  size_t max_records = 3;
  size_t max_domain = 3;
};

// Pr[Delta(tau) = tau'] = (1 / n!) sum_pi prod_s A[tau(s)][tau'(pi(s))].
double ReleaseProbability(const AttributeMatrixSet& set,
                          const std::vector<ValueTuple>& private_rows,
                          const std::vector<ValueTuple>& released_rows);

// Enumerates every pair of private tables differing in one record and every
// release, and compares the largest probability ratio with exp(claimed_eps).
// A ratio with zero denominator and non-zero numerator is infinite. The check
// passes when max_ratio <= exp(claimed_eps) * (1 + 1e-12).
absl::StatusOr<DpRatioResult> DpRatioCheck(const AttributeMatrixSet& set,
                                           size_t record_count,
                                           const PrivacyBudget& claimed_eps,
                                           const DpOracleLimits& limits = {});

struct PkAuditReport {
  double k = 1.0;
  double bound = 1.0;  // 1 / k
  double max_estimation = 0.0;
  size_t trials = 0;
  size_t violations = 0;
  // Largest sum of floor(k) - 1 estimates in one row, which must not exceed
  // 1 - 1/k.
  double max_narrowing_sum = 0.0;
  size_t narrowing_violations = 0;
};

// Random audit of the Pk bound: samples knowledge distributions (point masses
// and mixtures), releases and record pairs, and checks every estimation
// against 1 / k_from_matrix_set.
absl::StatusOr<PkAuditReport> PkBoundAudit(const AttributeMatrixSet& set,
                                           size_t record_count, size_t trials,
                                           uint64_t seed,
                                           const OracleLimits& limits = {});

}  // namespace pkpram

#endif  // PKPRAM_ORACLE_H_
