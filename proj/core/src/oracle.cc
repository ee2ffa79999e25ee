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

#include "pkpram/oracle.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <limits>
#include <numeric>

#include "absl/status/status.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "pkpram/random.h"
#include "pkpram/status_macros.h"

namespace pkpram {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Streaming log(sum(exp(x_i))).
class LogSumExp {
 public:
  void Add(double x) {
    if (x == kNegInf) return;
    if (x <= max_) {
      sum_ += std::exp(x - max_);
    } else {
      sum_ = sum_ * std::exp(max_ - x) + 1.0;
      max_ = x;
    }
  }
  double Log() const { return max_ == kNegInf ? kNegInf : max_ + std::log(sum_); }

 private:
  double max_ = kNegInf;
  double sum_ = 0.0;
};

using LogMatrix = std::vector<std::vector<double>>;

// log A[tau(s)][tau'(s')] for every record pair.
LogMatrix RecordLogWeights(const AttributeMatrixSet& set,
                           const std::vector<ValueTuple>& private_rows,
                           const std::vector<ValueTuple>& released_rows) {
  const size_t n = private_rows.size();
  LogMatrix w(n, std::vector<double>(n));
  for (size_t s = 0; s < n; ++s) {
    for (size_t t = 0; t < n; ++t) {
      const double p =
          set.ProductEntryUnchecked(private_rows[s], released_rows[t]);
      w[s][t] = p > 0.0 ? std::log(p) : kNegInf;
    }
  }
  return w;
}

// Calls visit(pi, log prod_s w[s][pi[s]]) for every permutation with a
// non-zero product.
void ForEachPermutation(const LogMatrix& w,
                        const std::function<void(const std::vector<size_t>&,
                                                 double)>& visit) {
  const size_t n = w.size();
  std::vector<size_t> pi(n);
  std::iota(pi.begin(), pi.end(), size_t{0});
  do {
    double log_p = 0.0;
    for (size_t s = 0; s < n && log_p != kNegInf; ++s) log_p += w[s][pi[s]];
    if (log_p != kNegInf) visit(pi, log_p);
  } while (std::next_permutation(pi.begin(), pi.end()));
}

std::vector<ValueTuple> Rows(const Table& table) {
  std::vector<ValueTuple> rows;
  rows.reserve(table.record_count());
  for (size_t r = 0; r < table.record_count(); ++r) {
    std::span<const uint32_t> view = table.row(r);
    rows.emplace_back(view.begin(), view.end());
  }
  return rows;
}

absl::Status CheckRecordLimit(size_t n, size_t limit) {
  if (n > limit) {
    return absl::ResourceExhaustedError(absl::StrCat(
        "too large: ", n, " records exceed the brute-force limit of ", limit));
  }
  return absl::OkStatus();
}

absl::StatusOr<size_t> ProductDomainSize(const AttributeMatrixSet& set,
                                         size_t limit) {
  const double size = set.schema().TotalDomainSize();
  if (size > static_cast<double>(limit)) {
    return absl::ResourceExhaustedError(absl::StrCat(
        "too large: product domain of ", size, " values exceeds ", limit));
  }
  return static_cast<size_t>(size);
}

// Estimation row from already decoded rows.
absl::StatusOr<std::vector<double>> EstimationRowFromRows(
    const std::vector<std::pair<std::vector<ValueTuple>, double>>& support,
    const std::vector<ValueTuple>& released, size_t source,
    const AttributeMatrixSet& set) {
  const size_t n = released.size();
  std::vector<LogSumExp> numerators(n);
  LogSumExp denominator;
  for (const auto& [rows, weight] : support) {
    if (weight <= 0.0) continue;
    const double log_weight = std::log(weight);
    const LogMatrix w = RecordLogWeights(set, rows, released);
    ForEachPermutation(w, [&](const std::vector<size_t>& pi, double log_p) {
      numerators[pi[source]].Add(log_weight + log_p);
      denominator.Add(log_weight + log_p);
    });
  }
  const double log_den = denominator.Log();
  if (log_den == kNegInf) {
    return absl::FailedPreconditionError(
        "degenerate denominator: the release is unreachable from every table "
        "in the knowledge support");
  }
  std::vector<double> row(n);
  for (size_t t = 0; t < n; ++t) {
    row[t] = std::exp(numerators[t].Log() - log_den);
  }
  return row;
}

std::vector<ValueTuple> RandomRows(const std::vector<ValueTuple>& domain,
                                   size_t n, SplitMixRng& rng) {
  std::vector<ValueTuple> rows(n);
  // Half of the draws use only two distinct values, which is where estimation
  // probabilities peak.
  if (rng.Uniform() < 0.5) {
    const ValueTuple& a = domain[rng.UniformInt(domain.size())];
    const ValueTuple& b = domain[rng.UniformInt(domain.size())];
    for (size_t s = 0; s < n; ++s) rows[s] = rng.Uniform() < 0.5 ? a : b;
  } else {
    for (size_t s = 0; s < n; ++s) rows[s] = domain[rng.UniformInt(domain.size())];
  }
  return rows;
}

std::vector<std::pair<std::vector<ValueTuple>, double>> RandomKnowledge(
    const std::vector<ValueTuple>& domain, size_t n, SplitMixRng& rng) {
  std::vector<std::pair<std::vector<ValueTuple>, double>> support;
  const size_t size = rng.Uniform() < 0.5 ? 1 : 2 + rng.UniformInt(2);
  double total = 0.0;
  for (size_t i = 0; i < size; ++i) {
    const double w = size == 1 ? 1.0 : 0.05 + rng.Uniform();
    support.emplace_back(RandomRows(domain, n, rng), w);
    total += w;
  }
  for (auto& entry : support) entry.second /= total;
  return support;
}

}  // namespace

OracleLimits LimitsFromEnvironment() {
  OracleLimits limits;
  if (const char* value = std::getenv(kBruteForceLimitEnv)) {
    size_t parsed = 0;
    if (absl::SimpleAtoi(value, &parsed) && parsed > 0) {
      limits.max_records = parsed;
    }
  }
  return limits;
}

absl::StatusOr<BackgroundKnowledge> BackgroundKnowledge::Create(
    std::vector<std::pair<Table, double>> support) {
  if (support.empty()) {
    return absl::InvalidArgumentError("background knowledge has empty support");
  }
  double total = 0.0;
  for (const auto& [table, p] : support) {
    if (!(p >= 0.0)) {
      return absl::InvalidArgumentError("negative knowledge probability");
    }
    if (!(table.schema() == support.front().first.schema()) ||
        table.record_count() != support.front().first.record_count()) {
      return absl::InvalidArgumentError(
          "knowledge tables must share schema and record count");
    }
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    return absl::InvalidArgumentError(
        absl::StrCat("knowledge probabilities sum to ", total, ", not 1"));
  }
  return BackgroundKnowledge(std::move(support));
}

BackgroundKnowledge BackgroundKnowledge::PointMass(Table table) {
  std::vector<std::pair<Table, double>> support;
  support.emplace_back(std::move(table), 1.0);
  return BackgroundKnowledge(std::move(support));
}

absl::StatusOr<std::vector<double>> EstimationRow(
    const BackgroundKnowledge& knowledge, const Table& released,
    size_t source_record, const AttributeMatrixSet& set,
    const OracleLimits& limits) {
  if (!(knowledge.schema() == set.schema()) ||
      !(released.schema() == set.schema())) {
    return absl::InvalidArgumentError(
        "schema mismatch between knowledge, release and matrices");
  }
  const size_t n = released.record_count();
  if (knowledge.record_count() != n) {
    return absl::InvalidArgumentError(
        "private and released tables must have the same record count");
  }
  if (n == 0) return absl::InvalidArgumentError("empty table");
  PKPRAM_RETURN_IF_ERROR(CheckRecordLimit(n, limits.max_records));
  if (source_record >= n) {
    return absl::OutOfRangeError(
        absl::StrCat("source record ", source_record, " out of range"));
  }
  std::vector<std::pair<std::vector<ValueTuple>, double>> support;
  for (const auto& [table, p] : knowledge.support()) {
    support.emplace_back(Rows(table), p);
  }
  return EstimationRowFromRows(support, Rows(released), source_record, set);
}

absl::StatusOr<double> EstimationProbability(const EstimationQuery& query,
                                             const AttributeMatrixSet& set,
                                             const OracleLimits& limits) {
  if (query.target_record >= query.released.record_count()) {
    return absl::OutOfRangeError(
        absl::StrCat("target record ", query.target_record, " out of range"));
  }
  PKPRAM_ASSIGN_OR_RETURN(
      std::vector<double> row,
      EstimationRow(query.knowledge, query.released, query.source_record, set,
                    limits));
  return row[query.target_record];
}

absl::StatusOr<MaxEstimationResult> MaxEstimationSearch(
    const AttributeMatrixSet& set, size_t record_count, size_t random_trials,
    uint64_t seed, const OracleLimits& limits) {
  if (record_count == 0) return absl::InvalidArgumentError("empty table");
  PKPRAM_RETURN_IF_ERROR(CheckRecordLimit(record_count, limits.max_records));
  PKPRAM_RETURN_IF_ERROR(ProductDomainSize(set, limits.max_domain).status());
  const std::vector<ValueTuple> domain =
      EnumerateProductDomain(set.schema().DomainSizes());
  const size_t n = record_count;

  MaxEstimationResult result;
  result.max_estimation = -1.0;
  for (const ValueTuple& u : domain) {
    for (const ValueTuple& v : domain) {
      for (const ValueTuple& up : domain) {
        for (const ValueTuple& vp : domain) {
          std::vector<ValueTuple> priv(n, v);
          std::vector<ValueTuple> rel(n, vp);
          priv[0] = u;
          rel[0] = up;
          absl::StatusOr<std::vector<double>> row =
              EstimationRowFromRows({{priv, 1.0}}, rel, 0, set);
          if (!row.ok()) continue;  // unreachable under zero entries
          if ((*row)[0] > result.max_estimation) {
            result.max_estimation = (*row)[0];
            result.witness = EstimationWitness{u, v, up, vp, (*row)[0]};
          }
        }
      }
    }
  }
  if (result.max_estimation <= 0.0) {
    return absl::FailedPreconditionError(
        "degenerate denominator: no reachable configuration");
  }
  result.implied_k = 1.0 / result.max_estimation;

  SplitMixRng rng(seed);
  for (size_t trial = 0; trial < random_trials; ++trial) {
    const auto support = RandomKnowledge(domain, n, rng);
    const std::vector<ValueTuple> released = RandomRows(domain, n, rng);
    const size_t source = rng.UniformInt(n);
    absl::StatusOr<std::vector<double>> row =
        EstimationRowFromRows(support, released, source, set);
    if (!row.ok()) continue;
    ++result.random_configurations;
    const double best = *std::max_element(row->begin(), row->end());
    result.max_random_estimation = std::max(result.max_random_estimation, best);
    if (best > result.max_estimation * (1.0 + 1e-12)) ++result.exceedances;
  }
  return result;
}

AnonymityLevel PkLevelDeterministic(const Table& released) {
  const std::map<ValueTuple, size_t> counts = released.Multiplicities();
  size_t smallest = released.record_count();
  for (const auto& [tuple, count] : counts) smallest = std::min(smallest, count);
  return AnonymityLevel{static_cast<double>(smallest)};
}

double ReleaseProbability(const AttributeMatrixSet& set,
                          const std::vector<ValueTuple>& private_rows,
                          const std::vector<ValueTuple>& released_rows) {
  const LogMatrix w = RecordLogWeights(set, private_rows, released_rows);
  LogSumExp total;
  ForEachPermutation(w, [&](const std::vector<size_t>&, double log_p) {
    total.Add(log_p);
  });
  const double n_factorial_log =
      std::lgamma(static_cast<double>(private_rows.size()) + 1.0);
  return std::exp(total.Log() - n_factorial_log);
}

absl::StatusOr<DpRatioResult> DpRatioCheck(const AttributeMatrixSet& set,
                                           size_t record_count,
                                           const PrivacyBudget& claimed_eps,
                                           const DpOracleLimits& limits) {
  if (record_count == 0) return absl::InvalidArgumentError("empty table");
  PKPRAM_RETURN_IF_ERROR(CheckRecordLimit(record_count, limits.max_records));
  PKPRAM_ASSIGN_OR_RETURN(const size_t domain_size,
                          ProductDomainSize(set, limits.max_domain));
  const std::vector<ValueTuple> domain =
      EnumerateProductDomain(set.schema().DomainSizes());
  const size_t n = record_count;

  // Every table in V^n, as indices into `domain`.
  const std::vector<size_t> radix(n, domain_size);
  const std::vector<ValueTuple> tables = EnumerateProductDomain(radix);
  auto rows_of = [&](const ValueTuple& table) {
    std::vector<ValueTuple> rows;
    for (uint32_t index : table) rows.push_back(domain[index]);
    return rows;
  };
  // probability[i][j] = Pr[Delta(table i) = table j].
  std::vector<std::vector<double>> probability(
      tables.size(), std::vector<double>(tables.size()));
  for (size_t i = 0; i < tables.size(); ++i) {
    const std::vector<ValueTuple> priv = rows_of(tables[i]);
    for (size_t j = 0; j < tables.size(); ++j) {
      probability[i][j] = ReleaseProbability(set, priv, rows_of(tables[j]));
    }
  }
  auto table_index = [&](const ValueTuple& table) {
    size_t index = 0;
    for (uint32_t digit : table) index = index * domain_size + digit;
    return index;
  };

  DpRatioResult result;
  result.bound = claimed_eps.unbounded()
                     ? std::numeric_limits<double>::infinity()
                     : std::exp(claimed_eps.value());
  size_t best_a = 0, best_b = 0, best_release = 0;
  for (size_t a = 0; a < tables.size(); ++a) {
    for (size_t s = 0; s < n; ++s) {
      for (uint32_t w = 0; w < domain_size; ++w) {
        if (w == tables[a][s]) continue;
        ValueTuple neighbor = tables[a];
        neighbor[s] = w;
        const size_t b = table_index(neighbor);
        ++result.pairs_checked;
        for (size_t j = 0; j < tables.size(); ++j) {
          const double num = probability[a][j];
          const double den = probability[b][j];
          if (num == 0.0) continue;
          const double ratio =
              den == 0.0 ? std::numeric_limits<double>::infinity() : num / den;
          if (ratio > result.max_ratio) {
            result.max_ratio = ratio;
            best_a = a;
            best_b = b;
            best_release = j;
          }
        }
      }
    }
  }
  result.table_a = rows_of(tables[best_a]);
  result.table_b = rows_of(tables[best_b]);
  result.release = rows_of(tables[best_release]);
  result.passed = result.max_ratio <= result.bound * (1.0 + 1e-12);
  return result;
}

absl::StatusOr<PkAuditReport> PkBoundAudit(const AttributeMatrixSet& set,
                                           size_t record_count, size_t trials,
                                           uint64_t seed,
                                           const OracleLimits& limits) {
  if (record_count == 0) return absl::InvalidArgumentError("empty table");
  PKPRAM_RETURN_IF_ERROR(CheckRecordLimit(record_count, limits.max_records));
  PKPRAM_RETURN_IF_ERROR(ProductDomainSize(set, limits.max_domain).status());
  PKPRAM_ASSIGN_OR_RETURN(AnonymityLevel level,
                          KFromMatrixSet(set, static_cast<double>(record_count)));
  const std::vector<ValueTuple> domain =
      EnumerateProductDomain(set.schema().DomainSizes());
  const size_t n = record_count;

  PkAuditReport report;
  report.k = level.k;
  report.bound = 1.0 / level.k;
  const size_t chosen = static_cast<size_t>(std::floor(level.k)) - 1;
  const double narrowing_bound = 1.0 - 1.0 / level.k;
  SplitMixRng rng(seed);
  for (size_t trial = 0; trial < trials; ++trial) {
    const auto support = RandomKnowledge(domain, n, rng);
    const std::vector<ValueTuple> released = RandomRows(domain, n, rng);
    const size_t source = rng.UniformInt(n);
    PKPRAM_ASSIGN_OR_RETURN(
        std::vector<double> row,
        EstimationRowFromRows(support, released, source, set));
    ++report.trials;
    for (double e : row) {
      report.max_estimation = std::max(report.max_estimation, e);
      if (e > report.bound * (1.0 + 1e-12)) ++report.violations;
    }
    if (chosen > 0) {
      std::sort(row.begin(), row.end(), std::greater<>());
      const double sum = std::accumulate(row.begin(), row.begin() + chosen, 0.0);
      report.max_narrowing_sum = std::max(report.max_narrowing_sum, sum);
      if (sum > narrowing_bound + 1e-12) ++report.narrowing_violations;
    }
  }
  return report;
}

}  // namespace pkpram
