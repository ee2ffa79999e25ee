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

#include "pkpram/reconstruct.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <thread>

#include <Eigen/Dense>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "pkpram/mechanism.h"
#include "pkpram/privacy.h"
#include "pkpram/random.h"
#include "pkpram/status_macros.h"

namespace pkpram {
namespace {

constexpr uint64_t kDataStream = 100;
constexpr uint64_t kMechanismStream = 200;

size_t CellCount(std::span<const size_t> domains) {
  size_t cells = 1;
  for (size_t d : domains) cells *= d;
  return cells;
}

// Solves (A^T) x = y along one axis of the dense tensor `values`.
absl::Status SolveAlongAxis(const TransitionMatrix& matrix,
                            std::span<const size_t> domains, size_t axis,
                            std::vector<double>& values) {
  const Eigen::Index m = static_cast<Eigen::Index>(matrix.domain_size());
  Eigen::MatrixXd transposed(m, m);
  for (Eigen::Index u = 0; u < m; ++u) {
    for (Eigen::Index v = 0; v < m; ++v) transposed(v, u) = matrix(u, v);
  }
  const Eigen::FullPivLU<Eigen::MatrixXd> lu(transposed);
  if (!lu.isInvertible()) {
    return absl::FailedPreconditionError(
        absl::StrCat("singular matrix on axis ", axis,
                     ": the transition matrix is not invertible"));
  }
  size_t stride = 1;
  for (size_t a = axis + 1; a < domains.size(); ++a) stride *= domains[a];
  size_t outer = 1;
  for (size_t a = 0; a < axis; ++a) outer *= domains[a];
  const size_t block = domains[axis] * stride;

  Eigen::VectorXd fiber(m);
  for (size_t o = 0; o < outer; ++o) {
    for (size_t i = 0; i < stride; ++i) {
      const size_t base = o * block + i;
      for (Eigen::Index j = 0; j < m; ++j) fiber(j) = values[base + j * stride];
      const Eigen::VectorXd solved = lu.solve(fiber);
      for (Eigen::Index j = 0; j < m; ++j) values[base + j * stride] = solved(j);
    }
  }
  return absl::OkStatus();
}

struct SeedOutcome {
  absl::Status status;
  double l1 = 0.0;
};

}  // namespace

CrossTab::CrossTab(std::vector<std::string> attributes,
                   std::vector<size_t> domains, std::vector<double> counts)
    : attributes_(std::move(attributes)),
      domains_(std::move(domains)),
      counts_(std::move(counts)) {}

size_t CrossTab::CellIndex(std::span<const uint32_t> tuple) const {
  size_t index = 0;
  for (size_t a = 0; a < domains_.size(); ++a) {
    index = index * domains_[a] + tuple[a];
  }
  return index;
}

double CrossTab::total() const {
  return std::accumulate(counts_.begin(), counts_.end(), 0.0);
}

double ReconstructionResult::total() const {
  return std::accumulate(estimates.begin(), estimates.end(), 0.0);
}

absl::StatusOr<CrossTab> CrossTabulate(
    const Table& table, std::span<const std::string> attributes) {
  std::vector<size_t> positions;
  std::vector<size_t> domains;
  for (const std::string& name : attributes) {
    absl::StatusOr<size_t> position = table.schema().AttributeIndex(name);
    if (!position.ok()) {
      return absl::InvalidArgumentError(
          absl::StrCat("unknown attribute '", name, "'"));
    }
    positions.push_back(*position);
    domains.push_back(table.schema().attribute(*position).domain_size());
  }
  std::vector<double> counts(CellCount(domains), 0.0);
  for (size_t r = 0; r < table.record_count(); ++r) {
    std::span<const uint32_t> row = table.row(r);
    size_t index = 0;
    for (size_t i = 0; i < positions.size(); ++i) {
      index = index * domains[i] + row[positions[i]];
    }
    counts[index] += 1.0;
  }
  return CrossTab(std::vector<std::string>(attributes.begin(), attributes.end()),
                  std::move(domains), std::move(counts));
}

absl::StatusOr<ReconstructionResult> ReconstructByInversion(
    const CrossTab& observed, const AttributeMatrixSet& set,
    bool clip_negatives) {
  std::vector<const TransitionMatrix*> matrices;
  for (size_t i = 0; i < observed.attributes().size(); ++i) {
    absl::StatusOr<size_t> position =
        set.schema().AttributeIndex(observed.attributes()[i]);
    if (!position.ok()) {
      return absl::InvalidArgumentError(absl::StrCat(
          "schema mismatch: no matrix for attribute '",
          observed.attributes()[i], "'"));
    }
    if (set.matrix(*position).domain_size() != observed.domains()[i]) {
      return absl::InvalidArgumentError(absl::StrCat(
          "schema mismatch: domain size of '", observed.attributes()[i],
          "' differs from its matrix"));
    }
    matrices.push_back(&set.matrix(*position));
  }
  ReconstructionResult result;
  result.attributes = observed.attributes();
  result.domains = observed.domains();
  result.estimates = observed.counts();
  for (size_t axis = 0; axis < matrices.size(); ++axis) {
    PKPRAM_RETURN_IF_ERROR(SolveAlongAxis(*matrices[axis], result.domains,
                                          axis, result.estimates));
  }
  if (clip_negatives) {
    for (double& x : result.estimates) {
      if (x < 0.0) {
        x = 0.0;
        result.negatives_clipped = true;
      }
    }
  }
  return result;
}

absl::StatusOr<double> L1Error(const CrossTab& original,
                               const ReconstructionResult& reconstructed,
                               double record_count) {
  if (original.attributes() != reconstructed.attributes ||
      original.domains() != reconstructed.domains ||
      original.cell_count() != reconstructed.estimates.size()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "domain mismatch: [", absl::StrJoin(original.attributes(), ","),
        "] vs [", absl::StrJoin(reconstructed.attributes, ","), "]"));
  }
  if (!(record_count > 0.0)) {
    return absl::InvalidArgumentError("record count must be positive");
  }
  double sum = 0.0;
  for (size_t i = 0; i < original.cell_count(); ++i) {
    sum += std::abs(original.counts()[i] - reconstructed.estimates[i]);
  }
  return sum / record_count;
}

absl::StatusOr<Table> GenerateSyntheticTable(std::span<const size_t> domains,
                                             size_t record_count,
                                             double zipf_exponent,
                                             uint64_t seed) {
  PKPRAM_ASSIGN_OR_RETURN(TableSchema schema, AnonymousSchema(domains));
  std::vector<std::vector<double>> weights;
  for (size_t m : domains) {
    std::vector<double> w(m);
    for (size_t i = 0; i < m; ++i) {
      w[i] = std::pow(static_cast<double>(i + 1), -zipf_exponent);
    }
    weights.push_back(std::move(w));
  }
  std::vector<ValueTuple> rows(record_count, ValueTuple(domains.size()));
  for (size_t r = 0; r < record_count; ++r) {
    for (size_t a = 0; a < domains.size(); ++a) {
      // Keyed by (attribute, record) so a prefix of `domains` reproduces the
      // same leading columns.
      rows[r][a] = static_cast<uint32_t>(
          SampleDiscrete(weights[a], UnitInterval(DeriveSeed(seed, a, r))));
    }
  }
  return Table::FromTuples(std::move(schema), rows);
}

absl::StatusOr<std::vector<TrendRow>> RunTrendExperiment(
    const TrendConfig& config) {
  if (config.grid.empty()) return absl::InvalidArgumentError("empty grid");
  if (config.seeds < 1) return absl::InvalidArgumentError("need >= 1 seed");
  std::vector<TrendRow> out;
  for (double value : config.grid) {
    size_t records = config.records;
    size_t attributes = config.attribute_count;
    double k = config.k;
    switch (config.vary) {
      case TrendVariable::kRecords:
        records = static_cast<size_t>(std::llround(value));
        break;
      case TrendVariable::kAttributes:
        attributes = static_cast<size_t>(std::llround(value));
        break;
      case TrendVariable::kK:
        k = value;
        break;
    }
    if (attributes == 0 || attributes > config.domains.size()) {
      return absl::InvalidArgumentError(absl::StrCat(
          "attribute count ", attributes, " not in [1, ",
          config.domains.size(), "]"));
    }
    if (records == 0) return absl::InvalidArgumentError("record count is 0");
    const std::vector<size_t> domains(config.domains.begin(),
                                      config.domains.begin() + attributes);
    const double n = static_cast<double>(records);
    PKPRAM_ASSIGN_OR_RETURN(double rho, SolveRhoFromK(k, n, domains));
    PKPRAM_ASSIGN_OR_RETURN(RetentionProfile profile,
                            RetentionProfile::Uniform(attributes, rho));
    PKPRAM_ASSIGN_OR_RETURN(PrivacyBudget eps, EpsFromRrp(domains, profile));
    PKPRAM_ASSIGN_OR_RETURN(AnonymityLevel achieved,
                            KFromRrp(domains, profile, n));
    PKPRAM_ASSIGN_OR_RETURN(TableSchema schema, AnonymousSchema(domains));
    PKPRAM_ASSIGN_OR_RETURN(AttributeMatrixSet set,
                            BuildRrpSet(schema, profile));
    const std::vector<std::string> names = schema.AttributeNames();

    std::vector<SeedOutcome> outcomes(config.seeds);
    auto run_seed = [&](int s) {
      SeedOutcome& outcome = outcomes[s];
      auto body = [&]() -> absl::Status {
        PKPRAM_ASSIGN_OR_RETURN(
            Table original,
            GenerateSyntheticTable(domains, records, config.zipf_exponent,
                                   DeriveSeed(config.seed, kDataStream, s)));
        const PramMechanism mechanism(
            set, DeriveSeed(config.seed, kMechanismStream, s));
        PKPRAM_ASSIGN_OR_RETURN(Table released, mechanism.Anonymize(original));
        PKPRAM_ASSIGN_OR_RETURN(CrossTab x, CrossTabulate(original, names));
        PKPRAM_ASSIGN_OR_RETURN(CrossTab y, CrossTabulate(released, names));
        PKPRAM_ASSIGN_OR_RETURN(
            ReconstructionResult x_hat,
            ReconstructByInversion(y, set, config.clip_negatives));
        PKPRAM_ASSIGN_OR_RETURN(outcome.l1, L1Error(x, x_hat, n));
        return absl::OkStatus();
      };
      outcome.status = body();
    };

    unsigned threads = config.threads == 0
                           ? std::max(1u, std::thread::hardware_concurrency())
                           : config.threads;
    threads = std::min<unsigned>(threads, static_cast<unsigned>(config.seeds));
    if (threads <= 1) {
      for (int s = 0; s < config.seeds; ++s) run_seed(s);
    } else {
      std::atomic<int> next{0};
      std::vector<std::jthread> pool;
      for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
          for (int s = next++; s < config.seeds; s = next++) run_seed(s);
        });
      }
    }

    double sum = 0.0;
    for (const SeedOutcome& outcome : outcomes) {
      PKPRAM_RETURN_IF_ERROR(outcome.status);
      sum += outcome.l1;
    }
    const double mean = sum / config.seeds;
    double squares = 0.0;
    for (const SeedOutcome& outcome : outcomes) {
      squares += (outcome.l1 - mean) * (outcome.l1 - mean);
    }
    const double stderr_l1 =
        config.seeds > 1
            ? std::sqrt(squares / (config.seeds - 1) / config.seeds)
            : 0.0;
    out.push_back(TrendRow{value, rho, eps.value(), achieved.k, mean, stderr_l1});
  }
  return out;
}

}  // namespace pkpram
