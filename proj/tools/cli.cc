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

#include "cli.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <optional>
#include <regex>
#include <sstream>

#include "CLI11.hpp"
#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"
#include "absl/strings/str_split.h"
#include "json.hpp"
#include "pkpram/file_formats.h"
#include "pkpram/mechanism.h"
#include "pkpram/oracle.h"
#include "pkpram/privacy.h"
#include "pkpram/random.h"
#include "pkpram/reconstruct.h"
#include "pkpram/status_macros.h"
#include "pkpram/tabular.h"
#include "pkpram/transition.h"

namespace pkpram::cli {
namespace {

using nlohmann::json;

std::string Num(double x) { return absl::StrFormat("%.12g", x); }

int Fail(const absl::Status& status, std::ostream& err) {
  err << "error: " << status.message() << "\n";
  return kExitInvalid;
}

absl::StatusOr<std::vector<size_t>> ParseSizeList(const std::string& text) {
  std::vector<size_t> out;
  for (absl::string_view piece :
       absl::StrSplit(text, ',', absl::SkipWhitespace())) {
    size_t value = 0;
    if (!absl::SimpleAtoi(piece, &value)) {
      return absl::InvalidArgumentError(
          absl::StrCat("not a non-negative integer: '", piece, "'"));
    }
    out.push_back(value);
  }
  if (out.empty()) return absl::InvalidArgumentError("empty integer list");
  return out;
}

absl::StatusOr<std::vector<double>> ParseDoubleList(const std::string& text) {
  std::vector<double> out;
  for (absl::string_view piece :
       absl::StrSplit(text, ',', absl::SkipWhitespace())) {
    double value = 0;
    if (!absl::SimpleAtod(piece, &value)) {
      return absl::InvalidArgumentError(
          absl::StrCat("not a number: '", piece, "'"));
    }
    out.push_back(value);
  }
  if (out.empty()) return absl::InvalidArgumentError("empty number list");
  return out;
}

std::vector<std::string> ParseNameList(const std::string& text) {
  return absl::StrSplit(text, ',', absl::SkipWhitespace());
}

// One --matrix argument: inline "rrp(m,rho)" or a JSON matrix file.
absl::StatusOr<AttributeMatrixSet> ParseMatrixArgs(
    const std::vector<std::string>& args) {
  if (args.empty()) return absl::InvalidArgumentError("--matrix required");
  static const std::regex kInline(
      R"(^\s*rrp\(\s*([0-9]+)\s*,\s*([0-9eE.+-]+)\s*\)\s*$)");
  std::vector<AttributeSchema> attributes;
  std::vector<TransitionMatrix> matrices;
  for (const std::string& arg : args) {
    std::smatch match;
    if (std::regex_match(arg, match, kInline)) {
      size_t m = 0;
      double rho = 0;
      if (!absl::SimpleAtoi(match[1].str(), &m) ||
          !absl::SimpleAtod(match[2].str(), &rho)) {
        return absl::InvalidArgumentError(
            absl::StrCat("bad --matrix argument '", arg, "'"));
      }
      PKPRAM_ASSIGN_OR_RETURN(TransitionMatrix matrix, BuildRrpMatrix(m, rho));
      const size_t domain[] = {m};
      PKPRAM_ASSIGN_OR_RETURN(TableSchema single, AnonymousSchema(domain));
      std::vector<std::string> labels = single.attribute(0).values();
      PKPRAM_ASSIGN_OR_RETURN(
          AttributeSchema attribute,
          AttributeSchema::Create(absl::StrCat("a", attributes.size()),
                                  std::move(labels)));
      attributes.push_back(std::move(attribute));
      matrices.push_back(std::move(matrix));
      continue;
    }
    PKPRAM_ASSIGN_OR_RETURN(AttributeMatrixSet loaded, LoadMatrixSetFile(arg));
    for (size_t a = 0; a < loaded.attribute_count(); ++a) {
      AttributeSchema attribute = loaded.schema().attribute(a);
      // Files without attribute names all default to a0, a1, ...; renumber
      // those by overall position.
      const bool taken = std::any_of(
          attributes.begin(), attributes.end(),
          [&](const AttributeSchema& s) { return s.name() == attribute.name(); });
      if (taken) {
        PKPRAM_ASSIGN_OR_RETURN(
            attribute, AttributeSchema::Create(absl::StrCat("a", attributes.size()),
                                               attribute.values()));
      }
      attributes.push_back(std::move(attribute));
      matrices.push_back(loaded.matrix(a));
    }
  }
  PKPRAM_ASSIGN_OR_RETURN(TableSchema schema,
                          TableSchema::Create(std::move(attributes)));
  return AttributeMatrixSet::Create(std::move(schema), std::move(matrices));
}

// Attaches `schema` to the matrices: by name when the names agree, otherwise
// by position.
absl::StatusOr<AttributeMatrixSet> BindToSchema(const AttributeMatrixSet& set,
                                                const TableSchema& schema) {
  if (set.schema() == schema) return set;
  if (set.schema().AttributeNames() == schema.AttributeNames() ||
      set.attribute_count() == schema.attribute_count()) {
    return AttributeMatrixSet::Create(schema, set.matrices());
  }
  std::vector<TransitionMatrix> matrices;
  for (const AttributeSchema& attribute : schema.attributes()) {
    absl::StatusOr<size_t> position =
        set.schema().AttributeIndex(attribute.name());
    if (!position.ok()) {
      return absl::InvalidArgumentError(absl::StrCat(
          "schema mismatch: no matrix for attribute '", attribute.name(), "'"));
    }
    matrices.push_back(set.matrix(*position));
  }
  return AttributeMatrixSet::Create(schema, std::move(matrices));
}

absl::StatusOr<RetentionProfile> ProfileFor(const std::vector<double>& rhos,
                                            size_t attribute_count) {
  if (rhos.size() == 1) return RetentionProfile::Uniform(attribute_count, rhos[0]);
  if (rhos.size() != attribute_count) {
    return absl::InvalidArgumentError(absl::StrCat(
        "length mismatch: ", rhos.size(), " rho values for ", attribute_count,
        " attributes"));
  }
  return RetentionProfile::Create(rhos);
}

std::string TupleLabels(const TableSchema& schema,
                        std::span<const uint32_t> tuple) {
  std::vector<std::string> labels;
  for (size_t a = 0; a < tuple.size(); ++a) {
    labels.push_back(schema.attribute(a).values()[tuple[a]]);
  }
  return absl::StrJoin(labels, "|");
}

std::string RowsLabels(const TableSchema& schema,
                       const std::vector<ValueTuple>& rows) {
  std::vector<std::string> out;
  for (const ValueTuple& row : rows) out.push_back(TupleLabels(schema, row));
  return absl::StrCat("[", absl::StrJoin(out, ";"), "]");
}

std::string RhoString(const std::vector<double>& rhos) {
  bool uniform = true;
  for (double r : rhos) uniform = uniform && r == rhos.front();
  if (uniform && !rhos.empty()) return Num(rhos.front());
  std::vector<std::string> parts;
  for (double r : rhos) parts.push_back(Num(r));
  return absl::StrJoin(parts, ",");
}

void EmitReport(const PrivacyReport& report, std::ostream& out) {
  if (!report.rhos.empty()) out << "rho=" << RhoString(report.rhos) << "\n";
  out << "k=" << Num(report.k.k) << "\n";
  out << "epsilon=" << report.epsilon.ToString() << "\n";
  out << "records=" << Num(report.record_count) << "\n";
  out << "attributes=" << absl::StrJoin(report.attributes, ",") << "\n";
  for (size_t a = 0; a < report.attributes.size(); ++a) {
    out << "AR_" << report.attributes[a] << "="
        << Num(report.anonymity_ratios[a]) << "\n";
  }
}

json ReportJson(const PrivacyReport& report) {
  json doc;
  doc["k"] = report.k.k;
  doc["epsilon"] = report.epsilon.unbounded() ? json("Unbounded")
                                              : json(report.epsilon.value());
  doc["records"] = report.record_count;
  doc["attributes"] = report.attributes;
  doc["anonymity_ratios"] = report.anonymity_ratios;
  if (!report.rhos.empty()) doc["rho"] = report.rhos;
  return doc;
}

absl::Status WriteText(const std::string& path, const std::string& text) {
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) return absl::PermissionDeniedError(absl::StrCat("cannot write ", path));
  file << text;
  file.flush();
  if (!file) return absl::DataLossError(absl::StrCat("write failed: ", path));
  return absl::OkStatus();
}

// ---------------------------------------------------------------- anonymize

struct AnonymizeRequest {
  std::string schema_path;
  std::string input_path;
  std::string output_path;
  std::string report_path;
  std::string manifest_path;
  std::vector<double> rho;  // direct mode
  std::optional<double> k;
  std::optional<double> eps;
  std::optional<double> records;
  std::optional<uint64_t> seed;
  unsigned threads = 1;
};

struct ResolvedParameters {
  std::string mode;
  std::vector<double> rhos;
  double record_count = 0;
  std::optional<double> rho_k;
  std::optional<double> rho_eps;
};

absl::StatusOr<ResolvedParameters> ResolveParameters(
    const AnonymizeRequest& request, const TableSchema& schema,
    size_t table_records) {
  ResolvedParameters resolved;
  resolved.record_count =
      request.records.value_or(static_cast<double>(table_records));
  const std::vector<size_t> domains = schema.DomainSizes();
  const size_t modes = (!request.rho.empty() ? 1 : 0) +
                       ((request.k || request.eps) ? 1 : 0);
  if (modes != 1) {
    return absl::InvalidArgumentError(
        "choose exactly one of --rho, --k, --eps, or --k with --eps");
  }
  if (!request.rho.empty()) {
    resolved.mode = "rho";
    PKPRAM_ASSIGN_OR_RETURN(RetentionProfile profile,
                            ProfileFor(request.rho, schema.attribute_count()));
    resolved.rhos = profile.values();
    return resolved;
  }
  double rho = 0;
  if (request.k && request.eps) {
    resolved.mode = "k+eps";
    PKPRAM_ASSIGN_OR_RETURN(
        CombinedSolution solution,
        SolveRhoCombined(*request.k, *request.eps, resolved.record_count,
                         domains));
    rho = solution.rho;
    resolved.rho_k = solution.rho_k;
    resolved.rho_eps = solution.rho_eps;
  } else if (request.k) {
    resolved.mode = "k";
    PKPRAM_ASSIGN_OR_RETURN(
        rho, SolveRhoFromK(*request.k, resolved.record_count, domains));
  } else {
    resolved.mode = "eps";
    PKPRAM_ASSIGN_OR_RETURN(rho, SolveRhoFromEps(*request.eps, domains));
  }
  resolved.rhos.assign(schema.attribute_count(), rho);
  return resolved;
}

int RunAnonymize(const AnonymizeRequest& request, std::ostream& out,
                 std::ostream& err) {
  absl::StatusOr<TableSchema> schema = LoadSchemaFile(request.schema_path);
  if (!schema.ok()) return Fail(schema.status(), err);
  absl::StatusOr<Table> table = LoadTableFile(request.input_path, *schema);
  if (!table.ok()) return Fail(table.status(), err);
  if (table->record_count() == 0) {
    return Fail(absl::InvalidArgumentError("empty table: no data rows"), err);
  }
  absl::StatusOr<ResolvedParameters> resolved =
      ResolveParameters(request, *schema, table->record_count());
  if (!resolved.ok()) return Fail(resolved.status(), err);

  absl::StatusOr<RetentionProfile> profile =
      RetentionProfile::Create(resolved->rhos);
  if (!profile.ok()) return Fail(profile.status(), err);
  absl::StatusOr<AttributeMatrixSet> set = BuildRrpSet(*schema, *profile);
  if (!set.ok()) return Fail(set.status(), err);
  const uint64_t seed = request.seed.value_or(FreshSeed());
  const PramMechanism mechanism(*set, seed);
  absl::StatusOr<Table> released = mechanism.Anonymize(*table, request.threads);
  if (!released.ok()) return Fail(released.status(), err);
  if (absl::Status s = EmitTableFile(*released, request.output_path); !s.ok()) {
    return Fail(s, err);
  }
  absl::StatusOr<PrivacyReport> report =
      ReportForRrp(*schema, *profile, resolved->record_count);
  if (!report.ok()) return Fail(report.status(), err);

  out << "mode=" << resolved->mode << "\n";
  EmitReport(*report, out);
  if (resolved->rho_k) out << "rho_k=" << Num(*resolved->rho_k) << "\n";
  if (resolved->rho_eps) out << "rho_eps=" << Num(*resolved->rho_eps) << "\n";
  out << "seed=" << seed << "\n";
  err << "released " << released->record_count() << " records to "
      << request.output_path << ": P" << Num(report->k.k)
      << "-anonymous, epsilon " << report->epsilon.ToString() << ", rho "
      << RhoString(report->rhos) << ", seed " << seed << "\n";

  if (!request.report_path.empty()) {
    json doc = ReportJson(*report);
    doc["seed"] = seed;
    if (absl::Status s = WriteText(request.report_path, doc.dump(2) + "\n");
        !s.ok()) {
      return Fail(s, err);
    }
  }
  if (!request.manifest_path.empty()) {
    json manifest;
    manifest["command"] = "anonymize";
    manifest["tool_version"] = kToolVersion;
    manifest["format_version"] = kFormatVersion;
    manifest["schema"] = request.schema_path;
    manifest["input"] = request.input_path;
    manifest["output"] = request.output_path;
    manifest["mode"] = resolved->mode;
    manifest["rho"] = resolved->rhos;
    manifest["record_count"] = resolved->record_count;
    manifest["seed"] = seed;
    manifest["threads"] = request.threads;
    if (request.k) manifest["k_target"] = *request.k;
    if (request.eps) manifest["eps_target"] = *request.eps;
    if (absl::Status s =
            WriteText(request.manifest_path, manifest.dump(2) + "\n");
        !s.ok()) {
      return Fail(s, err);
    }
  }
  return kExitOk;
}

int RunReplay(const std::string& manifest_path,
              const std::string& output_override, std::ostream& out,
              std::ostream& err) {
  absl::StatusOr<std::string> text = ReadFile(manifest_path);
  if (!text.ok()) return Fail(text.status(), err);
  const json manifest = json::parse(*text, nullptr, false);
  if (manifest.is_discarded() || !manifest.is_object() ||
      manifest.value("command", "") != "anonymize") {
    return Fail(absl::InvalidArgumentError("not an anonymize manifest"), err);
  }
  AnonymizeRequest request;
  try {
    request.schema_path = manifest.at("schema").get<std::string>();
    request.input_path = manifest.at("input").get<std::string>();
    request.output_path = output_override.empty()
                              ? manifest.at("output").get<std::string>()
                              : output_override;
    request.rho = manifest.at("rho").get<std::vector<double>>();
    request.records = manifest.at("record_count").get<double>();
    request.seed = manifest.at("seed").get<uint64_t>();
    request.threads = manifest.value("threads", 1u);
  } catch (const json::exception& e) {
    return Fail(absl::InvalidArgumentError(
                    absl::StrCat("incomplete manifest: ", e.what())),
                err);
  }
  return RunAnonymize(request, out, err);
}

// ---------------------------------------------------------------- report

struct ReportRequest {
  std::vector<std::string> matrices;
  std::string domains;
  std::string rho;
  double records = 0;
};

absl::StatusOr<PrivacyReport> BuildReport(const ReportRequest& request,
                                          bool need_records) {
  const double records = need_records ? request.records : 1.0;
  if (!request.matrices.empty()) {
    if (!request.domains.empty() || !request.rho.empty()) {
      return absl::InvalidArgumentError(
          "use either --matrix or --domains with --rho");
    }
    PKPRAM_ASSIGN_OR_RETURN(AttributeMatrixSet set,
                            ParseMatrixArgs(request.matrices));
    if (need_records) return ReportForMatrixSet(set, records);
    PrivacyReport report;
    report.epsilon = EpsFromMatrixSet(set);
    report.attributes = set.schema().AttributeNames();
    return report;
  }
  if (request.domains.empty() || request.rho.empty()) {
    return absl::InvalidArgumentError("--domains and --rho required");
  }
  PKPRAM_ASSIGN_OR_RETURN(std::vector<size_t> domains,
                          ParseSizeList(request.domains));
  PKPRAM_ASSIGN_OR_RETURN(std::vector<double> rhos,
                          ParseDoubleList(request.rho));
  PKPRAM_ASSIGN_OR_RETURN(RetentionProfile profile,
                          ProfileFor(rhos, domains.size()));
  PKPRAM_ASSIGN_OR_RETURN(TableSchema schema, AnonymousSchema(domains));
  return ReportForRrp(schema, profile, records);
}

int RunReportK(const ReportRequest& request, std::ostream& out,
               std::ostream& err) {
  absl::StatusOr<PrivacyReport> report = BuildReport(request, true);
  if (!report.ok()) return Fail(report.status(), err);
  EmitReport(*report, out);
  err << "P" << Num(report->k.k) << "-anonymity over "
      << Num(report->record_count) << " records\n";
  return kExitOk;
}

int RunReportEps(const ReportRequest& request, std::ostream& out,
                 std::ostream& err) {
  absl::StatusOr<PrivacyReport> report = BuildReport(request, false);
  if (!report.ok()) return Fail(report.status(), err);
  if (!report->rhos.empty()) out << "rho=" << RhoString(report->rhos) << "\n";
  out << "epsilon=" << report->epsilon.ToString() << "\n";
  out << "attributes=" << absl::StrJoin(report->attributes, ",") << "\n";
  err << "epsilon-DP with epsilon " << report->epsilon.ToString() << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------- params

struct ParamsRequest {
  double k = 0;
  double eps = 0;
  double records = 0;
  std::string domains;
};

int RunParams(const std::string& which, const ParamsRequest& request,
              std::ostream& out, std::ostream& err) {
  absl::StatusOr<std::vector<size_t>> domains = ParseSizeList(request.domains);
  if (!domains.ok()) return Fail(domains.status(), err);
  double rho = 0;
  if (which == "k-to-rho") {
    absl::StatusOr<double> solved =
        SolveRhoFromK(request.k, request.records, *domains);
    if (!solved.ok()) return Fail(solved.status(), err);
    rho = *solved;
  } else if (which == "eps-to-rho") {
    absl::StatusOr<double> solved = SolveRhoFromEps(request.eps, *domains);
    if (!solved.ok()) return Fail(solved.status(), err);
    rho = *solved;
  } else {
    absl::StatusOr<CombinedSolution> solved =
        SolveRhoCombined(request.k, request.eps, request.records, *domains);
    if (!solved.ok()) return Fail(solved.status(), err);
    rho = solved->rho;
    out << "rho_k=" << Num(solved->rho_k) << "\n";
    out << "rho_eps=" << Num(solved->rho_eps) << "\n";
  }
  absl::StatusOr<RetentionProfile> profile =
      RetentionProfile::Uniform(domains->size(), rho);
  if (!profile.ok()) return Fail(profile.status(), err);
  out << "rho=" << Num(rho) << "\n";
  if (which != "eps-to-rho") {
    absl::StatusOr<AnonymityLevel> k = KFromRrp(*domains, *profile, request.records);
    if (!k.ok()) return Fail(k.status(), err);
    out << "k=" << Num(k->k) << "\n";
    out << "records=" << Num(request.records) << "\n";
  }
  absl::StatusOr<PrivacyBudget> eps = EpsFromRrp(*domains, *profile);
  if (!eps.ok()) return Fail(eps.status(), err);
  out << "epsilon=" << eps->ToString() << "\n";
  err << "retention probability " << Num(rho) << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------- check

int RunCheckKAnonymity(const std::string& schema_path,
                       const std::string& input_path, size_t k,
                       std::ostream& out, std::ostream& err) {
  absl::StatusOr<TableSchema> schema = LoadSchemaFile(schema_path);
  if (!schema.ok()) return Fail(schema.status(), err);
  absl::StatusOr<Table> table = LoadTableFile(input_path, *schema);
  if (!table.ok()) return Fail(table.status(), err);
  const KAnonymityCheck check = CheckKAnonymity(*table, k);
  out << "satisfied=" << (check.satisfied ? "true" : "false") << "\n";
  out << "k=" << k << "\n";
  out << "min_multiplicity=" << check.min_multiplicity << "\n";
  out << "violating_records=" << check.violating_records.size() << "\n";
  for (const auto& [tuple, count] : check.multiplicities) {
    if (count < k) {
      out << "violation=" << TupleLabels(*schema, tuple) << ":" << count << "\n";
    }
  }
  if (!check.satisfied) {
    err << check.violating_records.size() << " records occur fewer than " << k
        << " times\n";
    return kExitVerificationFailed;
  }
  err << "table is " << k << "-anonymous\n";
  return kExitOk;
}

// ---------------------------------------------------------------- oracle

struct OracleRequest {
  std::vector<std::string> matrices;
  std::string schema_path;
  std::vector<std::string> private_paths;
  std::string weights;
  std::string released_path;
  size_t source = 0;
  std::optional<size_t> target;
  size_t records = 0;
  size_t trials = 1000;
  uint64_t seed = 0;
  std::optional<double> eps;
};

int RunOracleEstimate(const OracleRequest& request, std::ostream& out,
                      std::ostream& err) {
  absl::StatusOr<AttributeMatrixSet> set = ParseMatrixArgs(request.matrices);
  if (!set.ok()) return Fail(set.status(), err);
  TableSchema schema = set->schema();
  if (!request.schema_path.empty()) {
    absl::StatusOr<TableSchema> loaded = LoadSchemaFile(request.schema_path);
    if (!loaded.ok()) return Fail(loaded.status(), err);
    absl::StatusOr<AttributeMatrixSet> bound = BindToSchema(*set, *loaded);
    if (!bound.ok()) return Fail(bound.status(), err);
    set = std::move(bound);
    schema = *loaded;
  }
  if (request.private_paths.empty()) {
    return Fail(absl::InvalidArgumentError("--private required"), err);
  }
  std::vector<double> weights(request.private_paths.size(),
                              1.0 / request.private_paths.size());
  if (!request.weights.empty()) {
    absl::StatusOr<std::vector<double>> parsed = ParseDoubleList(request.weights);
    if (!parsed.ok()) return Fail(parsed.status(), err);
    if (parsed->size() != weights.size()) {
      return Fail(absl::InvalidArgumentError(
                      "--weights must have one entry per --private table"),
                  err);
    }
    weights = *parsed;
  }
  std::vector<std::pair<Table, double>> support;
  for (size_t i = 0; i < request.private_paths.size(); ++i) {
    absl::StatusOr<Table> table = LoadTableFile(request.private_paths[i], schema);
    if (!table.ok()) return Fail(table.status(), err);
    support.emplace_back(std::move(*table), weights[i]);
  }
  absl::StatusOr<BackgroundKnowledge> knowledge =
      BackgroundKnowledge::Create(std::move(support));
  if (!knowledge.ok()) return Fail(knowledge.status(), err);
  absl::StatusOr<Table> released = LoadTableFile(request.released_path, schema);
  if (!released.ok()) return Fail(released.status(), err);

  absl::StatusOr<std::vector<double>> row = EstimationRow(
      *knowledge, *released, request.source, *set, LimitsFromEnvironment());
  if (!row.ok()) return Fail(row.status(), err);
  if (request.target) {
    if (*request.target >= row->size()) {
      return Fail(absl::OutOfRangeError("--target out of range"), err);
    }
    out << "estimation=" << Num((*row)[*request.target]) << "\n";
  } else {
    for (size_t t = 0; t < row->size(); ++t) {
      out << "estimation[" << t << "]=" << Num((*row)[t]) << "\n";
    }
  }
  absl::StatusOr<AnonymityLevel> k =
      KFromMatrixSet(*set, static_cast<double>(released->record_count()));
  if (k.ok()) {
    out << "k=" << Num(k->k) << "\n";
    out << "bound=" << Num(1.0 / k->k) << "\n";
  }
  return kExitOk;
}

int RunOracleVerifyK(const OracleRequest& request, std::ostream& out,
                     std::ostream& err) {
  absl::StatusOr<AttributeMatrixSet> set = ParseMatrixArgs(request.matrices);
  if (!set.ok()) return Fail(set.status(), err);
  absl::StatusOr<AnonymityLevel> closed =
      KFromMatrixSet(*set, static_cast<double>(request.records));
  if (!closed.ok()) return Fail(closed.status(), err);
  absl::StatusOr<MaxEstimationResult> search =
      MaxEstimationSearch(*set, request.records, request.trials, request.seed,
                          LimitsFromEnvironment());
  if (!search.ok()) return Fail(search.status(), err);
  const double expected = 1.0 / closed->k;
  const bool agree = std::abs(search->max_estimation - expected) <= 1e-9 &&
                     search->exceedances == 0;
  const TableSchema& schema = set->schema();
  out << "records=" << request.records << "\n";
  out << "max_estimation=" << Num(search->max_estimation) << "\n";
  out << "k_oracle=" << Num(search->implied_k) << "\n";
  out << "k_closed_form=" << Num(closed->k) << "\n";
  out << "random_configurations=" << search->random_configurations << "\n";
  out << "max_random_estimation=" << Num(search->max_random_estimation) << "\n";
  out << "witness_source=" << TupleLabels(schema, search->witness.source_value)
      << "\n";
  out << "witness_other=" << TupleLabels(schema, search->witness.other_value)
      << "\n";
  out << "witness_target=" << TupleLabels(schema, search->witness.target_value)
      << "\n";
  out << "witness_other_release="
      << TupleLabels(schema, search->witness.other_release) << "\n";
  out << "agree=" << (agree ? "true" : "false") << "\n";
  if (!agree) {
    err << "oracle disagrees with the closed-form k\n";
    return kExitVerificationFailed;
  }
  err << "worst-case estimation " << Num(search->max_estimation)
      << " matches tight k " << Num(closed->k) << "\n";
  return kExitOk;
}

int RunOracleVerifyEps(const OracleRequest& request, std::ostream& out,
                       std::ostream& err) {
  absl::StatusOr<AttributeMatrixSet> set = ParseMatrixArgs(request.matrices);
  if (!set.ok()) return Fail(set.status(), err);
  const PrivacyBudget claimed = request.eps ? PrivacyBudget::Finite(*request.eps)
                                            : EpsFromMatrixSet(*set);
  absl::StatusOr<DpRatioResult> result =
      DpRatioCheck(*set, request.records, claimed);
  if (!result.ok()) return Fail(result.status(), err);
  const TableSchema& schema = set->schema();
  out << "records=" << request.records << "\n";
  out << "epsilon_claimed=" << claimed.ToString() << "\n";
  out << "bound=" << Num(result->bound) << "\n";
  out << "max_ratio=" << Num(result->max_ratio) << "\n";
  out << "pairs_checked=" << result->pairs_checked << "\n";
  out << "witness_table_a=" << RowsLabels(schema, result->table_a) << "\n";
  out << "witness_table_b=" << RowsLabels(schema, result->table_b) << "\n";
  out << "witness_release=" << RowsLabels(schema, result->release) << "\n";
  out << "passed=" << (result->passed ? "true" : "false") << "\n";
  if (!result->passed) {
    err << "probability ratio " << Num(result->max_ratio) << " exceeds exp(eps) "
        << Num(result->bound) << "\n";
    return kExitVerificationFailed;
  }
  return kExitOk;
}

int RunOracleAudit(const OracleRequest& request, std::ostream& out,
                   std::ostream& err) {
  absl::StatusOr<AttributeMatrixSet> set = ParseMatrixArgs(request.matrices);
  if (!set.ok()) return Fail(set.status(), err);
  absl::StatusOr<PkAuditReport> report =
      PkBoundAudit(*set, request.records, request.trials, request.seed,
                   LimitsFromEnvironment());
  if (!report.ok()) return Fail(report.status(), err);
  out << "records=" << request.records << "\n";
  out << "k=" << Num(report->k) << "\n";
  out << "bound=" << Num(report->bound) << "\n";
  out << "trials=" << report->trials << "\n";
  out << "max_estimation=" << Num(report->max_estimation) << "\n";
  out << "violations=" << report->violations << "\n";
  out << "max_narrowing_sum=" << Num(report->max_narrowing_sum) << "\n";
  out << "narrowing_violations=" << report->narrowing_violations << "\n";
  if (report->violations > 0 || report->narrowing_violations > 0) {
    err << "estimation bound violated\n";
    return kExitVerificationFailed;
  }
  return kExitOk;
}

// ---------------------------------------------------------------- reconstruct

struct ReconstructRequest {
  std::vector<std::string> matrices;
  std::string rho;
  std::string schema_path;
  std::string input_path;
  std::string original_path;
  std::optional<std::string> attrs;
  std::string out_path;
  bool clip = false;
};

int RunReconstruct(const ReconstructRequest& request, std::ostream& out,
                   std::ostream& err) {
  absl::StatusOr<TableSchema> schema = LoadSchemaFile(request.schema_path);
  if (!schema.ok()) return Fail(schema.status(), err);
  absl::StatusOr<AttributeMatrixSet> set = absl::InvalidArgumentError(
      "one of --matrix or --rho required");
  if (!request.matrices.empty() && !request.rho.empty()) {
    return Fail(absl::InvalidArgumentError("use either --matrix or --rho"), err);
  }
  if (!request.matrices.empty()) {
    absl::StatusOr<AttributeMatrixSet> parsed = ParseMatrixArgs(request.matrices);
    if (!parsed.ok()) return Fail(parsed.status(), err);
    set = BindToSchema(*parsed, *schema);
  } else if (!request.rho.empty()) {
    absl::StatusOr<std::vector<double>> rhos = ParseDoubleList(request.rho);
    if (!rhos.ok()) return Fail(rhos.status(), err);
    absl::StatusOr<RetentionProfile> profile =
        ProfileFor(*rhos, schema->attribute_count());
    if (!profile.ok()) return Fail(profile.status(), err);
    set = BuildRrpSet(*schema, *profile);
  }
  if (!set.ok()) return Fail(set.status(), err);
  absl::StatusOr<Table> released = LoadTableFile(request.input_path, *schema);
  if (!released.ok()) return Fail(released.status(), err);

  const std::vector<std::string> attrs =
      request.attrs ? ParseNameList(*request.attrs) : schema->AttributeNames();
  absl::StatusOr<CrossTab> observed = CrossTabulate(*released, attrs);
  if (!observed.ok()) return Fail(observed.status(), err);
  absl::StatusOr<ReconstructionResult> result =
      ReconstructByInversion(*observed, *set, request.clip);
  if (!result.ok()) return Fail(result.status(), err);

  // Labels of each cell, in CrossTab order.
  std::vector<const AttributeSchema*> selected;
  for (const std::string& name : attrs) {
    selected.push_back(&schema->attribute(*schema->AttributeIndex(name)));
  }
  const std::vector<ValueTuple> cells = EnumerateProductDomain(result->domains);
  auto cell_labels = [&](const ValueTuple& cell) {
    std::vector<std::string> labels;
    for (size_t i = 0; i < cell.size(); ++i) {
      labels.push_back(selected[i]->values()[cell[i]]);
    }
    return labels;
  };

  out << "attributes=" << absl::StrJoin(attrs, ",") << "\n";
  out << "records=" << released->record_count() << "\n";
  out << "cells=" << result->estimates.size() << "\n";
  out << "total_observed=" << Num(observed->total()) << "\n";
  out << "total_estimate=" << Num(result->total()) << "\n";
  out << "negatives_clipped=" << (result->negatives_clipped ? "true" : "false")
      << "\n";
  for (size_t c = 0; c < cells.size(); ++c) {
    out << "estimate[" << absl::StrJoin(cell_labels(cells[c]), "|")
        << "]=" << Num(result->estimates[c]) << "\n";
  }
  if (!request.original_path.empty()) {
    absl::StatusOr<Table> original =
        LoadTableFile(request.original_path, *schema);
    if (!original.ok()) return Fail(original.status(), err);
    absl::StatusOr<CrossTab> x = CrossTabulate(*original, attrs);
    if (!x.ok()) return Fail(x.status(), err);
    absl::StatusOr<double> d = L1Error(
        *x, *result, static_cast<double>(original->record_count()));
    if (!d.ok()) return Fail(d.status(), err);
    out << "l1=" << Num(*d) << "\n";
  }
  if (!request.out_path.empty()) {
    std::ostringstream csv;
    std::vector<std::string> header;
    for (const std::string& name : attrs) header.push_back(EscapeCsvField(name));
    header.push_back("observed");
    header.push_back("estimate");
    csv << absl::StrJoin(header, ",") << "\n";
    for (size_t c = 0; c < cells.size(); ++c) {
      std::vector<std::string> fields;
      for (const std::string& label : cell_labels(cells[c])) {
        fields.push_back(EscapeCsvField(label));
      }
      fields.push_back(Num(observed->counts()[c]));
      fields.push_back(Num(result->estimates[c]));
      csv << absl::StrJoin(fields, ",") << "\n";
    }
    if (absl::Status s = WriteText(request.out_path, csv.str()); !s.ok()) {
      return Fail(s, err);
    }
  }
  return kExitOk;
}

// ---------------------------------------------------------------- experiment

struct ExperimentRequest {
  std::string vary;
  std::string grid;
  int seeds = 20;
  std::string out_path;
  size_t records = 10000;
  double k = 2.0;
  std::string domains = "2,5,10,3";
  std::optional<size_t> attrs;
  double zipf = 1.0;
  bool clip = false;
  std::optional<uint64_t> seed;
  unsigned threads = 0;
};

int RunExperiment(const ExperimentRequest& request, std::ostream& out,
                  std::ostream& err) {
  TrendConfig config;
  if (request.vary == "records") {
    config.vary = TrendVariable::kRecords;
  } else if (request.vary == "attrs") {
    config.vary = TrendVariable::kAttributes;
  } else if (request.vary == "k") {
    config.vary = TrendVariable::kK;
  } else {
    return Fail(absl::InvalidArgumentError(
                    "--vary must be one of records, attrs, k"),
                err);
  }
  absl::StatusOr<std::vector<double>> grid = ParseDoubleList(request.grid);
  if (!grid.ok()) return Fail(grid.status(), err);
  absl::StatusOr<std::vector<size_t>> domains = ParseSizeList(request.domains);
  if (!domains.ok()) return Fail(domains.status(), err);
  config.grid = *grid;
  config.domains = *domains;
  config.records = request.records;
  config.k = request.k;
  config.attribute_count = request.attrs.value_or(domains->size());
  config.seeds = request.seeds;
  config.zipf_exponent = request.zipf;
  config.clip_negatives = request.clip;
  config.seed = request.seed.value_or(FreshSeed());
  config.threads = request.threads;

  absl::StatusOr<std::vector<TrendRow>> rows = RunTrendExperiment(config);
  if (!rows.ok()) return Fail(rows.status(), err);
  std::ostringstream csv;
  csv << "varied_value,rho,epsilon,k,mean_l1,stderr_l1\n";
  for (const TrendRow& row : *rows) {
    csv << Num(row.varied_value) << "," << Num(row.rho) << ","
        << Num(row.epsilon) << "," << Num(row.k) << "," << Num(row.mean_l1)
        << "," << Num(row.stderr_l1) << "\n";
  }
  if (request.out_path.empty()) {
    out << csv.str();
  } else {
    if (absl::Status s = WriteText(request.out_path, csv.str()); !s.ok()) {
      return Fail(s, err);
    }
    out << "rows=" << rows->size() << "\n";
    out << "out=" << request.out_path << "\n";
  }
  out << "seed=" << config.seed << "\n";
  err << "trend over " << request.vary << " with " << config.seeds
      << " seeds\n";
  return kExitOk;
}

}  // namespace

int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err) {
  CLI::App app{"Pk-anonymity and epsilon-DP for PRAM-randomized microdata",
               "pkpram"};
  app.set_version_flag(
      "--version", absl::StrCat("pkpram ", kToolVersion, " (format ",
                                kFormatVersion, ")"));
  app.require_subcommand(1);

  // anonymize
  AnonymizeRequest anon;
  std::string anon_rho;
  uint64_t anon_seed = 0;
  double anon_k = 0, anon_eps = 0, anon_records = 0;
  CLI::App* anonymize = app.add_subcommand("anonymize", "Randomize a table with RRP");
  anonymize->add_option("--schema", anon.schema_path, "Schema JSON")->required();
  anonymize->add_option("--input", anon.input_path, "Private CSV")->required();
  anonymize->add_option("--output", anon.output_path, "Released CSV")->required();
  CLI::Option* o_rho = anonymize->add_option(
      "--rho", anon_rho, "Retention probability (one value or one per attribute)");
  CLI::Option* o_k = anonymize->add_option("--k", anon_k, "Target Pk level");
  CLI::Option* o_eps = anonymize->add_option("--eps", anon_eps, "Target epsilon");
  CLI::Option* o_records = anonymize->add_option(
      "--records", anon_records, "Expected record count used for k");
  CLI::Option* o_seed = anonymize->add_option("--seed", anon_seed, "Master seed");
  anonymize->add_option("--threads", anon.threads, "Worker threads (0 = all)");
  anonymize->add_option("--report", anon.report_path, "Write a JSON report");
  anonymize->add_option("--manifest", anon.manifest_path, "Write a run manifest");
  o_rho->excludes(o_k)->excludes(o_eps);

  // replay
  std::string replay_manifest, replay_output;
  CLI::App* replay = app.add_subcommand("replay", "Re-run an anonymize manifest");
  replay->add_option("--manifest", replay_manifest, "Manifest JSON")->required();
  replay->add_option("--output", replay_output, "Override the output path");

  // report
  ReportRequest report_request;
  CLI::App* report = app.add_subcommand("report", "Privacy level of parameters");
  report->require_subcommand(1);
  CLI::App* report_k = report->add_subcommand("k", "Pk-anonymity level");
  CLI::App* report_eps = report->add_subcommand("eps", "epsilon-DP budget");
  for (CLI::App* sub : {report_k, report_eps}) {
    sub->add_option("--matrix", report_request.matrices,
                    "Matrix file or rrp(m,rho); repeat per attribute");
    sub->add_option("--domains", report_request.domains, "Domain sizes, e.g. 2,5,10");
    sub->add_option("--rho", report_request.rho, "Retention probabilities");
  }
  report_k->add_option("--records", report_request.records, "Record count")
      ->required();

  // params
  ParamsRequest params_request;
  CLI::App* params = app.add_subcommand("params", "Solve for rho");
  params->require_subcommand(1);
  CLI::App* k_to_rho = params->add_subcommand("k-to-rho", "rho from k");
  CLI::App* eps_to_rho = params->add_subcommand("eps-to-rho", "rho from epsilon");
  CLI::App* combine = params->add_subcommand("combine", "rho from k and epsilon");
  for (CLI::App* sub : {k_to_rho, combine}) {
    sub->add_option("--k", params_request.k, "Target k")->required();
    sub->add_option("--records", params_request.records, "Record count")
        ->required();
  }
  for (CLI::App* sub : {eps_to_rho, combine}) {
    sub->add_option("--eps", params_request.eps, "Target epsilon")->required();
  }
  for (CLI::App* sub : {k_to_rho, eps_to_rho, combine}) {
    sub->add_option("--domains", params_request.domains, "Domain sizes")
        ->required();
  }

  // check
  std::string check_schema, check_input;
  size_t check_k = 0;
  CLI::App* check = app.add_subcommand("check", "Deterministic checks");
  check->require_subcommand(1);
  CLI::App* check_kanon = check->add_subcommand("k-anonymity", "Classical k-anonymity");
  check_kanon->add_option("--schema", check_schema, "Schema JSON")->required();
  check_kanon->add_option("--input", check_input, "Table CSV")->required();
  check_kanon->add_option("--k", check_k, "Required multiplicity")->required();

  // oracle
  OracleRequest oracle_request;
  size_t oracle_target = 0;
  double oracle_eps = 0;
  CLI::App* oracle = app.add_subcommand("oracle", "Brute-force verification");
  oracle->require_subcommand(1);
  CLI::App* estimate = oracle->add_subcommand("estimate", "Estimation probability");
  CLI::App* verify_k = oracle->add_subcommand("verify-k", "Worst case vs. tight k");
  CLI::App* verify_eps = oracle->add_subcommand("verify-eps", "Exhaustive DP ratio");
  CLI::App* audit = oracle->add_subcommand("audit", "Random Pk bound audit");
  for (CLI::App* sub : {estimate, verify_k, verify_eps, audit}) {
    sub->add_option("--matrix", oracle_request.matrices,
                    "Matrix file or rrp(m,rho); repeat per attribute")
        ->required();
  }
  estimate->add_option("--schema", oracle_request.schema_path, "Schema JSON");
  estimate->add_option("--private", oracle_request.private_paths,
                       "Knowledge support table (repeatable)")
      ->required();
  estimate->add_option("--weights", oracle_request.weights,
                       "Knowledge probabilities (default uniform)");
  estimate->add_option("--released", oracle_request.released_path,
                       "Released CSV")
      ->required();
  estimate->add_option("--source", oracle_request.source, "Private record r");
  CLI::Option* o_target =
      estimate->add_option("--target", oracle_target, "Released record r'");
  for (CLI::App* sub : {verify_k, verify_eps, audit}) {
    sub->add_option("--records", oracle_request.records, "Record count")
        ->required();
  }
  for (CLI::App* sub : {verify_k, audit}) {
    sub->add_option("--trials", oracle_request.trials, "Random configurations");
    sub->add_option("--seed", oracle_request.seed, "Seed for random configurations");
  }
  CLI::Option* o_oracle_eps =
      verify_eps->add_option("--eps", oracle_eps, "Claimed epsilon");

  // reconstruct
  ReconstructRequest recon_request;
  std::string recon_attrs;
  CLI::App* reconstruct = app.add_subcommand("reconstruct", "Cross-tab reconstruction");
  reconstruct->require_subcommand(1);
  CLI::App* crosstab = reconstruct->add_subcommand("crosstab", "Invert a cross-tab");
  crosstab->add_option("--matrix", recon_request.matrices, "Matrix file or rrp(m,rho)");
  crosstab->add_option("--rho", recon_request.rho, "RRP retention probabilities");
  crosstab->add_option("--schema", recon_request.schema_path, "Schema JSON")
      ->required();
  crosstab->add_option("--input", recon_request.input_path, "Released CSV")
      ->required();
  CLI::Option* o_attrs =
      crosstab->add_option("--attrs", recon_attrs, "Attributes, e.g. sex,age");
  crosstab->add_option("--original", recon_request.original_path,
                       "Private CSV for the L1 error");
  crosstab->add_option("--out", recon_request.out_path, "Write estimates as CSV");
  crosstab->add_flag("--clip", recon_request.clip, "Zero negative estimates");

  // experiment
  ExperimentRequest exp_request;
  uint64_t exp_seed = 0;
  size_t exp_attrs = 0;
  CLI::App* experiment = app.add_subcommand("experiment", "Synthetic experiments");
  experiment->require_subcommand(1);
  CLI::App* trend = experiment->add_subcommand("trend", "Utility trend sweep");
  trend->add_option("--vary", exp_request.vary, "records | attrs | k")->required();
  trend->add_option("--grid", exp_request.grid, "Grid values, comma separated")
      ->required();
  trend->add_option("--seeds", exp_request.seeds, "Repetitions per grid point");
  trend->add_option("--out", exp_request.out_path, "Output CSV");
  trend->add_option("--records", exp_request.records, "Fixed record count");
  trend->add_option("--k", exp_request.k, "Fixed k");
  trend->add_option("--domains", exp_request.domains, "Attribute domain sizes");
  CLI::Option* o_exp_attrs =
      trend->add_option("--attrs", exp_attrs, "Fixed attribute count");
  trend->add_option("--zipf", exp_request.zipf, "Zipf exponent of the data");
  trend->add_flag("--clip", exp_request.clip, "Zero negative estimates");
  CLI::Option* o_exp_seed = trend->add_option("--seed", exp_seed, "Master seed");
  trend->add_option("--threads", exp_request.threads, "Worker threads (0 = all)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  if (anonymize->parsed()) {
    if (!anon_rho.empty()) {
      absl::StatusOr<std::vector<double>> rhos = ParseDoubleList(anon_rho);
      if (!rhos.ok()) return Fail(rhos.status(), err);
      anon.rho = *rhos;
    }
    if (o_k->count() > 0) anon.k = anon_k;
    if (o_eps->count() > 0) anon.eps = anon_eps;
    if (o_records->count() > 0) anon.records = anon_records;
    if (o_seed->count() > 0) anon.seed = anon_seed;
    return RunAnonymize(anon, out, err);
  }
  if (replay->parsed()) {
    return RunReplay(replay_manifest, replay_output, out, err);
  }
  if (report_k->parsed()) return RunReportK(report_request, out, err);
  if (report_eps->parsed()) return RunReportEps(report_request, out, err);
  if (k_to_rho->parsed()) return RunParams("k-to-rho", params_request, out, err);
  if (eps_to_rho->parsed()) {
    return RunParams("eps-to-rho", params_request, out, err);
  }
  if (combine->parsed()) return RunParams("combine", params_request, out, err);
  if (check_kanon->parsed()) {
    return RunCheckKAnonymity(check_schema, check_input, check_k, out, err);
  }
  if (o_target->count() > 0) oracle_request.target = oracle_target;
  if (o_oracle_eps->count() > 0) oracle_request.eps = oracle_eps;
  if (estimate->parsed()) return RunOracleEstimate(oracle_request, out, err);
  if (verify_k->parsed()) return RunOracleVerifyK(oracle_request, out, err);
  if (verify_eps->parsed()) return RunOracleVerifyEps(oracle_request, out, err);
  if (audit->parsed()) return RunOracleAudit(oracle_request, out, err);
  if (crosstab->parsed()) {
    if (o_attrs->count() > 0) recon_request.attrs = recon_attrs;
    return RunReconstruct(recon_request, out, err);
  }
  if (trend->parsed()) {
    if (o_exp_attrs->count() > 0) exp_request.attrs = exp_attrs;
    if (o_exp_seed->count() > 0) exp_request.seed = exp_seed;
    return RunExperiment(exp_request, out, err);
  }
  err << app.help();
  return kExitInvalid;
}

}  // namespace pkpram::cli
