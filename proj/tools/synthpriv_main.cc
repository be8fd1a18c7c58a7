//
// Copyright 2026 The Synthpriv Authors
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
//

// Command-line front end. Exit status: 0 success, 1 certification or
// comparison failure, 2 any error.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "synthpriv/csv.h"
#include "synthpriv/digest.h"
#include "synthpriv/json_io.h"
#include "synthpriv/pipeline.h"
#include "synthpriv/reference_data.h"
#include "synthpriv/regulation.h"
#include "synthpriv/status_macros.h"

namespace synthpriv {
namespace {

namespace fs = std::filesystem;

constexpr int kExitOk = 0;
constexpr int kExitCertificationFailed = 1;
constexpr int kExitError = 2;

struct Options {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<int> level;
  // ingest
  std::string data;
  std::string schema;
  // audit
  std::string synthetic;
  std::string synthetic_schema;
  // report
  std::string input;
  bool matrix = false;
  // reference
  std::size_t rows = kReferenceRows;
};

void PrintTimings(
    const std::vector<std::pair<std::string, double>>& stage_seconds) {
  for (const auto& [stage, seconds] : stage_seconds) {
    std::cerr << absl::StrFormat("[time] %-28s %8.3f s\n", stage, seconds);
  }
}

absl::StatusOr<PipelineConfig> ConfigFromOptions(const Options& o) {
  if (o.config.empty()) {
    return absl::InvalidArgumentError("--config is required");
  }
  SYNTHPRIV_ASSIGN_OR_RETURN(PipelineConfig config,
                             LoadPipelineConfig(o.config));
  if (o.level) OverrideLevel(config, *o.level);
  if (o.seed) OverrideSeed(config, *o.seed);
  if (o.out) config.out_dir = *o.out;
  SYNTHPRIV_RETURN_IF_ERROR(ValidatePipelineConfig(config));
  return config;
}

absl::StatusOr<int> Ingest(const Options& o) {
  std::string data_path = o.data;
  std::string schema_path = o.schema;
  if (!o.config.empty()) {
    SYNTHPRIV_ASSIGN_OR_RETURN(PipelineConfig config,
                               LoadPipelineConfig(o.config));
    if (data_path.empty()) data_path = config.data_path;
    if (schema_path.empty()) schema_path = config.schema_path;
  }
  if (data_path.empty() || schema_path.empty()) {
    return absl::InvalidArgumentError(
        "ingest needs --config, or --data and --schema");
  }
  SYNTHPRIV_ASSIGN_OR_RETURN(Schema schema, LoadSchema(schema_path));
  SYNTHPRIV_ASSIGN_OR_RETURN(Dataset data, LoadCsv(data_path, schema));
  const std::string canonical = FormatCsv(data);
  std::cout << absl::StrFormat("%s: %d rows, %d columns, sha256 %s\n",
                               data_path, data.num_rows(), schema.size(),
                               Sha256Hex(canonical));
  for (const ColumnSpec& c : schema) {
    std::cout << absl::StrFormat("  %-20s %-12s%s\n", c.name,
                                 ColumnKindName(c.kind), c.pii ? " pii" : "");
  }
  if (o.out) {
    std::error_code ec;
    fs::create_directories(*o.out, ec);
    if (ec) {
      return absl::InternalError(
          absl::StrCat("cannot create ", *o.out, ": ", ec.message()));
    }
    SYNTHPRIV_RETURN_IF_ERROR(
        WriteFile((fs::path(*o.out) / "data.csv").string(), canonical));
    SYNTHPRIV_RETURN_IF_ERROR(
        WriteFile((fs::path(*o.out) / "schema.json").string(),
                  DumpJson(SchemaToJson(schema))));
  }
  return kExitOk;
}

int ExitFor(const CertificationReport& report) {
  if (report.certification && !report.certification->pass &&
      report.claimed_level == 4) {
    return kExitCertificationFailed;
  }
  return kExitOk;
}

absl::StatusOr<int> Run(const Options& o) {
  SYNTHPRIV_ASSIGN_OR_RETURN(PipelineConfig config, ConfigFromOptions(o));
  SYNTHPRIV_ASSIGN_OR_RETURN(PipelineResult result, RunPipeline(config));
  std::cout << CertificationReportText(result.report);
  PrintTimings(result.report.stage_seconds);
  return ExitFor(result.report);
}

absl::StatusOr<int> Audit(const Options& o) {
  if (o.synthetic.empty()) {
    return absl::InvalidArgumentError("audit needs --synthetic <csv>");
  }
  SYNTHPRIV_ASSIGN_OR_RETURN(PipelineConfig config, ConfigFromOptions(o));
  SYNTHPRIV_ASSIGN_OR_RETURN(Dataset data, LoadConfiguredData(config));
  std::string schema_path = o.synthetic_schema;
  if (schema_path.empty()) {
    const fs::path sidecar =
        fs::path(o.synthetic).parent_path() / "synthetic.schema.json";
    schema_path = fs::exists(sidecar) ? sidecar.string() : config.schema_path;
  }
  SYNTHPRIV_ASSIGN_OR_RETURN(Schema schema, LoadSchema(schema_path));
  SYNTHPRIV_ASSIGN_OR_RETURN(Dataset published, LoadCsv(o.synthetic, schema));
  SYNTHPRIV_ASSIGN_OR_RETURN(CertificationReport report,
                             RunAudit(config, data, published));
  std::cout << CertificationReportText(report);
  PrintTimings(report.stage_seconds);
  return ExitFor(report);
}

absl::StatusOr<int> Compare(const Options& o) {
  if (o.config.empty()) {
    return absl::InvalidArgumentError("--config is required");
  }
  SYNTHPRIV_ASSIGN_OR_RETURN(CompareConfig config,
                             LoadCompareConfig(o.config));
  if (o.seed) OverrideSeed(config, *o.seed);
  if (o.out) config.out_dir = *o.out;
  SYNTHPRIV_ASSIGN_OR_RETURN(CompareReport report, CompareLevels(config));
  std::cout << CompareReportText(report);
  PrintTimings(report.stage_seconds);
  return report.pass ? kExitOk : kExitCertificationFailed;
}

std::string Num(const Json& j) {
  return j.is_number() ? absl::StrFormat("%.4f", j.get<double>())
                       : std::string("-");
}

// Renders a saved report.json or compare.json.
absl::StatusOr<int> Report(const Options& o) {
  if (o.matrix) {
    std::cout << RiskMatrixFlagsCsv(RegulationMatrix({}));
    return kExitOk;
  }
  std::string path = o.input;
  if (path.empty() && o.out) {
    const fs::path dir(*o.out);
    path = fs::exists(dir / "compare.json") ? (dir / "compare.json").string()
                                            : (dir / "report.json").string();
  }
  if (path.empty()) {
    return absl::InvalidArgumentError(
        "report needs --in <report.json>, --out <run dir> or --matrix");
  }
  SYNTHPRIV_ASSIGN_OR_RETURN(Json j, LoadJson(path));
  try {
    if (j.contains("levels")) {
      std::cout << absl::StrFormat("comparison %s (seed %d, %d replicates)\n",
                                   j.at("config_hash").get<std::string>(),
                                   j.at("seed").get<std::uint64_t>(),
                                   j.at("replicates").get<int>());
      for (const Json& row : j.at("levels")) {
        std::cout << absl::StrFormat(
            "  L%d  MIA %s  AIA uplift %s  PIA error %s  fidelity %s\n",
            row.at("level").get<int>(), Num(row["mia_auc"]),
            Num(row["aia_uplift"]), Num(row["pia_error"]),
            Num(row["fidelity_composite"]));
      }
      const bool pass = j.at("pass").get<bool>();
      std::cout << "overall: " << (pass ? "PASS" : "FAIL") << "\n";
      return pass ? kExitOk : kExitCertificationFailed;
    }
    std::cout << absl::StrFormat(
        "level %d claimed, %d achieved; %s (%d rows)\nconfig %s, seed %d, "
        "version %s\n",
        j.at("claimed_level").get<int>(), j.at("achieved_level").get<int>(),
        j.at("provenance").get<std::string>(),
        j.at("published_rows").get<std::size_t>(),
        j.at("config_hash").get<std::string>(),
        j.at("seed").get<std::uint64_t>(),
        j.at("version").get<std::string>());
    for (const Json& a : j.at("attacks")) {
      std::cout << absl::StrFormat("  %-20s score %s  baseline %s\n",
                                   a.at("attack").get<std::string>(),
                                   Num(a["score"]), Num(a["baseline"]));
    }
    std::cout << "regulation risk\n";
    for (const Json& row : j.at("regulation_matrix")) {
      std::string flags;
      for (const char* reg : kRegulations) {
        absl::StrAppend(&flags, "  ", reg, "=",
                        row.at("flags").at(reg).get<std::string>());
      }
      std::cout << absl::StrFormat("  %-30s%s  [%s]\n",
                                   row.at("name").get<std::string>(),
                                   flags, row.at("status").get<std::string>());
    }
    const Json& cert = j.at("certification");
    if (!cert.is_null() && !cert.at("pass").get<bool>() &&
        j.at("claimed_level").get<int>() == 4) {
      return kExitCertificationFailed;
    }
    return kExitOk;
  } catch (const Json::exception& e) {
    return absl::InvalidArgumentError(
        absl::StrCat(path, ": not a synthpriv report: ", e.what()));
  }
}

absl::StatusOr<int> Reference(const Options& o) {
  if (!o.out) return absl::InvalidArgumentError("reference needs --out <dir>");
  const Dataset data = ReferenceDataset(o.seed.value_or(kReferenceSeed), o.rows);
  std::error_code ec;
  fs::create_directories(*o.out, ec);
  if (ec) {
    return absl::InternalError(
        absl::StrCat("cannot create ", *o.out, ": ", ec.message()));
  }
  SYNTHPRIV_RETURN_IF_ERROR(
      WriteCsv(data, (fs::path(*o.out) / "reference.csv").string()));
  SYNTHPRIV_RETURN_IF_ERROR(
      WriteFile((fs::path(*o.out) / "reference.schema.json").string(),
                DumpJson(SchemaToJson(data.schema()))));
  std::cout << absl::StrFormat("wrote %d rows to %s\n", data.num_rows(),
                               *o.out);
  return kExitOk;
}

int Main(int argc, char** argv) {
  CLI::App app{"synthpriv: tiered privacy protection for tabular data"};
  app.require_subcommand(1);
  Options o;
  std::uint64_t seed = 0;
  std::string out;
  int level = 0;

  auto common = [&](CLI::App* cmd, bool with_level) {
    cmd->add_option("--seed", seed, "master seed (overrides config)");
    cmd->add_option("--out", out, "output directory");
    if (with_level) {
      cmd->add_option("--level", level, "privacy level (overrides config)")
          ->check(CLI::Range(1, 6));
    }
  };

  CLI::App* ingest = app.add_subcommand("ingest", "validate and load a dataset");
  ingest->add_option("--config", o.config, "pipeline config");
  ingest->add_option("--data", o.data, "CSV file");
  ingest->add_option("--schema", o.schema, "schema JSON");
  common(ingest, false);

  CLI::App* run = app.add_subcommand("run", "run one level");
  run->add_option("--config", o.config, "pipeline config")->required();
  common(run, true);

  CLI::App* audit =
      app.add_subcommand("audit", "attack and certify an existing dataset");
  audit->add_option("--config", o.config, "pipeline config")->required();
  audit->add_option("--synthetic", o.synthetic, "dataset to audit")
      ->required();
  audit->add_option("--synthetic-schema", o.synthetic_schema,
                    "schema of the audited dataset");
  common(audit, true);

  CLI::App* compare = app.add_subcommand("compare", "compare levels 1..6");
  compare->add_option("--config", o.config, "comparison config")->required();
  common(compare, false);

  CLI::App* report = app.add_subcommand("report", "render a saved report");
  report->add_option("--in", o.input, "report.json or compare.json");
  report->add_flag("--matrix", o.matrix, "print the regulation-risk table");
  common(report, false);

  CLI::App* reference =
      app.add_subcommand("reference", "write the reference dataset");
  reference->add_option("--rows", o.rows, "row count");
  common(reference, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitError;
  }
  for (CLI::App* cmd : app.get_subcommands()) {
    if (cmd->count("--seed")) o.seed = seed;
    if (cmd->count("--out")) o.out = out;
    if (cmd->get_option_no_throw("--level") != nullptr &&
        cmd->count("--level")) {
      o.level = level;
    }
  }

  absl::StatusOr<int> code;
  if (ingest->parsed()) code = Ingest(o);
  if (run->parsed()) code = Run(o);
  if (audit->parsed()) code = Audit(o);
  if (compare->parsed()) code = Compare(o);
  if (report->parsed()) code = Report(o);
  if (reference->parsed()) code = Reference(o);
  if (!code.ok()) {
    std::cerr << "synthpriv: " << code.status().message() << "\n";
    return kExitError;
  }
  return *code;
}

}  // namespace
}  // namespace synthpriv

int main(int argc, char** argv) { return synthpriv::Main(argc, argv); }
