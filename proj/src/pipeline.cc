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

#include "synthpriv/pipeline.h"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <set>
#include <utility>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"
#include "synthpriv/copula.h"
#include "synthpriv/csv.h"
#include "synthpriv/digest.h"
#include "synthpriv/json_io.h"
#include "synthpriv/random.h"
#include "synthpriv/status_macros.h"

#ifndef SYNTHPRIV_VERSION
#define SYNTHPRIV_VERSION "0.0.0"
#endif

namespace synthpriv {
namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

template <typename T>
absl::StatusOr<T> InStage(std::string_view stage, absl::StatusOr<T> value) {
  if (!value.ok()) {
    return Annotate(value.status(), absl::StrCat("stage ", std::string(stage)));
  }
  return value;
}

absl::Status InStage(std::string_view stage, absl::Status status) {
  return Annotate(status, absl::StrCat("stage ", std::string(stage)));
}

// Records the wall-clock time of one stage on destruction.
class StageTimer {
 public:
  StageTimer(std::vector<std::pair<std::string, double>>& sink,
             std::string name)
      : sink_(sink), name_(std::move(name)), start_(Clock::now()) {}
  ~StageTimer() {
    sink_.emplace_back(
        name_, std::chrono::duration<double>(Clock::now() - start_).count());
  }

 private:
  std::vector<std::pair<std::string, double>>& sink_;
  std::string name_;
  Clock::time_point start_;
};

std::string Resolve(const std::string& base_dir, const std::string& path) {
  if (path.empty() || fs::path(path).is_absolute() || base_dir.empty()) {
    return path;
  }
  return (fs::path(base_dir) / path).lexically_normal().string();
}

// A sub-config may be inlined or given as a path to a JSON file. Paths are
// replaced by the loaded content in `source` so the config hash covers it.
absl::StatusOr<Json> SubConfig(Json& source, const std::string& key,
                               const std::string& base_dir) {
  auto it = source.find(key);
  if (it == source.end() || it->is_null()) return Json();
  if (it->is_string()) {
    SYNTHPRIV_ASSIGN_OR_RETURN(Json loaded,
                               LoadJson(Resolve(base_dir, it->get<std::string>())));
    *it = loaded;
  }
  return *it;
}

absl::StatusOr<std::string> RequiredPath(const Json& json,
                                         const std::string& key,
                                         const std::string& base_dir) {
  auto it = json.find(key);
  if (it == json.end() || !it->is_string()) {
    return absl::InvalidArgumentError(
        absl::StrCat("config: \"", key, "\" must be a file path"));
  }
  return Resolve(base_dir, it->get<std::string>());
}

absl::StatusOr<GeneratorConfig> GeneratorFromJson(const Json& json) {
  if (!json.is_object()) {
    return absl::InvalidArgumentError("config.generator: expected an object");
  }
  GeneratorConfig g;
  const std::string type = json.value("type", "copula");
  if (type == "copula" || type == "gaussian-copula") {
    g.type = GeneratorConfig::Type::kCopula;
  } else if (type == "kdtree") {
    g.type = GeneratorConfig::Type::kKdTree;
  } else {
    return absl::InvalidArgumentError(absl::StrCat(
        "config.generator.type: unknown generator '", type,
        "' (copula, kdtree)"));
  }
  SYNTHPRIV_ASSIGN_OR_RETURN(double min_leaf,
                             NumberOr(json, "min_leaf", g.kdtree.min_leaf));
  SYNTHPRIV_ASSIGN_OR_RETURN(g.kdtree.epsilon,
                             NumberOr(json, "epsilon", g.kdtree.epsilon));
  SYNTHPRIV_ASSIGN_OR_RETURN(double max_depth,
                             NumberOr(json, "max_depth", g.kdtree.max_depth));
  if (!(min_leaf >= 0 && std::isfinite(min_leaf)) ||
      !(max_depth >= 1 && std::isfinite(max_depth))) {
    return absl::InvalidArgumentError(
        "config.generator: min_leaf and max_depth must be finite counts");
  }
  g.kdtree.min_leaf = static_cast<std::size_t>(min_leaf);
  g.kdtree.max_depth = static_cast<int>(max_depth);
  if (json.contains("sample_size")) {
    if (!json["sample_size"].is_number_integer() ||
        json["sample_size"].get<std::int64_t>() < 0) {
      return absl::InvalidArgumentError(
          "config.generator.sample_size: expected a non-negative integer");
    }
    g.sample_size = json["sample_size"].get<std::int64_t>();
  }
  return g;
}

absl::StatusOr<AttackSuiteConfig> AttacksFromJson(const Json& json) {
  AttackSuiteConfig suite;
  if (json.is_null()) return suite;
  if (!json.is_object()) {
    return absl::InvalidArgumentError("config.attacks: expected an object");
  }
  if (auto it = json.find("aia"); it != json.end()) {
    if (!it->is_object()) {
      return absl::InvalidArgumentError("config.attacks.aia: expected object");
    }
    suite.aia.quasi_ids =
        it->value("quasi_ids", std::vector<std::string>{});
    suite.aia.secret = it->value("secret", "");
    suite.aia.k = it->value("k", std::size_t{5});
  }
  if (auto it = json.find("properties"); it != json.end()) {
    if (!it->is_array()) {
      return absl::InvalidArgumentError(
          "config.attacks.properties: expected an array");
    }
    for (const Json& p : *it) {
      if (!p.is_object() || !p.contains("column")) {
        return absl::InvalidArgumentError(
            "config.attacks.properties: entries need a column");
      }
      const std::string column = p.value("column", "");
      std::vector<std::string> statistics;
      if (p.contains("statistics")) {
        statistics = p["statistics"].get<std::vector<std::string>>();
      } else {
        statistics.push_back(p.value("statistic", "mean"));
      }
      for (const std::string& statistic : statistics) {
        auto spec = ParsePropertySpec(column, statistic);
        if (!spec.ok()) {
          return Annotate(spec.status(), "config.attacks.properties");
        }
        suite.properties.push_back(*spec);
      }
    }
  }
  return suite;
}

absl::StatusOr<CalibrationConfig> CalibrationFromJson(const Json& json) {
  if (!json.is_object()) {
    return absl::InvalidArgumentError("config.calibration: expected object");
  }
  CalibrationConfig c;
  c.from_data = json.value("from_data", false);
  c.budget = json.value("budget", c.budget);
  c.sim_n = json.value("sim_n", c.sim_n);
  auto target = json.find("target");
  if (target == json.end()) {
    return absl::InvalidArgumentError("config.calibration.target: missing");
  }
  SYNTHPRIV_ASSIGN_OR_RETURN(c.target,
                             CalibrationTargetFromJson(*target, !c.from_data));
  return c;
}

Json PolicyAuditToJson(const PolicyAudit& audit) {
  Json covered = Json::object();
  for (const auto& [column, action] : audit.covered) covered[column] = action;
  return {{"pii_columns", audit.pii_columns},
          {"covered", std::move(covered)},
          {"uncovered", audit.uncovered},
          {"dangling", audit.dangling},
          {"non_pii", audit.non_pii}};
}

Json FidelityToJson(const FidelityReport& f) {
  Json ks = Json::object();
  for (const auto& [column, value] : f.ks) ks[column] = value;
  Json tv = Json::object();
  for (const auto& [column, value] : f.tv) tv[column] = value;
  Json out = {{"ks", std::move(ks)},
              {"tv", std::move(tv)},
              {"correlation_distance", nullptr},
              {"correlation_normalized", nullptr},
              {"weights",
               {{"ks", f.weights.ks},
                {"tv", f.weights.tv},
                {"correlation", f.weights.correlation}}},
              {"composite", f.composite}};
  if (f.correlation_distance) {
    out["correlation_distance"] = *f.correlation_distance;
    out["correlation_normalized"] = *f.correlation_normalized;
  }
  return out;
}

Json UtilityToJson(const UtilityReport& u) {
  return {{"label", u.task.label},
          {"features", u.task.features},
          {"k", u.k},
          {"acc_real_baseline", u.acc_real_baseline},
          {"acc_synthetic", u.acc_synthetic},
          {"acc_augmented", u.acc_augmented},
          {"uplift", u.uplift}};
}

class ArtifactWriter {
 public:
  ArtifactWriter(const std::string& dir, std::vector<std::string>& names)
      : dir_(dir), names_(names) {}

  absl::Status Prepare() {
    if (dir_.empty()) return absl::OkStatus();
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec) {
      return absl::InternalError(
          absl::StrCat("cannot create ", dir_, ": ", ec.message()));
    }
    return absl::OkStatus();
  }

  absl::Status Text(const std::string& name, std::string_view contents) {
    names_.push_back(name);
    if (dir_.empty()) return absl::OkStatus();
    return WriteFile((fs::path(dir_) / name).string(), contents);
  }

  absl::Status Csv(const std::string& name, const Dataset& dataset) {
    return Text(name, FormatCsv(dataset));
  }

  absl::Status JsonFile(const std::string& name, const Json& json) {
    return Text(name, DumpJson(json));
  }

  absl::Status TextUnlisted(const std::string& name,
                            std::string_view contents) {
    if (dir_.empty()) return absl::OkStatus();
    return WriteFile((fs::path(dir_) / name).string(), contents);
  }

  absl::Status JsonFileUnlisted(const std::string& name, const Json& json) {
    return TextUnlisted(name, DumpJson(json));
  }

 private:
  std::string dir_;
  std::vector<std::string>& names_;
};

std::string Fixed(double v) { return absl::StrFormat("%.4f", v); }

bool HasColumns(const Schema& schema, const AttributeInferenceConfig& aia) {
  if (!FindColumn(schema, aia.secret)) return false;
  for (const std::string& q : aia.quasi_ids) {
    if (!FindColumn(schema, q)) return false;
  }
  return true;
}

// Attacks, certification, metrics and report emission shared by pipeline
// runs and audits. `published` may be relabelled when level 4 is granted.
absl::Status Assess(const PipelineConfig& config, const Dataset& members,
                    const Dataset& holdout, Dataset& published,
                    CertificationReport& report, ArtifactWriter& out) {
  auto& timings = report.stage_seconds;
  AttackSuiteConfig attacks = config.attacks;
  if (!attacks.aia.secret.empty() &&
      !HasColumns(published.schema(), attacks.aia)) {
    report.warnings.push_back(absl::StrCat(
        "attribute inference skipped: published data lacks '",
        attacks.aia.secret, "' or a quasi-identifier"));
    attacks.aia.secret.clear();
  }
  {
    StageTimer t(timings, "attack");
    SYNTHPRIV_ASSIGN_OR_RETURN(
        report.attacks,
        InStage("attack", RunAttackSuite(published, members, holdout, attacks,
                                         DeriveSeed(config.seed, "attack"))));
  }
  report.achieved_level = config.level;
  if (config.thresholds.has_value() && config.level >= 4) {
    SYNTHPRIV_ASSIGN_OR_RETURN(
        report.certification,
        InStage("certify", Certify(report.attacks, *config.thresholds)));
    for (const std::string& w : report.certification->warnings) {
      report.warnings.push_back(w);
    }
    if (config.level == 4) {
      if (report.certification->pass) {
        published = published.WithProvenance(
            absl::StrCat("level4:", published.provenance()));
      } else {
        report.achieved_level = 3;
      }
    } else if (!report.certification->pass) {
      report.warnings.push_back(
          "certification thresholds exceeded; simulated data is reported at "
          "its own level");
    }
  }
  {
    StageTimer t(timings, "metrics");
    SYNTHPRIV_ASSIGN_OR_RETURN(
        report.fidelity,
        InStage("fidelity", Fidelity(DropIdentifiers(members), published,
                                     config.fidelity_weights)));
    if (config.utility.has_value()) {
      SYNTHPRIV_ASSIGN_OR_RETURN(
          report.utility,
          InStage("utility", UtilityTstr(members, published, holdout,
                                         *config.utility, config.utility_k)));
    }
  }
  report.provenance = published.provenance();
  report.published_rows = published.num_rows();
  report.risk = RegulationMatrix(report.attacks);

  SYNTHPRIV_RETURN_IF_ERROR(
      InStage("output", out.Csv("synthetic.csv", published)));
  SYNTHPRIV_RETURN_IF_ERROR(InStage(
      "output",
      out.JsonFile("synthetic.schema.json", SchemaToJson(published.schema()))));
  // The report lists itself so the artifact list is complete.
  report.artifacts.push_back("report.json");
  report.artifacts.push_back("report.txt");
  SYNTHPRIV_RETURN_IF_ERROR(InStage(
      "output", out.JsonFileUnlisted("report.json",
                                     CertificationReportToJson(report))));
  return InStage("output", out.TextUnlisted("report.txt",
                                            CertificationReportText(report)));
}

}  // namespace

const AttackReport* CertificationReport::Find(AttackKind kind) const {
  for (const AttackReport& r : attacks) {
    if (r.attack == kind) return &r;
  }
  return nullptr;
}

absl::StatusOr<PipelineConfig> PipelineConfigFromJson(
    const Json& json, const std::string& base_dir) {
  if (!json.is_object()) {
    return absl::InvalidArgumentError("config: expected a JSON object");
  }
  try {
    PipelineConfig config;
    config.source = json;
    Json& source = config.source;
    if (json.contains("data")) {
      SYNTHPRIV_ASSIGN_OR_RETURN(config.data_path,
                                 RequiredPath(json, "data", base_dir));
      SYNTHPRIV_ASSIGN_OR_RETURN(config.schema_path,
                                 RequiredPath(json, "schema", base_dir));
    }
    config.level = json.value("level", 1);
    if (json.contains("seed")) {
      if (!json["seed"].is_number_unsigned() &&
          !(json["seed"].is_number_integer() &&
            json["seed"].get<std::int64_t>() >= 0)) {
        return absl::InvalidArgumentError(
            "config.seed: expected a non-negative integer");
      }
      config.seed = json["seed"].get<std::uint64_t>();
    }
    config.out_dir = json.value("out", "");
    source.erase("out");
    config.member_fraction = json.value("member_fraction", 0.5);

    SYNTHPRIV_ASSIGN_OR_RETURN(Json obscure,
                               SubConfig(source, "obscure", base_dir));
    if (!obscure.is_null()) {
      SYNTHPRIV_ASSIGN_OR_RETURN(config.obscure, PolicyFromJson(obscure));
    }
    SYNTHPRIV_ASSIGN_OR_RETURN(Json noise, SubConfig(source, "noise", base_dir));
    if (!noise.is_null()) {
      SYNTHPRIV_ASSIGN_OR_RETURN(config.noise, NoiseConfigFromJson(noise));
    }
    SYNTHPRIV_ASSIGN_OR_RETURN(Json generator,
                               SubConfig(source, "generator", base_dir));
    if (!generator.is_null()) {
      SYNTHPRIV_ASSIGN_OR_RETURN(config.generator,
                                 GeneratorFromJson(generator));
    }
    SYNTHPRIV_ASSIGN_OR_RETURN(Json thresholds,
                               SubConfig(source, "thresholds", base_dir));
    if (!thresholds.is_null()) {
      SYNTHPRIV_ASSIGN_OR_RETURN(config.thresholds,
                                 ThresholdsFromJson(thresholds));
    }
    SYNTHPRIV_ASSIGN_OR_RETURN(Json attacks,
                               SubConfig(source, "attacks", base_dir));
    SYNTHPRIV_ASSIGN_OR_RETURN(config.attacks, AttacksFromJson(attacks));
    SYNTHPRIV_ASSIGN_OR_RETURN(Json simulator,
                               SubConfig(source, "simulator", base_dir));
    if (!simulator.is_null()) {
      SYNTHPRIV_ASSIGN_OR_RETURN(config.simulator,
                                 SimulatorSpecFromJson(simulator));
    }
    SYNTHPRIV_ASSIGN_OR_RETURN(Json calibration,
                               SubConfig(source, "calibration", base_dir));
    if (!calibration.is_null()) {
      SYNTHPRIV_ASSIGN_OR_RETURN(config.calibration,
                                 CalibrationFromJson(calibration));
    }
    if (json.contains("simulate_rows")) {
      config.simulate_rows = json["simulate_rows"].get<std::int64_t>();
    }
    SYNTHPRIV_ASSIGN_OR_RETURN(config.scenarios,
                               SubConfig(source, "scenarios", base_dir));
    SYNTHPRIV_ASSIGN_OR_RETURN(Json sweep,
                               SubConfig(source, "corner_sweep", base_dir));
    if (sweep.is_boolean()) {
      config.corner_sweep = sweep.get<bool>();
    } else if (sweep.is_object()) {
      config.corner_sweep = true;
      config.corner_extras = sweep.value("extras", Json::object());
    }
    if (auto it = json.find("fidelity_weights"); it != json.end()) {
      config.fidelity_weights.ks = it->value("ks", 1.0);
      config.fidelity_weights.tv = it->value("tv", 1.0);
      config.fidelity_weights.correlation = it->value("correlation", 1.0);
    }
    if (auto it = json.find("utility"); it != json.end() && !it->is_null()) {
      UtilityTask task;
      task.label = it->value("label", "");
      task.features = it->value("features", std::vector<std::string>{});
      config.utility = task;
      config.utility_k = it->value("k", std::size_t{5});
    }
    SYNTHPRIV_RETURN_IF_ERROR(ValidatePipelineConfig(config));
    return config;
  } catch (const Json::exception& e) {
    return absl::InvalidArgumentError(absl::StrCat("config: ", e.what()));
  }
}

absl::StatusOr<PipelineConfig> LoadPipelineConfig(const std::string& path) {
  SYNTHPRIV_ASSIGN_OR_RETURN(Json json, LoadJson(path));
  auto config =
      PipelineConfigFromJson(json, fs::path(path).parent_path().string());
  if (!config.ok()) return Annotate(config.status(), path);
  return config;
}

absl::Status ValidatePipelineConfig(const PipelineConfig& config) {
  if (config.level < 1 || config.level > 6) {
    return absl::InvalidArgumentError(
        absl::StrCat("level must be in 1..6, got ", config.level));
  }
  if (!(config.member_fraction > 0.0 && config.member_fraction < 1.0)) {
    return absl::InvalidArgumentError("member_fraction must lie in (0, 1)");
  }
  auto need = [&](bool present, std::string_view what) -> absl::Status {
    if (present) return absl::OkStatus();
    return absl::InvalidArgumentError(absl::StrCat(
        "level ", config.level, " requires \"", std::string(what), "\""));
  };
  switch (config.level) {
    case 2:
      SYNTHPRIV_RETURN_IF_ERROR(need(config.noise.has_value(), "noise"));
      break;
    case 3:
      SYNTHPRIV_RETURN_IF_ERROR(
          need(config.generator.has_value(), "generator"));
      break;
    case 4:
      SYNTHPRIV_RETURN_IF_ERROR(
          need(config.generator.has_value(), "generator"));
      SYNTHPRIV_RETURN_IF_ERROR(
          need(config.thresholds.has_value(), "thresholds"));
      break;
    case 5:
      SYNTHPRIV_RETURN_IF_ERROR(
          need(config.simulator.has_value(), "simulator"));
      SYNTHPRIV_RETURN_IF_ERROR(
          need(config.calibration.has_value(), "calibration"));
      break;
    case 6:
      SYNTHPRIV_RETURN_IF_ERROR(
          need(config.simulator.has_value(), "simulator"));
      break;
    default:
      break;
  }
  if (config.utility.has_value() &&
      (config.utility->label.empty() || config.utility->features.empty())) {
    return absl::InvalidArgumentError(
        "utility needs a label and at least one feature");
  }
  return absl::OkStatus();
}

void OverrideLevel(PipelineConfig& config, int level) {
  config.level = level;
  config.source["level"] = level;
}

void OverrideSeed(PipelineConfig& config, std::uint64_t seed) {
  config.seed = seed;
  config.source["seed"] = seed;
}

std::string ConfigHash(const PipelineConfig& config) {
  return Sha256Hex(config.source.dump()).substr(0, 16);
}

absl::StatusOr<Dataset> LoadConfiguredData(const PipelineConfig& config) {
  if (config.data_path.empty()) {
    return absl::InvalidArgumentError("config names no \"data\" file");
  }
  SYNTHPRIV_ASSIGN_OR_RETURN(Schema schema, LoadSchema(config.schema_path));
  return LoadCsv(config.data_path, schema);
}

absl::StatusOr<std::vector<AttackReport>> RunAttackSuite(
    const Dataset& published, const Dataset& members, const Dataset& holdout,
    const AttackSuiteConfig& config, std::uint64_t seed) {
  std::vector<AttackReport> reports;
  SYNTHPRIV_ASSIGN_OR_RETURN(
      AttackReport mia,
      RunMembershipInference(published, members, holdout, DistanceConfig{},
                             seed));
  reports.push_back(std::move(mia));
  if (!config.aia.secret.empty()) {
    SYNTHPRIV_ASSIGN_OR_RETURN(AttackReport aia,
                               RunAttributeInference(published, members,
                                                     config.aia));
    aia.seed = seed;
    reports.push_back(std::move(aia));
  }
  if (!config.properties.empty()) {
    SYNTHPRIV_ASSIGN_OR_RETURN(
        AttackReport pia,
        RunPropertyInference(published, members, config.properties));
    pia.seed = seed;
    reports.push_back(std::move(pia));
  }
  return reports;
}

absl::StatusOr<PipelineResult> RunPipeline(const PipelineConfig& config) {
  SYNTHPRIV_ASSIGN_OR_RETURN(Dataset data,
                             InStage("ingest", LoadConfiguredData(config)));
  return RunPipelineOn(config, data);
}

absl::StatusOr<PipelineResult> RunPipelineOn(const PipelineConfig& config,
                                             const Dataset& data) {
  SYNTHPRIV_RETURN_IF_ERROR(ValidatePipelineConfig(config));
  CertificationReport report;
  report.claimed_level = config.level;
  report.version = SYNTHPRIV_VERSION;
  report.config_hash = ConfigHash(config);
  report.seed = config.seed;
  report.input_digest = Sha256Hex(FormatCsv(data));
  auto& timings = report.stage_seconds;

  ArtifactWriter out(config.out_dir, report.artifacts);
  SYNTHPRIV_RETURN_IF_ERROR(InStage("output", out.Prepare()));

  std::optional<SplitResult> split;
  {
    StageTimer t(timings, "split");
    SYNTHPRIV_ASSIGN_OR_RETURN(
        split, InStage("split", SplitHoldout(data, config.member_fraction,
                                             DeriveSeed(config.seed, "split"))));
  }
  const Dataset& members = split->members;
  const Dataset& holdout = split->non_members;
  std::optional<Dataset> published;
  std::string note;

  switch (config.level) {
    case 1:
    case 2: {
      StageTimer t(timings, "obscure");
      const ObscurePolicy policy = config.obscure.value_or(ObscurePolicy{});
      report.policy_audit = AuditPolicy(members, policy);
      SYNTHPRIV_ASSIGN_OR_RETURN(published,
                                 InStage("obscure", Obscure(members, policy)));
      if (config.level == 2) {
        StageTimer tn(timings, "noise");
        SYNTHPRIV_ASSIGN_OR_RETURN(
            published,
            InStage("noise",
                    ApplyNoiseConfig(*published, *config.noise,
                                     DeriveSeed(config.seed, "noise"))));
        report.total_epsilon = TotalEpsilon(*config.noise);
        report.details["noise"] = NoiseConfigToJson(*config.noise);
      }
      break;
    }
    case 3:
    case 4: {
      const GeneratorConfig& g = *config.generator;
      const Dataset training = DropIdentifiers(members);
      const std::int64_t n = g.sample_size.value_or(
          static_cast<std::int64_t>(members.num_rows()));
      GeneratorModel model;
      {
        StageTimer t(timings, "fit");
        if (g.type == GeneratorConfig::Type::kCopula) {
          SYNTHPRIV_ASSIGN_OR_RETURN(CopulaModel copula,
                                     InStage("fit", FitCopula(training)));
          for (const std::string& w : copula.warnings) {
            report.warnings.push_back(w);
          }
          model = std::move(copula);
          note = "Gaussian copula";
        } else {
          KdTreeOptions options = g.kdtree;
          options.seed = DeriveSeed(config.seed, "fit");
          SYNTHPRIV_ASSIGN_OR_RETURN(KdTreeModel tree,
                                     InStage("fit", FitKdTree(training, options)));
          if (std::isfinite(tree.epsilon)) report.total_epsilon = tree.epsilon;
          model = std::move(tree);
          note = kKdVariantNote;
        }
      }
      StageTimer t(timings, "sample");
      const std::uint64_t sample_seed = DeriveSeed(config.seed, "sample");
      if (const auto* copula = std::get_if<CopulaModel>(&model)) {
        SYNTHPRIV_ASSIGN_OR_RETURN(
            published, InStage("sample", SampleCopula(*copula, n, sample_seed)));
      } else {
        SYNTHPRIV_ASSIGN_OR_RETURN(
            published, InStage("sample", SampleKdTree(std::get<KdTreeModel>(model),
                                                      n, sample_seed)));
      }
      SYNTHPRIV_RETURN_IF_ERROR(
          InStage("output", out.JsonFile("model.json", ModelToJson(model))));
      break;
    }
    case 5:
    case 6: {
      SimulatorSpec spec = *config.simulator;
      spec.calibrated = false;
      if (config.level == 5) {
        StageTimer t(timings, "calibrate");
        const CalibrationConfig& c = *config.calibration;
        CalibrationTarget target = c.target;
        if (c.from_data) {
          // Only these aggregates of the member split reach the simulator.
          SYNTHPRIV_ASSIGN_OR_RETURN(
              target, InStage("calibrate",
                              TargetFromData(members, c.target.moments)));
        }
        CalibrationOptions options;
        options.budget = c.budget;
        options.sim_n = c.sim_n;
        options.seed = DeriveSeed(config.seed, "calibrate");
        SYNTHPRIV_ASSIGN_OR_RETURN(
            CalibrationResult result,
            InStage("calibrate", Calibrate(spec, target, options)));
        report.calibration_loss = result.loss;
        report.details["calibration"] = {
            {"initial_loss", result.initial_loss},
            {"loss", result.loss},
            {"evaluations", result.trace.size()},
            {"theta", result.theta}};
        spec = result.spec;
        SYNTHPRIV_RETURN_IF_ERROR(InStage(
            "output", out.Text("calibration_trace.csv",
                               CalibrationTraceCsv(*config.simulator, result))));
        SYNTHPRIV_RETURN_IF_ERROR(InStage(
            "output", out.JsonFile("calibration_target.json",
                                   CalibrationTargetToJson(target))));
        SYNTHPRIV_RETURN_IF_ERROR(InStage(
            "output",
            out.JsonFile("calibrated_spec.json", SimulatorSpecToJson(spec))));
      }
      StageTimer t(timings, "simulate");
      const std::int64_t n = config.simulate_rows.value_or(
          static_cast<std::int64_t>(members.num_rows()));
      SYNTHPRIV_ASSIGN_OR_RETURN(
          published, InStage("simulate",
                             Simulate(spec, n, DeriveSeed(config.seed,
                                                          "simulate"))));
      note = config.level == 5 ? "calibrated simulation"
                               : "uncalibrated simulation";
      if (config.level == 6 && !config.scenarios.is_null()) {
        SYNTHPRIV_ASSIGN_OR_RETURN(
            std::vector<Scenario> scenarios,
            InStage("plant",
                    ScenariosFromJson(config.scenarios, published->schema())));
        SYNTHPRIV_ASSIGN_OR_RETURN(
            PlantResult planted,
            InStage("plant", PlantScenarios(*published, scenarios,
                                            DeriveSeed(config.seed, "plant"))));
        report.details["planted_rows"] = planted.ground_truth.size();
        SYNTHPRIV_RETURN_IF_ERROR(InStage(
            "output", out.JsonFile("ground_truth.json",
                                   GroundTruthToJson(planted.ground_truth))));
        published = std::move(planted.dataset);
      }
      if (config.level == 6 && config.corner_sweep) {
        std::map<std::string, std::vector<Cell>> extras;
        if (config.corner_extras.is_object()) {
          SYNTHPRIV_ASSIGN_OR_RETURN(
              extras, InStage("corner-sweep",
                              ExtrasFromJson(config.corner_extras,
                                             published->schema())));
        }
        SYNTHPRIV_ASSIGN_OR_RETURN(
            CornerSweep sweep,
            InStage("corner-sweep",
                    CornerCaseSweep(published->schema(), extras)));
        report.details["corner_sweep"] = {{"rows", sweep.dataset.num_rows()},
                                          {"skipped", sweep.skipped}};
        SYNTHPRIV_RETURN_IF_ERROR(
            InStage("output", out.Csv("corner_cases.csv", sweep.dataset)));
      }
      break;
    }
    default:
      return absl::InvalidArgumentError("unreachable level");
  }
  report.generator_note = note;
  SYNTHPRIV_RETURN_IF_ERROR(
      Assess(config, members, holdout, *published, report, out));
  return PipelineResult{std::move(report), std::move(*published), members,
                        holdout};
}

absl::StatusOr<CertificationReport> RunAudit(const PipelineConfig& config,
                                             const Dataset& data,
                                             const Dataset& published) {
  SYNTHPRIV_RETURN_IF_ERROR(ValidatePipelineConfig(config));
  CertificationReport report;
  report.claimed_level = config.level;
  report.version = SYNTHPRIV_VERSION;
  report.config_hash = ConfigHash(config);
  report.seed = config.seed;
  report.input_digest = Sha256Hex(FormatCsv(data));
  report.generator_note = "external dataset (audit)";
  ArtifactWriter out(config.out_dir, report.artifacts);
  SYNTHPRIV_RETURN_IF_ERROR(InStage("output", out.Prepare()));
  std::optional<SplitResult> split;
  {
    StageTimer t(report.stage_seconds, "split");
    SYNTHPRIV_ASSIGN_OR_RETURN(
        split, InStage("split", SplitHoldout(data, config.member_fraction,
                                             DeriveSeed(config.seed, "split"))));
  }
  Dataset copy = published;
  SYNTHPRIV_RETURN_IF_ERROR(
      Assess(config, split->members, split->non_members, copy, report, out));
  return report;
}
Json CertificationReportToJson(const CertificationReport& report) {
  Json attacks = Json::array();
  for (const AttackReport& a : report.attacks) {
    attacks.push_back(AttackReportToJson(a));
  }
  Json out = {{"toolkit", "synthpriv"},
              {"version", report.version},
              {"config_hash", report.config_hash},
              {"seed", report.seed},
              {"input_digest", report.input_digest},
              {"claimed_level", report.claimed_level},
              {"achieved_level", report.achieved_level},
              {"provenance", report.provenance},
              {"published_rows", report.published_rows},
              {"generator", report.generator_note},
              {"attacks", std::move(attacks)},
              {"certification", nullptr},
              {"policy_audit", nullptr},
              {"fidelity", nullptr},
              {"utility", nullptr},
              {"total_epsilon", nullptr},
              {"calibration_loss", nullptr},
              {"details", report.details},
              {"regulation_matrix", RiskMatrixToJson(report.risk)},
              {"artifacts", report.artifacts},
              {"warnings", report.warnings}};
  if (report.certification) {
    out["certification"] = CertificationToJson(*report.certification);
  }
  if (report.policy_audit) {
    out["policy_audit"] = PolicyAuditToJson(*report.policy_audit);
  }
  if (report.fidelity) out["fidelity"] = FidelityToJson(*report.fidelity);
  if (report.utility) out["utility"] = UtilityToJson(*report.utility);
  if (report.total_epsilon) out["total_epsilon"] = *report.total_epsilon;
  if (report.calibration_loss) {
    out["calibration_loss"] = *report.calibration_loss;
  }
  return out;
}

std::string CertificationReportText(const CertificationReport& report) {
  std::string out = "synthpriv certification report\n";
  auto line = [&](std::string_view key, const std::string& value) {
    absl::StrAppend(&out, absl::StrFormat("  %-16s %s\n", std::string(key),
                                          value));
  };
  line("claimed level", absl::StrCat(report.claimed_level));
  std::string achieved = absl::StrCat(report.achieved_level);
  if (report.certification && !report.certification->pass) {
    absl::StrAppend(&achieved, " (certification failed: ",
                    absl::StrJoin(report.certification->failing, ", "), ")");
  }
  line("achieved level", achieved);
  line("provenance", report.provenance);
  if (!report.generator_note.empty()) line("generator", report.generator_note);
  line("rows published", absl::StrCat(report.published_rows));
  if (report.total_epsilon) {
    line("total epsilon", absl::StrFormat("%g", *report.total_epsilon));
  }
  if (report.calibration_loss) {
    line("calibration L", absl::StrFormat("%.6g", *report.calibration_loss));
  }
  line("seed", absl::StrCat(report.seed));
  line("config hash", report.config_hash);
  line("version", report.version);

  absl::StrAppend(&out, "\nattacks\n",
                  absl::StrFormat("  %-18s %-18s %8s %8s %8s\n", "attack",
                                  "algorithm", "score", "baseline", "uplift"));
  for (const AttackReport& a : report.attacks) {
    absl::StrAppend(&out, absl::StrFormat("  %-18s %-18s %8s %8s %8s\n",
                                          AttackName(a.attack), a.algorithm,
                                          Fixed(a.score), Fixed(a.baseline),
                                          Fixed(a.uplift())));
    for (const StatisticRecovery& s : a.statistics) {
      if (s.label.ends_with(":histogram")) {
        absl::StrAppend(&out, absl::StrFormat("    %-24s total variation %s\n",
                                              s.label, Fixed(s.error)));
        continue;
      }
      absl::StrAppend(&out,
                      absl::StrFormat("    %-24s real %-12g synth %-12g "
                                      "error %s\n",
                                      s.label, s.real, s.estimate,
                                      Fixed(s.error)));
    }
  }
  if (report.certification) {
    absl::StrAppend(&out, "\ncertification: ",
                    report.certification->pass ? "PASS" : "FAIL", "\n");
    for (const AttackVerdict& v : report.certification->verdicts) {
      absl::StrAppend(
          &out, absl::StrFormat("  %-28s value %s  threshold %s  margin %s  %s\n",
                                v.subject, Fixed(v.value), Fixed(v.threshold),
                                Fixed(v.margin), v.pass ? "pass" : "FAIL"));
    }
  }
  if (report.fidelity) {
    absl::StrAppend(&out, "\nfidelity (distance, 0 = identical)\n");
    for (const auto& [column, v] : report.fidelity->ks) {
      absl::StrAppend(&out, absl::StrFormat("  KS %-20s %s\n", column, Fixed(v)));
    }
    for (const auto& [column, v] : report.fidelity->tv) {
      absl::StrAppend(&out, absl::StrFormat("  TV %-20s %s\n", column, Fixed(v)));
    }
    if (report.fidelity->correlation_distance) {
      absl::StrAppend(&out,
                      absl::StrFormat("  correlation distance   %s\n",
                                      Fixed(*report.fidelity->correlation_distance)));
    }
    absl::StrAppend(&out, absl::StrFormat("  composite              %s\n",
                                          Fixed(report.fidelity->composite)));
  }
  if (report.utility) {
    const UtilityReport& u = *report.utility;
    absl::StrAppend(
        &out, "\nutility (k-NN, label ", u.task.label, ")\n",
        absl::StrFormat("  real %s  synthetic %s  augmented %s  uplift %s\n",
                        Fixed(u.acc_real_baseline), Fixed(u.acc_synthetic),
                        Fixed(u.acc_augmented), Fixed(u.uplift)));
  }
  absl::StrAppend(&out, "\nregulation risk\n", RiskMatrixText(report.risk));
  if (!report.warnings.empty()) {
    absl::StrAppend(&out, "\nwarnings\n");
    for (const std::string& w : report.warnings) {
      absl::StrAppend(&out, "  ", w, "\n");
    }
  }
  return out;
}

std::uint64_t ReplicateSeed(std::uint64_t seed, int index) {
  return DeriveSeed(seed, absl::StrCat("replicate-", index));
}

absl::StatusOr<CompareConfig> LoadCompareConfig(const std::string& path) {
  SYNTHPRIV_ASSIGN_OR_RETURN(Json json, LoadJson(path));
  const std::string base = fs::path(path).parent_path().string();
  try {
    CompareConfig config;
    config.source = json;
    config.source.erase("out");
    config.replicates = json.value("replicates", 1);
    config.seed = json.value("seed", std::uint64_t{0});
    config.tolerance = json.value("tolerance", 0.02);
    config.out_dir = json.value("out", "");
    if (config.replicates < 1) {
      return absl::InvalidArgumentError(
          absl::StrCat(path, ": replicates must be >= 1"));
    }
    auto levels = json.find("levels");
    if (levels == json.end() || !levels->is_object()) {
      return absl::InvalidArgumentError(
          absl::StrCat(path, ": \"levels\" must map 1..6 to config files"));
    }
    for (int level = 1; level <= 6; ++level) {
      const std::string key = absl::StrCat(level);
      auto it = levels->find(key);
      if (it == levels->end() || !it->is_string()) {
        return absl::InvalidArgumentError(
            absl::StrCat(path, ": levels.", key, " missing"));
      }
      SYNTHPRIV_ASSIGN_OR_RETURN(
          PipelineConfig c,
          LoadPipelineConfig(Resolve(base, it->get<std::string>())));
      if (c.level != level) {
        return absl::InvalidArgumentError(absl::StrCat(
            path, ": levels.", key, " points at a level ", c.level,
            " config"));
      }
      config.source["levels"][key] = c.source;
      config.levels.emplace(level, std::move(c));
    }
    return config;
  } catch (const Json::exception& e) {
    return absl::InvalidArgumentError(absl::StrCat(path, ": ", e.what()));
  }
}

void OverrideSeed(CompareConfig& config, std::uint64_t seed) {
  config.seed = seed;
  config.source["seed"] = seed;
}

absl::StatusOr<CompareReport> CompareLevels(const CompareConfig& config) {
  for (int level = 1; level <= 6; ++level) {
    if (!config.levels.contains(level)) {
      return absl::InvalidArgumentError(
          absl::StrCat("compare needs a config for level ", level));
    }
  }
  if (config.replicates < 1) {
    return absl::InvalidArgumentError("replicates must be >= 1");
  }
  CompareReport report;
  report.replicates = config.replicates;
  report.seed = config.seed;
  report.tolerance = config.tolerance;
  report.config_hash = Sha256Hex(config.source.dump()).substr(0, 16);

  std::vector<TargetMoment> targeted;
  const PipelineConfig& level5 = config.levels.at(5);
  if (level5.calibration.has_value()) {
    targeted = level5.calibration->target.moments;
    for (const TargetMoment& m : targeted) {
      report.calibrated_statistics.push_back(m.Label());
    }
  }

  std::map<std::pair<std::string, std::string>, Dataset> cache;
  for (int level = 1; level <= 6; ++level) {
    const PipelineConfig& base = config.levels.at(level);
    auto key = std::make_pair(base.data_path, base.schema_path);
    if (!cache.contains(key)) {
      SYNTHPRIV_ASSIGN_OR_RETURN(
          Dataset d,
          InStage(absl::StrCat("level ", level, " ingest"),
                  LoadConfiguredData(base)));
      cache.emplace(key, std::move(d));
    }
    const Dataset& data = cache.at(key);

    LevelRow row;
    row.level = level;
    double targeted_sum = 0.0;
    for (int rep = 0; rep < config.replicates; ++rep) {
      PipelineConfig run = base;
      OverrideSeed(run, ReplicateSeed(config.seed, rep));
      run.out_dir =
          config.out_dir.empty()
              ? ""
              : (fs::path(config.out_dir) / absl::StrCat("level", level) /
                 absl::StrCat("rep", rep))
                    .string();
      SYNTHPRIV_ASSIGN_OR_RETURN(
          PipelineResult result,
          InStage(absl::StrCat("level ", level, " replicate ", rep),
                  RunPipelineOn(run, data)));
      const CertificationReport& r = result.report;
      for (const auto& [stage, seconds] : r.stage_seconds) {
        report.stage_seconds.emplace_back(
            absl::StrCat("level", level, "/", stage), seconds);
      }
      if (const AttackReport* a = r.Find(AttackKind::kMembership)) {
        row.mia_auc += a->score;
      }
      if (const AttackReport* a = r.Find(AttackKind::kAttribute)) {
        row.aia_uplift += a->uplift();
      }
      if (const AttackReport* a = r.Find(AttackKind::kProperty)) {
        row.pia_error += a->score;
      }
      if (r.fidelity) row.fidelity += r.fidelity->composite;
      row.achieved_levels.push_back(r.achieved_level);
      if ((level == 5 || level == 6) && !targeted.empty()) {
        double sum = 0.0;
        for (const TargetMoment& m : targeted) {
          SYNTHPRIV_ASSIGN_OR_RETURN(double real,
                                     ComputeMoment(result.members, m));
          SYNTHPRIV_ASSIGN_OR_RETURN(double synth,
                                     ComputeMoment(result.published, m));
          sum += std::fabs(synth - real) / std::max(std::fabs(real), 1e-6);
        }
        targeted_sum += sum / static_cast<double>(targeted.size());
      }
    }
    const double reps = static_cast<double>(config.replicates);
    row.mia_auc /= reps;
    row.aia_uplift /= reps;
    row.pia_error /= reps;
    row.fidelity /= reps;
    if ((level == 5 || level == 6) && !targeted.empty()) {
      row.targeted_error = targeted_sum / reps;
    }
    report.rows.push_back(std::move(row));
  }

  const int chain[] = {1, 2, 3, 5, 6};
  bool pass = true;
  for (std::size_t i = 0; i + 1 < std::size(chain); ++i) {
    MonotonicityStep step;
    step.from = chain[i];
    step.to = chain[i + 1];
    step.from_auc = report.rows[step.from - 1].mia_auc;
    step.to_auc = report.rows[step.to - 1].mia_auc;
    step.pass = step.to_auc <= step.from_auc + config.tolerance;
    pass = pass && step.pass;
    report.steps.push_back(step);
  }
  const auto& l5 = report.rows[4].targeted_error;
  const auto& l6 = report.rows[5].targeted_error;
  report.calibrated_beats_uncalibrated = l5 && l6 && *l5 < *l6;
  report.pass = pass && report.calibrated_beats_uncalibrated;

  if (!config.out_dir.empty()) {
    std::vector<std::string> names;
    ArtifactWriter out(config.out_dir, names);
    SYNTHPRIV_RETURN_IF_ERROR(out.Prepare());
    SYNTHPRIV_RETURN_IF_ERROR(
        out.JsonFile("compare.json", CompareReportToJson(report)));
    SYNTHPRIV_RETURN_IF_ERROR(
        out.Text("compare.txt", CompareReportText(report)));
  }
  return report;
}

Json CompareReportToJson(const CompareReport& report) {
  Json rows = Json::array();
  for (const LevelRow& r : report.rows) {
    Json row = {{"level", r.level},
                {"mia_auc", r.mia_auc},
                {"aia_uplift", r.aia_uplift},
                {"pia_error", r.pia_error},
                {"fidelity_composite", r.fidelity},
                {"achieved_levels", r.achieved_levels},
                {"targeted_error", nullptr}};
    if (r.targeted_error) row["targeted_error"] = *r.targeted_error;
    rows.push_back(std::move(row));
  }
  Json steps = Json::array();
  for (const MonotonicityStep& s : report.steps) {
    steps.push_back({{"from", s.from},
                     {"to", s.to},
                     {"from_auc", s.from_auc},
                     {"to_auc", s.to_auc},
                     {"pass", s.pass}});
  }
  return {{"toolkit", "synthpriv"},
          {"config_hash", report.config_hash},
          {"seed", report.seed},
          {"replicates", report.replicates},
          {"tolerance", report.tolerance},
          {"levels", std::move(rows)},
          {"monotonicity",
           {{"mia_chain", std::move(steps)},
            {"calibrated_statistics", report.calibrated_statistics},
            {"level5_beats_level6", report.calibrated_beats_uncalibrated}}},
          {"pass", report.pass}};
}

std::string CompareReportText(const CompareReport& report) {
  std::string out = absl::StrFormat(
      "level comparison (%d replicate%s, seed %d)\n\n", report.replicates,
      report.replicates == 1 ? "" : "s", report.seed);
  absl::StrAppend(&out, absl::StrFormat("  %-6s %9s %11s %10s %9s %9s\n",
                                        "level", "MIA AUC", "AIA uplift",
                                        "PIA error", "fidelity", "targeted"));
  for (const LevelRow& r : report.rows) {
    absl::StrAppend(
        &out, absl::StrFormat("  %-6d %9s %11s %10s %9s %9s\n", r.level,
                              Fixed(r.mia_auc), Fixed(r.aia_uplift),
                              Fixed(r.pia_error), Fixed(r.fidelity),
                              r.targeted_error ? Fixed(*r.targeted_error)
                                               : std::string("-")));
  }
  absl::StrAppend(&out, "\nMIA AUC chain (tolerance ",
                  absl::StrFormat("%g", report.tolerance), ")\n");
  for (const MonotonicityStep& s : report.steps) {
    absl::StrAppend(&out, absl::StrFormat("  L%d -> L%d  %s -> %s  %s\n",
                                          s.from, s.to, Fixed(s.from_auc),
                                          Fixed(s.to_auc),
                                          s.pass ? "ok" : "VIOLATED"));
  }
  absl::StrAppend(&out, "level 5 beats level 6 on calibrated statistics: ",
                  report.calibrated_beats_uncalibrated ? "yes" : "no", "\n",
                  "overall: ", report.pass ? "PASS" : "FAIL", "\n");
  return out;
}

}  // namespace synthpriv
