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

#ifndef SYNTHPRIV_PIPELINE_H_
#define SYNTHPRIV_PIPELINE_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "synthpriv/attacks.h"
#include "synthpriv/dataset.h"
#include "synthpriv/kdtree.h"
#include "synthpriv/metrics.h"
#include "synthpriv/noise.h"
#include "synthpriv/obscure.h"
#include "synthpriv/regulation.h"
#include "synthpriv/simulation.h"

namespace synthpriv {

struct GeneratorConfig {
  enum class Type { kCopula, kKdTree };
  Type type = Type::kCopula;
  KdTreeOptions kdtree;  // seed is ignored; the pipeline derives its own
  // Rows to sample; defaults to the member count.
  std::optional<std::int64_t> sample_size;
};

struct AttackSuiteConfig {
  // AIA runs only when a secret is named.
  AttributeInferenceConfig aia;
  std::vector<PropertySpec> properties;
};

struct CalibrationConfig {
  CalibrationTarget target;
  // Fill target values from the member split instead of the config.
  bool from_data = false;
  int budget = 200;
  std::size_t sim_n = 20000;
};

struct PipelineConfig {
  std::string data_path;    // resolved against the config file's directory
  std::string schema_path;
  int level = 1;
  std::uint64_t seed = 0;
  std::string out_dir;      // empty: write nothing
  // Every level publishes from the member split and is attacked with the
  // holdout as non-members.
  double member_fraction = 0.5;

  std::optional<ObscurePolicy> obscure;
  std::optional<NoiseConfig> noise;
  std::optional<GeneratorConfig> generator;
  std::optional<CertificationThresholds> thresholds;
  AttackSuiteConfig attacks;
  std::optional<SimulatorSpec> simulator;
  std::optional<CalibrationConfig> calibration;
  // Rows simulated at levels 5 and 6; defaults to the member count.
  std::optional<std::int64_t> simulate_rows;
  nlohmann::json scenarios;        // null when absent; parsed against the
  nlohmann::json corner_extras;    // simulator schema at run time
  bool corner_sweep = false;
  FidelityWeights fidelity_weights;
  std::optional<UtilityTask> utility;
  std::size_t utility_k = 5;

  // The config document as loaded, with CLI overrides applied. Hashed into
  // reports; output location is deliberately not part of it.
  nlohmann::json source;
};

absl::StatusOr<PipelineConfig> PipelineConfigFromJson(
    const nlohmann::json& json, const std::string& base_dir);
absl::StatusOr<PipelineConfig> LoadPipelineConfig(const std::string& path);
absl::Status ValidatePipelineConfig(const PipelineConfig& config);

// Apply CLI overrides, keeping `source` (and so the hash) in sync.
void OverrideLevel(PipelineConfig& config, int level);
void OverrideSeed(PipelineConfig& config, std::uint64_t seed);

// First 16 hex characters of the SHA-256 of the canonical config JSON.
std::string ConfigHash(const PipelineConfig& config);

struct CertificationReport {
  int claimed_level = 0;
  int achieved_level = 0;
  std::string provenance;
  std::size_t published_rows = 0;
  std::string input_digest;  // SHA-256 of the input rendered as CSV
  std::vector<AttackReport> attacks;
  std::optional<Certification> certification;
  std::optional<PolicyAudit> policy_audit;
  std::optional<FidelityReport> fidelity;
  std::optional<UtilityReport> utility;
  std::optional<double> total_epsilon;
  std::string generator_note;
  std::optional<double> calibration_loss;
  // Level-specific extras: calibration point, planting counts, sweep size.
  nlohmann::json details = nlohmann::json::object();
  RiskMatrix risk;
  std::string version;
  std::string config_hash;
  std::uint64_t seed = 0;
  std::vector<std::string> artifacts;  // file names inside out_dir
  std::vector<std::string> warnings;
  // Wall-clock seconds per stage. Reported on stderr only so that report
  // files stay byte-identical across runs.
  std::vector<std::pair<std::string, double>> stage_seconds;

  const AttackReport* Find(AttackKind kind) const;
};

nlohmann::json CertificationReportToJson(const CertificationReport& report);
std::string CertificationReportText(const CertificationReport& report);

struct PipelineResult {
  CertificationReport report;
  Dataset published;
  Dataset members;
  Dataset holdout;
};

// Loads the configured input, then runs it.
absl::StatusOr<PipelineResult> RunPipeline(const PipelineConfig& config);
// Runs on an already loaded dataset (data_path/schema_path are ignored).
absl::StatusOr<PipelineResult> RunPipelineOn(const PipelineConfig& config,
                                             const Dataset& data);

absl::StatusOr<Dataset> LoadConfiguredData(const PipelineConfig& config);

// Attack suite against an arbitrary published dataset.
absl::StatusOr<std::vector<AttackReport>> RunAttackSuite(
    const Dataset& published, const Dataset& members, const Dataset& holdout,
    const AttackSuiteConfig& config, std::uint64_t seed);

// Audits an externally produced dataset against the configured real data:
// the same split, attacks, certification (when thresholds are configured)
// and metrics as a pipeline run, without generating anything. Level 4 or
// above is only kept when certification passes.
absl::StatusOr<CertificationReport> RunAudit(const PipelineConfig& config,
                                             const Dataset& data,
                                             const Dataset& published);

// Level comparison.

struct CompareConfig {
  std::map<int, PipelineConfig> levels;  // exactly 1..6
  int replicates = 1;
  std::uint64_t seed = 0;
  double tolerance = 0.02;
  std::string out_dir;
  nlohmann::json source;
};

absl::StatusOr<CompareConfig> LoadCompareConfig(const std::string& path);
void OverrideSeed(CompareConfig& config, std::uint64_t seed);

// Seed used by replicate `index` of a comparison run with `seed`.
std::uint64_t ReplicateSeed(std::uint64_t seed, int index);

struct LevelRow {
  int level = 0;
  double mia_auc = 0.0;
  double aia_uplift = 0.0;
  double pia_error = 0.0;
  double fidelity = 0.0;
  // Relative error on the Level-5 calibration statistics (levels 5, 6).
  std::optional<double> targeted_error;
  std::vector<int> achieved_levels;  // one per replicate
};

struct MonotonicityStep {
  int from = 0;
  int to = 0;
  double from_auc = 0.0;
  double to_auc = 0.0;
  bool pass = false;
};

struct CompareReport {
  std::vector<LevelRow> rows;  // levels 1..6, metrics averaged
  std::vector<MonotonicityStep> steps;
  bool calibrated_beats_uncalibrated = false;
  bool pass = false;
  int replicates = 0;
  std::uint64_t seed = 0;
  double tolerance = 0.0;
  std::vector<std::string> calibrated_statistics;
  std::string config_hash;
  std::vector<std::pair<std::string, double>> stage_seconds;
};

absl::StatusOr<CompareReport> CompareLevels(const CompareConfig& config);

nlohmann::json CompareReportToJson(const CompareReport& report);
std::string CompareReportText(const CompareReport& report);

}  // namespace synthpriv

#endif  // SYNTHPRIV_PIPELINE_H_
