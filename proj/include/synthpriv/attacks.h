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

#ifndef SYNTHPRIV_ATTACKS_H_
#define SYNTHPRIV_ATTACKS_H_

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "absl/status/statusor.h"
#include "synthpriv/dataset.h"

namespace synthpriv {

// Level 4 evaluators. Scores are only comparable between reports that name
// the same algorithm.

enum class AttackKind { kMembership, kAttribute, kProperty };

// "MIA", "AttributeInference", "PropertyInference".
std::string AttackName(AttackKind kind);
absl::StatusOr<AttackKind> ParseAttackName(std::string_view name);

inline constexpr char kMiaAlgorithm[] = "dcr-rank-auc";
inline constexpr char kAiaAlgorithm[] = "knn-majority-vote";
inline constexpr char kPiaAlgorithm[] = "statistic-recovery";

struct StatisticRecovery {
  std::string label;  // e.g. "income:mean", "income:q0.9", "region:histogram"
  double real = 0.0;
  double estimate = 0.0;
  // Relative error for means and quantiles, total variation for histograms.
  double error = 0.0;
};

struct AttackReport {
  AttackKind attack = AttackKind::kMembership;
  std::string algorithm;
  // MIA: ROC-AUC. AIA: accuracy. PIA: mean recovery error over statistics.
  double score = 0.0;
  // No-information reference: 0.5 for MIA, majority-class rate for AIA, the
  // mean error of a naive estimate (zero, or uniform histogram) for PIA.
  double baseline = 0.0;
  std::vector<StatisticRecovery> statistics;  // PIA only
  nlohmann::json config;
  std::uint64_t seed = 0;

  double uplift() const { return score - baseline; }
};

struct DistanceConfig {
  // Empty means every shared non-identifier column.
  std::vector<std::string> columns;
};

// Distance-to-closest-record membership inference. Candidates closer to the
// synthetic set rank as more likely members; the score is the ROC-AUC of
// that ranking against true membership.
absl::StatusOr<AttackReport> RunMembershipInference(
    const Dataset& synthetic, const Dataset& members,
    const Dataset& non_members, const DistanceConfig& distance,
    std::uint64_t seed);

// Per-candidate DCR values used by RunMembershipInference, members first.
absl::StatusOr<std::vector<double>> CandidateDcr(
    const Dataset& synthetic, const Dataset& members,
    const Dataset& non_members, const DistanceConfig& distance);

struct AttributeInferenceConfig {
  std::vector<std::string> quasi_ids;
  std::string secret;
  std::size_t k = 5;
};

absl::StatusOr<AttackReport> RunAttributeInference(
    const Dataset& synthetic, const Dataset& targets,
    const AttributeInferenceConfig& config);

enum class StatisticKind { kMean, kQuantile, kHistogram };

struct PropertySpec {
  std::string column;
  StatisticKind statistic = StatisticKind::kMean;
  double q = 0.5;  // kQuantile only

  std::string Label() const;
};

// Parses "mean", "histogram", "q0.1" / "quantile:0.1".
absl::StatusOr<PropertySpec> ParsePropertySpec(std::string_view column,
                                               std::string_view statistic);

// Mean or quantile of a numeric column.
absl::StatusOr<double> EvaluateStatistic(const Dataset& dataset,
                                         const PropertySpec& property);

absl::StatusOr<AttackReport> RunPropertyInference(
    const Dataset& synthetic, const Dataset& real,
    const std::vector<PropertySpec>& properties);

struct CertificationThresholds {
  std::optional<double> max_mia_auc;
  std::optional<double> max_aia_uplift;
  // Recovery of a statistic is 1 - min(error, 1); every statistic must stay
  // at or below this value.
  std::optional<double> max_pia_recovery;
  // Per-statistic overrides keyed by StatisticRecovery::label.
  std::map<std::string, double> pia_overrides;
  std::set<AttackKind> required;
};

absl::Status ValidateThresholds(const CertificationThresholds& thresholds);

struct AttackVerdict {
  AttackKind attack = AttackKind::kMembership;
  std::string subject;  // attack name, or the statistic label for PIA
  double value = 0.0;
  double threshold = 0.0;
  double margin = 0.0;  // threshold - value; pass iff >= 0
  bool pass = false;
};

struct Certification {
  bool pass = false;
  std::vector<AttackVerdict> verdicts;
  std::vector<std::string> failing;
  std::vector<std::string> warnings;
};

// Passes iff every required attack scores within its threshold. Reports for
// attacks outside the required set are ignored.
absl::StatusOr<Certification> Certify(
    const std::vector<AttackReport>& reports,
    const CertificationThresholds& thresholds);

}  // namespace synthpriv

#endif  // SYNTHPRIV_ATTACKS_H_
