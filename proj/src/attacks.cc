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

#include "synthpriv/attacks.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <utility>

#include "absl/strings/match.h"
#include "absl/strings/str_cat.h"
#include "synthpriv/distance.h"
#include "synthpriv/statistics.h"
#include "synthpriv/status_macros.h"

namespace synthpriv {
namespace {

constexpr double kRelativeErrorFloor = 1e-6;

double RelativeError(double estimate, double real) {
  return std::fabs(estimate - real) /
         std::max(std::fabs(real), kRelativeErrorFloor);
}

absl::StatusOr<std::size_t> RequireColumn(const Dataset& dataset,
                                          const std::string& name,
                                          std::string_view role) {
  auto idx = dataset.ColumnIndex(name);
  if (!idx.has_value()) {
    return absl::InvalidArgumentError(
        absl::StrCat(std::string(role), " column '", name, "' missing"));
  }
  return *idx;
}

std::string FormatQ(double q) {
  char buffer[32];
  auto [end, ec] = std::to_chars(buffer, buffer + sizeof(buffer), q);
  return std::string(buffer, end);
}

}  // namespace

std::string AttackName(AttackKind kind) {
  switch (kind) {
    case AttackKind::kMembership:
      return "MIA";
    case AttackKind::kAttribute:
      return "AttributeInference";
    case AttackKind::kProperty:
      return "PropertyInference";
  }
  return "unknown";
}

absl::StatusOr<AttackKind> ParseAttackName(std::string_view name) {
  for (AttackKind kind :
       {AttackKind::kMembership, AttackKind::kAttribute, AttackKind::kProperty}) {
    if (AttackName(kind) == name) return kind;
  }
  return absl::InvalidArgumentError(
      absl::StrCat("unknown attack '", std::string(name), "'"));
}

absl::StatusOr<std::vector<double>> CandidateDcr(
    const Dataset& synthetic, const Dataset& members,
    const Dataset& non_members, const DistanceConfig& distance) {
  if (synthetic.num_rows() == 0) {
    return absl::InvalidArgumentError("synthetic set is empty");
  }
  if (members.num_rows() == 0 || non_members.num_rows() == 0) {
    return absl::InvalidArgumentError(
        "members and non-members must both be non-empty");
  }
  SYNTHPRIV_ASSIGN_OR_RETURN(std::vector<std::string> shared,
                             SharedColumns(synthetic.schema(), members.schema()));
  SYNTHPRIV_RETURN_IF_ERROR(
      SharedColumns(synthetic.schema(), non_members.schema()).status());
  std::vector<std::string> columns =
      distance.columns.empty() ? shared : distance.columns;
  SYNTHPRIV_ASSIGN_OR_RETURN(
      MixedMetric metric,
      MixedMetric::Create({&members, &non_members}, std::move(columns)));
  SYNTHPRIV_ASSIGN_OR_RETURN(EncodedRows pool, metric.Encode(synthetic));
  SYNTHPRIV_ASSIGN_OR_RETURN(EncodedRows in, metric.Encode(members));
  SYNTHPRIV_ASSIGN_OR_RETURN(EncodedRows out, metric.Encode(non_members));
  std::vector<double> dcr = DistanceToClosest(metric, in, pool);
  const std::vector<double> rest = DistanceToClosest(metric, out, pool);
  dcr.insert(dcr.end(), rest.begin(), rest.end());
  return dcr;
}

absl::StatusOr<AttackReport> RunMembershipInference(
    const Dataset& synthetic, const Dataset& members,
    const Dataset& non_members, const DistanceConfig& distance,
    std::uint64_t seed) {
  SYNTHPRIV_ASSIGN_OR_RETURN(
      std::vector<double> dcr,
      CandidateDcr(synthetic, members, non_members, distance));
  // Score = -DCR: closer candidates look more like members.
  std::vector<double> member_scores, non_member_scores;
  for (std::size_t i = 0; i < dcr.size(); ++i) {
    (i < members.num_rows() ? member_scores : non_member_scores)
        .push_back(-dcr[i]);
  }
  AttackReport report;
  report.attack = AttackKind::kMembership;
  report.algorithm = kMiaAlgorithm;
  report.score = RocAuc(member_scores, non_member_scores);
  report.baseline = 0.5;
  report.seed = seed;
  report.config = {{"columns", distance.columns},
                   {"members", members.num_rows()},
                   {"non_members", non_members.num_rows()},
                   {"synthetic", synthetic.num_rows()}};
  return report;
}

absl::StatusOr<AttackReport> RunAttributeInference(
    const Dataset& synthetic, const Dataset& targets,
    const AttributeInferenceConfig& config) {
  SYNTHPRIV_ASSIGN_OR_RETURN(std::size_t secret_synth,
                             RequireColumn(synthetic, config.secret, "secret"));
  SYNTHPRIV_ASSIGN_OR_RETURN(std::size_t secret_target,
                             RequireColumn(targets, config.secret, "secret"));
  const ColumnSpec& secret_spec = targets.column(secret_target);
  if (!secret_spec.is_categorical() ||
      !synthetic.column(secret_synth).is_categorical()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "secret column '", config.secret, "' must be categorical"));
  }
  if (synthetic.column(secret_synth).categories != secret_spec.categories) {
    return absl::InvalidArgumentError("secret category lists differ");
  }
  if (config.quasi_ids.empty()) {
    return absl::InvalidArgumentError("no quasi-identifiers given");
  }
  for (const std::string& q : config.quasi_ids) {
    if (q == config.secret) {
      return absl::InvalidArgumentError(
          "secret column is listed as a quasi-identifier");
    }
  }
  if (config.k == 0 || config.k > synthetic.num_rows()) {
    return absl::InvalidArgumentError(
        absl::StrCat("k = ", config.k, " but synthetic set has ",
                     synthetic.num_rows(), " rows"));
  }
  if (targets.num_rows() == 0) {
    return absl::InvalidArgumentError("no attack targets");
  }
  SYNTHPRIV_ASSIGN_OR_RETURN(MixedMetric metric,
                             MixedMetric::Create(targets, config.quasi_ids));
  SYNTHPRIV_ASSIGN_OR_RETURN(EncodedRows pool, metric.Encode(synthetic));
  SYNTHPRIV_ASSIGN_OR_RETURN(EncodedRows queries, metric.Encode(targets));

  const std::size_t num_classes = secret_spec.categories.size();
  std::size_t correct = 0;
  std::vector<std::size_t> truth_counts(num_classes, 0);
  for (std::size_t t = 0; t < targets.num_rows(); ++t) {
    const std::vector<std::size_t> neighbors =
        NearestNeighbors(metric, queries.row(t), pool, config.k);
    std::vector<std::size_t> votes(num_classes, 0);
    for (std::size_t p : neighbors) ++votes[synthetic.code(p, secret_synth)];
    // max_element returns the first maximum: ties go to the lowest code.
    const auto guess = static_cast<int>(
        std::max_element(votes.begin(), votes.end()) - votes.begin());
    const int truth = targets.code(t, secret_target);
    ++truth_counts[truth];
    if (guess == truth) ++correct;
  }
  const double n = static_cast<double>(targets.num_rows());
  AttackReport report;
  report.attack = AttackKind::kAttribute;
  report.algorithm = kAiaAlgorithm;
  report.score = static_cast<double>(correct) / n;
  report.baseline =
      static_cast<double>(
          *std::max_element(truth_counts.begin(), truth_counts.end())) /
      n;
  report.config = {{"quasi_ids", config.quasi_ids},
                   {"secret", config.secret},
                   {"k", config.k},
                   {"targets", targets.num_rows()}};
  return report;
}

std::string PropertySpec::Label() const {
  switch (statistic) {
    case StatisticKind::kMean:
      return absl::StrCat(column, ":mean");
    case StatisticKind::kQuantile:
      return absl::StrCat(column, ":q", FormatQ(q));
    case StatisticKind::kHistogram:
      return absl::StrCat(column, ":histogram");
  }
  return column;
}

absl::StatusOr<PropertySpec> ParsePropertySpec(std::string_view column,
                                               std::string_view statistic) {
  PropertySpec spec;
  spec.column = std::string(column);
  if (statistic == "mean") {
    spec.statistic = StatisticKind::kMean;
    return spec;
  }
  if (statistic == "histogram") {
    spec.statistic = StatisticKind::kHistogram;
    return spec;
  }
  std::string_view number;
  if (statistic.starts_with("quantile:")) {
    number = statistic.substr(9);
  } else if (statistic.starts_with("q")) {
    number = statistic.substr(1);
  } else {
    return absl::InvalidArgumentError(
        absl::StrCat("unknown statistic '", std::string(statistic), "'"));
  }
  double q = 0.0;
  auto [ptr, ec] = std::from_chars(number.data(), number.data() + number.size(), q);
  if (ec != std::errc() || ptr != number.data() + number.size() ||
      !(q >= 0.0 && q <= 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("bad quantile level in '", std::string(statistic), "'"));
  }
  spec.statistic = StatisticKind::kQuantile;
  spec.q = q;
  return spec;
}

absl::StatusOr<double> EvaluateStatistic(const Dataset& dataset,
                                         const PropertySpec& property) {
  SYNTHPRIV_ASSIGN_OR_RETURN(std::size_t col,
                             RequireColumn(dataset, property.column, "property"));
  if (property.statistic == StatisticKind::kHistogram ||
      !dataset.column(col).is_numeric()) {
    return absl::InvalidArgumentError(absl::StrCat(
        property.Label(), ": needs a numeric column and a scalar statistic"));
  }
  const std::vector<double> values = dataset.NumericColumn(col);
  return property.statistic == StatisticKind::kMean
             ? Mean(values)
             : Quantile(values, property.q);
}

absl::StatusOr<AttackReport> RunPropertyInference(
    const Dataset& synthetic, const Dataset& real,
    const std::vector<PropertySpec>& properties) {
  AttackReport report;
  report.attack = AttackKind::kProperty;
  report.algorithm = kPiaAlgorithm;
  nlohmann::json echo = nlohmann::json::array();
  double naive_total = 0.0;
  for (const PropertySpec& property : properties) {
    SYNTHPRIV_ASSIGN_OR_RETURN(
        std::size_t real_col, RequireColumn(real, property.column, "property"));
    SYNTHPRIV_ASSIGN_OR_RETURN(
        std::size_t synth_col,
        RequireColumn(synthetic, property.column, "property"));
    const ColumnSpec& spec = real.column(real_col);
    StatisticRecovery recovery;
    recovery.label = property.Label();
    if (property.statistic == StatisticKind::kHistogram) {
      if (!spec.is_categorical() ||
          synthetic.column(synth_col).categories != spec.categories) {
        return absl::InvalidArgumentError(absl::StrCat(
            recovery.label, ": histogram needs matching categorical columns"));
      }
      const int k = static_cast<int>(spec.categories.size());
      const std::vector<double> p = CategoryFrequencies(real.CodeColumn(real_col), k);
      const std::vector<double> q =
          CategoryFrequencies(synthetic.CodeColumn(synth_col), k);
      recovery.error = TotalVariation(p, q);
      const std::vector<double> uniform(k, 1.0 / k);
      naive_total += TotalVariation(p, uniform);
    } else {
      if (!spec.is_numeric() || !synthetic.column(synth_col).is_numeric()) {
        return absl::InvalidArgumentError(absl::StrCat(
            recovery.label, ": mean/quantile needs a numeric column"));
      }
      SYNTHPRIV_ASSIGN_OR_RETURN(recovery.real, EvaluateStatistic(real, property));
      SYNTHPRIV_ASSIGN_OR_RETURN(recovery.estimate,
                                 EvaluateStatistic(synthetic, property));
      recovery.error = RelativeError(recovery.estimate, recovery.real);
      naive_total += RelativeError(0.0, recovery.real);
    }
    echo.push_back(recovery.label);
    report.statistics.push_back(std::move(recovery));
  }
  double total = 0.0;
  for (const StatisticRecovery& s : report.statistics) total += s.error;
  const double count = static_cast<double>(report.statistics.size());
  report.score = report.statistics.empty() ? 0.0 : total / count;
  report.baseline = report.statistics.empty() ? 0.0 : naive_total / count;
  report.config = {{"properties", echo}};
  return report;
}

absl::Status ValidateThresholds(const CertificationThresholds& thresholds) {
  auto in_range = [](const std::optional<double>& v, double lo, double hi) {
    return !v.has_value() || (*v >= lo && *v <= hi);
  };
  if (!in_range(thresholds.max_mia_auc, 0.0, 1.0)) {
    return absl::InvalidArgumentError("max_mia_auc must lie in [0, 1]");
  }
  if (!in_range(thresholds.max_aia_uplift, -1.0, 1.0)) {
    return absl::InvalidArgumentError("max_aia_uplift must lie in [-1, 1]");
  }
  if (!in_range(thresholds.max_pia_recovery, 0.0, 1.0)) {
    return absl::InvalidArgumentError("max_pia_recovery must lie in [0, 1]");
  }
  for (const auto& [label, value] : thresholds.pia_overrides) {
    if (!(value >= 0.0 && value <= 1.0)) {
      return absl::InvalidArgumentError(
          absl::StrCat("PIA threshold for '", label, "' must lie in [0, 1]"));
    }
  }
  for (AttackKind kind : thresholds.required) {
    const bool has = (kind == AttackKind::kMembership &&
                      thresholds.max_mia_auc.has_value()) ||
                     (kind == AttackKind::kAttribute &&
                      thresholds.max_aia_uplift.has_value()) ||
                     (kind == AttackKind::kProperty &&
                      (thresholds.max_pia_recovery.has_value() ||
                       !thresholds.pia_overrides.empty()));
    if (!has) {
      return absl::InvalidArgumentError(absl::StrCat(
          "required attack ", AttackName(kind), " has no threshold"));
    }
  }
  return absl::OkStatus();
}

absl::StatusOr<Certification> Certify(
    const std::vector<AttackReport>& reports,
    const CertificationThresholds& thresholds) {
  SYNTHPRIV_RETURN_IF_ERROR(ValidateThresholds(thresholds));
  Certification result;
  if (thresholds.required.empty()) {
    result.warnings.push_back(
        "no attacks are required: certification passes vacuously");
  }
  for (AttackKind kind : thresholds.required) {
    const bool present =
        std::any_of(reports.begin(), reports.end(),
                    [&](const AttackReport& r) { return r.attack == kind; });
    if (!present) {
      return absl::FailedPreconditionError(absl::StrCat(
          "missing report for required attack ", AttackName(kind)));
    }
  }
  auto add = [&](AttackKind kind, std::string subject, double value,
                 double threshold) {
    AttackVerdict verdict;
    verdict.attack = kind;
    verdict.subject = std::move(subject);
    verdict.value = value;
    verdict.threshold = threshold;
    verdict.margin = threshold - value;
    verdict.pass = value <= threshold;
    if (!verdict.pass) result.failing.push_back(verdict.subject);
    result.verdicts.push_back(std::move(verdict));
  };
  for (const AttackReport& report : reports) {
    if (!thresholds.required.contains(report.attack)) continue;
    const std::string name(AttackName(report.attack));
    switch (report.attack) {
      case AttackKind::kMembership:
        add(report.attack, name, report.score, *thresholds.max_mia_auc);
        break;
      case AttackKind::kAttribute:
        add(report.attack, name, report.uplift(), *thresholds.max_aia_uplift);
        break;
      case AttackKind::kProperty:
        for (const StatisticRecovery& s : report.statistics) {
          auto it = thresholds.pia_overrides.find(s.label);
          std::optional<double> limit =
              it != thresholds.pia_overrides.end()
                  ? std::optional<double>(it->second)
                  : thresholds.max_pia_recovery;
          if (!limit.has_value()) continue;
          add(report.attack, absl::StrCat(name, "/", s.label),
              1.0 - std::min(s.error, 1.0), *limit);
        }
        break;
    }
  }
  result.pass = result.failing.empty();
  return result;
}

}  // namespace synthpriv
