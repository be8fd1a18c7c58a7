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

#include "synthpriv/simulation.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <utility>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "synthpriv/digest.h"
#include "synthpriv/json_io.h"
#include "synthpriv/random.h"
#include "synthpriv/statistics.h"
#include "synthpriv/status_macros.h"

namespace synthpriv {
namespace {

constexpr double kUnboundedExtreme = 1e12;
constexpr double kScaleFloor = 1e-6;

std::string ShortNumber(double v) {
  char buffer[32];
  auto [end, ec] = std::to_chars(buffer, buffer + sizeof(buffer), v);
  return std::string(buffer, end);
}

// One uniform per (row, column) and its normal transform.
struct RandomTable {
  std::size_t rows = 0;
  std::size_t columns = 0;
  std::vector<double> u;
  std::vector<double> z;

  double uniform(std::size_t r, std::size_t c) const {
    return u[r * columns + c];
  }
  double normal(std::size_t r, std::size_t c) const {
    return z[r * columns + c];
  }
};

RandomTable BuildRandomTable(std::size_t rows, std::size_t columns,
                             std::uint64_t seed) {
  RandomTable table;
  table.rows = rows;
  table.columns = columns;
  table.u.resize(rows * columns);
  table.z.resize(rows * columns);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < columns; ++c) {
      BitStream rng = CellStream(seed, c, r);
      const double u = UniformOpen(rng);
      table.u[r * columns + c] = u;
      table.z[r * columns + c] = NormalQuantile(u);
    }
  }
  return table;
}

int PickCategory(const std::vector<double>& weights, double u) {
  double total = 0.0;
  for (double w : weights) total += w;
  const double target = u * total;
  double cumulative = 0.0;
  int last_positive = 0;
  for (std::size_t k = 0; k < weights.size(); ++k) {
    if (weights[k] <= 0.0) continue;
    last_positive = static_cast<int>(k);
    cumulative += weights[k];
    if (target < cumulative) return static_cast<int>(k);
  }
  return last_positive;
}

double FinishNumeric(const ColumnSpec& spec, double v) {
  if (spec.kind == ColumnKind::kInteger) v = std::round(v);
  if (spec.bounds.has_value()) {
    double lo = spec.bounds->min;
    double hi = spec.bounds->max;
    if (spec.kind == ColumnKind::kInteger) {
      lo = std::ceil(lo);
      hi = std::floor(hi);
    }
    v = std::clamp(v, lo, hi);
  }
  return v;
}

// Resolved equation term: source column index and category code.
struct BoundTerm {
  std::size_t source = 0;
  int code = -1;
};

// Column-major simulated values; categorical columns hold codes.
using ColumnValues = std::vector<std::vector<double>>;

ColumnValues SimulateColumns(const SimulatorSpec& spec,
                             const RandomTable& table) {
  const std::size_t n = table.rows;
  ColumnValues out(spec.columns.size(), std::vector<double>(n));
  for (std::size_t c = 0; c < spec.columns.size(); ++c) {
    const SimColumn& column = spec.columns[c];
    std::vector<double>& values = out[c];
    if (const auto* rule = std::get_if<UniformRule>(&column.rule)) {
      for (std::size_t r = 0; r < n; ++r) {
        values[r] = rule->a + (rule->b - rule->a) * table.uniform(r, c);
      }
    } else if (const auto* rule = std::get_if<NormalRule>(&column.rule)) {
      for (std::size_t r = 0; r < n; ++r) {
        values[r] = rule->mu + rule->sigma * table.normal(r, c);
      }
    } else if (const auto* rule = std::get_if<LogNormalRule>(&column.rule)) {
      for (std::size_t r = 0; r < n; ++r) {
        values[r] = std::exp(rule->mu + rule->sigma * table.normal(r, c));
      }
    } else if (const auto* rule = std::get_if<ExponentialRule>(&column.rule)) {
      for (std::size_t r = 0; r < n; ++r) {
        values[r] = -std::log(table.uniform(r, c)) / rule->lambda;
      }
    } else if (const auto* rule = std::get_if<CategoricalRule>(&column.rule)) {
      for (std::size_t r = 0; r < n; ++r) {
        values[r] = PickCategory(rule->weights, table.uniform(r, c));
      }
      continue;
    } else {
      const auto& equation = std::get<EquationRule>(column.rule);
      std::vector<BoundTerm> bound;
      for (const EquationTerm& term : equation.terms) {
        BoundTerm b;
        for (std::size_t s = 0; s < c; ++s) {
          if (spec.columns[s].spec.name == term.column) b.source = s;
        }
        if (term.kind == EquationTerm::Kind::kEquals) {
          const auto& cats = spec.columns[b.source].spec.categories;
          b.code = static_cast<int>(
              std::find(cats.begin(), cats.end(), term.category) -
              cats.begin());
        }
        bound.push_back(b);
      }
      for (std::size_t r = 0; r < n; ++r) {
        double v = equation.intercept;
        for (std::size_t t = 0; t < bound.size(); ++t) {
          const EquationTerm& term = equation.terms[t];
          const double x = out[bound[t].source][r];
          switch (term.kind) {
            case EquationTerm::Kind::kLinear:
              v += term.coef * x;
              break;
            case EquationTerm::Kind::kEquals:
              v += static_cast<int>(x) == bound[t].code ? term.coef : 0.0;
              break;
            case EquationTerm::Kind::kGreater:
              v += x > term.threshold ? term.coef : 0.0;
              break;
          }
        }
        if (equation.noise_sigma > 0.0) {
          v += equation.noise_sigma * table.normal(r, c);
        }
        values[r] = v;
      }
    }
    for (double& v : values) v = FinishNumeric(column.spec, v);
  }
  return out;
}

absl::StatusOr<double*> ParameterSlot(SimulatorSpec& spec,
                                      const std::string& name) {
  const std::size_t dot = name.rfind('.');
  if (dot == std::string::npos) {
    return absl::InvalidArgumentError(
        absl::StrCat("parameter '", name, "' is not <column>.<param>"));
  }
  const std::string column = name.substr(0, dot);
  const std::string param = name.substr(dot + 1);
  for (SimColumn& c : spec.columns) {
    if (c.spec.name != column) continue;
    auto indexed = [&](std::string_view prefix,
                       std::size_t size) -> std::optional<std::size_t> {
      if (param.rfind(prefix, 0) != 0) return std::nullopt;
      std::size_t index = 0;
      const char* begin = param.data() + prefix.size();
      const char* end = param.data() + param.size();
      auto [ptr, ec] = std::from_chars(begin, end, index);
      if (ec != std::errc() || ptr != end || begin == end || index >= size) {
        return std::nullopt;
      }
      return index;
    };
    if (auto* r = std::get_if<UniformRule>(&c.rule)) {
      if (param == "a") return &r->a;
      if (param == "b") return &r->b;
    } else if (auto* r = std::get_if<NormalRule>(&c.rule)) {
      if (param == "mu") return &r->mu;
      if (param == "sigma") return &r->sigma;
    } else if (auto* r = std::get_if<LogNormalRule>(&c.rule)) {
      if (param == "mu") return &r->mu;
      if (param == "sigma") return &r->sigma;
    } else if (auto* r = std::get_if<ExponentialRule>(&c.rule)) {
      if (param == "lambda") return &r->lambda;
    } else if (auto* r = std::get_if<CategoricalRule>(&c.rule)) {
      if (auto i = indexed("w", r->weights.size())) return &r->weights[*i];
    } else if (auto* r = std::get_if<EquationRule>(&c.rule)) {
      if (param == "intercept") return &r->intercept;
      if (param == "noise_sigma") return &r->noise_sigma;
      if (auto i = indexed("coef", r->terms.size())) return &r->terms[*i].coef;
    }
    return absl::InvalidArgumentError(
        absl::StrCat("column '", column, "' has no parameter '", param, "'"));
  }
  return absl::InvalidArgumentError(
      absl::StrCat("parameter '", name, "' names unknown column"));
}

absl::Status ValidateRule(const SimulatorSpec& spec, std::size_t index) {
  const SimColumn& column = spec.columns[index];
  const std::string where = absl::StrCat("column '", column.spec.name, "'");
  const bool categorical_rule =
      std::holds_alternative<CategoricalRule>(column.rule);
  if (column.spec.is_identifier()) {
    return absl::InvalidArgumentError(
        absl::StrCat(where, ": simulator does not generate identifiers"));
  }
  if (categorical_rule != column.spec.is_categorical()) {
    return absl::InvalidArgumentError(absl::StrCat(
        where, ": categorical rules go with categorical columns only"));
  }
  if (const auto* r = std::get_if<UniformRule>(&column.rule)) {
    if (!(r->a <= r->b)) {
      return absl::InvalidArgumentError(absl::StrCat(where, ": uniform a > b"));
    }
  } else if (const auto* r = std::get_if<NormalRule>(&column.rule)) {
    if (!(r->sigma > 0.0)) {
      return absl::InvalidArgumentError(absl::StrCat(where, ": sigma <= 0"));
    }
  } else if (const auto* r = std::get_if<LogNormalRule>(&column.rule)) {
    if (!(r->sigma > 0.0)) {
      return absl::InvalidArgumentError(absl::StrCat(where, ": sigma <= 0"));
    }
  } else if (const auto* r = std::get_if<ExponentialRule>(&column.rule)) {
    if (!(r->lambda > 0.0)) {
      return absl::InvalidArgumentError(absl::StrCat(where, ": lambda <= 0"));
    }
  } else if (const auto* r = std::get_if<CategoricalRule>(&column.rule)) {
    if (r->weights.size() != column.spec.categories.size()) {
      return absl::InvalidArgumentError(
          absl::StrCat(where, ": one weight per category required"));
    }
    double total = 0.0;
    for (double w : r->weights) {
      if (!(w >= 0.0)) {
        return absl::InvalidArgumentError(
            absl::StrCat(where, ": negative weight"));
      }
      total += w;
    }
    if (!(total > 0.0)) {
      return absl::InvalidArgumentError(
          absl::StrCat(where, ": weights sum to zero"));
    }
  } else {
    const auto& equation = std::get<EquationRule>(column.rule);
    if (!(equation.noise_sigma >= 0.0)) {
      return absl::InvalidArgumentError(
          absl::StrCat(where, ": noise_sigma < 0"));
    }
    for (const EquationTerm& term : equation.terms) {
      std::optional<std::size_t> source;
      for (std::size_t s = 0; s < spec.columns.size(); ++s) {
        if (spec.columns[s].spec.name == term.column) source = s;
      }
      if (!source.has_value()) {
        return absl::InvalidArgumentError(absl::StrCat(
            where, ": equation references unknown column '", term.column,
            "'"));
      }
      if (*source >= index) {
        return absl::InvalidArgumentError(absl::StrCat(
            where, ": equation references '", term.column,
            "', which is not an earlier column (cycle or bad order)"));
      }
      const ColumnSpec& ref = spec.columns[*source].spec;
      if (term.kind == EquationTerm::Kind::kEquals) {
        if (!ref.is_categorical() ||
            std::find(ref.categories.begin(), ref.categories.end(),
                      term.category) == ref.categories.end()) {
          return absl::InvalidArgumentError(absl::StrCat(
              where, ": indicator needs a category of '", term.column, "'"));
        }
      } else if (!ref.is_numeric()) {
        return absl::InvalidArgumentError(absl::StrCat(
            where, ": linear/threshold term on non-numeric '", term.column,
            "'"));
      }
    }
  }
  return absl::OkStatus();
}

double MomentOfValues(const std::vector<double>& values, const ColumnSpec& spec,
                      const TargetMoment& moment) {
  switch (moment.statistic) {
    case MomentKind::kMean:
      return Mean(values);
    case MomentKind::kStd:
      return StdDev(values);
    case MomentKind::kQuantile:
      return Quantile(values, moment.q);
    case MomentKind::kFrequency: {
      const auto it = std::find(spec.categories.begin(), spec.categories.end(),
                                moment.category);
      const double code = static_cast<double>(it - spec.categories.begin());
      if (values.empty()) return 0.0;
      double hits = 0.0;
      for (double v : values) hits += v == code ? 1.0 : 0.0;
      return hits / static_cast<double>(values.size());
    }
  }
  return 0.0;
}

absl::Status CheckMomentColumn(const ColumnSpec& spec,
                               const TargetMoment& moment) {
  if (moment.statistic == MomentKind::kFrequency) {
    if (!spec.is_categorical() ||
        std::find(spec.categories.begin(), spec.categories.end(),
                  moment.category) == spec.categories.end()) {
      return absl::InvalidArgumentError(absl::StrCat(
          moment.Label(), ": frequency needs a category of a categorical column"));
    }
  } else if (!spec.is_numeric()) {
    return absl::InvalidArgumentError(
        absl::StrCat(moment.Label(), ": needs a numeric column"));
  }
  return absl::OkStatus();
}

double Loss(const ColumnValues& values, const SimulatorSpec& spec,
            const CalibrationTarget& target,
            const std::vector<std::size_t>& moment_columns) {
  double loss = 0.0;
  for (std::size_t i = 0; i < target.moments.size(); ++i) {
    const TargetMoment& m = target.moments[i];
    const std::size_t c = moment_columns[i];
    const double s = MomentOfValues(values[c], spec.columns[c].spec, m);
    const double scale = std::max(std::fabs(m.value), kScaleFloor);
    const double e = (s - m.value) / scale;
    loss += m.weight * e * e;
  }
  return loss;
}

absl::StatusOr<std::vector<std::size_t>> ResolveMoments(
    const SimulatorSpec& spec, const CalibrationTarget& target) {
  std::vector<std::size_t> out;
  for (const TargetMoment& m : target.moments) {
    std::optional<std::size_t> found;
    for (std::size_t c = 0; c < spec.columns.size(); ++c) {
      if (spec.columns[c].spec.name == m.column) found = c;
    }
    if (!found.has_value()) {
      return absl::InvalidArgumentError(
          absl::StrCat("target references unknown column '", m.column, "'"));
    }
    SYNTHPRIV_RETURN_IF_ERROR(
        CheckMomentColumn(spec.columns[*found].spec, m));
    out.push_back(*found);
  }
  return out;
}

absl::StatusOr<SimulatorSpec> WithTheta(const SimulatorSpec& spec,
                                        std::span<const double> theta) {
  if (theta.size() != spec.free_params.size()) {
    return absl::InvalidArgumentError("theta has the wrong dimension");
  }
  SimulatorSpec out = spec;
  for (std::size_t i = 0; i < theta.size(); ++i) {
    SYNTHPRIV_RETURN_IF_ERROR(
        SetParameter(out, spec.free_params[i].name, theta[i]));
  }
  return out;
}

}  // namespace

Schema SimulatorSchema(const SimulatorSpec& spec) {
  Schema schema;
  for (const SimColumn& c : spec.columns) schema.push_back(c.spec);
  return schema;
}

absl::Status ValidateSimulatorSpec(const SimulatorSpec& spec) {
  if (spec.columns.empty()) {
    return absl::InvalidArgumentError("simulator has no columns");
  }
  SYNTHPRIV_RETURN_IF_ERROR(ValidateSchema(SimulatorSchema(spec)));
  for (std::size_t c = 0; c < spec.columns.size(); ++c) {
    SYNTHPRIV_RETURN_IF_ERROR(ValidateRule(spec, c));
  }
  SimulatorSpec probe = spec;
  for (const FreeParameter& p : spec.free_params) {
    if (!std::isfinite(p.lower) || !std::isfinite(p.upper) ||
        !(p.lower < p.upper)) {
      return absl::InvalidArgumentError(absl::StrCat(
          "free parameter '", p.name, "' needs finite bounds lo < hi"));
    }
    SYNTHPRIV_RETURN_IF_ERROR(ParameterSlot(probe, p.name).status());
  }
  return absl::OkStatus();
}

absl::StatusOr<double> GetParameter(const SimulatorSpec& spec,
                                    const std::string& name) {
  SimulatorSpec copy = spec;
  SYNTHPRIV_ASSIGN_OR_RETURN(double* slot, ParameterSlot(copy, name));
  return *slot;
}

absl::Status SetParameter(SimulatorSpec& spec, const std::string& name,
                          double value) {
  SYNTHPRIV_ASSIGN_OR_RETURN(double* slot, ParameterSlot(spec, name));
  *slot = value;
  return absl::OkStatus();
}

std::string SimulatorSpecHash(const SimulatorSpec& spec) {
  return Sha256Hex(SimulatorSpecToJson(spec).dump()).substr(0, 16);
}

absl::StatusOr<Dataset> Simulate(const SimulatorSpec& spec, std::int64_t n,
                                 std::uint64_t seed) {
  if (n < 0) {
    return absl::InvalidArgumentError(
        absl::StrCat("row count must be non-negative, got ", n));
  }
  SYNTHPRIV_RETURN_IF_ERROR(ValidateSimulatorSpec(spec));
  const RandomTable table =
      BuildRandomTable(static_cast<std::size_t>(n), spec.columns.size(), seed);
  const ColumnValues values = SimulateColumns(spec, table);
  std::vector<Row> rows(static_cast<std::size_t>(n));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    rows[r].reserve(spec.columns.size());
    for (std::size_t c = 0; c < spec.columns.size(); ++c) {
      if (spec.columns[c].spec.is_categorical()) {
        rows[r].emplace_back(static_cast<int>(values[c][r]));
      } else {
        rows[r].emplace_back(values[c][r]);
      }
    }
  }
  const std::string provenance =
      absl::StrCat(spec.calibrated ? "level5:" : "level6:",
                   SimulatorSpecHash(spec));
  return Dataset::Create(SimulatorSchema(spec), std::move(rows), provenance);
}

std::string TargetMoment::Label() const {
  switch (statistic) {
    case MomentKind::kMean:
      return absl::StrCat(column, ":mean");
    case MomentKind::kStd:
      return absl::StrCat(column, ":std");
    case MomentKind::kQuantile:
      return absl::StrCat(column, ":q", ShortNumber(q));
    case MomentKind::kFrequency:
      return absl::StrCat(column, ":freq:", category);
  }
  return column;
}

absl::Status ValidateCalibrationTarget(const CalibrationTarget& target) {
  if (target.moments.empty()) {
    return absl::InvalidArgumentError("calibration target is empty");
  }
  bool any_weight = false;
  for (const TargetMoment& m : target.moments) {
    if (!std::isfinite(m.value)) {
      return absl::InvalidArgumentError(
          absl::StrCat(m.Label(), ": target is not finite"));
    }
    if (!(m.weight >= 0.0) || !std::isfinite(m.weight)) {
      return absl::InvalidArgumentError(
          absl::StrCat(m.Label(), ": weight must be finite and >= 0"));
    }
    if (m.statistic == MomentKind::kQuantile && !(m.q >= 0.0 && m.q <= 1.0)) {
      return absl::InvalidArgumentError(
          absl::StrCat(m.Label(), ": quantile level outside [0, 1]"));
    }
    any_weight = any_weight || m.weight > 0.0;
  }
  if (!any_weight) {
    return absl::InvalidArgumentError("all calibration weights are zero");
  }
  return absl::OkStatus();
}

absl::StatusOr<double> ComputeMoment(const Dataset& dataset,
                                     const TargetMoment& moment) {
  auto idx = dataset.ColumnIndex(moment.column);
  if (!idx.has_value()) {
    return absl::InvalidArgumentError(
        absl::StrCat("unknown column '", moment.column, "'"));
  }
  const ColumnSpec& spec = dataset.column(*idx);
  SYNTHPRIV_RETURN_IF_ERROR(CheckMomentColumn(spec, moment));
  std::vector<double> values;
  if (spec.is_categorical()) {
    for (int code : dataset.CodeColumn(*idx)) values.push_back(code);
  } else {
    values = dataset.NumericColumn(*idx);
  }
  return MomentOfValues(values, spec, moment);
}

absl::StatusOr<CalibrationTarget> TargetFromData(
    const Dataset& dataset, std::vector<TargetMoment> moments) {
  CalibrationTarget target;
  for (TargetMoment& m : moments) {
    SYNTHPRIV_ASSIGN_OR_RETURN(m.value, ComputeMoment(dataset, m));
    target.moments.push_back(std::move(m));
  }
  return target;
}

absl::StatusOr<double> CalibrationLoss(const SimulatorSpec& spec,
                                       const CalibrationTarget& target,
                                       std::span<const double> theta,
                                       std::size_t sim_n, std::uint64_t seed) {
  SYNTHPRIV_RETURN_IF_ERROR(ValidateCalibrationTarget(target));
  SYNTHPRIV_ASSIGN_OR_RETURN(SimulatorSpec trial, WithTheta(spec, theta));
  SYNTHPRIV_RETURN_IF_ERROR(ValidateSimulatorSpec(trial));
  SYNTHPRIV_ASSIGN_OR_RETURN(std::vector<std::size_t> columns,
                             ResolveMoments(trial, target));
  const RandomTable table = BuildRandomTable(sim_n, trial.columns.size(), seed);
  return Loss(SimulateColumns(trial, table), trial, target, columns);
}

absl::StatusOr<CalibrationResult> Calibrate(const SimulatorSpec& spec,
                                            const CalibrationTarget& target,
                                            const CalibrationOptions& options) {
  SYNTHPRIV_RETURN_IF_ERROR(ValidateSimulatorSpec(spec));
  SYNTHPRIV_RETURN_IF_ERROR(ValidateCalibrationTarget(target));
  if (spec.free_params.empty()) {
    return absl::InvalidArgumentError("no free parameters to calibrate");
  }
  if (options.budget < 10) {
    return absl::InvalidArgumentError(
        absl::StrCat("calibration budget must be at least 10, got ",
                     options.budget));
  }
  if (options.sim_n == 0) {
    return absl::InvalidArgumentError("sim_n must be positive");
  }
  SYNTHPRIV_ASSIGN_OR_RETURN(std::vector<std::size_t> columns,
                             ResolveMoments(spec, target));

  std::vector<double> lower, upper, start;
  for (const FreeParameter& p : spec.free_params) {
    lower.push_back(p.lower);
    upper.push_back(p.upper);
    start.push_back(0.5 * (p.lower + p.upper));
  }
  // Common random numbers: one table for every evaluation.
  const RandomTable table =
      BuildRandomTable(options.sim_n, spec.columns.size(), options.seed);
  SimulatorSpec trial = spec;
  auto objective = [&](std::span<const double> theta) {
    for (std::size_t i = 0; i < theta.size(); ++i) {
      (void)SetParameter(trial, spec.free_params[i].name, theta[i]);
    }
    // Parameters outside their rule's domain (e.g. sigma <= 0 inside a
    // permissive box) score as infinitely bad.
    if (!ValidateSimulatorSpec(trial).ok()) {
      return std::numeric_limits<double>::infinity();
    }
    return Loss(SimulateColumns(trial, table), trial, target, columns);
  };
  // Nelder-Mead simplices collapse in higher dimensions, so the budget is
  // spent in rounds, each restarting from the best point so far with a
  // fresh simplex. The first round gets half the budget.
  const int d = static_cast<int>(start.size());
  NelderMeadResult found;
  found.best = start;
  found.best_value = std::numeric_limits<double>::infinity();
  int remaining = options.budget;
  double step = 0.1;
  while (remaining >= d + 1) {
    NelderMeadOptions nm;
    nm.max_evaluations = found.trace.empty()
                             ? std::max(d + 1, remaining / 2)
                             : std::min(remaining, 20 * (d + 1));
    nm.initial_step = step;
    SYNTHPRIV_ASSIGN_OR_RETURN(
        NelderMeadResult round,
        MinimizeNelderMead(objective, lower, upper, found.best, nm));
    remaining -= static_cast<int>(round.trace.size());
    for (Evaluation& e : round.trace) found.trace.push_back(std::move(e));
    if (round.best_value < found.best_value) {
      found.best_value = round.best_value;
      found.best = round.best;
    } else {
      step *= 0.5;
    }
    if (round.trace.empty()) break;
  }

  CalibrationResult result;
  SYNTHPRIV_ASSIGN_OR_RETURN(result.spec, WithTheta(spec, found.best));
  result.spec.calibrated = true;
  result.theta = found.best;
  result.loss = found.best_value;
  result.initial_loss = found.trace.front().value;
  result.trace = std::move(found.trace);
  return result;
}

std::string CalibrationTraceCsv(const SimulatorSpec& spec,
                                const CalibrationResult& result) {
  std::vector<std::string> header = {"iteration"};
  for (const FreeParameter& p : spec.free_params) header.push_back(p.name);
  header.push_back("loss");
  std::string out = absl::StrJoin(header, ",") + "\n";
  for (std::size_t i = 0; i < result.trace.size(); ++i) {
    std::vector<std::string> fields = {absl::StrCat(i)};
    for (double x : result.trace[i].x) fields.push_back(ShortNumber(x));
    fields.push_back(ShortNumber(result.trace[i].value));
    out += absl::StrJoin(fields, ",") + "\n";
  }
  return out;
}

absl::StatusOr<PlantResult> PlantScenarios(
    const Dataset& dataset, const std::vector<Scenario>& scenarios,
    std::uint64_t seed) {
  const Schema& schema = dataset.schema();
  std::vector<Row> planted;
  std::vector<PlantedRow> truth;
  RowId next_id = 0;
  for (RowId id : dataset.row_ids()) next_id = std::max(next_id, id + 1);

  for (std::size_t s = 0; s < scenarios.size(); ++s) {
    const Scenario& scenario = scenarios[s];
    if (scenario.count < 1) {
      return absl::InvalidArgumentError(
          absl::StrCat("scenario '", scenario.name, "' has count 0"));
    }
    for (const auto& [name, value] : scenario.row_template) {
      if (!FindColumn(schema, name).has_value()) {
        return absl::InvalidArgumentError(absl::StrCat(
            "scenario '", scenario.name, "' names unknown column '", name,
            "'"));
      }
    }
    for (std::size_t i = 0; i < scenario.count; ++i) {
      Row row;
      for (std::size_t c = 0; c < schema.size(); ++c) {
        auto it = scenario.row_template.find(schema[c].name);
        if (it == scenario.row_template.end()) {
          return absl::InvalidArgumentError(
              absl::StrCat("scenario '", scenario.name,
                           "' template misses column '", schema[c].name, "'"));
        }
        BitStream rng(MixSeed(seed, s, i, c));
        Cell cell;
        if (const auto* fixed = std::get_if<FixedValue>(&it->second)) {
          cell = fixed->value;
        } else if (const auto* range = std::get_if<UniformRange>(&it->second)) {
          double v = range->lo + (range->hi - range->lo) * UniformOpen(rng);
          if (schema[c].kind == ColumnKind::kInteger) v = std::round(v);
          cell = v;
        } else {
          const auto& choice = std::get<ChoiceOf>(it->second);
          if (choice.options.empty()) {
            return absl::InvalidArgumentError(absl::StrCat(
                "scenario '", scenario.name, "' has an empty choice for '",
                schema[c].name, "'"));
          }
          cell = choice.options[UniformIndex(rng, choice.options.size())];
        }
        absl::Status status = ValidateCell(schema[c], cell);
        if (!status.ok()) {
          return absl::InvalidArgumentError(absl::StrCat(
              "scenario '", scenario.name, "', column '", schema[c].name,
              "': ", status.message()));
        }
        row.push_back(std::move(cell));
      }
      planted.push_back(std::move(row));
      truth.push_back(PlantedRow{next_id++, scenario.name,
                                 scenario.label.empty() ? scenario.name
                                                        : scenario.label});
    }
  }

  // Choose which of the n + m output slots hold planted rows.
  const std::size_t total = dataset.num_rows() + planted.size();
  std::vector<char> is_planted(total, 0);
  std::fill(is_planted.begin(),
            is_planted.begin() + static_cast<long>(planted.size()), 1);
  BitStream rng(MixSeed(seed, 0x91a47));
  for (std::size_t i = total; i > 1; --i) {
    std::swap(is_planted[i - 1], is_planted[UniformIndex(rng, i)]);
  }
  std::vector<Row> rows;
  std::vector<RowId> ids;
  rows.reserve(total);
  ids.reserve(total);
  std::size_t next_original = 0;
  std::size_t next_planted = 0;
  for (std::size_t slot = 0; slot < total; ++slot) {
    if (is_planted[slot]) {
      rows.push_back(planted[next_planted]);
      ids.push_back(truth[next_planted].row_id);
      ++next_planted;
    } else {
      rows.push_back(dataset.rows()[next_original]);
      ids.push_back(dataset.row_ids()[next_original]);
      ++next_original;
    }
  }
  SYNTHPRIV_ASSIGN_OR_RETURN(
      Dataset out, Dataset::Create(schema, std::move(rows), std::move(ids),
                                   dataset.provenance()));
  return PlantResult{std::move(out), std::move(truth)};
}

std::vector<Cell> BoundaryValues(const ColumnSpec& column) {
  std::vector<Cell> candidates;
  switch (column.kind) {
    case ColumnKind::kContinuous:
    case ColumnKind::kInteger: {
      double lo = -kUnboundedExtreme;
      double hi = kUnboundedExtreme;
      if (column.bounds.has_value()) {
        lo = column.bounds->min;
        hi = column.bounds->max;
        if (column.kind == ColumnKind::kInteger) {
          lo = std::ceil(lo);
          hi = std::floor(hi);
        }
      }
      const auto inside = [&](double v) { return v >= lo && v <= hi; };
      const double baseline = inside(0.0) ? 0.0 : lo;
      candidates = {baseline, lo, hi};
      if (inside(0.0)) candidates.emplace_back(0.0);
      if (inside(-std::fabs(hi))) candidates.emplace_back(-std::fabs(hi));
      break;
    }
    case ColumnKind::kCategorical:
      for (std::size_t k = 0; k < column.categories.size(); ++k) {
        candidates.emplace_back(static_cast<int>(k));
      }
      break;
    case ColumnKind::kIdentifier:
      candidates = {std::string("CORNER-0"), std::string(256, 'Z'),
                    std::string("comma, \"quote\" and space "),
                    std::string("\xC3\xBCnicode-\xE2\x82\xAC")};
      break;
  }
  std::vector<Cell> unique;
  for (Cell& c : candidates) {
    if (std::find(unique.begin(), unique.end(), c) == unique.end()) {
      unique.push_back(std::move(c));
    }
  }
  return unique;
}

absl::StatusOr<CornerSweep> CornerCaseSweep(
    const Schema& schema,
    const std::map<std::string, std::vector<Cell>>& extras) {
  SYNTHPRIV_RETURN_IF_ERROR(ValidateSchema(schema));
  Row baseline;
  std::vector<std::vector<Cell>> values;
  for (const ColumnSpec& column : schema) {
    values.push_back(BoundaryValues(column));
    baseline.push_back(values.back().front());
  }
  std::vector<Row> rows = {baseline};
  for (std::size_t c = 0; c < schema.size(); ++c) {
    for (std::size_t v = 1; v < values[c].size(); ++v) {
      Row row = baseline;
      row[c] = values[c][v];
      rows.push_back(std::move(row));
    }
  }
  CornerSweep sweep{Dataset::Empty(schema, ""), {}};
  for (const auto& [name, list] : extras) {
    auto idx = FindColumn(schema, name);
    for (const Cell& cell : list) {
      if (!idx.has_value()) {
        sweep.skipped.push_back(
            absl::StrCat(name, ": unknown column"));
        continue;
      }
      absl::Status status = ValidateCell(schema[*idx], cell);
      if (!status.ok()) {
        sweep.skipped.push_back(absl::StrCat(
            name, "=", RenderCell(schema[*idx], cell), ": ", status.message()));
        continue;
      }
      Row row = baseline;
      row[*idx] = cell;
      rows.push_back(std::move(row));
    }
  }
  SYNTHPRIV_ASSIGN_OR_RETURN(
      sweep.dataset,
      Dataset::Create(schema, std::move(rows), "level6-corner-sweep"));
  return sweep;
}

}  // namespace synthpriv
