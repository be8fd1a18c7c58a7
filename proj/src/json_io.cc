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

#include "synthpriv/json_io.h"

#include <cmath>
#include <limits>
#include <utility>

#include "absl/strings/str_cat.h"
#include "synthpriv/csv.h"
#include "synthpriv/status_macros.h"

namespace synthpriv {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

absl::Status Bad(const std::string& where, const std::string& what) {
  return absl::InvalidArgumentError(absl::StrCat(where, ": ", what));
}

std::string At(const std::string& where, const std::string& key) {
  return where.empty() ? std::string(key) : absl::StrCat(where, ".", key);
}

std::string At(const std::string& where, std::size_t index) {
  return absl::StrCat(where, "[", index, "]");
}

absl::Status RequireObject(const Json& json, const std::string& where) {
  if (!json.is_object()) return Bad(where, "expected a JSON object");
  return absl::OkStatus();
}

absl::Status RequireArray(const Json& json, const std::string& where) {
  if (!json.is_array()) return Bad(where, "expected a JSON array");
  return absl::OkStatus();
}

absl::StatusOr<double> AsDouble(const Json& json, const std::string& where) {
  if (json.is_number()) return json.get<double>();
  if (json.is_null()) return kInf;
  if (json.is_string()) {
    const std::string s = json.get<std::string>();
    if (s == "inf" || s == "infinity" || s == "Infinity") return kInf;
  }
  return Bad(where, "expected a number");
}

absl::StatusOr<double> RequiredDouble(const Json& object, const std::string& key,
                                      const std::string& where) {
  auto it = object.find(key);
  if (it == object.end()) return Bad(At(where, key), "missing");
  return AsDouble(*it, At(where, key));
}

absl::StatusOr<double> OptionalDouble(const Json& object, const std::string& key,
                                      double fallback, const std::string& where) {
  auto it = object.find(key);
  if (it == object.end()) return fallback;
  return AsDouble(*it, At(where, key));
}

absl::StatusOr<std::string> RequiredString(const Json& object,
                                           const std::string& key,
                                           const std::string& where) {
  auto it = object.find(key);
  if (it == object.end()) return Bad(At(where, key), "missing");
  if (!it->is_string()) return Bad(At(where, key), "expected a string");
  return it->get<std::string>();
}

absl::StatusOr<std::string> OptionalString(const Json& object,
                                           const std::string& key,
                                           std::string fallback,
                                           const std::string& where) {
  auto it = object.find(key);
  if (it == object.end()) return fallback;
  if (!it->is_string()) return Bad(At(where, key), "expected a string");
  return it->get<std::string>();
}

absl::StatusOr<bool> OptionalBool(const Json& object, const std::string& key,
                                  bool fallback, const std::string& where) {
  auto it = object.find(key);
  if (it == object.end()) return fallback;
  if (!it->is_boolean()) return Bad(At(where, key), "expected true or false");
  return it->get<bool>();
}

absl::StatusOr<std::uint64_t> AsSeed(const Json& json, const std::string& where) {
  if (json.is_number_unsigned()) return json.get<std::uint64_t>();
  if (json.is_number_integer() && json.get<std::int64_t>() >= 0) {
    return static_cast<std::uint64_t>(json.get<std::int64_t>());
  }
  return Bad(where, "expected a non-negative integer");
}

absl::StatusOr<std::optional<std::uint64_t>> OptionalSeed(
    const Json& object, const std::string& key, const std::string& where) {
  auto it = object.find(key);
  if (it == object.end() || it->is_null()) return std::nullopt;
  SYNTHPRIV_ASSIGN_OR_RETURN(std::uint64_t seed, AsSeed(*it, At(where, key)));
  return seed;
}

absl::StatusOr<std::int64_t> OptionalInt(const Json& object,
                                         const std::string& key,
                                         std::int64_t fallback,
                                         const std::string& where) {
  auto it = object.find(key);
  if (it == object.end()) return fallback;
  if (!it->is_number_integer()) {
    return Bad(At(where, key), "expected an integer");
  }
  return it->get<std::int64_t>();
}

absl::StatusOr<std::vector<double>> DoubleArray(const Json& json,
                                                const std::string& where) {
  SYNTHPRIV_RETURN_IF_ERROR(RequireArray(json, where));
  std::vector<double> out;
  out.reserve(json.size());
  for (std::size_t i = 0; i < json.size(); ++i) {
    SYNTHPRIV_ASSIGN_OR_RETURN(double v, AsDouble(json[i], At(where, i)));
    out.push_back(v);
  }
  return out;
}

absl::StatusOr<std::vector<std::string>> StringArray(const Json& json,
                                                     const std::string& where) {
  SYNTHPRIV_RETURN_IF_ERROR(RequireArray(json, where));
  std::vector<std::string> out;
  for (std::size_t i = 0; i < json.size(); ++i) {
    if (!json[i].is_string()) return Bad(At(where, i), "expected a string");
    out.push_back(json[i].get<std::string>());
  }
  return out;
}

Json FiniteOrNull(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

absl::StatusOr<ColumnSpec> ColumnFromJson(const Json& json,
                                          const std::string& where) {
  SYNTHPRIV_RETURN_IF_ERROR(RequireObject(json, where));
  ColumnSpec column;
  SYNTHPRIV_ASSIGN_OR_RETURN(column.name, RequiredString(json, "name", where));
  SYNTHPRIV_ASSIGN_OR_RETURN(std::string kind,
                             RequiredString(json, "kind", where));
  auto parsed = ParseColumnKind(kind);
  if (!parsed.ok()) return Bad(At(where, "kind"), std::string(parsed.status().message()));
  column.kind = *parsed;
  SYNTHPRIV_ASSIGN_OR_RETURN(
      column.pii,
      OptionalBool(json, "pii", column.kind == ColumnKind::kIdentifier, where));
  if (auto it = json.find("bounds"); it != json.end() && !it->is_null()) {
    Bounds bounds;
    if (it->is_array()) {
      if (it->size() != 2) return Bad(At(where, "bounds"), "expected [min, max]");
      SYNTHPRIV_ASSIGN_OR_RETURN(bounds.min,
                                 AsDouble((*it)[0], At(where, "bounds")));
      SYNTHPRIV_ASSIGN_OR_RETURN(bounds.max,
                                 AsDouble((*it)[1], At(where, "bounds")));
    } else if (it->is_object()) {
      SYNTHPRIV_ASSIGN_OR_RETURN(bounds.min,
                                 RequiredDouble(*it, "min", At(where, "bounds")));
      SYNTHPRIV_ASSIGN_OR_RETURN(bounds.max,
                                 RequiredDouble(*it, "max", At(where, "bounds")));
    } else {
      return Bad(At(where, "bounds"), "expected [min, max]");
    }
    column.bounds = bounds;
  }
  if (auto it = json.find("categories"); it != json.end() && !it->is_null()) {
    SYNTHPRIV_ASSIGN_OR_RETURN(column.categories,
                               StringArray(*it, At(where, "categories")));
  }
  return column;
}

Json ColumnToJson(const ColumnSpec& column) {
  Json out = {{"name", column.name},
              {"kind", std::string(ColumnKindName(column.kind))},
              {"pii", column.pii}};
  if (column.bounds.has_value()) {
    out["bounds"] = Json::array({column.bounds->min, column.bounds->max});
  }
  if (column.is_categorical()) out["categories"] = column.categories;
  return out;
}

absl::StatusOr<Schema> SchemaArrayFromJson(const Json& json,
                                           const std::string& where) {
  SYNTHPRIV_RETURN_IF_ERROR(RequireArray(json, where));
  Schema schema;
  for (std::size_t i = 0; i < json.size(); ++i) {
    SYNTHPRIV_ASSIGN_OR_RETURN(ColumnSpec column,
                               ColumnFromJson(json[i], At(where, i)));
    schema.push_back(std::move(column));
  }
  return schema;
}

// Generic guard: nlohmann can still throw on exotic inputs (e.g. numbers out
// of range for the requested type); surface those as InvalidArgument.
template <typename Fn>
auto Guarded(const std::string& what, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const Json::exception& e) {
    return absl::InvalidArgumentError(absl::StrCat(what, ": ", e.what()));
  }
}

absl::StatusOr<ColumnRule> RuleFromJson(const Json& json,
                                        const std::string& where) {
  SYNTHPRIV_RETURN_IF_ERROR(RequireObject(json, where));
  SYNTHPRIV_ASSIGN_OR_RETURN(std::string family,
                             RequiredString(json, "family", where));
  if (family == "uniform") {
    UniformRule r;
    SYNTHPRIV_ASSIGN_OR_RETURN(r.a, RequiredDouble(json, "a", where));
    SYNTHPRIV_ASSIGN_OR_RETURN(r.b, RequiredDouble(json, "b", where));
    return r;
  }
  if (family == "normal" || family == "lognormal") {
    double mu = 0.0, sigma = 0.0;
    SYNTHPRIV_ASSIGN_OR_RETURN(mu, RequiredDouble(json, "mu", where));
    SYNTHPRIV_ASSIGN_OR_RETURN(sigma, RequiredDouble(json, "sigma", where));
    if (family == "normal") return NormalRule{mu, sigma};
    return LogNormalRule{mu, sigma};
  }
  if (family == "exponential") {
    ExponentialRule r;
    SYNTHPRIV_ASSIGN_OR_RETURN(r.lambda, RequiredDouble(json, "lambda", where));
    return r;
  }
  if (family == "categorical") {
    auto it = json.find("weights");
    if (it == json.end()) return Bad(At(where, "weights"), "missing");
    CategoricalRule r;
    SYNTHPRIV_ASSIGN_OR_RETURN(r.weights, DoubleArray(*it, At(where, "weights")));
    return r;
  }
  if (family == "equation") {
    EquationRule r;
    SYNTHPRIV_ASSIGN_OR_RETURN(r.intercept,
                               OptionalDouble(json, "intercept", 0.0, where));
    SYNTHPRIV_ASSIGN_OR_RETURN(r.noise_sigma,
                               OptionalDouble(json, "noise_sigma", 0.0, where));
    if (auto it = json.find("terms"); it != json.end()) {
      const std::string tw = At(where, "terms");
      SYNTHPRIV_RETURN_IF_ERROR(RequireArray(*it, tw));
      for (std::size_t i = 0; i < it->size(); ++i) {
        const Json& t = (*it)[i];
        const std::string w = At(tw, i);
        SYNTHPRIV_RETURN_IF_ERROR(RequireObject(t, w));
        EquationTerm term;
        SYNTHPRIV_ASSIGN_OR_RETURN(term.column, RequiredString(t, "column", w));
        SYNTHPRIV_ASSIGN_OR_RETURN(term.coef, RequiredDouble(t, "coef", w));
        SYNTHPRIV_ASSIGN_OR_RETURN(std::string type,
                                   OptionalString(t, "type", "linear", w));
        if (type == "linear") {
          term.kind = EquationTerm::Kind::kLinear;
        } else if (type == "equals") {
          term.kind = EquationTerm::Kind::kEquals;
          SYNTHPRIV_ASSIGN_OR_RETURN(term.category,
                                     RequiredString(t, "category", w));
        } else if (type == "greater") {
          term.kind = EquationTerm::Kind::kGreater;
          SYNTHPRIV_ASSIGN_OR_RETURN(term.threshold,
                                     RequiredDouble(t, "threshold", w));
        } else {
          return Bad(At(w, "type"),
                     absl::StrCat("unknown term type '", type,
                                  "' (linear, equals, greater)"));
        }
        r.terms.push_back(std::move(term));
      }
    }
    return r;
  }
  return Bad(At(where, "family"),
             absl::StrCat("unknown family '", family,
                          "' (uniform, normal, lognormal, exponential, "
                          "categorical, equation)"));
}

Json RuleToJson(const ColumnRule& rule) {
  if (const auto* r = std::get_if<UniformRule>(&rule)) {
    return {{"family", "uniform"}, {"a", r->a}, {"b", r->b}};
  }
  if (const auto* r = std::get_if<NormalRule>(&rule)) {
    return {{"family", "normal"}, {"mu", r->mu}, {"sigma", r->sigma}};
  }
  if (const auto* r = std::get_if<LogNormalRule>(&rule)) {
    return {{"family", "lognormal"}, {"mu", r->mu}, {"sigma", r->sigma}};
  }
  if (const auto* r = std::get_if<ExponentialRule>(&rule)) {
    return {{"family", "exponential"}, {"lambda", r->lambda}};
  }
  if (const auto* r = std::get_if<CategoricalRule>(&rule)) {
    return {{"family", "categorical"}, {"weights", r->weights}};
  }
  const auto& r = std::get<EquationRule>(rule);
  Json terms = Json::array();
  for (const EquationTerm& t : r.terms) {
    Json term = {{"column", t.column}, {"coef", t.coef}};
    switch (t.kind) {
      case EquationTerm::Kind::kLinear:
        term["type"] = "linear";
        break;
      case EquationTerm::Kind::kEquals:
        term["type"] = "equals";
        term["category"] = t.category;
        break;
      case EquationTerm::Kind::kGreater:
        term["type"] = "greater";
        term["threshold"] = t.threshold;
        break;
    }
    terms.push_back(std::move(term));
  }
  return {{"family", "equation"},
          {"intercept", r.intercept},
          {"noise_sigma", r.noise_sigma},
          {"terms", std::move(terms)}};
}

std::string_view MomentName(MomentKind kind) {
  switch (kind) {
    case MomentKind::kMean:
      return "mean";
    case MomentKind::kStd:
      return "std";
    case MomentKind::kQuantile:
      return "quantile";
    case MomentKind::kFrequency:
      return "frequency";
  }
  return "mean";
}

absl::StatusOr<TemplateValue> TemplateFromJson(const ColumnSpec& column,
                                               const Json& json,
                                               const std::string& where) {
  SYNTHPRIV_RETURN_IF_ERROR(RequireObject(json, where));
  if (json.size() != 1) {
    return Bad(where, "expected exactly one of value, uniform, choice");
  }
  if (auto it = json.find("value"); it != json.end()) {
    SYNTHPRIV_ASSIGN_OR_RETURN(Cell cell, CellFromJson(column, *it));
    return FixedValue{std::move(cell)};
  }
  if (auto it = json.find("uniform"); it != json.end()) {
    if (!column.is_numeric()) {
      return Bad(where, "uniform ranges need a numeric column");
    }
    SYNTHPRIV_ASSIGN_OR_RETURN(std::vector<double> range,
                               DoubleArray(*it, At(where, "uniform")));
    if (range.size() != 2 || !(range[0] <= range[1])) {
      return Bad(At(where, "uniform"), "expected [lo, hi] with lo <= hi");
    }
    return UniformRange{range[0], range[1]};
  }
  if (auto it = json.find("choice"); it != json.end()) {
    SYNTHPRIV_RETURN_IF_ERROR(RequireArray(*it, At(where, "choice")));
    ChoiceOf choice;
    for (const Json& v : *it) {
      SYNTHPRIV_ASSIGN_OR_RETURN(Cell cell, CellFromJson(column, v));
      choice.options.push_back(std::move(cell));
    }
    return choice;
  }
  return Bad(where, "expected one of value, uniform, choice");
}

Json CopulaToJson(const CopulaModel& model) {
  Json marginals = Json::array();
  for (std::size_t c = 0; c < model.schema.size(); ++c) {
    Json m = {{"column", model.schema[c].name}};
    m[model.schema[c].is_categorical() ? "frequencies" : "values"] =
        model.marginals[c];
    marginals.push_back(std::move(m));
  }
  Json correlation = Json::array();
  const std::size_t d = model.dimension();
  for (std::size_t i = 0; i < d; ++i) {
    correlation.push_back(std::vector<double>(
        model.correlation.begin() + static_cast<long>(i * d),
        model.correlation.begin() + static_cast<long>((i + 1) * d)));
  }
  return {{"format", kModelFormat},
          {"version", kModelFormatVersion},
          {"type", "gaussian-copula"},
          {"schema", SchemaToJson(model.schema)},
          {"marginals", std::move(marginals)},
          {"correlation", std::move(correlation)},
          {"shrinkage", model.shrinkage},
          {"warnings", model.warnings}};
}

Json KdTreeToJson(const KdTreeModel& model) {
  Json nodes = Json::array();
  for (const KdNode& n : model.nodes) {
    nodes.push_back({{"split_dim", n.split_dim},
                     {"split_value", n.split_value},
                     {"left", n.left},
                     {"right", n.right},
                     {"leaf", n.leaf},
                     {"depth", n.depth}});
  }
  Json leaves = Json::array();
  for (const KdLeaf& l : model.leaves) {
    leaves.push_back({{"lower", l.lower},
                      {"upper", l.upper},
                      {"noised_count", l.noised_count},
                      {"category_weights", l.category_weights}});
  }
  return {{"format", kModelFormat},
          {"version", kModelFormatVersion},
          {"type", "kdtree"},
          {"variant_note", kKdVariantNote},
          {"schema", SchemaToJson(model.schema)},
          {"numeric_columns", model.numeric_columns},
          {"categorical_columns", model.categorical_columns},
          {"nodes", std::move(nodes)},
          {"leaves", std::move(leaves)},
          {"epsilon", FiniteOrNull(model.epsilon)},
          {"depth", model.depth},
          {"max_depth", model.max_depth},
          {"min_leaf", model.min_leaf},
          {"split_rule", model.split_rule}};
}

absl::StatusOr<CopulaModel> CopulaFromJson(const Json& json) {
  CopulaModel model;
  SYNTHPRIV_ASSIGN_OR_RETURN(model.schema,
                             SchemaArrayFromJson(json.at("schema"), "schema"));
  const Json& marginals = json.at("marginals");
  SYNTHPRIV_RETURN_IF_ERROR(RequireArray(marginals, "marginals"));
  for (std::size_t i = 0; i < marginals.size(); ++i) {
    const Json& m = marginals[i];
    const char* key = m.contains("frequencies") ? "frequencies" : "values";
    SYNTHPRIV_ASSIGN_OR_RETURN(std::vector<double> values,
                               DoubleArray(m.at(key), At("marginals", i)));
    model.marginals.push_back(std::move(values));
  }
  const Json& correlation = json.at("correlation");
  SYNTHPRIV_RETURN_IF_ERROR(RequireArray(correlation, "correlation"));
  for (std::size_t i = 0; i < correlation.size(); ++i) {
    SYNTHPRIV_ASSIGN_OR_RETURN(
        std::vector<double> row,
        DoubleArray(correlation[i], At("correlation", i)));
    model.correlation.insert(model.correlation.end(), row.begin(), row.end());
  }
  SYNTHPRIV_ASSIGN_OR_RETURN(model.shrinkage,
                             OptionalDouble(json, "shrinkage", 0.0, ""));
  if (json.contains("warnings")) {
    SYNTHPRIV_ASSIGN_OR_RETURN(model.warnings,
                               StringArray(json.at("warnings"), "warnings"));
  }
  SYNTHPRIV_RETURN_IF_ERROR(ValidateCopulaModel(model));
  return model;
}

absl::StatusOr<KdTreeModel> KdTreeFromJson(const Json& json) {
  KdTreeModel model;
  SYNTHPRIV_ASSIGN_OR_RETURN(model.schema,
                             SchemaArrayFromJson(json.at("schema"), "schema"));
  model.numeric_columns =
      json.at("numeric_columns").get<std::vector<std::size_t>>();
  model.categorical_columns =
      json.at("categorical_columns").get<std::vector<std::size_t>>();
  for (const Json& n : json.at("nodes")) {
    KdNode node;
    node.split_dim = n.at("split_dim").get<int>();
    node.split_value = n.at("split_value").get<double>();
    node.left = n.at("left").get<int>();
    node.right = n.at("right").get<int>();
    node.leaf = n.at("leaf").get<int>();
    node.depth = n.at("depth").get<int>();
    model.nodes.push_back(node);
  }
  for (std::size_t i = 0; i < json.at("leaves").size(); ++i) {
    const Json& l = json.at("leaves")[i];
    KdLeaf leaf;
    SYNTHPRIV_ASSIGN_OR_RETURN(leaf.lower,
                               DoubleArray(l.at("lower"), At("leaves", i)));
    SYNTHPRIV_ASSIGN_OR_RETURN(leaf.upper,
                               DoubleArray(l.at("upper"), At("leaves", i)));
    leaf.noised_count = l.at("noised_count").get<double>();
    leaf.category_weights =
        l.at("category_weights").get<std::vector<std::vector<double>>>();
    model.leaves.push_back(std::move(leaf));
  }
  SYNTHPRIV_ASSIGN_OR_RETURN(model.epsilon,
                             AsDouble(json.at("epsilon"), "epsilon"));
  model.depth = json.at("depth").get<int>();
  model.max_depth = json.at("max_depth").get<int>();
  model.min_leaf = json.at("min_leaf").get<std::size_t>();
  SYNTHPRIV_ASSIGN_OR_RETURN(
      model.split_rule, OptionalString(json, "split_rule", kKdSplitRule, ""));
  SYNTHPRIV_RETURN_IF_ERROR(ValidateKdTreeModel(model));
  return model;
}

}  // namespace

absl::StatusOr<Json> ParseJson(std::string_view text) {
  Json json = Json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (json.is_discarded()) {
    return absl::InvalidArgumentError("malformed JSON");
  }
  return json;
}

absl::StatusOr<Json> LoadJson(const std::string& path) {
  SYNTHPRIV_ASSIGN_OR_RETURN(std::string text, ReadFile(path));
  auto json = ParseJson(text);
  if (!json.ok()) return Annotate(json.status(), path);
  return json;
}

std::string DumpJson(const Json& json) { return json.dump(2) + "\n"; }

absl::StatusOr<double> NumberOr(const Json& object, const std::string& key,
                                double fallback) {
  if (!object.is_object()) return fallback;
  return OptionalDouble(object, std::string(key), fallback, "");
}

Json SchemaToJson(const Schema& schema) {
  Json out = Json::array();
  for (const ColumnSpec& column : schema) out.push_back(ColumnToJson(column));
  return out;
}

absl::StatusOr<Schema> SchemaFromJson(const Json& json) {
  const Json* columns = &json;
  if (json.is_object()) {
    auto it = json.find("columns");
    if (it == json.end()) return Bad("schema", "missing \"columns\" array");
    columns = &*it;
  }
  SYNTHPRIV_ASSIGN_OR_RETURN(Schema schema,
                             SchemaArrayFromJson(*columns, "columns"));
  SYNTHPRIV_RETURN_IF_ERROR(ValidateSchema(schema));
  return schema;
}

absl::StatusOr<Schema> LoadSchema(const std::string& path) {
  SYNTHPRIV_ASSIGN_OR_RETURN(Json json, LoadJson(path));
  auto schema = SchemaFromJson(json);
  if (!schema.ok()) return Annotate(schema.status(), path);
  return schema;
}

Json CellToJson(const ColumnSpec& column, const Cell& cell) {
  if (const double* v = std::get_if<double>(&cell)) return *v;
  if (std::holds_alternative<int>(cell)) return RenderCell(column, cell);
  return std::get<std::string>(cell);
}

absl::StatusOr<Cell> CellFromJson(const ColumnSpec& column, const Json& json) {
  switch (column.kind) {
    case ColumnKind::kContinuous:
    case ColumnKind::kInteger:
      if (!json.is_number()) {
        return Bad(column.name, "expected a number");
      }
      return Cell(json.get<double>());
    case ColumnKind::kCategorical: {
      if (!json.is_string()) return Bad(column.name, "expected a category");
      const std::string label = json.get<std::string>();
      for (std::size_t k = 0; k < column.categories.size(); ++k) {
        if (column.categories[k] == label) return Cell(static_cast<int>(k));
      }
      return Cell(-1);
    }
    case ColumnKind::kIdentifier:
      if (json.is_string()) return Cell(json.get<std::string>());
      if (json.is_number()) return Cell(json.dump());
      return Bad(column.name, "expected a string");
  }
  return Bad(column.name, "unsupported column kind");
}

Json PolicyToJson(const ObscurePolicy& policy) {
  Json out = Json::object();
  for (const auto& [column, action] : policy.actions) {
    Json entry = {{"action", std::string(ActionName(action))}};
    if (const auto* mask = std::get_if<MaskAction>(&action)) {
      entry["keep_last"] = mask->keep_last;
      entry["fill"] = std::string(1, mask->fill);
    } else if (const auto* sur = std::get_if<SurrogateAction>(&action)) {
      entry["seed"] = sur->seed;
    } else if (const auto* hash = std::get_if<HashAction>(&action)) {
      entry["salt"] = hash->salt;
    }
    out[column] = std::move(entry);
  }
  return out;
}

absl::StatusOr<ObscurePolicy> PolicyFromJson(const Json& json) {
  return Guarded("policy", [&]() -> absl::StatusOr<ObscurePolicy> {
    SYNTHPRIV_RETURN_IF_ERROR(RequireObject(json, "policy"));
    ObscurePolicy policy;
    for (const auto& [column, entry] : json.items()) {
      const std::string where = At("policy", column);
      SYNTHPRIV_RETURN_IF_ERROR(RequireObject(entry, where));
      SYNTHPRIV_ASSIGN_OR_RETURN(std::string action,
                                 RequiredString(entry, "action", where));
      if (action == "drop") {
        policy.actions[column] = DropAction{};
      } else if (action == "mask") {
        MaskAction mask;
        SYNTHPRIV_ASSIGN_OR_RETURN(std::int64_t keep,
                                   OptionalInt(entry, "keep_last", 4, where));
        if (keep < 0) return Bad(At(where, "keep_last"), "must be >= 0");
        mask.keep_last = static_cast<int>(keep);
        SYNTHPRIV_ASSIGN_OR_RETURN(std::string fill,
                                   OptionalString(entry, "fill", "X", where));
        if (fill.size() != 1) {
          return Bad(At(where, "fill"), "expected a single character");
        }
        mask.fill = fill[0];
        policy.actions[column] = mask;
      } else if (action == "surrogate") {
        SurrogateAction sur;
        SYNTHPRIV_ASSIGN_OR_RETURN(auto seed,
                                   OptionalSeed(entry, "seed", where));
        sur.seed = seed.value_or(0);
        policy.actions[column] = sur;
      } else if (action == "hash") {
        HashAction hash;
        SYNTHPRIV_ASSIGN_OR_RETURN(hash.salt,
                                   RequiredString(entry, "salt", where));
        policy.actions[column] = hash;
      } else {
        return Bad(At(where, "action"),
                   absl::StrCat("unknown action '", action,
                                "' (drop, mask, surrogate, hash)"));
      }
    }
    return policy;
  });
}

Json NoiseConfigToJson(const NoiseConfig& config) {
  Json columns = Json::object();
  for (const auto& [name, mechanism] : config.columns) {
    Json entry;
    if (const auto* m = std::get_if<LaplaceMechanism>(&mechanism)) {
      entry = {{"mechanism", "laplace"},
               {"epsilon", m->epsilon},
               {"sensitivity", m->sensitivity}};
    } else if (const auto* m = std::get_if<GaussianMechanism>(&mechanism)) {
      entry = {{"mechanism", "gaussian"},
               {"epsilon", m->epsilon},
               {"delta", m->delta},
               {"sensitivity", m->sensitivity}};
    } else if (const auto* m = std::get_if<SwapMechanism>(&mechanism)) {
      entry = {{"mechanism", "swap"}};
      if (m->seed.has_value()) entry["seed"] = *m->seed;
    } else {
      const auto& rr = std::get<RandomizedResponseMechanism>(mechanism);
      entry = {{"mechanism", "randomized_response"}, {"p_truth", rr.p_truth}};
      if (rr.seed.has_value()) entry["seed"] = *rr.seed;
    }
    columns[name] = std::move(entry);
  }
  return {{"clamp_to_bounds", config.clamp_to_bounds},
          {"columns", std::move(columns)}};
}

absl::StatusOr<NoiseConfig> NoiseConfigFromJson(const Json& json) {
  return Guarded("noise", [&]() -> absl::StatusOr<NoiseConfig> {
    SYNTHPRIV_RETURN_IF_ERROR(RequireObject(json, "noise"));
    NoiseConfig config;
    SYNTHPRIV_ASSIGN_OR_RETURN(
        config.clamp_to_bounds,
        OptionalBool(json, "clamp_to_bounds", true, "noise"));
    auto columns = json.find("columns");
    if (columns == json.end()) return config;
    SYNTHPRIV_RETURN_IF_ERROR(RequireObject(*columns, "noise.columns"));
    for (const auto& [name, entry] : columns->items()) {
      const std::string where = At("noise.columns", name);
      SYNTHPRIV_RETURN_IF_ERROR(RequireObject(entry, where));
      SYNTHPRIV_ASSIGN_OR_RETURN(std::string kind,
                                 RequiredString(entry, "mechanism", where));
      if (kind == "laplace") {
        LaplaceMechanism m;
        SYNTHPRIV_ASSIGN_OR_RETURN(m.epsilon,
                                   RequiredDouble(entry, "epsilon", where));
        SYNTHPRIV_ASSIGN_OR_RETURN(
            m.sensitivity, OptionalDouble(entry, "sensitivity", 1.0, where));
        config.columns[name] = m;
      } else if (kind == "gaussian") {
        GaussianMechanism m;
        SYNTHPRIV_ASSIGN_OR_RETURN(m.epsilon,
                                   RequiredDouble(entry, "epsilon", where));
        SYNTHPRIV_ASSIGN_OR_RETURN(m.delta,
                                   RequiredDouble(entry, "delta", where));
        SYNTHPRIV_ASSIGN_OR_RETURN(
            m.sensitivity, OptionalDouble(entry, "sensitivity", 1.0, where));
        config.columns[name] = m;
      } else if (kind == "swap") {
        SwapMechanism m;
        SYNTHPRIV_ASSIGN_OR_RETURN(m.seed, OptionalSeed(entry, "seed", where));
        config.columns[name] = m;
      } else if (kind == "randomized_response") {
        RandomizedResponseMechanism m;
        SYNTHPRIV_ASSIGN_OR_RETURN(m.p_truth,
                                   RequiredDouble(entry, "p_truth", where));
        SYNTHPRIV_ASSIGN_OR_RETURN(m.seed, OptionalSeed(entry, "seed", where));
        config.columns[name] = m;
      } else {
        return Bad(At(where, "mechanism"),
                   absl::StrCat("unknown mechanism '", kind,
                                "' (laplace, gaussian, swap, "
                                "randomized_response)"));
      }
    }
    return config;
  });
}

Json ModelToJson(const GeneratorModel& model) {
  if (const auto* copula = std::get_if<CopulaModel>(&model)) {
    return CopulaToJson(*copula);
  }
  return KdTreeToJson(std::get<KdTreeModel>(model));
}

absl::StatusOr<GeneratorModel> ModelFromJson(const Json& json) {
  return Guarded("model", [&]() -> absl::StatusOr<GeneratorModel> {
    SYNTHPRIV_RETURN_IF_ERROR(RequireObject(json, "model"));
    if (json.value("format", "") != kModelFormat) {
      return Bad("model.format",
                 absl::StrCat("expected \"", kModelFormat, "\""));
    }
    const int version = json.value("version", 0);
    if (version != kModelFormatVersion) {
      return absl::InvalidArgumentError(
          absl::StrCat("model.version: unsupported version ", version,
                       " (this build reads ", kModelFormatVersion, ")"));
    }
    const std::string type = json.value("type", "");
    if (type == "gaussian-copula") {
      SYNTHPRIV_ASSIGN_OR_RETURN(CopulaModel m, CopulaFromJson(json));
      return GeneratorModel(std::move(m));
    }
    if (type == "kdtree") {
      SYNTHPRIV_ASSIGN_OR_RETURN(KdTreeModel m, KdTreeFromJson(json));
      return GeneratorModel(std::move(m));
    }
    return Bad("model.type", absl::StrCat("unknown model type '", type, "'"));
  });
}

Json SimulatorSpecToJson(const SimulatorSpec& spec) {
  Json columns = Json::array();
  for (const SimColumn& c : spec.columns) {
    Json column = ColumnToJson(c.spec);
    column["rule"] = RuleToJson(c.rule);
    columns.push_back(std::move(column));
  }
  Json params = Json::array();
  for (const FreeParameter& p : spec.free_params) {
    params.push_back({{"name", p.name}, {"lower", p.lower}, {"upper", p.upper}});
  }
  return {{"columns", std::move(columns)},
          {"free_params", std::move(params)},
          {"calibrated", spec.calibrated}};
}

absl::StatusOr<SimulatorSpec> SimulatorSpecFromJson(const Json& json) {
  return Guarded("simulator", [&]() -> absl::StatusOr<SimulatorSpec> {
    SYNTHPRIV_RETURN_IF_ERROR(RequireObject(json, "simulator"));
    SimulatorSpec spec;
    auto columns = json.find("columns");
    if (columns == json.end()) return Bad("simulator.columns", "missing");
    SYNTHPRIV_RETURN_IF_ERROR(RequireArray(*columns, "simulator.columns"));
    for (std::size_t i = 0; i < columns->size(); ++i) {
      const std::string where = At("simulator.columns", i);
      SimColumn column;
      SYNTHPRIV_ASSIGN_OR_RETURN(column.spec,
                                 ColumnFromJson((*columns)[i], where));
      auto rule = (*columns)[i].find("rule");
      if (rule == (*columns)[i].end()) return Bad(At(where, "rule"), "missing");
      SYNTHPRIV_ASSIGN_OR_RETURN(column.rule,
                                 RuleFromJson(*rule, At(where, "rule")));
      spec.columns.push_back(std::move(column));
    }
    if (auto params = json.find("free_params"); params != json.end()) {
      SYNTHPRIV_RETURN_IF_ERROR(RequireArray(*params, "simulator.free_params"));
      for (std::size_t i = 0; i < params->size(); ++i) {
        const std::string where = At("simulator.free_params", i);
        const Json& p = (*params)[i];
        SYNTHPRIV_RETURN_IF_ERROR(RequireObject(p, where));
        FreeParameter param;
        SYNTHPRIV_ASSIGN_OR_RETURN(param.name, RequiredString(p, "name", where));
        SYNTHPRIV_ASSIGN_OR_RETURN(param.lower,
                                   RequiredDouble(p, "lower", where));
        SYNTHPRIV_ASSIGN_OR_RETURN(param.upper,
                                   RequiredDouble(p, "upper", where));
        spec.free_params.push_back(std::move(param));
      }
    }
    SYNTHPRIV_ASSIGN_OR_RETURN(
        spec.calibrated, OptionalBool(json, "calibrated", false, "simulator"));
    SYNTHPRIV_RETURN_IF_ERROR(ValidateSimulatorSpec(spec));
    return spec;
  });
}

Json CalibrationTargetToJson(const CalibrationTarget& target) {
  Json moments = Json::array();
  for (const TargetMoment& m : target.moments) {
    Json entry = {{"column", m.column},
                  {"statistic", std::string(MomentName(m.statistic))},
                  {"value", m.value},
                  {"weight", m.weight}};
    if (m.statistic == MomentKind::kQuantile) entry["q"] = m.q;
    if (m.statistic == MomentKind::kFrequency) entry["category"] = m.category;
    moments.push_back(std::move(entry));
  }
  return {{"moments", std::move(moments)}};
}

absl::StatusOr<CalibrationTarget> CalibrationTargetFromJson(
    const Json& json, bool require_values) {
  return Guarded("target", [&]() -> absl::StatusOr<CalibrationTarget> {
    const Json* moments = &json;
    if (json.is_object()) {
      auto it = json.find("moments");
      if (it == json.end()) return Bad("target.moments", "missing");
      moments = &*it;
    }
    SYNTHPRIV_RETURN_IF_ERROR(RequireArray(*moments, "target.moments"));
    CalibrationTarget target;
    for (std::size_t i = 0; i < moments->size(); ++i) {
      const std::string where = At("target.moments", i);
      const Json& m = (*moments)[i];
      SYNTHPRIV_RETURN_IF_ERROR(RequireObject(m, where));
      TargetMoment moment;
      SYNTHPRIV_ASSIGN_OR_RETURN(moment.column,
                                 RequiredString(m, "column", where));
      SYNTHPRIV_ASSIGN_OR_RETURN(std::string stat,
                                 RequiredString(m, "statistic", where));
      if (stat == "mean") {
        moment.statistic = MomentKind::kMean;
      } else if (stat == "std") {
        moment.statistic = MomentKind::kStd;
      } else if (stat == "quantile") {
        moment.statistic = MomentKind::kQuantile;
        SYNTHPRIV_ASSIGN_OR_RETURN(moment.q, RequiredDouble(m, "q", where));
      } else if (stat == "frequency") {
        moment.statistic = MomentKind::kFrequency;
        SYNTHPRIV_ASSIGN_OR_RETURN(moment.category,
                                   RequiredString(m, "category", where));
      } else {
        return Bad(At(where, "statistic"),
                   absl::StrCat("unknown statistic '", stat,
                                "' (mean, std, quantile, frequency)"));
      }
      if (require_values || m.contains("value")) {
        SYNTHPRIV_ASSIGN_OR_RETURN(moment.value,
                                   RequiredDouble(m, "value", where));
      }
      SYNTHPRIV_ASSIGN_OR_RETURN(moment.weight,
                                 OptionalDouble(m, "weight", 1.0, where));
      target.moments.push_back(std::move(moment));
    }
    return target;
  });
}

Json ThresholdsToJson(const CertificationThresholds& thresholds) {
  Json out = Json::object();
  if (thresholds.max_mia_auc) out["max_mia_auc"] = *thresholds.max_mia_auc;
  if (thresholds.max_aia_uplift) {
    out["max_aia_uplift"] = *thresholds.max_aia_uplift;
  }
  if (thresholds.max_pia_recovery) {
    out["max_pia_recovery"] = *thresholds.max_pia_recovery;
  }
  if (!thresholds.pia_overrides.empty()) {
    out["pia_overrides"] = thresholds.pia_overrides;
  }
  Json required = Json::array();
  for (AttackKind kind : thresholds.required) {
    required.push_back(std::string(AttackName(kind)));
  }
  out["required"] = std::move(required);
  return out;
}

absl::StatusOr<CertificationThresholds> ThresholdsFromJson(const Json& json) {
  return Guarded("thresholds", [&]() -> absl::StatusOr<CertificationThresholds> {
    SYNTHPRIV_RETURN_IF_ERROR(RequireObject(json, "thresholds"));
    CertificationThresholds t;
    for (const char* key : {"max_mia_auc", "max_aia_uplift", "max_pia_recovery"}) {
      auto it = json.find(key);
      if (it == json.end()) continue;
      SYNTHPRIV_ASSIGN_OR_RETURN(double v, AsDouble(*it, At("thresholds", key)));
      if (std::string_view(key) == "max_mia_auc") t.max_mia_auc = v;
      if (std::string_view(key) == "max_aia_uplift") t.max_aia_uplift = v;
      if (std::string_view(key) == "max_pia_recovery") t.max_pia_recovery = v;
    }
    if (auto it = json.find("pia_overrides"); it != json.end()) {
      SYNTHPRIV_RETURN_IF_ERROR(
          RequireObject(*it, "thresholds.pia_overrides"));
      for (const auto& [label, value] : it->items()) {
        SYNTHPRIV_ASSIGN_OR_RETURN(
            double v, AsDouble(value, At("thresholds.pia_overrides", label)));
        t.pia_overrides[label] = v;
      }
    }
    if (auto it = json.find("required"); it != json.end()) {
      SYNTHPRIV_ASSIGN_OR_RETURN(std::vector<std::string> names,
                                 StringArray(*it, "thresholds.required"));
      for (const std::string& name : names) {
        auto kind = ParseAttackName(name);
        if (!kind.ok()) {
          return Bad("thresholds.required", std::string(kind.status().message()));
        }
        t.required.insert(*kind);
      }
    }
    SYNTHPRIV_RETURN_IF_ERROR(ValidateThresholds(t));
    return t;
  });
}

absl::StatusOr<std::vector<Scenario>> ScenariosFromJson(const Json& json,
                                                        const Schema& schema) {
  return Guarded("scenarios", [&]() -> absl::StatusOr<std::vector<Scenario>> {
    SYNTHPRIV_RETURN_IF_ERROR(RequireArray(json, "scenarios"));
    std::vector<Scenario> out;
    for (std::size_t i = 0; i < json.size(); ++i) {
      const std::string where = At("scenarios", i);
      const Json& s = json[i];
      SYNTHPRIV_RETURN_IF_ERROR(RequireObject(s, where));
      Scenario scenario;
      SYNTHPRIV_ASSIGN_OR_RETURN(scenario.name, RequiredString(s, "name", where));
      SYNTHPRIV_ASSIGN_OR_RETURN(std::int64_t count,
                                 OptionalInt(s, "count", 1, where));
      if (count < 1) return Bad(At(where, "count"), "must be >= 1");
      scenario.count = static_cast<std::size_t>(count);
      SYNTHPRIV_ASSIGN_OR_RETURN(scenario.label,
                                 OptionalString(s, "label", "", where));
      auto tmpl = s.find("template");
      if (tmpl == s.end()) return Bad(At(where, "template"), "missing");
      SYNTHPRIV_RETURN_IF_ERROR(RequireObject(*tmpl, At(where, "template")));
      for (const auto& [name, value] : tmpl->items()) {
        const std::string tw = At(At(where, "template"), name);
        auto idx = FindColumn(schema, name);
        if (!idx.has_value()) return Bad(tw, "unknown column");
        SYNTHPRIV_ASSIGN_OR_RETURN(TemplateValue v,
                                   TemplateFromJson(schema[*idx], value, tw));
        scenario.row_template[name] = std::move(v);
      }
      out.push_back(std::move(scenario));
    }
    return out;
  });
}

Json GroundTruthToJson(const std::vector<PlantedRow>& planted) {
  Json rows = Json::array();
  std::map<std::string, std::size_t> counts;
  for (const PlantedRow& p : planted) {
    rows.push_back(
        {{"row_id", p.row_id}, {"scenario", p.scenario}, {"label", p.label}});
    ++counts[p.scenario];
  }
  return {{"planted", std::move(rows)}, {"counts", counts}};
}

absl::StatusOr<std::map<std::string, std::vector<Cell>>> ExtrasFromJson(
    const Json& json, const Schema& schema) {
  SYNTHPRIV_RETURN_IF_ERROR(RequireObject(json, "extras"));
  std::map<std::string, std::vector<Cell>> out;
  for (const auto& [name, values] : json.items()) {
    const std::string where = At("extras", name);
    SYNTHPRIV_RETURN_IF_ERROR(RequireArray(values, where));
    auto idx = FindColumn(schema, name);
    std::vector<Cell>& cells = out[name];
    if (!idx.has_value()) {
      // Kept so the sweep can list it as skipped.
      for (std::size_t i = 0; i < values.size(); ++i) cells.emplace_back(0.0);
      continue;
    }
    for (std::size_t i = 0; i < values.size(); ++i) {
      auto cell = CellFromJson(schema[*idx], values[i]);
      if (!cell.ok()) {
        // Wrong JSON type for the column: represent it so that it fails
        // validation and is reported as skipped.
        cells.emplace_back(schema[*idx].is_numeric()
                               ? Cell(std::string(values[i].dump()))
                               : Cell(std::nan("")));
        continue;
      }
      cells.push_back(std::move(*cell));
    }
  }
  return out;
}

Json AttackReportToJson(const AttackReport& report) {
  Json out = {{"attack", std::string(AttackName(report.attack))},
              {"algorithm", report.algorithm},
              {"score", report.score},
              {"baseline", report.baseline},
              {"uplift", report.uplift()},
              {"seed", report.seed},
              {"config", report.config}};
  if (report.attack == AttackKind::kProperty) {
    Json stats = Json::array();
    for (const StatisticRecovery& s : report.statistics) {
      stats.push_back({{"label", s.label},
                       {"real", s.real},
                       {"estimate", s.estimate},
                       {"error", s.error}});
    }
    out["statistics"] = std::move(stats);
  }
  return out;
}

Json CertificationToJson(const Certification& certification) {
  Json verdicts = Json::array();
  for (const AttackVerdict& v : certification.verdicts) {
    verdicts.push_back({{"attack", std::string(AttackName(v.attack))},
                        {"subject", v.subject},
                        {"value", v.value},
                        {"threshold", v.threshold},
                        {"margin", v.margin},
                        {"pass", v.pass}});
  }
  return {{"pass", certification.pass},
          {"verdicts", std::move(verdicts)},
          {"failing", certification.failing},
          {"warnings", certification.warnings}};
}

}  // namespace synthpriv
