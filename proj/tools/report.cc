// Copyright 2026 The fgaudit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "report.h"

#include <set>
#include <string>
#include <utility>

#include "fgaudit/errors.h"

namespace fgaudit::cli {
namespace {

Json attribute_names(const std::vector<std::size_t>& attrs, const Schema& schema) {
  Json out = Json::array();
  for (std::size_t a : attrs) out.push_back(schema.qi_attributes().at(a));
  return out;
}

Json signature_to_json(const Signature& sig, const Schema& schema) {
  Json out = Json::object();
  for (std::size_t i = 0; i < sig.attributes().size(); ++i) {
    out[schema.qi_attributes().at(sig.attributes()[i])] = sig.values()[i];
  }
  return out;
}

std::vector<std::size_t> attribute_positions(const Json& names,
                                             const Schema& schema) {
  std::vector<std::size_t> out;
  for (const auto& n : names) {
    const auto name = n.get<std::string>();
    auto pos = schema.qi_index(name);
    if (!pos) throw ParseError("knowledge names unknown QI attribute '" + name + "'");
    out.push_back(*pos);
  }
  return out;
}

}  // namespace

Json target_to_json(const Target& target) {
  Json out = Json::array();
  for (const auto& v : target.values()) out.push_back(v);
  return out;
}

Target target_from_json(const Json& j) {
  auto values = j.get<std::set<std::string>>();
  if (values.empty()) throw ParseError("empty target in knowledge");
  return Target(std::move(values));
}

Json distributions_to_json(const MinedKnowledge& knowledge, const Schema& schema) {
  Json out = Json::array();
  for (const MinedSystem& s : knowledge.systems) {
    Json d;
    d["attributes"] = attribute_names(s.attribute_set, schema);
    d["target"] = target_to_json(s.target);
    d["m"] = s.m;
    d["converged"] = s.diagnostics.converged;
    d["iterations"] = s.diagnostics.iterations;
    d["residual"] = s.diagnostics.residual;
    d["method"] = solver_method_name(s.diagnostics.method_used);
    d["fell_back"] = s.diagnostics.fell_back;
    if (!s.error.empty()) d["error"] = s.error;
    Json sigs = Json::array();
    for (std::size_t k = 0; k < s.signatures.size(); ++k) {
      Json e;
      e["signature"] = signature_to_json(s.signatures[k].signature, schema);
      e["support"] = s.signatures[k].support;
      if (k < s.f.size()) e["f"] = s.f[k];
      sigs.push_back(std::move(e));
    }
    d["signatures"] = std::move(sigs);
    out.push_back(std::move(d));
  }
  return out;
}

Json base_rates_to_json(const MinedKnowledge& knowledge) {
  Json out = Json::array();
  for (const auto& [target, rate] : knowledge.base_rates) {
    out.push_back(Json{{"target", target_to_json(target)}, {"rate", rate}});
  }
  return out;
}

MinedKnowledge knowledge_from_json(const Json& report, const Schema& schema) {
  MinedKnowledge k;
  try {
    for (const auto& b : report.at("base_rates")) {
      k.base_rates.emplace_back(target_from_json(b.at("target")),
                                b.at("rate").get<double>());
    }
    for (const auto& d : report.at("distributions")) {
      MinedSystem s;
      s.attribute_set = attribute_positions(d.at("attributes"), schema);
      s.target = target_from_json(d.at("target"));
      s.m = d.at("m").get<std::size_t>();
      s.diagnostics.converged = d.at("converged").get<bool>();
      s.diagnostics.iterations = d.at("iterations").get<int>();
      s.diagnostics.residual =
          d.at("residual").is_null() ? 0.0 : d.at("residual").get<double>();
      s.diagnostics.method_used =
          parse_solver_method(d.at("method").get<std::string>());
      s.diagnostics.fell_back = d.at("fell_back").get<bool>();
      s.error = d.value("error", std::string());
      std::vector<GlobalDistribution::Entry> entries;
      for (const auto& e : d.at("signatures")) {
        std::vector<std::pair<std::string, std::string>> pairs;
        for (const auto& [name, value] : e.at("signature").items()) {
          pairs.emplace_back(name, value.get<std::string>());
        }
        Signature sig = Signature::from_pairs(schema, std::move(pairs));
        const auto support = e.at("support").get<std::size_t>();
        s.signatures.push_back({sig, support});
        if (e.contains("f")) {
          s.f.push_back(e.at("f").get<double>());
          entries.push_back({std::move(sig), s.f.back(), support});
        }
      }
      if (s.diagnostics.converged && s.error.empty() &&
          entries.size() == s.signatures.size()) {
        s.distribution.emplace(s.attribute_set, s.target, std::move(entries));
      }
      k.systems.push_back(std::move(s));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed knowledge: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("malformed knowledge: ") + e.what());
  }
  return k;
}

Json tuples_to_json(const BreachReport& report, const AnonymizedDataset& dataset) {
  const Schema& schema = dataset.schema();
  Json out = Json::array();
  for (const TupleVerdict& v : report.tuples) {
    Json t;
    t["row"] = v.row;
    t["group"] = dataset.groups().at(v.group).label;
    Json qi = Json::object();
    auto values = dataset.qi_row(v.row);
    for (std::size_t i = 0; i < values.size(); ++i) {
      qi[schema.qi_attributes()[i]] = values[i];
    }
    t["qi"] = std::move(qi);
    if (v.max_linkage) {
      t["max_linkage"] = *v.max_linkage;
      t["attributes"] = attribute_names(v.attribute_set, schema);
      t["target"] = v.target.empty() ? Json::array() : target_to_json(v.target);
    } else {
      t["max_linkage"] = nullptr;
    }
    t["flagged"] = v.flagged;
    out.push_back(std::move(t));
  }
  return out;
}

Json metrics_to_json(const BreachMetrics& m) {
  Json out;
  auto opt = [](const std::optional<double>& v) -> Json {
    return v ? Json(*v) : Json(nullptr);
  };
  out["recall"] = opt(m.recall);
  out["false_flag_rate"] = opt(m.false_flag_rate);
  out["avg_breach_prob"] = opt(m.avg_breach_prob);
  out["avg_delta"] = m.avg_delta;
  out["flagged_tuples"] = m.flagged_tuples;
  if (m.recall) out["sensitive_tuples"] = m.sensitive_tuples;
  return out;
}

}  // namespace fgaudit::cli
