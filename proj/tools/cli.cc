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

#include "cli.h"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "fgaudit/anonymizer.h"
#include "fgaudit/breach_auditor.h"
#include "fgaudit/errors.h"
#include "fgaudit/foreground_miner.h"
#include "fgaudit/io.h"
#include "fgaudit/signature_lattice.h"
#include "report.h"

namespace fgaudit::cli {
namespace {

namespace fs = std::filesystem;

constexpr char kQiFileName[] = "qi.csv";
constexpr char kSensitiveFileName[] = "sensitive.csv";

SchemaConfig schema_config(const RunConfig& rc) {
  SchemaConfig c;
  if (!rc.config_path.empty()) c = load_schema_config(rc.config_path);
  if (!rc.qi.empty()) c.qi_attributes = rc.qi;
  if (!rc.sensitive_attr.empty()) c.sensitive_attribute = rc.sensitive_attr;
  if (!rc.sensitive_values.empty()) c.sensitive_values = rc.sensitive_values;
  if (!rc.missing_marker.empty()) c.missing_marker = rc.missing_marker;
  if (c.qi_attributes.empty()) {
    throw SchemaError("no QI attributes given (use --qi or --config)");
  }
  if (c.sensitive_attribute.empty()) {
    throw SchemaError("no sensitive attribute given (use --sensitive-attr or --config)");
  }
  if (c.sensitive_values.empty()) {
    throw SchemaError("no sensitive value set given (use --sensitive-values or --config)");
  }
  return c;
}

Json schema_json(const RunConfig& rc) {
  Json j;
  j["config"] = rc.config_path;
  j["qi"] = rc.qi;
  j["sensitive_attr"] = rc.sensitive_attr;
  j["sensitive_values"] = rc.sensitive_values;
  j["missing_marker"] = rc.missing_marker;
  return j;
}

Json mine_options_json(const RunConfig& rc) {
  Json j;
  j["epsilon"] = rc.epsilon;
  j["sigma"] = rc.sigma;
  j["min_support"] = rc.min_support;
  j["max_set_size"] = rc.max_set_size;
  j["method"] = rc.method;
  j["tol"] = rc.tol;
  j["max_iter"] = rc.max_iter;
  return j;
}

Json config_json(const RunConfig& rc) {
  Json j;
  j["command"] = rc.command;
  j["schema"] = schema_json(rc);
  if (rc.command == "anonymize") {
    j["table"] = rc.table;
    j["l"] = rc.l;
    j["strategy"] = rc.strategy;
  } else {
    j["qi_file"] = rc.qi_file;
    j["sensitive_file"] = rc.sensitive_file;
  }
  if (rc.command == "mine") j["mine"] = mine_options_json(rc);
  if (rc.command == "audit") {
    j["original"] = rc.original;
    j["knowledge"] = rc.knowledge;
    if (rc.knowledge.empty()) j["mine"] = mine_options_json(rc);
    j["r"] = rc.r;
    j["allow_base_rate_only"] = rc.allow_base_rate_only;
  }
  if (rc.command == "query-error") {
    j["original"] = rc.original;
    j["qd"] = rc.qd;
    j["selectivity"] = rc.selectivity;
    j["queries"] = rc.queries;
  }
  j["out"] = rc.out;
  j["world_cap"] = rc.world_cap;
  j["seed"] = rc.seed;
  j["workers"] = rc.workers;
  return j;
}

std::string attributes_label(const std::vector<std::size_t>& attrs,
                             const Schema& schema) {
  std::string s = "{";
  for (std::size_t i = 0; i < attrs.size(); ++i) {
    if (i) s += ", ";
    s += schema.qi_attributes().at(attrs[i]);
  }
  return s + "}";
}

// Writes the report to --out, or to `out` when no file was named. Returns
// the stream that should receive the human summary.
std::ostream& emit_report(const RunConfig& rc, const Json& report,
                          std::ostream& out, std::ostream& err) {
  const std::string text = report.dump(2) + "\n";
  if (rc.out.empty()) {
    out << text;
    return err;
  }
  std::ofstream f(rc.out, std::ios::binary);
  if (!f) throw ParseError("cannot write '" + rc.out + "'");
  f << text;
  if (!f) throw ParseError("failed writing '" + rc.out + "'");
  return out;
}

void require(const std::string& value, const char* flag) {
  if (value.empty()) {
    throw std::invalid_argument(std::string("missing required option ") + flag);
  }
}

AnonymizedDataset load_pair(const RunConfig& rc, const SchemaConfig& sc) {
  require(rc.qi_file, "--qi-file");
  require(rc.sensitive_file, "--sensitive-file");
  return load_anonymized(rc.qi_file, rc.sensitive_file, sc);
}

SolverConfig solver_config(const RunConfig& rc) {
  SolverConfig c;
  c.method = parse_solver_method(rc.method);
  c.tol = rc.tol;
  c.max_iter = rc.max_iter;
  return c;
}

struct MineResult {
  MinedKnowledge knowledge;
  Json diagnostics;
  std::vector<std::string> warnings;
};

MineResult mine(const RunConfig& rc, const AnonymizedDataset& ds) {
  const SampleGate gate = rc.min_support > 0
                              ? SampleGate::with_min_support(rc.min_support)
                              : SampleGate::from_error_bounds(rc.epsilon, rc.sigma);
  const AdmittedSignatures admitted = enumerate_admitted(ds, gate, rc.max_set_size);
  const Target target = ds.schema().target();
  MineResult res;
  res.knowledge = mine_all(ds, admitted, std::span<const Target>(&target, 1),
                           solver_config(rc), {rc.world_cap, rc.workers});

  std::size_t converged = 0;
  for (const MinedSystem& s : res.knowledge.systems) {
    const std::string name =
        attributes_label(s.attribute_set, ds.schema()) + " / " + s.target.label();
    if (!s.error.empty()) {
      res.warnings.push_back("system " + name + " failed: " + s.error);
    } else if (!s.diagnostics.converged) {
      std::ostringstream w;
      w << "system " << name << " did not converge (residual "
        << s.diagnostics.residual << " after " << s.diagnostics.iterations
        << " iterations)";
      res.warnings.push_back(w.str());
    } else {
      ++converged;
    }
  }
  Json d;
  d["min_support"] = admitted.min_support;
  d["attribute_sets"] = admitted.sets.size();
  d["admitted_sets"] = admitted.admitted_set_count();
  d["systems"] = res.knowledge.systems.size();
  d["converged_systems"] = converged;
  res.diagnostics = std::move(d);
  return res;
}

void print_distribution_summary(const MinedKnowledge& k, const Schema& schema,
                                std::ostream& os) {
  os << k.systems.size() << " distribution(s)\n";
  for (const MinedSystem& s : k.systems) {
    os << "  " << attributes_label(s.attribute_set, schema) << " target="
       << s.target.label() << " m=" << s.m
       << " iterations=" << s.diagnostics.iterations << " residual="
       << std::scientific << std::setprecision(3) << s.diagnostics.residual
       << std::defaultfloat << " converged="
       << (s.diagnostics.converged ? "yes" : "no");
    if (!s.f.empty()) {
      os << " f=(" << std::fixed << std::setprecision(6);
      for (std::size_t i = 0; i < s.f.size(); ++i) os << (i ? ", " : "") << s.f[i];
      os << ")" << std::defaultfloat;
    }
    if (!s.error.empty()) os << " error=\"" << s.error << "\"";
    os << "\n";
  }
  os << std::setprecision(6);
}

int cmd_anonymize(const RunConfig& rc, std::ostream& out, std::ostream& err) {
  const SchemaConfig sc = schema_config(rc);
  require(rc.table, "--table");
  const Table table = load_table(rc.table, sc);
  AnonymizerConfig ac;
  ac.l = rc.l;
  ac.strategy = parse_strategy(rc.strategy);
  ac.seed = rc.seed;
  const AnonymizedDataset ds = anonymize(table, ac);

  fs::path qi_path = rc.qi_file, sens_path = rc.sensitive_file;
  if (qi_path.empty() != sens_path.empty()) {
    throw std::invalid_argument("--qi-file and --sensitive-file go together");
  }
  if (qi_path.empty()) {
    require(rc.out, "--out (or --qi-file and --sensitive-file)");
    fs::create_directories(rc.out);
    qi_path = fs::path(rc.out) / kQiFileName;
    sens_path = fs::path(rc.out) / kSensitiveFileName;
  }
  save_anonymized(ds, qi_path, sens_path);
  out << "anonymized " << ds.row_count() << " rows into " << ds.groups().size()
      << " groups (l=" << rc.l << ", strategy " << strategy_name(ac.strategy)
      << ")\n";
  err << "wrote " << qi_path.string() << " and " << sens_path.string() << "\n";
  return 0;
}

int cmd_mine(const RunConfig& rc, std::ostream& out, std::ostream& err) {
  const SchemaConfig sc = schema_config(rc);
  const AnonymizedDataset ds = load_pair(rc, sc);
  MineResult res = mine(rc, ds);

  Json report;
  report["config"] = config_json(rc);
  report["distributions"] = distributions_to_json(res.knowledge, ds.schema());
  report["base_rates"] = base_rates_to_json(res.knowledge);
  res.diagnostics["warnings"] = res.warnings;
  report["diagnostics"] = res.diagnostics;

  std::ostream& summary = emit_report(rc, report, out, err);
  for (const auto& w : res.warnings) err << "warning: " << w << "\n";
  print_distribution_summary(res.knowledge, ds.schema(), summary);
  return 0;
}

int cmd_audit(const RunConfig& rc, std::ostream& out, std::ostream& err) {
  const SchemaConfig sc = schema_config(rc);
  const AnonymizedDataset ds = load_pair(rc, sc);

  MinedKnowledge knowledge;
  Json diagnostics = Json::object();
  std::vector<std::string> warnings;
  if (!rc.knowledge.empty()) {
    std::ifstream in(rc.knowledge, std::ios::binary);
    if (!in) throw ParseError("cannot open '" + rc.knowledge + "'");
    Json j;
    try {
      j = Json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      throw ParseError("invalid knowledge file: " + std::string(e.what()));
    }
    knowledge = knowledge_from_json(j, ds.schema());
  } else {
    MineResult res = mine(rc, ds);
    knowledge = std::move(res.knowledge);
    diagnostics["mining"] = std::move(res.diagnostics);
    warnings = std::move(res.warnings);
  }

  AuditConfig ac;
  ac.r = rc.r;
  ac.targets = {ds.schema().target()};
  ac.allow_base_rate_only = rc.allow_base_rate_only;
  ac.world_cap = rc.world_cap;
  ac.workers = rc.workers;
  BreachReport br;
  if (rc.original.empty()) {
    br = audit(ds, knowledge, ac);
    warnings.push_back(
        "no original table supplied; recall, false-flag rate and average "
        "breach probability are omitted");
  } else {
    br = audit(ds, knowledge, ac, load_table(rc.original, sc));
  }
  for (const auto& w : br.warnings) warnings.push_back(w);

  Json failures = Json::array();
  for (const auto& f : br.failures) {
    failures.push_back(Json{{"group", f.group_label}, {"message", f.message}});
    warnings.push_back("group " + f.group_label + " not audited: " + f.message);
  }
  diagnostics["failures"] = std::move(failures);
  diagnostics["warnings"] = warnings;

  Json report;
  report["config"] = config_json(rc);
  report["distributions"] = distributions_to_json(knowledge, ds.schema());
  report["base_rates"] = base_rates_to_json(knowledge);
  report["tuples"] = tuples_to_json(br, ds);
  Json metrics = metrics_to_json(br.metrics);
  metrics["r"] = br.r;
  metrics["threshold"] = br.threshold;
  report["metrics"] = std::move(metrics);
  report["diagnostics"] = std::move(diagnostics);

  std::ostream& summary = emit_report(rc, report, out, err);
  for (const auto& w : warnings) err << "warning: " << w << "\n";
  const BreachMetrics& m = br.metrics;
  summary << "flagged " << m.flagged_tuples << " of " << br.tuples.size()
          << " tuples (r=" << br.r << ", threshold " << br.threshold << ")\n";
  auto line = [&](const char* name, const std::optional<double>& v) {
    summary << name << ": ";
    if (v) {
      summary << *v << "\n";
    } else {
      summary << "omitted (no original table)\n";
    }
  };
  line("recall", m.recall);
  line("false-flag rate", m.false_flag_rate);
  line("avg breach probability", m.avg_breach_prob);
  summary << "avg delta: " << m.avg_delta << "\n";
  return 0;
}

int cmd_query_error(const RunConfig& rc, std::ostream& out, std::ostream& err) {
  const SchemaConfig sc = schema_config(rc);
  const AnonymizedDataset ds = load_pair(rc, sc);
  require(rc.original, "--original");
  const Table original = load_table(rc.original, sc);
  QuerySpec spec;
  spec.qd = rc.qd == 0 ? ds.schema().qi_attributes().size() : rc.qd;
  spec.selectivity = rc.selectivity;
  spec.count = rc.queries;
  spec.seed = rc.seed;
  const double error = query_error(original, ds, spec);

  if (!rc.out.empty()) {
    Json report;
    report["config"] = config_json(rc);
    report["metrics"] = Json{{"qd", spec.qd},
                             {"selectivity", spec.selectivity},
                             {"queries", spec.count},
                             {"query_error", error}};
    emit_report(rc, report, out, err);
  }
  out << "query error: " << error << " (qd=" << spec.qd
      << ", selectivity=" << spec.selectivity << ", queries=" << spec.count
      << ")\n";
  return 0;
}

void add_schema_options(CLI::App* app, RunConfig& rc) {
  app->add_option("--config", rc.config_path,
                  "JSON file naming QI/sensitive attributes, target values, "
                  "missing marker and bin widths");
  app->add_option("--qi", rc.qi, "QI attributes, comma separated")->delimiter(',');
  app->add_option("--sensitive-attr", rc.sensitive_attr, "Sensitive attribute");
  app->add_option("--sensitive-values", rc.sensitive_values,
                  "Target sensitive values x, comma separated")
      ->delimiter(',');
  app->add_option("--missing-marker", rc.missing_marker,
                  "Drop raw rows containing this value");
}

void add_pair_options(CLI::App* app, RunConfig& rc) {
  app->add_option("--qi-file", rc.qi_file, "Anonymized QI table");
  app->add_option("--sensitive-file", rc.sensitive_file, "Anonymized sensitive table");
}

void add_mine_options(CLI::App* app, RunConfig& rc) {
  app->add_option("--epsilon", rc.epsilon, "Error bound of the sample-size gate")
      ->capture_default_str();
  app->add_option("--sigma", rc.sigma, "Failure probability of the sample-size gate")
      ->capture_default_str();
  app->add_option("--min-support", rc.min_support,
                  "Fixed minimum signature support, overriding epsilon/sigma");
  app->add_option("--max-set-size", rc.max_set_size, "Largest QI attribute set")
      ->capture_default_str();
  app->add_option("--method", rc.method, "Solver: newton or fixed_point")
      ->capture_default_str();
  app->add_option("--tol", rc.tol, "Residual tolerance")->capture_default_str();
  app->add_option("--max-iter", rc.max_iter, "Solver iteration budget")
      ->capture_default_str();
}

void add_common_options(CLI::App* app, RunConfig& rc) {
  app->add_option("--world-cap", rc.world_cap, "Most possible worlds per group")
      ->capture_default_str();
  app->add_option("--seed", rc.seed, "Random seed")->capture_default_str();
  app->add_option("--workers", rc.workers, "Worker threads")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  app->add_option("--out", rc.out, "Output path");
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig rc;
  CLI::App app{"Audit group-anonymized data for privacy breaches", "fgaudit"};
  app.require_subcommand(1);

  auto* anon = app.add_subcommand("anonymize", "Bucketize a raw table into l-diverse groups");
  add_schema_options(anon, rc);
  anon->add_option("--table", rc.table, "Raw table");
  anon->add_option("--l", rc.l, "Diversity parameter")->capture_default_str();
  anon->add_option("--strategy", rc.strategy, "anatomy or random_partition")
      ->capture_default_str();
  add_pair_options(anon, rc);
  add_common_options(anon, rc);

  auto* mine_cmd = app.add_subcommand("mine", "Mine global distributions");
  add_schema_options(mine_cmd, rc);
  add_pair_options(mine_cmd, rc);
  add_mine_options(mine_cmd, rc);
  add_common_options(mine_cmd, rc);

  auto* audit_cmd = app.add_subcommand("audit", "Flag tuples whose linkage exceeds 1/r");
  add_schema_options(audit_cmd, rc);
  add_pair_options(audit_cmd, rc);
  add_mine_options(audit_cmd, rc);
  audit_cmd->add_option("--knowledge", rc.knowledge, "Report written by mine");
  audit_cmd->add_option("--original", rc.original,
                        "Raw table with true sensitive values, for recall");
  audit_cmd->add_option("--r", rc.r, "Robustness parameter")->capture_default_str();
  audit_cmd->add_flag("--allow-base-rate-only", rc.allow_base_rate_only,
                      "Audit with base rates when no distribution was mined");
  add_common_options(audit_cmd, rc);

  auto* query_cmd =
      app.add_subcommand("query-error", "Relative error of random COUNT queries");
  add_schema_options(query_cmd, rc);
  add_pair_options(query_cmd, rc);
  query_cmd->add_option("--original", rc.original, "Raw table");
  query_cmd->add_option("--qd", rc.qd, "QI attributes per query (0: all)")
      ->capture_default_str();
  query_cmd->add_option("--selectivity", rc.selectivity, "Expected match fraction")
      ->capture_default_str();
  query_cmd->add_option("--queries", rc.queries, "Number of queries")
      ->capture_default_str();
  add_common_options(query_cmd, rc);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (anon->parsed()) {
      rc.command = "anonymize";
      return cmd_anonymize(rc, out, err);
    }
    if (mine_cmd->parsed()) {
      rc.command = "mine";
      return cmd_mine(rc, out, err);
    }
    if (audit_cmd->parsed()) {
      rc.command = "audit";
      return cmd_audit(rc, out, err);
    }
    rc.command = "query-error";
    return cmd_query_error(rc, out, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("fgaudit");
  for (const auto& a : args) argv.push_back(a.c_str());
  return run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace fgaudit::cli
