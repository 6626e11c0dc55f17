// finecc: access-vector analysis and lock-schedule simulation for schema files.
//
// Exit status: 0 on success, 1 on invalid input, 2 on usage or internal error.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "finecc/finecc.hpp"
#include "finecc/render.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

finecc::ClassModel load_schema(const std::string& path) {
  try {
    return finecc::parse_schema(read_file(path));
  } catch (const finecc::Error& e) {
    throw finecc::Error(e.kind(), path + ":" + e.what());
  }
}

void require_class(const finecc::ClassModel& model, const std::string& c) {
  if (!model.has_class(c)) throw finecc::Error(finecc::ErrorKind::UnknownClass, "'" + c + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Access-vector concurrency analysis for object schemas"};
  app.require_subcommand(1);

  std::string schema_path, scenario_path, cls;
  bool json = false, dot = false, trace = false, events = false;
  std::size_t max_txns = finecc::kDefaultMaxTransactions;

  auto* check = app.add_subcommand("check", "Parse and validate a schema");
  check->add_option("schema", schema_path, "Schema file")->required();

  auto* analyze = app.add_subcommand("analyze", "Print DAV, DSC, PSC and TAV per method");
  analyze->add_option("schema", schema_path, "Schema file")->required();
  analyze->add_option("--class", cls, "Restrict to one class");
  analyze->add_flag("--json", json, "JSON output");

  auto* graph = app.add_subcommand("graph", "Late binding resolution graph of a class");
  graph->add_option("schema", schema_path, "Schema file")->required();
  graph->add_option("--class", cls, "Class")->required();
  graph->add_flag("--dot", dot, "Graphviz output");
  graph->add_flag("--json", json, "JSON output");

  auto* table = app.add_subcommand("table", "Commutativity table of a class");
  table->add_option("schema", schema_path, "Schema file")->required();
  table->add_option("--class", cls, "Class")->required();
  table->add_flag("--json", json, "JSON output");

  auto* simulate = app.add_subcommand("simulate", "Concurrency report for a scenario");
  simulate->add_option("schema", schema_path, "Schema file")->required();
  simulate->add_option("scenario", scenario_path, "Scenario file")->required();
  simulate->add_flag("--json", json, "JSON output");
  simulate->add_flag("--trace", trace, "Include the replay trace");
  simulate->add_flag("--events", events, "Print the lock event log as JSON lines");
  simulate->add_option("--max-txns", max_txns, "Transaction cap")->check(CLI::PositiveNumber);

  finecc::GenParams params;
  std::uint64_t seed = 0;
  auto* gen = app.add_subcommand("gen", "Generate a random valid schema");
  gen->add_option("--seed", seed, "Seed")->required();
  gen->add_option("--classes", params.classes)->check(CLI::PositiveNumber);
  gen->add_option("--fields", params.fields_per_class);
  gen->add_option("--pool", params.method_pool)->check(CLI::PositiveNumber);
  gen->add_option("--methods", params.methods_per_class);
  gen->add_option("--statements", params.statements_per_method);
  gen->add_option("--multi", params.multiple_inheritance)->check(CLI::Range(0.0, 1.0));
  gen->add_option("--self-calls", params.self_call_density)->check(CLI::Range(0.0, 1.0));
  gen->add_option("--prefixed", params.prefixed_call_density)->check(CLI::Range(0.0, 1.0));
  gen->add_option("--recursion", params.recursion)->check(CLI::Range(0.0, 1.0));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (*check) {
      auto model = load_schema(schema_path);
      std::cout << "ok: " << model.classes().size() << " classes\n";
    } else if (*analyze) {
      auto model = load_schema(schema_path);
      std::vector<std::string> classes = model.class_names();
      if (!cls.empty()) {
        require_class(model, cls);
        classes = {cls};
      }
      auto result = finecc::render::analyze(model, classes);
      if (json) {
        std::cout << finecc::render::analyze_json(result).dump(2) << "\n";
      } else {
        std::cout << finecc::render::analyze_text(result);
      }
    } else if (*graph) {
      auto model = load_schema(schema_path);
      require_class(model, cls);
      auto report = finecc::render::graph_report(model, cls);
      if (dot) {
        std::cout << finecc::render::graph_dot(report);
      } else if (json) {
        std::cout << finecc::render::graph_json(report).dump(2) << "\n";
      } else {
        std::cout << finecc::render::graph_text(report);
      }
    } else if (*table) {
      auto model = load_schema(schema_path);
      require_class(model, cls);
      auto t = finecc::build_table(model, cls);
      if (json) {
        std::cout << finecc::render::table_json(t).dump(2) << "\n";
      } else {
        std::cout << finecc::render::table_text(t);
      }
    } else if (*simulate) {
      auto model = load_schema(schema_path);
      finecc::Scenario scenario;
      try {
        scenario = finecc::parse_scenario(read_file(scenario_path), model, max_txns);
      } catch (const finecc::Error& e) {
        throw finecc::Error(e.kind(), scenario_path + ":" + e.what());
      }
      auto report = finecc::run_scenario(model, finecc::build_all_tables(model), scenario);
      if (events) {
        std::cout << finecc::render::events_jsonl(report.replay.events);
      } else if (json) {
        std::cout << finecc::render::simulate_json(report, trace).dump(2) << "\n";
      } else {
        std::cout << finecc::render::simulate_text(report, trace);
      }
    } else if (*gen) {
      std::cout << finecc::generate_random_schema(seed, params);
    }
  } catch (const finecc::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
