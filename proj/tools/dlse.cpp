// Command-line front end: evaluation, side effects, classification, axiom
// schema suites, and the instruction-sequence pipeline.

#include <sys/resource.h>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "dlse/classify.hpp"
#include "dlse/effects.hpp"
#include "dlse/parser.hpp"
#include "dlse/pga.hpp"
#include "dlse/printer.hpp"
#include "dlse/scl.hpp"
#include "dlse/semantics.hpp"
#include "dlse/sos.hpp"

using json = nlohmann::ordered_json;
using namespace dlse;

namespace {

// Deep star nesting (10000 unfoldings of the CPS interpreter) needs more
// stack than the default 8M.
void raise_stack_limit() {
  rlimit rl{};
  if (getrlimit(RLIMIT_STACK, &rl) == 0) {
    rlim_t want = 512ull * 1024 * 1024;
    if (rl.rlim_cur != RLIM_INFINITY && rl.rlim_cur < want) {
      rl.rlim_cur = rl.rlim_max == RLIM_INFINITY ? want : std::min<rlim_t>(want, rl.rlim_max);
      setrlimit(RLIMIT_STACK, &rl);
    }
  }
}

std::string read_input(const std::string& arg) {
  std::ifstream f(arg);
  if (f.good()) {
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
  }
  return arg;
}

Valuation parse_init(const std::string& s) {
  Valuation g;
  if (s.empty()) return g;
  std::istringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t eq = item.find('=');
    if (eq == std::string::npos)
      throw CLI::ValidationError("--init", "expected k=v pairs");
    g = g.set(item.substr(0, eq), std::stoull(item.substr(eq + 1)));
  }
  return g;
}

json valuation_json(const Valuation& g) {
  json j = json::object();
  for (const auto& [v, k] : g.entries()) j[v] = k;
  return j;
}

json effects_json(const SideEffectSet& s) {
  json j = json::array();
  for (const auto& [v, k] : s.entries) j.push_back({{"var", v}, {"value", k}});
  return j;
}

std::string effects_text(const SideEffectSet& s) {
  if (s.empty()) return "{}";
  std::string out = "{";
  bool first = true;
  for (const auto& [v, k] : s.entries) {
    if (!first) out += ", ";
    first = false;
    out += v + " -> " + std::to_string(k);
  }
  return out + "}";
}

std::string valuation_text(const Valuation& g) {
  std::string out = "{";
  bool first = true;
  for (const auto& [v, k] : g.entries()) {
    if (!first) out += ", ";
    first = false;
    out += v + "=" + std::to_string(k);
  }
  return out + "}";
}

const char* outcome_name(EvalOutcome::Kind k) {
  switch (k) {
    case EvalOutcome::Kind::Completed: return "completed";
    case EvalOutcome::Kind::Terminated: return "terminated";
    case EvalOutcome::Kind::Failed: return "failed";
    case EvalOutcome::Kind::BudgetExceeded: return "budget-exceeded";
  }
  return "?";
}

void emit(const json& j, const std::string& format) {
  if (format == "json") {
    std::cout << j.dump(2) << "\n";
    return;
  }
  // text rendering: one "key: value" line per top-level field
  for (const auto& [k, v] : j.items()) {
    std::cout << k << ": ";
    if (v.is_string())
      std::cout << v.get<std::string>();
    else
      std::cout << v.dump();
    std::cout << "\n";
  }
}

OccurrenceRef parse_occ(const std::string& s) {
  OccurrenceRef occ;
  std::size_t colon = s.find(':');
  occ.instr_index = std::stoull(s.substr(0, colon));
  if (colon != std::string::npos)
    occ.formula_path = parse_path(s.substr(colon + 1));
  return occ;
}

}  // namespace

int main(int argc, char** argv) {
  raise_stack_limit();
  CLI::App app{"dynamic-logic side effect analyzer"};
  app.require_subcommand(1);

  std::string input, init_str, policy_str = "default", format = "text";
  std::string occ_str = "0", schema;
  Nat max_steps = 10000;
  std::uint64_t seed = 1;
  Nat trials = 500;
  bool expected = false;

  auto add_common = [&](CLI::App* c, bool with_input = true) {
    if (with_input)
      c->add_option("input", input, "program text or file")->required();
    c->add_option("--init", init_str, "initial valuation k=v[,k=v...]");
    c->add_option("--policy", policy_str, "default|assign-inert")
        ->check(CLI::IsMember({"default", "assign-inert"}));
    c->add_option("--max-steps", max_steps, "star unfolding budget");
    c->add_option("--format", format, "text|json")
        ->check(CLI::IsMember({"text", "json"}));
    return c;
  };

  CLI::App* eval_cmd = add_common(app.add_subcommand("eval", "run a program"));
  eval_cmd->add_flag("--expected", expected, "use the expected semantics");
  CLI::App* effects_cmd =
      add_common(app.add_subcommand("effects", "side effects of a program"));
  CLI::App* classify_cmd =
      add_common(app.add_subcommand("classify", "marginality of an occurrence"));
  classify_cmd->add_option("--occ", occ_str, "INDEX[:PATH] into the canonical form");
  CLI::App* scl_cmd = app.add_subcommand("scl-check", "axiom schema suites");
  scl_cmd->add_option("--schema", schema, "check one schema by name");
  scl_cmd->add_option("--trials", trials, "instances per schema");
  scl_cmd->add_option("--seed", seed, "random seed");
  scl_cmd->add_option("--format", format, "text|json")
      ->check(CLI::IsMember({"text", "json"}));
  CLI::App* canon_cmd = add_common(
      app.add_subcommand("pga-canon", "first and second canonical forms"));
  CLI::App* behave_cmd = add_common(
      app.add_subcommand("pga-behave", "behavior extraction (projects first)"));
  CLI::App* project_cmd =
      add_common(app.add_subcommand("pga-project", "project complex tests"));
  CLI::App* translate_cmd = add_common(
      app.add_subcommand("pga-translate", "translate into the DL language"));
  CLI::App* similar_cmd = add_common(app.add_subcommand(
      "pga-similar", "compare direct and projected translations"));
  CLI::App* oracle_cmd = add_common(
      app.add_subcommand("oracle-check", "toy command: SOS vs DL translation"));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  EvalPolicy policy =
      policy_str == "assign-inert" ? EvalPolicy::AssignInert : EvalPolicy::Default;

  try {
    Valuation g = parse_init(init_str);

    if (eval_cmd->parsed()) {
      ProgramPtr p = parse_program(read_input(input));
      EvalOutcome out = expected ? run_expected(p, g, policy, max_steps)
                                 : run_actual(p, g, max_steps);
      json j{{"program", print_program(p)},
             {"initial", valuation_json(g)},
             {"outcome", outcome_name(out.kind)},
             {"final", valuation_json(out.state)}};
      if (format == "text") {
        std::cout << "outcome: " << outcome_name(out.kind) << "\n"
                  << "final: " << valuation_text(out.state) << "\n";
      } else {
        emit(j, format);
      }
      return 0;
    }

    if (effects_cmd->parsed()) {
      ProgramPtr p = parse_program(read_input(input));
      EffectsReport rep = effects_program(p, g, policy, max_steps);
      json trace = json::array();
      for (const auto& [v, k] : rep.effects.trace)
        trace.push_back({{"var", v}, {"value", k}});
      json j{{"program", print_program(p)},
             {"initial", valuation_json(g)},
             {"final", valuation_json(rep.final_state)},
             {"effects", effects_json(rep.effects)},
             {"trace", trace}};
      if (format == "text") {
        std::cout << "effects: " << effects_text(rep.effects) << "\n"
                  << "final: " << valuation_text(rep.final_state) << "\n";
      } else {
        emit(j, format);
      }
      return 0;
    }

    if (classify_cmd->parsed()) {
      ProgramPtr p = parse_program(read_input(input));
      OccurrenceRef occ = parse_occ(occ_str);
      MarginalVerdict v = is_marginal(p, occ, g, policy, max_steps);
      json j{{"occurrence", occ_str},
             {"marginal", v.marginal},
             {"h_E_exists", v.h_E_exists},
             {"delta", effects_json(v.delta)},
             {"effect", effects_json(v.effect)}};
      if (format == "text") {
        std::cout << "occurrence: " << occ_str << "\n"
                  << "marginal: " << (v.marginal ? "true" : "false") << "\n"
                  << "h_E_exists: " << (v.h_E_exists ? "true" : "false") << "\n"
                  << "delta: " << effects_text(v.delta) << "\n"
                  << "effect: " << effects_text(v.effect) << "\n";
      } else {
        emit(j, format);
      }
      return 0;
    }

    if (scl_cmd->parsed()) {
      bool all_ok = true;
      json results = json::array();
      for (const Schema& s : schema_table()) {
        if (!schema.empty() && s.name != schema) continue;
        SchemaReport rep = check_schema(s.name, trials, seed);
        all_ok = all_ok && rep.ok;
        json j{{"schema", s.name},
               {"expect_fail", s.expect_fail},
               {"ok", rep.ok},
               {"witness", rep.witness}};
        results.push_back(j);
        if (format == "text")
          std::cout << s.name << ": " << (rep.ok ? "ok" : "FAIL")
                    << (rep.witness.empty() ? "" : "  [" + rep.witness + "]") << "\n";
      }
      if (format == "json") std::cout << results.dump(2) << "\n";
      return all_ok ? 0 : 1;
    }

    if (canon_cmd->parsed()) {
      PgaSeq p = parse_pga(read_input(input));
      PgaSeq p2 = second_canonical(p);
      emit(json{{"first", print_pga(p)}, {"second", print_pga(p2)}}, format);
      return 0;
    }

    if (behave_cmd->parsed()) {
      PgaSeq p = second_canonical(project_program(parse_pga(read_input(input))));
      BehaviorGraph bg = behavior_extract(p);
      json nodes = json::array();
      for (std::size_t i = 0; i < bg.nodes.size(); ++i) {
        const auto& n = bg.nodes[i];
        json j{{"id", i}};
        switch (n.kind) {
          case BehaviorGraph::Node::Kind::S: j["kind"] = "S"; break;
          case BehaviorGraph::Node::Kind::D: j["kind"] = "D"; break;
          case BehaviorGraph::Node::Kind::Action:
            j["kind"] = "action";
            j["label"] = n.label;
            j["next"] = n.next;
            break;
          case BehaviorGraph::Node::Kind::Post:
            j["kind"] = "test";
            j["label"] = n.label;
            j["true"] = n.tnext;
            j["false"] = n.fnext;
            break;
        }
        nodes.push_back(j);
      }
      emit(json{{"entry", bg.entry}, {"nodes", nodes}}, format);
      return 0;
    }

    if (project_cmd->parsed()) {
      PgaSeq p = project_program(parse_pga(read_input(input)));
      emit(json{{"projected", print_pga(p)}}, format);
      return 0;
    }

    if (translate_cmd->parsed()) {
      ProgramPtr p = translate_ft(parse_pga(read_input(input)));
      emit(json{{"translated", print_program(p)}}, format);
      return 0;
    }

    if (similar_cmd->parsed()) {
      SimilarReport rep = sufficiently_similar(parse_pga(read_input(input)), g, max_steps);
      json j{{"dl_unrestricted", print_program(rep.dl_ul)},
             {"dl_projected", print_program(rep.dl_u)},
             {"outcome_unrestricted", outcome_name(rep.out_ul.kind)},
             {"outcome_projected", outcome_name(rep.out_u.kind)},
             {"trace_unrestricted", rep.trace_ul},
             {"trace_projected", rep.trace_u},
             {"similar", rep.similar}};
      emit(j, format);
      return 0;
    }

    if (oracle_cmd->parsed()) {
      CommandPtr c = parse_command(read_input(input));
      SosResult sos = sos_run(c, g, max_steps);
      EvalOutcome dl = run_actual(command_to_program(c), g, max_steps);
      bool agree = (sos.kind == SosResult::Kind::Final &&
                    dl.kind == EvalOutcome::Kind::Completed && sos.state == dl.state) ||
                   (sos.kind == SosResult::Kind::Stuck &&
                    dl.kind == EvalOutcome::Kind::Failed) ||
                   (sos.kind == SosResult::Kind::OutOfFuel &&
                    dl.kind == EvalOutcome::Kind::BudgetExceeded);
      const char* sos_name = sos.kind == SosResult::Kind::Final      ? "final"
                             : sos.kind == SosResult::Kind::Stuck    ? "stuck"
                                                                     : "out-of-fuel";
      json j{{"sos", sos_name},
             {"sos_state", valuation_json(sos.state)},
             {"dl", outcome_name(dl.kind)},
             {"dl_state", valuation_json(dl.state)},
             {"agree", agree}};
      emit(j, format);
      return 0;
    }
  } catch (const SyntaxError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
