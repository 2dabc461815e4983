// cgm: command-line front end for constrained goal models.

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "cgm/dsl.hpp"
#include "cgm/encoder.hpp"
#include "cgm/evolution.hpp"
#include "cgm/json_io.hpp"
#include "cgm/reasoning.hpp"
#include "cgm/service.hpp"
#include "cgm/smt2.hpp"
#include "json.hpp"

namespace {

using Json = nlohmann::ordered_json;
using namespace cgm;

enum Exit { kOk = 0, kUnsat = 1, kUsage = 2, kResource = 3 };

struct Failure {
  int code;
  std::string message;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Failure{kUsage, "cannot read '" + path + "'"};
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Failure{kUsage, "cannot write '" + path + "'"};
  out << text;
}

bool looks_like_json(const std::string& path, const std::string& text) {
  if (path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0) return true;
  auto first = text.find_first_not_of(" \t\r\n");
  return first != std::string::npos && text[first] == '{';
}

CgmModel load_model(const std::string& path) {
  std::string text = read_file(path);
  ParseResult r = looks_like_json(path, text) ? parse_json(text, path) : parse_dsl(text, path);
  for (const auto& d : r.diagnostics) std::cerr << format(d) << "\n";
  if (!r.model) throw Failure{kUsage, path + ": model has errors"};
  return *r.model;
}

std::vector<ObjectiveSpec> objectives_or(const CgmModel& model, const std::string& text,
                                         std::vector<ObjectiveSpec> fallback) {
  if (text.empty()) return fallback;
  try {
    auto specs = parse_objective_list(model, text);
    return specs.empty() ? fallback : specs;
  } catch (const UnknownObjective& e) {
    throw Failure{kUsage, e.what()};
  }
}

std::vector<std::string> satisfied_elements(const CgmModel& model, const Realization& r) {
  std::vector<std::string> out;
  for (const auto& e : canonical(model).elements) {
    auto it = r.truth.find(e.id);
    if (it != r.truth.end() && it->second) out.push_back(e.id);
  }
  return out;
}

std::string join(const std::vector<std::string>& items, const char* sep = ", ") {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) out += (i ? sep : "") + items[i];
  return out;
}

void print_table(const std::vector<std::pair<std::string, std::string>>& rows, const std::string& h1,
                 const std::string& h2) {
  std::size_t width = h1.size();
  for (const auto& [k, v] : rows) width = std::max(width, k.size());
  std::cout << std::left << std::setw(static_cast<int>(width) + 2) << h1 << h2 << "\n";
  for (const auto& [k, v] : rows) std::cout << std::left << std::setw(static_cast<int>(width) + 2) << k << v << "\n";
}

Json realization_json(const Realization& r) {
  Json b = Json::object(), n = Json::object();
  for (const auto& [k, v] : r.truth) b[k] = v;
  for (const auto& [k, v] : r.values) n[k] = to_string(v);
  return {{"boolAssign", b}, {"numAssign", n}};
}

Json values_json(const std::map<std::string, Rational>& values) {
  Json out = Json::object();
  for (const auto& [k, v] : values) out[k] = to_string(v);
  return out;
}

Json objective_values_json(const std::vector<ObjectiveSpec>& specs, const std::vector<Rational>& values) {
  Json out = Json::array();
  for (std::size_t i = 0; i < specs.size(); ++i) {
    out.push_back({{"name", specs[i].name}, {"polarity", to_string(specs[i].polarity)}, {"value", to_string(values[i])}});
  }
  return out;
}

void emit_json(const Json& j) { std::cout << j.dump(2) << "\n"; }

struct Globals {
  bool json = false;
  double budget_seconds = 0;
};

SolverOptions solver_options(const Globals& g) {
  SolverOptions opts;
  double seconds = 300;
  if (const char* env = std::getenv("CGM_BUDGET_SECONDS")) {
    try {
      seconds = std::stod(env);
    } catch (const std::exception&) {
      throw Failure{kUsage, "CGM_BUDGET_SECONDS must be a number"};
    }
  }
  if (g.budget_seconds > 0) seconds = g.budget_seconds;
  if (seconds > 0) opts.budget.wall_clock = std::chrono::milliseconds(static_cast<long long>(seconds * 1000));
  return opts;
}

int cmd_check(const Globals& g, const std::string& path, const std::string& realization_path) {
  CgmModel model = load_model(path);
  ModelIndex index(model);
  if (realization_path.empty()) {
    if (g.json) {
      emit_json({{"status", "ok"},
                 {"modelHash", model_hash(model)},
                 {"elements", model.elements.size()},
                 {"refinements", model.refinements.size()},
                 {"requirements", index.requirements()},
                 {"tasks", index.tasks()}});
    } else {
      std::cout << "ok: " << model.elements.size() << " elements, " << model.refinements.size() << " refinements, "
                << index.requirements().size() << " requirements, " << index.tasks().size() << " tasks\n";
    }
    return kOk;
  }
  RealizationDoc doc;
  try {
    doc = parse_realization_json(read_file(realization_path));
  } catch (const JsonError& e) {
    throw Failure{kUsage, realization_path + ": " + e.what()};
  }
  std::set<std::string> vars;
  for (const auto& v : index.boolean_variables()) vars.insert(v);
  for (const auto& v : index.numeric_variables()) vars.insert(v);
  bool foreign = !doc.model_hash.empty() && doc.model_hash != model_hash(model);
  Realization kept;
  for (const auto& [k, v] : doc.realization.truth) {
    if (vars.count(k)) kept.truth[k] = v;
  }
  for (const auto& [k, v] : doc.realization.values) {
    if (vars.count(k)) kept.values[k] = v;
  }
  if (foreign) std::cerr << "note: realization belongs to another model; checking its restriction\n";
  CheckResult result = check_realization(model, complete_with_defaults(kept, model));
  if (g.json) {
    Json v = Json::array();
    for (const auto& viol : result.violations) {
      v.push_back({{"condition", viol.condition}, {"origin", viol.origin}, {"message", viol.message}});
    }
    emit_json({{"status", result.valid() ? "valid" : "invalid"}, {"restricted", foreign}, {"violations", v}});
  } else if (result.valid()) {
    std::cout << "valid realization\n";
  } else {
    std::cout << "invalid realization, " << result.violations.size() << " violations:\n";
    for (const auto& viol : result.violations) std::cout << "  (" << viol.condition << ") " << viol.message << "\n";
  }
  return result.valid() ? kOk : kUnsat;
}

int cmd_realize(const Globals& g, const std::string& path, const std::string& objective, const std::string& out) {
  CgmModel model = load_model(path);
  auto specs = objectives_or(model, objective, default_objectives(model));
  Optimum opt = realize(model, specs, solver_options(g));
  std::string hash = model_hash(model);
  if (!out.empty()) write_file(out, realization_to_json(opt.model, hash));
  if (g.json) {
    Json j = {{"status", "sat"},
              {"modelHash", hash},
              {"objectiveValues", objective_values_json(specs, opt.values)},
              {"values", values_json(builtin_values(model, opt.model))},
              {"satisfied", satisfied_elements(model, opt.model)},
              {"realization", realization_json(opt.model)}};
    emit_json(j);
  } else {
    std::vector<std::pair<std::string, std::string>> rows;
    for (std::size_t i = 0; i < specs.size(); ++i) rows.emplace_back(specs[i].name, to_string(opt.values[i]));
    print_table(rows, "objective", "value");
    auto sat = satisfied_elements(model, opt.model);
    std::cout << "\nsatisfied (" << sat.size() << "): " << join(sat) << "\n";
    if (!out.empty()) std::cout << "realization written to " << out << "\n";
  }
  return kOk;
}

int cmd_enumerate(const Globals& g, const std::string& path, std::optional<std::size_t> limit) {
  CgmModel model = load_model(path);
  auto all = enumerate_realizations(model, limit, solver_options(g));
  if (g.json) {
    Json list = Json::array();
    for (const auto& r : all) list.push_back(realization_json(r));
    emit_json({{"count", all.size()}, {"realizations", list}});
  } else {
    std::cout << all.size() << " realizations" << (limit && all.size() == *limit ? " (limit reached)" : "") << "\n";
    for (std::size_t i = 0; i < all.size(); ++i) {
      std::cout << "#" << i + 1 << ": " << join(satisfied_elements(model, all[i])) << "\n";
    }
  }
  return all.empty() ? kUnsat : kOk;
}

int cmd_diagnose(const Globals& g, const std::string& path) {
  CgmModel model = load_model(path);
  try {
    auto core = diagnose_assertions(model, solver_options(g));
    if (g.json) {
      emit_json({{"status", "unrealizable"}, {"core", core}});
    } else if (core.empty()) {
      std::cout << "unrealizable even without assertions\n";
    } else {
      std::cout << "unrealizable; conflicting assertions:\n";
      for (const auto& id : core) std::cout << "  " << id << " " << to_string(model.assertions.at(id)) << "\n";
    }
    return kUnsat;
  } catch (const NotUnsat&) {
    if (g.json) {
      emit_json({{"status", "realizable"}, {"core", Json::array()}});
    } else {
      std::cout << "realizable; nothing to diagnose\n";
    }
    return kOk;
  }
}

struct EvolveArgs {
  std::string old_path, prev_path, new_path, criterion = "familiarity", tie_break, interest, weights_path, out;
  bool count_new_denied = false;
};

Interest parse_interest(const std::string& text) {
  if (text.empty()) return {};
  if (text == "all") return Interest::all();
  if (text == "tasks") return Interest::tasks();
  std::set<ElementId> ids;
  std::stringstream ss(text);
  for (std::string id; std::getline(ss, id, ',');) {
    if (!id.empty()) ids.insert(id);
  }
  return Interest::of(std::move(ids));
}

int cmd_evolve(const Globals& g, const EvolveArgs& a) {
  CgmModel old_model = load_model(a.old_path);
  CgmModel new_model = load_model(a.new_path);
  RealizationDoc prev;
  try {
    prev = parse_realization_json(read_file(a.prev_path));
  } catch (const JsonError& e) {
    throw Failure{kUsage, a.prev_path + ": " + e.what()};
  }
  if (!prev.model_hash.empty() && prev.model_hash != model_hash(old_model)) {
    throw Failure{kUsage, a.prev_path + " was computed for a different model than " + a.old_path};
  }
  auto kind = parse_criterion(a.criterion);
  if (!kind) throw Failure{kUsage, "unknown criterion '" + a.criterion + "'"};
  SimilarityCriterion criterion;
  criterion.kind = *kind;
  std::vector<ObjectiveSpec> fallback{build_objective(new_model, ObjectiveTag::NumUnsatRequirements)};
  for (auto& o : default_objectives(new_model)) fallback.push_back(std::move(o));
  criterion.tie_breakers = objectives_or(new_model, a.tie_break, fallback);
  if (!a.interest.empty()) criterion.interest = parse_interest(a.interest);
  if (a.count_new_denied) criterion.variant = FamiliarityVariant::CountNewDenied;
  if (!a.weights_path.empty()) {
    Json w;
    try {
      w = Json::parse(read_file(a.weights_path));
    } catch (const Json::parse_error& e) {
      throw Failure{kUsage, a.weights_path + ": " + e.what()};
    }
    Weights weights;
    for (const auto& [k, v] : w.items()) {
      std::string text = v.is_string() ? v.get<std::string>() : v.dump();
      auto r = parse_rational(text);
      if (!r) throw Failure{kUsage, a.weights_path + ": bad weight for '" + k + "'"};
      weights[k] = *r;
    }
    criterion.weights = std::move(weights);
  }
  EvolutionResult result;
  try {
    result = evolve(old_model, prev.realization, new_model, criterion, solver_options(g));
  } catch (const NonTaskInterest& e) {
    throw Failure{kUsage, e.what()};
  } catch (const MissingWeight& e) {
    throw Failure{kUsage, e.what()};
  } catch (const UnknownId& e) {
    throw Failure{kUsage, e.what()};
  }
  const Realization& mu2 = result.optimum.model;
  if (!a.out.empty()) write_file(a.out, realization_to_json(mu2, model_hash(new_model)));
  EvolutionContext tasks = make_context(old_model, prev.realization, new_model, Interest::tasks());
  Rational newly = change_effort(tasks, mu2);
  std::vector<std::string> flipped;
  for (const auto& id : result.context.common) {
    auto it = result.context.old_realization.truth.find(id);
    if (it != result.context.old_realization.truth.end() && it->second != mu2.truth.at(id)) flipped.push_back(id);
  }
  std::vector<std::string> new_satisfied;
  for (const auto& id : result.context.added) {
    if (mu2.truth.at(id)) new_satisfied.push_back(id);
  }
  std::vector<ObjectiveSpec> all{criterion_objective(result.context, criterion.kind)};
  all.insert(all.end(), criterion.tie_breakers.begin(), criterion.tie_breakers.end());
  if (g.json) {
    emit_json({{"criterion", to_string(criterion.kind)},
               {"criterionValue", to_string(result.criterion_value)},
               {"newlySatisfiedTasks", newly.get_num().get_si()},
               {"flippedCommon", flipped},
               {"satisfiedNew", new_satisfied},
               {"objectiveValues", objective_values_json(all, result.optimum.values)},
               {"values", values_json(result.objective_values)},
               {"satisfied", satisfied_elements(new_model, mu2)},
               {"realization", realization_json(mu2)}});
  } else {
    std::cout << "criterion " << to_string(criterion.kind) << " = " << to_string(result.criterion_value) << "\n";
    std::cout << "newly satisfied tasks: " << to_string(newly) << "\n";
    std::cout << "common elements that changed: " << (flipped.empty() ? "none" : join(flipped)) << "\n";
    std::cout << "new elements satisfied: " << (new_satisfied.empty() ? "none" : join(new_satisfied)) << "\n\n";
    std::vector<std::pair<std::string, std::string>> rows;
    for (const auto& [k, v] : result.objective_values) rows.emplace_back(k, to_string(v));
    print_table(rows, "objective", "value");
    auto sat = satisfied_elements(new_model, mu2);
    std::cout << "\nsatisfied (" << sat.size() << "): " << join(sat) << "\n";
  }
  return kOk;
}

int cmd_export(const std::string& path, const std::string& objective, bool no_objectives, bool no_lex,
               const std::string& prefix, const std::string& out) {
  CgmModel model = load_model(path);
  auto specs = objectives_or(model, objective, default_objectives(model));
  ExportOptions eo;
  eo.include_objectives = !no_objectives;
  eo.lexicographic_mode = !no_lex;
  eo.name_prefix = prefix;
  std::string text;
  try {
    text = export_smt2(model, specs, eo);
  } catch (const std::invalid_argument& e) {
    throw Failure{kUsage, e.what()};
  }
  if (out.empty()) {
    std::cout << text;
  } else {
    write_file(out, text);
  }
  return kOk;
}

int cmd_serve(const Globals& g, const std::string& host, int port, double ttl_seconds) {
  ServiceOptions so;
  SolverOptions opts = solver_options(g);
  if (g.budget_seconds <= 0 && !std::getenv("CGM_BUDGET_SECONDS")) {
    so.default_budget = std::chrono::milliseconds(10000);
  } else {
    so.default_budget = *opts.budget.wall_clock;
  }
  so.session_ttl = std::chrono::seconds(static_cast<long long>(ttl_seconds));
  Service service(so);
  HttpServer server(service);
  int bound = server.bind(host, port);
  if (bound < 0) throw Failure{kUsage, "cannot bind " + host + ":" + std::to_string(port)};
  std::cerr << "listening on http://" << host << ":" << bound << "\n";
  return server.listen() ? kOk : kUsage;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cgm: constrained goal model reasoning"};
  app.require_subcommand(1);
  Globals g;
  app.add_flag("--json", g.json, "Machine-readable JSON on stdout");
  app.add_option("--budget", g.budget_seconds, "Solver wall-clock budget in seconds (overrides CGM_BUDGET_SECONDS)");

  std::string model_path, realization_path, objective, out;
  auto* check = app.add_subcommand("check", "Parse and validate a model, optionally a realization against it");
  check->add_option("model", model_path, "Model file (.cgm or .json)")->required();
  check->add_option("--realization", realization_path, "Realization JSON to check");

  auto* realize_cmd = app.add_subcommand("realize", "Compute an optimal realization");
  realize_cmd->add_option("model", model_path)->required();
  realize_cmd->add_option("--objective", objective, "lex:o1,o2,... (default: the model's list)");
  realize_cmd->add_option("--out", out, "Write the realization JSON here");

  std::optional<std::size_t> limit;
  auto* enumerate_cmd = app.add_subcommand("enumerate", "List distinct realizations");
  enumerate_cmd->add_option("model", model_path)->required();
  enumerate_cmd->add_option("--limit", limit, "Stop after N realizations");

  auto* diagnose_cmd = app.add_subcommand("diagnose", "Minimal conflicting set of user assertions");
  diagnose_cmd->add_option("model", model_path)->required();

  EvolveArgs ea;
  auto* evolve_cmd = app.add_subcommand("evolve", "Realize a new model close to a previous realization");
  evolve_cmd->add_option("--old", ea.old_path, "Previous model")->required();
  evolve_cmd->add_option("--prev", ea.prev_path, "Previous realization JSON")->required();
  evolve_cmd->add_option("--new", ea.new_path, "New model")->required();
  evolve_cmd->add_option("--criterion", ea.criterion, "familiarity|weighted-familiarity|effort|weighted-effort|ernst");
  evolve_cmd->add_option("--tie-break", ea.tie_break, "lex:o1,o2,... after the criterion");
  evolve_cmd->add_option("--interest", ea.interest, "all|tasks|id1,id2,...");
  evolve_cmd->add_option("--weights", ea.weights_path, "JSON object of element weights");
  evolve_cmd->add_flag("--count-new-denied", ea.count_new_denied, "Familiarity counts new elements that are denied");
  evolve_cmd->add_option("--out", ea.out, "Write the new realization JSON here");

  bool no_objectives = false, no_lex = false;
  std::string prefix;
  auto* export_cmd = app.add_subcommand("export-smt2", "Write the encoding as SMT-LIB2");
  export_cmd->add_option("model", model_path)->required();
  export_cmd->add_option("--objective", objective, "lex:o1,o2,...");
  export_cmd->add_flag("--no-objectives", no_objectives, "Omit minimize/maximize commands");
  export_cmd->add_flag("--no-lex", no_lex, "Omit the lexicographic priority option");
  export_cmd->add_option("--prefix", prefix, "Prefix for declared symbols");
  export_cmd->add_option("--out", out, "Output file (default stdout)");

  std::string host = "127.0.0.1";
  int port = 8080;
  double ttl = 3600;
  auto* serve_cmd = app.add_subcommand("serve", "Run the HTTP service");
  serve_cmd->add_option("--port", port, "Port (0 picks a free one)");
  serve_cmd->add_option("--host", host, "Bind address");
  serve_cmd->add_option("--session-ttl", ttl, "Idle session lifetime in seconds");

  for (auto* sub : app.get_subcommands({})) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (*check) return cmd_check(g, model_path, realization_path);
    if (*realize_cmd) return cmd_realize(g, model_path, objective, out);
    if (*enumerate_cmd) return cmd_enumerate(g, model_path, limit);
    if (*diagnose_cmd) return cmd_diagnose(g, model_path);
    if (*evolve_cmd) return cmd_evolve(g, ea);
    if (*export_cmd) return cmd_export(model_path, objective, no_objectives, no_lex, prefix, out);
    if (*serve_cmd) return cmd_serve(g, host, port, ttl);
  } catch (const Failure& f) {
    std::cerr << "error: " << f.message << "\n";
    return f.code;
  } catch (const Unrealizable& e) {
    if (g.json) {
      emit_json({{"status", "unrealizable"}, {"core", e.core()}});
    } else {
      std::cout << "unrealizable";
      if (!e.core().empty()) std::cout << "; conflicting assertions: " << join(e.core());
      std::cout << "\n";
    }
    return kUnsat;
  } catch (const ResourceLimit& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kResource;
  } catch (const InvalidModel& e) {
    for (const auto& d : e.diagnostics()) std::cerr << "error: " << d.message << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUnsat;
  }
  return kUsage;
}
