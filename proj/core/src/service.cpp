#include "cgm/service.hpp"

#include <atomic>
#include <optional>
#include <sstream>
#include <vector>

#include "cgm/dsl.hpp"
#include "cgm/encoder.hpp"
#include "cgm/evolution.hpp"
#include "cgm/json_io.hpp"
#include "cgm/reasoning.hpp"
#include "cgm/smt2.hpp"
#include "httplib.h"
#include "json_detail.hpp"

namespace cgm {

namespace {

using detail::Json;
using Clock = std::chrono::steady_clock;

struct StoredRealization {
  std::string model_id;
  std::string model_hash;
  Realization realization;
};

struct Session {
  std::mutex mutex;
  Clock::time_point last_used;
  std::map<std::string, CgmModel> models;
  std::map<std::string, StoredRealization> realizations;
  std::size_t next_model = 1;
  std::size_t next_realization = 1;
};

// Thrown inside handlers and turned into an error response.
struct HttpError {
  int status;
  std::string message;
  Json extra = Json::object();
};

HttpResponse json_response(int status, const Json& body) {
  return {status, "application/json", body.dump(2) + "\n"};
}

Json parse_body(const HttpRequest& req) {
  if (req.body.find_first_not_of(" \t\r\n") == std::string::npos) return Json::object();
  try {
    Json j = Json::parse(req.body);
    if (!j.is_object()) throw HttpError{400, "request body must be a JSON object"};
    return j;
  } catch (const nlohmann::json::parse_error& e) {
    throw HttpError{400, std::string("malformed JSON body: ") + e.what()};
  }
}

std::string string_member(const Json& body, const char* key) {
  if (!body.contains(key) || !body.at(key).is_string()) {
    throw HttpError{400, std::string("field '") + key + "' must be a string"};
  }
  return body.at(key).get<std::string>();
}

Json diagnostics_value(const std::vector<ParseDiagnostic>& diags) {
  Json out = Json::array();
  for (const auto& d : diags) {
    out.push_back({{"severity", d.severity == Severity::Error ? "error" : "warning"},
                   {"message", d.message},
                   {"line", d.span.start_line},
                   {"column", d.span.start_col},
                   {"text", format(d)}});
  }
  return out;
}

std::vector<ObjectiveSpec> objectives_from(const CgmModel& model, const Json& body, const char* key,
                                           std::vector<ObjectiveSpec> fallback) {
  if (!body.contains(key) || body.at(key).is_null()) return fallback;
  const Json& v = body.at(key);
  std::string text;
  if (v.is_string()) {
    text = v.get<std::string>();
  } else if (v.is_array()) {
    for (const auto& item : v) {
      if (!item.is_string()) throw HttpError{400, std::string("'") + key + "' entries must be strings"};
      text += (text.empty() ? "" : ",") + item.get<std::string>();
    }
  } else {
    throw HttpError{400, std::string("'") + key + "' must be a string or an array of strings"};
  }
  try {
    auto specs = parse_objective_list(model, text);
    return specs.empty() ? fallback : specs;
  } catch (const UnknownObjective& e) {
    throw HttpError{400, e.what()};
  }
}

Json objective_values(const std::vector<ObjectiveSpec>& specs, const std::vector<Rational>& values) {
  Json out = Json::array();
  for (std::size_t i = 0; i < specs.size() && i < values.size(); ++i) {
    out.push_back({{"name", specs[i].name},
                   {"polarity", to_string(specs[i].polarity)},
                   {"value", detail::rational_value(values[i])}});
  }
  return out;
}

Json value_map(const std::map<std::string, Rational>& values) {
  Json out = Json::object();
  for (const auto& [k, v] : values) out[k] = detail::rational_value(v);
  return out;
}

Json realization_doc(const Realization& r, const std::string& hash) {
  Json j = detail::realization_value(r);
  j["schema"] = kRealizationSchema;
  j["modelHash"] = hash;
  return j;
}

Json ids_value(const std::set<std::string>& ids) { return Json(std::vector<std::string>(ids.begin(), ids.end())); }

Json model_summary(const std::string& id, const CgmModel& model) {
  ModelIndex index(model);
  Json assertions = Json::object();
  for (const auto& [e, m] : model.assertions) assertions[e] = to_string(m);
  return {{"modelId", id},
          {"modelHash", model_hash(model)},
          {"elements", model.elements.size()},
          {"refinements", model.refinements.size()},
          {"requirements", index.requirements()},
          {"tasks", index.tasks()},
          {"assertions", assertions}};
}

SolverOptions solver_options(const Json& body, std::chrono::milliseconds fallback) {
  SolverOptions opts;
  opts.budget.wall_clock = fallback;
  if (body.contains("budgetSeconds")) {
    const Json& b = body.at("budgetSeconds");
    if (!b.is_number() || b.get<double>() <= 0) throw HttpError{400, "'budgetSeconds' must be a positive number"};
    opts.budget.wall_clock = std::chrono::milliseconds(static_cast<long long>(b.get<double>() * 1000));
  }
  return opts;
}

Interest interest_from(const Json& body) {
  if (!body.contains("interest") || body.at("interest").is_null()) return {};
  const Json& v = body.at("interest");
  if (v.is_string() && v == "all") return Interest::all();
  if (v.is_string() && v == "tasks") return Interest::tasks();
  std::set<ElementId> ids;
  if (v.is_array()) {
    for (const auto& item : v) {
      if (!item.is_string()) throw HttpError{400, "'interest' ids must be strings"};
      ids.insert(item.get<std::string>());
    }
  } else if (v.is_string()) {
    std::stringstream ss(v.get<std::string>());
    for (std::string id; std::getline(ss, id, ',');) {
      if (!id.empty()) ids.insert(id);
    }
  } else {
    throw HttpError{400, "'interest' must be \"all\", \"tasks\" or a list of ids"};
  }
  return Interest::of(std::move(ids));
}

}  // namespace

struct Service::Impl {
  ServiceOptions options;
  std::mutex sessions_mutex;
  std::map<std::string, std::shared_ptr<Session>> sessions;

  Clock::time_point now() const { return options.clock ? options.clock() : Clock::now(); }

  std::shared_ptr<Session> session(const std::string& name) {
    std::lock_guard lock(sessions_mutex);
    auto t = now();
    for (auto it = sessions.begin(); it != sessions.end();) {
      bool expired;
      {
        std::lock_guard s(it->second->mutex);
        expired = t - it->second->last_used > options.session_ttl;
      }
      it = expired ? sessions.erase(it) : std::next(it);
    }
    auto& s = sessions[name];
    if (!s) s = std::make_shared<Session>();
    std::lock_guard s_lock(s->mutex);
    s->last_used = t;
    return s;
  }

  static CgmModel model_copy(Session& s, const std::string& id) {
    std::lock_guard lock(s.mutex);
    auto it = s.models.find(id);
    if (it == s.models.end()) throw HttpError{404, "unknown model '" + id + "'"};
    return it->second;
  }

  static std::string store_realization(Session& s, const std::string& model_id, const std::string& hash,
                                       const Realization& r) {
    std::lock_guard lock(s.mutex);
    std::string id = "r" + std::to_string(s.next_realization++);
    s.realizations[id] = {model_id, hash, r};
    return id;
  }

  HttpResponse create_model(Session& s, const HttpRequest& req) {
    bool json = req.content_type.find("json") != std::string::npos ||
                (req.content_type.find("text/plain") == std::string::npos &&
                 req.body.find_first_not_of(" \t\r\n") != std::string::npos &&
                 req.body[req.body.find_first_not_of(" \t\r\n")] == '{');
    ParseResult parsed = json ? parse_json(req.body, "<upload>") : parse_dsl(req.body, "<upload>");
    if (!parsed.model) {
      throw HttpError{400, "model has errors", {{"diagnostics", diagnostics_value(parsed.diagnostics)}}};
    }
    std::string id;
    {
      std::lock_guard lock(s.mutex);
      id = "m" + std::to_string(s.next_model++);
      s.models[id] = *parsed.model;
    }
    return json_response(200, {{"modelId", id},
                               {"modelHash", model_hash(*parsed.model)},
                               {"diagnostics", diagnostics_value(parsed.diagnostics)}});
  }

  HttpResponse set_assertion(Session& s, const std::string& id, const Json& body) {
    std::string element = string_member(body, "element");
    std::optional<Mark> mark;
    if (body.contains("mark") && !body.at("mark").is_null()) {
      std::string m = string_member(body, "mark");
      if (m == "satisfied") {
        mark = Mark::Satisfied;
      } else if (m == "denied") {
        mark = Mark::Denied;
      } else if (m != "clear") {
        throw HttpError{400, "'mark' must be satisfied, denied or clear"};
      }
    }
    std::lock_guard lock(s.mutex);
    auto it = s.models.find(id);
    if (it == s.models.end()) throw HttpError{404, "unknown model '" + id + "'"};
    if (!it->second.find_element(element)) throw HttpError{404, "unknown element '" + element + "'"};
    if (mark) {
      it->second.assertions[element] = *mark;
    } else {
      it->second.assertions.erase(element);
    }
    return json_response(200, model_summary(id, it->second));
  }

  HttpResponse solve(Session& s, const std::string& id, const Json& body) {
    CgmModel model = model_copy(s, id);
    auto specs = objectives_from(model, body, "objectives", default_objectives(model));
    SolverOptions opts = solver_options(body, options.default_budget);
    SolveStats stats;
    Optimum opt = realize(model, specs, opts, &stats);
    CheckResult check = check_realization(model, opt.model);
    if (!check.valid()) {
      throw HttpError{500, "internal error: solver realization fails check_realization on '" +
                               check.violations.front().origin + "'"};
    }
    std::string hash = model_hash(model);
    std::string rid = store_realization(s, id, hash, opt.model);
    Json out = {{"status", "sat"},
                {"realizationId", rid},
                {"realization", realization_doc(opt.model, hash)},
                {"objectiveValues", objective_values(specs, opt.values)},
                {"values", value_map(builtin_values(model, opt.model))},
                {"stats", detail::stats_value(stats)}};
    if (body.contains("enumerateLimit") && !body.at("enumerateLimit").is_null()) {
      const Json& l = body.at("enumerateLimit");
      if (!l.is_number_unsigned()) throw HttpError{400, "'enumerateLimit' must be a non-negative integer"};
      out["realizations"] = Json::array();
      for (const auto& r : enumerate_realizations(model, l.get<std::size_t>(), opts)) {
        out["realizations"].push_back(detail::realization_value(r));
      }
    }
    return json_response(200, out);
  }

  HttpResponse enumerate(Session& s, const std::string& id, const Json& body) {
    CgmModel model = model_copy(s, id);
    std::size_t limit = 100;
    if (body.contains("limit")) {
      if (!body.at("limit").is_number_unsigned()) throw HttpError{400, "'limit' must be a non-negative integer"};
      limit = body.at("limit").get<std::size_t>();
    }
    auto all = enumerate_realizations(model, limit, solver_options(body, options.default_budget));
    Json list = Json::array();
    for (const auto& r : all) list.push_back(detail::realization_value(r));
    return json_response(200, {{"count", all.size()}, {"limit", limit}, {"realizations", list}});
  }

  HttpResponse diagnose(Session& s, const std::string& id, const Json& body) {
    CgmModel model = model_copy(s, id);
    try {
      auto core = diagnose_assertions(model, solver_options(body, options.default_budget));
      return json_response(200, {{"status", "unrealizable"}, {"core", core}});
    } catch (const NotUnsat&) {
      return json_response(200, {{"status", "realizable"}, {"core", Json::array()}});
    }
  }

  HttpResponse export_smt2(Session& s, const std::string& id, const Json& body) {
    CgmModel model = model_copy(s, id);
    ExportOptions eo;
    if (body.contains("includeObjectives")) eo.include_objectives = body.at("includeObjectives").get<bool>();
    if (body.contains("lexicographic")) eo.lexicographic_mode = body.at("lexicographic").get<bool>();
    if (body.contains("namePrefix")) eo.name_prefix = string_member(body, "namePrefix");
    auto specs = objectives_from(model, body, "objectives", default_objectives(model));
    try {
      return {200, "text/plain; charset=utf-8", cgm::export_smt2(model, specs, eo)};
    } catch (const std::invalid_argument& e) {
      throw HttpError{400, e.what()};
    }
  }

  HttpResponse upload_realization(Session& s, const Json& body) {
    std::string model_id = string_member(body, "modelId");
    CgmModel model = model_copy(s, model_id);
    std::string hash = model_hash(model);
    if (!body.contains("modelHash") || body.at("modelHash") != hash) {
      throw HttpError{409, "realization was computed for a different version of '" + model_id + "'",
                      {{"expectedHash", hash}}};
    }
    Realization r;
    try {
      r = detail::realization_from(body.value("boolAssign", Json()), body.value("numAssign", Json()));
    } catch (const JsonError& e) {
      throw HttpError{400, e.what()};
    }
    CheckResult check;
    try {
      check = check_realization(model, r);
    } catch (const MissingAssignment& e) {
      throw HttpError{400, e.what()};
    }
    if (!check.valid()) {
      Json v = Json::array();
      for (const auto& viol : check.violations) {
        v.push_back({{"condition", viol.condition}, {"origin", viol.origin}, {"message", viol.message}});
      }
      throw HttpError{400, "realization is not valid for '" + model_id + "'", {{"violations", v}}};
    }
    std::string rid = store_realization(s, model_id, hash, r);
    return json_response(200, {{"realizationId", rid}, {"modelId", model_id}});
  }

  HttpResponse get_realization(Session& s, const std::string& id) {
    std::lock_guard lock(s.mutex);
    auto it = s.realizations.find(id);
    if (it == s.realizations.end()) throw HttpError{404, "unknown realization '" + id + "'"};
    Json out = realization_doc(it->second.realization, it->second.model_hash);
    out["modelId"] = it->second.model_id;
    return json_response(200, out);
  }

  HttpResponse evolve(Session& s, const Json& body) {
    std::string old_id = string_member(body, "oldModelId");
    std::string new_id = string_member(body, "newModelId");
    std::string rid = string_member(body, "oldRealizationId");
    CgmModel old_model = model_copy(s, old_id);
    CgmModel new_model = model_copy(s, new_id);
    StoredRealization prev;
    {
      std::lock_guard lock(s.mutex);
      auto it = s.realizations.find(rid);
      if (it == s.realizations.end()) throw HttpError{404, "unknown realization '" + rid + "'"};
      prev = it->second;
    }
    std::string old_hash = model_hash(old_model);
    if (prev.model_hash != old_hash || prev.model_id != old_id) {
      throw HttpError{409, "realization '" + rid + "' does not belong to the current '" + old_id + "'",
                      {{"expectedHash", old_hash}, {"realizationHash", prev.model_hash}}};
    }
    auto kind = parse_criterion(body.value("criterion", std::string("familiarity")));
    if (!kind) throw HttpError{400, "unknown criterion"};
    SimilarityCriterion criterion;
    criterion.kind = *kind;
    std::vector<ObjectiveSpec> fallback{build_objective(new_model, ObjectiveTag::NumUnsatRequirements)};
    for (auto& o : default_objectives(new_model)) fallback.push_back(std::move(o));
    criterion.tie_breakers = objectives_from(new_model, body, "tieBreakers", fallback);
    if (body.contains("interest")) criterion.interest = interest_from(body);
    if (body.value("countNewDenied", false)) criterion.variant = FamiliarityVariant::CountNewDenied;
    if (body.contains("weights")) {
      Weights w;
      if (!body.at("weights").is_object()) throw HttpError{400, "'weights' must be an object"};
      for (const auto& [k, v] : body.at("weights").items()) {
        try {
          w[k] = detail::rational_from(v, "weights." + k);
        } catch (const JsonError& e) {
          throw HttpError{400, e.what()};
        }
      }
      criterion.weights = std::move(w);
    }
    EvolutionResult result;
    try {
      result = cgm::evolve(old_model, prev.realization, new_model, criterion,
                           solver_options(body, options.default_budget));
    } catch (const NonTaskInterest& e) {
      throw HttpError{400, e.what()};
    } catch (const MissingWeight& e) {
      throw HttpError{400, e.what()};
    } catch (const UnknownId& e) {
      throw HttpError{400, e.what()};
    }
    const Realization& mu2 = result.optimum.model;
    CheckResult check = check_realization(new_model, mu2);
    if (!check.valid()) throw HttpError{500, "internal error: evolved realization fails check_realization"};
    std::string new_hash = model_hash(new_model);
    std::string new_rid = store_realization(s, new_id, new_hash, mu2);

    std::vector<ObjectiveSpec> all{criterion_objective(result.context, criterion.kind)};
    all.insert(all.end(), criterion.tie_breakers.begin(), criterion.tie_breakers.end());
    EvolutionContext task_ctx = make_context(old_model, prev.realization, new_model, Interest::tasks());
    std::set<ElementId> flipped;
    for (const auto& id : result.context.common) {
      auto old_it = result.context.old_realization.truth.find(id);
      if (old_it != result.context.old_realization.truth.end() && old_it->second != mu2.truth.at(id)) {
        flipped.insert(id);
      }
    }
    Json out = {{"realizationId", new_rid},
                {"realization", realization_doc(mu2, new_hash)},
                {"criterion", to_string(criterion.kind)},
                {"criterionValue", detail::rational_value(result.criterion_value)},
                {"objectiveValues", objective_values(all, result.optimum.values)},
                {"values", value_map(result.objective_values)},
                {"newlySatisfiedTasks", detail::rational_value(change_effort(task_ctx, mu2))},
                {"diff",
                 {{"common", ids_value(result.context.common)},
                  {"added", ids_value(result.context.added)},
                  {"removed", ids_value(result.context.removed)},
                  {"flipped", ids_value(flipped)}}},
                {"stats", detail::stats_value(result.stats)}};
    return json_response(200, out);
  }

  HttpResponse route(const HttpRequest& req) {
    std::vector<std::string> parts;
    std::stringstream ss(req.path);
    for (std::string part; std::getline(ss, part, '/');) {
      if (!part.empty()) parts.push_back(part);
    }
    if (parts.empty() || parts[0] != "api") throw HttpError{404, "no route for " + req.path};
    auto s = session(req.session);
    const std::string& m = req.method;
    auto method_check = [&](const char* expected) {
      if (m != expected) throw HttpError{405, "method " + m + " not allowed on " + req.path};
    };
    if (parts.size() == 2 && parts[1] == "health") {
      method_check("GET");
      return json_response(200, {{"status", "ok"}});
    }
    if (parts.size() == 2 && parts[1] == "models") {
      method_check("POST");
      return create_model(*s, req);
    }
    if (parts.size() == 3 && parts[1] == "models") {
      method_check("GET");
      return {200, "application/json", to_json(model_copy(*s, parts[2]))};
    }
    if (parts.size() == 4 && parts[1] == "models") {
      method_check("POST");
      const std::string& id = parts[2];
      const std::string& action = parts[3];
      Json body = action == "export-smt2" && req.body.empty() ? Json::object() : parse_body(req);
      if (action == "assertions") return set_assertion(*s, id, body);
      if (action == "solve") return solve(*s, id, body);
      if (action == "enumerate") return enumerate(*s, id, body);
      if (action == "diagnose") return diagnose(*s, id, body);
      if (action == "export-smt2") return export_smt2(*s, id, body);
    }
    if (parts.size() == 2 && parts[1] == "evolve") {
      method_check("POST");
      return evolve(*s, parse_body(req));
    }
    if (parts.size() == 2 && parts[1] == "realizations") {
      method_check("POST");
      return upload_realization(*s, parse_body(req));
    }
    if (parts.size() == 3 && parts[1] == "realizations") {
      method_check("GET");
      return get_realization(*s, parts[2]);
    }
    throw HttpError{404, "no route for " + req.path};
  }
};

Service::Service(ServiceOptions options) : impl_(std::make_unique<Impl>()) { impl_->options = std::move(options); }
Service::~Service() = default;

const ServiceOptions& Service::options() const { return impl_->options; }

std::size_t Service::session_count() {
  std::lock_guard lock(impl_->sessions_mutex);
  return impl_->sessions.size();
}

HttpResponse Service::handle(const HttpRequest& request) {
  auto error = [](int status, const std::string& message, Json extra = Json::object()) {
    extra["error"] = message;
    return json_response(status, extra);
  };
  try {
    return impl_->route(request);
  } catch (const HttpError& e) {
    return error(e.status, e.message, e.extra);
  } catch (const Unrealizable& e) {
    return error(422, e.what(), {{"status", "unrealizable"}, {"core", e.core()}});
  } catch (const Unbounded& e) {
    return error(422, e.what(), {{"status", "unbounded"}});
  } catch (const InfimumNotAttained& e) {
    return error(422, e.what(), {{"status", "infimumNotAttained"}});
  } catch (const ResourceLimit& e) {
    return error(503, e.what(), {{"status", "resourceLimit"}});
  } catch (const InvalidModel& e) {
    return error(400, e.what());
  } catch (const nlohmann::json::exception& e) {
    return error(400, std::string("bad request body: ") + e.what());
  } catch (const std::exception& e) {
    return error(500, std::string("internal error: ") + e.what());
  }
}

struct HttpServer::Impl {
  Service& service;
  httplib::Server server;
  explicit Impl(Service& s) : service(s) {}
};

HttpServer::HttpServer(Service& service) : impl_(std::make_unique<Impl>(service)) {
  auto forward = [this](const httplib::Request& req, httplib::Response& res) {
    HttpRequest r;
    r.method = req.method;
    r.path = req.path;
    r.body = req.body;
    r.content_type = req.get_header_value("Content-Type");
    if (req.has_header("X-Session-Id")) r.session = req.get_header_value("X-Session-Id");
    HttpResponse out = impl_->service.handle(r);
    res.status = out.status;
    res.set_content(out.body, out.content_type);
  };
  auto& srv = impl_->server;
  srv.Get(R"(/api/.*)", forward);
  srv.Post(R"(/api/.*)", forward);
  srv.Options(R"(/api/.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });
  std::string origin = service.options().cors_origin;
  srv.set_post_routing_handler([origin](const httplib::Request&, httplib::Response& res) {
    res.set_header("Access-Control-Allow-Origin", origin);
    res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
    res.set_header("Access-Control-Allow-Headers", "Content-Type, X-Session-Id");
  });
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
  if (port == 0) return impl_->server.bind_to_any_port(host);
  return impl_->server.bind_to_port(host, port) ? port : -1;
}

bool HttpServer::listen() { return impl_->server.listen_after_bind(); }

void HttpServer::stop() { impl_->server.stop(); }

}  // namespace cgm
