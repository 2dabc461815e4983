#include <openssl/evp.h>

#include <cstdio>

#include "json_detail.hpp"

namespace cgm {
namespace detail {

namespace {

const Json& field(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) throw JsonError(where + ": missing field '" + key + "'");
  return j.at(key);
}

std::string string_field(const Json& j, const char* key, const std::string& where) {
  const Json& v = field(j, key, where);
  if (!v.is_string()) throw JsonError(where + ": field '" + key + "' must be a string");
  return v.get<std::string>();
}

const Json& array_field(const Json& j, const char* key, const std::string& where) {
  static const Json kEmpty = Json::array();
  if (!j.contains(key)) return kEmpty;
  const Json& v = j.at(key);
  if (!v.is_array()) throw JsonError(where + ": field '" + key + "' must be an array");
  return v;
}

Mark mark_from(const std::string& s, const std::string& where) {
  if (s == "satisfied") return Mark::Satisfied;
  if (s == "denied") return Mark::Denied;
  throw JsonError(where + ": mark must be \"satisfied\" or \"denied\"");
}

Json element_value(const Element& e) {
  Json attrs = Json::object();
  for (const auto& [name, v] : e.attr_values) {
    attrs[name] = {{"satisfied", rational_value(v.when_satisfied)}, {"denied", rational_value(v.when_denied)}};
  }
  return {{"id", e.id},
          {"kind", to_string(e.kind)},
          {"label", e.label},
          {"reward", rational_value(e.reward)},
          {"penalty", rational_value(e.penalty)},
          {"attrValues", attrs}};
}

Element element_from(const Json& j) {
  Element e;
  e.id = string_field(j, "id", "element");
  std::string where = "element '" + e.id + "'";
  std::string kind = j.contains("kind") ? string_field(j, "kind", where) : "goal";
  if (kind == "goal" || kind == "task") {
    e.kind = ElementKind::Goal;
  } else if (kind == "assumption") {
    e.kind = ElementKind::Assumption;
  } else {
    throw JsonError(where + ": unknown kind '" + kind + "'");
  }
  if (j.contains("label")) e.label = string_field(j, "label", where);
  if (j.contains("reward")) e.reward = rational_from(j.at("reward"), where + " reward");
  if (j.contains("penalty")) e.penalty = rational_from(j.at("penalty"), where + " penalty");
  if (j.contains("attrValues")) {
    const Json& attrs = j.at("attrValues");
    if (!attrs.is_object()) throw JsonError(where + ": attrValues must be an object");
    for (const auto& [name, v] : attrs.items()) {
      AttrValue av;
      av.when_satisfied = rational_from(field(v, "satisfied", where), where + " " + name);
      if (v.contains("denied")) av.when_denied = rational_from(v.at("denied"), where + " " + name);
      e.attr_values[name] = av;
    }
  }
  return e;
}

Json refinement_value(const Refinement& r) {
  return {{"id", r.id}, {"target", r.target}, {"sources", r.sources}};
}

Refinement refinement_from(const Json& j) {
  Refinement r;
  r.id = string_field(j, "id", "refinement");
  std::string where = "refinement '" + r.id + "'";
  r.target = string_field(j, "target", where);
  for (const auto& s : array_field(j, "sources", where)) {
    if (!s.is_string()) throw JsonError(where + ": sources must be strings");
    r.sources.push_back(s.get<std::string>());
  }
  return r;
}

Json edge_value(const RelationEdge& edge) {
  return std::visit(
      [](const auto& e) -> Json {
        using T = std::decay_t<decltype(e)>;
        if constexpr (std::is_same_v<T, Contribution>) return {{"kind", "contribution"}, {"source", e.source}, {"target", e.target}};
        if constexpr (std::is_same_v<T, Conflict>) return {{"kind", "conflict"}, {"a", e.a}, {"b", e.b}};
        if constexpr (std::is_same_v<T, Binding>) return {{"kind", "binding"}, {"first", e.first}, {"second", e.second}};
        if constexpr (std::is_same_v<T, Preference>) {
          return {{"kind", "preference"}, {"preferred", e.preferred}, {"other", e.other}};
        }
      },
      edge);
}

RelationEdge edge_from(const Json& j) {
  std::string kind = string_field(j, "kind", "edge");
  std::string where = kind + " edge";
  if (kind == "contribution") return Contribution{string_field(j, "source", where), string_field(j, "target", where)};
  if (kind == "conflict") return make_conflict(string_field(j, "a", where), string_field(j, "b", where));
  if (kind == "binding") return Binding{string_field(j, "first", where), string_field(j, "second", where)};
  if (kind == "preference") return Preference{string_field(j, "preferred", where), string_field(j, "other", where)};
  throw JsonError("unknown edge kind '" + kind + "'");
}

Formula constraint_from(const Json& j) {
  if (!j.is_string()) throw JsonError("constraints must be formula strings");
  std::string err;
  auto f = parse_formula(j.get<std::string>(), &err);
  if (!f) throw JsonError("constraint '" + j.get<std::string>() + "': " + err);
  return *f;
}

}  // namespace

Json rational_value(const Rational& r) { return to_string(r); }

Rational rational_from(const Json& j, const std::string& where) {
  if (j.is_number_integer()) return Rational(std::to_string(j.get<long long>()));
  if (!j.is_string()) throw JsonError(where + ": rational must be a \"p/q\" string");
  std::string err;
  auto r = parse_rational(j.get<std::string>(), &err);
  if (!r) throw JsonError(where + ": " + err);
  return *r;
}

Json model_value(const CgmModel& model) {
  Json j;
  j["schema"] = kModelSchema;
  j["elements"] = Json::array();
  for (const auto& e : model.elements) j["elements"].push_back(element_value(e));
  j["refinements"] = Json::array();
  for (const auto& r : model.refinements) j["refinements"].push_back(refinement_value(r));
  j["edges"] = Json::array();
  for (const auto& e : model.edges) j["edges"].push_back(edge_value(e));
  j["attributes"] = Json::array();
  for (const auto& a : model.attributes) j["attributes"].push_back({{"name", a}});
  j["constraints"] = Json::array();
  for (const auto& c : model.constraints) j["constraints"].push_back(to_string(c));
  j["assertions"] = Json::array();
  for (const auto& [id, mark] : model.assertions) j["assertions"].push_back({{"element", id}, {"mark", to_string(mark)}});
  j["objectives"] = Json::array();
  for (const auto& o : model.objectives) j["objectives"].push_back({{"name", o.name}, {"polarity", to_string(o.polarity)}});
  return j;
}

CgmModel model_from(const Json& j) {
  if (!j.is_object()) throw JsonError("model document must be a JSON object");
  if (j.contains("schema") && j.at("schema") != kModelSchema) {
    throw JsonError("unsupported schema " + j.at("schema").dump());
  }
  CgmModel m;
  for (const auto& e : array_field(j, "elements", "model")) m.elements.push_back(element_from(e));
  for (const auto& r : array_field(j, "refinements", "model")) m.refinements.push_back(refinement_from(r));
  for (const auto& e : array_field(j, "edges", "model")) m.edges.push_back(edge_from(e));
  for (const auto& a : array_field(j, "attributes", "model")) {
    m.attributes.push_back(a.is_string() ? a.get<std::string>() : string_field(a, "name", "attribute"));
  }
  for (const auto& c : array_field(j, "constraints", "model")) m.constraints.push_back(constraint_from(c));
  for (const auto& a : array_field(j, "assertions", "model")) {
    std::string id = string_field(a, "element", "assertion");
    if (m.assertions.count(id)) throw JsonError("element '" + id + "' is asserted twice");
    m.assertions[id] = mark_from(string_field(a, "mark", "assertion"), "assertion on '" + id + "'");
  }
  for (const auto& o : array_field(j, "objectives", "model")) {
    ObjectiveRef ref;
    ref.name = string_field(o, "name", "objective");
    if (o.contains("polarity")) {
      std::string p = string_field(o, "polarity", "objective");
      if (p != "minimize" && p != "maximize") throw JsonError("objective polarity must be minimize or maximize");
      ref.polarity = p == "maximize" ? Polarity::Maximize : Polarity::Minimize;
    }
    m.objectives.push_back(ref);
  }
  return m;
}

Json realization_value(const Realization& r) {
  Json bools = Json::object();
  for (const auto& [k, v] : r.truth) bools[k] = v;
  Json nums = Json::object();
  for (const auto& [k, v] : r.values) nums[k] = rational_value(v);
  return {{"boolAssign", bools}, {"numAssign", nums}};
}

Realization realization_from(const Json& bool_assign, const Json& num_assign) {
  Realization r;
  if (!bool_assign.is_null()) {
    if (!bool_assign.is_object()) throw JsonError("boolAssign must be an object");
    for (const auto& [k, v] : bool_assign.items()) {
      if (!v.is_boolean()) throw JsonError("boolAssign." + k + " must be a boolean");
      r.truth[k] = v.get<bool>();
    }
  }
  if (!num_assign.is_null()) {
    if (!num_assign.is_object()) throw JsonError("numAssign must be an object");
    for (const auto& [k, v] : num_assign.items()) r.values[k] = rational_from(v, "numAssign." + k);
  }
  return r;
}

Json delta_value(const std::vector<MutationStep>& delta) {
  Json out = Json::array();
  for (const auto& step : delta) {
    out.push_back(std::visit(
        [](const auto& s) -> Json {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, delta::AddElement>) return {{"op", "addElement"}, {"element", element_value(s.element)}};
          if constexpr (std::is_same_v<T, delta::RemoveElement>) return {{"op", "removeElement"}, {"id", s.id}};
          if constexpr (std::is_same_v<T, delta::ReplaceElement>) {
            return {{"op", "replaceElement"}, {"element", element_value(s.element)}};
          }
          if constexpr (std::is_same_v<T, delta::AddRefinement>) {
            return {{"op", "addRefinement"}, {"refinement", refinement_value(s.refinement)}};
          }
          if constexpr (std::is_same_v<T, delta::RemoveRefinement>) return {{"op", "removeRefinement"}, {"id", s.id}};
          if constexpr (std::is_same_v<T, delta::AddSource>) {
            return {{"op", "addSource"}, {"refinement", s.refinement}, {"element", s.element}};
          }
          if constexpr (std::is_same_v<T, delta::RemoveSource>) {
            return {{"op", "removeSource"}, {"refinement", s.refinement}, {"element", s.element}};
          }
          if constexpr (std::is_same_v<T, delta::AddEdge>) return {{"op", "addEdge"}, {"edge", edge_value(s.edge)}};
          if constexpr (std::is_same_v<T, delta::RemoveEdge>) return {{"op", "removeEdge"}, {"edge", edge_value(s.edge)}};
          if constexpr (std::is_same_v<T, delta::AddAttribute>) return {{"op", "addAttribute"}, {"name", s.name}};
          if constexpr (std::is_same_v<T, delta::RemoveAttribute>) return {{"op", "removeAttribute"}, {"name", s.name}};
          if constexpr (std::is_same_v<T, delta::AddConstraint>) {
            return {{"op", "addConstraint"}, {"constraint", to_string(s.constraint)}};
          }
          if constexpr (std::is_same_v<T, delta::RemoveConstraint>) {
            return {{"op", "removeConstraint"}, {"constraint", to_string(s.constraint)}};
          }
          if constexpr (std::is_same_v<T, delta::SetAssertion>) {
            return {{"op", "setAssertion"}, {"element", s.element}, {"mark", to_string(s.mark)}};
          }
          if constexpr (std::is_same_v<T, delta::ClearAssertion>) return {{"op", "clearAssertion"}, {"element", s.element}};
        },
        step));
  }
  return out;
}

std::vector<MutationStep> delta_from(const Json& j) {
  if (!j.is_array()) throw JsonError("delta must be a JSON array of steps");
  std::vector<MutationStep> out;
  for (const auto& s : j) {
    std::string op = string_field(s, "op", "delta step");
    std::string where = op + " step";
    if (op == "addElement") {
      out.push_back(delta::AddElement{element_from(field(s, "element", where))});
    } else if (op == "removeElement") {
      out.push_back(delta::RemoveElement{string_field(s, "id", where)});
    } else if (op == "replaceElement") {
      out.push_back(delta::ReplaceElement{element_from(field(s, "element", where))});
    } else if (op == "addRefinement") {
      out.push_back(delta::AddRefinement{refinement_from(field(s, "refinement", where))});
    } else if (op == "removeRefinement") {
      out.push_back(delta::RemoveRefinement{string_field(s, "id", where)});
    } else if (op == "addSource") {
      out.push_back(delta::AddSource{string_field(s, "refinement", where), string_field(s, "element", where)});
    } else if (op == "removeSource") {
      out.push_back(delta::RemoveSource{string_field(s, "refinement", where), string_field(s, "element", where)});
    } else if (op == "addEdge") {
      out.push_back(delta::AddEdge{edge_from(field(s, "edge", where))});
    } else if (op == "removeEdge") {
      out.push_back(delta::RemoveEdge{edge_from(field(s, "edge", where))});
    } else if (op == "addAttribute") {
      out.push_back(delta::AddAttribute{string_field(s, "name", where)});
    } else if (op == "removeAttribute") {
      out.push_back(delta::RemoveAttribute{string_field(s, "name", where)});
    } else if (op == "addConstraint") {
      out.push_back(delta::AddConstraint{constraint_from(field(s, "constraint", where))});
    } else if (op == "removeConstraint") {
      out.push_back(delta::RemoveConstraint{constraint_from(field(s, "constraint", where))});
    } else if (op == "setAssertion") {
      out.push_back(delta::SetAssertion{string_field(s, "element", where),
                                        mark_from(string_field(s, "mark", where), where)});
    } else if (op == "clearAssertion") {
      out.push_back(delta::ClearAssertion{string_field(s, "element", where)});
    } else {
      throw JsonError("unknown delta op '" + op + "'");
    }
  }
  return out;
}

Json stats_value(const SolveStats& stats) {
  return {{"decisions", stats.decisions},
          {"conflicts", stats.conflicts},
          {"theoryChecks", stats.theory_checks},
          {"elapsedMs", static_cast<double>(stats.elapsed.count()) / 1000.0}};
}

}  // namespace detail

using detail::Json;

ParseResult parse_json(std::string_view text, const std::string& file) {
  ParseResult result;
  auto fail = [&](const std::string& message) {
    ParseDiagnostic d;
    d.span.file = file;
    d.message = message;
    result.diagnostics.push_back(std::move(d));
    return result;
  };
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    return fail(e.what());
  }
  CgmModel model;
  try {
    model = detail::model_from(j);
  } catch (const JsonError& e) {
    return fail(e.what());
  }
  for (const auto& d : validate_structure(model)) {
    ParseDiagnostic pd;
    pd.span.file = file;
    pd.message = d.message;
    result.diagnostics.push_back(std::move(pd));
  }
  if (result.diagnostics.empty()) result.model = std::move(model);
  return result;
}

std::string to_json(const CgmModel& model, int indent) { return detail::model_value(model).dump(indent) + "\n"; }

std::string canonical_json(const CgmModel& model) { return detail::model_value(canonical(model)).dump(); }

std::string model_hash(const CgmModel& model) {
  std::string text = canonical_json(model);
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  EVP_Digest(text.data(), text.size(), digest, &length, EVP_sha256(), nullptr);
  std::string out = "sha256:";
  char hex[3];
  for (unsigned int i = 0; i < length; ++i) {
    std::snprintf(hex, sizeof hex, "%02x", digest[i]);
    out += hex;
  }
  return out;
}

std::string realization_to_json(const Realization& realization, const std::string& hash, int indent) {
  Json j = {{"schema", kRealizationSchema}, {"modelHash", hash}};
  Json body = detail::realization_value(realization);
  j["boolAssign"] = body["boolAssign"];
  j["numAssign"] = body["numAssign"];
  return j.dump(indent) + "\n";
}

RealizationDoc parse_realization_json(std::string_view text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw JsonError(e.what());
  }
  if (!j.is_object()) throw JsonError("realization document must be a JSON object");
  if (j.contains("schema") && j.at("schema") != kRealizationSchema) {
    throw JsonError("unsupported schema " + j.at("schema").dump());
  }
  RealizationDoc doc;
  if (j.contains("modelHash")) {
    if (!j.at("modelHash").is_string()) throw JsonError("modelHash must be a string");
    doc.model_hash = j.at("modelHash").get<std::string>();
  }
  doc.realization = detail::realization_from(j.value("boolAssign", Json()), j.value("numAssign", Json()));
  return doc;
}

std::string delta_to_json(const std::vector<MutationStep>& delta, int indent) {
  return detail::delta_value(delta).dump(indent) + "\n";
}

std::vector<MutationStep> parse_delta_json(std::string_view text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw JsonError(e.what());
  }
  return detail::delta_from(j);
}

}  // namespace cgm
