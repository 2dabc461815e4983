#include "cgm/objective.hpp"

namespace cgm {

Rational ObjectiveTerm::evaluate(const Assignment& assignment) const {
  Rational sum = constant + cgm::evaluate(numeric, assignment);
  for (const auto& [f, c] : indicators) {
    if (cgm::evaluate(f, assignment)) sum += c;
  }
  return sum;
}

ObjectiveTerm& ObjectiveTerm::operator*=(const Rational& factor) {
  for (auto& entry : indicators) entry.second *= factor;
  numeric *= factor;
  constant *= factor;
  return *this;
}

ObjectiveTerm& ObjectiveTerm::operator+=(const ObjectiveTerm& other) {
  indicators.insert(indicators.end(), other.indicators.begin(), other.indicators.end());
  numeric += other.numeric;
  constant += other.constant;
  return *this;
}

namespace {

const char* tag_name(ObjectiveTag tag) {
  switch (tag) {
    case ObjectiveTag::PenaltyMinusReward: return "penaltyMinusReward";
    case ObjectiveTag::NumUnsatRequirements: return "numUnsatRequirements";
    case ObjectiveTag::NumSatTasks: return "numSatTasks";
    case ObjectiveTag::NumUnsatPrefs: return "numUnsatPrefs";
    default: return "";
  }
}

}  // namespace

ObjectiveSpec build_objective(const CgmModel& model, ObjectiveTag tag, const std::string& attribute) {
  ModelIndex index(model);
  ObjectiveSpec spec;
  spec.tag = tag;
  spec.name = tag_name(tag);
  ObjectiveTerm& t = spec.term;
  switch (tag) {
    case ObjectiveTag::PenaltyMinusReward:
      for (const auto& id : index.tasks()) {
        const Element* e = model.find_element(id);
        if (e->penalty != 0) t.indicators.emplace_back(Formula::prop(id), e->penalty);
      }
      for (const auto& id : index.requirements()) {
        const Element* e = model.find_element(id);
        if (e->reward != 0) t.indicators.emplace_back(Formula::prop(id), -e->reward);
      }
      break;
    case ObjectiveTag::NumUnsatRequirements:
      for (const auto& id : index.nice_to_have()) t.indicators.emplace_back(!Formula::prop(id), 1);
      break;
    case ObjectiveTag::NumSatTasks:
      for (const auto& id : index.tasks()) t.indicators.emplace_back(Formula::prop(id), 1);
      break;
    case ObjectiveTag::NumUnsatPrefs:
      for (const auto& edge : model.edges) {
        if (const auto* p = std::get_if<Preference>(&edge)) {
          t.indicators.emplace_back(!Formula::prop(p->preferred) && Formula::prop(p->other), 1);
        }
      }
      break;
    case ObjectiveTag::Attribute:
      if (!model.has_attribute(attribute)) throw UnknownAttribute(attribute);
      spec.name = attribute;
      t.numeric = LinearTerm::variable(attribute);
      break;
    case ObjectiveTag::Custom:
      throw UnknownObjective("custom");
  }
  return spec;
}

ObjectiveSpec build_objective(const CgmModel& model, const std::string& name, Polarity polarity) {
  static const std::pair<const char*, ObjectiveTag> kBuiltins[] = {
      {"penaltyMinusReward", ObjectiveTag::PenaltyMinusReward},
      {"numUnsatRequirements", ObjectiveTag::NumUnsatRequirements},
      {"numSatTasks", ObjectiveTag::NumSatTasks},
      {"numUnsatPrefs", ObjectiveTag::NumUnsatPrefs},
  };
  ObjectiveSpec spec;
  bool found = false;
  for (const auto& [builtin, tag] : kBuiltins) {
    if (name == builtin) {
      spec = build_objective(model, tag);
      found = true;
    }
  }
  if (!found) {
    if (!model.has_attribute(name)) throw UnknownObjective(name);
    spec = build_objective(model, ObjectiveTag::Attribute, name);
  }
  spec.polarity = polarity;
  return spec;
}

std::vector<ObjectiveSpec> default_objectives(const CgmModel& model) {
  std::vector<ObjectiveSpec> out;
  for (const auto& ref : model.objectives) out.push_back(build_objective(model, ref.name, ref.polarity));
  if (out.empty()) out.push_back(build_objective(model, ObjectiveTag::PenaltyMinusReward));
  return out;
}

std::vector<ObjectiveSpec> parse_objective_list(const CgmModel& model, std::string_view text) {
  if (text.substr(0, 4) == "lex:") text.remove_prefix(4);
  std::vector<ObjectiveSpec> out;
  if (text.empty()) return out;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t comma = text.find(',', start);
    if (comma == std::string_view::npos) comma = text.size();
    std::string token(text.substr(start, comma - start));
    Polarity polarity = Polarity::Minimize;
    if (token.rfind("max:", 0) == 0 || token.rfind("min:", 0) == 0) {
      polarity = token[1] == 'a' ? Polarity::Maximize : Polarity::Minimize;
      token.erase(0, 4);
    }
    if (token.empty()) throw UnknownObjective(token);
    out.push_back(build_objective(model, token, polarity));
    start = comma + 1;
  }
  return out;
}

std::vector<std::string> builtin_objective_names(const CgmModel& model) {
  std::vector<std::string> out{"penaltyMinusReward", "numUnsatRequirements", "numSatTasks", "numUnsatPrefs"};
  out.insert(out.end(), model.attributes.begin(), model.attributes.end());
  return out;
}

}  // namespace cgm
