#include "opm/model_io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "opm/rational.hpp"

namespace opm {

namespace {

double number(const Json& v, const std::string& where) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    try {
      return parse_rational(v.get<std::string>()).get_d();
    } catch (const Error&) {
    }
  }
  throw Error(ErrorCode::ParseError, "expected a number at " + where);
}

std::vector<std::string> strings(const Json& v, const std::string& where) {
  if (!v.is_array()) throw Error(ErrorCode::ParseError, "expected a list of strings at " + where);
  std::vector<std::string> out;
  for (const auto& s : v) {
    if (!s.is_string()) throw Error(ErrorCode::ParseError, "expected a string at " + where);
    out.push_back(s.get<std::string>());
  }
  return out;
}

}  // namespace

RawModel parse_model_json(const Json& j) {
  static const std::set<std::string> known{"outcomes", "tests", "pure_states", "group",
                                           "base_state", "seed", "kind"};
  if (!j.is_object()) throw Error(ErrorCode::ParseError, "model file must hold a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (!known.count(key)) {
      throw Error(ErrorCode::UnknownField, "unknown field '" + key + "'", Json{{"field", key}});
    }
  }
  for (const char* required : {"outcomes", "tests", "pure_states"}) {
    if (!j.contains(required)) {
      throw Error(ErrorCode::ParseError, std::string("missing field '") + required + "'");
    }
  }
  RawModel raw;
  raw.outcomes = strings(j["outcomes"], "outcomes");
  if (!j["tests"].is_array()) throw Error(ErrorCode::ParseError, "tests must be a list");
  for (const auto& t : j["tests"]) raw.tests.push_back(strings(t, "tests"));
  if (!j["pure_states"].is_array()) throw Error(ErrorCode::ParseError, "pure_states must be a list");
  for (size_t i = 0; i < j["pure_states"].size(); ++i) {
    const auto& s = j["pure_states"][i];
    if (!s.is_object()) throw Error(ErrorCode::ParseError, "each pure state must be an object");
    std::map<std::string, double> values;
    for (const auto& [name, v] : s.items()) {
      values[name] = number(v, "pure_states[" + std::to_string(i) + "]." + name);
    }
    raw.pure_states.push_back(std::move(values));
  }
  if (j.contains("group")) {
    const auto& g = j["group"];
    if (g.is_string()) {
      raw.analytic_group = g.get<std::string>();
    } else if (g.is_array()) {
      std::vector<std::map<std::string, std::string>> perms;
      for (const auto& p : g) {
        if (!p.is_object()) throw Error(ErrorCode::ParseError, "group elements must be objects");
        std::map<std::string, std::string> mp;
        for (const auto& [from, to] : p.items()) {
          if (!to.is_string()) throw Error(ErrorCode::ParseError, "permutation targets must be strings");
          mp[from] = to.get<std::string>();
        }
        perms.push_back(std::move(mp));
      }
      raw.permutations = std::move(perms);
    } else {
      throw Error(ErrorCode::ParseError, "group must be a list of permutations or a group name");
    }
  }
  if (j.contains("base_state")) {
    if (!j["base_state"].is_number_integer()) throw Error(ErrorCode::ParseError, "base_state must be an integer");
    raw.base_state = j["base_state"].get<int>();
  }
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) throw Error(ErrorCode::ParseError, "seed must be a non-negative integer");
    raw.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("kind")) {
    if (!j["kind"].is_string()) throw Error(ErrorCode::ParseError, "kind must be a string");
    raw.kind = j["kind"].get<std::string>();
  }
  return raw;
}

RawModel parse_model_text(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::ParseError, std::string("malformed JSON: ") + e.what());
  }
  return parse_model_json(j);
}

RawModel read_model_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path + "'", Json{{"path", path}});
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_model_text(ss.str());
}

Json model_to_json(const Model& model) {
  RawModel raw = to_raw(model);
  Json j;
  j["outcomes"] = raw.outcomes;
  j["tests"] = raw.tests;
  Json states = Json::array();
  for (const auto& s : raw.pure_states) {
    Json o = Json::object();
    for (const auto& [name, v] : s) {
      auto q = rationalize(v);
      if (q && q->get_den() != 1) o[name] = to_string(*q);
      else o[name] = v;
    }
    states.push_back(o);
  }
  j["pure_states"] = states;
  if (raw.permutations) j["group"] = *raw.permutations;
  if (raw.analytic_group) j["group"] = *raw.analytic_group;
  if (raw.base_state) j["base_state"] = *raw.base_state;
  if (raw.seed) j["seed"] = *raw.seed;
  if (raw.kind) j["kind"] = *raw.kind;
  return j;
}

}  // namespace opm
