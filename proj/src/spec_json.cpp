#include "dirac_gap/spec_json.hpp"

#include <fstream>
#include <sstream>

#include "dirac_gap/error.hpp"

namespace dirac_gap {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw Error(ErrorCode::InvalidSpec, where + ": " + what);
}

double number(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) fail(where, std::string("missing '") + key + "'");
  const json& v = j.at(key);
  if (!v.is_number()) fail(where, std::string("'") + key + "' must be a number");
  return v.get<double>();
}

std::vector<double> numbers(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key) || !j.at(key).is_array()) fail(where, std::string("'") + key + "' must be an array");
  std::vector<double> out;
  for (const auto& v : j.at(key)) {
    if (!v.is_number()) fail(where, std::string("'") + key + "' must hold numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

ScalarField parse_field(const json& j, const std::string& where) {
  if (!j.is_object()) fail(where, "descriptor must be an object");
  if (!j.contains("kind") || !j.at("kind").is_string()) fail(where, "missing string 'kind'");
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "constant") return ScalarField::constant(number(j, "value", where));
  if (kind == "expwell") {
    return ScalarField::exp_well(number(j, "amplitude", where), number(j, "rate", where));
  }
  if (kind == "step") {
    const auto window = numbers(j, "window", where);
    if (window.size() != 2) fail(where, "'window' must be [a, b]");
    if (!j.contains("pieces") || !j.at("pieces").is_array()) fail(where, "'pieces' must be an array");
    std::vector<field::StepPiece> pieces;
    for (const auto& p : j.at("pieces")) {
      if (p.is_array() && p.size() == 3 && p[0].is_number() && p[1].is_number() && p[2].is_number()) {
        pieces.push_back({p[0].get<double>(), p[1].get<double>(), p[2].get<double>()});
      } else if (p.is_object()) {
        pieces.push_back({number(p, "a", where), number(p, "b", where), number(p, "value", where)});
      } else {
        fail(where, "each piece must be [a, b, value] or {a, b, value}");
      }
    }
    return ScalarField::step(window[0], window[1], std::move(pieces), number(j, "tail", where));
  }
  if (kind == "sampled") {
    return ScalarField::sampled(numbers(j, "x", where), numbers(j, "y", where),
                                number(j, "limit_left", where), number(j, "limit_right", where));
  }
  if (kind == "sum") {
    if (!j.contains("terms") || !j.at("terms").is_array()) fail(where, "'terms' must be an array");
    std::vector<ScalarField> terms;
    std::size_t i = 0;
    for (const auto& t : j.at("terms")) {
      terms.push_back(parse_field(t, where + ".terms[" + std::to_string(i++) + "]"));
    }
    return ScalarField::sum(std::move(terms));
  }
  fail(where, "unknown kind '" + kind + "'");
}

Domain parse_domain(const json& j) {
  if (j.is_string() && j.get<std::string>() == "full") return Domain::full_line();
  if (j.is_object() && j.contains("half")) {
    const json& h = j.at("half");
    if (h.is_object() && h.contains("alpha") && h.at("alpha").is_string()) {
      const std::string a = h.at("alpha").get<std::string>();
      if (a == "0") return Domain::half_line(HalfLineAlpha::Zero);
      if (a == "pi/2") return Domain::half_line(HalfLineAlpha::HalfPi);
      fail("domain", "alpha must be \"0\" or \"pi/2\", got \"" + a + "\"");
    }
  }
  fail("domain", "expected \"full\" or {\"half\":{\"alpha\":\"0\"|\"pi/2\"}}");
}

}  // namespace

ScalarField field_from_json(const json& j) { return parse_field(j, "field"); }

json field_to_json(const ScalarField& f) {
  struct Visitor {
    json operator()(const field::Constant& c) const { return {{"kind", "constant"}, {"value", c.value}}; }
    json operator()(const field::Step& s) const {
      json pieces = json::array();
      for (const auto& p : s.pieces) pieces.push_back({p.a, p.b, p.value});
      return {{"kind", "step"}, {"window", {s.window_lo, s.window_hi}}, {"pieces", pieces}, {"tail", s.tail}};
    }
    json operator()(const field::ExpWell& e) const {
      return {{"kind", "expwell"}, {"amplitude", e.amplitude}, {"rate", e.rate}};
    }
    json operator()(const field::Sampled& s) const {
      return {{"kind", "sampled"}, {"x", s.x}, {"y", s.y}, {"limit_left", s.limit_left},
              {"limit_right", s.limit_right}};
    }
    json operator()(const field::Sum& s) const {
      json terms = json::array();
      for (const auto& t : s.terms) terms.push_back(field_to_json(t));
      return {{"kind", "sum"}, {"terms", terms}};
    }
  };
  return std::visit(Visitor{}, f.node());
}

PotentialSpec spec_from_json(const json& j) {
  if (!j.is_object()) fail("spec", "top level must be an object");
  for (const char* key : {"m1", "m2", "w"}) {
    if (!j.contains(key)) fail("spec", std::string("missing '") + key + "'");
  }
  PotentialSpec spec;
  spec.m1 = parse_field(j.at("m1"), "m1");
  spec.m2 = parse_field(j.at("m2"), "m2");
  spec.w = parse_field(j.at("w"), "w");
  spec.domain = j.contains("domain") ? parse_domain(j.at("domain")) : Domain::full_line();
  return spec;
}

json spec_to_json(const PotentialSpec& spec) {
  json j{{"m1", field_to_json(spec.m1)}, {"m2", field_to_json(spec.m2)}, {"w", field_to_json(spec.w)}};
  if (spec.domain.is_half_line()) {
    j["domain"] = {{"half", {{"alpha", spec.domain.alpha == HalfLineAlpha::Zero ? "0" : "pi/2"}}}};
  } else {
    j["domain"] = "full";
  }
  return j;
}

PotentialSpec parse_spec_string(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::InvalidSpec, std::string("JSON parse error: ") + e.what());
  }
  return spec_from_json(j);
}

PotentialSpec load_spec_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InvalidSpec, "cannot open spec file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_spec_string(buf.str());
}

}  // namespace dirac_gap
