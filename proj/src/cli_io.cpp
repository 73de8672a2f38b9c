#include "retroatom/cli_io.hpp"

#include <cstdio>
#include <stdexcept>
#include <utility>
#include <vector>

namespace retroatom::cli {

namespace {

Complex complex_from_json(const Json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_array() || j[key].size() != 2 ||
      !j[key][0].is_number() || !j[key][1].is_number()) {
    throw std::invalid_argument(std::string("operator JSON: key '") + key +
                                "' must be a [re, im] number pair");
  }
  return {j[key][0].get<double>(), j[key][1].get<double>()};
}

double parse_suffix_number(const std::string& spec, const std::string& prefix) {
  const std::string text = spec.substr(prefix.size());
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("cannot parse number in '" + spec + "'");
  }
  if (used != text.size()) {
    throw std::invalid_argument("trailing characters in '" + spec + "'");
  }
  return value;
}

bool looks_like_json(const std::string& spec) {
  const std::size_t pos = spec.find_first_not_of(" \t");
  return pos != std::string::npos && (spec[pos] == '{' || spec[pos] == '[');
}

Json parse_json(const std::string& spec) {
  try {
    return Json::parse(spec);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("invalid JSON: ") + e.what());
  }
}

}  // namespace

Operator2 operator_from_json(const Json& j) {
  if (!j.is_object()) {
    throw std::invalid_argument("operator JSON must be an object");
  }
  return {complex_from_json(j, "ee"), complex_from_json(j, "eg"),
          complex_from_json(j, "ge"), complex_from_json(j, "gg")};
}

Json operator_to_json(const Operator2& op) {
  Json j;
  j["ee"] = {op.ee().real(), op.ee().imag()};
  j["eg"] = {op.eg().real(), op.eg().imag()};
  j["ge"] = {op.ge().real(), op.ge().imag()};
  j["gg"] = {op.gg().real(), op.gg().imag()};
  return j;
}

std::string fmt12(double x) {
  if (x == 0.0) x = 0.0;  // drop the sign of negative zero
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

PomElement resolve_pom(const std::string& spec,
                       const std::optional<ChannelParams>& params) {
  if (looks_like_json(spec)) {
    return PomElement(operator_from_json(parse_json(spec)), "custom");
  }
  if (spec == "excited") {
    return PomElement(Operator2::ketbra(kExcited, kExcited), "excited");
  }
  if (spec == "ground") {
    return PomElement(Operator2::ketbra(kGround, kGround), "ground");
  }
  if (spec == "plus") {
    return PomElement(0.5 * (Operator2::identity() + pauli(1)), "plus");
  }
  if (spec == "sigma2-plus") {
    return PomElement(0.5 * (Operator2::identity() + pauli(2)), "sigma2-plus");
  }
  if (spec.rfind("theta:", 0) == 0) {
    return projector_theta(parse_suffix_number(spec, "theta:"));
  }
  if (spec == "steady-state") {
    if (!params.has_value() || params->kind != ChannelKind::Driven) {
      throw std::invalid_argument(
          "pom preset 'steady-state' requires the driven channel");
    }
    return PomElement(from_bloch(driven_steady_state(params->gamma, params->v)).op(),
                      "steady-state");
  }
  throw std::invalid_argument("unknown pom preset '" + spec + "'");
}

PreparationEnsemble resolve_ensemble(const std::string& spec) {
  if (looks_like_json(spec)) {
    const Json j = parse_json(spec);
    if (!j.is_array() || j.empty()) {
      throw std::invalid_argument("ensemble JSON must be a non-empty array");
    }
    std::vector<PreparationEnsemble::Item> items;
    for (const Json& entry : j) {
      if (!entry.is_object() || !entry.contains("label") ||
          !entry["label"].is_string() || !entry.contains("op")) {
        throw std::invalid_argument(
            "ensemble JSON entries must be {\"label\": ..., \"op\": {...}}");
      }
      items.emplace_back(entry["label"].get<std::string>(),
                         operator_from_json(entry["op"]));
    }
    return PreparationEnsemble(std::move(items));
  }
  if (spec == "unbiased-eg") {
    return PreparationEnsemble({{"e", 0.5 * Operator2::ketbra(kExcited, kExcited)},
                                {"g", 0.5 * Operator2::ketbra(kGround, kGround)}});
  }
  if (spec.rfind("biased-e-plus:", 0) == 0) {
    const double p = parse_suffix_number(spec, "biased-e-plus:");
    if (p < 0.0 || p > 1.0) {
      throw std::invalid_argument("prior in 'biased-e-plus:<p>' must lie in [0, 1]");
    }
    return PreparationEnsemble(
        {{"e", p * Operator2::ketbra(kExcited, kExcited)},
         {"plus", (1.0 - p) * (0.5 * (Operator2::identity() + pauli(1)))}});
  }
  throw std::invalid_argument("unknown ensemble preset '" + spec + "'");
}

}  // namespace retroatom::cli
