// cli_io.hpp — JSON operator schema, POM/ensemble presets and numeric
// formatting shared by the command-line front end and its tests
#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "retroatom/channel.hpp"
#include "retroatom/retrodiction.hpp"
#include "retroatom/states.hpp"

namespace retroatom::cli {

using Json = nlohmann::ordered_json;

// {"ee":[re,im],"eg":[re,im],"ge":[re,im],"gg":[re,im]}
Operator2 operator_from_json(const Json& j);
Json operator_to_json(const Operator2& op);

// Fixed 12-significant-digit formatting for CSV payloads; negative zero is
// folded into zero so identical values always print identically.
std::string fmt12(double x);

// Resolve a --pom argument: a preset name ("excited", "ground", "plus",
// "sigma2-plus", "theta:<radians>", "steady-state") or inline JSON. The
// steady-state preset needs the driven channel parameters.
PomElement resolve_pom(const std::string& spec,
                       const std::optional<ChannelParams>& params);

// Resolve an --ensemble argument: "unbiased-eg", "biased-e-plus:<p>" or an
// inline JSON array of {"label": ..., "op": {...}}.
PreparationEnsemble resolve_ensemble(const std::string& spec);

}  // namespace retroatom::cli
