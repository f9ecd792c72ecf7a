// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 crowdbench authors
//
// JSON forms of the scenario, scoring and run configuration. Readers overlay
// the document onto a base value and reject unknown keys.

#pragma once

#include <string>

#include <json.hpp>

#include "bench.hpp"

namespace crowdbench {

using Json = nlohmann::json;

DensityPreset parse_preset(const std::string &name);
const char *preset_name(DensityPreset preset);

Json to_json(const ScenarioConfig &cfg);
Json to_json(const ScoringConfig &cfg);
Json to_json(const SmoothnessConfig &cfg);
Json to_json(const PolicySpec &spec);
Json to_json(const RunSpec &spec);

ScenarioConfig scenario_from_json(const Json &j, ScenarioConfig base);
ScoringConfig scoring_from_json(const Json &j, ScoringConfig base);
SmoothnessConfig smoothness_from_json(const Json &j, SmoothnessConfig base);
/// Accepts either a policy string ("orca", "external:<cmd>", ...) or an
/// object with "kind" and optional parameter blocks.
PolicySpec policy_from_json(const Json &j, PolicySpec base);

/// A top-level "preset" key, when present, selects the base scenario and
/// scoring before the rest of the document is applied.
RunSpec run_spec_from_json(const Json &j, RunSpec base);

/// Throws Error{Io} if the file cannot be read, Error{Config} if it is not
/// valid JSON; both messages carry the path.
Json load_json_file(const std::string &path);

/// Default run for a preset: preset scenario and scoring, defaults elsewhere.
RunSpec preset_run_spec(DensityPreset preset);

}  // namespace crowdbench
