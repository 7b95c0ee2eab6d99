#pragma once

#include <string>
#include <string_view>

#include <json.hpp>

#include "loclab/caps.hpp"
#include "loclab/lab.hpp"
#include "loclab/reduction.hpp"
#include "loclab/sources.hpp"

namespace loclab {

using Json = nlohmann::ordered_json;

// Source description files. Supports are 0-based; truth tables and points are
// bitstrings (character j is entry j, x1 first). NOBF bad functions are listed
// under "outputs" in ascending position order with supports as good ordinals.
// A "clique" description reads as the local source it denotes.
Json source_to_json(const Source& source);
Source source_from_json(const Json& j);
Source parse_source(std::string_view text);

Json junta_to_json(const Junta& j);
Json nobf_to_json(const NobfSource& s);
Json fixing_tree_to_json(const FixingTree& tree);
Json weighted_to_json(const WeightedNobf& w);
Json caps_to_json(const Caps& caps);

// Exact value plus a float labeled approximate.
Json rational_json(const Rational& q);

Json survey_to_json(const SurveyReport& report);
// One row per trial: trial, poly_seed, value (num/den), value_approx.
std::string survey_to_csv(const SurveyReport& report);

}  // namespace loclab
