#pragma once

#include <json.hpp>

#include "besicover/concentration.hpp"
#include "besicover/covering.hpp"
#include "besicover/dynamics.hpp"
#include "besicover/maximal.hpp"
#include "besicover/measure.hpp"

namespace besicover {

using Json = nlohmann::json;

// NormSpec: {"kind":"p","p":1|2|"inf","d":n} | {"kind":"wsup","weights":[...]}
//         | {"kind":"poly","functionals":[[...],...]}
Json norm_to_json(const NormSpec& norm);
NormSpec norm_from_json(const Json& j);

// Ball family: a norm object, or {"kind":"cubes","d":n}.
Json family_to_json(const BallFamilySpec& family);
FamilyRef family_from_json(const Json& j);

// Carpet balls: array of {"center":[ints],"radius":"p/q"}.
Json carpet_to_json(const Carpet& carpet);
Carpet carpet_from_json(const Json& j, FamilyRef family);

// Measure: array of {"point":[ints],"mass":"p/q"}.
Json measure_to_json(const DiscreteMeasure& mu);
DiscreteMeasure measure_from_json(const Json& j);

// Observable: array of {"point":[ints],"value":"p/q"}.
Json observable_to_json(const Observable& f);
Observable observable_from_json(const Json& j);

// Action config: {"model":"counting"|"weighted"|"odometer","d":..,
//                 "lambda":"p/q","biases":[...],"N":..}
Json action_config_to_json(const Action& a);
ActionRef action_from_json(const Json& j);

Json witness_to_json(const WitnessPackage& w);
WitnessPackage witness_from_json(const Json& j);

Json witness_report_to_json(const WitnessValidationReport& rep);
Json frequency_report_to_json(const FrequencyReport& rep);

Json point_to_json(const Point& p);
Point point_from_json(const Json& j);

}  // namespace besicover
