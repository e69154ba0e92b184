#ifndef PERSUASION_JSON_IO_H_
#define PERSUASION_JSON_IO_H_

#include <json.hpp>
#include <string>

#include "persuasion/constructions.h"
#include "persuasion/harness.h"
#include "persuasion/measures.h"
#include "persuasion/orders.h"
#include "persuasion/payoffs.h"
#include "persuasion/solver.h"

namespace persuasion {

using Json = nlohmann::ordered_json;

// {"atoms":[{"x","w"}],"uniforms":[{"from","to","w"}]}
Json ToJson(const Distribution& f);
Distribution DistributionFromJson(const Json& j);

// {"segments":[{"from","to","coeffs","curvature"}]}; coefficients in
// increasing degree in m. "outer": "exp" marks an exp(poly) segment. Without
// curvature tags the payoff is tagged from its second derivative.
Json ToJson(const Payoff& u);
Payoff PayoffFromJson(const Json& j);

Json ToJson(const PriceFunction& p);
Json ToJson(const SlacknessReport& s);
Json ToJson(const SolveReport& r);
Json ToJson(const RegularityReport& r);
Json ToJson(const ChordWitness& w);
Json ToJson(const OlcVerdict& v);
Json ToJson(const CraterVerdict& v);
Json ToJson(const WsoVerdict& v);
Json ToJson(const ChordCounterexample& c);
Json ToJson(const CraterCounterexample& c);
Json ToJson(const NecessityCheck& c);
Json ToJson(const BinarySolution& s);
Json ToJson(const CensorshipSolution& s);
Json ToJson(const Certificate& c);
Json ToJson(const ExperimentReport& r);

// Throw ParseError on unreadable or malformed input.
Json ReadJsonFile(const std::string& path);
void WriteJsonFile(const std::string& path, const Json& j);

}  // namespace persuasion

#endif  // PERSUASION_JSON_IO_H_
