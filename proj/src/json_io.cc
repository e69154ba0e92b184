#include "persuasion/json_io.h"

#include <fstream>
#include <sstream>

#include "persuasion/error.h"

namespace persuasion {
namespace {

double Number(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw Error(ErrorKind::kParseError, std::string("missing field \"") + key + "\"");
  }
  const Json& v = j.at(key);
  if (!v.is_number()) {
    throw Error(ErrorKind::kParseError, std::string("field \"") + key + "\" is not a number");
  }
  return v.get<double>();
}

const Json& ArrayField(const Json& j, const char* key) {
  static const Json kEmpty = Json::array();
  if (!j.contains(key)) return kEmpty;
  const Json& v = j.at(key);
  if (!v.is_array()) {
    throw Error(ErrorKind::kParseError, std::string("field \"") + key + "\" is not an array");
  }
  return v;
}

Curvature ParseCurvature(const std::string& s) {
  for (Curvature c : {Curvature::kAffine, Curvature::kConvex, Curvature::kConcave,
                      Curvature::kUnclassified}) {
    if (s == CurvatureName(c)) return c;
  }
  throw Error(ErrorKind::kParseError, "unknown curvature \"" + s + "\"");
}

Json Pairs(const std::vector<std::pair<double, double>>& v) {
  Json out = Json::array();
  for (const auto& [a, b] : v) out.push_back({a, b});
  return out;
}

Json ToJson(const PointSet& s) {
  return {{"points", s.points}, {"intervals", Pairs(s.intervals)}};
}

Json ToJson(const AffineFunction& f) {
  return {{"intercept", f.intercept}, {"slope", f.slope}};
}

Json ToJson(const WsoFailure& f) {
  return {{"side", f.side}, {"member", f.member}, {"best", f.best}, {"target", f.target}};
}

}  // namespace

Json ToJson(const Distribution& f) {
  Json atoms = Json::array(), uniforms = Json::array();
  for (const Atom& a : f.atoms()) atoms.push_back({{"x", a.x}, {"w", a.w}});
  for (const UniformPiece& u : f.uniforms()) {
    uniforms.push_back({{"from", u.from}, {"to", u.to}, {"w", u.w}});
  }
  return {{"atoms", atoms}, {"uniforms", uniforms}};
}

Distribution DistributionFromJson(const Json& j) {
  if (!j.is_object()) throw Error(ErrorKind::kParseError, "distribution is not an object");
  std::vector<Atom> atoms;
  std::vector<UniformPiece> uniforms;
  for (const Json& a : ArrayField(j, "atoms")) atoms.push_back({Number(a, "x"), Number(a, "w")});
  for (const Json& u : ArrayField(j, "uniforms")) {
    uniforms.push_back({Number(u, "from"), Number(u, "to"), Number(u, "w")});
  }
  if (atoms.empty() && uniforms.empty()) {
    throw Error(ErrorKind::kParseError, "distribution has neither atoms nor uniforms");
  }
  try {
    return Distribution::Create(std::move(atoms), std::move(uniforms));
  } catch (const Error& e) {
    throw Error(ErrorKind::kParseError, std::string("invalid distribution: ") + e.what());
  }
}

Json ToJson(const Payoff& u) {
  Json segs = Json::array();
  for (const PayoffSegment& s : u.segments()) {
    Json seg = {{"from", s.from},
                {"to", s.to},
                {"coeffs", s.poly.coeffs()},
                {"curvature", CurvatureName(s.curvature)}};
    if (s.outer == OuterTransform::kExp) seg["outer"] = "exp";
    segs.push_back(seg);
  }
  return {{"segments", segs}};
}

Payoff PayoffFromJson(const Json& j) {
  if (!j.is_object()) throw Error(ErrorKind::kParseError, "payoff is not an object");
  const Json& arr = ArrayField(j, "segments");
  if (arr.empty()) throw Error(ErrorKind::kParseError, "payoff has no segments");
  std::vector<PayoffSegment> segs;
  bool tagged = true;
  for (const Json& s : arr) {
    PayoffSegment seg{Number(s, "from"), Number(s, "to"), Polynomial(), Curvature::kUnclassified};
    std::vector<double> coeffs;
    for (const Json& c : ArrayField(s, "coeffs")) {
      if (!c.is_number()) throw Error(ErrorKind::kParseError, "coefficient is not a number");
      coeffs.push_back(c.get<double>());
    }
    if (coeffs.empty()) throw Error(ErrorKind::kParseError, "segment without coefficients");
    seg.poly = Polynomial(std::move(coeffs));
    if (s.contains("curvature")) {
      if (!s.at("curvature").is_string()) {
        throw Error(ErrorKind::kParseError, "curvature is not a string");
      }
      seg.curvature = ParseCurvature(s.at("curvature").get<std::string>());
    } else {
      tagged = false;
    }
    if (s.contains("outer")) {
      const Json& o = s.at("outer");
      if (!o.is_string()) throw Error(ErrorKind::kParseError, "outer is not a string");
      if (o == "exp") {
        seg.outer = OuterTransform::kExp;
      } else if (o != "identity") {
        throw Error(ErrorKind::kParseError, "unknown outer transform " + o.dump());
      }
    }
    segs.push_back(std::move(seg));
  }
  try {
    if (!tagged) return AutoTagged(Payoff::Create(std::move(segs)).segments());
    return Payoff::Create(std::move(segs));
  } catch (const Error& e) {
    throw Error(ErrorKind::kParseError, std::string("invalid payoff: ") + e.what());
  }
}

Json ToJson(const PriceFunction& p) {
  return {{"n", p.n},           {"a", p.a},           {"beta", p.beta},
          {"kinks", p.kinks}, {"values", p.values}, {"objective", p.objective}};
}

Json ToJson(const SlacknessReport& s) {
  return {{"pass", s.pass},
          {"affine_residual", s.affine_residual},
          {"support_residual", s.support_residual},
          {"violations", s.violations}};
}

Json ToJson(const SolveReport& r) {
  Json j = {{"n", r.n},
            {"value", r.value},
            {"dual_value", r.dual_value},
            {"gap", r.gap},
            {"multiplier_dual_value", r.multiplier_dual_value},
            {"iterations", r.iterations},
            {"optimizer", ToJson(r.optimizer)},
            {"masses", r.masses},
            {"prices", ToJson(r.prices)},
            {"slackness", ToJson(r.slackness)}};
  return j;
}

Json ToJson(const RegularityReport& r) { return {{"regular", r.regular}, {"reason", r.reason}}; }

Json ToJson(const ChordWitness& w) {
  return {{"x", w.x}, {"z", w.z}, {"alpha", w.alpha}, {"strict", w.strict},
          {"i", w.i}, {"j", w.j}, {"k", w.k}};
}

Json ToJson(const OlcVerdict& v) {
  Json j = {{"holds", v.holds}, {"grid_n", v.grid_n}};
  j["witness"] = v.witness ? ToJson(*v.witness) : Json(nullptr);
  return j;
}

Json ToJson(const CraterVerdict& v) {
  Json j = {{"holds", v.holds}};
  if (v.witness) {
    const CraterWitness& w = *v.witness;
    j["witness"] = {{"x", w.x},
                    {"y", w.y},
                    {"z", w.z},
                    {"w", w.w},
                    {"pattern_left", w.pattern_left},
                    {"pattern_right", w.pattern_right},
                    {"cross_x", w.cross_x},
                    {"cross_y", w.cross_y},
                    {"reason", CraterReasonName(w.reason)}};
  } else {
    j["witness"] = nullptr;
  }
  return j;
}

Json ToJson(const WsoVerdict& v) {
  Json lf = Json::array(), hf = Json::array();
  for (const WsoFailure& f : v.lower_failures) lf.push_back(ToJson(f));
  for (const WsoFailure& f : v.higher_failures) hf.push_back(ToJson(f));
  return {{"lower", v.lower},
          {"strictly_lower", v.strictly_lower},
          {"higher", v.higher},
          {"strictly_higher", v.strictly_higher},
          {"sampled", v.sampled},
          {"u_value", v.u_value},
          {"v_value", v.v_value},
          {"u_members", v.u_members},
          {"v_members", v.v_members},
          {"lower_failures", lf},
          {"higher_failures", hf}};
}

Json ToJson(const ChordCounterexample& c) {
  return {{"case", ChordCaseName(c.kase)},
          {"witness", ToJson(c.witness)},
          {"prior", ToJson(c.prior)},
          {"weight", c.weight},
          {"mean", c.mean},
          {"mean_index", c.mean_index},
          {"u_prior_value", c.u_prior_value},
          {"u_mean_value", c.u_mean_value},
          {"v_prior_value", c.v_prior_value},
          {"v_mean_value", c.v_mean_value},
          {"v_best_value", c.v_best_value},
          {"u_chord_slack", c.u_chord_slack}};
}

Json ToJson(const CraterCounterexample& c) {
  return {{"case", CraterCaseName(c.kase)},
          {"reflected", c.reflected},
          {"grid_n", c.grid_n},
          {"x_left", c.x_left},
          {"x", c.x},
          {"X", c.X},
          {"w", c.w},
          {"w_right", c.w_right},
          {"y", c.y},
          {"z", c.z},
          {"Y", c.Y},
          {"left", ToJson(c.left)},
          {"right", ToJson(c.right)},
          {"p_shortfall", c.p_shortfall},
          {"kappa", c.kappa},
          {"cutoff", c.cutoff},
          {"pool", c.pool},
          {"c_f0_at_X", c.c_f0_at_X},
          {"c_f_at_X", c.c_f_at_X},
          {"u", ToJson(c.u)},
          {"f0", ToJson(c.f0)},
          {"v", ToJson(c.v)},
          {"f", ToJson(c.f)}};
}

Json ToJson(const NecessityCheck& c) {
  return {{"pass", c.pass},     {"value", c.value},   {"target", c.target},
          {"min_cf", c.min_cf}, {"max_cf", c.max_cf}, {"gap", c.gap},
          {"v_drop", c.v_drop}};
}

Json ToJson(const BinarySolution& s) {
  return {{"mu", s.mu},
          {"lo", s.lo},
          {"hi", s.hi},
          {"value", s.value},
          {"x", s.x},
          {"y", s.y},
          {"z", s.z},
          {"w", s.w},
          {"contact", ToJson(s.contact)},
          {"least_informative", ToJson(s.g)},
          {"most_informative", ToJson(s.h)}};
}

Json ToJson(const CensorshipSolution& s) {
  return {{"a", s.a},
          {"b", s.b},
          {"no_root", s.no_root},
          {"residual", s.residual},
          {"f", ToJson(s.f)}};
}

Json ToJson(const Certificate& c) {
  return {{"feasible", c.feasible}, {"certified", c.certified}, {"upper", c.upper},
          {"lower", c.lower},       {"lift", c.lift},           {"gap", c.gap}};
}

Json ToJson(const ExperimentReport& r) {
  Json inst = Json::array();
  for (const InstanceResult& i : r.instances) {
    Json j = {{"index", i.index},       {"seed", i.seed},       {"pass", i.pass},
              {"residual", i.residual}, {"seconds", i.seconds}, {"detail", i.detail}};
    if (!i.error.empty()) j["error"] = i.error;
    inst.push_back(j);
  }
  return {{"kind", ExperimentKindName(r.kind)},
          {"seed", r.seed},
          {"count", r.count},
          {"grid_n", r.grid_n},
          {"probe_k", r.probe_k},
          {"passes", r.passes},
          {"failures", r.failures},
          {"errors", r.errors},
          {"worst_residual", r.worst_residual},
          {"seconds", r.seconds},
          {"instances", inst}};
}

Json ReadJsonFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kParseError, "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return Json::parse(ss.str());
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kParseError, path + ": " + e.what());
  }
}

void WriteJsonFile(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::kParseError, "cannot write " + path);
  out << j.dump(2) << "\n";
}

}  // namespace persuasion
