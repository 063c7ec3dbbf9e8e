#include "entbell/bell.hpp"

#include <algorithm>
#include <unordered_set>

#include <json.hpp>

#include "entbell/error.hpp"

namespace entbell {

std::string_view to_string(FamilyTag tag) {
  switch (tag) {
    case FamilyTag::CHSH: return "CHSH";
    case FamilyTag::I2233: return "I2233";
    case FamilyTag::Positivity: return "Positivity";
    case FamilyTag::Custom: return "Custom";
  }
  return "Custom";
}

BellFunctional make_functional(Scenario s, std::vector<Rational> coeffs, Rational bound, FamilyTag family,
                               bool greater_equal) {
  if (coeffs.size() != s.dimension())
    throw Error(ErrorCode::InvalidScenario, "coefficient count does not match " + to_string(s));
  for (auto& c : coeffs) c.canonicalize();
  bound.canonicalize();
  if (greater_equal) {
    for (auto& c : coeffs) c = -c;
    bound = -bound;
  }
  return BellFunctional{s, std::move(coeffs), std::move(bound), family, "identity"};
}

BellFunctional make_functional(Scenario s, std::initializer_list<int> coeffs, int bound, FamilyTag family,
                               bool greater_equal) {
  std::vector<Rational> c(coeffs.begin(), coeffs.end());
  return make_functional(s, std::move(c), Rational(bound), family, greater_equal);
}

Rational evaluate(const BellFunctional& f, const Distribution& d) {
  if (f.scenario != d.scenario())
    throw Error(ErrorCode::MismatchedScenario,
                "functional on " + to_string(f.scenario) + " applied to " + to_string(d.scenario()));
  Rational sum = 0;
  const auto p = d.flat();
  for (std::size_t i = 0; i < p.size(); ++i)
    if (sgn(f.coeffs[i]) != 0 && sgn(p[i]) != 0) sum += f.coeffs[i] * p[i];
  return sum;
}

bool violates(const BellFunctional& f, const Distribution& d) { return evaluate(f, d) > f.bound; }

BellFunctional pull_back(const SymmetryOp& op, const BellFunctional& f) {
  BellFunctional out = f;
  out.coeffs = pull_back(op, f.scenario, f.coeffs);
  out.generating_symmetry = describe(op);
  return out;
}

BellFunctional pull_back(const CoarseGraining& g, const BellFunctional& f) {
  if (g.target != f.scenario) throw Error(ErrorCode::IncompatibleScenario, "coarse-graining target mismatch");
  BellFunctional out = f;
  out.scenario = g.source;
  out.coeffs = pull_back(g, f.coeffs);
  out.generating_symmetry = to_json(g);
  return out;
}

std::vector<Rational> canonical_key(const BellFunctional& f) {
  const Scenario& s = f.scenario;
  std::vector<Rational> key;
  Rational scale = 0;
  for (const auto& st : enumerate_strategies(s)) {
    Rational value = 0;
    for (int a = 0; a < s.inputs_a; ++a)
      for (int b = 0; b < s.inputs_b; ++b) value += f.coeffs[s.index(a, b, st.alice[a], st.bob[b])];
    key.push_back(f.bound - value);
    scale = std::max(scale, Rational(abs(key.back())));
  }
  if (sgn(scale) != 0)
    for (auto& k : key) k /= scale;
  return key;
}

BellFunctional chsh_2222() {
  return make_functional(kScenario2222, {1, 0, 1, 0,
                                         0, 1, 0, 1,
                                         1, 0, 0, 1,
                                         0, 1, 1, 0}, 3, FamilyTag::CHSH);
}

BellFunctional chsh_2233() {
  return make_functional(kScenario2233, {1, 0, 0, 1, 0, 0,
                                         0, 1, 1, 0, 1, 1,
                                         0, 1, 1, 0, 1, 1,
                                         1, 0, 0, 0, 1, 1,
                                         0, 1, 1, 1, 0, 0,
                                         0, 1, 1, 1, 0, 0}, 3, FamilyTag::CHSH);
}

BellFunctional i2233() {
  return make_functional(kScenario2233, {1, 0, -1, 1, -1, 0,
                                         -1, 1, 0, 0, 1, -1,
                                         0, -1, 1, -1, 0, 1,
                                         1, -1, 0, -1, 1, 0,
                                         0, 1, -1, 0, -1, 1,
                                         -1, 0, 1, 1, 0, -1}, 2, FamilyTag::I2233);
}

BellFunctional swap_mixture_witness() {
  return make_functional(kScenario2233, {0, 1, 1, 0, 1, 1,
                                         1, 0, 1, 1, 0, 1,
                                         1, 1, 1, 0, 0, 0,
                                         0, 1, 0, 1, 0, 0,
                                         1, 0, 0, 0, 1, 0,
                                         1, 0, 0, 0, 1, 0}, 1, FamilyTag::Custom, true);
}

namespace {

// Appends f unless an equivalent functional is already present.
struct OrbitCollector {
  std::vector<BellFunctional> members;
  std::unordered_set<std::vector<Rational>, RationalVectorHash> keys;

  void add(BellFunctional f) {
    if (keys.insert(canonical_key(f)).second) members.push_back(std::move(f));
  }
};

std::vector<BellFunctional> relabelling_orbit(const BellFunctional& rep) {
  OrbitCollector c;
  for (const auto& op : enumerate_symmetry_ops(rep.scenario, false)) c.add(pull_back(op, rep));
  return c.members;
}

std::vector<BellFunctional> build_chsh_2233() {
  OrbitCollector c;
  const auto binary = relabelling_orbit(chsh_2222());
  const auto surjections = enumerate_surjections(kScenario2233, kScenario2222);
  for (std::size_t k = 0; k < binary.size(); ++k)
    for (const auto& g : surjections) {
      BellFunctional f = pull_back(g, binary[k]);
      f.generating_symmetry = "chsh2222[" + binary[k].generating_symmetry + "] merge " + f.generating_symmetry;
      c.add(std::move(f));
    }
  return c.members;
}

}  // namespace

const std::vector<BellFunctional>& chsh_orbit(const Scenario& s) {
  if (s == kScenario2222) {
    static const std::vector<BellFunctional> orbit = relabelling_orbit(chsh_2222());
    return orbit;
  }
  if (s == kScenario2233) {
    static const std::vector<BellFunctional> orbit = build_chsh_2233();
    return orbit;
  }
  throw Error(ErrorCode::UnsupportedScenario, "CHSH orbits exist for (2,2,2,2) and (2,2,3,3), not " + to_string(s));
}

const std::vector<BellFunctional>& i2233_orbit() {
  static const std::vector<BellFunctional> orbit = relabelling_orbit(i2233());
  return orbit;
}

std::vector<BellFunctional> positivity(const Scenario& s) {
  std::vector<BellFunctional> out;
  for (std::size_t i = 0; i < s.dimension(); ++i) {
    std::vector<Rational> c(s.dimension());
    c[i] = -1;
    out.push_back(BellFunctional{s, std::move(c), Rational(0), FamilyTag::Positivity, "entry " + std::to_string(i)});
  }
  return out;
}

ViolationReport violated_set(const Distribution& d) {
  if (d.scenario() != kScenario2233)
    throw Error(ErrorCode::UnsupportedScenario, "violated_set works on (2,2,3,3) distributions");
  ViolationReport report;
  auto scan = [&](const std::vector<BellFunctional>& fs, std::vector<Violation>& out) {
    for (std::size_t i = 0; i < fs.size(); ++i) {
      Rational v = evaluate(fs[i], d);
      if (v > fs[i].bound) out.push_back({i + 1, std::move(v)});
    }
  };
  scan(chsh_orbit(kScenario2233), report.chsh);
  scan(i2233_orbit(), report.i2233);
  return report;
}

std::string to_json(const BellFunctional& f) {
  nlohmann::json j;
  j["scenario"] = {f.scenario.inputs_a, f.scenario.inputs_b, f.scenario.outputs_a, f.scenario.outputs_b};
  auto& coeffs = j["coeffs"] = nlohmann::json::array();
  for (const auto& c : f.coeffs) coeffs.push_back(to_string(c));
  j["bound"] = to_string(f.bound);
  j["family_tag"] = std::string(to_string(f.family));
  j["generating_symmetry"] = f.generating_symmetry;
  return j.dump();
}

}  // namespace entbell
