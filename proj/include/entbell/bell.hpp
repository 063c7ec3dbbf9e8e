#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "entbell/distribution.hpp"
#include "entbell/symmetry.hpp"

namespace entbell {

enum class FamilyTag { CHSH, I2233, Positivity, Custom };
std::string_view to_string(FamilyTag tag);

/// tr(M^T P) <= bound. Coefficients use the block-matrix flattening.
struct BellFunctional {
  Scenario scenario;
  std::vector<Rational> coeffs;
  Rational bound;
  FamilyTag family = FamilyTag::Custom;
  std::string generating_symmetry;  // how this member was obtained from its representative
};

/// Builds a <=-form functional; a >=-form input (`greater_equal`) is negated.
BellFunctional make_functional(Scenario s, std::vector<Rational> coeffs, Rational bound, FamilyTag family,
                               bool greater_equal = false);
/// Same, from integer coefficients given as a block matrix.
BellFunctional make_functional(Scenario s, std::initializer_list<int> coeffs, int bound, FamilyTag family,
                               bool greater_equal = false);

Rational evaluate(const BellFunctional& f, const Distribution& d);
/// Exact strict violation test, value > bound.
bool violates(const BellFunctional& f, const Distribution& d);

/// Coefficients with evaluate(pull_back(op, f), d) == evaluate(f, apply(op, d)).
BellFunctional pull_back(const SymmetryOp& op, const BellFunctional& f);
BellFunctional pull_back(const CoarseGraining& g, const BellFunctional& f);

/// Key identifying a functional up to positive scaling and additions that
/// vanish on the no-signalling subspace: the slack vector bound - f(D) over
/// all deterministic points D, divided by its largest absolute entry.
std::vector<Rational> canonical_key(const BellFunctional& f);

BellFunctional chsh_2222();
/// Representative CHSH-type functional of (2,2,3,3), bound 3.
BellFunctional chsh_2233();
/// Representative I2233 functional, bound 2.
BellFunctional i2233();
/// Tr(M^T P) >= 1, valid for every local point and violated by
/// (p_iso + its Alice-input-1 output swap)/2 once eps > 4/7; stored negated.
BellFunctional swap_mixture_witness();

/// Deduplicated CHSH orbit: 8 for (2,2,2,2) under relabellings, 648 for
/// (2,2,3,3) as output-merge pullbacks of the 8 binary members.
/// Throws UnsupportedScenario otherwise. Cached after the first call.
const std::vector<BellFunctional>& chsh_orbit(const Scenario& s);
/// 432 deduplicated I2233 functionals; element 0 is the representative
/// (reported as index 1).
const std::vector<BellFunctional>& i2233_orbit();
/// -p(xy|ab) <= 0 for every entry.
std::vector<BellFunctional> positivity(const Scenario& s);

struct Violation {
  std::size_t index;  // 1-based position in the orbit
  Rational value;
};

struct ViolationReport {
  std::vector<Violation> chsh;
  std::vector<Violation> i2233;
};

/// All violated CHSH-type and I2233 functionals of a (2,2,3,3) distribution.
ViolationReport violated_set(const Distribution& d);

std::string to_json(const BellFunctional& f);

}  // namespace entbell
