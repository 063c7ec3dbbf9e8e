#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "entbell/distribution.hpp"

namespace entbell {

/// Invertible relabelling of inputs and (input-dependent) outputs. Maps the
/// event (a, b, x, y) to (input_a[a], input_b[b], output_a[a][x], output_b[b][y]),
/// where output tables are indexed by the old input.
struct LocalRelabelling {
  std::vector<int> input_a, input_b;
  std::vector<std::vector<int>> output_a, output_b;

  static LocalRelabelling identity(const Scenario& s);
  bool compatible(const Scenario& s) const;
  bool is_identity() const;

  friend bool operator==(const LocalRelabelling&, const LocalRelabelling&) = default;
};

/// A local relabelling optionally followed by exchange of the parties.
struct SymmetryOp {
  LocalRelabelling local;
  bool exchange = false;

  static SymmetryOp identity(const Scenario& s) { return {LocalRelabelling::identity(s), false}; }
  friend bool operator==(const SymmetryOp&, const SymmetryOp&) = default;
};

/// Applying `second` after `first`.
LocalRelabelling compose(const LocalRelabelling& second, const LocalRelabelling& first);
LocalRelabelling inverse(const LocalRelabelling& r);
SymmetryOp compose(const SymmetryOp& second, const SymmetryOp& first);
SymmetryOp inverse(const SymmetryOp& op);

/// Flat-index permutation: entry i of the input lands at position map[i].
std::vector<std::size_t> index_map(const SymmetryOp& op, const Scenario& s);

/// Moves table entries as the op moves events.
std::vector<Rational> permute(const SymmetryOp& op, const Scenario& s, std::span<const Rational> table);
/// Coefficient table g with <g, d> = <f, op(d)> for every d.
std::vector<Rational> pull_back(const SymmetryOp& op, const Scenario& s, std::span<const Rational> coeffs);

Distribution apply_relabelling(const LocalRelabelling& r, const Distribution& d);
Distribution apply(const SymmetryOp& op, const Distribution& d);
/// Block transpose: p'(xy|ab) = p(yx|ba). Throws AsymmetricScenario.
Distribution exchange_parties(const Distribution& d);

/// All local relabellings, identity first; (2 * 6^2)^2 = 5184 for (2,2,3,3).
std::vector<LocalRelabelling> enumerate_relabellings(const Scenario& s);
/// Local relabellings, then each followed by exchange when `with_exchange`.
std::vector<SymmetryOp> enumerate_symmetry_ops(const Scenario& s, bool with_exchange);

/// Per-(party, input) output map from `source` outcomes onto `target` outcomes.
struct CoarseGraining {
  Scenario source;
  Scenario target;
  std::vector<std::vector<int>> map_a, map_b;

  bool compatible(const Scenario& s) const { return s == source; }
  /// Number of (party, input) slots whose map is not the identity.
  int merged_slots() const;
};

/// Sums probabilities over merged outcomes; result lives in `g.target`.
Distribution apply_coarse_graining(const CoarseGraining& g, const Distribution& d);
/// Coefficients on the source scenario with <g*f, d> = <f, g(d)>.
std::vector<Rational> pull_back(const CoarseGraining& g, std::span<const Rational> coeffs);

/// Every combination of "identity" or a 2-to-1 merge per (party, input),
/// excluding the all-identity map. A merge of outputs {i, j} (i < j) sends j
/// to i; the image stays embedded in the original scenario. 255 for (2,2,3,3).
std::vector<CoarseGraining> enumerate_2to1_coarse_grainings(const Scenario& s);

/// Counts by number of merged (party, input) slots, index 1..4 for two inputs.
std::vector<int> coarse_graining_census(std::span<const CoarseGraining> maps);

/// Every surjection of the outputs of `source` onto those of `target`, per
/// (party, input); for (2,2,3,3) onto (2,2,2,2) there are 6^4 of them.
std::vector<CoarseGraining> enumerate_surjections(const Scenario& source, const Scenario& target);

/// Per-party response functions input -> output.
struct DeterministicStrategy {
  std::vector<int> alice, bob;
};

Distribution point_distribution(const Scenario& s, const DeterministicStrategy& strategy);
/// Alice's response function in lexicographic order as the outer loop, Bob's inner.
std::vector<DeterministicStrategy> enumerate_strategies(const Scenario& s);
std::vector<Distribution> deterministic_points(const Scenario& s);

struct OrbitMember {
  Distribution point;
  SymmetryOp op;  // op applied to the seed
};

/// Deduplicated orbit in enumeration order of `ops` (seed first when ops
/// starts with the identity).
std::vector<OrbitMember> orbit(const Distribution& seed, std::span<const SymmetryOp> ops);

struct LosrGenerators {
  std::vector<OrbitMember> relabelled;
  std::vector<Distribution> coarse_grained;
  std::vector<Distribution> locals;
  std::size_t total() const { return relabelled.size() + coarse_grained.size() + locals.size(); }
};

/// Relabelling orbit of d, its 2-to-1 coarse-grainings, and the deterministic
/// points; for d = p_iso(eps) these generate the LOSR+E closure.
LosrGenerators losr_generators(const Distribution& d);

/// First local relabelling (enumeration order) mapping d to exchange_parties(d).
std::optional<LocalRelabelling> find_exchange_relabelling(const Distribution& d);

/// JSON permutation tables for ops.
std::string to_json(const LocalRelabelling& r);
std::string to_json(const SymmetryOp& op);
std::string to_json(const CoarseGraining& g);
/// Compact one-line description, e.g. "A:in[0,1] out0[0,2,1] ...".
std::string describe(const SymmetryOp& op);

}  // namespace entbell
