#pragma once

#include <compare>
#include <cstddef>
#include <initializer_list>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "entbell/rational.hpp"

namespace entbell {

enum class Party { A, B };

/// The (i_A, i_B, o_A, o_B) Bell scenario.
struct Scenario {
  int inputs_a = 2;
  int inputs_b = 2;
  int outputs_a = 2;
  int outputs_b = 2;

  /// Throws Error(InvalidScenario) unless all counts are >= 1.
  static Scenario make(int inputs_a, int inputs_b, int outputs_a, int outputs_b);

  std::size_t dimension() const {
    return static_cast<std::size_t>(inputs_a) * inputs_b * outputs_a * outputs_b;
  }
  int inputs(Party p) const { return p == Party::A ? inputs_a : inputs_b; }
  int outputs(Party p) const { return p == Party::A ? outputs_a : outputs_b; }
  bool symmetric() const { return inputs_a == inputs_b && outputs_a == outputs_b; }

  /// Position of p(xy|ab) in the block-matrix flattening: block rows by (a,x),
  /// block columns by (b,y), rows written one after another.
  std::size_t index(int a, int b, int x, int y) const {
    const std::size_t row = static_cast<std::size_t>(a) * outputs_a + x;
    const std::size_t col = static_cast<std::size_t>(b) * outputs_b + y;
    return row * (static_cast<std::size_t>(inputs_b) * outputs_b) + col;
  }

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

inline constexpr Scenario kScenario2222{2, 2, 2, 2};
inline constexpr Scenario kScenario2233{2, 2, 3, 3};

std::string to_string(const Scenario& s);

/// A conditional distribution p(xy|ab), stored exactly. Immutable after
/// construction; the constructor validates nonnegativity and per-(a,b)
/// normalization.
class Distribution {
 public:
  Distribution(Scenario scenario, std::vector<Rational> probs);

  /// Builds from a callable (a, b, x, y) -> Rational.
  template <class Fn>
  static Distribution from_function(Scenario s, Fn&& fn) {
    std::vector<Rational> probs(s.dimension());
    for (int a = 0; a < s.inputs_a; ++a)
      for (int b = 0; b < s.inputs_b; ++b)
        for (int x = 0; x < s.outputs_a; ++x)
          for (int y = 0; y < s.outputs_b; ++y) probs[s.index(a, b, x, y)] = fn(a, b, x, y);
    return Distribution(s, std::move(probs));
  }

  const Scenario& scenario() const { return scenario_; }
  const Rational& at(int a, int b, int x, int y) const { return probs_[scenario_.index(a, b, x, y)]; }

  /// Entries in the block-matrix flattening (the interchange order).
  std::span<const Rational> flat() const { return probs_; }
  std::vector<double> to_doubles() const;

  friend bool operator==(const Distribution& l, const Distribution& r) {
    return l.scenario_ == r.scenario_ && l.probs_ == r.probs_;
  }

 private:
  Scenario scenario_;
  std::vector<Rational> probs_;
};

struct DistributionHash {
  std::size_t operator()(const Distribution& d) const {
    return static_cast<std::size_t>(hash_rationals(d.flat()));
  }
};

/// Exact check that Alice's marginals do not depend on b and Bob's on a.
bool is_no_signalling(const Distribution& d);

/// Convex combination. Throws MismatchedScenario or WeightsNotNormalized.
Distribution mix(std::span<const std::pair<Rational, Distribution>> components);
Distribution mix(std::initializer_list<std::pair<Rational, Distribution>> components);

/// Marginal of `party` for the given input. For Alice it is taken with b = 0,
/// for Bob with a = 0 (the choice is immaterial for non-signalling inputs).
std::vector<Rational> marginal(const Distribution& d, Party party, int input);

/// Marginal of `party` for `input` conditioned on the other party's input.
std::vector<Rational> marginal(const Distribution& d, Party party, int input, int other_input);

/// Copies d into a scenario with at least as many inputs and outputs; the
/// added events get probability zero (added inputs are not allowed).
Distribution embed(const Distribution& d, const Scenario& target);

/// Block-matrix flattening round trip.
std::vector<Rational> flatten(const Distribution& d);
Distribution unflatten(Scenario s, std::span<const Rational> flat);

/// JSON: {"scenario": [iA,iB,oA,oB], "probs": ["n/d", ...]} in flattening order.
std::string to_json(const Distribution& d);
Distribution distribution_from_json(std::string_view text);

/// CSV: header "a,b,x0y0,x0y1,...", one row per (a,b) block.
std::string to_csv(const Distribution& d);
Distribution distribution_from_csv(std::string_view text, int inputs_a, int inputs_b);

/// Reads a distribution file; ".csv" selects the CSV reader, anything else JSON.
Distribution load_distribution(const std::string& path);

/// Human-readable block-matrix rendering.
std::string render(const Distribution& d);

}  // namespace entbell
