#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "entbell/distribution.hpp"
#include "entbell/entropy.hpp"

namespace entbell {

/// Maximize I_BC^k (order q) over the convex hull of `generators`.
struct SearchProblem {
  std::vector<Distribution> generators;
  double q = 1.0;
  int inequality = 4;  // 1..4
  std::size_t restarts = 200;
  std::uint64_t seed = 1;
  double tol = kViolationTol;
  std::size_t max_iterations = 400;
  /// Edge-midpoint starts: every pair when there are at most this many
  /// generators, otherwise only pairs containing generator 0.
  std::size_t all_edges_below = 12;
  unsigned jobs = 0;
};

struct RestartRecord {
  std::string start;  // "random", "vertex k", "edge i-j"
  double initial = 0;
  double value = 0;
  std::size_t iterations = 0;
};

struct SearchResult {
  double best_value = 0;
  std::vector<double> best_weights;
  std::vector<RestartRecord> trace;
  /// "violation found" or "no violation found (evidence)".
  std::string verdict;
};

/// Multi-start pairwise Frank-Wolfe on the simplex of generator weights.
/// Throws EmptyGenerators or MismatchedScenario.
SearchResult maximize_bc(const SearchProblem& problem);

/// Value of the objective at given weights (recomputed from scratch).
double mixture_bc_value(const std::vector<Distribution>& generators, const std::vector<double>& weights, double q,
                        int inequality);
/// Exact mixture for double weights (each converted exactly, then renormalized).
Distribution mixture_from_weights(const std::vector<Distribution>& generators, const std::vector<double>& weights);

/// The 30 deterministic points with I2233^1 = 2, in enumeration order.
std::vector<Distribution> saturating_locals();
/// {p_iso(eps)} followed by saturating_locals(); requires 1/2 < eps <= 4/7.
std::vector<Distribution> restrict_to_nonclassical_generators(const Rational& eps);

enum class Family { E, ETilde };
std::string_view to_string(Family f);
/// p_E(eps, v) or its p_nl_tilde counterpart.
Distribution family_point(Family f, const Rational& eps, const Rational& v);

struct RegionScan {
  Family family = Family::E;
  std::vector<double> q_list;
  std::vector<double> eps_grid, v_grid;
  /// values[qi][ei * v_grid.size() + vi]
  std::vector<std::vector<double>> values;
  std::vector<std::vector<bool>> violated;
  double tol = kViolationTol;
  /// Smallest eps with a violating cell, per q (nullopt when none).
  std::vector<std::optional<double>> boundary;
};

/// Fourth BC value on a (grid x grid) lattice of [0,1]^2.
RegionScan region_scan(Family family, const std::vector<double>& q_list, std::size_t grid, double tol = kViolationTol,
                       unsigned jobs = 0);
std::string to_csv(const RegionScan& scan);

/// "Some v in (0,1] gives a positive fourth BC value" for the family at eps,
/// decided in high precision with v = exp(-s), s = 2^-2, 2^-1, ..., s_max.
bool family_violates(Family f, const Rational& eps, double q, double s_max = 65536);

struct ThresholdBracket {
  Rational lo, hi;  // lo: no violation found; hi: violation
  std::size_t evaluations = 0;
};

/// Bisection of family_violates on [lo, hi] until hi - lo < width.
ThresholdBracket violation_threshold(Family f, double q, const Rational& lo, const Rational& hi,
                                     const Rational& width);

struct QSweep {
  std::vector<double> q, value;
  double max_value = 0;
  double argmax_q = 0;
  /// Where the curve crosses from violation (> tol) to non-violation, refined by bisection.
  std::optional<double> upper_crossing;
  std::optional<double> first_violation, last_violation;
};

QSweep q_sweep(const Distribution& d, double q_lo, double q_hi, std::size_t steps, double tol = kViolationTol);
std::string to_csv(const QSweep& sweep);

struct ChainReport {
  bool identity_holds = false;
  double tsallis2_on_pe = 0;   // I_BC,2^4(p_E(7/10, 2/5))
  double shannon_on_pe = 0;    // I_BC^4(p_E(7/10, 2/5))
  double shannon_on_mix = 0;   // I_BC^4(p_E(7/10, 1/50))
  bool ok(double tol = kViolationTol) const {
    return identity_holds && tsallis2_on_pe > tol && shannon_on_pe <= tol && shannon_on_mix > tol;
  }
};

/// 1/20 p_E(7/10, 2/5) + 19/20 p_C = 1/50 p_iso(7/10) + 49/50 p_C and the
/// violation pattern of its two sides.
ChainReport footnote_chain_check();

std::string to_json(const SearchResult& result);

}  // namespace entbell
