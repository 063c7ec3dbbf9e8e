#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "entbell/distribution.hpp"

namespace entbell {

inline constexpr double kViolationTol = 1e-9;
/// Below this distance from 1 the Tsallis order is treated as Shannon.
inline constexpr double kShannonBranch = 1e-8;

/// Natural-log Shannon entropy; zero entries are skipped.
/// Throws NotADistribution on negative entries or a sum away from 1.
double shannon(std::span<const double> p);
/// S_q = (1 - sum p^q) / (q - 1); Shannon when |q - 1| < kShannonBranch.
/// Throws NonPositiveOrder for q <= 0.
double tsallis(std::span<const double> p, double q);

/// Components (H(X0), H(X1), H(Y0), H(Y1), H(X0Y0), H(X0Y1), H(X1Y0), H(X1Y1)).
enum EntropyIndex { kX0, kX1, kY0, kY1, kX0Y0, kX0Y1, kX1Y0, kX1Y1 };

struct EntropyVector {
  std::array<double, 8> h{};
  double q = 1.0;
  std::string source;
};

/// Entropy vector of a two-input distribution. Throws SignallingInput when the
/// marginals depend on the other party's input, WrongInputCount unless both
/// parties have two inputs.
EntropyVector entropy_vector(const Distribution& d, double q, std::string source = {});
/// Floating-point variant on a flattened table (singleton marginals read from
/// the blocks with the other party's input 0). No signalling check.
EntropyVector entropy_vector(const Scenario& s, std::span<const double> probs, double q);

struct BCResult {
  std::array<double, 4> values{};
  double q = 1.0;
  std::array<bool, 4> violated{};  // value > tol
  std::array<bool, 4> marginal{};  // |value| <= tol
};

/// The four Braunstein-Caves forms; I^k has the positive pair term X_iY_j
/// with (i,j) = (0,0), (0,1), (1,0), (1,1) for k = 1..4.
BCResult bc_values(const EntropyVector& v, double tol = kViolationTol);

/// Only the fourth form, for hot loops.
double bc4(const EntropyVector& v);

/// f(eps, v) with I_BC^4(p_E(eps, v)) = f / 3 for natural-log entropies.
double f_closed_form(double eps, double v);
/// g(q, eps, v) with Tsallis I_BC,q^4(p_E(eps, v)) = g / (q - 1).
/// Throws OrderNotAboveOne for q <= 1.
double g_closed_form(double q, double eps, double v);
/// d g / d v at v = 0: (q / 3^q)(7 eps - 4).
double g_slope_at_zero(double q, double eps);

std::string entropy_csv_header();
std::string entropy_csv_row(const std::string& id, const EntropyVector& v, const BCResult& bc);

}  // namespace entbell
