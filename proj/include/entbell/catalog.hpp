#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "entbell/distribution.hpp"

namespace entbell::catalog {

// (2,2,2,2)
Distribution p_pr();
Distribution p_c_2222();
Distribution p_noise_2222();

// (2,2,3,3)
Distribution p_nl();
Distribution p_nl_star();
Distribution p_nl_tilde();  // (p_nl + p_nl_star) / 2
Distribution p_c_2233();
Distribution p_noise_2233();
Distribution p_e();

/// eps * p_nl + (1 - eps) * noise; entries A = (2 eps + 1)/9 and B = (1 - eps)/9.
Distribution p_iso(const Rational& eps);
/// eps * p_nl_tilde + (1 - eps) * noise.
Distribution p_iso_tilde(const Rational& eps);
/// v * p_iso(eps) + (1 - v) * p_c_2233.
Distribution p_E(const Rational& eps, const Rational& v);
/// v * p_iso_tilde(eps) + (1 - v) * p_c_2233.
Distribution p_E_tilde(const Rational& eps, const Rational& v);
/// p_iso(eps) with output 1 merged into output 0 for every input of both parties.
Distribution p_cg(const Rational& eps);

/// Three-outcome CGLMP correlations of the maximally entangled state with the
/// standard optimal measurements (Bob's inputs swapped). Entries involve
/// sqrt(3), which is replaced by sqrt3_approx(); the two irrational entries of
/// each row still sum to exactly 8/27.
Distribution p_qm();
/// Rational stand-in for sqrt(3) used by p_qm, accurate to 4e-12.
Rational sqrt3_approx();

/// Table-1 vertex k, 1-based (1..47). Rows 18..47 are deterministic.
Distribution table1_vertex(int k);
std::vector<Distribution> table1_vertices();
inline constexpr int kTable1Size = 47;
inline constexpr int kTable1FirstLocal = 18;

/// Resolves a builtin name such as "pr", "p_nl", "pe", "p_iso:3/5",
/// "p_E:7/10,2/5" or "table1:8". Returns nullopt for unknown names; throws
/// Error(ParseError) for malformed parameters.
std::optional<Distribution> lookup(std::string_view name);

/// Names accepted by lookup (parameterized ones shown with a placeholder).
std::vector<std::string> names();

}  // namespace entbell::catalog
