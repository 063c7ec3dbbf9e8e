#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "entbell/rational.hpp"

namespace entbell {

enum class Sense { LessEqual, Equal, GreaterEqual };
enum class LPStatus { Optimal, Infeasible, Unbounded };
std::string_view to_string(LPStatus status);

/// maximize c.x subject to rows a_i.x (<=, =, >=) b_i and x >= 0.
struct LinearProgram {
  struct Row {
    std::vector<Rational> coeffs;  // dense, num_vars entries
    Sense sense;
    Rational rhs;
  };

  std::size_t num_vars = 0;
  std::vector<Rational> objective;
  std::vector<Row> rows;

  explicit LinearProgram(std::size_t n = 0) : num_vars(n), objective(n) {}
  void add_row(std::vector<Rational> coeffs, Sense sense, Rational rhs);
};

/// Outcome with certificates:
///  Optimal    - x optimal, y dual optimal (y_i >= 0 on <= rows, <= 0 on >= rows),
///               objective = c.x = b.y;
///  Infeasible - y is a Farkas vector: y^T A >= 0, same sign pattern, b.y < 0;
///  Unbounded  - x feasible and ray r >= 0 with A r in the recession cone, c.r > 0.
struct LPSolution {
  LPStatus status = LPStatus::Infeasible;
  Rational objective;
  std::vector<Rational> x;
  std::vector<Rational> y;
  std::vector<Rational> ray;
  std::size_t pivots = 0;
};

struct SimplexOptions {
  /// Consecutive degenerate pivots before switching from Dantzig's rule to Bland's.
  std::size_t degenerate_streak = 32;
  /// Solve the dual program when the primal has many more rows than columns.
  bool allow_dual = true;
};

/// Exact simplex over integer-scaled tableaux (fraction-free pivoting).
LPSolution solve(const LinearProgram& lp, const SimplexOptions& options = {});
/// Explicit primal and dual routes (solve() picks one).
LPSolution solve_primal(const LinearProgram& lp, const SimplexOptions& options = {});
LPSolution solve_via_dual(const LinearProgram& lp, const SimplexOptions& options = {});

/// Exact check of the certificate carried by `solution`.
bool verify(const LinearProgram& lp, const LPSolution& solution);

std::string to_json(const LPSolution& solution);

}  // namespace entbell
