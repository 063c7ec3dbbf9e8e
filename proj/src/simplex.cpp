#include "entbell/simplex.hpp"

#include <json.hpp>

#include "entbell/error.hpp"

namespace entbell {

std::string_view to_string(LPStatus status) {
  switch (status) {
    case LPStatus::Optimal: return "Optimal";
    case LPStatus::Infeasible: return "Infeasible";
    case LPStatus::Unbounded: return "Unbounded";
  }
  return "Infeasible";
}

void LinearProgram::add_row(std::vector<Rational> coeffs, Sense sense, Rational rhs) {
  if (coeffs.size() != num_vars) throw Error(ErrorCode::IndexOutOfRange, "row length does not match variable count");
  for (auto& c : coeffs) c.canonicalize();
  rhs.canonicalize();
  rows.push_back({std::move(coeffs), sense, std::move(rhs)});
}

namespace {

Rational ratio(const mpz_class& num, const mpz_class& den) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

// GMP comparisons assume reduced fractions; callers may fill fields directly.
LinearProgram canonical_copy(const LinearProgram& lp) {
  LinearProgram out = lp;
  for (auto& c : out.objective) c.canonicalize();
  for (auto& row : out.rows) {
    for (auto& c : row.coeffs) c.canonicalize();
    row.rhs.canonicalize();
  }
  return out;
}

constexpr std::size_t kNone = static_cast<std::size_t>(-1);

// Fraction-free tableau: true entry = t(i, j) / det. Rows 0..m-1 are
// constraints, row m the phase-II objective and row m+1 the phase-I objective.
class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), t_(rows * cols), det_(1) {}

  mpz_class& at(std::size_t i, std::size_t j) { return t_[i * cols_ + j]; }
  const mpz_class& at(std::size_t i, std::size_t j) const { return t_[i * cols_ + j]; }
  const mpz_class& det() const { return det_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  void pivot(std::size_t r, std::size_t c) {
    const mpz_class p = at(r, c);
    mpz_class tmp;
    for (std::size_t i = 0; i < rows_; ++i) {
      if (i == r) continue;
      mpz_class* row = &t_[i * cols_];
      const mpz_class* prow = &t_[r * cols_];
      const mpz_class factor = row[c];
      if (sgn(factor) == 0) {
        for (std::size_t j = 0; j < cols_; ++j) {
          if (sgn(row[j]) == 0) continue;
          mpz_mul(row[j].get_mpz_t(), row[j].get_mpz_t(), p.get_mpz_t());
          mpz_divexact(row[j].get_mpz_t(), row[j].get_mpz_t(), det_.get_mpz_t());
        }
        continue;
      }
      for (std::size_t j = 0; j < cols_; ++j) {
        mpz_mul(tmp.get_mpz_t(), row[j].get_mpz_t(), p.get_mpz_t());
        mpz_submul(tmp.get_mpz_t(), factor.get_mpz_t(), prow[j].get_mpz_t());
        mpz_divexact(row[j].get_mpz_t(), tmp.get_mpz_t(), det_.get_mpz_t());
      }
    }
    det_ = p;
    if (sgn(det_) < 0) {
      for (auto& e : t_) e = -e;
      det_ = -det_;
    }
  }

 private:
  std::size_t rows_, cols_;
  std::vector<mpz_class> t_;
  mpz_class det_;
};

struct Standardized {
  std::size_t m = 0, n = 0;
  std::vector<int> sign;            // +1 or -1 applied to each row so that rhs >= 0
  std::vector<mpz_class> scale;     // positive integer row multiplier
  std::vector<Sense> sense;         // after sign normalization
  std::vector<std::size_t> slack;   // slack/surplus column or kNone
  std::vector<std::size_t> art;     // artificial column or kNone
  std::size_t first_art = 0;
  std::size_t rhs = 0;
  mpz_class obj_scale;
};

class PrimalSolver {
 public:
  PrimalSolver(const LinearProgram& lp, const SimplexOptions& opt) : lp_(lp), opt_(opt), tab_(1, 1) { build(); }

  LPSolution run() {
    LPSolution sol;
    const std::size_t m = s_.m;
    if (s_.first_art < s_.rhs) {
      const auto outcome = iterate(m + 1, sol.pivots);
      (void)outcome;  // phase I is bounded above by zero
      if (sgn(tab_.at(m + 1, s_.rhs)) < 0) {
        sol.status = LPStatus::Infeasible;
        sol.y = farkas();
        return sol;
      }
      drive_out_artificials(sol.pivots);
    }
    const std::size_t entering = iterate(m, sol.pivots);
    sol.x = primal_values();
    if (entering != kNone) {
      sol.status = LPStatus::Unbounded;
      sol.ray.assign(s_.n, 0);
      if (entering < s_.n) sol.ray[entering] = 1;
      for (std::size_t i = 0; i < m; ++i)
        if (basis_[i] < s_.n) sol.ray[basis_[i]] = -ratio(tab_.at(i, entering), tab_.det());
      for (auto& r : sol.ray) r.canonicalize();
      return sol;
    }
    sol.status = LPStatus::Optimal;
    sol.objective = ratio(tab_.at(m, s_.rhs), tab_.det() * s_.obj_scale);
    sol.objective.canonicalize();
    sol.y.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
      const std::size_t col = s_.slack[i] != kNone && s_.sense[i] == Sense::LessEqual ? s_.slack[i] : s_.art[i];
      Rational y = ratio(tab_.at(m, col), tab_.det() * s_.obj_scale);
      y *= Rational(s_.scale[i] * s_.sign[i]);
      y.canonicalize();
      sol.y[i] = y;
    }
    return sol;
  }

 private:
  void build() {
    const std::size_t m = lp_.rows.size(), n = lp_.num_vars;
    s_.m = m;
    s_.n = n;
    s_.sign.resize(m);
    s_.scale.resize(m);
    s_.sense.resize(m);
    s_.slack.assign(m, kNone);
    s_.art.assign(m, kNone);
    std::size_t col = n;
    for (std::size_t i = 0; i < m; ++i) {
      const auto& row = lp_.rows[i];
      s_.sign[i] = sgn(row.rhs) < 0 ? -1 : 1;
      Sense sense = row.sense;
      if (s_.sign[i] < 0 && sense != Sense::Equal)
        sense = sense == Sense::LessEqual ? Sense::GreaterEqual : Sense::LessEqual;
      s_.sense[i] = sense;
      if (sense != Sense::Equal) s_.slack[i] = col++;
    }
    s_.first_art = col;
    for (std::size_t i = 0; i < m; ++i)
      if (s_.sense[i] != Sense::LessEqual) s_.art[i] = col++;
    s_.rhs = col;
    tab_ = Tableau(m + 2, col + 1);
    basis_.assign(m, kNone);
    for (std::size_t i = 0; i < m; ++i) {
      const auto& row = lp_.rows[i];
      mpz_class l = row.rhs.get_den();
      for (const auto& a : row.coeffs) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), a.get_den_mpz_t());
      s_.scale[i] = l;
      for (std::size_t j = 0; j < n; ++j) {
        if (sgn(row.coeffs[j]) == 0) continue;
        tab_.at(i, j) = s_.sign[i] * (row.coeffs[j].get_num() * (l / row.coeffs[j].get_den()));
      }
      tab_.at(i, s_.rhs) = s_.sign[i] * (row.rhs.get_num() * (l / row.rhs.get_den()));
      if (s_.slack[i] != kNone) tab_.at(i, s_.slack[i]) = s_.sense[i] == Sense::LessEqual ? 1 : -1;
      if (s_.art[i] != kNone) {
        tab_.at(i, s_.art[i]) = 1;
        basis_[i] = s_.art[i];
      } else {
        basis_[i] = s_.slack[i];
      }
    }
    mpz_class l = 1;
    for (const auto& c : lp_.objective) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.get_den_mpz_t());
    s_.obj_scale = l;
    for (std::size_t j = 0; j < n; ++j)
      if (sgn(lp_.objective[j]) != 0) tab_.at(m, j) = -(lp_.objective[j].get_num() * (l / lp_.objective[j].get_den()));
    // Phase-I objective: maximize minus the sum of artificials, expressed in
    // the nonbasic columns.
    for (std::size_t i = 0; i < m; ++i) {
      if (s_.art[i] == kNone) continue;
      for (std::size_t j = 0; j <= s_.rhs; ++j)
        if (j < s_.first_art || j == s_.rhs) tab_.at(m + 1, j) -= tab_.at(i, j);
    }
  }

  // Runs simplex iterations on objective row `obj`; returns kNone at
  // optimality or the entering column of an unbounded direction.
  std::size_t iterate(std::size_t obj, std::size_t& pivots) {
    std::size_t streak = 0;
    while (true) {
      const bool bland = streak >= opt_.degenerate_streak;
      std::size_t enter = kNone;
      for (std::size_t j = 0; j < s_.first_art; ++j) {
        const auto& r = tab_.at(obj, j);
        if (sgn(r) >= 0) continue;
        if (enter == kNone || (!bland && r < tab_.at(obj, enter))) enter = j;
        if (bland) break;
      }
      if (enter == kNone) return kNone;
      std::size_t leave = kNone;
      for (std::size_t i = 0; i < s_.m; ++i) {
        const auto& a = tab_.at(i, enter);
        if (sgn(a) <= 0) continue;
        if (leave == kNone) {
          leave = i;
          continue;
        }
        // Compare rhs_i / a_i with rhs_leave / a_leave.
        const mpz_class lhs = tab_.at(i, s_.rhs) * tab_.at(leave, enter);
        const mpz_class rhs = tab_.at(leave, s_.rhs) * a;
        if (lhs < rhs || (lhs == rhs && basis_[i] < basis_[leave])) leave = i;
      }
      if (leave == kNone) return enter;
      streak = sgn(tab_.at(leave, s_.rhs)) == 0 ? streak + 1 : 0;
      tab_.pivot(leave, enter);
      basis_[leave] = enter;
      ++pivots;
    }
  }

  void drive_out_artificials(std::size_t& pivots) {
    for (std::size_t i = 0; i < s_.m; ++i) {
      if (basis_[i] < s_.first_art) continue;
      for (std::size_t j = 0; j < s_.first_art; ++j) {
        if (sgn(tab_.at(i, j)) == 0) continue;
        tab_.pivot(i, j);
        basis_[i] = j;
        ++pivots;
        break;
      }
    }
  }

  std::vector<Rational> primal_values() const {
    std::vector<Rational> x(s_.n);
    for (std::size_t i = 0; i < s_.m; ++i)
      if (basis_[i] < s_.n) {
        x[basis_[i]] = ratio(tab_.at(i, s_.rhs), tab_.det());
        x[basis_[i]].canonicalize();
      }
    return x;
  }

  std::vector<Rational> farkas() const {
    const std::size_t row = s_.m + 1;
    std::vector<Rational> y(s_.m);
    for (std::size_t i = 0; i < s_.m; ++i) {
      Rational v;
      if (s_.art[i] != kNone)
        v = ratio(tab_.at(row, s_.art[i]), tab_.det()) - 1;
      else
        v = ratio(tab_.at(row, s_.slack[i]), tab_.det());
      v *= Rational(s_.scale[i] * s_.sign[i]);
      v.canonicalize();
      y[i] = v;
    }
    return y;
  }

  const LinearProgram& lp_;
  SimplexOptions opt_;
  Standardized s_;
  Tableau tab_;
  std::vector<std::size_t> basis_;
};

}  // namespace

LPSolution solve_primal(const LinearProgram& lp, const SimplexOptions& options) {
  if (lp.objective.size() != lp.num_vars)
    throw Error(ErrorCode::IndexOutOfRange, "objective length does not match variable count");
  return PrimalSolver(canonical_copy(lp), options).run();
}

LPSolution solve_via_dual(const LinearProgram& input, const SimplexOptions& options) {
  const LinearProgram lp = canonical_copy(input);
  // Rows as <= or =: sign[i] = -1 marks a negated >= row.
  const std::size_t m = lp.rows.size(), n = lp.num_vars;
  std::vector<int> sign(m, 1);
  std::vector<std::size_t> plus(m), minus(m, kNone);
  std::size_t nd = 0;
  for (std::size_t i = 0; i < m; ++i) {
    if (lp.rows[i].sense == Sense::GreaterEqual) sign[i] = -1;
    plus[i] = nd++;
    if (lp.rows[i].sense == Sense::Equal) minus[i] = nd++;
  }
  LinearProgram dual(nd);
  for (std::size_t i = 0; i < m; ++i) {
    const Rational b = sign[i] * lp.rows[i].rhs;
    dual.objective[plus[i]] = -b;
    if (minus[i] != kNone) dual.objective[minus[i]] = b;
  }
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<Rational> coeffs(nd);
    for (std::size_t i = 0; i < m; ++i) {
      const Rational a = sign[i] * lp.rows[i].coeffs[j];
      coeffs[plus[i]] = a;
      if (minus[i] != kNone) coeffs[minus[i]] = -a;
    }
    dual.add_row(std::move(coeffs), Sense::GreaterEqual, lp.objective[j]);
  }
  SimplexOptions inner = options;
  inner.allow_dual = false;
  const LPSolution d = solve_primal(dual, inner);
  auto fold = [&](const std::vector<Rational>& v) {
    std::vector<Rational> y(m);
    for (std::size_t i = 0; i < m; ++i) {
      y[i] = v[plus[i]];
      if (minus[i] != kNone) y[i] -= v[minus[i]];
      y[i] *= sign[i];
    }
    return y;
  };
  LPSolution sol;
  sol.pivots = d.pivots;
  if (d.status == LPStatus::Optimal) {
    sol.status = LPStatus::Optimal;
    sol.objective = -d.objective;
    sol.y = fold(d.x);
    sol.x.resize(n);
    for (std::size_t j = 0; j < n; ++j) sol.x[j] = -d.y[j];
    return sol;
  }
  if (d.status == LPStatus::Unbounded) {
    sol.status = LPStatus::Infeasible;
    sol.y = fold(d.ray);
    return sol;
  }
  LPSolution primal = solve_primal(lp, inner);
  primal.pivots += d.pivots;
  return primal;
}

LPSolution solve(const LinearProgram& lp, const SimplexOptions& options) {
  if (options.allow_dual && lp.rows.size() > 2 * lp.num_vars) return solve_via_dual(lp, options);
  return solve_primal(lp, options);
}

namespace {

Rational dot(const std::vector<Rational>& a, const std::vector<Rational>& b) {
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (sgn(a[i]) != 0 && sgn(b[i]) != 0) s += a[i] * b[i];
  return s;
}

bool sign_ok(Sense sense, const Rational& y) {
  switch (sense) {
    case Sense::LessEqual: return sgn(y) >= 0;
    case Sense::GreaterEqual: return sgn(y) <= 0;
    case Sense::Equal: return true;
  }
  return false;
}

bool primal_feasible(const LinearProgram& lp, const std::vector<Rational>& x) {
  if (x.size() != lp.num_vars) return false;
  for (const auto& v : x)
    if (sgn(v) < 0) return false;
  for (const auto& row : lp.rows) {
    const Rational ax = dot(row.coeffs, x);
    if (row.sense == Sense::LessEqual && ax > row.rhs) return false;
    if (row.sense == Sense::GreaterEqual && ax < row.rhs) return false;
    if (row.sense == Sense::Equal && ax != row.rhs) return false;
  }
  return true;
}

// y^T A_j for every column j.
std::vector<Rational> transpose_times(const LinearProgram& lp, const std::vector<Rational>& y) {
  std::vector<Rational> out(lp.num_vars);
  for (std::size_t i = 0; i < lp.rows.size(); ++i) {
    if (sgn(y[i]) == 0) continue;
    for (std::size_t j = 0; j < lp.num_vars; ++j)
      if (sgn(lp.rows[i].coeffs[j]) != 0) out[j] += y[i] * lp.rows[i].coeffs[j];
  }
  return out;
}

}  // namespace

bool verify(const LinearProgram& input, const LPSolution& sol) {
  const LinearProgram lp = canonical_copy(input);
  switch (sol.status) {
    case LPStatus::Optimal: {
      if (!primal_feasible(lp, sol.x) || sol.y.size() != lp.rows.size()) return false;
      for (std::size_t i = 0; i < lp.rows.size(); ++i)
        if (!sign_ok(lp.rows[i].sense, sol.y[i])) return false;
      const auto aty = transpose_times(lp, sol.y);
      for (std::size_t j = 0; j < lp.num_vars; ++j)
        if (aty[j] < lp.objective[j]) return false;
      Rational by = 0;
      for (std::size_t i = 0; i < lp.rows.size(); ++i) by += sol.y[i] * lp.rows[i].rhs;
      const Rational cx = dot(lp.objective, sol.x);
      return cx == by && cx == sol.objective;
    }
    case LPStatus::Infeasible: {
      if (sol.y.size() != lp.rows.size()) return false;
      for (std::size_t i = 0; i < lp.rows.size(); ++i)
        if (!sign_ok(lp.rows[i].sense, sol.y[i])) return false;
      for (const auto& v : transpose_times(lp, sol.y))
        if (sgn(v) < 0) return false;
      Rational by = 0;
      for (std::size_t i = 0; i < lp.rows.size(); ++i) by += sol.y[i] * lp.rows[i].rhs;
      return sgn(by) < 0;
    }
    case LPStatus::Unbounded: {
      if (!primal_feasible(lp, sol.x) || sol.ray.size() != lp.num_vars) return false;
      for (const auto& v : sol.ray)
        if (sgn(v) < 0) return false;
      for (const auto& row : lp.rows) {
        const Rational ar = dot(row.coeffs, sol.ray);
        if (row.sense == Sense::LessEqual && sgn(ar) > 0) return false;
        if (row.sense == Sense::GreaterEqual && sgn(ar) < 0) return false;
        if (row.sense == Sense::Equal && sgn(ar) != 0) return false;
      }
      return sgn(dot(lp.objective, sol.ray)) > 0;
    }
  }
  return false;
}

std::string to_json(const LPSolution& sol) {
  auto strings = [](const std::vector<Rational>& v) {
    nlohmann::json a = nlohmann::json::array();
    for (const auto& e : v) a.push_back(to_string(e));
    return a;
  };
  nlohmann::json j;
  j["status"] = std::string(to_string(sol.status));
  if (sol.status == LPStatus::Optimal) j["objective"] = to_string(sol.objective);
  j["x"] = strings(sol.x);
  j["y"] = strings(sol.y);
  if (!sol.ray.empty()) j["ray"] = strings(sol.ray);
  j["pivots"] = sol.pivots;
  return j.dump();
}

}  // namespace entbell
