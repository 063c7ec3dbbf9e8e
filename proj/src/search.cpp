#include "entbell/search.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <sstream>

#include <json.hpp>

#include "entbell/bell.hpp"
#include "entbell/catalog.hpp"
#include "entbell/error.hpp"
#include "entbell/parallel.hpp"
#include "entbell/precision.hpp"
#include "entbell/symmetry.hpp"

namespace entbell {
namespace {

// Sign of each entropy component in I_BC^k, components ordered as EntropyIndex.
std::array<double, 8> bc_coefficients(int k) {
  switch (k) {
    case 1: return {0, 1, 0, 1, 1, -1, -1, -1};
    case 2: return {0, 1, 1, 0, -1, 1, -1, -1};
    case 3: return {1, 0, 0, 1, -1, -1, 1, -1};
    case 4: return {1, 0, 1, 0, -1, -1, -1, 1};
    default: throw Error(ErrorCode::IndexOutOfRange, "BC inequalities are numbered 1..4");
  }
}

// Marginal tables of the eight coexisting sets, concatenated. Linear in the
// distribution, so mixtures can be formed directly on these vectors.
class SetLayout {
 public:
  explicit SetLayout(const Scenario& s) : s_(s) {
    if (s.inputs_a != 2 || s.inputs_b != 2)
      throw Error(ErrorCode::WrongInputCount, "BC searches need two inputs per party");
    std::size_t off = 0;
    for (int c = 0; c < 8; ++c) {
      offset_[c] = off;
      size_[c] = c < 2 ? s.outputs_a : c < 4 ? s.outputs_b : static_cast<std::size_t>(s.outputs_a * s.outputs_b);
      off += size_[c];
    }
    total_ = off;
  }

  std::size_t total() const { return total_; }
  std::size_t offset(int c) const { return offset_[c]; }
  std::size_t size(int c) const { return size_[c]; }

  std::vector<double> project(const Distribution& d) const {
    std::vector<double> out(total_, 0.0);
    const auto p = d.to_doubles();
    for (int a = 0; a < 2; ++a)
      for (int x = 0; x < s_.outputs_a; ++x)
        for (int y = 0; y < s_.outputs_b; ++y) out[offset_[kX0 + a] + x] += p[s_.index(a, 0, x, y)];
    for (int b = 0; b < 2; ++b)
      for (int x = 0; x < s_.outputs_a; ++x)
        for (int y = 0; y < s_.outputs_b; ++y) out[offset_[kY0 + b] + y] += p[s_.index(0, b, x, y)];
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b)
        for (int x = 0; x < s_.outputs_a; ++x)
          for (int y = 0; y < s_.outputs_b; ++y)
            out[offset_[kX0Y0 + 2 * a + b] + x * s_.outputs_b + y] = p[s_.index(a, b, x, y)];
    return out;
  }

 private:
  Scenario s_;
  std::array<std::size_t, 8> offset_{}, size_{};
  std::size_t total_ = 0;
};

class Objective {
 public:
  Objective(const std::vector<Distribution>& gens, double q, int k) : layout_(gens.front().scenario()), q_(q) {
    const auto coef = bc_coefficients(k);
    weight_.resize(layout_.total());
    for (int c = 0; c < 8; ++c)
      for (std::size_t e = 0; e < layout_.size(c); ++e) weight_[layout_.offset(c) + e] = coef[c];
    for (const auto& g : gens) gens_.push_back(layout_.project(g));
    shannon_ = std::abs(q - 1) < kShannonBranch;
    // Tsallis: sum over components of coef * (1 - sum m^q) / (q - 1); the
    // constant part is sum(coef) / (q - 1).
    for (double c : coef) constant_ += c;
  }

  std::size_t dim() const { return layout_.total(); }
  std::size_t count() const { return gens_.size(); }
  const std::vector<double>& generator(std::size_t k) const { return gens_[k]; }

  void mixture(const std::vector<double>& w, std::vector<double>& m) const {
    m.assign(dim(), 0.0);
    for (std::size_t k = 0; k < gens_.size(); ++k) {
      if (w[k] == 0) continue;
      for (std::size_t e = 0; e < m.size(); ++e) m[e] += w[k] * gens_[k][e];
    }
  }

  double value(const std::vector<double>& m) const {
    double v = 0;
    if (shannon_) {
      for (std::size_t e = 0; e < m.size(); ++e)
        if (m[e] > 0) v -= weight_[e] * m[e] * std::log(m[e]);
      return v;
    }
    for (std::size_t e = 0; e < m.size(); ++e)
      if (m[e] > 0) v -= weight_[e] * std::pow(m[e], q_);
    return (v + constant_) / (q_ - 1);
  }

  // Directional derivative toward each generator as A * inf + B, where A is
  // the coefficient of -t ln t (Shannon) or of the t^q term for q < 1.
  void derivatives(const std::vector<double>& m, std::vector<double>& A, std::vector<double>& B) const {
    std::vector<double> grad(m.size(), 0.0);
    for (std::size_t e = 0; e < m.size(); ++e) {
      if (m[e] <= 0) continue;
      grad[e] = shannon_ ? -(std::log(m[e]) + 1) : -q_ * std::pow(m[e], q_ - 1) / (q_ - 1);
      grad[e] *= weight_[e];
    }
    A.assign(gens_.size(), 0.0);
    B.assign(gens_.size(), 0.0);
    for (std::size_t k = 0; k < gens_.size(); ++k) {
      const auto& g = gens_[k];
      double a = 0, b = 0;
      for (std::size_t e = 0; e < m.size(); ++e) {
        if (m[e] > 0) {
          b += grad[e] * (g[e] - m[e]);
        } else if (g[e] > 0) {
          if (shannon_) {
            a += weight_[e] * g[e];
            b -= weight_[e] * g[e] * std::log(g[e]);
          } else if (q_ < 1) {
            a += weight_[e] * std::pow(g[e], q_);
          }
        }
      }
      A[k] = std::abs(a) < 1e-12 ? 0.0 : a;
      B[k] = b;
    }
  }

 private:
  SetLayout layout_;
  double q_;
  bool shannon_ = true;
  double constant_ = 0;
  std::vector<double> weight_;
  std::vector<std::vector<double>> gens_;
};

struct LineResult {
  double gamma = 0;
  double value = 0;
};

// Maximizes phi(gamma) = F(m + gamma * d) over (0, gamma_max] on a geometric
// grid followed by golden-section refinement in log2(gamma).
LineResult line_search(const Objective& obj, const std::vector<double>& m, const std::vector<double>& d,
                       double gamma_max, double current) {
  std::vector<double> trial(m.size());
  auto phi = [&](double gamma) {
    for (std::size_t e = 0; e < m.size(); ++e) {
      trial[e] = m[e] + gamma * d[e];
      if (trial[e] < 0) trial[e] = 0;
    }
    return obj.value(trial);
  };
  auto at = [&](double j) { return gamma_max * std::exp2(-j); };
  double best_j = 0, best = phi(gamma_max);
  double j = 1;
  while (j <= 1000) {
    const double v = phi(at(j));
    if (v > best) best = v, best_j = j;
    j += j < 64 ? 1 : 8;
  }
  // Golden section on [best_j - step, best_j + step] in the exponent.
  const double step = best_j < 64 ? 1 : 8;
  double lo = std::max(0.0, best_j - step), hi = best_j + step;
  const double r = (std::sqrt(5.0) - 1) / 2;
  double x1 = hi - r * (hi - lo), x2 = lo + r * (hi - lo);
  double f1 = phi(at(x1)), f2 = phi(at(x2));
  for (int it = 0; it < 40; ++it) {
    if (f1 > f2) {
      hi = x2, x2 = x1, f2 = f1;
      x1 = hi - r * (hi - lo);
      f1 = phi(at(x1));
    } else {
      lo = x1, x1 = x2, f1 = f2;
      x2 = lo + r * (hi - lo);
      f2 = phi(at(x2));
    }
  }
  if (f1 > best) best = f1, best_j = x1;
  if (f2 > best) best = f2, best_j = x2;
  if (!(best > current)) return {0, current};
  return {at(best_j), best};
}

RestartRecord run_restart(const Objective& obj, std::vector<double> w, std::size_t max_iterations,
                          std::vector<double>& out_w) {
  RestartRecord rec;
  const std::size_t n = obj.count();
  std::vector<double> m, A, B, d(obj.dim());
  obj.mixture(w, m);
  double value = obj.value(m);
  rec.initial = value;
  auto better = [](double a1, double b1, double a2, double b2) { return a1 > a2 || (a1 == a2 && b1 > b2); };
  std::size_t it = 0;
  for (; it < max_iterations; ++it) {
    obj.derivatives(m, A, B);
    std::size_t s = 0, a = n;
    for (std::size_t k = 1; k < n; ++k)
      if (better(A[k], B[k], A[s], B[s])) s = k;
    for (std::size_t k = 0; k < n; ++k)
      if (w[k] > 0 && (a == n || better(A[a], B[a], A[k], B[k]))) a = k;
    LineResult step;
    bool pairwise = false;
    if (a != n && a != s && better(A[s], B[s], A[a], B[a])) {
      const auto& gs = obj.generator(s);
      const auto& ga = obj.generator(a);
      for (std::size_t e = 0; e < d.size(); ++e) d[e] = gs[e] - ga[e];
      step = line_search(obj, m, d, w[a], value);
      pairwise = step.gamma > 0;
    }
    if (!pairwise) {
      // Plain Frank-Wolfe step toward the best vertex.
      const auto& gs = obj.generator(s);
      for (std::size_t e = 0; e < d.size(); ++e) d[e] = gs[e] - m[e];
      step = line_search(obj, m, d, 1.0, value);
      if (step.gamma <= 0) break;
      for (auto& x : w) x *= 1 - step.gamma;
      w[s] += step.gamma;
    } else {
      const double moved = std::min(step.gamma, w[a]);
      w[s] += moved;
      w[a] = moved == w[a] ? 0.0 : w[a] - moved;
    }
    double total = 0;
    for (double x : w) total += x;
    for (auto& x : w) x /= total;
    obj.mixture(w, m);
    const double next = obj.value(m);
    if (!(next > value)) break;
    value = next;
  }
  rec.value = value;
  rec.iterations = it;
  out_w = std::move(w);
  return rec;
}

}  // namespace

double mixture_bc_value(const std::vector<Distribution>& generators, const std::vector<double>& weights, double q,
                        int inequality) {
  const Scenario& s = generators.front().scenario();
  std::vector<double> p(s.dimension(), 0.0);
  for (std::size_t k = 0; k < generators.size(); ++k) {
    const auto g = generators[k].to_doubles();
    for (std::size_t i = 0; i < p.size(); ++i) p[i] += weights[k] * g[i];
  }
  const auto bc = bc_values(entropy_vector(s, p, q));
  return bc.values[inequality - 1];
}

Distribution mixture_from_weights(const std::vector<Distribution>& generators, const std::vector<double>& weights) {
  std::vector<std::pair<Rational, Distribution>> parts;
  Rational total = 0;
  for (double w : weights) total += rational_from_double(std::max(w, 0.0));
  for (std::size_t k = 0; k < generators.size(); ++k)
    parts.emplace_back(rational_from_double(std::max(weights[k], 0.0)) / total, generators[k]);
  return mix(parts);
}

SearchResult maximize_bc(const SearchProblem& problem) {
  const auto& gens = problem.generators;
  if (gens.empty()) throw Error(ErrorCode::EmptyGenerators, "no generators");
  for (const auto& g : gens)
    if (g.scenario() != gens.front().scenario())
      throw Error(ErrorCode::MismatchedScenario, "generators differ in scenario");
  const Objective obj(gens, problem.q, problem.inequality);
  const std::size_t n = gens.size();

  struct Start {
    std::string label;
    std::vector<double> w;
  };
  std::vector<Start> starts;
  for (std::size_t k = 0; k < n; ++k) {
    std::vector<double> w(n, 0.0);
    w[k] = 1;
    starts.push_back({"vertex " + std::to_string(k), w});
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      if (n > problem.all_edges_below && i != 0) break;
      std::vector<double> w(n, 0.0);
      w[i] = w[j] = 0.5;
      starts.push_back({"edge " + std::to_string(i) + "-" + std::to_string(j), w});
    }
  for (std::size_t r = 0; r < problem.restarts; ++r) {
    std::mt19937_64 rng(problem.seed * 0x9E3779B97F4A7C15ull + r);
    std::exponential_distribution<double> expo(1.0);
    std::vector<double> w(n);
    double total = 0;
    for (auto& x : w) total += x = expo(rng);
    for (auto& x : w) x /= total;
    starts.push_back({"random " + std::to_string(r), w});
  }

  std::vector<RestartRecord> records(starts.size());
  std::vector<std::vector<double>> finals(starts.size());
  parallel_for(
      starts.size(),
      [&](std::size_t i) {
        records[i] = run_restart(obj, starts[i].w, problem.max_iterations, finals[i]);
        records[i].start = starts[i].label;
      },
      problem.jobs);

  SearchResult result;
  std::size_t best = 0;
  for (std::size_t i = 1; i < records.size(); ++i)
    if (records[i].value > records[best].value) best = i;
  result.best_value = records[best].value;
  result.best_weights = finals[best];
  result.trace = std::move(records);
  result.verdict = result.best_value > problem.tol ? "violation found" : "no violation found (evidence)";
  return result;
}

std::vector<Distribution> saturating_locals() {
  std::vector<Distribution> out;
  const BellFunctional f = i2233();
  for (auto& d : deterministic_points(kScenario2233))
    if (evaluate(f, d) == f.bound) out.push_back(std::move(d));
  return out;
}

std::vector<Distribution> restrict_to_nonclassical_generators(const Rational& eps) {
  if (!(eps > Rational(1, 2) && eps <= Rational(4, 7)))
    throw Error(ErrorCode::EpsOutOfRange, "restricted generators need 1/2 < eps <= 4/7");
  std::vector<Distribution> out{catalog::p_iso(eps)};
  for (auto& d : saturating_locals()) out.push_back(std::move(d));
  return out;
}

std::string_view to_string(Family f) { return f == Family::E ? "p_E" : "p_E_tilde"; }

Distribution family_point(Family f, const Rational& eps, const Rational& v) {
  return f == Family::E ? catalog::p_E(eps, v) : catalog::p_E_tilde(eps, v);
}

RegionScan region_scan(Family family, const std::vector<double>& q_list, std::size_t grid, double tol, unsigned jobs) {
  if (grid < 2) throw Error(ErrorCode::IndexOutOfRange, "grid needs at least two points per axis");
  RegionScan scan;
  scan.family = family;
  scan.q_list = q_list;
  scan.tol = tol;
  for (std::size_t i = 0; i < grid; ++i) {
    scan.eps_grid.push_back(static_cast<double>(i) / (grid - 1));
    scan.v_grid.push_back(static_cast<double>(i) / (grid - 1));
  }
  const auto nl = (family == Family::E ? catalog::p_nl() : catalog::p_nl_tilde()).to_doubles();
  const auto c = catalog::p_c_2233().to_doubles();
  for (double q : q_list) {
    if (!(q >= 1)) throw Error(ErrorCode::NonPositiveOrder, "region scans take q >= 1");
    std::vector<double> values(grid * grid);
    parallel_for(
        grid,
        [&](std::size_t ei) {
          const double eps = scan.eps_grid[ei];
          std::vector<double> p(36);
          for (std::size_t vi = 0; vi < grid; ++vi) {
            const double v = scan.v_grid[vi];
            for (std::size_t k = 0; k < 36; ++k) p[k] = v * (eps * nl[k] + (1 - eps) / 9) + (1 - v) * c[k];
            values[ei * grid + vi] = bc4(entropy_vector(kScenario2233, p, q));
          }
        },
        jobs);
    std::vector<bool> mask(values.size());
    std::optional<double> boundary;
    for (std::size_t i = 0; i < values.size(); ++i) {
      mask[i] = values[i] > tol;
      if (mask[i] && !boundary) boundary = scan.eps_grid[i / grid];
    }
    scan.values.push_back(std::move(values));
    scan.violated.push_back(std::move(mask));
    scan.boundary.push_back(boundary);
  }
  return scan;
}

std::string to_csv(const RegionScan& scan) {
  std::ostringstream out;
  out.precision(17);
  out << "eps,v,q,value,violated\n";
  const std::size_t g = scan.v_grid.size();
  for (std::size_t qi = 0; qi < scan.q_list.size(); ++qi)
    for (std::size_t i = 0; i < scan.values[qi].size(); ++i)
      out << scan.eps_grid[i / g] << ',' << scan.v_grid[i % g] << ',' << scan.q_list[qi] << ','
          << scan.values[qi][i] << ',' << (scan.violated[qi][i] ? 1 : 0) << '\n';
  return out.str();
}

bool family_violates(Family f, const Rational& eps, double q, double s_max) {
  const Distribution base = catalog::p_c_2233();
  const Distribution target = f == Family::E ? catalog::p_iso(eps) : catalog::p_iso_tilde(eps);
  std::vector<double> schedule{0.0};
  for (double s = 0.25; s <= 16; s *= std::sqrt(2.0)) schedule.push_back(s);
  for (double s = 32; s <= s_max; s *= 2) schedule.push_back(s);
  for (double s : schedule)
    if (bc4_sign_on_segment(base, target, q, s) > 0) return true;
  return false;
}

ThresholdBracket violation_threshold(Family f, double q, const Rational& lo, const Rational& hi,
                                     const Rational& width) {
  ThresholdBracket b{lo, hi, 0};
  while (b.hi - b.lo >= width) {
    const Rational mid = (b.lo + b.hi) / 2;
    ++b.evaluations;
    if (family_violates(f, mid, q))
      b.hi = mid;
    else
      b.lo = mid;
  }
  return b;
}

QSweep q_sweep(const Distribution& d, double q_lo, double q_hi, std::size_t steps, double tol) {
  if (!(q_lo > 0) || !(q_hi > q_lo) || steps < 2)
    throw Error(ErrorCode::NonPositiveOrder, "q range must satisfy 0 < q_lo < q_hi with at least two steps");
  QSweep sweep;
  auto value_at = [&](double q) { return bc_values(entropy_vector(d, q)).values[3]; };
  for (std::size_t i = 0; i < steps; ++i) {
    const double q = q_lo + (q_hi - q_lo) * static_cast<double>(i) / (steps - 1);
    sweep.q.push_back(q);
    sweep.value.push_back(value_at(q));
  }
  std::size_t best = 0;
  for (std::size_t i = 0; i < steps; ++i) {
    if (sweep.value[i] > sweep.value[best]) best = i;
    if (sweep.value[i] > tol) {
      if (!sweep.first_violation) sweep.first_violation = sweep.q[i];
      sweep.last_violation = sweep.q[i];
    }
  }
  sweep.max_value = sweep.value[best];
  sweep.argmax_q = sweep.q[best];
  for (std::size_t i = 0; i + 1 < steps; ++i)
    if (sweep.value[i] > tol && sweep.value[i + 1] <= tol) {
      double lo = sweep.q[i], hi = sweep.q[i + 1];
      for (int it = 0; it < 60; ++it) {
        const double mid = (lo + hi) / 2;
        (value_at(mid) > tol ? lo : hi) = mid;
      }
      sweep.upper_crossing = (lo + hi) / 2;
      break;
    }
  return sweep;
}

std::string to_csv(const QSweep& sweep) {
  std::ostringstream out;
  out.precision(17);
  out << "q,value\n";
  for (std::size_t i = 0; i < sweep.q.size(); ++i) out << sweep.q[i] << ',' << sweep.value[i] << '\n';
  return out.str();
}

ChainReport footnote_chain_check() {
  ChainReport r;
  const Rational eps(7, 10);
  const Distribution pe = catalog::p_E(eps, Rational(2, 5));
  const Distribution lhs = mix({{Rational(1, 20), pe}, {Rational(19, 20), catalog::p_c_2233()}});
  const Distribution rhs = mix({{Rational(1, 50), catalog::p_iso(eps)}, {Rational(49, 50), catalog::p_c_2233()}});
  r.identity_holds = lhs == rhs;
  r.tsallis2_on_pe = bc_values(entropy_vector(pe, 2.0)).values[3];
  r.shannon_on_pe = bc_values(entropy_vector(pe, 1.0)).values[3];
  r.shannon_on_mix = bc_values(entropy_vector(lhs, 1.0)).values[3];
  return r;
}

std::string to_json(const SearchResult& result) {
  nlohmann::json j;
  j["best_value"] = result.best_value;
  j["best_weights"] = result.best_weights;
  j["verdict"] = result.verdict;
  auto& rows = j["restarts"] = nlohmann::json::array();
  for (const auto& r : result.trace)
    rows.push_back({{"start", r.start}, {"initial", r.initial}, {"value", r.value}, {"iterations", r.iterations}});
  return j.dump(1);
}

}  // namespace entbell
