#include "entbell/polytope.hpp"

#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "entbell/error.hpp"
#include "entbell/parallel.hpp"

namespace entbell {

std::string to_json(const LPCertificate& cert) {
  auto strings = [](const std::vector<Rational>& v) {
    nlohmann::json a = nlohmann::json::array();
    for (const auto& e : v) a.push_back(to_string(e));
    return a;
  };
  nlohmann::json j;
  j["status"] = std::string(to_string(cert.status));
  if (cert.status == LPStatus::Optimal) j["objective"] = to_string(cert.objective);
  j["weights"] = strings(cert.weights);
  j["dual"] = strings(cert.dual);
  j["verified"] = cert.verified;
  return j.dump();
}

namespace {

LPCertificate certificate(const LinearProgram& lp, const LPSolution& sol) {
  LPCertificate cert;
  cert.status = sol.status;
  cert.objective = sol.objective;
  cert.weights = sol.x;
  cert.dual = sol.y;
  cert.pivots = sol.pivots;
  cert.verified = verify(lp, sol);
  return cert;
}

// Normalization and no-signalling equalities as rows over the flattened table.
std::vector<std::vector<Rational>> affine_equalities(const Scenario& s, bool include_normalization) {
  std::vector<std::vector<Rational>> rows;
  if (include_normalization)
    for (int a = 0; a < s.inputs_a; ++a)
      for (int b = 0; b < s.inputs_b; ++b) {
        std::vector<Rational> r(s.dimension());
        for (int x = 0; x < s.outputs_a; ++x)
          for (int y = 0; y < s.outputs_b; ++y) r[s.index(a, b, x, y)] = 1;
        rows.push_back(std::move(r));
      }
  for (int a = 0; a < s.inputs_a; ++a)
    for (int b = 1; b < s.inputs_b; ++b)
      for (int x = 0; x < s.outputs_a; ++x) {
        std::vector<Rational> r(s.dimension());
        for (int y = 0; y < s.outputs_b; ++y) {
          r[s.index(a, 0, x, y)] += 1;
          r[s.index(a, b, x, y)] -= 1;
        }
        rows.push_back(std::move(r));
      }
  for (int b = 0; b < s.inputs_b; ++b)
    for (int a = 1; a < s.inputs_a; ++a)
      for (int y = 0; y < s.outputs_b; ++y) {
        std::vector<Rational> r(s.dimension());
        for (int x = 0; x < s.outputs_a; ++x) {
          r[s.index(0, b, x, y)] += 1;
          r[s.index(a, b, x, y)] -= 1;
        }
        rows.push_back(std::move(r));
      }
  return rows;
}

// Incremental row echelon form for exact rank computations.
class RankTracker {
 public:
  explicit RankTracker(std::size_t dim) : dim_(dim) {}

  void add(std::vector<Rational> row) {
    if (rank() == dim_) return;
    for (std::size_t k = 0; k < basis_.size(); ++k) {
      const std::size_t p = pivots_[k];
      if (sgn(row[p]) == 0) continue;
      const Rational f = row[p];
      for (std::size_t j = p; j < dim_; ++j)
        if (sgn(basis_[k][j]) != 0) row[j] -= f * basis_[k][j];
    }
    std::size_t p = 0;
    while (p < dim_ && sgn(row[p]) == 0) ++p;
    if (p == dim_) return;
    const Rational inv = 1 / row[p];
    for (std::size_t j = p; j < dim_; ++j) row[j] *= inv;
    // Keep the stored rows reduced against the new pivot.
    for (auto& b : basis_) {
      if (sgn(b[p]) == 0) continue;
      const Rational f = b[p];
      for (std::size_t j = p; j < dim_; ++j)
        if (sgn(row[j]) != 0) b[j] -= f * row[j];
    }
    basis_.push_back(std::move(row));
    pivots_.push_back(p);
  }

  std::size_t rank() const { return basis_.size(); }

 private:
  std::size_t dim_;
  std::vector<std::vector<Rational>> basis_;
  std::vector<std::size_t> pivots_;
};

std::vector<Rational> subtract(std::span<const Rational> a, std::span<const Rational> b) {
  std::vector<Rational> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

}  // namespace

LPCertificate local_weight(const Distribution& d) {
  if (!is_no_signalling(d)) throw Error(ErrorCode::SignallingInput, "local weight needs a no-signalling input");
  const Scenario& s = d.scenario();
  const auto strategies = enumerate_strategies(s);
  LinearProgram lp(strategies.size());
  for (auto& c : lp.objective) c = 1;
  std::vector<std::vector<Rational>> rows(s.dimension(), std::vector<Rational>(strategies.size()));
  for (std::size_t k = 0; k < strategies.size(); ++k)
    for (int a = 0; a < s.inputs_a; ++a)
      for (int b = 0; b < s.inputs_b; ++b) rows[s.index(a, b, strategies[k].alice[a], strategies[k].bob[b])][k] = 1;
  const auto p = d.flat();
  for (std::size_t i = 0; i < rows.size(); ++i) lp.add_row(std::move(rows[i]), Sense::LessEqual, p[i]);
  return certificate(lp, solve(lp));
}

LocalityResult is_local(const Distribution& d) {
  LocalityResult r;
  r.certificate = local_weight(d);
  r.local = r.certificate.status == LPStatus::Optimal && r.certificate.objective == 1;
  if (!r.local && r.certificate.status == LPStatus::Optimal) {
    std::vector<Rational> coeffs(r.certificate.dual.size());
    for (std::size_t i = 0; i < coeffs.size(); ++i) coeffs[i] = -r.certificate.dual[i];
    BellFunctional f{d.scenario(), std::move(coeffs), Rational(-1), FamilyTag::Custom, "local-weight dual"};
    r.separator = std::move(f);
  }
  return r;
}

PolytopeModel pi_chsh_model(bool i2233_floor) {
  PolytopeModel m;
  m.scenario = kScenario2233;
  m.constraints = chsh_orbit(kScenario2233);
  if (i2233_floor) {
    BellFunctional f = i2233();
    for (auto& c : f.coeffs) c = -c;
    f.bound = -f.bound;
    f.generating_symmetry = "I2233^1 >= 2";
    m.constraints.push_back(std::move(f));
  }
  return m;
}

LPCertificate hull_membership(const PolytopeModel& model, const Distribution& d) {
  const std::size_t n = model.generators.size();
  LinearProgram lp(n);
  lp.add_row(std::vector<Rational>(n, Rational(1)), Sense::Equal, Rational(1));
  const auto p = d.flat();
  for (std::size_t i = 0; i < p.size(); ++i) {
    std::vector<Rational> row(n);
    for (std::size_t k = 0; k < n; ++k) row[k] = model.generators[k].flat()[i];
    lp.add_row(std::move(row), Sense::Equal, p[i]);
  }
  return certificate(lp, solve(lp));
}

VertexReport verify_vertex(const Distribution& d, const PolytopeModel& model) {
  VertexReport report;
  const Scenario& s = d.scenario();
  report.feasible = is_no_signalling(d);
  RankTracker rank(s.dimension());
  for (auto& row : affine_equalities(s, true)) rank.add(std::move(row));
  const auto p = d.flat();
  for (std::size_t i = 0; i < p.size(); ++i)
    if (sgn(p[i]) == 0) {
      std::vector<Rational> e(s.dimension());
      e[i] = 1;
      rank.add(std::move(e));
      ++report.tight_positivity;
    }
  for (std::size_t k = 0; k < model.constraints.size(); ++k) {
    const auto& f = model.constraints[k];
    const Rational v = evaluate(f, d);
    if (v > f.bound) report.feasible = false;
    if (v == f.bound) {
      report.tight_constraints.push_back(k);
      rank.add(f.coeffs);
    }
  }
  report.rank = rank.rank();
  report.extremal = report.feasible && report.rank == s.dimension();
  return report;
}

LPCertificate joint_violation_lp(std::size_t i, std::size_t j, const JointViolationOptions& options) {
  const auto& orbit = i2233_orbit();
  if (i < 1 || i > orbit.size() || j > orbit.size())
    throw Error(ErrorCode::IndexOutOfRange, "I2233 indices run from 1 to " + std::to_string(orbit.size()));
  const Scenario& s = kScenario2233;
  const std::size_t dim = s.dimension();
  LinearProgram lp(dim + 1);
  lp.objective[dim] = 1;
  auto widen = [&](const std::vector<Rational>& coeffs, const Rational& eps_coeff) {
    std::vector<Rational> row(coeffs);
    row.push_back(eps_coeff);
    return row;
  };
  const auto eq = affine_equalities(s, true);
  for (std::size_t k = 0; k < eq.size(); ++k)
    lp.add_row(widen(eq[k], 0), Sense::Equal, k < 4 ? Rational(1) : Rational(0));
  if (options.include_chsh)
    for (const auto& f : chsh_orbit(s)) lp.add_row(widen(f.coeffs, 0), Sense::LessEqual, f.bound);
  for (std::size_t idx : {i, j}) {
    if (idx == 0) continue;
    const auto& f = orbit[idx - 1];
    lp.add_row(widen(f.coeffs, -1), Sense::GreaterEqual, f.bound);
  }
  return certificate(lp, solve(lp));
}

ConvexityResult union_is_convex(std::span<const PolytopeModel> polys, const UnionOptions& options) {
  ConvexityResult result;
  if (polys.empty()) return result;
  // Global vertex ids.
  std::unordered_map<Distribution, std::size_t, DistributionHash> ids;
  std::vector<const Distribution*> points;
  std::vector<std::vector<std::size_t>> vertex_ids(polys.size());
  std::vector<std::vector<std::size_t>> vertex_pos;  // id -> (poly, index) of first occurrence
  for (std::size_t k = 0; k < polys.size(); ++k)
    for (std::size_t v = 0; v < polys[k].generators.size(); ++v) {
      const auto& g = polys[k].generators[v];
      auto [it, fresh] = ids.emplace(g, points.size());
      if (fresh) {
        points.push_back(&g);
        vertex_pos.push_back({k, v});
      }
      vertex_ids[k].push_back(it->second);
    }
  std::vector<std::size_t> u_ids;
  std::vector<bool> in_u(points.size(), false);
  for (std::size_t id : vertex_ids[0])
    if (!in_u[id]) in_u[id] = true, u_ids.push_back(id);

  auto hull_of = [&](const std::vector<std::size_t>& which) {
    PolytopeModel m;
    m.scenario = polys[0].scenario;
    for (std::size_t id : which) m.generators.push_back(*points[id]);
    return m;
  };

  for (std::size_t k = 1; k < polys.size() && result.convex; ++k) {
    std::vector<bool> in_k(points.size(), false);
    for (std::size_t id : vertex_ids[k]) in_k[id] = true;
    std::vector<std::pair<std::size_t, std::size_t>> pending;
    for (std::size_t v : u_ids)
      for (std::size_t w : vertex_ids[k]) {
        ++result.pairs_checked;
        if (in_k[v] || in_u[w]) continue;
        if (options.oracle) {
          const auto known = options.oracle(*points[v], *points[w]);
          if (known.has_value()) {
            if (*known) continue;
            result.convex = false;
            result.witness = std::array<std::size_t, 4>{vertex_pos[v][0], vertex_pos[v][1], vertex_pos[w][0],
                                                        vertex_pos[w][1]};
            break;
          }
        }
        pending.emplace_back(v, w);
      }
    if (!result.convex) break;
    if (!pending.empty()) {
      const PolytopeModel hull_u = hull_of(u_ids);
      const PolytopeModel hull_k = hull_of(vertex_ids[k]);
      std::vector<char> contained(pending.size(), 0);
      std::atomic<std::size_t> programs{0};
      parallel_for(
          pending.size(),
          [&](std::size_t idx) {
            const Distribution& v = *points[pending[idx].first];
            const Distribution& w = *points[pending[idx].second];
            for (int t = 1; t < options.subdivision; ++t) {
              Rational tt(t, options.subdivision);
              tt.canonicalize();
              const Distribution q = mix({{1 - tt, v}, {tt, w}});
              programs += 2;
              if (hull_membership(hull_u, q).status == LPStatus::Optimal &&
                  hull_membership(hull_k, q).status == LPStatus::Optimal) {
                contained[idx] = 1;
                return;
              }
            }
            // Exact: some point of the segment lies in both hulls.
            const std::size_t nu = hull_u.generators.size(), nk = hull_k.generators.size();
            const std::size_t dim = v.flat().size();
            LinearProgram lp(1 + nu + nk);
            std::vector<Rational> t_row(1 + nu + nk);
            t_row[0] = 1;
            lp.add_row(t_row, Sense::LessEqual, Rational(1));
            std::vector<Rational> sum_u(1 + nu + nk), sum_k(1 + nu + nk);
            for (std::size_t a = 0; a < nu; ++a) sum_u[1 + a] = 1;
            for (std::size_t b = 0; b < nk; ++b) sum_k[1 + nu + b] = 1;
            lp.add_row(sum_u, Sense::Equal, Rational(1));
            lp.add_row(sum_k, Sense::Equal, Rational(1));
            const auto dir = subtract(w.flat(), v.flat());
            for (std::size_t i = 0; i < dim; ++i) {
              std::vector<Rational> ru(1 + nu + nk), rk(1 + nu + nk);
              ru[0] = -dir[i];
              rk[0] = -dir[i];
              for (std::size_t a = 0; a < nu; ++a) ru[1 + a] = hull_u.generators[a].flat()[i];
              for (std::size_t b = 0; b < nk; ++b) rk[1 + nu + b] = hull_k.generators[b].flat()[i];
              lp.add_row(std::move(ru), Sense::Equal, v.flat()[i]);
              lp.add_row(std::move(rk), Sense::Equal, v.flat()[i]);
            }
            ++programs;
            contained[idx] = solve(lp).status == LPStatus::Optimal ? 1 : 0;
          },
          options.jobs);
      result.programs_solved += programs.load();
      for (std::size_t idx = 0; idx < pending.size(); ++idx)
        if (!contained[idx]) {
          const auto [v, w] = pending[idx];
          result.convex = false;
          result.witness = std::array<std::size_t, 4>{vertex_pos[v][0], vertex_pos[v][1], vertex_pos[w][0],
                                                      vertex_pos[w][1]};
          break;
        }
    }
    for (std::size_t id : vertex_ids[k])
      if (!in_u[id]) in_u[id] = true, u_ids.push_back(id);
  }
  return result;
}

RelabelledUnion relabelled_union_is_convex(const Distribution& seed, unsigned jobs) {
  RelabelledUnion out;
  const auto ops = enumerate_symmetry_ops(kScenario2233, false);
  out.orbit = orbit(seed, ops);
  const std::size_t n = out.orbit.size();
  std::unordered_map<Distribution, std::size_t, DistributionHash> index;
  for (std::size_t j = 0; j < n; ++j) index.emplace(out.orbit[j].point, j);

  out.midpoint_local.assign(n, std::nullopt);
  std::vector<char> local(n, 1);
  parallel_for(
      n,
      [&](std::size_t j) {
        if (j == 0) return;
        const Distribution mid = mix({{Rational(1, 2), seed}, {Rational(1, 2), out.orbit[j].point}});
        local[j] = is_local(mid).local ? 1 : 0;
      },
      jobs);
  for (std::size_t j = 0; j < n; ++j) out.midpoint_local[j] = local[j] != 0;

  const auto locals = deterministic_points(kScenario2233);
  std::vector<PolytopeModel> polys(n);
  for (std::size_t j = 0; j < n; ++j) {
    polys[j].generators.push_back(out.orbit[j].point);
    polys[j].generators.insert(polys[j].generators.end(), locals.begin(), locals.end());
  }
  UnionOptions options;
  options.jobs = jobs;
  options.oracle = [&](const Distribution& v, const Distribution& w) -> std::optional<bool> {
    const auto iv = index.find(v);
    const auto iw = index.find(w);
    if (iv == index.end() || iw == index.end()) return std::nullopt;
    // Map the pair to (seed, member j) by the inverse of v's relabelling.
    const Distribution moved = apply(inverse(out.orbit[iv->second].op), w);
    const auto j = index.find(moved);
    if (j == index.end() || !out.midpoint_local[j->second].value_or(false)) return std::nullopt;
    return true;
  };
  out.result = union_is_convex(polys, options);
  return out;
}

std::size_t orbit_vertex_count(std::span<const Distribution> seeds, std::span<const SymmetryOp> ops) {
  if (seeds.empty()) return 0;
  const Scenario& s = seeds.front().scenario();
  std::vector<Rational> all;
  for (const auto& d : seeds) all.insert(all.end(), d.flat().begin(), d.flat().end());
  const mpz_class den = common_denominator(all);
  std::vector<std::vector<long>> scaled;
  for (const auto& d : seeds) {
    std::vector<long> v;
    for (const auto& p : d.flat()) {
      const mpz_class num = p.get_num() * (den / p.get_den());
      if (!num.fits_slong_p()) throw Error(ErrorCode::IndexOutOfRange, "orbit entries too large");
      v.push_back(num.get_si());
    }
    scaled.push_back(std::move(v));
  }
  struct Hash {
    std::size_t operator()(const std::vector<long>& v) const {
      std::size_t h = 1469598103934665603ull;
      for (long e : v) h = (h ^ static_cast<std::size_t>(e)) * 1099511628211ull;
      return h;
    }
  };
  std::unordered_set<std::vector<long>, Hash> seen;
  std::vector<long> image(s.dimension());
  for (const auto& op : ops) {
    const auto map = index_map(op, s);
    for (const auto& v : scaled) {
      for (std::size_t i = 0; i < map.size(); ++i) image[map[i]] = v[i];
      seen.insert(image);
    }
  }
  return seen.size();
}

}  // namespace entbell
