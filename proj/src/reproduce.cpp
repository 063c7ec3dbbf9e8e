#include "entbell/reproduce.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include <json.hpp>

#include "entbell/catalog.hpp"
#include "entbell/error.hpp"
#include "entbell/parallel.hpp"
#include "entbell/polytope.hpp"
#include "entbell/search.hpp"

namespace entbell {

std::string RunConfig::canonical() const {
  std::ostringstream out;
  out.precision(17);
  out << "command=" << command << ";seed=" << seed << ";tol=" << tol << ";q=";
  for (double q : q_list) out << q << ',';
  out << ";eps=" << eps << ";v=" << v << ";grid=" << grid << ";restarts=" << restarts;
  return out.str();
}

std::string RunConfig::hash() const {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : canonical()) h = (h ^ c) * 1099511628211ull;
  std::ostringstream out;
  out << std::hex << h;
  return out.str();
}

void write_manifest(const RunConfig& config) {
  std::filesystem::create_directories(config.out_dir);
  nlohmann::json j;
  j["command"] = config.command;
  j["seed"] = config.seed;
  j["version"] = kVersion;
  j["config_hash"] = config.hash();
  j["config"] = config.canonical();
  std::ofstream(config.out_dir / "manifest.json") << j.dump(1) << '\n';
}

bool TargetReport::ok() const {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return !checks.empty();
}

namespace {

struct Context {
  const RunConfig& config;
  TargetReport& report;

  void check(std::string name, bool pass, std::string detail = {}) {
    report.checks.push_back({std::move(name), pass, std::move(detail)});
  }

  void write(const std::string& name, const std::string& content) {
    std::filesystem::create_directories(config.out_dir);
    const auto path = config.out_dir / name;
    std::ofstream(path) << content;
    report.files.push_back(path);
  }

  std::vector<double> qs(std::vector<double> fallback) const {
    return config.q_list.empty() ? fallback : config.q_list;
  }
};

std::string fmt(double x) {
  std::ostringstream out;
  out.precision(10);
  out << x;
  return out.str();
}

void prop1(Context& ctx) {
  const std::size_t n = i2233_orbit().size();
  std::vector<LPCertificate> certs(n + 1);
  parallel_for(
      n - 1, [&](std::size_t k) { certs[k + 2] = joint_violation_lp(1, k + 2); }, ctx.config.jobs);
  std::ostringstream csv;
  csv << "j,status,objective,verified,pivots\n";
  std::size_t good = 0;
  for (std::size_t j = 2; j <= n; ++j) {
    const auto& c = certs[j];
    const bool zero_or_infeasible =
        c.status == LPStatus::Infeasible || (c.status == LPStatus::Optimal && sgn(c.objective) == 0);
    if (zero_or_infeasible && c.verified) ++good;
    csv << j << ',' << to_string(c.status) << ',' << (c.status == LPStatus::Optimal ? to_string(c.objective) : "")
        << ',' << (c.verified ? 1 : 0) << ',' << c.pivots << '\n';
  }
  ctx.write("prop1_joint_violation.csv", csv.str());
  ctx.check("joint violation of I2233^1 with every other member", good == n - 1,
            std::to_string(good) + "/" + std::to_string(n - 1) + " pairs give 0 or infeasible");
  const auto single = joint_violation_lp(1, 0);
  ctx.write("prop1_single.json", to_json(single));
  ctx.check("single functional program", single.status == LPStatus::Optimal && sgn(single.objective) > 0,
            "max excess " + to_string(single.objective));
}

void prop2(Context& ctx) {
  const Distribution pe = catalog::p_e();
  const Distribution hull = mix({{Rational(1, 10), catalog::table1_vertex(8)},
                                 {Rational(3, 10), catalog::table1_vertex(18)},
                                 {Rational(1, 5), catalog::table1_vertex(26)},
                                 {Rational(2, 5), catalog::table1_vertex(47)}});
  ctx.check("p_e as a mixture of table1 rows 8, 18, 26, 47", hull == pe);
  const auto viol = violated_set(pe);
  ctx.check("p_e satisfies every CHSH-type functional", viol.chsh.empty());
  ctx.check("p_e violates exactly one I2233 functional", viol.i2233.size() == 1);
  const auto lw = local_weight(pe);
  ctx.check("p_e is nonlocal", lw.objective < 1, "local weight " + to_string(lw.objective));
  const auto ev = entropy_vector(pe, 1.0, "p_e");
  const auto bc = bc_values(ev, ctx.config.tol);
  ctx.check("I_BC^4(p_e) = 0.0199733", std::abs(bc.values[3] - 0.0199733) <= 1e-6, fmt(bc.values[3]));
  ctx.write("prop2_entropy.csv", entropy_csv_header() + "\n" + entropy_csv_row("p_e", ev, bc) + "\n");
}

void prop3(Context& ctx) {
  std::ostringstream csv;
  csv << "eps,local_weight,expected,chsh_violations,i2233_violations\n";
  bool formula = true, chsh_ok = true;
  for (const Rational& e : {Rational(0), Rational(1, 4), Rational(1, 2), Rational(4, 7), Rational(3, 5),
                            Rational(2, 3), Rational(1)}) {
    const auto lw = local_weight(catalog::p_iso(e));
    const Rational expected = e <= Rational(1, 2) ? Rational(1) : Rational(2 * (1 - e));
    formula = formula && lw.verified && lw.objective == expected;
    const auto viol = violated_set(catalog::p_iso(e));
    if (e <= Rational(4, 7)) chsh_ok = chsh_ok && viol.chsh.empty();
    if (e > Rational(4, 7)) chsh_ok = chsh_ok && !viol.chsh.empty();
    csv << to_string(e) << ',' << to_string(lw.objective) << ',' << to_string(expected) << ',' << viol.chsh.size()
        << ',' << viol.i2233.size() << '\n';
  }
  ctx.write("prop3_isotropic.csv", csv.str());
  ctx.check("l(p_iso) = 1 up to 1/2 and 2(1 - eps) above", formula);
  ctx.check("p_iso satisfies every CHSH-type functional iff eps <= 4/7", chsh_ok);
}

void entropy_threshold(Context& ctx, double q) {
  const bool shannon = q == 1.0;
  std::ostringstream csv;
  csv << "eps,v,q,value\n";
  bool nonpositive = true;
  for (int i = 0; i <= 1000; ++i) {
    const double v = i / 1000.0;
    const double value = shannon ? f_closed_form(4.0 / 7, v) / 3 : g_closed_form(q, 4.0 / 7, v) / (q - 1);
    nonpositive = nonpositive && value <= ctx.config.tol;
    csv << 4.0 / 7 << ',' << v << ',' << q << ',' << value << '\n';
  }
  ctx.write(std::string(shannon ? "prop4" : "prop5") + "_q" + fmt(q) + "_at_4_7.csv", csv.str());
  ctx.check("no violation on p_E(4/7, v), q = " + fmt(q), nonpositive);
  ctx.check("no violation near v = 0 at eps = 4/7 (high precision), q = " + fmt(q),
            !family_violates(Family::E, Rational(4, 7), q));
  const Rational above = Rational(4, 7) + Rational(1, 1000);
  ctx.check("violation for small v at eps = 4/7 + 1/1000, q = " + fmt(q), family_violates(Family::E, above, q));
}

void prop4(Context& ctx) {
  entropy_threshold(ctx, 1.0);
  const auto ev = entropy_vector(catalog::p_E(Rational(3, 5), Rational(1, 20000000)), 1.0);
  const double value = bc_values(ev).values[3];
  ctx.check("I_BC^4(p_E(3/5, 5e-8)) > 0", value > 0, fmt(value));
}

void prop5(Context& ctx) {
  for (double q : ctx.qs({1.5, 2, 8})) {
    if (q <= 1) continue;
    entropy_threshold(ctx, q);
    const double slope = g_slope_at_zero(q, 4.0 / 7);
    const double h = 1e-7;
    const double numeric = g_closed_form(q, 4.0 / 7, h) / h;
    ctx.check("dg/dv at 0 vanishes at eps = 4/7, q = " + fmt(q), std::abs(slope) < 1e-15 && numeric <= 1e-6,
              fmt(numeric));
  }
}

void prop_cg(Context& ctx) {
  const auto maps = enumerate_2to1_coarse_grainings(kScenario2233);
  const auto census = coarse_graining_census(maps);
  ctx.check("255 two-to-one coarse-grainings (12/54/108/81 by merged slots)",
            maps.size() == 255 && census == std::vector<int>{0, 12, 54, 108, 81});
  const Distribution iso = catalog::p_iso(Rational(4, 7));
  std::vector<Rational> weights(maps.size());
  parallel_for(
      maps.size(), [&](std::size_t k) { weights[k] = local_weight(apply_coarse_graining(maps[k], iso)).objective; },
      ctx.config.jobs);
  std::ostringstream csv;
  csv << "index,merged_slots,local_weight_4_7\n";
  std::size_t local = 0;
  for (std::size_t k = 0; k < maps.size(); ++k) {
    local += weights[k] == 1;
    csv << k << ',' << maps[k].merged_slots() << ',' << to_string(weights[k]) << '\n';
  }
  ctx.write("propCG_coarse_grainings.csv", csv.str());
  ctx.check("every coarse-graining of p_iso(4/7) is local", local == maps.size(),
            std::to_string(local) + "/" + std::to_string(maps.size()));
  const Rational e(3, 5), A = (2 * e + 1) / 9, B = (1 - e) / 9;
  const Distribution cg = catalog::p_cg(e);
  const Rational value = evaluate(i2233(), cg);
  ctx.check("p_CG(3/5) has I2233^1 = 9A - 3B > 2", value == 9 * A - 3 * B && value > 2, to_string(value));
  bool formula = true;
  for (const Rational& x : {Rational(0), Rational(1, 4), Rational(1, 2), Rational(4, 7), Rational(2, 3), Rational(1)}) {
    const Rational expected = x <= Rational(4, 7) ? Rational(1) : (17 - 14 * x) / 9;
    formula = formula && local_weight(catalog::p_cg(x)).objective == expected;
  }
  ctx.check("l(p_CG) = 1 up to 4/7 and (17 - 14 eps)/9 above", formula);
}

void prop_r1(Context& ctx) {
  const Distribution iso = catalog::p_iso(Rational(4, 7));
  const auto un = relabelled_union_is_convex(iso, ctx.config.jobs);
  std::size_t local = 0;
  std::ostringstream csv;
  csv << "j,op,midpoint_local\n";
  for (std::size_t j = 1; j < un.orbit.size(); ++j) {
    const bool l = un.midpoint_local[j].value_or(false);
    local += l;
    csv << j + 1 << ',' << describe(un.orbit[j].op) << ',' << (l ? 1 : 0) << '\n';
  }
  ctx.write("propR1_midpoints.csv", csv.str());
  ctx.check("all midpoints (p_iso + p^{R,j})/2 at eps = 4/7 are local", local + 1 == un.orbit.size(),
            std::to_string(local) + "/" + std::to_string(un.orbit.size() - 1));
  ctx.check("union of the relabelled polytopes at eps = 4/7 is convex", un.result.convex,
            std::to_string(un.result.pairs_checked) + " vertex pairs");
  LocalRelabelling r = LocalRelabelling::identity(kScenario2233);
  r.output_a[1] = {0, 2, 1};
  const Distribution iso35 = catalog::p_iso(Rational(3, 5));
  const Distribution mid = mix({{Rational(1, 2), iso35}, {Rational(1, 2), apply_relabelling(r, iso35)}});
  const BellFunctional w = swap_mixture_witness();
  const Rational tr = -evaluate(w, mid);
  ctx.check("Tr(M^T p_mix) < 1 at eps = 3/5", tr < 1, to_string(tr));
  bool valid = true;
  for (const auto& d : deterministic_points(kScenario2233)) valid = valid && !violates(w, d);
  ctx.check("Tr(M^T P) >= 1 holds on every deterministic point", valid);
}

void table1(Context& ctx) {
  const auto rows = catalog::table1_vertices();
  const PolytopeModel model = pi_chsh_model(true);
  const BellFunctional i1 = i2233();
  std::ostringstream csv;
  csv << "row,no_signalling,chsh_ok,i2233,deterministic,local_weight,extremal,rank\n";
  bool all = true;
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const auto& d = rows[k];
    const bool ns = is_no_signalling(d);
    const auto viol = violated_set(d);
    const Rational value = evaluate(i1, d);
    bool deterministic = true;
    for (const auto& p : d.flat()) deterministic = deterministic && (p == 0 || p == 1);
    const auto lw = local_weight(d);
    const auto vr = verify_vertex(d, model);
    const bool local_row = k + 1 >= static_cast<std::size_t>(catalog::kTable1FirstLocal);
    const bool ok = ns && viol.chsh.empty() && value >= 2 && vr.extremal &&
                    (local_row ? deterministic && value == 2 : lw.objective < 1);
    all = all && ok;
    csv << k + 1 << ',' << ns << ',' << viol.chsh.empty() << ',' << to_string(value) << ',' << deterministic << ','
        << to_string(lw.objective) << ',' << vr.extremal << ',' << vr.rank << '\n';
  }
  ctx.write("table1_vertices.csv", csv.str());
  ctx.check("47/47 rows verified extremal with the stated properties", all);
  const auto ops = enumerate_symmetry_ops(kScenario2233, true);
  const std::size_t count = orbit_vertex_count(rows, ops);
  ctx.check("orbit closure has 7425 points", count == 7425, std::to_string(count));
}

void fig1(Context& ctx) {
  const auto sweep = q_sweep(catalog::p_e(), 1.0, 3.0, 201, ctx.config.tol);
  ctx.write("fig1_q_sweep.csv", to_csv(sweep));
  ctx.check("maximum at q = 1", sweep.argmax_q == 1.0, fmt(sweep.max_value));
  ctx.check("sign change below q = 1.5", sweep.upper_crossing && *sweep.upper_crossing < 1.5,
            sweep.upper_crossing ? fmt(*sweep.upper_crossing) : "none");
}

void fig2(Context& ctx, Family family, const std::string& tag) {
  const auto qs = ctx.qs({1, 2, 8});
  const auto scan = region_scan(family, qs, ctx.config.grid, ctx.config.tol, ctx.config.jobs);
  ctx.write(tag + "_region.csv", to_csv(scan));
  std::ostringstream thresholds;
  thresholds << "q,lo,hi\n";
  for (std::size_t qi = 0; qi < qs.size(); ++qi) {
    bool clean = true;
    const std::size_t g = scan.v_grid.size();
    for (std::size_t i = 0; i < scan.values[qi].size(); ++i)
      if (scan.violated[qi][i] && scan.eps_grid[i / g] <= 4.0 / 7) clean = false;
    ctx.check("no violating cell with eps <= 4/7, q = " + fmt(qs[qi]), clean);
    const auto b = violation_threshold(family, qs[qi], Rational(1, 2), Rational(7, 10), Rational(1, 1000));
    const double lo = to_double(b.lo), hi = to_double(b.hi);
    thresholds << qs[qi] << ',' << to_string(b.lo) << ',' << to_string(b.hi) << '\n';
    ctx.check("bisection brackets 4/7 within 1e-3, q = " + fmt(qs[qi]),
              lo - 1e-3 <= 4.0 / 7 && 4.0 / 7 <= hi + 1e-3 && hi - lo < 1e-3, "[" + fmt(lo) + ", " + fmt(hi) + "]");
  }
  ctx.write(tag + "_thresholds.csv", thresholds.str());

  auto contains = [](const std::vector<bool>& big, const std::vector<bool>& small) {
    for (std::size_t i = 0; i < small.size(); ++i)
      if (small[i] && !big[i]) return false;
    return true;
  };
  const auto q1 = std::find(qs.begin(), qs.end(), 1.0), q2 = std::find(qs.begin(), qs.end(), 2.0);
  if (q1 != qs.end() && q2 != qs.end())
    ctx.check("q = 2 violation region contains the q = 1 region",
              contains(scan.violated[q2 - qs.begin()], scan.violated[q1 - qs.begin()]));
  if (family == Family::ETilde) {
    const auto base = region_scan(Family::E, qs, ctx.config.grid, ctx.config.tol, ctx.config.jobs);
    for (std::size_t qi = 0; qi < qs.size(); ++qi) {
      std::size_t extra = 0, base_count = 0;
      for (std::size_t i = 0; i < base.violated[qi].size(); ++i) {
        base_count += base.violated[qi][i];
        extra += scan.violated[qi][i] && !base.violated[qi][i];
      }
      ctx.check("tilde region strictly contains the p_E region, q = " + fmt(qs[qi]),
                contains(scan.violated[qi], base.violated[qi]) && extra > 0,
                std::to_string(base_count) + " + " + std::to_string(extra) + " cells");
    }
  }
}

void conjecture(Context& ctx, const std::vector<double>& qs, const Rational& detect_eps, double detect_q,
                const std::string& tag) {
  const auto locals = saturating_locals();
  auto problem_for = [&](const Rational& eps, double q) {
    SearchProblem p;
    p.generators.push_back(catalog::p_iso(eps));
    p.generators.insert(p.generators.end(), locals.begin(), locals.end());
    p.q = q;
    p.restarts = ctx.config.restarts;
    p.seed = ctx.config.seed;
    p.tol = ctx.config.tol;
    p.jobs = ctx.config.jobs;
    return p;
  };
  nlohmann::json summary = nlohmann::json::array();
  for (const Rational& eps : {Rational(5, 9), Rational(4, 7)})
    for (double q : qs) {
      const auto r = maximize_bc(problem_for(eps, q));
      ctx.check("eps = " + to_string(eps) + ", q = " + fmt(q) + ": " + r.verdict, r.best_value <= ctx.config.tol,
                fmt(r.best_value));
      summary.push_back({{"eps", to_string(eps)}, {"q", q}, {"best", r.best_value}, {"verdict", r.verdict}});
    }
  const auto r = maximize_bc(problem_for(detect_eps, detect_q));
  ctx.check("violation detected at eps = " + to_string(detect_eps) + ", q = " + fmt(detect_q), r.best_value > 0,
            fmt(r.best_value));
  ctx.write(tag + "_detection.json", to_json(r));
  summary.push_back({{"eps", to_string(detect_eps)}, {"q", detect_q}, {"best", r.best_value}, {"verdict", r.verdict}});
  ctx.write(tag + "_summary.json", summary.dump(1));
}

void footnote(Context& ctx) {
  const auto r = footnote_chain_check();
  ctx.check("1/20 p_E(7/10, 2/5) + 19/20 p_C = 1/50 p_iso(7/10) + 49/50 p_C", r.identity_holds);
  ctx.check("Tsallis q = 2 violation on p_E(7/10, 2/5)", r.tsallis2_on_pe > ctx.config.tol, fmt(r.tsallis2_on_pe));
  ctx.check("no Shannon violation on p_E(7/10, 2/5)", r.shannon_on_pe <= ctx.config.tol, fmt(r.shannon_on_pe));
  ctx.check("Shannon violation on the diluted mixture", r.shannon_on_mix > ctx.config.tol, fmt(r.shannon_on_mix));
}

using Runner = std::function<void(Context&)>;

const std::map<std::string, Runner>& runners() {
  static const std::map<std::string, Runner> table = {
      {"prop1", prop1},
      {"prop2", prop2},
      {"prop3", prop3},
      {"prop4", prop4},
      {"prop5", prop5},
      {"propCG", prop_cg},
      {"propR1", prop_r1},
      {"table1", table1},
      {"fig1", fig1},
      {"fig2a", [](Context& c) { fig2(c, Family::E, "fig2a"); }},
      {"fig2b", [](Context& c) { fig2(c, Family::ETilde, "fig2b"); }},
      {"conjA", [](Context& c) { conjecture(c, {1.0}, Rational(42, 70), 1.0, "conjA"); }},
      {"conjB",
       [](Context& c) { conjecture(c, c.qs({1.1, 2, 3, 10, 50}), Rational(400001, 700000), 2.0, "conjB"); }},
      {"footnote", footnote},
  };
  return table;
}

}  // namespace

std::vector<std::string> reproduce_targets() {
  return {"prop1", "prop2", "prop3", "prop4", "prop5", "propCG", "propR1",
          "table1", "fig1", "fig2a", "fig2b", "conjA", "conjB", "footnote"};
}

TargetReport reproduce(const std::string& target, const RunConfig& config) {
  const auto& table = runners();
  const auto it = table.find(target);
  if (it == table.end()) throw Error(ErrorCode::UnknownTarget, "unknown target '" + target + "'");
  TargetReport report;
  report.target = target;
  Context ctx{config, report};
  it->second(ctx);
  std::ostringstream summary;
  for (const auto& c : report.checks)
    summary << (c.pass ? "PASS" : "FAIL") << "  " << c.name << (c.detail.empty() ? "" : "  [" + c.detail + "]")
            << '\n';
  ctx.write(target + "_summary.txt", summary.str());
  return report;
}

}  // namespace entbell
