#include <doctest.h>

#include <random>

#include "entbell/bell.hpp"
#include "entbell/catalog.hpp"
#include "entbell/error.hpp"
#include "entbell/polytope.hpp"
#include "support.hpp"

using namespace entbell;

TEST_SUITE("polytope") {
  TEST_CASE("local weight of p_iso matches both analytic bounds") {
    for (const Rational& e : {Rational(0), Rational(1, 4), Rational(1, 2), Rational(4, 7), Rational(2, 3),
                              Rational(9, 10), Rational(1)}) {
      const auto cert = local_weight(catalog::p_iso(e));
      REQUIRE(cert.status == LPStatus::Optimal);
      CHECK(cert.verified);
      if (e <= Rational(1, 2)) {
        // p_iso(e) is a mixture of noise and p_iso(1/2), both local.
        CHECK(cert.objective == 1);
        continue;
      }
      // Lower bound: p_iso(e) = 2(1-e) p_iso(1/2) + (2e-1) p_NL.
      const Rational l = 2 * (1 - e);
      CHECK(mix({{l, catalog::p_iso(Rational(1, 2))}, {1 - l, catalog::p_nl()}}) == catalog::p_iso(e));
      // Upper bound: I2233 <= 2 on locals and <= 4 everywhere, so 4e <= 2l + 4(1 - l).
      const Rational upper = (4 - evaluate(i2233(), catalog::p_iso(e))) / 2;
      CHECK(upper == l);
      CHECK(cert.objective == l);
    }
  }

  TEST_CASE("local weight of p_cg") {
    for (const Rational& e : {Rational(0), Rational(1, 4), Rational(1, 2), Rational(4, 7), Rational(2, 3),
                              Rational(1)}) {
      const Rational expected = e <= Rational(4, 7) ? Rational(1) : (17 - 14 * e) / 9;
      const auto cert = local_weight(catalog::p_cg(e));
      CHECK(cert.verified);
      CHECK(cert.objective == expected);
    }
  }

  TEST_CASE("local weight on named points") {
    for (const auto& d : deterministic_points(kScenario2233)) CHECK(local_weight(d).objective == 1);
    CHECK(local_weight(catalog::p_c_2233()).objective == 1);
    CHECK(local_weight(catalog::p_nl()).objective == 0);
    CHECK(local_weight(catalog::p_pr()).objective == 0);
    CHECK(local_weight(catalog::p_noise_2233()).objective == 1);
    const Distribution sig = Distribution::from_function(kScenario2222, [](int a, int b, int x, int y) {
      if (a == 0 && b == 1) return Rational(x == 1 && y == 1 ? 1 : 0);
      return Rational(x == 0 && y == 0 ? 1 : 0);
    });
    bool threw = false;
    try {
      local_weight(sig);
    } catch (const Error& e) {
      threw = e.code() == ErrorCode::SignallingInput;
    }
    CHECK(threw);
  }

  TEST_CASE("certificates reconstruct the decomposition") {
    const Distribution d = catalog::p_e();
    const auto cert = local_weight(d);
    const auto pts = deterministic_points(kScenario2233);
    REQUIRE(cert.weights.size() == pts.size());
    Rational total = 0;
    for (std::size_t k = 0; k < pts.size(); ++k) {
      CHECK(cert.weights[k] >= 0);
      total += cert.weights[k];
    }
    CHECK(total == cert.objective);
    // The remainder d - sum w_k D_k is entrywise nonnegative.
    for (std::size_t i = 0; i < d.flat().size(); ++i) {
      Rational local = 0;
      for (std::size_t k = 0; k < pts.size(); ++k) local += cert.weights[k] * pts[k].flat()[i];
      CHECK(d.flat()[i] >= local);
    }
  }

  TEST_CASE("is_local with separating functional") {
    CHECK(is_local(catalog::p_c_2233()).local);
    const auto nl = is_local(catalog::p_nl());
    CHECK_FALSE(nl.local);
    REQUIRE(nl.separator.has_value());
    CHECK(violates(*nl.separator, catalog::p_nl()));
    for (const auto& p : deterministic_points(kScenario2233)) CHECK_FALSE(violates(*nl.separator, p));
    CHECK(violates(i2233(), catalog::p_nl()));
    const auto pe = is_local(catalog::p_e());
    CHECK_FALSE(pe.local);
    REQUIRE(pe.separator.has_value());
    CHECK(violates(*pe.separator, catalog::p_e()));
  }

  TEST_CASE("mixing with locals cannot lower the local weight bound") {
    std::mt19937_64 rng(37);
    const auto pts = deterministic_points(kScenario2233);
    const std::vector<Distribution> seeds = {catalog::p_nl(), catalog::p_e(), catalog::p_iso(Rational(4, 5)),
                                             catalog::table1_vertex(11)};
    for (int t = 0; t < 12; ++t) {
      const Distribution& d = seeds[t % seeds.size()];
      const Rational w = testing::frac(1 + static_cast<long>(rng() % 9), 10);
      const Distribution m = mix({{w, d}, {1 - w, pts[rng() % pts.size()]}});
      CHECK(local_weight(m).objective >= w * local_weight(d).objective + (1 - w));
    }
  }

  TEST_CASE("local weight is invariant under symmetry ops") {
    std::mt19937_64 rng(41);
    const auto ops = enumerate_symmetry_ops(kScenario2233, true);
    for (const auto& d : {catalog::p_e(), catalog::p_iso(Rational(3, 5)), catalog::table1_vertex(2)}) {
      const Rational base = local_weight(d).objective;
      for (int t = 0; t < 4; ++t) CHECK(local_weight(apply(ops[rng() % ops.size()], d)).objective == base);
    }
  }

  TEST_CASE("hull membership") {
    PolytopeModel model;
    model.generators = {catalog::table1_vertex(8), catalog::table1_vertex(18), catalog::table1_vertex(26),
                        catalog::table1_vertex(47)};
    const auto in = hull_membership(model, catalog::p_e());
    CHECK(in.status == LPStatus::Optimal);
    CHECK(in.verified);
    CHECK(in.weights == std::vector<Rational>{Rational(1, 10), Rational(3, 10), Rational(1, 5), Rational(2, 5)});
    CHECK(hull_membership(model, catalog::p_nl()).status == LPStatus::Infeasible);
  }

  TEST_CASE("vertex verification") {
    const auto model = pi_chsh_model(true);
    CHECK(model.constraints.size() == 649);
    for (int k : {1, 8, 17, 18, 47}) {
      const auto r = verify_vertex(catalog::table1_vertex(k), model);
      CHECK(r.feasible);
      CHECK(r.extremal);
      CHECK(r.rank == 36);
    }
    const auto iso = verify_vertex(catalog::p_iso(Rational(4, 7)), model);
    CHECK(iso.feasible);
    CHECK_FALSE(iso.extremal);
    // A strict mixture: noise and p_NL both on the segment through it.
    CHECK(mix({{Rational(4, 7), catalog::p_nl()}, {Rational(3, 7), catalog::p_noise_2233()}}) ==
          catalog::p_iso(Rational(4, 7)));
    const auto pr = verify_vertex(embed(catalog::p_pr(), kScenario2233), pi_chsh_model(false));
    CHECK_FALSE(pr.feasible);
  }

  TEST_CASE("joint violation programs") {
    const auto single = joint_violation_lp(1, 0);
    REQUIRE(single.status == LPStatus::Optimal);
    CHECK(single.verified);
    // p_iso(4/7) is feasible with excess 16/7 - 2.
    CHECK(single.objective >= Rational(2, 7));
    for (std::size_t j : {2, 100, 253, 432}) {
      const auto c = joint_violation_lp(1, j);
      CHECK(c.verified);
      CHECK((c.status == LPStatus::Infeasible || (c.status == LPStatus::Optimal && c.objective == 0)));
    }
    // Without the CHSH constraints p_NL violates I^1 and a partner by at least 1.
    const auto report = violated_set(catalog::p_nl());
    REQUIRE(report.i2233.size() >= 2);
    const auto free = joint_violation_lp(1, report.i2233[1].index, {false});
    REQUIRE(free.status == LPStatus::Optimal);
    CHECK(free.objective >= 1);
  }

  TEST_CASE("union convexity basics") {
    const auto pts = deterministic_points(kScenario2222);
    PolytopeModel p, q;
    p.scenario = q.scenario = kScenario2222;
    p.generators = {pts[0], pts[1], pts[2]};
    q.generators = {pts[2], pts[1], pts[0]};
    std::vector<PolytopeModel> same = {p, q};
    CHECK(union_is_convex(same).convex);
    PolytopeModel a, b;
    a.scenario = b.scenario = kScenario2222;
    a.generators = {pts[0], pts[1]};
    b.generators = {pts[14], pts[15]};
    std::vector<PolytopeModel> apart = {a, b};
    const auto r = union_is_convex(apart);
    CHECK_FALSE(r.convex);
    CHECK(r.witness.has_value());
  }

  TEST_CASE("two relabelled polytopes at 3/5 and 4/7") {
    LocalRelabelling swap = LocalRelabelling::identity(kScenario2233);
    swap.output_a[1] = {0, 2, 1};
    const auto locals = deterministic_points(kScenario2233);
    for (const Rational& e : {Rational(3, 5), Rational(4, 7)}) {
      const Distribution iso = catalog::p_iso(e);
      PolytopeModel p, q;
      p.generators = locals;
      p.generators.push_back(iso);
      q.generators = locals;
      q.generators.push_back(apply_relabelling(swap, iso));
      std::vector<PolytopeModel> polys = {p, q};
      const auto r = union_is_convex(polys);
      CHECK(r.convex == (e == Rational(4, 7)));
      const Distribution mid = mix({{Rational(1, 2), iso}, {Rational(1, 2), apply_relabelling(swap, iso)}});
      CHECK(is_local(mid).local == (e == Rational(4, 7)));
    }
  }

  TEST_CASE("orbit vertex counts") {
    const auto ops = enumerate_symmetry_ops(kScenario2233, true);
    std::vector<Distribution> locals;
    for (int k = 18; k <= 47; ++k) locals.push_back(catalog::table1_vertex(k));
    CHECK(orbit_vertex_count(locals, ops) == 81);
    const auto local_ops = enumerate_symmetry_ops(kScenario2233, false);
    const std::vector<Distribution> nl = {catalog::p_nl()};
    CHECK(orbit_vertex_count(nl, local_ops) == 432);
  }
}
