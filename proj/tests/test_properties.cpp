#include <doctest.h>

#include <random>

#include "entbell/catalog.hpp"
#include "entbell/entropy.hpp"
#include "entbell/polytope.hpp"
#include "entbell/symmetry.hpp"
#include "support.hpp"

using namespace entbell;

namespace {

// Where each component of the entropy vector moves under op: new[map[i]] = old[i].
std::array<int, 8> component_map(const SymmetryOp& op) {
  std::array<int, 8> m{};
  const auto& ia = op.local.input_a;
  const auto& ib = op.local.input_b;
  for (int a = 0; a < 2; ++a) m[kX0 + a] = kX0 + ia[a];
  for (int b = 0; b < 2; ++b) m[kY0 + b] = kY0 + ib[b];
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) m[kX0Y0 + 2 * a + b] = kX0Y0 + 2 * ia[a] + ib[b];
  if (op.exchange) {
    for (auto& c : m) {
      if (c < kY0) c += 2;
      else if (c < kX0Y0) c -= 2;
      else {
        const int a = (c - kX0Y0) / 2, b = (c - kX0Y0) % 2;
        c = kX0Y0 + 2 * b + a;
      }
    }
  }
  return m;
}

}  // namespace

TEST_SUITE("properties") {
  TEST_CASE("BC inequalities hold on random classical mixtures") {
    std::mt19937_64 rng(43);
    for (int t = 0; t < 1000; ++t) {
      const Scenario s = (t % 4 == 0) ? kScenario2222 : kScenario2233;
      const auto p = testing::random_local_mixture(rng, s, 1 + static_cast<int>(rng() % 8));
      for (double q : {1.0, 2.0, 8.0})
        for (double v : bc_values(entropy_vector(s, p, q)).values) CHECK(v <= kViolationTol);
    }
  }

  TEST_CASE("entropy vectors permute with the symmetry op") {
    std::mt19937_64 rng(47);
    const auto ops = enumerate_symmetry_ops(kScenario2233, true);
    for (const auto& d : {catalog::p_e(), catalog::table1_vertex(9), catalog::p_qm()}) {
      for (int t = 0; t < 40; ++t) {
        const auto& op = ops[rng() % ops.size()];
        const auto m = component_map(op);
        for (double q : {1.0, 2.0}) {
          const auto before = entropy_vector(d, q).h;
          const auto after = entropy_vector(apply(op, d), q).h;
          for (int i = 0; i < 8; ++i) CHECK(after[m[i]] == doctest::Approx(before[i]).epsilon(1e-13));
        }
      }
    }
  }

  TEST_CASE("mixtures of no-signalling points stay no-signalling") {
    std::mt19937_64 rng(53);
    const auto ops = enumerate_symmetry_ops(kScenario2233, true);
    std::vector<Distribution> pool = catalog::table1_vertices();
    pool.push_back(catalog::p_nl());
    pool.push_back(catalog::p_qm());
    for (int t = 0; t < 200; ++t) {
      std::vector<std::pair<Rational, Distribution>> parts;
      const int n = 1 + static_cast<int>(rng() % 5);
      std::vector<long> w(n);
      long total = 0;
      for (auto& x : w) total += (x = 1 + static_cast<long>(rng() % 20));
      for (int i = 0; i < n; ++i) parts.emplace_back(testing::frac(w[i], total), apply(ops[rng() % ops.size()], pool[rng() % pool.size()]));
      const Distribution m = mix(parts);
      CHECK(is_no_signalling(m));
    }
  }

  TEST_CASE("relabelled points keep their local weight") {
    std::mt19937_64 rng(59);
    const auto ops = enumerate_symmetry_ops(kScenario2233, true);
    for (int k = 1; k <= 17; k += 4) {
      const Distribution d = catalog::table1_vertex(k);
      const Rational base = local_weight(d).objective;
      CHECK(base < 1);
      for (int t = 0; t < 3; ++t) CHECK(local_weight(apply(ops[rng() % ops.size()], d)).objective == base);
    }
  }
}
