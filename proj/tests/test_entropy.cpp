#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "entbell/catalog.hpp"
#include "entbell/entropy.hpp"
#include "entbell/error.hpp"
#include "entbell/symmetry.hpp"
#include "support.hpp"

using namespace entbell;

namespace {

double xlogx(double x) { return x > 0 ? x * std::log(x) : 0.0; }

// Written out from the printed closed forms.
double f_oracle(double e, double v) {
  return 3 * xlogx(3 - 2 * (1 - e) * v) + 5 * xlogx((1 - e) * v) - xlogx((1 + 2 * e) * v) -
         xlogx(3 - (2 + e) * v) - 3 * std::log(9.0);
}

double g_oracle(double q, double e, double v) {
  return 9 * std::pow((3 - 2 * (1 - e) * v) / 9, q) + 15 * std::pow((1 - e) * v / 9, q) - 6 / std::pow(3.0, q) -
         3 * std::pow((3 - (2 + e) * v) / 9, q) - 3 * std::pow((1 + 2 * e) * v / 9, q);
}

double bc4_shannon(const Distribution& d) { return bc_values(entropy_vector(d, 1.0)).values[3]; }

Distribution pe_double(double e, double v) {
  return catalog::p_E(rational_from_double(e), rational_from_double(v));
}

}  // namespace

TEST_SUITE("entropy") {
  TEST_CASE("shannon") {
    CHECK(shannon(std::vector<double>{1, 0, 0}) == 0);
    CHECK(shannon(std::vector<double>{0.5, 0.5}) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
    CHECK(shannon(std::vector<double>(9, 1.0 / 9)) == doctest::Approx(std::log(9.0)).epsilon(1e-14));
    bool threw = false;
    try {
      shannon(std::vector<double>{0.7, 0.7});
    } catch (const Error& e) {
      threw = e.code() == ErrorCode::NotADistribution;
    }
    CHECK(threw);
  }

  TEST_CASE("tsallis") {
    CHECK(tsallis(std::vector<double>{0.5, 0.5}, 2) == doctest::Approx(0.5).epsilon(1e-15));
    for (double q : {0.5, 1.0, 2.0, 8.0}) CHECK(tsallis(std::vector<double>{0, 1, 0}, q) == 0);
    const std::vector<double> third(3, 1.0 / 3);
    CHECK(std::abs(tsallis(third, 1 + 1e-4) - std::log(3.0)) < 1e-4);
    bool threw = false;
    try {
      tsallis(third, 0);
    } catch (const Error& e) {
      threw = e.code() == ErrorCode::NonPositiveOrder;
    }
    CHECK(threw);
  }

  TEST_CASE("tsallis is continuous at q = 1") {
    std::mt19937_64 rng(23);
    std::exponential_distribution<double> expo(1.0);
    for (int t = 0; t < 50; ++t) {
      std::vector<double> p(2 + t % 8);
      double total = 0;
      for (auto& x : p) total += (x = expo(rng));
      for (auto& x : p) x /= total;
      const double h = shannon(p);
      CHECK(std::abs(tsallis(p, 1 + 1e-6) - h) < 1e-4);
      CHECK(std::abs(tsallis(p, 1 - 1e-6) - h) < 1e-4);
    }
  }

  TEST_CASE("entropy vector equalities") {
    for (double q : {1.0, 2.0}) {
      const auto a = entropy_vector(catalog::p_pr(), q), b = entropy_vector(catalog::p_c_2222(), q);
      const auto c = entropy_vector(catalog::p_nl(), q), d = entropy_vector(catalog::p_c_2233(), q);
      for (int i = 0; i < 8; ++i) {
        CHECK(std::abs(a.h[i] - b.h[i]) <= 1e-12);
        CHECK(std::abs(c.h[i] - d.h[i]) <= 1e-12);
      }
    }
    const auto noise = entropy_vector(catalog::p_noise_2233(), 1.0);
    for (int i = 0; i < 4; ++i) CHECK(noise.h[i] == doctest::Approx(std::log(3.0)).epsilon(1e-14));
    for (int i = 4; i < 8; ++i) CHECK(noise.h[i] == doctest::Approx(std::log(9.0)).epsilon(1e-14));
  }

  TEST_CASE("entropy vector preconditions") {
    const Distribution three = Distribution::from_function(Scenario{3, 2, 2, 2}, [](int, int, int x, int y) {
      return Rational(x == y ? 1 : 0, 2);
    });
    bool wrong_inputs = false;
    try {
      entropy_vector(three, 1.0);
    } catch (const Error& e) {
      wrong_inputs = e.code() == ErrorCode::WrongInputCount;
    }
    CHECK(wrong_inputs);
    const Distribution sig = Distribution::from_function(kScenario2222, [](int a, int b, int x, int y) {
      if (a == 0 && b == 1) return Rational(x == 1 && y == 1 ? 1 : 0);
      return Rational(x == 0 && y == 0 ? 1 : 0);
    });
    bool signalling = false;
    try {
      entropy_vector(sig, 1.0);
    } catch (const Error& e) {
      signalling = e.code() == ErrorCode::SignallingInput;
    }
    CHECK(signalling);
  }

  TEST_CASE("BC forms on the printed examples") {
    const Distribution half = mix({{Rational(1, 2), catalog::p_pr()}, {Rational(1, 2), catalog::p_c_2222()}});
    CHECK(std::abs(bc4_shannon(half) - std::log(2.0)) <= 1e-9);
    const Distribution third = mix({{Rational(1, 3), catalog::p_nl()},
                                    {Rational(1, 3), catalog::p_nl_star()},
                                    {Rational(1, 3), catalog::p_c_2233()}});
    CHECK(std::abs(bc4_shannon(third) - std::log(3.0)) <= 1e-9);
    CHECK(std::abs(bc4_shannon(catalog::p_e()) - 0.0199733) <= 1e-6);
    for (const auto& d : deterministic_points(kScenario2233))
      for (double q : {1.0, 2.0, 8.0})
        for (double v : bc_values(entropy_vector(d, q)).values) CHECK(v <= kViolationTol);
  }

  TEST_CASE("BC forms follow their definitions") {
    const auto h = entropy_vector(catalog::p_e(), 1.0).h;
    const auto bc = bc_values(entropy_vector(catalog::p_e(), 1.0));
    CHECK(bc.values[0] == doctest::Approx(h[kX0Y0] + h[kX1] + h[kY1] - h[kX0Y1] - h[kX1Y0] - h[kX1Y1]));
    CHECK(bc.values[3] == doctest::Approx(h[kX1Y1] + h[kX0] + h[kY0] - h[kX0Y0] - h[kX0Y1] - h[kX1Y0]));
    CHECK(bc.violated[3]);
    CHECK_FALSE(bc.violated[0]);
  }

  TEST_CASE("entropy vector sanity") {
    for (double q : {1.0, 2.0, 8.0}) {
      const auto h = entropy_vector(catalog::p_e(), q).h;
      for (double x : h) CHECK(x >= 0);
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
          CHECK(h[kX0 + a] <= h[kX0Y0 + 2 * a + b] + 1e-15);
          CHECK(h[kY0 + b] <= h[kX0Y0 + 2 * a + b] + 1e-15);
          if (q == 1.0) CHECK(h[kX0Y0 + 2 * a + b] <= std::log(9.0) + 1e-15);
        }
    }
  }

  TEST_CASE("f closed form") {
    for (double e : {0.0, 0.3, 4.0 / 7, 0.9}) CHECK(f_closed_form(e, 0) == doctest::Approx(0).epsilon(1e-12));
    for (int i = 0; i <= 200; ++i) {
      const double v = i / 200.0;
      CHECK(f_closed_form(4.0 / 7, v) <= 1e-12);
      CHECK(std::abs(f_closed_form(0.37, v) - f_oracle(0.37, v)) <= 1e-12);
    }
    bool positive = false;
    for (double v = 1e-2; v > 1e-12 && !positive; v /= 2) positive = f_closed_form(0.6, v) > 0;
    CHECK(positive);
  }

  TEST_CASE("Shannon normalization is 1/3") {
    // One-point confirmation of the constant, then the whole grid.
    const double ratio = bc4_shannon(pe_double(0.8, 0.3)) / f_oracle(0.8, 0.3);
    CHECK(ratio == doctest::Approx(1.0 / 3).epsilon(1e-12));
    CHECK(std::abs(ratio - 1 / (3 * std::log(2.0))) > 0.1);
    for (int i = 0; i <= 10; ++i)
      for (int j = 0; j <= 10; ++j) {
        const double e = i / 10.0, v = j / 10.0;
        CHECK(std::abs(bc4_shannon(pe_double(e, v)) - f_oracle(e, v) / 3) <= 1e-9);
      }
  }

  TEST_CASE("g closed form") {
    for (double q : {1.5, 2.0, 8.0}) {
      CHECK(g_closed_form(q, 0.7, 0) == doctest::Approx(0).epsilon(1e-14));
      for (double e : {0.2, 4.0 / 7, 0.65}) {
        const double h = 1e-7;
        const double slope = (g_oracle(q, e, 2 * h) - g_oracle(q, e, h)) / h;
        const double expected = q / std::pow(3.0, q) * (7 * e - 4);
        CHECK(std::abs(g_slope_at_zero(q, e) - expected) <= 1e-14);
        if (q >= 2) CHECK(std::abs(slope - expected) <= 1e-5);
      }
      for (int i = 0; i <= 10; ++i)
        for (int j = 0; j <= 10; ++j) {
          const double e = i / 10.0, v = j / 10.0;
          CHECK(std::abs(g_closed_form(q, e, v) - g_oracle(q, e, v)) <= 1e-12);
          const double value = bc_values(entropy_vector(pe_double(e, v), q)).values[3];
          CHECK(std::abs(value - g_oracle(q, e, v) / (q - 1)) <= 1e-9);
        }
    }
    for (int i = 0; i <= 100; ++i) CHECK(g_closed_form(2, 4.0 / 7, i / 100.0) <= 1e-15);
    bool threw = false;
    try {
      g_closed_form(1.0, 0.5, 0.5);
    } catch (const Error& e) {
      threw = e.code() == ErrorCode::OrderNotAboveOne;
    }
    CHECK(threw);
  }

  TEST_CASE("symmetry degeneracy on p_E") {
    for (double e : {0.3, 0.6, 0.9})
      for (double v : {0.1, 0.5, 0.9})
        for (double q : {1.0, 2.0}) {
          const auto ev = entropy_vector(pe_double(e, v), q);
          CHECK(ev.h[kX0Y0] == doctest::Approx(ev.h[kX0Y1]).epsilon(1e-13));
          CHECK(ev.h[kX0Y0] == doctest::Approx(ev.h[kX1Y0]).epsilon(1e-13));
          for (int i = 1; i < 4; ++i) CHECK(ev.h[i] == doctest::Approx(ev.h[0]).epsilon(1e-13));
          const auto bc = bc_values(ev);
          CHECK(bc.values[0] == doctest::Approx(bc.values[1]).epsilon(1e-12));
          CHECK(bc.values[1] == doctest::Approx(bc.values[2]).epsilon(1e-12));
          CHECK(bc.values[0] <= kViolationTol);
        }
  }

  TEST_CASE("block permutations leave the entropy vector unchanged") {
    std::mt19937_64 rng(29);
    const Distribution d = catalog::p_e();
    for (int t = 0; t < 10; ++t) {
      std::vector<int> perm(9);
      for (int i = 0; i < 9; ++i) perm[i] = i;
      std::shuffle(perm.begin(), perm.end(), rng);
      // Permute entries of block (1,1) only; the joint entropy of that block is unchanged.
      const Distribution p = Distribution::from_function(kScenario2233, [&](int a, int b, int x, int y) {
        if (a == 1 && b == 1) {
          const int k = perm[3 * x + y];
          return d.at(1, 1, k / 3, k % 3);
        }
        return d.at(a, b, x, y);
      });
      const auto ev = entropy_vector(kScenario2233, p.to_doubles(), 1.0);
      CHECK(ev.h[kX1Y1] == doctest::Approx(entropy_vector(d, 1.0).h[kX1Y1]).epsilon(1e-14));
    }
  }

  TEST_CASE("CSV row layout") {
    const auto ev = entropy_vector(catalog::p_e(), 1.0);
    const std::string row = entropy_csv_row("pe", ev, bc_values(ev));
    const std::string header = entropy_csv_header();
    CHECK(std::count(row.begin(), row.end(), ',') == std::count(header.begin(), header.end(), ','));
    CHECK(row.rfind("pe,", 0) == 0);
  }
}
