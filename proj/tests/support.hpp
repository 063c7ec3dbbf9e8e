#pragma once

#include <array>
#include <cmath>
#include <random>
#include <vector>

#include "entbell/distribution.hpp"

namespace testing {

using entbell::Distribution;
using entbell::Rational;
using entbell::Scenario;

using Block6 = std::array<std::array<int, 6>, 6>;
using Block4 = std::array<std::array<int, 4>, 4>;

// mpq_class(n, d) is not reduced; comparisons need reduced values.
inline Rational frac(long num, long den) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

// Block matrix as printed: row a*o+x, column b*o+y.
template <std::size_t N>
inline Distribution from_matrix(const std::array<std::array<int, N>, N>& m, int den, int outputs) {
  const Scenario s{2, 2, outputs, outputs};
  return Distribution::from_function(
      s, [&](int a, int b, int x, int y) { return frac(m[a * outputs + x][b * outputs + y], den); });
}

template <std::size_t N>
inline Rational contract(const std::array<std::array<int, N>, N>& m, const Distribution& d, int outputs) {
  Rational sum = 0;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int x = 0; x < outputs; ++x)
        for (int y = 0; y < outputs; ++y) sum += m[a * outputs + x][b * outputs + y] * d.at(a, b, x, y);
  return sum;
}

inline Distribution pr_box() {
  return Distribution::from_function(entbell::kScenario2222, [](int a, int b, int x, int y) {
    return ((x ^ y) == (a & b)) ? Rational(1, 2) : Rational(0);
  });
}

// y = x + shift * a * b (mod 3), each with probability 1/3.
inline Distribution cyclic(int shift) {
  return Distribution::from_function(entbell::kScenario2233, [shift](int a, int b, int x, int y) {
    return ((x + shift * a * b + 9) % 3 == y) ? Rational(1, 3) : Rational(0);
  });
}

inline const Block6 kI2233 = {{{1, 0, -1, 1, -1, 0},
                               {-1, 1, 0, 0, 1, -1},
                               {0, -1, 1, -1, 0, 1},
                               {1, -1, 0, -1, 1, 0},
                               {0, 1, -1, 0, -1, 1},
                               {-1, 0, 1, 1, 0, -1}}};

inline const Block6 kChsh2233 = {{{1, 0, 0, 1, 0, 0},
                                  {0, 1, 1, 0, 1, 1},
                                  {0, 1, 1, 0, 1, 1},
                                  {1, 0, 0, 0, 1, 1},
                                  {0, 1, 1, 1, 0, 0},
                                  {0, 1, 1, 1, 0, 0}}};

inline const Block4 kChsh = {{{1, 0, 1, 0}, {0, 1, 0, 1}, {1, 0, 0, 1}, {0, 1, 1, 0}}};

inline const Block6 kPe = {{{21, 0, 0, 21, 0, 0},
                            {0, 2, 0, 1, 1, 0},
                            {11, 0, 16, 0, 1, 26},
                            {31, 0, 0, 20, 1, 10},
                            {1, 1, 0, 1, 0, 1},
                            {0, 1, 16, 1, 1, 15}}};

// Isotropic point built entry by entry: A on the p_NL support, B elsewhere.
inline Distribution isotropic(const Rational& eps) {
  const Rational A = (2 * eps + 1) / 9, B = (1 - eps) / 9;
  return Distribution::from_function(entbell::kScenario2233, [&](int a, int b, int x, int y) {
    return ((x + a * b) % 3 == y) ? A : B;
  });
}

// Random mixture of deterministic points, with double weights from a Dirichlet(1) draw.
inline std::vector<double> random_local_mixture(std::mt19937_64& rng, const Scenario& s, int terms) {
  std::vector<double> p(s.dimension(), 0.0);
  std::exponential_distribution<double> expo(1.0);
  std::vector<double> w(terms);
  double total = 0;
  for (auto& x : w) total += (x = expo(rng));
  for (int t = 0; t < terms; ++t) {
    std::array<int, 2> fa{}, fb{};
    for (auto& v : fa) v = static_cast<int>(rng() % s.outputs_a);
    for (auto& v : fb) v = static_cast<int>(rng() % s.outputs_b);
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) p[s.index(a, b, fa[a], fb[b])] += w[t] / total;
  }
  return p;
}

}  // namespace testing
