#include "entbell/catalog.hpp"

#include <array>
#include <cctype>
#include <cmath>
#include <utility>

#include "entbell/error.hpp"

namespace entbell::catalog {
namespace {

Distribution scaled(Scenario s, int den, std::initializer_list<int> entries) {
  std::vector<Rational> probs;
  probs.reserve(entries.size());
  for (int e : entries) probs.emplace_back(e, den);
  return Distribution(s, std::move(probs));
}

struct TableRow {
  int den;
  std::array<int, 36> entries;
};

// Block-matrix flattening of the 47 extremal points of the CHSH-satisfying
// no-signalling polytope on which I2233^1 is saturated or violated.
const TableRow kTable1[kTable1Size] = {
    {6, {1, 1, 0, 1, 0, 1, 0, 1, 1, 1, 1, 0, 1, 0, 1, 0, 1, 1, 1, 0, 1, 0, 2, 0, 1, 1, 0, 0, 0, 2, 0, 1, 1, 2, 0, 0}},
    {6, {1, 1, 0, 1, 0, 1, 0, 1, 1, 1, 1, 0, 1, 0, 1, 0, 1, 1, 2, 0, 0, 0, 1, 1, 0, 2, 0, 1, 0, 1, 0, 0, 2, 1, 1, 0}},
    {6, {1, 1, 0, 2, 0, 0, 0, 1, 1, 0, 2, 0, 1, 0, 1, 0, 0, 2, 1, 0, 1, 0, 1, 1, 1, 1, 0, 1, 0, 1, 0, 1, 1, 1, 1, 0}},
    {6, {2, 0, 0, 1, 0, 1, 0, 2, 0, 1, 1, 0, 0, 0, 2, 0, 1, 1, 1, 0, 1, 0, 1, 1, 1, 1, 0, 1, 0, 1, 0, 1, 1, 1, 1, 0}},
    {5, {1, 0, 0, 1, 0, 0, 0, 1, 1, 1, 1, 0, 1, 0, 1, 0, 0, 2, 1, 0, 1, 0, 1, 1, 1, 1, 0, 1, 0, 1, 0, 0, 1, 1, 0, 0}},
    {5, {1, 0, 0, 1, 0, 0, 0, 1, 1, 1, 1, 0, 1, 0, 1, 0, 1, 1, 1, 0, 0, 0, 1, 0, 1, 1, 0, 1, 0, 1, 0, 0, 2, 1, 1, 0}},
    {5, {1, 0, 0, 1, 0, 0, 0, 1, 1, 1, 1, 0, 1, 0, 1, 0, 1, 1, 1, 0, 1, 0, 2, 0, 1, 1, 0, 1, 0, 1, 0, 0, 1, 1, 0, 0}},
    {5, {1, 0, 0, 1, 0, 0, 0, 2, 0, 1, 1, 0, 1, 0, 1, 0, 1, 1, 1, 0, 0, 0, 1, 0, 1, 1, 0, 1, 0, 1, 0, 1, 1, 1, 1, 0}},
    {5, {1, 1, 0, 1, 0, 1, 0, 1, 0, 0, 1, 0, 0, 0, 2, 0, 1, 1, 1, 0, 1, 0, 1, 1, 0, 1, 0, 0, 0, 1, 0, 1, 1, 1, 1, 0}},
    {5, {1, 1, 0, 1, 0, 1, 0, 1, 0, 0, 1, 0, 1, 0, 1, 0, 1, 1, 1, 0, 0, 0, 1, 0, 1, 1, 0, 0, 0, 2, 0, 1, 1, 1, 1, 0}},
    {5, {1, 1, 0, 1, 0, 1, 0, 1, 0, 0, 1, 0, 1, 0, 1, 0, 1, 1, 2, 0, 0, 0, 1, 1, 0, 1, 0, 0, 0, 1, 0, 1, 1, 1, 1, 0}},
    {5, {1, 1, 0, 1, 0, 1, 0, 1, 1, 0, 2, 0, 0, 0, 1, 0, 0, 1, 1, 0, 1, 0, 1, 1, 0, 1, 0, 0, 0, 1, 0, 1, 1, 1, 1, 0}},
    {5, {1, 1, 0, 1, 0, 1, 0, 1, 1, 1, 1, 0, 0, 0, 1, 0, 0, 1, 1, 0, 1, 0, 1, 1, 0, 1, 0, 0, 0, 1, 0, 1, 1, 2, 0, 0}},
    {5, {1, 1, 0, 1, 0, 1, 0, 1, 1, 1, 1, 0, 0, 0, 1, 0, 0, 1, 1, 0, 1, 0, 1, 1, 0, 2, 0, 1, 0, 1, 0, 0, 1, 1, 0, 0}},
    {5, {1, 1, 0, 2, 0, 0, 0, 1, 0, 0, 1, 0, 1, 0, 1, 0, 1, 1, 1, 0, 0, 0, 1, 0, 1, 1, 0, 1, 0, 1, 0, 1, 1, 1, 1, 0}},
    {5, {2, 0, 0, 1, 0, 1, 0, 1, 1, 1, 1, 0, 0, 0, 1, 0, 0, 1, 1, 0, 1, 0, 1, 1, 1, 1, 0, 1, 0, 1, 0, 0, 1, 1, 0, 0}},
    {9, {2, 1, 0, 2, 0, 1, 0, 2, 1, 1, 2, 0, 1, 0, 2, 0, 1, 2, 2, 0, 1, 0, 2, 1, 1, 2, 0, 1, 0, 2, 0, 1, 2, 2, 1, 0}},
    {1, {0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 1}},
    {1, {0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 1, 0, 0, 0, 0, 0, 0}},
    {1, {0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 1, 0, 0, 1, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0}},
    {1, {0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 1, 0}},
    {1, {0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 1, 0, 0, 0, 1, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0}},
    {1, {0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 1, 0, 0}},
    {1, {0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0}},
    {1, {0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0}},
    {1, {0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0}},
    {1, {0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 1, 0, 1, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0}},
    {1, {0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 1, 0}},
    {1, {0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0}},
    {1, {0, 0, 0, 0, 0, 0, 0, 0, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 1, 0, 0}},
    {1, {0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0}},
    {1, {0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 1, 0}},
    {1, {0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0}},
    {1, {0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0}},
    {1, {0, 0, 0, 0, 0, 0, 0, 1, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 1, 0, 0}},
    {1, {0, 0, 0, 0, 0, 0, 0, 1, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0}},
    {1, {0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0}},
    {1, {0, 0, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 1, 0, 0}},
    {1, {0, 1, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0}},
    {1, {0, 1, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 1, 0, 0}},
    {1, {0, 1, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0}},
    {1, {1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0}},
    {1, {1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0}},
    {1, {1, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0}},
    {1, {1, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 1, 0, 0}},
    {1, {1, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0}},
    {1, {1, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0}},
};

Rational eps_checked(const Rational& eps) {
  if (eps < 0 || eps > 1) throw Error(ErrorCode::EpsOutOfRange, "eps must lie in [0,1], got " + to_string(eps));
  return eps;
}

}  // namespace

Distribution p_pr() {
  return scaled(kScenario2222, 2, {1, 0, 1, 0,
                                   0, 1, 0, 1,
                                   1, 0, 0, 1,
                                   0, 1, 1, 0});
}

Distribution p_c_2222() {
  return scaled(kScenario2222, 2, {1, 0, 1, 0,
                                   0, 1, 0, 1,
                                   1, 0, 1, 0,
                                   0, 1, 0, 1});
}

Distribution p_noise_2222() {
  return Distribution(kScenario2222, std::vector<Rational>(16, Rational(1, 4)));
}

Distribution p_nl() {
  return scaled(kScenario2233, 3, {1, 0, 0, 1, 0, 0,
                                   0, 1, 0, 0, 1, 0,
                                   0, 0, 1, 0, 0, 1,
                                   1, 0, 0, 0, 1, 0,
                                   0, 1, 0, 0, 0, 1,
                                   0, 0, 1, 1, 0, 0});
}

Distribution p_nl_star() {
  return scaled(kScenario2233, 3, {1, 0, 0, 1, 0, 0,
                                   0, 1, 0, 0, 1, 0,
                                   0, 0, 1, 0, 0, 1,
                                   1, 0, 0, 0, 0, 1,
                                   0, 1, 0, 1, 0, 0,
                                   0, 0, 1, 0, 1, 0});
}

Distribution p_nl_tilde() { return mix({{Rational(1, 2), p_nl()}, {Rational(1, 2), p_nl_star()}}); }

Distribution p_c_2233() {
  return scaled(kScenario2233, 3, {1, 0, 0, 1, 0, 0,
                                   0, 1, 0, 0, 1, 0,
                                   0, 0, 1, 0, 0, 1,
                                   1, 0, 0, 1, 0, 0,
                                   0, 1, 0, 0, 1, 0,
                                   0, 0, 1, 0, 0, 1});
}

Distribution p_noise_2233() {
  return Distribution(kScenario2233, std::vector<Rational>(36, Rational(1, 9)));
}

Distribution p_e() {
  return scaled(kScenario2233, 50, {21, 0, 0, 21, 0, 0,
                                    0, 2, 0, 1, 1, 0,
                                    11, 0, 16, 0, 1, 26,
                                    31, 0, 0, 20, 1, 10,
                                    1, 1, 0, 1, 0, 1,
                                    0, 1, 16, 1, 1, 15});
}

Distribution p_iso(const Rational& eps) {
  const Rational e = eps_checked(eps);
  return mix({{e, p_nl()}, {1 - e, p_noise_2233()}});
}

Distribution p_iso_tilde(const Rational& eps) {
  const Rational e = eps_checked(eps);
  return mix({{e, p_nl_tilde()}, {1 - e, p_noise_2233()}});
}

Distribution p_E(const Rational& eps, const Rational& v) {
  const Rational w = eps_checked(v);
  return mix({{w, p_iso(eps)}, {1 - w, p_c_2233()}});
}

Distribution p_E_tilde(const Rational& eps, const Rational& v) {
  const Rational w = eps_checked(v);
  return mix({{w, p_iso_tilde(eps)}, {1 - w, p_c_2233()}});
}

Distribution p_cg(const Rational& eps) {
  const Distribution iso = p_iso(eps);
  auto preimage = [](int out) { return out == 0 ? std::vector<int>{0, 1} : std::vector<int>{out}; };
  return Distribution::from_function(kScenario2233, [&](int a, int b, int x, int y) {
    Rational sum = 0;
    if (x == 1 || y == 1) return sum;
    for (int xs : preimage(x))
      for (int ys : preimage(y)) sum += iso.at(a, b, xs, ys);
    return sum;
  });
}

Rational sqrt3_approx() { return Rational(716035, 413403); }

Distribution p_qm() {
  const Rational r3 = sqrt3_approx();
  const Rational big = (4 + 2 * r3) / 27;
  const Rational small = Rational(8, 27) - big;
  const Rational mid(1, 27);
  // Phase offset alpha_a + beta_b in quarters; the entry depends on
  // (x - y) mod 3 shifted by the offset.
  const int alpha[2] = {0, 2};
  const int beta[2] = {-1, 1};  // Bob's inputs swapped relative to (1/4, -1/4)
  return Distribution::from_function(kScenario2233, [&](int a, int b, int x, int y) {
    const int phase = alpha[a] + beta[b];  // one of -1, 1, 3
    const int k = ((x - y) % 3 + 3) % 3;
    // 1/(54 sin^2(pi (k + phase/4) / 3)) evaluated on the three possible angles.
    const int quarter = ((4 * k + phase) % 12 + 12) % 12;
    switch (quarter) {
      case 1: case 11: return big;
      case 5: case 7: return small;
      default: return mid;  // 3 or 9
    }
  });
}

Distribution table1_vertex(int k) {
  if (k < 1 || k > kTable1Size) throw Error(ErrorCode::IndexOutOfRange, "table1 has rows 1..47");
  const TableRow& row = kTable1[k - 1];
  std::vector<Rational> probs;
  probs.reserve(36);
  for (int e : row.entries) probs.emplace_back(e, row.den);
  return Distribution(kScenario2233, std::move(probs));
}

std::vector<Distribution> table1_vertices() {
  std::vector<Distribution> out;
  out.reserve(kTable1Size);
  for (int k = 1; k <= kTable1Size; ++k) out.push_back(table1_vertex(k));
  return out;
}

namespace {

std::vector<Rational> parse_params(std::string_view text) {
  std::vector<Rational> out;
  while (true) {
    const auto comma = text.find(',');
    out.push_back(parse_rational(text.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return out;
}

}  // namespace

std::optional<Distribution> lookup(std::string_view name) {
  if (name.starts_with("builtin:")) name.remove_prefix(8);
  const auto colon = name.find(':');
  const std::string_view head = name.substr(0, colon);
  if (colon == std::string_view::npos) {
    std::string lower(head);
    for (char& c : lower) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    const std::string_view head = lower;
    if (head == "pr" || head == "p_pr") return p_pr();
    if (head == "pc" || head == "p_c" || head == "p_c_2222") return p_c_2222();
    if (head == "p_noise_2222") return p_noise_2222();
    if (head == "p_nl") return p_nl();
    if (head == "p_nl_star") return p_nl_star();
    if (head == "p_nl_tilde") return p_nl_tilde();
    if (head == "p_c_2233") return p_c_2233();
    if (head == "p_noise" || head == "p_noise_2233") return p_noise_2233();
    if (head == "pe" || head == "p_e") return p_e();
    if (head == "p_qm") return p_qm();
    return std::nullopt;
  }
  const auto params = parse_params(name.substr(colon + 1));
  auto want = [&](std::size_t n) {
    if (params.size() != n)
      throw Error(ErrorCode::ParseError, std::string(head) + " takes " + std::to_string(n) + " parameter(s)");
  };
  if (head == "table1") {
    want(1);
    if (params[0].get_den() != 1) throw Error(ErrorCode::ParseError, "table1 index must be an integer");
    return table1_vertex(static_cast<int>(params[0].get_num().get_si()));
  }
  if (head == "p_iso") return want(1), p_iso(params[0]);
  if (head == "p_iso_tilde") return want(1), p_iso_tilde(params[0]);
  if (head == "p_cg") return want(1), p_cg(params[0]);
  if (head == "p_E") return want(2), p_E(params[0], params[1]);
  if (head == "p_E_tilde") return want(2), p_E_tilde(params[0], params[1]);
  return std::nullopt;
}

std::vector<std::string> names() {
  return {"pr", "pc", "p_noise_2222", "p_nl", "p_nl_star", "p_nl_tilde", "p_c_2233", "p_noise_2233",
          "pe", "p_qm", "p_iso:<eps>", "p_iso_tilde:<eps>", "p_cg:<eps>", "p_E:<eps>,<v>",
          "p_E_tilde:<eps>,<v>", "table1:<k>"};
}

}  // namespace entbell::catalog
