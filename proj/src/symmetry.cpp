#include "entbell/symmetry.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

#include "entbell/error.hpp"

namespace entbell {
namespace {

std::vector<int> iota_vec(int n) {
  std::vector<int> v(n);
  std::iota(v.begin(), v.end(), 0);
  return v;
}

bool is_permutation_of(const std::vector<int>& v, int n) {
  if (static_cast<int>(v.size()) != n) return false;
  std::vector<bool> seen(n, false);
  for (int e : v) {
    if (e < 0 || e >= n || seen[e]) return false;
    seen[e] = true;
  }
  return true;
}

// E L E for the party exchange E.
LocalRelabelling swap_parties(const LocalRelabelling& r) {
  return {r.input_b, r.input_a, r.output_b, r.output_a};
}

void require_symmetric(const Scenario& s) {
  if (!s.symmetric())
    throw Error(ErrorCode::AsymmetricScenario, "party exchange needs a symmetric scenario, got " + to_string(s));
}

// All maps {0..n-1} -> {0..m-1} in lexicographic order, optionally surjective only.
std::vector<std::vector<int>> all_maps(int n, int m, bool surjective) {
  std::vector<std::vector<int>> out;
  std::vector<int> f(n, 0);
  while (true) {
    bool keep = true;
    if (surjective) {
      std::vector<bool> hit(m, false);
      for (int e : f) hit[e] = true;
      keep = std::all_of(hit.begin(), hit.end(), [](bool h) { return h; });
    }
    if (keep) out.push_back(f);
    int pos = n - 1;
    while (pos >= 0 && f[pos] == m - 1) f[pos--] = 0;
    if (pos < 0) break;
    ++f[pos];
  }
  return out;
}

// Cartesian product of per-slot choices; first slot varies slowest.
template <class T, class Fn>
void for_each_product(const std::vector<std::vector<T>>& choices, Fn&& fn) {
  std::vector<std::size_t> idx(choices.size(), 0);
  for (const auto& c : choices)
    if (c.empty()) return;
  while (true) {
    fn(idx);
    int pos = static_cast<int>(choices.size()) - 1;
    while (pos >= 0 && idx[pos] + 1 == choices[pos].size()) idx[pos--] = 0;
    if (pos < 0) break;
    ++idx[pos];
  }
}

}  // namespace

LocalRelabelling LocalRelabelling::identity(const Scenario& s) {
  return {iota_vec(s.inputs_a), iota_vec(s.inputs_b),
          std::vector<std::vector<int>>(s.inputs_a, iota_vec(s.outputs_a)),
          std::vector<std::vector<int>>(s.inputs_b, iota_vec(s.outputs_b))};
}

bool LocalRelabelling::compatible(const Scenario& s) const {
  if (!is_permutation_of(input_a, s.inputs_a) || !is_permutation_of(input_b, s.inputs_b)) return false;
  if (static_cast<int>(output_a.size()) != s.inputs_a || static_cast<int>(output_b.size()) != s.inputs_b)
    return false;
  for (const auto& p : output_a)
    if (!is_permutation_of(p, s.outputs_a)) return false;
  for (const auto& p : output_b)
    if (!is_permutation_of(p, s.outputs_b)) return false;
  return true;
}

bool LocalRelabelling::is_identity() const {
  auto id = [](const std::vector<int>& v) {
    for (std::size_t i = 0; i < v.size(); ++i)
      if (v[i] != static_cast<int>(i)) return false;
    return true;
  };
  return id(input_a) && id(input_b) && std::all_of(output_a.begin(), output_a.end(), id) &&
         std::all_of(output_b.begin(), output_b.end(), id);
}

LocalRelabelling compose(const LocalRelabelling& second, const LocalRelabelling& first) {
  LocalRelabelling out = first;
  for (std::size_t a = 0; a < first.input_a.size(); ++a) {
    const int mid = first.input_a[a];
    out.input_a[a] = second.input_a[mid];
    for (std::size_t x = 0; x < first.output_a[a].size(); ++x)
      out.output_a[a][x] = second.output_a[mid][first.output_a[a][x]];
  }
  for (std::size_t b = 0; b < first.input_b.size(); ++b) {
    const int mid = first.input_b[b];
    out.input_b[b] = second.input_b[mid];
    for (std::size_t y = 0; y < first.output_b[b].size(); ++y)
      out.output_b[b][y] = second.output_b[mid][first.output_b[b][y]];
  }
  return out;
}

LocalRelabelling inverse(const LocalRelabelling& r) {
  LocalRelabelling out = r;
  for (std::size_t a = 0; a < r.input_a.size(); ++a) {
    out.input_a[r.input_a[a]] = static_cast<int>(a);
    for (std::size_t x = 0; x < r.output_a[a].size(); ++x)
      out.output_a[r.input_a[a]][r.output_a[a][x]] = static_cast<int>(x);
  }
  for (std::size_t b = 0; b < r.input_b.size(); ++b) {
    out.input_b[r.input_b[b]] = static_cast<int>(b);
    for (std::size_t y = 0; y < r.output_b[b].size(); ++y)
      out.output_b[r.input_b[b]][r.output_b[b][y]] = static_cast<int>(y);
  }
  return out;
}

SymmetryOp compose(const SymmetryOp& second, const SymmetryOp& first) {
  const LocalRelabelling l2 = first.exchange ? swap_parties(second.local) : second.local;
  return {compose(l2, first.local), second.exchange != first.exchange};
}

SymmetryOp inverse(const SymmetryOp& op) {
  const LocalRelabelling inv = inverse(op.local);
  return {op.exchange ? swap_parties(inv) : inv, op.exchange};
}

std::vector<std::size_t> index_map(const SymmetryOp& op, const Scenario& s) {
  if (!op.local.compatible(s))
    throw Error(ErrorCode::IncompatibleScenario, "relabelling does not match scenario " + to_string(s));
  if (op.exchange) require_symmetric(s);
  std::vector<std::size_t> map(s.dimension());
  const auto& r = op.local;
  for (int a = 0; a < s.inputs_a; ++a)
    for (int b = 0; b < s.inputs_b; ++b)
      for (int x = 0; x < s.outputs_a; ++x)
        for (int y = 0; y < s.outputs_b; ++y) {
          const int na = r.input_a[a], nb = r.input_b[b];
          const int nx = r.output_a[a][x], ny = r.output_b[b][y];
          map[s.index(a, b, x, y)] = op.exchange ? s.index(nb, na, ny, nx) : s.index(na, nb, nx, ny);
        }
  return map;
}

std::vector<Rational> permute(const SymmetryOp& op, const Scenario& s, std::span<const Rational> table) {
  const auto map = index_map(op, s);
  std::vector<Rational> out(table.size());
  for (std::size_t i = 0; i < map.size(); ++i) out[map[i]] = table[i];
  return out;
}

std::vector<Rational> pull_back(const SymmetryOp& op, const Scenario& s, std::span<const Rational> coeffs) {
  const auto map = index_map(op, s);
  std::vector<Rational> out(coeffs.size());
  for (std::size_t i = 0; i < map.size(); ++i) out[i] = coeffs[map[i]];
  return out;
}

Distribution apply(const SymmetryOp& op, const Distribution& d) {
  return Distribution(d.scenario(), permute(op, d.scenario(), d.flat()));
}

Distribution apply_relabelling(const LocalRelabelling& r, const Distribution& d) {
  return apply(SymmetryOp{r, false}, d);
}

Distribution exchange_parties(const Distribution& d) {
  require_symmetric(d.scenario());
  return apply(SymmetryOp{LocalRelabelling::identity(d.scenario()), true}, d);
}

std::vector<LocalRelabelling> enumerate_relabellings(const Scenario& s) {
  auto perms = [](int n) {
    std::vector<std::vector<int>> out;
    std::vector<int> p = iota_vec(n);
    do out.push_back(p);
    while (std::next_permutation(p.begin(), p.end()));
    return out;
  };
  const auto in_a = perms(s.inputs_a), in_b = perms(s.inputs_b);
  const auto out_a = perms(s.outputs_a), out_b = perms(s.outputs_b);
  // Slots: Alice's input perm, her per-input output perms, then Bob's.
  std::vector<std::vector<std::vector<int>>> choices;
  choices.push_back(in_a);
  for (int a = 0; a < s.inputs_a; ++a) choices.push_back(out_a);
  choices.push_back(in_b);
  for (int b = 0; b < s.inputs_b; ++b) choices.push_back(out_b);
  std::vector<LocalRelabelling> result;
  for_each_product(choices, [&](const std::vector<std::size_t>& idx) {
    LocalRelabelling r;
    std::size_t k = 0;
    r.input_a = choices[k][idx[k]], ++k;
    for (int a = 0; a < s.inputs_a; ++a, ++k) r.output_a.push_back(choices[k][idx[k]]);
    r.input_b = choices[k][idx[k]], ++k;
    for (int b = 0; b < s.inputs_b; ++b, ++k) r.output_b.push_back(choices[k][idx[k]]);
    result.push_back(std::move(r));
  });
  return result;
}

std::vector<SymmetryOp> enumerate_symmetry_ops(const Scenario& s, bool with_exchange) {
  if (with_exchange) require_symmetric(s);
  const auto locals = enumerate_relabellings(s);
  std::vector<SymmetryOp> ops;
  ops.reserve(locals.size() * (with_exchange ? 2 : 1));
  for (const auto& r : locals) ops.push_back({r, false});
  if (with_exchange)
    for (const auto& r : locals) ops.push_back({r, true});
  return ops;
}

int CoarseGraining::merged_slots() const {
  int n = 0;
  auto count = [&](const std::vector<std::vector<int>>& maps, int source_out, int target_out) {
    for (const auto& m : maps) {
      bool id = source_out == target_out;
      for (int x = 0; id && x < source_out; ++x) id = m[x] == x;
      if (!id) ++n;
    }
  };
  count(map_a, source.outputs_a, target.outputs_a);
  count(map_b, source.outputs_b, target.outputs_b);
  return n;
}

Distribution apply_coarse_graining(const CoarseGraining& g, const Distribution& d) {
  const Scenario& s = d.scenario();
  if (!g.compatible(s))
    throw Error(ErrorCode::IncompatibleScenario, "coarse-graining expects scenario " + to_string(g.source));
  std::vector<Rational> probs(g.target.dimension());
  for (int a = 0; a < s.inputs_a; ++a)
    for (int b = 0; b < s.inputs_b; ++b)
      for (int x = 0; x < s.outputs_a; ++x)
        for (int y = 0; y < s.outputs_b; ++y)
          probs[g.target.index(a, b, g.map_a[a][x], g.map_b[b][y])] += d.at(a, b, x, y);
  return Distribution(g.target, std::move(probs));
}

std::vector<Rational> pull_back(const CoarseGraining& g, std::span<const Rational> coeffs) {
  const Scenario& s = g.source;
  std::vector<Rational> out(s.dimension());
  for (int a = 0; a < s.inputs_a; ++a)
    for (int b = 0; b < s.inputs_b; ++b)
      for (int x = 0; x < s.outputs_a; ++x)
        for (int y = 0; y < s.outputs_b; ++y)
          out[s.index(a, b, x, y)] = coeffs[g.target.index(a, b, g.map_a[a][x], g.map_b[b][y])];
  return out;
}

std::vector<CoarseGraining> enumerate_2to1_coarse_grainings(const Scenario& s) {
  auto slot_choices = [](int n) {
    std::vector<std::vector<int>> out{iota_vec(n)};
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        auto m = iota_vec(n);
        m[j] = i;
        out.push_back(m);
      }
    return out;
  };
  std::vector<std::vector<std::vector<int>>> choices;
  for (int a = 0; a < s.inputs_a; ++a) choices.push_back(slot_choices(s.outputs_a));
  for (int b = 0; b < s.inputs_b; ++b) choices.push_back(slot_choices(s.outputs_b));
  std::vector<CoarseGraining> result;
  for_each_product(choices, [&](const std::vector<std::size_t>& idx) {
    if (std::all_of(idx.begin(), idx.end(), [](std::size_t i) { return i == 0; })) return;
    CoarseGraining g{s, s, {}, {}};
    std::size_t k = 0;
    for (int a = 0; a < s.inputs_a; ++a, ++k) g.map_a.push_back(choices[k][idx[k]]);
    for (int b = 0; b < s.inputs_b; ++b, ++k) g.map_b.push_back(choices[k][idx[k]]);
    result.push_back(std::move(g));
  });
  return result;
}

std::vector<int> coarse_graining_census(std::span<const CoarseGraining> maps) {
  std::vector<int> census;
  for (const auto& g : maps) {
    const int k = g.merged_slots();
    if (static_cast<int>(census.size()) <= k) census.resize(k + 1, 0);
    ++census[k];
  }
  return census;
}

std::vector<CoarseGraining> enumerate_surjections(const Scenario& source, const Scenario& target) {
  if (source.inputs_a != target.inputs_a || source.inputs_b != target.inputs_b)
    throw Error(ErrorCode::IncompatibleScenario, "surjections must keep the input counts");
  const auto maps_a = all_maps(source.outputs_a, target.outputs_a, true);
  const auto maps_b = all_maps(source.outputs_b, target.outputs_b, true);
  std::vector<std::vector<std::vector<int>>> choices;
  for (int a = 0; a < source.inputs_a; ++a) choices.push_back(maps_a);
  for (int b = 0; b < source.inputs_b; ++b) choices.push_back(maps_b);
  std::vector<CoarseGraining> result;
  for_each_product(choices, [&](const std::vector<std::size_t>& idx) {
    CoarseGraining g{source, target, {}, {}};
    std::size_t k = 0;
    for (int a = 0; a < source.inputs_a; ++a, ++k) g.map_a.push_back(choices[k][idx[k]]);
    for (int b = 0; b < source.inputs_b; ++b, ++k) g.map_b.push_back(choices[k][idx[k]]);
    result.push_back(std::move(g));
  });
  return result;
}

Distribution point_distribution(const Scenario& s, const DeterministicStrategy& strategy) {
  return Distribution::from_function(s, [&](int a, int b, int x, int y) {
    return Rational(strategy.alice[a] == x && strategy.bob[b] == y ? 1 : 0);
  });
}

std::vector<DeterministicStrategy> enumerate_strategies(const Scenario& s) {
  const auto fa = all_maps(s.inputs_a, s.outputs_a, false);
  const auto fb = all_maps(s.inputs_b, s.outputs_b, false);
  std::vector<DeterministicStrategy> out;
  out.reserve(fa.size() * fb.size());
  for (const auto& a : fa)
    for (const auto& b : fb) out.push_back({a, b});
  return out;
}

std::vector<Distribution> deterministic_points(const Scenario& s) {
  std::vector<Distribution> out;
  for (const auto& st : enumerate_strategies(s)) out.push_back(point_distribution(s, st));
  return out;
}

std::vector<OrbitMember> orbit(const Distribution& seed, std::span<const SymmetryOp> ops) {
  std::vector<OrbitMember> members;
  std::unordered_map<Distribution, std::size_t, DistributionHash> seen;
  for (const auto& op : ops) {
    Distribution image = apply(op, seed);
    if (seen.emplace(image, members.size()).second) members.push_back({std::move(image), op});
  }
  return members;
}

LosrGenerators losr_generators(const Distribution& d) {
  const Scenario& s = d.scenario();
  LosrGenerators out;
  const auto ops = enumerate_symmetry_ops(s, false);
  out.relabelled = orbit(d, ops);
  for (const auto& g : enumerate_2to1_coarse_grainings(s)) out.coarse_grained.push_back(apply_coarse_graining(g, d));
  out.locals = deterministic_points(s);
  return out;
}

std::optional<LocalRelabelling> find_exchange_relabelling(const Distribution& d) {
  const Distribution target = exchange_parties(d);
  for (const auto& r : enumerate_relabellings(d.scenario()))
    if (apply_relabelling(r, d) == target) return r;
  return std::nullopt;
}

namespace {

nlohmann::json relabelling_json(const LocalRelabelling& r) {
  return {{"input_a", r.input_a}, {"input_b", r.input_b}, {"output_a", r.output_a}, {"output_b", r.output_b}};
}

}  // namespace

std::string to_json(const LocalRelabelling& r) { return relabelling_json(r).dump(); }

std::string to_json(const SymmetryOp& op) {
  nlohmann::json j = relabelling_json(op.local);
  j["exchange"] = op.exchange;
  return j.dump();
}

std::string to_json(const CoarseGraining& g) {
  nlohmann::json j;
  j["source"] = {g.source.inputs_a, g.source.inputs_b, g.source.outputs_a, g.source.outputs_b};
  j["target"] = {g.target.inputs_a, g.target.inputs_b, g.target.outputs_a, g.target.outputs_b};
  j["map_a"] = g.map_a;
  j["map_b"] = g.map_b;
  return j.dump();
}

std::string describe(const SymmetryOp& op) {
  auto list = [](const std::vector<int>& v) {
    std::string s;
    for (int e : v) s += std::to_string(e);
    return s;
  };
  std::ostringstream out;
  const auto& r = op.local;
  out << "A" << list(r.input_a);
  for (const auto& p : r.output_a) out << '/' << list(p);
  out << " B" << list(r.input_b);
  for (const auto& p : r.output_b) out << '/' << list(p);
  if (op.exchange) out << " X";
  return out.str();
}

}  // namespace entbell
