#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <unordered_set>

#include "entbell/bell.hpp"
#include "entbell/catalog.hpp"
#include "entbell/entropy.hpp"
#include "entbell/error.hpp"
#include "entbell/parallel.hpp"
#include "entbell/polytope.hpp"
#include "entbell/reproduce.hpp"

using namespace entbell;

namespace {

constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

Distribution resolve_input(const std::string& input, const RunConfig& config) {
  if (input.starts_with("builtin:")) {
    std::string name = input;
    if (name.find(':', 8) == std::string::npos && !config.eps.empty())
      name += ":" + config.eps + (config.v.empty() ? "" : "," + config.v);
    if (auto d = catalog::lookup(name)) return *d;
    throw Error(ErrorCode::UnknownName, "unknown builtin '" + input + "'");
  }
  if (auto d = catalog::lookup("builtin:" + input)) return *d;
  return load_distribution(input);
}

std::optional<BellFunctional> named_functional(const std::string& name) {
  if (name == "chsh2222") return chsh_2222();
  if (name == "chsh2233") return chsh_2233();
  if (name == "i2233") return i2233();
  return std::nullopt;
}

int cmd_check(const std::string& input, const RunConfig& config) {
  const Distribution d = resolve_input(input, config);
  const Scenario s = d.scenario();
  nlohmann::json report;
  report["input"] = input;
  report["scenario"] = to_string(s);
  std::cout << "input: " << input << "  scenario " << to_string(s) << '\n' << render(d);

  const bool ns = is_no_signalling(d);
  report["no_signalling"] = ns;
  std::cout << "no-signalling: " << (ns ? "yes" : "no") << '\n';

  if (s == kScenario2233) {
    const auto viol = violated_set(d);
    std::cout << "violated CHSH-type functionals: " << viol.chsh.size() << " of " << chsh_orbit(s).size() << '\n';
    std::cout << "violated I2233 functionals: " << viol.i2233.size() << " of " << i2233_orbit().size() << '\n';
    for (const auto& v : viol.i2233) std::cout << "  I2233^" << v.index << " = " << to_string(v.value) << '\n';
    report["chsh_violations"] = viol.chsh.size();
    nlohmann::json list = nlohmann::json::array();
    for (const auto& v : viol.i2233) list.push_back({{"index", v.index}, {"value", to_string(v.value)}});
    report["i2233_violations"] = list;
    const Rational i1 = evaluate(i2233(), d);
    std::cout << "I2233^1 = " << to_string(i1) << '\n';
    report["i2233_1"] = to_string(i1);
  } else if (s == kScenario2222) {
    std::size_t count = 0;
    for (const auto& f : chsh_orbit(s)) count += violates(f, d);
    std::cout << "violated CHSH functionals: " << count << " of " << chsh_orbit(s).size() << '\n';
    report["chsh_violations"] = count;
  }

  if (ns) {
    const auto lw = local_weight(d);
    std::cout << "local weight: " << to_string(lw.objective) << " (" << to_double(lw.objective) << ")"
              << (lw.verified ? ", certificate verified" : ", certificate NOT verified") << '\n';
    report["local_weight"] = to_string(lw.objective);
    report["local_weight_verified"] = lw.verified;
  }

  const bool two_inputs = s.inputs_a == 2 && s.inputs_b == 2;
  if (ns && two_inputs) {
    const auto qs = config.q_list.empty() ? std::vector<double>{1.0} : config.q_list;
    std::string csv = entropy_csv_header() + "\n";
    nlohmann::json entropy = nlohmann::json::array();
    for (double q : qs) {
      const auto ev = entropy_vector(d, q, input);
      const auto bc = bc_values(ev, config.tol);
      csv += entropy_csv_row(input, ev, bc) + "\n";
      std::cout.precision(10);
      std::cout << "q = " << q << "  H = [";
      for (std::size_t i = 0; i < ev.h.size(); ++i) std::cout << (i ? ", " : "") << ev.h[i];
      std::cout << "]\n";
      nlohmann::json row{{"q", q}, {"h", ev.h}, {"bc", bc.values}};
      for (int k = 0; k < 4; ++k)
        std::cout << "  I_BC^" << k + 1 << " = " << bc.values[k] << (bc.violated[k] ? "  VIOLATED" : "") << '\n';
      entropy.push_back(row);
    }
    report["entropy"] = entropy;
    std::filesystem::create_directories(config.out_dir);
    std::ofstream(config.out_dir / "check_entropy.csv") << csv;
  }
  std::filesystem::create_directories(config.out_dir);
  std::ofstream(config.out_dir / "check.json") << report.dump(1) << '\n';
  return 0;
}

int cmd_reproduce(const std::vector<std::string>& targets, const RunConfig& config) {
  std::vector<std::string> list;
  for (const auto& t : targets) {
    if (t == "all") {
      const auto all = reproduce_targets();
      list.insert(list.end(), all.begin(), all.end());
    } else {
      list.push_back(t);
    }
  }
  for (const auto& t : list) {
    const auto known = reproduce_targets();
    if (std::find(known.begin(), known.end(), t) == known.end())
      throw Error(ErrorCode::UnknownTarget, "unknown target '" + t + "'");
  }
  bool ok = true;
  for (const auto& t : list) {
    const auto report = reproduce(t, config);
    for (const auto& c : report.checks)
      std::cout << (c.pass ? "PASS" : "FAIL") << "  " << t << ": " << c.name
                << (c.detail.empty() ? "" : "  [" + c.detail + "]") << '\n';
    ok = ok && report.ok();
    std::cout << t << ": " << (report.ok() ? "PASS" : "FAIL") << '\n';
  }
  return ok ? 0 : kExitFail;
}

int cmd_orbit(const std::string& seed, bool exchange, bool lift, bool list, const RunConfig& config) {
  nlohmann::json out;
  out["seed"] = seed;
  out["exchange"] = exchange;
  nlohmann::json members = nlohmann::json::array();
  std::size_t count = 0;

  if (auto f = named_functional(seed)) {
    const auto ops = enumerate_symmetry_ops(f->scenario, exchange);
    std::unordered_set<std::vector<Rational>, RationalVectorHash> seen;
    for (const auto& op : ops) {
      if (!seen.insert(canonical_key(pull_back(op, *f))).second) continue;
      if (list) members.push_back(describe(op));
    }
    if (lift && f->scenario == kScenario2233 && f->family == FamilyTag::CHSH) {
      for (const auto& g : chsh_orbit(kScenario2233))
        if (seen.insert(canonical_key(g)).second && list) members.push_back(g.generating_symmetry);
    }
    count = seen.size();
  } else {
    const Distribution d = resolve_input(seed, config);
    const auto ops = enumerate_symmetry_ops(d.scenario(), exchange && d.scenario().symmetric());
    const auto orb = orbit(d, ops);
    if (list)
      for (const auto& m : orb) members.push_back(describe(m.op));
    count = orb.size();
  }
  std::cout << "orbit size: " << count << '\n';
  if (list)
    for (std::size_t i = 0; i < members.size(); ++i) std::cout << i + 1 << "  " << members[i].get<std::string>() << '\n';
  out["count"] = count;
  if (list) out["members"] = members;
  std::filesystem::create_directories(config.out_dir);
  std::ofstream(config.out_dir / "orbit.json") << out.dump(1) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bell-scenario correlations: functionals, local weight, entropic tests"};
  app.require_subcommand(1);
  app.fallthrough();
  RunConfig config;
  std::string q_text;
  app.add_option("--q", q_text, "Comma-separated entropy orders");
  app.add_option("--eps", config.eps, "Rational eps for a bare parameterized builtin");
  app.add_option("--v", config.v, "Rational v for a bare parameterized builtin");
  app.add_option("--grid", config.grid, "Grid size per axis for region scans");
  app.add_option("--restarts", config.restarts, "Random restarts per search");
  app.add_option("--seed", config.seed, "RNG seed");
  app.add_option("--tol", config.tol, "Violation tolerance");
  app.add_option("--out", config.out_dir, "Output directory");
  app.add_option("--jobs", config.jobs, "Worker threads (0: all cores)");

  auto* check = app.add_subcommand("check", "Report on one distribution");
  std::string input;
  check->add_option("input", input, "builtin:<name> or a JSON/CSV file")->required();

  auto* repro = app.add_subcommand("reproduce", "Run reproduction targets");
  std::vector<std::string> targets;
  repro->add_option("targets", targets, "Targets, or 'all'")->required();

  auto* orb = app.add_subcommand("orbit", "Orbit of a distribution or named functional");
  std::string seed;
  bool exchange = false, lift = false, list = false;
  orb->add_option("seed", seed, "builtin:<name>, file, chsh2222, chsh2233 or i2233")->required();
  orb->add_flag("--exchange", exchange, "Include party exchange");
  orb->add_flag("--lift", lift, "Add output-merge pullbacks of the binary CHSH orbit");
  orb->add_flag("--list", list, "Print every member's generating operation");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (!q_text.empty()) {
      std::stringstream in(q_text);
      std::string item;
      while (std::getline(in, item, ',')) {
        std::size_t used = 0;
        const double q = std::stod(item, &used);
        if (used != item.size() || !(q > 0)) throw Error(ErrorCode::ParseError, "bad --q entry '" + item + "'");
        config.q_list.push_back(q);
      }
    }
    std::vector<std::string> args(argv, argv + argc);
    for (const auto& a : args) config.command += (config.command.empty() ? "" : " ") + a;
    default_jobs() = resolve_jobs(config.jobs);
    write_manifest(config);

    if (*check) return cmd_check(input, config);
    if (*repro) return cmd_reproduce(targets, config);
    return cmd_orbit(seed, exchange, lift, list, config);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}
