#include "entbell/distribution.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "entbell/error.hpp"

namespace entbell {

Scenario Scenario::make(int inputs_a, int inputs_b, int outputs_a, int outputs_b) {
  if (inputs_a < 1 || inputs_b < 1 || outputs_a < 1 || outputs_b < 1)
    throw Error(ErrorCode::InvalidScenario, "scenario counts must be positive");
  return Scenario{inputs_a, inputs_b, outputs_a, outputs_b};
}

std::string to_string(const Scenario& s) {
  std::ostringstream out;
  out << '(' << s.inputs_a << ',' << s.inputs_b << ',' << s.outputs_a << ',' << s.outputs_b << ')';
  return out.str();
}

Distribution::Distribution(Scenario scenario, std::vector<Rational> probs)
    : scenario_(Scenario::make(scenario.inputs_a, scenario.inputs_b, scenario.outputs_a, scenario.outputs_b)),
      probs_(std::move(probs)) {
  if (probs_.size() != scenario_.dimension())
    throw Error(ErrorCode::InvalidScenario, "expected " + std::to_string(scenario_.dimension()) +
                                                " entries, got " + std::to_string(probs_.size()));
  for (auto& p : probs_) {
    p.canonicalize();
    if (sgn(p) < 0) throw Error(ErrorCode::NegativeProbability, "negative entry " + to_string(p));
  }
  for (int a = 0; a < scenario_.inputs_a; ++a)
    for (int b = 0; b < scenario_.inputs_b; ++b) {
      Rational sum = 0;
      for (int x = 0; x < scenario_.outputs_a; ++x)
        for (int y = 0; y < scenario_.outputs_b; ++y) sum += at(a, b, x, y);
      if (sum != 1)
        throw Error(ErrorCode::NotNormalized, "block (" + std::to_string(a) + "," + std::to_string(b) +
                                                  ") sums to " + to_string(sum));
    }
}

std::vector<double> Distribution::to_doubles() const {
  std::vector<double> out;
  out.reserve(probs_.size());
  for (const auto& p : probs_) out.push_back(p.get_d());
  return out;
}

bool is_no_signalling(const Distribution& d) {
  const Scenario& s = d.scenario();
  for (int a = 0; a < s.inputs_a; ++a) {
    const auto ref = marginal(d, Party::A, a, 0);
    for (int b = 1; b < s.inputs_b; ++b)
      if (marginal(d, Party::A, a, b) != ref) return false;
  }
  for (int b = 0; b < s.inputs_b; ++b) {
    const auto ref = marginal(d, Party::B, b, 0);
    for (int a = 1; a < s.inputs_a; ++a)
      if (marginal(d, Party::B, b, a) != ref) return false;
  }
  return true;
}

Distribution mix(std::span<const std::pair<Rational, Distribution>> components) {
  if (components.empty()) throw Error(ErrorCode::WeightsNotNormalized, "empty mixture");
  const Scenario s = components.front().second.scenario();
  Rational total = 0;
  std::vector<Rational> probs(s.dimension());
  for (const auto& [weight, d] : components) {
    if (d.scenario() != s) throw Error(ErrorCode::MismatchedScenario, "mixture components differ in scenario");
    Rational w = weight;
    w.canonicalize();
    if (sgn(w) < 0) throw Error(ErrorCode::WeightsNotNormalized, "negative weight " + to_string(w));
    total += w;
    if (sgn(w) == 0) continue;
    const auto flat = d.flat();
    for (std::size_t i = 0; i < probs.size(); ++i) probs[i] += w * flat[i];
  }
  if (total != 1) throw Error(ErrorCode::WeightsNotNormalized, "weights sum to " + to_string(total));
  return Distribution(s, std::move(probs));
}

Distribution mix(std::initializer_list<std::pair<Rational, Distribution>> components) {
  return mix(std::span<const std::pair<Rational, Distribution>>(components.begin(), components.size()));
}

std::vector<Rational> marginal(const Distribution& d, Party party, int input, int other_input) {
  const Scenario& s = d.scenario();
  const Party other = party == Party::A ? Party::B : Party::A;
  if (input < 0 || input >= s.inputs(party) || other_input < 0 || other_input >= s.inputs(other))
    throw Error(ErrorCode::IndexOutOfRange, "input index out of range");
  std::vector<Rational> out(s.outputs(party));
  for (int x = 0; x < s.outputs_a; ++x)
    for (int y = 0; y < s.outputs_b; ++y) {
      if (party == Party::A)
        out[x] += d.at(input, other_input, x, y);
      else
        out[y] += d.at(other_input, input, x, y);
    }
  return out;
}

std::vector<Rational> marginal(const Distribution& d, Party party, int input) {
  return marginal(d, party, input, 0);
}

Distribution embed(const Distribution& d, const Scenario& target) {
  const Scenario& s = d.scenario();
  if (target.inputs_a != s.inputs_a || target.inputs_b != s.inputs_b || target.outputs_a < s.outputs_a ||
      target.outputs_b < s.outputs_b)
    throw Error(ErrorCode::IncompatibleScenario, "cannot embed " + to_string(s) + " into " + to_string(target));
  std::vector<Rational> probs(target.dimension());
  for (int a = 0; a < s.inputs_a; ++a)
    for (int b = 0; b < s.inputs_b; ++b)
      for (int x = 0; x < s.outputs_a; ++x)
        for (int y = 0; y < s.outputs_b; ++y) probs[target.index(a, b, x, y)] = d.at(a, b, x, y);
  return Distribution(target, std::move(probs));
}

std::vector<Rational> flatten(const Distribution& d) { return {d.flat().begin(), d.flat().end()}; }

Distribution unflatten(Scenario s, std::span<const Rational> flat) {
  return Distribution(s, std::vector<Rational>(flat.begin(), flat.end()));
}

std::string to_json(const Distribution& d) {
  const Scenario& s = d.scenario();
  nlohmann::json j;
  j["scenario"] = {s.inputs_a, s.inputs_b, s.outputs_a, s.outputs_b};
  auto& probs = j["probs"] = nlohmann::json::array();
  for (const auto& p : d.flat()) probs.push_back(to_string(p));
  return j.dump();
}

namespace {

Rational json_rational(const nlohmann::json& v) {
  if (v.is_string()) return parse_rational(v.get<std::string>());
  if (v.is_number_integer()) return Rational(v.get<long>());
  if (v.is_number()) return parse_rational(v.dump());
  throw Error(ErrorCode::ParseError, "probability entries must be strings or numbers");
}

}  // namespace

Distribution distribution_from_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
  if (!j.is_object() || !j.contains("scenario") || !j.contains("probs"))
    throw Error(ErrorCode::ParseError, "expected an object with \"scenario\" and \"probs\"");
  const auto& sc = j["scenario"];
  if (!sc.is_array() || sc.size() != 4) throw Error(ErrorCode::ParseError, "\"scenario\" must have four entries");
  for (const auto& c : sc)
    if (!c.is_number_integer()) throw Error(ErrorCode::ParseError, "scenario counts must be integers");
  const Scenario s = Scenario::make(sc[0].get<int>(), sc[1].get<int>(), sc[2].get<int>(), sc[3].get<int>());
  if (!j["probs"].is_array()) throw Error(ErrorCode::ParseError, "\"probs\" must be an array");
  std::vector<Rational> probs;
  for (const auto& v : j["probs"]) probs.push_back(json_rational(v));
  return Distribution(s, std::move(probs));
}

std::string to_csv(const Distribution& d) {
  const Scenario& s = d.scenario();
  std::ostringstream out;
  out << "a,b";
  for (int x = 0; x < s.outputs_a; ++x)
    for (int y = 0; y < s.outputs_b; ++y) out << ",x" << x << 'y' << y;
  out << '\n';
  for (int a = 0; a < s.inputs_a; ++a)
    for (int b = 0; b < s.inputs_b; ++b) {
      out << a << ',' << b;
      for (int x = 0; x < s.outputs_a; ++x)
        for (int y = 0; y < s.outputs_b; ++y) out << ',' << to_string(d.at(a, b, x, y));
      out << '\n';
    }
  return out.str();
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) {
    while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
    while (!cell.empty() && cell.front() == ' ') cell.erase(cell.begin());
    cells.push_back(cell);
  }
  return cells;
}

int parse_index(const std::string& cell) {
  try {
    std::size_t used = 0;
    const int v = std::stoi(cell, &used);
    if (used == cell.size()) return v;
  } catch (const std::exception&) {
  }
  throw Error(ErrorCode::ParseError, "bad index '" + cell + "'");
}

}  // namespace

Distribution distribution_from_csv(std::string_view text, int inputs_a, int inputs_b) {
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::ParseError, "empty CSV");
  const auto header = split_csv_line(line);
  if (header.size() < 3 || header[0] != "a" || header[1] != "b")
    throw Error(ErrorCode::ParseError, "CSV header must start with a,b");
  // Columns are x{x}y{y}; recover the output counts from the last one.
  int max_x = 0, max_y = 0;
  for (std::size_t i = 2; i < header.size(); ++i) {
    int x = 0, y = 0;
    if (std::sscanf(header[i].c_str(), "x%dy%d", &x, &y) != 2)
      throw Error(ErrorCode::ParseError, "bad CSV column '" + header[i] + "'");
    max_x = std::max(max_x, x);
    max_y = std::max(max_y, y);
  }
  const Scenario s = Scenario::make(inputs_a, inputs_b, max_x + 1, max_y + 1);
  if (header.size() != 2 + static_cast<std::size_t>(s.outputs_a * s.outputs_b))
    throw Error(ErrorCode::ParseError, "CSV column count does not match outputs");
  std::vector<Rational> probs(s.dimension());
  std::vector<bool> seen(static_cast<std::size_t>(inputs_a * inputs_b), false);
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != header.size()) throw Error(ErrorCode::ParseError, "ragged CSV row");
    const int a = parse_index(cells[0]);
    const int b = parse_index(cells[1]);
    if (a < 0 || a >= inputs_a || b < 0 || b >= inputs_b) throw Error(ErrorCode::ParseError, "CSV input out of range");
    seen[a * inputs_b + b] = true;
    for (std::size_t i = 2; i < cells.size(); ++i) {
      int x = 0, y = 0;
      std::sscanf(header[i].c_str(), "x%dy%d", &x, &y);
      probs[s.index(a, b, x, y)] = parse_rational(cells[i]);
    }
  }
  for (bool f : seen)
    if (!f) throw Error(ErrorCode::ParseError, "CSV is missing an (a,b) block");
  return Distribution(s, std::move(probs));
}

Distribution load_distribution(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  if (path.size() >= 4 && path.substr(path.size() - 4) == ".csv") return distribution_from_csv(buf.str(), 2, 2);
  return distribution_from_json(buf.str());
}

std::string render(const Distribution& d) {
  const Scenario& s = d.scenario();
  const int cols = s.inputs_b * s.outputs_b;
  std::vector<std::string> cells;
  std::size_t width = 1;
  for (const auto& p : d.flat()) {
    cells.push_back(to_string(p));
    width = std::max(width, cells.back().size());
  }
  std::ostringstream out;
  for (int row = 0; row < s.inputs_a * s.outputs_a; ++row) {
    if (row > 0 && row % s.outputs_a == 0) out << '\n';
    for (int col = 0; col < cols; ++col) {
      if (col > 0 && col % s.outputs_b == 0) out << " |";
      const auto& c = cells[static_cast<std::size_t>(row) * cols + col];
      out << ' ' << std::string(width - c.size(), ' ') << c;
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace entbell
