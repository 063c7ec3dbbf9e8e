#include "entbell/entropy.hpp"

#include <cmath>
#include <sstream>

#include "entbell/error.hpp"

namespace entbell {
namespace {

void check_distribution(std::span<const double> p) {
  double sum = 0;
  for (double x : p) {
    if (!(x >= -1e-12)) throw Error(ErrorCode::NotADistribution, "negative or NaN probability");
    sum += x;
  }
  if (std::abs(sum - 1) > 1e-9) throw Error(ErrorCode::NotADistribution, "probabilities do not sum to 1");
}

double shannon_unchecked(std::span<const double> p) {
  double h = 0;
  for (double x : p)
    if (x > 0) h -= x * std::log(x);
  return h;
}

double entropy_unchecked(std::span<const double> p, double q) {
  if (std::abs(q - 1) < kShannonBranch) return shannon_unchecked(p);
  double s = 0;
  for (double x : p)
    if (x > 0) s += std::pow(x, q);
  return (1 - s) / (q - 1);
}

double xlogx(double x) { return x > 0 ? x * std::log(x) : 0.0; }
double pow0(double x, double q) { return x > 0 ? std::pow(x, q) : 0.0; }

}  // namespace

double shannon(std::span<const double> p) {
  check_distribution(p);
  return shannon_unchecked(p);
}

double tsallis(std::span<const double> p, double q) {
  if (!(q > 0)) throw Error(ErrorCode::NonPositiveOrder, "entropy order must be positive");
  check_distribution(p);
  return entropy_unchecked(p, q);
}

EntropyVector entropy_vector(const Scenario& s, std::span<const double> probs, double q) {
  if (s.inputs_a != 2 || s.inputs_b != 2)
    throw Error(ErrorCode::WrongInputCount, "entropy vectors need two inputs per party");
  if (!(q > 0)) throw Error(ErrorCode::NonPositiveOrder, "entropy order must be positive");
  EntropyVector v;
  v.q = q;
  std::vector<double> buf;
  for (int a = 0; a < 2; ++a) {
    buf.assign(s.outputs_a, 0.0);
    for (int x = 0; x < s.outputs_a; ++x)
      for (int y = 0; y < s.outputs_b; ++y) buf[x] += probs[s.index(a, 0, x, y)];
    v.h[kX0 + a] = entropy_unchecked(buf, q);
  }
  for (int b = 0; b < 2; ++b) {
    buf.assign(s.outputs_b, 0.0);
    for (int x = 0; x < s.outputs_a; ++x)
      for (int y = 0; y < s.outputs_b; ++y) buf[y] += probs[s.index(0, b, x, y)];
    v.h[kY0 + b] = entropy_unchecked(buf, q);
  }
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      buf.clear();
      for (int x = 0; x < s.outputs_a; ++x)
        for (int y = 0; y < s.outputs_b; ++y) buf.push_back(probs[s.index(a, b, x, y)]);
      v.h[kX0Y0 + 2 * a + b] = entropy_unchecked(buf, q);
    }
  return v;
}

EntropyVector entropy_vector(const Distribution& d, double q, std::string source) {
  const Scenario& s = d.scenario();
  if (s.inputs_a != 2 || s.inputs_b != 2)
    throw Error(ErrorCode::WrongInputCount, "entropy vectors need two inputs per party");
  if (!is_no_signalling(d)) throw Error(ErrorCode::SignallingInput, "marginals depend on the other party's input");
  const auto probs = d.to_doubles();
  EntropyVector v = entropy_vector(s, probs, q);
  v.source = std::move(source);
  return v;
}

double bc4(const EntropyVector& v) {
  const auto& h = v.h;
  return h[kX1Y1] + h[kX0] + h[kY0] - h[kX0Y0] - h[kX0Y1] - h[kX1Y0];
}

BCResult bc_values(const EntropyVector& v, double tol) {
  const auto& h = v.h;
  BCResult r;
  r.q = v.q;
  r.values[0] = h[kX0Y0] + h[kX1] + h[kY1] - h[kX0Y1] - h[kX1Y0] - h[kX1Y1];
  r.values[1] = h[kX0Y1] + h[kX1] + h[kY0] - h[kX0Y0] - h[kX1Y0] - h[kX1Y1];
  r.values[2] = h[kX1Y0] + h[kX0] + h[kY1] - h[kX0Y0] - h[kX0Y1] - h[kX1Y1];
  r.values[3] = bc4(v);
  for (int k = 0; k < 4; ++k) {
    r.violated[k] = r.values[k] > tol;
    r.marginal[k] = std::abs(r.values[k]) <= tol;
  }
  return r;
}

double f_closed_form(double eps, double v) {
  const double u = 3 - 2 * (1 - eps) * v;
  const double w = (1 - eps) * v;
  const double s = 3 - (2 + eps) * v;
  const double t = (1 + 2 * eps) * v;
  return 3 * xlogx(u) + 5 * xlogx(w) - xlogx(t) - xlogx(s) - 3 * std::log(9.0);
}

double g_closed_form(double q, double eps, double v) {
  if (!(q > 1)) throw Error(ErrorCode::OrderNotAboveOne, "g is defined for q > 1");
  const double u = 3 - 2 * (1 - eps) * v;
  const double w = (1 - eps) * v;
  const double s = 3 - (2 + eps) * v;
  const double t = (1 + 2 * eps) * v;
  return 9 * pow0(u / 9, q) + 15 * pow0(w / 9, q) - 6 / std::pow(3.0, q) - 3 * pow0(s / 9, q) -
         3 * pow0(t / 9, q);
}

double g_slope_at_zero(double q, double eps) { return q / std::pow(3.0, q) * (7 * eps - 4); }

std::string entropy_csv_header() {
  return "id,q,H_X0,H_X1,H_Y0,H_Y1,H_X0Y0,H_X0Y1,H_X1Y0,H_X1Y1,I1,I2,I3,I4,violated1,violated2,violated3,violated4";
}

std::string entropy_csv_row(const std::string& id, const EntropyVector& v, const BCResult& bc) {
  std::ostringstream out;
  out.precision(17);
  out << id << ',' << v.q;
  for (double h : v.h) out << ',' << h;
  for (double x : bc.values) out << ',' << x;
  for (bool f : bc.violated) out << ',' << (f ? 1 : 0);
  return out.str();
}

}  // namespace entbell
