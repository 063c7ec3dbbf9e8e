#include "entbell/rational.hpp"

#include <cctype>
#include <cmath>

#include "entbell/error.hpp"

namespace entbell {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidScenario: return "InvalidScenario";
    case ErrorCode::NotNormalized: return "NotNormalized";
    case ErrorCode::NegativeProbability: return "NegativeProbability";
    case ErrorCode::MismatchedScenario: return "MismatchedScenario";
    case ErrorCode::WeightsNotNormalized: return "WeightsNotNormalized";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::IncompatibleScenario: return "IncompatibleScenario";
    case ErrorCode::AsymmetricScenario: return "AsymmetricScenario";
    case ErrorCode::UnsupportedScenario: return "UnsupportedScenario";
    case ErrorCode::NotADistribution: return "NotADistribution";
    case ErrorCode::NonPositiveOrder: return "NonPositiveOrder";
    case ErrorCode::SignallingInput: return "SignallingInput";
    case ErrorCode::WrongInputCount: return "WrongInputCount";
    case ErrorCode::OrderNotAboveOne: return "OrderNotAboveOne";
    case ErrorCode::EmptyGenerators: return "EmptyGenerators";
    case ErrorCode::EpsOutOfRange: return "EpsOutOfRange";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::UnknownTarget: return "UnknownTarget";
    case ErrorCode::UnknownName: return "UnknownName";
  }
  return "Unknown";
}

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

mpz_class parse_integer(std::string_view s, std::string_view whole) {
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  if (!all_digits(s)) throw Error(ErrorCode::ParseError, "not a rational: '" + std::string(whole) + "'");
  mpz_class z(std::string(s), 10);
  return negative ? mpz_class(-z) : z;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (text.empty()) throw Error(ErrorCode::ParseError, "empty rational");

  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    mpz_class num = parse_integer(text.substr(0, slash), text);
    mpz_class den = parse_integer(text.substr(slash + 1), text);
    if (den == 0) throw Error(ErrorCode::ParseError, "zero denominator in '" + std::string(text) + "'");
    Rational r(num, den);
    r.canonicalize();
    return r;
  }
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    std::string_view int_part = text.substr(0, dot);
    std::string_view frac_part = text.substr(dot + 1);
    bool negative = !int_part.empty() && int_part.front() == '-';
    if (!int_part.empty() && (int_part.front() == '-' || int_part.front() == '+')) int_part.remove_prefix(1);
    if ((!int_part.empty() && !all_digits(int_part)) || (!frac_part.empty() && !all_digits(frac_part)) ||
        (int_part.empty() && frac_part.empty())) {
      throw Error(ErrorCode::ParseError, "not a rational: '" + std::string(text) + "'");
    }
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, frac_part.size());
    mpz_class num(int_part.empty() ? std::string("0") : std::string(int_part), 10);
    num *= scale;
    if (!frac_part.empty()) num += mpz_class(std::string(frac_part), 10);
    Rational r(negative ? mpz_class(-num) : num, scale);
    r.canonicalize();
    return r;
  }
  return Rational(parse_integer(text, text));
}

std::string to_string(const Rational& value) {
  Rational r = value;
  r.canonicalize();
  return r.get_str(10);
}

Rational rational_from_double(double value) {
  if (!std::isfinite(value)) throw Error(ErrorCode::ParseError, "non-finite value");
  Rational r;
  mpq_set_d(r.get_mpq_t(), value);
  return r;
}

double to_double(const Rational& value) { return value.get_d(); }

std::uint64_t hash_rationals(std::span<const Rational> values) {
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&h](std::uint64_t x) {
    h ^= x;
    h *= 1099511628211ULL;
  };
  for (const Rational& v : values) {
    const mpz_srcptr num = v.get_num_mpz_t();
    const mpz_srcptr den = v.get_den_mpz_t();
    mix(static_cast<std::uint64_t>(num->_mp_size));
    for (int i = 0; i < std::abs(num->_mp_size); ++i) mix(num->_mp_d[i]);
    mix(static_cast<std::uint64_t>(den->_mp_size));
    for (int i = 0; i < std::abs(den->_mp_size); ++i) mix(den->_mp_d[i]);
  }
  return h;
}

mpz_class common_denominator(std::span<const Rational> values) {
  mpz_class l = 1;
  for (const Rational& v : values) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), v.get_den_mpz_t());
  return l;
}

}  // namespace entbell
