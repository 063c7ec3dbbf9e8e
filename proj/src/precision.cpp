#include "entbell/precision.hpp"

#include <cmath>
#include <utility>

namespace entbell {

Real::Real(mpfr_prec_t bits, double value) {
  mpfr_init2(v_, bits);
  mpfr_set_d(v_, value, MPFR_RNDN);
}

Real::Real(mpfr_prec_t bits, const Rational& value) {
  mpfr_init2(v_, bits);
  mpfr_set_q(v_, value.get_mpq_t(), MPFR_RNDN);
}

Real::Real(const Real& other) {
  mpfr_init2(v_, other.precision());
  mpfr_set(v_, other.v_, MPFR_RNDN);
}

Real::Real(Real&& other) noexcept {
  mpfr_init2(v_, MPFR_PREC_MIN);
  mpfr_swap(v_, other.v_);
}

Real& Real::operator=(const Real& other) {
  if (this != &other) {
    mpfr_set_prec(v_, other.precision());
    mpfr_set(v_, other.v_, MPFR_RNDN);
  }
  return *this;
}

Real& Real::operator=(Real&& other) noexcept {
  mpfr_swap(v_, other.v_);
  return *this;
}

Real::~Real() { mpfr_clear(v_); }

Real& Real::operator+=(const Real& o) {
  mpfr_add(v_, v_, o.v_, MPFR_RNDN);
  return *this;
}

Real& Real::operator-=(const Real& o) {
  mpfr_sub(v_, v_, o.v_, MPFR_RNDN);
  return *this;
}

Real& Real::operator*=(const Real& o) {
  mpfr_mul(v_, v_, o.v_, MPFR_RNDN);
  return *this;
}

Real entropy(std::span<const Real> p, double q, mpfr_prec_t bits) {
  Real acc(bits), term(bits);
  if (q == 1.0) {
    for (const auto& x : p) {
      if (x.sign() <= 0) continue;
      mpfr_log(term.get(), x.get(), MPFR_RNDN);
      term *= x;
      acc -= term;
    }
    return acc;
  }
  Real order(bits, q);
  for (const auto& x : p) {
    if (x.sign() <= 0) continue;
    mpfr_pow(term.get(), x.get(), order.get(), MPFR_RNDN);
    acc += term;
  }
  // (1 - sum) / (q - 1)
  mpfr_ui_sub(acc.get(), 1, acc.get(), MPFR_RNDN);
  Real denom(bits, q);
  mpfr_sub_ui(denom.get(), denom.get(), 1, MPFR_RNDN);
  mpfr_div(acc.get(), acc.get(), denom.get(), MPFR_RNDN);
  return acc;
}

Real bc4_on_segment(const Distribution& base, const Distribution& target, double q, double s, mpfr_prec_t bits) {
  const Scenario& sc = base.scenario();
  Real v(bits, -s);
  mpfr_exp(v.get(), v.get(), MPFR_RNDN);
  const auto b = base.flat();
  const auto t = target.flat();
  std::vector<Real> p;
  p.reserve(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) {
    Real diff(bits, Rational(t[i] - b[i]));
    diff *= v;
    diff += Real(bits, b[i]);
    p.push_back(std::move(diff));
  }
  auto block = [&](int a, int bb) {
    std::vector<Real> out;
    for (int x = 0; x < sc.outputs_a; ++x)
      for (int y = 0; y < sc.outputs_b; ++y) out.push_back(p[sc.index(a, bb, x, y)]);
    return entropy(out, q, bits);
  };
  std::vector<Real> ma(sc.outputs_a, Real(bits)), mb(sc.outputs_b, Real(bits));
  for (int x = 0; x < sc.outputs_a; ++x)
    for (int y = 0; y < sc.outputs_b; ++y) {
      ma[x] += p[sc.index(0, 0, x, y)];
      mb[y] += p[sc.index(0, 0, x, y)];
    }
  Real value = block(1, 1);
  value += entropy(ma, q, bits);
  value += entropy(mb, q, bits);
  value -= block(0, 0);
  value -= block(0, 1);
  value -= block(1, 0);
  return value;
}

int bc4_sign_on_segment(const Distribution& base, const Distribution& target, double q, double s) {
  const auto bits = static_cast<mpfr_prec_t>(std::ceil(s / std::log(2.0))) + 160;
  const Real value = bc4_on_segment(base, target, q, s, bits);
  if (value.sign() == 0) return 0;
  // Rounding error is a few hundred ulps of O(1) quantities; demand 2^-(bits-64).
  if (value.exponent() <= -(static_cast<long>(bits) - 64)) return 0;
  return value.sign();
}

}  // namespace entbell
