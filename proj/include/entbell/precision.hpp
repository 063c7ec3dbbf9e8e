#pragma once

#include <mpfr.h>

#include <span>
#include <vector>

#include "entbell/distribution.hpp"

namespace entbell {

/// Owning wrapper around an MPFR number of fixed precision.
class Real {
 public:
  explicit Real(mpfr_prec_t bits, double value = 0.0);
  Real(mpfr_prec_t bits, const Rational& value);
  Real(const Real& other);
  Real(Real&& other) noexcept;
  Real& operator=(const Real& other);
  Real& operator=(Real&& other) noexcept;
  ~Real();

  mpfr_prec_t precision() const { return mpfr_get_prec(v_); }
  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  int sign() const { return mpfr_sgn(v_); }
  /// Base-2 exponent e with 2^(e-1) <= |x| < 2^e; meaningless for zero.
  long exponent() const { return mpfr_get_exp(v_); }

  mpfr_ptr get() { return v_; }
  mpfr_srcptr get() const { return v_; }

  Real& operator+=(const Real& o);
  Real& operator-=(const Real& o);
  Real& operator*=(const Real& o);

 private:
  mpfr_t v_;
};

/// Entropy of order q (Shannon for q == 1) of nonnegative entries; zeros skipped.
Real entropy(std::span<const Real> p, double q, mpfr_prec_t bits);

/// Fourth BC value of (1 - v) base + v target with v = exp(-s), evaluated with
/// `bits` of precision; entries are formed exactly from the rational tables.
Real bc4_on_segment(const Distribution& base, const Distribution& target, double q, double s, mpfr_prec_t bits);

/// +1 / -1 when the fourth BC value at v = exp(-s) is certainly positive /
/// negative, 0 when it is within the rounding allowance of zero. Precision is
/// chosen from s so that values of size v * 2^-40 are resolved.
int bc4_sign_on_segment(const Distribution& base, const Distribution& target, double q, double s);

}  // namespace entbell
