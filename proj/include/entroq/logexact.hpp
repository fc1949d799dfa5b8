#pragma once

// Exact reals of the form sum_p q_p * log p (p prime, q_p rational).
//
// Logarithms of distinct primes are linearly independent over Q, so the
// prime-exponent map is a canonical form: equality is structural, and the
// sign of a nonzero value can always be resolved by interval refinement.
// The representation is unit-free; "bits" only enters at display time.

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include <gmpxx.h>

namespace entroq {

enum class Sign { negative = -1, zero = 0, positive = 1 };

enum class LogUnit { bits, nats };

class LogLinear {
 public:
  using Terms = std::map<std::uint64_t, mpq_class>;

  LogLinear() = default;

  /// Builds a value from prime -> coefficient pairs. Zero coefficients are
  /// dropped; a non-prime key throws std::invalid_argument.
  static LogLinear from_terms(const Terms& terms);

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  /// Coefficient of log p (zero when p is absent).
  mpq_class coefficient(std::uint64_t p) const;

  LogLinear& operator+=(const LogLinear& other);
  LogLinear& operator-=(const LogLinear& other);
  LogLinear& operator*=(const mpq_class& q);

  friend LogLinear operator+(LogLinear a, const LogLinear& b) { return a += b; }
  friend LogLinear operator-(LogLinear a, const LogLinear& b) { return a -= b; }
  friend LogLinear operator-(LogLinear a) { return a *= mpq_class(-1); }
  friend LogLinear operator*(const mpq_class& q, LogLinear v) { return v *= q; }

  friend bool operator==(const LogLinear& a, const LogLinear& b) {
    return a.terms_ == b.terms_;
  }
  friend bool operator!=(const LogLinear& a, const LogLinear& b) { return !(a == b); }

 private:
  void add_term(std::uint64_t p, const mpq_class& q);

  Terms terms_;  // nonzero coefficients only
};

/// log m for m >= 1; throws std::invalid_argument otherwise.
LogLinear from_log_int(const mpz_class& m);
LogLinear from_log_int(std::int64_t m);

/// log(a/b) for a, b >= 1.
LogLinear from_log_rational(const mpz_class& a, const mpz_class& b);
LogLinear from_log_rational(std::int64_t a, std::int64_t b);

inline LogLinear add(const LogLinear& v, const LogLinear& w) { return v + w; }
inline LogLinear scale(const mpq_class& q, const LogLinear& v) { return q * v; }

/// Exact sign. Interval refinement starts at 64 bits and doubles; a nonzero
/// value always resolves well below the 2^16-bit cap.
Sign sign(const LogLinear& v);

/// Total order on values (by sign of the difference).
bool less(const LogLinear& a, const LogLinear& b);

/// m when v = log m for a natural m (every coefficient a nonnegative integer).
std::optional<mpz_class> as_log_natural(const LogLinear& v);

/// ceil(2^v) where 2^v = prod p^{q_p} (v measured in bits). Requires v >= 0.
mpz_class pow2_ceil(const LogLinear& v);

/// Correctly rounded decimal of v with `digits` fractional digits.
std::string approx(const LogLinear& v, unsigned digits, LogUnit unit = LogUnit::bits);

/// Correctly rounded decimal of 2^v = prod p^{q_p}, e.g. the number whose
/// binary log is v.
std::string approx_exp(const LogLinear& v, unsigned digits);

/// Nearest double of v in the given unit (display and test cross-checks only).
double to_double(const LogLinear& v, LogUnit unit = LogUnit::bits);

/// Prime factorization by trial division; n >= 1.
std::map<std::uint64_t, unsigned> factorize(const mpz_class& n);

bool is_prime(std::uint64_t p);

/// "3/1" style rational text; parse_rational accepts "a/b" or "a".
std::string rational_text(const mpq_class& q);
mpq_class parse_rational(const std::string& text);

}  // namespace entroq
