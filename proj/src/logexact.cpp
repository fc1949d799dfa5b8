#include "entroq/logexact.hpp"

#include <mpfr.h>

#include <stdexcept>
#include <utility>

namespace entroq {

namespace {

constexpr mpfr_prec_t kStartPrecision = 64;
constexpr mpfr_prec_t kMaxPrecision = mpfr_prec_t{1} << 16;

class Mpfr {
 public:
  explicit Mpfr(mpfr_prec_t prec) { mpfr_init2(value_, prec); }
  ~Mpfr() { mpfr_clear(value_); }
  Mpfr(const Mpfr&) = delete;
  Mpfr& operator=(const Mpfr&) = delete;

  mpfr_ptr get() { return value_; }
  mpfr_srcptr get() const { return value_; }

 private:
  mpfr_t value_;
};

// Enclosure [lo, hi] of a real number, both ends at the same precision.
struct Enclosure {
  explicit Enclosure(mpfr_prec_t prec) : lo(prec), hi(prec) {}
  Mpfr lo;
  Mpfr hi;
};

// Encloses sum_p q_p ln p.
void enclose_nats(const LogLinear& v, Enclosure& out, mpfr_prec_t prec) {
  mpfr_set_zero(out.lo.get(), 1);
  mpfr_set_zero(out.hi.get(), 1);
  Mpfr log_lo(prec), log_hi(prec), term_lo(prec), term_hi(prec);
  for (const auto& [p, q] : v.terms()) {
    mpz_class pz(std::to_string(p));
    mpfr_set_z(log_lo.get(), pz.get_mpz_t(), MPFR_RNDD);
    mpfr_set_z(log_hi.get(), pz.get_mpz_t(), MPFR_RNDU);
    mpfr_log(log_lo.get(), log_lo.get(), MPFR_RNDD);
    mpfr_log(log_hi.get(), log_hi.get(), MPFR_RNDU);
    if (sgn(q) > 0) {
      mpfr_mul_q(term_lo.get(), log_lo.get(), q.get_mpq_t(), MPFR_RNDD);
      mpfr_mul_q(term_hi.get(), log_hi.get(), q.get_mpq_t(), MPFR_RNDU);
    } else {
      mpfr_mul_q(term_lo.get(), log_hi.get(), q.get_mpq_t(), MPFR_RNDD);
      mpfr_mul_q(term_hi.get(), log_lo.get(), q.get_mpq_t(), MPFR_RNDU);
    }
    mpfr_add(out.lo.get(), out.lo.get(), term_lo.get(), MPFR_RNDD);
    mpfr_add(out.hi.get(), out.hi.get(), term_hi.get(), MPFR_RNDU);
  }
}

// Divides the enclosure by ln 2 (a positive interval).
void nats_to_bits(Enclosure& e, mpfr_prec_t prec) {
  Mpfr ln2_lo(prec), ln2_hi(prec);
  mpfr_const_log2(ln2_lo.get(), MPFR_RNDD);
  mpfr_const_log2(ln2_hi.get(), MPFR_RNDU);
  if (mpfr_sgn(e.lo.get()) >= 0)
    mpfr_div(e.lo.get(), e.lo.get(), ln2_hi.get(), MPFR_RNDD);
  else
    mpfr_div(e.lo.get(), e.lo.get(), ln2_lo.get(), MPFR_RNDD);
  if (mpfr_sgn(e.hi.get()) >= 0)
    mpfr_div(e.hi.get(), e.hi.get(), ln2_lo.get(), MPFR_RNDU);
  else
    mpfr_div(e.hi.get(), e.hi.get(), ln2_hi.get(), MPFR_RNDU);
}

bool all_integer(const LogLinear& v) {
  for (const auto& [p, q] : v.terms())
    if (q.get_den() != 1) return false;
  return true;
}

// prod p^{q_p} for integer exponents.
mpq_class exact_power_product(const LogLinear& v) {
  mpz_class num = 1, den = 1;
  for (const auto& [p, q] : v.terms()) {
    mpz_class e = q.get_num();
    mpz_class pw;
    mpz_class base(std::to_string(p));
    mpz_pow_ui(pw.get_mpz_t(), base.get_mpz_t(), mpz_class(abs(e)).get_ui());
    if (sgn(e) > 0)
      num *= pw;
    else
      den *= pw;
  }
  mpq_class r(num, den);
  r.canonicalize();
  return r;
}

std::string format_scaled(const mpz_class& scaled, unsigned digits) {
  mpz_class mag = abs(scaled);
  std::string body = mag.get_str();
  if (body.size() <= digits) body.insert(0, digits + 1 - body.size(), '0');
  body.insert(body.size() - digits, ".");
  if (sgn(scaled) < 0) body.insert(0, "-");
  return body;
}

// Round-half-away-from-zero decimal of an exact rational.
std::string round_rational(const mpq_class& r, unsigned digits) {
  mpz_class ten_pow;
  mpz_ui_pow_ui(ten_pow.get_mpz_t(), 10, digits);
  mpq_class scaled = abs(r) * ten_pow + mpq_class(1, 2);
  mpz_class rounded;
  mpz_fdiv_q(rounded.get_mpz_t(), scaled.get_num_mpz_t(), scaled.get_den_mpz_t());
  if (sgn(r) < 0) rounded = -rounded;
  return format_scaled(rounded, digits);
}

// Rounds an enclosure of an irrational number to `digits`; empty when the
// enclosure is still too wide.
std::optional<std::string> round_enclosure(Enclosure& e, unsigned digits, mpfr_prec_t prec) {
  mpz_class ten_pow;
  mpz_ui_pow_ui(ten_pow.get_mpz_t(), 10, digits);
  Mpfr lo(prec), hi(prec);
  mpfr_mul_z(lo.get(), e.lo.get(), ten_pow.get_mpz_t(), MPFR_RNDD);
  mpfr_mul_z(hi.get(), e.hi.get(), ten_pow.get_mpz_t(), MPFR_RNDU);
  mpz_class rlo, rhi;
  mpfr_get_z(rlo.get_mpz_t(), lo.get(), MPFR_RNDN);
  mpfr_get_z(rhi.get_mpz_t(), hi.get(), MPFR_RNDN);
  if (rlo != rhi) return std::nullopt;
  return format_scaled(rlo, digits);
}

}  // namespace

bool is_prime(std::uint64_t p) {
  if (p < 2) return false;
  if (p % 2 == 0) return p == 2;
  for (std::uint64_t d = 3; d <= p / d; d += 2)
    if (p % d == 0) return false;
  return true;
}

std::map<std::uint64_t, unsigned> factorize(const mpz_class& n) {
  if (sgn(n) <= 0) throw std::invalid_argument("factorize: argument must be positive");
  std::map<std::uint64_t, unsigned> factors;
  mpz_class rest = n;
  if (rest.fits_ulong_p()) {
    unsigned long m = rest.get_ui();
    for (unsigned long d = 2; d <= m / d; d += (d == 2 ? 1 : 2)) {
      while (m % d == 0) {
        ++factors[d];
        m /= d;
      }
    }
    if (m > 1) ++factors[m];
    return factors;
  }
  for (unsigned long d = 2; d * d <= rest; d += (d == 2 ? 1 : 2)) {
    while (mpz_divisible_ui_p(rest.get_mpz_t(), d)) {
      ++factors[d];
      rest /= d;
    }
    if (rest.fits_ulong_p()) {
      for (auto [p, e] : factorize(rest)) factors[p] += e;
      return factors;
    }
  }
  if (rest > 1) {
    if (!rest.fits_ulong_p())
      throw std::invalid_argument("factorize: prime factor exceeds 64 bits");
    ++factors[rest.get_ui()];
  }
  return factors;
}

LogLinear LogLinear::from_terms(const Terms& terms) {
  LogLinear v;
  for (const auto& [p, q] : terms) {
    if (!is_prime(p))
      throw std::invalid_argument("LogLinear: key " + std::to_string(p) + " is not prime");
    v.add_term(p, q);
  }
  return v;
}

mpq_class LogLinear::coefficient(std::uint64_t p) const {
  auto it = terms_.find(p);
  return it == terms_.end() ? mpq_class(0) : it->second;
}

void LogLinear::add_term(std::uint64_t p, const mpq_class& q) {
  if (sgn(q) == 0) return;
  auto [it, inserted] = terms_.try_emplace(p, q);
  if (inserted) {
    it->second.canonicalize();
  } else {
    it->second += q;
    if (sgn(it->second) == 0) terms_.erase(it);
  }
}

LogLinear& LogLinear::operator+=(const LogLinear& other) {
  for (const auto& [p, q] : other.terms_) add_term(p, q);
  return *this;
}

LogLinear& LogLinear::operator-=(const LogLinear& other) {
  for (const auto& [p, q] : other.terms_) add_term(p, -q);
  return *this;
}

LogLinear& LogLinear::operator*=(const mpq_class& q) {
  if (sgn(q) == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [p, c] : terms_) c *= q;
  return *this;
}

LogLinear from_log_int(const mpz_class& m) {
  if (sgn(m) <= 0) throw std::invalid_argument("from_log_int: argument must be >= 1");
  LogLinear::Terms terms;
  for (auto [p, e] : factorize(m)) terms[p] = e;
  return LogLinear::from_terms(terms);
}

LogLinear from_log_int(std::int64_t m) {
  if (m <= 0) throw std::invalid_argument("from_log_int: argument must be >= 1");
  return from_log_int(mpz_class(std::to_string(m)));
}

LogLinear from_log_rational(const mpz_class& a, const mpz_class& b) {
  if (sgn(a) <= 0 || sgn(b) <= 0)
    throw std::invalid_argument("from_log_rational: arguments must be >= 1");
  return from_log_int(a) - from_log_int(b);
}

LogLinear from_log_rational(std::int64_t a, std::int64_t b) {
  if (a <= 0 || b <= 0) throw std::invalid_argument("from_log_rational: arguments must be >= 1");
  return from_log_int(a) - from_log_int(b);
}

Sign sign(const LogLinear& v) {
  if (v.is_zero()) return Sign::zero;
  // Fast paths: all coefficients of one sign.
  bool any_pos = false, any_neg = false;
  for (const auto& [p, q] : v.terms()) (sgn(q) > 0 ? any_pos : any_neg) = true;
  if (!any_neg) return Sign::positive;
  if (!any_pos) return Sign::negative;

  for (mpfr_prec_t prec = kStartPrecision; prec <= kMaxPrecision; prec *= 2) {
    Enclosure e(prec);
    enclose_nats(v, e, prec);
    if (mpfr_sgn(e.lo.get()) > 0) return Sign::positive;
    if (mpfr_sgn(e.hi.get()) < 0) return Sign::negative;
  }
  throw std::runtime_error("sign: precision cap reached without resolving a nonzero value");
}

bool less(const LogLinear& a, const LogLinear& b) { return sign(b - a) == Sign::positive; }

std::optional<mpz_class> as_log_natural(const LogLinear& v) {
  mpz_class m = 1;
  for (const auto& [p, q] : v.terms()) {
    if (q.get_den() != 1 || sgn(q) < 0) return std::nullopt;
    mpz_class pw;
    mpz_class base(std::to_string(p));
    mpz_pow_ui(pw.get_mpz_t(), base.get_mpz_t(), q.get_num().get_ui());
    m *= pw;
  }
  return m;
}

mpz_class pow2_ceil(const LogLinear& v) {
  if (sign(v) == Sign::negative) throw std::invalid_argument("pow2_ceil: argument must be >= 0");
  if (all_integer(v)) {
    mpq_class r = exact_power_product(v);
    mpz_class c;
    mpz_cdiv_q(c.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
    return c;
  }
  // 2^v is irrational here, so it sits strictly between two integers.
  for (mpfr_prec_t prec = kStartPrecision; prec <= kMaxPrecision; prec *= 2) {
    Enclosure e(prec);
    enclose_nats(v, e, prec);
    mpfr_exp(e.lo.get(), e.lo.get(), MPFR_RNDD);
    mpfr_exp(e.hi.get(), e.hi.get(), MPFR_RNDU);
    mpz_class flo, fhi;
    mpfr_get_z(flo.get_mpz_t(), e.lo.get(), MPFR_RNDD);
    mpfr_get_z(fhi.get_mpz_t(), e.hi.get(), MPFR_RNDD);
    if (flo == fhi) return flo + 1;
  }
  throw std::runtime_error("pow2_ceil: precision cap reached");
}

std::string approx(const LogLinear& v, unsigned digits, LogUnit unit) {
  if (digits == 0) throw std::invalid_argument("approx: digits must be >= 1");
  if (v.is_zero()) return round_rational(0, digits);
  // In bits, a pure power of two is an exact rational.
  if (unit == LogUnit::bits && v.terms().size() == 1 && v.terms().begin()->first == 2)
    return round_rational(v.terms().begin()->second, digits);
  for (mpfr_prec_t prec = kStartPrecision; prec <= kMaxPrecision; prec *= 2) {
    Enclosure e(prec);
    enclose_nats(v, e, prec);
    if (unit == LogUnit::bits) nats_to_bits(e, prec);
    if (auto s = round_enclosure(e, digits, prec)) return *s;
  }
  throw std::runtime_error("approx: precision cap reached");
}

std::string approx_exp(const LogLinear& v, unsigned digits) {
  if (digits == 0) throw std::invalid_argument("approx_exp: digits must be >= 1");
  if (all_integer(v)) return round_rational(exact_power_product(v), digits);
  for (mpfr_prec_t prec = kStartPrecision; prec <= kMaxPrecision; prec *= 2) {
    Enclosure e(prec);
    enclose_nats(v, e, prec);
    mpfr_exp(e.lo.get(), e.lo.get(), MPFR_RNDD);
    mpfr_exp(e.hi.get(), e.hi.get(), MPFR_RNDU);
    if (auto s = round_enclosure(e, digits, prec)) return *s;
  }
  throw std::runtime_error("approx_exp: precision cap reached");
}

double to_double(const LogLinear& v, LogUnit unit) {
  Enclosure e(128);
  enclose_nats(v, e, 128);
  if (unit == LogUnit::bits) nats_to_bits(e, 128);
  return mpfr_get_d(e.lo.get(), MPFR_RNDN);
}

std::string rational_text(const mpq_class& q) {
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

mpq_class parse_rational(const std::string& text) {
  auto valid_int = [](const std::string& s) {
    std::size_t start = (!s.empty() && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
    if (s.size() == start) return false;
    for (std::size_t i = start; i < s.size(); ++i)
      if (s[i] < '0' || s[i] > '9') return false;
    return true;
  };
  auto slash = text.find('/');
  std::string num = text.substr(0, slash);
  std::string den = slash == std::string::npos ? "1" : text.substr(slash + 1);
  if (!valid_int(num) || !valid_int(den) || den[0] == '-' || den[0] == '+')
    throw std::invalid_argument("not a rational number: '" + text + "'");
  if (num[0] == '+') num.erase(0, 1);
  mpz_class d(den);
  if (sgn(d) == 0) throw std::invalid_argument("zero denominator in '" + text + "'");
  mpq_class q(mpz_class(num), d);
  q.canonicalize();
  return q;
}

}  // namespace entroq
