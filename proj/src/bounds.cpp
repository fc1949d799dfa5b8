#include "entroq/bounds.hpp"

#include <stdexcept>

namespace entroq {

namespace {

void require_nonnegative(const LogLinear& v, const char* who) {
  if (sign(v) == Sign::negative) throw std::invalid_argument(std::string(who) + ": negative argument");
}

LogLinear log_ceil_pow2(const LogLinear& v) { return from_log_int(pow2_ceil(v)); }

BoundCondition natural_condition(const char* name, const LogLinear& lambda123p) {
  BoundCondition c;
  c.name = name;
  c.relation = "==";
  c.lhs = lambda123p;
  if (auto m = as_log_natural(lambda123p)) {
    c.holds = true;
    c.rhs = from_log_int(*m);
  } else {
    // Nearest admissible value above: log ceil(2^lambda).
    c.rhs = log_ceil_pow2(lambda123p);
  }
  return c;
}

}  // namespace

bool ray123p_entropic(const LogLinear& lambda) {
  require_nonnegative(lambda, "ray123p_entropic");
  return as_log_natural(lambda).has_value();
}

bool face_12_123p_entropic(const LogLinear& lambda12, const LogLinear& lambda123p) {
  require_nonnegative(lambda12, "face_12_123p_entropic");
  require_nonnegative(lambda123p, "face_12_123p_entropic");
  return sign(lambda12 + lambda123p - log_ceil_pow2(lambda123p)) != Sign::negative;
}

bool face_1_123p_entropic(const LogLinear& lambda123p) {
  require_nonnegative(lambda123p, "face_1_123p_entropic");
  return as_log_natural(lambda123p).has_value();
}

BoundVerdict theta_in(const EntropyVector& h) {
  if (h.n != 3) throw std::invalid_argument("theta_in: requires n = 3");
  BoundVerdict verdict;
  verdict.decomposition = cone_membership(h, kTheta);
  if (!verdict.decomposition) return verdict;
  const LogLinear& l123p = (*verdict.decomposition)[Ray::e123p];
  verdict.conditions.push_back(natural_condition("eq30", l123p));
  verdict.member = verdict.conditions.back().holds;
  return verdict;
}

BoundVerdict omega_in(const EntropyVector& h) {
  if (h.n != 3) throw std::invalid_argument("omega_in: requires n = 3");
  BoundVerdict verdict;
  verdict.decomposition = cone_membership(h, kOmega);
  if (!verdict.decomposition) return verdict;
  const LogLinear& l12 = (*verdict.decomposition)[Ray::e12];
  const LogLinear& l123p = (*verdict.decomposition)[Ray::e123p];

  BoundCondition sum;
  sum.name = "eq39";
  sum.relation = ">=";
  sum.lhs = l12 + l123p;
  sum.rhs = log_ceil_pow2(l123p);
  sum.holds = sign(sum.lhs - sum.rhs) != Sign::negative;
  verdict.conditions.push_back(sum);
  verdict.conditions.push_back(natural_condition("eq40", l123p));

  verdict.member = verdict.conditions[0].holds || verdict.conditions[1].holds;
  return verdict;
}

std::optional<SupportSizes> qu_necessary(const EntropyVector& h) {
  SupportSizes out{h.n, {}};
  for (const auto& coord : h.coords) {
    auto m = as_log_natural(coord);
    if (!m || !m->fits_ulong_p()) return std::nullopt;
    out.sizes.push_back(m->get_ui());
  }
  return out;
}

}  // namespace entroq
