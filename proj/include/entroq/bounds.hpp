#pragma once

// Entropic characterizations on low-dimensional faces of Gamma_3 and the
// inner bounds they induce on cone(e1,e2,e3,e123') and
// cone(e1,e2,e3,e12,e123').

#include <optional>
#include <string>
#include <vector>

#include "entroq/distributions.hpp"
#include "entroq/polycone.hpp"

namespace entroq {

/// One tested condition with both sides as exact values.
struct BoundCondition {
  std::string name;  // "eq30", "eq39", "eq40"
  bool holds = false;
  LogLinear lhs;
  LogLinear rhs;
  std::string relation;  // "==" (lhs must be log of a natural) or ">="
};

struct BoundVerdict {
  bool member = false;
  std::vector<BoundCondition> conditions;
  std::optional<ConicCertificate> decomposition;  // empty: h is outside the face
};

/// Vectors on cone(e123') are entropic iff lambda = log m, m natural.
bool ray123p_entropic(const LogLinear& lambda);

/// cone(e12, e123'): lambda12 + lambda123p >= log ceil(2^lambda123p).
bool face_12_123p_entropic(const LogLinear& lambda12, const LogLinear& lambda123p);

/// cone(e1, e123'): lambda123p = log m, m natural.
bool face_1_123p_entropic(const LogLinear& lambda123p);

/// Inner bound on cone(e1,e2,e3,e123'): lambda123p = log m.
BoundVerdict theta_in(const EntropyVector& h);

/// Inner bound on cone(e1,e2,e3,e12,e123'): either lambda12 + lambda123p >=
/// log ceil(2^lambda123p), or lambda123p = log m. Both are always evaluated.
BoundVerdict omega_in(const EntropyVector& h);

/// The support sizes m_alpha when every h_alpha = log m_alpha; empty otherwise.
std::optional<SupportSizes> qu_necessary(const EntropyVector& h);

}  // namespace entroq
