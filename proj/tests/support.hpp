#pragma once

#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "entroq/bounds.hpp"
#include "entroq/distributions.hpp"
#include "entroq/logexact.hpp"
#include "entroq/polycone.hpp"

namespace testing {

using namespace entroq;

inline std::string data_path(const std::string& name) { return std::string(ENTROQ_DATA_DIR) + "/" + name; }

inline std::string read_text(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline JointPMF load_fixture(const std::string& name) { return parse_pmf(read_text(data_path(name))); }

inline LogLinear L(std::int64_t m) { return from_log_int(m); }
inline LogLinear L(std::int64_t a, std::int64_t b) { return from_log_rational(a, b); }

inline EntropyVector naturals(int n, std::vector<std::uint64_t> m) { return EntropyVector::from_naturals(n, m); }

// (1/2)log54 + (1/4)log72 + (1/6)log108 + (1/12)log216
inline LogLinear log_zeta() {
  return mpq_class(1, 2) * L(54) + mpq_class(1, 4) * L(72) + mpq_class(1, 6) * L(108) +
         mpq_class(1, 12) * L(216);
}

inline EntropyVector vec_f() { return naturals(3, {4, 4, 4, 16, 16, 16, 48}); }

inline EntropyVector vec_g() {
  return EntropyVector(3, {L(9), L(9), L(6), log_zeta(), L(54), L(54), L(216)});
}

inline EntropyVector vec_k216() { return naturals(3, {9, 9, 6, 54, 54, 54, 216}); }

inline EntropyVector ray_vector(Ray r) {
  std::vector<LogLinear> coords;
  for (int c : generator(r)) coords.push_back(mpq_class(c) * from_log_int(2));
  return EntropyVector(3, coords);
}

/// Random log-combination of small primes with small rational coefficients.
inline LogLinear random_log_linear(std::mt19937_64& rng, int max_num = 6, int max_den = 4, bool nonnegative = false) {
  static const std::uint64_t primes[] = {2, 3, 5, 7};
  std::uniform_int_distribution<int> num(nonnegative ? 0 : -max_num, max_num);
  std::uniform_int_distribution<int> den(1, max_den);
  LogLinear::Terms terms;
  for (auto p : primes) {
    mpq_class q(num(rng), den(rng));
    q.canonicalize();
    if (q != 0) terms[p] = q;
  }
  return LogLinear::from_terms(terms);
}

/// log(a/b) with a >= b, so the value is nonnegative; sometimes zero.
inline LogLinear random_nonnegative(std::mt19937_64& rng, int max = 12) {
  std::uniform_int_distribution<int> pick(1, max);
  int a = pick(rng), b = pick(rng);
  if (a < b) std::swap(a, b);
  return from_log_rational(a, b);
}

}  // namespace testing
