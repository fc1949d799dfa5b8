#pragma once

// Rational joint PMFs over finite product alphabets, exact entropy vectors
// and quasi-uniformity certification.

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "entroq/logexact.hpp"
#include "entroq/subsets.hpp"

namespace entroq {

using Symbol = std::uint32_t;
using Point = std::vector<Symbol>;

/// Joint distribution stored on its support. Masses are strictly positive
/// rationals summing to exactly 1.
class JointPMF {
 public:
  using MassMap = std::map<Point, mpq_class>;

  /// Validates and takes ownership; throws std::invalid_argument on a bad
  /// shape, out-of-range symbol, nonpositive mass or a total other than 1.
  JointPMF(std::vector<std::uint32_t> alphabet_sizes, MassMap mass,
           std::vector<std::vector<std::string>> symbol_names = {});

  /// Uniform distribution on the given support points.
  static JointPMF uniform(std::vector<std::uint32_t> alphabet_sizes,
                          const std::vector<Point>& support);

  int n() const { return static_cast<int>(alphabet_sizes_.size()); }
  const std::vector<std::uint32_t>& alphabet_sizes() const { return alphabet_sizes_; }
  const MassMap& mass() const { return mass_; }
  std::size_t support_size() const { return mass_.size(); }

  /// Optional per-variable symbol names; empty when the PMF uses indices.
  const std::vector<std::vector<std::string>>& symbol_names() const { return names_; }

  /// Least common denominator N of all masses, and the multiset of integer
  /// counts a = mass * N (count -> multiplicity).
  const mpz_class& common_denominator() const { return denominator_; }
  const std::map<mpz_class, std::size_t>& count_histogram() const { return histogram_; }

  friend bool operator==(const JointPMF& a, const JointPMF& b) {
    return a.alphabet_sizes_ == b.alphabet_sizes_ && a.mass_ == b.mass_ && a.names_ == b.names_;
  }

 private:
  std::vector<std::uint32_t> alphabet_sizes_;
  MassMap mass_;
  std::vector<std::vector<std::string>> names_;
  mpz_class denominator_;
  std::map<mpz_class, std::size_t> histogram_;
};

/// Entropies h_alpha for every nonempty alpha, in canonical subset order.
struct EntropyVector {
  int n = 0;
  std::vector<LogLinear> coords;

  EntropyVector() = default;
  EntropyVector(int n, std::vector<LogLinear> coords);

  /// The zero vector of length 2^n - 1.
  static EntropyVector zero(int n);
  /// [log m_alpha] from support sizes in canonical order.
  static EntropyVector from_naturals(int n, const std::vector<std::uint64_t>& sizes);

  const LogLinear& at(Subset s) const { return coords[subset_index(n, s)]; }
  LogLinear& at(Subset s) { return coords[subset_index(n, s)]; }

  EntropyVector& operator+=(const EntropyVector& other);
  friend EntropyVector operator+(EntropyVector a, const EntropyVector& b) { return a += b; }
  friend bool operator==(const EntropyVector& a, const EntropyVector& b) {
    return a.n == b.n && a.coords == b.coords;
  }
};

/// lambda * direction for an integer direction vector of length 2^n - 1.
EntropyVector scaled_direction(int n, const LogLinear& lambda, const std::vector<int>& direction);

/// Coordinates of h after renaming variable i to perm[i-1].
EntropyVector permute(const EntropyVector& h, const std::vector<int>& perm);

/// Support sizes m_alpha in canonical subset order.
struct SupportSizes {
  int n = 0;
  std::vector<std::uint64_t> sizes;

  std::uint64_t at(Subset s) const { return sizes[subset_index(n, s)]; }
  friend bool operator==(const SupportSizes&, const SupportSizes&) = default;
};

struct QUWitness {
  Subset alpha = 0;
  Point first;
  mpq_class first_mass;
  Point second;
  mpq_class second_mass;
};

struct QUVerdict {
  bool is_qu = false;
  std::optional<SupportSizes> support_sizes;  // set iff is_qu
  std::optional<QUWitness> witness;           // set iff !is_qu
};

/// Marginal PMF of X_alpha; coordinates keep the ascending order of alpha.
JointPMF marginalize(const JointPMF& pmf, Subset alpha);

/// Shannon entropy log N - (1/N) sum a_i log a_i, exact.
LogLinear entropy(const JointPMF& pmf);

EntropyVector entropy_vector(const JointPMF& pmf);

/// Checks every nonempty marginal for a single probability value on its
/// support. The witness for a failure is the first subset (canonical order)
/// with two distinct masses, reporting its lightest and heaviest points.
QUVerdict is_quasi_uniform(const JointPMF& pmf);

/// Distribution of ((X_i, Y_i), i in [n]) for independent X ~ p, Y ~ q. The
/// pair (x, y) is encoded as symbol x * |Y_i| + y.
JointPMF independent_product(const JointPMF& p, const JointPMF& q);

/// Renames variable i to perm[i-1].
JointPMF permute_variables(const JointPMF& pmf, const std::vector<int>& perm);

// ---------------------------------------------------------------------------
// Text format
//
//   # comment
//   pmf n=3 sizes=4,4,4
//   names 1=a,b,c,d          (optional, per variable)
//   a a b : 1/48             (or integer indices: 0 0 1 : 1/48)

class PmfParseError : public std::runtime_error {
 public:
  enum class Kind {
    malformed_header,
    malformed_line,
    bad_names,
    symbol_out_of_range,
    bad_probability,
    duplicate_tuple,
    mass_sum,
  };
  PmfParseError(Kind kind, std::size_t line, const std::string& what);
  Kind kind() const { return kind_; }
  std::size_t line() const { return line_; }

 private:
  Kind kind_;
  std::size_t line_;
};

JointPMF parse_pmf(const std::string& text);
std::string serialize_pmf(const JointPMF& pmf);

}  // namespace entroq
