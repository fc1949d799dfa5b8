#pragma once

// Synthesis of quasi-uniform distributions with prescribed support sizes.
//
// A quasi-uniform vector with support sizes m_alpha is uniform on a support
// S of m_[n] points, and every realized point of X_alpha has exactly
// m_[n] / m_alpha preimages in S. The search places S on the grid
// [m_1] x ... x [m_n] cell by cell (row-major), propagating the fiber quotas
// and breaking symbol-relabeling symmetry by value precedence.

#include <chrono>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "entroq/distributions.hpp"

namespace entroq {

struct SupportSpec {
  int n = 0;
  std::vector<std::uint64_t> m;  // canonical subset order

  std::uint64_t at(Subset s) const { return m[subset_index(n, s)]; }
  std::uint64_t joint() const { return m.back(); }

  /// Requires an entry for every nonempty subset of [n].
  static SupportSpec from_map(int n, const std::map<Subset, std::uint64_t>& sizes);

  friend bool operator==(const SupportSpec&, const SupportSpec&) = default;
};

/// Support sizes of a vector whose coordinates are all logs of naturals and
/// which satisfy the necessary conditions below; empty otherwise.
std::optional<SupportSpec> spec_from_vector(const EntropyVector& h);

struct FeasibilityReport {
  bool ok = true;
  std::string violation;  // first failed invariant, human readable
};

/// Monotonicity, fiber divisibility (alpha in beta => m_alpha | m_beta) and
/// Gamma_n membership of [log m_alpha]. Necessary, not sufficient.
FeasibilityReport check_feasibility_necessary(const SupportSpec& spec);

struct StructuralHint {
  enum class Kind {
    independent,  // h_a + h_b = h_ab: X_a and X_b independent
    functional,   // h_a = h_ab: X_b is a function of X_a
  };
  Kind kind = Kind::independent;
  Subset alpha = 0;
  Subset beta = 0;

  std::string describe() const;  // "{1}⊥{3}" / "{12}->{3}"
  friend bool operator==(const StructuralHint&, const StructuralHint&) = default;
};

/// Additive identities among coordinates of h, over disjoint alpha, beta.
/// Requires qu_necessary(h) to be nonempty.
std::vector<StructuralHint> structural_hints(const EntropyVector& h);
std::vector<StructuralHint> structural_hints(const SupportSpec& spec);

struct SearchBudget {
  std::uint64_t max_nodes = 10'000'000;
  std::chrono::milliseconds wall_clock{60'000};
};

struct SearchOptions {
  SearchBudget budget;
  /// Single-threaded, reproducible witness. Otherwise subtrees are explored
  /// on `threads` workers (0: hardware concurrency) and the first witness wins.
  bool deterministic = true;
  unsigned threads = 0;
  /// Propagate the structural hints implied by the sizes.
  bool use_hints = true;
};

enum class SearchStatus { found, exhausted_infeasible, budget_exceeded };

std::string status_name(SearchStatus s);

struct SearchOutcome {
  SearchStatus status = SearchStatus::exhausted_infeasible;
  std::optional<JointPMF> witness;  // uniform on its support, alphabet sizes m_i
  std::uint64_t nodes_explored = 0;
  std::chrono::nanoseconds elapsed{0};
};

/// Backtracking search. Requires check_feasibility_necessary(spec).ok and
/// n <= 4.
SearchOutcome search(const SupportSpec& spec, const SearchOptions& options = {});

/// Enumerates every m_[n]-subset of the grid in lexicographic order of cell
/// indices. Rejects grids larger than `cap` cells.
SearchOutcome brute_force_oracle(const SupportSpec& spec, std::size_t cap = 24);

}  // namespace entroq
