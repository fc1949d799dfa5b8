#pragma once

// Nonempty subsets of [n] as bitmasks: bit i-1 set <=> variable i present.

#include <cstdint>
#include <string>
#include <vector>

namespace entroq {

using Subset = std::uint32_t;

/// Largest n for which subset names ("12", "123") stay unambiguous.
inline constexpr int kMaxVariables = 9;

inline Subset full_set(int n) { return (Subset{1} << n) - 1; }
inline int cardinality(Subset s) { return __builtin_popcount(s); }
inline bool contains(Subset s, int var) { return (s >> (var - 1)) & 1u; }

/// Nonempty subsets of [n] ordered by cardinality, then lexicographically by
/// element list. For n = 3: 1, 2, 3, 12, 13, 23, 123.
const std::vector<Subset>& canonical_order(int n);

/// Position of s in canonical_order(n).
std::size_t subset_index(int n, Subset s);

/// "12" for {1,2}; "" for the empty set.
std::string subset_name(Subset s);

/// Inverse of subset_name; validates digits against n.
Subset parse_subset(const std::string& name, int n);

/// Elements of s, ascending, 1-based.
std::vector<int> elements(Subset s);

/// Image of s when variable i is renamed perm[i-1] (perm is a 1-based
/// permutation of [n] stored 0-indexed).
Subset permute_subset(Subset s, const std::vector<int>& perm);

/// All permutations of [n] in lexicographic order.
std::vector<std::vector<int>> all_permutations(int n);

void check_variable_count(int n);

}  // namespace entroq
