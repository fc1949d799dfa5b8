#include "entroq/subsets.hpp"

#include <algorithm>
#include <array>
#include <mutex>
#include <numeric>
#include <stdexcept>

namespace entroq {

void check_variable_count(int n) {
  if (n < 1 || n > kMaxVariables)
    throw std::invalid_argument("number of variables must be in 1.." +
                                std::to_string(kMaxVariables) + ", got " + std::to_string(n));
}

std::vector<int> elements(Subset s) {
  std::vector<int> out;
  for (int i = 1; s; ++i, s >>= 1)
    if (s & 1u) out.push_back(i);
  return out;
}

const std::vector<Subset>& canonical_order(int n) {
  check_variable_count(n);
  static std::array<std::vector<Subset>, kMaxVariables + 1> cache;
  static std::once_flag flags[kMaxVariables + 1];
  std::call_once(flags[n], [n] {
    std::vector<Subset> order;
    for (Subset s = 1; s <= full_set(n); ++s) order.push_back(s);
    std::sort(order.begin(), order.end(), [](Subset a, Subset b) {
      if (cardinality(a) != cardinality(b)) return cardinality(a) < cardinality(b);
      return elements(a) < elements(b);
    });
    cache[n] = std::move(order);
  });
  return cache[n];
}

std::size_t subset_index(int n, Subset s) {
  const auto& order = canonical_order(n);
  auto it = std::find(order.begin(), order.end(), s);
  if (it == order.end())
    throw std::invalid_argument("subset " + subset_name(s) + " is not a nonempty subset of [" +
                                std::to_string(n) + "]");
  return static_cast<std::size_t>(it - order.begin());
}

std::string subset_name(Subset s) {
  std::string name;
  for (int v : elements(s)) name += static_cast<char>('0' + v);
  return name;
}

Subset parse_subset(const std::string& name, int n) {
  if (name.empty()) throw std::invalid_argument("empty subset name");
  Subset s = 0;
  for (char c : name) {
    int v = c - '0';
    if (c < '1' || c > '9' || v > n)
      throw std::invalid_argument("bad subset name '" + name + "' for n=" + std::to_string(n));
    Subset bit = Subset{1} << (v - 1);
    if (s & bit) throw std::invalid_argument("repeated variable in subset name '" + name + "'");
    s |= bit;
  }
  return s;
}

Subset permute_subset(Subset s, const std::vector<int>& perm) {
  Subset out = 0;
  for (int v : elements(s)) out |= Subset{1} << (perm.at(v - 1) - 1);
  return out;
}

std::vector<std::vector<int>> all_permutations(int n) {
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 1);
  std::vector<std::vector<int>> out;
  do out.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  return out;
}

}  // namespace entroq
