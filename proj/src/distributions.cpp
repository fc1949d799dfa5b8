#include "entroq/distributions.hpp"

#include <algorithm>

namespace entroq {

JointPMF::JointPMF(std::vector<std::uint32_t> alphabet_sizes, MassMap mass,
                   std::vector<std::vector<std::string>> symbol_names)
    : alphabet_sizes_(std::move(alphabet_sizes)),
      mass_(std::move(mass)),
      names_(std::move(symbol_names)) {
  check_variable_count(n());
  for (auto s : alphabet_sizes_)
    if (s == 0) throw std::invalid_argument("JointPMF: alphabet sizes must be positive");
  if (!names_.empty()) {
    if (names_.size() != alphabet_sizes_.size())
      throw std::invalid_argument("JointPMF: symbol names given for the wrong number of variables");
    for (std::size_t i = 0; i < names_.size(); ++i)
      if (!names_[i].empty() && names_[i].size() != alphabet_sizes_[i])
        throw std::invalid_argument("JointPMF: symbol name count differs from alphabet size");
  }
  if (mass_.empty()) throw std::invalid_argument("JointPMF: empty support");

  mpq_class total = 0;
  denominator_ = 1;
  for (auto& [point, p] : mass_) {
    p.canonicalize();
    if (point.size() != alphabet_sizes_.size())
      throw std::invalid_argument("JointPMF: point arity differs from n");
    for (std::size_t i = 0; i < point.size(); ++i)
      if (point[i] >= alphabet_sizes_[i])
        throw std::invalid_argument("JointPMF: symbol out of range");
    if (sgn(p) <= 0) throw std::invalid_argument("JointPMF: masses must be positive");
    total += p;
    mpz_lcm(denominator_.get_mpz_t(), denominator_.get_mpz_t(), p.get_den_mpz_t());
  }
  if (total != 1) throw std::invalid_argument("JointPMF: mass sum is " + rational_text(total) + ", not 1");
  for (const auto& [point, p] : mass_) {
    mpz_class count = p.get_num() * (denominator_ / p.get_den());
    ++histogram_[count];
  }
}

JointPMF JointPMF::uniform(std::vector<std::uint32_t> alphabet_sizes,
                           const std::vector<Point>& support) {
  MassMap mass;
  mpq_class p(1, support.size());
  p.canonicalize();
  for (const auto& x : support)
    if (!mass.emplace(x, p).second) throw std::invalid_argument("JointPMF::uniform: duplicate point");
  return JointPMF(std::move(alphabet_sizes), std::move(mass));
}

EntropyVector::EntropyVector(int n_vars, std::vector<LogLinear> c) : n(n_vars), coords(std::move(c)) {
  check_variable_count(n);
  if (coords.size() != canonical_order(n).size())
    throw std::invalid_argument("EntropyVector: expected " +
                                std::to_string(canonical_order(n).size()) + " coordinates");
}

EntropyVector EntropyVector::zero(int n) {
  return EntropyVector(n, std::vector<LogLinear>(canonical_order(n).size()));
}

EntropyVector EntropyVector::from_naturals(int n, const std::vector<std::uint64_t>& sizes) {
  std::vector<LogLinear> coords;
  for (auto m : sizes) coords.push_back(from_log_int(mpz_class(std::to_string(m))));
  return EntropyVector(n, std::move(coords));
}

EntropyVector& EntropyVector::operator+=(const EntropyVector& other) {
  if (other.n != n) throw std::invalid_argument("EntropyVector: adding vectors of different n");
  for (std::size_t k = 0; k < coords.size(); ++k) coords[k] += other.coords[k];
  return *this;
}

EntropyVector scaled_direction(int n, const LogLinear& lambda, const std::vector<int>& direction) {
  EntropyVector h = EntropyVector::zero(n);
  if (direction.size() != h.coords.size())
    throw std::invalid_argument("scaled_direction: length mismatch");
  for (std::size_t k = 0; k < direction.size(); ++k) h.coords[k] = mpq_class(direction[k]) * lambda;
  return h;
}

EntropyVector permute(const EntropyVector& h, const std::vector<int>& perm) {
  EntropyVector out = EntropyVector::zero(h.n);
  for (Subset s : canonical_order(h.n)) out.at(permute_subset(s, perm)) = h.at(s);
  return out;
}

JointPMF marginalize(const JointPMF& pmf, Subset alpha) {
  if (alpha == 0) throw std::invalid_argument("marginalize: empty subset");
  if (alpha & ~full_set(pmf.n()))
    throw std::invalid_argument("marginalize: subset not contained in [n]");
  const auto vars = elements(alpha);
  std::vector<std::uint32_t> sizes;
  std::vector<std::vector<std::string>> names;
  for (int v : vars) {
    sizes.push_back(pmf.alphabet_sizes()[v - 1]);
    if (!pmf.symbol_names().empty()) names.push_back(pmf.symbol_names()[v - 1]);
  }
  JointPMF::MassMap mass;
  Point projected(vars.size());
  for (const auto& [point, p] : pmf.mass()) {
    for (std::size_t k = 0; k < vars.size(); ++k) projected[k] = point[vars[k] - 1];
    mass[projected] += p;
  }
  return JointPMF(std::move(sizes), std::move(mass), std::move(names));
}

LogLinear entropy(const JointPMF& pmf) {
  const mpz_class& total = pmf.common_denominator();
  LogLinear weighted;
  for (const auto& [count, multiplicity] : pmf.count_histogram()) {
    if (count == 1) continue;
    mpq_class w(count * multiplicity);
    weighted += w * from_log_int(count);
  }
  mpq_class inv(1, total);
  inv.canonicalize();
  return from_log_int(total) - inv * weighted;
}

EntropyVector entropy_vector(const JointPMF& pmf) {
  std::vector<LogLinear> coords;
  for (Subset s : canonical_order(pmf.n())) coords.push_back(entropy(marginalize(pmf, s)));
  return EntropyVector(pmf.n(), std::move(coords));
}

QUVerdict is_quasi_uniform(const JointPMF& pmf) {
  QUVerdict verdict;
  SupportSizes sizes{pmf.n(), {}};
  for (Subset s : canonical_order(pmf.n())) {
    JointPMF marginal = marginalize(pmf, s);
    if (marginal.count_histogram().size() != 1) {
      auto lightest = marginal.mass().begin();
      auto heaviest = marginal.mass().begin();
      for (auto it = marginal.mass().begin(); it != marginal.mass().end(); ++it) {
        if (it->second < lightest->second) lightest = it;
        if (it->second > heaviest->second) heaviest = it;
      }
      verdict.witness = QUWitness{s, lightest->first, lightest->second, heaviest->first,
                                  heaviest->second};
      return verdict;
    }
    sizes.sizes.push_back(marginal.support_size());
  }
  verdict.is_qu = true;
  verdict.support_sizes = std::move(sizes);
  return verdict;
}

JointPMF independent_product(const JointPMF& p, const JointPMF& q) {
  if (p.n() != q.n()) throw std::invalid_argument("independent_product: different n");
  std::vector<std::uint32_t> sizes(p.n());
  for (int i = 0; i < p.n(); ++i) sizes[i] = p.alphabet_sizes()[i] * q.alphabet_sizes()[i];
  JointPMF::MassMap mass;
  Point joint(p.n());
  for (const auto& [x, px] : p.mass()) {
    for (const auto& [y, qy] : q.mass()) {
      for (int i = 0; i < p.n(); ++i) joint[i] = x[i] * q.alphabet_sizes()[i] + y[i];
      mass.emplace(joint, px * qy);
    }
  }
  return JointPMF(std::move(sizes), std::move(mass));
}

JointPMF permute_variables(const JointPMF& pmf, const std::vector<int>& perm) {
  const int n = pmf.n();
  if (static_cast<int>(perm.size()) != n) throw std::invalid_argument("permute_variables: bad permutation");
  std::vector<std::uint32_t> sizes(n);
  std::vector<std::vector<std::string>> names(pmf.symbol_names().empty() ? 0 : n);
  for (int i = 0; i < n; ++i) {
    sizes[perm[i] - 1] = pmf.alphabet_sizes()[i];
    if (!names.empty()) names[perm[i] - 1] = pmf.symbol_names()[i];
  }
  JointPMF::MassMap mass;
  Point y(n);
  for (const auto& [x, p] : pmf.mass()) {
    for (int i = 0; i < n; ++i) y[perm[i] - 1] = x[i];
    mass.emplace(y, p);
  }
  return JointPMF(std::move(sizes), std::move(mass), std::move(names));
}

}  // namespace entroq
