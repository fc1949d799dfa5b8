#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <numeric>

#include "entroq/qusearch.hpp"
#include "support.hpp"

using namespace testing;

namespace {

SupportSpec spec3(std::vector<std::uint64_t> m) { return SupportSpec{3, std::move(m)}; }
SupportSpec spec2(std::vector<std::uint64_t> m) { return SupportSpec{2, std::move(m)}; }

// A witness must be uniform, quasi-uniform, and realize [log m_alpha].
void check_witness(const SupportSpec& spec, const SearchOutcome& out) {
  REQUIRE(out.status == SearchStatus::found);
  REQUIRE(out.witness);
  const auto& w = *out.witness;
  CHECK(w.support_size() == spec.joint());
  for (int i = 1; i <= spec.n; ++i) CHECK(w.alphabet_sizes()[i - 1] == spec.at(Subset{1} << (i - 1)));
  auto verdict = is_quasi_uniform(w);
  CHECK(verdict.is_qu);
  CHECK(entropy_vector(w) == EntropyVector::from_naturals(spec.n, spec.m));
}

std::vector<StructuralHint> H(std::initializer_list<StructuralHint> hints) { return hints; }

constexpr auto I = StructuralHint::Kind::independent;
constexpr auto F = StructuralHint::Kind::functional;

std::vector<SupportSpec> sweep_n2() {
  std::vector<SupportSpec> out;
  for (std::uint64_t a = 1; a <= 4; ++a)
    for (std::uint64_t b = 1; b <= 4; ++b)
      for (std::uint64_t ab = 1; ab <= 16; ++ab)
        if (ab % a == 0 && ab % b == 0) out.push_back(spec2({a, b, ab}));
  return out;
}

std::vector<SupportSpec> sweep_n3(std::uint64_t max_cells) {
  std::vector<SupportSpec> out;
  auto multiples = [](std::uint64_t l, std::uint64_t cap) {
    std::vector<std::uint64_t> v;
    for (std::uint64_t x = l; x <= cap; x += l) v.push_back(x);
    return v;
  };
  for (std::uint64_t a = 1; a <= 4; ++a)
    for (std::uint64_t b = 1; b <= 4; ++b)
      for (std::uint64_t c = 1; c <= 4; ++c) {
        if (a * b * c > max_cells) continue;
        for (auto ab : multiples(std::lcm(a, b), a * b))
          for (auto ac : multiples(std::lcm(a, c), a * c))
            for (auto bc : multiples(std::lcm(b, c), b * c))
              for (auto abc : multiples(std::lcm(std::lcm(ab, ac), bc), a * b * c))
                out.push_back(spec3({a, b, c, ab, ac, bc, abc}));
      }
  return out;
}

}  // namespace

TEST_CASE("necessary conditions") {
  CHECK(check_feasibility_necessary(spec3({4, 4, 4, 16, 16, 16, 48})).ok);
  CHECK(check_feasibility_necessary(spec3({9, 9, 6, 54, 54, 54, 216})).ok);
  auto bad = check_feasibility_necessary(spec2({2, 2, 3}));
  CHECK_FALSE(bad.ok);
  CHECK(bad.violation.find("divisib") != std::string::npos);
  auto mono = check_feasibility_necessary(spec2({4, 2, 2}));
  CHECK_FALSE(mono.ok);
  CHECK(mono.violation.find("monotonicity") != std::string::npos);
  auto poly = check_feasibility_necessary(spec2({2, 2, 8}));
  CHECK_FALSE(poly.ok);
  CHECK(poly.violation.find("h1 + h2 >= h12") != std::string::npos);
}

TEST_CASE("spec_from_vector") {
  CHECK(spec_from_vector(vec_f()) == spec3({4, 4, 4, 16, 16, 16, 48}));
  CHECK(spec_from_vector(vec_k216()) == spec3({9, 9, 6, 54, 54, 54, 216}));
  CHECK_FALSE(spec_from_vector(vec_g()));
}

TEST_CASE("structural hints") {
  CHECK(structural_hints(vec_k216()) == H({{I, 0b001, 0b100}, {I, 0b010, 0b100}}));
  CHECK(structural_hints(vec_f()) == H({{I, 0b001, 0b010}, {I, 0b001, 0b100}, {I, 0b010, 0b100}}));
  CHECK(structural_hints(naturals(2, {2, 2, 4})) == H({{I, 0b01, 0b10}}));
  auto parity = structural_hints(spec3({2, 2, 2, 4, 4, 4, 4}));
  CHECK(parity == H({{I, 0b001, 0b010},
                     {I, 0b001, 0b100},
                     {I, 0b010, 0b100},
                     {F, 0b011, 0b100},
                     {F, 0b101, 0b010},
                     {F, 0b110, 0b001}}));
  CHECK(parity[3].describe() == "{12}->{3}");
  CHECK(parity[0].describe() == "{1}⊥{2}");
  for (const auto& spec : {spec3({4, 4, 4, 16, 16, 16, 48}), spec3({9, 9, 6, 54, 54, 54, 216})})
    CHECK(structural_hints(spec) == structural_hints(EntropyVector::from_naturals(3, spec.m)));
  CHECK_THROWS(structural_hints(vec_g()));
}

TEST_CASE("search finds the parity support") {
  auto spec = spec3({2, 2, 2, 4, 4, 4, 4});
  auto out = search(spec);
  check_witness(spec, out);
  CHECK(entropy_vector(*out.witness) == ray_vector(Ray::e123p));
  for (const auto& [x, p] : out.witness->mass()) CHECK((x[0] ^ x[1]) == x[2]);
}

TEST_CASE("search realizes f with a Latin-square complement") {
  auto spec = spec3({4, 4, 4, 16, 16, 16, 48});
  auto out = search(spec);
  check_witness(spec, out);
  CHECK(entropy_vector(*out.witness) == vec_f());
  // The 16 excluded cells meet every line of the grid exactly once.
  int excluded[3][4][4] = {};
  for (Symbol a = 0; a < 4; ++a)
    for (Symbol b = 0; b < 4; ++b)
      for (Symbol c = 0; c < 4; ++c)
        if (!out.witness->mass().count(Point{a, b, c})) {
          ++excluded[0][a][b];
          ++excluded[1][a][c];
          ++excluded[2][b][c];
        }
  for (auto& plane : excluded)
    for (auto& row : plane)
      for (int cnt : row) CHECK(cnt == 1);
}

TEST_CASE("search on small independent and functional specs") {
  check_witness(spec2({2, 3, 6}), search(spec2({2, 3, 6})));
  check_witness(spec2({2, 2, 2}), search(spec2({2, 2, 2})));
  check_witness(spec3({1, 1, 1, 1, 1, 1, 1}), search(spec3({1, 1, 1, 1, 1, 1, 1})));
  check_witness(SupportSpec{1, {5}}, search(SupportSpec{1, {5}}));
}

TEST_CASE("search preconditions") {
  CHECK_THROWS_AS(search(spec2({2, 2, 3})), std::invalid_argument);
  std::vector<std::uint64_t> m5(31, 1);
  CHECK_THROWS_AS(search(SupportSpec{5, m5}), std::invalid_argument);
}

TEST_CASE("brute-force oracle examples") {
  auto parity = brute_force_oracle(spec3({2, 2, 2, 4, 4, 4, 4}));
  check_witness(spec3({2, 2, 2, 4, 4, 4, 4}), parity);
  CHECK(brute_force_oracle(spec2({2, 2, 3})).status == SearchStatus::exhausted_infeasible);
  auto diag = brute_force_oracle(spec2({2, 2, 2}));
  check_witness(spec2({2, 2, 2}), diag);
  CHECK(diag.witness->mass().count(Point{0, 0}) == 1);
  CHECK(diag.witness->mass().count(Point{1, 1}) == 1);
  CHECK_THROWS_AS(brute_force_oracle(spec3({3, 3, 3, 9, 9, 9, 27})), std::invalid_argument);
}

TEST_CASE("budget exhaustion is reported") {
  SearchOptions options;
  options.budget.max_nodes = 1000;
  auto out = search(spec3({9, 9, 6, 54, 54, 54, 216}), options);
  CHECK(out.status == SearchStatus::budget_exceeded);
  CHECK(out.nodes_explored == 1000);
  CHECK_FALSE(out.witness);

  options.budget.max_nodes = 1'000'000'000;
  options.budget.wall_clock = std::chrono::milliseconds(50);
  auto timed = search(spec3({9, 9, 6, 54, 54, 54, 216}), options);
  CHECK(timed.status == SearchStatus::budget_exceeded);
  CHECK(timed.elapsed < std::chrono::seconds(5));
}

TEST_CASE("determinism") {
  for (const auto& spec : {spec3({4, 4, 4, 16, 16, 16, 48}), spec3({2, 2, 2, 4, 4, 4, 4}), spec2({3, 4, 12})}) {
    auto a = search(spec), b = search(spec);
    CHECK(a.status == b.status);
    CHECK(a.nodes_explored == b.nodes_explored);
    REQUIRE(a.witness);
    REQUIRE(b.witness);
    CHECK(*a.witness == *b.witness);
  }
}

TEST_CASE("parallel mode finds valid witnesses") {
  SearchOptions options;
  options.deterministic = false;
  options.threads = 4;
  for (const auto& spec : {spec3({4, 4, 4, 16, 16, 16, 48}), spec3({2, 2, 2, 4, 4, 4, 4}), spec3({2, 3, 6, 6, 12, 18, 36})})
    check_witness(spec, search(spec, options));
  options.budget.max_nodes = 5000;
  auto out = search(spec3({9, 9, 6, 54, 54, 54, 216}), options);
  CHECK(out.status == SearchStatus::budget_exceeded);
}

TEST_CASE("property: search agrees with the oracle for n = 2") {
  int found = 0, infeasible = 0;
  for (const auto& spec : sweep_n2()) {
    auto oracle = brute_force_oracle(spec);
    if (!check_feasibility_necessary(spec).ok) {
      CHECK(oracle.status == SearchStatus::exhausted_infeasible);
      continue;
    }
    auto out = search(spec);
    CHECK(out.status == oracle.status);
    if (out.status == SearchStatus::found) {
      ++found;
      check_witness(spec, out);
      check_witness(spec, oracle);
    } else {
      ++infeasible;
    }
  }
  // Biregular bipartite graphs exist whenever the degrees divide.
  CHECK(found > 10);
  CHECK(infeasible == 0);
}

TEST_CASE("property: search agrees with the oracle for n = 3") {
  int compared = 0, found = 0, infeasible = 0;
  for (const auto& spec : sweep_n3(18)) {
    if (!check_feasibility_necessary(spec).ok) continue;
    auto oracle = brute_force_oracle(spec);
    auto out = search(spec);
    ++compared;
    CHECK(out.status == oracle.status);
    if (out.status == SearchStatus::found) {
      ++found;
      check_witness(spec, out);
    } else {
      ++infeasible;
    }
  }
  MESSAGE("n=3 specs compared: " << compared << " (found " << found << ", infeasible " << infeasible << ")");
  CHECK(found > 10);
}

TEST_CASE("a spec passing the necessary conditions with no realization") {
  // The brute-force oracle with cap 27 exhausts 17383860 subsets here.
  auto spec = spec3({3, 3, 3, 6, 6, 6, 12});
  REQUIRE(check_feasibility_necessary(spec).ok);
  CHECK(search(spec).status == SearchStatus::exhausted_infeasible);
  SearchOptions plain;
  plain.use_hints = false;
  CHECK(search(spec, plain).status == SearchStatus::exhausted_infeasible);
}

TEST_CASE("property: hints do not change feasibility") {
  SearchOptions plain;
  plain.use_hints = false;
  for (const auto& spec : sweep_n3(18)) {
    if (!check_feasibility_necessary(spec).ok) continue;
    auto with = search(spec);
    auto without = search(spec, plain);
    CHECK(with.status == without.status);
    if (without.status == SearchStatus::found) check_witness(spec, without);
  }
  for (const auto& spec : sweep_n2()) {
    if (!check_feasibility_necessary(spec).ok) continue;
    CHECK(search(spec).status == search(spec, plain).status);
  }
}

TEST_CASE("property: every witness is sound for n = 4 products") {
  // Products of n = 2 realizations padded with a constant or copied variable.
  for (const auto& spec : {SupportSpec{4, {2, 2, 2, 2, 4, 4, 4, 4, 4, 4, 4, 4, 4, 4, 4}},
                           SupportSpec{4, {2, 2, 2, 2, 4, 4, 4, 4, 4, 4, 8, 8, 8, 8, 8}}}) {
    if (!check_feasibility_necessary(spec).ok) continue;
    auto out = search(spec);
    if (out.status == SearchStatus::found) check_witness(spec, out);
  }
}
