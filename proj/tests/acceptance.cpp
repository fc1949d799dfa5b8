#include <algorithm>
#include <chrono>
#include <functional>
#include <iostream>
#include <numeric>

#include "entroq/qusearch.hpp"
#include "support.hpp"

using namespace testing;

namespace {

struct Check {
  std::vector<std::string> failures;
  void operator()(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  }
};

bool has_obstruction(const std::vector<Violation>& vs, const std::string& text, const LogLinear& value) {
  return std::any_of(vs.begin(), vs.end(), [&](const Violation& v) {
    return v.inequality.describe(3) == text && v.value == value;
  });
}

void check_witness(Check& check, const SupportSpec& spec, const SearchOutcome& out, const EntropyVector& expect) {
  check(out.status == SearchStatus::found, "status " + status_name(out.status));
  if (!out.witness) return;
  auto verdict = is_quasi_uniform(*out.witness);
  check(verdict.is_qu, "witness is not quasi-uniform");
  if (verdict.support_sizes) check(verdict.support_sizes->sizes == spec.m, "witness support sizes");
  check(entropy_vector(*out.witness) == expect, "witness entropy vector");
}

// Uniform PMFs realizing lambda * e for lambda = log m.
JointPMF realize_ray(Ray r, std::uint32_t m) {
  std::vector<Point> support;
  for (Symbol a = 0; a < m; ++a) {
    switch (r) {
      case Ray::e1: support.push_back({a, 0, 0}); break;
      case Ray::e2: support.push_back({0, a, 0}); break;
      case Ray::e3: support.push_back({0, 0, a}); break;
      case Ray::e12: support.push_back({a, a, 0}); break;
      case Ray::e123p:
        for (Symbol b = 0; b < m; ++b) support.push_back({a, b, (a + b) % m});
        break;
      default: throw std::logic_error("realize_ray: unsupported ray");
    }
  }
  std::vector<std::uint32_t> sizes(3, 1);
  for (const auto& x : support)
    for (int i = 0; i < 3; ++i) sizes[i] = std::max(sizes[i], x[i] + 1);
  return JointPMF::uniform(sizes, support);
}

void criterion1(Check& check) {
  auto p = load_fixture("table1.pmf");
  check(entropy_vector(p) == vec_f(), "entropy vector differs from f");
  auto verdict = is_quasi_uniform(p);
  check(verdict.is_qu, "not quasi-uniform");
  check(verdict.support_sizes && verdict.support_sizes->sizes == std::vector<std::uint64_t>{4, 4, 4, 16, 16, 16, 48},
        "support sizes");
}

void criterion2(Check& check) {
  auto p = load_fixture("table2.pmf");
  auto h = entropy_vector(p);
  check(h == vec_g(), "entropy vector differs from g");
  check(h.at(0b011) == log_zeta(), "h12 differs from log zeta");
  double zeta = std::stod(approx_exp(h.at(0b011), 6));
  check(std::abs(zeta - 73.1091) <= 1e-4, "exp(h12) = " + approx_exp(h.at(0b011), 6));
  auto verdict = is_quasi_uniform(p);
  check(!verdict.is_qu, "reported quasi-uniform");
  check(verdict.witness && verdict.witness->alpha == 0b011, "witness subset is not {1,2}");
}

void criterion3(Check& check) {
  auto f = vec_f();
  check(strict_in_face(f, kTheta).status == FacePosition::Status::strictly_inside, "f not strictly inside Theta");
  const RaySet sub = {Ray::e1, Ray::e2, Ray::e123p};
  check(!cone_membership(f, sub), "f in cone(e1,e2,e123')");
  check(has_obstruction(face_obstructions(f, sub), "h123 >= h12", L(3)), "no h12 = h123 obstruction");
  auto verdict = theta_in(f);
  check(!verdict.member, "theta_in accepted f");
  check(verdict.decomposition && (*verdict.decomposition)[Ray::e123p] == L(4, 3), "lambda123' != log(4/3)");
}

void criterion4(Check& check) {
  auto g = vec_g();
  auto z = log_zeta();
  auto cert = cone_membership(g, kOmega);
  check(cert.has_value(), "g not in Omega");
  if (cert) {
    check((*cert)[Ray::e1] == L(4) && (*cert)[Ray::e2] == L(4), "lambda1, lambda2");
    check((*cert)[Ray::e3] == L(216) - z, "lambda3");
    check((*cert)[Ray::e12] == L(81) - z, "lambda12");
    check((*cert)[Ray::e123p] == z - L(36), "lambda123'");
  }
  check(strict_in_face(g, kOmega).status == FacePosition::Status::strictly_inside, "g not strictly inside Omega");
  check(!cone_membership(g, kTheta), "g in Theta");
  check(has_obstruction(face_obstructions(g, kTheta), "h1 + h2 >= h12", L(81) - z), "no h1 + h2 = h12 obstruction");
  auto verdict = omega_in(g);
  check(!verdict.member, "omega_in accepted g");
  bool found = false;
  for (const auto& c : verdict.conditions)
    if (c.name == "eq39") {
      found = true;
      check(!c.holds && c.lhs == L(9, 4) && c.rhs == L(3), "condition values differ from log(9/4) vs log 3");
    }
  check(found, "missing sum condition");
}

void criterion5(Check& check) {
  for (Ray r : kAllRays) check(in_gamma_n(ray_vector(r)).member, "generator " + ray_name(r));

  std::mt19937_64 rng(501);
  for (int trial = 0; trial < 500; ++trial) {
    std::map<Ray, LogLinear> lambda;
    for (Ray r : kAllRays) {
      mpq_class q(static_cast<long>(rng() % 7), static_cast<long>(1 + rng() % 5));
      q.canonicalize();
      lambda[r] = q * random_nonnegative(rng);
    }
    auto h = combine(lambda);
    check(in_gamma_n(h).member, "conic combination outside Gamma_3");
    auto cert = cone_membership(h, kAllGenerators);
    check(cert && cert->recompose() == h, "cone_membership round trip");
  }

  const auto& ineqs = elemental_inequalities(3);
  for (int trial = 0; trial < 100; ++trial) {
    const auto& facet = ineqs[rng() % ineqs.size()];
    std::vector<int> base(7, 0);
    for (Ray r : kAllRays) {
      const auto& e = generator(r);
      int dot = 0;
      for (int k = 0; k < 7; ++k) dot += facet.coeffs[k] * e[k];
      if (dot == 0) {
        int c = 1 + static_cast<int>(rng() % 5);
        for (int k = 0; k < 7; ++k) base[k] += c * e[k];
      }
    }
    std::vector<int> up;
    for (int k = 0; k < 7; ++k)
      if (facet.coeffs[k] > 0) up.push_back(k);
    int k = up[rng() % up.size()];
    mpq_class eps(static_cast<long>(1 + rng() % 4), 16);
    eps.canonicalize();
    LogLinear unit = random_nonnegative(rng, 9) + L(2);
    std::vector<LogLinear> coords;
    for (int c = 0; c < 7; ++c) coords.push_back((mpq_class(base[c]) - (c == k ? eps : mpq_class(0))) * unit);
    auto report = in_gamma_n(EntropyVector(3, coords));
    check(!report.member && report.violations.size() == 1 &&
              report.violations[0].inequality.coeffs == facet.coeffs,
          "perturbation off " + facet.describe(3));
  }
}

void criterion6(Check& check) {
  std::mt19937_64 rng(601);
  int accepted = 0, tries = 0;
  while (accepted < 500 && ++tries < 20000) {
    std::map<Ray, LogLinear> lambda;
    RaySet face = tries % 2 ? kOmega : kTheta;
    for (Ray r : face.rays()) lambda[r] = random_nonnegative(rng, 8);
    auto h = combine(lambda);
    if (theta_in(h).member || omega_in(h).member) {
      ++accepted;
      check(in_gamma_n(h).member, "accepted vector outside Gamma_3");
    }
  }
  check(accepted == 500, "only " + std::to_string(accepted) + " accepted vectors generated");

  int realized = 0;
  for (int trial = 0; realized < 10 && trial < 1000; ++trial) {
    std::map<Ray, std::uint32_t> m;
    RaySet face = trial % 2 ? kOmega : kTheta;
    for (Ray r : face.rays()) m[r] = 1 + static_cast<std::uint32_t>(rng() % 4);
    std::map<Ray, LogLinear> lambda;
    for (auto [r, size] : m) lambda[r] = L(size);
    auto h = combine(lambda);
    if (!(theta_in(h).member || omega_in(h).member)) continue;
    std::optional<JointPMF> pmf;
    for (auto [r, size] : m) {
      auto part = realize_ray(r, size);
      pmf = pmf ? independent_product(*pmf, part) : part;
    }
    ++realized;
    check(entropy_vector(*pmf) == h, "product PMF does not realize an accepted vector");
    check(is_quasi_uniform(*pmf).is_qu, "product PMF is not quasi-uniform");
  }
  check(realized == 10, "only " + std::to_string(realized) + " vectors realized");
}

void criterion7(Check& check) {
  using clock = std::chrono::steady_clock;
  SupportSpec parity{3, {2, 2, 2, 4, 4, 4, 4}};
  auto t0 = clock::now();
  auto out = search(parity);
  check(clock::now() - t0 < std::chrono::seconds(1), "parity search slower than 1 s");
  check_witness(check, parity, out, ray_vector(Ray::e123p));

  SupportSpec f{3, {4, 4, 4, 16, 16, 16, 48}};
  t0 = clock::now();
  out = search(f);
  check(clock::now() - t0 < std::chrono::seconds(60), "f search slower than 60 s");
  check_witness(check, f, out, vec_f());

  int compared = 0;
  for (std::uint64_t a = 1; a <= 4; ++a)
    for (std::uint64_t b = 1; b <= 4; ++b)
      for (std::uint64_t ab = std::lcm(a, b); ab <= 16; ab += std::lcm(a, b)) {
        SupportSpec spec{2, {a, b, ab}};
        auto oracle = brute_force_oracle(spec);
        bool searched = false;
        if (check_feasibility_necessary(spec).ok) {
          auto result = search(spec);
          check(result.status != SearchStatus::budget_exceeded, "budget exceeded on a small spec");
          searched = result.status == SearchStatus::found;
          if (result.status == SearchStatus::found)
            check_witness(check, spec, result, EntropyVector::from_naturals(2, spec.m));
        }
        ++compared;
        check(searched == (oracle.status == SearchStatus::found),
              "disagreement on (" + std::to_string(a) + "," + std::to_string(b) + "," + std::to_string(ab) + ")");
      }
  check(compared > 0, "empty sweep");
}

void criterion8(Check& check) {
  SupportSpec spec{3, {9, 9, 6, 54, 54, 54, 216}};
  auto out = search(spec);
  check(out.status == SearchStatus::found || out.status == SearchStatus::budget_exceeded,
        "status " + status_name(out.status));
  if (out.status == SearchStatus::found) check_witness(check, spec, out, vec_k216());
  std::cout << "  criterion 8 outcome: " << status_name(out.status) << " after " << out.nodes_explored << " nodes\n";
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    std::string title;
    std::chrono::seconds limit;
    std::function<void(Check&)> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "first table reproduces f and is quasi-uniform", std::chrono::seconds(1), criterion1},
      {2, "second table reproduces g, zeta and the {1,2} witness", std::chrono::seconds(1), criterion2},
      {3, "f strictly inside Theta yet rejected by theta_in", std::chrono::seconds(1), criterion3},
      {4, "g decomposes over Omega exactly and is rejected by omega_in", std::chrono::seconds(1), criterion4},
      {5, "cone soundness properties", std::chrono::seconds(30), criterion5},
      {6, "inner-bound soundness and product realizations", std::chrono::seconds(60), criterion6},
      {7, "search validation", std::chrono::seconds(120), criterion7},
      {8, "216-point fixture terminates under the default budget", std::chrono::seconds(600), criterion8},
  };

  int failed = 0;
  for (const auto& c : criteria) {
    Check check;
    auto t0 = std::chrono::steady_clock::now();
    try {
      c.run(check);
    } catch (const std::exception& e) {
      check(false, std::string("exception: ") + e.what());
    }
    auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0);
    check(ms < c.limit, "runtime limit " + std::to_string(c.limit.count()) + " s exceeded");
    bool pass = check.failures.empty();
    failed += !pass;
    std::cout << (pass ? "PASS" : "FAIL") << " criterion " << c.id << ": " << c.title << " (" << ms.count()
              << " ms)\n";
    for (const auto& f : check.failures) std::cout << "  - " << f << '\n';
  }
  return failed == 0 ? 0 : 1;
}
