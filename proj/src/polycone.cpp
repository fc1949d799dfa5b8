#include "entroq/polycone.hpp"

#include <algorithm>
#include <mutex>
#include <set>
#include <sstream>
#include <stdexcept>

namespace entroq {

namespace {

constexpr int kMaxConeVariables = 6;
constexpr int kGamma3Dim = 7;

void require_n3(const EntropyVector& h, const char* who) {
  if (h.n != 3) throw std::invalid_argument(std::string(who) + ": requires n = 3");
}

std::string h_name(Subset s) { return "h" + subset_name(s); }

Subset ray_subset(Ray r) {
  switch (r) {
    case Ray::e1: return 0b001;
    case Ray::e2: return 0b010;
    case Ray::e3: return 0b100;
    case Ray::e12: return 0b011;
    case Ray::e13: return 0b101;
    case Ray::e23: return 0b110;
    default: return 0b111;
  }
}

Ray ray_from_subset(Subset s) {
  switch (s) {
    case 0b001: return Ray::e1;
    case 0b010: return Ray::e2;
    case 0b100: return Ray::e3;
    case 0b011: return Ray::e12;
    case 0b101: return Ray::e13;
    case 0b110: return Ray::e23;
    default: return Ray::e123;
  }
}

int evaluate_int(const ElementalInequality& ineq, const std::array<int, 7>& v) {
  int total = 0;
  for (std::size_t k = 0; k < v.size(); ++k) total += ineq.coeffs[k] * v[k];
  return total;
}

// Reduced row echelon form of the integer columns; returns the rank.
int column_rank(const std::vector<std::array<int, 7>>& columns) {
  std::vector<std::vector<mpq_class>> m(kGamma3Dim, std::vector<mpq_class>(columns.size()));
  for (std::size_t c = 0; c < columns.size(); ++c)
    for (int r = 0; r < kGamma3Dim; ++r) m[r][c] = columns[c][r];
  int pivot_row = 0;
  for (std::size_t c = 0; c < columns.size() && pivot_row < kGamma3Dim; ++c) {
    int found = -1;
    for (int r = pivot_row; r < kGamma3Dim; ++r)
      if (sgn(m[r][c]) != 0) {
        found = r;
        break;
      }
    if (found < 0) continue;
    std::swap(m[found], m[pivot_row]);
    for (int r = 0; r < kGamma3Dim; ++r) {
      if (r == pivot_row || sgn(m[r][c]) == 0) continue;
      mpq_class f = m[r][c] / m[pivot_row][c];
      for (std::size_t k = c; k < columns.size(); ++k) m[r][k] -= f * m[pivot_row][k];
    }
    ++pivot_row;
  }
  return pivot_row;
}

// Solves sum_k lambda_k columns[k] = h exactly for linearly independent
// columns; empty when the system is inconsistent.
std::optional<std::vector<LogLinear>> solve_basis(const std::vector<std::array<int, 7>>& columns,
                                                  const EntropyVector& h) {
  const std::size_t width = columns.size();
  std::vector<std::vector<mpq_class>> m(kGamma3Dim, std::vector<mpq_class>(width));
  std::vector<LogLinear> rhs = h.coords;
  for (std::size_t c = 0; c < width; ++c)
    for (int r = 0; r < kGamma3Dim; ++r) m[r][c] = columns[c][r];

  int pivot_row = 0;
  for (std::size_t c = 0; c < width; ++c) {
    int found = -1;
    for (int r = pivot_row; r < kGamma3Dim; ++r)
      if (sgn(m[r][c]) != 0) {
        found = r;
        break;
      }
    if (found < 0) return std::nullopt;  // dependent columns
    std::swap(m[found], m[pivot_row]);
    std::swap(rhs[found], rhs[pivot_row]);
    mpq_class inv = 1 / m[pivot_row][c];
    for (std::size_t k = c; k < width; ++k) m[pivot_row][k] *= inv;
    rhs[pivot_row] *= inv;
    for (int r = 0; r < kGamma3Dim; ++r) {
      if (r == pivot_row || sgn(m[r][c]) == 0) continue;
      mpq_class f = m[r][c];
      for (std::size_t k = c; k < width; ++k) m[r][k] -= f * m[pivot_row][k];
      rhs[r] -= f * rhs[pivot_row];
    }
    ++pivot_row;
  }
  for (int r = pivot_row; r < kGamma3Dim; ++r)
    if (!rhs[r].is_zero()) return std::nullopt;
  return std::vector<LogLinear>(rhs.begin(), rhs.begin() + static_cast<std::ptrdiff_t>(width));
}

// Calls visit(basis) for each size-r subset of `rays` with rank r, in
// lexicographic order; stops when visit returns true.
template <typename Visit>
void for_each_basis(const std::vector<Ray>& rays, int r, Visit&& visit) {
  const int total = static_cast<int>(rays.size());
  std::vector<int> idx(r);
  for (int k = 0; k < r; ++k) idx[k] = k;
  while (true) {
    std::vector<Ray> basis;
    std::vector<std::array<int, 7>> cols;
    for (int k : idx) {
      basis.push_back(rays[k]);
      cols.push_back(generator(rays[k]));
    }
    if (column_rank(cols) == r && visit(basis, cols)) return;
    int k = r - 1;
    while (k >= 0 && idx[k] == total - r + k) --k;
    if (k < 0) return;
    ++idx[k];
    for (int t = k + 1; t < r; ++t) idx[t] = idx[t - 1] + 1;
  }
}

std::optional<ConicCertificate> certificate_for(const std::vector<Ray>& all,
                                                const std::vector<Ray>& basis,
                                                const std::vector<std::array<int, 7>>& cols,
                                                const EntropyVector& h) {
  auto lambda = solve_basis(cols, h);
  if (!lambda) return std::nullopt;
  for (const auto& l : *lambda)
    if (sign(l) == Sign::negative) return std::nullopt;
  ConicCertificate cert;
  for (Ray r : all) cert.coefficients[r] = LogLinear{};
  for (std::size_t k = 0; k < basis.size(); ++k) cert.coefficients[basis[k]] = (*lambda)[k];
  return cert;
}

FaceSpec build_face(RaySet rays, bool canonical) {
  FaceSpec f;
  f.generators = rays;
  f.dim = rank(rays);
  f.canonical = canonical;
  std::set<RaySet> images;
  for (const auto& perm : all_permutations(3)) images.insert(permute_rays(rays, perm));
  f.orbit.assign(images.begin(), images.end());
  return f;
}

}  // namespace

std::string ElementalInequality::describe(int n) const {
  auto term_list = [&](int sign_wanted) {
    std::string out;
    for (Subset s : canonical_order(n)) {
      int c = coeffs[subset_index(n, s)];
      if (c * sign_wanted <= 0) continue;
      if (!out.empty()) out += " + ";
      out += h_name(s);
    }
    return out.empty() ? std::string("0") : out;
  };
  return term_list(+1) + " >= " + term_list(-1);
}

const std::vector<ElementalInequality>& elemental_inequalities(int n) {
  if (n < 1 || n > kMaxConeVariables)
    throw std::invalid_argument("elemental_inequalities: n must be in 1..6");
  static std::vector<ElementalInequality> cache[kMaxConeVariables + 1];
  static std::once_flag flags[kMaxConeVariables + 1];
  std::call_once(flags[n], [n] {
    const auto& order = canonical_order(n);
    const Subset full = full_set(n);
    auto blank = [&] { return std::vector<int>(order.size(), 0); };
    auto bump = [&](std::vector<int>& c, Subset s, int by) {
      if (s != 0) c[subset_index(n, s)] += by;
    };
    std::vector<ElementalInequality> out;
    for (int i = 1; i <= n; ++i) {
      ElementalInequality e;
      e.kind = ElementalInequality::Kind::monotonicity;
      e.i = i;
      e.coeffs = blank();
      bump(e.coeffs, full, +1);
      bump(e.coeffs, full & ~(Subset{1} << (i - 1)), -1);
      out.push_back(std::move(e));
    }
    for (int i = 1; i <= n; ++i) {
      for (int j = i + 1; j <= n; ++j) {
        const Subset bi = Subset{1} << (i - 1), bj = Subset{1} << (j - 1);
        const Subset rest = full & ~bi & ~bj;
        std::vector<Subset> betas{0};
        for (Subset s : order)
          if ((s & ~rest) == 0) betas.push_back(s);
        for (Subset beta : betas) {
          ElementalInequality e;
          e.kind = ElementalInequality::Kind::submodularity;
          e.i = i;
          e.j = j;
          e.beta = beta;
          e.coeffs = blank();
          bump(e.coeffs, bi | beta, +1);
          bump(e.coeffs, bj | beta, +1);
          bump(e.coeffs, beta, -1);
          bump(e.coeffs, bi | bj | beta, -1);
          out.push_back(std::move(e));
        }
      }
    }
    cache[n] = std::move(out);
  });
  return cache[n];
}

LogLinear evaluate(const ElementalInequality& ineq, const EntropyVector& h) {
  if (ineq.coeffs.size() != h.coords.size())
    throw std::invalid_argument("evaluate: inequality and vector have different n");
  LogLinear total;
  for (std::size_t k = 0; k < h.coords.size(); ++k)
    if (ineq.coeffs[k] != 0) total += mpq_class(ineq.coeffs[k]) * h.coords[k];
  return total;
}

GammaReport in_gamma_n(const EntropyVector& h) {
  GammaReport report;
  for (const auto& ineq : elemental_inequalities(h.n)) {
    LogLinear v = evaluate(ineq, h);
    if (sign(v) == Sign::negative) {
      report.member = false;
      report.violations.push_back({ineq, std::move(v)});
    }
  }
  return report;
}

std::string ray_name(Ray r) {
  return r == Ray::e123p ? "123p" : subset_name(ray_subset(r));
}

Ray parse_ray(const std::string& name) {
  std::string key = name;
  if (key.rfind("e", 0) == 0) key.erase(0, 1);
  if (key == "123'" ) key = "123p";
  for (Ray r : kAllRays)
    if (ray_name(r) == key) return r;
  throw std::invalid_argument("unknown generator '" + name + "'");
}

const std::array<int, 7>& generator(Ray r) {
  static const auto table = [] {
    std::array<std::array<int, 7>, 8> t{};
    const auto& order = canonical_order(3);
    for (Ray ray : kAllRays) {
      for (std::size_t k = 0; k < order.size(); ++k) {
        if (ray == Ray::e123p)
          t[static_cast<int>(ray)][k] = std::min(cardinality(order[k]), 2);
        else
          t[static_cast<int>(ray)][k] = (order[k] & ray_subset(ray)) ? 1 : 0;
      }
    }
    return t;
  }();
  return table[static_cast<int>(r)];
}

std::vector<Ray> RaySet::rays() const {
  std::vector<Ray> out;
  for (Ray r : kAllRays)
    if (contains(r)) out.push_back(r);
  return out;
}

std::string RaySet::str() const {
  std::string out;
  for (Ray r : rays()) out += (out.empty() ? "" : ",") + ray_name(r);
  return out;
}

RaySet parse_ray_set(const std::string& text) {
  RaySet s;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (item.empty()) continue;
    s.insert(parse_ray(item));
  }
  if (s.empty()) throw std::invalid_argument("empty generator list '" + text + "'");
  return s;
}

int rank(RaySet rays) {
  std::vector<std::array<int, 7>> cols;
  for (Ray r : rays.rays()) cols.push_back(generator(r));
  return column_rank(cols);
}

Ray permute_ray(Ray r, const std::vector<int>& perm) {
  if (r == Ray::e123 || r == Ray::e123p) return r;
  return ray_from_subset(permute_subset(ray_subset(r), perm));
}

RaySet permute_rays(RaySet s, const std::vector<int>& perm) {
  RaySet out;
  for (Ray r : s.rays()) out.insert(permute_ray(r, perm));
  return out;
}

EntropyVector combine(const std::map<Ray, LogLinear>& coefficients) {
  EntropyVector h = EntropyVector::zero(3);
  for (const auto& [ray, lambda] : coefficients) {
    const auto& g = generator(ray);
    for (std::size_t k = 0; k < g.size(); ++k)
      if (g[k] != 0) h.coords[k] += mpq_class(g[k]) * lambda;
  }
  return h;
}

std::optional<ConicCertificate> cone_membership(const EntropyVector& h, RaySet generators) {
  require_n3(h, "cone_membership");
  const auto rays = generators.rays();
  std::optional<ConicCertificate> found;
  for_each_basis(rays, rank(generators), [&](const auto& basis, const auto& cols) {
    found = certificate_for(rays, basis, cols, h);
    return found.has_value();
  });
  return found;
}

std::vector<ConicCertificate> conic_certificates(const EntropyVector& h, RaySet generators) {
  require_n3(h, "conic_certificates");
  const auto rays = generators.rays();
  std::vector<ConicCertificate> out;
  for_each_basis(rays, rank(generators), [&](const auto& basis, const auto& cols) {
    if (auto cert = certificate_for(rays, basis, cols, h)) {
      bool seen = std::any_of(out.begin(), out.end(), [&](const ConicCertificate& c) {
        return c.coefficients == cert->coefficients;
      });
      if (!seen) out.push_back(std::move(*cert));
    }
    return false;
  });
  return out;
}

std::string FaceSpec::name() const {
  std::string out = "cone(";
  bool first = true;
  for (Ray r : generators.rays()) {
    out += first ? "" : ",";
    out += r == Ray::e123p ? "e123'" : "e" + ray_name(r);
    first = false;
  }
  return out + ")";
}

std::vector<ElementalInequality> tight_inequalities(RaySet rays) {
  std::vector<ElementalInequality> out;
  for (const auto& ineq : elemental_inequalities(3)) {
    bool tight = true;
    for (Ray r : rays.rays()) tight = tight && evaluate_int(ineq, generator(r)) == 0;
    if (tight) out.push_back(ineq);
  }
  return out;
}

RaySet face_closure(RaySet rays) {
  const auto tight = tight_inequalities(rays);
  RaySet closure;
  for (Ray r : kAllRays) {
    bool on_all = std::all_of(tight.begin(), tight.end(), [&](const ElementalInequality& ineq) {
      return evaluate_int(ineq, generator(r)) == 0;
    });
    if (on_all) closure.insert(r);
  }
  return closure;
}

bool is_face(RaySet rays) { return face_closure(rays) == rays; }

const std::vector<FaceSpec>& face_catalogue() {
  static const std::vector<FaceSpec> catalogue = [] {
    using R = Ray;
    const std::vector<RaySet> listed = {
        // 1-D
        {R::e123p},
        // 2-D
        {R::e1, R::e123p},
        {R::e12, R::e123p},
        // 3-D
        {R::e1, R::e2, R::e123p},
        {R::e12, R::e13, R::e123p},
        {R::e1, R::e12, R::e123p},
        {R::e1, R::e23, R::e123p},
        // 4-D
        {R::e1, R::e2, R::e3, R::e123p},
        {R::e1, R::e2, R::e12, R::e123p},
        {R::e1, R::e2, R::e13, R::e123p},
        {R::e1, R::e12, R::e13, R::e123p},
        {R::e1, R::e12, R::e23, R::e123p},
        {R::e12, R::e13, R::e23, R::e123, R::e123p},
        // 5-D
        {R::e1, R::e2, R::e3, R::e12, R::e123p},
        {R::e1, R::e2, R::e12, R::e13, R::e123p},
        {R::e1, R::e2, R::e13, R::e23, R::e123p},
        {R::e1, R::e12, R::e13, R::e23, R::e123, R::e123p},
        // 6-D
        {R::e1, R::e2, R::e3, R::e12, R::e13, R::e123p},
        {R::e1, R::e2, R::e12, R::e13, R::e23, R::e123, R::e123p},
    };
    std::vector<FaceSpec> out;
    for (RaySet s : listed) out.push_back(build_face(s, true));
    return out;
  }();
  return catalogue;
}

FaceSpec make_face(RaySet rays) {
  for (const auto& f : face_catalogue())
    if (f.generators == rays) return f;
  return build_face(rays, false);
}

std::optional<FaceSpec> find_catalogued(RaySet rays) {
  for (const auto& f : face_catalogue()) {
    if (f.generators == rays) return f;
    if (std::find(f.orbit.begin(), f.orbit.end(), rays) != f.orbit.end())
      return build_face(rays, false);
  }
  return std::nullopt;
}

std::vector<FaceSpec> catalogued_subfaces(const FaceSpec& face) {
  std::vector<FaceSpec> out;
  for (const auto& f : face_catalogue())
    for (RaySet image : f.orbit)
      if (image.is_subset_of(face.generators) && !(image == face.generators))
        out.push_back(image == f.generators ? f : build_face(image, false));
  return out;
}

std::vector<RaySet> proper_subfaces(RaySet face) {
  std::vector<RaySet> out;
  for (unsigned bits = 1; bits < 256; ++bits) {
    RaySet s = RaySet::from_bits(static_cast<std::uint8_t>(bits));
    if (s.is_subset_of(face) && !(s == face) && is_face(s)) out.push_back(s);
  }
  std::sort(out.begin(), out.end(), [](RaySet a, RaySet b) {
    return a.size() != b.size() ? a.size() < b.size() : a < b;
  });
  return out;
}

RaySet minimal_face(const EntropyVector& h) {
  require_n3(h, "minimal_face");
  RaySet face;
  const auto& ineqs = elemental_inequalities(3);
  std::vector<const ElementalInequality*> tight_at_h;
  for (const auto& ineq : ineqs) {
    Sign s = sign(evaluate(ineq, h));
    if (s == Sign::negative) throw std::invalid_argument("minimal_face: vector is not in Gamma_3");
    if (s == Sign::zero) tight_at_h.push_back(&ineq);
  }
  for (Ray r : kAllRays) {
    bool on_all = std::all_of(tight_at_h.begin(), tight_at_h.end(), [&](const auto* ineq) {
      return evaluate_int(*ineq, generator(r)) == 0;
    });
    if (on_all) face.insert(r);
  }
  return face;
}

std::vector<Violation> face_obstructions(const EntropyVector& h, RaySet face) {
  require_n3(h, "face_obstructions");
  std::vector<Violation> out = in_gamma_n(h).violations;
  for (const auto& ineq : tight_inequalities(face)) {
    LogLinear v = evaluate(ineq, h);
    if (sign(v) == Sign::positive) out.push_back({ineq, std::move(v)});
  }
  return out;
}

std::string status_name(FacePosition::Status s) {
  switch (s) {
    case FacePosition::Status::strictly_inside: return "StrictlyInside";
    case FacePosition::Status::in_subface: return "InSubface";
    default: return "Outside";
  }
}

FacePosition strict_in_face(const EntropyVector& h, const FaceSpec& face) {
  require_n3(h, "strict_in_face");
  if (!is_face(face.generators))
    throw std::invalid_argument("strict_in_face: " + face.name() + " is not a face of Gamma_3");
  FacePosition pos;
  pos.certificate = cone_membership(h, face.generators);
  if (!pos.certificate) {
    pos.status = FacePosition::Status::outside;
    pos.obstructions = face_obstructions(h, face.generators);
    return pos;
  }
  RaySet smallest = minimal_face(h);
  if (smallest == face.generators) {
    pos.status = FacePosition::Status::strictly_inside;
  } else {
    pos.status = FacePosition::Status::in_subface;
    pos.subface = make_face(smallest);
  }
  return pos;
}

FacePosition strict_in_face(const EntropyVector& h, RaySet face) {
  return strict_in_face(h, make_face(face));
}

}  // namespace entroq
