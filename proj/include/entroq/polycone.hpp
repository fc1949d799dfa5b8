#pragma once

// The polymatroid cone Gamma_n (elemental inequalities) and the extreme-ray /
// face geometry of Gamma_3: exact conic certificates, the catalogue of faces
// that contain non-entropic vectors, and relative-interior tests.

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "entroq/distributions.hpp"
#include "entroq/logexact.hpp"

namespace entroq {

// ---------------------------------------------------------------------------
// Elemental inequalities

struct ElementalInequality {
  enum class Kind { monotonicity, submodularity };
  Kind kind = Kind::monotonicity;
  int i = 0;        // 1-based
  int j = 0;        // submodularity only
  Subset beta = 0;  // submodularity only
  /// Integer coefficients over the 2^n - 1 coordinates (h_empty = 0 dropped).
  std::vector<int> coeffs;

  /// e.g. "h123 >= h12" or "h13 + h23 >= h3 + h123".
  std::string describe(int n) const;
};

/// n monotonicity functionals h_[n] - h_[n]\i, then C(n,2) 2^(n-2)
/// submodularity functionals h_ib + h_jb - h_b - h_ijb. 1 <= n <= 6.
const std::vector<ElementalInequality>& elemental_inequalities(int n);

LogLinear evaluate(const ElementalInequality& ineq, const EntropyVector& h);

struct Violation {
  ElementalInequality inequality;
  LogLinear value;  // functional evaluated at h
};

struct GammaReport {
  bool member = true;
  std::vector<Violation> violations;  // every violated functional, in order
};

GammaReport in_gamma_n(const EntropyVector& h);

// ---------------------------------------------------------------------------
// Extreme rays of Gamma_3

enum class Ray : std::uint8_t { e1, e2, e3, e12, e13, e23, e123, e123p };

inline constexpr std::array<Ray, 8> kAllRays = {Ray::e1,  Ray::e2,  Ray::e3,   Ray::e12,
                                               Ray::e13, Ray::e23, Ray::e123, Ray::e123p};

/// "1", "2", "3", "12", "13", "23", "123", "123p".
std::string ray_name(Ray r);
Ray parse_ray(const std::string& name);

/// Integer generator vector in the h1,h2,h3,h12,h13,h23,h123 layout.
const std::array<int, 7>& generator(Ray r);

/// A set of rays, stored as an 8-bit mask in Ray order.
class RaySet {
 public:
  constexpr RaySet() = default;
  constexpr RaySet(std::initializer_list<Ray> rays) {
    for (Ray r : rays) bits_ |= bit(r);
  }
  static constexpr RaySet from_bits(std::uint8_t bits) {
    RaySet s;
    s.bits_ = bits;
    return s;
  }

  constexpr bool contains(Ray r) const { return bits_ & bit(r); }
  constexpr void insert(Ray r) { bits_ |= bit(r); }
  constexpr std::uint8_t bits() const { return bits_; }
  constexpr bool empty() const { return bits_ == 0; }
  int size() const { return __builtin_popcount(bits_); }
  constexpr bool is_subset_of(RaySet o) const { return (bits_ & ~o.bits_) == 0; }

  /// Members in Ray order.
  std::vector<Ray> rays() const;
  /// e.g. ["1","2","3","123p"] joined: "1,2,3,123p".
  std::string str() const;

  friend constexpr bool operator==(RaySet a, RaySet b) { return a.bits_ == b.bits_; }
  friend constexpr bool operator<(RaySet a, RaySet b) { return a.bits_ < b.bits_; }

 private:
  static constexpr std::uint8_t bit(Ray r) { return std::uint8_t(1u << static_cast<int>(r)); }
  std::uint8_t bits_ = 0;
};

/// "1,2,123p" -> RaySet; throws std::invalid_argument on unknown names.
RaySet parse_ray_set(const std::string& text);

inline constexpr RaySet kAllGenerators = RaySet::from_bits(0xff);
inline constexpr RaySet kTheta = {Ray::e1, Ray::e2, Ray::e3, Ray::e123p};
inline constexpr RaySet kOmega = {Ray::e1, Ray::e2, Ray::e3, Ray::e12, Ray::e123p};

/// Rank of the generator matrix of the set.
int rank(RaySet rays);

/// Image of a ray when variable i is renamed perm[i-1].
Ray permute_ray(Ray r, const std::vector<int>& perm);
RaySet permute_rays(RaySet s, const std::vector<int>& perm);

/// sum_j lambda_j e_j.
EntropyVector combine(const std::map<Ray, LogLinear>& coefficients);

// ---------------------------------------------------------------------------
// Conic certificates

struct ConicCertificate {
  std::map<Ray, LogLinear> coefficients;  // one entry per generator of the cone, all >= 0

  EntropyVector recompose() const { return combine(coefficients); }
  const LogLinear& operator[](Ray r) const { return coefficients.at(r); }
};

/// A nonnegative exact decomposition of h over the generators, or empty.
/// Bases of span(generators) are tried in lexicographic order of their sorted
/// ray sequences; the first all-nonnegative solution is returned.
std::optional<ConicCertificate> cone_membership(const EntropyVector& h, RaySet generators);

/// Every distinct nonnegative basic solution (the exhaustive variant).
std::vector<ConicCertificate> conic_certificates(const EntropyVector& h, RaySet generators);

// ---------------------------------------------------------------------------
// Faces of Gamma_3

struct FaceSpec {
  RaySet generators;
  int dim = 0;
  bool canonical = false;      // one of the catalogued representatives
  std::vector<RaySet> orbit;   // distinct images under relabeling of variables

  /// "cone(e1,e2,e3,e123')".
  std::string name() const;
};

/// Elemental functionals of Gamma_3 vanishing on every generator in the set.
std::vector<ElementalInequality> tight_inequalities(RaySet rays);

/// Smallest face of Gamma_3 containing cone(rays), as its set of extreme rays.
RaySet face_closure(RaySet rays);

/// True iff cone(rays) is a face of Gamma_3 with exactly these extreme rays.
bool is_face(RaySet rays);

/// FaceSpec for any generator set (dim, orbit, canonical flag filled in).
FaceSpec make_face(RaySet rays);

/// The 19 proper faces of Gamma_3 that contain non-entropic vectors, one
/// representative per relabeling orbit, ordered by dimension.
const std::vector<FaceSpec>& face_catalogue();

/// Catalogue entry (canonical or orbit image) with exactly these generators.
std::optional<FaceSpec> find_catalogued(RaySet rays);

/// Catalogued faces and orbit images strictly contained in the face.
std::vector<FaceSpec> catalogued_subfaces(const FaceSpec& face);

/// Faces of Gamma_3 strictly contained in the given face, from the lattice.
std::vector<RaySet> proper_subfaces(RaySet face);

/// Smallest face of Gamma_3 containing h; requires h in Gamma_3.
RaySet minimal_face(const EntropyVector& h);

/// Reasons h is not in cone(face): violated elemental inequalities, and
/// functionals tight on the face that are nonzero at h.
std::vector<Violation> face_obstructions(const EntropyVector& h, RaySet face);

struct FacePosition {
  enum class Status { strictly_inside, in_subface, outside };
  Status status = Status::outside;
  std::optional<ConicCertificate> certificate;  // set unless outside
  std::optional<FaceSpec> subface;              // smallest face containing h, for in_subface
  std::vector<Violation> obstructions;          // for outside
};

std::string status_name(FacePosition::Status s);

/// Relative-interior test. Requires is_face(face.generators).
FacePosition strict_in_face(const EntropyVector& h, const FaceSpec& face);
FacePosition strict_in_face(const EntropyVector& h, RaySet face);

}  // namespace entroq
