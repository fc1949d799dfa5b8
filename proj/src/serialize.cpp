#include "entroq/serialize.hpp"

#include <regex>

namespace entroq {

namespace {

std::string subset_key(int n, Subset s) {
  check_variable_count(n);
  return subset_name(s);
}

int variables_for_length(std::size_t len) {
  for (int n = 1; n <= kMaxVariables; ++n)
    if ((std::size_t{1} << n) - 1 == len) return n;
  throw DataError("entropy vector: " + std::to_string(len) + " coordinates is not 2^n - 1");
}

mpq_class rational_field(const std::string& text, const std::string& where) {
  try {
    return parse_rational(text);
  } catch (const std::exception& e) {
    throw DataError(where + ": " + e.what());
  }
}

mpz_class positive_integer(const std::string& text, const std::string& where) {
  static const std::regex digits("[0-9]+");
  if (!std::regex_match(text, digits)) throw DataError(where + ": '" + text + "' is not a natural number");
  mpz_class z(text);
  if (z <= 0) throw DataError(where + ": argument of log must be positive");
  return z;
}

LogLinear parse_shorthand(const std::string& raw) {
  static const std::regex zero("\\s*0\\s*");
  static const std::regex shorthand("\\s*log\\s+([0-9]+)(?:\\s*/\\s*([0-9]+))?\\s*");
  if (std::regex_match(raw, zero)) return {};
  std::smatch m;
  if (!std::regex_match(raw, m, shorthand))
    throw DataError("coordinate '" + raw + "': expected \"log a\", \"log a/b\" or a log_terms object");
  mpz_class a = positive_integer(m[1].str(), "coordinate '" + raw + "'");
  mpz_class b = m[2].matched ? positive_integer(m[2].str(), "coordinate '" + raw + "'") : mpz_class(1);
  return from_log_rational(a, b);
}

}  // namespace

Json to_json(const LogLinear& v) {
  Json terms = Json::object();
  for (const auto& [p, q] : v.terms()) terms[std::to_string(p)] = rational_text(q);
  return Json{{"log_terms", terms}, {"bits_approx", approx(v, 4)}};
}

LogLinear log_linear_from_json(const Json& j) {
  if (j.is_string()) return parse_shorthand(j.get<std::string>());
  if (!j.is_object() || !j.contains("log_terms"))
    throw DataError("coordinate: expected a log_terms object or a \"log a/b\" string, got " + j.dump());
  const Json& terms = j.at("log_terms");
  if (!terms.is_object()) throw DataError("log_terms must be an object");
  LogLinear::Terms out;
  for (const auto& [key, value] : terms.items()) {
    mpz_class p = positive_integer(key, "log_terms key");
    if (!p.fits_ulong_p() || !is_prime(p.get_ui())) throw DataError("log_terms key " + key + " is not a prime");
    if (!value.is_string()) throw DataError("log_terms[" + key + "] must be a \"num/den\" string");
    out[p.get_ui()] = rational_field(value.get<std::string>(), "log_terms[" + key + "]");
  }
  return LogLinear::from_terms(out);
}

Json to_json(const EntropyVector& h) {
  Json order = Json::array(), coords = Json::array();
  for (Subset s : canonical_order(h.n)) order.push_back(subset_name(s));
  for (const auto& c : h.coords) coords.push_back(to_json(c));
  return Json{{"order", order}, {"coords", coords}};
}

EntropyVector entropy_vector_from_json(const Json& j) {
  if (j.is_object() && j.contains("entropy_vector")) return entropy_vector_from_json(j.at("entropy_vector"));
  const Json* coords = &j;
  if (j.is_object()) {
    if (!j.contains("coords")) throw DataError("vector file: object without \"coords\"");
    coords = &j.at("coords");
  }
  if (!coords->is_array()) throw DataError("vector file: coordinates must be an array");
  const int n = variables_for_length(coords->size());
  if (j.is_object() && j.contains("order")) {
    Json expected = Json::array();
    for (Subset s : canonical_order(n)) expected.push_back(subset_key(n, s));
    if (j.at("order") != expected) throw DataError("vector file: \"order\" is not the canonical order");
  }
  std::vector<LogLinear> values;
  for (const auto& c : *coords) values.push_back(log_linear_from_json(c));
  return EntropyVector(n, std::move(values));
}

Json face_json(RaySet rays) {
  Json out = Json::array();
  for (Ray r : rays.rays()) out.push_back(ray_name(r));
  return out;
}

Json to_json(const FaceSpec& face) {
  Json orbit = Json::array();
  for (RaySet s : face.orbit) orbit.push_back(face_json(s));
  return Json{{"name", face.name()},
              {"generators", face_json(face.generators)},
              {"dim", face.dim},
              {"canonical", face.canonical},
              {"orbit_size", face.orbit.size()},
              {"orbit", orbit}};
}

Json to_json(const ConicCertificate& c) {
  Json coeffs = Json::object();
  for (const auto& [r, v] : c.coefficients) coeffs[ray_name(r)] = to_json(v);
  return coeffs;
}

Json to_json(const Violation& v, int n) {
  return Json{{"inequality", v.inequality.describe(n)}, {"value", to_json(v.value)}};
}

Json to_json(const GammaReport& r, int n) {
  Json violations = Json::array();
  for (const auto& v : r.violations) violations.push_back(to_json(v, n));
  return Json{{"member", r.member}, {"violations", violations}};
}

Json to_json(const FacePosition& p) {
  Json out{{"status", status_name(p.status)}};
  if (p.certificate) out["certificate"] = to_json(*p.certificate);
  if (p.subface) out["subface"] = to_json(*p.subface);
  if (!p.obstructions.empty()) {
    Json obs = Json::array();
    for (const auto& v : p.obstructions) obs.push_back(to_json(v, 3));
    out["obstructions"] = obs;
  }
  return out;
}

Json to_json(const BoundVerdict& v) {
  Json conditions = Json::array();
  for (const auto& c : v.conditions)
    conditions.push_back(Json{{"name", c.name},
                              {"holds", c.holds},
                              {"relation", c.relation},
                              {"lhs", to_json(c.lhs)},
                              {"rhs", to_json(c.rhs)}});
  Json out{{"member", v.member}, {"in_face", v.decomposition.has_value()}, {"conditions", conditions}};
  if (v.decomposition) out["decomposition"] = to_json(*v.decomposition);
  return out;
}

namespace {

Json point_json(const Point& x) {
  Json out = Json::array();
  for (Symbol s : x) out.push_back(s);
  return out;
}

Json sizes_json(int n, const std::vector<std::uint64_t>& sizes) {
  Json m = Json::object();
  const auto& order = canonical_order(n);
  for (std::size_t i = 0; i < order.size(); ++i) m[subset_name(order[i])] = sizes[i];
  return m;
}

}  // namespace

Json to_json(const QUVerdict& v) {
  Json out{{"is_qu", v.is_qu}};
  if (v.support_sizes) out["support_sizes"] = sizes_json(v.support_sizes->n, v.support_sizes->sizes);
  if (v.witness) {
    const auto& w = *v.witness;
    out["witness"] = Json{{"alpha", subset_name(w.alpha)},
                          {"first", point_json(w.first)},
                          {"first_mass", rational_text(w.first_mass)},
                          {"second", point_json(w.second)},
                          {"second_mass", rational_text(w.second_mass)}};
  }
  return out;
}

Json to_json(const SupportSpec& spec) { return Json{{"n", spec.n}, {"m", sizes_json(spec.n, spec.m)}}; }

Json to_json(const StructuralHint& hint) {
  return Json{{"kind", hint.kind == StructuralHint::Kind::independent ? "independent" : "functional"},
              {"alpha", subset_name(hint.alpha)},
              {"beta", subset_name(hint.beta)},
              {"text", hint.describe()}};
}

Json to_json(const SearchOutcome& outcome) {
  Json out{{"status", status_name(outcome.status)}, {"nodes_explored", outcome.nodes_explored}};
  if (outcome.witness) out["witness_pmf"] = serialize_pmf(*outcome.witness);
  return out;
}

SupportSpec support_spec_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("n") || !j.contains("m"))
    throw DataError("spec file: expected {\"n\": ..., \"m\": {...}}");
  if (!j.at("n").is_number_integer()) throw DataError("spec file: n must be an integer");
  const int n = j.at("n").get<int>();
  if (n < 1 || n > kMaxVariables) throw DataError("spec file: n out of range");
  const Json& m = j.at("m");
  if (!m.is_object()) throw DataError("spec file: m must be an object");
  std::map<Subset, std::uint64_t> sizes;
  for (const auto& [key, value] : m.items()) {
    Subset s;
    try {
      s = parse_subset(key, n);
    } catch (const std::exception& e) {
      throw DataError("spec file: bad subset '" + key + "': " + e.what());
    }
    if (!value.is_number_unsigned() || value.get<std::uint64_t>() == 0)
      throw DataError("spec file: m[" + key + "] must be a positive integer");
    if (!sizes.emplace(s, value.get<std::uint64_t>()).second)
      throw DataError("spec file: duplicate subset '" + key + "'");
  }
  try {
    return SupportSpec::from_map(n, sizes);
  } catch (const std::invalid_argument& e) {
    throw DataError(e.what());
  }
}

Json parse_json_text(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw DataError(std::string("invalid JSON: ") + e.what());
  }
}

}  // namespace entroq
