#pragma once

// JSON forms of the exact values and reports, and the vector / spec input
// files read by the command-line tool.

#include <stdexcept>
#include <string>

#include "json.hpp"

#include "entroq/bounds.hpp"
#include "entroq/distributions.hpp"
#include "entroq/logexact.hpp"
#include "entroq/polycone.hpp"
#include "entroq/qusearch.hpp"

namespace entroq {

using Json = nlohmann::ordered_json;

/// Malformed or out-of-domain input data.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// {"log_terms": {"2": "3/1"}, "bits_approx": "4.2170"}
Json to_json(const LogLinear& v);

/// Accepts the object form (bits_approx ignored) or the strings "0",
/// "log a" and "log a/b". Numbers and decimals are rejected.
LogLinear log_linear_from_json(const Json& j);

/// {"order": ["1", ..., "123"], "coords": [...]}
Json to_json(const EntropyVector& h);

/// An array of coordinates, or an object with "coords" (and optionally an
/// "order" echo that must match the canonical order), possibly nested under
/// "entropy_vector".
EntropyVector entropy_vector_from_json(const Json& j);

/// Sorted generator names, e.g. ["1","2","3","123p"].
Json face_json(RaySet rays);
Json to_json(const FaceSpec& face);
Json to_json(const ConicCertificate& c);
Json to_json(const Violation& v, int n);
Json to_json(const GammaReport& r, int n);
Json to_json(const FacePosition& p);
Json to_json(const BoundVerdict& v);
Json to_json(const QUVerdict& v);
Json to_json(const SupportSpec& spec);
Json to_json(const StructuralHint& hint);

/// Status, node count and the witness in the PMF text format. Elapsed time is
/// left out so reports are reproducible.
Json to_json(const SearchOutcome& outcome);

/// {"n": 3, "m": {"1": 4, ..., "123": 48}}
SupportSpec support_spec_from_json(const Json& j);

/// Parses text as JSON, mapping parse failures to DataError.
Json parse_json_text(const std::string& text);

}  // namespace entroq
