#include "entroq/cli.hpp"

#include <fstream>
#include <sstream>

#include "CLI11.hpp"

#include "entroq/serialize.hpp"

namespace entroq {

namespace {

// Raised for unusable command-line values that CLI11 cannot check itself.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

JointPMF load_pmf(const std::string& path) {
  try {
    return parse_pmf(read_file(path));
  } catch (const PmfParseError& e) {
    throw DataError(path + ": " + e.what());
  }
}

EntropyVector load_vector(const std::string& path) {
  return entropy_vector_from_json(parse_json_text(read_file(path)));
}

EntropyVector load_vector3(const std::string& path) {
  auto h = load_vector(path);
  if (h.n != 3) throw DataError(path + ": this command needs a vector with n = 3");
  return h;
}

RaySet parse_face_name(std::string text) {
  if (text == "theta") return kTheta;
  if (text == "omega") return kOmega;
  if (text.rfind("cone(", 0) == 0 && text.back() == ')') text = text.substr(5, text.size() - 6);
  try {
    return parse_ray_set(text);
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("face: ") + e.what());
  }
}

Json bits_array(const EntropyVector& h) {
  Json bits = Json::array();
  for (const auto& c : h.coords) bits.push_back(approx(c, 4));
  return bits;
}

void emit(std::ostream& out, const Json& report) { out << report.dump(2) << '\n'; }

int cmd_entropy(const std::string& path, std::ostream& out) {
  auto h = entropy_vector(load_pmf(path));
  emit(out, Json{{"entropy_vector", to_json(h)}, {"bits", bits_array(h)}});
  return exit_code::ok;
}

int cmd_qu_check(const std::string& path, std::ostream& out) {
  auto verdict = is_quasi_uniform(load_pmf(path));
  emit(out, to_json(verdict));
  return verdict.is_qu ? exit_code::ok : exit_code::negative;
}

int cmd_gamma(const std::string& path, std::ostream& out) {
  auto h = load_vector(path);
  if (h.n > 6) throw DataError(path + ": Gamma_n membership supports n <= 6");
  auto report = in_gamma_n(h);
  emit(out, to_json(report, h.n));
  return report.member ? exit_code::ok : exit_code::negative;
}

int cmd_decompose(const std::string& path, const std::string& face, bool all, std::ostream& out) {
  auto h = load_vector3(path);
  RaySet rays = parse_face_name(face);
  Json report{{"generators", face_json(rays)}};
  bool member;
  if (all) {
    Json certs = Json::array();
    for (const auto& c : conic_certificates(h, rays)) certs.push_back(to_json(c));
    member = !certs.empty();
    report["member"] = member;
    report["certificates"] = certs;
  } else {
    auto cert = cone_membership(h, rays);
    member = cert.has_value();
    report["member"] = member;
    if (cert) report["certificate"] = to_json(*cert);
  }
  emit(out, report);
  return member ? exit_code::ok : exit_code::negative;
}

int cmd_face(const std::string& path, const std::string& face, std::ostream& out) {
  auto h = load_vector3(path);
  RaySet rays = parse_face_name(face);
  if (!is_face(rays)) throw UsageError("face: " + make_face(rays).name() + " is not a face of Gamma_3");
  auto position = strict_in_face(h, rays);
  Json report{{"face", to_json(make_face(rays))}};
  report.update(to_json(position));
  emit(out, report);
  return position.status == FacePosition::Status::strictly_inside ? exit_code::ok : exit_code::negative;
}

int cmd_inner(const std::string& path, const std::string& which, std::ostream& out) {
  auto h = load_vector3(path);
  BoundVerdict verdict;
  if (which == "theta")
    verdict = theta_in(h);
  else if (which == "omega")
    verdict = omega_in(h);
  else
    throw UsageError("inner: expected 'theta' or 'omega', got '" + which + "'");
  Json report{{"bound", which}};
  report.update(to_json(verdict));
  emit(out, report);
  return verdict.member ? exit_code::ok : exit_code::negative;
}

int cmd_spec(const std::string& path, std::ostream& out) {
  auto h = load_vector(path);
  Json report = Json::object();
  auto sizes = qu_necessary(h);
  if (!sizes) {
    report["log_naturals"] = false;
    emit(out, report);
    return exit_code::negative;
  }
  report["log_naturals"] = true;
  SupportSpec spec{sizes->n, sizes->sizes};
  auto feasibility = check_feasibility_necessary(spec);
  report["spec"] = to_json(spec);
  report["necessary_conditions"] = feasibility.ok;
  if (!feasibility.ok) report["violation"] = feasibility.violation;
  Json hints = Json::array();
  for (const auto& hint : structural_hints(h)) hints.push_back(to_json(hint));
  report["hints"] = hints;
  emit(out, report);
  return feasibility.ok ? exit_code::ok : exit_code::negative;
}

int cmd_search(const std::string& path, const SearchOptions& options, const std::string& witness_out,
               std::ostream& out) {
  auto spec = support_spec_from_json(parse_json_text(read_file(path)));
  if (spec.n > 4) throw DataError(path + ": search supports n <= 4");
  Json report{{"spec", to_json(spec)}};
  auto feasibility = check_feasibility_necessary(spec);
  if (!feasibility.ok) {
    report["status"] = "NecessaryConditionsFailed";
    report["violation"] = feasibility.violation;
    emit(out, report);
    return exit_code::negative;
  }
  SearchOutcome outcome;
  try {
    outcome = search(spec, options);
  } catch (const std::invalid_argument& e) {
    throw DataError(e.what());
  }
  report.update(to_json(outcome));
  if (outcome.witness && !witness_out.empty()) {
    std::ofstream file(witness_out, std::ios::binary);
    if (!(file << serialize_pmf(*outcome.witness))) throw DataError("cannot write '" + witness_out + "'");
  }
  emit(out, report);
  switch (outcome.status) {
    case SearchStatus::found: return exit_code::ok;
    case SearchStatus::exhausted_infeasible: return exit_code::negative;
    default: return exit_code::inconclusive;
  }
}

int cmd_catalog(std::ostream& out) {
  Json faces = Json::array();
  std::size_t total = 0;
  for (const auto& f : face_catalogue()) {
    faces.push_back(to_json(f));
    total += f.orbit.size();
  }
  emit(out, Json{{"count", faces.size()}, {"with_relabelings", total}, {"faces", faces}});
  return exit_code::ok;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact entropy vectors, polymatroid faces and quasi-uniform search", "entroq"};
  app.require_subcommand(1);
  app.fallthrough();
  bool json = true;
  app.add_flag("--json", json, "JSON report on standard output (the only mode)");

  std::string file, face, witness_out;
  bool all = false;
  SearchOptions options;
  std::uint64_t budget_nodes = options.budget.max_nodes;
  double budget_seconds = options.budget.wall_clock.count() / 1000.0;

  auto* entropy = app.add_subcommand("entropy", "Exact entropy vector of a PMF file");
  entropy->add_option("pmf", file, "PMF file")->required();
  auto* qu = app.add_subcommand("qu-check", "Quasi-uniformity of a PMF file");
  qu->add_option("pmf", file, "PMF file")->required();
  auto* gamma = app.add_subcommand("gamma", "Membership in the polymatroid cone");
  gamma->add_option("vector", file, "vector file")->required();
  auto* decompose = app.add_subcommand("decompose", "Nonnegative decomposition over a generator set");
  decompose->add_option("vector", file, "vector file")->required();
  decompose->add_option("face", face, "theta, omega or generators such as 1,2,123p")->required();
  decompose->add_flag("--all", all, "list every basic certificate");
  auto* face_cmd = app.add_subcommand("face", "Relative-interior test for a face of Gamma_3");
  face_cmd->add_option("vector", file, "vector file")->required();
  face_cmd->add_option("face", face, "theta, omega or generators such as 1,2,123p")->required();
  auto* inner = app.add_subcommand("inner", "Inner-bound membership");
  inner->add_option("vector", file, "vector file")->required();
  inner->add_option("bound", face, "theta or omega")->required();
  auto* spec = app.add_subcommand("spec", "Support sizes and hints implied by a vector");
  spec->add_option("vector", file, "vector file")->required();
  auto* search_cmd = app.add_subcommand("search", "Search for a quasi-uniform realization");
  search_cmd->add_option("spec", file, "spec file")->required();
  search_cmd->add_option("--budget-nodes", budget_nodes, "node limit")->check(CLI::PositiveNumber);
  search_cmd->add_option("--budget-seconds", budget_seconds, "wall-clock limit")->check(CLI::PositiveNumber);
  search_cmd->add_flag("--deterministic,!--parallel", options.deterministic, "single-threaded reproducible search");
  search_cmd->add_option("--threads", options.threads, "worker threads for --parallel (0: all cores)");
  search_cmd->add_flag("--no-hints", "do not propagate structural hints");
  search_cmd->add_option("--witness-out", witness_out, "also write the witness PMF to this file");
  auto* catalog = app.add_subcommand("catalog", "The catalogued faces of Gamma_3");

  std::vector<const char*> argv{"entroq"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return exit_code::usage;
  }
  options.use_hints = search_cmd->count("--no-hints") == 0;
  options.budget.max_nodes = budget_nodes;
  options.budget.wall_clock = std::chrono::milliseconds(static_cast<std::int64_t>(budget_seconds * 1000.0));

  try {
    if (*entropy) return cmd_entropy(file, out);
    if (*qu) return cmd_qu_check(file, out);
    if (*gamma) return cmd_gamma(file, out);
    if (*decompose) return cmd_decompose(file, face, all, out);
    if (*face_cmd) return cmd_face(file, face, out);
    if (*inner) return cmd_inner(file, face, out);
    if (*spec) return cmd_spec(file, out);
    if (*search_cmd) return cmd_search(file, options, witness_out, out);
    if (*catalog) return cmd_catalog(out);
  } catch (const UsageError& e) {
    err << "entroq: " << e.what() << '\n';
    return exit_code::usage;
  } catch (const DataError& e) {
    err << "entroq: " << e.what() << '\n';
    return exit_code::data;
  } catch (const std::invalid_argument& e) {
    err << "entroq: " << e.what() << '\n';
    return exit_code::data;
  }
  return exit_code::usage;
}

}  // namespace entroq
