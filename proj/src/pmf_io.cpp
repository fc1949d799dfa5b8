#include <algorithm>
#include <sstream>

#include "entroq/distributions.hpp"

namespace entroq {

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) out.push_back(trim(item));
  return out;
}

bool parse_uint(const std::string& s, std::uint64_t& out) {
  if (s.empty() || s.size() > 18) return false;
  out = 0;
  for (char c : s) {
    if (c < '0' || c > '9') return false;
    out = out * 10 + static_cast<std::uint64_t>(c - '0');
  }
  return true;
}

using Kind = PmfParseError::Kind;

}  // namespace

PmfParseError::PmfParseError(Kind kind, std::size_t line, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ": " + what), kind_(kind), line_(line) {}

JointPMF parse_pmf(const std::string& text) {
  std::istringstream in(text);
  std::string raw;
  std::size_t line_no = 0;
  bool have_header = false;
  int n = 0;
  std::vector<std::uint32_t> sizes;
  std::vector<std::vector<std::string>> names;
  JointPMF::MassMap mass;
  mpq_class total = 0;

  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = trim(raw.substr(0, raw.find('#')));
    if (line.empty()) continue;

    if (!have_header) {
      std::istringstream words(line);
      std::string tag, n_field, sizes_field, extra;
      words >> tag >> n_field >> sizes_field;
      std::uint64_t parsed_n = 0;
      if (tag != "pmf" || n_field.rfind("n=", 0) != 0 || sizes_field.rfind("sizes=", 0) != 0 ||
          (words >> extra) || !parse_uint(n_field.substr(2), parsed_n) || parsed_n < 1 ||
          parsed_n > static_cast<std::uint64_t>(kMaxVariables))
        throw PmfParseError(Kind::malformed_header, line_no,
                            "expected header 'pmf n=<n> sizes=<s1>,...,<sn>'");
      n = static_cast<int>(parsed_n);
      for (const auto& s : split(sizes_field.substr(6), ',')) {
        std::uint64_t v = 0;
        if (!parse_uint(s, v) || v == 0 || v > 0xffffffffu)
          throw PmfParseError(Kind::malformed_header, line_no, "bad alphabet size '" + s + "'");
        sizes.push_back(static_cast<std::uint32_t>(v));
      }
      if (static_cast<int>(sizes.size()) != n)
        throw PmfParseError(Kind::malformed_header, line_no,
                            "header lists " + std::to_string(sizes.size()) + " sizes for n=" +
                                std::to_string(n));
      names.assign(n, {});
      have_header = true;
      continue;
    }

    if (line.rfind("names", 0) == 0 && line.find(':') == std::string::npos) {
      std::string rest = trim(line.substr(5));
      auto eq = rest.find('=');
      std::uint64_t var = 0;
      if (eq == std::string::npos || !parse_uint(trim(rest.substr(0, eq)), var) || var < 1 ||
          var > static_cast<std::uint64_t>(n))
        throw PmfParseError(Kind::bad_names, line_no, "expected 'names <i>=<sym>,<sym>,...'");
      auto list = split(rest.substr(eq + 1), ',');
      if (list.size() != sizes[var - 1])
        throw PmfParseError(Kind::bad_names, line_no,
                            "variable " + std::to_string(var) + " needs " +
                                std::to_string(sizes[var - 1]) + " names");
      for (std::size_t i = 0; i < list.size(); ++i) {
        if (list[i].empty() || list[i].find_first_of(" \t:") != std::string::npos)
          throw PmfParseError(Kind::bad_names, line_no, "invalid symbol name '" + list[i] + "'");
        for (std::size_t j = 0; j < i; ++j)
          if (list[i] == list[j])
            throw PmfParseError(Kind::bad_names, line_no, "repeated symbol name '" + list[i] + "'");
      }
      if (!mass.empty())
        throw PmfParseError(Kind::bad_names, line_no, "names must precede support points");
      names[var - 1] = std::move(list);
      continue;
    }

    auto colon = line.find(':');
    if (colon == std::string::npos)
      throw PmfParseError(Kind::malformed_line, line_no, "expected '<x1> ... <xn> : <num>/<den>'");
    std::istringstream tokens(line.substr(0, colon));
    std::vector<std::string> symbols;
    for (std::string t; tokens >> t;) symbols.push_back(t);
    if (static_cast<int>(symbols.size()) != n)
      throw PmfParseError(Kind::malformed_line, line_no,
                          "expected " + std::to_string(n) + " symbols, got " +
                              std::to_string(symbols.size()));
    Point point(n);
    for (int i = 0; i < n; ++i) {
      if (!names[i].empty()) {
        auto it = std::find(names[i].begin(), names[i].end(), symbols[i]);
        if (it == names[i].end())
          throw PmfParseError(Kind::symbol_out_of_range, line_no,
                              "unknown symbol '" + symbols[i] + "' for variable " +
                                  std::to_string(i + 1));
        point[i] = static_cast<Symbol>(it - names[i].begin());
      } else {
        std::uint64_t v = 0;
        if (!parse_uint(symbols[i], v))
          throw PmfParseError(Kind::malformed_line, line_no, "bad symbol index '" + symbols[i] + "'");
        if (v >= sizes[i])
          throw PmfParseError(Kind::symbol_out_of_range, line_no,
                              "symbol " + symbols[i] + " out of range for variable " +
                                  std::to_string(i + 1));
        point[i] = static_cast<Symbol>(v);
      }
    }
    std::string prob_text = trim(line.substr(colon + 1));
    mpq_class p;
    try {
      p = parse_rational(prob_text);
    } catch (const std::invalid_argument&) {
      throw PmfParseError(Kind::bad_probability, line_no,
                          "probability '" + prob_text + "' is not an exact fraction");
    }
    if (sgn(p) <= 0 || p > 1)
      throw PmfParseError(Kind::bad_probability, line_no, "probability must be in (0, 1]");
    if (!mass.emplace(point, p).second)
      throw PmfParseError(Kind::duplicate_tuple, line_no, "duplicate support point");
    total += p;
  }

  if (!have_header) throw PmfParseError(Kind::malformed_header, line_no, "missing 'pmf' header");
  if (total != 1)
    throw PmfParseError(Kind::mass_sum, line_no, "mass sum " + rational_text(total) + " != 1");

  bool any_names = false;
  for (const auto& v : names) any_names = any_names || !v.empty();
  if (!any_names) names.clear();
  return JointPMF(std::move(sizes), std::move(mass), std::move(names));
}

std::string serialize_pmf(const JointPMF& pmf) {
  std::ostringstream out;
  out << "pmf n=" << pmf.n() << " sizes=";
  for (int i = 0; i < pmf.n(); ++i) out << (i ? "," : "") << pmf.alphabet_sizes()[i];
  out << '\n';
  const auto& names = pmf.symbol_names();
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i].empty()) continue;
    out << "names " << i + 1 << '=';
    for (std::size_t k = 0; k < names[i].size(); ++k) out << (k ? "," : "") << names[i][k];
    out << '\n';
  }
  for (const auto& [point, p] : pmf.mass()) {
    for (int i = 0; i < pmf.n(); ++i) {
      if (i) out << ' ';
      if (!names.empty() && !names[i].empty())
        out << names[i][point[i]];
      else
        out << point[i];
    }
    out << " : " << rational_text(p) << '\n';
  }
  return out.str();
}

}  // namespace entroq
