#include "entroq/qusearch.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "entroq/bounds.hpp"
#include "entroq/polycone.hpp"

namespace entroq {

namespace {

constexpr int kMaxSearchVariables = 4;
constexpr std::size_t kMaxGridCells = std::size_t{1} << 20;
constexpr std::uint64_t kClockStride = 1024;

using Clock = std::chrono::steady_clock;

std::vector<std::uint32_t> alphabet_of(const SupportSpec& spec) {
  std::vector<std::uint32_t> sizes;
  for (int i = 1; i <= spec.n; ++i) sizes.push_back(static_cast<std::uint32_t>(spec.at(Subset{1} << (i - 1))));
  return sizes;
}

std::size_t grid_cells(const std::vector<std::uint32_t>& sizes) {
  std::size_t cells = 1;
  for (auto s : sizes) {
    if (cells > kMaxGridCells / s) return kMaxGridCells + 1;
    cells *= s;
  }
  return cells;
}

// Static description of the search space: cells in exploration order, and
// one fiber family per nonempty subset.
struct Model {
  int n = 0;
  std::uint64_t joint = 0;
  std::vector<std::uint32_t> sizes;   // per variable
  std::vector<int> axis_order;        // variables, slowest first (0-based)
  std::size_t cells = 0;
  std::vector<Point> coords;          // per cell, in variable order

  std::vector<Subset> families;       // all nonempty subsets
  std::vector<std::uint64_t> quota;   // joint / m_alpha
  std::vector<std::uint64_t> target;  // m_alpha
  std::vector<std::size_t> offset;    // into flat fiber arrays
  std::size_t total_fibers = 0;
  std::vector<std::uint32_t> fiber_of;      // cells x families
  std::vector<std::uint32_t> fiber_cells;   // cells per fiber

  struct Functional {
    std::size_t alpha, joined;  // family indices
  };
  struct Independent {
    std::size_t alpha, beta, joined;
  };
  std::vector<Functional> functional;
  std::vector<Independent> independent;

  std::size_t family(Subset s) const {
    return static_cast<std::size_t>(std::find(families.begin(), families.end(), s) - families.begin());
  }
  std::uint32_t fiber(std::size_t cell, std::size_t k) const { return fiber_of[cell * families.size() + k]; }
};

Model build_model(const SupportSpec& spec, bool use_hints) {
  Model m;
  m.n = spec.n;
  m.joint = spec.joint();
  m.sizes = alphabet_of(spec);
  m.cells = grid_cells(m.sizes);
  if (m.cells > kMaxGridCells) throw std::invalid_argument("search: grid too large");

  // The fastest axis is the one whose complementary fiber is least filled,
  // so exclusions are forced early within each row.
  std::vector<double> fill(m.n, 1.0);
  for (int v = 0; v < m.n; ++v) {
    Subset rest = full_set(m.n) & ~(Subset{1} << v);
    double q = rest ? static_cast<double>(m.joint) / static_cast<double>(spec.at(rest))
                    : static_cast<double>(m.joint);
    fill[v] = q / m.sizes[v];
  }
  m.axis_order.resize(m.n);
  std::iota(m.axis_order.begin(), m.axis_order.end(), 0);
  std::stable_sort(m.axis_order.begin(), m.axis_order.end(),
                   [&](int a, int b) { return fill[a] > fill[b]; });

  m.coords.reserve(m.cells);
  Point x(m.n, 0);
  for (std::size_t c = 0; c < m.cells; ++c) {
    m.coords.push_back(x);
    for (int k = m.n - 1; k >= 0; --k) {
      int v = m.axis_order[k];
      if (++x[v] < m.sizes[v]) break;
      x[v] = 0;
    }
  }

  m.families = canonical_order(m.n);
  for (Subset s : m.families) {
    m.quota.push_back(m.joint / spec.at(s));
    m.target.push_back(spec.at(s));
    m.offset.push_back(m.total_fibers);
    std::size_t count = 1;
    for (int v : elements(s)) count *= m.sizes[v - 1];
    m.total_fibers += count;
  }
  m.fiber_cells.assign(m.total_fibers, 0);
  m.fiber_of.resize(m.cells * m.families.size());
  for (std::size_t c = 0; c < m.cells; ++c) {
    for (std::size_t k = 0; k < m.families.size(); ++k) {
      std::size_t idx = 0;
      for (int v : elements(m.families[k])) idx = idx * m.sizes[v - 1] + m.coords[c][v - 1];
      auto f = static_cast<std::uint32_t>(m.offset[k] + idx);
      m.fiber_of[c * m.families.size() + k] = f;
      ++m.fiber_cells[f];
    }
  }

  if (use_hints) {
    for (const auto& hint : structural_hints(spec)) {
      std::size_t a = m.family(hint.alpha), j = m.family(hint.alpha | hint.beta);
      if (hint.kind == StructuralHint::Kind::functional)
        m.functional.push_back({a, j});
      else
        m.independent.push_back({a, m.family(hint.beta), j});
    }
  }
  return m;
}

struct Shared {
  std::uint64_t max_nodes = 0;
  Clock::time_point deadline;
  std::atomic<std::uint64_t> nodes{0};
  std::atomic<bool> stop{false};
  std::atomic<bool> budget_hit{false};
};

class Engine {
 public:
  enum class Result { found, exhausted, aborted };

  Engine(const Model& model, Shared& shared)
      : m_(&model),
        shared_(&shared),
        cnt_(model.total_fibers, 0),
        rem_(model.fiber_cells),
        opened_(model.families.size(), 0),
        openable_(model.families.size(), 0),
        used_(model.n),
        choice_(model.functional.size()) {
    for (std::size_t k = 0; k < model.families.size(); ++k) {
      std::size_t end = k + 1 < model.families.size() ? model.offset[k + 1] : model.total_fibers;
      for (std::size_t f = model.offset[k]; f < end; ++f)
        if (rem_[f] >= model.quota[k]) ++openable_[k];
    }
    for (int v = 0; v < model.n; ++v) used_[v].assign(model.sizes[v], 0);
    for (std::size_t h = 0; h < model.functional.size(); ++h) {
      const auto k = model.functional[h].alpha;
      std::size_t end = k + 1 < model.families.size() ? model.offset[k + 1] : model.total_fibers;
      choice_[h].assign(end - model.offset[k], kNone);
    }
  }

  bool consistent_start() const {
    for (std::size_t k = 0; k < m_->families.size(); ++k)
      if (opened_[k] + openable_[k] < m_->target[k]) return false;
    return true;
  }

  Result run() { return dfs(); }

  /// Partial states at the given depth, in exploration order.
  void frontier(std::size_t depth, std::vector<Engine>& out) {
    if (included_ == m_->joint || pos_ == depth || pos_ == m_->cells) {
      out.push_back(*this);
      return;
    }
    const std::size_t c = pos_;
    if (can_include(c)) {
      include(c);
      frontier(depth, out);
      undo_include(c);
    }
    if (can_exclude(c)) {
      exclude(c);
      frontier(depth, out);
      undo_exclude(c);
    }
  }

  const std::vector<std::size_t>& chosen() const { return chosen_; }

 private:
  static constexpr std::uint32_t kNone = 0xffffffffu;

  Result dfs() {
    if (included_ == m_->joint) return Result::found;
    if (pos_ == m_->cells) return Result::exhausted;
    if (shared_->stop.load(std::memory_order_relaxed)) return Result::aborted;
    std::uint64_t count = shared_->nodes.fetch_add(1, std::memory_order_relaxed) + 1;
    if (count > shared_->max_nodes ||
        (count % kClockStride == 0 && Clock::now() > shared_->deadline)) {
      shared_->budget_hit = true;
      shared_->stop = true;
      return Result::aborted;
    }

    const std::size_t c = pos_;
    if (can_include(c)) {
      include(c);
      Result r = dfs();
      if (r != Result::exhausted) return r;
      undo_include(c);
    }
    if (can_exclude(c)) {
      exclude(c);
      Result r = dfs();
      if (r != Result::exhausted) return r;
      undo_exclude(c);
    }
    return Result::exhausted;
  }

  bool can_include(std::size_t c) const {
    const Model& m = *m_;
    for (std::size_t k = 0; k < m.families.size(); ++k) {
      std::uint32_t f = m.fiber(c, k);
      if (cnt_[f] == m.quota[k]) return false;
      if (cnt_[f] == 0 && (opened_[k] == m.target[k] || rem_[f] < m.quota[k])) return false;
    }
    // Value precedence: symbol s of a non-leading axis needs s-1 already used.
    for (int k = 1; k < m.n; ++k) {
      int v = m.axis_order[k];
      Symbol s = m.coords[c][v];
      if (s > 0 && used_[v][s - 1] == 0) return false;
    }
    for (std::size_t h = 0; h < m.functional.size(); ++h) {
      const auto& hint = m.functional[h];
      std::uint32_t slot = m.fiber(c, hint.alpha) - static_cast<std::uint32_t>(m.offset[hint.alpha]);
      if (choice_[h][slot] != kNone && choice_[h][slot] != m.fiber(c, hint.joined)) return false;
    }
    return true;
  }

  void include(std::size_t c) {
    const Model& m = *m_;
    for (std::size_t h = 0; h < m.functional.size(); ++h) {
      const auto& hint = m.functional[h];
      std::uint32_t fa = m.fiber(c, hint.alpha);
      if (cnt_[fa] == 0) choice_[h][fa - m.offset[hint.alpha]] = m.fiber(c, hint.joined);
    }
    for (std::size_t k = 0; k < m.families.size(); ++k) {
      std::uint32_t f = m.fiber(c, k);
      if (cnt_[f]++ == 0) {
        ++opened_[k];
        --openable_[k];
      }
      --rem_[f];
    }
    for (int v = 0; v < m.n; ++v) ++used_[v][m.coords[c][v]];
    ++included_;
    ++pos_;
    chosen_.push_back(c);
  }

  void undo_include(std::size_t c) {
    const Model& m = *m_;
    chosen_.pop_back();
    --pos_;
    --included_;
    for (int v = 0; v < m.n; ++v) --used_[v][m.coords[c][v]];
    for (std::size_t k = 0; k < m.families.size(); ++k) {
      std::uint32_t f = m.fiber(c, k);
      ++rem_[f];
      if (--cnt_[f] == 0) {
        --opened_[k];
        ++openable_[k];
      }
    }
    for (std::size_t h = 0; h < m.functional.size(); ++h) {
      const auto& hint = m.functional[h];
      std::uint32_t fa = m.fiber(c, hint.alpha);
      if (cnt_[fa] == 0) choice_[h][fa - m.offset[hint.alpha]] = kNone;
    }
  }

  // Closed fiber f of family k would drop below its quota of reachable cells.
  bool loses_openability(std::uint32_t f, std::size_t k) const {
    return cnt_[f] == 0 && rem_[f] == m_->quota[k];
  }

  bool can_exclude(std::size_t c) const {
    const Model& m = *m_;
    for (std::size_t k = 0; k < m.families.size(); ++k) {
      std::uint32_t f = m.fiber(c, k);
      if (cnt_[f] > 0) {
        if (cnt_[f] + rem_[f] - 1 < m.quota[k]) return false;
      } else if (rem_[f] == m.quota[k] && opened_[k] + openable_[k] - 1 < m.target[k]) {
        return false;
      }
    }
    for (const auto& hint : m.independent) {
      std::uint32_t fj = m.fiber(c, hint.joined);
      if (loses_openability(fj, hint.joined) && cnt_[m.fiber(c, hint.alpha)] > 0 &&
          cnt_[m.fiber(c, hint.beta)] > 0)
        return false;
    }
    return true;
  }

  void exclude(std::size_t c) {
    const Model& m = *m_;
    for (std::size_t k = 0; k < m.families.size(); ++k) {
      std::uint32_t f = m.fiber(c, k);
      if (loses_openability(f, k)) --openable_[k];
      --rem_[f];
    }
    ++pos_;
  }

  void undo_exclude(std::size_t c) {
    const Model& m = *m_;
    --pos_;
    for (std::size_t k = 0; k < m.families.size(); ++k) {
      std::uint32_t f = m.fiber(c, k);
      ++rem_[f];
      if (loses_openability(f, k)) ++openable_[k];
    }
  }

  const Model* m_;
  Shared* shared_;
  std::vector<std::uint64_t> cnt_;
  std::vector<std::uint32_t> rem_;
  std::vector<std::uint64_t> opened_;
  std::vector<std::uint64_t> openable_;
  std::vector<std::vector<std::uint32_t>> used_;
  std::vector<std::vector<std::uint32_t>> choice_;
  std::vector<std::size_t> chosen_;
  std::uint64_t included_ = 0;
  std::size_t pos_ = 0;
};

JointPMF witness_from(const Model& m, const std::vector<std::size_t>& cells) {
  std::vector<Point> support;
  for (std::size_t c : cells) support.push_back(m.coords[c]);
  return JointPMF::uniform(m.sizes, support);
}

bool valid_support(const SupportSpec& spec, const std::vector<std::uint32_t>& sizes,
                   const std::vector<Point>& support) {
  for (Subset s : canonical_order(spec.n)) {
    std::map<Point, std::uint64_t> counts;
    const auto vars = elements(s);
    for (const auto& x : support) {
      Point y;
      for (int v : vars) y.push_back(x[v - 1]);
      ++counts[y];
    }
    if (counts.size() != spec.at(s)) return false;
    for (const auto& [y, c] : counts)
      if (c * spec.at(s) != spec.joint()) return false;
  }
  (void)sizes;
  return true;
}

}  // namespace

SupportSpec SupportSpec::from_map(int n, const std::map<Subset, std::uint64_t>& sizes) {
  SupportSpec spec;
  spec.n = n;
  for (Subset s : canonical_order(n)) {
    auto it = sizes.find(s);
    if (it == sizes.end())
      throw std::invalid_argument("support spec: missing size for subset " + subset_name(s));
    spec.m.push_back(it->second);
  }
  if (sizes.size() != spec.m.size())
    throw std::invalid_argument("support spec: subsets outside [n]");
  return spec;
}

FeasibilityReport check_feasibility_necessary(const SupportSpec& spec) {
  check_variable_count(spec.n);
  const auto& order = canonical_order(spec.n);
  if (spec.m.size() != order.size()) return {false, "wrong number of support sizes"};
  for (Subset s : order)
    if (spec.at(s) == 0) return {false, "m" + subset_name(s) + " = 0"};
  for (Subset a : order) {
    for (Subset b : order) {
      if (a == b || (a & ~b) != 0) continue;
      const auto ma = spec.at(a), mb = spec.at(b);
      if (ma > mb)
        return {false, "monotonicity: m" + subset_name(a) + "=" + std::to_string(ma) + " > m" +
                           subset_name(b) + "=" + std::to_string(mb)};
      if (mb % ma != 0)
        return {false, "divisibility: m" + subset_name(a) + "=" + std::to_string(ma) +
                           " does not divide m" + subset_name(b) + "=" + std::to_string(mb)};
    }
  }
  if (spec.n <= 6) {
    auto report = in_gamma_n(EntropyVector::from_naturals(spec.n, spec.m));
    if (!report.member)
      return {false, "polymatroid: " + report.violations.front().inequality.describe(spec.n)};
  }
  return {};
}

std::optional<SupportSpec> spec_from_vector(const EntropyVector& h) {
  auto sizes = qu_necessary(h);
  if (!sizes) return std::nullopt;
  SupportSpec spec{sizes->n, sizes->sizes};
  if (!check_feasibility_necessary(spec).ok) return std::nullopt;
  return spec;
}

std::string StructuralHint::describe() const {
  auto braces = [](Subset s) { return "{" + subset_name(s) + "}"; };
  return kind == Kind::independent ? braces(alpha) + "⊥" + braces(beta)
                                   : braces(alpha) + "->" + braces(beta);
}

std::vector<StructuralHint> structural_hints(const SupportSpec& spec) {
  std::vector<StructuralHint> hints;
  const auto& order = canonical_order(spec.n);
  for (std::size_t ia = 0; ia < order.size(); ++ia) {
    for (std::size_t ib = ia + 1; ib < order.size(); ++ib) {
      Subset a = order[ia], b = order[ib];
      if (a & b) continue;
      if (spec.at(a) * spec.at(b) == spec.at(a | b))
        hints.push_back({StructuralHint::Kind::independent, a, b});
    }
  }
  for (Subset a : order)
    for (Subset b : order)
      if (!(a & b) && spec.at(a) == spec.at(a | b))
        hints.push_back({StructuralHint::Kind::functional, a, b});
  return hints;
}

std::vector<StructuralHint> structural_hints(const EntropyVector& h) {
  auto sizes = qu_necessary(h);
  if (!sizes) throw std::invalid_argument("structural_hints: coordinates are not all log-naturals");
  // The identities are decided on the exact values; for log-natural
  // coordinates they coincide with the multiplicative ones on m_alpha.
  std::vector<StructuralHint> hints;
  const auto& order = canonical_order(h.n);
  for (std::size_t ia = 0; ia < order.size(); ++ia)
    for (std::size_t ib = ia + 1; ib < order.size(); ++ib) {
      Subset a = order[ia], b = order[ib];
      if (!(a & b) && h.at(a) + h.at(b) == h.at(a | b))
        hints.push_back({StructuralHint::Kind::independent, a, b});
    }
  for (Subset a : order)
    for (Subset b : order)
      if (!(a & b) && h.at(a) == h.at(a | b))
        hints.push_back({StructuralHint::Kind::functional, a, b});
  return hints;
}

std::string status_name(SearchStatus s) {
  switch (s) {
    case SearchStatus::found: return "Found";
    case SearchStatus::exhausted_infeasible: return "ExhaustedInfeasible";
    default: return "BudgetExceeded";
  }
}

SearchOutcome search(const SupportSpec& spec, const SearchOptions& options) {
  const auto start = Clock::now();
  if (spec.n > kMaxSearchVariables) throw std::invalid_argument("search: n must be <= 4");
  if (auto report = check_feasibility_necessary(spec); !report.ok)
    throw std::invalid_argument("search: spec fails necessary conditions: " + report.violation);

  const Model model = build_model(spec, options.use_hints);
  Shared shared;
  shared.max_nodes = options.budget.max_nodes;
  shared.deadline = start + options.budget.wall_clock;

  SearchOutcome outcome;
  auto finish = [&](SearchStatus status) {
    outcome.status = status;
    outcome.nodes_explored = std::min(shared.nodes.load(), shared.max_nodes);
    outcome.elapsed = Clock::now() - start;
    return outcome;
  };

  Engine root(model, shared);
  if (!root.consistent_start()) return finish(SearchStatus::exhausted_infeasible);

  unsigned threads = options.threads ? options.threads : std::max(1u, std::thread::hardware_concurrency());
  if (options.deterministic || threads == 1) {
    auto r = root.run();
    if (r == Engine::Result::found) {
      outcome.witness = witness_from(model, root.chosen());
      return finish(SearchStatus::found);
    }
    return finish(shared.budget_hit ? SearchStatus::budget_exceeded
                                    : SearchStatus::exhausted_infeasible);
  }

  std::vector<Engine> tasks;
  root.frontier(std::min<std::size_t>(model.cells, 12), tasks);
  std::atomic<std::size_t> next{0};
  std::mutex result_mutex;
  std::optional<std::vector<std::size_t>> winner;
  {
    std::vector<std::jthread> workers;
    for (unsigned t = 0; t < threads; ++t) {
      workers.emplace_back([&] {
        for (std::size_t i; (i = next.fetch_add(1)) < tasks.size() && !shared.stop;) {
          if (tasks[i].run() == Engine::Result::found) {
            std::lock_guard lock(result_mutex);
            if (!winner) winner = tasks[i].chosen();
            shared.stop = true;
          }
        }
      });
    }
  }
  if (winner) {
    outcome.witness = witness_from(model, *winner);
    return finish(SearchStatus::found);
  }
  return finish(shared.budget_hit ? SearchStatus::budget_exceeded
                                  : SearchStatus::exhausted_infeasible);
}

SearchOutcome brute_force_oracle(const SupportSpec& spec, std::size_t cap) {
  const auto start = Clock::now();
  check_variable_count(spec.n);
  if (spec.m.size() != canonical_order(spec.n).size())
    throw std::invalid_argument("brute_force_oracle: wrong number of support sizes");
  const auto sizes = alphabet_of(spec);
  const std::size_t cells = grid_cells(sizes);
  if (cells > cap)
    throw std::invalid_argument("brute_force_oracle: grid of " + std::to_string(cells) +
                                " cells exceeds cap " + std::to_string(cap));

  std::vector<Point> grid;
  Point x(spec.n, 0);
  for (std::size_t c = 0; c < cells; ++c) {
    grid.push_back(x);
    for (int v = spec.n - 1; v >= 0; --v) {
      if (++x[v] < sizes[v]) break;
      x[v] = 0;
    }
  }

  SearchOutcome outcome;
  const std::uint64_t k = spec.joint();
  if (k <= cells) {
    std::vector<std::size_t> idx(k);
    std::iota(idx.begin(), idx.end(), 0);
    while (true) {
      ++outcome.nodes_explored;
      std::vector<Point> support;
      for (auto i : idx) support.push_back(grid[i]);
      if (valid_support(spec, sizes, support)) {
        outcome.status = SearchStatus::found;
        outcome.witness = JointPMF::uniform(sizes, support);
        break;
      }
      std::ptrdiff_t t = static_cast<std::ptrdiff_t>(k) - 1;
      while (t >= 0 && idx[t] == cells - k + static_cast<std::size_t>(t)) --t;
      if (t < 0) break;
      ++idx[t];
      for (std::size_t u = t + 1; u < k; ++u) idx[u] = idx[u - 1] + 1;
    }
  }
  outcome.elapsed = Clock::now() - start;
  return outcome;
}

}  // namespace entroq
