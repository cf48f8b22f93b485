#include "omin/scheduler.hpp"

#include "omin/error.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <numeric>

#include <json.hpp>

namespace omin {

std::string to_string(CrosstalkBudget b) {
  return b.is_unlimited() ? "unlimited" : std::to_string(b.limit());
}

CrosstalkBudget parse_budget(std::string_view text) {
  if (text == "unlimited")
    return CrosstalkBudget::unlimited();
  std::uint32_t k = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), k);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty())
    throw Error(ErrorCode::ParseError,
                "budget must be a non-negative integer or 'unlimited', got '" +
                    std::string(text) + "'");
  return CrosstalkBudget(k);
}

std::string_view to_string(Algorithm a) {
  switch (a) {
  case Algorithm::GreedyOrder:
    return "greedy";
  case Algorithm::WelshPowell:
    return "welsh-powell";
  case Algorithm::Exact:
    return "exact";
  }
  return "?";
}

Algorithm parse_algorithm(std::string_view text) {
  if (text == "greedy")
    return Algorithm::GreedyOrder;
  if (text == "welsh-powell")
    return Algorithm::WelshPowell;
  if (text == "exact")
    return Algorithm::Exact;
  throw Error(ErrorCode::ParseError,
              "unknown algorithm '" + std::string(text) + "'");
}

namespace {

using StageMask = std::uint64_t;

StageMask stage_mask(const ConflictEdge &e) {
  StageMask m = 0;
  for (const auto &c : e.stages)
    m |= StageMask{1} << (c.stage - 1);
  return m;
}

/// Incremental pass assignment. mask_[v] accumulates the stages at which v
/// shares its switch with another member of its current pass.
class PassState {
public:
  static constexpr std::size_t kNone = static_cast<std::size_t>(-1);

  PassState(const ConflictGraph &graph, CrosstalkBudget budget)
      : graph_(graph), budget_(budget), pass_of_(graph.vertices(), kNone),
        mask_(graph.vertices(), 0) {}

  /// Adds v to pass p if every member (v included) stays within budget and
  /// no link conflict appears. Pushes undo records on success.
  bool try_add(std::size_t v, std::size_t p) {
    StageMask own = 0;
    const std::size_t undo_mark = undo_.size();
    for (std::size_t u : graph_.neighbours(v)) {
      if (pass_of_[u] != p)
        continue;
      const ConflictEdge *e = graph_.edge(u, v);
      if (e->has_link_conflict()) {
        rollback(undo_mark);
        return false;
      }
      const StageMask em = stage_mask(*e);
      const StageMask next = mask_[u] | em;
      if (!budget_.allows(
              static_cast<std::uint32_t>(std::popcount(next)))) {
        rollback(undo_mark);
        return false;
      }
      undo_.push_back({u, mask_[u]});
      mask_[u] = next;
      own |= em;
    }
    if (!budget_.allows(static_cast<std::uint32_t>(std::popcount(own)))) {
      rollback(undo_mark);
      return false;
    }
    undo_.push_back({v, mask_[v]});
    mask_[v] = own;
    pass_of_[v] = p;
    return true;
  }

  [[nodiscard]] std::size_t undo_mark() const { return undo_.size(); }

  void remove_to(std::size_t v, std::size_t mark) {
    pass_of_[v] = kNone;
    rollback(mark);
  }

  [[nodiscard]] std::size_t pass_of(std::size_t v) const {
    return pass_of_[v];
  }
  [[nodiscard]] std::uint32_t shared(std::size_t v) const {
    return static_cast<std::uint32_t>(std::popcount(mask_[v]));
  }

private:
  void rollback(std::size_t mark) {
    while (undo_.size() > mark) {
      mask_[undo_.back().first] = undo_.back().second;
      undo_.pop_back();
    }
  }

  const ConflictGraph &graph_;
  CrosstalkBudget budget_;
  std::vector<std::size_t> pass_of_;
  std::vector<StageMask> mask_;
  std::vector<std::pair<std::size_t, StageMask>> undo_;
};

Schedule collect(const PassState &state, std::size_t vertices,
                 std::size_t pass_count, const ScheduleConfig &config) {
  Schedule s;
  s.config = config;
  s.passes.resize(pass_count);
  s.shared_stages.resize(pass_count);
  for (std::size_t v = 0; v < vertices; ++v) {
    const std::size_t p = state.pass_of(v);
    s.passes[p].push_back(v);
    s.shared_stages[p].push_back(state.shared(v));
  }
  return s;
}

std::vector<std::size_t> processing_order(const ConflictGraph &graph,
                                          const PermutationMap &perm,
                                          OrderPolicy policy) {
  std::vector<std::size_t> order(perm.count());
  std::iota(order.begin(), order.end(), std::size_t{0});
  auto by_source = [&](std::size_t a, std::size_t b) {
    return perm[a].source < perm[b].source;
  };
  if (policy == OrderPolicy::SourceAscending) {
    std::sort(order.begin(), order.end(), by_source);
  } else {
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      if (graph.degree(a) != graph.degree(b))
        return graph.degree(a) > graph.degree(b);
      return by_source(a, b);
    });
  }
  return order;
}

bool colour_from(PassState &state, std::size_t v, std::size_t vertices,
                 std::size_t used, std::size_t limit) {
  if (v == vertices)
    return true;
  // New passes are only opened in order, which keeps assignments canonical.
  const std::size_t top = std::min(used + 1, limit);
  for (std::size_t p = 0; p < top; ++p) {
    const std::size_t mark = state.undo_mark();
    if (!state.try_add(v, p))
      continue;
    if (colour_from(state, v + 1, vertices, std::max(used, p + 1), limit))
      return true;
    state.remove_to(v, mark);
  }
  return false;
}

} // namespace

Schedule schedule_greedy(const ConflictGraph &graph,
                         const PermutationMap &perm,
                         const ScheduleConfig &config) {
  const OrderPolicy policy = config.algorithm == Algorithm::WelshPowell
                                 ? OrderPolicy::DegreeDescending
                                 : config.order;
  PassState state(graph, config.budget);
  std::size_t passes = 0;
  for (std::size_t v : processing_order(graph, perm, policy)) {
    std::size_t p = 0;
    while (p < passes && !state.try_add(v, p))
      ++p;
    if (p == passes) {
      if (!state.try_add(v, p))
        throw InvariantFailure("singleton pass rejected");
      ++passes;
    }
  }
  return collect(state, graph.vertices(), passes, config);
}

Schedule schedule_greedy(const NetworkSpec &net, const PermutationMap &perm,
                         const ScheduleConfig &config) {
  return schedule_greedy(build_conflict_graph_serial(net, perm), perm, config);
}

Schedule schedule_exact(const ConflictGraph &graph,
                        const PermutationMap & /*perm*/,
                        const ScheduleConfig &config) {
  const std::size_t m = graph.vertices();
  if (m > config.exact_cap)
    throw Error(ErrorCode::TooLarge,
                "exact scheduling of " + std::to_string(m) +
                    " messages exceeds the cap of " +
                    std::to_string(config.exact_cap));
  if (m == 0) {
    Schedule s;
    s.config = config;
    return s;
  }
  // Two messages that share a switch can never share a crosstalk-free pass,
  // and a link conflict splits them at any budget.
  const bool crosstalk_free =
      !config.budget.is_unlimited() && config.budget.limit() == 0;
  const bool any_link =
      std::any_of(graph.edges().begin(), graph.edges().end(),
                  [](const ConflictEdge &e) { return e.has_link_conflict(); });
  const std::size_t lower =
      (any_link || (crosstalk_free && !graph.edges().empty())) ? 2 : 1;
  for (std::size_t limit = lower; limit <= m; ++limit) {
    PassState state(graph, config.budget);
    if (colour_from(state, 0, m, 0, limit))
      return collect(state, m, limit, config);
  }
  throw InvariantFailure("no schedule found with one message per pass");
}

Schedule schedule_exact(const NetworkSpec &net, const PermutationMap &perm,
                        const ScheduleConfig &config) {
  if (perm.count() > config.exact_cap)
    throw Error(ErrorCode::TooLarge,
                "exact scheduling of " + std::to_string(perm.count()) +
                    " messages exceeds the cap of " +
                    std::to_string(config.exact_cap));
  return schedule_exact(build_conflict_graph_serial(net, perm), perm, config);
}

Schedule make_schedule(const NetworkSpec &net, const PermutationMap &perm,
                       const ScheduleConfig &config) {
  if (config.algorithm == Algorithm::Exact)
    return schedule_exact(net, perm, config);
  return schedule_greedy(net, perm, config);
}

ValidityReport
validate_schedule(const NetworkSpec &net, const PermutationMap &perm,
                  const std::vector<std::vector<std::size_t>> &passes,
                  CrosstalkBudget budget) {
  const std::size_t m = perm.count();
  std::vector<int> seen(m, 0);
  for (std::size_t p = 0; p < passes.size(); ++p) {
    for (std::size_t v : passes[p]) {
      if (v >= m)
        throw Error(ErrorCode::IndexOutOfRange,
                    "pass " + std::to_string(p) + " references message " +
                        std::to_string(v) + " of " + std::to_string(m));
      if (seen[v]++)
        throw Error(ErrorCode::CoverageError,
                    "message " + std::to_string(v) + " scheduled twice");
    }
  }
  for (std::size_t v = 0; v < m; ++v)
    if (!seen[v])
      throw Error(ErrorCode::CoverageError,
                  "message " + std::to_string(v) + " is not scheduled");

  const RouteTable routes(net, perm.messages(), RouteMethod::Trace);
  const std::uint32_t n = net.stages();
  ValidityReport report;
  for (std::size_t p = 0; p < passes.size(); ++p) {
    const auto &pass = passes[p];
    std::vector<std::size_t> members(pass.begin(), pass.end());
    std::sort(members.begin(), members.end());
    bool disjoint = true;
    for (std::size_t v : members) {
      std::vector<std::uint32_t> shared;
      std::vector<std::uint32_t> linked;
      for (std::uint32_t s = 1; s <= n; ++s) {
        bool share = false, link = false;
        for (std::size_t u : members) {
          if (u == v || routes.switch_at(u, s) != routes.switch_at(v, s))
            continue;
          share = true;
          link = link || routes.out_port(u, s) == routes.out_port(v, s);
        }
        if (share)
          shared.push_back(s);
        if (link)
          linked.push_back(s);
      }
      disjoint = disjoint && shared.empty();
      for (std::uint32_t s : linked)
        report.violations.push_back({p, v, s, ConflictKind::LinkConflict});
      if (!budget.allows(static_cast<std::uint32_t>(shared.size())))
        for (std::uint32_t s : shared)
          if (std::find(linked.begin(), linked.end(), s) == linked.end())
            report.violations.push_back(
                {p, v, s, ConflictKind::SwitchCrosstalk});
    }
    report.semi_permutation.push_back(disjoint);
  }
  return report;
}

std::string schedule_to_json(const NetworkSpec &net, const PermutationMap &perm,
                             const Schedule &schedule,
                             const ValidityReport &report) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["size"] = net.size();
  j["topology"] = std::string(to_string(net.topology()));
  if (schedule.config.budget.is_unlimited())
    j["budget"] = "unlimited";
  else
    j["budget"] = schedule.config.budget.limit();
  j["algorithm"] = std::string(to_string(schedule.config.algorithm));
  ordered_json passes = ordered_json::array();
  for (const auto &pass : schedule.passes) {
    ordered_json sources = ordered_json::array();
    for (std::size_t v : pass)
      sources.push_back(perm[v].source);
    passes.push_back(std::move(sources));
  }
  j["passes"] = std::move(passes);
  ordered_json violations = ordered_json::array();
  for (const auto &v : report.violations) {
    ordered_json rec;
    rec["pass"] = v.pass;
    rec["source"] = perm[v.message].source;
    rec["stage"] = v.stage;
    rec["kind"] = std::string(to_string(v.kind));
    violations.push_back(std::move(rec));
  }
  j["violations"] = std::move(violations);
  return j.dump(2) + "\n";
}

} // namespace omin
