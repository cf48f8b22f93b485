#ifndef OMIN_SCHEDULER_HPP_INCLUDED
#define OMIN_SCHEDULER_HPP_INCLUDED

#include "omin/conflict.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace omin {

/// Per message and per pass: the most stages at which its switch may be
/// shared with another member of the same pass. Link conflicts are never
/// allowed, whatever the budget.
class CrosstalkBudget {
public:
  constexpr CrosstalkBudget() = default;
  constexpr explicit CrosstalkBudget(std::uint32_t k) : limit_(k) {}
  static constexpr CrosstalkBudget unlimited() {
    CrosstalkBudget b;
    b.limit_.reset();
    return b;
  }

  [[nodiscard]] constexpr bool is_unlimited() const { return !limit_; }
  [[nodiscard]] constexpr std::uint32_t limit() const { return *limit_; }
  [[nodiscard]] constexpr bool allows(std::uint32_t shared) const {
    return !limit_ || shared <= *limit_;
  }

  friend constexpr bool operator==(const CrosstalkBudget &,
                                   const CrosstalkBudget &) = default;

private:
  std::optional<std::uint32_t> limit_ = 0;
};

std::string to_string(CrosstalkBudget b);
// "unlimited" or a non-negative decimal.
CrosstalkBudget parse_budget(std::string_view text);

enum class Algorithm { GreedyOrder, WelshPowell, Exact };
enum class OrderPolicy { SourceAscending, DegreeDescending };

std::string_view to_string(Algorithm a);
Algorithm parse_algorithm(std::string_view text);

struct ScheduleConfig {
  CrosstalkBudget budget{};
  Algorithm algorithm = Algorithm::GreedyOrder;
  OrderPolicy order = OrderPolicy::SourceAscending;
  // Largest message count schedule_exact accepts.
  std::size_t exact_cap = 20;
};

/// Time-division passes over message indices. Each pass is sorted ascending;
/// `shared_stages[p][i]` is the number of shared stages of passes[p][i].
struct Schedule {
  std::vector<std::vector<std::size_t>> passes;
  ScheduleConfig config;
  std::vector<std::vector<std::uint32_t>> shared_stages;

  [[nodiscard]] std::size_t pass_count() const { return passes.size(); }
};

Schedule schedule_greedy(const NetworkSpec &net, const PermutationMap &perm,
                         const ScheduleConfig &config);
Schedule schedule_greedy(const ConflictGraph &graph,
                         const PermutationMap &perm,
                         const ScheduleConfig &config);

/// Minimum pass count by iterative deepening over m; the reported schedule is
/// the lexicographically smallest pass-assignment vector among optima.
/// Throws TooLarge above config.exact_cap messages.
Schedule schedule_exact(const NetworkSpec &net, const PermutationMap &perm,
                        const ScheduleConfig &config);
Schedule schedule_exact(const ConflictGraph &graph, const PermutationMap &perm,
                        const ScheduleConfig &config);

// Dispatches on config.algorithm.
Schedule make_schedule(const NetworkSpec &net, const PermutationMap &perm,
                       const ScheduleConfig &config);

struct Violation {
  std::size_t pass;
  std::size_t message;
  std::uint32_t stage;
  ConflictKind kind;

  friend bool operator==(const Violation &, const Violation &) = default;
};

struct ValidityReport {
  std::vector<Violation> violations;
  // Per pass: switch-disjoint at every stage.
  std::vector<bool> semi_permutation;

  [[nodiscard]] bool valid() const { return violations.empty(); }
};

/// Re-derives every conflict from traced paths. Throws IndexOutOfRange and
/// CoverageError when the passes do not partition the message set.
ValidityReport validate_schedule(const NetworkSpec &net,
                                 const PermutationMap &perm,
                                 const std::vector<std::vector<std::size_t>> &passes,
                                 CrosstalkBudget budget);

// {size, topology, budget, algorithm, passes, violations}; passes list sources.
std::string schedule_to_json(const NetworkSpec &net, const PermutationMap &perm,
                             const Schedule &schedule,
                             const ValidityReport &report);

} // namespace omin

#endif // OMIN_SCHEDULER_HPP_INCLUDED
