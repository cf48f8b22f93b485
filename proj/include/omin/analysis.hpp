#ifndef OMIN_ANALYSIS_HPP_INCLUDED
#define OMIN_ANALYSIS_HPP_INCLUDED

#include "omin/conflict.hpp"
#include "omin/rng.hpp"
#include "omin/scheduler.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace omin {

/// Activity probabilities of a banyan of 2x2 SEs under independent uniform
/// traffic: p_{i+1} = 1 - (1 - p_i / 2)^2, P(n) = p_n, BW = P(n) * 2^n.
struct BandwidthCurve {
  double load = 0.0;
  std::vector<double> stage_probability; // p_1 .. p_n
  double final_probability = 0.0;        // P(n)
  double bandwidth = 0.0;                // P(n) * N
};

// Throws OutOfRange when load is outside [0, 1] or stages == 0.
BandwidthCurve analytic_bandwidth(std::uint32_t stages, double load);

// Published reference bandwidths (size, bandwidth) for banyan networks at
// full load without crosstalk and with limited crosstalk. Their generating
// equations are unknown; kept for comparison output only.
inline constexpr std::array<std::pair<std::uint32_t, double>, 5>
    kReferenceBandwidthNoCrosstalk{
        {{4, 1.9}, {8, 3.81}, {16, 6.2}, {32, 12.1}, {64, 22.0}}};
inline constexpr std::array<std::pair<std::uint32_t, double>, 5>
    kReferenceBandwidthLimitedCrosstalk{
        {{4, 1.9}, {8, 6.0}, {16, 10.0}, {32, 16.0}, {64, 54.0}}};

/// Allow: only link conflicts drop messages. Free: no shared switch at all.
/// Budget(k): at most k shared stages per message.
class CrosstalkMode {
public:
  static CrosstalkMode allow() { return CrosstalkMode(CrosstalkBudget::unlimited()); }
  static CrosstalkMode free() { return CrosstalkMode(CrosstalkBudget(0)); }
  static CrosstalkMode budget(std::uint32_t k) {
    return CrosstalkMode(CrosstalkBudget(k));
  }

  [[nodiscard]] CrosstalkBudget crosstalk_budget() const { return budget_; }
  // "allow", "free" or "budget=K".
  [[nodiscard]] std::string label() const;

  friend bool operator==(const CrosstalkMode &, const CrosstalkMode &) = default;

private:
  explicit CrosstalkMode(CrosstalkBudget b) : budget_(b) {}
  CrosstalkBudget budget_;
};

CrosstalkMode parse_mode(std::string_view text);
// Comma-separated list of modes.
std::vector<CrosstalkMode> parse_mode_list(std::string_view text);

enum class DropPolicy { LowestSourceWins, RandomUniform };

/// Single-pass resolution of a request set.
///
/// Allow survivors come from dropping all but one message per contested
/// inter-stage line, stage by stage. Budgeted modes are then resolved in
/// descending budget order, each starting from the previous mode's survivors:
/// walking the stages, two survivors sharing an SE both go on while both have
/// budget left; otherwise the one with the larger excess is dropped (ties by
/// policy). Survivor sets are therefore nested in the budget.
///
/// Returns, for each entry of `modes`, the surviving request indices in
/// ascending order. RandomUniform draws only from `stream` (required then).
/// Throws DuplicateSource.
std::vector<std::vector<std::size_t>>
resolve_single_pass(const NetworkSpec &net, std::span<const Message> requests,
                    std::span<const CrosstalkMode> modes, DropPolicy policy,
                    rng::Stream *stream = nullptr);

double passability(const NetworkSpec &net, const PermutationMap &perm,
                   CrosstalkMode mode,
                   DropPolicy policy = DropPolicy::LowestSourceWins,
                   rng::Stream *stream = nullptr);

enum class DestinationModel {
  Uniform,           // independent uniform destination per active input
  RandomPermutation, // one uniform random permutation per trial
  Fixed,             // the supplied map
};

struct TrafficModel {
  double load = 1.0; // probability that an input issues a request
  DestinationModel destinations = DestinationModel::Uniform;
  std::optional<PermutationMap> fixed;
};

struct SimOptions {
  std::uint64_t trials = 1000;
  std::uint64_t seed = 1;
  DropPolicy policy = DropPolicy::LowestSourceWins;
  // When set, every trial's request set is also scheduled and the pass
  // counts are histogrammed.
  std::optional<ScheduleConfig> schedule;
  ExecPolicy exec{};
};

struct ModeStats {
  CrosstalkMode mode;
  double mean_matured = 0.0; // bandwidth estimate
  double stderr_matured = 0.0;
  double passability = 0.0; // total matured / total requests
};

struct SimReport {
  std::uint32_t size = 0;
  Topology topology = Topology::Omega;
  double load = 0.0;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  std::vector<ModeStats> modes;
  double mean_requests = 0.0;
  // [mode][trial]
  std::vector<std::vector<std::uint32_t>> matured;
  std::vector<std::uint32_t> requests;
  // Trials on which a smaller budget kept a message a larger one dropped.
  std::uint64_t nesting_violations = 0;
  std::map<std::size_t, std::uint64_t> pass_histogram;
};

/// Seeded Monte Carlo over independent trials. Trial t draws from
/// rng::substream(seed, t) only, so the OpenMP kernel matches the serial
/// reference bit for bit. Throws ZeroTrials.
SimReport monte_carlo(const NetworkSpec &net, const TrafficModel &traffic,
                      std::span<const CrosstalkMode> modes,
                      const SimOptions &options);
SimReport monte_carlo_serial(const NetworkSpec &net,
                             const TrafficModel &traffic,
                             std::span<const CrosstalkMode> modes,
                             const SimOptions &options);

/// Requests of trial `t`, as monte_carlo samples them.
std::vector<Message> sample_requests(const NetworkSpec &net,
                                     const TrafficModel &traffic,
                                     rng::Stream &stream);

// Fisher-Yates over the stream; throws NotPowerOfTwo.
PermutationMap generate_random_permutation(std::uint32_t size,
                                           rng::Stream &stream);

// Array of {size, topology, load, mode, trials, seed, mean_bw, stderr,
// passability}, one per mode.
std::string sim_report_to_json(const SimReport &report);
// Header size,mode,bw,stderr.
std::string sim_report_to_csv(const SimReport &report, bool header = true);

} // namespace omin

#endif // OMIN_ANALYSIS_HPP_INCLUDED
