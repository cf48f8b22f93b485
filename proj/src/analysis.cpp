#include "omin/analysis.hpp"

#include "omin/error.hpp"
#include "omin/format.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <json.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace omin {

BandwidthCurve analytic_bandwidth(std::uint32_t stages, double load) {
  if (!(load >= 0.0 && load <= 1.0))
    throw Error(ErrorCode::OutOfRange, "load must lie in [0, 1]");
  if (stages == 0 || stages > 30)
    throw Error(ErrorCode::OutOfRange, "stage count must lie in [1, 30]");
  BandwidthCurve curve;
  curve.load = load;
  double p = load;
  for (std::uint32_t i = 0; i < stages; ++i) {
    const double idle = 1.0 - p / 2.0;
    p = 1.0 - idle * idle;
    curve.stage_probability.push_back(p);
  }
  curve.final_probability = p;
  curve.bandwidth = p * static_cast<double>(std::uint64_t{1} << stages);
  return curve;
}

std::string CrosstalkMode::label() const {
  if (budget_.is_unlimited())
    return "allow";
  if (budget_.limit() == 0)
    return "free";
  return "budget=" + std::to_string(budget_.limit());
}

CrosstalkMode parse_mode(std::string_view text) {
  if (text == "allow")
    return CrosstalkMode::allow();
  if (text == "free")
    return CrosstalkMode::free();
  constexpr std::string_view prefix = "budget=";
  if (text.substr(0, prefix.size()) == prefix) {
    const CrosstalkBudget b = parse_budget(text.substr(prefix.size()));
    return b.is_unlimited() ? CrosstalkMode::allow()
                            : CrosstalkMode::budget(b.limit());
  }
  throw Error(ErrorCode::ParseError,
              "crosstalk mode must be allow, free or budget=K, got '" +
                  std::string(text) + "'");
}

std::vector<CrosstalkMode> parse_mode_list(std::string_view text) {
  std::vector<CrosstalkMode> modes;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = std::min(text.find(',', start), text.size());
    modes.push_back(parse_mode(text.substr(start, comma - start)));
    start = comma + 1;
  }
  return modes;
}

namespace {

// Budgets sorted so that the unlimited one (Allow) comes first.
bool looser(CrosstalkBudget a, CrosstalkBudget b) {
  if (a.is_unlimited() != b.is_unlimited())
    return a.is_unlimited();
  return !a.is_unlimited() && a.limit() > b.limit();
}

class Resolver {
public:
  Resolver(const NetworkSpec &net, std::span<const Message> requests,
           DropPolicy policy, rng::Stream *stream)
      : net_(net), routes_(net, requests), policy_(policy), stream_(stream),
        order_(requests.size()) {
    if (policy == DropPolicy::RandomUniform && stream == nullptr)
      throw InvariantFailure("RandomUniform resolution needs a stream");
    std::iota(order_.begin(), order_.end(), std::size_t{0});
    std::sort(order_.begin(), order_.end(), [&](std::size_t a, std::size_t b) {
      return requests[a].source < requests[b].source;
    });
    for (std::size_t i = 1; i < order_.size(); ++i)
      if (requests[order_[i]].source == requests[order_[i - 1]].source)
        throw Error(ErrorCode::DuplicateSource,
                    "duplicate source " +
                        std::to_string(requests[order_[i]].source));
  }

  // Keeps one message per contested inter-stage line.
  std::vector<bool> resolve_links() {
    std::vector<bool> alive(order_.size(), true);
    std::vector<std::vector<std::size_t>> contenders(net_.size());
    for (std::uint32_t s = 1; s <= net_.stages(); ++s) {
      for (auto &c : contenders)
        c.clear();
      for (std::size_t v : order_)
        if (alive[v])
          contenders[line_of(routes_.switch_at(v, s), routes_.out_port(v, s))]
              .push_back(v);
      for (auto &c : contenders) {
        if (c.size() < 2)
          continue;
        const std::size_t winner = pick(c.size());
        for (std::size_t i = 0; i < c.size(); ++i)
          if (i != winner)
            alive[c[i]] = false;
      }
    }
    return alive;
  }

  // Tightens `alive` to budget k (see header for the rule).
  void resolve_budget(std::vector<bool> &alive, std::uint32_t k) {
    std::vector<std::uint32_t> shared(order_.size(), 0);
    std::vector<std::vector<std::size_t>> occupants(net_.switches_per_stage());
    for (std::uint32_t s = 1; s <= net_.stages(); ++s) {
      for (auto &o : occupants)
        o.clear();
      for (std::size_t v : order_)
        if (alive[v])
          occupants[routes_.switch_at(v, s)].push_back(v);
      for (auto &o : occupants) {
        if (o.size() < 2)
          continue;
        if (o.size() > 2)
          throw InvariantFailure("more than two survivors inside one SE");
        const std::size_t a = o[0], b = o[1];
        if (shared[a] < k && shared[b] < k) {
          ++shared[a];
          ++shared[b];
          continue;
        }
        // Excess each would reach if the pair stayed together.
        const auto excess_a = static_cast<std::int64_t>(shared[a]) + 1 - k;
        const auto excess_b = static_cast<std::int64_t>(shared[b]) + 1 - k;
        std::size_t victim;
        if (excess_a != excess_b)
          victim = excess_a > excess_b ? a : b;
        else
          victim = pick(2) == 0 ? b : a;
        alive[victim] = false;
      }
    }
  }

private:
  // Index of the contender that survives.
  std::size_t pick(std::size_t contenders) {
    if (policy_ == DropPolicy::LowestSourceWins)
      return 0;
    return static_cast<std::size_t>(stream_->below(contenders));
  }

  const NetworkSpec &net_;
  RouteTable routes_;
  DropPolicy policy_;
  rng::Stream *stream_;
  std::vector<std::size_t> order_;
};

std::vector<std::size_t> indices_of(const std::vector<bool> &alive) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < alive.size(); ++i)
    if (alive[i])
      out.push_back(i);
  return out;
}

} // namespace

std::vector<std::vector<std::size_t>>
resolve_single_pass(const NetworkSpec &net, std::span<const Message> requests,
                    std::span<const CrosstalkMode> modes, DropPolicy policy,
                    rng::Stream *stream) {
  Resolver resolver(net, requests, policy, stream);

  std::vector<CrosstalkBudget> budgets;
  for (const auto &m : modes)
    budgets.push_back(m.crosstalk_budget());
  std::sort(budgets.begin(), budgets.end(), looser);
  budgets.erase(std::unique(budgets.begin(), budgets.end()), budgets.end());

  std::vector<std::pair<CrosstalkBudget, std::vector<bool>>> chain;
  std::vector<bool> alive = resolver.resolve_links();
  chain.emplace_back(CrosstalkBudget::unlimited(), alive);
  for (CrosstalkBudget b : budgets) {
    if (b.is_unlimited())
      continue;
    resolver.resolve_budget(alive, b.limit());
    chain.emplace_back(b, alive);
  }

  std::vector<std::vector<std::size_t>> out;
  for (const auto &m : modes) {
    const auto it = std::find_if(chain.begin(), chain.end(), [&](const auto &c) {
      return c.first == m.crosstalk_budget();
    });
    out.push_back(indices_of(it->second));
  }
  return out;
}

double passability(const NetworkSpec &net, const PermutationMap &perm,
                   CrosstalkMode mode, DropPolicy policy, rng::Stream *stream) {
  if (perm.count() == 0)
    return 1.0;
  const CrosstalkMode modes[1] = {mode};
  const auto survivors =
      resolve_single_pass(net, perm.messages(), modes, policy, stream);
  return static_cast<double>(survivors[0].size()) /
         static_cast<double>(perm.count());
}

PermutationMap generate_random_permutation(std::uint32_t size,
                                           rng::Stream &stream) {
  const NetworkSpec net = build_network(size, Topology::Omega);
  std::vector<Line> dest(size);
  std::iota(dest.begin(), dest.end(), Line{0});
  for (std::uint32_t i = size - 1; i > 0; --i)
    std::swap(dest[i], dest[stream.below(i + 1)]);
  return permutation_from_destinations(net, dest);
}

std::vector<Message> sample_requests(const NetworkSpec &net,
                                     const TrafficModel &traffic,
                                     rng::Stream &stream) {
  std::vector<Message> requests;
  switch (traffic.destinations) {
  case DestinationModel::Uniform:
    for (Line i = 0; i < net.size(); ++i)
      if (stream.bernoulli(traffic.load))
        requests.push_back({i, static_cast<Line>(stream.below(net.size()))});
    break;
  case DestinationModel::RandomPermutation: {
    const PermutationMap perm = generate_random_permutation(net.size(), stream);
    for (const auto &m : perm.messages())
      if (stream.bernoulli(traffic.load))
        requests.push_back(m);
    break;
  }
  case DestinationModel::Fixed:
    if (!traffic.fixed)
      throw InvariantFailure("fixed traffic without a permutation");
    for (const auto &m : traffic.fixed->messages())
      if (stream.bernoulli(traffic.load))
        requests.push_back(m);
    break;
  }
  return requests;
}

namespace {

struct TrialResult {
  std::vector<std::uint32_t> matured; // per requested mode
  std::uint32_t requests = 0;
  bool nested = true;
  std::size_t passes = 0;
};

TrialResult run_trial(const NetworkSpec &net, const TrafficModel &traffic,
                      std::span<const CrosstalkMode> modes,
                      const SimOptions &options, std::uint64_t t) {
  rng::Stream stream = rng::substream(options.seed, t);
  const std::vector<Message> requests = sample_requests(net, traffic, stream);
  TrialResult r;
  r.requests = static_cast<std::uint32_t>(requests.size());

  const auto survivors =
      resolve_single_pass(net, requests, modes, options.policy, &stream);
  for (const auto &s : survivors)
    r.matured.push_back(static_cast<std::uint32_t>(s.size()));

  // Survivor sets must shrink as the budget tightens.
  std::vector<std::size_t> rank(modes.size());
  std::iota(rank.begin(), rank.end(), std::size_t{0});
  std::stable_sort(rank.begin(), rank.end(), [&](std::size_t a, std::size_t b) {
    return looser(modes[a].crosstalk_budget(), modes[b].crosstalk_budget());
  });
  for (std::size_t i = 1; i < rank.size(); ++i) {
    const auto &tight = survivors[rank[i]];
    const auto &loose = survivors[rank[i - 1]];
    if (!std::includes(loose.begin(), loose.end(), tight.begin(), tight.end()))
      r.nested = false;
  }

  if (options.schedule && !requests.empty()) {
    const PermutationMap perm(net, requests);
    r.passes = make_schedule(net, perm, *options.schedule).pass_count();
  }
  return r;
}

SimReport aggregate(const NetworkSpec &net, const TrafficModel &traffic,
                    std::span<const CrosstalkMode> modes,
                    const SimOptions &options,
                    const std::vector<TrialResult> &results) {
  SimReport rep;
  rep.size = net.size();
  rep.topology = net.topology();
  rep.load = traffic.load;
  rep.trials = options.trials;
  rep.seed = options.seed;
  rep.matured.assign(modes.size(), {});
  const auto trials = static_cast<double>(options.trials);

  double request_sum = 0.0;
  for (const auto &r : results) {
    rep.requests.push_back(r.requests);
    request_sum += r.requests;
    if (!r.nested)
      ++rep.nesting_violations;
    if (options.schedule && r.requests > 0)
      ++rep.pass_histogram[r.passes];
    for (std::size_t m = 0; m < modes.size(); ++m)
      rep.matured[m].push_back(r.matured[m]);
  }
  rep.mean_requests = request_sum / trials;

  for (std::size_t m = 0; m < modes.size(); ++m) {
    ModeStats st{modes[m]};
    double sum = 0.0;
    for (std::uint32_t x : rep.matured[m])
      sum += x;
    st.mean_matured = sum / trials;
    if (options.trials > 1) {
      double sq = 0.0;
      for (std::uint32_t x : rep.matured[m]) {
        const double d = x - st.mean_matured;
        sq += d * d;
      }
      st.stderr_matured = std::sqrt(sq / (trials - 1.0) / trials);
    }
    st.passability = request_sum > 0.0 ? sum / request_sum : 1.0;
    rep.modes.push_back(st);
  }
  return rep;
}

void check_inputs(const NetworkSpec &net, const TrafficModel &traffic,
                  const SimOptions &options) {
  if (options.trials == 0)
    throw Error(ErrorCode::ZeroTrials, "at least one trial is required");
  if (!(traffic.load >= 0.0 && traffic.load <= 1.0))
    throw Error(ErrorCode::OutOfRange, "load must lie in [0, 1]");
  if (traffic.destinations == DestinationModel::Fixed &&
      (!traffic.fixed || traffic.fixed->size() != net.size()))
    throw Error(ErrorCode::OutOfRange,
                "fixed traffic needs a permutation of the network size");
  if (options.schedule && traffic.destinations == DestinationModel::Uniform)
    throw Error(ErrorCode::OutOfRange,
                "pass histograms need permutation traffic");
}

} // namespace

SimReport monte_carlo_serial(const NetworkSpec &net,
                             const TrafficModel &traffic,
                             std::span<const CrosstalkMode> modes,
                             const SimOptions &options) {
  check_inputs(net, traffic, options);
  std::vector<TrialResult> results;
  results.reserve(options.trials);
  for (std::uint64_t t = 0; t < options.trials; ++t)
    results.push_back(run_trial(net, traffic, modes, options, t));
  return aggregate(net, traffic, modes, options, results);
}

SimReport monte_carlo(const NetworkSpec &net, const TrafficModel &traffic,
                      std::span<const CrosstalkMode> modes,
                      const SimOptions &options) {
  check_inputs(net, traffic, options);
  std::vector<TrialResult> results(options.trials);
  const auto trials = static_cast<std::int64_t>(options.trials);

#ifdef _OPENMP
  const int threads =
      options.exec.threads > 0 ? options.exec.threads : omp_get_max_threads();
  // Exceptions cannot cross the parallel region; rethrow the first one after.
  std::exception_ptr failure;
#pragma omp parallel for schedule(static) num_threads(threads)
  for (std::int64_t t = 0; t < trials; ++t) {
    try {
      results[t] = run_trial(net, traffic, modes, options,
                             static_cast<std::uint64_t>(t));
    } catch (...) {
#pragma omp critical(omin_monte_carlo_failure)
      if (!failure)
        failure = std::current_exception();
    }
  }
  if (failure)
    std::rethrow_exception(failure);
#else
  for (std::int64_t t = 0; t < trials; ++t)
    results[t] = run_trial(net, traffic, modes, options,
                           static_cast<std::uint64_t>(t));
#endif
  return aggregate(net, traffic, modes, options, results);
}

std::string sim_report_to_json(const SimReport &report) {
  using nlohmann::ordered_json;
  ordered_json rows = ordered_json::array();
  for (const auto &m : report.modes) {
    ordered_json j;
    j["size"] = report.size;
    j["topology"] = std::string(to_string(report.topology));
    j["load"] = round_significant(report.load);
    j["mode"] = m.mode.label();
    j["trials"] = report.trials;
    j["seed"] = report.seed;
    j["mean_bw"] = round_significant(m.mean_matured);
    j["stderr"] = round_significant(m.stderr_matured);
    j["passability"] = round_significant(m.passability);
    rows.push_back(std::move(j));
  }
  return rows.dump(2) + "\n";
}

std::string sim_report_to_csv(const SimReport &report, bool header) {
  std::string out = header ? "size,mode,bw,stderr\n" : "";
  for (const auto &m : report.modes)
    out += std::to_string(report.size) + ',' + m.mode.label() + ',' +
           format_number(m.mean_matured) + ',' +
           format_number(m.stderr_matured) + '\n';
  return out;
}

} // namespace omin
