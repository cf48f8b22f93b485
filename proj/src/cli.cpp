#include "omin/cli.hpp"

#include "omin/analysis.hpp"
#include "omin/error.hpp"
#include "omin/format.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <optional>
#include <sstream>

namespace omin::cli {

namespace {

// An input problem tied to a flag; exit status 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::uint32_t size = 8;
  std::string sizes = "4,8,16,32,64";
  std::string topology = "omega";
  std::string perm_path;
  std::optional<std::uint64_t> random_seed;
  std::string budget = "0";
  std::string algorithm = "greedy";
  std::string order = "source";
  std::size_t exact_cap = 20;
  std::string mode = "analytic";
  std::string crosstalk = "free";
  std::string policy = "lowest";
  double load = 1.0;
  std::uint64_t trials = 10000;
  std::uint64_t random_perms = 1000;
  std::uint64_t seed = 1;
  int threads = 0;
  std::string format = "csv";
  std::string output;
};

NetworkSpec network_of(const RunConfig &cfg) {
  return build_network(cfg.size, parse_topology(cfg.topology));
}

DropPolicy parse_policy(const std::string &text) {
  if (text == "lowest")
    return DropPolicy::LowestSourceWins;
  if (text == "random")
    return DropPolicy::RandomUniform;
  throw UsageError("--policy: expected lowest or random, got '" + text + "'");
}

PermutationMap random_permutation(std::uint32_t size, std::uint64_t seed) {
  rng::Stream stream = rng::substream(seed, 0);
  return generate_random_permutation(size, stream);
}

// Exactly one of --perm / --random.
PermutationMap load_traffic(const RunConfig &cfg, const NetworkSpec &net) {
  if (cfg.perm_path.empty() == !cfg.random_seed.has_value())
    throw UsageError("exactly one of --perm FILE or --random SEED is required");
  if (cfg.random_seed)
    return random_permutation(net.size(), *cfg.random_seed);
  std::ifstream in(cfg.perm_path);
  if (!in)
    throw UsageError("--perm: cannot open '" + cfg.perm_path + "'");
  try {
    return parse_permutation(in, net);
  } catch (const Error &e) {
    throw UsageError("--perm " + cfg.perm_path + ": " + e.what());
  }
}

std::vector<std::uint32_t> parse_sizes(const std::string &text) {
  std::vector<std::uint32_t> sizes;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const unsigned long v = std::stoul(item, &used);
      if (used != item.size())
        throw std::invalid_argument(item);
      sizes.push_back(static_cast<std::uint32_t>(v));
    } catch (const std::exception &) {
      throw UsageError("--sizes: '" + item + "' is not a size");
    }
  }
  if (sizes.empty())
    throw UsageError("--sizes: empty list");
  return sizes;
}

std::string route_report(const RunConfig &cfg) {
  const NetworkSpec net = network_of(cfg);
  const PermutationMap perm = load_traffic(cfg, net);
  std::string out =
      "message,source,destination,stage,switch,in_port,out_port\n";
  for (std::size_t i = 0; i < perm.count(); ++i) {
    const Path path = trace_path(net, perm[i]);
    if (path.final_line != perm[i].destination)
      throw InvariantFailure("message " + std::to_string(i) +
                             " was not delivered");
    for (const auto &h : path.hops)
      out += std::to_string(i) + ',' + std::to_string(perm[i].source) + ',' +
             std::to_string(perm[i].destination) + ',' +
             std::to_string(h.stage) + ',' + std::to_string(h.switch_id) +
             ',' + std::to_string(h.in_port) + ',' +
             std::to_string(h.out_port) + '\n';
  }
  return out;
}

std::string conflicts_report(const RunConfig &cfg) {
  const NetworkSpec net = network_of(cfg);
  const PermutationMap perm = load_traffic(cfg, net);
  return format_edge_list_csv(
      build_conflict_graph(net, perm, ExecPolicy{cfg.threads}));
}

std::string schedule_report(const RunConfig &cfg, std::size_t &passes) {
  const NetworkSpec net = network_of(cfg);
  const PermutationMap perm = load_traffic(cfg, net);
  ScheduleConfig sc;
  sc.budget = parse_budget(cfg.budget);
  sc.algorithm = parse_algorithm(cfg.algorithm);
  if (cfg.order == "degree")
    sc.order = OrderPolicy::DegreeDescending;
  else if (cfg.order != "source")
    throw UsageError("--order: expected source or degree, got '" + cfg.order +
                     "'");
  sc.exact_cap = cfg.exact_cap;
  const Schedule s = make_schedule(net, perm, sc);
  const ValidityReport report = validate_schedule(net, perm, s.passes, sc.budget);
  if (!report.valid())
    throw InvariantFailure("emitted schedule failed validation");
  passes = s.pass_count();
  return schedule_to_json(net, perm, s, report);
}

std::string bandwidth_report(const RunConfig &cfg) {
  const Topology topology = parse_topology(cfg.topology);
  const auto sizes = parse_sizes(cfg.sizes);
  if (cfg.format != "csv" && cfg.format != "json")
    throw UsageError("--format: expected csv or json");

  std::string csv = "size,mode,bw,stderr\n";
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (std::uint32_t size : sizes) {
    const NetworkSpec net = build_network(size, topology);
    if (cfg.mode == "analytic") {
      const BandwidthCurve c = analytic_bandwidth(net.stages(), cfg.load);
      csv += std::to_string(size) + ",analytic," + format_number(c.bandwidth) +
             ",0\n";
      nlohmann::ordered_json j;
      j["size"] = size;
      j["topology"] = std::string(to_string(topology));
      j["load"] = round_significant(cfg.load);
      j["mode"] = "analytic";
      j["trials"] = 0;
      j["seed"] = cfg.seed;
      j["mean_bw"] = round_significant(c.bandwidth);
      j["stderr"] = 0;
      j["passability"] = round_significant(
          cfg.load > 0.0 ? c.final_probability / cfg.load : 1.0);
      rows.push_back(std::move(j));
    } else if (cfg.mode == "simulate") {
      const auto modes = parse_mode_list(cfg.crosstalk);
      TrafficModel traffic;
      traffic.load = cfg.load;
      SimOptions opts;
      opts.trials = cfg.trials;
      opts.seed = cfg.seed;
      opts.policy = parse_policy(cfg.policy);
      opts.exec.threads = cfg.threads;
      const SimReport rep = monte_carlo(net, traffic, modes, opts);
      if (rep.nesting_violations != 0)
        throw InvariantFailure("survivor sets not nested in the budget");
      csv += sim_report_to_csv(rep, false);
      for (auto &j : nlohmann::ordered_json::parse(sim_report_to_json(rep)))
        rows.push_back(std::move(j));
    } else {
      throw UsageError("--mode: expected analytic or simulate, got '" +
                       cfg.mode + "'");
    }
  }
  return cfg.format == "json" ? rows.dump(2) + "\n" : csv;
}

std::string simulate_report(const RunConfig &cfg) {
  const NetworkSpec net = network_of(cfg);
  const CrosstalkBudget budget = parse_budget(cfg.budget);
  std::vector<CrosstalkMode> modes{CrosstalkMode::allow()};
  if (!budget.is_unlimited() && budget.limit() > 0)
    modes.push_back(CrosstalkMode::budget(budget.limit()));
  modes.push_back(CrosstalkMode::free());

  TrafficModel traffic;
  traffic.load = cfg.load;
  traffic.destinations = DestinationModel::RandomPermutation;
  SimOptions opts;
  opts.trials = cfg.random_perms;
  opts.seed = cfg.seed;
  opts.policy = parse_policy(cfg.policy);
  opts.exec.threads = cfg.threads;
  ScheduleConfig sc;
  sc.budget = budget;
  sc.algorithm = parse_algorithm(cfg.algorithm);
  opts.schedule = sc;

  const SimReport rep = monte_carlo(net, traffic, modes, opts);
  if (rep.nesting_violations != 0)
    throw InvariantFailure("survivor sets not nested in the budget");
  if (cfg.format == "csv")
    return sim_report_to_csv(rep);
  if (cfg.format != "json")
    throw UsageError("--format: expected csv or json");

  nlohmann::ordered_json j;
  j["results"] = nlohmann::ordered_json::parse(sim_report_to_json(rep));
  nlohmann::ordered_json sched;
  sched["budget"] = to_string(budget);
  sched["algorithm"] = std::string(to_string(sc.algorithm));
  nlohmann::ordered_json hist = nlohmann::ordered_json::array();
  for (const auto &[passes, count] : rep.pass_histogram)
    hist.push_back({{"passes", passes}, {"count", count}});
  sched["pass_histogram"] = std::move(hist);
  j["schedule"] = std::move(sched);
  return j.dump(2) + "\n";
}

void add_network(CLI::App *cmd, RunConfig &cfg) {
  cmd->add_option("--size", cfg.size, "Network size N (power of two >= 4)")
      ->required();
  cmd->add_option("--topology", cfg.topology, "omega | baseline")
      ->capture_default_str();
}

void add_traffic(CLI::App *cmd, RunConfig &cfg) {
  auto *perm = cmd->add_option("--perm", cfg.perm_path, "Permutation file");
  auto *rnd = cmd->add_option("--random", cfg.random_seed,
                              "Use a random full permutation from this seed");
  perm->excludes(rnd);
}

void emit(const RunConfig &cfg, const std::string &text, std::ostream &out) {
  if (cfg.output.empty()) {
    out << text;
    return;
  }
  std::ofstream file(cfg.output, std::ios::binary);
  if (!file || !(file << text))
    throw UsageError("--output: cannot write '" + cfg.output + "'");
}

} // namespace

int run(const std::vector<std::string> &args, std::ostream &out,
        std::ostream &err) {
  RunConfig cfg;
  CLI::App app{"Optical multistage interconnection network toolkit", "omin"};
  app.require_subcommand(1);

  auto *route = app.add_subcommand("route", "Per-message hop table");
  add_network(route, cfg);
  add_traffic(route, cfg);

  auto *conflicts =
      app.add_subcommand("conflicts", "Conflict graph as a CSV edge list");
  add_network(conflicts, cfg);
  add_traffic(conflicts, cfg);
  conflicts->add_option("--threads", cfg.threads);

  auto *schedule = app.add_subcommand("schedule", "Time-division pass schedule");
  add_network(schedule, cfg);
  add_traffic(schedule, cfg);
  schedule->add_option("--budget", cfg.budget, "K | unlimited")
      ->capture_default_str();
  schedule->add_option("--algorithm", cfg.algorithm,
                       "greedy | welsh-powell | exact")
      ->capture_default_str();
  schedule->add_option("--order", cfg.order, "source | degree (greedy only)")
      ->capture_default_str();
  schedule->add_option("--exact-cap", cfg.exact_cap)->capture_default_str();
  schedule->add_option("--output", cfg.output, "Write the JSON here");

  auto *bandwidth = app.add_subcommand("bandwidth", "Bandwidth table");
  bandwidth->add_option("--sizes", cfg.sizes, "Comma-separated sizes")
      ->capture_default_str();
  bandwidth->add_option("--topology", cfg.topology)->capture_default_str();
  bandwidth->add_option("--mode", cfg.mode, "analytic | simulate")
      ->capture_default_str();
  bandwidth->add_option("--crosstalk", cfg.crosstalk,
                        "allow | free | budget=K, comma-separated")
      ->capture_default_str();
  bandwidth->add_option("--load", cfg.load)->capture_default_str();
  bandwidth->add_option("--trials", cfg.trials)->capture_default_str();
  bandwidth->add_option("--seed", cfg.seed)->capture_default_str();
  bandwidth->add_option("--policy", cfg.policy, "lowest | random")
      ->capture_default_str();
  bandwidth->add_option("--threads", cfg.threads);
  bandwidth->add_option("--format", cfg.format, "csv | json")
      ->capture_default_str();
  bandwidth->add_option("--output", cfg.output);

  auto *simulate = app.add_subcommand(
      "simulate", "Single-pass passability over random permutations");
  add_network(simulate, cfg);
  simulate->add_option("--random-perms", cfg.random_perms)
      ->capture_default_str();
  simulate->add_option("--seed", cfg.seed)->capture_default_str();
  simulate->add_option("--budget", cfg.budget, "K | unlimited")
      ->capture_default_str();
  simulate->add_option("--algorithm", cfg.algorithm,
                       "Scheduler behind the pass histogram")
      ->capture_default_str();
  simulate->add_option("--load", cfg.load)->capture_default_str();
  simulate->add_option("--policy", cfg.policy)->capture_default_str();
  simulate->add_option("--threads", cfg.threads);
  simulate->add_option("--format", cfg.format, "json | csv");
  simulate->add_option("--output", cfg.output);

  auto *generate =
      app.add_subcommand("generate", "Write a random full permutation");
  generate->add_option("--size", cfg.size)->required();
  generate->add_option("--seed", cfg.seed)->capture_default_str();
  generate->add_option("--output", cfg.output);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (route->parsed()) {
      emit(cfg, route_report(cfg), out);
    } else if (conflicts->parsed()) {
      emit(cfg, conflicts_report(cfg), out);
    } else if (schedule->parsed()) {
      std::size_t passes = 0;
      const std::string json = schedule_report(cfg, passes);
      emit(cfg, json, out);
      out << "pass count: " << passes << '\n';
    } else if (bandwidth->parsed()) {
      emit(cfg, bandwidth_report(cfg), out);
    } else if (simulate->parsed()) {
      if (simulate->count("--format") == 0)
        cfg.format = "json";
      emit(cfg, simulate_report(cfg), out);
    } else if (generate->parsed()) {
      const NetworkSpec net = build_network(cfg.size, Topology::Omega);
      emit(cfg, format_permutation(random_permutation(net.size(), cfg.seed)),
           out);
    }
  } catch (const UsageError &e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const Error &e) {
    err << "error: " << to_string(e.code()) << ": " << e.what() << '\n';
    return kExitInput;
  } catch (const InvariantFailure &e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInternal;
  } catch (const std::exception &e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
  return kExitOk;
}

} // namespace omin::cli
