#include "omin/routing.hpp"

#include "omin/error.hpp"

#include <charconv>
#include <sstream>

namespace omin {

namespace {

void check_endpoint(const NetworkSpec &net, Line v, const char *what) {
  if (v >= net.size())
    throw Error(ErrorCode::OutOfRange, std::string(what) + " " +
                                           std::to_string(v) +
                                           " out of range for N=" +
                                           std::to_string(net.size()));
}

} // namespace

PermutationMap::PermutationMap(const NetworkSpec &net,
                               std::vector<Message> pairs)
    : pairs_(std::move(pairs)), size_(net.size()) {
  std::vector<bool> seen_src(net.size()), seen_dst(net.size());
  bool dup_dst = false;
  Line first_dup_dst = 0;
  for (const auto &m : pairs_) {
    check_endpoint(net, m.source, "source");
    check_endpoint(net, m.destination, "destination");
    if (seen_src[m.source])
      throw Error(ErrorCode::DuplicateSource,
                  "duplicate source " + std::to_string(m.source));
    seen_src[m.source] = true;
    if (seen_dst[m.destination] && !dup_dst) {
      dup_dst = true;
      first_dup_dst = m.destination;
    }
    seen_dst[m.destination] = true;
  }
  partial_ = pairs_.size() != net.size();
  if (!partial_ && dup_dst)
    throw Error(ErrorCode::DuplicateDestination,
                "duplicate destination " + std::to_string(first_dup_dst));
}

PermutationMap permutation_from_destinations(const NetworkSpec &net,
                                             std::span<const Line> destinations) {
  std::vector<Message> pairs;
  pairs.reserve(destinations.size());
  for (std::size_t i = 0; i < destinations.size(); ++i)
    pairs.push_back({static_cast<Line>(i), destinations[i]});
  return PermutationMap(net, std::move(pairs));
}

Path trace_path(const NetworkSpec &net, const Message &msg) {
  check_endpoint(net, msg.source, "source");
  check_endpoint(net, msg.destination, "destination");
  const std::uint32_t n = net.stages();
  Path path;
  path.hops.reserve(n);
  Line line = msg.source;
  for (std::uint32_t stage = 1; stage <= n; ++stage) {
    line = interconnect(net, stage, line);
    const Port out = routing_bit(n, msg.destination, stage);
    path.hops.push_back({stage, switch_of(line), port_of(line), out});
    line = line_of(switch_of(line), out);
  }
  path.final_line = line;
  return path;
}

SwitchId switch_at_stage(const NetworkSpec &net, const Message &msg,
                         std::uint32_t stage) {
  if (net.topology() != Topology::Omega)
    throw Error(ErrorCode::UnsupportedTopology,
                "window method is defined for omega networks only");
  check_endpoint(net, msg.source, "source");
  check_endpoint(net, msg.destination, "destination");
  const std::uint32_t n = net.stages();
  if (stage < 1 || stage > n)
    throw Error(ErrorCode::OutOfRange,
                "stage " + std::to_string(stage) + " out of range");
  const std::uint32_t half = n - 1;
  const std::uint64_t low_src = msg.source & ((1u << half) - 1u);
  const std::uint64_t high_dst = msg.destination >> 1;
  const std::uint64_t window = (low_src << half) | high_dst;
  // Window starting `stage - 1` bits from the left of the (2n-2)-bit string.
  const std::uint32_t shift = 2 * half - (stage - 1) - half;
  return static_cast<SwitchId>((window >> shift) & ((1u << half) - 1u));
}

RouteTable::RouteTable(const NetworkSpec &net, std::span<const Message> messages,
                       RouteMethod method)
    : count_(messages.size()), stages_(net.stages()),
      switches_(messages.size() * net.stages()),
      ports_(messages.size() * net.stages()) {
  const bool window =
      method == RouteMethod::Auto && net.topology() == Topology::Omega;
  for (std::size_t i = 0; i < messages.size(); ++i) {
    const auto &m = messages[i];
    if (window) {
      for (std::uint32_t s = 1; s <= stages_; ++s) {
        switches_[i * stages_ + s - 1] = switch_at_stage(net, m, s);
        ports_[i * stages_ + s - 1] = routing_bit(stages_, m.destination, s);
      }
    } else {
      const Path p = trace_path(net, m);
      for (const auto &h : p.hops) {
        switches_[i * stages_ + h.stage - 1] = h.switch_id;
        ports_[i * stages_ + h.stage - 1] = h.out_port;
      }
    }
  }
}

PermutationMap parse_permutation(std::istream &in, const NetworkSpec &net) {
  std::vector<Message> pairs;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r')
      line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#')
      continue;

    Line values[2];
    const char *p = line.data() + first;
    const char *end = line.data() + line.size();
    for (int k = 0; k < 2; ++k) {
      while (p < end && (*p == ' ' || *p == '\t'))
        ++p;
      auto [ptr, ec] = std::from_chars(p, end, values[k]);
      if (ec != std::errc() || ptr == p)
        throw Error(ErrorCode::ParseError,
                    "line " + std::to_string(lineno) +
                        ": expected 'SOURCE DESTINATION', got '" + line + "'");
      p = ptr;
    }
    while (p < end && (*p == ' ' || *p == '\t'))
      ++p;
    if (p != end)
      throw Error(ErrorCode::ParseError, "line " + std::to_string(lineno) +
                                             ": trailing text in '" + line +
                                             "'");
    pairs.push_back({values[0], values[1]});
  }
  try {
    return PermutationMap(net, std::move(pairs));
  } catch (const Error &e) {
    throw Error(e.code(), std::string("permutation: ") + e.what());
  }
}

PermutationMap parse_permutation(const std::string &text,
                                 const NetworkSpec &net) {
  std::istringstream in(text);
  return parse_permutation(in, net);
}

std::string format_permutation(const PermutationMap &perm) {
  std::string out;
  for (const auto &m : perm.messages()) {
    out += std::to_string(m.source);
    out += ' ';
    out += std::to_string(m.destination);
    out += '\n';
  }
  return out;
}

} // namespace omin
