#ifndef OMIN_ROUTING_HPP_INCLUDED
#define OMIN_ROUTING_HPP_INCLUDED

#include "omin/topology.hpp"

#include <cstddef>
#include <istream>
#include <span>
#include <string>
#include <vector>

namespace omin {

struct Message {
  Line source = 0;
  Line destination = 0;

  friend bool operator==(const Message &, const Message &) = default;
};

/// Ordered list of source->destination requests. Order is the canonical
/// message index used by conflict graphs, schedules and reports.
class PermutationMap {
public:
  PermutationMap() = default;
  // Validates ranges and distinctness; see parse_permutation for the rules.
  PermutationMap(const NetworkSpec &net, std::vector<Message> pairs);

  [[nodiscard]] std::span<const Message> messages() const noexcept {
    return pairs_;
  }
  [[nodiscard]] std::size_t count() const noexcept { return pairs_.size(); }
  [[nodiscard]] const Message &operator[](std::size_t i) const {
    return pairs_[i];
  }
  [[nodiscard]] std::uint32_t size() const noexcept { return size_; }
  // True when the map does not cover every input.
  [[nodiscard]] bool partial() const noexcept { return partial_; }

  friend bool operator==(const PermutationMap &,
                         const PermutationMap &) = default;

private:
  std::vector<Message> pairs_;
  std::uint32_t size_ = 0;
  bool partial_ = true;
};

// Builds the full map i -> destinations[i].
PermutationMap permutation_from_destinations(const NetworkSpec &net,
                                             std::span<const Line> destinations);

struct Hop {
  std::uint32_t stage;
  SwitchId switch_id;
  Port in_port;
  Port out_port;

  friend bool operator==(const Hop &, const Hop &) = default;
};

struct Path {
  std::vector<Hop> hops;
  Line final_line = 0;
};

// Line-by-line simulation of destination-tag self-routing.
Path trace_path(const NetworkSpec &net, const Message &msg);

/// Closed-form switch label at `stage` for the omega network.
///
/// With W = s_{n-2}..s_0 d_{n-1}..d_1 (2n-2 bits), the switch at stage i is
/// the (n-1)-bit window of W starting i-1 bits from the left. Throws
/// UnsupportedTopology for baseline networks.
SwitchId switch_at_stage(const NetworkSpec &net, const Message &msg,
                         std::uint32_t stage);

/// Routing bit taken at `stage` (out-port), d_{n-stage}.
constexpr Port routing_bit(std::uint32_t stages, Line destination,
                           std::uint32_t stage) noexcept {
  return static_cast<Port>(bits::bit(destination, stages - stage));
}

enum class RouteMethod { Auto, Trace };

/// Per-message switch occupancy, row-major [message][stage-1]. Auto uses the
/// window method on omega and the trace elsewhere; Trace always traces.
class RouteTable {
public:
  RouteTable(const NetworkSpec &net, std::span<const Message> messages,
             RouteMethod method = RouteMethod::Auto);

  [[nodiscard]] std::size_t messages() const noexcept { return count_; }
  [[nodiscard]] std::uint32_t stages() const noexcept { return stages_; }
  [[nodiscard]] SwitchId switch_at(std::size_t msg, std::uint32_t stage) const {
    return switches_[msg * stages_ + (stage - 1)];
  }
  [[nodiscard]] Port out_port(std::size_t msg, std::uint32_t stage) const {
    return ports_[msg * stages_ + (stage - 1)];
  }

private:
  std::size_t count_;
  std::uint32_t stages_;
  std::vector<SwitchId> switches_;
  std::vector<Port> ports_;
};

/// Text format: `#` comment lines, blank lines, and `SOURCE DESTINATION`
/// decimal pairs, one per line. A map with N entries is a full permutation
/// and needs distinct destinations; shorter maps are partial and may repeat
/// destinations.
PermutationMap parse_permutation(std::istream &in, const NetworkSpec &net);
PermutationMap parse_permutation(const std::string &text,
                                 const NetworkSpec &net);

std::string format_permutation(const PermutationMap &perm);

} // namespace omin

#endif // OMIN_ROUTING_HPP_INCLUDED
