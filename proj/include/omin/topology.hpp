#ifndef OMIN_TOPOLOGY_HPP_INCLUDED
#define OMIN_TOPOLOGY_HPP_INCLUDED

#include <cstdint>
#include <string_view>

namespace omin {

enum class Topology { Omega, Baseline };

std::string_view to_string(Topology t);
// Accepts "omega" / "baseline" (case-insensitive); throws UnknownTopology.
Topology parse_topology(std::string_view name);

using Line = std::uint32_t;
using SwitchId = std::uint32_t;
using Port = std::uint8_t;

/// Immutable geometry of an N x N network of 2x2 switching elements.
/// Stages are numbered 1..n, lines/switches/ports from 0.
class NetworkSpec {
public:
  [[nodiscard]] std::uint32_t size() const noexcept { return size_; }
  [[nodiscard]] std::uint32_t stages() const noexcept { return stages_; }
  [[nodiscard]] std::uint32_t switches_per_stage() const noexcept {
    return size_ / 2;
  }
  [[nodiscard]] Topology topology() const noexcept { return topology_; }

  friend bool operator==(const NetworkSpec &, const NetworkSpec &) = default;

private:
  friend NetworkSpec build_network(std::uint32_t size, Topology topology);
  NetworkSpec(std::uint32_t size, std::uint32_t stages, Topology t)
      : size_(size), stages_(stages), topology_(t) {}

  std::uint32_t size_;
  std::uint32_t stages_;
  Topology topology_;
};

// Throws NotPowerOfTwo unless size is a power of two >= 4.
NetworkSpec build_network(std::uint32_t size, Topology topology);

constexpr SwitchId switch_of(Line line) noexcept { return line >> 1; }
constexpr Port port_of(Line line) noexcept {
  return static_cast<Port>(line & 1u);
}
constexpr Line line_of(SwitchId sw, Port port) noexcept {
  return (sw << 1) | port;
}

/// Wiring in front of `stage`: maps the line leaving stage-1 (or the network
/// input when stage == 1) to the line entering `stage`.
///
/// Omega applies a perfect shuffle (left rotation of the n-bit address) in
/// front of every stage. Baseline is straight into stage 1 and, in front of
/// stage k >= 2, applies an inverse shuffle (right rotation) inside each
/// contiguous block of 2^(n-k+2) lines.
Line interconnect(const NetworkSpec &net, std::uint32_t stage, Line line);

namespace bits {

constexpr std::uint32_t rotl(std::uint32_t x, std::uint32_t width) noexcept {
  const std::uint32_t mask = (width >= 32) ? ~0u : ((1u << width) - 1u);
  return ((x << 1) | (x >> (width - 1))) & mask;
}

constexpr std::uint32_t rotr(std::uint32_t x, std::uint32_t width) noexcept {
  const std::uint32_t mask = (width >= 32) ? ~0u : ((1u << width) - 1u);
  return ((x >> 1) | ((x & 1u) << (width - 1))) & mask;
}

constexpr std::uint32_t bit(std::uint32_t x, std::uint32_t i) noexcept {
  return (x >> i) & 1u;
}

} // namespace bits

} // namespace omin

#endif // OMIN_TOPOLOGY_HPP_INCLUDED
