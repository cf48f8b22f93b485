#include "omin/topology.hpp"

#include "omin/error.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <string>

namespace omin {

std::string_view to_string(Topology t) {
  return t == Topology::Omega ? "omega" : "baseline";
}

Topology parse_topology(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (lower == "omega")
    return Topology::Omega;
  if (lower == "baseline")
    return Topology::Baseline;
  throw Error(ErrorCode::UnknownTopology,
              "unknown topology '" + std::string(name) + "'");
}

NetworkSpec build_network(std::uint32_t size, Topology topology) {
  // Lines are 32-bit; 2^31 is far beyond anything the bitmask kernels take.
  if (size < 4 || !std::has_single_bit(size) || size > (1u << 30))
    throw Error(ErrorCode::NotPowerOfTwo,
                "network size " + std::to_string(size) +
                    " is not a power of two >= 4");
  const auto stages = static_cast<std::uint32_t>(std::countr_zero(size));
  return NetworkSpec(size, stages, topology);
}

Line interconnect(const NetworkSpec &net, std::uint32_t stage, Line line) {
  const std::uint32_t n = net.stages();
  if (stage < 1 || stage > n || line >= net.size())
    throw Error(ErrorCode::OutOfRange,
                "stage " + std::to_string(stage) + " / line " +
                    std::to_string(line) + " out of range");

  if (net.topology() == Topology::Omega)
    return bits::rotl(line, n);

  if (stage == 1)
    return line;
  const std::uint32_t width = n - stage + 2;
  const std::uint32_t low_mask = (1u << width) - 1u;
  return (line & ~low_mask) | bits::rotr(line & low_mask, width);
}

} // namespace omin
