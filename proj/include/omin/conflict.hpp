#ifndef OMIN_CONFLICT_HPP_INCLUDED
#define OMIN_CONFLICT_HPP_INCLUDED

#include "omin/routing.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace omin {

// SwitchCrosstalk: same SE, different out-ports. LinkConflict: same SE and
// same out-port, i.e. the same inter-stage line.
enum class ConflictKind { SwitchCrosstalk, LinkConflict };

std::string_view to_string(ConflictKind k);

struct StageConflict {
  std::uint32_t stage;
  ConflictKind kind;

  friend bool operator==(const StageConflict &,
                         const StageConflict &) = default;
};

// Empty when the two paths are switch-disjoint. Throws SameSource.
std::vector<StageConflict> conflict_stages(const NetworkSpec &net,
                                           const Message &a, const Message &b);

struct ConflictEdge {
  std::size_t a; // a < b
  std::size_t b;
  std::vector<StageConflict> stages;

  [[nodiscard]] bool has_link_conflict() const;
  friend bool operator==(const ConflictEdge &, const ConflictEdge &) = default;
};

class ConflictGraph {
public:
  ConflictGraph(std::size_t vertices, std::vector<ConflictEdge> edges);

  [[nodiscard]] std::size_t vertices() const noexcept { return n_; }
  // Sorted lexicographically by (a, b).
  [[nodiscard]] const std::vector<ConflictEdge> &edges() const noexcept {
    return edges_;
  }
  [[nodiscard]] const std::vector<std::size_t> &
  neighbours(std::size_t v) const {
    return adjacency_[v];
  }
  [[nodiscard]] std::size_t degree(std::size_t v) const {
    return adjacency_[v].size();
  }
  [[nodiscard]] std::size_t max_degree() const;
  // nullptr when u and v do not conflict.
  [[nodiscard]] const ConflictEdge *edge(std::size_t u, std::size_t v) const;

  friend bool operator==(const ConflictGraph &a, const ConflictGraph &b) {
    return a.n_ == b.n_ && a.edges_ == b.edges_;
  }

private:
  std::size_t n_;
  std::vector<ConflictEdge> edges_;
  std::vector<std::vector<std::size_t>> adjacency_;
  std::vector<std::vector<std::size_t>> edge_index_;
};

struct ExecPolicy {
  // 0 = OpenMP runtime default.
  int threads = 0;
};

/// Pairwise conflict graph. The OpenMP kernel scans rows in parallel and
/// concatenates them in row order, so the result equals the serial build.
ConflictGraph build_conflict_graph(const NetworkSpec &net,
                                   const PermutationMap &perm,
                                   ExecPolicy exec = {});
ConflictGraph build_conflict_graph_serial(const NetworkSpec &net,
                                          const PermutationMap &perm);

// CSV edge list with header `indexA,indexB,stages,kinds`.
std::string format_edge_list_csv(const ConflictGraph &graph);

} // namespace omin

#endif // OMIN_CONFLICT_HPP_INCLUDED
