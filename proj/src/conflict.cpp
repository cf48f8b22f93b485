#include "omin/conflict.hpp"

#include "omin/error.hpp"

#include <algorithm>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace omin {

std::string_view to_string(ConflictKind k) {
  return k == ConflictKind::LinkConflict ? "link" : "crosstalk";
}

namespace {

std::vector<StageConflict> compare_rows(const RouteTable &routes, std::size_t i,
                                        std::size_t j) {
  std::vector<StageConflict> out;
  for (std::uint32_t s = 1; s <= routes.stages(); ++s) {
    if (routes.switch_at(i, s) != routes.switch_at(j, s))
      continue;
    out.push_back({s, routes.out_port(i, s) == routes.out_port(j, s)
                          ? ConflictKind::LinkConflict
                          : ConflictKind::SwitchCrosstalk});
  }
  return out;
}

std::vector<ConflictEdge> scan_row(const RouteTable &routes, std::size_t i) {
  std::vector<ConflictEdge> row;
  for (std::size_t j = i + 1; j < routes.messages(); ++j) {
    auto stages = compare_rows(routes, i, j);
    if (!stages.empty())
      row.push_back({i, j, std::move(stages)});
  }
  return row;
}

} // namespace

std::vector<StageConflict> conflict_stages(const NetworkSpec &net,
                                           const Message &a, const Message &b) {
  if (a.source == b.source)
    throw Error(ErrorCode::SameSource,
                "messages share source " + std::to_string(a.source));
  const Message pair[2] = {a, b};
  const RouteTable routes(net, pair);
  return compare_rows(routes, 0, 1);
}

bool ConflictEdge::has_link_conflict() const {
  return std::any_of(stages.begin(), stages.end(), [](const StageConflict &c) {
    return c.kind == ConflictKind::LinkConflict;
  });
}

ConflictGraph::ConflictGraph(std::size_t vertices,
                             std::vector<ConflictEdge> edges)
    : n_(vertices), edges_(std::move(edges)), adjacency_(vertices),
      edge_index_(vertices) {
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    const auto &edge = edges_[e];
    if (edge.a >= edge.b || edge.b >= n_ || edge.stages.empty())
      throw InvariantFailure("malformed conflict edge");
    adjacency_[edge.a].push_back(edge.b);
    adjacency_[edge.b].push_back(edge.a);
    edge_index_[edge.a].push_back(e);
    edge_index_[edge.b].push_back(e);
  }
}

std::size_t ConflictGraph::max_degree() const {
  std::size_t best = 0;
  for (const auto &adj : adjacency_)
    best = std::max(best, adj.size());
  return best;
}

const ConflictEdge *ConflictGraph::edge(std::size_t u, std::size_t v) const {
  if (u >= n_ || v >= n_)
    return nullptr;
  for (std::size_t e : edge_index_[u]) {
    const auto &edge = edges_[e];
    if ((edge.a == u && edge.b == v) || (edge.a == v && edge.b == u))
      return &edge;
  }
  return nullptr;
}

ConflictGraph build_conflict_graph_serial(const NetworkSpec &net,
                                          const PermutationMap &perm) {
  const RouteTable routes(net, perm.messages());
  std::vector<ConflictEdge> edges;
  for (std::size_t i = 0; i < perm.count(); ++i) {
    auto row = scan_row(routes, i);
    std::move(row.begin(), row.end(), std::back_inserter(edges));
  }
  return ConflictGraph(perm.count(), std::move(edges));
}

ConflictGraph build_conflict_graph(const NetworkSpec &net,
                                   const PermutationMap &perm,
                                   ExecPolicy exec) {
  const RouteTable routes(net, perm.messages());
  const auto m = static_cast<std::ptrdiff_t>(perm.count());
  std::vector<std::vector<ConflictEdge>> rows(perm.count());

#ifdef _OPENMP
  const int threads = exec.threads > 0 ? exec.threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 4) num_threads(threads)
#endif
  for (std::ptrdiff_t i = 0; i < m; ++i)
    rows[i] = scan_row(routes, static_cast<std::size_t>(i));

  std::vector<ConflictEdge> edges;
  for (auto &row : rows)
    std::move(row.begin(), row.end(), std::back_inserter(edges));
  return ConflictGraph(perm.count(), std::move(edges));
}

std::string format_edge_list_csv(const ConflictGraph &graph) {
  std::string out = "indexA,indexB,stages,kinds\n";
  for (const auto &e : graph.edges()) {
    out += std::to_string(e.a) + ',' + std::to_string(e.b) + ',';
    for (std::size_t k = 0; k < e.stages.size(); ++k) {
      if (k)
        out += ';';
      out += std::to_string(e.stages[k].stage);
    }
    out += ',';
    for (std::size_t k = 0; k < e.stages.size(); ++k) {
      if (k)
        out += ';';
      out += to_string(e.stages[k].kind);
    }
    out += '\n';
  }
  return out;
}

} // namespace omin
