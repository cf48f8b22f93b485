#include "fixtures.hpp"
#include "oracle.hpp"

#include "omin/analysis.hpp"
#include "omin/conflict.hpp"
#include "omin/error.hpp"

#include <doctest.h>

using namespace omin;

namespace {

using SC = StageConflict;
constexpr auto kX = ConflictKind::SwitchCrosstalk;
constexpr auto kL = ConflictKind::LinkConflict;

} // namespace

TEST_CASE("conflict_stages examples") {
  const auto net8 = fixtures::omega(8);
  CHECK(conflict_stages(net8, {0, 7}, {4, 3}) == std::vector<SC>{{1, kX}});
  CHECK(conflict_stages(net8, {0, 7}, {1, 0}).empty());
  // Once 0->1 and 2->0 collide on the stage-1 output line they also meet at
  // stage 2, where they part on different ports.
  CHECK(conflict_stages(fixtures::omega(4), {0, 1}, {2, 0}) ==
        std::vector<SC>{{1, kL}, {2, kX}});
}

TEST_CASE("conflict_stages rejects equal sources") {
  try {
    conflict_stages(fixtures::omega(8), {3, 1}, {3, 2});
    FAIL("accepted equal sources");
  } catch (const Error &e) {
    CHECK(e.code() == ErrorCode::SameSource);
  }
}

TEST_CASE("conflict_stages is symmetric and matches the oracle") {
  for (auto topo : {Topology::Omega, Topology::Baseline}) {
    const auto net = build_network(8, topo);
    const bool omega = topo == Topology::Omega;
    for (Line s1 = 0; s1 < 8; ++s1)
      for (Line s2 = 0; s2 < 8; ++s2) {
        if (s1 == s2)
          continue;
        for (Line d1 = 0; d1 < 8; ++d1)
          for (Line d2 = 0; d2 < 8; ++d2) {
            const auto ab = conflict_stages(net, {s1, d1}, {s2, d2});
            CHECK(ab == conflict_stages(net, {s2, d2}, {s1, d1}));
            const auto ref = oracle::shared(omega, 3, s1, d1, s2, d2);
            REQUIRE(ab.size() == ref.size());
            for (std::size_t i = 0; i < ab.size(); ++i) {
              CHECK(ab[i].stage == ref[i].first);
              CHECK((ab[i].kind == kL) == ref[i].second);
            }
          }
      }
  }
}

TEST_CASE("worked example conflict graph") {
  const auto g = build_conflict_graph(fixtures::omega(8), fixtures::worked_example());
  CHECK(g.edges().size() == 12);
  for (std::size_t v = 0; v < 8; ++v)
    CHECK(g.degree(v) == 3);
  // One edge per switch per stage.
  std::map<std::uint32_t, int> per_stage;
  for (const auto &e : g.edges()) {
    REQUIRE(e.stages.size() == 1);
    CHECK(e.stages[0].kind == kX);
    ++per_stage[e.stages[0].stage];
  }
  CHECK(per_stage == std::map<std::uint32_t, int>{{1, 4}, {2, 4}, {3, 4}});
  CHECK(format_edge_list_csv(g).rfind(
            "indexA,indexB,stages,kinds\n0,2,2,crosstalk\n0,4,1,crosstalk\n", 0) == 0);
}

TEST_CASE("identity permutation on N=4 forms a 4-cycle") {
  const auto g = build_conflict_graph(fixtures::omega(4), fixtures::identity(4));
  std::set<std::pair<std::size_t, std::size_t>> pairs;
  for (const auto &e : g.edges())
    pairs.insert({e.a, e.b});
  CHECK(pairs == std::set<std::pair<std::size_t, std::size_t>>{
                     {0, 1}, {0, 2}, {1, 3}, {2, 3}});
}

TEST_CASE("single message has no edges") {
  const auto net = fixtures::omega(8);
  const PermutationMap one(net, {{5, 2}});
  CHECK(build_conflict_graph(net, one).edges().empty());
}

TEST_CASE("switch loading under full permutations") {
  // Stage 1 and stage n always see two messages per SE. Inner stages do too
  // unless a link conflict has merged two paths onto one line.
  std::size_t passable = 0;
  auto check = [&](std::uint32_t size, const PermutationMap &perm) {
    const auto net = fixtures::omega(size);
    const std::uint32_t n = net.stages();
    const RouteTable routes(net, perm.messages());
    for (std::uint32_t s : {1u, n}) {
      std::vector<int> load(size / 2, 0);
      for (std::size_t v = 0; v < perm.count(); ++v)
        ++load[routes.switch_at(v, s)];
      for (int l : load)
        CHECK(l == 2);
    }
    const auto g = build_conflict_graph(net, perm);
    bool link_free = true;
    std::size_t incidences = 0;
    for (const auto &e : g.edges()) {
      incidences += e.stages.size();
      link_free = link_free && !e.has_link_conflict();
      for (const auto &c : e.stages)
        if (c.stage == n)
          CHECK(c.kind == kX);
    }
    if (link_free) {
      ++passable;
      CHECK(incidences == n * size / 2);
    }
    for (std::size_t v = 0; v < perm.count(); ++v)
      CHECK(g.degree(v) >= 1);
  };

  std::vector<Line> d{0, 1, 2, 3};
  do {
    check(4, permutation_from_destinations(fixtures::omega(4), d));
  } while (std::next_permutation(d.begin(), d.end()));
  // 16 of the 24 permutations pass an N=4 omega without blocking.
  CHECK(passable == 16);

  for (std::uint32_t size : {8u, 16u, 32u}) {
    rng::Stream stream(size);
    for (int i = 0; i < 1000; ++i)
      check(size, generate_random_permutation(size, stream));
  }
}

TEST_CASE("parallel conflict graph equals the serial build") {
  rng::Stream stream(99);
  for (std::uint32_t size : {8u, 64u, 256u}) {
    const auto net = fixtures::omega(size);
    const auto perm = generate_random_permutation(size, stream);
    const auto serial = build_conflict_graph_serial(net, perm);
    for (int threads : {1, 2, 4, 7})
      CHECK(build_conflict_graph(net, perm, ExecPolicy{threads}) == serial);
  }
}

TEST_CASE("edge lookup") {
  const auto g = build_conflict_graph(fixtures::omega(8), fixtures::worked_example());
  REQUIRE(g.edge(2, 0) != nullptr);
  CHECK(g.edge(2, 0)->stages == std::vector<SC>{{2, kX}});
  CHECK(g.edge(0, 1) == nullptr);
  CHECK(g.max_degree() == 3);
}
