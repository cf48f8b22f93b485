#include "fixtures.hpp"
#include "oracle.hpp"

#include "omin/analysis.hpp"
#include "omin/error.hpp"
#include "omin/scheduler.hpp"

#include <doctest.h>

#include <json.hpp>

using namespace omin;

namespace {

using Passes = std::vector<std::vector<std::size_t>>;

ScheduleConfig config(CrosstalkBudget b, Algorithm a = Algorithm::GreedyOrder) {
  ScheduleConfig c;
  c.budget = b;
  c.algorithm = a;
  return c;
}

} // namespace

TEST_CASE("budget parsing") {
  CHECK(parse_budget("0") == CrosstalkBudget(0));
  CHECK(parse_budget("3") == CrosstalkBudget(3));
  CHECK(parse_budget("unlimited").is_unlimited());
  CHECK_THROWS_AS(parse_budget("-1"), Error);
  CHECK_THROWS_AS(parse_budget(""), Error);
  CHECK(parse_algorithm("welsh-powell") == Algorithm::WelshPowell);
  CHECK_THROWS_AS(parse_algorithm("dsatur"), Error);
}

TEST_CASE("greedy on the worked example") {
  const auto net = fixtures::omega(8);
  const auto perm = fixtures::worked_example();

  const auto free = schedule_greedy(net, perm, config(CrosstalkBudget(0)));
  CHECK(free.passes == Passes{{0, 1, 7}, {2, 3, 5}, {4}, {6}});

  const auto k1 = schedule_greedy(net, perm, config(CrosstalkBudget(1)));
  CHECK(k1.passes == Passes{{0, 1, 2, 3}, {4, 5, 6, 7}});
  for (const auto &counts : k1.shared_stages)
    for (auto c : counts)
      CHECK(c == 1);
}

TEST_CASE("the two-way split only shares the middle stage") {
  const auto net = fixtures::omega(8);
  const auto perm = fixtures::worked_example();
  const Passes split{{0, 1, 2, 3}, {4, 5, 6, 7}};
  const auto report = validate_schedule(net, perm, split, CrosstalkBudget(0));
  CHECK(report.violations.size() == 8);
  for (const auto &v : report.violations) {
    CHECK(v.stage == 2);
    CHECK(v.kind == ConflictKind::SwitchCrosstalk);
  }
  CHECK(report.semi_permutation == std::vector<bool>{false, false});
  CHECK(validate_schedule(net, perm, split, CrosstalkBudget(1)).valid());
}

TEST_CASE("semi-permutation decomposition of the worked example") {
  // Source pairs {0,1} {2,3} {4,5} {6,7}.
  const Passes quarters{{0, 1}, {2, 3}, {4, 5}, {6, 7}};
  const auto report = validate_schedule(fixtures::omega(8), fixtures::worked_example(),
                                        quarters, CrosstalkBudget(0));
  CHECK(report.valid());
  CHECK(report.semi_permutation == std::vector<bool>(4, true));
}

TEST_CASE("exact on the worked example") {
  const auto net = fixtures::omega(8);
  const auto perm = fixtures::worked_example();
  const auto k0 = schedule_exact(net, perm, config(CrosstalkBudget(0), Algorithm::Exact));
  CHECK(k0.passes == Passes{{0, 1, 7}, {2, 4, 5}, {3, 6}});
  CHECK(validate_schedule(net, perm, k0.passes, CrosstalkBudget(0)).valid());

  const auto k1 = schedule_exact(net, perm, config(CrosstalkBudget(1), Algorithm::Exact));
  CHECK(k1.pass_count() == 2);
  const auto all = schedule_exact(
      net, perm, config(CrosstalkBudget::unlimited(), Algorithm::Exact));
  CHECK(all.passes == Passes{{0, 1, 2, 3, 4, 5, 6, 7}});
}

TEST_CASE("exact on the N=4 identity") {
  const auto s = schedule_exact(fixtures::omega(4), fixtures::identity(4),
                                config(CrosstalkBudget(0), Algorithm::Exact));
  CHECK(s.passes == Passes{{0, 3}, {1, 2}});
}

TEST_CASE("single message is one pass") {
  const auto net = fixtures::omega(8);
  const PermutationMap one(net, {{3, 3}});
  for (auto b : {CrosstalkBudget(0), CrosstalkBudget(2), CrosstalkBudget::unlimited()}) {
    CHECK(schedule_greedy(net, one, config(b)).pass_count() == 1);
    CHECK(schedule_exact(net, one, config(b, Algorithm::Exact)).pass_count() == 1);
  }
}

TEST_CASE("exact refuses oversized inputs") {
  const auto net = fixtures::omega(32);
  rng::Stream stream(5);
  const auto perm = generate_random_permutation(32, stream);
  try {
    schedule_exact(net, perm, config(CrosstalkBudget(0), Algorithm::Exact));
    FAIL("accepted 32 messages");
  } catch (const Error &e) {
    CHECK(e.code() == ErrorCode::TooLarge);
  }
}

TEST_CASE("validator coverage errors") {
  const auto net = fixtures::omega(8);
  const auto perm = fixtures::worked_example();
  auto code = [&](const Passes &p) {
    try {
      validate_schedule(net, perm, p, CrosstalkBudget(0));
    } catch (const Error &e) {
      return e.code();
    }
    return ErrorCode::ZeroTrials;
  };
  CHECK(code({{0, 1, 2, 3}, {4, 5, 6}}) == ErrorCode::CoverageError);
  CHECK(code({{0, 1, 2, 3}, {4, 5, 6, 7, 7}}) == ErrorCode::CoverageError);
  CHECK(code({{0, 1, 2, 3}, {4, 5, 6, 7, 8}}) == ErrorCode::IndexOutOfRange);
}

TEST_CASE("validator flags link conflicts at every budget") {
  const auto net = fixtures::omega(4);
  const PermutationMap perm(net, {{0, 1}, {2, 0}});
  const auto report =
      validate_schedule(net, perm, {{0, 1}}, CrosstalkBudget::unlimited());
  REQUIRE(report.violations.size() == 2);
  CHECK(report.violations[0] == Violation{0, 0, 1, ConflictKind::LinkConflict});
  CHECK(report.violations[1] == Violation{0, 1, 1, ConflictKind::LinkConflict});
  CHECK(schedule_exact(net, perm,
                       config(CrosstalkBudget::unlimited(), Algorithm::Exact))
            .pass_count() == 2);
}

TEST_CASE("greedy re-checks existing members") {
  // Adding a third message must not push an earlier member past its budget.
  rng::Stream stream(11);
  for (int i = 0; i < 200; ++i) {
    const auto perm = generate_random_permutation(16, stream);
    const auto net = fixtures::omega(16);
    for (std::uint32_t k : {1u, 2u}) {
      const auto s = schedule_greedy(net, perm, config(CrosstalkBudget(k)));
      for (const auto &counts : s.shared_stages)
        for (auto c : counts)
          CHECK(c <= k);
      CHECK(validate_schedule(net, perm, s.passes, CrosstalkBudget(k)).valid());
    }
  }
}

TEST_CASE("Welsh-Powell orders by degree") {
  const auto net = fixtures::omega(8);
  const auto perm = fixtures::worked_example();
  // 3-regular, so the order falls back to sources and matches plain greedy.
  CHECK(schedule_greedy(net, perm, config(CrosstalkBudget(0), Algorithm::WelshPowell))
            .passes ==
        schedule_greedy(net, perm, config(CrosstalkBudget(0))).passes);

  const PermutationMap partial(net, {{0, 7}, {1, 0}, {4, 3}, {6, 1}, {2, 5}});
  const auto wp =
      schedule_greedy(net, partial, config(CrosstalkBudget(0), Algorithm::WelshPowell));
  CHECK(validate_schedule(net, partial, wp.passes, CrosstalkBudget(0)).valid());
}

TEST_CASE("exact is the chromatic number at k = 0 (N = 8)") {
  rng::Stream stream(2024);
  const auto net = fixtures::omega(8);
  for (int i = 0; i < 200; ++i) {
    const auto perm = generate_random_permutation(8, stream);
    std::vector<unsigned> src, dst;
    for (const auto &m : perm.messages()) {
      src.push_back(m.source);
      dst.push_back(m.destination);
    }
    const auto s = schedule_exact(net, perm, config(CrosstalkBudget(0), Algorithm::Exact));
    CHECK(s.pass_count() == oracle::chromatic_number(3, src, dst));
  }
}

TEST_CASE("exact pass count is monotone in the budget") {
  rng::Stream stream(7);
  for (std::uint32_t size : {8u, 16u}) {
    const auto net = fixtures::omega(size);
    for (int i = 0; i < 50; ++i) {
      const auto perm = generate_random_permutation(size, stream);
      std::size_t prev = size + 1;
      for (auto b : {CrosstalkBudget(0), CrosstalkBudget(1), CrosstalkBudget(2),
                     CrosstalkBudget(3), CrosstalkBudget::unlimited()}) {
        const auto s = schedule_exact(net, perm, config(b, Algorithm::Exact));
        CHECK(s.pass_count() <= prev);
        prev = s.pass_count();
      }
    }
  }
}

TEST_CASE("schedule JSON layout") {
  const auto net = fixtures::omega(8);
  const auto perm = fixtures::worked_example();
  const auto s = schedule_exact(net, perm, config(CrosstalkBudget(0), Algorithm::Exact));
  const auto report = validate_schedule(net, perm, s.passes, CrosstalkBudget(0));
  const std::string text = schedule_to_json(net, perm, s, report);
  const auto j = nlohmann::ordered_json::parse(text);
  std::vector<std::string> keys;
  for (auto it = j.begin(); it != j.end(); ++it)
    keys.push_back(it.key());
  CHECK(keys == std::vector<std::string>{"size", "topology", "budget",
                                         "algorithm", "passes", "violations"});
  CHECK(j["passes"].dump() == "[[0,1,7],[2,4,5],[3,6]]");
  CHECK(j["budget"] == 0);
  CHECK(j["algorithm"] == "exact");
  CHECK(j["violations"].empty());
}
