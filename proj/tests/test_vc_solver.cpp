#include <random>
#include <set>

#include "doctest.h"
#include "sdg/errors.hpp"
#include "sdg/instances.hpp"
#include "sdg/oracle.hpp"
#include "sdg/stability.hpp"
#include "sdg/vc_solver.hpp"
#include "test_helpers.hpp"

using namespace sdg;

namespace {

int brute_force_min_cover_size(const Instance& inst) {
  const int n = inst.agent_count();
  int best = n;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    bool covers = true;
    for (const auto& [a, b] : inst.edges())
      if (!((mask >> a) & 1) && !((mask >> b) & 1)) covers = false;
    if (covers) best = std::min(best, std::popcount(mask));
  }
  return best;
}

}  // namespace

TEST_CASE("minimum covers on known graphs") {
  ScoringVector s({1});
  Instance star(6, sdg::testing::star_edges(5), s);
  CHECK(compute_vertex_cover(star) == std::vector<int>{0});

  Instance k5(5, sdg::testing::clique_edges(5), s);
  CHECK(compute_vertex_cover(k5).size() == 4);

  Instance p4(4, sdg::testing::path_edges(4), s);
  CHECK(compute_vertex_cover(p4).size() == 2);

  Fixture pend = make_pendant_ring_fixture();
  auto cover = compute_vertex_cover(pend.instance);
  CHECK(static_cast<int>(cover.size()) ==
        brute_force_min_cover_size(pend.instance));
  CHECK(cover.size() <= 6);

  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    Instance inst = random_instance(8, 0.35, seed * 3, s);
    CHECK(static_cast<int>(compute_vertex_cover(inst).size()) ==
          brute_force_min_cover_size(inst));
  }
}

TEST_CASE("group signatures bucket by exact neighbourhood") {
  ScoringVector s({1});
  Instance star(6, sdg::testing::star_edges(5), s);
  CoverStructure cs = group_signatures(star, {0});
  REQUIRE(cs.groups.size() == 1);
  CHECK(cs.groups[0].signature == 1);
  CHECK(cs.groups[0].members == std::vector<int>{1, 2, 3, 4, 5});

  Instance p4(4, sdg::testing::path_edges(4), s);
  CoverStructure path_cs = group_signatures(p4, {1, 2});
  REQUIRE(path_cs.groups.size() == 2);
  CHECK(path_cs.groups[0].members == std::vector<int>{0});  // sees cover slot 0
  CHECK(path_cs.groups[1].members == std::vector<int>{3});

  CHECK_THROWS_AS(group_signatures(p4, {1}), std::invalid_argument);

  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    Instance inst = random_instance(9, 0.3, seed * 11, s);
    CoverStructure cs2 = group_signatures(inst, compute_vertex_cover(inst));
    std::size_t total = 0;
    for (const auto& g : cs2.groups) total += g.members.size();
    CHECK(total + cs2.cover.size() ==
          static_cast<std::size_t>(inst.agent_count()));
  }
}

TEST_CASE("type distances: stars and same-group pairs") {
  ScoringVector s({1, -1});
  Instance star(6, sdg::testing::star_edges(5), s);
  CoverStructure cs = group_signatures(star, {0});
  BlockPattern block{{0}, {0}};
  TypeDistances td = type_distances(star, cs, block);
  REQUIRE(td.connected);
  CHECK(td.dist[0][1] == 1);  // centre to any leaf
  CHECK(td.dist[1][1] == 2);  // two leaves of the same group
}

TEST_CASE("type distances match a materialized coalition with repeats") {
  std::mt19937_64 rng(71);
  int blocks_checked = 0;
  for (std::uint64_t seed = 1; blocks_checked < 60; ++seed) {
    RandomGraphOptions opt;
    opt.require_connected = true;
    Instance inst = random_instance(8, 0.35, seed * 17, ScoringVector({1, 1}),
                                    false, opt);
    CoverStructure cs = group_signatures(inst, compute_vertex_cover(inst));
    if (cs.groups.empty() || cs.cover.size() < 2) continue;
    // One block holding the whole cover and every group with >= 2 members.
    BlockPattern block;
    for (std::size_t i = 0; i < cs.cover.size(); ++i)
      block.cover_positions.push_back(static_cast<int>(i));
    std::vector<int> group_sizes;
    for (std::size_t g = 0; g < cs.groups.size(); ++g)
      if (cs.groups[g].members.size() >= 2) {
        block.group_ids.push_back(static_cast<int>(g));
        group_sizes.push_back(static_cast<int>(cs.groups[g].members.size()));
      }
    if (block.group_ids.empty()) continue;
    TypeDistances td = type_distances(inst, cs, block);
    if (!td.connected) continue;

    // Materialize every member of every chosen group and compare distances.
    std::vector<int> members;
    for (int pos : block.cover_positions) members.push_back(cs.cover[pos]);
    for (int g : block.group_ids)
      for (int agent : cs.groups[g].members) members.push_back(agent);
    Coalition c = Coalition::of(members);
    DistanceMatrix real = distances_within(inst, c);
    auto member_pos = [&](int agent) {
      return static_cast<int>(
          std::lower_bound(c.members.begin(), c.members.end(), agent) -
          c.members.begin());
    };
    const int cover_n = static_cast<int>(block.cover_positions.size());
    for (int i = 0; i < cover_n; ++i)
      for (int j = 0; j < cover_n; ++j)
        CHECK(real.at(member_pos(cs.cover[block.cover_positions[i]]),
                      member_pos(cs.cover[block.cover_positions[j]])) ==
              td.dist[i][j]);
    for (int gi = 0; gi < static_cast<int>(block.group_ids.size()); ++gi) {
      int g = block.group_ids[gi];
      for (int agent : cs.groups[g].members) {
        for (int i = 0; i < cover_n; ++i)
          CHECK(real.at(member_pos(agent),
                        member_pos(cs.cover[block.cover_positions[i]])) ==
                td.dist[cover_n + gi][i]);
        // Same-group distance is two for every distinct pair.
        for (int other : cs.groups[g].members)
          if (other != agent)
            CHECK(real.at(member_pos(agent), member_pos(other)) == 2);
      }
    }
    ++blocks_checked;
  }
  CHECK(blocks_checked >= 60);
}

TEST_CASE("objective equals the materialized welfare; constraints are faithful") {
  std::mt19937_64 rng(80);
  int programs = 0;
  for (std::uint64_t seed = 1; programs < 120; ++seed) {
    RandomGraphOptions opt;
    opt.require_connected = true;
    int n = 6 + static_cast<int>(seed % 3);
    Instance inst = random_instance(n, 0.4, seed * 23,
                                    ScoringVector({2, 1, -1}), false, opt);
    CoverStructure cs = group_signatures(inst, compute_vertex_cover(inst));
    if (cs.groups.empty()) continue;
    const int k = static_cast<int>(cs.cover.size());

    // Random partition of the cover into one or two blocks.
    std::vector<BlockPattern> patterns(1 + (k > 1 ? rng() % 2 : 0));
    for (int pos = 0; pos < k; ++pos)
      patterns[rng() % patterns.size()].cover_positions.push_back(pos);
    std::erase_if(patterns, [](const BlockPattern& p) {
      return p.cover_positions.empty();
    });
    // Random presence of groups in eligible blocks.
    std::vector<std::int64_t> left;
    for (const auto& g : cs.groups) left.push_back(g.members.size());
    for (std::size_t b = 0; b < patterns.size(); ++b)
      for (std::size_t g = 0; g < cs.groups.size(); ++g) {
        bool touches = false;
        for (int pos : patterns[b].cover_positions)
          if ((cs.groups[g].signature >> pos) & 1) touches = true;
        if (touches && left[g] > 0 && rng() % 2)
          patterns[b].group_ids.push_back(static_cast<int>(g));
      }
    CountProgram program = build_count_program(inst, cs, patterns);
    if (!program.feasible) continue;

    // Random feasible counts.
    std::vector<std::vector<std::int64_t>> counts(program.blocks.size());
    std::vector<std::int64_t> used(cs.groups.size(), 0);
    bool ok = true;
    for (std::size_t b = 0; b < program.blocks.size() && ok; ++b) {
      counts[b].assign(program.blocks[b].pattern.group_ids.size(), 0);
      for (std::size_t gi = 0;
           gi < program.blocks[b].pattern.group_ids.size() && ok; ++gi) {
        int g = program.blocks[b].pattern.group_ids[gi];
        std::int64_t room = program.group_capacity[g] - used[g];
        if (room < 1) {
          ok = false;
          break;
        }
        counts[b][gi] = 1 + static_cast<std::int64_t>(rng() % room);
        used[g] += counts[b][gi];
      }
    }
    if (!ok) continue;

    Outcome outcome = materialize_counts(inst, cs, program, counts);
    CHECK(evaluate_objective(program, counts) == outcome.welfare);
    CHECK(counts_individually_rational(inst, cs, program, counts) ==
          is_individually_rational(inst, outcome));
    CHECK(counts_nash_stable(inst, cs, program, counts) ==
          is_nash_stable(inst, outcome));
    ++programs;
  }
  CHECK(programs >= 120);
}

TEST_CASE("fixtures via the cover solver") {
  Fixture ring = make_ring_fixture();
  SolveResult wf = solve_vc(ring.instance, SolveMode::WF);
  CHECK(wf.welfare == Welfare(62));

  Fixture pend = make_pendant_ring_fixture();
  SolveResult ir = solve_vc(pend.instance, SolveMode::WF_IR);
  CHECK(ir.welfare == Welfare(48));
  SolveResult ns = solve_vc(pend.instance, SolveMode::WF_NS);
  CHECK(ns.welfare == Welfare(46));
  REQUIRE(ns.best.has_value());
  CHECK(is_nash_stable(pend.instance, *ns.best));
}

TEST_CASE("stars: the solver agrees with enumeration for wide fans") {
  ScoringVector s({1, -1});
  for (int leaves : {4, 6, 8}) {
    Instance star(leaves + 1, sdg::testing::star_edges(leaves), s);
    SolveResult expect = solve_exact(star, SolveMode::WF);
    SolveResult got = solve_vc(star, SolveMode::WF);
    CHECK(got.welfare == expect.welfare);
  }
  // Beyond the oracle guard the closed form takes over: the centre pairs up
  // with one or two leaves for welfare 2, everyone else stays alone.
  Instance wide(21, sdg::testing::star_edges(20), s);
  SolveResult got = solve_vc(wide, SolveMode::WF);
  CHECK(got.welfare == Welfare(2));
}

TEST_CASE("branch completeness: pool equivalence with the oracle, all modes") {
  auto pool = sdg::testing::small_instance_pool(7, 7);
  int used = 0;
  for (const auto& inst : pool) {
    if (compute_vertex_cover(inst).size() > 4) continue;
    ++used;
    for (SolveMode mode : {SolveMode::WF, SolveMode::WF_IR, SolveMode::WF_NS}) {
      SolveResult expect = solve_exact(inst, mode);
      SolveResult got = solve_vc(inst, mode);
      REQUIRE_MESSAGE(got.welfare == expect.welfare,
                      "n=", inst.agent_count(), " mode=", to_string(mode));
      if (got.best) {
        CHECK(welfare(inst, *got.best) == got.welfare);
        if (mode == SolveMode::WF_IR)
          CHECK(is_individually_rational(inst, *got.best));
        if (mode == SolveMode::WF_NS) CHECK(is_nash_stable(inst, *got.best));
      }
    }
  }
  CHECK(used >= 60);
}

TEST_CASE("cover guard refuses large covers") {
  Instance k12(12, sdg::testing::clique_edges(12), ScoringVector({1}));
  CHECK_THROWS_AS(solve_vc(k12, SolveMode::WF), RefusalError);
  VcOptions raised;
  raised.cover_guard = 11;
  CHECK(solve_vc(k12, SolveMode::WF, raised).welfare == Welfare(12 * 11));
}
