#include <sstream>

#include "doctest.h"
#include "sdg/errors.hpp"
#include "sdg/instances.hpp"
#include "sdg/json_io.hpp"
#include "sdg/oracle.hpp"

using namespace sdg;

TEST_CASE("instance json round trip") {
  Fixture f = make_ring_fixture();
  std::string text = instance_to_json(f.instance, 2);
  Instance back = instance_from_json(text);
  CHECK(back.agent_count() == f.instance.agent_count());
  CHECK(back.edges() == f.instance.edges());
  CHECK(back.scoring().entries() == f.instance.scoring().entries());
  CHECK(back.open_mode() == f.instance.open_mode());
}

TEST_CASE("instance json with string labels") {
  std::string text = R"({
    "edges": [["alice", "bob"], ["bob", "carol"]],
    "scoring": [1, -1]
  })";
  Instance inst = instance_from_json(text);
  CHECK(inst.agent_count() == 3);
  CHECK(inst.labels() == std::vector<std::string>{"alice", "bob", "carol"});
  CHECK(inst.has_edge(0, 1));
  CHECK(inst.has_edge(1, 2));
  CHECK(!inst.has_edge(0, 2));

  // Explicit label table with integer edges referencing it.
  std::string explicit_text = R"({
    "agents": 2,
    "edges": [[0, 1]],
    "scoring": [1],
    "labels": {"left": 0, "right": 1}
  })";
  Instance with_table = instance_from_json(explicit_text);
  CHECK(with_table.labels()[1] == "right");
  std::string out = instance_to_json(with_table);
  CHECK(out.find("right") != std::string::npos);
}

TEST_CASE("malformed instance documents raise ParseError") {
  CHECK_THROWS_AS(instance_from_json("not json at all"), ParseError);
  CHECK_THROWS_AS(instance_from_json("{}"), ParseError);
  CHECK_THROWS_AS(instance_from_json(R"({"agents":2,"scoring":[]})"),
                  ParseError);
  CHECK_THROWS_AS(instance_from_json(R"({"agents":2,"scoring":[1,2]})"),
                  ParseError);  // increasing
  CHECK_THROWS_AS(
      instance_from_json(R"({"agents":2,"edges":[[0,2]],"scoring":[1]})"),
      ParseError);
  CHECK_THROWS_AS(
      instance_from_json(R"({"agents":2,"edges":[[0]],"scoring":[1]})"),
      ParseError);
}

TEST_CASE("edge list text format") {
  std::istringstream in("4 3\n0 1\n1 2\n2 3\n");
  Instance inst = instance_from_edge_list(in, ScoringVector({1, -1}), false);
  CHECK(inst.agent_count() == 4);
  CHECK(inst.edge_count() == 3);

  std::istringstream broken("4 3\n0 1\n");
  CHECK_THROWS_AS(instance_from_edge_list(broken, ScoringVector({1}), false),
                  ParseError);
}

TEST_CASE("outcome json round trip incl. -inf welfare") {
  Fixture f = make_ring_fixture();
  SolveResult r = solve_exact(f.instance, SolveMode::WF);
  REQUIRE(r.best.has_value());
  std::string text = outcome_to_json(f.instance, *r.best);
  ParsedOutcome parsed = outcome_from_json(text);
  REQUIRE(parsed.declared_welfare.has_value());
  CHECK(*parsed.declared_welfare == Welfare(62));
  CHECK(parsed.blocks.size() == 1);

  ParsedOutcome inf = outcome_from_json(
      R"({"coalitions": [[0],[1]], "welfare": "-inf"})");
  REQUIRE(inf.declared_welfare.has_value());
  CHECK(!inf.declared_welfare->is_finite());

  CHECK_THROWS_AS(outcome_from_json(R"({"welfare": 3})"), ParseError);
  CHECK_THROWS_AS(outcome_from_json(R"({"coalitions": [[0]], "welfare": 1.5})"),
                  ParseError);
}

TEST_CASE("decomposition json round trip validates") {
  Fixture f = make_pendant_ring_fixture();
  NiceTreeDecomposition dec = build_nice_decomposition(f.instance);
  std::string text = decomposition_to_json(dec, 2);
  NiceTreeDecomposition back = decomposition_from_json(text);
  CHECK(back.root == dec.root);
  CHECK(back.nodes.size() == dec.nodes.size());
  CHECK(validate_decomposition(f.instance, back).empty());
  CHECK(back.width() == dec.width());

  CHECK_THROWS_AS(decomposition_from_json(R"({"nodes": []})"), ParseError);
  CHECK_THROWS_AS(
      decomposition_from_json(
          R"({"nodes": [{"id":0,"kind":"weird","bag":[],"children":[]}], "root":0})"),
      ParseError);
}

TEST_CASE("solve result json carries mode, algorithm and the witness") {
  Fixture f = make_ring_fixture();
  SolveResult r = solve_exact(f.instance, SolveMode::WF);
  std::string text = solve_result_to_json(f.instance, r, SolveMode::WF);
  CHECK(text.find("\"welfare\":62") != std::string::npos);
  CHECK(text.find("\"algorithm\":\"oracle\"") != std::string::npos);
  CHECK(text.find("\"optimal_count\":1") != std::string::npos);
  CHECK(text.find("\"best\"") != std::string::npos);
}
