#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "cli.hpp"
#include "doctest.h"
#include "sdg/instances.hpp"
#include "sdg/json_io.hpp"

using namespace sdg;

namespace {

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult run_cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    path = std::filesystem::temp_directory_path() /
           ("sdg-cli-test-" + std::to_string(::getpid()));
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
  std::string file(const std::string& name) const {
    return (path / name).string();
  }
};

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
}

}  // namespace

TEST_CASE("solve on the ring fixture: threshold yes/no") {
  TempDir tmp;
  std::string inst = tmp.file("ring.json");
  write_file(inst, instance_to_json(make_ring_fixture().instance));

  auto yes = run_cli({"solve", "--input", inst, "--mode", "wf", "--algo",
                      "oracle", "--threshold", "62"});
  CHECK(yes.code == 0);
  CHECK(yes.out.find("\"welfare\":62") != std::string::npos);

  auto no = run_cli({"solve", "--input", inst, "--mode", "wf", "--algo",
                     "oracle", "--threshold", "63"});
  CHECK(no.code == 1);
}

TEST_CASE("solve round-trips through check via --output") {
  TempDir tmp;
  std::string inst = tmp.file("pend.json");
  std::string outcome = tmp.file("best.json");
  write_file(inst, instance_to_json(make_pendant_ring_fixture().instance));

  auto solve = run_cli({"solve", "--input", inst, "--mode", "wf-ns", "--algo",
                        "oracle", "--output", outcome});
  REQUIRE(solve.code == 0);
  CHECK(solve.out.find("\"welfare\":46") != std::string::npos);

  auto check = run_cli({"check", "--input", inst, "--outcome", outcome,
                        "--stability", "ns"});
  CHECK(check.code == 0);
  CHECK(check.out.find("\"stable\":true") != std::string::npos);
  CHECK(check.out.find("\"welfare\":46") != std::string::npos);
}

TEST_CASE("check reports the centre's defection on the stored optimum") {
  TempDir tmp;
  std::string inst = tmp.file("ring.json");
  std::string outcome = tmp.file("grand.json");
  write_file(inst, instance_to_json(make_ring_fixture().instance));
  write_file(outcome,
             R"({"coalitions": [[0,1,2,3,4,5,6,7,8,9]], "welfare": 62})");

  auto check = run_cli({"check", "--input", inst, "--outcome", outcome,
                        "--stability", "ir"});
  CHECK(check.code == 1);
  CHECK(check.out.find("\"stable\":false") != std::string::npos);
  CHECK(check.out.find("\"agent\":2") != std::string::npos);

  // Bad partition: agent duplicated.
  std::string bad = tmp.file("bad.json");
  write_file(bad, R"({"coalitions": [[0,1],[1,2,3,4,5,6,7,8,9]]})");
  auto invalid = run_cli({"check", "--input", inst, "--outcome", bad});
  CHECK(invalid.code == 2);
  CHECK(invalid.err.find("invalid-outcome") != std::string::npos);
}

TEST_CASE("solver choices agree on the fixtures through the cli") {
  TempDir tmp;
  std::string inst = tmp.file("ring.json");
  write_file(inst, instance_to_json(make_ring_fixture().instance));
  for (std::string algo : {"oracle", "dp", "vc", "auto"}) {
    auto r = run_cli({"solve", "--input", inst, "--mode", "wf", "--algo", algo});
    CHECK(r.code == 0);
    CHECK_MESSAGE(r.out.find("\"welfare\":62") != std::string::npos,
                  "algo=", algo, " out=", r.out);
  }
}

TEST_CASE("explicit size caps restrict the dp through the cli") {
  TempDir tmp;
  std::string inst = tmp.file("ring.json");
  write_file(inst, instance_to_json(make_ring_fixture().instance));
  auto capped = run_cli({"solve", "--input", inst, "--mode", "wf", "--algo",
                         "dp", "--size-cap", "1"});
  CHECK(capped.code == 0);
  CHECK(capped.out.find("\"welfare\":0") != std::string::npos);
}

TEST_CASE("bounds command prints the report") {
  TempDir tmp;
  std::string inst = tmp.file("ring.json");
  write_file(inst, instance_to_json(make_ring_fixture().instance));
  auto r = run_cli({"bounds", "--input", inst});
  CHECK(r.code == 0);
  CHECK(r.out.find("\"max_degree\":6") != std::string::npos);
  CHECK(r.out.find("\"wf_diameter_bound\":6") != std::string::npos);
}

TEST_CASE("gen writes instances for every kind") {
  TempDir tmp;
  auto ring = run_cli({"gen", "--kind", "lemma2"});
  CHECK(ring.code == 0);
  CHECK(ring.out.find("\"agents\":10") != std::string::npos);

  std::string covered = tmp.file("covered.json");
  write_file(covered, R"({
    "agents": 6,
    "edges": [[0,1],[0,2],[1,2],[3,4],[3,5],[4,5]],
    "triangles": [[0,1,2],[3,4,5]]
  })");
  std::string reduced = tmp.file("reduced.json");
  auto red = run_cli({"gen", "--kind", "3ctcg", "--input", covered,
                      "--output", reduced});
  CHECK(red.code == 0);
  CHECK(red.out.find("\"threshold\":6") != std::string::npos);
  auto solve = run_cli({"solve", "--input", reduced, "--algo", "oracle",
                        "--threshold", "6"});
  CHECK(solve.code == 0);

  std::string rand_file = tmp.file("rand.json");
  auto rand1 = run_cli({"gen", "--kind", "random", "--n", "8", "--edge-prob",
                        "0.4", "--seed", "5", "--scoring", "1,-1",
                        "--output", rand_file});
  CHECK(rand1.code == 0);
  auto rand2 = run_cli({"gen", "--kind", "random", "--n", "8", "--edge-prob",
                        "0.4", "--seed", "5", "--scoring", "1,-1"});
  // Determinism: same seed gives byte-identical instance JSON.
  std::ifstream in(rand_file);
  std::stringstream file_text;
  file_text << in.rdbuf();
  CHECK(rand2.out.find(file_text.str().substr(0, 40)) != std::string::npos);
}

TEST_CASE("decompose emits a valid decomposition document") {
  TempDir tmp;
  std::string inst_path = tmp.file("pend.json");
  Instance inst = make_pendant_ring_fixture().instance;
  write_file(inst_path, instance_to_json(inst));
  auto r = run_cli({"decompose", "--input", inst_path});
  CHECK(r.code == 0);
  NiceTreeDecomposition dec = decomposition_from_json(r.out);
  CHECK(validate_decomposition(inst, dec).empty());
}

TEST_CASE("usage errors exit 2 with machine-readable stderr") {
  auto unknown = run_cli({"solve", "--input", "x.json", "--frobnicate"});
  CHECK(unknown.code == 2);
  CHECK(unknown.err.find("\"error\"") != std::string::npos);

  auto missing = run_cli({"solve", "--input", "/no/such/file.json"});
  CHECK(missing.code == 2);

  TempDir tmp;
  std::string junk = tmp.file("junk.json");
  write_file(junk, "{\"agents\": }");
  auto malformed = run_cli({"solve", "--input", junk});
  CHECK(malformed.code == 2);
  CHECK(malformed.err.find("\"error\"") != std::string::npos);
}

TEST_CASE("edge-list input with scoring flag") {
  TempDir tmp;
  std::string path = tmp.file("graph.txt");
  write_file(path, "4 3\n0 1\n1 2\n2 3\n");
  auto r = run_cli({"solve", "--input", path, "--format", "edgelist",
                    "--scoring", "1,-1", "--algo", "oracle"});
  CHECK(r.code == 0);
  CHECK(r.out.find("\"welfare\":") != std::string::npos);
}
