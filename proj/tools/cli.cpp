#include "cli.hpp"

#include <fstream>
#include <ostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "sdg/bounds.hpp"
#include "sdg/dp_solver.hpp"
#include "sdg/errors.hpp"
#include "sdg/instances.hpp"
#include "sdg/json_io.hpp"
#include "sdg/oracle.hpp"
#include "sdg/stability.hpp"
#include "sdg/vc_solver.hpp"

namespace sdg::cli {

namespace {

constexpr int kExitYes = 0;
constexpr int kExitNo = 1;
constexpr int kExitUsage = 2;
constexpr int kExitInternal = 3;

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spill(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write file: " + path);
  out << text << "\n";
}

ScoringVector parse_scoring_flag(const std::string& csv) {
  std::vector<std::int64_t> entries;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ','))
    entries.push_back(std::stoll(item));
  return ScoringVector(std::move(entries));
}

struct CommonInput {
  std::string path;
  std::string format = "json";
  std::string scoring;  // edge-list only
  bool open_mode = false;
};

Instance load_instance(const CommonInput& in) {
  if (in.format == "edgelist") {
    if (in.scoring.empty())
      throw ParseError("edge-list input needs --scoring");
    std::ifstream file(in.path);
    if (!file) throw ParseError("cannot open file: " + in.path);
    return instance_from_edge_list(file, parse_scoring_flag(in.scoring),
                                   in.open_mode);
  }
  return instance_from_json(slurp(in.path));
}

void warn_nonpositive_scoring(const Instance& inst, std::ostream& err) {
  if (inst.scoring().first_entry_nonpositive())
    err << error_to_json("warning",
                         "s1 <= 0: all-singletons is optimal and stable")
        << "\n";
}

TriangleCoveredGraph triangle_graph_from_json(const std::string& text) {
  nlohmann::json doc = nlohmann::json::parse(text, nullptr, false);
  if (doc.is_discarded()) throw ParseError("invalid JSON");
  TriangleCoveredGraph g;
  if (!doc.contains("agents") || !doc.contains("edges") ||
      !doc.contains("triangles"))
    throw ParseError("triangle-covered graph needs agents, edges, triangles");
  g.n = doc["agents"].get<int>();
  for (const auto& e : doc["edges"]) {
    if (!e.is_array() || e.size() != 2) throw ParseError("bad edge entry");
    g.edges.emplace_back(e[0].get<int>(), e[1].get<int>());
  }
  for (const auto& t : doc["triangles"]) {
    if (!t.is_array() || t.size() != 3) throw ParseError("bad triangle entry");
    g.triangles.push_back({t[0].get<int>(), t[1].get<int>(), t[2].get<int>()});
  }
  return g;
}

int run_solve(const CommonInput& input, const std::string& mode_name,
              const std::string& algo, const std::string& size_cap,
              std::optional<std::int64_t> threshold,
              const std::string& output_path, int limit_n, int vc_guard,
              int threads, bool pretty, std::ostream& out, std::ostream& err) {
  Instance inst = load_instance(input);
  warn_nonpositive_scoring(inst, err);
  auto mode = parse_solve_mode(mode_name);
  if (!mode) throw ParseError("unknown mode: " + mode_name);

  std::optional<int> explicit_cap;
  if (size_cap != "auto") explicit_cap = std::stoi(size_cap);

  std::string choice = algo;
  if (choice == "auto") {
    // Small covers get the cover solver; otherwise the size-capped dynamic
    // program when a cap is provable, and plain enumeration as a last resort.
    std::size_t cover_size = SIZE_MAX;
    if (inst.agent_count() <= 64)
      cover_size = compute_vertex_cover(inst).size();
    if (cover_size <= 6) choice = "vc";
    else if (!inst.open_mode()) choice = "dp";
    else choice = "oracle";
  }

  SolveResult result;
  if (choice == "oracle") {
    OracleOptions opts;
    opts.limit_n = limit_n;
    opts.size_cap = explicit_cap;
    opts.threads = threads;
    result = solve_exact(inst, *mode, opts);
  } else if (choice == "dp") {
    DpOptions opts;
    opts.size_cap = explicit_cap;
    if (!explicit_cap && inst.open_mode())
      err << error_to_json("warning",
                           "open mode proves no size cap; dp runs uncapped")
          << "\n";
    result = solve_dp(inst, *mode, opts);
  } else if (choice == "vc") {
    VcOptions opts;
    opts.cover_guard = vc_guard;
    result = solve_vc(inst, *mode, opts);
  } else {
    throw ParseError("unknown algorithm: " + algo);
  }

  out << solve_result_to_json(inst, result, *mode, pretty ? 2 : -1) << "\n";
  if (!output_path.empty() && result.best)
    spill(output_path, outcome_to_json(inst, *result.best, 2));

  if (threshold.has_value())
    return result.welfare >= Welfare(*threshold) ? kExitYes : kExitNo;
  return result.best ? kExitYes : kExitNo;
}

int run_check(const CommonInput& input, const std::string& outcome_path,
              const std::string& stability, bool pretty, std::ostream& out,
              std::ostream& err) {
  Instance inst = load_instance(input);
  ParsedOutcome parsed = outcome_from_json(slurp(outcome_path));
  auto problems = validate_partition(inst, parsed.blocks);
  nlohmann::json doc;
  if (!problems.empty()) {
    doc["valid"] = false;
    doc["problems"] = problems;
    err << error_to_json("invalid-outcome", "not a partition") << "\n";
    out << (pretty ? doc.dump(2) : doc.dump()) << "\n";
    return kExitUsage;
  }
  Outcome outcome = Outcome::from_blocks(inst, parsed.blocks);
  doc["valid"] = true;
  doc["welfare"] = outcome.welfare.is_finite()
                       ? nlohmann::json(outcome.welfare.value())
                       : nlohmann::json("-inf");
  bool ok = true;
  if (parsed.declared_welfare.has_value()) {
    bool matches = *parsed.declared_welfare == outcome.welfare;
    doc["welfare_matches"] = matches;
    ok = ok && matches;
  }
  auto describe = [&](const Deviation& dev) {
    nlohmann::json d;
    d["agent"] = dev.agent;
    d["kind"] = dev.kind == DeviationKind::IR ? "ir" : "ns";
    if (dev.target == kSingletonTarget)
      d["target"] = "singleton";
    else
      d["target"] = dev.target;
    d["utility_before"] = dev.utility_before.is_finite()
                              ? nlohmann::json(dev.utility_before.value())
                              : nlohmann::json("-inf");
    d["utility_after"] = dev.utility_after.value();
    return d;
  };
  if (stability == "ir") {
    auto dev = find_ir_deviation(inst, outcome);
    doc["stable"] = !dev.has_value();
    if (dev) {
      doc["deviation"] = describe(*dev);
      ok = false;
    }
  } else if (stability == "ns") {
    auto dev = find_ns_deviation(inst, outcome);
    doc["stable"] = !dev.has_value();
    if (dev) {
      doc["deviation"] = describe(*dev);
      ok = false;
    }
  }
  out << (pretty ? doc.dump(2) : doc.dump()) << "\n";
  return ok ? kExitYes : kExitNo;
}

int run_bounds(const CommonInput& input, bool pretty, std::ostream& out) {
  Instance inst = load_instance(input);
  out << bounds_report_to_json(compute_bounds_report(inst), pretty ? 2 : -1)
      << "\n";
  return kExitYes;
}

int run_gen(const std::string& kind, int n, double edge_prob,
            std::uint64_t seed, const std::string& scoring, bool open_mode,
            bool connected, bool no_isolated, const std::string& input_path,
            std::int64_t s1, const std::string& output_path, bool pretty,
            std::ostream& out) {
  nlohmann::json doc;
  doc["kind"] = kind;
  std::string instance_json;
  if (kind == "lemma2") {
    instance_json = instance_to_json(make_ring_fixture().instance, -1);
  } else if (kind == "lemma3") {
    instance_json = instance_to_json(make_pendant_ring_fixture().instance, -1);
  } else if (kind == "3ctcg") {
    if (input_path.empty())
      throw ParseError("--kind 3ctcg needs --input with the covered graph");
    ColoringReduction red = reduce_triangle_cover_coloring(
        triangle_graph_from_json(slurp(input_path)), s1);
    doc["threshold"] = red.threshold;
    instance_json = instance_to_json(red.instance, -1);
  } else if (kind == "random") {
    if (scoring.empty()) throw ParseError("--kind random needs --scoring");
    RandomGraphOptions opts;
    opts.require_connected = connected;
    opts.forbid_isolated = no_isolated;
    Instance inst = random_instance(n, edge_prob, seed,
                                    parse_scoring_flag(scoring), open_mode,
                                    opts);
    instance_json = instance_to_json(inst, -1);
  } else {
    throw ParseError("unknown kind: " + kind);
  }
  doc["instance"] = nlohmann::json::parse(instance_json);
  if (!output_path.empty()) spill(output_path, instance_json);
  out << (pretty ? doc.dump(2) : doc.dump()) << "\n";
  return kExitYes;
}

int run_decompose(const CommonInput& input, const std::string& output_path,
                  bool pretty, std::ostream& out) {
  Instance inst = load_instance(input);
  NiceTreeDecomposition dec = build_nice_decomposition(inst);
  auto violations = validate_decomposition(inst, dec);
  if (!violations.empty())
    throw std::logic_error("built decomposition failed validation: " +
                           violations.front());
  std::string text = decomposition_to_json(dec, pretty ? 2 : -1);
  if (!output_path.empty()) spill(output_path, text);
  out << text << "\n";
  return kExitYes;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Exact solvers for score-based social distance games"};
  app.require_subcommand(1);

  CommonInput input;
  bool pretty = false;
  int threads = std::max(1u, std::thread::hardware_concurrency());

  auto add_input = [&](CLI::App* cmd) {
    cmd->add_option("--input", input.path, "instance file")->required();
    cmd->add_option("--format", input.format, "json|edgelist")
        ->check(CLI::IsMember({"json", "edgelist"}));
    cmd->add_option("--scoring", input.scoring,
                    "comma-separated scores (edge-list input)");
    cmd->add_flag("--open", input.open_mode,
                  "treat distances beyond the horizon as the last score");
    cmd->add_flag("--pretty", pretty, "indent JSON output");
  };

  // solve
  auto* solve = app.add_subcommand("solve", "compute an optimal outcome");
  std::string mode_name = "wf", algo = "auto", size_cap = "auto", output_path;
  std::optional<std::int64_t> threshold;
  int limit_n = 12, vc_guard = 8;
  add_input(solve);
  solve->add_option("--mode", mode_name, "wf|wf-ir|wf-ns")
      ->check(CLI::IsMember({"wf", "wf-ir", "wf-ns"}));
  solve->add_option("--algo", algo, "oracle|dp|vc|auto")
      ->check(CLI::IsMember({"oracle", "dp", "vc", "auto"}));
  solve->add_option("--size-cap", size_cap, "coalition size cap or 'auto'");
  solve->add_option("--threshold", threshold,
                    "exit 0 iff welfare reaches this value");
  solve->add_option("--output", output_path, "write the outcome here");
  solve->add_option("--limit-n", limit_n, "oracle agent guard");
  solve->add_option("--vc-guard", vc_guard, "vertex cover size guard");
  solve->add_option("--threads", threads, "oracle worker threads");

  // check
  auto* check = app.add_subcommand("check", "validate an outcome");
  std::string outcome_path, stability = "none";
  add_input(check);
  check->add_option("--outcome", outcome_path, "outcome file")->required();
  check->add_option("--stability", stability, "ir|ns|none")
      ->check(CLI::IsMember({"ir", "ns", "none"}));

  // bounds
  auto* bounds = app.add_subcommand("bounds", "report structural bounds");
  add_input(bounds);

  // gen
  auto* gen = app.add_subcommand("gen", "write a generated instance");
  std::string kind, gen_scoring, gen_input, gen_output;
  int gen_n = 10;
  double edge_prob = 0.3;
  std::uint64_t seed = 1;
  std::int64_t s1 = 1;
  bool gen_open = false, gen_connected = false, gen_no_isolated = false;
  gen->add_option("--kind", kind, "lemma2|lemma3|3ctcg|random")->required();
  gen->add_option("--n", gen_n, "agent count (random)");
  gen->add_option("--edge-prob", edge_prob, "edge probability (random)");
  gen->add_option("--seed", seed, "random seed");
  gen->add_option("--scoring", gen_scoring, "comma-separated scores (random)");
  gen->add_flag("--open", gen_open, "open scoring mode (random)");
  gen->add_flag("--connected", gen_connected, "resample until connected");
  gen->add_flag("--no-isolated", gen_no_isolated,
                "resample until no isolated agents");
  gen->add_option("--input", gen_input, "covered graph (3ctcg)");
  gen->add_option("--s1", s1, "unit score used by the 3ctcg reduction");
  gen->add_option("--output", gen_output, "write the instance here");
  gen->add_flag("--pretty", pretty, "indent JSON output");

  // decompose
  auto* decompose =
      app.add_subcommand("decompose", "write a nice tree decomposition");
  std::string dec_output;
  add_input(decompose);
  decompose->add_option("--output", dec_output, "write the decomposition here");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitYes;
  } catch (const CLI::ParseError& e) {
    err << error_to_json("usage", e.what()) << "\n";
    return kExitUsage;
  }

  try {
    if (solve->parsed())
      return run_solve(input, mode_name, algo, size_cap, threshold,
                       output_path, limit_n, vc_guard, threads, pretty, out,
                       err);
    if (check->parsed())
      return run_check(input, outcome_path, stability, pretty, out, err);
    if (bounds->parsed()) return run_bounds(input, pretty, out);
    if (gen->parsed())
      return run_gen(kind, gen_n, edge_prob, seed, gen_scoring, gen_open,
                     gen_connected, gen_no_isolated, gen_input, s1, gen_output,
                     pretty, out);
    if (decompose->parsed()) return run_decompose(input, dec_output, pretty, out);
    err << error_to_json("usage", "no command given") << "\n";
    return kExitUsage;
  } catch (const ParseError& e) {
    err << error_to_json("input", e.what()) << "\n";
    return kExitUsage;
  } catch (const PartitionError& e) {
    err << error_to_json("invalid-outcome", e.what()) << "\n";
    return kExitUsage;
  } catch (const RefusalError& e) {
    err << error_to_json("refused", e.what()) << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << error_to_json("input", e.what()) << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << error_to_json("internal", e.what()) << "\n";
    return kExitInternal;
  }
}

}  // namespace sdg::cli
