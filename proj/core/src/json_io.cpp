#include "sdg/json_io.hpp"

#include <istream>
#include <map>

#include <json.hpp>

#include "sdg/errors.hpp"

namespace sdg {

using nlohmann::json;

namespace {

json parse(const std::string& text) {
  json doc = json::parse(text, nullptr, false);
  if (doc.is_discarded()) throw ParseError("invalid JSON");
  return doc;
}

std::string dump(const json& doc, int indent) {
  return indent < 0 ? doc.dump() : doc.dump(indent);
}

json welfare_to_json(Welfare w) {
  if (w.is_finite()) return w.value();
  return "-inf";
}

ScoringVector scoring_from_json(const json& doc) {
  if (!doc.is_array() || doc.empty())
    throw ParseError("\"scoring\" must be a non-empty integer array");
  std::vector<std::int64_t> entries;
  for (const auto& e : doc) {
    if (!e.is_number_integer())
      throw ParseError("scoring entries must be integers");
    entries.push_back(e.get<std::int64_t>());
  }
  try {
    return ScoringVector(std::move(entries));
  } catch (const std::invalid_argument& ex) {
    throw ParseError(ex.what());
  }
}

}  // namespace

Instance instance_from_json(const std::string& text) {
  json doc = parse(text);
  if (!doc.is_object()) throw ParseError("instance document must be an object");
  if (!doc.contains("scoring")) throw ParseError("missing \"scoring\"");
  ScoringVector scoring = scoring_from_json(doc["scoring"]);
  bool open_mode = doc.value("open", false);

  std::map<std::string, int> label_ids;
  if (doc.contains("labels")) {
    if (!doc["labels"].is_object())
      throw ParseError("\"labels\" must map names to agent ids");
    for (auto& [name, id] : doc["labels"].items()) {
      if (!id.is_number_integer()) throw ParseError("label ids must be integers");
      label_ids[name] = id.get<int>();
    }
  }

  std::optional<int> declared_agents;
  if (doc.contains("agents")) {
    if (!doc["agents"].is_number_integer())
      throw ParseError("\"agents\" must be an integer");
    declared_agents = doc["agents"].get<int>();
  }

  auto resolve = [&](const json& endpoint) -> int {
    if (endpoint.is_number_integer()) return endpoint.get<int>();
    if (endpoint.is_string()) {
      std::string name = endpoint.get<std::string>();
      auto it = label_ids.find(name);
      if (it != label_ids.end()) return it->second;
      int id = static_cast<int>(label_ids.size());
      label_ids[name] = id;
      return id;
    }
    throw ParseError("edge endpoints must be integers or label strings");
  };

  std::vector<std::pair<int, int>> edges;
  if (doc.contains("edges")) {
    if (!doc["edges"].is_array()) throw ParseError("\"edges\" must be an array");
    for (const auto& e : doc["edges"]) {
      if (!e.is_array() || e.size() != 2)
        throw ParseError("each edge must be a pair");
      int a = resolve(e[0]);  // sequenced: first-appearance ids stay stable
      int b = resolve(e[1]);
      edges.emplace_back(a, b);
    }
  }

  int n = declared_agents.value_or(static_cast<int>(label_ids.size()));
  if (n == 0 && !label_ids.empty()) n = static_cast<int>(label_ids.size());

  std::vector<std::string> labels;
  if (!label_ids.empty()) {
    labels.assign(n, "");
    for (const auto& [name, id] : label_ids) {
      if (id < 0 || id >= n)
        throw ParseError("label \"" + name + "\" maps outside 0.." +
                         std::to_string(n - 1));
      if (!labels[id].empty())
        throw ParseError("two labels map to agent " + std::to_string(id));
      labels[id] = name;
    }
    for (int i = 0; i < n; ++i)
      if (labels[i].empty()) labels[i] = std::to_string(i);
  }

  try {
    return Instance(n, std::move(edges), std::move(scoring), open_mode,
                    std::move(labels));
  } catch (const std::invalid_argument& ex) {
    throw ParseError(ex.what());
  }
}

std::string instance_to_json(const Instance& inst, int indent) {
  json doc;
  doc["agents"] = inst.agent_count();
  json edges = json::array();
  for (const auto& [a, b] : inst.edges()) edges.push_back({a, b});
  doc["edges"] = std::move(edges);
  doc["scoring"] = inst.scoring().entries();
  doc["open"] = inst.open_mode();
  if (!inst.labels().empty()) {
    json labels = json::object();
    for (int i = 0; i < inst.agent_count(); ++i)
      labels[inst.labels()[i]] = i;
    doc["labels"] = std::move(labels);
  }
  return dump(doc, indent);
}

Instance instance_from_edge_list(std::istream& in, ScoringVector scoring,
                                 bool open_mode) {
  int n = 0, m = 0;
  if (!(in >> n >> m)) throw ParseError("edge list needs an \"n m\" header");
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < m; ++i) {
    int a = 0, b = 0;
    if (!(in >> a >> b))
      throw ParseError("edge list ended after " + std::to_string(i) +
                       " of " + std::to_string(m) + " edges");
    edges.emplace_back(a, b);
  }
  try {
    return Instance(n, std::move(edges), std::move(scoring), open_mode);
  } catch (const std::invalid_argument& ex) {
    throw ParseError(ex.what());
  }
}

ParsedOutcome outcome_from_json(const std::string& text) {
  json doc = parse(text);
  if (!doc.is_object() || !doc.contains("coalitions") ||
      !doc["coalitions"].is_array())
    throw ParseError("outcome document needs a \"coalitions\" array");
  ParsedOutcome out;
  for (const auto& block : doc["coalitions"]) {
    if (!block.is_array()) throw ParseError("each coalition must be an array");
    std::vector<int> members;
    for (const auto& m : block) {
      if (!m.is_number_integer())
        throw ParseError("coalition members must be agent ids");
      members.push_back(m.get<int>());
    }
    out.blocks.push_back(std::move(members));
  }
  if (doc.contains("welfare")) {
    if (doc["welfare"].is_string() && doc["welfare"] == "-inf")
      out.declared_welfare = Welfare::neg_inf();
    else if (doc["welfare"].is_number_integer())
      out.declared_welfare = Welfare(doc["welfare"].get<std::int64_t>());
    else
      throw ParseError("\"welfare\" must be an integer or \"-inf\"");
  }
  return out;
}

std::string outcome_to_json(const Instance& inst, const Outcome& outcome,
                            int indent) {
  json doc;
  json coalitions = json::array();
  for (const Coalition& c : outcome.coalitions) coalitions.push_back(c.members);
  doc["coalitions"] = std::move(coalitions);
  doc["welfare"] = welfare_to_json(outcome.welfare);
  if (!inst.labels().empty()) {
    json labels = json::object();
    for (int i = 0; i < inst.agent_count(); ++i)
      labels[inst.labels()[i]] = i;
    doc["labels"] = std::move(labels);
  }
  return dump(doc, indent);
}

std::string solve_result_to_json(const Instance& inst, const SolveResult& r,
                                 SolveMode mode, int indent) {
  json doc;
  doc["mode"] = to_string(mode);
  doc["algorithm"] = r.algorithm;
  doc["welfare"] = welfare_to_json(r.welfare);
  doc["optimal_count"] = r.optimal_count;
  doc["explored"] = r.explored;
  if (r.best) {
    json coalitions = json::array();
    for (const Coalition& c : r.best->coalitions)
      coalitions.push_back(c.members);
    doc["best"] = {{"coalitions", std::move(coalitions)},
                   {"welfare", welfare_to_json(r.best->welfare)}};
  } else {
    doc["best"] = nullptr;
  }
  return dump(doc, indent);
}

std::string bounds_report_to_json(const BoundsReport& report, int indent) {
  json doc;
  doc["max_degree"] = report.max_degree;
  doc["treewidth_upper"] = report.treewidth_upper;
  doc["degree_size_bound"] = report.degree_size_bound.has_value()
                                 ? json(*report.degree_size_bound)
                                 : json("unbounded");
  doc["treewidth_size_bound"] = report.treewidth_size_bound.has_value()
                                    ? json(*report.treewidth_size_bound)
                                    : json("n/a");
  doc["wf_diameter_bound"] = report.wf_diameter_bound.has_value()
                                 ? json(*report.wf_diameter_bound)
                                 : json("n/a");
  doc["ns_ir_diameter_bound"] = report.ns_ir_diameter_bound.has_value()
                                    ? json(*report.ns_ir_diameter_bound)
                                    : json("n/a");
  return dump(doc, indent);
}

std::string decomposition_to_json(const NiceTreeDecomposition& dec,
                                  int indent) {
  json nodes = json::array();
  for (std::size_t id = 0; id < dec.nodes.size(); ++id) {
    const DecompositionNode& node = dec.nodes[id];
    json entry;
    entry["id"] = id;
    entry["kind"] = to_string(node.kind);
    if (node.kind == NodeKind::Introduce || node.kind == NodeKind::Forget)
      entry["agent"] = node.agent;
    entry["bag"] = node.bag;
    entry["children"] = node.children;
    nodes.push_back(std::move(entry));
  }
  json doc;
  doc["nodes"] = std::move(nodes);
  doc["root"] = dec.root;
  doc["width"] = dec.width();
  return dump(doc, indent);
}

NiceTreeDecomposition decomposition_from_json(const std::string& text) {
  json doc = parse(text);
  if (!doc.is_object() || !doc.contains("nodes") || !doc.contains("root"))
    throw ParseError("decomposition document needs \"nodes\" and \"root\"");
  NiceTreeDecomposition dec;
  dec.nodes.resize(doc["nodes"].size());
  for (const auto& entry : doc["nodes"]) {
    if (!entry.contains("id") || !entry["id"].is_number_integer())
      throw ParseError("decomposition node without id");
    int id = entry["id"].get<int>();
    if (id < 0 || id >= static_cast<int>(dec.nodes.size()))
      throw ParseError("decomposition node id out of range");
    DecompositionNode& node = dec.nodes[id];
    std::string kind = entry.value("kind", "");
    if (kind == "leaf") node.kind = NodeKind::Leaf;
    else if (kind == "introduce") node.kind = NodeKind::Introduce;
    else if (kind == "forget") node.kind = NodeKind::Forget;
    else if (kind == "join") node.kind = NodeKind::Join;
    else throw ParseError("unknown node kind \"" + kind + "\"");
    node.agent = entry.value("agent", -1);
    if (entry.contains("bag"))
      node.bag = entry["bag"].get<std::vector<int>>();
    if (entry.contains("children"))
      node.children = entry["children"].get<std::vector<int>>();
  }
  dec.root = doc["root"].get<int>();
  return dec;
}

std::string error_to_json(const std::string& kind, const std::string& message) {
  json doc;
  doc["error"] = kind;
  doc["message"] = message;
  return doc.dump();
}

}  // namespace sdg
