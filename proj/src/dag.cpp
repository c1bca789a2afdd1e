#include "rdbn/dag.hpp"

#include <json.hpp>

#include <algorithm>
#include <sstream>

namespace rdbn {

namespace {

std::string cycle_to_string(const std::vector<std::string>& labels,
                            const std::vector<int>& cycle) {
  std::ostringstream out;
  for (std::size_t i = 0; i < cycle.size(); ++i) {
    if (i > 0) out << " -> ";
    out << labels[static_cast<std::size_t>(cycle[i])];
  }
  return out.str();
}

}  // namespace

Dag::Dag(std::vector<std::string> nodes) : nodes_(std::move(nodes)) {
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    for (std::size_t j = i + 1; j < nodes_.size(); ++j) {
      if (nodes_[i] == nodes_[j])
        throw ValidationError("duplicate node label: " + nodes_[i]);
    }
  }
  adjacency_ = BoolMatrix::Constant(static_cast<Index>(nodes_.size()),
                                    static_cast<Index>(nodes_.size()), false);
}

int Dag::index_of(const std::string& label) const {
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (nodes_[i] == label) return static_cast<int>(i);
  }
  return -1;
}

int Dag::require_node(const std::string& label) const {
  int idx = index_of(label);
  if (idx < 0) throw ValidationError("unknown node: " + label);
  return idx;
}

bool Dag::has_edge(const std::string& parent, const std::string& child) const {
  int p = index_of(parent);
  int c = index_of(child);
  return p >= 0 && c >= 0 && adjacency_(p, c);
}

void Dag::add_edge(int parent, int child) {
  if (parent == child)
    throw ValidationError("self-loop on node " + nodes_[static_cast<std::size_t>(parent)]);
  if (adjacency_(parent, child))
    throw ValidationError("duplicate edge " + nodes_[static_cast<std::size_t>(parent)] +
                          " -> " + nodes_[static_cast<std::size_t>(child)]);
  if (adjacency_(child, parent))
    throw ValidationError("antiparallel edge " + nodes_[static_cast<std::size_t>(parent)] +
                          " -> " + nodes_[static_cast<std::size_t>(child)]);
  adjacency_(parent, child) = true;
  ++edge_count_;
}

void Dag::remove_edge(int parent, int child) {
  if (!adjacency_(parent, child))
    throw ValidationError("no such edge " + nodes_[static_cast<std::size_t>(parent)] +
                          " -> " + nodes_[static_cast<std::size_t>(child)]);
  adjacency_(parent, child) = false;
  --edge_count_;
}

bool Dag::creates_cycle(int parent, int child) const {
  if (parent == child) return true;
  // DFS from child looking for parent.
  std::vector<int> stack{child};
  std::vector<bool> seen(nodes_.size(), false);
  seen[static_cast<std::size_t>(child)] = true;
  while (!stack.empty()) {
    int u = stack.back();
    stack.pop_back();
    for (int v = 0; v < node_count(); ++v) {
      if (!adjacency_(u, v) || seen[static_cast<std::size_t>(v)]) continue;
      if (v == parent) return true;
      seen[static_cast<std::size_t>(v)] = true;
      stack.push_back(v);
    }
  }
  return false;
}

std::vector<int> Dag::parents(int child) const {
  std::vector<int> out;
  for (int p = 0; p < node_count(); ++p) {
    if (adjacency_(p, child)) out.push_back(p);
  }
  return out;
}

std::vector<int> Dag::children(int parent) const {
  std::vector<int> out;
  for (int c = 0; c < node_count(); ++c) {
    if (adjacency_(parent, c)) out.push_back(c);
  }
  return out;
}

int Dag::parent_count(int child) const {
  int count = 0;
  for (int p = 0; p < node_count(); ++p) {
    if (adjacency_(p, child)) ++count;
  }
  return count;
}

std::vector<Edge> Dag::edges() const {
  std::vector<Edge> out;
  out.reserve(static_cast<std::size_t>(edge_count_));
  for (const auto& [p, c] : edge_indices()) {
    out.push_back({nodes_[static_cast<std::size_t>(p)], nodes_[static_cast<std::size_t>(c)]});
  }
  return out;
}

std::vector<std::pair<int, int>> Dag::edge_indices() const {
  std::vector<std::pair<int, int>> out;
  out.reserve(static_cast<std::size_t>(edge_count_));
  for (int p = 0; p < node_count(); ++p) {
    for (int c = 0; c < node_count(); ++c) {
      if (adjacency_(p, c)) out.emplace_back(p, c);
    }
  }
  return out;
}

bool Dag::is_acyclic() const {
  std::vector<int> in_degree(nodes_.size(), 0);
  for (int c = 0; c < node_count(); ++c) in_degree[static_cast<std::size_t>(c)] = parent_count(c);
  std::vector<int> stack;
  for (int v = 0; v < node_count(); ++v) {
    if (in_degree[static_cast<std::size_t>(v)] == 0) stack.push_back(v);
  }
  int removed = 0;
  while (!stack.empty()) {
    int u = stack.back();
    stack.pop_back();
    ++removed;
    for (int v = 0; v < node_count(); ++v) {
      if (adjacency_(u, v) && --in_degree[static_cast<std::size_t>(v)] == 0) stack.push_back(v);
    }
  }
  return removed == node_count();
}

std::vector<int> Dag::topological_order() const {
  std::vector<int> in_degree(nodes_.size(), 0);
  for (int c = 0; c < node_count(); ++c) in_degree[static_cast<std::size_t>(c)] = parent_count(c);
  std::vector<int> stack, order;
  for (int v = 0; v < node_count(); ++v) {
    if (in_degree[static_cast<std::size_t>(v)] == 0) stack.push_back(v);
  }
  while (!stack.empty()) {
    int u = stack.back();
    stack.pop_back();
    order.push_back(u);
    for (int v = 0; v < node_count(); ++v) {
      if (adjacency_(u, v) && --in_degree[static_cast<std::size_t>(v)] == 0) stack.push_back(v);
    }
  }
  if (static_cast<int>(order.size()) == node_count()) return order;

  // Every node left with in-degree > 0 has a parent in the residual set, so
  // walking parent links from any of them must revisit a node; that loop is
  // a directed cycle (read forwards after reversing the walk).
  int start = 0;
  while (in_degree[static_cast<std::size_t>(start)] == 0) ++start;
  std::vector<int> walk{start};
  std::vector<int> position(nodes_.size(), -1);
  position[static_cast<std::size_t>(start)] = 0;
  int u = start;
  for (;;) {
    int prev = -1;
    for (int p = 0; p < node_count(); ++p) {
      if (adjacency_(p, u) && in_degree[static_cast<std::size_t>(p)] > 0) {
        prev = p;
        break;
      }
    }
    if (position[static_cast<std::size_t>(prev)] >= 0) {
      std::vector<int> cycle(walk.begin() + position[static_cast<std::size_t>(prev)], walk.end());
      cycle.push_back(prev);
      std::reverse(cycle.begin(), cycle.end());
      throw ValidationError("cycle detected: " + cycle_to_string(nodes_, cycle));
    }
    position[static_cast<std::size_t>(prev)] = static_cast<int>(walk.size());
    walk.push_back(prev);
    u = prev;
  }
}

Dag Dag::validated(std::vector<std::string> nodes, const std::vector<Edge>& edges) {
  Dag dag(std::move(nodes));
  for (const Edge& e : edges) {
    int p = dag.require_node(e.parent);
    int c = dag.require_node(e.child);
    dag.add_edge(p, c);
  }
  dag.topological_order();  // throws on cycles
  return dag;
}

Dag validate_dag(std::vector<std::string> nodes, const std::vector<Edge>& edges) {
  return Dag::validated(std::move(nodes), edges);
}

std::string to_dot(const Dag& dag, const DotOptions& options) {
  auto display = [&](const std::string& id) -> std::string {
    if (id == options.outcome_node && !options.outcome_label.empty())
      return options.outcome_label;
    if (id.size() == 5 && id[0] == 'X' &&
        std::all_of(id.begin() + 1, id.end(), [](char ch) { return ch >= '0' && ch <= '9'; }))
      return id.substr(1);
    return id;
  };

  std::ostringstream out;
  out << "digraph bn {\n";
  for (const std::string& node : dag.nodes()) {
    out << "  \"" << node << "\" [label=\"" << display(node) << "\"];\n";
  }
  for (const Edge& e : dag.edges()) {
    out << "  \"" << e.parent << "\" -> \"" << e.child << "\"";
    auto it = options.edge_labels.find({e.parent, e.child});
    if (it != options.edge_labels.end()) {
      std::ostringstream label;
      label.precision(3);
      label << it->second;
      out << " [label=\"" << label.str() << "\"]";
    }
    out << ";\n";
  }
  out << "}\n";
  return out.str();
}

std::string dag_to_json(const Dag& dag) {
  nlohmann::json doc;
  doc["nodes"] = dag.nodes();
  nlohmann::json edges = nlohmann::json::array();
  for (const Edge& e : dag.edges())
    edges.push_back({{"parent", e.parent}, {"child", e.child}});
  doc["edges"] = edges;
  return doc.dump(2);
}

Dag dag_from_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(std::string("graph JSON: ") + e.what());
  }
  try {
    auto nodes = doc.at("nodes").get<std::vector<std::string>>();
    std::vector<Edge> edges;
    for (const auto& e : doc.at("edges")) {
      edges.push_back({e.at("parent").get<std::string>(),
                       e.at("child").get<std::string>()});
    }
    return Dag::validated(std::move(nodes), edges);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("graph JSON: ") + e.what());
  }
}

}  // namespace rdbn
