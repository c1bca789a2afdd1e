#pragma once

#include "rdbn/types.hpp"

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace rdbn {

/// Directed edge between labelled nodes.
struct Edge {
  std::string parent;
  std::string child;

  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Directed acyclic graph over labelled nodes. Edge mutations reject
/// duplicate and antiparallel edges; acyclicity is enforced by the
/// `validated` factory and by callers pre-checking `creates_cycle` before
/// `add_edge` (the hill-climb move loop does exactly that).
class Dag {
 public:
  Dag() = default;
  explicit Dag(std::vector<std::string> nodes);

  /// Checks node references, duplicates, antiparallel pairs and cycles;
  /// throws ValidationError naming one offending cycle otherwise.
  static Dag validated(std::vector<std::string> nodes,
                       const std::vector<Edge>& edges);

  int node_count() const { return static_cast<int>(nodes_.size()); }
  const std::vector<std::string>& nodes() const { return nodes_; }
  const std::string& node(int i) const { return nodes_[static_cast<std::size_t>(i)]; }

  /// Index of a label, -1 when absent.
  int index_of(const std::string& label) const;
  int require_node(const std::string& label) const;

  bool has_edge(int parent, int child) const { return adjacency_(parent, child); }
  bool has_edge(const std::string& parent, const std::string& child) const;

  void add_edge(int parent, int child);
  void remove_edge(int parent, int child);

  /// True when adding parent->child would close a directed cycle,
  /// i.e. child already reaches parent.
  bool creates_cycle(int parent, int child) const;

  std::vector<int> parents(int child) const;
  std::vector<int> children(int parent) const;
  int parent_count(int child) const;
  int edge_count() const { return edge_count_; }

  /// Edges as label pairs, sorted by (parent, child).
  std::vector<Edge> edges() const;
  /// Edges as index pairs, sorted.
  std::vector<std::pair<int, int>> edge_indices() const;

  bool is_acyclic() const;
  /// Kahn order; throws ValidationError describing one cycle if cyclic.
  std::vector<int> topological_order() const;

  friend bool operator==(const Dag& a, const Dag& b) {
    return a.nodes_ == b.nodes_ && a.edge_indices() == b.edge_indices();
  }

 private:
  std::vector<std::string> nodes_;
  BoolMatrix adjacency_;  // (parent, child)
  int edge_count_ = 0;
};

/// Equivalent to Dag::validated; mirrors the operation name used across
/// the toolkit's public surface.
Dag validate_dag(std::vector<std::string> nodes, const std::vector<Edge>& edges);

struct DotOptions {
  /// Label printed for the outcome node (e.g. "Read"); empty keeps the id.
  std::string outcome_label;
  std::string outcome_node = "Y";
  /// Optional per-edge attribute values (e.g. bootstrap strengths).
  std::map<std::pair<std::string, std::string>, double> edge_labels;
};

/// GraphViz rendering. Nodes named X<year> are displayed as the bare year.
std::string to_dot(const Dag& dag, const DotOptions& options = {});

/// Machine-readable graph exchange: {"nodes": [...], "edges": [...]} plus
/// any extra top-level fields supplied by the caller.
std::string dag_to_json(const Dag& dag);
Dag dag_from_json(const std::string& text);

}  // namespace rdbn
