#pragma once

#include "rdbn/dag.hpp"
#include "rdbn/linear_gaussian.hpp"
#include "rdbn/types.hpp"

#include <cstdint>
#include <set>
#include <string>
#include <vector>

namespace rdbn {

/// Forbidden and required directed edges for structure search.
struct EdgeConstraintSet {
  std::set<std::pair<std::string, std::string>> blacklist;
  std::set<std::pair<std::string, std::string>> whitelist;

  bool forbids(const std::string& parent, const std::string& child) const {
    return blacklist.count({parent, child}) > 0;
  }
  bool requires_edge(const std::string& parent, const std::string& child) const {
    return whitelist.count({parent, child}) > 0;
  }

  /// Disjointness and whitelist acyclicity.
  void validate() const;
};

/// Blacklists every edge pointing backwards in time (X_{t'} -> X_t with
/// t' > t) and every outcome -> X_t edge. Years must be strictly increasing.
EdgeConstraintSet temporal_blacklist(const std::vector<int>& years,
                                     const std::string& outcome);

/// Same constraint derived from column labels: labels of the form X<year>
/// are ordered by year; `outcome` may not point at any other column.
EdgeConstraintSet temporal_blacklist_from_labels(const std::vector<std::string>& labels,
                                                 const std::string& outcome);

struct SearchConfig {
  int restarts = 10;
  int perturbation = 4;       // random edges toggled per restart
  long max_iterations = 10000;
  std::uint64_t seed = 0;
  double tie_tolerance = 1e-9;
};

/// One accepted move of a climb, for the optional search trace.
struct SearchMove {
  long iteration = 0;
  std::string op;  // "add" | "delete" | "reverse"
  std::string parent;
  std::string child;
  double delta = 0.0;
  double score = 0.0;
};

struct SearchResult {
  Dag dag;
  double score = 0.0;
};

/// Greedy hill climbing over {add, delete, reverse} moves maximizing the
/// decomposable BIC score, restarted from random perturbations of the best
/// graph. Accepted moves never violate acyclicity or the blacklist and the
/// whitelist edges are never removed. Deterministic in (data, constraints,
/// config).
SearchResult hill_climb(const DataTable& data, const EdgeConstraintSet& constraints,
                        const SearchConfig& config,
                        std::vector<SearchMove>* trace = nullptr);

}  // namespace rdbn
