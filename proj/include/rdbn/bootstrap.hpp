#pragma once

#include "rdbn/dag.hpp"
#include "rdbn/structure_search.hpp"
#include "rdbn/types.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace rdbn {

/// Bootstrap inclusion frequency per directed edge.
struct EdgeStrengthTable {
  std::vector<std::string> labels;
  Matrix strength;  // (parent, child), values in [0, 1]
  int replicates = 0;

  int index_of(const std::string& label) const;
  double at(const std::string& parent, const std::string& child) const;

  struct Entry {
    std::string parent;
    std::string child;
    double strength;
  };
  /// Positive-strength edges sorted by (parent, child).
  std::vector<Entry> entries() const;
};

/// Resamples rows with replacement R times, learns a structure per
/// replicate with hill_climb and counts edge inclusions. Per-replicate
/// seeds derive from `seed` by replicate index, so the table is identical
/// for any job count. Replicates with a zero-variance column are redrawn
/// (at most 10 times each).
EdgeStrengthTable bootstrap_strength(const DataTable& data,
                                     const EdgeConstraintSet& constraints,
                                     const SearchConfig& config, int replicates,
                                     std::uint64_t seed, int jobs = 1);

/// Consensus graph: edges with strength >= threshold, admitted in
/// decreasing strength order; edges that would close a cycle are skipped
/// with a warning (also reported through `skipped` when given).
Dag average_network(const EdgeStrengthTable& strengths, double threshold,
                    std::vector<Edge>* skipped = nullptr);

std::string strengths_to_csv(const EdgeStrengthTable& strengths);
std::string strengths_to_json(const EdgeStrengthTable& strengths);
EdgeStrengthTable strengths_from_csv(const std::string& text);

}  // namespace rdbn
