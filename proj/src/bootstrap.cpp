#include "rdbn/bootstrap.hpp"

#include "rdbn/csv.hpp"
#include "rdbn/parallel.hpp"
#include "rdbn/rng.hpp"
#include "rdbn/warnings.hpp"

#include <json.hpp>

#include <algorithm>
#include <random>
#include <tuple>

namespace rdbn {

namespace {

/// Row resample with replacement; zero-variance columns invalidate the
/// draw (the structure score is undefined on a constant column).
DataTable resample_rows(const DataTable& data, Rng& rng) {
  const Index n = data.rows();
  std::uniform_int_distribution<Index> pick(0, n - 1);
  DataTable out;
  out.columns = data.columns;
  out.values.resize(n, data.cols());
  for (Index i = 0; i < n; ++i) out.values.row(i) = data.values.row(pick(rng));
  return out;
}

bool has_degenerate_column(const DataTable& data) {
  for (Index j = 0; j < data.cols(); ++j) {
    double mean = data.values.col(j).mean();
    double var = (data.values.col(j).array() - mean).square().sum();
    if (var <= 0.0) return true;
  }
  return false;
}

}  // namespace

int EdgeStrengthTable::index_of(const std::string& label) const {
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == label) return static_cast<int>(i);
  }
  return -1;
}

double EdgeStrengthTable::at(const std::string& parent, const std::string& child) const {
  int p = index_of(parent);
  int c = index_of(child);
  if (p < 0 || c < 0) return 0.0;
  return strength(p, c);
}

std::vector<EdgeStrengthTable::Entry> EdgeStrengthTable::entries() const {
  std::vector<Entry> out;
  for (std::size_t p = 0; p < labels.size(); ++p) {
    for (std::size_t c = 0; c < labels.size(); ++c) {
      double s = strength(static_cast<Index>(p), static_cast<Index>(c));
      if (s > 0.0) out.push_back({labels[p], labels[c], s});
    }
  }
  std::sort(out.begin(), out.end(), [](const Entry& a, const Entry& b) {
    return std::tie(a.parent, a.child) < std::tie(b.parent, b.child);
  });
  return out;
}

EdgeStrengthTable bootstrap_strength(const DataTable& data,
                                     const EdgeConstraintSet& constraints,
                                     const SearchConfig& config, int replicates,
                                     std::uint64_t seed, int jobs) {
  if (replicates < 1) throw ValidationError("bootstrap needs at least one replicate");
  const auto p = static_cast<Index>(data.columns.size());

  std::vector<Dag> learned(static_cast<std::size_t>(replicates));
  parallel_for(static_cast<std::size_t>(replicates), jobs, [&](std::size_t r) {
    std::uint64_t replicate_seed = mix_seed(seed, r);
    DataTable sample;
    int redraws = 0;
    for (;;) {
      Rng rng = make_rng(replicate_seed, static_cast<std::uint64_t>(redraws));
      sample = resample_rows(data, rng);
      if (!has_degenerate_column(sample)) break;
      if (++redraws > 10)
        throw NumericError("replicate " + std::to_string(r) +
                           ": 10 redraws all produced a zero-variance column");
      warn("replicate " + std::to_string(r) + ": zero-variance column, redrawing");
    }
    SearchConfig replicate_config = config;
    replicate_config.seed = mix_seed(replicate_seed, 0x5eedULL);
    learned[r] = hill_climb(sample, constraints, replicate_config).dag;
  });

  EdgeStrengthTable table;
  table.labels = data.columns;
  table.replicates = replicates;
  table.strength = Matrix::Zero(p, p);
  for (const Dag& dag : learned) {
    for (const auto& [a, b] : dag.edge_indices()) table.strength(a, b) += 1.0;
  }
  table.strength /= static_cast<double>(replicates);
  return table;
}

Dag average_network(const EdgeStrengthTable& strengths, double threshold,
                    std::vector<Edge>* skipped) {
  if (!(threshold > 0.0) || threshold > 1.0)
    throw ValidationError("threshold must lie in (0, 1]");

  auto selected = strengths.entries();
  selected.erase(std::remove_if(selected.begin(), selected.end(),
                                [&](const EdgeStrengthTable::Entry& e) {
                                  return e.strength < threshold;
                                }),
                 selected.end());
  // Decreasing strength, then (parent, child) for reproducibility.
  std::stable_sort(selected.begin(), selected.end(),
                   [](const EdgeStrengthTable::Entry& a, const EdgeStrengthTable::Entry& b) {
                     return a.strength > b.strength;
                   });

  Dag dag(strengths.labels);
  for (const auto& e : selected) {
    int p = dag.require_node(e.parent);
    int c = dag.require_node(e.child);
    if (dag.has_edge(c, p) || dag.creates_cycle(p, c)) {
      warn("consensus edge " + e.parent + " -> " + e.child +
           " skipped: would close a cycle");
      if (skipped != nullptr) skipped->push_back({e.parent, e.child});
      continue;
    }
    dag.add_edge(p, c);
  }
  return dag;
}

std::string strengths_to_csv(const EdgeStrengthTable& strengths) {
  std::string out = "parent,child,strength\n";
  for (const auto& e : strengths.entries()) {
    out += e.parent + "," + e.child + "," + csv::format(e.strength) + "\n";
  }
  return out;
}

std::string strengths_to_json(const EdgeStrengthTable& strengths) {
  nlohmann::json doc;
  doc["replicates"] = strengths.replicates;
  doc["labels"] = strengths.labels;
  nlohmann::json edges = nlohmann::json::array();
  for (const auto& e : strengths.entries()) {
    edges.push_back({{"parent", e.parent}, {"child", e.child}, {"strength", e.strength}});
  }
  doc["edges"] = edges;
  return doc.dump(2);
}

EdgeStrengthTable strengths_from_csv(const std::string& text) {
  auto rows = csv::parse(text);
  if (rows.empty() || rows[0] != std::vector<std::string>{"parent", "child", "strength"})
    throw ValidationError("strengths CSV must start with header parent,child,strength");

  std::vector<std::string> labels;
  auto intern = [&labels](const std::string& name) {
    if (std::find(labels.begin(), labels.end(), name) == labels.end())
      labels.push_back(name);
  };
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].size() != 3)
      throw ValidationError("line " + std::to_string(i + 1) + ": expected 3 fields");
    intern(rows[i][0]);
    intern(rows[i][1]);
  }
  std::sort(labels.begin(), labels.end());

  EdgeStrengthTable table;
  table.labels = labels;
  table.strength = Matrix::Zero(static_cast<Index>(labels.size()),
                                static_cast<Index>(labels.size()));
  for (std::size_t i = 1; i < rows.size(); ++i) {
    int p = table.index_of(rows[i][0]);
    int c = table.index_of(rows[i][1]);
    table.strength(p, c) =
        csv::parse_double(rows[i][2], static_cast<int>(i + 1), "strength");
  }
  return table;
}

}  // namespace rdbn
