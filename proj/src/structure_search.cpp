#include "rdbn/structure_search.hpp"

#include "rdbn/rng.hpp"

#include <algorithm>
#include <limits>
#include <random>
#include <string>
#include <tuple>

namespace rdbn {

namespace {

std::string year_label(int year) { return "X" + std::to_string(year); }

/// Parses X<year> labels; returns -1 for anything else.
int label_year(const std::string& label) {
  if (label.size() < 2 || label[0] != 'X') return -1;
  for (std::size_t i = 1; i < label.size(); ++i) {
    if (label[i] < '0' || label[i] > '9') return -1;
  }
  return std::stoi(label.substr(1));
}

enum class MoveOp { add, remove, reverse };

const char* op_name(MoveOp op) {
  switch (op) {
    case MoveOp::add: return "add";
    case MoveOp::remove: return "delete";
    default: return "reverse";
  }
}

struct Candidate {
  MoveOp op;
  int parent;
  int child;
  double delta;
};

class Climber {
 public:
  Climber(const DataTable& data, const EdgeConstraintSet& constraints,
          const SearchConfig& config)
      : scorer_(data), config_(config), labels_(data.columns) {
    const int p = static_cast<int>(labels_.size());
    forbidden_ = BoolMatrix::Constant(p, p, false);
    required_ = BoolMatrix::Constant(p, p, false);
    for (const auto& [a, b] : constraints.blacklist) {
      int pa = index_of(a), ch = index_of(b);
      if (pa >= 0 && ch >= 0) forbidden_(pa, ch) = true;
    }
    for (const auto& [a, b] : constraints.whitelist) {
      int pa = index_of(a), ch = index_of(b);
      if (pa < 0 || ch < 0)
        throw ValidationError("whitelist edge references unknown column: " + a + " -> " + b);
      required_(pa, ch) = true;
    }
  }

  Dag start_graph() const {
    Dag dag(labels_);
    for (int a = 0; a < dag.node_count(); ++a) {
      for (int b = 0; b < dag.node_count(); ++b) {
        if (required_(a, b)) dag.add_edge(a, b);
      }
    }
    dag.topological_order();  // whitelist must be acyclic
    return dag;
  }

  double score(const Dag& dag) const { return scorer_.total(dag); }

  /// Greedy ascent; mutates dag in place and returns its final score.
  double climb(Dag& dag, std::vector<SearchMove>* trace, long& move_counter) const {
    const int p = dag.node_count();
    std::vector<double> local(static_cast<std::size_t>(p));
    double total = 0.0;
    for (int v = 0; v < p; ++v) {
      local[static_cast<std::size_t>(v)] = scorer_.local_score(v, dag.parents(v));
      total += local[static_cast<std::size_t>(v)];
    }

    for (long iter = 0; iter < config_.max_iterations; ++iter) {
      std::vector<Candidate> candidates;
      collect_moves(dag, local, candidates);
      if (candidates.empty()) break;

      double best_delta = -std::numeric_limits<double>::infinity();
      for (const Candidate& c : candidates) best_delta = std::max(best_delta, c.delta);
      if (!(best_delta > config_.tie_tolerance)) break;

      const Candidate* chosen = nullptr;
      for (const Candidate& c : candidates) {
        if (c.delta < best_delta - config_.tie_tolerance) continue;
        if (chosen == nullptr || move_key(c) < move_key(*chosen)) chosen = &c;
      }

      apply(dag, *chosen);
      local[static_cast<std::size_t>(chosen->child)] =
          scorer_.local_score(chosen->child, dag.parents(chosen->child));
      if (chosen->op == MoveOp::reverse) {
        local[static_cast<std::size_t>(chosen->parent)] =
            scorer_.local_score(chosen->parent, dag.parents(chosen->parent));
      }
      total += chosen->delta;
      ++move_counter;
      if (trace != nullptr) {
        trace->push_back({move_counter, op_name(chosen->op), dag.node(chosen->parent),
                          dag.node(chosen->child), chosen->delta, total});
      }
    }
    return total;
  }

  /// Toggles up to `count` random legal edges.
  void perturb(Dag& dag, Rng& rng, int count) const {
    const int p = dag.node_count();
    if (p < 2) return;
    std::uniform_int_distribution<int> pick(0, p - 1);
    int done = 0;
    for (int attempt = 0; attempt < 20 * count && done < count; ++attempt) {
      int a = pick(rng);
      int b = pick(rng);
      if (a == b) continue;
      if (dag.has_edge(a, b)) {
        if (required_(a, b)) continue;
        dag.remove_edge(a, b);
        ++done;
      } else {
        if (forbidden_(a, b) || dag.has_edge(b, a) || dag.creates_cycle(a, b)) continue;
        dag.add_edge(a, b);
        ++done;
      }
    }
  }

 private:
  int index_of(const std::string& label) const {
    for (std::size_t i = 0; i < labels_.size(); ++i) {
      if (labels_[i] == label) return static_cast<int>(i);
    }
    return -1;
  }

  std::tuple<std::string, std::string, int> move_key(const Candidate& c) const {
    // Reversal introduces the flipped edge; key it by that edge.
    int child = c.op == MoveOp::reverse ? c.parent : c.child;
    int parent = c.op == MoveOp::reverse ? c.child : c.parent;
    return {labels_[static_cast<std::size_t>(child)],
            labels_[static_cast<std::size_t>(parent)], static_cast<int>(c.op)};
  }

  void collect_moves(Dag& dag, const std::vector<double>& local,
                     std::vector<Candidate>& out) const {
    const int p = dag.node_count();
    for (int a = 0; a < p; ++a) {
      for (int b = 0; b < p; ++b) {
        if (a == b) continue;
        if (!dag.has_edge(a, b)) {
          if (forbidden_(a, b) || dag.has_edge(b, a) || dag.creates_cycle(a, b)) continue;
          std::vector<int> parents = dag.parents(b);
          parents.insert(std::lower_bound(parents.begin(), parents.end(), a), a);
          double delta = scorer_.local_score(b, parents) - local[static_cast<std::size_t>(b)];
          out.push_back({MoveOp::add, a, b, delta});
        } else {
          std::vector<int> reduced = dag.parents(b);
          reduced.erase(std::find(reduced.begin(), reduced.end(), a));
          double child_drop =
              scorer_.local_score(b, reduced) - local[static_cast<std::size_t>(b)];
          if (!required_(a, b)) {
            out.push_back({MoveOp::remove, a, b, child_drop});
            if (!forbidden_(b, a)) {
              dag.remove_edge(a, b);
              bool acyclic = !dag.creates_cycle(b, a);
              dag.add_edge(a, b);
              if (acyclic) {
                std::vector<int> gained = dag.parents(a);
                gained.insert(std::lower_bound(gained.begin(), gained.end(), b), b);
                double parent_gain =
                    scorer_.local_score(a, gained) - local[static_cast<std::size_t>(a)];
                out.push_back({MoveOp::reverse, a, b, child_drop + parent_gain});
              }
            }
          }
        }
      }
    }
  }

  void apply(Dag& dag, const Candidate& c) const {
    switch (c.op) {
      case MoveOp::add:
        dag.add_edge(c.parent, c.child);
        break;
      case MoveOp::remove:
        dag.remove_edge(c.parent, c.child);
        break;
      case MoveOp::reverse:
        dag.remove_edge(c.parent, c.child);
        dag.add_edge(c.child, c.parent);
        break;
    }
  }

  BicScorer scorer_;
  SearchConfig config_;
  std::vector<std::string> labels_;
  BoolMatrix forbidden_;
  BoolMatrix required_;
};

/// Lexicographic comparison of sorted edge lists, for deterministic
/// tie-breaking between equal-score graphs.
bool edges_less(const Dag& a, const Dag& b) { return a.edges() < b.edges(); }

}  // namespace

void EdgeConstraintSet::validate() const {
  for (const auto& e : whitelist) {
    if (blacklist.count(e) > 0)
      throw ValidationError("edge " + e.first + " -> " + e.second +
                            " is both blacklisted and whitelisted");
  }
  // Whitelist alone must be acyclic.
  std::vector<std::string> nodes;
  for (const auto& [a, b] : whitelist) {
    if (std::find(nodes.begin(), nodes.end(), a) == nodes.end()) nodes.push_back(a);
    if (std::find(nodes.begin(), nodes.end(), b) == nodes.end()) nodes.push_back(b);
  }
  std::vector<Edge> edges;
  for (const auto& [a, b] : whitelist) edges.push_back({a, b});
  Dag::validated(std::move(nodes), edges);
}

EdgeConstraintSet temporal_blacklist(const std::vector<int>& years,
                                     const std::string& outcome) {
  for (std::size_t i = 1; i < years.size(); ++i) {
    if (years[i] <= years[i - 1])
      throw ValidationError("years must be strictly increasing");
  }
  EdgeConstraintSet constraints;
  for (std::size_t i = 0; i < years.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      constraints.blacklist.insert({year_label(years[i]), year_label(years[j])});
    }
    constraints.blacklist.insert({outcome, year_label(years[i])});
  }
  return constraints;
}

EdgeConstraintSet temporal_blacklist_from_labels(const std::vector<std::string>& labels,
                                                 const std::string& outcome) {
  std::vector<int> years;
  bool has_outcome = false;
  for (const std::string& label : labels) {
    if (label == outcome) {
      has_outcome = true;
      continue;
    }
    int year = label_year(label);
    if (year >= 0) years.push_back(year);
  }
  std::sort(years.begin(), years.end());
  years.erase(std::unique(years.begin(), years.end()), years.end());

  EdgeConstraintSet constraints = temporal_blacklist(years, outcome);
  if (!has_outcome) {
    // No outcome column: drop the outcome rules synthesized above.
    for (auto it = constraints.blacklist.begin(); it != constraints.blacklist.end();) {
      it = it->first == outcome ? constraints.blacklist.erase(it) : std::next(it);
    }
  }
  return constraints;
}

SearchResult hill_climb(const DataTable& data, const EdgeConstraintSet& constraints,
                        const SearchConfig& config, std::vector<SearchMove>* trace) {
  if (data.rows() < 3) throw NumericError("insufficient data: need at least 3 rows");
  constraints.validate();

  Climber climber(data, constraints, config);
  Dag best = climber.start_graph();

  if (config.max_iterations == 0) return {best, climber.score(best)};

  long move_counter = 0;
  Dag current = best;
  double best_score = climber.climb(current, trace, move_counter);
  best = current;

  for (int r = 1; r <= config.restarts; ++r) {
    Dag candidate = best;
    Rng rng = make_rng(config.seed, static_cast<std::uint64_t>(r));
    climber.perturb(candidate, rng, config.perturbation);
    double score = climber.climb(candidate, trace, move_counter);
    if (score > best_score + config.tie_tolerance ||
        (score >= best_score - config.tie_tolerance && edges_less(candidate, best))) {
      best = candidate;
      best_score = score;
    }
  }
  return {best, best_score};
}

}  // namespace rdbn
