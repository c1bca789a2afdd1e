#include "rdbn/synthetic.hpp"

#include "rdbn/parallel.hpp"
#include "rdbn/rng.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

namespace rdbn {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string row_id(long i, long n) {
  int width = 1;
  for (long v = n - 1; v >= 10; v /= 10) ++width;
  std::ostringstream out;
  out << "S";
  std::string digits = std::to_string(i);
  out << std::string(static_cast<std::size_t>(width) - digits.size(), '0') << digits;
  return out.str();
}

}  // namespace

FittedNetwork scenario_truth(const ScenarioSpec& spec) {
  if (spec.labels.size() != spec.node_models.size())
    throw ValidationError("scenario: one node model per label required");
  Dag dag = Dag::validated(spec.labels, spec.edges);

  FittedNetwork net;
  net.dag = dag;
  net.sample_size = spec.n;
  net.nodes.resize(spec.labels.size());
  for (std::size_t i = 0; i < spec.labels.size(); ++i) {
    const LinearGaussianNode& model = spec.node_models[i];
    if (model.name != spec.labels[i])
      throw ValidationError("scenario: node model order must match labels");
    std::vector<std::string> expected;
    for (int p : dag.parents(static_cast<int>(i))) expected.push_back(dag.node(p));
    std::vector<std::string> declared = model.parents;
    std::sort(declared.begin(), declared.end());
    std::sort(expected.begin(), expected.end());
    if (declared != expected)
      throw ValidationError("scenario: parents of " + model.name +
                            " disagree with the edge list");
    if (model.residual_variance < 0.0)
      throw ValidationError("scenario: negative variance at " + model.name);
    net.nodes[i] = model;
  }
  return net;
}

std::string scenario_to_json(const ScenarioSpec& spec) {
  nlohmann::json doc;
  doc["name"] = spec.name;
  doc["labels"] = spec.labels;
  nlohmann::json edges = nlohmann::json::array();
  for (const Edge& e : spec.edges) edges.push_back({{"parent", e.parent}, {"child", e.child}});
  doc["edges"] = edges;
  nlohmann::json nodes = nlohmann::json::array();
  for (const LinearGaussianNode& model : spec.node_models) {
    std::vector<double> coef(model.coefficients.begin(), model.coefficients.end());
    nodes.push_back({{"name", model.name},
                     {"parents", model.parents},
                     {"intercept", model.intercept},
                     {"coefficients", coef},
                     {"residual_variance", model.residual_variance}});
  }
  doc["nodes"] = nodes;
  doc["n"] = spec.n;
  doc["missing_rate"] = spec.missing_rate;
  doc["seed"] = spec.seed;
  return doc.dump(2);
}

ScenarioSpec scenario_from_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(std::string("scenario JSON: ") + e.what());
  }
  try {
    ScenarioSpec spec;
    spec.name = doc.value("name", "scenario");
    spec.labels = doc.at("labels").get<std::vector<std::string>>();
    for (const auto& e : doc.at("edges")) {
      spec.edges.push_back({e.at("parent").get<std::string>(),
                            e.at("child").get<std::string>()});
    }
    for (const auto& node : doc.at("nodes")) {
      LinearGaussianNode model;
      model.name = node.at("name").get<std::string>();
      model.parents = node.at("parents").get<std::vector<std::string>>();
      auto coef = node.at("coefficients").get<std::vector<double>>();
      model.coefficients = Eigen::Map<const Vector>(coef.data(),
                                                    static_cast<Index>(coef.size()));
      model.intercept = node.at("intercept").get<double>();
      model.residual_variance = node.at("residual_variance").get<double>();
      spec.node_models.push_back(std::move(model));
    }
    spec.n = doc.value("n", 100L);
    spec.missing_rate = doc.value("missing_rate", 0.0);
    spec.seed = doc.value("seed", std::uint64_t{0});
    return spec;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("scenario JSON: ") + e.what());
  }
}

DataTable generate_from_network(const FittedNetwork& truth, long n, std::uint64_t seed) {
  const int d = truth.dag.node_count();
  DataTable data;
  data.columns = truth.dag.nodes();
  data.values.resize(n, d);

  Rng rng = make_rng(seed);
  std::normal_distribution<double> unit(0.0, 1.0);
  for (int v : truth.dag.topological_order()) {
    const LinearGaussianNode& model = truth.node(v);
    const std::vector<int> parents = truth.dag.parents(v);
    Vector column = Vector::Constant(n, model.intercept);
    for (std::size_t j = 0; j < parents.size(); ++j)
      column += model.coefficients(static_cast<Index>(j)) * data.values.col(parents[j]);
    if (model.residual_variance > 0.0) {
      const double sd = std::sqrt(model.residual_variance);
      for (Index i = 0; i < column.size(); ++i) column(i) += sd * unit(rng);
    }
    data.values.col(v) = column;
  }
  return data;
}

MergedDataset apply_mcar(const DataTable& data, double rate, std::uint64_t seed,
                         const std::string& outcome) {
  if (rate < 0.0 || rate >= 1.0)
    throw ValidationError("missing rate must lie in [0, 1)");
  const int outcome_col = data.require_column(outcome);
  const Index n = data.rows();
  const Index d = data.cols();

  // Outcome first, remaining columns in their original order.
  std::vector<Index> order{static_cast<Index>(outcome_col)};
  for (Index c = 0; c < d; ++c) {
    if (c != static_cast<Index>(outcome_col)) order.push_back(c);
  }
  std::vector<std::string> columns;
  for (Index c : order) columns.push_back(data.columns[static_cast<std::size_t>(c)]);

  Matrix values(n, d);
  for (Index j = 0; j < d; ++j) values.col(j) = data.values.col(order[static_cast<std::size_t>(j)]);
  BoolMatrix mask = BoolMatrix::Constant(n, d, false);

  Rng rng = make_rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (Index r = 0; r < n; ++r) {
    bool ok = false;
    for (int attempt = 0; attempt < 100 && !ok; ++attempt) {
      for (Index c = 1; c < d; ++c) mask(r, c) = unif(rng) < rate;
      for (Index c = 1; c < d; ++c) ok = ok || !mask(r, c);
    }
    if (!ok)
      throw NumericError("row " + std::to_string(r) +
                         ": 100 redraws left no observed predictor");
  }

  std::vector<std::string> ids;
  for (long i = 0; i < n; ++i) ids.push_back(row_id(i, n));
  Matrix masked = values;
  for (Index r = 0; r < n; ++r) {
    for (Index c = 1; c < d; ++c) {
      if (mask(r, c)) masked(r, c) = kNaN;
    }
  }
  return MergedDataset("synthetic", std::move(ids), std::move(columns),
                       std::move(masked), std::move(mask));
}

EnumerationResult enumerate_dags(const DataTable& data,
                                 const EdgeConstraintSet& constraints, int jobs,
                                 bool allow_five) {
  constraints.validate();
  const int p = static_cast<int>(data.columns.size());
  const int cap = allow_five ? 5 : 4;
  if (p > cap)
    throw ValidationError("enumeration refused for " + std::to_string(p) +
                          " variables (cap " + std::to_string(cap) + ")");

  // Ordered pairs still free after constraints; whitelist edges are fixed.
  std::vector<std::pair<int, int>> free_pairs;
  BoolMatrix forced = BoolMatrix::Constant(p, p, false);
  for (const auto& [a, b] : constraints.whitelist) {
    int pa = data.require_column(a);
    int ch = data.require_column(b);
    forced(pa, ch) = true;
  }
  for (int a = 0; a < p; ++a) {
    for (int b = 0; b < p; ++b) {
      if (a == b || forced(a, b)) continue;
      if (constraints.forbids(data.columns[static_cast<std::size_t>(a)],
                              data.columns[static_cast<std::size_t>(b)]))
        continue;
      free_pairs.emplace_back(a, b);
    }
  }

  const std::size_t bits = free_pairs.size();
  const std::uint64_t subsets = std::uint64_t{1} << bits;
  const std::size_t chunk_count = jobs > 1 ? static_cast<std::size_t>(jobs) * 8 : 1;
  const std::uint64_t chunk_size = (subsets + chunk_count - 1) / chunk_count;

  std::vector<std::vector<ScoredDag>> partial(chunk_count);
  parallel_for(chunk_count, jobs, [&](std::size_t chunk) {
    BicScorer scorer(data);
    const std::uint64_t begin = chunk * chunk_size;
    const std::uint64_t end = std::min(subsets, begin + chunk_size);
    bool adjacency[5][5];
    int in_degree[5];
    for (std::uint64_t subset = begin; subset < end; ++subset) {
      for (int a = 0; a < p; ++a) {
        for (int b = 0; b < p; ++b) adjacency[a][b] = forced(a, b);
      }
      for (std::size_t k = 0; k < bits; ++k) {
        if (subset & (std::uint64_t{1} << k))
          adjacency[free_pairs[k].first][free_pairs[k].second] = true;
      }
      // Reject antiparallel pairs, then check acyclicity (Kahn).
      bool valid = true;
      for (int a = 0; a < p && valid; ++a) {
        for (int b = a + 1; b < p && valid; ++b) {
          if (adjacency[a][b] && adjacency[b][a]) valid = false;
        }
      }
      if (!valid) continue;
      for (int b = 0; b < p; ++b) {
        in_degree[b] = 0;
        for (int a = 0; a < p; ++a) in_degree[b] += adjacency[a][b] ? 1 : 0;
      }
      int removed = 0;
      for (;;) {
        int u = -1;
        for (int v = 0; v < p; ++v) {
          if (in_degree[v] == 0) {
            u = v;
            break;
          }
        }
        if (u < 0) break;
        in_degree[u] = -1;
        ++removed;
        for (int v = 0; v < p; ++v) {
          if (adjacency[u][v]) --in_degree[v];
        }
      }
      if (removed != p) continue;

      double score = 0.0;
      std::vector<int> parents;
      for (int child = 0; child < p; ++child) {
        parents.clear();
        for (int a = 0; a < p; ++a) {
          if (adjacency[a][child]) parents.push_back(a);
        }
        score += scorer.local_score(child, parents);
      }
      ScoredDag entry;
      entry.score = score;
      for (int a = 0; a < p; ++a) {
        for (int b = 0; b < p; ++b) {
          if (adjacency[a][b])
            entry.edges.push_back({data.columns[static_cast<std::size_t>(a)],
                                   data.columns[static_cast<std::size_t>(b)]});
        }
      }
      std::sort(entry.edges.begin(), entry.edges.end());
      partial[chunk].push_back(std::move(entry));
    }
  });

  EnumerationResult result;
  for (auto& chunk : partial) {
    for (auto& entry : chunk) result.all.push_back(std::move(entry));
  }
  if (result.all.empty()) throw NumericError("no admissible DAG under the constraints");

  const ScoredDag* best = &result.all.front();
  for (const ScoredDag& entry : result.all) {
    if (entry.score > best->score ||
        (entry.score == best->score && entry.edges < best->edges)) {
      best = &entry;
    }
  }
  result.best = Dag::validated(data.columns, best->edges);
  result.best_score = best->score;
  return result;
}

ScenarioSpec study_mimic_scenario(long n) {
  ScenarioSpec spec;
  spec.name = "study-mimic";
  spec.n = n;

  spec.labels.push_back("Y");
  for (int year = kFirstYear; year <= kLastYear; ++year)
    spec.labels.push_back("X" + std::to_string(year));

  auto root = [](const std::string& name, double mean, double variance) {
    LinearGaussianNode node;
    node.name = name;
    node.intercept = mean;
    node.coefficients = Vector::Zero(0);
    node.residual_variance = variance;
    return node;
  };
  auto child = [](const std::string& name, const std::string& parent, double slope,
                  double intercept, double variance) {
    LinearGaussianNode node;
    node.name = name;
    node.parents = {parent};
    node.coefficients = Vector::Constant(1, slope);
    node.intercept = intercept;
    node.residual_variance = variance;
    return node;
  };

  // Var(X2005) under these settings is about 1.11; 1294 puts the outcome
  // R^2 near 0.35.
  std::vector<LinearGaussianNode> models;
  models.push_back(child("Y", "X2005", 25.0, 192.0, 1294.0));
  models.push_back(root("X1997", 10.0, 2.25));
  for (int year = 1998; year <= 2005; ++year) {
    models.push_back(child("X" + std::to_string(year), "X" + std::to_string(year - 1),
                           0.95, 0.5, 0.02));
  }
  for (int year = 2006; year <= kLastYear; ++year) {
    models.push_back(root("X" + std::to_string(year), 10.0, 2.25));
  }
  spec.node_models = std::move(models);

  spec.edges.push_back({"X2005", "Y"});
  for (int year = 1998; year <= 2005; ++year)
    spec.edges.push_back({"X" + std::to_string(year - 1), "X" + std::to_string(year)});
  return spec;
}

}  // namespace rdbn
