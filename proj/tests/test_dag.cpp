#include "rdbn/dag.hpp"
#include "rdbn/types.hpp"

#include <doctest.h>

#include <algorithm>
#include <string>
#include <vector>

using namespace rdbn;

TEST_CASE("validate_dag accepts a simple edge") {
  Dag dag = validate_dag({"a", "b"}, {{"a", "b"}});
  CHECK(dag.has_edge("a", "b"));
  CHECK(dag.edge_count() == 1);
}

TEST_CASE("validate_dag rejects a two-cycle") {
  CHECK_THROWS_AS(validate_dag({"a", "b"}, {{"a", "b"}, {"b", "a"}}), ValidationError);
}

TEST_CASE("validate_dag rejects a three-cycle and names it") {
  try {
    validate_dag({"a", "b", "c"}, {{"a", "b"}, {"b", "c"}, {"c", "a"}});
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    std::string what = e.what();
    CHECK(what.find("cycle") != std::string::npos);
    CHECK(what.find("->") != std::string::npos);
  }
}

TEST_CASE("validate_dag rejects duplicate edges and unknown nodes") {
  CHECK_THROWS_AS(validate_dag({"a", "b"}, {{"a", "b"}, {"a", "b"}}), ValidationError);
  CHECK_THROWS_AS(validate_dag({"a", "b"}, {{"a", "z"}}), ValidationError);
  CHECK_THROWS_AS(Dag({"a", "a"}), ValidationError);
}

TEST_CASE("topological order respects edges") {
  Dag dag = validate_dag({"c", "a", "b"}, {{"a", "b"}, {"b", "c"}});
  auto order = dag.topological_order();
  auto pos = [&](const std::string& label) {
    return std::find(order.begin(), order.end(), dag.index_of(label)) - order.begin();
  };
  CHECK(pos("a") < pos("b"));
  CHECK(pos("b") < pos("c"));
}

TEST_CASE("creates_cycle detects reachability") {
  Dag dag = validate_dag({"a", "b", "c"}, {{"a", "b"}, {"b", "c"}});
  CHECK(dag.creates_cycle(dag.index_of("c"), dag.index_of("a")));
  CHECK_FALSE(dag.creates_cycle(dag.index_of("a"), dag.index_of("c")));
}

TEST_CASE("edges are reported sorted") {
  Dag dag = validate_dag({"b", "a", "c"}, {{"b", "c"}, {"a", "c"}, {"a", "b"}});
  auto edges = dag.edges();
  CHECK(edges == std::vector<Edge>{{"a", "b"}, {"a", "c"}, {"b", "c"}});
}

TEST_CASE("dot export labels years and outcome") {
  Dag dag = validate_dag({"Y", "X2005"}, {{"X2005", "Y"}});
  DotOptions options;
  options.outcome_label = "Read";
  std::string dot = to_dot(dag, options);
  CHECK(dot.find("label=\"2005\"") != std::string::npos);
  CHECK(dot.find("label=\"Read\"") != std::string::npos);
  CHECK(dot.find("\"X2005\" -> \"Y\"") != std::string::npos);
}

TEST_CASE("dag json round trip") {
  Dag dag = validate_dag({"Y", "X2004", "X2005"}, {{"X2004", "X2005"}, {"X2005", "Y"}});
  Dag parsed = dag_from_json(dag_to_json(dag));
  CHECK(parsed == dag);
}
