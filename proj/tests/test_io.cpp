#include <doctest.h>

#include "curvkit/io.hpp"

#include <sstream>

using namespace curvkit;

namespace {
FiniteMetric csv(const std::string& text) {
  std::istringstream in(text);
  return read_csv_metric(in, "t.csv");
}

// line/column of a failing parse, or (-1, -1) when it succeeds
std::pair<int, int> error_at(const std::string& text) {
  try {
    csv(text);
  } catch (const InputError& e) {
    return {e.line(), e.column()};
  }
  return {-1, -1};
}
}  // namespace

TEST_CASE("csv metrics") {
  FiniteMetric M = csv("a,b,c\n0,1,2\n1,0,1\n2,1,0\n");
  CHECK(M.size() == 3);
  CHECK(M.label(2) == "c");
  CHECK(M(0, 2) == 2);

  // row labels, comments, blank lines, CRLF and quoted labels
  FiniteMetric L = csv("# tripod\n\"x, 1\",b\r\n\n\"x, 1\",0,1.5\nb,1.5,0\n");
  CHECK(L.label(0) == "x, 1");
  CHECK(L(0, 1) == 1.5);

  CHECK(error_at("a,b\n0,1\n1,x\n") == std::pair{3, 3});
  CHECK(error_at("a,b\n0,1,2\n1,0\n").first == 2);
  CHECK(error_at("a,b\n0,1\n").first == 2);  // missing row, reported at the end
  CHECK(error_at("a,b\nq,0,1\nb,1,0\n") == std::pair{2, 1});
  CHECK(error_at("a,,c\n") == std::pair{1, 3});
  CHECK(error_at("\"a,b\n") == std::pair{1, 1});
  CHECK(error_at("") == std::pair{0, 0});
  // metric violations name the row
  auto [line, col] = error_at("a,b,c\n0,1,5\n1,0,1\n5,1,0\n");
  CHECK(line >= 2);
  CHECK(error_at("a,b\n0,1\n2,0\n").first > 0);

  // write -> read is exact
  Mat d(3, 3);
  d << 0, 0.1, 1.0 / 3, 0.1, 0, 0.3, 1.0 / 3, 0.3, 0;
  FiniteMetric W = validate_metric(d, {"p", "q r", "s\"t"});
  std::ostringstream os;
  write_csv_metric(os, W);
  FiniteMetric R = csv(os.str());
  CHECK(R.table() == W.table());
  CHECK(R.labels() == W.labels());
}

TEST_CASE("json graphs") {
  Graph g = parse_json_graph(R"({"vertices": ["a", "b", "c"],
    "edges": [[0, 1, 1.5], [1, 2, 2]], "tags": {"ends": [0, 2]}})");
  CHECK(g.n == 3);
  CHECK(g.labels[1] == "b");
  CHECK(g.tags["ends"] == std::vector<int>{0, 2});
  CHECK(shortest_metric(g).distance(0, 2) == 3.5);
  // coords are given for every vertex or for none
  CHECK_THROWS_AS(parse_json_graph(R"({"vertices": ["a", {"label": "b", "coords": [1, 2]}], "edges": []})"),
                  InputError);
}

TEST_CASE("json graph errors") {
  auto where = [](const std::string& text) {
    try {
      parse_json_graph(text, "g.json");
    } catch (const InputError& e) {
      return std::pair{e.line(), e.column()};
    }
    return std::pair{-1, -1};
  };
  CHECK(where("{\"vertices\": [],\n  \"edges\": [,]}") == std::pair{2, 13});
  CHECK(where(R"({"vertices": ["a"], "edges": [[0, 1, 1]]})").first == 0);
  CHECK(where(R"({"vertices": ["a", "b"], "edges": [[0, 1, -1]]})").first == 0);
  CHECK(where(R"({"vertices": ["a", "b"], "edges": [[0, 1]]})").first == 0);
  CHECK(where(R"({"edges": []})").first == 0);
  CHECK(where(R"({"vertices": ["a"], "edges": [], "tags": {"t": ["x"]}})").first == 0);
  CHECK(where("[1, 2]").first == 0);

  // round trip through graph_json keeps edges, tags, coords and the budget
  Graph g;
  g.n = 3;
  g.edges = {{0, 1, 0.5}, {1, 2, 0.25}};
  g.tags["A"] = {0, 2};
  for (int i = 0; i < 3; ++i) g.coords.push_back(Vec::Constant(2, i));
  SampledSpace S(g);
  S.set_budget(0.01, 0.1);
  Graph h = parse_json_graph(graph_json(S).dump());
  CHECK(h.n == 3);
  CHECK(h.edges.size() == 2);
  CHECK(h.edges[1].w == 0.25);
  CHECK(h.tags["A"] == std::vector<int>{0, 2});
  REQUIRE(h.coords.size() == 3);
  CHECK(h.coords[2][1] == 2);
  CHECK(graph_json(S)["budget"]["delta"] == 0.01);
}

TEST_CASE("reports") {
  CHECK(number(kInf) == "inf");
  CHECK(number(-kInf) == "-inf");
  CHECK(number(kNaN) == "nan");
  CHECK(number(0.5) == 0.5);

  Verdict v;
  v.test = "t";
  v.kappa = 0;
  v.margin = -1;
  v.witness.indices = {2, 0};
  v.settle();
  FiniteMetric M = validate_metric(Mat::Zero(3, 3) + (Mat::Ones(3, 3) - Mat::Identity(3, 3)), {"x", "y", "z"});
  Json j = verdict_json(v, &M);
  CHECK(j["pass"] == false);
  CHECK(j["witness"]["labels"] == Json::array({"z", "x"}));
  Json r = report("demo", Json::object(), j);
  CHECK(r["schema"] == "curvkit/1");
  // same content, same bytes; key order is insertion order
  CHECK(dump(r) == dump(report("demo", Json::object(), verdict_json(v, &M))));
  CHECK(dump(r).find("\"schema\"") < dump(r).find("\"command\""));

  DiscreteCurve c;
  c.params = {0, 0.5};
  c.points = {Vec::Zero(2), Vec::Ones(2)};
  c.margins = {kInf, 0};
  Json t = trace_json(c);
  CHECK(t["points"][1][0] == 1.0);
  CHECK(t["margins"][0] == "inf");

  std::string svg = svg_plot({PlotLayer{{Eigen::Vector2d(0, 0), Eigen::Vector2d(1, 1)}}}, "x");
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("polyline") != std::string::npos);
}
