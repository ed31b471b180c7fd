#pragma once

#include "curvkit/comparison.hpp"
#include "curvkit/flows.hpp"

#include <json.hpp>

#include <iosfwd>
#include <stdexcept>
#include <string>

namespace curvkit {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchema = "curvkit/1";

// Malformed input, with a 1-based position (0 when not applicable).
class InputError : public std::runtime_error {
 public:
  InputError(const std::string& source, int line, int column, const std::string& msg);
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_, column_;
};

// CSV distance matrix: a header row of labels, then one row per point.  A row
// may start with its label (n + 1 fields).  Blank lines and lines starting
// with '#' are skipped.  The table is validated as a metric.
FiniteMetric read_csv_metric(std::istream& in, const std::string& source = "<stdin>");
FiniteMetric load_csv_metric(const std::string& path);
void write_csv_metric(std::ostream& out, const FiniteMetric& M);

// {"vertices": [...], "edges": [[i, j, w], ...], "tags": {...}}.  Vertices are
// labels (strings) or objects {"label": ..., "coords": [...]}.  An optional
// "budget": {"delta": d, "h": h} carries the discretization budget.
Graph parse_json_graph(const std::string& text, const std::string& source = "<stdin>");
Graph load_json_graph(const std::string& path);
// Shortest-path space of a JSON graph, with its budget if recorded.
SampledSpace load_sampled_space(const std::string& path);
Json graph_json(const SampledSpace& S);

// Loads a .csv metric or a .json graph (shortest-path metric) by extension.
FiniteMetric load_metric(const std::string& path);

// Numbers with non-finite values spelled out ("inf", "-inf", "nan").
Json number(double x);
Json numbers(const std::vector<double>& xs);
Json vec_json(const Vec& v);
Json verdict_json(const Verdict& v, const FiniteMetric* M = nullptr);
Json threshold_json(const Threshold& t);
Json trace_json(const DiscreteCurve& c);

// {"schema": ..., "command": ..., "config": ..., "result": ...}
Json report(const std::string& command, Json config, Json result);
std::string dump(const Json& j);

// Minimal SVG plots (artifacts only).
struct PlotLayer {
  std::vector<Eigen::Vector2d> points;
  std::string color = "#1f4e8c";
  bool polyline = true;  // otherwise markers
};
std::string svg_plot(const std::vector<PlotLayer>& layers, const std::string& title);
std::string development_svg(const Development& d);

}  // namespace curvkit
