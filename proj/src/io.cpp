#include "curvkit/io.hpp"

#include <charconv>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace curvkit {

namespace {

std::string position(const std::string& source, int line, int column) {
  std::ostringstream os;
  os << source;
  if (line > 0) os << ":" << line;
  if (column > 0) os << ":" << column;
  return os.str();
}

struct Field {
  std::string text;
  int column;  // 1-based start
};

std::vector<Field> split_csv(const std::string& line, const std::string& source, int lineno) {
  std::vector<Field> out;
  std::size_t i = 0;
  const std::size_t n = line.size();
  while (true) {
    while (i < n && (line[i] == ' ' || line[i] == '\t')) ++i;
    Field f{"", static_cast<int>(i) + 1};
    if (i < n && line[i] == '"') {
      ++i;
      bool closed = false;
      while (i < n) {
        if (line[i] == '"') {
          if (i + 1 < n && line[i + 1] == '"') {
            f.text += '"';
            i += 2;
            continue;
          }
          closed = true;
          ++i;
          break;
        }
        f.text += line[i++];
      }
      if (!closed) throw InputError(source, lineno, f.column, "unterminated quoted field");
      while (i < n && (line[i] == ' ' || line[i] == '\t')) ++i;
      if (i < n && line[i] != ',')
        throw InputError(source, lineno, static_cast<int>(i) + 1, "unexpected text after quoted field");
    } else {
      std::size_t j = line.find(',', i);
      if (j == std::string::npos) j = n;
      f.text = line.substr(i, j - i);
      while (!f.text.empty() && (f.text.back() == ' ' || f.text.back() == '\t')) f.text.pop_back();
      i = j;
    }
    out.push_back(f);
    if (i >= n) break;
    ++i;  // comma
  }
  return out;
}

bool parse_double(const std::string& s, double& x) {
  if (s.empty()) return false;
  const char* b = s.data();
  const char* e = b + s.size();
  if (*b == '+') ++b;
  auto r = std::from_chars(b, e, x);
  return r.ec == std::errc() && r.ptr == e;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(path, 0, 0, "cannot open file");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

}  // namespace

InputError::InputError(const std::string& source, int line, int column, const std::string& msg)
    : std::runtime_error(position(source, line, column) + ": " + msg), line_(line), column_(column) {}

// ---------------------------------------------------------------- CSV

FiniteMetric read_csv_metric(std::istream& in, const std::string& source) {
  std::vector<std::string> labels;
  std::vector<std::vector<double>> rows;
  std::vector<int> row_lines;
  std::string line;
  int lineno = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::size_t first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    auto fields = split_csv(line, source, lineno);
    if (!have_header) {
      for (const auto& f : fields) {
        if (f.text.empty()) throw InputError(source, lineno, f.column, "empty label");
        labels.push_back(f.text);
      }
      have_header = true;
      continue;
    }
    const std::size_t n = labels.size();
    std::size_t skip = 0;
    if (fields.size() == n + 1) {
      skip = 1;
      if (rows.size() < n && fields[0].text != labels[rows.size()])
        throw InputError(source, lineno, fields[0].column,
                         "row label '" + fields[0].text + "' does not match header '" +
                             labels[rows.size()] + "'");
    } else if (fields.size() != n) {
      std::ostringstream os;
      os << "expected " << n << " values, found " << fields.size();
      throw InputError(source, lineno, fields.empty() ? 1 : fields.back().column, os.str());
    }
    if (rows.size() >= n) throw InputError(source, lineno, 1, "more rows than labels");
    std::vector<double> r;
    for (std::size_t k = skip; k < fields.size(); ++k) {
      double x;
      if (!parse_double(fields[k].text, x))
        throw InputError(source, lineno, fields[k].column, "not a number: '" + fields[k].text + "'");
      r.push_back(x);
    }
    rows.push_back(std::move(r));
    row_lines.push_back(lineno);
  }
  if (!have_header) throw InputError(source, lineno, 0, "empty input");
  if (rows.size() != labels.size()) {
    std::ostringstream os;
    os << "expected " << labels.size() << " rows, found " << rows.size();
    throw InputError(source, lineno, 0, os.str());
  }
  const int n = static_cast<int>(labels.size());
  Mat d(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) d(i, j) = rows[i][j];
  try {
    return validate_metric(d, labels);
  } catch (const MetricViolation& e) {
    int line = e.witness().empty() ? 0 : row_lines[e.witness().front()];
    throw InputError(source, line, 0, std::string("invalid metric (") + to_string(e.kind()) + "): " + e.what());
  }
}

FiniteMetric load_csv_metric(const std::string& path) {
  std::istringstream in(read_file(path));
  return read_csv_metric(in, path);
}

void write_csv_metric(std::ostream& out, const FiniteMetric& M) {
  const int n = M.size();
  auto quote = [](const std::string& s) {
    if (s.find_first_of(",\" ") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
  };
  for (int i = 0; i < n; ++i) out << (i ? "," : "") << quote(M.label(i));
  out << "\n";
  out << std::setprecision(17);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) out << (j ? "," : "") << M(i, j);
    out << "\n";
  }
}

// ---------------------------------------------------------------- JSON graphs

namespace {

Graph graph_from(Json& j, const std::string& source) {
  auto fail = [&](const std::string& msg) -> Graph { throw InputError(source, 0, 0, msg); };
  if (!j.is_object()) return fail("graph must be a JSON object");
  if (!j.contains("vertices") || !j["vertices"].is_array()) return fail("missing array 'vertices'");
  if (!j.contains("edges") || !j["edges"].is_array()) return fail("missing array 'edges'");
  Graph g;
  const auto& vs = j["vertices"];
  g.n = static_cast<int>(vs.size());
  bool coords = false;
  for (std::size_t i = 0; i < vs.size(); ++i) {
    const auto& v = vs[i];
    if (v.is_string()) {
      g.labels.push_back(v.get<std::string>());
    } else if (v.is_number()) {
      std::ostringstream os;
      os << v.dump();
      g.labels.push_back(os.str());
    } else if (v.is_object()) {
      g.labels.push_back(v.contains("label") ? v["label"].get<std::string>() : std::to_string(i));
      if (v.contains("coords")) {
        const auto& c = v["coords"];
        if (!c.is_array()) return fail("vertex " + std::to_string(i) + ": 'coords' must be an array");
        Vec x(c.size());
        for (std::size_t k = 0; k < c.size(); ++k) x[k] = c[k].get<double>();
        if (g.coords.empty()) g.coords.resize(g.n);
        g.coords[i] = x;
        coords = true;
      }
    } else {
      return fail("vertex " + std::to_string(i) + ": expected a label or an object");
    }
  }
  if (coords)
    for (std::size_t i = 0; i < g.coords.size(); ++i)
      if (g.coords[i].size() == 0) return fail("vertex " + std::to_string(i) + ": missing coords");
  const auto& es = j["edges"];
  for (std::size_t k = 0; k < es.size(); ++k) {
    const auto& e = es[k];
    std::string where = "edge " + std::to_string(k);
    if (!e.is_array() || e.size() != 3 || !e[0].is_number_integer() || !e[1].is_number_integer() ||
        !e[2].is_number())
      return fail(where + ": expected [i, j, w]");
    int u = e[0].get<int>(), v = e[1].get<int>();
    double w = e[2].get<double>();
    if (u < 0 || v < 0 || u >= g.n || v >= g.n) return fail(where + ": vertex index out of range");
    if (!(w >= 0) || !std::isfinite(w)) return fail(where + ": weight must be finite and >= 0");
    g.edges.push_back({u, v, w});
  }
  if (j.contains("tags")) {
    if (!j["tags"].is_object()) return fail("'tags' must be an object");
    for (const auto& [name, list] : j["tags"].items()) {
      std::vector<int> ids;
      for (const auto& x : list) {
        int id = x.get<int>();
        if (id < 0 || id >= g.n) return fail("tag '" + name + "': vertex index out of range");
        ids.push_back(id);
      }
      g.tags[name] = ids;
    }
  }
  return g;
}

}  // namespace

Graph parse_json_graph(const std::string& text, const std::string& source) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    // byte offset -> line/column
    std::size_t off = std::min<std::size_t>(e.byte, text.size());
    int line = 1, col = 1;
    for (std::size_t k = 0; k + 1 < off; ++k) {
      if (text[k] == '\n') ++line, col = 1;
      else ++col;
    }
    std::string what = e.what();
    auto p = what.find("syntax error");
    throw InputError(source, line, col, p == std::string::npos ? what : what.substr(p));
  }
  try {
    return graph_from(j, source);
  } catch (const Json::exception& e) {
    throw InputError(source, 0, 0, e.what());
  }
}

Graph load_json_graph(const std::string& path) { return parse_json_graph(read_file(path), path); }

SampledSpace load_sampled_space(const std::string& path) {
  std::string text = read_file(path);
  Graph g = parse_json_graph(text, path);
  SampledSpace S;
  try {
    S = shortest_metric(std::move(g));
  } catch (const std::exception& e) {
    throw InputError(path, 0, 0, e.what());
  }
  Json j = Json::parse(text);
  if (j.contains("budget")) S.set_budget(j["budget"].value("delta", 0.0), j["budget"].value("h", 0.0));
  return S;
}

Json graph_json(const SampledSpace& S) {
  const Graph& g = S.graph();
  Json j;
  Json vs = Json::array();
  for (int i = 0; i < g.n; ++i) {
    std::string label = i < static_cast<int>(g.labels.size()) && !g.labels[i].empty() ? g.labels[i]
                                                                                     : std::to_string(i);
    if (g.coords.empty()) {
      vs.push_back(label);
    } else {
      vs.push_back(Json{{"label", label}, {"coords", vec_json(g.coords[i])}});
    }
  }
  j["vertices"] = vs;
  Json es = Json::array();
  for (const auto& e : g.edges) es.push_back(Json::array({e.u, e.v, e.w}));
  j["edges"] = es;
  Json tags = Json::object();
  for (const auto& [name, ids] : g.tags) tags[name] = ids;
  j["tags"] = tags;
  if (S.delta() > 0) j["budget"] = Json{{"delta", S.delta()}, {"h", S.mesh()}};
  return j;
}

FiniteMetric load_metric(const std::string& path) {
  if (ends_with(path, ".json")) return load_sampled_space(path).metric();
  return load_csv_metric(path);
}

// ---------------------------------------------------------------- reports

Json number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

Json numbers(const std::vector<double>& xs) {
  Json a = Json::array();
  for (double x : xs) a.push_back(number(x));
  return a;
}

Json vec_json(const Vec& v) {
  Json a = Json::array();
  for (int i = 0; i < v.size(); ++i) a.push_back(number(v[i]));
  return a;
}

Json verdict_json(const Verdict& v, const FiniteMetric* M) {
  Json j;
  j["test"] = v.test;
  j["kappa"] = number(v.kappa);
  j["pass"] = v.pass;
  j["status"] = v.status;
  j["margin"] = number(v.margin);
  j["tolerance"] = number(v.tolerance);
  j["checked"] = v.checked;
  j["vacuous_count"] = v.vacuous_count;
  j["vacuous"] = v.vacuous;
  j["heuristic"] = v.heuristic;
  if (!v.witness.indices.empty()) {
    Json w;
    w["indices"] = v.witness.indices;
    if (M) {
      Json labels = Json::array();
      for (int i : v.witness.indices) labels.push_back(M->label(i));
      w["labels"] = labels;
    }
    w["margin"] = number(v.witness.margin);
    if (!v.witness.note.empty()) w["note"] = v.witness.note;
    j["witness"] = w;
  }
  if (!v.certificate.empty()) j["certificate"] = numbers(v.certificate);
  if (!v.note.empty()) j["note"] = v.note;
  return j;
}

Json threshold_json(const Threshold& t) {
  return Json{{"value", number(t.value)},         {"sentinel", t.sentinel},
              {"over_certified", t.over_certified}, {"bracket", numbers({t.lo, t.hi})},
              {"evaluations", t.evaluations}};
}

Json trace_json(const DiscreteCurve& c) {
  Json j;
  j["params"] = numbers(c.params);
  Json pts = Json::array();
  for (const Vec& p : c.points) pts.push_back(vec_json(p));
  j["points"] = pts;
  if (!c.vertices.empty()) j["vertices"] = c.vertices;
  j["margins"] = numbers(c.margins);
  return j;
}

Json report(const std::string& command, Json config, Json result) {
  Json j;
  j["schema"] = kSchema;
  j["command"] = command;
  j["config"] = std::move(config);
  j["result"] = std::move(result);
  return j;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

// ---------------------------------------------------------------- SVG

std::string svg_plot(const std::vector<PlotLayer>& layers, const std::string& title) {
  double x0 = kInf, x1 = -kInf, y0 = kInf, y1 = -kInf;
  for (const auto& L : layers)
    for (const auto& p : L.points) {
      if (!std::isfinite(p.x()) || !std::isfinite(p.y())) continue;
      x0 = std::min(x0, p.x()), x1 = std::max(x1, p.x());
      y0 = std::min(y0, p.y()), y1 = std::max(y1, p.y());
    }
  if (!(x0 <= x1)) x0 = y0 = -1, x1 = y1 = 1;
  double span = std::max({x1 - x0, y1 - y0, 1e-9});
  const double W = 480, pad = 24;
  double s = (W - 2 * pad) / span;
  auto X = [&](double x) { return pad + (x - x0) * s; };
  auto Y = [&](double y) { return W - pad - (y - y0) * s; };
  std::ostringstream os;
  os << std::fixed << std::setprecision(2);
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << W
     << "\" viewBox=\"0 0 " << W << " " << W << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << pad << "\" y=\"16\" font-family=\"sans-serif\" font-size=\"12\">" << title
     << "</text>\n";
  for (const auto& L : layers) {
    if (L.polyline) {
      os << "<polyline fill=\"none\" stroke=\"" << L.color << "\" stroke-width=\"1.5\" points=\"";
      for (const auto& p : L.points) os << X(p.x()) << "," << Y(p.y()) << " ";
      os << "\"/>\n";
    } else {
      for (const auto& p : L.points)
        os << "<circle cx=\"" << X(p.x()) << "\" cy=\"" << Y(p.y()) << "\" r=\"3\" fill=\"" << L.color
           << "\"/>\n";
    }
  }
  os << "</svg>\n";
  return os.str();
}

std::string development_svg(const Development& d) {
  PlotLayer curve, base{{Eigen::Vector2d(0, 0)}, "#b22222", false};
  for (std::size_t i = 0; i < d.rho.size(); ++i)
    curve.points.emplace_back(d.rho[i] * std::cos(d.theta[i]), d.rho[i] * std::sin(d.theta[i]));
  PlotLayer marks = curve;
  marks.polyline = false;
  marks.color = "#444444";
  std::ostringstream t;
  t << "development, margin " << std::setprecision(4) << d.margin;
  return svg_plot({curve, marks, base}, t.str());
}

}  // namespace curvkit
