#pragma once

#include "curvkit/model_space.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <vector>

namespace curvkit {

struct Witness {
  std::vector<int> indices;
  double margin = 0;
  std::string note;
};

class MetricViolation : public std::invalid_argument {
 public:
  enum class Kind { Shape, NotFinite, Diagonal, Negative, Asymmetry, Triangle };
  MetricViolation(Kind kind, std::vector<int> witness, const std::string& what)
      : std::invalid_argument(what), kind_(kind), witness_(std::move(witness)) {}
  Kind kind() const { return kind_; }
  const std::vector<int>& witness() const { return witness_; }

 private:
  Kind kind_;
  std::vector<int> witness_;
};

const char* to_string(MetricViolation::Kind k);

class FiniteMetric {
 public:
  FiniteMetric() = default;
  int size() const { return static_cast<int>(d_.rows()); }
  double operator()(int i, int j) const { return d_(i, j); }
  const Mat& table() const { return d_; }
  const std::vector<std::string>& labels() const { return labels_; }
  std::string label(int i) const;
  double diameter() const;
  FiniteMetric subset(const std::vector<int>& idx) const;

  // No validation: for tables that are metrics by construction.
  static FiniteMetric trusted(Mat d, std::vector<std::string> labels = {});

 private:
  friend FiniteMetric validate_metric(const Mat&, std::vector<std::string>, double);
  Mat d_;
  std::vector<std::string> labels_;
};

// Checks zero diagonal, nonnegativity, symmetry and the triangle inequality
// (relative slack `slack`).  Throws MetricViolation naming the offending tuple.
FiniteMetric validate_metric(const Mat& table, std::vector<std::string> labels = {},
                             double slack = 1e-12);

// ---------------------------------------------------------------- graphs

struct Graph {
  int n = 0;
  struct Edge {
    int u, v;
    double w;
  };
  std::vector<Edge> edges;
  std::vector<std::string> labels;
  std::map<std::string, std::vector<int>> tags;
  std::vector<Vec> coords;  // optional, one per vertex
};

// Shortest-path metric of a weighted graph with deterministic geodesic
// recovery.  Rows of the all-pairs table are computed on demand and cached;
// the object is logically immutable and safe to share between threads.
class SampledSpace {
 public:
  SampledSpace() = default;
  explicit SampledSpace(Graph g);

  int size() const { return graph_.n; }
  const Graph& graph() const { return graph_; }
  double distance(int i, int j) const { return row(i)[j]; }
  const std::vector<double>& row(int source) const;
  // Vertex sequence of the recovered shortest path from i to j.  Ties are
  // broken towards the smallest predecessor index.
  std::vector<int> geodesic(int i, int j) const;
  // Metric restricted to the given vertices (all vertices if empty).
  FiniteMetric metric(const std::vector<int>& vertices = {}, int jobs = 1) const;
  void precompute(int jobs = 1) const;

  // Discretization budget delta(h) and the mesh size it was calibrated for.
  double delta() const { return delta_; }
  double mesh() const { return h_; }
  void set_budget(double delta, double h) {
    delta_ = delta;
    h_ = h;
  }
  // Exact distance of the underlying surface, if known.
  std::function<double(int, int)> exact;
  // Largest |graph - exact| over `pairs` seeded random pairs; sets the budget.
  double calibrate(int pairs, std::uint64_t seed, double h);

  const std::vector<int>& tag(const std::string& name) const;

 private:
  struct Row {
    std::once_flag once;
    std::vector<double> dist;
    std::vector<int> pred;
  };
  void compute_row(int s, Row& r) const;
  const Row& row_entry(int source) const;

  Graph graph_;
  std::vector<std::vector<std::pair<int, double>>> adj_;
  std::shared_ptr<std::vector<Row>> rows_;
  double delta_ = 0, h_ = 0;
};

SampledSpace shortest_metric(Graph g);

// How far a vertex of a recovered geodesic of excess <= delta may sit from the
// true geodesic when it is at arclength a and b from the two ends.
inline double lateral_allowance(double delta, double a, double b) {
  if (delta <= 0 || a + b <= 0) return 0;
  return std::sqrt(2 * delta * (a * b / (a + b) + delta));
}

// ---------------------------------------------------------------- generators

struct ModelSample {
  FiniteMetric metric;
  ModelConfig config;
};

// n points of Lob^m_kappa inside the ball of radius `radius` about the base
// point (default 0.45*varpi for kappa > 0, 1 for kappa = 0, 1.5/sqrt|kappa| for
// kappa < 0).
ModelSample sample_model_space(double kappa, int m, int n, std::uint64_t seed,
                               double radius = 0);

// n equally spaced points of a round circle of the given length (intrinsic metric).
FiniteMetric circle_metric(double length, int n);
// Star with `leaves` leaves at distance `arm` from the centre (index 0).
FiniteMetric tripod_metric(int leaves = 3, double arm = 1.0);

enum class SurfaceKind { Sphere, Plane, Hyperbolic, Cone, GluedPolygons };

struct GluedPolygons {
  std::vector<std::vector<Eigen::Vector2d>> polygons;  // convex, counter-clockwise
  struct Seam {
    int poly_a, edge_a, poly_b, edge_b;  // edge k joins vertex k and k+1
  };
  std::vector<Seam> seams;  // seam edges are identified with opposite orientation
};

struct NetSpec {
  SurfaceKind kind = SurfaceKind::Plane;
  double kappa = 1;           // sphere / hyperbolic
  double total_angle = 2 * kPi;  // cone
  double extent = 1.5;        // half-width (plane) or radius (cone, hyperbolic)
  double h = 0.1;             // mesh size
  double reach = 1.3;         // edges join vertices closer than max(1.5h, reach*sqrt(h))
  GluedPolygons glued;
  int calibration_pairs = 400;
  std::uint64_t seed = kDefaultSeed;
};

// Structured net of a surface; vertex coordinates are ambient (sphere,
// hyperbolic), planar (plane, glued), or polar (r, theta) for cones.  The
// budget is calibrated against exact distances when available.
SampledSpace net_of_surface(const NetSpec& spec);

struct Packing {
  int count = 0;
  std::vector<int> points;
};

// Maximal eps-packing: the prefix of a farthest-point ordering with insertion
// radius > eps.  Antitone in eps by construction.
Packing pack_eps(const FiniteMetric& M, double eps);
// Least-squares slope of log pack_eps against log(1/eps).
double packing_dimension(const FiniteMetric& M, const std::vector<double>& eps);

}  // namespace curvkit
