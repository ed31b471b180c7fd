#include "curvkit/metric.hpp"

#include <queue>
#include <sstream>

namespace curvkit {

const char* to_string(MetricViolation::Kind k) {
  switch (k) {
    case MetricViolation::Kind::Shape: return "shape";
    case MetricViolation::Kind::NotFinite: return "not-finite";
    case MetricViolation::Kind::Diagonal: return "diagonal";
    case MetricViolation::Kind::Negative: return "negative";
    case MetricViolation::Kind::Asymmetry: return "asymmetry";
    default: return "triangle";
  }
}

std::string FiniteMetric::label(int i) const {
  if (i >= 0 && i < static_cast<int>(labels_.size())) return labels_[i];
  return std::to_string(i);
}

double FiniteMetric::diameter() const { return d_.size() ? d_.maxCoeff() : 0.0; }

FiniteMetric FiniteMetric::subset(const std::vector<int>& idx) const {
  const int m = static_cast<int>(idx.size());
  Mat s(m, m);
  std::vector<std::string> lab;
  for (int a = 0; a < m; ++a) {
    lab.push_back(label(idx[a]));
    for (int b = 0; b < m; ++b) s(a, b) = d_(idx[a], idx[b]);
  }
  return trusted(std::move(s), std::move(lab));
}

FiniteMetric FiniteMetric::trusted(Mat d, std::vector<std::string> labels) {
  FiniteMetric m;
  m.d_ = std::move(d);
  m.labels_ = std::move(labels);
  return m;
}

FiniteMetric validate_metric(const Mat& t, std::vector<std::string> labels, double slack) {
  using K = MetricViolation::Kind;
  const int n = static_cast<int>(t.rows());
  if (t.cols() != n) throw MetricViolation(K::Shape, {}, "distance table is not square");
  if (!labels.empty() && static_cast<int>(labels.size()) != n)
    throw MetricViolation(K::Shape, {}, "label count does not match table size");
  auto fail = [](K k, std::vector<int> w, const std::string& msg) {
    std::ostringstream os;
    os << msg << " at (";
    for (std::size_t i = 0; i < w.size(); ++i) os << (i ? "," : "") << w[i];
    os << ")";
    throw MetricViolation(k, std::move(w), os.str());
  };
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (!std::isfinite(t(i, j))) fail(K::NotFinite, {i, j}, "non-finite entry");
  for (int i = 0; i < n; ++i)
    if (t(i, i) != 0) fail(K::Diagonal, {i}, "nonzero diagonal");
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (t(i, j) < 0) fail(K::Negative, {i, j}, "negative distance");
      if (t(i, j) != t(j, i)) fail(K::Asymmetry, {i, j}, "asymmetric table");
    }
  const double tol = slack * (1 + t.maxCoeff());
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        if (k == i || k == j) continue;
        if (t(i, j) > t(i, k) + t(k, j) + tol) fail(K::Triangle, {i, j, k}, "triangle violation");
      }
  FiniteMetric m;
  m.d_ = t;
  m.labels_ = std::move(labels);
  return m;
}

// ---------------------------------------------------------------- SampledSpace

SampledSpace::SampledSpace(Graph g) : graph_(std::move(g)) {
  const int n = graph_.n;
  if (n <= 0) throw std::invalid_argument("graph has no vertices");
  adj_.assign(n, {});
  for (const auto& e : graph_.edges) {
    if (e.u < 0 || e.v < 0 || e.u >= n || e.v >= n)
      throw std::invalid_argument("edge endpoint out of range");
    if (!(e.w > 0) || !std::isfinite(e.w))
      throw std::invalid_argument("edge weights must be positive and finite");
    if (e.u == e.v) continue;
    adj_[e.u].push_back({e.v, e.w});
    adj_[e.v].push_back({e.u, e.w});
  }
  for (auto& a : adj_) std::sort(a.begin(), a.end());
  rows_ = std::make_shared<std::vector<Row>>(n);
  const auto& r0 = row(0);
  for (int v = 0; v < n; ++v)
    if (!std::isfinite(r0[v])) throw std::invalid_argument("graph is disconnected");
}

void SampledSpace::compute_row(int s, Row& r) const {
  const int n = graph_.n;
  r.dist.assign(n, kInf);
  r.pred.assign(n, -1);
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  std::vector<char> done(n, 0);
  r.dist[s] = 0;
  pq.push({0, s});
  while (!pq.empty()) {
    auto [d, u] = pq.top();
    pq.pop();
    if (done[u]) continue;
    done[u] = 1;
    for (auto [v, w] : adj_[u]) {
      double nd = d + w;
      if (nd < r.dist[v]) {
        r.dist[v] = nd;
        r.pred[v] = u;
        pq.push({nd, v});
      } else if (nd == r.dist[v] && u < r.pred[v] && !done[v]) {
        r.pred[v] = u;
      }
    }
  }
}

const SampledSpace::Row& SampledSpace::row_entry(int source) const {
  if (source < 0 || source >= graph_.n) throw std::out_of_range("vertex index out of range");
  Row& r = (*rows_)[source];
  std::call_once(r.once, [&] { compute_row(source, r); });
  return r;
}

const std::vector<double>& SampledSpace::row(int source) const { return row_entry(source).dist; }

std::vector<int> SampledSpace::geodesic(int i, int j) const {
  const Row& r = row_entry(i);
  std::vector<int> path;
  for (int v = j; v != -1; v = r.pred[v]) {
    path.push_back(v);
    if (v == i) break;
  }
  std::reverse(path.begin(), path.end());
  return path;
}

void SampledSpace::precompute(int jobs) const {
  parallel_chunks(graph_.n, resolve_jobs(jobs), [&](std::size_t b, std::size_t e, int) {
    for (std::size_t s = b; s < e; ++s) row(static_cast<int>(s));
  });
}

FiniteMetric SampledSpace::metric(const std::vector<int>& vertices, int jobs) const {
  std::vector<int> idx = vertices;
  if (idx.empty()) {
    idx.resize(graph_.n);
    for (int i = 0; i < graph_.n; ++i) idx[i] = i;
  }
  const int m = static_cast<int>(idx.size());
  parallel_chunks(m, resolve_jobs(jobs), [&](std::size_t b, std::size_t e, int) {
    for (std::size_t a = b; a < e; ++a) row(idx[a]);
  });
  Mat d(m, m);
  std::vector<std::string> lab;
  for (int a = 0; a < m; ++a) {
    const auto& r = row(idx[a]);
    for (int b = 0; b < m; ++b) d(a, b) = r[idx[b]];
    lab.push_back(idx[a] < static_cast<int>(graph_.labels.size()) ? graph_.labels[idx[a]]
                                                                   : std::to_string(idx[a]));
  }
  // symmetrize the (already equal up to rounding order) two Dijkstra sums
  for (int a = 0; a < m; ++a)
    for (int b = a + 1; b < m; ++b) d(a, b) = d(b, a) = std::min(d(a, b), d(b, a));
  return FiniteMetric::trusted(std::move(d), std::move(lab));
}

double SampledSpace::calibrate(int pairs, std::uint64_t seed, double h) {
  if (!exact) throw std::logic_error("calibrate: no exact distance available");
  Rng rng(seed);
  const int n = graph_.n;
  int sources = std::min(n, pairs / std::max(1, n) + 24);
  double worst = 0;
  for (int s = 0; s < sources; ++s) {
    int i = static_cast<int>(rng.index(n));
    const auto& r = row(i);
    for (int j = 0; j < n; ++j) worst = std::max(worst, std::abs(r[j] - exact(i, j)));
  }
  // the sample maximum underestimates the true one; keep a safety factor
  worst *= 1.25;
  set_budget(worst, h);
  return worst;
}

const std::vector<int>& SampledSpace::tag(const std::string& name) const {
  static const std::vector<int> empty;
  auto it = graph_.tags.find(name);
  return it == graph_.tags.end() ? empty : it->second;
}

SampledSpace shortest_metric(Graph g) { return SampledSpace(std::move(g)); }

// ---------------------------------------------------------------- generators

ModelSample sample_model_space(double kappa, int m, int n, std::uint64_t seed, double radius) {
  if (radius <= 0) {
    if (kappa > 0) radius = 0.45 * varpi(kappa);
    else if (kappa < 0) radius = 1.5 / std::sqrt(-kappa);
    else radius = 1.0;
  }
  if (kappa > 0 && radius >= varpi(kappa) / 2)
    throw std::invalid_argument("sample_model_space: radius must be below varpi/2");
  ModelSpace M(kappa, m);
  Rng rng(seed);
  ModelConfig cfg{M, {}};
  for (int i = 0; i < n; ++i) {
    Vec u = rng.unit_vector(m);
    double r = radius * std::pow(rng.uniform(), 1.0 / m);
    cfg.points.push_back(M.point(r * u));
  }
  return {validate_metric(cfg.distance_table()), cfg};
}

FiniteMetric circle_metric(double length, int n) {
  Mat d(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      int k = std::abs(i - j);
      k = std::min(k, n - k);
      d(i, j) = length * k / n;
    }
  return validate_metric(d);
}

FiniteMetric tripod_metric(int leaves, double arm) {
  Mat d = Mat::Constant(leaves + 1, leaves + 1, 2 * arm);
  for (int i = 1; i <= leaves; ++i) d(0, i) = d(i, 0) = arm;
  d.diagonal().setZero();
  std::vector<std::string> lab{"c"};
  for (int i = 1; i <= leaves; ++i) lab.push_back("l" + std::to_string(i));
  return validate_metric(d, lab);
}

Packing pack_eps(const FiniteMetric& M, double eps) {
  if (!(eps > 0)) throw std::invalid_argument("pack_eps: eps must be positive");
  Packing p;
  const int n = M.size();
  if (n == 0) return p;
  std::vector<double> gap(n, kInf);
  std::vector<char> used(n, 0);
  int cur = 0;
  double radius = kInf;
  while (radius > eps) {
    p.points.push_back(cur);
    used[cur] = 1;
    int next = -1;
    double best = -1;
    for (int j = 0; j < n; ++j) {
      if (used[j]) continue;
      gap[j] = std::min(gap[j], M(cur, j));
      if (gap[j] > best) {
        best = gap[j];
        next = j;
      }
    }
    if (next < 0) break;
    cur = next;
    radius = best;
  }
  p.count = static_cast<int>(p.points.size());
  return p;
}

double packing_dimension(const FiniteMetric& M, const std::vector<double>& eps) {
  if (eps.size() < 2) throw std::invalid_argument("packing_dimension: need two scales");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double k = static_cast<double>(eps.size());
  for (double e : eps) {
    double x = std::log(1 / e), y = std::log(static_cast<double>(pack_eps(M, e).count));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (k * sxy - sx * sy) / (k * sxx - sx * sx);
}

}  // namespace curvkit
