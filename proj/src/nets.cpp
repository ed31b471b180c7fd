#include "curvkit/metric.hpp"
#include "curvkit/warped.hpp"

#include <numeric>

namespace curvkit {

namespace {

// Joins every pair closer than `reach` (exact surface distance).
void connect_close(Graph& g, const std::function<double(int, int)>& dist, double reach) {
  for (int i = 0; i < g.n; ++i)
    for (int j = i + 1; j < g.n; ++j) {
      double d = dist(i, j);
      if (d > 0 && d < reach) g.edges.push_back({i, j, d});
    }
}

// Edges reach further (in units of h) as the mesh shrinks, so the direction
// quantization error of the graph metric vanishes as h -> 0.
double link_radius(const NetSpec& s) { return std::max(1.5 * s.h, s.reach * std::sqrt(s.h)); }

double circle_gap(double a, double b, double L) {
  double d = std::fmod(std::abs(a - b), L);
  return std::min(d, L - d);
}

SampledSpace plane_net(const NetSpec& s) {
  Graph g;
  const int K = static_cast<int>(std::ceil(s.extent / s.h - 1e-9));
  for (int i = -K; i <= K; ++i)
    for (int j = -K; j <= K; ++j) {
      Vec p(2);
      p << i * s.h, j * s.h;
      g.coords.push_back(p);
    }
  g.n = static_cast<int>(g.coords.size());
  const int side = 2 * K + 1;
  const double rr = link_radius(s) / s.h;
  const int r = static_cast<int>(std::floor(rr));
  for (int i = 0; i < side; ++i)
    for (int j = 0; j < side; ++j)
      for (int di = 0; di <= r; ++di)
        for (int dj = -r; dj <= r; ++dj) {
          if (di == 0 && dj <= 0) continue;
          if (di * di + dj * dj >= rr * rr) continue;
          int a = i + di, b = j + dj;
          if (a >= side || b < 0 || b >= side) continue;
          g.edges.push_back({i * side + j, a * side + b, s.h * std::hypot(di, dj)});
        }
  g.tags["center"] = {K * side + K};
  SampledSpace S(g);
  auto coords = S.graph().coords;
  S.exact = [coords](int i, int j) { return (coords[i] - coords[j]).norm(); };
  return S;
}

SampledSpace sphere_net(const NetSpec& s) {
  ModelSpace M(s.kappa, 2);
  const double R = M.radius();
  Graph g;
  const int K = std::max(2, static_cast<int>(std::round(kPi * R / s.h)));
  for (int k = 0; k <= K; ++k) {
    double th = kPi * k / K;
    int N = (k == 0 || k == K) ? 1 : std::max(3, static_cast<int>(std::round(2 * kPi * R * std::sin(th) / s.h)));
    for (int j = 0; j < N; ++j) {
      double ph = 2 * kPi * (j + 0.5 * (k % 2)) / N;
      Vec p(3);
      p << R * std::cos(th), R * std::sin(th) * std::cos(ph), R * std::sin(th) * std::sin(ph);
      g.coords.push_back(p);
    }
  }
  g.n = static_cast<int>(g.coords.size());
  auto dist = [&](int i, int j) { return M.distance(g.coords[i], g.coords[j]); };
  connect_close(g, dist, link_radius(s));
  g.tags["north"] = {0};
  g.tags["south"] = {g.n - 1};
  SampledSpace S(g);
  auto coords = S.graph().coords;
  S.exact = [coords, M](int i, int j) { return M.distance(coords[i], coords[j]); };
  return S;
}

// rings about a base point; ring r carries ~ circumference(r)/h points
template <class Circ, class Place>
void polar_rings(Graph& g, double extent, double h, Circ circumference, Place place) {
  const int K = static_cast<int>(std::ceil(extent / h - 1e-9));
  g.coords.push_back(place(0.0, 0.0));
  for (int k = 1; k <= K; ++k) {
    double r = k * h;
    int N = std::max(3, static_cast<int>(std::round(circumference(r) / h)));
    for (int j = 0; j < N; ++j) g.coords.push_back(place(r, (j + 0.5 * (k % 2)) / N));
  }
  g.n = static_cast<int>(g.coords.size());
}

SampledSpace hyperbolic_net(const NetSpec& s) {
  ModelSpace M(s.kappa, 2);
  Graph g;
  polar_rings(
      g, s.extent, s.h, [&](double r) { return 2 * kPi * sn(s.kappa, r); },
      [&](double r, double frac) {
        Vec u(2);
        u << r * std::cos(2 * kPi * frac), r * std::sin(2 * kPi * frac);
        return M.point(u);
      });
  auto dist = [&](int i, int j) { return M.distance(g.coords[i], g.coords[j]); };
  connect_close(g, dist, link_radius(s));
  g.tags["center"] = {0};
  SampledSpace S(g);
  auto coords = S.graph().coords;
  S.exact = [coords, M](int i, int j) { return M.distance(coords[i], coords[j]); };
  return S;
}

SampledSpace cone_net(const NetSpec& s) {
  const double L = s.total_angle;
  Graph g;
  polar_rings(
      g, s.extent, s.h, [&](double r) { return L * r; },
      [&](double r, double frac) {
        Vec p(2);
        p << r, frac * L;
        return p;
      });
  auto dist = [L](const Vec& a, const Vec& b) {
    return cone_distance(0, a[0], b[0], circle_gap(a[1], b[1], L));
  };
  connect_close(g, [&](int i, int j) { return dist(g.coords[i], g.coords[j]); }, link_radius(s));
  g.tags["tip"] = {0};
  SampledSpace S(g);
  auto coords = S.graph().coords;
  S.exact = [coords, dist](int i, int j) { return dist(coords[i], coords[j]); };
  return S;
}

struct DisjointSets {
  std::vector<int> p;
  explicit DisjointSets(int n) : p(n) { std::iota(p.begin(), p.end(), 0); }
  int find(int x) { return p[x] == x ? x : p[x] = find(p[x]); }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) p[std::max(a, b)] = std::min(a, b);
  }
};

SampledSpace glued_net(const NetSpec& s) {
  const auto& polys = s.glued.polygons;
  if (polys.empty()) throw std::invalid_argument("glued net: no polygons");
  struct Local {
    int poly;
    Eigen::Vector2d x;
  };
  std::vector<Local> pts;
  // per polygon edge: indices of its subdivision points in order
  std::vector<std::vector<std::vector<int>>> edge_pts(polys.size());
  for (std::size_t a = 0; a < polys.size(); ++a) {
    const auto& P = polys[a];
    const int m = static_cast<int>(P.size());
    if (m < 3) throw std::invalid_argument("glued net: polygon with fewer than 3 vertices");
    for (int k = 0; k < m; ++k) {
      const auto& u = P[k];
      const auto& v = P[(k + 1) % m];
      double cross = (v - u).x() * (P[(k + 2) % m] - v).y() - (v - u).y() * (P[(k + 2) % m] - v).x();
      if (cross <= 0) throw std::invalid_argument("glued net: polygon must be convex and counter-clockwise");
    }
    std::vector<int> corner(m);
    for (int k = 0; k < m; ++k) {
      corner[k] = static_cast<int>(pts.size());
      pts.push_back({static_cast<int>(a), P[k]});
    }
    edge_pts[a].resize(m);
    for (int k = 0; k < m; ++k) {
      const auto& u = P[k];
      const auto& v = P[(k + 1) % m];
      int segs = std::max(1, static_cast<int>(std::ceil((v - u).norm() / s.h - 1e-9)));
      edge_pts[a][k].push_back(corner[k]);
      for (int t = 1; t < segs; ++t) {
        edge_pts[a][k].push_back(static_cast<int>(pts.size()));
        pts.push_back({static_cast<int>(a), u + (v - u) * (static_cast<double>(t) / segs)});
      }
      edge_pts[a][k].push_back(corner[(k + 1) % m]);
    }
    // interior lattice points
    Eigen::Vector2d lo = P[0], hi = P[0];
    for (const auto& q : P) {
      lo = lo.cwiseMin(q);
      hi = hi.cwiseMax(q);
    }
    for (double x = std::ceil(lo.x() / s.h) * s.h; x <= hi.x(); x += s.h)
      for (double y = std::ceil(lo.y() / s.h) * s.h; y <= hi.y(); y += s.h) {
        Eigen::Vector2d q(x, y);
        bool inside = true;
        for (int k = 0; k < m && inside; ++k) {
          Eigen::Vector2d e = P[(k + 1) % m] - P[k];
          Eigen::Vector2d w = q - P[k];
          inside = (e.x() * w.y() - e.y() * w.x()) / e.norm() > s.h / 3;
        }
        if (inside) pts.push_back({static_cast<int>(a), q});
      }
  }
  DisjointSets ds(static_cast<int>(pts.size()));
  std::vector<char> seam(pts.size(), 0);
  for (const auto& sm : s.glued.seams) {
    const auto& A = edge_pts.at(sm.poly_a).at(sm.edge_a);
    const auto& B = edge_pts.at(sm.poly_b).at(sm.edge_b);
    double la = (pts[A.front()].x - pts[A.back()].x).norm();
    double lb = (pts[B.front()].x - pts[B.back()].x).norm();
    if (std::abs(la - lb) > 1e-9 * (1 + la) || A.size() != B.size())
      throw std::invalid_argument("glued net: seam edges differ in length");
    for (std::size_t t = 0; t < A.size(); ++t) {
      ds.unite(A[t], B[B.size() - 1 - t]);
      seam[A[t]] = seam[B[B.size() - 1 - t]] = 1;
    }
  }
  std::vector<int> id(pts.size(), -1);
  Graph g;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    int r = ds.find(static_cast<int>(i));
    if (id[r] < 0) {
      id[r] = g.n++;
      Vec c(2);
      c << pts[r].x.x(), pts[r].x.y();
      g.coords.push_back(c);
    }
    id[i] = id[r];
  }
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (seam[i]) g.tags["seam"].push_back(id[i]);
    g.tags["poly" + std::to_string(pts[i].poly)].push_back(id[i]);
  }
  for (auto& [k, v] : g.tags) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  }
  const double reach = link_radius(s);
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      if (pts[i].poly != pts[j].poly || id[i] == id[j]) continue;
      double d = (pts[i].x - pts[j].x).norm();
      if (d < reach) g.edges.push_back({id[i], id[j], d});
    }
  SampledSpace S(g);
  // No exact metric in general.  Each polygon on its own is convex, so its
  // subnet is measured against Euclidean distances; the relative excess is
  // then charged along the whole diameter.
  Rng rng(s.seed);
  double rel = 0, abs_short = 0, ecc = 0;
  for (std::size_t a = 0; a < polys.size(); ++a) {
    Graph sub;
    std::vector<int> local;
    std::map<int, int> where;
    for (std::size_t i = 0; i < pts.size(); ++i)
      if (pts[i].poly == static_cast<int>(a)) {
        where[static_cast<int>(i)] = sub.n++;
        local.push_back(static_cast<int>(i));
      }
    for (std::size_t i = 0; i < local.size(); ++i)
      for (std::size_t j = i + 1; j < local.size(); ++j) {
        double d = (pts[local[i]].x - pts[local[j]].x).norm();
        if (d > 0 && d < reach) sub.edges.push_back({static_cast<int>(i), static_cast<int>(j), d});
      }
    SampledSpace P(sub);
    for (int t = 0; t < 8; ++t) {
      int i = static_cast<int>(rng.index(local.size()));
      const auto& r = P.row(i);
      for (std::size_t j = 0; j < local.size(); ++j) {
        double e = (pts[local[i]].x - pts[local[j]].x).norm();
        double ex = r[j] - e;
        if (e >= reach) rel = std::max(rel, ex / e);
        else abs_short = std::max(abs_short, ex);
      }
    }
  }
  for (int t = 0; t < 8; ++t) {
    const auto& r = S.row(static_cast<int>(rng.index(S.size())));
    ecc = std::max(ecc, *std::max_element(r.begin(), r.end()));
  }
  S.set_budget(abs_short + rel * ecc, s.h);
  return S;
}

}  // namespace

SampledSpace net_of_surface(const NetSpec& s) {
  if (!(s.h > 0)) throw std::invalid_argument("net_of_surface: mesh size must be positive");
  if (!(s.reach > 0)) throw std::invalid_argument("net_of_surface: reach must be positive");
  SampledSpace S;
  switch (s.kind) {
    case SurfaceKind::Plane: S = plane_net(s); break;
    case SurfaceKind::Sphere:
      if (!(s.kappa > 0)) throw std::invalid_argument("sphere net needs kappa > 0");
      S = sphere_net(s);
      break;
    case SurfaceKind::Hyperbolic:
      if (!(s.kappa < 0)) throw std::invalid_argument("hyperbolic net needs kappa < 0");
      S = hyperbolic_net(s);
      break;
    case SurfaceKind::Cone:
      if (!(s.total_angle > 0)) throw std::invalid_argument("cone net needs a positive total angle");
      S = cone_net(s);
      break;
    case SurfaceKind::GluedPolygons: return glued_net(s);
  }
  S.calibrate(s.calibration_pairs, s.seed, s.h);
  return S;
}

}  // namespace curvkit
