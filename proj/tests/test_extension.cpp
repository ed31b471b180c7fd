#include <doctest.h>

#include "curvkit/extension.hpp"

using namespace curvkit;

namespace {
Vec v2(double x, double y) {
  Vec v(2);
  v << x, y;
  return v;
}

BallSystem equilateral(double side, double r) {
  double R = side / std::sqrt(3.0);
  BallSystem B;
  for (int i = 0; i < 3; ++i) {
    double a = 2 * kPi * i / 3;
    B.centers.push_back(v2(R * std::cos(a), R * std::sin(a)));
    B.radii.push_back(r);
  }
  return B;
}

// Row-interval scan of the intersection of planar disks on a 1e-3 grid.
bool grid_feasible(const BallSystem& B, double step = 1e-3) {
  double ylo = -kInf, yhi = kInf;
  for (std::size_t i = 0; i < B.centers.size(); ++i) {
    ylo = std::max(ylo, B.centers[i][1] - B.radii[i]);
    yhi = std::min(yhi, B.centers[i][1] + B.radii[i]);
  }
  for (double y = std::floor(ylo / step) * step; y <= yhi; y += step) {
    double lo = -kInf, hi = kInf;
    for (std::size_t i = 0; i < B.centers.size() && lo <= hi; ++i) {
      double dy = y - B.centers[i][1], r2 = B.radii[i] * B.radii[i] - dy * dy;
      if (r2 < 0) {
        lo = kInf, hi = -kInf;
        break;
      }
      lo = std::max(lo, B.centers[i][0] - std::sqrt(r2));
      hi = std::min(hi, B.centers[i][0] + std::sqrt(r2));
    }
    // some grid column has to fall inside the interval
    if (std::ceil(lo / step) * step <= hi) return true;
  }
  return false;
}
}  // namespace

TEST_CASE("ball intersection examples") {
  BallResult r = ball_intersection(0, equilateral(std::sqrt(3.0), 1));
  CHECK(r.feasible);
  CHECK(r.point.norm() < 1e-9);
  CHECK(std::abs(r.value) < 1e-9);

  BallResult s = ball_intersection(0, equilateral(2, 1));
  CHECK_FALSE(s.feasible);
  CHECK(s.exact);
  CHECK(s.value == doctest::Approx(2 / std::sqrt(3.0) - 1).epsilon(1e-9));

  BallSystem one{{v2(0.3, -0.2)}, {0.5}};
  BallResult o = ball_intersection(0, one);
  CHECK(o.feasible);
  CHECK((o.point - v2(0.3, -0.2)).norm() < 1e-12);

  BallResult e = ball_intersection(-1, BallSystem{}, kLengthTol, 3);
  CHECK(e.feasible);
  CHECK(e.point.size() == 4);
  CHECK(e.point[0] == 1);

  CHECK_THROWS_AS(ball_intersection(1, one), std::invalid_argument);
}

TEST_CASE("ball intersection agrees with the grid oracle") {
  Rng rng(11);
  int agree = 0;
  for (int inst = 0; inst < 50; ++inst) {
    BallSystem B;
    int n = 3 + static_cast<int>(rng.index(3));
    for (int i = 0; i < n; ++i) {
      B.centers.push_back(v2(rng.uniform(-1, 1), rng.uniform(-1, 1)));
      B.radii.push_back(rng.uniform(0.4, 1.4));
    }
    BallResult r = ball_intersection(0, B);
    CHECK(r.exact);
    bool g = grid_feasible(B);
    if (g == r.feasible) ++agree;
    else
      MESSAGE("instance " << inst << " value " << r.value);
  }
  CHECK(agree == 50);
}

TEST_CASE("ball intersection: minimax value in the hyperbolic plane") {
  // two equal balls: optimum at the midpoint, value |y0 y1|/2 - r
  ModelSpace H(-1, 2);
  BallSystem B{{H.point(v2(-0.8, 0.1)), H.point(v2(0.7, 0.4))}, {0.3, 0.3}};
  BallResult r = ball_intersection(-1, B);
  double d = H.distance(B.centers[0], B.centers[1]);
  CHECK(r.exact);
  CHECK(r.value == doctest::Approx(d / 2 - 0.3).epsilon(1e-9));
  CHECK(H.distance(r.point, H.geodesic_point(B.centers[0], B.centers[1], 0.5)) < 1e-7);
  // random systems: the returned value is never beaten by random probes
  Rng rng(5);
  for (int inst = 0; inst < 20; ++inst) {
    BallSystem C;
    for (int i = 0; i < 4; ++i) {
      C.centers.push_back(H.point(v2(rng.uniform(-1, 1), rng.uniform(-1, 1))));
      C.radii.push_back(rng.uniform(0.2, 1));
    }
    BallResult q = ball_intersection(-1, C);
    double probe = kInf;
    for (int t = 0; t < 2000; ++t) {
      Vec z = H.exp(q.point, H.project_tangent(q.point, 0.2 * rng.uniform() * rng.unit_vector(3)));
      double h = -kInf;
      for (int i = 0; i < 4; ++i) h = std::max(h, H.distance(C.centers[i], z) - C.radii[i]);
      probe = std::min(probe, h);
    }
    CHECK(probe >= q.value - 1e-9);
  }
}

TEST_CASE("kirszbraun extension") {
  // tripod: not CBB(0), infeasible and no fault
  FiniteMetric T = tripod_metric();
  std::vector<Vec> tri;
  double R = 2 / std::sqrt(3.0);
  for (int i = 0; i < 3; ++i) tri.push_back(v2(R * std::cos(2 * kPi * i / 3), R * std::sin(2 * kPi * i / 3)));
  ExtensionResult t = kirszbraun_extend(T, 0, {1, 2, 3}, tri, 0);
  CHECK_FALSE(t.feasible);
  CHECK_FALSE(t.fault);
  REQUIRE(t.source_check);
  CHECK_FALSE(t.source_check->pass);

  // E^3 source, orthogonal projection to E^2
  ModelSample s = sample_model_space(0, 3, 4, 21);
  std::vector<Vec> proj;
  for (int i = 1; i < 4; ++i) proj.push_back(s.config.points[i].head(2));
  ExtensionResult e = kirszbraun_extend(s.metric, 0, {1, 2, 3}, proj, 0);
  CHECK(e.feasible);
  for (int i = 0; i < 3; ++i) CHECK(model_distance(0, e.point, proj[i]) <= s.metric(0, i + 1) + 1e-9);

  // non-short map rejected
  std::vector<Vec> far = {v2(0, 0), v2(10, 0), v2(0, 10)};
  CHECK_THROWS_AS(kirszbraun_extend(s.metric, 0, {1, 2, 3}, far, 0), std::invalid_argument);

  // 3 -> 4 point instances from CBB samples: never infeasible
  int faults = 0, infeasible = 0;
  for (int inst = 0; inst < 60; ++inst) {
    ModelSample m = sample_model_space(inst % 2 ? 1.0 : 0.0, 2 + inst % 2, 4, 100 + inst);
    Rng rng(inst);
    std::vector<Vec> y;
    for (int i = 0; i < 3; ++i) y.push_back(v2(rng.uniform(-1, 1), rng.uniform(-1, 1)));
    double scale = kInf;
    for (int i = 0; i < 3; ++i)
      for (int j = i + 1; j < 3; ++j) scale = std::min(scale, m.metric(i + 1, j + 1) / (y[i] - y[j]).norm());
    double shrink = scale * rng.uniform(0.5, 1);
    for (Vec& v : y) v *= shrink;
    ExtensionResult r = kirszbraun_extend(m.metric, 0, {1, 2, 3}, y, 0);
    if (!r.feasible) ++infeasible;
    if (r.fault) ++faults;
  }
  CHECK(faults == 0);
  CHECK(infeasible == 0);
}

TEST_CASE("barycentric point") {
  std::vector<Vec> two = {v2(0, 0), v2(2, 4)};
  CHECK((barycentric_point(0, two, {0.5, 0.5}) - v2(1, 2)).norm() < 1e-12);
  std::vector<Vec> tri = {v2(0, 0), v2(3, 0), v2(0, 3)};
  CHECK((barycentric_point(0, tri, {1.0 / 3, 1.0 / 3, 1.0 / 3}) - v2(1, 1)).norm() < 1e-9);
  CHECK((barycentric_point(0, tri, {0, 1, 0}) - tri[1]).norm() < 1e-15);

  for (double kappa : {1.0, -1.0}) {
    ModelSpace S(kappa, 2);
    std::vector<Vec> a = {S.point(v2(0.1, 0.2)), S.point(v2(-0.5, 0.3)), S.point(v2(0.4, -0.6))};
    std::vector<double> w = {0.2, 0.5, 0.3};
    Vec q = barycentric_point(kappa, a, w);
    // stationarity checked independently: sum w_i sn(d_i)/d_i log_q(a_i) = 0
    Vec g = Vec::Zero(3);
    for (int i = 0; i < 3; ++i) {
      Vec l = S.log(q, a[i]);
      double d = S.distance(q, a[i]);
      g += w[i] * sn(kappa, d) / d * l;
    }
    CHECK(g.norm() < 1e-8);
    CHECK((barycentric_point(kappa, a, {0, 0, 1}) - a[2]).norm() < 1e-12);
    double diam = 0;
    for (auto& x : a)
      for (auto& y : a) diam = std::max(diam, S.distance(x, y));
    for (auto& x : a) CHECK(S.distance(q, x) <= diam + 1e-9);
  }

  ModelSpace S2(1, 2);
  // regular tetrahedron: no open hemisphere contains it
  double t = std::acos(-1.0 / 3);
  std::vector<Vec> wide = {S2.point(v2(0, 0))};
  for (int i = 0; i < 3; ++i) wide.push_back(S2.point(v2(t * std::cos(2 * kPi * i / 3), t * std::sin(2 * kPi * i / 3))));
  CHECK_THROWS_AS(barycentric_point(1, wide, {0.25, 0.25, 0.25, 0.25}), std::domain_error);
  CHECK_THROWS_AS(barycentric_point(0, tri, {0.5, 0.5, 0.5}), std::invalid_argument);
}

TEST_CASE("barycentric lipschitz estimate") {
  CHECK(barycentric_lipschitz_estimate(0, {v2(1, 1)}, 10) == 0);
  // collinear anchors at 0, 1, 3 on a line: the point is sum w_i a_i, so the
  // constant is half the largest anchor spread
  std::vector<Vec> line = {v2(0, 0), v2(1, 0), v2(3, 0)};
  CHECK(barycentric_lipschitz_estimate(0, line, 12) == doctest::Approx(1.5).epsilon(1e-9));
  ModelSpace S(1, 2);
  std::vector<Vec> a = {S.point(v2(0.3, 0.1)), S.point(v2(-0.4, 0.5)), S.point(v2(0.2, -0.7))};
  double l1 = barycentric_lipschitz_estimate(1, a, 8);
  double l2 = barycentric_lipschitz_estimate(1, a, 16);
  CHECK(std::isfinite(l1));
  CHECK(std::max(l1, l2) / std::min(l1, l2) < 1.2);
}

TEST_CASE("webs") {
  Graph g;
  g.n = 6;
  for (int i = 0; i + 1 < 6; ++i) g.edges.push_back({i, i + 1, 0.5});
  SampledSpace path(g);
  WebResult w = web_compute(path, {0, 5}, 0);
  CHECK(w.web == std::vector<int>{0, 1, 2, 3, 4, 5});
  CHECK(w.inner == std::vector<int>{1, 2, 3, 4});

  FiniteMetric three = validate_metric((Mat(3, 3) << 0, 1, 1, 1, 0, 1, 1, 1, 0).finished());
  CHECK(web_compute(three, {0, 1, 2}, 0).web == std::vector<int>{0, 1, 2});
  CHECK_THROWS_AS(web_compute(three, {0, 0}, 0), std::invalid_argument);

  // flat grid: web of two anchors hugs the segment, and lies in the image of
  // the barycentric simplex up to the mesh
  NetSpec spec;
  spec.kind = SurfaceKind::Plane;
  spec.extent = 1;
  spec.h = 0.1;
  spec.calibration_pairs = 100;
  SampledSpace P = net_of_surface(spec);
  auto nearest = [&](double x, double y) {
    int best = 0;
    for (int i = 0; i < P.size(); ++i)
      if ((P.graph().coords[i] - v2(x, y)).norm() < (P.graph().coords[best] - v2(x, y)).norm()) best = i;
    return best;
  };
  int a = nearest(-0.8, -0.3), b = nearest(0.7, 0.5);
  WebResult web = web_compute(P, {a, b}, 0);
  Vec A = P.graph().coords[a], B = P.graph().coords[b];
  std::vector<Vec> simplex;
  for (int i = 0; i <= 200; ++i) simplex.push_back(barycentric_point(0, {A, B}, {1 - i / 200.0, i / 200.0}));
  double worst = 0;
  for (int v : web.web) {
    double d = kInf;
    for (const Vec& s : simplex) d = std::min(d, (P.graph().coords[v] - s).norm());
    worst = std::max(worst, d);
  }
  CHECK(web.web.size() >= 10);
  CHECK(worst <= 2 * spec.h + P.delta());
}

TEST_CASE("reshetnyak fold") {
  // right triangle at p, z~ the midpoint of the hypotenuse
  double px = 1, py = 1, xy = std::sqrt(2.0), pz = std::sqrt(2.0) / 2;
  ReshetnyakFold iso(0, px, py, xy, xy / 2, pz);
  Rng rng(3);
  for (int i = 0; i < 200; ++i) {
    Vec a = iso.sample(rng), b = iso.sample(rng);
    CHECK(std::abs(iso.space().distance(a, b) - iso.space().distance(iso(a), iso(b))) < 1e-9);
  }

  for (double kappa : {0.0, 1.0, -1.0}) {
    ModelConfig c = lay_triangle(kappa, {xy, py, px});
    double pzk = ModelSpace(kappa, 2).distance(c.points[0],
                                               ModelSpace(kappa, 2).geodesic_point(c.points[1], c.points[2], 0.5));
    ReshetnyakFold F(kappa, px, py, xy, xy / 2, pzk - 0.1);
    const ModelSpace& S = F.space();
    for (int i = 0; i < 4; ++i) CHECK(S.distance(F(F.source()[i]), F.target()[i]) < 1e-12);
    CHECK(S.distance(F.target()[0], F.target()[3]) == doctest::Approx(pzk - 0.1));
    CHECK(S.distance(F.target()[1], F.target()[3]) == doctest::Approx(xy / 2));
    Verdict v = F.audit(10000, 17);
    CHECK(v.pass);
    CHECK(v.checked == 10000);
    // a point strictly inside the curvilinear core goes to z.
    Vec inside = S.geodesic_point(F.source()[0], F.source()[3], 1 - 0.02 / pzk);
    CHECK(F.piece(inside) == ReshetnyakFold::Piece::Core);
    CHECK(S.distance(F(inside), F.target()[3]) < 1e-12);
  }
  CHECK_THROWS_AS(ReshetnyakFold(0, px, py, xy, xy / 2, pz + 0.1), std::invalid_argument);
}
