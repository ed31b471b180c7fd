#include <doctest.h>

#include "curvkit/flows.hpp"
#include "curvkit/model_space.hpp"

using namespace curvkit;

namespace {
Vec v2(double x, double y) {
  Vec v(2);
  v << x, y;
  return v;
}

int nearest(const SampledSpace& S, double a, double b) {
  int best = 0;
  double bd = kInf;
  for (int i = 0; i < S.size(); ++i) {
    const Vec& c = S.graph().coords[i];
    double d = std::hypot(c[0] - a, c[1] - b);
    if (d < bd) bd = d, best = i;
  }
  return best;
}

SampledSpace cone_net(double angle) {
  NetSpec s;
  s.kind = SurfaceKind::Cone;
  s.total_angle = angle;
  s.extent = 1.2;
  s.h = 0.06;
  s.calibration_pairs = 200;
  return net_of_surface(s);
}
}  // namespace

TEST_CASE("convex domains") {
  ConvexDomain H = ConvexDomain::half_space(v2(0, 1));
  CHECK(H.contains(v2(3, 0)));
  CHECK_FALSE(H.contains(v2(0, -0.1)));
  CHECK((H.project(v2(2, -3)) - v2(2, 0)).norm() == 0);
  CHECK((H.wedge(v2(1, 0), v2(1, -1)) - v2(1, 0)).norm() < 1e-15);
  CHECK((H.wedge(v2(1, 0), v2(1, 1)) - v2(1, 1)).norm() < 1e-15);
  ConvexDomain B = ConvexDomain::ball(v2(1, 1), 2);
  CHECK((B.project(v2(5, 1)) - v2(3, 1)).norm() < 1e-15);
  CHECK(H.audit_projection(2000, 1).pass);
  CHECK(B.audit_projection(2000, 2).pass);
}

TEST_CASE("gradient curves") {
  const double h = 1e-3;
  ConvexDomain E = ConvexDomain::whole();
  DiscreteCurve q = gradient_curve(E, neg_half_square(v2(0, 0)), v2(1, 0), h, 2);
  REQUIRE(q.points.size() == 2001);
  double dev = 0;
  for (std::size_t k = 0; k < q.points.size(); ++k) dev = std::max(dev, (q.points[k] - std::exp(-q.params[k]) * v2(1, 0)).norm());
  CHECK(dev < h);

  DiscreteCurve l = gradient_curve(E, linear(v2(3, 4)), v2(0, 0), h, 1);
  CHECK((l.points.back() - v2(3, 4)).norm() < 1e-9);

  Vec p = v2(0.5, 0.5);
  DiscreteCurve t = gradient_curve(E, neg_distance(p), v2(-1, 0), h, 4);
  CHECK((t.points.back() - p).norm() <= h);
  // before arrival the path is the straight segment
  Vec mid = t.points[500];
  CHECK((mid - (v2(-1, 0) + 0.5 * (p - v2(-1, 0)) / (p - v2(-1, 0)).norm())).norm() < 1e-9);

  // half-plane boundary: gradient pushing outward slides along y = 0
  ConvexDomain H = ConvexDomain::half_space(v2(0, 1));
  DiscreteCurve s = gradient_curve(H, linear(v2(1, -1)), v2(0, 0.5), h, 2);
  CHECK(s.points.back()[1] == doctest::Approx(0).epsilon(1e-12));
  CHECK(s.points.back()[0] == doctest::Approx(2).epsilon(1e-3));
  CHECK_THROWS_AS(gradient_curve(H, linear(v2(1, 0)), v2(0, -1), h, 1), std::invalid_argument);
}

TEST_CASE("contraction") {
  ConvexDomain E = ConvexDomain::whole();
  auto f = neg_half_square(v2(0, 0));
  Verdict c = contraction_check(E, f, v2(1, 0), v2(0, 1), 1e-3, 2);
  CHECK(c.pass);
  CHECK(c.certificate[0] <= 3e-3 * std::sqrt(2.0));
  Verdict half = contraction_check(E, f, v2(1, 0), v2(0, 1), 5e-4, 2);
  // first order: halving h halves the deviation
  CHECK(half.certificate[0] <= 0.6 * c.certificate[0]);
  Verdict lin = contraction_check(E, linear(v2(1, 2)), v2(1, 0), v2(0, 1), 1e-3, 2);
  CHECK(lin.pass);
  CHECK(lin.certificate[0] < 1e-12);
  // disk with a concave quadratic pulled to an outside point: still contracting
  ConvexDomain B = ConvexDomain::ball(v2(0, 0), 1);
  Verdict b = contraction_check(B, neg_half_square(v2(3, 0)), v2(0, 0.9), v2(0, -0.9), 1e-3, 3);
  CHECK(b.pass);
}

TEST_CASE("self-contracting curves") {
  ConvexDomain E = ConvexDomain::whole();
  CHECK(self_contracting_check(gradient_curve(E, linear(v2(1, 1)), v2(0, 0), 1e-2, 2)).pass);
  CHECK(self_contracting_check(gradient_curve(E, neg_half_square(v2(1, 2)), v2(-1, 0), 1e-2, 3)).pass);
  ConvexDomain H = ConvexDomain::half_space(v2(0, 1));
  CHECK(self_contracting_check(gradient_curve(H, neg_distance(v2(2, 0)), v2(-1, 1), 1e-2, 4)).pass);
  DiscreteCurve arc;
  for (int i = 0; i <= 300; ++i) {
    double a = 1.5 * kPi * i / 300;
    arc.params.push_back(a);
    arc.points.push_back(v2(std::cos(a), std::sin(a)));
  }
  Verdict v = self_contracting_check(arc);
  CHECK_FALSE(v.pass);
  CHECK(v.witness.indices.size() == 3);
}

TEST_CASE("radial curves and gexp") {
  const double h = 1e-3;
  ConvexDomain E = ConvexDomain::whole();
  Vec p = v2(0, 0);
  for (double kappa : {0.0, -1.0}) {
    DiscreteCurve c = radial_curve(E, p, v2(0.3, 0.4), kappa, h, 2);
    for (std::size_t k = 0; k < c.points.size(); ++k) CHECK(std::abs((c.points[k] - p).norm() - c.params[k]) < 1e-9);
  }
  // kappa > 0 stops before varpi/2
  DiscreteCurve sph = radial_curve(E, p, v2(0.3, 0.4), 1, 1e-2, 3);
  CHECK(sph.params.back() < kPi / 2);

  ConvexDomain H = ConvexDomain::half_space(v2(0, 1));
  Vec q = v2(0, 0.5);
  Rng rng(4);
  for (int i = 0; i < 50; ++i) {
    Vec v = rng.uniform(0, 2) * rng.unit_vector(2);
    Vec closed = gexp(H, q, v);
    Vec pr = q + v;
    pr[1] = std::max(pr[1], 0.0);
    CHECK((closed - pr).norm() < 1e-12);
    CHECK((gexp(H, q, v, h, true) - closed).norm() < 20 * h);
  }

  // disk: start near the boundary, the curve slides and |p sigma(s)| <= s
  ConvexDomain B = ConvexDomain::ball(v2(0, 0), 1);
  DiscreteCurve d = radial_curve(B, v2(0.2, 0), v2(0.2, 0.95), 0, h, 2.5);
  double worst = -kInf;
  for (std::size_t k = 0; k < d.points.size(); ++k) {
    worst = std::max(worst, (d.points[k] - v2(0.2, 0)).norm() - d.params[k]);
    CHECK(B.contains(d.points[k], 1e-12));
  }
  CHECK(worst <= 1e-12);
  CHECK(B.on_boundary(d.points.back(), 1e-9));
}

TEST_CASE("radial comparison") {
  const double h = 1e-3;
  ConvexDomain E = ConvexDomain::whole();
  Vec p = v2(0, 0);
  DiscreteCurve a = radial_curve(E, p, v2(0.1, 0), 0, h, 1.5);
  DiscreteCurve b = radial_curve(E, p, v2(0, 0.1), 0, h, 1.5);
  Verdict g = radial_comparison_check(E, p, 0, a, b, h);
  CHECK(g.pass);
  CHECK(std::abs(g.margin) < 1e-9);  // radial geodesics: equality

  ConvexDomain H = ConvexDomain::half_space(v2(0, 1));
  Vec q = v2(0, 0.4);
  DiscreteCurve r = radial_curve(H, q, v2(0.1, 0.3), 0, h, 2);
  DiscreteCurve s = radial_curve(H, q, v2(-0.05, 0.3), 0, h, 2);
  Verdict hv = radial_comparison_check(H, q, 0, r, s, h);
  CHECK(hv.pass);
  CHECK(hv.margin > -10 * h);

  // gexp is short: |gexp v gexp w| <= side_0{angle(v, w); |v|, |w|}
  double worst = kInf;
  for (int i = 0; i < 20; ++i)
    for (int j = 0; j < 20; ++j) {
      Vec v = (0.1 + 0.1 * i) * v2(std::cos(-0.3 * i), std::sin(-0.3 * i));
      Vec w = (0.1 + 0.1 * j) * v2(std::cos(-0.2 * j - 1), std::sin(-0.2 * j - 1));
      double ang = std::acos(std::clamp(v.dot(w) / (v.norm() * w.norm()), -1.0, 1.0));
      worst = std::min(worst, model_side(0, ang, v.norm(), w.norm()) - (gexp(H, q, v) - gexp(H, q, w)).norm());
    }
  CHECK(worst >= -1e-12);
}

TEST_CASE("developments") {
  // straight segment past p: isometric development, margin 0
  std::vector<double> rho, steps;
  for (int i = 0; i <= 10; ++i) {
    rho.push_back(std::hypot(-1 + 0.2 * i, 0.5));
    if (i > 0) steps.push_back(0.2);
  }
  Development s = develop_curve(0, rho, steps);
  CHECK(std::abs(s.margin) < 1e-7);
  for (std::size_t i = 1; i < s.points.size(); ++i) CHECK((s.points[i] - s.points[i - 1]).norm() == doctest::Approx(0.2));

  // circle about p: an arc, convex
  std::vector<double> cr(12, 0.7), cs(11, 2 * 0.7 * std::sin(0.15));
  Development c = develop_curve(0, cr, cs);
  CHECK(c.margin > 0);
  CHECK(c.theta.back() == doctest::Approx(11 * 0.3));

  // spherical development keeps the radii
  Development sp = develop_curve(1, {0.5, 0.6, 0.7}, {0.2, 0.2});
  ModelSpace S(1, 2);
  for (int i = 0; i < 3; ++i) CHECK(S.distance(S.origin(), sp.points[i]) == doctest::Approx(sp.rho[i]));
  CHECK(S.distance(sp.points[0], sp.points[1]) == doctest::Approx(0.2));
  CHECK_THROWS_AS(develop_curve(1, {0.5, 4.0}, {3.5}), std::domain_error);

  // cone nets: geodesics away from the tip of cone(3pi/2) develop convexly,
  // the one through the tip of cone(5pi/2) does not
  SampledSpace C3 = cone_net(1.5 * kPi);
  int p = nearest(C3, 0.8, 0.2);
  Verdict ok = development_check(C3, p, C3.geodesic(nearest(C3, 0.9, 2.0), nearest(C3, 0.7, 3.9)), 0, 0.3);
  CHECK(ok.pass);
  SampledSpace C5 = cone_net(2.5 * kPi);
  int a = nearest(C5, 0.6, 0), b = nearest(C5, 0.6, kPi), q = nearest(C5, 0.6, 1.75 * kPi);
  Development dev;
  Verdict bad = development_check(C5, q, C5.geodesic(a, b), 0, 0.2, &dev);
  CHECK_FALSE(bad.pass);
  CHECK(dev.margin < -0.5);
}

TEST_CASE("geodesic convexity") {
  NetSpec spec;
  spec.kind = SurfaceKind::Plane;
  spec.extent = 1;
  spec.h = 0.1;
  spec.calibration_pairs = 100;
  SampledSpace P = net_of_surface(spec);
  auto at = [&](double x, double y) { return nearest(P, x, y); };
  Verdict par = geodesic_convexity_check(P, P.geodesic(at(-0.8, -0.5), at(0.8, -0.5)), P.geodesic(at(-0.8, 0.3), at(0.8, 0.3)));
  CHECK(par.pass);
  Verdict fan = geodesic_convexity_check(P, P.geodesic(at(0, 0), at(0.9, 0.2)), P.geodesic(at(0, 0), at(-0.3, 0.9)), 10);
  CHECK(fan.pass);

  // tree: two geodesics sharing the centre
  Graph g;
  g.n = 1 + 3 * 10;
  for (int a = 0; a < 3; ++a)
    for (int t = 0; t < 10; ++t) g.edges.push_back({t == 0 ? 0 : 1 + a * 10 + t - 1, 1 + a * 10 + t, 0.1});
  SampledSpace T(g);
  Verdict tr = geodesic_convexity_check(T, T.geodesic(10, 20), T.geodesic(30, 20));
  CHECK(tr.pass);
  CHECK(tr.checked > 0);
}
