#include <doctest.h>

#include "curvkit/comparison.hpp"
#include "curvkit/warped.hpp"

using namespace curvkit;

namespace {
// Half-plane lattice y >= 0 with a radius-3 stencil; boundary row tagged.
SampledSpace half_plane(int K, double h, std::vector<int>& boundary) {
  Graph g;
  auto id = [&](int i, int j) { return j * (2 * K + 1) + (i + K); };
  for (int j = 0; j <= K; ++j)
    for (int i = -K; i <= K; ++i) {
      Vec c(2);
      c << i * h, j * h;
      g.coords.push_back(c);
      if (j == 0) boundary.push_back(id(i, j));
    }
  g.n = static_cast<int>(g.coords.size());
  for (int j = 0; j <= K; ++j)
    for (int i = -K; i <= K; ++i)
      for (int dj = 0; dj <= 3; ++dj)
        for (int di = -3; di <= 3; ++di) {
          if (dj == 0 && di <= 0) continue;
          if (di * di + dj * dj >= 10) continue;
          int a = i + di, b = j + dj;
          if (a < -K || a > K || b > K) continue;
          g.edges.push_back({id(i, j), id(a, b), h * std::hypot(di, dj)});
        }
  SampledSpace S(g);
  auto c = S.graph().coords;
  S.exact = [c](int i, int j) { return (c[i] - c[j]).norm(); };
  return S;
}

double great_circle(double t1, double p1, double t2, double p2) {
  double c = std::cos(t1) * std::cos(t2) + std::sin(t1) * std::sin(t2) * std::cos(p1 - p2);
  return std::acos(std::clamp(c, -1.0, 1.0));
}
}  // namespace

TEST_CASE("cone distance") {
  CHECK(cone_distance(0, 1.5, 2.0, kPi) == doctest::Approx(3.5).epsilon(1e-15));
  CHECK(cone_distance(0, 1.5, 2.0, 4.0) == doctest::Approx(3.5).epsilon(1e-15));
  CHECK(cone_distance(-1, 1.5, 2.0, kPi) == doctest::Approx(3.5).epsilon(1e-14));
  CHECK(cone_distance(0, 3, 4, kPi / 2) == doctest::Approx(5).epsilon(1e-15));
  CHECK_THROWS_AS(cone_distance(1, 4, 1, 1), std::domain_error);
}

TEST_CASE("cone over a circle of length 2pi is the plane") {
  const int n = 12;
  FiniteMetric F = circle_metric(2 * kPi, n);
  std::vector<double> radii{0, 0.5, 1.0, 1.7};
  FiniteMetric C = cone_space(F, radii);
  CHECK(C.size() == 1 + 3 * n);
  validate_metric(C.table());
  for (int i = 1; i < C.size(); ++i)
    for (int j = 1; j < C.size(); ++j) {
      double r1 = radii[1 + (i - 1) / n], r2 = radii[1 + (j - 1) / n];
      double a1 = 2 * kPi * ((i - 1) % n) / n, a2 = 2 * kPi * ((j - 1) % n) / n;
      double chord = std::hypot(r1 * std::cos(a1) - r2 * std::cos(a2), r1 * std::sin(a1) - r2 * std::sin(a2));
      CHECK(C(i, j) == doctest::Approx(chord).epsilon(1e-12));
    }
  // a single fiber point gives a ray
  FiniteMetric R = cone_space(FiniteMetric::trusted(Mat::Zero(1, 1)), {0, 1, 2.5});
  CHECK(R.size() == 3);
  CHECK(R(1, 2) == doctest::Approx(1.5));
  CHECK(R(0, 2) == doctest::Approx(2.5));
}

TEST_CASE("suspensions") {
  Mat two(2, 2);
  two << 0, kPi, kPi, 0;
  FiniteMetric S = suspension_space(validate_metric(two), {0, kPi / 2, kPi});
  REQUIRE(S.size() == 4);  // north, two equator points, south
  CHECK(S(0, 3) == doctest::Approx(kPi));
  CHECK(S(1, 2) == doctest::Approx(kPi));
  for (int e : {1, 2}) {
    CHECK(S(0, e) == doctest::Approx(kPi / 2));
    CHECK(S(3, e) == doctest::Approx(kPi / 2));
  }
  // cycle north -> e1 -> south -> e2 -> north has length 2pi
  CHECK(S(0, 1) + S(1, 3) + S(3, 2) + S(2, 0) == doctest::Approx(2 * kPi));

  const int n = 10;
  std::vector<double> th{0, 0.6, 1.3, 2.2, kPi};
  FiniteMetric U = suspension_space(circle_metric(2 * kPi, n), th);
  REQUIRE(U.size() == 2 + 3 * n);
  auto coord = [&](int i, double& t, double& p) {
    if (i == 0) t = 0, p = 0;
    else if (i == U.size() - 1) t = kPi, p = 0;
    else t = th[1 + (i - 1) / n], p = 2 * kPi * ((i - 1) % n) / n;
  };
  for (int i = 0; i < U.size(); ++i)
    for (int j = 0; j < U.size(); ++j) {
      double t1, p1, t2, p2;
      coord(i, t1, p1);
      coord(j, t2, p2);
      CHECK(U(i, j) == doctest::Approx(great_circle(t1, p1, t2, p2)).epsilon(1e-11));
    }
}

TEST_CASE("doubling") {
  // segment doubled along an endpoint is twice as long
  Graph seg;
  seg.n = 5;
  for (int i = 0; i < 4; ++i) seg.edges.push_back({i, i + 1, 0.25});
  SampledSpace D = doubling(SampledSpace(seg), {0});
  CHECK(D.size() == 9);
  CHECK(D.tag("copy2").size() == 5);
  CHECK(D.distance(4, D.tag("copy2").back()) == doctest::Approx(2.0));

  // half-plane doubled along its boundary line is the plane
  std::vector<int> line;
  SampledSpace H = half_plane(10, 0.1, line);
  SampledSpace P = doubling(H, line);
  const auto& c = P.graph().coords;
  const auto& copy2 = P.tag("copy2");
  std::vector<char> second(P.size(), 0);
  for (int v : copy2) second[v] = 1;
  for (int v : line) second[v] = 0;
  auto planar = [&](int v) {
    Eigen::Vector2d x(c[v][0], c[v][1]);
    if (second[v]) x.y() = -x.y();
    return x;
  };
  double worst = 0;
  Rng rng(8);
  for (int k = 0; k < 300; ++k) {
    int i = static_cast<int>(rng.index(P.size())), j = static_cast<int>(rng.index(P.size()));
    worst = std::max(worst, std::abs(P.distance(i, j) - (planar(i) - planar(j)).norm()));
    CHECK(P.distance(i, j) == doctest::Approx(P.exact(i, j)).epsilon(0.05));
  }
  // the full lattice with the same stencil has error of the same size
  std::vector<int> unused;
  SampledSpace Full = half_plane(10, 0.1, unused);
  double full_worst = 0;
  for (int k = 0; k < 300; ++k) {
    int i = static_cast<int>(rng.index(Full.size())), j = static_cast<int>(rng.index(Full.size()));
    full_worst = std::max(full_worst, Full.distance(i, j) - Full.exact(i, j));
  }
  CHECK(worst < 2 * full_worst + 0.01);

  // gluing along two separated points splits geodesics: CAT(0) fails
  Graph row;
  row.n = 9;
  for (int i = 0; i < 8; ++i) row.edges.push_back({i, i + 1, 0.5});
  SampledSpace R = doubling(SampledSpace(row), {0, 8});
  int m1 = 4, m2 = -1;
  for (int v : R.tag("copy2"))
    if (v >= 9 && R.distance(0, v) == doctest::Approx(2.0)) m2 = v;
  REQUIRE(m2 > 0);
  FiniteMetric M = R.metric({0, 8, m1, m2});
  Verdict v = is_cat(M, 0);
  CHECK_FALSE(v.pass);
  CHECK(v.witness.indices.size() == 4);
}

TEST_CASE("warped distances") {
  auto close = [](const WarpedDistance& d, double exact, double slack = 1e-6) {
    INFO("value " << d.value << " exact " << exact << " budget " << d.budget);
    CHECK(std::abs(d.value - exact) <= d.budget + slack);
  };
  WarpedDistance c = warped_1d_distance(make_warp(WarpTag::Id, 0, kInf), 3, 4, kPi / 2);
  close(c, 5);
  CHECK(c.value == doctest::Approx(5).epsilon(1e-6));
  // straight through the tip once the fiber distance reaches pi
  close(warped_1d_distance(make_warp(WarpTag::Id, 0, kInf), 1, 2, 3.5), 3);

  WarpedDistance p = warped_1d_distance(make_warp(WarpTag::Const, -kInf, kInf, 1), 0.3, 1.7, 2);
  close(p, std::sqrt(1.4 * 1.4 + 4));
  CHECK(p.value == doctest::Approx(std::sqrt(5.96)).epsilon(1e-9));

  auto sphere = make_warp(WarpTag::Sin, 0, kPi);
  close(warped_1d_distance(sphere, 1, 2, 1.3), model_side(1, 1.3, 1, 2));
  close(warped_1d_distance(sphere, 0.4, 2.9, 0.7), model_side(1, 0.7, 0.4, 2.9));
  close(warped_1d_distance(sphere, 1, 2, 3.0), model_side(1, 3.0, 1, 2));
  WarpedDistance pole = warped_1d_distance(sphere, 1, 2, 3.5);
  close(pole, 3);
  CHECK(pole.through_zero);

  auto hyp = make_warp(WarpTag::Sinh, 0, kInf);
  close(warped_1d_distance(hyp, 0.5, 1.2, 0.9), model_side(-1, 0.9, 0.5, 1.2));

  // Fermi coordinates along a line of H^2
  auto fermi = make_warp(WarpTag::Cosh, -kInf, kInf);
  double t1 = -0.4, t2 = 0.8, s = 1.1;
  double fe = std::acosh(std::cosh(t1) * std::cosh(t2) * std::cosh(s) - std::sinh(t1) * std::sinh(t2));
  close(warped_1d_distance(fermi, t1, t2, s), fe);
  // horocyclic coordinates
  auto horo = make_warp(WarpTag::Exp, -kInf, kInf);
  double ho = std::acosh(std::cosh(t1 - t2) + 0.5 * std::exp(t1 + t2) * s * s);
  close(warped_1d_distance(horo, t1, t2, s), ho);
}

TEST_CASE("warp monotonicity") {
  std::vector<WarpSample> samples;
  Rng rng(3);
  for (int k = 0; k < 12; ++k) samples.push_back({rng.uniform(0, 1), rng.uniform(0, 1), rng.uniform(0.1, 2)});
  auto id = make_warp(WarpTag::Id, 0, 1), sh = make_warp(WarpTag::Sinh, 0, 1);
  Verdict same = warp_monotone_check(id, id, samples);
  CHECK(same.pass);
  CHECK(same.margin >= 0);
  CHECK(same.margin < 1e-5);
  CHECK(warp_monotone_check(id, sh, samples).pass);
  auto half = make_warp(WarpTag::Const, 0, 1, 0.5), one = make_warp(WarpTag::Const, 0, 1, 1);
  CHECK(warp_monotone_check(half, one, samples).pass);
  CHECK_FALSE(warp_monotone_check(one, half, samples).pass);
}
