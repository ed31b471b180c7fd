#include "curvkit/suite.hpp"

#include "curvkit/extension.hpp"
#include "curvkit/warped.hpp"

#include <chrono>
#include <sstream>

namespace curvkit {

namespace {

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(3);
  os << x;
  return os.str();
}

Vec v2(double x, double y) {
  Vec v(2);
  v << x, y;
  return v;
}

// Seeds of the individual criteria are offsets of the suite seed.
std::uint64_t sub_seed(const SuiteOptions& o, int criterion) { return o.seed + 1000003ULL * criterion; }

// ---------------------------------------------------------------- 1

CriterionResult trig_kernel(const SuiteOptions& o) {
  CriterionResult r;
  Rng rng(sub_seed(o, 1));
  double worst_roundtrip = 0;
  int missing = 0;
  for (int i = 0; i < 10000; ++i) {
    double k = rng.uniform(-4, 4);
    double w = k > 0 ? varpi(k) : 4.0;
    double b = rng.uniform(1e-3, 0.49 * w), c = rng.uniform(1e-3, 0.49 * w);
    double phi = rng.uniform(0, kPi);
    auto back = model_angle(k, model_side(k, phi, b, c), b, c);
    if (!back) {
      ++missing;
      continue;
    }
    worst_roundtrip = std::max(worst_roundtrip, std::abs(*back - phi));
  }

  const double h = 1e-4;
  double worst_md = 0, worst_sn = 0;
  for (int i = 0; i < 10000; ++i) {
    double k = rng.uniform(-4, 4);
    double top = std::min(3.0, 0.9 * kPi / std::sqrt(std::abs(k)));
    double x = rng.uniform(2 * h, top - h);
    double d2m = (md(k, x + h) - 2 * md(k, x) + md(k, x - h)) / (h * h);
    double d2s = (sn(k, x + h) - 2 * sn(k, x) + sn(k, x - h)) / (h * h);
    worst_md = std::max(worst_md, std::abs(d2m + k * md(k, x) - 1));
    worst_sn = std::max(worst_sn, std::abs(d2s + k * sn(k, x)));
  }

  // angle nondecreasing and side nonincreasing in kappa, on a kappa grid
  double mono = kInf;
  for (int i = 0; i < 500; ++i) {
    double b = rng.uniform(0.1, 0.7), c = rng.uniform(0.1, 0.7), phi = rng.uniform(0, kPi);
    double a = model_side(0, phi, b, c);
    double prev_ang = -kInf, prev_side = kInf;
    for (int s = 0; s <= 64; ++s) {
      double k = -4 + 0.125 * s;
      auto ang = model_angle(k, a, b, c);
      if (!ang) break;
      mono = std::min(mono, *ang - prev_ang);
      prev_ang = *ang;
      double side = model_side(k, phi, b, c);
      mono = std::min(mono, prev_side - side);
      prev_side = side;
    }
  }
  r.pass = missing == 0 && worst_roundtrip < 1e-9 && worst_md < 1e-6 && worst_sn < 1e-6 && mono >= 0;
  r.data = {{"roundtrip_max", worst_roundtrip}, {"roundtrip_undefined", missing},
            {"ode_md_max", worst_md},           {"ode_sn_max", worst_sn},
            {"monotonicity_min", number(mono)}};
  r.summary = "roundtrip " + fmt(worst_roundtrip) + " (< 1e-9), ODE md " + fmt(worst_md) + " sn " +
              fmt(worst_sn) + " (< 1e-6), monotonicity min " + fmt(mono) + " (>= 0)";
  r.budget = 2;
  return r;
}

// ---------------------------------------------------------------- 2

CriterionResult model_soundness(const SuiteOptions& o) {
  CriterionResult r;
  struct Kind {
    const char* name;
    double kappa;
    int dim;
  };
  const Kind kinds[] = {{"E3", 0, 3}, {"S2", 1, 2}, {"H2", -1, 2}};
  ScanOptions scan{1e-9, o.jobs};
  bool all = true;
  Json per = Json::object();
  for (int t = 0; t < 3; ++t) {
    const Kind& K = kinds[t];
    int fails = 0;
    long quads = 0;
    double cbb_min = kInf, cat_min = kInf;
    for (int i = 0; i < 100; ++i) {
      ModelSample s = sample_model_space(K.kappa, K.dim, 30, sub_seed(o, 2) + 1000 * t + i);
      Verdict b = is_cbb(s.metric, K.kappa, scan), c = is_cat(s.metric, K.kappa, scan);
      if (!b.pass || !c.pass || b.vacuous || c.vacuous) ++fails;
      quads += c.checked;
      cbb_min = std::min(cbb_min, b.margin);
      cat_min = std::min(cat_min, c.margin);
    }
    all = all && fails == 0;
    per[K.name] = {{"samples", 100}, {"failures", fails}, {"quadruples_per_sample", quads / 100},
                   {"cbb_margin_min", number(cbb_min)}, {"cat_margin_min", number(cat_min)}};
    if (o.progress) o.progress(std::string("  ") + K.name + " done");
  }
  r.pass = all;
  r.data = per;
  r.summary = "300 samples x 30 points, failures E3 " + per["E3"]["failures"].dump() + " S2 " +
              per["S2"]["failures"].dump() + " H2 " + per["H2"]["failures"].dump() + " (tol 1e-9)";
  r.budget = 20;
  return r;
}

// ---------------------------------------------------------------- 3

CriterionResult counterexamples(const SuiteOptions& o) {
  CriterionResult r;
  ScanOptions scan{kVerdictTol, o.jobs};
  FiniteMetric T = tripod_metric();
  Verdict b = is_cbb(T, 0, scan);
  Verdict c = is_cat(T, 0, scan);
  double dev = std::abs(b.margin + kPi);
  FiniteMetric C = circle_metric(2 * kPi, 12);
  Verdict cc = is_cat(C, 0, scan);
  bool witness_ok = cc.witness.indices.size() == 4;
  double recheck = kNaN;
  if (witness_ok) {
    const auto& w = cc.witness.indices;
    recheck = cat_quadruple(C, w[0], w[1], w[2], w[3], 0).margin;
    witness_ok = std::abs(recheck - cc.margin) <= 1e-12;
  }
  r.pass = !b.pass && dev <= 1e-12 && c.pass && !cc.pass && witness_ok;
  r.data = {{"tripod_cbb_margin", b.margin},
            {"tripod_cbb_witness", b.witness.indices},
            {"tripod_cat_pass", c.pass},
            {"circle_cat_margin", number(cc.margin)},
            {"circle_cat_witness", cc.witness.indices},
            {"circle_witness_recheck", number(recheck)}};
  r.summary = "tripod margin + pi = " + fmt(dev) + " (<= 1e-12), tripod CAT(0) " +
              (c.pass ? "pass" : "fail") + ", circle CAT(0) margin " + fmt(cc.margin) + " witness " +
              Json(cc.witness.indices).dump();
  r.budget = 1;
  return r;
}

// ---------------------------------------------------------------- 4

CriterionResult thresholds(const SuiteOptions& o) {
  CriterionResult r;
  ScanOptions scan{kVerdictTol, o.jobs};
  double sup_min = kInf, inf_max = -kInf;
  Json sups = Json::array(), infs = Json::array();
  for (int i = 0; i < 5; ++i) {
    Threshold s = cbb_sup_kappa(sample_model_space(1, 2, 30, sub_seed(o, 4) + i).metric, scan);
    Threshold h = cat_inf_kappa(sample_model_space(-1, 2, 30, sub_seed(o, 4) + 100 + i).metric, scan);
    sup_min = std::min(sup_min, s.value);
    inf_max = std::max(inf_max, h.value);
    sups.push_back(number(s.value));
    infs.push_back(number(h.value));
  }
  r.pass = sup_min >= 1 - 1e-4 && inf_max <= -1 + 1e-4;
  r.data = {{"cbb_sup_kappa_S2", sups}, {"cat_inf_kappa_H2", infs}};
  r.summary = "min cbb_sup_kappa(S2) " + fmt(sup_min) + " (>= 0.9999), max cat_inf_kappa(H2) " +
              fmt(inf_max) + " (<= -0.9999)";
  r.budget = 30;
  return r;
}

// ---------------------------------------------------------------- 5

// Row-interval scan of an intersection of planar disks on a grid of rows.
bool grid_feasible(const BallSystem& B, double step) {
  double ylo = -kInf, yhi = kInf;
  for (std::size_t i = 0; i < B.centers.size(); ++i) {
    ylo = std::max(ylo, B.centers[i][1] - B.radii[i]);
    yhi = std::min(yhi, B.centers[i][1] + B.radii[i]);
  }
  for (double y = std::floor(ylo / step) * step; y <= yhi; y += step) {
    double lo = -kInf, hi = kInf;
    for (std::size_t i = 0; i < B.centers.size(); ++i) {
      double dy = y - B.centers[i][1], r2 = B.radii[i] * B.radii[i] - dy * dy;
      if (r2 < 0) {
        lo = kInf, hi = -kInf;
        break;
      }
      lo = std::max(lo, B.centers[i][0] - std::sqrt(r2));
      hi = std::min(hi, B.centers[i][0] + std::sqrt(r2));
    }
    if (std::ceil(lo / step) * step <= hi) return true;
  }
  return false;
}

CriterionResult kirszbraun(const SuiteOptions& o) {
  CriterionResult r;
  Rng rng(sub_seed(o, 5));
  int faults = 0, infeasible = 0, instances = 0, rejected = 0, grid_checked = 0, grid_agree = 0;
  while (instances < 500) {
    int kind = instances % 3;
    double kappa = kind == 2 ? 1.0 : 0.0;
    int dim = kind == 1 ? 3 : 2;
    int k = 3 + static_cast<int>(rng.index(3));
    ModelSample m = sample_model_space(kappa, dim, k + 1, sub_seed(o, 5) + 7919 * instances + rejected);
    Verdict cert = is_cbb(m.metric, 0);
    if (!cert.pass || cert.vacuous) {
      ++rejected;
      continue;
    }
    std::vector<Vec> y;
    for (int i = 0; i < k; ++i) y.push_back(v2(rng.uniform(-1, 1), rng.uniform(-1, 1)));
    double scale = kInf;
    for (int i = 0; i < k; ++i)
      for (int j = i + 1; j < k; ++j) scale = std::min(scale, m.metric(i + 1, j + 1) / (y[i] - y[j]).norm());
    double shrink = scale * rng.uniform(0.5, 1);
    for (Vec& v : y) v *= shrink;
    bool short_map = true;
    for (int i = 0; i < k; ++i)
      for (int j = i + 1; j < k; ++j)
        short_map = short_map && (y[i] - y[j]).norm() <= m.metric(i + 1, j + 1) * (1 + 1e-12);
    if (!short_map) {
      ++rejected;
      continue;
    }
    std::vector<int> xs;
    for (int i = 1; i <= k; ++i) xs.push_back(i);
    ExtensionResult e = kirszbraun_extend(m.metric, 0, xs, y, 0);
    if (e.fault) ++faults;
    if (!e.feasible) ++infeasible;
    if (grid_checked < 50) {
      BallSystem B{y, {}};
      for (int i = 1; i <= k; ++i) B.radii.push_back(m.metric(0, i));
      ++grid_checked;
      if (grid_feasible(B, 1e-3) == e.feasible) ++grid_agree;
    }
    ++instances;
  }
  r.pass = faults == 0 && grid_checked == 50 && grid_agree == 50;
  r.data = {{"instances", instances}, {"faults", faults},          {"infeasible", infeasible},
            {"rejected_draws", rejected}, {"grid_checked", grid_checked}, {"grid_agree", grid_agree}};
  r.summary = "500 instances, faults " + std::to_string(faults) + " (= 0), infeasible " +
              std::to_string(infeasible) + ", grid oracle agreement " + std::to_string(grid_agree) + "/50";
  r.budget = 30;
  return r;
}

// ---------------------------------------------------------------- 6

CriterionResult cone_transfer(const SuiteOptions& o) {
  CriterionResult r;
  // Rays and meridians make exactly degenerate triangles, whose angles carry
  // sqrt(eps) rounding; transfer checks run at 1e-6 (+ budget, zero here).
  ScanOptions scan{1e-6, o.jobs};
  const std::vector<double> radii{0, 0.1, 0.25, 0.4, 0.7, 1.0, 1.5};
  FiniteMetric C3 = cone_space(circle_metric(1.5 * kPi, 12), radii);
  FiniteMetric C5 = cone_space(circle_metric(2.5 * kPi, 12), radii);
  Verdict a = is_cbb(C3, 0, scan), b = is_cbb(C5, 0, scan);
  double far = 0;
  for (int i : b.witness.indices) far = std::max(far, C5(0, i));
  bool near_tip = b.witness.indices.size() == 4 && far <= 0.5;

  const int n = 16;
  const std::vector<double> th{0, 0.4, 0.9, 1.5, 2.1, 2.7, kPi};
  FiniteMetric U = suspension_space(circle_metric(2 * kPi, n), th);
  auto coord = [&](int i, double& t, double& p) {
    if (i == 0) t = 0, p = 0;
    else if (i == U.size() - 1) t = kPi, p = 0;
    else t = th[1 + (i - 1) / n], p = 2 * kPi * ((i - 1) % n) / n;
  };
  double dev = 0;
  for (int i = 0; i < U.size(); ++i)
    for (int j = 0; j < U.size(); ++j) {
      double t1, p1, t2, p2;
      coord(i, t1, p1);
      coord(j, t2, p2);
      // unit vectors in R^3; the angle via atan2 of cross and dot
      Eigen::Vector3d u(std::sin(t1) * std::cos(p1), std::sin(t1) * std::sin(p1), std::cos(t1));
      Eigen::Vector3d v(std::sin(t2) * std::cos(p2), std::sin(t2) * std::sin(p2), std::cos(t2));
      double g = std::atan2(u.cross(v).norm(), u.dot(v));
      dev = std::max(dev, std::abs(U(i, j) - g));
    }
  Verdict s = is_cbb(U, 1, scan);
  // closed-form suspension: no grid, the budget is rounding only
  const double budget = 1e-10;
  r.pass = a.pass && !b.pass && near_tip && dev <= budget && s.pass;
  r.data = {{"cone_3pi_2_margin", number(a.margin)},
            {"cone_5pi_2_margin", number(b.margin)},
            {"cone_5pi_2_witness", b.witness.indices},
            {"witness_max_tip_distance", far},
            {"suspension_max_deviation", dev},
            {"suspension_cbb1_margin", number(s.margin)}};
  r.summary = "cone(3pi/2) CBB(0) " + std::string(a.pass ? "pass" : "fail") + ", cone(5pi/2) margin " +
              fmt(b.margin) + " witness within " + fmt(far) + " of tip (<= 0.5), suspension dev " + fmt(dev) +
              ", CBB(1) " + (s.pass ? "pass" : "fail");
  r.budget = 30;
  return r;
}

// ---------------------------------------------------------------- 7

CriterionResult flows(const SuiteOptions& o) {
  CriterionResult r;
  const double h = 1e-3, T = 2;
  ConvexDomain E = ConvexDomain::whole(2);
  Verdict c = contraction_check(E, neg_half_square(v2(0, 0)), v2(0.6, 0.2), v2(-0.2, -0.4), h, T, 3);
  double cdev = c.certificate.empty() ? kInf : c.certificate[0];

  ConvexDomain H = ConvexDomain::half_space(v2(0, 1), 0);
  Rng rng(sub_seed(o, 7));
  double gexp_closed = 0, gexp_flow = 0;
  for (int i = 0; i < 200; ++i) {
    Vec p = v2(rng.uniform(-1, 1), rng.uniform(0, 1));
    if (i % 4 == 0) p[1] = 0;
    Vec v = rng.uniform(0.05, 1.5) * rng.unit_vector(2);
    if (p[1] == 0) v[1] = std::abs(v[1]);  // tangent cone at a boundary point
    Vec oracle = v2(p[0] + v[0], std::max(0.0, p[1] + v[1]));
    gexp_closed = std::max(gexp_closed, (gexp(H, p, v) - oracle).norm());
    if (i < 20) gexp_flow = std::max(gexp_flow, (gexp(H, p, v, h, true) - oracle).norm());
  }

  double radial_min = kInf;
  int radial_fail = 0;
  const int pairs = 8;
  for (int i = 0; i < pairs; ++i) {
    Vec p = v2(rng.uniform(-0.5, 0.5), i % 2 ? 0.0 : rng.uniform(0.1, 0.6));
    Vec x = p + 0.1 * rng.unit_vector(2), y = p + 0.1 * rng.unit_vector(2);
    x = H.project(x), y = H.project(y);
    if ((x - p).norm() < 0.02 || (y - p).norm() < 0.02) {
      --i;
      continue;
    }
    DiscreteCurve a = radial_curve(H, p, x, 0, h, 1.5);
    DiscreteCurve b = radial_curve(H, p, y, 0, h, 1.5);
    Verdict v = radial_comparison_check(H, p, 0, a, b, h, 50, 10);
    radial_min = std::min(radial_min, v.margin);
    if (!v.pass) ++radial_fail;
  }
  r.pass = c.pass && cdev <= 3 * h && gexp_closed <= 1e-12 && gexp_flow <= 20 * h && radial_fail == 0;
  r.data = {{"contraction_max_deviation", number(cdev)},
            {"gexp_closed_form_max", gexp_closed},
            {"gexp_integrated_max", gexp_flow},
            {"radial_pairs", pairs},
            {"radial_failures", radial_fail},
            {"radial_margin_min", number(radial_min)}};
  r.summary = "contraction dev " + fmt(cdev) + " (<= 3h), gexp vs proj " + fmt(gexp_closed) +
              " (<= 1e-12), integrated " + fmt(gexp_flow) + " (<= 20h), radial comparison " + std::to_string(pairs - radial_fail) + "/" +
              std::to_string(pairs) + " pass, min margin " + fmt(radial_min) + " (>= -10h)";
  r.budget = 10;
  return r;
}

// ---------------------------------------------------------------- 8

SampledSpace cone_net(double angle, std::uint64_t seed) {
  NetSpec s;
  s.kind = SurfaceKind::Cone;
  s.total_angle = angle;
  s.extent = 1.2;
  s.h = 0.06;
  s.calibration_pairs = 200;
  s.seed = seed;
  return net_of_surface(s);
}

struct DevStats {
  int pass = 0, total = 0;
  double worst = kInf;
};

DevStats develop_random(const SampledSpace& S, std::uint64_t seed, int count) {
  Rng rng(seed);
  DevStats st;
  while (st.total < count) {
    int a = static_cast<int>(rng.index(S.size())), b = static_cast<int>(rng.index(S.size())),
        p = static_cast<int>(rng.index(S.size()));
    if (a == b || p == a || p == b || S.distance(a, b) < 0.3) continue;
    auto g = S.geodesic(a, b);
    if (std::find(g.begin(), g.end(), p) != g.end()) continue;
    Development d;
    Verdict v = development_check(S, p, g, 0, 0.25, &d);
    ++st.total;
    if (v.pass) ++st.pass;
    st.worst = std::min(st.worst, d.margin);
  }
  return st;
}

CriterionResult development(const SuiteOptions& o) {
  CriterionResult r;
  SampledSpace C3 = cone_net(1.5 * kPi, sub_seed(o, 8));
  DevStats a = develop_random(C3, sub_seed(o, 8) + 1, 100);
  SampledSpace C5 = cone_net(2.5 * kPi, sub_seed(o, 8));
  DevStats b = develop_random(C5, sub_seed(o, 8) + 2, 100);
  r.pass = a.pass == 100 && b.pass < b.total;
  r.data = {{"cone_3pi_2", {{"convex", a.pass}, {"total", a.total}, {"worst_raw_margin", number(a.worst)},
                            {"delta", C3.delta()}}},
            {"cone_5pi_2", {{"convex", b.pass}, {"total", b.total}, {"worst_raw_margin", number(b.worst)},
                            {"delta", C5.delta()}}}};
  r.summary = "cone(3pi/2) convex " + std::to_string(a.pass) + "/100, cone(5pi/2) non-convex " +
              std::to_string(b.total - b.pass) + "/100 (>= 1), worst raw margin " + fmt(b.worst);
  r.budget = 10;
  return r;
}

// ---------------------------------------------------------------- 9

CriterionResult implication(const SuiteOptions& o) {
  CriterionResult r;
  Rng rng(sub_seed(o, 9));
  int instances = 0, one_pass = 0, violations = 0, drawn = 0, feasible = 0, model_count = 0;
  double worst_residual = 0;
  const std::vector<int> xs{1, 2, 3, 4};
  while (instances < 100) {
    ++drawn;
    int kind = instances % 4;
    double kappa = kind % 2 ? 1.0 : 0.0;
    ModelSample s = sample_model_space(kappa, kind < 2 ? 2 : 3, 5, sub_seed(o, 9) + drawn);
    FiniteMetric M = s.metric;
    bool model_drawn = (instances / 4) % 2 == 0;
    if (!model_drawn) {
      // perturbed distances; kept only if still CBB(0) on the five points
      Mat d = M.table();
      for (int i = 0; i < 5; ++i)
        for (int j = i + 1; j < 5; ++j) d(i, j) = d(j, i) = d(i, j) * (1 + 0.3 * (rng.uniform() - 0.5));
      try {
        M = validate_metric(d);
      } catch (const MetricViolation&) {
        continue;
      }
    }
    Verdict cert = is_cbb(M, 0);
    if (!cert.pass || cert.vacuous) continue;
    ++instances;
    Verdict one = one_plus_n_test(M, 0, xs, 0);
    if (one.pass) {
      ++one_pass;
      if (!sturm_test(M, 0, xs).pass) ++violations;
    }
    if (model_drawn) {
      ++model_count;
      // the Gram problem of the model angles at p
      Mat C = Mat::Identity(4, 4);
      for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j)
          C(i, j) = C(j, i) = std::cos(*model_angle(0, M(xs[i], xs[j]), M(0, xs[i]), M(0, xs[j])));
      GramFeasibility g = gram_feasibility(C);
      if (g.status == "feasible") {
        ++feasible;
        worst_residual = std::max(worst_residual, g.residual);
      } else {
        worst_residual = kInf;
      }
    }
  }
  r.pass = violations == 0 && feasible == model_count && worst_residual < 1e-7;
  r.data = {{"instances", instances},   {"one_plus_n_pass", one_pass}, {"violations", violations},
            {"gram_feasible", feasible}, {"gram_residual_max", number(worst_residual)}};
  r.summary = "100 instances, 1+n pass " + std::to_string(one_pass) + ", implication violations " +
              std::to_string(violations) + " (= 0), Dykstra residual max " + fmt(worst_residual) +
              " over " + std::to_string(feasible) + " model instances (< 1e-7)";
  r.budget = 30;
  return r;
}

}  // namespace

std::vector<CriterionResult> run_suite(const SuiteOptions& opt) {
  using Fn = CriterionResult (*)(const SuiteOptions&);
  const std::pair<const char*, Fn> table[] = {
      {"trig kernel", trig_kernel},          {"model-space soundness", model_soundness},
      {"counterexample sharpness", counterexamples}, {"threshold bisection", thresholds},
      {"kirszbraun soundness", kirszbraun},  {"cone/suspension transfer", cone_transfer},
      {"flows", flows},                      {"development", development},
      {"implication audit", implication}};
  std::vector<CriterionResult> out;
  for (int i = 0; i < 9; ++i) {
    int id = i + 1;
    if (!opt.only.empty() && std::find(opt.only.begin(), opt.only.end(), id) == opt.only.end()) continue;
    if (opt.progress) opt.progress("criterion " + std::to_string(id) + ": " + table[i].first);
    auto t0 = std::chrono::steady_clock::now();
    CriterionResult r;
    try {
      r = table[i].second(opt);
    } catch (const std::exception& e) {
      r.pass = false;
      r.summary = std::string("exception: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    r.id = id;
    r.name = table[i].first;
    out.push_back(std::move(r));
  }
  return out;
}

Json suite_report(const std::vector<CriterionResult>& results, const SuiteOptions& opt) {
  Json list = Json::array();
  bool all = true;
  for (const auto& r : results) {
    all = all && r.pass;
    list.push_back(Json{{"id", r.id}, {"name", r.name}, {"pass", r.pass}, {"summary", r.summary}, {"data", r.data}});
  }
  Json config{{"seed", opt.seed}, {"jobs", opt.jobs}};
  return report("verify-suite", config, Json{{"pass", all}, {"criteria", list}});
}

}  // namespace curvkit
