#include "curvkit/comparison.hpp"

#include <sstream>

namespace curvkit {

namespace {

double angle_or_nan(double kappa, double a, double b, double c) {
  auto v = model_angle(kappa, a, b, c);
  return v ? *v : kNaN;
}

// angle at p between i and j
double ang(const FiniteMetric& M, double kappa, int p, int i, int j) {
  return angle_or_nan(kappa, M(i, j), M(p, i), M(p, j));
}

void require_distinct(std::initializer_list<int> idx, int n) {
  std::vector<int> v(idx);
  for (int i : v)
    if (i < 0 || i >= n) throw std::out_of_range("point index out of range");
  std::sort(v.begin(), v.end());
  if (std::adjacent_find(v.begin(), v.end()) != v.end())
    throw std::invalid_argument("indices must be distinct");
}

Verdict make(const char* test, double kappa, double tol) {
  Verdict v;
  v.test = test;
  v.kappa = kappa;
  v.tolerance = tol;
  return v;
}

// Minimum over t in [0, L] of a one-dimensional function: coarse scan, then
// golden section on the best bracket.
double min_on_interval(const std::function<double(double)>& f, double L, int scan = 32,
                       double xtol = 1e-10) {
  double best = kInf;
  int bi = 0;
  std::vector<double> vals(scan + 1);
  for (int k = 0; k <= scan; ++k) {
    vals[k] = f(L * k / scan);
    if (vals[k] < best) {
      best = vals[k];
      bi = k;
    }
  }
  double lo = L * std::max(0, bi - 1) / scan, hi = L * std::min(scan, bi + 1) / scan;
  const double g = (std::sqrt(5.0) - 1) / 2;
  double a = hi - g * (hi - lo), b = lo + g * (hi - lo);
  double fa = f(a), fb = f(b);
  while (hi - lo > xtol * (1 + L)) {
    if (fa < fb) {
      hi = b;
      b = a;
      fb = fa;
      a = hi - g * (hi - lo);
      fa = f(a);
    } else {
      lo = a;
      a = b;
      fa = fb;
      b = lo + g * (hi - lo);
      fb = f(b);
    }
  }
  return std::min({best, fa, fb});
}

// Offset from the geodesic of a point whose graph distances to the ends add
// up to |xy|: the true excess is at most delta, so the point lies in a thin
// ellipse about [xy].
}  // namespace

AngleTable::AngleTable(const FiniteMetric& M, double kappa) : n_(M.size()) {
  a_.assign(static_cast<std::size_t>(n_) * n_ * n_, kNaN);
  for (int p = 0; p < n_; ++p)
    for (int i = 0; i < n_; ++i)
      for (int j = i + 1; j < n_; ++j) {
        if (i == p || j == p) continue;
        double v = angle_or_nan(kappa, M(i, j), M(p, i), M(p, j));
        a_[(static_cast<std::size_t>(p) * n_ + i) * n_ + j] = v;
        a_[(static_cast<std::size_t>(p) * n_ + j) * n_ + i] = v;
      }
}

Verdict cbb_four_point(const FiniteMetric& M, int p, int x1, int x2, int x3, double kappa,
                       double tol) {
  require_distinct({p, x1, x2, x3}, M.size());
  Verdict v = make("cbb-four-point", kappa, tol);
  v.checked = 1;
  v.witness.indices = {p, x1, x2, x3};
  double s = ang(M, kappa, p, x1, x2) + ang(M, kappa, p, x2, x3) + ang(M, kappa, p, x3, x1);
  if (std::isnan(s)) {
    v.vacuous_count = 1;
    v.vacuous = true;
    v.note = "undefined model angle";
  } else {
    v.margin = 2 * kPi - s;
  }
  v.settle();
  return v;
}

Verdict cat_four_point(const FiniteMetric& M, int p1, int p2, int x1, int x2, double kappa,
                       double tol) {
  require_distinct({p1, p2, x1, x2}, M.size());
  Verdict v = make("cat-four-point", kappa, tol);
  v.checked = 1;
  v.witness.indices = {p1, p2, x1, x2};
  double a1 = ang(M, kappa, p1, x1, x2), b1 = ang(M, kappa, p1, p2, x1), c1 = ang(M, kappa, p1, p2, x2);
  double a2 = ang(M, kappa, p2, x1, x2), b2 = ang(M, kappa, p2, p1, x1), c2 = ang(M, kappa, p2, p1, x2);
  if (std::isnan(a1 + b1 + c1 + a2 + b2 + c2)) {
    v.vacuous_count = 1;
    v.vacuous = true;
    v.note = "undefined model angle";
    v.settle();
    return v;
  }
  v.margin = std::max(b1 + c1 - a1, b2 + c2 - a2);
  // segment form: triangles p1 p2 x1 and p1 p2 x2 on the common side [p1 p2]
  const double L = M(p1, p2);
  auto f = [&](double t) {
    return model_side_unchecked(kappa, b1, M(p1, x1), t) + model_side_unchecked(kappa, c1, M(p1, x2), t);
  };
  double seg = min_on_interval(f, L) - M(x1, x2);
  if ((v.margin > 1e-6 && seg < -1e-6) || (v.margin < -1e-6 && seg > 1e-6)) {
    std::ostringstream os;
    os << "cat_four_point: angle form (" << v.margin << ") and segment form (" << seg << ") disagree";
    throw std::logic_error(os.str());
  }
  v.certificate = {seg};
  v.settle();
  return v;
}

namespace {

// margin of the best apex for the quadruple; +inf if some apex sees an undefined angle
double cat_quad_margin(const AngleTable& A, const int q[4]) {
  double best = -kInf;
  for (int k = 0; k < 4; ++k) {
    int p = q[k], o[3], m = 0;
    for (int j = 0; j < 4; ++j)
      if (j != k) o[m++] = q[j];
    double t1 = A(p, o[0], o[1]), t2 = A(p, o[1], o[2]), t3 = A(p, o[0], o[2]);
    if (std::isnan(t1 + t2 + t3)) return kInf;
    double mm = std::min({t1 + t2 - t3, t1 + t3 - t2, t2 + t3 - t1});
    best = std::max(best, mm);
  }
  return best;
}

}  // namespace

Verdict cat_quadruple(const FiniteMetric& M, int a, int b, int c, int d, double kappa, double tol) {
  require_distinct({a, b, c, d}, M.size());
  FiniteMetric sub = M.subset({a, b, c, d});
  AngleTable A(sub, kappa);
  const int q[4] = {0, 1, 2, 3};
  Verdict v = make("cat-quadruple", kappa, tol);
  v.checked = 1;
  v.witness.indices = {a, b, c, d};
  double m = cat_quad_margin(A, q);
  if (std::isinf(m)) {
    v.vacuous = true;
    v.vacuous_count = 1;
  } else {
    v.margin = m;
  }
  v.settle();
  return v;
}

Verdict is_cbb(const FiniteMetric& M, double kappa, const ScanOptions& opt) {
  const int n = M.size();
  Verdict v = make("is-cbb", kappa, opt.tol);
  if (n < 4) {
    v.vacuous = true;
    v.note = "fewer than four points";
    v.settle();
    return v;
  }
  AngleTable A(M, kappa);
  const int jobs = resolve_jobs(opt.jobs);
  std::vector<Verdict> part(jobs, v);
  parallel_chunks(n, jobs, [&](std::size_t b, std::size_t e, int w) {
    Verdict& r = part[w];
    for (int p = static_cast<int>(b); p < static_cast<int>(e); ++p)
      for (int i = 0; i < n; ++i) {
        if (i == p) continue;
        for (int j = i + 1; j < n; ++j) {
          if (j == p) continue;
          double aij = A(p, i, j);
          for (int k = j + 1; k < n; ++k) {
            if (k == p) continue;
            ++r.checked;
            double s = aij + A(p, j, k) + A(p, i, k);
            if (std::isnan(s)) {
              ++r.vacuous_count;
              continue;
            }
            double m = 2 * kPi - s;
            if (m < r.margin) {  // indices ascend within a worker, so first hit is lexicographically least
              r.margin = m;
              r.witness.indices = {p, i, j, k};
            }
          }
        }
      }
  });
  Verdict out = v;
  for (const auto& r : part) merge_min(out, r);
  out.vacuous = out.vacuous_count == out.checked;
  out.witness.note = "apex first";
  out.settle();
  return out;
}

Verdict is_cat(const FiniteMetric& M, double kappa, const ScanOptions& opt) {
  const int n = M.size();
  Verdict v = make("is-cat", kappa, opt.tol);
  if (n < 4) {
    v.vacuous = true;
    v.note = "fewer than four points";
    v.settle();
    return v;
  }
  AngleTable A(M, kappa);
  const int jobs = resolve_jobs(opt.jobs);
  std::vector<Verdict> part(jobs, v);
  parallel_chunks(n, jobs, [&](std::size_t b, std::size_t e, int w) {
    Verdict& r = part[w];
    int q[4];
    for (int a = static_cast<int>(b); a < static_cast<int>(e); ++a)
      for (int bb = a + 1; bb < n; ++bb)
        for (int c = bb + 1; c < n; ++c)
          for (int d = c + 1; d < n; ++d) {
            q[0] = a;
            q[1] = bb;
            q[2] = c;
            q[3] = d;
            ++r.checked;
            double m = cat_quad_margin(A, q);
            if (std::isinf(m)) {
              ++r.vacuous_count;
              continue;
            }
            if (m < r.margin) {
              r.margin = m;
              r.witness.indices = {a, bb, c, d};
            }
          }
  });
  Verdict out = v;
  for (const auto& r : part) merge_min(out, r);
  out.vacuous = out.vacuous_count == out.checked;
  out.settle();
  return out;
}

namespace {

double max_perimeter(const FiniteMetric& M) {
  const int n = M.size();
  double best = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = j + 1; k < n; ++k) best = std::max(best, M(i, j) + M(j, k) + M(i, k));
  return best;
}

void apply_bracket(const ScanOptions& opt, double& lo, double& hi) {
  if (std::isfinite(opt.kappa_min)) lo = opt.kappa_min;
  if (std::isfinite(opt.kappa_max)) hi = opt.kappa_max;
  if (!(lo < hi)) throw std::invalid_argument("kappa bracket must satisfy min < max");
}

}  // namespace

Threshold cbb_sup_kappa(const FiniteMetric& M, const ScanOptions& opt) {
  Threshold t;
  const double P = max_perimeter(M);
  if (M.size() < 4 || P == 0) {
    t.value = kInf;
    t.sentinel = true;
    return t;
  }
  double hi = std::pow(2 * kPi / P, 2) * (1 - 1e-6);
  double lo = -64 * std::pow(kPi / M.diameter(), 2);
  apply_bracket(opt, lo, hi);
  auto ok = [&](double k) {
    ++t.evaluations;
    Verdict v = is_cbb(M, k, opt);
    return v.pass && !v.vacuous;
  };
  if (ok(hi)) {
    t.value = t.lo = t.hi = hi;
    t.over_certified = true;
    return t;
  }
  if (!ok(lo)) {
    t.value = -kInf;
    t.sentinel = true;
    t.lo = t.hi = lo;
    return t;
  }
  while (hi - lo > 5e-5) {
    double mid = 0.5 * (lo + hi);
    (ok(mid) ? lo : hi) = mid;
  }
  t.value = lo;
  t.lo = lo;
  t.hi = hi;
  return t;
}

Threshold cat_inf_kappa(const FiniteMetric& M, const ScanOptions& opt) {
  Threshold t;
  const double P = max_perimeter(M);
  if (M.size() < 4 || P == 0) {
    t.value = -kInf;
    t.sentinel = true;
    return t;
  }
  double hi = 4 * std::pow(2 * kPi / P, 2);
  double lo = -64 * std::pow(kPi / M.diameter(), 2);
  apply_bracket(opt, lo, hi);
  auto ok = [&](double k) {
    ++t.evaluations;
    return is_cat(M, k, opt).pass;
  };
  if (ok(lo)) {
    t.value = t.lo = t.hi = lo;
    t.over_certified = true;
    return t;
  }
  if (!ok(hi)) {
    t.value = kInf;
    t.sentinel = true;
    t.lo = t.hi = hi;
    return t;
  }
  while (hi - lo > 5e-5) {
    double mid = 0.5 * (lo + hi);
    (ok(mid) ? hi : lo) = mid;
  }
  t.value = hi;
  t.lo = lo;
  t.hi = hi;
  return t;
}

Verdict point_on_side_check(const SampledSpace& S, int x, int y, int p, double kappa, Side side,
                            double tol) {
  Verdict v = make(side == Side::CBB ? "point-on-side-cbb" : "point-on-side-cat", kappa, tol);
  const double xy = S.distance(x, y), xp = S.distance(x, p), py = S.distance(p, y);
  auto phi = model_angle(kappa, py, xp, xy);
  if (!phi || xp + py <= xy + tol) {
    v.vacuous = true;
    v.vacuous_count = 1;
    v.note = phi ? "p lies on [xy]" : "undefined model angle";
    v.settle();
    return v;
  }
  // Each graph distance is within delta of the surface distance; the model
  // side is propagated through its partial derivatives, and z may sit off
  // the true geodesic by the lateral allowance.
  const double delta = S.delta();
  auto model_at = [&](double a, double b, double c, double t) {
    auto f = model_angle(kappa, a, b, c);
    return f ? model_side_unchecked(kappa, *f, b, t) : kNaN;
  };
  auto path = S.geodesic(x, y);
  double budget = 0;
  for (std::size_t k = 1; k + 1 < path.size(); ++k) {
    int z = path[k];
    double xz = S.distance(x, z);
    double model = model_side_unchecked(kappa, *phi, xp, xz);
    double m = side == Side::CBB ? S.distance(p, z) - model : model - S.distance(p, z);
    ++v.checked;
    if (delta > 0) {
      double args[4] = {py, xp, xy, xz}, sens = 0;
      for (int q = 0; q < 4; ++q) {
        double up[4] = {args[0], args[1], args[2], args[3]}, dn[4] = {args[0], args[1], args[2], args[3]};
        const double e = 1e-6 * (1 + args[q]);
        up[q] += e;
        dn[q] -= e;
        double fu = model_at(up[0], up[1], up[2], up[3]), fd = model_at(dn[0], dn[1], dn[2], dn[3]);
        if (std::isnan(fu) || std::isnan(fd)) {
          sens = kInf;  // on the edge of definition: no control
          break;
        }
        sens += std::abs(fu - fd) / (2 * e);
      }
      budget = std::max(budget, delta * (1 + sens) + lateral_allowance(delta, xz, S.distance(z, y)));
    }
    if (m < v.margin) {
      v.margin = m;
      v.witness.indices = {x, y, p, z};
    }
  }
  v.tolerance = tol + budget;
  v.witness.note = "x, y, p, z";
  v.settle();
  return v;
}

ThinFat thin_fat_triangle(const SampledSpace& S, int x, int y, int z, double kappa, int samples) {
  const double a = S.distance(y, z), b = S.distance(z, x), c = S.distance(x, y);
  ModelConfig tri = lay_triangle(kappa, {a, b, c});  // throws if undefined
  const ModelSpace& Ms = tri.space;
  struct SidePt {
    int v;
    Vec model;
  };
  auto side_points = [&](int u, int w, const Vec& U, const Vec& W) {
    std::vector<SidePt> out;
    auto path = S.geodesic(u, w);
    double L = S.distance(u, w);
    if (path.size() <= 2 || L == 0) return out;
    std::size_t m = path.size() - 2;
    std::size_t step = std::max<std::size_t>(1, m / samples);
    for (std::size_t k = 1; k + 1 < path.size(); k += step) {
      double t = S.distance(u, path[k]) / L;
      out.push_back({path[k], Ms.geodesic_point(U, W, std::min(1.0, t))});
    }
    return out;
  };
  const Vec &X = tri.points[0], &Y = tri.points[1], &Z = tri.points[2];
  std::vector<std::vector<SidePt>> sides = {side_points(x, y, X, Y), side_points(y, z, Y, Z),
                                            side_points(z, x, Z, X)};
  ThinFat r;
  const double resolution = 0.25 * std::min({a, b, c});
  for (int s1 = 0; s1 < 3; ++s1)
    for (int s2 = s1 + 1; s2 < 3; ++s2)
      for (const auto& u : sides[s1])
        for (const auto& w : sides[s2]) {
          double dm = Ms.distance(u.model, w.model);
          if (dm < resolution) continue;
          double ds = S.distance(u.v, w.v);
          ++r.pairs;
          if (dm - ds < r.thin_margin) {
            r.thin_margin = dm - ds;
            r.thin_witness.indices = {u.v, w.v};
          }
          if (ds - dm < r.fat_margin) {
            r.fat_margin = ds - dm;
            r.fat_witness.indices = {u.v, w.v};
          }
        }
  const double delta = S.delta();
  r.budget = 2 * delta + 2 * lateral_allowance(delta, 0.5 * std::max({a, b, c}), 0.5 * std::max({a, b, c}));
  r.thin_witness.margin = r.thin_margin;
  r.fat_witness.margin = r.fat_margin;
  return r;
}

Verdict perimeter_bound_check(const FiniteMetric& M, double kappa, double tol) {
  if (!(kappa > 0)) throw std::invalid_argument("perimeter_bound_check: kappa must be positive");
  Verdict v = make("perimeter-bound", kappa, tol);
  const int n = M.size();
  const double bound = 2 * varpi(kappa);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = j + 1; k < n; ++k) {
        ++v.checked;
        double m = bound - (M(i, j) + M(j, k) + M(i, k));
        if (m < v.margin) {
          v.margin = m;
          v.witness.indices = {i, j, k};
        }
      }
  if (v.checked == 0) v.vacuous = true;
  v.settle();
  return v;
}

// ---------------------------------------------------------------- chain comparison

void validate_chain_config(const ChainConfig& cfg, const FiniteMetric& M, int x, int y,
                           const std::vector<int>& ps, const std::vector<int>& qs, double tol) {
  if (ps.size() != qs.size() || cfg.p.size() != ps.size() || cfg.q.size() != qs.size())
    throw std::invalid_argument("invalid configuration: pair counts differ");
  if (cfg.space.dim() != 3) throw std::invalid_argument("invalid configuration: model space must be 3-dimensional");
  const auto& S = cfg.space;
  auto check = [&](const Vec& A, const Vec& B, int i, int j) {
    double d = S.distance(A, B), e = M(i, j);
    if (std::abs(d - e) > tol * (1 + e))
      throw std::invalid_argument("invalid configuration: distance mismatch between points " +
                                  std::to_string(i) + " and " + std::to_string(j));
  };
  const std::size_t n = ps.size();
  if (std::abs(cfg.xy - M(x, y)) > tol * (1 + M(x, y)))
    throw std::invalid_argument("invalid configuration: |xy| mismatch");
  if (n == 0) {
    check(cfg.x, cfg.y, x, y);
    return;
  }
  check(cfg.x, cfg.p[0], x, ps[0]);
  check(cfg.x, cfg.q[0], x, qs[0]);
  for (std::size_t i = 0; i < n; ++i) check(cfg.p[i], cfg.q[i], ps[i], qs[i]);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    check(cfg.p[i], cfg.p[i + 1], ps[i], ps[i + 1]);
    check(cfg.q[i], cfg.q[i + 1], qs[i], qs[i + 1]);
    check(cfg.p[i], cfg.q[i + 1], ps[i], qs[i + 1]);
    check(cfg.p[i + 1], cfg.q[i], ps[i + 1], qs[i]);
  }
  check(cfg.y, cfg.p[n - 1], y, ps[n - 1]);
  check(cfg.y, cfg.q[n - 1], y, qs[n - 1]);
  if (S.kappa() > 0) {
    const double bound = 2 * S.varpi();
    for (std::size_t i = 0; i + 1 < n; ++i) {
      int idx[4] = {ps[i], ps[i + 1], qs[i], qs[i + 1]};
      for (int a = 0; a < 4; ++a)
        for (int b = a + 1; b < 4; ++b)
          for (int c = b + 1; c < 4; ++c)
            if (M(idx[a], idx[b]) + M(idx[b], idx[c]) + M(idx[a], idx[c]) >= bound)
              throw std::invalid_argument("invalid configuration: triple perimeter reaches 2*varpi");
    }
  }
}

namespace {

// Point with prescribed distances to three placed points (two mirror choices).
std::optional<Eigen::Vector3d> trilaterate(const Eigen::Vector3d& A, const Eigen::Vector3d& B,
                                           const Eigen::Vector3d& C, double ra, double rb, double rc,
                                           bool upper) {
  Eigen::Vector3d ex = B - A;
  double d = ex.norm();
  if (d == 0) return std::nullopt;
  ex /= d;
  Eigen::Vector3d t = C - A;
  double i = ex.dot(t);
  Eigen::Vector3d ey = t - i * ex;
  double yn = ey.norm();
  if (yn < 1e-12 * (1 + d)) return std::nullopt;
  ey /= yn;
  Eigen::Vector3d ez = ex.cross(ey);
  double j = ey.dot(t);
  double X = (ra * ra - rb * rb + d * d) / (2 * d);
  double Y = (ra * ra - rc * rc + i * i + j * j) / (2 * j) - i * X / j;
  double Z2 = ra * ra - X * X - Y * Y;
  if (Z2 < -1e-9 * (1 + ra * ra)) return std::nullopt;
  double Z = std::sqrt(std::max(0.0, Z2)) * (upper ? 1 : -1);
  return A + X * ex + Y * ey + Z * ez;
}

// Point with prescribed distances to two placed points, in the plane through
// them and `hint`, on the side away from `hint`.
std::optional<Eigen::Vector3d> bilaterate(const Eigen::Vector3d& A, const Eigen::Vector3d& B,
                                          double ra, double rb, const Eigen::Vector3d& hint) {
  Eigen::Vector3d ex = B - A;
  double d = ex.norm();
  if (d == 0) return std::nullopt;
  ex /= d;
  Eigen::Vector3d h = hint - A;
  Eigen::Vector3d ey = h - ex.dot(h) * ex;
  if (ey.norm() < 1e-12) ey = ex.unitOrthogonal();
  else ey.normalize();
  double X = (ra * ra - rb * rb + d * d) / (2 * d);
  double Y2 = ra * ra - X * X;
  if (Y2 < -1e-9 * (1 + ra * ra)) return std::nullopt;
  return A + X * ex - std::sqrt(std::max(0.0, Y2)) * ey;
}

}  // namespace

ChainConfig chain_config_flat(const FiniteMetric& M, int x, int y, const std::vector<int>& ps,
                              const std::vector<int>& qs) {
  if (ps.size() != qs.size()) throw std::invalid_argument("chain_config_flat: pair counts differ");
  ChainConfig cfg;
  cfg.xy = M(x, y);
  auto out = [](const Eigen::Vector3d& v) { return Vec(v); };
  const std::size_t n = ps.size();
  Eigen::Vector3d X = Eigen::Vector3d::Zero();
  if (n == 0) {
    cfg.x = out(X);
    cfg.y = out(Eigen::Vector3d(M(x, y), 0, 0));
    return cfg;
  }
  auto fail = [] { throw std::invalid_argument("invalid configuration: model simplex does not exist"); };
  Eigen::Vector3d P(M(x, ps[0]), 0, 0);
  auto Q = bilaterate(X, P, M(x, qs[0]), M(ps[0], qs[0]), Eigen::Vector3d(0, -1, 0));
  if (!Q) fail();
  std::vector<Eigen::Vector3d> pp{P}, qq{*Q};
  Eigen::Vector3d back = X;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    // p^{i+1} in the plane of (back, p^i, q^i) on the far side; q^{i+1} by trilateration
    auto Pn = bilaterate(pp[i], qq[i], M(ps[i], ps[i + 1]), M(qs[i], ps[i + 1]), back);
    if (!Pn) fail();
    auto Qn = trilaterate(pp[i], qq[i], *Pn, M(ps[i], qs[i + 1]), M(qs[i], qs[i + 1]),
                          M(ps[i + 1], qs[i + 1]), true);
    if (!Qn) fail();
    back = 0.5 * (pp[i] + qq[i]);
    pp.push_back(*Pn);
    qq.push_back(*Qn);
  }
  auto Y = bilaterate(pp[n - 1], qq[n - 1], M(y, ps[n - 1]), M(y, qs[n - 1]),
                      n > 1 ? Eigen::Vector3d(0.5 * (pp[n - 2] + qq[n - 2])) : X);
  if (!Y) fail();
  cfg.x = out(X);
  cfg.y = out(*Y);
  for (std::size_t i = 0; i < n; ++i) {
    cfg.p.push_back(out(pp[i]));
    cfg.q.push_back(out(qq[i]));
  }
  return cfg;
}

Verdict two_n_plus_two_check(const ChainConfig& cfg, double tol) {
  Verdict v = make("two-n-plus-two", cfg.space.kappa(), tol);
  const auto& S = cfg.space;
  const std::size_t n = cfg.p.size();
  for (std::size_t i = 0; i < n; ++i)
    if (S.kappa() > 0 && S.distance(cfg.p[i], cfg.q[i]) >= S.varpi())
      throw std::invalid_argument("invalid configuration: segment not shorter than varpi");
  std::vector<double> t(n, 0.5);
  std::vector<Vec> z(n);
  for (std::size_t i = 0; i < n; ++i) z[i] = S.geodesic_point(cfg.p[i], cfg.q[i], t[i]);
  auto total = [&]() {
    if (n == 0) return S.distance(cfg.x, cfg.y);
    double s = S.distance(cfg.x, z[0]) + S.distance(z[n - 1], cfg.y);
    for (std::size_t i = 0; i + 1 < n; ++i) s += S.distance(z[i], z[i + 1]);
    return s;
  };
  double cur = total();
  for (int sweep = 0; sweep < 500 && n > 0; ++sweep) {
    double before = cur;
    for (std::size_t i = 0; i < n; ++i) {
      const Vec& prev = i == 0 ? cfg.x : z[i - 1];
      const Vec& next = i + 1 == n ? cfg.y : z[i + 1];
      auto local = [&](double s) {
        Vec w = S.geodesic_point(cfg.p[i], cfg.q[i], s);
        return S.distance(prev, w) + S.distance(w, next);
      };
      // golden section on [0,1] after a coarse scan (to 1e-8 in the parameter)
      double best = kInf, bs = t[i];
      for (int k = 0; k <= 16; ++k) {
        double val = local(k / 16.0);
        if (val < best) best = val, bs = k / 16.0;
      }
      double lo = std::max(0.0, bs - 1.0 / 16), hi = std::min(1.0, bs + 1.0 / 16);
      const double g = (std::sqrt(5.0) - 1) / 2;
      double a = hi - g * (hi - lo), b = lo + g * (hi - lo), fa = local(a), fb = local(b);
      while (hi - lo > 1e-8) {
        if (fa < fb) {
          hi = b, b = a, fb = fa, a = hi - g * (hi - lo), fa = local(a);
        } else {
          lo = a, a = b, fa = fb, b = lo + g * (hi - lo), fb = local(b);
        }
      }
      double cand = fa < fb ? a : b, fc = std::min(fa, fb);
      double oldv = local(t[i]);
      if (best < fc) cand = bs, fc = best;
      if (fc < oldv) t[i] = cand;
      z[i] = S.geodesic_point(cfg.p[i], cfg.q[i], t[i]);
    }
    cur = total();
    if (before - cur < 1e-14 * (1 + cur)) break;
  }
  v.checked = 1;
  v.margin = cur - cfg.xy;
  v.certificate = t;
  v.note = "certificate holds the minimizing segment parameters";
  v.settle();
  return v;
}

}  // namespace curvkit
