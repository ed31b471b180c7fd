#include "curvkit/flows.hpp"

#include "curvkit/model_space.hpp"

#include <stdexcept>

namespace curvkit {

// ---------------------------------------------------------------- domains

ConvexDomain ConvexDomain::whole(int dim) {
  ConvexDomain d;
  d.dim_ = dim;
  return d;
}

ConvexDomain ConvexDomain::half_space(const Vec& normal, double offset) {
  double n = normal.norm();
  if (!(n > 0)) throw std::invalid_argument("half_space: zero normal");
  ConvexDomain d;
  d.kind_ = Kind::HalfSpace;
  d.dim_ = static_cast<int>(normal.size());
  d.a_ = normal / n;
  d.c_ = offset / n;
  return d;
}

ConvexDomain ConvexDomain::ball(const Vec& center, double radius) {
  if (!(radius > 0)) throw std::invalid_argument("ball: radius must be positive");
  ConvexDomain d;
  d.kind_ = Kind::Ball;
  d.dim_ = static_cast<int>(center.size());
  d.a_ = center;
  d.c_ = radius;
  return d;
}

bool ConvexDomain::contains(const Vec& x, double tol) const {
  switch (kind_) {
    case Kind::Space: return true;
    case Kind::HalfSpace: return a_.dot(x) >= c_ - tol;
    case Kind::Ball: return (x - a_).norm() <= c_ + tol;
  }
  return false;
}

Vec ConvexDomain::project(const Vec& x) const {
  switch (kind_) {
    case Kind::Space: return x;
    case Kind::HalfSpace: {
      double s = a_.dot(x) - c_;
      return s >= 0 ? x : Vec(x - s * a_);
    }
    case Kind::Ball: {
      double r = (x - a_).norm();
      return r <= c_ ? x : Vec(a_ + (x - a_) * (c_ / r));
    }
  }
  return x;
}

bool ConvexDomain::on_boundary(const Vec& x, double tol) const {
  switch (kind_) {
    case Kind::Space: return false;
    case Kind::HalfSpace: return std::abs(a_.dot(x) - c_) <= tol;
    case Kind::Ball: return std::abs((x - a_).norm() - c_) <= tol * (1 + c_);
  }
  return false;
}

Vec ConvexDomain::wedge(const Vec& x, const Vec& v) const {
  if (!on_boundary(x, 1e-10)) return v;
  Vec n = kind_ == Kind::HalfSpace ? Vec(-a_) : Vec((x - a_) / (x - a_).norm());  // outward
  double s = n.dot(v);
  return s > 0 ? Vec(v - s * n) : v;
}

Verdict ConvexDomain::audit_projection(int samples, std::uint64_t seed, double spread) const {
  Verdict v;
  v.test = "projection";
  Rng rng(seed);
  for (int i = 0; i < samples; ++i) {
    Vec x(dim_), y(dim_);
    for (int k = 0; k < dim_; ++k) x[k] = rng.uniform(-spread, spread), y[k] = rng.uniform(-spread, spread);
    Vec px = project(x), py = project(y);
    double idem = -(project(px) - px).norm();
    double lip = (x - y).norm() - (px - py).norm();
    double m = std::min(idem, lip);
    ++v.checked;
    if (m < v.margin) v.margin = m, v.witness.indices = {i};
  }
  v.settle();
  return v;
}

Objective neg_half_square(const Vec& center) {
  return {[center](const Vec& x) { return -0.5 * (x - center).squaredNorm(); },
          [center](const Vec& x) { return Vec(center - x); }, -1};
}

Objective linear(const Vec& g) {
  return {[g](const Vec& x) { return g.dot(x); }, [g](const Vec&) { return g; }, 0};
}

Objective neg_distance(const Vec& p) {
  return {[p](const Vec& x) { return -(x - p).norm(); },
          [p](const Vec& x) {
            double r = (x - p).norm();
            return r > 0 ? Vec((p - x) / r) : Vec(Vec::Zero(x.size()));
          },
          0};
}

// ---------------------------------------------------------------- gradient curves

DiscreteCurve gradient_curve(const ConvexDomain& D, const Objective& f, const Vec& x0, double h,
                             double T) {
  if (!(h > 0) || !(T >= 0)) throw std::invalid_argument("gradient_curve: need h > 0, T >= 0");
  if (!D.contains(x0, 1e-9)) throw std::invalid_argument("gradient_curve: start outside the domain");
  DiscreteCurve c;
  Vec x = D.project(x0);
  const long steps = std::lround(T / h);
  c.params.reserve(steps + 1);
  c.points.reserve(steps + 1);
  for (long k = 0;; ++k) {
    if (std::isnan(f.value(x))) throw std::domain_error("gradient_curve: objective is NaN");
    c.params.push_back(k * h);
    c.points.push_back(x);
    if (k == steps) break;
    Vec g = f.gradient(x);
    if (!g.allFinite()) throw std::domain_error("gradient_curve: gradient is not finite");
    x = D.project(x + h * D.wedge(x, g));
  }
  return c;
}

Verdict contraction_check(const ConvexDomain& D, const Objective& f, const Vec& x0, const Vec& y0,
                          double h, double T, double C) {
  DiscreteCurve a = gradient_curve(D, f, x0, h, T), b = gradient_curve(D, f, y0, h, T);
  Verdict v;
  v.test = "contraction";
  v.tolerance = C * h;
  const double d0 = (a.points[0] - b.points[0]).norm();
  double dev = 0;
  for (std::size_t k = 0; k < a.points.size(); ++k) {
    double bound = std::exp(f.lambda * a.params[k]) * d0;
    double d = (a.points[k] - b.points[k]).norm();
    dev = std::max(dev, std::abs(d - bound));
    ++v.checked;
    if (bound - d < v.margin) {
      v.margin = bound - d;
      v.witness.indices = {static_cast<int>(k)};
    }
  }
  v.certificate = {dev, C};
  v.settle();
  return v;
}

Verdict self_contracting_check(const DiscreteCurve& c, double slack) {
  Verdict v;
  v.test = "self_contracting";
  const std::size_t n = c.points.size();
  double h = 0;
  for (std::size_t i = 1; i < c.params.size(); ++i) h = std::max(h, c.params[i] - c.params[i - 1]);
  v.tolerance = slack * h + kVerdictTol;
  // for every t3 the distance to a(t3) must be nonincreasing on [0, t3]:
  // track the running minimum of |a(t1) a(t3)| over t1 <= t2
  for (std::size_t k = 0; k < n; ++k) {
    double run = kInf;
    int arg = 0;
    for (std::size_t j = 0; j <= k; ++j) {
      double d = (c.points[j] - c.points[k]).norm();
      if (d < run) run = d, arg = static_cast<int>(j);
      double m = run - d;  // |a(t1)a(t3)| - |a(t2)a(t3)| for the worst t1 <= t2
      ++v.checked;
      if (m < v.margin) {
        v.margin = m;
        v.witness.indices = {arg, static_cast<int>(j), static_cast<int>(k)};
      }
    }
  }
  v.settle();
  return v;
}

// ---------------------------------------------------------------- radial curves

DiscreteCurve radial_curve(const ConvexDomain& D, const Vec& p, const Vec& x, double kappa,
                           double h, double s_end) {
  if (!(h > 0)) throw std::invalid_argument("radial_curve: step must be positive");
  const double s0 = (x - p).norm();
  const double cap = kappa > 0 ? varpi(kappa) / 2 : kInf;
  if (!(s0 > 0) || s0 >= cap) throw std::invalid_argument("radial_curve: need 0 < |px| < varpi/2");
  DiscreteCurve c;
  Vec y = x;
  double s = s0;
  c.params.push_back(s);
  c.points.push_back(y);
  while (s < s_end - 1e-12) {
    double ds = std::min(h, s_end - s);
    if (s + ds >= cap) break;  // the curve ends at varpi/2
    Vec u = y - p;
    double r = u.norm();
    if (!(r > 0)) break;
    Vec g = D.wedge(y, u / r);  // gradient of dist_p
    double speed = tg(kappa, r) / tg(kappa, s);
    y = D.project(y + ds * speed * g);
    s += ds;
    c.params.push_back(s);
    c.points.push_back(y);
  }
  return c;
}

Vec gexp(const ConvexDomain& D, const Vec& p, const Vec& v, double h, bool integrate) {
  if (!D.contains(p, 1e-12)) throw std::invalid_argument("gexp: base point outside the domain");
  const double len = v.norm();
  if (len == 0) return p;
  if (!integrate && D.kind() != ConvexDomain::Kind::Ball) return D.project(p + v);
  double s0 = std::min(h, len);
  Vec x = D.project(p + s0 * v / len);
  if ((x - p).norm() == 0) return p;
  DiscreteCurve c = radial_curve(D, p, x, 0, h, len);
  return c.points.back();
}

namespace {

// Model angle continued by 0 below |b - c| and pi above b + c.
double clamped_angle(double kappa, double a, double b, double c) {
  if (a <= std::abs(b - c)) return 0;
  if (a >= b + c) return kPi;
  auto t = model_angle(kappa, a, b, c);
  return t ? *t : kPi;
}

}  // namespace

Verdict radial_comparison_check(const ConvexDomain& D, const Vec& p, double kappa,
                                const DiscreteCurve& rho, const DiscreteCurve& sigma, double h,
                                int grid, double slack) {
  (void)D;
  Verdict v;
  v.test = "radial_comparison";
  v.kappa = kappa;
  v.tolerance = slack * h;
  if (rho.points.empty() || sigma.points.empty()) return v;
  auto pick = [&](std::size_t n) {
    std::vector<std::size_t> idx;
    std::size_t m = std::min<std::size_t>(n, grid);
    for (std::size_t i = 0; i < m; ++i) idx.push_back(m == 1 ? 0 : i * (n - 1) / (m - 1));
    return idx;
  };
  auto ir = pick(rho.points.size()), is = pick(sigma.points.size());
  const double r0 = rho.params[0], s0 = sigma.params[0];
  double phi = extended_model_angle(kappa, (rho.points[0] - sigma.points[0]).norm(), r0, s0);
  double mono = kInf;
  for (std::size_t a : ir) {
    const Vec& q = rho.points[a];
    const double pq = (q - p).norm();
    double prev = kInf;
    for (std::size_t b : is) {
      double r = rho.params[a], s = sigma.params[b];
      double d = (q - sigma.points[b]).norm();
      double m = model_side_unchecked(kappa, phi, r, s) - d;
      ++v.checked;
      if (m < v.margin) {
        v.margin = m;
        v.witness.indices = {static_cast<int>(a), static_cast<int>(b)};
        v.witness.note = "comparison";
      }
      // radial monotonicity along sigma as seen from q
      if (pq > 0) {
        double ang = clamped_angle(kappa, d, pq, s);
        if (prev < kInf) mono = std::min(mono, prev - ang);
        prev = ang;
      }
    }
  }
  v.certificate = {phi, mono};
  if (mono < v.margin) {
    v.margin = mono;
    v.witness.note = "monotonicity";
  }
  v.settle();
  return v;
}

// ---------------------------------------------------------------- developments

namespace {

double vertex_sum(double kappa, double r_prev, double r, double r_next, double l_prev, double l_next) {
  return extended_model_angle(kappa, r_prev, r, l_prev) + extended_model_angle(kappa, r_next, r, l_next);
}

}  // namespace

Development develop_curve(double kappa, const std::vector<double>& rho,
                          const std::vector<double>& steps) {
  if (rho.empty() || steps.size() + 1 != rho.size())
    throw std::invalid_argument("develop_curve: need one step per consecutive pair");
  const double w = varpi(kappa);
  for (double r : rho)
    if (!(r > 0) || !(r < w)) throw std::domain_error("develop_curve: radius out of (0, varpi)");
  ModelSpace S(kappa, 2);
  Development d;
  d.rho = rho;
  double th = 0;
  for (std::size_t i = 0; i < rho.size(); ++i) {
    if (i > 0) th += extended_model_angle(kappa, steps[i - 1], rho[i - 1], rho[i]);
    d.theta.push_back(th);
    Vec u(2);
    u << rho[i] * std::cos(th), rho[i] * std::sin(th);
    d.points.push_back(S.point(u));
  }
  for (std::size_t i = 1; i + 1 < rho.size(); ++i) {
    double m = kPi - vertex_sum(kappa, rho[i - 1], rho[i], rho[i + 1], steps[i - 1], steps[i]);
    if (m < d.margin) d.margin = m, d.worst = static_cast<int>(i);
  }
  return d;
}

Verdict development_check(const SampledSpace& S, int p, const std::vector<int>& path, double kappa,
                          double min_step, Development* out) {
  if (path.size() < 2) throw std::invalid_argument("development_check: path too short");
  // cumulative length along the path
  std::vector<double> cum{0};
  for (std::size_t i = 1; i < path.size(); ++i) cum.push_back(cum.back() + S.distance(path[i - 1], path[i]));
  std::vector<std::size_t> keep{0};
  for (std::size_t i = 1; i + 1 < path.size(); ++i)
    if (cum[i] - cum[keep.back()] >= min_step && cum.back() - cum[i] >= 0.5 * min_step) keep.push_back(i);
  keep.push_back(path.size() - 1);
  // With the exact surface metric at hand the kept vertices are measured
  // exactly and only their measured distance from the true geodesic enters
  // the budget; otherwise graph distances carry delta on top of the
  // worst-case lateral allowance.
  const bool exact = static_cast<bool>(S.exact);
  const double delta = exact ? 0.0 : S.delta();
  auto dist = [&](int a, int b) { return exact ? S.exact(a, b) : S.distance(a, b); };
  const int a0 = path.front(), a1 = path.back();
  const double L = dist(a0, a1);
  std::vector<double> rho, steps, lat;
  for (std::size_t k = 0; k < keep.size(); ++k) {
    int z = path[keep[k]];
    rho.push_back(dist(p, z));
    if (k > 0) steps.push_back(exact ? dist(path[keep[k - 1]], z) : cum[keep[k]] - cum[keep[k - 1]]);
    double za = dist(a0, z), zb = dist(z, a1);
    double excess = exact ? std::max(0.0, za + zb - L) : S.delta();
    lat.push_back(lateral_allowance(excess, za, zb));
  }
  Development d = develop_curve(kappa, rho, steps);
  Verdict v;
  v.test = "development";
  v.kappa = kappa;
  double worst_tol = 0;
  for (std::size_t i = 1; i + 1 < rho.size(); ++i) {
    double args[5] = {rho[i - 1], rho[i], rho[i + 1], steps[i - 1], steps[i]};
    double err[5] = {delta + lat[i - 1], delta + lat[i], delta + lat[i + 1],
                     delta + lat[i - 1] + lat[i], delta + lat[i] + lat[i + 1]};
    auto A = [&](const double* a) { return vertex_sum(kappa, a[0], a[1], a[2], a[3], a[4]); };
    double tol = 0;
    for (int j = 0; j < 5; ++j) {
      double e = 1e-6 * (1 + args[j]);
      double up[5], dn[5];
      std::copy(args, args + 5, up);
      std::copy(args, args + 5, dn);
      up[j] += e;
      dn[j] -= e;
      tol += err[j] * std::abs(A(up) - A(dn)) / (2 * e);
    }
    double m = kPi - A(args);
    worst_tol = std::max(worst_tol, tol);
    ++v.checked;
    if (m + tol < v.margin) {
      v.margin = m + tol;
      v.witness.indices = {path[keep[i - 1]], path[keep[i]], path[keep[i + 1]], p};
    }
  }
  if (v.checked == 0) v.margin = 0;
  v.certificate = {d.margin, worst_tol};
  v.note = "margin includes the propagated budget; certificate = {raw angle margin, largest budget}";
  if (out) *out = d;
  v.settle();
  return v;
}

Verdict geodesic_convexity_check(const SampledSpace& S, const std::vector<int>& g,
                                 const std::vector<int>& s, int samples) {
  if (g.size() < 2 || s.size() < 2) throw std::invalid_argument("geodesic_convexity_check: paths too short");
  auto arclength = [&](const std::vector<int>& path) {
    std::vector<double> c{0};
    for (std::size_t i = 1; i < path.size(); ++i) c.push_back(c.back() + S.distance(path[i - 1], path[i]));
    return c;
  };
  const std::vector<double> cg = arclength(g), cs = arclength(s);
  const bool direct = samples <= 0 && g.size() == s.size();
  const int n = direct ? static_cast<int>(g.size())
                       : (samples > 0 ? samples : static_cast<int>(std::min(g.size(), s.size())));
  // nearest vertex to the arclength fraction t and its offset
  auto at = [](const std::vector<int>& path, const std::vector<double>& c, double t, double& off) {
    double target = t * c.back();
    std::size_t j = std::lower_bound(c.begin(), c.end(), target) - c.begin();
    if (j == c.size()) j = c.size() - 1;
    if (j > 0 && target - c[j - 1] < c[j] - target) --j;
    off = std::abs(c[j] - target);
    return path[j];
  };
  std::vector<double> d(n), off(n);
  for (int i = 0; i < n; ++i) {
    double t = n == 1 ? 0 : static_cast<double>(i) / (n - 1), og = 0, os = 0;
    int a = direct ? g[i] : at(g, cg, t, og), b = direct ? s[i] : at(s, cs, t, os);
    if (direct) {
      og = std::abs(cg[i] - t * cg.back());
      os = std::abs(cs[i] - t * cs.back());
    }
    d[i] = S.distance(a, b);
    off[i] = og + os;
  }
  Verdict v;
  v.test = "geodesic_convexity";
  const double delta = S.delta();
  double worst = 0;
  for (int i = 1; i + 1 < n; ++i) {
    double allowance = 4 * delta + off[i - 1] + 2 * off[i] + off[i + 1];
    double m = d[i - 1] - 2 * d[i] + d[i + 1] + allowance;
    worst = std::max(worst, allowance);
    ++v.checked;
    if (m < v.margin) v.margin = m, v.witness.indices = {i - 1, i, i + 1};
  }
  if (v.checked == 0) v.margin = 0;
  v.certificate = {worst};
  v.note = "second differences plus 4*delta and resampling offsets";
  v.settle();
  return v;
}

}  // namespace curvkit
