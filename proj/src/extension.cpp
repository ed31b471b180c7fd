#include "curvkit/extension.hpp"

#include <map>
#include <stdexcept>

namespace curvkit {

namespace {

int model_dim(double kappa, const Vec& P) {
  return kappa == 0 ? static_cast<int>(P.size()) : static_cast<int>(P.size()) - 1;
}

struct LevelFns {
  const ModelSpace& S;
  const BallSystem& B;
  double h(const Vec& q, std::vector<double>* f = nullptr) const {
    double best = -kInf;
    if (f) f->resize(B.centers.size());
    for (std::size_t i = 0; i < B.centers.size(); ++i) {
      double v = S.distance(B.centers[i], q) - B.radii[i];
      if (f) (*f)[i] = v;
      best = std::max(best, v);
    }
    return best;
  }
};

// Point of the geodesic hull of the chosen centers with affine weights
// (1 - sum lambda, lambda...).
Vec hull_point(const ModelSpace& S, const std::vector<Vec>& pts, const Vec& lambda) {
  Vec q = pts[0];
  for (int j = 1; j < static_cast<int>(pts.size()); ++j) q += lambda[j - 1] * (pts[j] - pts[0]);
  if (S.kappa() == 0) return q;
  if (S.inner(q, q) >= 0 || q[0] <= 0) return Vec();  // left the sheet's cone
  return q * (S.radius() / std::sqrt(-S.inner(q, q)));
}

struct Candidate {
  bool ok = false;
  Vec q;
  double t = kInf;
};

// Solves |y_i q| - r_i = t for i in A with q in the hull of the y_i, then
// checks 0 in conv{grad} and that no other ball exceeds the level.
// `start` seeds the hull weights by projection; null means equal weights.
Candidate solve_active(const ModelSpace& S, const BallSystem& B, const std::vector<int>& A,
                       const Vec* start) {
  Candidate c;
  const int k = static_cast<int>(A.size());
  std::vector<Vec> pts;
  for (int i : A) pts.push_back(B.centers[i]);
  auto others_below = [&](const Vec& q, double t) {
    for (std::size_t j = 0; j < B.centers.size(); ++j)
      if (S.distance(B.centers[j], q) - B.radii[j] > t + 1e-10 * (1 + std::abs(t))) return false;
    return true;
  };
  if (k == 1) {
    // the subdifferential at a center contains the whole unit ball
    c.q = pts[0];
    c.t = -B.radii[A[0]];
    c.ok = others_below(c.q, c.t);
    return c;
  }
  Vec z = Vec::Constant(k, 1.0 / k);  // (lambda_1..lambda_{k-1}, t)
  if (start) {
    Mat D(start->size(), k - 1);
    for (int j = 1; j < k; ++j) D.col(j - 1) = pts[j] - pts[0];
    z.head(k - 1) = D.colPivHouseholderQr().solve(*start - pts[0]);
  }
  auto residual = [&](const Vec& zz, Vec& r) -> bool {
    Vec q = hull_point(S, pts, zz.head(k - 1));
    if (q.size() == 0) return false;
    r.resize(k);
    for (int i = 0; i < k; ++i) r[i] = S.distance(pts[i], q) - B.radii[A[i]] - zz[k - 1];
    return true;
  };
  {
    Vec q = hull_point(S, pts, z.head(k - 1));
    if (q.size() == 0) return c;
    z[k - 1] = S.distance(pts[0], q) - B.radii[A[0]];
  }
  Vec r;
  if (!residual(z, r)) return c;
  for (int it = 0; it < 60 && r.lpNorm<Eigen::Infinity>() > 1e-14; ++it) {
    Mat J(k, k);
    for (int j = 0; j < k; ++j) {
      double e = 1e-7 * (1 + std::abs(z[j]));
      Vec zp = z, zm = z, rp, rm;
      zp[j] += e;
      zm[j] -= e;
      if (!residual(zp, rp) || !residual(zm, rm)) return c;
      J.col(j) = (rp - rm) / (2 * e);
    }
    Eigen::FullPivLU<Mat> lu(J);
    if (!lu.isInvertible()) return c;
    Vec step = lu.solve(r);
    double s = 1;
    Vec zn, rn;
    for (; s > 1e-6; s *= 0.5) {
      zn = z - s * step;
      if (residual(zn, rn) && rn.norm() < r.norm()) break;
    }
    if (s <= 1e-6) break;
    z = zn;
    r = rn;
  }
  if (r.lpNorm<Eigen::Infinity>() > 1e-10 * (1 + std::abs(z[k - 1]))) return c;
  Vec q = hull_point(S, pts, z.head(k - 1));
  // KKT: unit gradients -log_q(y_i)/|y_i q| have zero in their convex hull
  Mat G(q.size() + 1, k);
  for (int i = 0; i < k; ++i) {
    Vec l = S.log(q, pts[i]);
    double n = S.tangent_norm(l);
    if (n < 1e-14) return c;
    G.col(i).head(q.size()) = -l / n;
    G(q.size(), i) = 1;
  }
  Vec rhs = Vec::Zero(q.size() + 1);
  rhs[q.size()] = 1;
  Vec lam = G.colPivHouseholderQr().solve(rhs);
  if ((G * lam - rhs).norm() > 1e-7 || lam.minCoeff() < -1e-9) return c;
  double t = z[k - 1];
  if (!others_below(q, t)) return c;
  c.ok = true;
  c.q = q;
  c.t = t;
  return c;
}

}  // namespace

BallResult ball_intersection(double kappa, const BallSystem& B, double tol, int dim) {
  if (kappa > 0) throw std::invalid_argument("ball_intersection: kappa must be <= 0");
  if (B.centers.size() != B.radii.size())
    throw std::invalid_argument("ball_intersection: centers and radii differ in length");
  BallResult res;
  if (B.centers.empty()) {
    res.point = ModelSpace(kappa, dim).origin();
    res.feasible = true;
    res.value = -kInf;
    res.exact = true;
    return res;
  }
  for (double r : B.radii)
    if (!(r >= 0) || !std::isfinite(r)) throw std::invalid_argument("ball_intersection: bad radius");
  ModelSpace S(kappa, std::max(1, model_dim(kappa, B.centers[0])));
  for (const Vec& c : B.centers)
    if (!S.contains(c, 1e-9)) throw std::invalid_argument("ball_intersection: center off the model space");
  const int n = static_cast<int>(B.centers.size());
  LevelFns F{S, B};

  // subgradient phase on the md surrogate
  std::vector<double> mdr(n);
  for (int i = 0; i < n; ++i) mdr[i] = md(kappa, B.radii[i]);
  auto surrogate = [&](const Vec& q, std::vector<double>& g) {
    g.resize(n);
    double best = -kInf;
    for (int i = 0; i < n; ++i) best = std::max(best, g[i] = md(kappa, S.distance(B.centers[i], q)) - mdr[i]);
    return best;
  };
  Vec q = B.centers[0];
  {
    Vec m = Vec::Zero(q.size());
    for (const Vec& c : B.centers) m += c;
    m /= n;
    q = kappa == 0 ? m : S.normalize(m);
  }
  double reach = 0;
  for (int i = 0; i < n; ++i) reach = std::max(reach, S.distance(q, B.centers[i]) + B.radii[i]);
  reach = std::max(reach, 1e-3) / 4;
  std::vector<double> g;
  double best = surrogate(q, g);
  Vec best_q = q;
  for (int it = 0; it < 4000; ++it) {
    double val = surrogate(q, g);
    if (val < best) best = val, best_q = q;
    Vec sub = Vec::Zero(q.size());
    int cnt = 0;
    for (int i = 0; i < n; ++i) {
      if (g[i] < val - 1e-10 * (1 + std::abs(val))) continue;
      // gradient of md(|y q|) at q is -sn(d)/d * log_q(y)
      Vec l = S.log(q, B.centers[i]);
      double d = S.tangent_norm(l);
      if (d > 0) sub -= (sn(kappa, d) / d) * l;
      ++cnt;
    }
    sub /= cnt;
    double sn2 = S.inner(sub, sub);
    res.iterations = it + 1;
    if (sn2 < 1e-16) break;  // 1e-8 stationarity
    // Polyak step against a target below the best value seen
    double target = best - 0.5 * (std::abs(best) + 1e-3) / std::sqrt(it + 1.0);
    // averaged subgradients at a kink can be tiny: cap the move by the spread
    double step = std::min((val - target) / sn2, reach / std::sqrt(sn2));
    Vec qn = S.exp(q, -step * S.project_tangent(q, sub));
    if (kappa != 0) qn = S.normalize(qn);
    if (!qn.allFinite()) break;
    q = qn;
  }
  q = best_q;

  // exact polish.  By Helly's theorem the optimum is pinned by at most m+1
  // balls: small systems enumerate every such set, larger ones the sets
  // that are nearly active at the subgradient point.
  std::vector<double> f;
  double hq = F.h(q, &f);
  Candidate chosen;
  const int maxk = S.dim() + 1;
  auto try_sets = [&](const std::vector<int>& act) {
    const int a = static_cast<int>(act.size());
    for (unsigned mask = 1; mask < (1u << a); ++mask) {
      if (__builtin_popcount(mask) > maxk) continue;
      std::vector<int> A;
      for (int j = 0; j < a; ++j)
        if (mask >> j & 1) A.push_back(act[j]);
      // a start on a center sits on the kink of its distance function
      Candidate c = solve_active(S, B, A, &q);
      if (!c.ok) c = solve_active(S, B, A, nullptr);
      if (c.ok && c.t < chosen.t) chosen = c;
    }
  };
  if (n <= 10) {
    std::vector<int> all(n);
    for (int i = 0; i < n; ++i) all[i] = i;
    try_sets(all);
  } else {
    for (double eps : {1e-9, 1e-6, 1e-4, 1e-2, 1e-1, 1.0}) {
      std::vector<int> act;
      for (int i = 0; i < n; ++i)
        if (f[i] >= hq - eps * (1 + std::abs(hq))) act.push_back(i);
      if (act.size() > 10) act.resize(10);
      try_sets(act);
      if (chosen.ok) break;
    }
  }
  if (chosen.ok && chosen.t <= hq + 1e-10 * (1 + std::abs(hq))) {
    q = chosen.q;
    res.exact = true;
  }
  res.point = q;
  res.value = F.h(q, &f);
  for (int i = 0; i < n; ++i)
    if (f[i] >= res.value - 1e-9 * (1 + std::abs(res.value))) res.active.push_back(i);
  res.feasible = res.value <= tol;
  return res;
}

ExtensionResult kirszbraun_extend(const FiniteMetric& M, int p, const std::vector<int>& xs,
                                  const std::vector<Vec>& images, double kappa, double tol) {
  if (kappa > 0) throw std::invalid_argument("kirszbraun_extend: kappa must be <= 0");
  if (xs.size() != images.size()) throw std::invalid_argument("kirszbraun_extend: size mismatch");
  const int n = M.size();
  if (p < 0 || p >= n) throw std::invalid_argument("kirszbraun_extend: base point out of range");
  for (int x : xs)
    if (x < 0 || x >= n) throw std::invalid_argument("kirszbraun_extend: point out of range");
  for (std::size_t i = 0; i < xs.size(); ++i)
    for (std::size_t j = i + 1; j < xs.size(); ++j) {
      double dy = model_distance(kappa, images[i], images[j]);
      if (dy > M(xs[i], xs[j]) + tol)
        throw std::invalid_argument("kirszbraun_extend: map is not short on (" + M.label(xs[i]) +
                                    ", " + M.label(xs[j]) + ")");
    }
  ExtensionResult out;
  BallSystem B;
  B.centers = images;
  for (int x : xs) B.radii.push_back(M(x, p));
  out.balls = ball_intersection(kappa, B, tol);
  out.feasible = out.balls.feasible;
  out.point = out.balls.point;
  out.margin = out.balls.value;
  if (!out.feasible) {
    std::vector<int> idx{p};
    idx.insert(idx.end(), xs.begin(), xs.end());
    Verdict v = is_cbb(M.subset(idx), kappa);
    out.fault = v.pass && !v.vacuous;
    out.source_check = v;
  }
  return out;
}

// ---------------------------------------------------------------- barycenters

namespace {

void check_weights(const std::vector<double>& w, std::size_t k) {
  if (w.size() != k) throw std::invalid_argument("barycentric_point: weight count mismatch");
  double s = 0;
  for (double x : w) {
    if (!(x >= 0)) throw std::invalid_argument("barycentric_point: negative weight");
    s += x;
  }
  if (std::abs(s - 1) > 1e-12) throw std::invalid_argument("barycentric_point: weights must sum to 1");
}

void radius_guard(const ModelSpace& S, const std::vector<Vec>& a) {
  if (S.kappa() <= 0) return;
  const double lim = S.varpi() / 2;
  auto fits = [&](const Vec& c) {
    for (const Vec& x : a)
      if (S.distance(c, x) >= lim) return false;
    return true;
  };
  Vec m = Vec::Zero(a[0].size());
  for (const Vec& x : a) m += x;
  if (m.norm() > 1e-12 && fits(S.normalize(m))) return;
  for (const Vec& x : a)
    if (fits(x)) return;
  throw std::domain_error("barycentric_point: anchors not within a ball of radius varpi/2");
}

}  // namespace

Vec barycentric_point(double kappa, const std::vector<Vec>& anchors, const std::vector<double>& w,
                      double grad_tol) {
  if (anchors.empty()) throw std::invalid_argument("barycentric_point: no anchors");
  check_weights(w, anchors.size());
  ModelSpace S(kappa, std::max(1, model_dim(kappa, anchors[0])));
  for (const Vec& a : anchors)
    if (!S.contains(a, 1e-9)) throw std::invalid_argument("barycentric_point: anchor off the model space");
  radius_guard(S, anchors);
  const std::size_t k = anchors.size();
  for (std::size_t i = 0; i < k; ++i)
    if (w[i] == 1) return anchors[i];

  auto value = [&](const Vec& q) {
    double s = 0;
    for (std::size_t i = 0; i < k; ++i)
      if (w[i] > 0) s += w[i] * md(kappa, S.distance(anchors[i], q));
    return s;
  };
  auto gradient = [&](const Vec& q) {
    Vec g = Vec::Zero(q.size());
    for (std::size_t i = 0; i < k; ++i) {
      if (w[i] == 0) continue;
      Vec l = S.log(q, anchors[i]);
      double d = S.tangent_norm(l);
      if (d > 0) g -= w[i] * (sn(kappa, d) / d) * l;
    }
    return g;
  };
  Vec q = Vec::Zero(anchors[0].size());
  for (std::size_t i = 0; i < k; ++i) q += w[i] * anchors[i];
  if (kappa != 0) q = S.normalize(q);
  Vec g = gradient(q);
  double F = value(q), gn = S.tangent_norm(g);
  double t = 1;
  for (int it = 0; it < 20000 && gn >= grad_tol; ++it) {
    t = std::min(1.0, 2 * t);
    for (;; t *= 0.5) {
      Vec qn = S.exp(q, -t * g);
      if (kappa != 0) qn = S.normalize(qn);
      double Fn = value(qn);
      Vec gnew = gradient(qn);
      double gnn = S.tangent_norm(gnew);
      // near the minimum the value decrease drowns in rounding; fall back on
      // the gradient norm
      bool armijo = Fn <= F - 1e-4 * t * gn * gn;
      bool tiny = gn * gn * t < 1e-13 * (1 + std::abs(F)) && gnn < gn;
      if (armijo || tiny || t < 1e-12) {
        q = qn;
        F = Fn;
        g = gnew;
        gn = gnn;
        break;
      }
    }
    if (t < 1e-12) break;
  }
  return q;
}

double barycentric_lipschitz_estimate(double kappa, const std::vector<Vec>& anchors,
                                      int resolution) {
  if (anchors.empty()) throw std::invalid_argument("barycentric_lipschitz_estimate: no anchors");
  if (resolution < 1) throw std::invalid_argument("barycentric_lipschitz_estimate: resolution must be positive");
  const int k = static_cast<int>(anchors.size());
  if (k == 1) return 0;
  const double N = resolution;
  std::map<std::vector<int>, Vec> cache;
  auto sigma = [&](const std::vector<int>& c) -> const Vec& {
    auto it = cache.find(c);
    if (it != cache.end()) return it->second;
    std::vector<double> w(k);
    for (int i = 0; i < k; ++i) w[i] = c[i] / N;
    return cache.emplace(c, barycentric_point(kappa, anchors, w)).first->second;
  };
  ModelSpace S(kappa, std::max(1, model_dim(kappa, anchors[0])));
  double worst = 0;
  std::vector<int> c(k, 0);
  // enumerate compositions of `resolution` into k parts
  std::function<void(int, int)> rec = [&](int i, int left) {
    if (i == k - 1) {
      c[i] = left;
      const Vec& a = sigma(c);
      for (int u = 0; u < k; ++u)
        for (int v = 0; v < k; ++v) {
          if (u == v || c[v] == 0) continue;
          std::vector<int> e = c;
          ++e[u];
          --e[v];
          if (e > c) worst = std::max(worst, S.distance(a, sigma(e)) / (2 / N));
        }
      return;
    }
    for (int x = 0; x <= left; ++x) {
      c[i] = x;
      rec(i + 1, left - x);
    }
  };
  rec(0, resolution);
  return worst;
}

// ---------------------------------------------------------------- webs

namespace {

template <class Dist>
std::vector<int> pareto(int n, const std::vector<int>& fns, const Dist& dist_md) {
  std::vector<int> out;
  if (fns.empty()) {
    for (int v = 0; v < n; ++v) out.push_back(v);
    return out;
  }
  const int k = static_cast<int>(fns.size());
  std::vector<double> f(static_cast<std::size_t>(n) * k);
  double scale = 0;
  for (int v = 0; v < n; ++v)
    for (int i = 0; i < k; ++i) scale = std::max(scale, f[v * k + i] = dist_md(fns[i], v));
  const double eps = 1e-12 * (1 + scale);
  for (int v = 0; v < n; ++v) {
    bool dominated = false;
    for (int u = 0; u < n && !dominated; ++u) {
      if (u == v) continue;
      bool le = true, lt = false;
      for (int i = 0; i < k && le; ++i) {
        double a = f[u * k + i], b = f[v * k + i];
        if (a > b + eps) le = false;
        else if (a < b - eps) lt = true;
      }
      dominated = le && lt;
    }
    if (!dominated) out.push_back(v);
  }
  return out;
}

template <class Dist>
WebResult web_impl(int n, const std::vector<int>& anchors, const Dist& dist_md) {
  for (std::size_t i = 0; i < anchors.size(); ++i) {
    if (anchors[i] < 0 || anchors[i] >= n) throw std::invalid_argument("web_compute: anchor out of range");
    for (std::size_t j = 0; j < i; ++j)
      if (anchors[i] == anchors[j]) throw std::invalid_argument("web_compute: anchors must be distinct");
  }
  WebResult r;
  r.web = pareto(n, anchors, dist_md);
  std::vector<char> outer(n, 0);
  for (std::size_t i = 0; i < anchors.size(); ++i) {
    std::vector<int> sub = anchors;
    sub.erase(sub.begin() + i);
    for (int v : pareto(n, sub, dist_md)) outer[v] = 1;
  }
  for (int v : r.web)
    if (!outer[v]) r.inner.push_back(v);
  return r;
}

}  // namespace

WebResult web_compute(const FiniteMetric& M, const std::vector<int>& anchors, double kappa) {
  return web_impl(M.size(), anchors, [&](int a, int v) { return md(kappa, M(a, v)); });
}

WebResult web_compute(const SampledSpace& S, const std::vector<int>& anchors, double kappa) {
  return web_impl(S.size(), anchors, [&](int a, int v) { return md(kappa, S.row(a)[v]); });
}

// ---------------------------------------------------------------- fold

ReshetnyakFold::ReshetnyakFold(double kappa, double px, double py, double xy, double xz,
                               double pz_dot)
    : S_(kappa, 2), d_(pz_dot), xz_(xz), yz_(xy - xz) {
  if (!(xz >= 0 && xz <= xy)) throw std::invalid_argument("ReshetnyakFold: z~ must lie on [x~y~]");
  ModelConfig cfg;
  try {
    cfg = lay_triangle(kappa, {xy, py, px});
  } catch (const std::domain_error&) {
    throw std::invalid_argument("ReshetnyakFold: source triangle does not exist");
  }
  const Vec& P = cfg.points[0];
  const Vec& X = cfg.points[1];
  const Vec& Y = cfg.points[2];
  Vec Z = S_.geodesic_point(X, Y, xy > 0 ? xz / xy : 0);
  double pz = S_.distance(P, Z);
  if (!(pz_dot > 0) || pz_dot > pz + 1e-12)
    throw std::invalid_argument("ReshetnyakFold: need 0 < |p.z.| <= |p~z~|");
  auto ax = model_angle(kappa, xz, px, pz_dot);
  auto ay = model_angle(kappa, yz_, py, pz_dot);
  if (!ax || !ay) throw std::invalid_argument("ReshetnyakFold: target triangles do not exist");
  // the glued pair must open up at z. (Alexandrov's lemma)
  Sign s = alexandrov_sign(kappa, px, xz, py, yz_, pz_dot);
  if (s == Sign::Negative || s == Sign::Undefined)
    throw std::invalid_argument("ReshetnyakFold: configuration violates Alexandrov's lemma");
  src_ = {P, X, Y, Z};
  theta_y_ = polar_angle(Y);
  theta_zy_ = *ax;
  theta_zx_ = *ay;
  if (theta_zy_ + theta_zx_ > theta_y_ + 1e-9)
    throw std::invalid_argument("ReshetnyakFold: subtriangles overlap");
  zy_ = polar_point(pz_dot, theta_zy_);
  zx_ = polar_point(pz_dot, theta_y_ - theta_zx_);
  rot_x_ = -theta_zy_;
  rot_y_ = -(theta_y_ - theta_zx_);
  dst_ = {P, polar_point(px, -theta_zy_), polar_point(py, theta_zx_), polar_point(pz_dot, 0)};
}

double ReshetnyakFold::polar_angle(const Vec& w) const {
  Vec l = S_.log(S_.origin(), w);
  Vec u = S_.kappa() == 0 ? l : Vec(l.tail(2));
  return std::atan2(u[1], u[0]);
}

Vec ReshetnyakFold::polar_point(double rho, double theta) const {
  Vec u(2);
  u << rho * std::cos(theta), rho * std::sin(theta);
  return S_.point(u);
}

double ReshetnyakFold::side(const Vec& a, const Vec& b, const Vec& w) const {
  auto lift = [&](const Vec& v) {
    if (S_.kappa() != 0) return Eigen::Vector3d(v[0], v[1], v[2]);
    return Eigen::Vector3d(1, v[0], v[1]);
  };
  return lift(a).cross(lift(b)).dot(lift(w));
}

ReshetnyakFold::Piece ReshetnyakFold::piece(const Vec& w) const {
  const Vec &P = src_[0], &X = src_[1], &Y = src_[2];
  const double eps = 1e-13;
  auto same = [&](const Vec& a, const Vec& b, const Vec& ref, const Vec& v) {
    double s = side(a, b, ref);
    return s * side(a, b, v) >= -eps * std::abs(s);
  };
  auto in_tri = [&](const Vec& a, const Vec& b, const Vec& c) {
    return same(a, b, c, w) && same(b, c, a, w) && same(c, a, b, w);
  };
  if (in_tri(P, X, zy_)) return Piece::TriangleX;
  if (in_tri(P, Y, zx_)) return Piece::TriangleY;
  double rho = S_.distance(P, w);
  double th = polar_angle(w);
  if (rho <= d_ && th >= theta_zy_ && th <= theta_y_ - theta_zx_) return Piece::SectorP;
  if (S_.distance(X, w) <= xz_ && same(X, zy_, Y, w)) return Piece::SectorX;
  if (S_.distance(Y, w) <= yz_ && same(Y, zx_, X, w)) return Piece::SectorY;
  return Piece::Core;
}

Vec ReshetnyakFold::operator()(const Vec& w) const {
  const Vec &P = src_[0], &X = src_[1], &Y = src_[2];
  const Vec &Xd = dst_[1], &Yd = dst_[2], &Zd = dst_[3];
  switch (piece(w)) {
    case Piece::TriangleX:
      return polar_point(S_.distance(P, w), polar_angle(w) + rot_x_);
    case Piece::TriangleY:
      return polar_point(S_.distance(P, w), polar_angle(w) + rot_y_);
    case Piece::SectorP:
      return polar_point(S_.distance(P, w), 0);
    case Piece::SectorX:
      return xz_ > 0 ? S_.geodesic_point(Xd, Zd, std::min(1.0, S_.distance(X, w) / xz_)) : Zd;
    case Piece::SectorY:
      return yz_ > 0 ? S_.geodesic_point(Yd, Zd, std::min(1.0, S_.distance(Y, w) / yz_)) : Zd;
    case Piece::Core:
      break;
  }
  return Zd;
}

Vec ReshetnyakFold::sample(Rng& rng) const {
  const Vec &P = src_[0], &X = src_[1], &Y = src_[2];
  double xy = xz_ + yz_;
  double t, s;
  if (rng.uniform() < 0.5) {
    t = rng.uniform();
    s = std::sqrt(rng.uniform());
  } else {
    // concentrate near z~, where the sectors and the core live
    double pz = S_.distance(P, src_[3]);
    double spread = 2 * (pz - d_) + 0.02 * pz;
    t = std::clamp((xz_ + (rng.uniform() - 0.5) * 2 * spread) / xy, 0.0, 1.0);
    s = rng.uniform(std::max(0.0, 1 - 2 * spread / pz), 1.0);
  }
  return S_.geodesic_point(P, S_.geodesic_point(X, Y, t), s);
}

Verdict ReshetnyakFold::audit(int pairs, std::uint64_t seed, double tol) const {
  Verdict v;
  v.test = "reshetnyak_fold";
  v.kappa = S_.kappa();
  v.tolerance = tol;
  Rng rng(seed);
  for (int i = 0; i < pairs; ++i) {
    Vec a = sample(rng), b = sample(rng);
    double m = S_.distance(a, b) - S_.distance((*this)(a), (*this)(b));
    ++v.checked;
    if (m < v.margin) {
      v.margin = m;
      v.witness.indices = {i};
    }
  }
  v.settle();
  return v;
}

}  // namespace curvkit
