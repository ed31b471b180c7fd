#include "curvkit/warped.hpp"

#include <sstream>

namespace curvkit {

double cone_distance(double kappa, double s, double t, double fiber_dist) {
  if (s < 0 || t < 0 || fiber_dist < 0) throw std::invalid_argument("cone_distance: negative input");
  if (kappa > 0) {
    double w = varpi(kappa);
    if (s > w * (1 + 1e-12) || t > w * (1 + 1e-12))
      throw std::domain_error("cone_distance: radius beyond varpi");
    s = std::min(s, w);
    t = std::min(t, w);
  }
  double alpha = std::min(kPi, fiber_dist);
  if (alpha >= kPi) return kappa > 0 ? std::min(s + t, 2 * varpi(kappa) - s - t) : s + t;
  return model_side_unchecked(kappa, alpha, s, t);
}

namespace {

FiniteMetric warped_grid(const FiniteMetric& F, const std::vector<double>& radii, double kappa,
                         bool far_pole, const char* tip, const char* far) {
  struct Pt {
    double r;
    int fiber;
  };
  std::vector<Pt> pts;
  std::vector<std::string> labels;
  const double w = varpi(kappa);
  bool have_tip = false, have_far = false;
  for (double r : radii) {
    if (r < 0) throw std::invalid_argument("radius grid must be nonnegative");
    if (r == 0) {
      if (!have_tip) {
        pts.insert(pts.begin(), {0.0, -1});
        labels.insert(labels.begin(), tip);
        have_tip = true;
      }
      continue;
    }
    if (far_pole && r >= w) {
      if (!have_far) {
        pts.push_back({w, -1});
        labels.push_back(far);
        have_far = true;
      }
      continue;
    }
    for (int i = 0; i < F.size(); ++i) {
      pts.push_back({r, i});
      std::ostringstream os;
      os.precision(6);
      os << r << ":" << F.label(i);
      labels.push_back(os.str());
    }
  }
  // keep the far pole at the end even if it appeared early in the grid
  if (have_far) {
    auto it = std::find_if(pts.begin(), pts.end(), [&](const Pt& p) { return p.fiber < 0 && p.r > 0; });
    std::size_t k = it - pts.begin();
    Pt p = *it;
    std::string lab = labels[k];
    pts.erase(it);
    labels.erase(labels.begin() + k);
    pts.push_back(p);
    labels.push_back(lab);
  }
  const int n = static_cast<int>(pts.size());
  Mat d = Mat::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const Pt &A = pts[i], &B = pts[j];
      double fd = (A.fiber < 0 || B.fiber < 0) ? 0.0 : F(A.fiber, B.fiber);
      d(i, j) = d(j, i) = cone_distance(kappa, A.r, B.r, fd);
    }
  return FiniteMetric::trusted(std::move(d), std::move(labels));
}

}  // namespace

FiniteMetric cone_space(const FiniteMetric& F, const std::vector<double>& radii, double kappa) {
  return warped_grid(F, radii, kappa, kappa > 0, "tip", "far-tip");
}

FiniteMetric suspension_space(const FiniteMetric& F, const std::vector<double>& angles) {
  for (double a : angles)
    if (a < 0 || a > kPi * (1 + 1e-12))
      throw std::invalid_argument("suspension angles must lie in [0, pi]");
  return warped_grid(F, angles, 1.0, true, "north", "south");
}

SampledSpace doubling(const SampledSpace& S, const std::vector<int>& A) {
  if (A.empty()) throw std::invalid_argument("doubling: empty gluing set");
  const Graph& g = S.graph();
  std::vector<char> inA(g.n, 0);
  for (int a : A) {
    if (a < 0 || a >= g.n) throw std::invalid_argument("doubling: vertex out of range");
    inA[a] = 1;
  }
  Graph d;
  d.n = g.n;
  std::vector<int> twin(g.n);
  for (int v = 0; v < g.n; ++v) twin[v] = inA[v] ? v : d.n++;
  d.edges = g.edges;
  for (const auto& e : g.edges)
    if (!(inA[e.u] && inA[e.v])) d.edges.push_back({twin[e.u], twin[e.v], e.w});
  d.labels.resize(d.n);
  if (!g.coords.empty()) d.coords.resize(d.n);
  for (int v = 0; v < g.n; ++v) {
    std::string base = v < static_cast<int>(g.labels.size()) ? g.labels[v] : std::to_string(v);
    d.labels[v] = base;
    if (!g.coords.empty()) d.coords[v] = g.coords[v];
    if (!inA[v]) {
      d.labels[twin[v]] = base + "'";
      if (!g.coords.empty()) d.coords[twin[v]] = g.coords[v];
    }
  }
  for (int v = 0; v < g.n; ++v) {
    d.tags["copy1"].push_back(v);
    if (inA[v]) d.tags["A"].push_back(v);
  }
  for (int v = 0; v < g.n; ++v) d.tags["copy2"].push_back(twin[v]);
  std::sort(d.tags["copy2"].begin(), d.tags["copy2"].end());
  SampledSpace out(d);
  out.set_budget(S.delta(), S.mesh());
  if (S.exact) {
    std::vector<int> orig(d.n), Aset = A;
    std::vector<char> copy2(d.n, 0);
    for (int v = 0; v < g.n; ++v) {
      orig[v] = v;
      orig[twin[v]] = v;
      if (!inA[v]) copy2[twin[v]] = 1;
    }
    auto ex = S.exact;
    out.exact = [ex, orig, copy2, Aset](int i, int j) {
      int a = orig[i], b = orig[j];
      if (copy2[i] == copy2[j]) return ex(a, b);
      double best = kInf;
      for (int z : Aset) best = std::min(best, ex(a, z) + ex(z, b));
      return best;
    };
  }
  return out;
}

// ---------------------------------------------------------------- warping functions

const char* to_string(WarpTag t) {
  switch (t) {
    case WarpTag::Id: return "id";
    case WarpTag::Sin: return "sin";
    case WarpTag::Sinh: return "sinh";
    case WarpTag::Cosh: return "cosh";
    case WarpTag::Exp: return "exp";
    case WarpTag::Const: return "const";
    default: return "custom";
  }
}

WarpSpec make_warp(WarpTag tag, double a, double b, double value) {
  WarpSpec s;
  s.tag = tag;
  s.a = a;
  s.b = b;
  s.value = value;
  s.validate();
  return s;
}

void WarpSpec::validate() const {
  if (!(a < b)) throw std::invalid_argument("warp: empty base interval");
  switch (tag) {
    case WarpTag::Id:
    case WarpTag::Sinh:
      if (a < 0) throw std::invalid_argument("warp: negative values on the base");
      break;
    case WarpTag::Sin:
      if (a < 0 || b > kPi * (1 + 1e-12)) throw std::invalid_argument("warp: sin needs a base inside [0, pi]");
      break;
    case WarpTag::Const:
      if (!(value >= 0)) throw std::invalid_argument("warp: negative constant");
      break;
    case WarpTag::Custom: {
      if (xs.size() < 2 || xs.size() != fs.size()) throw std::invalid_argument("warp: custom samples malformed");
      for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
        if (!(xs[i] < xs[i + 1])) throw std::invalid_argument("warp: custom abscissae must increase");
        double slope = std::abs(fs[i + 1] - fs[i]) / (xs[i + 1] - xs[i]);
        if (slope > lipschitz * (1 + 1e-12))
          throw std::invalid_argument("warp: custom samples exceed the declared Lipschitz constant");
      }
      for (double v : fs)
        if (v < 0) throw std::invalid_argument("warp: negative custom value");
      if (xs.front() > a || xs.back() < b) throw std::invalid_argument("warp: custom samples do not cover the base");
      break;
    }
    default: break;
  }
}

double WarpSpec::f(double x) const {
  switch (tag) {
    case WarpTag::Id: return x;
    case WarpTag::Sin: return std::max(0.0, std::sin(x));
    case WarpTag::Sinh: return std::sinh(x);
    case WarpTag::Cosh: return std::cosh(x);
    case WarpTag::Exp: return std::exp(x);
    case WarpTag::Const: return value;
    default: {
      auto it = std::upper_bound(xs.begin(), xs.end(), x);
      std::size_t i = std::clamp<std::size_t>(it - xs.begin(), 1, xs.size() - 1) - 1;
      double t = (x - xs[i]) / (xs[i + 1] - xs[i]);
      return fs[i] + t * (fs[i + 1] - fs[i]);
    }
  }
}

double WarpSpec::df(double x) const {
  switch (tag) {
    case WarpTag::Id: return 1;
    case WarpTag::Sin: return std::cos(x);
    case WarpTag::Sinh: return std::cosh(x);
    case WarpTag::Cosh: return std::sinh(x);
    case WarpTag::Exp: return std::exp(x);
    case WarpTag::Const: return 0;
    default: {
      auto it = std::upper_bound(xs.begin(), xs.end(), x);
      std::size_t i = std::clamp<std::size_t>(it - xs.begin(), 1, xs.size() - 1) - 1;
      return (fs[i + 1] - fs[i]) / (xs[i + 1] - xs[i]);
    }
  }
}

double WarpSpec::d2f(double x) const {
  switch (tag) {
    case WarpTag::Sin: return -std::sin(x);
    case WarpTag::Sinh: return std::sinh(x);
    case WarpTag::Cosh: return std::cosh(x);
    case WarpTag::Exp: return std::exp(x);
    default: return 0;
  }
}

namespace {

// Discrete length of the chain x_0..x_N with fiber steps tau and its
// minimization over the interior nodes within [a, b].
struct Chain {
  const WarpSpec& w;
  double tau;
  double lo, hi;

  double length(const std::vector<double>& x) const {
    double L = 0;
    for (std::size_t k = 1; k < x.size(); ++k) {
      double d = x[k] - x[k - 1], F = w.f(0.5 * (x[k] + x[k - 1]));
      L += std::sqrt(d * d + tau * tau * F * F);
    }
    return L;
  }

  double minimize(std::vector<double>& x) const {
    const int N = static_cast<int>(x.size()) - 1;
    const int m = N - 1;
    if (m <= 0) return length(x);
    const double eps = 1e-300;
    std::vector<double> g(m), dia(m), off(std::max(0, m - 1));
    double L = length(x);
    double mu = 1e-12;
    for (int it = 0; it < 200; ++it) {
      std::fill(g.begin(), g.end(), 0.0);
      std::fill(dia.begin(), dia.end(), 0.0);
      std::fill(off.begin(), off.end(), 0.0);
      for (int k = 1; k <= N; ++k) {
        double u = x[k - 1], v = x[k];
        double d = v - u, mid = 0.5 * (u + v);
        double F = w.f(mid), F1 = w.df(mid), F2 = w.d2f(mid);
        double t2 = tau * tau;
        double phi = std::sqrt(d * d + t2 * F * F + eps);
        double pd = d / phi, pm = t2 * F * F1 / phi;
        double phi3 = phi * phi * phi;
        double pdd = t2 * F * F / phi3;
        double pmm = t2 * (F1 * F1 + F * F2) / phi - (t2 * F * F1) * (t2 * F * F1) / phi3;
        double pdm = -d * t2 * F * F1 / phi3;
        int iu = k - 2, iv = k - 1;  // indices into the interior unknowns
        if (iv < m) {
          g[iv] += pd + 0.5 * pm;
          dia[iv] += pdd + pdm + 0.25 * pmm;
        }
        if (iu >= 0) {
          g[iu] += -pd + 0.5 * pm;
          dia[iu] += pdd - pdm + 0.25 * pmm;
        }
        if (iu >= 0 && iv < m) off[iu] += -pdd + 0.25 * pmm;
      }
      // free variables: not pinned at a bound with the gradient pushing outwards
      std::vector<char> fix(m, 0);
      double gnorm = 0;
      for (int i = 0; i < m; ++i) {
        double xi = x[i + 1];
        if ((xi <= lo && g[i] > 0) || (xi >= hi && g[i] < 0)) fix[i] = 1;
        else gnorm = std::max(gnorm, std::abs(g[i]));
      }
      if (gnorm < 1e-13) break;
      // damped tridiagonal Newton step (Thomas algorithm)
      std::vector<double> step(m, 0.0);
      bool ok = false;
      for (int tries = 0; tries < 60 && !ok; ++tries) {
        std::vector<double> c(m, 0.0), r(m, 0.0);
        ok = true;
        double prev_c = 0, prev_r = 0;
        for (int i = 0; i < m; ++i) {
          double di = fix[i] ? 1.0 : dia[i] + mu * (1 + std::abs(dia[i]));
          double li = (i > 0 && !fix[i] && !fix[i - 1]) ? off[i - 1] : 0.0;
          double ui = (i + 1 < m && !fix[i] && !fix[i + 1]) ? off[i] : 0.0;
          double rhs = fix[i] ? 0.0 : -g[i];
          double den = di - li * prev_c;
          if (!(den > 0)) {
            ok = false;
            break;
          }
          c[i] = ui / den;
          r[i] = (rhs - li * prev_r) / den;
          prev_c = c[i];
          prev_r = r[i];
        }
        if (!ok) {
          mu = std::max(mu * 10, 1e-10);
          continue;
        }
        step[m - 1] = r[m - 1];
        for (int i = m - 2; i >= 0; --i) step[i] = r[i] - c[i] * step[i + 1];
      }
      if (!ok) break;
      // a node may cover at most half its distance to a bound per step, so
      // chains do not jump into the zero set of f and stick there
      double t = 1;
      for (int i = 0; i < m; ++i) {
        double xi = x[i + 1];
        if (step[i] < 0 && std::isfinite(lo) && xi > lo) t = std::min(t, 0.5 * (xi - lo) / -step[i]);
        if (step[i] > 0 && std::isfinite(hi) && xi < hi) t = std::min(t, 0.5 * (hi - xi) / step[i]);
      }
      bool improved = false;
      std::vector<double> y = x;
      for (int ls = 0; ls < 40; ++ls, t *= 0.5) {
        for (int i = 0; i < m; ++i) y[i + 1] = std::clamp(x[i + 1] + t * step[i], lo, hi);
        double Ly = length(y);
        if (Ly < L) {
          improved = true;
          L = Ly;
          x = y;
          break;
        }
      }
      if (!improved) {
        if (mu > 1e6) break;
        mu = std::max(mu * 100, 1e-8);
        continue;
      }
      mu = std::max(mu * 0.1, 1e-14);
    }
    return L;
  }
};

struct ChainResult {
  double length = kInf;
  bool touches_zero = false;  // the best chain rests on an end where f vanishes
};

ChainResult solve_chain(const WarpSpec& w, double ell, int N, double lo, double hi,
                        std::vector<std::vector<double>> starts) {
  Chain ch{w, ell / N, lo, hi};
  ChainResult best;
  for (auto& x : starts) {
    double L = ch.minimize(x);
    if (L < best.length) {
      best.length = L;
      best.touches_zero = false;
      for (std::size_t k = 1; k + 1 < x.size(); ++k)
        for (double end : {lo, hi})
          if (std::isfinite(end) && std::abs(x[k] - end) < 1e-9 * (1 + std::abs(end)) && w.f(end) == 0)
            best.touches_zero = true;
    }
  }
  return best;
}

std::vector<std::vector<double>> initial_chains(const WarpSpec& w, double p, double q, int N,
                                                double lo, double hi) {
  std::vector<std::vector<double>> out;
  std::vector<double> x(N + 1);
  for (int k = 0; k <= N; ++k) x[k] = p + (q - p) * k / N;
  out.push_back(x);
  // excursions towards each finite end of the base
  for (double end : {lo, hi}) {
    if (!std::isfinite(end)) continue;
    for (int k = 0; k <= N; ++k) {
      double s = static_cast<double>(k) / N;
      double bump = 4 * s * (1 - s);
      x[k] = (1 - bump) * (p + (q - p) * s) + bump * end;
    }
    out.push_back(x);
  }
  (void)w;
  return out;
}

}  // namespace

WarpedDistance warped_1d_distance(const WarpSpec& w, double p, double q, double ell, int nodes) {
  w.validate();
  if (p < w.a || p > w.b || q < w.a || q > w.b)
    throw std::invalid_argument("warped_1d_distance: base point outside the interval");
  if (ell < 0) throw std::invalid_argument("warped_1d_distance: negative fiber distance");
  WarpedDistance out;
  if (ell == 0) {
    out.value = std::abs(p - q);
    return out;
  }
  const double lo = w.a, hi = w.b;
  auto C1 = solve_chain(w, ell, nodes, lo, hi, initial_chains(w, p, q, nodes, lo, hi));
  auto C2 = solve_chain(w, ell, 2 * nodes, lo, hi, initial_chains(w, p, q, 2 * nodes, lo, hi));
  const double L1 = C1.length, L2 = C2.length;
  out.budget = std::abs(L2 - L1);
  if (w.tag == WarpTag::Custom) out.budget += w.lipschitz * (ell / nodes) * (ell / nodes);
  // Richardson assumes smooth second-order convergence, which fails once the
  // optimal chain runs into the zero set of f.
  out.value = C2.touches_zero ? L2 : (4 * L2 - L1) / 3;
  // paths through a zero of f at a finite end of the base
  for (double end : {lo, hi}) {
    if (!std::isfinite(end) || w.f(end) > 0) continue;
    double through = std::abs(p - end) + std::abs(q - end);
    if (through <= out.value || C2.touches_zero) {
      if (through <= out.value + out.budget) {
        out.value = std::min(out.value, through);
        out.through_zero = true;
      }
    }
  }
  return out;
}

Verdict warp_monotone_check(const WarpSpec& f, const WarpSpec& g,
                            const std::vector<WarpSample>& samples) {
  if (f.a != g.a || f.b != g.b) throw std::invalid_argument("warp_monotone_check: bases differ");
  Verdict v;
  v.test = "warp-monotone";
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& s = samples[i];
    auto df = warped_1d_distance(f, s.p, s.q, s.fiber_dist);
    auto dg = warped_1d_distance(g, s.p, s.q, s.fiber_dist);
    double m = dg.value + df.budget + dg.budget - df.value;
    ++v.checked;
    if (m < v.margin) {
      v.margin = m;
      v.witness.indices = {static_cast<int>(i)};
    }
  }
  v.settle();
  return v;
}

}  // namespace curvkit
