// curvkit command-line front end.  Reports go to stdout (or --out), progress
// to stderr.  Exit codes: 0 pass, 1 fail (with witness), 2 input error.

#include "curvkit/extension.hpp"
#include "curvkit/suite.hpp"
#include "curvkit/warped.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

using namespace curvkit;

namespace {

struct Common {
  double kappa = 0;
  double tol = kVerdictTol;
  std::uint64_t seed = kDefaultSeed;
  int jobs = 0;
  std::string out, plot;
};

void add_output(CLI::App* c, Common& g) {
  c->add_option("--out", g.out, "Write the output here instead of stdout");
}
void add_kappa(CLI::App* c, Common& g) { c->add_option("--kappa", g.kappa, "Curvature bound")->capture_default_str(); }
void add_tol(CLI::App* c, Common& g) { c->add_option("--tol", g.tol, "Tolerance")->capture_default_str(); }
void add_jobs(CLI::App* c, Common& g) {
  c->add_option("--jobs", g.jobs, "Worker threads (default: CURVKIT_JOBS or 1)");
}
void add_seed(CLI::App* c, Common& g) { c->add_option("--seed", g.seed, "Random seed")->capture_default_str(); }
void add_plot(CLI::App* c, Common& g) { c->add_option("--plot", g.plot, "Write an SVG plot here"); }

void emit(const Common& g, const std::string& text) {
  if (g.out.empty()) {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream f(g.out, std::ios::binary);
  if (!f) throw InputError(g.out, 0, 0, "cannot write output file");
  f << text;
}

void emit_plot(const Common& g, const std::string& svg) {
  if (g.plot.empty()) return;
  std::ofstream f(g.plot, std::ios::binary);
  if (!f) throw InputError(g.plot, 0, 0, "cannot write plot file");
  f << svg;
  std::cerr << "plot written to " << g.plot << "\n";
}

Json common_config(const Common& g) {
  return Json{{"kappa", number(g.kappa)}, {"tol", number(g.tol)}, {"jobs", resolve_jobs(g.jobs)}};
}

// "x,y;x,y;..." (or whitespace separated) -> points
std::vector<Vec> parse_points(std::string text, const std::string& flag) {
  std::vector<Vec> pts;
  std::replace_if(text.begin(), text.end(), [](char c) { return c == ' ' || c == '\t'; }, ';');
  std::stringstream all(text);
  std::string item;
  int dim = -1, k = 0;
  while (std::getline(all, item, ';')) {
    if (item.empty()) continue;
    ++k;
    std::stringstream one(item);
    std::string f;
    std::vector<double> xs;
    while (std::getline(one, f, ',')) {
      try {
        std::size_t used = 0;
        xs.push_back(std::stod(f, &used));
        if (f.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(f);
      } catch (const std::exception&) {
        throw InputError(flag, 0, k, "point " + std::to_string(k) + ": not a number: '" + f + "'");
      }
    }
    if (xs.empty()) throw InputError(flag, 0, k, "empty point");
    if (dim >= 0 && static_cast<int>(xs.size()) != dim)
      throw InputError(flag, 0, k, "points must all have the same dimension");
    dim = static_cast<int>(xs.size());
    pts.push_back(Eigen::Map<Vec>(xs.data(), dim));
  }
  if (pts.empty()) throw InputError(flag, 0, 0, "no points given");
  return pts;
}

Vec parse_point(const std::string& text, const std::string& flag, int dim = 2) {
  auto p = parse_points(text, flag);
  if (p.size() != 1 || p[0].size() != dim)
    throw InputError(flag, 0, 0, "expected one point with " + std::to_string(dim) + " coordinates");
  return p[0];
}

void check_index(int i, int n, const std::string& what) {
  if (i < 0 || i >= n)
    throw InputError(what, 0, 0, "index " + std::to_string(i) + " out of range [0, " + std::to_string(n) + ")");
}

std::vector<int> others(int n, int p) {
  std::vector<int> xs;
  for (int i = 0; i < n; ++i)
    if (i != p) xs.push_back(i);
  return xs;
}

// Exponential coordinates about the base point <-> model-space points.
Vec to_model(double kappa, const Vec& u) { return ModelSpace(kappa, static_cast<int>(u.size())).point(u); }
Vec from_model(double kappa, int dim, const Vec& P) {
  if (kappa == 0) return P;
  ModelSpace S(kappa, dim);
  return S.log(S.origin(), P).tail(dim);
}

ConvexDomain make_domain(const std::string& kind, double radius) {
  if (kind == "plane") return ConvexDomain::whole(2);
  Vec n(2);
  n << 0, 1;
  if (kind == "half-plane") return ConvexDomain::half_space(n, 0);
  if (kind == "disk") return ConvexDomain::ball(Vec::Zero(2), radius);
  throw InputError("--domain", 0, 0, "unknown domain '" + kind + "' (plane, half-plane, disk)");
}

WarpTag warp_tag(const std::string& s) {
  static const std::map<std::string, WarpTag> tags{{"id", WarpTag::Id},     {"sin", WarpTag::Sin},
                                                   {"sinh", WarpTag::Sinh}, {"cosh", WarpTag::Cosh},
                                                   {"exp", WarpTag::Exp},   {"const", WarpTag::Const}};
  auto it = tags.find(s);
  if (it == tags.end()) throw InputError("--warp", 0, 0, "unknown warping function '" + s + "'");
  return it->second;
}

int verdict_exit(const Verdict& v) { return v.pass ? 0 : 1; }

std::function<void(const std::string&)> progress_line() {
  return [](const std::string& s) { std::cerr << s << "\n"; };
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"curvkit: comparison geometry on finite metrics and nets"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "curvkit 1.0");
  Common g;
  std::string input, mode = "cbb", domain = "half-plane", objective = "quadratic", anchors_s,
                     images_s, p_s, x_s, y_s, center_s = "0,0", warp = "id", tag, kind;
  int p = 0, a = 0, b = 1, n = 30, dim = 2, leaves = 3;
  std::vector<int> xs, path, only, set, quad;
  std::vector<double> radii{0, 0.25, 0.5, 1, 1.5}, angles, eps, weights;
  double kappa_min = kNaN, kappa_max = kNaN, min_step = 0.25, h = 1e-3, T = 2, s_end = 1.5,
         radius = 0, domain_radius = 1, wa = 0, wb = kInf, wvalue = 1, pq = 0, qq = 1, fiber = 1,
         length = 2 * kPi, arm = 1, mesh = 0.1, extent = 1.5, total_angle = 2 * kPi;
  std::function<int()> run;

  auto input_arg = [&](CLI::App* c, const char* what) {
    c->add_option("input", input, what)->required();
  };

  // ------------------------------------------------------------ checks
  for (const char* name : {"check-cbb", "check-cat"}) {
    bool cbb = std::string(name) == "check-cbb";
    auto* c = app.add_subcommand(name, cbb ? "Exhaustive CBB(kappa) four-point scan"
                                           : "Exhaustive CAT(kappa) four-point scan");
    input_arg(c, "Metric (.csv) or graph (.json)");
    c->add_option("--quad", quad, "Check one quadruple only (e.g. a reported witness)")->delimiter(',');
    add_kappa(c, g), add_tol(c, g), add_jobs(c, g), add_output(c, g);
    c->callback([&, cbb, name] {
      run = [&, cbb, name] {
        FiniteMetric M = load_metric(input);
        Verdict v;
        if (!quad.empty()) {
          if (quad.size() != 4) throw InputError("--quad", 0, 0, "expected four indices");
          for (int i : quad) check_index(i, M.size(), "--quad");
          if (cbb) {
            v = cbb_four_point(M, quad[0], quad[1], quad[2], quad[3], g.kappa, g.tol);
          } else {
            v = cat_quadruple(M, quad[0], quad[1], quad[2], quad[3], g.kappa, g.tol);
          }
        } else {
          std::cerr << "scanning " << M.size() << " points\n";
          ScanOptions opt{g.tol, g.jobs};
          v = cbb ? is_cbb(M, g.kappa, opt) : is_cat(M, g.kappa, opt);
        }
        Json cfg = common_config(g);
        cfg["input"] = input;
        if (!quad.empty()) cfg["quad"] = quad;
        emit(g, dump(report(name, cfg, verdict_json(v, &M))));
        return verdict_exit(v);
      };
    });
  }

  {
    auto* c = app.add_subcommand("kappa-range", "Bisect the CBB supremum or CAT infimum of kappa");
    input_arg(c, "Metric (.csv) or graph (.json)");
    c->add_option("--mode", mode, "cbb or cat")->check(CLI::IsMember({"cbb", "cat"}))->capture_default_str();
    c->add_option("--kappa-min", kappa_min, "Lower end of the bracket");
    c->add_option("--kappa-max", kappa_max, "Upper end of the bracket");
    add_tol(c, g), add_jobs(c, g), add_output(c, g);
    c->callback([&] {
      run = [&] {
        if (std::isfinite(kappa_min) && std::isfinite(kappa_max) && kappa_min > kappa_max)
          throw InputError("--kappa-min", 0, 0, "kappa-min must not exceed kappa-max");
        FiniteMetric M = load_metric(input);
        ScanOptions opt{g.tol, g.jobs, kappa_min, kappa_max};
        Threshold t = mode == "cbb" ? cbb_sup_kappa(M, opt) : cat_inf_kappa(M, opt);
        Json cfg{{"input", input}, {"mode", mode}, {"tol", g.tol}, {"jobs", resolve_jobs(g.jobs)}};
        if (std::isfinite(kappa_min)) cfg["kappa_min"] = kappa_min;
        if (std::isfinite(kappa_max)) cfg["kappa_max"] = kappa_max;
        emit(g, dump(report("kappa-range", cfg, threshold_json(t))));
        return t.sentinel ? 1 : 0;
      };
    });
  }

  for (const char* name : {"one-plus-n", "sturm"}) {
    bool opn = std::string(name) == "one-plus-n";
    auto* c = app.add_subcommand(name, opn ? "(1+n)-point comparison at p" : "Sturm copositivity test at p");
    input_arg(c, "Metric (.csv) or graph (.json)");
    c->add_option("--p", p, "Index of the base point")->capture_default_str();
    c->add_option("--xs", xs, "Indices of the other points (default: all)")->delimiter(',');
    if (opn) add_kappa(c, g);
    add_tol(c, g), add_seed(c, g), add_output(c, g);
    c->callback([&, opn, name] {
      run = [&, opn, name] {
        FiniteMetric M = load_metric(input);
        check_index(p, M.size(), "--p");
        std::vector<int> ids = xs.empty() ? others(M.size(), p) : xs;
        for (int i : ids) check_index(i, M.size(), "--xs");
        Verdict v = opn ? one_plus_n_test(M, p, ids, g.kappa, g.tol) : sturm_test(M, p, ids, g.tol, g.seed);
        Json cfg{{"input", input}, {"p", p}, {"xs", ids}, {"tol", g.tol}};
        if (opn) cfg["kappa"] = number(g.kappa);
        else cfg["seed"] = g.seed;
        emit(g, dump(report(name, cfg, verdict_json(v, &M))));
        return verdict_exit(v);
      };
    });
  }

  // ------------------------------------------------------------ extension
  {
    auto* c = app.add_subcommand("extend", "Kirszbraun extension of a short map into the kappa-plane");
    input_arg(c, "Source metric (.csv) or graph (.json)");
    c->add_option("--p", p, "Point to extend to")->capture_default_str();
    c->add_option("--xs", xs, "Domain of the map (indices)")->delimiter(',')->required();
    c->add_option("--images", images_s, "Images 'x,y;x,y;...' (coordinates about the base point)")->required();
    add_kappa(c, g), add_tol(c, g), add_output(c, g);
    c->callback([&] {
      run = [&] {
        FiniteMetric M = load_metric(input);
        check_index(p, M.size(), "--p");
        for (int i : xs) check_index(i, M.size(), "--xs");
        auto imgs = parse_points(images_s, "--images");
        if (imgs.size() != xs.size()) throw InputError("--images", 0, 0, "need one image per --xs entry");
        const int m = static_cast<int>(imgs[0].size());
        std::vector<Vec> pts;
        for (const Vec& u : imgs) pts.push_back(to_model(g.kappa, u));
        ExtensionResult e = kirszbraun_extend(M, p, xs, pts, g.kappa, g.tol == kVerdictTol ? kLengthTol : g.tol);
        Json res{{"feasible", e.feasible}, {"fault", e.fault}, {"margin", number(e.margin)}};
        if (e.feasible) res["point"] = vec_json(from_model(g.kappa, m, e.point));
        if (e.source_check) res["source_check"] = verdict_json(*e.source_check, &M);
        Json cfg{{"input", input}, {"p", p}, {"xs", xs}, {"kappa", number(g.kappa)}};
        emit(g, dump(report("extend", cfg, res)));
        return e.feasible ? 0 : 1;
      };
    });
  }

  {
    auto* c = app.add_subcommand("barycenter", "Weighted barycenter of points of the kappa-plane");
    c->add_option("--anchors", anchors_s, "Anchors 'x,y;x,y;...' (coordinates about the base point)")->required();
    c->add_option("--weights", weights, "Weights (default: equal)")->delimiter(',');
    add_kappa(c, g), add_output(c, g), add_plot(c, g);
    c->callback([&] {
      run = [&] {
        auto us = parse_points(anchors_s, "--anchors");
        const int m = static_cast<int>(us[0].size());
        std::vector<double> w = weights;
        if (w.empty()) w.assign(us.size(), 1.0 / us.size());
        if (w.size() != us.size()) throw InputError("--weights", 0, 0, "need one weight per anchor");
        std::vector<Vec> pts;
        for (const Vec& u : us) pts.push_back(to_model(g.kappa, u));
        Vec q = barycentric_point(g.kappa, pts, w);
        Vec uq = from_model(g.kappa, m, q);
        ModelSpace S(g.kappa, m);
        std::vector<double> dist;
        for (const Vec& P : pts) dist.push_back(S.distance(q, P));
        Json cfg{{"kappa", number(g.kappa)}, {"weights", numbers(w)}, {"anchors", Json::array()}};
        for (const Vec& u : us) cfg["anchors"].push_back(vec_json(u));
        emit(g, dump(report("barycenter", cfg, Json{{"point", vec_json(uq)}, {"distances", numbers(dist)}})));
        if (!g.plot.empty() && m == 2) {
          PlotLayer A{{}, "#1f4e8c", false}, B{{Eigen::Vector2d(uq[0], uq[1])}, "#b22222", false};
          for (const Vec& u : us) A.points.emplace_back(u[0], u[1]);
          emit_plot(g, svg_plot({A, B}, "barycenter (exponential coordinates)"));
        }
        return 0;
      };
    });
  }

  {
    auto* c = app.add_subcommand("web", "Web of an array of distance functions");
    input_arg(c, "Metric (.csv) or graph (.json)");
    c->add_option("--anchors", xs, "Anchor indices")->delimiter(',')->required();
    add_kappa(c, g), add_output(c, g);
    c->callback([&] {
      run = [&] {
        FiniteMetric M = load_metric(input);
        for (int i : xs) check_index(i, M.size(), "--anchors");
        WebResult w = web_compute(M, xs, g.kappa);
        Json cfg{{"input", input}, {"anchors", xs}, {"kappa", number(g.kappa)}};
        emit(g, dump(report("web", cfg, Json{{"web", w.web}, {"inner", w.inner}})));
        return 0;
      };
    });
  }

  // ------------------------------------------------------------ flows
  {
    auto* c = app.add_subcommand("develop", "kappa-development of a geodesic of a graph about p");
    input_arg(c, "Graph (.json)");
    c->add_option("--p", p, "Base vertex")->capture_default_str();
    c->add_option("--a", a, "Start vertex of the geodesic")->capture_default_str();
    c->add_option("--b", b, "End vertex of the geodesic")->capture_default_str();
    c->add_option("--path", path, "Explicit vertex path instead of the geodesic a-b")->delimiter(',');
    c->add_option("--min-step", min_step, "Resampling step")->capture_default_str();
    add_kappa(c, g), add_output(c, g), add_plot(c, g);
    c->callback([&] {
      run = [&] {
        SampledSpace S = load_sampled_space(input);
        check_index(p, S.size(), "--p");
        std::vector<int> pa = path;
        if (pa.empty()) {
          check_index(a, S.size(), "--a");
          check_index(b, S.size(), "--b");
          pa = S.geodesic(a, b);
        }
        for (int v : pa) check_index(v, S.size(), "--path");
        Development d;
        Verdict v = development_check(S, p, pa, g.kappa, min_step, &d);
        Json res = verdict_json(v);
        res["development"] = {{"rho", numbers(d.rho)}, {"theta", numbers(d.theta)}, {"margin", number(d.margin)}};
        res["path"] = pa;
        Json cfg{{"input", input}, {"p", p}, {"kappa", number(g.kappa)}, {"min_step", min_step}};
        emit(g, dump(report("develop", cfg, res)));
        emit_plot(g, development_svg(d));
        return verdict_exit(v);
      };
    });
  }

  {
    auto* c = app.add_subcommand("radial", "Radial curves in a convex planar domain and their comparison");
    c->add_option("--domain", domain, "plane, half-plane (y >= 0) or disk")->capture_default_str();
    c->add_option("--radius", domain_radius, "Disk radius")->capture_default_str();
    c->add_option("--p", p_s, "Base point 'x,y'")->required();
    c->add_option("--x", x_s, "Start of the first curve")->required();
    c->add_option("--y", y_s, "Start of the second curve")->required();
    c->add_option("--step", h, "Step h")->capture_default_str();
    c->add_option("--s-end", s_end, "Final parameter")->capture_default_str();
    add_kappa(c, g), add_output(c, g), add_plot(c, g);
    c->callback([&] {
      run = [&] {
        ConvexDomain D = make_domain(domain, domain_radius);
        Vec P = parse_point(p_s, "--p"), X = parse_point(x_s, "--x"), Y = parse_point(y_s, "--y");
        for (const Vec* z : {&P, &X, &Y})
          if (!D.contains(*z)) throw InputError("--p/--x/--y", 0, 0, "point outside the domain");
        DiscreteCurve r = radial_curve(D, P, X, g.kappa, h, s_end), s = radial_curve(D, P, Y, g.kappa, h, s_end);
        Verdict v = radial_comparison_check(D, P, g.kappa, r, s, h);
        Json res = verdict_json(v);
        res["curves"] = Json::array({trace_json(r), trace_json(s)});
        Json cfg{{"domain", domain}, {"p", vec_json(P)}, {"x", vec_json(X)}, {"y", vec_json(Y)},
                 {"kappa", number(g.kappa)}, {"h", h}, {"s_end", s_end}};
        emit(g, dump(report("radial", cfg, res)));
        if (!g.plot.empty()) {
          PlotLayer A{{}, "#1f4e8c", true}, B{{}, "#2e8b57", true}, C{{Eigen::Vector2d(P[0], P[1])}, "#b22222", false};
          for (const Vec& z : r.points) A.points.emplace_back(z[0], z[1]);
          for (const Vec& z : s.points) B.points.emplace_back(z[0], z[1]);
          emit_plot(g, svg_plot({A, B, C}, "radial curves"));
        }
        return verdict_exit(v);
      };
    });
  }

  {
    auto* c = app.add_subcommand("gradflow", "Gradient curves of a semiconcave function and their contraction");
    c->add_option("--domain", domain, "plane, half-plane (y >= 0) or disk")->capture_default_str();
    c->add_option("--radius", domain_radius, "Disk radius")->capture_default_str();
    c->add_option("--objective", objective, "quadratic (-|x-c|^2/2), linear (<c,x>) or distance (-|x-c|)")
        ->check(CLI::IsMember({"quadratic", "linear", "distance"}))
        ->capture_default_str();
    c->add_option("--center", center_s, "c")->capture_default_str();
    c->add_option("--x", x_s, "First start point")->required();
    c->add_option("--y", y_s, "Second start point")->required();
    c->add_option("--step", h, "Step h")->capture_default_str();
    c->add_option("--T", T, "Final time")->capture_default_str();
    add_output(c, g);
    c->callback([&] {
      run = [&] {
        ConvexDomain D = make_domain(domain, domain_radius);
        Vec C = parse_point(center_s, "--center"), X = parse_point(x_s, "--x"), Y = parse_point(y_s, "--y");
        Objective f = objective == "quadratic" ? neg_half_square(C) : objective == "linear" ? linear(C) : neg_distance(C);
        Verdict v = contraction_check(D, f, X, Y, h, T);
        Json res = verdict_json(v);
        res["curves"] = Json::array({trace_json(gradient_curve(D, f, X, h, T)), trace_json(gradient_curve(D, f, Y, h, T))});
        Json cfg{{"domain", domain}, {"objective", objective}, {"center", vec_json(C)}, {"x", vec_json(X)},
                 {"y", vec_json(Y)}, {"h", h}, {"T", T}};
        emit(g, dump(report("gradflow", cfg, res)));
        return verdict_exit(v);
      };
    });
  }

  // ------------------------------------------------------------ builders
  {
    auto* c = app.add_subcommand("cone", "kappa-cone over a metric (CSV out)");
    input_arg(c, "Fiber metric (.csv) or graph (.json)");
    c->add_option("--radii", radii, "Radius grid")->delimiter(',')->capture_default_str();
    add_kappa(c, g), add_output(c, g);
    c->callback([&] {
      run = [&] {
        std::ostringstream os;
        write_csv_metric(os, cone_space(load_metric(input), radii, g.kappa));
        emit(g, os.str());
        return 0;
      };
    });
  }
  {
    auto* c = app.add_subcommand("suspend", "Spherical suspension of a metric (CSV out)");
    input_arg(c, "Fiber metric (.csv) or graph (.json)");
    c->add_option("--angles", angles, "Angle grid in [0, pi] (default 0, pi/4, pi/2, 3pi/4, pi)")->delimiter(',');
    add_output(c, g);
    c->callback([&] {
      run = [&] {
        std::vector<double> th = angles;
        if (th.empty()) th = {0, kPi / 4, kPi / 2, 3 * kPi / 4, kPi};
        std::ostringstream os;
        write_csv_metric(os, suspension_space(load_metric(input), th));
        emit(g, os.str());
        return 0;
      };
    });
  }
  {
    auto* c = app.add_subcommand("double", "Doubling of a graph along a vertex set (JSON graph out)");
    input_arg(c, "Graph (.json)");
    c->add_option("--set", set, "Vertices of the gluing set")->delimiter(',');
    c->add_option("--tag", tag, "Use a tagged vertex set instead");
    add_output(c, g);
    c->callback([&] {
      run = [&] {
        SampledSpace S = load_sampled_space(input);
        std::vector<int> A = set;
        if (!tag.empty()) {
          auto it = S.graph().tags.find(tag);
          if (it == S.graph().tags.end()) throw InputError(input, 0, 0, "no tag '" + tag + "'");
          A = it->second;
        }
        if (A.empty()) throw InputError("--set", 0, 0, "empty gluing set");
        for (int v : A) check_index(v, S.size(), "--set");
        emit(g, graph_json(doubling(S, A)).dump(2) + "\n");
        return 0;
      };
    });
  }
  {
    auto* c = app.add_subcommand("warp-dist", "Distance in a warped product over an interval");
    c->add_option("--warp", warp, "id, sin, sinh, cosh, exp or const")->capture_default_str();
    c->add_option("--a", wa, "Base interval start")->capture_default_str();
    c->add_option("--b", wb, "Base interval end")->capture_default_str();
    c->add_option("--value", wvalue, "Constant for --warp const")->capture_default_str();
    c->add_option("--s", pq, "Base coordinate of the first point")->capture_default_str();
    c->add_option("--t", qq, "Base coordinate of the second point")->capture_default_str();
    c->add_option("--fiber-dist", fiber, "Fiber distance between the two points")->capture_default_str();
    add_output(c, g);
    c->callback([&] {
      run = [&] {
        WarpSpec spec = make_warp(warp_tag(warp), wa, wb, wvalue);
        WarpedDistance d = warped_1d_distance(spec, pq, qq, fiber);
        Json cfg{{"warp", warp}, {"a", number(wa)}, {"b", number(wb)}, {"s", pq}, {"t", qq}, {"fiber_dist", fiber}};
        if (warp == "const") cfg["value"] = wvalue;
        emit(g, dump(report("warp-dist", cfg,
                            Json{{"distance", number(d.value)}, {"budget", number(d.budget)},
                                 {"through_zero", d.through_zero}})));
        return 0;
      };
    });
  }
  {
    auto* c = app.add_subcommand("pack", "Maximal eps-packings and the packing dimension");
    input_arg(c, "Metric (.csv) or graph (.json)");
    c->add_option("--eps", eps, "Scales")->delimiter(',')->required();
    add_output(c, g);
    c->callback([&] {
      run = [&] {
        FiniteMetric M = load_metric(input);
        Json counts = Json::array();
        for (double e : eps) {
          if (!(e > 0)) throw InputError("--eps", 0, 0, "scales must be positive");
          Packing pk = pack_eps(M, e);
          counts.push_back(Json{{"eps", e}, {"count", pk.count}, {"points", pk.points}});
        }
        Json res{{"packings", counts}};
        if (eps.size() >= 2) res["dimension"] = number(packing_dimension(M, eps));
        emit(g, dump(report("pack", Json{{"input", input}, {"eps", numbers(eps)}}, res)));
        return 0;
      };
    });
  }
  {
    auto* c = app.add_subcommand("gen", "Corpus generators (CSV metric, JSON graph for nets)");
    c->add_option("kind", kind, "sphere, euclidean, hyperbolic, model, tripod, circle, net-sphere, net-plane, "
                                "net-hyperbolic, net-cone")
        ->required();
    c->add_option("--n", n, "Number of points")->capture_default_str();
    c->add_option("--dim", dim, "Dimension of the model space")->capture_default_str();
    c->add_option("--radius", radius, "Sampling radius (0: default)")->capture_default_str();
    c->add_option("--leaves", leaves, "Tripod leaves")->capture_default_str();
    c->add_option("--arm", arm, "Tripod arm length")->capture_default_str();
    c->add_option("--length", length, "Circle length")->capture_default_str();
    c->add_option("--mesh", mesh, "Net mesh size h")->capture_default_str();
    c->add_option("--extent", extent, "Net extent")->capture_default_str();
    c->add_option("--angle", total_angle, "Cone total angle")->capture_default_str();
    auto* ko = c->add_option("--kappa", g.kappa, "Curvature");
    add_seed(c, g), add_output(c, g);
    c->callback([&, ko] {
      run = [&, ko] {
        bool kset = ko->count() > 0;
        std::ostringstream os;
        auto model = [&](double k) {
          write_csv_metric(os, sample_model_space(k, dim, n, g.seed, radius).metric);
        };
        if (kind == "sphere") model(kset ? g.kappa : 1.0);
        else if (kind == "hyperbolic") model(kset ? g.kappa : -1.0);
        else if (kind == "euclidean") model(0.0);
        else if (kind == "model") model(g.kappa);
        else if (kind == "tripod") write_csv_metric(os, tripod_metric(leaves, arm));
        else if (kind == "circle") write_csv_metric(os, circle_metric(length, n));
        else if (kind.rfind("net-", 0) == 0) {
          NetSpec s;
          std::string k = kind.substr(4);
          if (k == "sphere") s.kind = SurfaceKind::Sphere, s.kappa = kset ? g.kappa : 1.0;
          else if (k == "plane") s.kind = SurfaceKind::Plane;
          else if (k == "hyperbolic") s.kind = SurfaceKind::Hyperbolic, s.kappa = kset ? g.kappa : -1.0;
          else if (k == "cone") s.kind = SurfaceKind::Cone, s.total_angle = total_angle;
          else throw InputError("gen", 0, 0, "unknown net '" + k + "'");
          s.h = mesh;
          s.extent = extent;
          s.seed = g.seed;
          os << graph_json(net_of_surface(s)).dump(2) << "\n";
        } else {
          throw InputError("gen", 0, 0, "unknown generator '" + kind + "'");
        }
        emit(g, os.str());
        return 0;
      };
    });
  }

  {
    auto* c = app.add_subcommand("verify-suite", "Run the acceptance battery");
    c->add_option("--only", only, "Criteria to run (1-9)")->delimiter(',');
    add_seed(c, g), add_jobs(c, g), add_output(c, g);
    c->callback([&] {
      run = [&] {
        SuiteOptions o;
        o.seed = g.seed;
        o.jobs = resolve_jobs(g.jobs);
        o.only = only;
        o.progress = progress_line();
        auto results = run_suite(o);
        for (const auto& r : results)
          std::cerr << (r.pass ? "PASS" : "FAIL") << " " << r.id << " " << r.name << ": " << r.summary << "\n";
        Json rep = suite_report(results, o);
        emit(g, dump(rep));
        return rep["result"]["pass"].get<bool>() ? 0 : 1;
      };
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  try {
    return run();
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
  } catch (const MetricViolation& e) {
    std::cerr << "input error: " << to_string(e.kind()) << ": " << e.what() << "\n";
  } catch (const std::invalid_argument& e) {
    std::cerr << "input error: " << e.what() << "\n";
  } catch (const std::domain_error& e) {
    std::cerr << "input error: " << e.what() << "\n";
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
  }
  return 2;
}
