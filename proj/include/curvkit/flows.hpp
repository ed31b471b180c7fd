#pragma once

#include "curvkit/verdict.hpp"

namespace curvkit {

// Closed convex subset of E^m with an explicit closest-point projection.
class ConvexDomain {
 public:
  enum class Kind { Space, HalfSpace, Ball };

  static ConvexDomain whole(int dim = 2);
  // {x : <normal, x> >= offset}
  static ConvexDomain half_space(const Vec& normal, double offset = 0);
  static ConvexDomain ball(const Vec& center, double radius);

  Kind kind() const { return kind_; }
  int dim() const { return dim_; }
  bool contains(const Vec& x, double tol = 1e-12) const;
  Vec project(const Vec& x) const;
  bool on_boundary(const Vec& x, double tol = 1e-12) const;
  // Projection of v onto the tangent wedge at x (identity in the interior).
  Vec wedge(const Vec& x, const Vec& v) const;
  double distance(const Vec& x, const Vec& y) const { return (x - y).norm(); }
  // Idempotence and 1-Lipschitz audit of `project` on random ambient points.
  Verdict audit_projection(int samples, std::uint64_t seed, double spread = 3) const;

 private:
  Kind kind_ = Kind::Space;
  int dim_ = 2;
  Vec a_;  // normal or center
  double c_ = 0;  // offset or radius
};

struct DiscreteCurve {
  std::vector<double> params;
  std::vector<Vec> points;   // domain curves
  std::vector<int> vertices;  // curves in a SampledSpace
  std::vector<double> margins;  // optional per-sample diagnostics
  std::size_t size() const { return std::max(points.size(), vertices.size()); }
};

struct Objective {
  std::function<double(const Vec&)> value;
  std::function<Vec(const Vec&)> gradient;  // ambient (super)gradient
  double lambda = 0;  // f is lambda-concave
};

Objective neg_half_square(const Vec& center);  // -|x - c|^2/2, lambda = -1
Objective linear(const Vec& g);                // <g, x>, lambda = 0
Objective neg_distance(const Vec& p);          // -|x - p|, lambda = 0

// Projected explicit Euler: x_{k+1} = proj(x_k + h * wedge(x_k, grad f(x_k))).
DiscreteCurve gradient_curve(const ConvexDomain& D, const Objective& f, const Vec& x0, double h,
                             double T);

// |a(t) b(t)| <= e^{lambda t} |a(0) b(0)| + C h along both Euler curves.
// certificate = {max |d(t) - e^{lambda t} d(0)|, C}.
Verdict contraction_check(const ConvexDomain& D, const Objective& f, const Vec& x0, const Vec& y0,
                          double h, double T, double C = 3);

// |a(t1) a(t3)| >= |a(t2) a(t3)| - slack*h for t1 <= t2 <= t3; the step h is
// read off the curve parameters.
Verdict self_contracting_check(const DiscreteCurve& c, double slack = 1);

// (p, kappa)-radial curve from x, integrated with step h up to s_end (or
// varpi/2 for kappa > 0).
DiscreteCurve radial_curve(const ConvexDomain& D, const Vec& p, const Vec& x, double kappa,
                           double h, double s_end);

// Gradient exponent.  Plane and half-space use the closed form proj(p + v);
// otherwise (or when integrate is set) the radial curve in direction v.
Vec gexp(const ConvexDomain& D, const Vec& p, const Vec& v, double h = 1e-3, bool integrate = false);

// Radial comparison |rho(r) sigma(s)| <= side{phi_min; r, s} over a grid of at
// most `grid` x `grid` parameter pairs, plus radial monotonicity of
// s -> angle{|q sigma(s)|; |pq|, s} with q running over the rho samples.
// Tolerance slack*h.
Verdict radial_comparison_check(const ConvexDomain& D, const Vec& p, double kappa,
                                const DiscreteCurve& rho, const DiscreteCurve& sigma, double h,
                                int grid = 50, double slack = 10);

struct Development {
  std::vector<double> rho, theta;  // polar coordinates about p~
  std::vector<Vec> points;         // vertices in Lob^2_kappa
  double margin = kInf;            // min over interior vertices of pi - angle sum
  int worst = -1;
};

// kappa-development of a broken line with |p x_i| = rho[i] and
// |x_{i-1} x_i| = steps[i-1].  Throws std::domain_error unless 0 < rho < varpi.
Development develop_curve(double kappa, const std::vector<double>& rho,
                          const std::vector<double>& steps);

// Development of a vertex path of S about p, resampled so that consecutive
// vertices are at least min_step apart.  The tolerance propagates the budget
// delta(S) through the vertex angles.
Verdict development_check(const SampledSpace& S, int p, const std::vector<int>& path, double kappa,
                          double min_step, Development* out = nullptr);

// t -> |g(t) s(t)| is convex (second differences >= -tol) for two recovered
// geodesics resampled to `samples` points by arclength.
Verdict geodesic_convexity_check(const SampledSpace& S, const std::vector<int>& g,
                                 const std::vector<int>& s, int samples = 0);

}  // namespace curvkit
