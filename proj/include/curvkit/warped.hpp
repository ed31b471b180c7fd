#pragma once

#include "curvkit/verdict.hpp"

namespace curvkit {

// Distance in the kappa-cone between (s, phi) and (t, psi) with |phi psi| = fiber_dist:
// side_kappa{min(pi, fiber_dist); s, t}.  For kappa > 0 the radii lie in [0, varpi].
double cone_distance(double kappa, double s, double t, double fiber_dist);

// Product grid radius x fiber point; radius 0 collapses to a single tip (index 0).
FiniteMetric cone_space(const FiniteMetric& F, const std::vector<double>& radii, double kappa = 0);
// [0, pi] x_sin F; the poles at 0 and pi are single points.
FiniteMetric suspension_space(const FiniteMetric& F, const std::vector<double>& angles);

// Two copies of S glued along the vertex set A (tags "A", "copy1", "copy2").
SampledSpace doubling(const SampledSpace& S, const std::vector<int>& A);

enum class WarpTag { Id, Sin, Sinh, Cosh, Exp, Const, Custom };

struct WarpSpec {
  WarpTag tag = WarpTag::Id;
  double a = 0, b = kInf;  // base interval (use -inf/inf for the line)
  double value = 1;        // Const
  std::vector<double> xs, fs;  // Custom: piecewise linear samples, xs increasing
  double lipschitz = 0;        // Custom: declared Lipschitz constant

  double f(double x) const;
  double df(double x) const;
  double d2f(double x) const;
  void validate() const;
};

WarpSpec make_warp(WarpTag tag, double a, double b, double value = 1);
const char* to_string(WarpTag t);

struct WarpedDistance {
  double value = 0;
  double budget = 0;  // discretization estimate |L_N - L_2N| (+ declared Lipschitz term)
  bool through_zero = false;
};

// Distance between (p, phi) and (q, psi) in B x_f F, given l = |phi psi|_F.
// Minimizes the discrete length of a chain parameterized uniformly in the
// fiber coordinate (projected Newton), at N and 2N nodes, Richardson
// extrapolated, and compared with paths through the zero set of f.
WarpedDistance warped_1d_distance(const WarpSpec& spec, double p, double q, double fiber_dist,
                                  int nodes = 96);

struct WarpSample {
  double p, q, fiber_dist;
};
// Pass iff dist_f <= dist_g + budget on every sample (f <= g pointwise).
Verdict warp_monotone_check(const WarpSpec& f, const WarpSpec& g,
                            const std::vector<WarpSample>& samples);

}  // namespace curvkit
