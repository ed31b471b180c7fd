#pragma once

#include "curvkit/comparison.hpp"

#include <optional>

namespace curvkit {

struct BallSystem {
  std::vector<Vec> centers;  // ambient coordinates of Lob^m_kappa
  std::vector<double> radii;
};

struct BallResult {
  bool feasible = false;
  Vec point;                // minimizer of h(q) = max_i (|y_i q| - r_i)
  double value = kInf;      // h at `point`; the margin when infeasible
  bool exact = false;       // optimality verified through the active-set KKT system
  std::vector<int> active;  // balls attaining the max at `point`
  int iterations = 0;
};

// kappa <= 0.  Subgradient descent on max_i (md(|y_i q|) - md(r_i)), then an
// exact solve of the equal-level system on candidate active sets.  `dim` is
// only consulted for the empty system.
BallResult ball_intersection(double kappa, const BallSystem& B, double tol = kLengthTol,
                             int dim = 2);

struct ExtensionResult {
  bool feasible = false;
  bool fault = false;  // infeasible although the source passed is_cbb(kappa)
  Vec point;
  double margin = kInf;  // max_i |y_i q| - |x_i p|
  BallResult balls;
  std::optional<Verdict> source_check;
};

// Extends the short map x_i -> y_i to p.  Throws std::invalid_argument when
// the map is not short (beyond tol) or kappa > 0.
ExtensionResult kirszbraun_extend(const FiniteMetric& M, int p, const std::vector<int>& xs,
                                  const std::vector<Vec>& images, double kappa,
                                  double tol = kLengthTol);

// argmin of sum_i w_i md(|a_i q|).  For kappa > 0 the anchors must lie in an
// open ball of radius varpi/2 (std::domain_error otherwise).
Vec barycentric_point(double kappa, const std::vector<Vec>& anchors, const std::vector<double>& w,
                      double grad_tol = 1e-9);

// Max of |s(w) s(w')| / |w - w'|_1 over neighbours of the Delta^k grid with
// spacing 1/resolution.
double barycentric_lipschitz_estimate(double kappa, const std::vector<Vec>& anchors,
                                      int resolution);

struct WebResult {
  std::vector<int> web;
  std::vector<int> inner;
};

// Pareto-minimal vertices of v -> (md(|a_i v|))_i and the inner web.
WebResult web_compute(const FiniteMetric& M, const std::vector<int>& anchors, double kappa);
WebResult web_compute(const SampledSpace& S, const std::vector<int>& anchors, double kappa);

// Short map from the solid model triangle p~x~y~ onto two model triangles
// glued along [p. z.] with |p. z.| <= |p~ z~|.  The source triangle is laid
// out with p~ at the origin and x~ on the first axis.
class ReshetnyakFold {
 public:
  enum class Piece { TriangleX, TriangleY, SectorP, SectorX, SectorY, Core };

  // Sides |p~x~|, |p~y~|, |x~y~|, the position |x~z~| of z~ on [x~y~] and
  // the target length |p. z.|.  Throws std::invalid_argument if the
  // configuration does not exist.
  ReshetnyakFold(double kappa, double px, double py, double xy, double xz, double pz_dot);

  Vec operator()(const Vec& w) const;
  Piece piece(const Vec& w) const;

  const ModelSpace& space() const { return S_; }
  // source (tilde) and target (dot) corners, in order p, x, y, z
  const std::vector<Vec>& source() const { return src_; }
  const std::vector<Vec>& target() const { return dst_; }
  Vec z_x() const { return zx_; }
  Vec z_y() const { return zy_; }
  // Random point of the solid source triangle.
  Vec sample(Rng& rng) const;

  // 1-Lipschitz audit on random pairs: margin = min (|ab| - |F(a)F(b)|).
  Verdict audit(int pairs, std::uint64_t seed, double tol = 1e-8) const;

 private:
  double polar_angle(const Vec& w) const;
  double side(const Vec& a, const Vec& b, const Vec& w) const;
  Vec polar_point(double rho, double theta) const;

  ModelSpace S_;
  std::vector<Vec> src_, dst_;
  Vec zx_, zy_;
  double d_ = 0, xz_ = 0, yz_ = 0;
  double theta_y_ = 0, theta_zy_ = 0, theta_zx_ = 0, rot_x_ = 0, rot_y_ = 0;
};

}  // namespace curvkit
