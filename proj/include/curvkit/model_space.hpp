#pragma once

#include "curvkit/model_plane.hpp"

#include <optional>
#include <vector>

namespace curvkit {

// Lob^m_kappa in ambient coordinates.  kappa = 0: R^m.  kappa > 0: sphere of
// radius R = 1/sqrt(kappa) in R^{m+1}.  kappa < 0: upper sheet of
// <v,v> = -R^2 in Minkowski R^{1,m} (coordinate 0 is time).  The base point
// is 0 resp. R*e0; its tangent space is spanned by e1..em.
class ModelSpace {
 public:
  ModelSpace(double kappa = 0, int dim = 2);

  double kappa() const { return kappa_; }
  int dim() const { return dim_; }
  int ambient_dim() const { return kappa_ == 0 ? dim_ : dim_ + 1; }
  double radius() const { return R_; }  // 1/sqrt|kappa|, inf for kappa = 0
  double varpi() const { return curvkit::varpi(kappa_); }

  Vec origin() const;
  // Tangent vector at the origin from intrinsic coordinates u in R^m.
  Vec tangent_at_origin(const Vec& u) const;
  // exp at the origin of the tangent vector with intrinsic coordinates u.
  Vec point(const Vec& u) const { return exp(origin(), tangent_at_origin(u)); }

  double inner(const Vec& u, const Vec& v) const;  // Euclidean or Minkowski
  double tangent_norm(const Vec& v) const;
  Vec normalize(const Vec& P) const;
  Vec project_tangent(const Vec& P, const Vec& v) const;
  bool contains(const Vec& P, double tol = 1e-12) const;

  double distance(const Vec& P, const Vec& Q) const;
  Vec log(const Vec& P, const Vec& Q) const;  // tangent at P, length = distance
  Vec exp(const Vec& P, const Vec& v) const;
  // Point at fraction t of the geodesic [PQ]; requires |PQ| < varpi.
  Vec geodesic_point(const Vec& P, const Vec& Q, double t) const;
  // Angle at P between geodesics towards Q and S.
  double angle(const Vec& P, const Vec& Q, const Vec& S) const;

 private:
  double kappa_;
  int dim_;
  double R_;
};

struct ModelConfig {
  ModelSpace space;
  std::vector<Vec> points;
  Mat distance_table() const;
};

// Realizes the model triangle: points x, y, z with |yz| = a, |zx| = b, |xy| = c;
// x sits at the origin and y on the first axis.
ModelConfig lay_triangle(double kappa, const TriangleSides& s, int dim = 2);

// Free functions matching the kernel interface.
double model_distance(double kappa, const Vec& P, const Vec& Q);
Vec geodesic_point(double kappa, const Vec& P, const Vec& Q, double t);

struct HemisphereResult {
  bool found = false;   // open hemisphere located
  bool closed = false;  // only a closed hemisphere contains the curve
  Vec center;           // unit vector (in units of the sphere radius)
  double margin = 0;    // min <center, v>/R over sampled curve points
  Vec witness;          // sampled point attaining the margin
};

// Closed polyline (vertices in ambient coordinates of the model sphere).
// Throws std::invalid_argument when the length exceeds 2*varpi.
HemisphereResult hemisphere_check(double kappa, const std::vector<Vec>& polyline,
                                  int samples_per_edge = 16);

}  // namespace curvkit
