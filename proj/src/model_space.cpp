#include "curvkit/model_space.hpp"

#include <stdexcept>

namespace curvkit {

ModelSpace::ModelSpace(double kappa, int dim) : kappa_(kappa), dim_(dim) {
  if (std::isnan(kappa)) throw std::invalid_argument("ModelSpace: NaN curvature");
  if (dim < 1) throw std::invalid_argument("ModelSpace: dimension must be positive");
  R_ = kappa == 0 ? kInf : 1.0 / std::sqrt(std::abs(kappa));
}

Vec ModelSpace::origin() const {
  Vec o = Vec::Zero(ambient_dim());
  if (kappa_ != 0) o[0] = R_;
  return o;
}

Vec ModelSpace::tangent_at_origin(const Vec& u) const {
  if (u.size() != dim_) throw std::invalid_argument("tangent_at_origin: dimension mismatch");
  if (kappa_ == 0) return u;
  Vec v = Vec::Zero(dim_ + 1);
  v.tail(dim_) = u;
  return v;
}

double ModelSpace::inner(const Vec& u, const Vec& v) const {
  double s = u.dot(v);
  if (kappa_ < 0) s -= 2 * u[0] * v[0];
  return s;
}

double ModelSpace::tangent_norm(const Vec& v) const {
  return std::sqrt(std::max(0.0, inner(v, v)));
}

Vec ModelSpace::normalize(const Vec& P) const {
  if (kappa_ > 0) return P * (R_ / P.norm());
  if (kappa_ < 0) {
    Vec Q = P;
    Q[0] = std::sqrt(R_ * R_ + P.tail(dim_).squaredNorm());
    return Q;
  }
  return P;
}

Vec ModelSpace::project_tangent(const Vec& P, const Vec& v) const {
  if (kappa_ == 0) return v;
  // <P,P> = R^2 (sphere) or -R^2 (hyperboloid)
  double pp = kappa_ > 0 ? R_ * R_ : -R_ * R_;
  return v - (inner(P, v) / pp) * P;
}

bool ModelSpace::contains(const Vec& P, double tol) const {
  if (P.size() != ambient_dim()) return false;
  if (kappa_ == 0) return true;
  double pp = inner(P, P);
  double target = kappa_ > 0 ? R_ * R_ : -R_ * R_;
  if (kappa_ < 0 && P[0] <= 0) return false;
  return std::abs(pp - target) <= tol * (1 + std::abs(target) + P.squaredNorm());
}

double ModelSpace::distance(const Vec& P, const Vec& Q) const {
  if (kappa_ == 0) return (P - Q).norm();
  if (kappa_ > 0) return R_ * 2 * std::atan2((P - Q).norm(), (P + Q).norm());
  Vec d = P - Q;
  double q = std::max(0.0, inner(d, d));
  return 2 * R_ * std::asinh(std::sqrt(q) / (2 * R_));
}

Vec ModelSpace::log(const Vec& P, const Vec& Q) const {
  Vec d = Q - P;
  if (kappa_ == 0) return d;
  Vec v = project_tangent(P, d);
  double n = tangent_norm(v);
  if (n == 0) return Vec::Zero(P.size());
  return v * (distance(P, Q) / n);
}

Vec ModelSpace::exp(const Vec& P, const Vec& v) const {
  if (kappa_ == 0) return P + v;
  double n = tangent_norm(v);
  if (n == 0) return P;
  double t = n / R_;
  Vec out = kappa_ > 0 ? Vec(P * std::cos(t) + v * (R_ * std::sin(t) / n))
                       : Vec(P * std::cosh(t) + v * (R_ * std::sinh(t) / n));
  return normalize(out);
}

Vec ModelSpace::geodesic_point(const Vec& P, const Vec& Q, double t) const {
  if (t < 0 || t > 1) throw std::invalid_argument("geodesic_point: t outside [0,1]");
  double d = distance(P, Q);
  if (kappa_ > 0 && d >= varpi() * (1 - 1e-12))
    throw std::domain_error("geodesic_point: endpoints at distance >= varpi");
  if (d == 0) return P;
  if (kappa_ == 0) return P + t * (Q - P);
  return exp(P, t * log(P, Q));
}

double ModelSpace::angle(const Vec& P, const Vec& Q, const Vec& S) const {
  Vec u = log(P, Q), v = log(P, S);
  double nu = tangent_norm(u), nv = tangent_norm(v);
  if (nu == 0 || nv == 0) throw std::domain_error("angle: degenerate hinge");
  u /= nu;
  v /= nv;
  return 2 * std::atan2(tangent_norm(u - v), tangent_norm(u + v));
}

Mat ModelConfig::distance_table() const {
  const int n = static_cast<int>(points.size());
  Mat d = Mat::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) d(i, j) = d(j, i) = space.distance(points[i], points[j]);
  return d;
}

ModelConfig lay_triangle(double kappa, const TriangleSides& s, int dim) {
  if (dim < 2) throw std::invalid_argument("lay_triangle: dimension must be >= 2");
  ModelSpace M(kappa, dim);
  ModelConfig cfg{M, {}};
  // degenerate sides are allowed as long as the triangle inequality holds
  auto cosine = [&]() -> std::optional<double> {
    if (s.b > 0 && s.c > 0) return model_angle(kappa, s.a, s.b, s.c);
    if (s.a < 0 || s.b < 0 || s.c < 0) return std::nullopt;
    double tol = 1e-12 * (1 + s.a + s.b + s.c);
    if (std::abs(s.a - std::abs(s.b - s.c)) > tol) return std::nullopt;
    if (kappa > 0 && s.a + s.b + s.c >= 2 * M.varpi()) return std::nullopt;
    return 0.0;
  }();
  if (!cosine) throw std::domain_error("lay_triangle: model triangle undefined");
  Vec e1 = Vec::Zero(dim), e2 = Vec::Zero(dim);
  e1[0] = 1;
  e2[1] = 1;
  cfg.points.push_back(M.origin());
  cfg.points.push_back(M.point(s.c * e1));
  cfg.points.push_back(M.point(s.b * (std::cos(*cosine) * e1 + std::sin(*cosine) * e2)));
  return cfg;
}

double model_distance(double kappa, const Vec& P, const Vec& Q) {
  int dim = kappa == 0 ? static_cast<int>(P.size()) : static_cast<int>(P.size()) - 1;
  return ModelSpace(kappa, std::max(dim, 1)).distance(P, Q);
}

Vec geodesic_point(double kappa, const Vec& P, const Vec& Q, double t) {
  int dim = kappa == 0 ? static_cast<int>(P.size()) : static_cast<int>(P.size()) - 1;
  return ModelSpace(kappa, std::max(dim, 1)).geodesic_point(P, Q, t);
}

HemisphereResult hemisphere_check(double kappa, const std::vector<Vec>& polyline,
                                  int samples_per_edge) {
  if (!(kappa > 0)) throw std::invalid_argument("hemisphere_check: kappa must be positive");
  if (polyline.size() < 2) throw std::invalid_argument("hemisphere_check: need two vertices");
  const int dim = static_cast<int>(polyline[0].size()) - 1;
  ModelSpace M(kappa, dim);
  const double R = M.radius(), w = M.varpi();
  const std::size_t n = polyline.size();
  std::vector<Vec> pts;
  for (const auto& v : polyline) pts.push_back(M.normalize(v));
  std::vector<double> edge(n);
  double L = 0;
  for (std::size_t i = 0; i < n; ++i) L += edge[i] = M.distance(pts[i], pts[(i + 1) % n]);
  if (L > 2 * w * (1 + 1e-12))
    throw std::invalid_argument("hemisphere_check: curve longer than 2*varpi");

  std::vector<Vec> samples;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec& A = pts[i];
    const Vec& B = pts[(i + 1) % n];
    for (int k = 0; k < samples_per_edge; ++k) {
      double t = static_cast<double>(k) / samples_per_edge;
      samples.push_back(edge[i] < w * (1 - 1e-12) ? M.geodesic_point(A, B, t) : A);
    }
  }
  HemisphereResult res;
  auto score = [&](const Vec& c) {
    res.center = c;
    res.margin = kInf;
    for (const auto& s : samples) {
      double v = c.dot(s) / R;
      if (v < res.margin) {
        res.margin = v;
        res.witness = s;
      }
    }
  };

  // Split the curve into two halves of length L/2 starting at the first vertex;
  // the hemisphere centred at the midpoint of the chord works.
  double half = L / 2, acc = 0;
  Vec y = pts[0];
  for (std::size_t i = 0; i < n; ++i) {
    if (acc + edge[i] >= half) {
      double t = edge[i] > 0 ? (half - acc) / edge[i] : 0;
      y = edge[i] < w * (1 - 1e-12) ? M.geodesic_point(pts[i], pts[(i + 1) % n], t) : pts[i];
      break;
    }
    acc += edge[i];
  }
  double xy = M.distance(pts[0], y);
  if (xy < w * (1 - 1e-9)) {
    Vec z = M.geodesic_point(pts[0], y, 0.5);
    score(z / R);
    if (res.margin > 0) {
      res.found = res.closed = true;
      return res;
    }
  }
  // Near the bound the curve is close to a great circle: fall back to the best
  // fitting plane through the origin.
  Mat A(samples.size(), dim + 1);
  for (std::size_t i = 0; i < samples.size(); ++i) A.row(i) = samples[i].transpose() / R;
  Eigen::JacobiSVD<Mat> svd(A, Eigen::ComputeFullV);
  Vec c = svd.matrixV().col(dim);
  if ((A * c).sum() < 0) c = -c;
  score(c);
  res.found = res.margin > 0;
  res.closed = res.margin >= -1e-9;
  return res;
}

}  // namespace curvkit
