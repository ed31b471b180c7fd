// Sturm's matrix inequality and the (1+n)-point comparison.
#include "curvkit/comparison.hpp"

#include <Eigen/Eigenvalues>

namespace curvkit {

Mat decrypting_matrix(const FiniteMetric& M, int p, const std::vector<int>& xs) {
  const int n = static_cast<int>(xs.size());
  Mat m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double a = M(xs[i], p), b = M(xs[j], p), c = M(xs[i], xs[j]);
      m(i, j) = 0.5 * (a * a + b * b - c * c);
    }
  return m;
}

namespace {

// Euclidean projection onto the standard simplex.
Vec project_simplex(const Vec& v) {
  const int n = static_cast<int>(v.size());
  std::vector<double> u(v.data(), v.data() + n);
  std::sort(u.begin(), u.end(), std::greater<>());
  double css = 0, theta = 0;
  for (int k = 0; k < n; ++k) {
    css += u[k];
    double t = (css - 1) / (k + 1);
    if (u[k] - t > 0) theta = t;
  }
  return (v.array() - theta).max(0.0).matrix();
}

// Stationary point of s'As on the relative interior of the face spanned by `sup`.
void try_support(const Mat& A, const std::vector<int>& sup, CopositiveResult& best) {
  const int k = static_cast<int>(sup.size());
  Mat K = Mat::Zero(k + 1, k + 1);
  Vec rhs = Vec::Zero(k + 1);
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) K(i, j) = A(sup[i], sup[j]);
    K(i, k) = -1;
    K(k, i) = 1;
  }
  rhs(k) = 1;
  Eigen::FullPivLU<Mat> lu(K);
  // Singular faces are skipped: the objective is constant along the kernel,
  // so the same value is attained on a smaller face.
  if (!lu.isInvertible()) return;
  Vec sol = lu.solve(rhs);
  for (int i = 0; i < k; ++i)
    if (sol(i) < -1e-13) return;
  Vec s = Vec::Zero(A.rows());
  for (int i = 0; i < k; ++i) s(sup[i]) = std::max(0.0, sol(i));
  s /= s.sum();
  double val = s.dot(A * s);
  if (val < best.min_value) {
    best.min_value = val;
    best.argmin = s;
  }
}

void enumerate_supports(const Mat& A, int max_size, CopositiveResult& r) {
  const int n = static_cast<int>(A.rows());
  std::vector<int> sup;
  // iterate over subsets in increasing bitmask order for determinism
  if (n <= 20) {
    for (unsigned mask = 1; mask < (1u << n); ++mask) {
      if (__builtin_popcount(mask) > max_size) continue;
      sup.clear();
      for (int i = 0; i < n; ++i)
        if (mask & (1u << i)) sup.push_back(i);
      try_support(A, sup, r);
    }
  } else {
    for (int i = 0; i < n; ++i) try_support(A, {i}, r);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) try_support(A, {i, j}, r);
  }
}

}  // namespace

CopositiveResult copositive_min(const Mat& A, std::uint64_t seed, int starts) {
  const int n = static_cast<int>(A.rows());
  if (n == 0 || A.cols() != n) throw std::invalid_argument("copositive_min: square nonempty matrix required");
  Mat S = 0.5 * (A + A.transpose());
  CopositiveResult r;
  if (n <= 4) {
    enumerate_supports(S, n, r);
    return r;
  }
  r.exact = false;
  enumerate_supports(S, 4, r);
  Rng rng(seed);
  Eigen::SelfAdjointEigenSolver<Mat> es(S, Eigen::EigenvaluesOnly);
  const double L = 2 * std::max(1e-12, es.eigenvalues().cwiseAbs().maxCoeff());
  for (int st = 0; st < starts; ++st) {
    Vec s(n);
    for (int i = 0; i < n; ++i) s(i) = -std::log(std::max(1e-300, rng.uniform()));
    s /= s.sum();
    double f = s.dot(S * s);
    for (int it = 0; it < 150; ++it) {
      Vec nx = project_simplex(s - (1.0 / L) * (S * s));
      double step = (nx - s).norm();
      s = nx;
      f = s.dot(S * s);
      if (step < 1e-10) break;
    }
    if (f < r.min_value) {
      r.min_value = f;
      r.argmin = s;
    }
    // polish on the face the iterate settled on
    std::vector<int> sup;
    for (int i = 0; i < n; ++i)
      if (s(i) > 1e-9) sup.push_back(i);
    try_support(S, sup, r);
  }
  return r;
}

Verdict sturm_test(const FiniteMetric& M, int p, const std::vector<int>& xs, double tol,
                   std::uint64_t seed) {
  if (xs.empty()) throw std::invalid_argument("sturm_test: need at least one point");
  Mat m = decrypting_matrix(M, p, xs);
  CopositiveResult c = copositive_min(m, seed);
  Verdict v;
  v.test = "sturm";
  v.tolerance = tol * (1 + m.cwiseAbs().maxCoeff());
  v.checked = 1;
  v.margin = c.min_value;
  v.heuristic = !c.exact;
  v.certificate.assign(c.argmin.data(), c.argmin.data() + c.argmin.size());
  v.witness.indices = xs;
  v.witness.indices.insert(v.witness.indices.begin(), p);
  v.witness.note = "certificate is the minimizing simplex point s";
  v.settle();
  return v;
}

namespace {

Mat psd_part(const Mat& X, double* min_eig = nullptr) {
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (X + X.transpose()));
  if (min_eig) *min_eig = es.eigenvalues().minCoeff();
  Vec l = es.eigenvalues().cwiseMax(0.0);
  return es.eigenvectors() * l.asDiagonal() * es.eigenvectors().transpose();
}

Mat box_part(const Mat& X, const Mat& C) {
  Mat Y = X.cwiseMin(C);
  Y.diagonal().setOnes();
  return Y;
}

double box_violation(const Mat& G, const Mat& C) {
  double v = 0;
  for (int i = 0; i < G.rows(); ++i) {
    v = std::max(v, std::abs(G(i, i) - 1));
    for (int j = 0; j < G.cols(); ++j)
      if (i != j) v = std::max(v, G(i, j) - C(i, j));
  }
  return v;
}

Mat unit_diagonal(const Mat& X) {
  Vec d = X.diagonal().cwiseMax(1e-300).cwiseSqrt().cwiseInverse();
  return d.asDiagonal() * X * d.asDiagonal();
}

// value of the dual functional for a candidate W: tr W + sum_{i!=j} W_ij C_ij,
// once the off-diagonal is made nonnegative and W shifted to be PSD.
bool dual_candidate(Mat W, const Mat& C, GramFeasibility& out) {
  const int n = static_cast<int>(C.rows());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) W(i, j) = std::max(0.0, 0.5 * (W(i, j) + W(j, i)));
  Eigen::SelfAdjointEigenSolver<Mat> es(W);
  double mu = std::max(0.0, -es.eigenvalues().minCoeff()) * (1 + 1e-12) + 1e-15;
  W.diagonal().array() += mu;
  double value = W.trace();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) value += W(i, j) * C(i, j);
  double scale = W.trace();
  if (!(scale > 0) || !(value < -1e-10 * scale)) return false;
  double normalized = value / scale;
  if (out.dual.size() == 0 || normalized < out.dual_value) {
    out.dual = W;
    out.dual_value = normalized;
  }
  return true;
}

}  // namespace

GramFeasibility gram_feasibility(const Mat& C, int max_iter) {
  if (C.rows() != C.cols()) throw std::invalid_argument("gram_feasibility: square matrix required");
  const int n = static_cast<int>(C.rows());
  GramFeasibility r;
  if (n == 0) throw std::invalid_argument("gram_feasibility: empty matrix");
  double lmin = 0;
  Mat Cp = psd_part(C, &lmin);
  if (lmin >= -1e-13) {
    r.status = "feasible";
    r.gram = C;
    r.residual = 0;
    return r;
  }
  // sign certificate from copositivity of C itself
  CopositiveResult cop = copositive_min(C);
  if (cop.min_value < -1e-10) {
    const Vec& s = cop.argmin;
    if (dual_candidate(s * s.transpose(), C, r)) {
      r.status = "infeasible";
      return r;
    }
  }
  Mat X = C, P = Mat::Zero(n, n), Q = Mat::Zero(n, n), Y = C;
  for (int it = 1; it <= max_iter; ++it) {
    r.iterations = it;
    Mat Yn = box_part(X + P, C);
    P = X + P - Yn;
    Y = Yn;
    Mat Xn = psd_part(Y + Q);
    Q = Y + Q - Xn;
    X = Xn;
    if (it % 10 == 0 || it == max_iter) {
      Mat G = unit_diagonal(X);
      double viol = box_violation(G, C);
      r.residual = viol;
      if (viol < 1e-7) {
        r.status = "feasible";
        r.gram = G;
        return r;
      }
      if ((X - Y).norm() < 1e-14) break;
    }
  }
  // Dykstra stalls on thin feasible sets; polish a factorization G = V V'
  // with unit rows by projected gradient on the violated entries
  {
    Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (X + X.transpose()));
    Mat V = es.eigenvectors() * es.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal();
    for (int i = 0; i < n; ++i) {
      double nr = V.row(i).norm();
      if (nr < 1e-12) {
        V.row(i).setZero();
        V(i, i % n) = 1;
      } else {
        V.row(i) /= nr;
      }
    }
    auto penalty = [&](const Mat& W, Mat* grad) {
      Mat G = W * W.transpose();
      double f = 0;
      if (grad) grad->setZero(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          if (i == j) continue;
          double e = G(i, j) - C(i, j);
          if (e <= 0) continue;
          f += 0.5 * e * e;
          if (grad) grad->row(i) += 2 * e * W.row(j);
        }
      return f;
    };
    Mat grad;
    double f = penalty(V, &grad), eta = 1;
    for (int it = 0; it < 20000 && f > 0; ++it) {
      for (int i = 0; i < n; ++i) grad.row(i) -= grad.row(i).dot(V.row(i)) * V.row(i);
      if (grad.norm() < 1e-15) break;
      bool moved = false;
      for (int ls = 0; ls < 50; ++ls, eta *= 0.5) {
        Mat Vn = V - eta * grad;
        for (int i = 0; i < n; ++i) Vn.row(i).normalize();
        double fn = penalty(Vn, nullptr);
        if (fn < f) {
          V = Vn;
          f = penalty(V, &grad);
          eta *= 4;
          moved = true;
          break;
        }
      }
      if (!moved) break;
      if ((it & 31) == 0) {
        Mat G = V * V.transpose();
        G.diagonal().setOnes();
        if (box_violation(G, C) < 1e-9) break;
      }
    }
    Mat G = V * V.transpose();
    G.diagonal().setOnes();
    double viol = box_violation(G, C);
    if (viol < r.residual) r.residual = viol;
    if (viol < 1e-7) {
      r.status = "feasible";
      r.gram = G;
      r.dual.resize(0, 0);
      return r;
    }
  }
  // plain alternating projections sharpen the gap direction
  Mat Xa = X, Ya = Y;
  for (int it = 0; it < 500; ++it) {
    Ya = box_part(Xa, C);
    Xa = psd_part(Ya);
  }
  dual_candidate(Ya - Xa, C, r);
  dual_candidate(Xa - Ya, C, r);
  r.status = r.dual.size() ? "infeasible" : "inconclusive";
  return r;
}

Verdict one_plus_n_test(const FiniteMetric& M, int p, const std::vector<int>& xs, double kappa,
                        double tol) {
  const int n = static_cast<int>(xs.size());
  if (n == 0) throw std::invalid_argument("one_plus_n_test: need at least one point");
  Verdict v;
  v.test = "one-plus-n";
  v.kappa = kappa;
  v.tolerance = tol;
  v.checked = 1;
  v.witness.indices = xs;
  v.witness.indices.insert(v.witness.indices.begin(), p);
  const double w = varpi(kappa);
  for (int i : xs)
    if (kappa > 0 && !(M(p, i) < w / 2))
      throw std::invalid_argument("one_plus_n_test: |p x_i| must be below varpi/2");
  Mat C = Mat::Identity(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      auto t = model_angle(kappa, M(xs[i], xs[j]), M(p, xs[i]), M(p, xs[j]));
      if (!t) {
        v.vacuous = true;
        v.vacuous_count = 1;
        v.note = "undefined model angle";
        v.settle();
        return v;
      }
      C(i, j) = C(j, i) = std::cos(*t);
    }
  if (n == 1) {
    v.margin = 0;
    v.note = "single direction";
    v.settle();
    return v;
  }
  GramFeasibility g = gram_feasibility(C);
  v.note = g.status;
  if (g.status == "feasible") {
    // realize the array from the factor of G and measure the slack
    Eigen::SelfAdjointEigenSolver<Mat> es(g.gram);
    Mat F = es.eigenvectors() * es.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal();
    ModelSpace S(kappa, n);
    std::vector<Vec> pts(n);
    for (int i = 0; i < n; ++i) {
      Vec u = F.row(i).transpose();
      double nu = u.norm();
      u = nu > 0 ? Vec(u / nu * M(p, xs[i])) : Vec(Vec::Zero(n));
      pts[i] = S.point(u);
    }
    // a residual r in the cosines moves a side by about b c r / side
    double slack = kInf, allow = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        double side = S.distance(pts[i], pts[j]);
        slack = std::min(slack, side - M(xs[i], xs[j]));
        allow = std::max(allow, 2 * M(p, xs[i]) * M(p, xs[j]) * g.residual / std::max(side, 1e-9));
      }
    v.margin = slack;
    v.tolerance = tol + allow;
    for (const auto& P : pts)
      for (int k = 0; k < P.size(); ++k) v.certificate.push_back(P(k));
    v.settle();
    if (!v.pass) {
      v.status = "inconclusive";
      v.note = "factorized array misses the bound";
    }
    return v;
  }
  v.certificate.assign(g.dual.data(), g.dual.data() + g.dual.size());
  if (g.status == "infeasible") {
    v.margin = g.dual_value;
    v.settle();
    v.pass = false;
    v.status = "fail";
    v.witness.note = "certificate is the separating matrix W (row-major)";
  } else {
    v.margin = -g.residual;
    v.settle();
    v.pass = false;
    v.status = "inconclusive";
  }
  v.witness.margin = v.margin;
  return v;
}

GapSearchResult pentagon_gap_search(int trials, double amplitude, std::uint64_t seed) {
  GapSearchResult r;
  Rng rng(seed);
  const double side = 2 * std::sin(kPi / 5), diag = 2 * std::sin(2 * kPi / 5);
  std::vector<int> xs{1, 2, 3, 4, 5};
  for (int t = 0; t < trials; ++t) {
    ++r.tried;
    Mat d = Mat::Zero(6, 6);
    for (int i = 1; i <= 5; ++i) d(0, i) = d(i, 0) = 1;
    for (int i = 0; i < 5; ++i)
      for (int j = i + 1; j < 5; ++j) {
        bool adjacent = j - i == 1 || (i == 0 && j == 4);
        double u = rng.uniform();
        double val = adjacent ? side * (1 + amplitude * u) : diag * (1 - amplitude * u);
        d(i + 1, j + 1) = d(j + 1, i + 1) = val;
      }
    FiniteMetric M;
    try {
      M = validate_metric(d);
    } catch (const MetricViolation&) {
      continue;
    }
    if (!sturm_test(M, 0, xs).pass) continue;
    Verdict o = one_plus_n_test(M, 0, xs, 0);
    if (o.status == "fail") {
      r.found = true;
      r.metric = M;
      return r;
    }
  }
  return r;
}

}  // namespace curvkit
