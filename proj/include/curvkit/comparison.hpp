#pragma once

#include "curvkit/verdict.hpp"

#include <optional>

namespace curvkit {

struct ScanOptions {
  double tol = kVerdictTol;
  int jobs = 1;
  // Threshold searches: explicit bracket ends (NaN keeps the automatic one).
  double kappa_min = kNaN, kappa_max = kNaN;
};

// Model angles at every vertex: angle(p; i, j), NaN where undefined.
class AngleTable {
 public:
  AngleTable(const FiniteMetric& M, double kappa);
  double operator()(int p, int i, int j) const { return a_[(static_cast<std::size_t>(p) * n_ + i) * n_ + j]; }
  int size() const { return n_; }

 private:
  int n_;
  std::vector<double> a_;
};

// Sum of the three model angles at p must not exceed 2*pi.
Verdict cbb_four_point(const FiniteMetric& M, int p, int x1, int x2, int x3, double kappa,
                       double tol = kVerdictTol);
// Angle form of the (2+2) comparison, cross-checked against the segment form
// (min over z on [p1 p2] of |x1 z| + |z x2| compared with |x1 x2|).
Verdict cat_four_point(const FiniteMetric& M, int p1, int p2, int x1, int x2, double kappa,
                       double tol = kVerdictTol);
// Labelled form: some apex sees the other three under angles obeying the
// triangle inequalities (or one of them is undefined).
Verdict cat_quadruple(const FiniteMetric& M, int a, int b, int c, int d, double kappa,
                      double tol = kVerdictTol);

Verdict is_cbb(const FiniteMetric& M, double kappa, const ScanOptions& opt = {});
Verdict is_cat(const FiniteMetric& M, double kappa, const ScanOptions& opt = {});

struct Threshold {
  double value = 0;
  bool sentinel = false;        // no pass anywhere in the bracket (value = -inf / +inf)
  bool over_certified = false;  // passes at the end of the bracket
  double lo = 0, hi = 0;        // final bracket
  int evaluations = 0;
};
Threshold cbb_sup_kappa(const FiniteMetric& M, const ScanOptions& opt = {});
Threshold cat_inf_kappa(const FiniteMetric& M, const ScanOptions& opt = {});

enum class Side { CBB, CAT };

// Compares |pz| with |p~z~| for every interior vertex z of the recovered
// geodesic [xy], z~ being the point of the model side [x~y~] with |x~z~| = |xz|.
// The tolerance grows by the propagated discretization budget of S.
Verdict point_on_side_check(const SampledSpace& S, int x, int y, int p, double kappa, Side side,
                            double tol = kVerdictTol);

struct ThinFat {
  double thin_margin = kInf;  // min |u~v~| - |uv|: >= 0 means kappa-thin
  double fat_margin = kInf;   // min |uv| - |u~v~|: >= 0 means kappa-fat
  Witness thin_witness, fat_witness;
  int pairs = 0;
  double budget = 0;  // discretization allowance for either margin
};
ThinFat thin_fat_triangle(const SampledSpace& S, int x, int y, int z, double kappa,
                          int samples_per_side = 24);

// m_ij = (|x_i p|^2 + |x_j p|^2 - |x_i x_j|^2) / 2
Mat decrypting_matrix(const FiniteMetric& M, int p, const std::vector<int>& xs);

struct CopositiveResult {
  double min_value = kInf;  // min of s'Ms over the standard simplex (or best found)
  Vec argmin;
  bool exact = true;
};
// Exact for n <= 4 (support enumeration with KKT solves), multistart projected
// gradient otherwise.
CopositiveResult copositive_min(const Mat& A, std::uint64_t seed = kDefaultSeed, int starts = 200);

Verdict sturm_test(const FiniteMetric& M, int p, const std::vector<int>& xs, double tol = kVerdictTol,
                   std::uint64_t seed = kDefaultSeed);

struct GramFeasibility {
  std::string status;  // feasible | infeasible | inconclusive
  double residual = kInf;
  Mat gram;            // feasible: certified Gram matrix
  Mat dual;            // infeasible: separating matrix W
  double dual_value = 0;
  int iterations = 0;
};
// PSD G with unit diagonal and G_ij <= C_ij, by Dykstra's alternating projections.
GramFeasibility gram_feasibility(const Mat& C, int max_iter = 20000);

// Model array in Lob^n_kappa: |p~x~_i| = |p x_i|, |x~_i x~_j| >= |x_i x_j|.
Verdict one_plus_n_test(const FiniteMetric& M, int p, const std::vector<int>& xs, double kappa,
                        double tol = kVerdictTol);

Verdict perimeter_bound_check(const FiniteMetric& M, double kappa, double tol = kVerdictTol);

// Model configuration for the chain comparison: x~, y~ and segments [p~i q~i].
struct ChainConfig {
  ModelSpace space{0, 3};
  Vec x, y;
  std::vector<Vec> p, q;
  double xy = 0;  // |xy| in the original space
};
// Checks the distances required of a model configuration of the indexed points.
void validate_chain_config(const ChainConfig& cfg, const FiniteMetric& M, int x, int y,
                           const std::vector<int>& ps, const std::vector<int>& qs, double tol = 1e-9);
// Builds one such configuration in E^3 by successive trilateration;
// throws std::invalid_argument when the tetrahedra do not exist.
ChainConfig chain_config_flat(const FiniteMetric& M, int x, int y, const std::vector<int>& ps,
                              const std::vector<int>& qs);
Verdict two_n_plus_two_check(const ChainConfig& cfg, double tol = kVerdictTol);

struct GapSearchResult {
  bool found = false;
  FiniteMetric metric;  // centre is index 0
  int tried = 0;
};
// Random perturbations of the regular pentagon with its centre, looking for
// a 6-point metric that passes sturm_test but fails one_plus_n_test.
GapSearchResult pentagon_gap_search(int trials, double amplitude, std::uint64_t seed);

}  // namespace curvkit
