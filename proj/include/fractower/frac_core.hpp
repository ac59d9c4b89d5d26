#pragma once

#include <Eigen/Dense>
#include <functional>
#include <utility>
#include <vector>

#include "fractower/params.hpp"
#include "fractower/radial.hpp"

namespace fractower {

// Normalizing constant C(n,s) = 2^{2s} s Gamma((n+2s)/2) / (Gamma(1-s) pi^{n/2}).
double frac_constant(int n, double s);

// |S^{n-1}|
double sphere_area(int n);

// Bubble amplitude alpha_{n,s}, derived so that (-Delta)^s U = U^p holds for
// U = alpha (1+r^2)^{-(n-2s)/2}. Cached per (n,s).
double bubble_alpha(const ModelParams& mp, const QuadratureConfig& cfg);

double bubble_profile(double r, const ModelParams& mp,
                      const QuadratureConfig& cfg);

// Quadrature nodes (d_i, w_i), sum w_i = 1, for the mean of a distance
// profile over the sphere {|y - x| = xi} with |x| = r. Nodes with d outside
// (0, d_clip) are dropped when d_clip > 0 (zero exterior extension).
void sphere_mean_nodes(int n, double r, double xi, int gl_per_panel,
                       double panel_ratio, double d_clip,
                       std::vector<std::pair<double, double>>& nodes);

// How a function behaves outside its sample range when the operator needs it.
struct TailMode {
  enum Kind { power_law, zero_exterior } kind = power_law;
  double exponent = 0.0;
  static TailMode power(double q) { return {power_law, q}; }
  static TailMode zero() { return {zero_exterior, 0.0}; }
};

// (-Delta)^s f at radius r for a radial profile given as a callable with a
// declared power tail beyond r_far. Workhorse behind everything below.
double frac_lap_callable(const std::function<double(double)>& f, double f_at_r,
                         double r, double r_core, double r_far, double tail_q,
                         const ModelParams& mp, const QuadratureConfig& cfg);

// (-Delta)^s f at radius r. Requires f.tail_exponent < 0.
double frac_laplacian_radial(const RadialFunction& f, double r,
                             const ModelParams& mp,
                             const QuadratureConfig& cfg);

struct CheckedValue {
  double value = 0.0;
  bool accuracy_degraded = false;
};
// Same, compared against one refinement; flags disagreement beyond cfg.tol.
CheckedValue frac_laplacian_checked(const RadialFunction& f, double r,
                                    const ModelParams& mp,
                                    const QuadratureConfig& cfg);

// Batch evaluation (data-parallel over targets).
std::vector<double> frac_laplacian_batch(const RadialFunction& f,
                                         const std::vector<double>& rs,
                                         const ModelParams& mp,
                                         const QuadratureConfig& cfg,
                                         bool parallel);

// Dense matrix approximating (-Delta)^s on the given log grid: rows are
// quadrature stencils in the grid values, with the declared tail behavior
// beyond the last node. Row-parallel when `parallel`.
Eigen::MatrixXd frac_lap_matrix(const std::vector<double>& grid,
                                const ModelParams& mp,
                                const QuadratureConfig& cfg, TailMode tail,
                                bool parallel);

// Z_rad = U', Z_np1 = (n-2s)/2 U + r U' sampled with exact tail exponents.
void kernel_elements(const ModelParams& mp, const QuadratureConfig& cfg,
                     RadialFunction& Z_rad, RadialFunction& Z_np1);

// L0 f = -(-Delta)^s f + p U^{p-1} f on f's grid. Flags propagate.
struct AppliedL0 {
  RadialFunction result;
  bool accuracy_degraded = false;
};
AppliedL0 apply_L0(const RadialFunction& f, const ModelParams& mp,
                   const QuadratureConfig& cfg, bool check = false);

// Weighted L2 inner product \int f g r^{n-1} dr over the sample range of f.
double radial_inner(const RadialFunction& f, const RadialFunction& g, int n);

// Solves L0 phi = -h with phi -> 0 at infinity and <phi, Z_np1> = 0, by
// deflating the one-dimensional discrete kernel and solving the bordered
// system (ridge 1e-12). Requires h nearly orthogonal to Z_np1.
RadialFunction solve_L0_orthogonal(const RadialFunction& h,
                                   const ModelParams& mp,
                                   const QuadratureConfig& cfg);

struct Eigenpair {
  double mu0 = 0.0;
  RadialFunction Z0;
};
// Largest eigenvalue of the discretized radial L0 and its eigenfunction,
// normalized to sup Z0 = 1, tail refreshed by one operator application.
Eigenpair eigenpair_unstable(const ModelParams& mp,
                             const QuadratureConfig& cfg);

}  // namespace fractower
