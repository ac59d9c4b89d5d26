#include "fractower/frac_core.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "fractower/parallel.hpp"
#include "fractower/quadrature.hpp"

namespace fractower {

namespace {
bool g_parallel = true;
}

void set_parallel(bool on) { g_parallel = on; }
bool parallel_enabled() { return g_parallel; }

void parallel_for(int n, const std::function<void(int)>& body, bool parallel) {
  if (parallel && g_parallel) {
#pragma omp parallel for schedule(dynamic, 1)
    for (int i = 0; i < n; ++i) body(i);
  } else {
    for (int i = 0; i < n; ++i) body(i);
  }
}

double frac_constant(int n, double s) {
  return std::pow(2.0, 2.0 * s) * s * std::tgamma(0.5 * (n + 2.0 * s)) /
         (std::tgamma(1.0 - s) * std::pow(std::numbers::pi, 0.5 * n));
}

double sphere_area(int n) {
  return 2.0 * std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n);
}

// ---------------------------------------------------------------------------
// Spherical means: nodes (d_i, w_i) with sum w_i = 1 for the average of a
// distance profile over {|y-x| = xi}, |x| = r. The polar integral is taken
// in the chord variable d with weight [(d^2-d_-^2)(d_+^2-d^2)]^{(n-3)/2} d;
// half-integer endpoint powers (even n) are absorbed by d = d_-+u^2 panels.
// ---------------------------------------------------------------------------

namespace {

struct MeanCtx {
  int gl = 8;
  double ratio = 2.0;
  double d_resolve = 1e-4;  // smallest length scale worth resolving
};

void append_weighted(double d, double w, double d_clip,
                     std::vector<std::pair<double, double>>& nodes,
                     double& wsum) {
  wsum += w;  // normalization uses the full sphere measure
  if (d_clip > 0.0 && d >= d_clip) return;
  nodes.emplace_back(d, w);
}

void sphere_mean_nodes_impl(int n, double r, double xi, const MeanCtx& ctx,
                            double d_clip,
                            std::vector<std::pair<double, double>>& nodes) {
  nodes.clear();
  if (r <= 0.0) {
    if (!(d_clip > 0.0) || xi < d_clip) nodes.emplace_back(xi, 1.0);
    return;
  }
  if (n == 1) {
    double w = 0.0;
    append_weighted(std::abs(r - xi), 0.5, d_clip, nodes, w);
    append_weighted(r + xi, 0.5, d_clip, nodes, w);
    for (auto& nd : nodes) nd.second /= 1.0;
    return;
  }
  const double dm = std::abs(r - xi), dp = r + xi;
  const double span = dp - dm;
  const double pw = 0.5 * (n - 3);
  const auto& gx = gauss_legendre_nodes(ctx.gl);
  const auto& gw = gauss_legendre_weights(ctx.gl);

  double wsum = 0.0;
  // endpoint zones, d = dm + u^2 and d = dp - u^2
  const double wl = std::min(0.25 * span, dm);
  const double wr = 0.25 * span;
  if (wl > 0.0) {
    const double ul = std::sqrt(wl);
    for (int i = 0; i < ctx.gl; ++i) {
      const double u = 0.5 * ul * (gx[i] + 1.0);
      const double d = dm + u * u;
      const double w = 0.5 * ul * gw[i] * 2.0 * std::pow(u, n - 2) *
                       std::pow((d + dm) * (dp * dp - d * d), pw) * d;
      append_weighted(d, w, d_clip, nodes, wsum);
    }
  }
  {
    const double ur = std::sqrt(wr);
    for (int i = 0; i < ctx.gl; ++i) {
      const double u = 0.5 * ur * (gx[i] + 1.0);
      const double d = dp - u * u;
      const double w = 0.5 * ur * gw[i] * 2.0 * std::pow(u, n - 2) *
                       std::pow((d * d - dm * dm) * (dp + d), pw) * d;
      append_weighted(d, w, d_clip, nodes, wsum);
    }
  }
  // interior: log panels from a to b
  double a = dm + wl, b = dp - wr;
  if (b > a) {
    auto wfun = [&](double d) {
      return std::pow((d * d - dm * dm) * (dp * dp - d * d), pw) * d;
    };
    double lo = a;
    if (lo <= 0.0 || lo < 1e-300) {
      // xi == r exactly: start with a linear panel up to the resolution floor
      double first = std::min(b, std::max(ctx.d_resolve, b * 1e-8));
      for (int i = 0; i < ctx.gl; ++i) {
        const double d = 0.5 * first * (gx[i] + 1.0);
        append_weighted(d, 0.5 * first * gw[i] * wfun(d), d_clip, nodes, wsum);
      }
      lo = first;
    } else if (lo < ctx.d_resolve && b > 4.0 * lo) {
      // keep panel count bounded when the left edge is far below resolution
      double first = std::min(b, ctx.d_resolve);
      for (int i = 0; i < ctx.gl; ++i) {
        const double d = lo + 0.5 * (first - lo) * (gx[i] + 1.0);
        append_weighted(d, 0.5 * (first - lo) * gw[i] * wfun(d), d_clip, nodes,
                        wsum);
      }
      lo = first;
    }
    while (lo < b) {
      double hi = std::min(lo * ctx.ratio, b);
      if (!(hi > lo)) break;
      for (int i = 0; i < ctx.gl; ++i) {
        const double d = lo + 0.5 * (hi - lo) * (gx[i] + 1.0);
        append_weighted(d, 0.5 * (hi - lo) * gw[i] * wfun(d), d_clip, nodes,
                        wsum);
      }
      lo = hi;
    }
  }
  if (wsum <= 0.0) {
    nodes.clear();
    return;
  }
  for (auto& nd : nodes) nd.second /= wsum;
}

}  // namespace

void sphere_mean_nodes(int n, double r, double xi, int gl_per_panel,
                       double panel_ratio, double d_clip,
                       std::vector<std::pair<double, double>>& nodes) {
  MeanCtx ctx;
  ctx.gl = gl_per_panel;
  ctx.ratio = panel_ratio;
  ctx.d_resolve = 1e-4;
  sphere_mean_nodes_impl(n, r, xi, ctx, d_clip, nodes);
}

// ---------------------------------------------------------------------------
// The operator core: (-Delta)^s f (r) = C(n,s) |S^{n-1}| *
//   [ sum_i c_i (f(r) - A(r, xi_i)) + tail closure ],
// where the xi list covers (xi_floor, Xi] with log panels and two Richardson
// nodes that close the symmetrized second-difference integral below
// xi_floor (the integrand there is c2 xi^2 + c4 xi^4 to working accuracy).
// ---------------------------------------------------------------------------

namespace {

struct XiNode {
  double xi;
  double coeff;
};

struct OperatorPlan {
  std::vector<XiNode> nodes;
  double Xi = 0.0;           // truncation of the xi integral
  double diag_tail = 0.0;    // coefficient of f(r) from the tail
  double last_col_tail = 0.0;  // coefficient of f(r_far) (power tails)
  MeanCtx mean;
};

struct PlanKnobs {
  int gl_xi = 8;
  int gl_d = 8;
  double ratio = 2.0;
  double d_resolve = 1e-4;
};

PlanKnobs knobs_from(const QuadratureConfig& cfg, double grid_rmin) {
  PlanKnobs k;
  const double dens = cfg.n_angular / 48.0;
  k.gl_d = std::clamp(static_cast<int>(std::lround(8 * dens)), 6, 48);
  k.gl_xi = k.gl_d;
  k.ratio = std::pow(2.0, 1.0 / std::max(1.0, dens));
  k.d_resolve = grid_rmin;
  return k;
}

OperatorPlan make_plan(double r, double r_core, double r_far, TailMode tail,
                       const ModelParams& mp, const QuadratureConfig& cfg,
                       double grid_rmin) {
  const double s = mp.s;
  const PlanKnobs kn = knobs_from(cfg, grid_rmin);
  OperatorPlan plan;
  plan.mean.gl = kn.gl_d;
  plan.mean.ratio = kn.ratio;
  plan.mean.d_resolve = kn.d_resolve;

  const double xi0 = cfg.pv_split * std::max(r, r_core);
  const double xia = 1e-2 * xi0;
  double Xi;
  if (tail.kind == TailMode::zero_exterior) {
    Xi = r + r_far;  // beyond this every chord leaves the support
  } else {
    Xi = 4.0 * (r + r_far);
  }
  plan.Xi = Xi;

  // Richardson closure of (0, xia]
  {
    const double a = xia;
    const double c1 = -1.0 / (3.0 * (2.0 - 2.0 * s)) + 4.0 / (3.0 * (4.0 - 2.0 * s));
    const double c2 = 16.0 / (3.0 * (2.0 - 2.0 * s)) - 16.0 / (3.0 * (4.0 - 2.0 * s));
    const double aw = std::pow(a, -2.0 * s);
    plan.nodes.push_back({a, aw * c1});
    plan.nodes.push_back({0.5 * a, aw * c2});
  }
  // Panel boundaries: geometric base chain, plus a two-sided ladder around
  // xi = r. The sphere mean develops features of every length scale carried
  // by f exactly when |xi - r| matches that scale (the shell sweeps the
  // core), so the ladder descends to the grid's resolution floor.
  std::vector<double> bounds;
  for (double lo = xia; lo < Xi; lo *= kn.ratio) bounds.push_back(lo);
  bounds.push_back(Xi);
  if (r > 0.0) {
    const double dmin = std::max(4.0 * grid_rmin, 1e-7 * r);
    for (double d = 0.5 * r; d > dmin; d /= kn.ratio) {
      if (r - d > xia) bounds.push_back(r - d);
      if (r + d < Xi) bounds.push_back(r + d);
    }
    if (r > xia && r < Xi) bounds.push_back(r);
  }
  if (tail.kind == TailMode::zero_exterior) {
    for (double b : {r_far - r, r_far + r})
      if (b > xia && b < Xi) bounds.push_back(b);
  }
  std::sort(bounds.begin(), bounds.end());
  bounds.erase(std::unique(bounds.begin(), bounds.end(),
                           [](double a, double b) {
                             return std::abs(a - b) <= 1e-12 * std::abs(b);
                           }),
               bounds.end());
  const auto& gx = gauss_legendre_nodes(kn.gl_xi);
  const auto& gw = gauss_legendre_weights(kn.gl_xi);
  for (size_t bi = 0; bi + 1 < bounds.size(); ++bi) {
    const double lo = bounds[bi], hi = bounds[bi + 1];
    if (!(hi > lo)) continue;
    for (int i = 0; i < kn.gl_xi; ++i) {
      const double xi = lo + 0.5 * (hi - lo) * (gx[i] + 1.0);
      const double w = 0.5 * (hi - lo) * gw[i];
      plan.nodes.push_back({xi, w * std::pow(xi, -1.0 - 2.0 * s)});
    }
  }
  // tail closure
  plan.diag_tail = std::pow(Xi, -2.0 * s) / (2.0 * s);
  if (tail.kind == TailMode::power_law) {
    const double q = tail.exponent;
    const double corr = q * (q + mp.n - 2.0) / (2.0 * mp.n) * r * r;
    plan.last_col_tail =
        std::pow(r_far, -q) * (std::pow(Xi, q - 2.0 * s) / (2.0 * s - q) +
                               corr * std::pow(Xi, q - 2.0 * s - 2.0) /
                                   (2.0 * s - q + 2.0));
  }
  return plan;
}

}  // namespace

double frac_lap_callable(const std::function<double(double)>& f, double f_at_r,
                         double r, double r_core, double r_far, double tail_q,
                         const ModelParams& mp, const QuadratureConfig& cfg) {
  OperatorPlan plan = make_plan(r, r_core, r_far, TailMode::power(tail_q), mp,
                                cfg, std::min(r_core, 1e-4));
  std::vector<std::pair<double, double>> mean_nodes;
  double acc = 0.0;
  for (const XiNode& nd : plan.nodes) {
    sphere_mean_nodes_impl(mp.n, r, nd.xi, plan.mean, 0.0, mean_nodes);
    double a = 0.0;
    for (const auto& m : mean_nodes) a += m.second * f(m.first);
    acc += nd.coeff * (f_at_r - a);
  }
  acc += f_at_r * plan.diag_tail - f(r_far) * plan.last_col_tail;
  return frac_constant(mp.n, mp.s) * sphere_area(mp.n) * acc;
}

double frac_laplacian_radial(const RadialFunction& f, double r,
                             const ModelParams& mp,
                             const QuadratureConfig& cfg) {
  if (!(f.tail_exponent < 0.0))
    throw ValidationError(
        "frac_laplacian_radial: tail_exponent must be negative");
  const double r_core = 4.0 * f.radii.front();
  const double r_far = f.radii.back();
  OperatorPlan plan = make_plan(r, r_core, r_far,
                                TailMode::power(f.tail_exponent), mp, cfg,
                                f.radii.front());
  std::vector<std::pair<double, double>> mean_nodes;
  const double f_at_r = f.eval(r);
  double acc = 0.0;
  for (const XiNode& nd : plan.nodes) {
    sphere_mean_nodes_impl(mp.n, r, nd.xi, plan.mean, 0.0, mean_nodes);
    double a = 0.0;
    for (const auto& m : mean_nodes) a += m.second * f.eval(m.first);
    acc += nd.coeff * (f_at_r - a);
  }
  acc += f_at_r * plan.diag_tail - f.values.back() * plan.last_col_tail;
  return frac_constant(mp.n, mp.s) * sphere_area(mp.n) * acc;
}

CheckedValue frac_laplacian_checked(const RadialFunction& f, double r,
                                    const ModelParams& mp,
                                    const QuadratureConfig& cfg) {
  CheckedValue cv;
  cv.value = frac_laplacian_radial(f, r, mp, cfg);
  const double refined = frac_laplacian_radial(f, r, mp, cfg.refined());
  const double scale = std::max({std::abs(cv.value), std::abs(refined), 1e-300});
  cv.accuracy_degraded = std::abs(cv.value - refined) > cfg.tol * scale;
  return cv;
}

std::vector<double> frac_laplacian_batch(const RadialFunction& f,
                                         const std::vector<double>& rs,
                                         const ModelParams& mp,
                                         const QuadratureConfig& cfg,
                                         bool parallel) {
  std::vector<double> out(rs.size());
  gauss_legendre_nodes(knobs_from(cfg, f.radii.front()).gl_d);  // warm cache
  parallel_for(
      static_cast<int>(rs.size()),
      [&](int i) { out[i] = frac_laplacian_radial(f, rs[i], mp, cfg); },
      parallel);
  return out;
}

// ---------------------------------------------------------------------------
// Dense discretization on a log grid. Off-grid chords are scattered onto the
// grid with cubic Lagrange stencils in log r; d below the grid maps to the
// first node (even extension), d beyond follows the declared tail.
// ---------------------------------------------------------------------------

namespace {

struct GridGeom {
  double x0, hx;
  int n;
};

void scatter(const GridGeom& gg, const std::vector<double>& grid, double d,
             double w, TailMode tail, double* row) {
  if (d <= grid.front()) {
    row[0] += w;  // constant extension below the first node
    return;
  }
  if (d >= grid.back()) {
    if (tail.kind == TailMode::power_law)
      row[gg.n - 1] += w * std::pow(d / grid.back(), tail.exponent);
    return;  // zero exterior: drop
  }
  const double u = (std::log(d) - gg.x0) / gg.hx;
  int i1 = static_cast<int>(std::floor(u));
  int st = std::clamp(i1 - 1, 0, gg.n - 4);
  double lw[4];
  for (int a = 0; a < 4; ++a) {
    double num = 1.0, den = 1.0;
    for (int b = 0; b < 4; ++b) {
      if (a == b) continue;
      num *= (u - (st + b));
      den *= (static_cast<double>(a) - b);
    }
    lw[a] = num / den;
  }
  for (int a = 0; a < 4; ++a) row[st + a] += w * lw[a];
}

}  // namespace

Eigen::MatrixXd frac_lap_matrix(const std::vector<double>& grid,
                                const ModelParams& mp,
                                const QuadratureConfig& cfg, TailMode tail,
                                bool parallel) {
  const int N = static_cast<int>(grid.size());
  if (N < 8) throw ValidationError("frac_lap_matrix: grid too small");
  GridGeom gg;
  gg.x0 = std::log(grid.front());
  gg.hx = (std::log(grid.back()) - gg.x0) / (N - 1);
  gg.n = N;
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(N, N);
  const double scale = frac_constant(mp.n, mp.s) * sphere_area(mp.n);
  const double r_core = 4.0 * grid.front();
  const double r_far = grid.back();
  gauss_legendre_nodes(knobs_from(cfg, grid.front()).gl_d);  // warm cache

  parallel_for(
      N,
      [&](int i) {
        const double r = grid[i];
        OperatorPlan plan =
            make_plan(r, r_core, r_far, tail, mp, cfg, grid.front());
        std::vector<std::pair<double, double>> mean_nodes;
        double* row = M.data() ? &M(i, 0) : nullptr;
        // Eigen default storage is column-major; accumulate in a local buffer
        std::vector<double> buf(N, 0.0);
        double diag = 0.0;
        const double d_clip =
            tail.kind == TailMode::zero_exterior ? grid.back() : 0.0;
        for (const XiNode& nd : plan.nodes) {
          sphere_mean_nodes_impl(mp.n, r, nd.xi, plan.mean, d_clip, mean_nodes);
          diag += nd.coeff;
          for (const auto& m : mean_nodes)
            scatter(gg, grid, m.first, -nd.coeff * m.second, tail, buf.data());
        }
        diag += plan.diag_tail;
        buf[N - 1] -= plan.last_col_tail;
        buf[i] += diag;
        (void)row;
        for (int j = 0; j < N; ++j) M(i, j) = scale * buf[j];
      },
      parallel);
  return M;
}

// ---------------------------------------------------------------------------
// Bubble profile and kernel elements
// ---------------------------------------------------------------------------

namespace {

std::mutex alpha_mutex;
std::map<std::pair<int, double>, double>& alpha_cache() {
  static std::map<std::pair<int, double>, double> cache;
  return cache;
}

// kappa = (-Delta)^s W at 0 for W = (1+r^2)^{-(n-2s)/2}; reduces to a 1-D
// integral since the spherical mean at the origin is W itself.
double bubble_kappa(const ModelParams& mp) {
  const double s = mp.s, m = mp.half_n2s();
  auto diff = [m](double xi) {  // W(0) - W(xi), evaluated stably for small xi
    const double z = xi * xi;
    if (z < 1e-8) return m * z * (1.0 - 0.5 * (m + 1.0) * z);
    return 1.0 - std::pow(1.0 + z, -m);
  };
  const double a = 1e-6, Xi = 1e8;
  // below a: diff ~ m xi^2 (1 - (m+1)/2 xi^2)
  double I0 = m * std::pow(a, 2.0 - 2.0 * s) / (2.0 - 2.0 * s) -
              0.5 * m * (m + 1.0) * std::pow(a, 4.0 - 2.0 * s) / (4.0 - 2.0 * s);
  auto integrand = [&](double xi) {
    return diff(xi) * std::pow(xi, -1.0 - 2.0 * s);
  };
  double I = integrate_panels(integrand, a, Xi, 1.5, 16);
  // beyond Xi: 1 - W ~ 1 - xi^{-2m}
  double T = std::pow(Xi, -2.0 * s) / (2.0 * s) -
             std::pow(Xi, -2.0 * m - 2.0 * s) / (2.0 * m + 2.0 * s);
  return frac_constant(mp.n, mp.s) * sphere_area(mp.n) * (I0 + I + T);
}

}  // namespace

double bubble_alpha(const ModelParams& mp, const QuadratureConfig&) {
  std::lock_guard<std::mutex> lock(alpha_mutex);
  auto key = std::make_pair(mp.n, mp.s);
  auto it = alpha_cache().find(key);
  if (it != alpha_cache().end()) return it->second;
  const double kappa = bubble_kappa(mp);
  const double alpha = std::pow(kappa, mp.n2s() / (4.0 * mp.s));
  alpha_cache().emplace(key, alpha);
  return alpha;
}

double bubble_profile(double r, const ModelParams& mp,
                      const QuadratureConfig& cfg) {
  const double alpha = bubble_alpha(mp, cfg);
  return alpha * std::pow(1.0 + r * r, -mp.half_n2s());
}

void kernel_elements(const ModelParams& mp, const QuadratureConfig& cfg,
                     RadialFunction& Z_rad, RadialFunction& Z_np1) {
  const double alpha = bubble_alpha(mp, cfg);
  const double m = mp.half_n2s();
  auto uprime = [alpha, m](double r) {
    return -2.0 * m * alpha * r * std::pow(1.0 + r * r, -m - 1.0);
  };
  auto znp1 = [alpha, m](double r) {
    return m * alpha * (1.0 - r * r) * std::pow(1.0 + r * r, -m - 1.0);
  };
  Z_rad = sample_radial(uprime, 1e-4, cfg.r_trunc, cfg.n_radial,
                        -(mp.n2s() + 1.0), 0.0);
  Z_np1 = sample_radial(znp1, 1e-4, cfg.r_trunc, cfg.n_radial, -mp.n2s(),
                        m * alpha);
  Z_rad.n = Z_np1.n = mp.n;
  Z_rad.s = Z_np1.s = mp.s;
}

AppliedL0 apply_L0(const RadialFunction& f, const ModelParams& mp,
                   const QuadratureConfig& cfg, bool check) {
  AppliedL0 out;
  RadialFunction g;
  g.radii = f.radii;
  g.values.resize(f.radii.size());
  g.n = mp.n;
  g.s = mp.s;
  std::vector<double> lap =
      frac_laplacian_batch(f, f.radii, mp, cfg, parallel_enabled());
  const double alpha = bubble_alpha(mp, cfg);
  for (size_t i = 0; i < f.radii.size(); ++i) {
    const double r = f.radii[i];
    const double U = alpha * std::pow(1.0 + r * r, -mp.half_n2s());
    g.values[i] = -lap[i] + mp.p * std::pow(U, mp.p - 1.0) * f.values[i];
  }
  // tail exponent from the last decade (fallback: f tail shifted by -2s)
  double qout = f.tail_exponent - 2.0 * mp.s;
  {
    std::vector<double> xs, ys;
    const double rend = f.radii.back();
    for (size_t i = 0; i < f.radii.size(); ++i) {
      if (f.radii[i] >= 0.1 * rend && std::abs(g.values[i]) > 0.0) {
        xs.push_back(std::log(f.radii[i]));
        ys.push_back(std::log(std::abs(g.values[i])));
      }
    }
    if (xs.size() >= 8) {
      LineFit lf = fit_line(xs, ys);
      if (lf.r2 > 0.98) qout = lf.slope;
    }
  }
  g.tail_exponent = qout;
  g.value_at_zero = g.values.front();
  g.build_interpolant();
  out.result = std::move(g);
  if (check) {
    CheckedValue cv = frac_laplacian_checked(f, f.radii[f.radii.size() / 2],
                                             mp, cfg);
    out.accuracy_degraded = cv.accuracy_degraded;
  }
  return out;
}

double radial_inner(const RadialFunction& f, const RadialFunction& g, int n) {
  auto prod = [&](double r) { return f.eval(r) * g.eval(r); };
  const double r1 = std::min(f.radii.back(), g.radii.back());
  double I = integrate_radial(prod, n, std::min(f.radii.front(), g.radii.front()),
                              r1, 1.5, 12);
  const double q = f.tail_exponent + g.tail_exponent;
  if (q + n < 0.0) I += radial_tail(f.eval(r1) * g.eval(r1), r1, q, n);
  return I;
}

RadialFunction solve_L0_orthogonal(const RadialFunction& h,
                                   const ModelParams& mp,
                                   const QuadratureConfig& cfg) {
  if (!(h.tail_exponent < -2.0 * mp.s))
    throw ValidationError("solve_L0_orthogonal: h must decay faster than r^-2s");
  RadialFunction Z_rad, Z_np1;
  kernel_elements(mp, cfg, Z_rad, Z_np1);
  const double hz = radial_inner(h, Z_np1, mp.n);
  const double hn = std::sqrt(radial_inner(h, h, mp.n));
  const double zn = std::sqrt(radial_inner(Z_np1, Z_np1, mp.n));
  if (std::abs(hz) > 1e-6 * hn * zn)
    throw OrthogonalityViolated("solve_L0_orthogonal: <h, Z_{n+1}> != 0");

  const std::vector<double>& grid = h.radii;
  const int N = static_cast<int>(grid.size());
  Eigen::MatrixXd lap = frac_lap_matrix(grid, mp, cfg,
                                        TailMode::power(-2.0 * mp.s),
                                        parallel_enabled());
  Eigen::MatrixXd A = -lap;
  const double alpha = bubble_alpha(mp, cfg);
  for (int i = 0; i < N; ++i) {
    const double U = alpha * std::pow(1.0 + grid[i] * grid[i], -mp.half_n2s());
    A(i, i) += mp.p * std::pow(U, mp.p - 1.0) + 1e-12;
  }
  // bordered system enforcing <phi, Z_{n+1}>_w = 0
  const double hx = (std::log(grid.back()) - std::log(grid.front())) / (N - 1);
  Eigen::VectorXd wz(N);
  for (int i = 0; i < N; ++i)
    wz(i) = Z_np1.eval(grid[i]) * std::pow(grid[i], mp.n) * hx;
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(N + 1, N + 1);
  B.topLeftCorner(N, N) = A;
  B.block(0, N, N, 1) = wz;
  B.block(N, 0, 1, N) = wz.transpose();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(N + 1);
  for (int i = 0; i < N; ++i) rhs(i) = -h.values[i];
  // row equilibration before factorization (row scales span ~r^{-2s})
  Eigen::VectorXd rscale(N + 1);
  for (int i = 0; i <= N; ++i) {
    const double mx = B.row(i).cwiseAbs().maxCoeff();
    rscale(i) = mx > 0.0 ? 1.0 / mx : 1.0;
  }
  Eigen::MatrixXd Beq = rscale.asDiagonal() * B;
  Eigen::VectorXd rhseq = rscale.asDiagonal() * rhs;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(Beq);
  Eigen::VectorXd sol = lu.solve(rhseq);
  const double resid = (Beq * sol - rhseq).norm();
  const double rhsn = rhseq.norm();
  if (!sol.allFinite() || (rhsn > 0.0 && resid > 1e-6 * rhsn))
    throw SingularSystem("solve_L0_orthogonal: deflated system ill-conditioned");
  RadialFunction phi;
  phi.radii = grid;
  phi.values.assign(sol.data(), sol.data() + N);
  phi.tail_exponent = -2.0 * mp.s;
  phi.value_at_zero = phi.values.front();
  phi.n = mp.n;
  phi.s = mp.s;
  phi.build_interpolant();
  return phi;
}

namespace {

Eigen::MatrixXd discrete_L0(const std::vector<double>& grid,
                            const ModelParams& mp, const QuadratureConfig& cfg,
                            double tail_q) {
  Eigen::MatrixXd M =
      -frac_lap_matrix(grid, mp, cfg, TailMode::power(tail_q), parallel_enabled());
  const double alpha = bubble_alpha(mp, cfg);
  for (int i = 0; i < static_cast<int>(grid.size()); ++i) {
    const double U = alpha * std::pow(1.0 + grid[i] * grid[i], -mp.half_n2s());
    M(i, i) += mp.p * std::pow(U, mp.p - 1.0);
  }
  return M;
}

}  // namespace

Eigenpair eigenpair_unstable(const ModelParams& mp,
                             const QuadratureConfig& cfg) {
  const double q0 = -(mp.n + 2.0 * mp.s);
  // stage 1: coarse full spectrum locates mu0
  const int Nc = std::min(cfg.n_radial, 384);
  std::vector<double> coarse = log_grid(1e-3, cfg.r_trunc, Nc);
  Eigen::MatrixXd Mc = discrete_L0(coarse, mp, cfg, q0);
  Eigen::EigenSolver<Eigen::MatrixXd> esc(Mc);
  double mu_est = -1.0;
  for (int i = 0; i < Nc; ++i) {
    const auto ev = esc.eigenvalues()(i);
    if (std::abs(ev.imag()) < 1e-8 * std::max(1.0, std::abs(ev.real())) &&
        ev.real() > mu_est)
      mu_est = ev.real();
  }
  if (!(mu_est > 0.0))
    throw NoPositiveEigenvalue("eigenpair_unstable: no positive eigenvalue");
  // stage 2: shifted inverse power iteration on the operating grid
  const int Ne = std::min(cfg.n_radial, 1024);
  std::vector<double> grid = log_grid(1e-4, cfg.r_trunc, Ne);
  Eigen::MatrixXd M = discrete_L0(grid, mp, cfg, q0);
  double mu0 = mu_est;
  Eigen::VectorXd v(Ne);
  for (int i = 0; i < Ne; ++i)
    v(i) = std::pow(1.0 + grid[i] * grid[i], -0.5 * (mp.n + 2.0 * mp.s));
  v.normalize();
  Eigen::VectorXd wq(Ne);  // log-grid measure r^n dx for Rayleigh quotients
  const double hx = (std::log(grid.back()) - std::log(grid.front())) / (Ne - 1);
  for (int i = 0; i < Ne; ++i) wq(i) = std::pow(grid[i], mp.n) * hx;
  double shift = mu_est;
  for (int it = 0; it < 30; ++it) {
    Eigen::MatrixXd A = M;
    A.diagonal().array() -= shift;
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);
    Eigen::VectorXd w = lu.solve(v);
    if (!w.allFinite()) break;
    w.normalize();
    if (w.dot(v) < 0.0) w = -w;
    const Eigen::VectorXd Mw = M * w;
    const double rq = (w.array() * wq.array() * Mw.array()).sum() /
                      (w.array() * wq.array() * w.array()).sum();
    const double change = std::abs(rq - mu0);
    v = w;
    mu0 = rq;
    if (change < 1e-12 * std::max(1.0, std::abs(mu0))) break;
    shift = rq;
  }
  if (!(mu0 > 0.0))
    throw NoPositiveEigenvalue("eigenpair_unstable: iteration left mu0 <= 0");
  RadialFunction z0;
  z0.radii = grid;
  z0.values.assign(v.data(), v.data() + Ne);
  // orient positive at the core
  double peak = 0.0;
  for (double val : z0.values)
    if (std::abs(val) > std::abs(peak)) peak = val;
  const double sgn = peak >= 0.0 ? 1.0 : -1.0;
  for (double& val : z0.values) val *= sgn;
  z0.tail_exponent = q0;
  z0.value_at_zero = z0.values.front();
  z0.build_interpolant();
  // one application of L0 restores the far field lost to eigensolver noise
  std::vector<double> lz =
      frac_laplacian_batch(z0, grid, mp, cfg, parallel_enabled());
  const double alpha = bubble_alpha(mp, cfg);
  RadialFunction z1;
  z1.radii = grid;
  z1.values.resize(Ne);
  for (int i = 0; i < Ne; ++i) {
    const double U = alpha * std::pow(1.0 + grid[i] * grid[i], -mp.half_n2s());
    z1.values[i] =
        (-lz[i] + mp.p * std::pow(U, mp.p - 1.0) * z0.values[i]) / mu0;
  }
  double sup = 0.0;
  for (double val : z1.values) sup = std::max(sup, std::abs(val));
  for (double& val : z1.values) val /= sup;
  z1.tail_exponent = q0;
  z1.value_at_zero = z1.values.front();
  z1.n = mp.n;
  z1.s = mp.s;
  z1.build_interpolant();
  Eigenpair ep;
  ep.mu0 = mu0;
  ep.Z0 = std::move(z1);
  return ep;
}

}  // namespace fractower
