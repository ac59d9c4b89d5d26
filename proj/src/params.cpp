#include "fractower/params.hpp"

#include <cmath>
#include <sstream>

namespace fractower {

ModelParams make_params(int n, double s, int k, double t0, Direction direction,
                        SmallExponents smalls) {
  std::ostringstream err;
  if (n < 1) throw ValidationError("make_params: n must be a positive integer");
  if (!(s > 0.0 && s < 1.0))
    throw ValidationError("make_params: s must lie in (0,1)");
  if (!(n > 2.0 * s))
    throw ValidationError("make_params: need n > 2s");
  if (k < 1) throw ValidationError("make_params: k must be >= 1");
  if (k >= 2 && !(n > 6.0 * s)) {
    err << "make_params: tower regime with k=" << k << " requires n > 6s ("
        << n << " <= " << 6.0 * s << ")";
    throw ValidationError(err.str());
  }
  if (!(t0 > 1.0)) throw ValidationError("make_params: t0 must exceed 1");

  ModelParams mp;
  mp.n = n;
  mp.s = s;
  mp.p = (n + 2.0 * s) / (n - 2.0 * s);
  mp.k = k;
  mp.t0 = t0;
  mp.direction = direction;
  mp.sigma = smalls.sigma;
  mp.delta = smalls.delta;
  mp.epsilon = smalls.epsilon;
  mp.alpha_w = smalls.alpha_w > 0.0 ? smalls.alpha_w : 0.5 * s;
  mp.a_inner = smalls.a_inner > 0.0 ? smalls.a_inner : 0.5 * (2.0 * s + (n - 2.0 * s));
  mp.nu = smalls.nu;

  if (!(mp.sigma > 0.0 && mp.delta > 0.0 && mp.epsilon > 0.0))
    throw ValidationError("make_params: sigma, delta, epsilon must be positive");
  if (!(mp.delta * (n - 4.0 * s) < mp.sigma)) {
    err << "make_params: need delta*(n-4s) < sigma (" << mp.delta * (n - 4.0 * s)
        << " >= " << mp.sigma << ")";
    throw ValidationError(err.str());
  }
  if (!(mp.alpha_w > 0.0 && mp.alpha_w < s))
    throw ValidationError("make_params: alpha_w must lie in (0, s)");
  if (!(mp.a_inner > 2.0 * s && mp.a_inner < n - 2.0 * s))
    throw ValidationError("make_params: a_inner must lie in (2s, n-2s)");
  if (!(mp.nu > 0.0)) throw ValidationError("make_params: nu must be positive");
  return mp;
}

void validate(const QuadratureConfig& cfg) {
  if (cfg.n_radial < 8 || cfg.n_angular < 8)
    throw ValidationError("QuadratureConfig: counts must be >= 8");
  if (!(cfg.tol > 0.0 && cfg.tol <= 1.0e-2))
    throw ValidationError("QuadratureConfig: tol must lie in (0, 1e-2]");
  if (!(cfg.r_trunc > 0.0 && cfg.pv_split > 0.0 && cfg.time_trunc_factor > 1.0))
    throw ValidationError("QuadratureConfig: invalid geometry fields");
}

}  // namespace fractower
