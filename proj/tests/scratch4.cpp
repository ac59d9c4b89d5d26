#include <chrono>
#include <cmath>
#include <cstdio>
#include "fractower/frac_core.hpp"
#include "fractower/radial.hpp"
#include "fractower/quadrature.hpp"
using namespace fractower;
int main() {
  for (auto [n, s] : {std::pair<int,double>{3,0.4},{4,0.5},{7,0.9}}) {
    ModelParams mp = make_params(n, s, 1, 1e3);
    QuadratureConfig cfg;
    cfg.n_radial = 1024;
    RadialFunction Z_rad, Z_np1;
    kernel_elements(mp, cfg, Z_rad, Z_np1);
    // quadrature path: L0 Z_{n+1} should vanish
    auto t0 = std::chrono::steady_clock::now();
    AppliedL0 lz = apply_L0(Z_np1, mp, cfg);
    double supz = 0, supref = 0;
    double alpha = bubble_alpha(mp, cfg);
    for (size_t i = 0; i < lz.result.radii.size(); ++i) {
      double r = lz.result.radii[i];
      if (r > 100) break;
      double U = alpha * std::pow(1 + r * r, -mp.half_n2s());
      supref = std::max(supref, std::abs(mp.p * std::pow(U, mp.p - 1) * Z_np1.values[i]));
      supz = std::max(supz, std::abs(lz.result.values[i]));
    }
    auto t1 = std::chrono::steady_clock::now();
    // eigenpair
    Eigenpair ep = eigenpair_unstable(mp, cfg);
    auto t2 = std::chrono::steady_clock::now();
    // tail fit of Z0 on [10,100]
    std::vector<double> xs, ys;
    for (size_t i = 0; i < ep.Z0.radii.size(); ++i) {
      double r = ep.Z0.radii[i];
      if (r >= 10 && r <= 100 && ep.Z0.values[i] != 0) {
        xs.push_back(std::log(r));
        ys.push_back(std::log(std::abs(ep.Z0.values[i])));
      }
    }
    LineFit lf = fit_line(xs, ys);
    std::printf(
        "n=%d s=%.1f: L0Z rel=%.2e (%.1fs) | mu0=%.6g tail=%.3f (want %.1f) r2=%.5f (%.1fs)\n",
        n, s, supz / supref,
        std::chrono::duration<double>(t1 - t0).count(), ep.mu0, lf.slope,
        -(n + 2 * s), lf.r2,
        std::chrono::duration<double>(t2 - t1).count());
  }
  return 0;
}
