#include <chrono>
#include <cmath>
#include <cstdio>

#include "fractower/frac_core.hpp"
#include "fractower/radial.hpp"

using namespace fractower;

int main() {
  for (auto [n, s] : {std::pair<int,double>{3,0.4},{4,0.5},{7,0.9}}) {
    ModelParams mp = make_params(n, s, 1, 1e3);
    QuadratureConfig cfg;
    auto t0 = std::chrono::steady_clock::now();
    double alpha = bubble_alpha(mp, cfg);
    // sample U on the default grid
    RadialFunction U = sample_radial(
        [&](double r) { return alpha * std::pow(1.0 + r * r, -mp.half_n2s()); },
        1e-4, cfg.r_trunc, cfg.n_radial, -mp.n2s(), alpha);
    std::vector<double> rs;
    for (int i = 0; i <= 60; ++i) rs.push_back(100.0 * std::pow(10.0, -3.0 * (60 - i) / 60.0));
    rs.insert(rs.begin(), 0.0);
    auto vals = frac_laplacian_batch(U, rs, mp, cfg, true);
    double worst = 0.0; double worst_r = -1;
    for (size_t i = 0; i < rs.size(); ++i) {
      double up = std::pow(U.eval(rs[i]), mp.p);
      double rel = std::abs(vals[i] - up) / up;
      if (rel > worst) { worst = rel; worst_r = rs[i]; }
    }
    auto t1 = std::chrono::steady_clock::now();
    double dt = std::chrono::duration<double>(t1 - t0).count();
    std::printf("n=%d s=%.1f alpha=%.12g worst_rel=%.3e at r=%.4g  (%.2f s)\n",
                n, s, alpha, worst, worst_r, dt);
  }
  return 0;
}
