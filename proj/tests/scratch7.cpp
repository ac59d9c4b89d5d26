#include <cmath>
#include <cstdio>
#include "fractower/frac_core.hpp"
#include "fractower/radial.hpp"
using namespace fractower;
int main() {
  int n = 7; double s = 0.9;
  ModelParams mp = make_params(n, s, 2, 1e3);
  QuadratureConfig cfg; cfg.n_radial = 1024;
  double alpha = bubble_alpha(mp, cfg);
  double m = mp.half_n2s(), p = mp.p;
  auto Ufun = [=](double r) { return alpha * std::pow(1 + r * r, -m); };
  auto Zfun = [=](double r) { return m * alpha * (1 - r * r) * std::pow(1 + r * r, -m - 1); };
  double c = 137.1110697;
  auto hbar = [=](double r) { return -p * alpha * std::pow(Ufun(r), p - 1) - c * Zfun(r); };
  RadialFunction h = sample_radial(hbar, 1e-2, cfg.r_trunc, cfg.n_radial, -4 * s, hbar(0));
  h.n = n; h.s = s;
  RadialFunction phib = solve_L0_orthogonal(h, mp, cfg);
  AppliedL0 lphi = apply_L0(phib, mp, cfg);
  double suph = std::abs(hbar(0));
  double worst = 0; double worstr = 0;
  for (size_t i = 0; i < h.radii.size(); i += 1) {
    double res = std::abs(lphi.result.values[i] + h.values[i]) / suph;
    if (res > worst) { worst = res; worstr = h.radii[i]; }
  }
  std::printf("sup resid %.3e at r=%.4g\n", worst, worstr);
  for (double r : {1e-4, 1e-3, 1e-2, 0.1, 1.0, 10.0, 100.0, 1e3, 1e4}) {
    size_t i = 0; double best = 1e300;
    for (size_t j = 0; j < h.radii.size(); ++j)
      if (std::abs(std::log(h.radii[j] / r)) < best) { best = std::abs(std::log(h.radii[j] / r)); i = j; }
    std::printf("r=%8.2g resid=%.3e phib=%+.6e\n", h.radii[i],
                std::abs(lphi.result.values[i] + h.values[i]) / suph, phib.values[i]);
  }
  return 0;
}
