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
  double suph = std::abs(hbar(0));
  for (double r : {0.61497, 0.60672, 0.5}) {
    double up = mp.p * std::pow(Ufun(r), mp.p - 1) * phib.eval(r);
    QuadratureConfig c2 = cfg; c2.n_angular *= 2;
    QuadratureConfig c4 = cfg; c4.n_angular *= 4;
    double a1 = -frac_laplacian_radial(phib, r, mp, cfg) + up + hbar(r);
    double a2 = -frac_laplacian_radial(phib, r, mp, c2) + up + hbar(r);
    double a3 = -frac_laplacian_radial(phib, r, mp, c4) + up + hbar(r);
    std::printf("r=%.5f resid: base=%+.3e  ang*2=%+.3e  ang*4=%+.3e\n", r,
                a1 / suph, a2 / suph, a3 / suph);
  }
  return 0;
}
