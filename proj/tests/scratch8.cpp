#include <cmath>
#include <cstdio>
#include <vector>
#include <algorithm>
#include "fractower/frac_core.hpp"
#include "fractower/radial.hpp"
using namespace fractower;
int main(int argc, char** argv) {
  int n = 7; double s = 0.9;
  int nr = argc > 1 ? atoi(argv[1]) : 1024;
  ModelParams mp = make_params(n, s, 2, 1e3);
  QuadratureConfig cfg; cfg.n_radial = nr;
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
  std::vector<std::pair<double,double>> rows;
  for (size_t i = 0; i < h.radii.size(); ++i)
    rows.push_back({std::abs(lphi.result.values[i] + h.values[i]) / suph, h.radii[i]});
  std::sort(rows.rbegin(), rows.rend());
  for (int i = 0; i < 8; ++i) std::printf("resid=%.3e at r=%.5g\n", rows[i].first, rows[i].second);
  return 0;
}
