#include <cmath>
#include <cstdio>
#include "fractower/frac_core.hpp"
#include "fractower/radial.hpp"
using namespace fractower;
int main() {
  ModelParams mp = make_params(4, 0.5, 1, 1e3);
  QuadratureConfig cfg;
  double alpha = bubble_alpha(mp, cfg);
  auto Ufun = [&](double r) { return alpha * std::pow(1.0 + r * r, -mp.half_n2s()); };
  for (int nr : {2048, 8192}) {
    RadialFunction U = sample_radial(Ufun, 1e-4, cfg.r_trunc, nr, -mp.n2s(), alpha);
    for (double r : {30.0, 100.0, 300.0}) {
      double up = std::pow(Ufun(r), mp.p);
      double vg = frac_laplacian_radial(U, r, mp, cfg);
      double vc = frac_lap_callable(Ufun, Ufun(r), r, 4e-4, cfg.r_trunc,
                                    -mp.n2s(), mp, cfg);
      std::printf("nr=%5d r=%6.1f  grid_rel=%+.3e  callable_rel=%+.3e\n", nr, r,
                  vg / up - 1.0, vc / up - 1.0);
    }
  }
  return 0;
}
