#include <cmath>
#include <cstdio>
#include "fractower/frac_core.hpp"
#include "fractower/radial.hpp"
using namespace fractower;
int main() {
  ModelParams mp = make_params(4, 0.5, 1, 1e3);
  QuadratureConfig cfg;
  double alpha = bubble_alpha(mp, cfg);
  RadialFunction U = sample_radial(
      [&](double r) { return alpha * std::pow(1.0 + r * r, -mp.half_n2s()); },
      1e-4, cfg.r_trunc, cfg.n_radial, -mp.n2s(), alpha);
  QuadratureConfig fine = cfg; fine.n_angular *= 4;
  for (double r : {0.0, 0.01, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 30.0, 100.0, 300.0}) {
    double up = std::pow(U.eval(r), mp.p);
    double v1 = frac_laplacian_radial(U, r, mp, cfg);
    double v2 = frac_laplacian_radial(U, r, mp, fine);
    std::printf("r=%8.3g  rel1=%+.3e rel2=%+.3e  exact=%.6e\n", r,
                v1 / up - 1.0, v2 / up - 1.0, up);
  }
  return 0;
}
