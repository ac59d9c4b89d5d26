#include <cmath>
#include <cstdio>
#include <Eigen/Dense>
#include "fractower/frac_core.hpp"
#include "fractower/radial.hpp"
using namespace fractower;
int main() {
  // Part 1: (3,0.4) pointwise L0 Z_np1
  {
    ModelParams mp = make_params(3, 0.4, 1, 1e3);
    QuadratureConfig cfg; cfg.n_radial = 512;
    double alpha = bubble_alpha(mp, cfg);
    double m = mp.half_n2s();
    RadialFunction Z_rad, Z_np1;
    kernel_elements(mp, cfg, Z_np1, Z_np1); // dummy
    kernel_elements(mp, cfg, Z_rad, Z_np1);
    for (double r : {0.0, 0.5, 1.0, 3.0, 10.0, 100.0, 1000.0}) {
      double z = m * alpha * (1 - r * r) * std::pow(1 + r * r, -m - 1);
      double U = alpha * std::pow(1 + r * r, -m);
      double want = mp.p * std::pow(U, mp.p - 1) * z;
      double lap = frac_laplacian_radial(Z_np1, r, mp, cfg);
      std::printf("r=%7.1f  lap=%+.6e  want=%+.6e  diff=%+.3e\n", r, lap, want,
                  lap - want);
    }
  }
  // Part 2: raw vs symmetrized top eigenvalues, small grid
  {
    ModelParams mp = make_params(4, 0.5, 1, 1e3);
    QuadratureConfig cfg; cfg.n_radial = 400;
    std::vector<double> grid = log_grid(1e-3, 1e3, 400);
    Eigen::MatrixXd lap = frac_lap_matrix(grid, mp, cfg, TailMode::power(-(mp.n + 2 * mp.s)), true);
    Eigen::MatrixXd M = -lap;
    double alpha = bubble_alpha(mp, cfg);
    for (int i = 0; i < 400; ++i) {
      double U = alpha * std::pow(1 + grid[i] * grid[i], -mp.half_n2s());
      M(i, i) += mp.p * std::pow(U, mp.p - 1);
    }
    Eigen::EigenSolver<Eigen::MatrixXd> es(M);
    std::vector<double> re;
    for (int i = 0; i < 400; ++i) re.push_back(es.eigenvalues()(i).real());
    std::sort(re.rbegin(), re.rend());
    std::printf("raw top eigs: %g %g %g %g %g\n", re[0], re[1], re[2], re[3], re[4]);
  }
  return 0;
}
