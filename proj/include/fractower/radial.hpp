#pragma once

#include <functional>
#include <string>
#include <vector>

namespace fractower {

// Radial profile sampled on a strictly increasing positive grid (log-spaced
// by construction helpers). Evaluation:
//   r < radii.front()  -> blend between value_at_zero and the first sample
//                         (quadratic in r, so the extension is even)
//   inside the grid    -> monotone cubic (Fritsch-Carlson) in x = log r
//   r > radii.back()   -> power-law tail  f(r_max) * (r/r_max)^tail_exponent
struct RadialFunction {
  std::vector<double> radii;
  std::vector<double> values;
  double tail_exponent = 0.0;
  double value_at_zero = 0.0;

  // metadata carried into the JSON sidecar
  int n = 0;
  double s = 0.0;

  // Optional closed-form evaluator. When set, eval() uses it inside
  // [r_min, r_max] instead of the interpolant (the far-field cancellation in
  // the singular quadratures amplifies interpolation noise beyond any fixed
  // grid's reach). Dropped by serialization; samples stay authoritative there.
  std::function<double(double)> exact;

  void build_interpolant();  // recompute slopes after editing values

  double eval(double r) const;
  double deriv(double r) const;  // df/dr

  bool ready() const { return !slopes_.empty(); }
  size_t size() const { return radii.size(); }

  // slopes dy/dx on x = log r, filled by build_interpolant
  std::vector<double> slopes_;
  std::vector<double> logr_;
};

// Log-spaced grid in [r_min, r_max].
std::vector<double> log_grid(double r_min, double r_max, int n_points);

// Samples a callable onto a log grid.
RadialFunction sample_radial(const std::function<double(double)>& f,
                             double r_min, double r_max, int n_points,
                             double tail_exponent, double value_at_zero);

// CSV ("r,value") plus JSON sidecar {tail_exponent, value_at_zero, n, s}.
void write_radial_csv(const RadialFunction& f, const std::string& csv_path,
                      const std::string& json_sidecar_path);
RadialFunction read_radial_csv(const std::string& csv_path,
                               const std::string& json_sidecar_path);

// Deterministic float formatting used by every writer.
std::string format_double(double v);

}  // namespace fractower
