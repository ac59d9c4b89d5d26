#pragma once

#include <functional>
#include <vector>

namespace fractower {

// Nodes/weights for Gauss-Legendre on [-1,1]. Cached per order; thread-safe
// after first use of a given order (warm the cache before parallel regions).
const std::vector<double>& gauss_legendre_nodes(int npts);
const std::vector<double>& gauss_legendre_weights(int npts);

// Appends npts Gauss-Legendre nodes mapped to [a,b] into xs/ws.
void gl_panel(double a, double b, int npts, std::vector<double>& xs,
              std::vector<double>& ws);

// Gauss-Legendre integral of f over [a,b] split into geometric panels of
// ratio at most `ratio` (plus one linear panel when a == 0).
double integrate_panels(const std::function<double(double)>& f, double a,
                        double b, double ratio, int npts_per_panel);

// Integral of g(r) r^(n-1) dr over (0, r1], panels log-spaced from r_inner.
// Assumes g bounded near 0.
double integrate_radial(const std::function<double(double)>& g, int n,
                        double r_inner, double r1, double ratio, int npts);

// Closed-form remainder of \int_R^inf c r^(q) r^(n-1) dr for q + n < 0.
double radial_tail(double c_at_R, double R, double q, int n);

// Simple least-squares line y = a + b x; returns {b, a, r2}.
struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace fractower
