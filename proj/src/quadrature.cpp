#include "fractower/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

#include "fractower/params.hpp"

namespace fractower {

namespace {

struct GLRule {
  std::vector<double> x, w;
};

// Newton iteration on Legendre polynomials (symmetric rule).
GLRule compute_gl(int n) {
  GLRule rule;
  rule.x.resize(n);
  rule.w.resize(n);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p1 = 1.0, p2 = 0.0;
      for (int j = 0; j < n; ++j) {
        double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1.0);
      }
      pp = n * (z * p1 - p2) / (z * z - 1.0);
      double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) < 1e-15) break;
    }
    rule.x[i] = -z;
    rule.x[n - 1 - i] = z;
    rule.w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
    rule.w[n - 1 - i] = rule.w[i];
  }
  return rule;
}

std::map<int, GLRule>& gl_cache() {
  static std::map<int, GLRule> cache;
  return cache;
}
std::mutex gl_mutex;

const GLRule& gl_rule(int n) {
  std::lock_guard<std::mutex> lock(gl_mutex);
  auto it = gl_cache().find(n);
  if (it == gl_cache().end()) it = gl_cache().emplace(n, compute_gl(n)).first;
  return it->second;
}

}  // namespace

const std::vector<double>& gauss_legendre_nodes(int npts) {
  return gl_rule(npts).x;
}
const std::vector<double>& gauss_legendre_weights(int npts) {
  return gl_rule(npts).w;
}

void gl_panel(double a, double b, int npts, std::vector<double>& xs,
              std::vector<double>& ws) {
  const GLRule& r = gl_rule(npts);
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  for (int i = 0; i < npts; ++i) {
    xs.push_back(mid + half * r.x[i]);
    ws.push_back(half * r.w[i]);
  }
}

double integrate_panels(const std::function<double(double)>& f, double a,
                        double b, double ratio, int npts) {
  if (!(b > a)) return 0.0;
  std::vector<double> xs, ws;
  xs.reserve(256);
  ws.reserve(256);
  double lo = a;
  if (a <= 0.0) {
    // one linear panel from 0 to a small fraction of b, then geometric
    lo = b * 1.0e-6;
    gl_panel(a, lo, npts, xs, ws);
  }
  while (lo < b) {
    double hi = std::min(lo * ratio, b);
    if (hi <= lo) break;
    gl_panel(lo, hi, npts, xs, ws);
    lo = hi;
  }
  double sum = 0.0;
  for (size_t i = 0; i < xs.size(); ++i) sum += ws[i] * f(xs[i]);
  return sum;
}

double integrate_radial(const std::function<double(double)>& g, int n,
                        double r_inner, double r1, double ratio, int npts) {
  auto h = [&](double r) { return g(r) * std::pow(r, n - 1); };
  double core = integrate_panels(h, 0.0, r_inner, ratio, npts);
  double rest = integrate_panels(h, r_inner, r1, ratio, npts);
  return core + rest;
}

double radial_tail(double c_at_R, double R, double q, int n) {
  const double e = q + n;  // integrand ~ r^(e-1)
  if (!(e < 0.0)) throw IntegralDivergence("radial_tail: q + n must be < 0");
  return c_at_R * std::pow(R, n) / (-e);
}

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw ValidationError("fit_line: need >= 2 points");
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
    syy += y[i] * y[i];
  }
  const double det = n * sxx - sx * sx;
  if (det == 0.0) throw ValidationError("fit_line: degenerate abscissae");
  LineFit f;
  f.slope = (n * sxy - sx * sy) / det;
  f.intercept = (sy - f.slope * sx) / n;
  double ss_res = 0.0, ss_tot = 0.0;
  const double ybar = sy / n;
  for (size_t i = 0; i < x.size(); ++i) {
    double e = y[i] - (f.intercept + f.slope * x[i]);
    ss_res += e * e;
    ss_tot += (y[i] - ybar) * (y[i] - ybar);
  }
  f.r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
  return f;
}

}  // namespace fractower
