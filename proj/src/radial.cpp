#include "fractower/radial.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <nlohmann/json.hpp>

#include "fractower/params.hpp"

namespace fractower {

void RadialFunction::build_interpolant() {
  const size_t m = radii.size();
  if (m != values.size() || m < 4)
    throw ValidationError("RadialFunction: need >= 4 samples");
  logr_.resize(m);
  for (size_t i = 0; i < m; ++i) {
    if (!(radii[i] > 0.0) || (i > 0 && radii[i] <= radii[i - 1]))
      throw ValidationError("RadialFunction: radii must be positive increasing");
    logr_[i] = std::log(radii[i]);
  }
  // Monotone cubic slopes in x = log r: fourth-order central differences
  // where the data allows, clamped by the Fritsch-Carlson box so the
  // interpolant never overshoots between samples.
  slopes_.assign(m, 0.0);
  std::vector<double> h(m - 1), d(m - 1);
  for (size_t i = 0; i + 1 < m; ++i) {
    h[i] = logr_[i + 1] - logr_[i];
    d[i] = (values[i + 1] - values[i]) / h[i];
  }
  const double h0 = h[0];
  bool uniform = true;
  for (size_t i = 0; i + 1 < m; ++i)
    if (std::abs(h[i] - h0) > 1e-9 * h0) uniform = false;
  for (size_t i = 1; i + 1 < m; ++i) {
    double mi;
    if (uniform && i >= 2 && i + 2 < m) {
      mi = (-values[i + 2] + 8.0 * values[i + 1] - 8.0 * values[i - 1] +
            values[i - 2]) /
           (12.0 * h0);
    } else {
      const double w1 = 2.0 * h[i] + h[i - 1];
      const double w2 = h[i] + 2.0 * h[i - 1];
      mi = d[i - 1] * d[i] > 0.0
               ? (w1 + w2) / (w1 / d[i - 1] + w2 / d[i])
               : 0.0;
    }
    if (d[i - 1] * d[i] <= 0.0) {
      mi = 0.0;
    } else {
      const double cap = 3.0 * std::min(std::abs(d[i - 1]), std::abs(d[i]));
      if (mi * d[i] <= 0.0)
        mi = 0.0;
      else if (std::abs(mi) > cap)
        mi = cap * (mi > 0.0 ? 1.0 : -1.0);
    }
    slopes_[i] = mi;
  }
  // Boundary slopes from the one-sided four-point cubic (the same cubic the
  // matrix stencils use near the edges), with a shape safety clamp.
  auto clamp_end = [](double mi, double dsec) {
    if (mi * dsec <= 0.0) return 0.0;
    if (std::abs(mi) > 3.0 * std::abs(dsec)) return 3.0 * dsec;
    return mi;
  };
  auto clamp_box = [](double mi, double da, double db) {
    if (da * db <= 0.0) return 0.0;
    const double cap = 3.0 * std::min(std::abs(da), std::abs(db));
    if (mi * da <= 0.0) return 0.0;
    return std::abs(mi) > cap ? cap * (mi > 0.0 ? 1.0 : -1.0) : mi;
  };
  if (uniform && m >= 4) {
    slopes_[0] = clamp_end(
        (-11.0 * values[0] + 18.0 * values[1] - 9.0 * values[2] +
         2.0 * values[3]) / (6.0 * h0), d[0]);
    slopes_[1] = clamp_box(
        (-2.0 * values[0] - 3.0 * values[1] + 6.0 * values[2] - values[3]) /
            (6.0 * h0), d[0], d[1]);
    slopes_[m - 1] = clamp_end(
        (11.0 * values[m - 1] - 18.0 * values[m - 2] + 9.0 * values[m - 3] -
         2.0 * values[m - 4]) / (6.0 * h0), d[m - 2]);
    slopes_[m - 2] = clamp_box(
        (2.0 * values[m - 1] + 3.0 * values[m - 2] - 6.0 * values[m - 3] +
         values[m - 4]) / (6.0 * h0), d[m - 3], d[m - 2]);
  } else {
    auto endpoint = [&](double ha, double hb, double da, double db) {
      double m0 = ((2.0 * ha + hb) * da - ha * db) / (ha + hb);
      return clamp_end(m0, da);
    };
    slopes_[0] = endpoint(h[0], h[1], d[0], d[1]);
    slopes_[m - 1] = endpoint(h[m - 2], h[m - 3], d[m - 2], d[m - 3]);
  }
}

double RadialFunction::eval(double r) const {
  if (slopes_.empty())
    throw ValidationError("RadialFunction: interpolant not built");
  const double r0 = radii.front(), r1 = radii.back();
  if (exact) return r <= 0.0 ? value_at_zero : exact(r);
  if (r <= 0.0) return value_at_zero;
  if (r < r0) {
    const double w = (r / r0) * (r / r0);
    return value_at_zero + (values.front() - value_at_zero) * w;
  }
  if (r > r1) return values.back() * std::pow(r / r1, tail_exponent);
  const double x = std::log(r);
  size_t hi = std::upper_bound(logr_.begin(), logr_.end(), x) - logr_.begin();
  if (hi == 0) return values.front();
  if (hi >= logr_.size()) return values.back();
  const size_t lo = hi - 1;
  const double h = logr_[hi] - logr_[lo];
  const double t = (x - logr_[lo]) / h;
  const double t2 = t * t, t3 = t2 * t;
  const double h00 = 2 * t3 - 3 * t2 + 1, h10 = t3 - 2 * t2 + t;
  const double h01 = -2 * t3 + 3 * t2, h11 = t3 - t2;
  return h00 * values[lo] + h10 * h * slopes_[lo] + h01 * values[hi] +
         h11 * h * slopes_[hi];
}

double RadialFunction::deriv(double r) const {
  if (slopes_.empty())
    throw ValidationError("RadialFunction: interpolant not built");
  const double r0 = radii.front(), r1 = radii.back();
  if (exact && r > 0.0) {
    const double h = 1e-6 * std::max(r, r0);
    return (exact(r + h) - exact(std::max(r - h, 0.5 * r))) /
           (h + std::min(h, 0.5 * r));
  }
  if (r <= 0.0) return 0.0;
  if (r < r0) return 2.0 * (values.front() - value_at_zero) * r / (r0 * r0);
  if (r > r1)
    return values.back() * tail_exponent / r1 * std::pow(r / r1, tail_exponent - 1.0);
  const double x = std::log(r);
  size_t hi = std::upper_bound(logr_.begin(), logr_.end(), x) - logr_.begin();
  if (hi == 0) hi = 1;
  if (hi >= logr_.size()) hi = logr_.size() - 1;
  const size_t lo = hi - 1;
  const double h = logr_[hi] - logr_[lo];
  const double t = (x - logr_[lo]) / h;
  const double dh00 = 6 * t * t - 6 * t, dh10 = 3 * t * t - 4 * t + 1;
  const double dh01 = -6 * t * t + 6 * t, dh11 = 3 * t * t - 2 * t;
  const double dydx = (dh00 * values[lo] + dh01 * values[hi]) / h +
                      dh10 * slopes_[lo] + dh11 * slopes_[hi];
  return dydx / r;
}

std::vector<double> log_grid(double r_min, double r_max, int n_points) {
  if (!(r_min > 0.0 && r_max > r_min) || n_points < 4)
    throw ValidationError("log_grid: bad arguments");
  std::vector<double> g(n_points);
  const double L0 = std::log(r_min), L1 = std::log(r_max);
  for (int i = 0; i < n_points; ++i)
    g[i] = std::exp(L0 + (L1 - L0) * i / (n_points - 1));
  g.front() = r_min;
  g.back() = r_max;
  return g;
}

RadialFunction sample_radial(const std::function<double(double)>& f,
                             double r_min, double r_max, int n_points,
                             double tail_exponent, double value_at_zero) {
  RadialFunction rf;
  rf.radii = log_grid(r_min, r_max, n_points);
  rf.values.resize(rf.radii.size());
  for (size_t i = 0; i < rf.radii.size(); ++i) rf.values[i] = f(rf.radii[i]);
  rf.tail_exponent = tail_exponent;
  rf.value_at_zero = value_at_zero;
  rf.exact = f;
  rf.build_interpolant();
  return rf;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_radial_csv(const RadialFunction& f, const std::string& csv_path,
                      const std::string& json_sidecar_path) {
  std::ofstream out(csv_path);
  if (!out) throw ValidationError("cannot open " + csv_path);
  out << "r,value\n";
  for (size_t i = 0; i < f.radii.size(); ++i)
    out << format_double(f.radii[i]) << "," << format_double(f.values[i])
        << "\n";
  nlohmann::ordered_json j;
  j["tail_exponent"] = f.tail_exponent;
  j["value_at_zero"] = f.value_at_zero;
  j["n"] = f.n;
  j["s"] = f.s;
  std::ofstream js(json_sidecar_path);
  if (!js) throw ValidationError("cannot open " + json_sidecar_path);
  js << j.dump(2) << "\n";
}

RadialFunction read_radial_csv(const std::string& csv_path,
                               const std::string& json_sidecar_path) {
  std::ifstream in(csv_path);
  if (!in) throw ValidationError("cannot open " + csv_path);
  RadialFunction f;
  std::string line;
  std::getline(in, line);
  if (line != "r,value") throw ValidationError("bad CSV header in " + csv_path);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos)
      throw ValidationError("bad CSV row in " + csv_path);
    f.radii.push_back(std::stod(line.substr(0, comma)));
    f.values.push_back(std::stod(line.substr(comma + 1)));
  }
  std::ifstream js(json_sidecar_path);
  if (!js) throw ValidationError("cannot open " + json_sidecar_path);
  nlohmann::json j;
  js >> j;
  f.tail_exponent = j.at("tail_exponent").get<double>();
  f.value_at_zero = j.at("value_at_zero").get<double>();
  f.n = j.at("n").get<int>();
  f.s = j.at("s").get<double>();
  f.build_interpolant();
  return f;
}

}  // namespace fractower
