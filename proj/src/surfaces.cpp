#include "bsc/surfaces.hpp"

#include "bsc/errors.hpp"

#include <cmath>
#include <numbers>

namespace bsc {

GraphPatch AnalyticSurface::sample(const GridSpec& grid) const {
  return GraphPatch::sample(grid, [this](double x, double y) { return (*this)(x, y); });
}

namespace surfaces {

AnalyticSurface affine(double p, double q, double r, double s) {
  return {"affine", [=](double x, double y) {
            Jet<double> j;
            j.f = p * x + q * y;
            j.g = r * x + s * y;
            j.fx = p;
            j.fy = q;
            j.gx = r;
            j.gy = s;
            return j;
          }};
}

AnalyticSurface holomorphic_z2(double scale) {
  return {"holomorphic_z2", [=](double x, double y) {
            Jet<double> j;
            j.f = scale * (x * x - y * y);
            j.g = scale * 2 * x * y;
            j.fx = scale * 2 * x;
            j.fy = -scale * 2 * y;
            j.gx = scale * 2 * y;
            j.gy = scale * 2 * x;
            j.fxx = 2 * scale;
            j.fyy = -2 * scale;
            j.gxy = 2 * scale;
            return j;
          }};
}

AnalyticSurface holomorphic_z3(double scale) {
  return {"holomorphic_z3", [=](double x, double y) {
            Jet<double> j;
            j.f = scale * (x * x * x - 3 * x * y * y);
            j.g = scale * (3 * x * x * y - y * y * y);
            j.fx = scale * (3 * x * x - 3 * y * y);
            j.fy = scale * (-6 * x * y);
            j.gx = scale * (6 * x * y);
            j.gy = scale * (3 * x * x - 3 * y * y);
            j.fxx = scale * 6 * x;
            j.fxy = scale * -6 * y;
            j.fyy = scale * -6 * x;
            j.gxx = scale * 6 * y;
            j.gxy = scale * 6 * x;
            j.gyy = scale * -6 * y;
            return j;
          }};
}

AnalyticSurface hemisphere(double R) {
  return {"hemisphere", [=](double x, double y) {
            Jet<double> j;
            const double w = std::sqrt(R * R - x * x - y * y);
            const double w3 = w * w * w;
            j.f = w;
            j.fx = -x / w;
            j.fy = -y / w;
            j.fxx = -(R * R - y * y) / w3;
            j.fxy = -x * y / w3;
            j.fyy = -(R * R - x * x) / w3;
            return j;
          }};
}

AnalyticSurface bump(double amplitude, double width) {
  return {"bump", [=](double x, double y) {
            Jet<double> j;
            const double w2 = width * width;
            const double e = amplitude * std::exp(-(x * x + y * y) / w2);
            j.f = e;
            j.fx = -2 * x / w2 * e;
            j.fy = -2 * y / w2 * e;
            j.fxx = (4 * x * x / (w2 * w2) - 2 / w2) * e;
            j.fyy = (4 * y * y / (w2 * w2) - 2 / w2) * e;
            j.fxy = 4 * x * y / (w2 * w2) * e;
            return j;
          }};
}

AnalyticSurface shear(double slope, double twist) {
  return {"shear", [=](double x, double y) {
            Jet<double> j;
            j.f = slope * y;
            j.g = twist * x * y;
            j.fy = slope;
            j.gx = twist * y;
            j.gy = twist * x;
            j.gxy = twist;
            return j;
          }};
}

AnalyticSurface manufactured() {
  return {"manufactured", [](double x, double y) {
            constexpr double pi = std::numbers::pi;
            const double sx = std::sin(pi * x), cx = std::cos(pi * x);
            const double sy = std::sin(pi * y), cy = std::cos(pi * y);
            Jet<double> j;
            j.f = 0.1 * sx * sy;
            j.fx = 0.1 * pi * cx * sy;
            j.fy = 0.1 * pi * sx * cy;
            j.fxx = -0.1 * pi * pi * sx * sy;
            j.fyy = -0.1 * pi * pi * sx * sy;
            j.fxy = 0.1 * pi * pi * cx * cy;
            const double px = x * (1 - x), py = y * (1 - y);
            const double dpx = 1 - 2 * x, dpy = 1 - 2 * y;
            j.g = 0.1 * px * py;
            j.gx = 0.1 * dpx * py;
            j.gy = 0.1 * px * dpy;
            j.gxx = -0.2 * py;
            j.gyy = -0.2 * px;
            j.gxy = 0.1 * dpx * dpy;
            return j;
          }};
}

AnalyticSurface by_name(const std::string& name, const std::vector<double>& p) {
  auto need = [&](std::size_t lo, std::size_t hi) {
    if (p.size() < lo || p.size() > hi)
      throw ConfigError(ConfigError::Kind::Range, 0,
                        "boundary family '" + name + "' takes " + std::to_string(lo) +
                            (lo == hi ? "" : "-" + std::to_string(hi)) + " parameters");
  };
  if (name == "affine") {
    if (p.empty()) return affine(0, 0, 0, 0);
    need(4, 4);
    return affine(p[0], p[1], p[2], p[3]);
  }
  if (name == "holomorphic_z2") {
    need(0, 1);
    return holomorphic_z2(p.empty() ? 1.0 : p[0]);
  }
  if (name == "holomorphic_z3") {
    need(0, 1);
    return holomorphic_z3(p.empty() ? 1.0 : p[0]);
  }
  if (name == "hemisphere") {
    need(1, 1);
    if (!(p[0] > 0)) throw ConfigError(ConfigError::Kind::Range, 0, "hemisphere radius must be > 0");
    return hemisphere(p[0]);
  }
  if (name == "bump") {
    need(2, 2);
    if (!(p[1] > 0)) throw ConfigError(ConfigError::Kind::Range, 0, "bump width must be > 0");
    return bump(p[0], p[1]);
  }
  if (name == "shear") {
    need(1, 2);
    return shear(p[0], p.size() > 1 ? p[1] : 0.0);
  }
  if (name == "manufactured") {
    need(0, 0);
    return manufactured();
  }
  throw ConfigError(ConfigError::Kind::Range, 0, "unknown boundary family '" + name + "'");
}

}  // namespace surfaces

}  // namespace bsc
