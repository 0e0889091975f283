#pragma once

#include "bsc/geometry.hpp"
#include "bsc/grid.hpp"

#include <functional>
#include <string>
#include <vector>

namespace bsc {

/// Closed-form graph with exact first and second derivatives.
struct AnalyticSurface {
  std::string name;
  std::function<Jet<double>(double, double)> jet;

  std::pair<double, double> operator()(double x, double y) const {
    const auto j = jet(x, y);
    return {j.f, j.g};
  }

  /// Samples the surface on every node of the grid.
  GraphPatch sample(const GridSpec& grid) const;
};

namespace surfaces {

/// f = p x + q y, g = r x + s y
AnalyticSurface affine(double p, double q, double r, double s);
/// f + i g = scale (x + i y)^2
AnalyticSurface holomorphic_z2(double scale = 1.0);
/// f + i g = scale (x + i y)^3
AnalyticSurface holomorphic_z3(double scale = 1.0);
/// upper hemisphere of radius R in the (x, y, u3) space
AnalyticSurface hemisphere(double R);
/// f = amplitude exp(-(x^2 + y^2) / width^2), g = 0
AnalyticSurface bump(double amplitude, double width);
/// f = slope y, g = twist x y
AnalyticSurface shear(double slope, double twist = 0.0);
/// f = 0.1 sin(pi x) sin(pi y), g = 0.1 x y (1 - x)(1 - y); vanishes on the unit square boundary
AnalyticSurface manufactured();

/// Builds a family from its name and parameter list, e.g. ("shear", {0.3}).
/// "affine" with no parameters is the flat plane. Throws ConfigError(Range)
/// on an unknown name or a wrong parameter count.
AnalyticSurface by_name(const std::string& name, const std::vector<double>& params);

}  // namespace surfaces

}  // namespace bsc
