#pragma once

#include <Eigen/Core>

#include <array>
#include <functional>
#include <utility>

namespace bsc {

using Vec4 = Eigen::Matrix<double, 4, 1>;
using Field = Eigen::ArrayXXd;  // indexed (i, j), i along x

/// Uniform rectangular grid of nx * ny nodes.
struct GridSpec {
  int nx = 65;
  int ny = 65;
  double hx = 2.0 / 64.0;
  double hy = 2.0 / 64.0;
  double x0 = -1.0;
  double y0 = -1.0;

  static GridSpec over(double xmin, double xmax, double ymin, double ymax, int nx, int ny);

  /// Throws ContractError(OutOfRange) when the invariants do not hold.
  void validate() const;

  double x(int i) const { return x0 + i * hx; }
  double y(int j) const { return y0 + j * hy; }
  double x_max() const { return x(nx - 1); }
  double y_max() const { return y(ny - 1); }
  int node_count() const { return nx * ny; }
  bool contains(int i, int j) const { return i >= 0 && j >= 0 && i < nx && j < ny; }
  bool is_boundary(int i, int j) const { return i == 0 || j == 0 || i == nx - 1 || j == ny - 1; }
  int interior_count() const { return (nx - 2) * (ny - 2); }
  /// Node lies at parameter distance >= margin from every edge.
  bool inside_margin(int i, int j, double margin) const {
    const double eps = 1e-12 * (hx + hy);
    return x(i) >= x0 + margin - eps && x(i) <= x_max() - margin + eps && y(j) >= y0 + margin - eps &&
           y(j) <= y_max() - margin + eps;
  }
};

/// Graph of (f, g) over a GridSpec: the immersion (x, y) -> (x, y, f, g) in R^4.
///
/// The boundary copies are taken at construction and are the Dirichlet data;
/// solvers only ever write interior nodes and `restore_boundary` re-imposes them.
class GraphPatch {
 public:
  GraphPatch() = default;
  GraphPatch(const GridSpec& grid, Field f, Field g);

  using Sampler = std::function<std::pair<double, double>(double, double)>;
  static GraphPatch sample(const GridSpec& grid, const Sampler& fg);

  const GridSpec& grid() const { return grid_; }
  const Field& f() const { return f_; }
  const Field& g() const { return g_; }
  Field& f() { return f_; }
  Field& g() { return g_; }

  const Field& boundary_f() const { return bf_; }
  const Field& boundary_g() const { return bg_; }

  Vec4 point(int i, int j) const { return {grid_.x(i), grid_.y(j), f_(i, j), g_(i, j)}; }

  void restore_boundary();
  bool boundary_intact() const;

  /// Replace the Dirichlet data (and the boundary values) by those of `other`.
  void set_boundary_from(const GraphPatch& other);

 private:
  GridSpec grid_;
  Field f_, g_;
  Field bf_, bg_;
};

/// Every other node of a grid with odd nx and ny (spacing doubled).
/// Throws ContractError(OutOfRange) otherwise.
GraphPatch coarsen(const GraphPatch& patch);

/// One-dimensional finite-difference weights on at most four nodes.
struct Stencil1D {
  std::array<int, 4> index{};
  std::array<double, 4> weight{};
  int size = 0;

  template <typename Values>
  double apply(const Values& v) const {
    double s = 0.0;
    for (int k = 0; k < size; ++k) s += weight[k] * v(index[k]);
    return s;
  }
};

/// Second-order first derivative at node i of n: central inside, one-sided
/// three-point at the two ends.
Stencil1D first_derivative(int i, int n, double h);

/// Second derivative at node i of n: central inside, one-sided four-point
/// (second order) at the ends; falls back to three points when n == 3.
Stencil1D second_derivative(int i, int n, double h);

}  // namespace bsc
