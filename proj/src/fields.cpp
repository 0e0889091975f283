#include "bsc/fields.hpp"

#include "bsc/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <string>

namespace bsc {

namespace {

void require_node(const GridSpec& grid, int i, int j) {
  if (!grid.contains(i, j))
    throw ContractError(ContractError::Kind::OutOfRange,
                        "node (" + std::to_string(i) + "," + std::to_string(j) + ") outside grid");
}

// Tensor-product derivative of a nodal array.
double mixed(const Field& v, const Stencil1D& sx, const Stencil1D& sy) {
  double s = 0.0;
  for (int a = 0; a < sx.size; ++a)
    for (int b = 0; b < sy.size; ++b) s += sx.weight[a] * sy.weight[b] * v(sx.index[a], sy.index[b]);
  return s;
}

double along_x(const Field& v, const Stencil1D& s, int j) {
  double r = 0.0;
  for (int k = 0; k < s.size; ++k) r += s.weight[k] * v(s.index[k], j);
  return r;
}

double along_y(const Field& v, const Stencil1D& s, int i) {
  double r = 0.0;
  for (int k = 0; k < s.size; ++k) r += s.weight[k] * v(i, s.index[k]);
  return r;
}

}  // namespace

Jet<double> compute_jet(const GraphPatch& patch, int i, int j) {
  const GridSpec& G = patch.grid();
  require_node(G, i, j);
  const auto dx = first_derivative(i, G.nx, G.hx);
  const auto dy = first_derivative(j, G.ny, G.hy);
  const auto dxx = second_derivative(i, G.nx, G.hx);
  const auto dyy = second_derivative(j, G.ny, G.hy);
  const Field& f = patch.f();
  const Field& g = patch.g();

  Jet<double> jet;
  jet.f = f(i, j);
  jet.g = g(i, j);
  jet.fx = along_x(f, dx, j);
  jet.fy = along_y(f, dy, i);
  jet.gx = along_x(g, dx, j);
  jet.gy = along_y(g, dy, i);
  jet.fxx = along_x(f, dxx, j);
  jet.fyy = along_y(f, dyy, i);
  jet.gxx = along_x(g, dxx, j);
  jet.gyy = along_y(g, dyy, i);
  jet.fxy = mixed(f, dx, dy);
  jet.gxy = mixed(g, dx, dy);
  return jet;
}

double NodeGeometry::normA() const { return std::sqrt(std::max(0.0, ext.normA2)); }

double trapezoid_factor(const GridSpec& grid, int i, int j) {
  double w = 1.0;
  if (i == 0 || i == grid.nx - 1) w *= 0.5;
  if (j == 0 || j == grid.ny - 1) w *= 0.5;
  return w;
}

SurfaceFields::SurfaceFields(const GraphPatch& patch) : grid_(patch.grid()) {
  nodes_.resize(grid_.node_count());
  area_ = 0.0;
  for (int j = 0; j < grid_.ny; ++j)
    for (int i = 0; i < grid_.nx; ++i) {
      NodeGeometry& n = nodes_[j * grid_.nx + i];
      n.jet = compute_jet(patch, i, j);
      n.fund = first_fundamental(n.jet);
      assert(std::abs(n.fund.det - kahler_det(n.jet)) <= 1e-10 * n.fund.det * n.fund.det);
      n.kahler = kahler_angle(n.jet, n.fund);
      n.ext = extrinsic_data(n.jet, n.fund);
      n.point = patch.point(i, j);
      n.weight = std::sqrt(n.fund.det) * grid_.hx * grid_.hy * trapezoid_factor(grid_, i, j);
      area_ += n.weight;
    }
}

double SurfaceFields::min_cos_alpha() const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& n : nodes_) m = std::min(m, n.kahler.cos_alpha);
  return m;
}

Field SurfaceFields::cos_alpha_field() const {
  Field c(grid_.nx, grid_.ny);
  for (int j = 0; j < grid_.ny; ++j)
    for (int i = 0; i < grid_.nx; ++i) c(i, j) = at(i, j).kahler.cos_alpha;
  return c;
}

Field SurfaceFields::weight_field() const {
  Field w(grid_.nx, grid_.ny);
  for (int j = 0; j < grid_.ny; ++j)
    for (int i = 0; i < grid_.nx; ++i) w(i, j) = at(i, j).weight;
  return w;
}

void SurfaceFields::require_symplectic(const char* what) const {
  const double m = min_cos_alpha();
  if (!(m > 0.0))
    throw ContractError(ContractError::Kind::NonSymplectic,
                        std::string(what) + ": surface is not symplectic (min cos alpha = " +
                            std::to_string(m) + ")");
}

bool brioschi_defined(const GridSpec& grid, int i, int j) {
  return i >= 2 && j >= 2 && i <= grid.nx - 3 && j <= grid.ny - 3;
}

namespace {

struct Metric {
  double E, F, G;
};

template <typename MetricAt>
double brioschi(const GridSpec& grid, int i, int j, MetricAt metric) {
  if (!brioschi_defined(grid, i, j))
    throw ContractError(ContractError::Kind::OutOfRange,
                        "brioschi curvature needs a node two steps from the boundary");
  const double hx = grid.hx, hy = grid.hy;
  const Metric c = metric(i, j);
  const Metric xp = metric(i + 1, j), xm = metric(i - 1, j);
  const Metric yp = metric(i, j + 1), ym = metric(i, j - 1);
  const Metric pp = metric(i + 1, j + 1), pm = metric(i + 1, j - 1);
  const Metric mp = metric(i - 1, j + 1), mm = metric(i - 1, j - 1);

  const double Eu = (xp.E - xm.E) / (2 * hx), Ev = (yp.E - ym.E) / (2 * hy);
  const double Fu = (xp.F - xm.F) / (2 * hx), Fv = (yp.F - ym.F) / (2 * hy);
  const double Gu = (xp.G - xm.G) / (2 * hx), Gv = (yp.G - ym.G) / (2 * hy);
  const double Evv = (yp.E - 2 * c.E + ym.E) / (hy * hy);
  const double Guu = (xp.G - 2 * c.G + xm.G) / (hx * hx);
  const double Fuv = (pp.F - pm.F - mp.F + mm.F) / (4 * hx * hy);

  Eigen::Matrix3d m1, m2;
  m1 << -0.5 * Evv + Fuv - 0.5 * Guu, 0.5 * Eu, Fu - 0.5 * Ev,
        Fv - 0.5 * Gu, c.E, c.F,
        0.5 * Gv, c.F, c.G;
  m2 << 0.0, 0.5 * Ev, 0.5 * Gu,
        0.5 * Ev, c.E, c.F,
        0.5 * Gu, c.F, c.G;
  const double det = c.E * c.G - c.F * c.F;
  return (m1.determinant() - m2.determinant()) / (det * det);
}

}  // namespace

double brioschi_curvature(const GraphPatch& patch, int i, int j) {
  return brioschi(patch.grid(), i, j, [&](int a, int b) {
    const auto m = first_fundamental(compute_jet(patch, a, b));
    return Metric{m.g11, m.g12, m.g22};
  });
}

double brioschi_curvature(const SurfaceFields& fields, int i, int j) {
  return brioschi(fields.grid(), i, j, [&](int a, int b) {
    const auto& m = fields.at(a, b).fund;
    return Metric{m.g11, m.g12, m.g22};
  });
}

}  // namespace bsc
