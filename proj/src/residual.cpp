#include "bsc/residual.hpp"

#include "bsc/errors.hpp"

#include <unsupported/Eigen/AutoDiff>

#include <algorithm>
#include <cmath>
#include <random>

namespace bsc {

Eigen::VectorXd ResidualField::interior_vector() const {
  const int nx = static_cast<int>(r3.rows()), ny = static_cast<int>(r3.cols());
  Eigen::VectorXd v(2 * (nx - 2) * (ny - 2));
  int k = 0;
  for (int j = 1; j < ny - 1; ++j)
    for (int i = 1; i < nx - 1; ++i) {
      v(k++) = r3(i, j);
      v(k++) = r4(i, j);
    }
  return v;
}

Eigen::Vector2d residual_at(const FirstFundamental<double>& m, const ExtrinsicData<double>& x,
                            double cos_alpha, const Eigen::Vector2d& dcos, double beta) {
  const Vec4 grad = (m.gi11 * dcos(0) + m.gi12 * dcos(1)) * x.e1 +
                    (m.gi12 * dcos(0) + m.gi22 * dcos(1)) * x.e2;
  const Vec4 t = tangent_part<double>(apply_J(grad), x.e1, x.e2, m);
  const Vec4 v = cos_alpha * cos_alpha * cos_alpha * x.H - beta * apply_J(t);
  return {v.dot(x.n3), v.dot(x.n4)};
}

Eigen::Vector2d continuum_cos_gradient(const Jet<double>& jet) {
  using AD = Eigen::AutoDiffScalar<Eigen::Vector2d>;
  Jet<AD> j;
  j.fx = AD(jet.fx, Eigen::Vector2d(jet.fxx, jet.fxy));
  j.fy = AD(jet.fy, Eigen::Vector2d(jet.fxy, jet.fyy));
  j.gx = AD(jet.gx, Eigen::Vector2d(jet.gxx, jet.gxy));
  j.gy = AD(jet.gy, Eigen::Vector2d(jet.gxy, jet.gyy));
  const auto fund = first_fundamental(j);
  return kahler_angle(j, fund).cos_alpha.derivatives();
}

Eigen::Vector2d continuum_residual(const Jet<double>& jet, double beta) {
  const auto fund = first_fundamental(jet);
  const auto ext = extrinsic_data(jet, fund);
  const auto k = kahler_angle(jet, fund);
  return residual_at(fund, ext, k.cos_alpha, continuum_cos_gradient(jet), beta);
}

Eigen::Vector2d cos_gradient(const SurfaceFields& fields, int i, int j) {
  const GridSpec& G = fields.grid();
  const auto dx = first_derivative(i, G.nx, G.hx);
  const auto dy = first_derivative(j, G.ny, G.hy);
  Eigen::Vector2d d = Eigen::Vector2d::Zero();
  for (int k = 0; k < dx.size; ++k) d(0) += dx.weight[k] * fields.cos_alpha(dx.index[k], j);
  for (int k = 0; k < dy.size; ++k) d(1) += dy.weight[k] * fields.cos_alpha(i, dy.index[k]);
  return d;
}

AngleGradient angle_gradient(const SurfaceFields& fields, int i, int j) {
  const auto& n = fields.at(i, j);
  const auto& m = n.fund;
  const Eigen::Vector2d d = cos_gradient(fields, i, j);
  AngleGradient a;
  a.cos_norm2 = m.gi11 * d(0) * d(0) + 2 * m.gi12 * d(0) * d(1) + m.gi22 * d(1) * d(1);
  const double c = std::clamp(n.kahler.cos_alpha, -1.0, 1.0);
  const double s2 = 1.0 - c * c;
  a.alpha_norm2 = s2 < 1e-14 ? 0.0 : a.cos_norm2 / s2;
  return a;
}

double laplace_beltrami(const SurfaceFields& fields, const Field& u, int i, int j) {
  const GridSpec& G = fields.grid();
  if (G.is_boundary(i, j) || !G.contains(i, j))
    throw ContractError(ContractError::Kind::OutOfRange, "laplace_beltrami needs an interior node");
  auto coef = [&](int a, int b, int which) {
    const auto& m = fields.at(a, b).fund;
    const double s = std::sqrt(m.det);
    return which == 0 ? s * m.gi11 : which == 1 ? s * m.gi12 : s * m.gi22;
  };
  const double hx = G.hx, hy = G.hy;
  const double axp = 0.5 * (coef(i, j, 0) + coef(i + 1, j, 0));
  const double axm = 0.5 * (coef(i, j, 0) + coef(i - 1, j, 0));
  const double ayp = 0.5 * (coef(i, j, 2) + coef(i, j + 1, 2));
  const double aym = 0.5 * (coef(i, j, 2) + coef(i, j - 1, 2));
  double div = (axp * (u(i + 1, j) - u(i, j)) - axm * (u(i, j) - u(i - 1, j))) / (hx * hx) +
               (ayp * (u(i, j + 1) - u(i, j)) - aym * (u(i, j) - u(i, j - 1))) / (hy * hy);
  // cross terms d_x(A12 d_y u) + d_y(A12 d_x u)
  const double uy_p = (u(i + 1, j + 1) - u(i + 1, j - 1)) / (2 * hy);
  const double uy_m = (u(i - 1, j + 1) - u(i - 1, j - 1)) / (2 * hy);
  const double ux_p = (u(i + 1, j + 1) - u(i - 1, j + 1)) / (2 * hx);
  const double ux_m = (u(i + 1, j - 1) - u(i - 1, j - 1)) / (2 * hx);
  div += (coef(i + 1, j, 1) * uy_p - coef(i - 1, j, 1) * uy_m) / (2 * hx);
  div += (coef(i, j + 1, 1) * ux_p - coef(i, j - 1, 1) * ux_m) / (2 * hy);
  return div / std::sqrt(fields.at(i, j).fund.det);
}

ResidualField residual_field(const SurfaceFields& fields, double beta) {
  fields.require_symplectic("residual_field");
  const GridSpec& G = fields.grid();
  ResidualField r;
  r.r3 = Field::Zero(G.nx, G.ny);
  r.r4 = Field::Zero(G.nx, G.ny);
  double sup = 0.0, l2 = 0.0;
  for (int j = 1; j < G.ny - 1; ++j)
    for (int i = 1; i < G.nx - 1; ++i) {
      const auto& n = fields.at(i, j);
      const Eigen::Vector2d v =
          residual_at(n.fund, n.ext, n.kahler.cos_alpha, cos_gradient(fields, i, j), beta);
      r.r3(i, j) = v(0);
      r.r4(i, j) = v(1);
      sup = std::max({sup, std::abs(v(0)), std::abs(v(1))});
      l2 += n.weight * v.squaredNorm();
    }
  r.sup_norm = sup;
  r.l2_norm = std::sqrt(l2);
  return r;
}

EnergyReport energy_report(const SurfaceFields& fields, double beta, double q) {
  fields.require_symplectic("energy_report");
  const GridSpec& G = fields.grid();
  EnergyReport e;
  e.min_cos_alpha = fields.min_cos_alpha();
  for (int j = 0; j < G.ny; ++j)
    for (int i = 0; i < G.nx; ++i) {
      const auto& n = fields.at(i, j);
      const double c = n.kahler.cos_alpha;
      e.area += n.weight;
      e.l_beta += n.weight * std::pow(c, -beta);
      e.lq_mass += n.weight * std::pow(c, -q);
    }
  return e;
}

EalphaResult ealpha_residual(const SurfaceFields& fields, double beta, double margin,
                             double residual_warn_threshold) {
  fields.require_symplectic("ealpha_residual");
  const GridSpec& G = fields.grid();
  EalphaResult out;
  out.input_residual_sup = residual_field(fields, beta).sup_norm;
  out.residual_warning = out.input_residual_sup > residual_warn_threshold;

  if (G.nx < 5 || G.ny < 5) throw ContractError(ContractError::Kind::OutOfRange, "ealpha needs nx, ny >= 5");
  Field inv_cos = 1.0 / fields.cos_alpha_field();
  out.value = Field::Zero(G.nx, G.ny);
  double sup = 0.0, l2 = 0.0;
  // The Laplacian at a boundary neighbour would difference cos(alpha) values
  // taken from one-sided jets, whose O(h^2) error it amplifies by 1/h^2.
  for (int j = 2; j < G.ny - 2; ++j)
    for (int i = 2; i < G.nx - 2; ++i) {
      const auto& n = fields.at(i, j);
      const double c = n.kahler.cos_alpha;
      const double s2 = std::max(0.0, 1.0 - c * c);
      const double rhs = 2.0 * angle_gradient(fields, i, j).alpha_norm2 / (c * (c * c + beta * s2));
      const double v = laplace_beltrami(fields, inv_cos, i, j) - rhs;
      out.value(i, j) = v;
      if (!G.inside_margin(i, j, margin)) continue;
      sup = std::max(sup, std::abs(v));
      l2 += n.weight * v * v;
    }
  out.sup_norm = sup;
  out.l2_norm = std::sqrt(l2);
  return out;
}

Perturbation random_perturbation(const GridSpec& grid, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double lx = grid.x_max() - grid.x0, ly = grid.y_max() - grid.y0;
  const double cx = grid.x0 + lx * (0.4 + 0.2 * unit(rng));
  const double cy = grid.y0 + ly * (0.4 + 0.2 * unit(rng));
  const double rho = 0.25 * std::min(lx, ly) * (0.5 + 0.5 * unit(rng));
  const double theta = 2.0 * 3.14159265358979323846 * unit(rng);
  const double amp = std::max(lx, ly) * 0.1;

  Perturbation p;
  p.df = Field::Zero(grid.nx, grid.ny);
  p.dg = Field::Zero(grid.nx, grid.ny);
  double n2 = 0.0;
  for (int j = 1; j < grid.ny - 1; ++j)
    for (int i = 1; i < grid.nx - 1; ++i) {
      const double dx = grid.x(i) - cx, dy = grid.y(j) - cy;
      const double s = 1.0 - (dx * dx + dy * dy) / (rho * rho);
      if (s <= 0.0) continue;
      const double b = amp * s * s * s * s;
      p.df(i, j) = b * std::cos(theta);
      p.dg(i, j) = b * std::sin(theta);
      n2 += (p.df(i, j) * p.df(i, j) + p.dg(i, j) * p.dg(i, j)) * grid.hx * grid.hy;
    }
  p.l2_norm = std::sqrt(n2);
  return p;
}

double energy_stationarity_test(const GraphPatch& patch, double beta, std::uint64_t seed,
                                double t) {
  const Perturbation phi = random_perturbation(patch.grid(), seed);
  auto energy_at = [&](double s) {
    GraphPatch p = patch;
    p.f() += s * phi.df;
    p.g() += s * phi.dg;
    SurfaceFields fields(p);
    if (!(fields.min_cos_alpha() > 0.0))
      throw ContractError(ContractError::Kind::NonSymplectic,
                          "perturbed patch left the symplectic class; reduce t");
    return energy_report(fields, beta, beta).l_beta;
  };
  return std::abs(energy_at(t) - energy_at(-t)) / (2.0 * t);
}

}  // namespace bsc
