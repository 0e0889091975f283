#include "bsc/diagnostics.hpp"

#include "bsc/errors.hpp"
#include "bsc/residual.hpp"

#include <algorithm>
#include <cmath>

namespace bsc {

DiagnosticsRecord diagnostics_record(const SurfaceFields& fields, double beta, double q) {
  fields.require_symplectic("diagnostics_record");
  const GridSpec& G = fields.grid();
  const EnergyReport e = energy_report(fields, beta, q);

  DiagnosticsRecord d;
  d.beta = beta;
  d.min_cos_alpha = e.min_cos_alpha;
  d.lq_mass = e.lq_mass;
  d.area = e.area;
  d.l_beta = e.l_beta;
  for (int j = 0; j < G.ny; ++j)
    for (int i = 0; i < G.nx; ++i) {
      const auto& n = fields.at(i, j);
      d.total_A2 += n.weight * n.ext.normA2;
      d.total_H2 += n.weight * n.ext.normH2();
      d.sup_A = std::max(d.sup_A, n.normA());
      if (brioschi_defined(G, i, j))
        d.gauss_residual_sup =
            std::max(d.gauss_residual_sup, std::abs(brioschi_curvature(fields, i, j) - n.ext.K));
    }
  d.ealpha_residual_sup = ealpha_residual(fields, beta).sup_norm;
  return d;
}

HBoundCheck pointwise_H_bound_check(const SurfaceFields& fields, double beta, double margin,
                                    double residual_warn_threshold) {
  fields.require_symplectic("pointwise_H_bound_check");
  const GridSpec& G = fields.grid();
  HBoundCheck out;
  out.input_residual_sup = residual_field(fields, beta).sup_norm;
  out.residual_warning = out.input_residual_sup > residual_warn_threshold;
  for (int j = 1; j < G.ny - 1; ++j)
    for (int i = 1; i < G.nx - 1; ++i) {
      if (!G.inside_margin(i, j, margin)) continue;
      const auto& n = fields.at(i, j);
      const double c = n.kahler.cos_alpha;
      const double s2 = std::max(0.0, 1.0 - c * c);
      // grad cos by the chain rule through the node's two-jet, not by the
      // differences of the cos field that the residual uses
      const Eigen::Vector2d d = continuum_cos_gradient(n.jet);
      const auto& m = n.fund;
      const double dcos2 = m.gi11 * d(0) * d(0) + 2 * m.gi12 * d(0) * d(1) + m.gi22 * d(1) * d(1);
      const double grad_alpha = s2 < 1e-14 ? 0.0 : std::sqrt(dcos2 / s2);
      const double rhs = beta * s2 / (c * c) * grad_alpha;
      out.sup_discrepancy = std::max(out.sup_discrepancy, std::abs(n.ext.H.norm() - rhs));
    }
  return out;
}

std::vector<TestBump> standard_bump_family(const GridSpec& grid) {
  const double lx = grid.x_max() - grid.x0, ly = grid.y_max() - grid.y0;
  const double ext = std::min(lx, ly);
  std::vector<TestBump> out;
  for (double fy : {0.35, 0.5, 0.65})
    for (double fx : {0.35, 0.5, 0.65})
      for (double fr : {0.1, 0.2, 0.3}) out.push_back({grid.x0 + fx * lx, grid.y0 + fy * ly, fr * ext});
  return out;
}

SobolevReport sobolev_ratio(const SurfaceFields& fields, const std::vector<TestBump>& bumps,
                            double bound) {
  const GridSpec& G = fields.grid();
  SobolevReport rep;
  rep.bound = bound;
  for (const TestBump& b : bumps) {
    double h2 = 0.0, denom = 0.0;
    for (int j = 0; j < G.ny; ++j)
      for (int i = 0; i < G.nx; ++i) {
        const double dx = G.x(i) - b.cx, dy = G.y(j) - b.cy;
        const double s = 1.0 - (dx * dx + dy * dy) / (b.radius * b.radius);
        if (s <= 0.0) continue;
        const auto& n = fields.at(i, j);
        const double h = s * s * s;
        const double hx = -6.0 * s * s * dx / (b.radius * b.radius);
        const double hy = -6.0 * s * s * dy / (b.radius * b.radius);
        const auto& m = n.fund;
        const double grad = std::sqrt(std::max(0.0, m.gi11 * hx * hx + 2 * m.gi12 * hx * hy + m.gi22 * hy * hy));
        h2 += n.weight * h * h;
        denom += n.weight * (grad + n.ext.H.norm() * h);
      }
    if (h2 <= 0.0 || denom <= 0.0) continue;
    rep.ratios.push_back(std::sqrt(h2) / denom);
  }
  rep.sup_ratio = rep.ratios.empty() ? 0.0 : *std::max_element(rep.ratios.begin(), rep.ratios.end());
  rep.within_bound = !rep.ratios.empty() && rep.sup_ratio <= bound &&
                     std::all_of(rep.ratios.begin(), rep.ratios.end(), [](double r) { return std::isfinite(r); });
  return rep;
}

Field concentration_measure(const SurfaceFields& fields, double r) {
  if (!(r > 0.0)) throw ContractError(ContractError::Kind::OutOfRange, "concentration radius must be > 0");
  const GridSpec& G = fields.grid();
  Field nu = Field::Zero(G.nx, G.ny);
  // |F(p) - F(q)| >= |p - q| for graphs, so a parameter window suffices.
  const int wx = static_cast<int>(std::ceil(r / G.hx)), wy = static_cast<int>(std::ceil(r / G.hy));
  const double r2 = r * r;
  for (int j = 0; j < G.ny; ++j)
    for (int i = 0; i < G.nx; ++i) {
      const Vec4& p = fields.at(i, j).point;
      double mass = 0.0;
      for (int b = std::max(0, j - wy); b <= std::min(G.ny - 1, j + wy); ++b)
        for (int a = std::max(0, i - wx); a <= std::min(G.nx - 1, i + wx); ++a) {
          const auto& n = fields.at(a, b);
          if ((n.point - p).squaredNorm() < r2) mass += n.weight * n.ext.normA2;
        }
      nu(i, j) = mass;
    }
  return nu;
}

ConcentrationReport concentration_map(const SurfaceFields& fields, double r, double epsilon) {
  const Field nu = concentration_measure(fields, r);
  ConcentrationReport rep;
  rep.epsilon = epsilon;
  rep.ball_radius = r;
  const GridSpec& G = fields.grid();
  for (int j = 0; j < G.ny; ++j)
    for (int i = 0; i < G.nx; ++i)
      if (nu(i, j) >= epsilon) rep.flagged.push_back({i, j, nu(i, j)});
  return rep;
}

MoserReport moser_report(const SurfaceFields& fields, double q) {
  fields.require_symplectic("moser_report");
  MoserReport rep;
  rep.sup_inv_cos = 1.0 / fields.min_cos_alpha();
  rep.lq_mass = energy_report(fields, q, q).lq_mass;
  rep.ratio = rep.sup_inv_cos / std::pow(rep.lq_mass, 1.0 / q);
  return rep;
}

SmallEnergyScan small_energy_scan(const SurfaceFields& fields, const Vec4& center, double r0,
                                  int samples) {
  if (!(r0 > 0.0) || samples < 2)
    throw ContractError(ContractError::Kind::OutOfRange, "small_energy_scan needs r0 > 0");
  const GridSpec& G = fields.grid();
  for (int j = 0; j < G.ny; ++j)
    for (int i = 0; i < G.nx; ++i)
      if (G.is_boundary(i, j) && (fields.at(i, j).point - center).norm() < r0)
        throw ContractError(ContractError::Kind::BallEscapesPatch,
                            "small-energy ball reaches the patch boundary");

  SmallEnergyScan out;
  std::vector<double> dist, a2;
  for (int j = 0; j < G.ny; ++j)
    for (int i = 0; i < G.nx; ++i) {
      const auto& n = fields.at(i, j);
      const double d = (n.point - center).norm();
      if (d < r0) {
        out.energy_in_ball += n.weight * n.ext.normA2;
        dist.push_back(d);
        a2.push_back(n.ext.normA2);
      }
    }
  for (int k = 1; k < samples; ++k) {
    const double sigma = r0 * k / samples;
    double sup = 0.0;
    for (std::size_t m = 0; m < dist.size(); ++m)
      if (dist[m] < r0 - sigma) sup = std::max(sup, a2[m]);
    out.scaled_sup = std::max(out.scaled_sup, sigma * sigma * sup);
  }
  return out;
}

}  // namespace bsc
