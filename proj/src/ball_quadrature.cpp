#include "bsc/diagnostics.hpp"

#include "bsc/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace bsc {

namespace {

double cross2(const Eigen::Vector2d& p, const Eigen::Vector2d& q) { return p(0) * q(1) - p(1) * q(0); }

double sector(const Eigen::Vector2d& p, const Eigen::Vector2d& q, double rho) {
  return 0.5 * rho * rho * std::atan2(cross2(p, q), p.dot(q));
}

// Signed area of disc(0, rho) intersected with triangle (0, a, b).
double disk_wedge_area(const Eigen::Vector2d& a, const Eigen::Vector2d& b, double rho) {
  const double r2 = rho * rho;
  const bool a_in = a.squaredNorm() <= r2, b_in = b.squaredNorm() <= r2;
  if (a_in && b_in) return 0.5 * cross2(a, b);

  // |a + t (b - a)|^2 = rho^2
  const Eigen::Vector2d d = b - a;
  const double A = d.squaredNorm();
  if (A == 0.0) return 0.0;
  const double B = 2.0 * a.dot(d);
  const double C = a.squaredNorm() - r2;
  const double disc = B * B - 4 * A * C;
  if (disc <= 0.0) return sector(a, b, rho);
  const double sq = std::sqrt(disc);
  const double t1 = (-B - sq) / (2 * A), t2 = (-B + sq) / (2 * A);

  if (a_in) {
    const Eigen::Vector2d p = a + std::clamp(t2, 0.0, 1.0) * d;
    return 0.5 * cross2(a, p) + sector(p, b, rho);
  }
  if (b_in) {
    const Eigen::Vector2d p = a + std::clamp(t1, 0.0, 1.0) * d;
    return sector(a, p, rho) + 0.5 * cross2(p, b);
  }
  if (t1 >= 0.0 && t2 <= 1.0 && t1 < t2) {
    const Eigen::Vector2d p = a + t1 * d, q = a + t2 * d;
    return sector(a, p, rho) + 0.5 * cross2(p, q) + sector(q, b, rho);
  }
  return sector(a, b, rho);
}

// Area of a triangle in R^4 inside B_s(center).
double triangle_ball_area(const Vec4& v0, const Vec4& v1, const Vec4& v2, const Vec4& center,
                          double s) {
  Vec4 u = v1 - v0;
  const double lu = u.norm();
  if (lu == 0.0) return 0.0;
  u /= lu;
  Vec4 w = v2 - v0;
  w -= w.dot(u) * u;
  const double lw = w.norm();
  if (lw == 0.0) return 0.0;
  w /= lw;
  const Vec4 rel = center - v0;
  const Vec4 foot = v0 + rel.dot(u) * u + rel.dot(w) * w;
  const double d2 = (center - foot).squaredNorm();
  if (d2 >= s * s) return 0.0;
  const double rho = std::sqrt(s * s - d2);
  auto local = [&](const Vec4& v) { return Eigen::Vector2d((v - foot).dot(u), (v - foot).dot(w)); };
  return disk_triangle_area(local(v0), local(v1), local(v2), rho);
}

// Piecewise-linear surface through the nodes with per-vertex integrands.
class BallIntegrator {
 public:
  BallIntegrator(const SurfaceFields& fields, const Vec4& center) : fields_(fields), center_(center) {
    const GridSpec& G = fields.grid();
    dist_.resize(G.node_count());
    perp_.resize(G.node_count());
    hr2_.resize(G.node_count());
    h2_.resize(G.node_count());
    for (int j = 0; j < G.ny; ++j)
      for (int i = 0; i < G.nx; ++i) {
        const auto& n = fields.at(i, j);
        const Vec4 rel = n.point - center;
        const double r = rel.norm();
        const int k = j * G.nx + i;
        dist_[k] = r;
        const double p3 = rel.dot(n.ext.n3), p4 = rel.dot(n.ext.n4);
        // |grad^perp r|^2 / r^2 = |(F - x0)^perp|^2 / r^4
        perp_[k] = r > 1e-12 ? (p3 * p3 + p4 * p4) / (r * r * r * r) : 0.0;
        hr2_[k] = 2.0 * n.ext.H.dot(rel);  // H(r^2) = 2 r <H, grad^perp r>
        h2_[k] = n.ext.normH2();
      }
    max_edge_ = 0.0;
    for (int j = 0; j + 1 < G.ny; ++j)
      for (int i = 0; i + 1 < G.nx; ++i) {
        const Vec4& a = fields.at(i, j).point;
        max_edge_ = std::max({max_edge_, (fields.at(i + 1, j).point - a).norm(),
                              (fields.at(i, j + 1).point - a).norm(),
                              (fields.at(i + 1, j + 1).point - a).norm()});
      }
  }

  struct Sums {
    double area = 0.0, perp = 0.0, hr2 = 0.0, h2 = 0.0;
  };

  Sums integrate(double s) const {
    const GridSpec& G = fields_.grid();
    Sums out;
    for (int j = 0; j + 1 < G.ny; ++j)
      for (int i = 0; i + 1 < G.nx; ++i) {
        const int k00 = j * G.nx + i, k10 = k00 + 1, k01 = k00 + G.nx, k11 = k01 + 1;
        const double dmin = std::min({dist_[k00], dist_[k10], dist_[k01], dist_[k11]});
        if (dmin > s + max_edge_) continue;
        add(out, k00, k10, k11, s);
        add(out, k00, k11, k01, s);
      }
    return out;
  }

 private:
  void add(Sums& out, int a, int b, int c, double s) const {
    const GridSpec& G = fields_.grid();
    auto pt = [&](int k) -> const Vec4& { return fields_.at(k % G.nx, k / G.nx).point; };
    const double area = triangle_ball_area(pt(a), pt(b), pt(c), center_, s);
    if (area <= 0.0) return;
    out.area += area;
    out.perp += area * (perp_[a] + perp_[b] + perp_[c]) / 3.0;
    out.hr2 += area * (hr2_[a] + hr2_[b] + hr2_[c]) / 3.0;
    out.h2 += area * (h2_[a] + h2_[b] + h2_[c]) / 3.0;
  }

  const SurfaceFields& fields_;
  Vec4 center_;
  std::vector<double> dist_, perp_, hr2_, h2_;
  double max_edge_ = 0.0;
};

double point_segment_distance(const Vec4& p, const Vec4& a, const Vec4& b) {
  const Vec4 d = b - a;
  const double L = d.squaredNorm();
  const double t = L > 0.0 ? std::clamp((p - a).dot(d) / L, 0.0, 1.0) : 0.0;
  return (a + t * d - p).norm();
}

}  // namespace

double disk_triangle_area(const Eigen::Vector2d& a, const Eigen::Vector2d& b,
                          const Eigen::Vector2d& c, double rho) {
  if (!(rho > 0.0)) return 0.0;
  return std::abs(disk_wedge_area(a, b, rho) + disk_wedge_area(b, c, rho) +
                  disk_wedge_area(c, a, rho));
}

std::vector<BallStat> ball_stats(const SurfaceFields& fields, const Vec4& center,
                                 const std::vector<double>& radii) {
  using K = ContractError::Kind;
  if (radii.empty()) throw ContractError(K::OutOfRange, "ball_stats needs at least one radius");
  for (std::size_t k = 0; k < radii.size(); ++k)
    if (!(radii[k] > 0.0) || (k > 0 && !(radii[k] > radii[k - 1])))
      throw ContractError(K::OutOfRange, "radii must be positive and strictly ascending");

  const GridSpec& G = fields.grid();
  const double smax = radii.back();
  auto edge = [&](int i0, int j0, int i1, int j1) {
    if (point_segment_distance(center, fields.at(i0, j0).point, fields.at(i1, j1).point) < smax)
      throw ContractError(K::BallEscapesPatch, "ball of radius " + std::to_string(smax) +
                                                   " meets the patch boundary");
  };
  for (int i = 0; i + 1 < G.nx; ++i) {
    edge(i, 0, i + 1, 0);
    edge(i, G.ny - 1, i + 1, G.ny - 1);
  }
  for (int j = 0; j + 1 < G.ny; ++j) {
    edge(0, j, 0, j + 1);
    edge(G.nx - 1, j, G.nx - 1, j + 1);
  }

  const BallIntegrator integ(fields, center);
  // int (1 / 2 s^3) psi(s) ds on [a, b], composite Simpson.
  auto h_integral = [&](double a, double b) {
    constexpr int m = 64;
    const double step = (b - a) / m;
    double acc = 0.0;
    for (int k = 0; k <= m; ++k) {
      const double s = a + k * step;
      const double wk = (k == 0 || k == m) ? 1.0 : (k % 2 ? 4.0 : 2.0);
      acc += wk * integ.integrate(s).hr2 / (2.0 * s * s * s);
    }
    return acc * step / 3.0;
  };

  std::vector<BallStat> out;
  for (std::size_t k = 0; k < radii.size(); ++k) {
    const double s = radii[k];
    const auto sums = integ.integrate(s);
    BallStat st;
    st.center = center;
    st.radius = s;
    st.area_in_ball = sums.area;
    st.ratio = sums.area / (s * s);
    st.perp_in_ball = sums.perp;
    st.H2_in_ball = sums.h2;
    if (k > 0) {
      st.annulus_term = st.perp_in_ball - out.back().perp_in_ball;
      st.h_term = h_integral(radii[k - 1], s);
      st.h_cumulative = out.back().h_cumulative + st.h_term;
    }
    out.push_back(st);
  }
  return out;
}

double MonotonicityReport::min_slack() const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& p : pairs) m = std::min(m, p.slack);
  return m;
}

MonotonicityReport monotonicity_check(const std::vector<BallStat>& stats, double tol_quad) {
  MonotonicityReport rep;
  rep.tol_quad = tol_quad;
  rep.all_ok = stats.size() >= 2;
  for (std::size_t a = 0; a < stats.size(); ++a)
    for (std::size_t b = a + 1; b < stats.size(); ++b) {
      const BallStat& s1 = stats[a];
      const BallStat& s2 = stats[b];
      PairSlack p;
      p.s1 = s1.radius;
      p.s2 = s2.radius;
      p.annulus_term = s2.perp_in_ball - s1.perp_in_ball;
      p.h_term = s2.h_cumulative - s1.h_cumulative;
      p.slack = s2.ratio - s1.ratio - p.annulus_term - p.h_term;
      p.lhs_simon = s1.ratio + p.annulus_term;
      p.rhs_simon = 2.0 * (s2.ratio + s2.H2_in_ball);
      p.monotone_ok = p.slack >= -tol_quad;
      p.simon_ok = p.lhs_simon <= p.rhs_simon + tol_quad;
      rep.all_ok = rep.all_ok && p.monotone_ok && p.simon_ok;
      rep.pairs.push_back(p);
    }
  return rep;
}

double refinement_tolerance(const std::vector<BallStat>& fine, const std::vector<BallStat>& coarse) {
  if (fine.size() != coarse.size())
    throw ContractError(ContractError::Kind::OutOfRange, "refinement pair needs matching radii");
  const auto a = monotonicity_check(fine, 0.0), b = monotonicity_check(coarse, 0.0);
  double tol = 0.0;
  for (std::size_t k = 0; k < a.pairs.size(); ++k) {
    tol = std::max({tol, std::abs(a.pairs[k].slack - b.pairs[k].slack),
                    std::abs(a.pairs[k].lhs_simon - b.pairs[k].lhs_simon),
                    std::abs(a.pairs[k].rhs_simon - b.pairs[k].rhs_simon)});
  }
  return tol;
}

}  // namespace bsc
