#include "bsc/grid.hpp"

#include "bsc/errors.hpp"

#include <cmath>

namespace bsc {

GridSpec GridSpec::over(double xmin, double xmax, double ymin, double ymax, int nx, int ny) {
  GridSpec s;
  s.nx = nx;
  s.ny = ny;
  s.x0 = xmin;
  s.y0 = ymin;
  s.hx = nx > 1 ? (xmax - xmin) / (nx - 1) : 0.0;
  s.hy = ny > 1 ? (ymax - ymin) / (ny - 1) : 0.0;
  s.validate();
  return s;
}

void GridSpec::validate() const {
  using K = ContractError::Kind;
  if (nx < 3 || ny < 3) throw ContractError(K::OutOfRange, "grid needs at least 3 nodes per axis");
  if (!(hx > 0.0) || !(hy > 0.0) || !std::isfinite(hx) || !std::isfinite(hy))
    throw ContractError(K::OutOfRange, "grid spacings must be positive and finite");
  if (!std::isfinite(x0) || !std::isfinite(y0))
    throw ContractError(K::OutOfRange, "grid origin must be finite");
}

GraphPatch::GraphPatch(const GridSpec& grid, Field f, Field g)
    : grid_(grid), f_(std::move(f)), g_(std::move(g)) {
  grid_.validate();
  if (f_.rows() != grid_.nx || f_.cols() != grid_.ny || g_.rows() != grid_.nx ||
      g_.cols() != grid_.ny)
    throw ContractError(ContractError::Kind::OutOfRange, "patch arrays do not match the grid");
  if (!f_.allFinite() || !g_.allFinite())
    throw ContractError(ContractError::Kind::OutOfRange, "patch values must be finite");
  bf_ = f_;
  bg_ = g_;
}

GraphPatch GraphPatch::sample(const GridSpec& grid, const Sampler& fg) {
  grid.validate();
  Field f(grid.nx, grid.ny), g(grid.nx, grid.ny);
  for (int j = 0; j < grid.ny; ++j)
    for (int i = 0; i < grid.nx; ++i) {
      auto [fv, gv] = fg(grid.x(i), grid.y(j));
      f(i, j) = fv;
      g(i, j) = gv;
    }
  return GraphPatch(grid, std::move(f), std::move(g));
}

void GraphPatch::restore_boundary() {
  for (int j = 0; j < grid_.ny; ++j)
    for (int i = 0; i < grid_.nx; ++i)
      if (grid_.is_boundary(i, j)) {
        f_(i, j) = bf_(i, j);
        g_(i, j) = bg_(i, j);
      }
}

bool GraphPatch::boundary_intact() const {
  for (int j = 0; j < grid_.ny; ++j)
    for (int i = 0; i < grid_.nx; ++i)
      if (grid_.is_boundary(i, j) && (f_(i, j) != bf_(i, j) || g_(i, j) != bg_(i, j)))
        return false;
  return true;
}

void GraphPatch::set_boundary_from(const GraphPatch& other) {
  if (other.grid_.nx != grid_.nx || other.grid_.ny != grid_.ny)
    throw ContractError(ContractError::Kind::OutOfRange, "boundary source grid mismatch");
  bf_ = other.bf_;
  bg_ = other.bg_;
  restore_boundary();
}

GraphPatch coarsen(const GraphPatch& patch) {
  const GridSpec& G = patch.grid();
  if (G.nx % 2 == 0 || G.ny % 2 == 0 || G.nx < 5 || G.ny < 5)
    throw ContractError(ContractError::Kind::OutOfRange, "coarsening needs odd nx, ny >= 5");
  GridSpec C = G;
  C.nx = (G.nx + 1) / 2;
  C.ny = (G.ny + 1) / 2;
  C.hx = 2 * G.hx;
  C.hy = 2 * G.hy;
  Field f(C.nx, C.ny), g(C.nx, C.ny);
  for (int j = 0; j < C.ny; ++j)
    for (int i = 0; i < C.nx; ++i) {
      f(i, j) = patch.f()(2 * i, 2 * j);
      g(i, j) = patch.g()(2 * i, 2 * j);
    }
  return GraphPatch(C, std::move(f), std::move(g));
}

Stencil1D first_derivative(int i, int n, double h) {
  Stencil1D s;
  if (i > 0 && i < n - 1) {
    s.size = 2;
    s.index = {i - 1, i + 1, 0, 0};
    s.weight = {-0.5 / h, 0.5 / h, 0, 0};
  } else if (i == 0) {
    s.size = 3;
    s.index = {0, 1, 2, 0};
    s.weight = {-1.5 / h, 2.0 / h, -0.5 / h, 0};
  } else {
    s.size = 3;
    s.index = {n - 1, n - 2, n - 3, 0};
    s.weight = {1.5 / h, -2.0 / h, 0.5 / h, 0};
  }
  return s;
}

Stencil1D second_derivative(int i, int n, double h) {
  Stencil1D s;
  const double h2 = h * h;
  if (i > 0 && i < n - 1) {
    s.size = 3;
    s.index = {i - 1, i, i + 1, 0};
    s.weight = {1.0 / h2, -2.0 / h2, 1.0 / h2, 0};
  } else if (n == 3) {
    s.size = 3;
    s.index = {0, 1, 2, 0};
    s.weight = {1.0 / h2, -2.0 / h2, 1.0 / h2, 0};
  } else {
    const int d = i == 0 ? 1 : -1;
    s.size = 4;
    s.index = {i, i + d, i + 2 * d, i + 3 * d};
    s.weight = {2.0 / h2, -5.0 / h2, 4.0 / h2, -1.0 / h2};
  }
  return s;
}

}  // namespace bsc
