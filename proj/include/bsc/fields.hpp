#pragma once

#include "bsc/geometry.hpp"
#include "bsc/grid.hpp"

#include <vector>

namespace bsc {

/// Finite-difference two-jet at node (i, j). Central stencils inside,
/// second-order one-sided ones on the boundary rows and columns.
Jet<double> compute_jet(const GraphPatch& patch, int i, int j);

struct NodeGeometry {
  Jet<double> jet;
  FirstFundamental<double> fund;
  KahlerData<double> kahler;
  ExtrinsicData<double> ext;
  Vec4 point;
  double weight = 0.0;  // trapezoidal area weight sqrt(det) hx hy (halved on edges)

  double normA() const;
};

/// Per-node geometry of a whole patch.
class SurfaceFields {
 public:
  SurfaceFields() = default;
  explicit SurfaceFields(const GraphPatch& patch);

  const GridSpec& grid() const { return grid_; }
  const NodeGeometry& at(int i, int j) const { return nodes_[j * grid_.nx + i]; }
  double area() const { return area_; }
  double min_cos_alpha() const;
  double cos_alpha(int i, int j) const { return at(i, j).kahler.cos_alpha; }
  Field cos_alpha_field() const;
  Field weight_field() const;

  /// Throws ContractError(NonSymplectic) unless cos(alpha) > 0 everywhere.
  void require_symplectic(const char* what) const;

 private:
  GridSpec grid_;
  std::vector<NodeGeometry> nodes_;
  double area_ = 0.0;
};

inline SurfaceFields surface_fields(const GraphPatch& patch) { return SurfaceFields(patch); }

/// Trapezoidal weight factor (1, 1/2 on edges, 1/4 at corners).
double trapezoid_factor(const GridSpec& grid, int i, int j);

/// Intrinsic Gauss curvature from the metric field alone (Brioschi formula,
/// central differences of g_ij). Valid for 2 <= i <= nx-3, 2 <= j <= ny-3.
double brioschi_curvature(const GraphPatch& patch, int i, int j);
double brioschi_curvature(const SurfaceFields& fields, int i, int j);

bool brioschi_defined(const GridSpec& grid, int i, int j);

}  // namespace bsc
