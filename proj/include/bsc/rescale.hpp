#pragma once

#include "bsc/fields.hpp"

#include <Eigen/Core>

namespace bsc {

struct MaxCurvature {
  int i = 1, j = 1;
  double lambda = 0.0;  // |A| at (i, j)
};

/// Largest |A| over interior nodes; ties go to the smallest (i, j).
MaxCurvature find_max_A(const SurfaceFields& fields);

struct RescaleSpec {
  int ci = 0, cj = 0;
  double lambda = 0.0;
  Vec4 t1 = Vec4::Zero(), t2 = Vec4::Zero();  // orthonormal tangent frame at the centre
  GridSpec output;                            // in rescaled coordinates, centred at 0
};

/// Spec at a node: lambda = |A| there, tangent frame by Gram-Schmidt of
/// (dF/dx, dF/dy), output grid of n x n nodes on [-half_width, half_width]^2.
RescaleSpec make_rescale_spec(const SurfaceFields& fields, int i, int j, int n, double half_width);

/// Ambient rotation for the blow-up. When the tangent plane is symplectic
/// the rotation is unitary (commutes with J) and maps it onto
/// span{E1, cos(a) E2 + sin(a) E3}, a graph over the (x, y)-plane; otherwise
/// it is the orthogonal frame (t1, t2, n3, n4) and `unitary` is false.
struct AmbientRotation {
  Eigen::Matrix4d R = Eigen::Matrix4d::Identity();  // rows are the new axes
  bool unitary = false;
};
AmbientRotation blowup_rotation(const RescaleSpec& spec);

struct RescaleOutcome {
  GraphPatch patch;
  bool non_symplectic_center = false;  // holomorphy comparison disabled
};

/// lambda R (F - F(center)) re-expressed as a graph on spec.output, sampling
/// (f, g) by bicubic convolution. Throws DegenerateRescale when lambda times
/// the patch extent is at most 1e-10 (a plane up to roundoff).
RescaleOutcome rescale_to_graph(const GraphPatch& patch, const RescaleSpec& spec);

/// sup over nodes of sin^2(alpha) = (a^2 + b^2) / det g.
double holomorphy_deficit(const SurfaceFields& fields);

/// Keys cubic-convolution interpolant of a nodal field with its gradient.
struct Interpolated {
  double value = 0.0, dx = 0.0, dy = 0.0;
};
/// Returns false when the 4 x 4 stencil leaves the grid.
bool bicubic(const GridSpec& grid, const Field& v, double x, double y, Interpolated& out);

}  // namespace bsc
