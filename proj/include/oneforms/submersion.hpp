#pragma once

// pi(a) = a^T a from frames onto Sym+(m) with the Ebin-type metric
// 1/4 tr(h g^{-1} k g^{-1}) sqrt(det g).

#include <utility>

#include "oneforms/frame_metric.hpp"

namespace oneforms {

/// Symmetric positive-definite m x m matrix with cached inverse.
class SymPoint {
 public:
  /// Throws NotSPD if g is asymmetric beyond 1e-12 relative or not positive
  /// definite within the rank tolerance.
  explicit SymPoint(const RealMatrix& g);

  const RealMatrix& g() const { return g_; }
  const RealMatrix& inverse() const { return inv_; }
  double sqrt_det() const { return sqrt_det_; }
  Index dim() const { return g_.rows(); }

 private:
  RealMatrix g_;
  RealMatrix inv_;
  double sqrt_det_ = 0.0;
};

/// Tangent vectors at g are symmetric m x m matrices.
using SymTangent = RealMatrix;

SymPoint project_pi(const FrameMatrix& a);

/// a^T v + v^T a
SymTangent dpi(const FrameMatrix& a, const TangentMatrix& v);

struct HorizontalVertical {
  TangentMatrix horizontal;  // h a^+ symmetric
  TangentMatrix vertical;    // X a with X skew
};

/// Metric-orthogonal split of u along the fibers of pi.
HorizontalVertical split_horizontal_vertical(const FrameMatrix& a, const TangentMatrix& u);

/// 1/2 (a^+)^T h: the horizontal v with dpi(a, v) = h.
TangentMatrix horizontal_lift(const FrameMatrix& a, const SymTangent& h);

struct OrbitDecomposition {
  RealMatrix z;  // n x n orthogonal
  RealMatrix s;  // m x m SPD, s = sqrt(a^T a)
};

/// a = z (s; 0). The first m columns of z are a s^{-1}; the rest complete
/// them greedily from the standard basis (largest residual first).
OrbitDecomposition orbit_decompose(const FrameMatrix& a);

double sym_metric(const SymPoint& g, const SymTangent& h, const SymTangent& k);

/// g_tt for a geodesic of Sym+(m) through g with velocity gt.
SymTangent sym_geodesic_rhs(const SymPoint& g, const SymTangent& gt);

/// Sectional curvature of the plane spanned by h, k. Uses the trace-corrected
/// quadratic form divided by the metric area. Throws DegeneratePlane.
double sym_sectional(const SymPoint& g, const SymTangent& h, const SymTangent& k);

/// The published form (1/16)[tr([A,B]^2) + m/4 (tr AB)^2 - m/4 tr A^2 tr B^2]
/// sqrt(det g), A = g^{-1}h, B = g^{-1}k, divided by the metric area. Agrees
/// with sym_sectional only when tr A = tr B = 0.
double sym_sectional_published(const SymPoint& g, const SymTangent& h, const SymTangent& k);

struct OneillCheck {
  double k_sym = 0.0;
  double k_mat = 0.0;
  double oneill_term = 0.0;  // 3/4 |[U,V]|^2 sqrt(det a^T a)

  double defect() const { return k_sym - (k_mat + oneill_term); }
};

/// Orthonormalizes the horizontal pair (u, v) and evaluates both sides of
/// k_sym = k_mat + oneill_term. Throws GeometryError if u or v is not
/// horizontal, DegeneratePlane if they are dependent.
OneillCheck oneill_check(const FrameMatrix& a, const TangentMatrix& u, const TangentMatrix& v);

/// b = a0 sqrt(Y), Y = g0^{-1} g, g0 = a0^T a0, so that b^T b = g.
FrameMatrix lift_metric_to_frame(const SymPoint& g, const FrameMatrix& a0);

}  // namespace oneforms
