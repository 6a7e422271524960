#pragma once

// The scale-invariant metric tr(u (a^T a)^{-1} v^T) sqrt(det(a^T a)) on
// full-rank n x m matrices.

#include <utility>

#include "oneforms/errors.hpp"
#include "oneforms/linalg.hpp"

namespace oneforms {

/// Tangent vectors at any frame are plain n x m matrices.
using TangentMatrix = RealMatrix;

/// A full-column-rank n x m matrix with its Gram data cached.
class FrameMatrix {
 public:
  /// Throws RankDeficient if a fails the rank tolerance.
  explicit FrameMatrix(RealMatrix a);

  const RealMatrix& mat() const { return mat_; }
  const RealMatrix& gram() const { return gram_; }
  const RealMatrix& gram_inverse() const { return gram_inv_; }
  const RealMatrix& pinv() const { return pinv_; }
  /// Orthogonal projector a a^+ onto the column space (n x n).
  const RealMatrix& projector() const { return proj_; }
  double sqrt_det_gram() const { return sqrt_det_; }

  Index rows() const { return mat_.rows(); }
  Index cols() const { return mat_.cols(); }

 private:
  RealMatrix mat_;
  RealMatrix gram_;
  RealMatrix gram_inv_;
  RealMatrix pinv_;
  RealMatrix proj_;
  double sqrt_det_ = 0.0;
};

/// Throws WrongDimension unless u has the shape of a.
void require_conformal(const FrameMatrix& a, const TangentMatrix& u);

double metric(const FrameMatrix& a, const TangentMatrix& u, const TangentMatrix& v);
double norm(const FrameMatrix& a, const TangentMatrix& u);

/// U = u a^+ (n x n); metric(a,u,v) = tr(U V^T) sqrt(det(a^T a)).
RealMatrix to_square(const FrameMatrix& a, const TangentMatrix& u);

struct TracelessSplit {
  TangentMatrix traceless;
  double trace_coeff = 0.0;  // tr(u a^+) / m
};

/// u = traceless + trace_coeff * a with tr(traceless a^+) = 0.
TracelessSplit traceless_split(const FrameMatrix& a, const TangentMatrix& u);

/// Metric Gram-Schmidt: u is normalized first, then v is projected and
/// normalized. Throws DegeneratePlane when the metric Gram determinant of
/// (u, v) is below 1e-12 |u|^2 |v|^2.
std::pair<TangentMatrix, TangentMatrix> orthonormalize_pair(const FrameMatrix& a,
                                                            const TangentMatrix& u,
                                                            const TangentMatrix& v);

/// a = rho^{1/m} beta with rho = sqrt(det(a^T a)) and det(beta^T beta) = 1.
struct ProductPoint {
  double rho = 1.0;
  FrameMatrix beta;
  bool renormalized = false;  // beta was pushed back onto det = 1
};

/// Builds a ProductPoint, rescaling beta when det(beta^T beta) is off by more
/// than 1e-10 relative (flagged, not rejected).
ProductPoint make_product_point(double rho, const FrameMatrix& beta);

ProductPoint product_decompose(const FrameMatrix& a);
FrameMatrix product_compose(const ProductPoint& p);

/// Tangent (d rho, d beta) of the product chart.
struct ProductTangent {
  double nu = 0.0;
  TangentMatrix h;
};

/// Ḡ((nu1,h1),(nu2,h2)) = tr(h1 (b^T b)^{-1} h2^T) rho + nu1 nu2 / (m rho).
/// Throws NotUnimodularTangent unless tr(h b^+) vanishes for both tangents.
double product_metric(const ProductPoint& p, const ProductTangent& x, const ProductTangent& y);

/// Pushes (nu, h) forward through product_compose.
TangentMatrix product_differential(const ProductPoint& p, const ProductTangent& x);

/// Inverse of product_differential at a = product_compose(p).
ProductTangent product_tangent(const FrameMatrix& a, const TangentMatrix& u);

}  // namespace oneforms
