#include "oneforms/submersion.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "oneforms/curvature.hpp"

namespace oneforms {

SymPoint::SymPoint(const RealMatrix& g) {
  if (g.rows() != g.cols() || g.rows() == 0) throw WrongDimension("SymPoint needs a square matrix");
  if (!all_finite(g)) throw NotSPD("SymPoint has non-finite entries");
  const double scale = std::max(1.0, g.cwiseAbs().maxCoeff());
  if ((g - g.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw NotSPD("SymPoint is not symmetric");
  }
  g_ = symmetric_part(g);
  Eigen::SelfAdjointEigenSolver<RealMatrix> es(g_);
  const Eigen::VectorXd& ev = es.eigenvalues();
  const double rel = kRankTolerance * static_cast<double>(g_.rows());
  if (es.info() != Eigen::Success || !(ev.maxCoeff() > 0.0) ||
      !(ev.minCoeff() > rel * rel * ev.maxCoeff())) {
    throw NotSPD("SymPoint is not positive definite");
  }
  const RealMatrix& V = es.eigenvectors();
  inv_ = symmetric_part(V * ev.cwiseInverse().asDiagonal() * V.transpose());
  sqrt_det_ = std::sqrt(ev.prod());
}

namespace {

void require_sym_tangent(const SymPoint& g, const SymTangent& h) {
  if (h.rows() != g.dim() || h.cols() != g.dim()) {
    throw WrongDimension("symmetric tangent has the wrong size");
  }
  const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
  if ((h - h.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw GeometryError("symmetric tangent is not symmetric");
  }
}

double trace_product(const RealMatrix& x, const RealMatrix& y) {
  return x.cwiseProduct(y.transpose()).sum();
}

}  // namespace

SymPoint project_pi(const FrameMatrix& a) { return SymPoint(symmetric_part(a.gram())); }

SymTangent dpi(const FrameMatrix& a, const TangentMatrix& v) {
  require_conformal(a, v);
  const RealMatrix x = a.mat().transpose() * v;
  return x + x.transpose();
}

HorizontalVertical split_horizontal_vertical(const FrameMatrix& a, const TangentMatrix& u) {
  require_conformal(a, u);
  const RealMatrix& P = a.projector();
  const RealMatrix U = u * a.pinv();
  const RealMatrix PUP = P * U * P;
  const RealMatrix Q = RealMatrix::Identity(P.rows(), P.cols()) - P;
  const RealMatrix X = skew_part(PUP) + Q * U - P * U.transpose() * Q;
  HorizontalVertical out;
  out.horizontal = symmetric_part(PUP) * a.mat();
  out.vertical = X * a.mat();
  return out;
}

TangentMatrix horizontal_lift(const FrameMatrix& a, const SymTangent& h) {
  if (h.rows() != a.cols() || h.cols() != a.cols()) {
    throw WrongDimension("horizontal_lift: h must be m x m");
  }
  return 0.5 * a.pinv().transpose() * h;
}

OrbitDecomposition orbit_decompose(const FrameMatrix& a) {
  const Index n = a.rows();
  const Index m = a.cols();
  OrbitDecomposition out;
  const RealMatrix g = symmetric_part(a.gram());
  out.s = sym_sqrt(g);
  out.z = RealMatrix::Zero(n, n);
  out.z.leftCols(m) = a.mat() * sym_inv_sqrt(g);
  for (Index k = m; k < n; ++k) {
    const auto basis = out.z.leftCols(k);
    RealMatrix residual = RealMatrix::Identity(n, n) - basis * basis.transpose();
    Index pick = 0;
    residual.colwise().norm().maxCoeff(&pick);
    Eigen::VectorXd col = residual.col(pick);
    col -= basis * (basis.transpose() * col);  // second pass keeps it orthogonal
    out.z.col(k) = col.normalized();
  }
  return out;
}

double sym_metric(const SymPoint& g, const SymTangent& h, const SymTangent& k) {
  require_sym_tangent(g, h);
  require_sym_tangent(g, k);
  const RealMatrix& gi = g.inverse();
  return 0.25 * trace_product(h * gi, k * gi) * g.sqrt_det();
}

SymTangent sym_geodesic_rhs(const SymPoint& g, const SymTangent& gt) {
  require_sym_tangent(g, gt);
  const RealMatrix A = g.inverse() * gt;
  const RealMatrix out = gt * A + 0.25 * trace_product(A, A) * g.g() - 0.5 * A.trace() * gt;
  return symmetric_part(out);
}

namespace {

double sym_area(const SymPoint& g, const SymTangent& h, const SymTangent& k) {
  const double hh = sym_metric(g, h, h);
  const double kk = sym_metric(g, k, k);
  const double hk = sym_metric(g, h, k);
  const double area = hh * kk - hk * hk;
  if (!(hh > 0.0) || !(kk > 0.0) || !(area >= 1e-12 * hh * kk)) {
    throw DegeneratePlane("symmetric tangents do not span a 2-plane");
  }
  return area;
}

}  // namespace

double sym_sectional(const SymPoint& g, const SymTangent& h, const SymTangent& k) {
  const double area = sym_area(g, h, k);
  const double m = static_cast<double>(g.dim());
  const RealMatrix A = g.inverse() * h;
  const RealMatrix B = g.inverse() * k;
  const RealMatrix C = A * B - B * A;
  const double tA = A.trace();
  const double tB = B.trace();
  const double ab = trace_product(A, B) - tA * tB / m;
  const double aa = trace_product(A, A) - tA * tA / m;
  const double bb = trace_product(B, B) - tB * tB / m;
  const double q = (trace_product(C, C) + 0.25 * m * (ab * ab - aa * bb)) / 16.0 * g.sqrt_det();
  return q / area;
}

double sym_sectional_published(const SymPoint& g, const SymTangent& h, const SymTangent& k) {
  const double area = sym_area(g, h, k);
  const double m = static_cast<double>(g.dim());
  const RealMatrix A = g.inverse() * h;
  const RealMatrix B = g.inverse() * k;
  const RealMatrix C = A * B - B * A;
  const double ab = trace_product(A, B);
  const double q = (trace_product(C, C) + 0.25 * m * ab * ab -
                    0.25 * m * trace_product(A, A) * trace_product(B, B)) /
                   16.0 * g.sqrt_det();
  return q / area;
}

OneillCheck oneill_check(const FrameMatrix& a, const TangentMatrix& u, const TangentMatrix& v) {
  for (const TangentMatrix* w : {&u, &v}) {
    const RealMatrix W = to_square(a, *w);
    if (skew_part(W).norm() > 1e-8 * std::max(1e-300, W.norm())) {
      throw GeometryError("oneill_check needs horizontal tangents");
    }
  }
  const auto [e1, e2] = orthonormalize_pair(a, u, v);
  OneillCheck out;
  out.k_mat = sectional(a, e1, e2);
  out.k_sym = sym_sectional(project_pi(a), symmetric_part(dpi(a, e1)), symmetric_part(dpi(a, e2)));
  const RealMatrix U = to_square(a, e1);
  const RealMatrix V = to_square(a, e2);
  const RealMatrix C = U * V - V * U;
  out.oneill_term = 0.75 * C.squaredNorm() * a.sqrt_det_gram();
  return out;
}

FrameMatrix lift_metric_to_frame(const SymPoint& g, const FrameMatrix& a0) {
  if (g.dim() != a0.cols()) throw WrongDimension("lift_metric_to_frame: g must be m x m");
  const RealMatrix g0 = symmetric_part(a0.gram());
  const RealMatrix r = sym_sqrt(g0);
  const RealMatrix ri = sym_inv_sqrt(g0);
  const RealMatrix S = sym_sqrt(symmetric_part(ri * g.g() * ri));
  return FrameMatrix(a0.mat() * (ri * S * r));
}

}  // namespace oneforms
