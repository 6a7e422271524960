#include "oneforms/frame_metric.hpp"

#include <cmath>
#include <string>

namespace oneforms {

FrameMatrix::FrameMatrix(RealMatrix a) : mat_(std::move(a)) {
  if (mat_.rows() < mat_.cols() || mat_.cols() == 0) {
    throw WrongDimension("frame must be n x m with n >= m >= 1, got " +
                         std::to_string(mat_.rows()) + " x " + std::to_string(mat_.cols()));
  }
  if (!all_finite(mat_)) throw RankDeficient("frame has non-finite entries");
  Eigen::JacobiSVD<RealMatrix> svd(mat_, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& s = svd.singularValues();
  const double threshold =
      kRankTolerance * static_cast<double>(std::max(mat_.rows(), mat_.cols())) * s(0);
  if (!(s(s.size() - 1) > threshold)) {
    throw RankDeficient("frame is rank deficient: sigma_min = " + std::to_string(s(s.size() - 1)) +
                        ", sigma_max = " + std::to_string(s(0)));
  }
  const RealMatrix& V = svd.matrixV();
  const RealMatrix& U = svd.matrixU();
  const Eigen::VectorXd sinv = s.cwiseInverse();
  pinv_ = V * sinv.asDiagonal() * U.transpose();
  gram_ = mat_.transpose() * mat_;
  gram_inv_ = V * sinv.cwiseAbs2().asDiagonal() * V.transpose();
  proj_ = U * U.transpose();
  sqrt_det_ = s.prod();
}

void require_conformal(const FrameMatrix& a, const TangentMatrix& u) {
  if (u.rows() != a.rows() || u.cols() != a.cols()) {
    throw WrongDimension("tangent is " + std::to_string(u.rows()) + " x " +
                         std::to_string(u.cols()) + ", frame is " + std::to_string(a.rows()) +
                         " x " + std::to_string(a.cols()));
  }
}

double metric(const FrameMatrix& a, const TangentMatrix& u, const TangentMatrix& v) {
  require_conformal(a, u);
  require_conformal(a, v);
  return (u * a.gram_inverse()).cwiseProduct(v).sum() * a.sqrt_det_gram();
}

double norm(const FrameMatrix& a, const TangentMatrix& u) {
  return std::sqrt(std::max(0.0, metric(a, u, u)));
}

RealMatrix to_square(const FrameMatrix& a, const TangentMatrix& u) {
  require_conformal(a, u);
  return u * a.pinv();
}

TracelessSplit traceless_split(const FrameMatrix& a, const TangentMatrix& u) {
  require_conformal(a, u);
  TracelessSplit out;
  out.trace_coeff = (a.pinv() * u).trace() / static_cast<double>(a.cols());
  out.traceless = u - out.trace_coeff * a.mat();
  return out;
}

std::pair<TangentMatrix, TangentMatrix> orthonormalize_pair(const FrameMatrix& a,
                                                            const TangentMatrix& u,
                                                            const TangentMatrix& v) {
  const double uu = metric(a, u, u);
  const double vv = metric(a, v, v);
  const double uv = metric(a, u, v);
  const double gram_det = uu * vv - uv * uv;
  if (!(uu > 0.0) || !(vv > 0.0) || !(gram_det >= 1e-12 * uu * vv)) {
    throw DegeneratePlane("tangent vectors do not span a 2-plane");
  }
  const double nu = std::sqrt(uu);
  TangentMatrix e1 = u / nu;
  TangentMatrix e2 = v - (uv / nu) * e1;
  const double n2 = norm(a, e2);
  e2 /= n2;
  return {std::move(e1), std::move(e2)};
}

ProductPoint make_product_point(double rho, const FrameMatrix& beta) {
  if (!(rho > 0.0) || !std::isfinite(rho)) throw GeometryError("product point needs rho > 0");
  const double d = beta.sqrt_det_gram() * beta.sqrt_det_gram();
  if (std::abs(d - 1.0) <= 1e-10) return ProductPoint{rho, beta, false};
  const double m = static_cast<double>(beta.cols());
  return ProductPoint{rho, FrameMatrix(beta.mat() * std::pow(d, -0.5 / m)), true};
}

ProductPoint product_decompose(const FrameMatrix& a) {
  const double rho = a.sqrt_det_gram();
  const double m = static_cast<double>(a.cols());
  return make_product_point(rho, FrameMatrix(a.mat() * std::pow(rho, -1.0 / m)));
}

FrameMatrix product_compose(const ProductPoint& p) {
  const double m = static_cast<double>(p.beta.cols());
  return FrameMatrix(std::pow(p.rho, 1.0 / m) * p.beta.mat());
}

namespace {

void require_unimodular(const ProductPoint& p, const TangentMatrix& h) {
  require_conformal(p.beta, h);
  const RealMatrix hb = h * p.beta.pinv();
  const double t = hb.trace();
  if (std::abs(t) > 1e-10 * std::max(1.0, hb.norm())) {
    throw NotUnimodularTangent("tr(h beta^+) = " + std::to_string(t) + " is not zero");
  }
}

}  // namespace

double product_metric(const ProductPoint& p, const ProductTangent& x, const ProductTangent& y) {
  require_unimodular(p, x.h);
  require_unimodular(p, y.h);
  const double m = static_cast<double>(p.beta.cols());
  const double shape = (x.h * p.beta.gram_inverse()).cwiseProduct(y.h).sum() * p.rho;
  return shape + x.nu * y.nu / (m * p.rho);
}

TangentMatrix product_differential(const ProductPoint& p, const ProductTangent& x) {
  require_conformal(p.beta, x.h);
  const double m = static_cast<double>(p.beta.cols());
  const double r = std::pow(p.rho, 1.0 / m);
  return (r / (m * p.rho) * x.nu) * p.beta.mat() + r * x.h;
}

ProductTangent product_tangent(const FrameMatrix& a, const TangentMatrix& u) {
  const TracelessSplit split = traceless_split(a, u);
  const double m = static_cast<double>(a.cols());
  const double rho = a.sqrt_det_gram();
  return ProductTangent{rho * m * split.trace_coeff, std::pow(rho, -1.0 / m) * split.traceless};
}

}  // namespace oneforms
