#include "oneforms/geodesics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace oneforms {

TangentMatrix geodesic_rhs(const FrameMatrix& a, const TangentMatrix& at) {
  require_conformal(a, at);
  const RealMatrix& gi = a.gram_inverse();
  const RealMatrix& A = a.mat();
  const RealMatrix atgi = at * gi;
  const RealMatrix atA = at.transpose() * A;  // m x m
  return atgi * atA + atgi * atA.transpose() - A * (gi * (at.transpose() * at)) +
         0.5 * atgi.cwiseProduct(at).sum() * A - atgi.cwiseProduct(A).sum() * at;
}

GeodesicSolution GeodesicSolution::solve(const FrameMatrix& a0, const TangentMatrix& u0) {
  require_conformal(a0, u0);
  if (!all_finite(u0)) throw GeometryError("initial velocity has non-finite entries");
  GeodesicSolution sol(a0, u0);
  const double m = static_cast<double>(a0.cols());
  const RealMatrix& A = a0.mat();
  const Index n = a0.rows();

  const double c = u0.cwiseProduct(A).sum() / A.squaredNorm();
  sol.scaling_ = (u0 - c * A).norm() <= kParallelTolerance * u0.norm();

  if (sol.scaling_) {
    // exact scaling data so that the blow-up time is exactly 2/(|c| m)
    sol.tau0_ = c * m;
    sol.delta0_ = c * c * m;
    sol.eps_ = 0.0;
    sol.omega0_ = RealMatrix::Zero(n, n);
    sol.P0_ = RealMatrix::Zero(a0.cols(), a0.cols());
  } else {
    const RealMatrix L0 = u0 * a0.pinv();
    sol.tau0_ = L0.trace();
    sol.delta0_ = L0.squaredNorm();
    // m delta0 - tau0^2 = m |L0 - (tau0/m) a0 a0^+|^2, free of cancellation
    sol.eps_ = std::sqrt(m) * (L0 - (sol.tau0_ / m) * a0.projector()).norm();
    sol.omega0_ = L0.transpose() - L0;
    sol.P0_ = a0.gram_inverse() * (u0.transpose() * A) -
              (sol.tau0_ / m) * RealMatrix::Identity(a0.cols(), a0.cols());
  }
  if (sol.tau0_ * sol.tau0_ > m * sol.delta0_ * (1.0 + 1e-12) + 1e-300) {
    throw GeometryError("Cauchy-Schwarz gate violated: tau0^2 > m delta0");
  }
  if (sol.eps_ == 0.0 && sol.tau0_ < 0.0) sol.blowup_ = -2.0 / sol.tau0_;
  return sol;
}

bool GeodesicSolution::in_domain(double t) const {
  if (!std::isfinite(t)) return false;
  if (eps_ > 0.0 || tau0_ == 0.0) return true;
  const double root = -2.0 / tau0_;
  return root > 0.0 ? t < root : t > root;
}

double GeodesicSolution::f(double t) const {
  const double x = 2.0 + tau0_ * t;
  const double y = eps_ * t;
  return 0.25 * (x * x + y * y);
}

double GeodesicSolution::df(double t) const {
  return 0.5 * (eps_ * eps_ * t + tau0_ * (2.0 + tau0_ * t));
}

double GeodesicSolution::s(double t) const {
  // atan2 never crosses its cut for t != 0, so this is the continuous branch
  if (eps_ > 0.0) return 2.0 / eps_ * std::atan2(eps_ * t, 2.0 + tau0_ * t);
  return 2.0 * t / (2.0 + tau0_ * t);
}

void GeodesicSolution::require_domain(double t) const {
  if (in_domain(t)) return;
  const double limit = blowup_ ? *blowup_ : (tau0_ != 0.0 ? -2.0 / tau0_ : 0.0);
  throw BeyondBlowup("geodesic evaluated at t = " + std::to_string(t) +
                         " outside its domain (frame collapses at t = " +
                         std::to_string(limit) + ")",
                     limit);
}

GeodesicState GeodesicSolution::eval(double t) const {
  require_domain(t);
  if (t == 0.0) return {a0_, u0_};
  const double m = static_cast<double>(a0_.cols());
  const double ft = f(t);
  const double scale = std::pow(ft, 1.0 / m);
  if (scaling_) {
    RealMatrix a = scale * a0_.mat();
    TangentMatrix at = (df(t) / (m * ft)) * a;
    return {FrameMatrix(std::move(a)), std::move(at)};
  }
  const double st = s(t);
  const RealMatrix left = matrix_exp(-st * omega0_);
  const RealMatrix right = matrix_exp(st * P0_);
  RealMatrix a = scale * (left * a0_.mat() * right);
  TangentMatrix at = (1.0 / ft) * ((df(t) / m) * a - omega0_ * a + a * P0_);
  return {FrameMatrix(std::move(a)), std::move(at)};
}

RealMatrix GeodesicSolution::velocity_field(double t) const {
  const GeodesicState st = eval(t);
  return st.at * st.a.pinv();
}

GeodesicSolution solve_ivp(const FrameMatrix& a0, const TangentMatrix& u0) {
  return GeodesicSolution::solve(a0, u0);
}

GeodesicState eval_geodesic(const GeodesicSolution& sol, double t) { return sol.eval(t); }

TauDelta tau_delta_check(const GeodesicSolution& sol, double t) {
  if (!sol.in_domain(t)) (void)sol.eval(t);  // raises BeyondBlowup
  const double ft = sol.f(t);
  return {sol.df(t) / ft, sol.delta0() / ft};
}

RankLossAt::RankLossAt(double t, MatrixPath partial)
    : GeometryError("frame lost rank at t = " + std::to_string(t)),
      time_(t),
      partial_(std::move(partial)) {}

namespace {

bool collapsed(const RealMatrix& a, double floor) {
  const RankDiagnostics d = rank_diagnostics(a);
  return !d.full_rank || d.sigma_min <= floor;
}

}  // namespace

MatrixPath integrate_numeric(const FrameMatrix& a0, const TangentMatrix& u0, double T,
                             int steps) {
  require_conformal(a0, u0);
  if (steps < 1 || !(T > 0.0)) throw GeometryError("integrate_numeric needs T > 0 and steps >= 1");
  const double floor = kRankTolerance *
                       static_cast<double>(std::max(a0.rows(), a0.cols())) *
                       rank_diagnostics(a0.mat()).sigma_max;
  const double h = T / steps;

  MatrixPath path;
  path.times.push_back(0.0);
  path.frames.push_back(a0);
  path.velocities.push_back(u0);

  RealMatrix a = a0.mat();
  RealMatrix v = u0;
  auto accel = [&](const RealMatrix& x, const RealMatrix& xt, double t) {
    if (collapsed(x, floor)) throw RankLossAt(t, path);
    return geodesic_rhs(FrameMatrix(x), xt);
  };

  for (int k = 0; k < steps; ++k) {
    const double t = T * k / steps;
    const RealMatrix ka1 = v;
    const RealMatrix kv1 = accel(a, v, t);
    const RealMatrix ka2 = v + 0.5 * h * kv1;
    const RealMatrix kv2 = accel(a + 0.5 * h * ka1, ka2, t + 0.5 * h);
    const RealMatrix ka3 = v + 0.5 * h * kv2;
    const RealMatrix kv3 = accel(a + 0.5 * h * ka2, ka3, t + 0.5 * h);
    const RealMatrix ka4 = v + h * kv3;
    const RealMatrix kv4 = accel(a + h * ka3, ka4, t + h);
    a += (h / 6.0) * (ka1 + 2.0 * ka2 + 2.0 * ka3 + ka4);
    v += (h / 6.0) * (kv1 + 2.0 * kv2 + 2.0 * kv3 + kv4);
    const double t_next = T * (k + 1) / steps;
    if (!all_finite(a) || collapsed(a, floor)) throw RankLossAt(t_next, path);
    path.times.push_back(t_next);
    path.frames.emplace_back(a);
    path.velocities.push_back(v);
  }
  return path;
}

namespace {

template <class F>
double trapezoid(const MatrixPath& path, F integrand) {
  if (path.size() == 0) throw GeometryError("empty path");
  double sum = 0.0;
  double prev = integrand(0);
  for (std::size_t i = 1; i < path.size(); ++i) {
    const double cur = integrand(i);
    sum += 0.5 * (path.times[i] - path.times[i - 1]) * (prev + cur);
    prev = cur;
  }
  return sum;
}

}  // namespace

double path_energy(const MatrixPath& path) {
  return trapezoid(path, [&](std::size_t i) {
    return metric(path.frames[i], path.velocities[i], path.velocities[i]);
  });
}

double path_length(const MatrixPath& path) {
  return trapezoid(path, [&](std::size_t i) { return norm(path.frames[i], path.velocities[i]); });
}

MatrixPath sample_geodesic(const GeodesicSolution& sol, double T, int steps) {
  if (steps < 1) throw GeometryError("sample_geodesic needs steps >= 1");
  MatrixPath path;
  for (int k = 0; k <= steps; ++k) {
    const double t = T * k / steps;
    GeodesicState st = sol.eval(t);
    path.times.push_back(t);
    path.frames.push_back(std::move(st.a));
    path.velocities.push_back(std::move(st.at));
  }
  return path;
}

namespace {

struct Shooter {
  const FrameMatrix& a0;
  int max_iter;

  // a(1) - target, or nothing when the geodesic does not reach t = 1
  std::optional<RealMatrix> residual(const RealMatrix& u, const RealMatrix& target) const {
    try {
      const GeodesicSolution sol = GeodesicSolution::solve(a0, u);
      if (!sol.in_domain(1.0)) return std::nullopt;
      RealMatrix r = sol.eval(1.0).a.mat() - target;
      if (!all_finite(r)) return std::nullopt;
      return r;
    } catch (const GeometryError&) {
      return std::nullopt;
    }
  }

  // Returns true on convergence; `best` always holds the best iterate seen.
  bool newton(RealMatrix u, const RealMatrix& target, double tol, ShootResult& best) const {
    const Index rows = u.rows();
    const Index cols = u.cols();
    const Index dim = rows * cols;
    auto r = residual(u, target);
    if (!r) return false;
    double rn = r->norm();
    best = ShootResult{u, rn, 0, 0.0};
    for (int it = 1; it <= max_iter && rn > tol; ++it) {
      RealMatrix J(dim, dim);
      const double h = 1e-6 * std::max(1.0, u.cwiseAbs().maxCoeff());
      for (Index k = 0; k < dim; ++k) {
        RealMatrix up = u, um = u;
        up.data()[k] += h;
        um.data()[k] -= h;
        auto rp = residual(up, target);
        auto rm = residual(um, target);
        RealMatrix col;
        if (rp && rm) {
          col = (*rp - *rm) / (2.0 * h);
        } else if (rp) {
          col = (*rp - *r) / h;
        } else if (rm) {
          col = (*r - *rm) / h;
        } else {
          return false;
        }
        J.col(k) = Eigen::Map<const Eigen::VectorXd>(col.data(), dim);
      }
      const Eigen::VectorXd rhs = -Eigen::Map<const Eigen::VectorXd>(r->data(), dim);
      const Eigen::VectorXd step = J.completeOrthogonalDecomposition().solve(rhs);
      const RealMatrix du = Eigen::Map<const RealMatrix>(step.data(), rows, cols);

      bool accepted = false;
      double lambda = 1.0;
      for (int halving = 0; halving < 40; ++halving, lambda *= 0.5) {
        RealMatrix cand = u + lambda * du;
        auto rc = residual(cand, target);
        if (rc && rc->norm() < rn) {
          u = std::move(cand);
          r = std::move(rc);
          rn = r->norm();
          accepted = true;
          break;
        }
      }
      best = ShootResult{u, rn, it, 0.0};
      if (!accepted) break;
    }
    return rn <= tol;
  }
};

}  // namespace

ShootResult shoot_bvp(const FrameMatrix& a0, const FrameMatrix& a1, int max_iter, double tol) {
  require_conformal(a0, a1.mat());
  const Shooter shooter{a0, max_iter};
  auto finish = [&](ShootResult r) {
    r.length = norm(a0, r.u0);
    return r;
  };

  ShootResult best;
  best.u0 = RealMatrix::Zero(a0.rows(), a0.cols());
  best.residual = (a0.mat() - a1.mat()).norm();
  if (best.residual <= tol) return finish(best);

  ShootResult attempt;
  if (shooter.newton(a1.mat() - a0.mat(), a1.mat(), tol, attempt)) return finish(attempt);
  if (attempt.residual < best.residual) best = attempt;

  // continuation along the straight segment a0 -> a1
  for (int pieces : {8, 32}) {
    RealMatrix u = RealMatrix::Zero(a0.rows(), a0.cols());
    bool ok = true;
    for (int k = 1; k <= pieces && ok; ++k) {
      const double lam = static_cast<double>(k) / pieces;
      const RealMatrix target = (1.0 - lam) * a0.mat() + lam * a1.mat();
      if (!rank_diagnostics(target).full_rank) {
        ok = false;
        break;
      }
      ShootResult stage;
      const bool last = k == pieces;
      ok = shooter.newton(u, target, last ? tol : 1e-8, stage);
      if (last && stage.residual < best.residual) best = stage;
      u = stage.u0;
    }
    if (ok) return finish(best);
  }
  throw NoConvergence("shooting did not reach residual " + std::to_string(tol) +
                          " (best " + std::to_string(best.residual) + ")",
                      finish(best));
}

double scaling_upper_bound(const FrameMatrix& a, const FrameMatrix& b) {
  require_conformal(a, b.mat());
  if (a.rows() == a.cols() && a.mat().determinant() * b.mat().determinant() < 0.0) {
    return std::numeric_limits<double>::infinity();
  }
  const double m = static_cast<double>(a.cols());
  return 2.0 / std::sqrt(m) * (std::sqrt(a.sqrt_det_gram()) + std::sqrt(b.sqrt_det_gram()));
}

double volume_lower_bound(const FrameMatrix& a, const FrameMatrix& b) {
  require_conformal(a, b.mat());
  const double m = static_cast<double>(a.cols());
  return 2.0 / std::sqrt(m) * std::abs(std::sqrt(a.sqrt_det_gram()) - std::sqrt(b.sqrt_det_gram()));
}

}  // namespace oneforms
