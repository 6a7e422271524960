#pragma once

#include <optional>
#include <vector>

#include "oneforms/frame_metric.hpp"

namespace oneforms {

/// a_tt for a geodesic through a with velocity at.
TangentMatrix geodesic_rhs(const FrameMatrix& a, const TangentMatrix& at);

struct GeodesicState {
  FrameMatrix a;
  TangentMatrix at;
};

/// u0 counts as a multiple of a0 when |u0 - c a0|_F <= this * |u0|_F.
inline constexpr double kParallelTolerance = 1e-10;

/// Closed-form geodesic a(t) = f^{1/m} exp(-s omega0) a0 exp(s P0).
class GeodesicSolution {
 public:
  static GeodesicSolution solve(const FrameMatrix& a0, const TangentMatrix& u0);

  const FrameMatrix& a0() const { return a0_; }
  const TangentMatrix& u0() const { return u0_; }
  double tau0() const { return tau0_; }
  double delta0() const { return delta0_; }
  /// sqrt(m delta0 - tau0^2)
  double eps() const { return eps_; }
  const RealMatrix& omega0() const { return omega0_; }
  const RealMatrix& P0() const { return P0_; }
  /// Finite forward time at which the frame collapses to zero.
  std::optional<double> blowup() const { return blowup_; }
  /// True when u0 was classified as a multiple of a0.
  bool is_scaling() const { return scaling_; }

  /// f > 0 on the closed interval between 0 and t.
  bool in_domain(double t) const;

  double f(double t) const;
  double df(double t) const;
  /// s(t) = int_0^t dsigma / f(sigma)
  double s(double t) const;

  /// Throws BeyondBlowup outside the domain.
  GeodesicState eval(double t) const;
  /// L(t) = a_t(t) a(t)^+
  RealMatrix velocity_field(double t) const;

 private:
  GeodesicSolution(FrameMatrix a0, TangentMatrix u0) : a0_(std::move(a0)), u0_(std::move(u0)) {}
  void require_domain(double t) const;

  FrameMatrix a0_;
  TangentMatrix u0_;
  double tau0_ = 0.0;
  double delta0_ = 0.0;
  double eps_ = 0.0;
  RealMatrix omega0_;
  RealMatrix P0_;
  std::optional<double> blowup_;
  bool scaling_ = false;
};

GeodesicSolution solve_ivp(const FrameMatrix& a0, const TangentMatrix& u0);
GeodesicState eval_geodesic(const GeodesicSolution& sol, double t);

struct TauDelta {
  double tau = 0.0;
  double delta = 0.0;
};

/// (f'/f, delta0/f): the closed-form tr L(t) and tr(L^T L)(t).
TauDelta tau_delta_check(const GeodesicSolution& sol, double t);

struct MatrixPath {
  std::vector<double> times;
  std::vector<FrameMatrix> frames;
  std::vector<TangentMatrix> velocities;

  std::size_t size() const { return times.size(); }
};

/// Raised by integrate_numeric when the frame collapses; carries the path up
/// to the last good step.
class RankLossAt : public GeometryError {
 public:
  RankLossAt(double t, MatrixPath partial);
  double time() const { return time_; }
  const MatrixPath& partial() const { return partial_; }

 private:
  double time_;
  MatrixPath partial_;
};

/// Classical RK4 on (a, a_t) with `steps` uniform steps on [0, T]. A stage
/// counts as collapsed if it fails the rank tolerance or if
/// sigma_min <= kRankTolerance * max(n, m) * sigma_max(a0).
MatrixPath integrate_numeric(const FrameMatrix& a0, const TangentMatrix& u0, double T,
                             int steps);

/// Trapezoid sums of |a_t|_a^2 and |a_t|_a over the path times.
double path_energy(const MatrixPath& path);
double path_length(const MatrixPath& path);

/// Samples the closed-form geodesic on a uniform grid of [0, T].
MatrixPath sample_geodesic(const GeodesicSolution& sol, double T, int steps);

struct ShootResult {
  TangentMatrix u0;
  double residual = 0.0;  // |a(1) - a1|_F
  int iterations = 0;
  double length = 0.0;    // |u0|_{a0}
};

class NoConvergence : public GeometryError {
 public:
  NoConvergence(const std::string& what, ShootResult best)
      : GeometryError(what), best_(std::move(best)) {}
  const ShootResult& best() const { return best_; }

 private:
  ShootResult best_;
};

/// Damped Gauss-Newton on u0 -> a(1) - a1 with a central-difference Jacobian.
/// Starts from u0 = a1 - a0; falls back to continuation along the straight
/// segment from a0 to a1.
ShootResult shoot_bvp(const FrameMatrix& a0, const FrameMatrix& a1, int max_iter = 50,
                      double tol = 1e-10);

/// (2/sqrt m)(det(a^T a)^{1/4} + det(b^T b)^{1/4}): length of the broken
/// scaling path a -> 0 -> b. Infinite for square frames of opposite
/// orientation.
double scaling_upper_bound(const FrameMatrix& a, const FrameMatrix& b);

/// (2/sqrt m)|det(a^T a)^{1/4} - det(b^T b)^{1/4}|, from the pure-trace part
/// of the metric.
double volume_lower_bound(const FrameMatrix& a, const FrameMatrix& b);

}  // namespace oneforms
