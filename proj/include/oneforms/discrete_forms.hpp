#pragma once

// One-forms on [0,1] sampled on a grid, with the frame metric applied node by
// node and integrated by the trapezoid rule.

#include <functional>
#include <optional>
#include <vector>

#include "oneforms/geodesics.hpp"

namespace oneforms {

using TangentField = std::vector<TangentMatrix>;

/// Composite trapezoid weights; they sum to nodes.back() - nodes.front().
std::vector<double> trapezoid_weights(const std::vector<double>& nodes);

struct DiscreteOneForm {
  std::vector<double> nodes;
  std::vector<FrameMatrix> values;
  std::vector<double> weights;

  std::size_t size() const { return nodes.size(); }
};

/// Validates the grid and the rank of every node (RankDeficient carries the
/// node index). Empty weights default to trapezoid weights.
DiscreteOneForm make_form(std::vector<double> nodes, const std::vector<RealMatrix>& values,
                          std::vector<double> weights = {});

struct DiscreteCurve {
  std::vector<double> nodes;
  std::vector<Eigen::VectorXd> points;

  std::size_t size() const { return nodes.size(); }
  Index dim() const { return points.empty() ? 0 : points.front().size(); }
};

DiscreteCurve make_curve(std::vector<double> nodes, std::vector<Eigen::VectorXd> points);

/// Uniform grid of n points on [0, 1].
std::vector<double> uniform_nodes(std::size_t n);

/// sum_i w_i metric(alpha_i, zeta_i, eta_i), compensated summation.
double form_metric(const DiscreteOneForm& alpha, const TangentField& zeta, const TangentField& eta);

/// Earliest positive blow-up time over the nodes, if any.
std::optional<double> form_blowup(const DiscreteOneForm& alpha0, const TangentField& zeta0);

/// Node-wise closed-form geodesic at time t. Throws BeyondBlowup carrying the
/// first node whose geodesic is not defined at t.
DiscreteOneForm form_geodesic(const DiscreteOneForm& alpha0, const TangentField& zeta0, double t);

/// Sectional curvature of the integrated metric on the plane (zeta, eta):
/// sum_i w_i <R_i(zeta,eta)eta, zeta> over the Gram area. Throws
/// DegeneratePlane.
double form_sectional(const DiscreteOneForm& alpha, const TangentField& zeta,
                      const TangentField& eta);

struct DistanceBounds {
  double lower = 0.0;         // (sum w d_i^2)^{1/2}, d_i = shot geodesic length
  double upper = 0.0;         // (sum w B_i^2)^{1/2}, B_i = scaling-path bound
  double volume_lower = 0.0;  // (sum w V_i^2)^{1/2}, V_i = volume bound
  bool partial = false;       // some nodes failed to shoot
  std::vector<std::size_t> unavailable;
  std::vector<double> node_lengths;  // NaN where unavailable
};

DistanceBounds distance_bounds(const DiscreteOneForm& alpha, const DiscreteOneForm& beta,
                               int max_iter = 50, double tol = 1e-10, unsigned workers = 1);

/// Increasing map of [0,1] onto itself sampled with its derivative;
/// evaluated off-grid by cubic Hermite interpolation.
struct GridMap {
  std::vector<double> nodes;
  std::vector<double> values;
  std::vector<double> derivatives;

  static GridMap sample(const std::vector<double>& nodes, const std::function<double(double)>& phi,
                        const std::function<double(double)>& dphi);
  static GridMap identity(const std::vector<double>& nodes);

  /// Throws NotMonotone unless values increase strictly from 0 to 1 and
  /// derivatives are positive.
  void validate() const;
  double operator()(double x) const;
  double derivative(double x) const;
};

/// (phi o psi) sampled on psi's nodes.
GridMap compose(const GridMap& phi, const GridMap& psi);

/// phi^* alpha = (alpha o phi) phi' on phi's nodes; m = 1 only. Values off the
/// original grid use 4-point Lagrange interpolation.
DiscreteOneForm reparametrize(const DiscreteOneForm& alpha, const GridMap& phi);

/// (zeta o phi) phi' for a tangent field on `nodes`.
TangentField reparametrize_field(const std::vector<double>& nodes, const TangentField& zeta,
                                 const GridMap& phi);

/// c o phi on phi's nodes (also used for vector fields along a curve).
DiscreteCurve reparametrize_curve(const DiscreteCurve& c, const GridMap& phi);

/// Second-order finite-difference derivative of sampled vectors.
std::vector<Eigen::VectorXd> grid_derivative(const std::vector<double>& nodes,
                                             const std::vector<Eigen::VectorXd>& points);

/// c' as an n x 1 one-form. Throws NotImmersed at the first vanishing node.
DiscreteOneForm curve_to_form(const DiscreteCurve& c);

/// Cumulative trapezoid integral of an n x 1 form starting at basepoint.
DiscreteCurve form_to_curve(const DiscreteOneForm& alpha, const Eigen::VectorXd& basepoint);
DiscreteCurve form_to_curve(const DiscreteOneForm& alpha);

/// sum_i w_i h'_i . k'_i / |c'_i|
double curve_metric(const DiscreteCurve& c, const DiscreteCurve& h, const DiscreteCurve& k);

/// Geodesic of the curve metric from c0 with initial velocity h, one
/// closed-form rotation per node (no matrix exponential). Curves are pinned
/// at the origin: c(t, theta_0) = 0 and c(0) = c0 - c0(theta_0).
class CurveGeodesic {
 public:
  CurveGeodesic(const DiscreteCurve& c0, const DiscreteCurve& h);

  std::optional<double> blowup() const { return blowup_; }
  std::optional<std::size_t> blowup_node() const { return blowup_node_; }
  /// Throws BeyondBlowup outside the common domain.
  DiscreteCurve eval(double t) const;
  /// Derivative samples c'(t, theta_i).
  std::vector<Eigen::VectorXd> derivative(double t) const;

 private:
  struct Node {
    double speed = 0.0;  // |c0'|
    double tau = 0.0;
    double kappa = 0.0;  // rotation rate, = eps for m = 1
    Eigen::VectorXd e1;
    Eigen::VectorXd e2;  // zero when h' is parallel to c0'
  };

  DiscreteCurve c0_;
  std::vector<Eigen::VectorXd> d0_;
  std::vector<Node> nodes_;
  std::optional<double> blowup_;
  std::optional<std::size_t> blowup_node_;
};

DiscreteCurve curve_geodesic(const DiscreteCurve& c0, const DiscreteCurve& h, double t);

}  // namespace oneforms
