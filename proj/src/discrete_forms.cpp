#include "oneforms/discrete_forms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <thread>

#include "oneforms/curvature.hpp"

namespace oneforms {

namespace {

// Neumaier-compensated sum, deterministic for a fixed order of terms.
class StableSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

void require_grid(const std::vector<double>& nodes) {
  if (nodes.empty()) throw GeometryError("grid is empty");
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (!std::isfinite(nodes[i]) || nodes[i] < 0.0 || nodes[i] > 1.0) {
      throw GeometryError("grid node " + std::to_string(i) + " outside [0,1]");
    }
    if (i > 0 && !(nodes[i] > nodes[i - 1])) {
      throw GeometryError("grid nodes are not strictly increasing at " + std::to_string(i));
    }
  }
}

void require_field(const DiscreteOneForm& alpha, const TangentField& zeta) {
  if (zeta.size() != alpha.size()) throw WrongDimension("tangent field and form differ in length");
  for (std::size_t i = 0; i < zeta.size(); ++i) require_conformal(alpha.values[i], zeta[i]);
}

// Index of the interval [x_j, x_{j+1}] containing y, clamped to the grid.
std::size_t locate(const std::vector<double>& x, double y) {
  if (x.size() < 2) return 0;
  auto it = std::upper_bound(x.begin(), x.end(), y);
  std::size_t j = it == x.begin() ? 0 : static_cast<std::size_t>(it - x.begin()) - 1;
  return std::min(j, x.size() - 2);
}

// 4-point Lagrange interpolation (fewer points on short grids).
template <class T>
T lagrange(const std::vector<double>& x, const std::vector<T>& f, double y) {
  const std::size_t n = x.size();
  if (n == 1) return f[0];
  const std::size_t k = std::min<std::size_t>(4, n);
  const std::size_t j = locate(x, y);
  const std::size_t start = std::min(j > 0 ? j - 1 : 0, n - k);
  T out = T::Zero(f[0].rows(), f[0].cols());
  for (std::size_t a = start; a < start + k; ++a) {
    double l = 1.0;
    for (std::size_t b = start; b < start + k; ++b) {
      if (b != a) l *= (y - x[b]) / (x[a] - x[b]);
    }
    out += l * f[a];
  }
  return out;
}

}  // namespace

std::vector<double> trapezoid_weights(const std::vector<double>& nodes) {
  const std::size_t n = nodes.size();
  if (n == 0) return {};
  if (n == 1) return {1.0};
  std::vector<double> w(n);
  w[0] = 0.5 * (nodes[1] - nodes[0]);
  w[n - 1] = 0.5 * (nodes[n - 1] - nodes[n - 2]);
  for (std::size_t i = 1; i + 1 < n; ++i) w[i] = 0.5 * (nodes[i + 1] - nodes[i - 1]);
  return w;
}

std::vector<double> uniform_nodes(std::size_t n) {
  if (n == 0) return {};
  if (n == 1) return {0.0};
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = static_cast<double>(i) / static_cast<double>(n - 1);
  return x;
}

DiscreteOneForm make_form(std::vector<double> nodes, const std::vector<RealMatrix>& values,
                          std::vector<double> weights) {
  require_grid(nodes);
  if (values.size() != nodes.size()) throw WrongDimension("form values and nodes differ in length");
  if (weights.empty()) weights = trapezoid_weights(nodes);
  if (weights.size() != nodes.size()) throw WrongDimension("form weights and nodes differ in length");
  for (double w : weights) {
    if (!(w > 0.0) || !std::isfinite(w)) throw GeometryError("quadrature weights must be positive");
  }
  DiscreteOneForm form;
  form.values.reserve(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0 && (values[i].rows() != values[0].rows() || values[i].cols() != values[0].cols())) {
      throw WrongDimension("form node " + std::to_string(i) + " has a different shape");
    }
    try {
      form.values.emplace_back(values[i]);
    } catch (const RankDeficient& e) {
      throw RankDeficient(std::string(e.what()) + " at node " + std::to_string(i), i);
    }
  }
  form.nodes = std::move(nodes);
  form.weights = std::move(weights);
  return form;
}

DiscreteCurve make_curve(std::vector<double> nodes, std::vector<Eigen::VectorXd> points) {
  require_grid(nodes);
  if (points.size() != nodes.size()) throw WrongDimension("curve points and nodes differ in length");
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points[i].size() != points[0].size() || points[i].size() == 0) {
      throw WrongDimension("curve point " + std::to_string(i) + " has a different dimension");
    }
    if (!points[i].allFinite()) throw GeometryError("curve point " + std::to_string(i) + " is not finite");
    if (i > 0 && points[i] == points[i - 1]) {
      throw NotImmersed("consecutive curve points coincide", i);
    }
  }
  return DiscreteCurve{std::move(nodes), std::move(points)};
}

double form_metric(const DiscreteOneForm& alpha, const TangentField& zeta, const TangentField& eta) {
  require_field(alpha, zeta);
  require_field(alpha, eta);
  StableSum sum;
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    sum.add(alpha.weights[i] * metric(alpha.values[i], zeta[i], eta[i]));
  }
  return sum.value();
}

std::optional<double> form_blowup(const DiscreteOneForm& alpha0, const TangentField& zeta0) {
  require_field(alpha0, zeta0);
  std::optional<double> out;
  for (std::size_t i = 0; i < alpha0.size(); ++i) {
    const auto b = GeodesicSolution::solve(alpha0.values[i], zeta0[i]).blowup();
    if (b && (!out || *b < *out)) out = b;
  }
  return out;
}

DiscreteOneForm form_geodesic(const DiscreteOneForm& alpha0, const TangentField& zeta0, double t) {
  require_field(alpha0, zeta0);
  std::vector<GeodesicSolution> sols;
  sols.reserve(alpha0.size());
  for (std::size_t i = 0; i < alpha0.size(); ++i) {
    sols.push_back(GeodesicSolution::solve(alpha0.values[i], zeta0[i]));
    if (!sols.back().in_domain(t)) {
      const auto b = sols.back().blowup();
      throw BeyondBlowup("form geodesic leaves the space at node " + std::to_string(i) +
                             " before t = " + std::to_string(t),
                         b ? *b : -2.0 / sols.back().tau0(), i);
    }
  }
  DiscreteOneForm out;
  out.nodes = alpha0.nodes;
  out.weights = alpha0.weights;
  out.values.reserve(alpha0.size());
  for (std::size_t i = 0; i < alpha0.size(); ++i) {
    try {
      out.values.push_back(sols[i].eval(t).a);
    } catch (const RankDeficient& e) {
      throw RankDeficient(std::string(e.what()) + " at node " + std::to_string(i), i);
    }
  }
  return out;
}

double form_sectional(const DiscreteOneForm& alpha, const TangentField& zeta,
                      const TangentField& eta) {
  const double zz = form_metric(alpha, zeta, zeta);
  const double ee = form_metric(alpha, eta, eta);
  const double ze = form_metric(alpha, zeta, eta);
  const double area = zz * ee - ze * ze;
  if (!(zz > 0.0) || !(ee > 0.0) || !(area >= 1e-12 * zz * ee)) {
    throw DegeneratePlane("tangent fields do not span a 2-plane");
  }
  StableSum num;
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    const FrameMatrix& a = alpha.values[i];
    num.add(alpha.weights[i] * metric(a, riemann(a, zeta[i], eta[i], eta[i]), zeta[i]));
  }
  return num.value() / area;
}

DistanceBounds distance_bounds(const DiscreteOneForm& alpha, const DiscreteOneForm& beta,
                               int max_iter, double tol, unsigned workers) {
  if (alpha.nodes != beta.nodes) throw WrongDimension("distance_bounds needs matching node grids");
  const std::size_t n = alpha.size();
  DistanceBounds out;
  out.node_lengths.assign(n, std::numeric_limits<double>::quiet_NaN());
  std::vector<char> failed(n, 0);

  auto work = [&](unsigned w, unsigned stride) {
    for (std::size_t i = w; i < n; i += stride) {
      try {
        out.node_lengths[i] = shoot_bvp(alpha.values[i], beta.values[i], max_iter, tol).length;
      } catch (const NoConvergence&) {
        failed[i] = 1;
      }
    }
  };
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work, w, workers);
  work(0, workers);
  for (auto& t : pool) t.join();

  StableSum lower, upper, vol;
  for (std::size_t i = 0; i < n; ++i) {
    const double wi = alpha.weights[i];
    if (failed[i]) {
      out.unavailable.push_back(i);
    } else {
      lower.add(wi * out.node_lengths[i] * out.node_lengths[i]);
    }
    const double b = scaling_upper_bound(alpha.values[i], beta.values[i]);
    upper.add(wi * b * b);
    const double v = volume_lower_bound(alpha.values[i], beta.values[i]);
    vol.add(wi * v * v);
  }
  out.partial = !out.unavailable.empty();
  out.lower = std::sqrt(lower.value());
  out.upper = std::sqrt(upper.value());
  out.volume_lower = std::sqrt(vol.value());
  return out;
}

GridMap GridMap::sample(const std::vector<double>& nodes, const std::function<double(double)>& phi,
                        const std::function<double(double)>& dphi) {
  GridMap g;
  g.nodes = nodes;
  for (double x : nodes) {
    g.values.push_back(phi(x));
    g.derivatives.push_back(dphi(x));
  }
  g.validate();
  return g;
}

GridMap GridMap::identity(const std::vector<double>& nodes) {
  return sample(nodes, [](double x) { return x; }, [](double) { return 1.0; });
}

void GridMap::validate() const {
  if (nodes.size() < 2 || values.size() != nodes.size() || derivatives.size() != nodes.size()) {
    throw NotMonotone("grid map needs at least two samples of value and derivative");
  }
  if (nodes.front() != 0.0 || nodes.back() != 1.0) {
    throw NotMonotone("grid map nodes must span [0,1]");
  }
  if (std::abs(values.front()) > 1e-12 || std::abs(values.back() - 1.0) > 1e-12) {
    throw NotMonotone("grid map must fix 0 and 1");
  }
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (!(derivatives[i] > 0.0) || !std::isfinite(derivatives[i])) {
      throw NotMonotone("grid map derivative not positive at node " + std::to_string(i));
    }
    if (i > 0 && (!(nodes[i] > nodes[i - 1]) || !(values[i] > values[i - 1]))) {
      throw NotMonotone("grid map not strictly increasing at node " + std::to_string(i));
    }
  }
}

double GridMap::operator()(double x) const {
  const std::size_t j = locate(nodes, x);
  const double h = nodes[j + 1] - nodes[j];
  const double s = (x - nodes[j]) / h;
  const double s2 = s * s;
  const double s3 = s2 * s;
  return (2 * s3 - 3 * s2 + 1) * values[j] + (s3 - 2 * s2 + s) * h * derivatives[j] +
         (-2 * s3 + 3 * s2) * values[j + 1] + (s3 - s2) * h * derivatives[j + 1];
}

double GridMap::derivative(double x) const {
  const std::size_t j = locate(nodes, x);
  const double h = nodes[j + 1] - nodes[j];
  const double s = (x - nodes[j]) / h;
  const double s2 = s * s;
  return ((6 * s2 - 6 * s) * values[j] + (-6 * s2 + 6 * s) * values[j + 1]) / h +
         (3 * s2 - 4 * s + 1) * derivatives[j] + (3 * s2 - 2 * s) * derivatives[j + 1];
}

GridMap compose(const GridMap& phi, const GridMap& psi) {
  phi.validate();
  psi.validate();
  GridMap out;
  out.nodes = psi.nodes;
  for (std::size_t i = 0; i < psi.nodes.size(); ++i) {
    out.values.push_back(phi(psi.values[i]));
    out.derivatives.push_back(phi.derivative(psi.values[i]) * psi.derivatives[i]);
  }
  out.values.front() = 0.0;
  out.values.back() = 1.0;
  out.validate();
  return out;
}

DiscreteOneForm reparametrize(const DiscreteOneForm& alpha, const GridMap& phi) {
  phi.validate();
  if (alpha.size() == 0 || alpha.values.front().cols() != 1) {
    throw WrongDimension("reparametrize is defined for one-forms on [0,1] (m = 1)");
  }
  std::vector<RealMatrix> raw;
  raw.reserve(alpha.size());
  for (const auto& v : alpha.values) raw.push_back(v.mat());
  std::vector<RealMatrix> values;
  for (std::size_t j = 0; j < phi.nodes.size(); ++j) {
    values.push_back(lagrange(alpha.nodes, raw, phi.values[j]) * phi.derivatives[j]);
  }
  return make_form(phi.nodes, values);
}

TangentField reparametrize_field(const std::vector<double>& nodes, const TangentField& zeta,
                                 const GridMap& phi) {
  phi.validate();
  if (zeta.size() != nodes.size()) throw WrongDimension("field and nodes differ in length");
  TangentField out;
  for (std::size_t j = 0; j < phi.nodes.size(); ++j) {
    out.push_back(lagrange(nodes, zeta, phi.values[j]) * phi.derivatives[j]);
  }
  return out;
}

DiscreteCurve reparametrize_curve(const DiscreteCurve& c, const GridMap& phi) {
  phi.validate();
  std::vector<Eigen::VectorXd> pts;
  for (std::size_t j = 0; j < phi.nodes.size(); ++j) {
    pts.push_back(lagrange(c.nodes, c.points, phi.values[j]));
  }
  return DiscreteCurve{phi.nodes, std::move(pts)};
}

std::vector<Eigen::VectorXd> grid_derivative(const std::vector<double>& x,
                                             const std::vector<Eigen::VectorXd>& f) {
  const std::size_t n = x.size();
  if (f.size() != n) throw WrongDimension("grid_derivative: sizes differ");
  if (n < 2) throw GeometryError("grid_derivative needs at least two nodes");
  std::vector<Eigen::VectorXd> d(n);
  if (n == 2) {
    d[0] = d[1] = (f[1] - f[0]) / (x[1] - x[0]);
    return d;
  }
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double h1 = x[i] - x[i - 1];
    const double h2 = x[i + 1] - x[i];
    d[i] = (-h2 / (h1 * (h1 + h2))) * f[i - 1] + ((h2 - h1) / (h1 * h2)) * f[i] +
           (h1 / (h2 * (h1 + h2))) * f[i + 1];
  }
  {
    const double h1 = x[1] - x[0];
    const double h2 = x[2] - x[1];
    d[0] = (-(2 * h1 + h2) / (h1 * (h1 + h2))) * f[0] + ((h1 + h2) / (h1 * h2)) * f[1] -
           (h1 / (h2 * (h1 + h2))) * f[2];
  }
  {
    const double h1 = x[n - 1] - x[n - 2];
    const double h2 = x[n - 2] - x[n - 3];
    d[n - 1] = ((2 * h1 + h2) / (h1 * (h1 + h2))) * f[n - 1] - ((h1 + h2) / (h1 * h2)) * f[n - 2] +
               (h1 / (h2 * (h1 + h2))) * f[n - 3];
  }
  return d;
}

namespace {

std::vector<Eigen::VectorXd> immersed_derivative(const DiscreteCurve& c) {
  auto d = grid_derivative(c.nodes, c.points);
  double top = 0.0;
  for (const auto& v : d) top = std::max(top, v.norm());
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (!(d[i].norm() > 1e-12 * top)) throw NotImmersed("curve derivative vanishes", i);
  }
  return d;
}

void require_same_grid(const DiscreteCurve& c, const DiscreteCurve& h) {
  if (c.nodes != h.nodes || c.dim() != h.dim()) {
    throw WrongDimension("vector field must share the curve's grid and dimension");
  }
}

}  // namespace

DiscreteOneForm curve_to_form(const DiscreteCurve& c) {
  const auto d = immersed_derivative(c);
  std::vector<RealMatrix> values(d.begin(), d.end());
  return make_form(c.nodes, values);
}

DiscreteCurve form_to_curve(const DiscreteOneForm& alpha, const Eigen::VectorXd& basepoint) {
  if (alpha.size() == 0 || alpha.values.front().cols() != 1) {
    throw WrongDimension("form_to_curve needs an n x 1 form");
  }
  if (basepoint.size() != alpha.values.front().rows()) {
    throw WrongDimension("basepoint dimension does not match the form");
  }
  DiscreteCurve c;
  c.nodes = alpha.nodes;
  c.points.push_back(basepoint);
  for (std::size_t i = 1; i < alpha.size(); ++i) {
    const double h = alpha.nodes[i] - alpha.nodes[i - 1];
    c.points.push_back(c.points.back() +
                       0.5 * h * (alpha.values[i - 1].mat().col(0) + alpha.values[i].mat().col(0)));
  }
  return c;
}

DiscreteCurve form_to_curve(const DiscreteOneForm& alpha) {
  if (alpha.size() == 0) throw GeometryError("empty form");
  return form_to_curve(alpha, Eigen::VectorXd::Zero(alpha.values.front().rows()));
}

double curve_metric(const DiscreteCurve& c, const DiscreteCurve& h, const DiscreteCurve& k) {
  require_same_grid(c, h);
  require_same_grid(c, k);
  const auto d = immersed_derivative(c);
  const auto hp = grid_derivative(h.nodes, h.points);
  const auto kp = grid_derivative(k.nodes, k.points);
  const auto w = trapezoid_weights(c.nodes);
  StableSum sum;
  for (std::size_t i = 0; i < d.size(); ++i) sum.add(w[i] * hp[i].dot(kp[i]) / d[i].norm());
  return sum.value();
}

CurveGeodesic::CurveGeodesic(const DiscreteCurve& c0, const DiscreteCurve& h)
    : c0_(c0), d0_(immersed_derivative(c0)) {
  require_same_grid(c0, h);
  const auto hp = grid_derivative(h.nodes, h.points);
  nodes_.resize(d0_.size());
  for (std::size_t i = 0; i < d0_.size(); ++i) {
    Node& nd = nodes_[i];
    nd.speed = d0_[i].norm();
    nd.e1 = d0_[i] / nd.speed;
    const double along = hp[i].dot(nd.e1);
    Eigen::VectorXd across = hp[i] - along * nd.e1;
    const double beta = across.norm();
    nd.tau = along / nd.speed;
    if (beta <= kParallelTolerance * hp[i].norm()) {
      nd.kappa = 0.0;
      nd.e2 = Eigen::VectorXd::Zero(nd.e1.size());
      if (nd.tau < 0.0) {
        const double b = -2.0 / nd.tau;
        if (!blowup_ || b < *blowup_) {
          blowup_ = b;
          blowup_node_ = i;
        }
      }
    } else {
      nd.kappa = beta / nd.speed;
      nd.e2 = across / beta;
    }
  }
}

std::vector<Eigen::VectorXd> CurveGeodesic::derivative(double t) const {
  std::vector<Eigen::VectorXd> out(nodes_.size());
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const Node& nd = nodes_[i];
    const double x = 2.0 + nd.tau * t;
    if (nd.kappa == 0.0 && !(x > 0.0)) {
      throw BeyondBlowup("curve geodesic leaves the space at node " + std::to_string(i) +
                             " before t = " + std::to_string(t),
                         -2.0 / nd.tau, i);
    }
    const double y = nd.kappa * t;
    const double f = 0.25 * (x * x + y * y);
    // kappa * s(t) = 2 atan2(kappa t, 2 + tau t)
    const double angle = 2.0 * std::atan2(y, x);
    out[i] = (f * nd.speed) * (std::cos(angle) * nd.e1 + std::sin(angle) * nd.e2);
  }
  return out;
}

DiscreteCurve CurveGeodesic::eval(double t) const {
  DiscreteCurve c;
  c.nodes = c0_.nodes;
  c.points.reserve(c0_.size());
  if (t == 0.0) {
    for (const auto& p : c0_.points) c.points.push_back(p - c0_.points.front());
    return c;
  }
  const auto d = derivative(t);
  // c0 plus the trapezoid integral of the change in derivative
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(c0_.dim());
  c.points.push_back(acc);
  for (std::size_t i = 1; i < d.size(); ++i) {
    const double h = c0_.nodes[i] - c0_.nodes[i - 1];
    acc += 0.5 * h * ((d[i - 1] - d0_[i - 1]) + (d[i] - d0_[i]));
    c.points.push_back(c0_.points[i] - c0_.points.front() + acc);
  }
  return c;
}

DiscreteCurve curve_geodesic(const DiscreteCurve& c0, const DiscreteCurve& h, double t) {
  return CurveGeodesic(c0, h).eval(t);
}

}  // namespace oneforms
