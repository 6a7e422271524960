#include "oneforms/cli.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "oneforms/curvature.hpp"
#include "oneforms/io.hpp"
#include "oneforms/submersion.hpp"

namespace oneforms::cli {

namespace {

using io::json;

struct RunConfig {
  std::string input;
  std::string tangent;
  std::string output;
  std::string summary;
  std::uint64_t seed = 1;
  std::uint64_t samples = 100000;
  int bins = 200;
  int steps = 1000;
  std::string t_grid = "0:1:11";
  bool verify = false;
  int m = 2;
  int n = 3;
  unsigned workers = 0;
  std::uint64_t verify_samples = 100;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::vector<double> parse_t_grid(const std::string& grid) {
  auto num = [&](const std::string& s) {
    try {
      std::size_t used = 0;
      const double v = std::stod(s, &used);
      if (used != s.size() || !std::isfinite(v)) throw UsageError("");
      return v;
    } catch (const std::exception&) {
      throw UsageError("bad --t-grid value '" + s + "'");
    }
  };
  std::vector<std::string> parts;
  const char sep = grid.find(':') != std::string::npos ? ':' : ',';
  std::size_t pos = 0;
  for (;;) {
    const std::size_t next = grid.find(sep, pos);
    parts.push_back(grid.substr(pos, next - pos));
    if (next == std::string::npos) break;
    pos = next + 1;
  }
  std::vector<double> t;
  if (sep == ':') {
    if (parts.size() != 3) throw UsageError("--t-grid must be start:stop:count or a comma list");
    const double a = num(parts[0]);
    const double b = num(parts[1]);
    const double c = num(parts[2]);
    if (c < 1 || c != std::floor(c)) throw UsageError("--t-grid count must be a positive integer");
    const int k = static_cast<int>(c);
    for (int i = 0; i < k; ++i) t.push_back(k == 1 ? a : a + (b - a) * i / (k - 1));
  } else {
    for (const auto& p : parts) t.push_back(num(p));
  }
  return t;
}

void emit(const RunConfig& cfg, std::ostream& out, const json& summary) {
  const std::string text = summary.dump(2) + "\n";
  out << text;
  if (!cfg.summary.empty()) io::write_file_atomic(cfg.summary, text);
}

int cmd_geodesic(const RunConfig& cfg, std::ostream& out) {
  if (cfg.input.empty()) throw UsageError("geodesic needs --input");
  const json in = io::read_json(cfg.input);
  if (!in.contains("a0") || !in.contains("u0")) throw io::FormatError("input needs a0 and u0");
  const FrameMatrix a0(io::matrix_from_json(in.at("a0")));
  const RealMatrix u0 = io::matrix_from_json(in.at("u0"));
  const auto times = parse_t_grid(cfg.t_grid);
  const GeodesicSolution sol = solve_ivp(a0, u0);

  json summary = {{"command", "geodesic"},
                  {"n", a0.rows()},
                  {"m", a0.cols()},
                  {"tau0", sol.tau0()},
                  {"delta0", sol.delta0()},
                  {"eps", sol.eps()},
                  {"scaling", sol.is_scaling()},
                  {"blowup", sol.blowup() ? json(*sol.blowup()) : json(nullptr)}};

  std::vector<RealMatrix> frames;
  try {
    for (double t : times) frames.push_back(sol.eval(t).a.mat());
  } catch (const BeyondBlowup&) {
    emit(cfg, out, summary);
    throw;
  }
  if (!cfg.output.empty()) {
    io::write_file_atomic(cfg.output, io::path_to_csv(times, frames));
    summary["output"] = cfg.output;
  }
  summary["samples"] = times.size();

  if (cfg.verify) {
    const double T = *std::max_element(times.begin(), times.end());
    if (T > 0.0) {
      try {
        const MatrixPath path = integrate_numeric(a0, u0, T, cfg.steps);
        double dev = 0.0;
        for (std::size_t k = 0; k < path.size(); ++k) {
          dev = std::max(dev, (path.frames[k].mat() - sol.eval(path.times[k]).a.mat())
                                  .cwiseAbs()
                                  .maxCoeff());
        }
        summary["rk4_steps"] = cfg.steps;
        summary["rk4_max_deviation"] = dev;
        summary["verify_pass"] = dev < 1e-6;
      } catch (const RankLossAt& e) {
        summary["rk4_rank_loss"] = e.time();
      }
    }
  }
  emit(cfg, out, summary);
  return kOk;
}

int cmd_curvature_scan(const RunConfig& cfg, std::ostream& out) {
  if (cfg.m < 1 || cfg.n < cfg.m) throw UsageError("curvature-scan needs 1 <= m <= n");
  if (cfg.samples < 1 || cfg.bins < 1) throw UsageError("samples and bins must be positive");
  const Histogram h = curvature_scan(cfg.m, cfg.n, cfg.samples, cfg.bins, Seed{cfg.seed},
                                     cfg.workers);
  if (!cfg.output.empty()) {
    std::string csv = "bin_left,bin_right,count\n";
    for (std::size_t k = 0; k < h.counts.size(); ++k) {
      csv += io::format_double(h.bin_edges[k]) + ',' + io::format_double(h.bin_edges[k + 1]) +
             ',' + std::to_string(h.counts[k]) + '\n';
    }
    io::write_file_atomic(cfg.output, csv);
  }
  const json summary = {{"m", cfg.m},
                        {"n", cfg.n},
                        {"samples", h.samples},
                        {"positive_fraction", h.positive_fraction},
                        {"positives", h.positives},
                        {"redraws", h.redraws},
                        {"min", h.min_value},
                        {"max", h.max_value},
                        {"bins", cfg.bins},
                        {"seed", cfg.seed}};
  emit(cfg, out, summary);
  return kOk;
}

int cmd_curve_geodesic(const RunConfig& cfg, std::ostream& out) {
  if (cfg.input.empty() || cfg.tangent.empty() || cfg.output.empty()) {
    throw UsageError("curve-geodesic needs --input, --tangent and --output (file prefix)");
  }
  const DiscreteCurve c0 = io::curve_from_csv(io::read_file(cfg.input));
  const DiscreteCurve h = io::curve_from_csv(io::read_file(cfg.tangent));
  const auto times = parse_t_grid(cfg.t_grid);
  const CurveGeodesic geo(c0, h);
  json summary = {{"command", "curve-geodesic"},
                  {"blowup", geo.blowup() ? json(*geo.blowup()) : json(nullptr)}};
  if (geo.blowup_node()) summary["blowup_node"] = *geo.blowup_node();
  std::vector<DiscreteCurve> curves;
  try {
    for (double t : times) curves.push_back(geo.eval(t));
  } catch (const BeyondBlowup&) {
    emit(cfg, out, summary);
    throw;
  }
  json files = json::array();
  for (std::size_t k = 0; k < curves.size(); ++k) {
    const std::string path = cfg.output + "_" + std::to_string(k) + ".csv";
    io::write_file_atomic(path, io::curve_to_csv(curves[k]));
    files.push_back({{"t", times[k]}, {"path", path}});
  }
  summary["files"] = files;
  emit(cfg, out, summary);
  return kOk;
}

int cmd_distance(const RunConfig& cfg, std::ostream& out) {
  if (cfg.input.empty()) throw UsageError("distance needs --input");
  const json in = io::read_json(cfg.input);
  DiscreteOneForm alpha, beta;
  if (in.contains("alpha") && in.contains("beta")) {
    alpha = io::form_from_json(in.at("alpha"));
    beta = io::form_from_json(in.at("beta"));
  } else if (in.contains("a") && in.contains("b")) {
    alpha = make_form({0.0}, {io::matrix_from_json(in.at("a"))});
    beta = make_form({0.0}, {io::matrix_from_json(in.at("b"))});
  } else {
    throw io::FormatError("distance input needs alpha/beta forms or a/b matrices");
  }
  const unsigned workers = cfg.workers == 0 ? 1 : cfg.workers;
  const DistanceBounds b = distance_bounds(alpha, beta, cfg.steps, 1e-10, workers);
  json lengths = json::array();
  for (double d : b.node_lengths) lengths.push_back(std::isnan(d) ? json(nullptr) : json(d));
  const json summary = {{"command", "distance"},
                        {"lower", b.lower},
                        {"upper", std::isfinite(b.upper) ? json(b.upper) : json("inf")},
                        {"volume_lower", b.volume_lower},
                        {"partial", b.partial},
                        {"unavailable", b.unavailable},
                        {"node_lengths", lengths}};
  if (!cfg.output.empty()) io::write_file_atomic(cfg.output, summary.dump(2) + "\n");
  emit(cfg, out, summary);
  return b.unavailable.size() == alpha.size() ? kNoConvergence : kOk;
}

// ---- submersion-verify ------------------------------------------------------

struct Check {
  std::string name;
  double tolerance;
  double max_error = 0.0;
  std::uint64_t cases = 0;

  void record(double e) {
    max_error = std::max(max_error, std::isnan(e) ? INFINITY : e);
    ++cases;
  }
  bool pass() const { return max_error <= tolerance; }
};

RealMatrix random_frame(GaussianSampler& g, Index n, Index m) {
  for (;;) {
    RealMatrix a = g.draw(n, m);
    if (rank_diagnostics(a).condition() < 1e4) return a;
  }
}

RealMatrix random_symmetric(GaussianSampler& g, Index m) { return symmetric_part(g.draw(m, m)); }

RealMatrix random_spd(GaussianSampler& g, Index m) {
  const RealMatrix b = g.draw(m, m);
  return symmetric_part(b * b.transpose() + 0.5 * RealMatrix::Identity(m, m));
}

RealMatrix random_orthogonal(GaussianSampler& g, Index n) {
  Eigen::HouseholderQR<RealMatrix> qr(g.draw(n, n));
  return qr.householderQ() * RealMatrix::Identity(n, n);
}

json run_submersion_checks(Seed seed, std::uint64_t samples) {
  Check isometry{"dpi_isometry", 1e-10};
  Check split{"split_orthogonality", 1e-10};
  Check lift{"horizontal_lift", 1e-10};
  Check orbit{"orbit_decompose", 1e-10};
  Check fiber{"fiber_characterization", 1e-10};
  Check frame_lift{"lift_metric_to_frame", 1e-10};
  Check ode{"sym_geodesic_projection", 1e-5};
  Check oneill{"oneill_identity", 1e-8};
  Check nonpos{"sym_sectional_nonpositive", 1e-12};

  for (std::uint64_t i = 0; i < samples; ++i) {
    GaussianSampler g(derive_seed(seed, i));
    const Index n = 2 + static_cast<Index>(i % 4);           // 2..5
    const Index m = 2 + static_cast<Index>((i / 4) % (n - 1));  // 2..n
    const FrameMatrix a(random_frame(g, n, m));
    const RealMatrix u = g.draw(n, m);

    const HorizontalVertical hv = split_horizontal_vertical(a, u);
    const double un = norm(a, u);
    split.record(std::max({std::abs(metric(a, hv.horizontal, hv.vertical)) / (un * un),
                           (hv.horizontal + hv.vertical - u).norm() / u.norm(),
                           skew_part(to_square(a, hv.horizontal)).norm() / u.norm(),
                           dpi(a, hv.vertical).norm() / u.norm()}));

    const double hn = norm(a, hv.horizontal);
    const SymPoint p = project_pi(a);
    const RealMatrix dh = dpi(a, hv.horizontal);
    isometry.record(std::abs(std::sqrt(sym_metric(p, dh, dh)) - hn) / hn);

    const RealMatrix h = random_symmetric(g, m);
    const RealMatrix v = horizontal_lift(a, h);
    lift.record(std::max((dpi(a, v) - h).norm() / h.norm(),
                         skew_part(to_square(a, v)).norm() / std::max(1e-300, to_square(a, v).norm())));

    const OrbitDecomposition od = orbit_decompose(a);
    RealMatrix padded = RealMatrix::Zero(n, m);
    padded.topRows(m) = od.s;
    orbit.record(std::max((od.z.transpose() * od.z - RealMatrix::Identity(n, n)).norm(),
                          (od.z * padded - a.mat()).norm() / a.mat().norm()));

    const RealMatrix z = random_orthogonal(g, n);
    const FrameMatrix b(z * a.mat());
    const OrbitDecomposition ob = orbit_decompose(b);
    const RealMatrix transport = ob.z * od.z.transpose();
    fiber.record(std::max((project_pi(b).g() - p.g()).norm() / p.g().norm(),
                          (transport * a.mat() - b.mat()).norm() / b.mat().norm()));

    const SymPoint target(random_spd(g, m));
    const FrameMatrix lifted = lift_metric_to_frame(target, a);
    frame_lift.record((lifted.gram() - target.g()).norm() / target.g().norm());

    // horizontal geodesic projected to Sym+(m)
    const RealMatrix w = hv.horizontal * (0.5 / (hv.horizontal * a.pinv()).norm());
    const GeodesicSolution sol = solve_ivp(a, w);
    const double t = 0.3, step = 2e-3;
    const auto gram_at = [&](double s) { return sol.eval(s).a.gram(); };
    const RealMatrix gtt = (16.0 * (gram_at(t + step) + gram_at(t - step)) - 30.0 * gram_at(t) -
                            gram_at(t + 2 * step) - gram_at(t - 2 * step)) /
                           (12.0 * step * step);
    const GeodesicState st = sol.eval(t);
    const SymPoint gp = project_pi(st.a);
    const RealMatrix rhs = sym_geodesic_rhs(gp, dpi(st.a, st.at));
    const RealMatrix gt = dpi(st.a, st.at);
    const double scale = std::max(rhs.norm(), (gt * gp.inverse() * gt).norm());
    ode.record((gtt - rhs).norm() / scale);

    const RealMatrix h2 = random_symmetric(g, m);
    const RealMatrix k2 = random_symmetric(g, m);
    try {
      const OneillCheck oc = oneill_check(a, horizontal_lift(a, h2), horizontal_lift(a, k2));
      const double sc = std::max({1.0, std::abs(oc.k_sym), std::abs(oc.k_mat), oc.oneill_term});
      oneill.record(std::abs(oc.defect()) / sc);
      nonpos.record(std::max(0.0, sym_sectional(SymPoint(random_spd(g, m)), h2, k2)));
    } catch (const DegeneratePlane&) {
    }
  }

  json checks = json::array();
  bool all = true;
  for (const Check* c : {&isometry, &split, &lift, &orbit, &fiber, &frame_lift, &ode, &oneill, &nonpos}) {
    checks.push_back({{"name", c->name},
                      {"max_error", c->max_error},
                      {"tolerance", c->tolerance},
                      {"cases", c->cases},
                      {"pass", c->pass()}});
    all = all && c->pass() && c->cases > 0;
  }
  return json{{"command", "submersion-verify"},
              {"seed", seed.value},
              {"samples", samples},
              {"checks", checks},
              {"pass", all}};
}

int cmd_submersion_verify(const RunConfig& cfg, std::ostream& out) {
  const json report = run_submersion_checks(Seed{cfg.seed}, cfg.verify_samples);
  if (!cfg.output.empty()) io::write_file_atomic(cfg.output, report.dump(2) + "\n");
  emit(cfg, out, report);
  return report.at("pass").get<bool>() ? kOk : kVerifyFailed;
}

// ---- error mapping ----------------------------------------------------------

int report_error(std::ostream& err, int code, const std::string& kind, const std::string& message,
                 json extra = json::object()) {
  extra["error"] = kind;
  extra["message"] = message;
  extra["exit_code"] = code;
  err << extra.dump() << "\n";
  return code;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Geometry of full-rank matrices, one-forms and curves"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--output", cfg.output, "Output file (or file prefix)");
    sub->add_option("--seed", cfg.seed, "Base seed");
    sub->add_option("--summary", cfg.summary, "Also write the JSON summary here");
  };

  auto* geo = app.add_subcommand("geodesic", "Closed-form geodesic from a0, u0");
  geo->add_option("--input", cfg.input, "JSON with a0 and u0 matrices");
  geo->add_option("--t-grid", cfg.t_grid, "start:stop:count or comma list");
  geo->add_option("--steps", cfg.steps, "RK4 steps for --verify")->check(CLI::PositiveNumber);
  geo->add_flag("--verify", cfg.verify, "Cross-check against RK4");
  add_common(geo);

  auto* scan = app.add_subcommand("curvature-scan", "Histogram of random sectional curvatures");
  scan->add_option("--m", cfg.m, "Columns");
  scan->add_option("--n", cfg.n, "Rows");
  scan->add_option("--samples", cfg.samples, "Number of random planes");
  scan->add_option("--bins", cfg.bins, "Histogram bins");
  scan->add_option("--workers", cfg.workers, "Threads (0 = hardware)");
  add_common(scan);

  auto* curve = app.add_subcommand("curve-geodesic", "Geodesic between open curves");
  curve->add_option("--input", cfg.input, "Curve CSV (theta,x1..xn)");
  curve->add_option("--tangent", cfg.tangent, "Initial velocity field CSV on the same grid");
  curve->add_option("--t-grid", cfg.t_grid, "start:stop:count or comma list");
  add_common(curve);

  auto* dist = app.add_subcommand("distance", "Distance bounds between forms or matrices");
  dist->add_option("--input", cfg.input, "JSON with alpha/beta forms or a/b matrices");
  dist->add_option("--steps", cfg.steps, "Gauss-Newton iterations per node")->check(CLI::PositiveNumber);
  dist->add_option("--workers", cfg.workers, "Threads over nodes");
  add_common(dist);

  auto* sub = app.add_subcommand("submersion-verify", "Check the submersion invariants");
  sub->add_option("--samples", cfg.verify_samples, "Random cases");
  add_common(sub);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (geo->parsed()) return cmd_geodesic(cfg, out);
    if (scan->parsed()) return cmd_curvature_scan(cfg, out);
    if (curve->parsed()) return cmd_curve_geodesic(cfg, out);
    if (dist->parsed()) return cmd_distance(cfg, out);
    if (sub->parsed()) return cmd_submersion_verify(cfg, out);
    return report_error(err, kUsage, "usage", "no command given");
  } catch (const UsageError& e) {
    return report_error(err, kUsage, "usage", e.what());
  } catch (const io::FormatError& e) {
    return report_error(err, kUsage, "format", e.what());
  } catch (const RankDeficient& e) {
    json extra = json::object();
    if (e.node()) extra["node"] = *e.node();
    return report_error(err, kRank, "rank_deficient", e.what(), extra);
  } catch (const NotSPD& e) {
    return report_error(err, kRank, "not_spd", e.what());
  } catch (const BeyondBlowup& e) {
    json extra = {{"blowup", e.blowup()}};
    if (e.node()) extra["node"] = *e.node();
    return report_error(err, kDomain, "beyond_blowup", e.what(), extra);
  } catch (const NoConvergence& e) {
    return report_error(err, kNoConvergence, "no_convergence", e.what(),
                        {{"residual", e.best().residual}});
  } catch (const NotImmersed& e) {
    return report_error(err, kUsage, "not_immersed", e.what(), {{"node", e.node()}});
  } catch (const GeometryError& e) {
    return report_error(err, kUsage, "geometry", e.what());
  }
}

}  // namespace oneforms::cli
