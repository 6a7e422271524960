#include "oneforms/curvature.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

namespace oneforms {

namespace {

double trace_product(const RealMatrix& x, const RealMatrix& y) {
  return x.cwiseProduct(y.transpose()).sum();
}

RealMatrix comm(const RealMatrix& x, const RealMatrix& y) { return x * y - y * x; }

}  // namespace

TangentMatrix christoffel(const FrameMatrix& a, const TangentMatrix& u, const TangentMatrix& v) {
  require_conformal(a, u);
  require_conformal(a, v);
  const RealMatrix& A = a.mat();
  const RealMatrix& gi = a.gram_inverse();
  const RealMatrix& ap = a.pinv();
  const RealMatrix ugi = u * gi;
  const RealMatrix vgi = v * gi;
  const RealMatrix U = u * ap;
  const RealMatrix V = v * ap;
  return 0.5 * (ugi * (v.transpose() * A) + vgi * (u.transpose() * A) + U * v + V * u -
                U.transpose() * v - V.transpose() * u + ugi.cwiseProduct(v).sum() * A -
                U.trace() * v - V.trace() * u);
}

TangentMatrix dchristoffel(const FrameMatrix& a, const TangentMatrix& d, const TangentMatrix& u,
                           const TangentMatrix& v) {
  require_conformal(a, d);
  require_conformal(a, u);
  require_conformal(a, v);
  const RealMatrix& A = a.mat();
  const RealMatrix& gi = a.gram_inverse();
  const RealMatrix dG = d.transpose() * A + A.transpose() * d;
  const RealMatrix dgi = -gi * dG * gi;
  const RealMatrix dap = dgi * A.transpose() + gi * d.transpose();
  const RealMatrix dU = u * dap;
  const RealMatrix dV = v * dap;
  const RealMatrix vtA = v.transpose() * A;
  const RealMatrix utA = u.transpose() * A;
  return 0.5 * (u * dgi * vtA + u * gi * (v.transpose() * d) + v * dgi * utA +
                v * gi * (u.transpose() * d) + dU * v + dV * u - dU.transpose() * v -
                dV.transpose() * u + (u * dgi).cwiseProduct(v).sum() * A +
                (u * gi).cwiseProduct(v).sum() * d - dU.trace() * v - dV.trace() * u);
}

TangentMatrix dchristoffel_expanded(const FrameMatrix& a, const TangentMatrix& dir,
                                    const TangentMatrix& u, const TangentMatrix& v) {
  // U, V, W below are dir, u, v in square form
  const RealMatrix U = to_square(a, dir);
  const RealMatrix V = to_square(a, u);
  const RealMatrix W = to_square(a, v);
  const RealMatrix& P = a.projector();
  const RealMatrix Ut = U.transpose();
  const RealMatrix Vt = V.transpose();
  const RealMatrix Wt = W.transpose();
  const RealMatrix e =
      -V * Ut * Wt * P - V * U * Wt * P + V * Wt * U - W * Ut * Vt * P - W * U * Vt * P +
      W * Vt * U - V * Ut * P * W - V * U * W + V * Ut * W - W * Ut * P * V - W * U * V +
      W * Ut * V + P * U * Vt * W + Ut * Vt * W - U * Vt * W + P * U * Wt * V + Ut * Wt * V -
      U * Wt * V - (V * Ut * Wt).trace() * P - (V * U * Wt).trace() * P +
      trace_product(V, Wt) * U + (V * Ut * P).trace() * W + trace_product(V, U) * W -
      trace_product(V, Ut) * W + (W * Ut * P).trace() * V + trace_product(W, U) * V -
      trace_product(W, Ut) * V;
  return 0.5 * e * a.mat();
}

TangentMatrix riemann(const FrameMatrix& a, const TangentMatrix& u, const TangentMatrix& v,
                      const TangentMatrix& w) {
  return -dchristoffel(a, u, v, w) + dchristoffel(a, v, u, w) +
         christoffel(a, u, christoffel(a, v, w)) - christoffel(a, v, christoffel(a, u, w));
}

TangentMatrix riemann_closed_form(const FrameMatrix& a, const TangentMatrix& u,
                                  const TangentMatrix& v, const TangentMatrix& w) {
  const RealMatrix U = to_square(a, u);
  const RealMatrix V = to_square(a, v);
  const RealMatrix W = to_square(a, w);
  const RealMatrix& P = a.projector();
  const double m = static_cast<double>(a.cols());
  const RealMatrix Ut = U.transpose();
  const RealMatrix Vt = V.transpose();
  const RealMatrix Wt = W.transpose();
  const RealMatrix r =
      comm(V, Ut) * Wt * P + W * comm(Ut, Vt) * P + W * U * Vt * P + Wt * U * Vt * P +
      U * W * Vt * P - comm(U, Vt) * Wt * P - W * V * Ut * P - Wt * V * Ut * P -
      V * W * Ut * P + 2.0 * V * Ut * P * W + W * Ut * P * V + V * Wt * P * U -
      2.0 * U * Vt * P * W - W * Vt * P * U - U * Wt * P * V + 2.0 * P * V * Ut * W +
      P * V * Wt * U + P * W * Ut * V - 2.0 * P * U * Vt * W - P * U * Wt * V -
      P * W * Vt * U + comm(comm(V, U), W) + comm(Vt, Ut) * W + 2.0 * U * Wt * V +
      2.0 * U * Vt * W + Vt * U * W + Wt * Ut * V + Vt * W * U - 2.0 * V * Wt * U -
      2.0 * V * Ut * W - Ut * V * W - Wt * Vt * U - Ut * W * V +
      trace_product(V, Wt) * U.trace() * P - V.trace() * trace_product(W, Ut) * P +
      m * trace_product(U, Wt) * V - m * trace_product(V, Wt) * U +
      W.trace() * V.trace() * U - W.trace() * U.trace() * V;
  return 0.25 * r * a.mat();
}

double sectional(const FrameMatrix& a, const TangentMatrix& u, const TangentMatrix& v) {
  const auto [e1, e2] = orthonormalize_pair(a, u, v);
  return metric(a, riemann(a, e1, e2, e2), e1);
}

double sectional_traceless(const FrameMatrix& a, const TangentMatrix& u, const TangentMatrix& v) {
  const auto [e1, e2] = orthonormalize_pair(a, u, v);
  const double m = static_cast<double>(a.cols());
  const RealMatrix& P = a.projector();
  RealMatrix U = to_square(a, e1);
  RealMatrix V = to_square(a, e2);
  U -= (U.trace() / m) * P;
  V -= (V.trace() / m) * P;
  const RealMatrix Ut = U.transpose();
  const RealMatrix Vt = V.transpose();
  const RealMatrix VU = V * U;
  const RealMatrix UV = U * V;
  const RealMatrix VUt = V * Ut;
  const RealMatrix VVt = V * Vt;
  const RealMatrix UtU = Ut * U;
  const RealMatrix UUt = U * Ut;
  const RealMatrix VtV = Vt * V;
  const RealMatrix UVt = U * Vt;
  const RealMatrix VV = V * V;
  const RealMatrix UtUt = Ut * Ut;
  const RealMatrix c1 = VU - UV;
  const RealMatrix c2 = Vt * U - U * Vt;
  const RealMatrix c3 = VUt - Ut * V;
  const RealMatrix VUtP = VUt * P;
  const double x = 2.0 * trace_product(c1, c2) + 2.0 * trace_product(c3, c1) +
                   2.0 * trace_product(VU, Vt * Ut) + trace_product(VVt, UtU) -
                   4.0 * trace_product(VV, UtUt) + 4.0 * trace_product(VUt, UVt) +
                   trace_product(VtV, UUt) - 2.0 * trace_product(VVt, UUt) -
                   2.0 * trace_product(VUt, VUt) + 6.0 * trace_product(VUt, VUtP) -
                   3.0 * trace_product(VUt, UVt * P) - 3.0 * trace_product(UVt, VUtP) -
                   m * VVt.trace() * UUt.trace() + m * std::pow(trace_product(U, Vt), 2);
  return 0.25 * x * a.sqrt_det_gram();
}

double sectional_m1(const FrameMatrix& a, const TangentMatrix& u, const TangentMatrix& v) {
  if (a.cols() != 1) throw WrongDimension("sectional_m1 requires m = 1");
  const auto [e1, e2] = orthonormalize_pair(a, u, v);
  const TangentMatrix u0 = traceless_split(a, e1).traceless;
  const TangentMatrix v0 = traceless_split(a, e2).traceless;
  const double uv = metric(a, u0, v0);
  return 0.75 / metric(a, a.mat(), a.mat()) * (metric(a, u0, u0) * metric(a, v0, v0) - uv * uv);
}

Histogram curvature_scan(int m, int n, std::uint64_t samples, int bins, Seed seed,
                         unsigned workers) {
  if (m < 1 || n < m) throw WrongDimension("curvature_scan needs 1 <= m <= n");
  if (samples < 1 || bins < 1) throw GeometryError("curvature_scan needs samples, bins >= 1");
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::uint64_t>(workers, samples));

  std::vector<double> values(samples);
  std::vector<std::uint64_t> redraws(workers, 0);
  auto work = [&](unsigned w) {
    for (std::uint64_t i = w; i < samples; i += workers) {
      GaussianSampler sampler(derive_seed(seed, i));
      for (;;) {
        RealMatrix a = sampler.draw(n, m);
        RealMatrix u = sampler.draw(n, m);
        RealMatrix v = sampler.draw(n, m);
        try {
          values[i] = sectional_traceless(FrameMatrix(std::move(a)), u, v);
          break;
        } catch (const GeometryError&) {
          ++redraws[w];
        }
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work, w);
  work(0);
  for (auto& t : pool) t.join();

  Histogram h;
  h.samples = samples;
  for (auto r : redraws) h.redraws += r;
  const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  h.min_value = *lo_it;
  h.max_value = *hi_it;
  double lo = h.min_value;
  double hi = h.max_value;
  if (!(hi > lo)) {
    lo -= 0.5;
    hi += 0.5;
  }
  h.bin_edges.resize(bins + 1);
  for (int k = 0; k <= bins; ++k) h.bin_edges[k] = lo + (hi - lo) * k / bins;
  h.bin_edges[bins] = hi;
  h.counts.assign(bins, 0);
  for (double x : values) {
    auto k = static_cast<long>(std::floor((x - lo) / (hi - lo) * bins));
    k = std::clamp<long>(k, 0, bins - 1);
    ++h.counts[k];
    if (x > 0.0) ++h.positives;
  }
  h.positive_fraction = static_cast<double>(h.positives) / static_cast<double>(samples);
  return h;
}

}  // namespace oneforms
