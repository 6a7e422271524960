#pragma once

#include <cstdint>
#include <vector>

#include "oneforms/frame_metric.hpp"

namespace oneforms {

/// Christoffel symbol; a geodesic satisfies a_tt = christoffel(a, a_t, a_t).
TangentMatrix christoffel(const FrameMatrix& a, const TangentMatrix& u, const TangentMatrix& v);

/// Directional derivative of christoffel(., u, v) at a along dir (product rule).
TangentMatrix dchristoffel(const FrameMatrix& a, const TangentMatrix& dir, const TangentMatrix& u,
                           const TangentMatrix& v);

/// Same derivative from the expanded expression for 2 dΓ(dir)(u,v) a^+,
/// written in U = u a^+, V, W and P = a a^+.
TangentMatrix dchristoffel_expanded(const FrameMatrix& a, const TangentMatrix& dir,
                                    const TangentMatrix& u, const TangentMatrix& v);

/// R(u,v)w = -dΓ(u)(v,w) + dΓ(v)(u,w) + Γ(u,Γ(v,w)) - Γ(v,Γ(u,w)).
TangentMatrix riemann(const FrameMatrix& a, const TangentMatrix& u, const TangentMatrix& v,
                      const TangentMatrix& w);

/// The long closed form of 4 R(u,v)w a^+, multiplied back by a/4.
TangentMatrix riemann_closed_form(const FrameMatrix& a, const TangentMatrix& u,
                                  const TangentMatrix& v, const TangentMatrix& w);

/// <R(u,v)v,u> after metric Gram-Schmidt of (u, v). Throws DegeneratePlane.
double sectional(const FrameMatrix& a, const TangentMatrix& u, const TangentMatrix& v);

/// Sectional curvature from the traceless parts U0, V0 of an orthonormalized
/// pair; no Riemann tensor is formed.
double sectional_traceless(const FrameMatrix& a, const TangentMatrix& u, const TangentMatrix& v);

/// m = 1 only: 3/4 |a|^{-2} (|u0|^2 |v0|^2 - <u0,v0>^2) on orthonormalized
/// traceless parts. Throws WrongDimension for m != 1.
double sectional_m1(const FrameMatrix& a, const TangentMatrix& u, const TangentMatrix& v);

struct Histogram {
  std::vector<double> bin_edges;   // bins + 1 increasing values
  std::vector<std::uint64_t> counts;
  double positive_fraction = 0.0;
  std::uint64_t positives = 0;
  std::uint64_t samples = 0;
  std::uint64_t redraws = 0;       // draws rejected for rank or plane degeneracy
  double min_value = 0.0;
  double max_value = 0.0;
};

/// Sample i draws a, u, v (i.i.d. standard normal, in that order) from
/// derive_seed(seed, i) and redraws on rank or plane failure, so the result
/// does not depend on the worker count. workers = 0 picks the hardware count.
Histogram curvature_scan(int m, int n, std::uint64_t samples, int bins, Seed seed,
                         unsigned workers = 0);

}  // namespace oneforms
