#pragma once

// Dense small-matrix primitives shared by the rest of the library.

#include <cstdint>
#include <random>

#include <Eigen/Dense>

namespace oneforms {

using RealMatrix = Eigen::MatrixXd;
using Index = Eigen::Index;

/// Seed of a reproducible sample stream.
struct Seed {
  std::uint64_t value = 0;
  friend bool operator==(Seed, Seed) = default;
};

/// A frame is full rank iff sigma_min > kRankTolerance * max(n, m) * sigma_max.
inline constexpr double kRankTolerance = 1e-9;

struct RankDiagnostics {
  Eigen::VectorXd singular_values;  // descending
  double sigma_min = 0.0;
  double sigma_max = 0.0;
  double threshold = 0.0;
  bool full_rank = false;

  double condition() const { return sigma_max / sigma_min; }
};

RankDiagnostics rank_diagnostics(const RealMatrix& a);

/// Moore-Penrose pseudoinverse (a^T a)^{-1} a^T of a full-column-rank matrix.
/// Throws RankDeficient when the rank tolerance is violated.
RealMatrix pseudoinverse(const RealMatrix& a);

/// Positive-definite square root of a symmetric positive-definite matrix.
/// Throws NotSPD.
RealMatrix sym_sqrt(const RealMatrix& p);
RealMatrix sym_inv_sqrt(const RealMatrix& p);

/// Matrix exponential (Pade scaling-and-squaring).
RealMatrix matrix_exp(const RealMatrix& x);

RealMatrix symmetric_part(const RealMatrix& x);
RealMatrix skew_part(const RealMatrix& x);

bool all_finite(const RealMatrix& x);

/// Deterministic per-index seed: sample i of a stream with base seed b always
/// gets the same generator, independent of how samples are scheduled.
Seed derive_seed(Seed base, std::uint64_t index);

/// i.i.d. standard-normal source.
class GaussianSampler {
 public:
  explicit GaussianSampler(Seed seed) : engine_(seed.value) {}

  double next() { return normal_(engine_); }
  RealMatrix draw(Index rows, Index cols);

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

/// n x m matrix of i.i.d. standard normals; identical output for identical seeds.
RealMatrix sample_gaussian(Index n, Index m, Seed seed);

}  // namespace oneforms
