#include "oneforms/linalg.hpp"

#include <algorithm>
#include <string>

#include <unsupported/Eigen/MatrixFunctions>

#include "oneforms/errors.hpp"

namespace oneforms {

namespace {

// Eigenvalue floor for SPD inputs, matched to the frame rank tolerance so that
// p passes iff its square root would pass as a frame.
bool spd_eigenvalues_ok(const Eigen::VectorXd& eig) {
  const double lmax = eig.maxCoeff();
  const double rel = kRankTolerance * static_cast<double>(eig.size());
  return lmax > 0.0 && eig.minCoeff() > rel * rel * lmax;
}

Eigen::SelfAdjointEigenSolver<RealMatrix> spd_eigen(const RealMatrix& p) {
  if (p.rows() != p.cols() || p.rows() == 0) {
    throw WrongDimension("sym_sqrt: expected a non-empty square matrix");
  }
  const double scale = std::max(1.0, p.cwiseAbs().maxCoeff());
  if ((p - p.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
    throw NotSPD("matrix is not symmetric");
  }
  Eigen::SelfAdjointEigenSolver<RealMatrix> es(symmetric_part(p));
  if (es.info() != Eigen::Success || !spd_eigenvalues_ok(es.eigenvalues())) {
    throw NotSPD("matrix is not positive definite (eigenvalue below tolerance)");
  }
  return es;
}

}  // namespace

RankDiagnostics rank_diagnostics(const RealMatrix& a) {
  RankDiagnostics d;
  if (a.size() == 0) return d;
  Eigen::JacobiSVD<RealMatrix> svd(a);
  d.singular_values = svd.singularValues();
  d.sigma_max = d.singular_values(0);
  d.sigma_min = d.singular_values(d.singular_values.size() - 1);
  d.threshold = kRankTolerance * static_cast<double>(std::max(a.rows(), a.cols())) * d.sigma_max;
  d.full_rank = a.rows() >= a.cols() && all_finite(a) && d.sigma_min > d.threshold;
  return d;
}

RealMatrix pseudoinverse(const RealMatrix& a) {
  if (a.rows() < a.cols() || a.cols() == 0) {
    throw WrongDimension("pseudoinverse: expected n x m with n >= m >= 1");
  }
  if (!all_finite(a)) throw RankDeficient("pseudoinverse: non-finite entries");
  Eigen::JacobiSVD<RealMatrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& s = svd.singularValues();
  const double threshold =
      kRankTolerance * static_cast<double>(std::max(a.rows(), a.cols())) * s(0);
  if (!(s(s.size() - 1) > threshold)) {
    throw RankDeficient("pseudoinverse: smallest singular value " +
                        std::to_string(s(s.size() - 1)) + " below rank tolerance");
  }
  return svd.matrixV() * s.cwiseInverse().asDiagonal() * svd.matrixU().transpose();
}

RealMatrix sym_sqrt(const RealMatrix& p) {
  const auto es = spd_eigen(p);
  const RealMatrix& v = es.eigenvectors();
  return symmetric_part(v * es.eigenvalues().cwiseSqrt().asDiagonal() * v.transpose());
}

RealMatrix sym_inv_sqrt(const RealMatrix& p) {
  const auto es = spd_eigen(p);
  const RealMatrix& v = es.eigenvectors();
  return symmetric_part(v * es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
                        v.transpose());
}

RealMatrix matrix_exp(const RealMatrix& x) {
  if (x.rows() != x.cols()) throw WrongDimension("matrix_exp: expected a square matrix");
  if (x.size() == 0) return x;
  return x.exp();
}

RealMatrix symmetric_part(const RealMatrix& x) { return 0.5 * (x + x.transpose()); }

RealMatrix skew_part(const RealMatrix& x) { return 0.5 * (x - x.transpose()); }

bool all_finite(const RealMatrix& x) { return x.allFinite(); }

Seed derive_seed(Seed base, std::uint64_t index) {
  // splitmix64 finalizer
  std::uint64_t z = base.value + (index + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return Seed{z ^ (z >> 31)};
}

RealMatrix GaussianSampler::draw(Index rows, Index cols) {
  RealMatrix out(rows, cols);
  // row-major fill so the stream order matches the JSON encoding
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) out(i, j) = next();
  return out;
}

RealMatrix sample_gaussian(Index n, Index m, Seed seed) {
  GaussianSampler sampler(seed);
  return sampler.draw(n, m);
}

}  // namespace oneforms
