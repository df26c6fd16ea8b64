#pragma once

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <stdexcept>

#include "mrcl/angles.hpp"

namespace mrcl {

template <int N>
using Vector = Eigen::Matrix<double, N, 1>;
template <int R, int C = R>
using Matrix = Eigen::Matrix<double, R, C>;

/// Thrown when a covariance stops being factorizable even after jitter.
struct FilterDivergence : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Lower-triangular S with S*S^T = p. Retries once with diagonal jitter so an
/// exactly singular (but PSD) covariance still factors.
template <int N>
Matrix<N> cholesky_factor(const Matrix<N>& p) {
  Eigen::LLT<Matrix<N>> llt(p);
  if (llt.info() == Eigen::Success) return llt.matrixL();
  llt.compute(p + 1e-12 * Matrix<N>::Identity());
  if (llt.info() == Eigen::Success) return llt.matrixL();
  throw FilterDivergence("covariance not positive semidefinite after jitter");
}

/// Symmetrizes; if the jittered Cholesky then fails, clamps negative
/// eigenvalues to zero.
template <int N>
void make_psd(Matrix<N>& p) {
  p = (0.5 * (p + p.transpose())).eval();
  Eigen::LLT<Matrix<N>> llt(Matrix<N>(p + 1e-12 * Matrix<N>::Identity()));
  if (llt.info() == Eigen::Success) return;
  Eigen::SelfAdjointEigenSolver<Matrix<N>> es(p);
  const Vector<N> clamped = es.eigenvalues().cwiseMax(0.0);
  p = es.eigenvectors() * clamped.asDiagonal() * es.eigenvectors().transpose();
  p = (0.5 * (p + p.transpose())).eval();
}

/// Marks which vector components are angles, so residuals wrap to (-pi, pi]
/// and means are circular (atan2 of averaged sin/cos).
template <int N>
struct ComponentOps {
  std::array<bool, N> angular{};

  Vector<N> residual(const Vector<N>& a, const Vector<N>& b) const {
    Vector<N> r = a - b;
    for (int c = 0; c < N; ++c)
      if (angular[c]) r(c) = wrap_angle(r(c));
    return r;
  }

  Vector<N> add(const Vector<N>& a, const Vector<N>& delta) const {
    Vector<N> r = a + delta;
    for (int c = 0; c < N; ++c)
      if (angular[c]) r(c) = wrap_angle(r(c));
    return r;
  }

  /// Weighted mean of column-stacked points. Sums are anchored at the first
  /// point, which is exact for weights summing to one and avoids cancellation
  /// when individual weights are large (small-alpha sigma sets).
  template <int M>
  Vector<N> weighted_mean(const Matrix<N, M>& points,
                          const Vector<M>& weights) const {
    Vector<N> mean;
    for (int c = 0; c < N; ++c) {
      if (angular[c]) {
        const double s0 = std::sin(points(c, 0));
        const double c0 = std::cos(points(c, 0));
        double ds = 0.0, dc = 0.0;
        for (int i = 0; i < M; ++i) {
          ds += weights(i) * (std::sin(points(c, i)) - s0);
          dc += weights(i) * (std::cos(points(c, i)) - c0);
        }
        mean(c) = wrap_angle(std::atan2(s0 + ds, c0 + dc));
      } else {
        const double p0 = points(c, 0);
        double acc = 0.0;
        for (int i = 0; i < M; ++i) acc += weights(i) * (points(c, i) - p0);
        mean(c) = p0 + acc;
      }
    }
    return mean;
  }
};

/// Moments of a nonlinear map of a Gaussian: output mean, centered output
/// covariance (additive noise not included), and input-output cross
/// covariance.
template <int N, int K>
struct TransformResult {
  Vector<K> mean = Vector<K>::Zero();
  Matrix<K> cov = Matrix<K>::Zero();
  Matrix<N, K> cross = Matrix<N, K>::Zero();
};

namespace detail {

template <int N, int K, int M>
TransformResult<N, K> assemble_moments(const Matrix<N, M>& in_dev,
                                       const Matrix<K, M>& out_points,
                                       const Vector<M>& mean_weights,
                                       const Vector<M>& cov_weights,
                                       const ComponentOps<K>& out_ops) {
  TransformResult<N, K> result;
  result.mean = out_ops.weighted_mean(out_points, mean_weights);
  for (int i = 0; i < M; ++i) {
    const Vector<K> dev = out_ops.residual(out_points.col(i), result.mean);
    result.cov += cov_weights(i) * dev * dev.transpose();
    result.cross += cov_weights(i) * in_dev.col(i) * dev.transpose();
  }
  result.cov = (0.5 * (result.cov + result.cov.transpose())).eval();
  return result;
}

}  // namespace detail

/// Third-degree spherical-radial cubature rule: 2N points at
/// mean +- sqrt(N) * S e_i with uniform weights.
template <int K, int N, class Fn>
TransformResult<N, K> cubature_transform(const Vector<N>& mean, const Matrix<N>& cov,
                                         Fn&& g, const ComponentOps<K>& out_ops) {
  constexpr int kPoints = 2 * N;
  const Matrix<N> s = cholesky_factor<N>(cov);
  const double scale = std::sqrt(static_cast<double>(N));

  Matrix<N, kPoints> in_dev;
  in_dev.template leftCols<N>() = scale * s;
  in_dev.template rightCols<N>() = -scale * s;

  Matrix<K, kPoints> out_points;
  for (int i = 0; i < kPoints; ++i)
    out_points.col(i) = g(Vector<N>(mean + in_dev.col(i)));

  const Vector<kPoints> weights = Vector<kPoints>::Constant(1.0 / kPoints);
  return detail::assemble_moments<N, K, kPoints>(in_dev, out_points, weights,
                                                 weights, out_ops);
}

struct UkfParams {
  double alpha = 1e-3;
  double beta = 2.0;
  double kappa = 0.0;
};

/// Scaled unscented transform with 2N+1 Wan-Merwe sigma points.
template <int K, int N, class Fn>
TransformResult<N, K> unscented_transform(const Vector<N>& mean, const Matrix<N>& cov,
                                          Fn&& g, const ComponentOps<K>& out_ops,
                                          const UkfParams& params = {}) {
  constexpr int kPoints = 2 * N + 1;
  const double n = static_cast<double>(N);
  const double lambda = params.alpha * params.alpha * (n + params.kappa) - n;
  const double spread = std::sqrt(n + lambda);
  const Matrix<N> s = cholesky_factor<N>(cov);

  Matrix<N, kPoints> in_dev;
  in_dev.col(0).setZero();
  in_dev.template middleCols<N>(1) = spread * s;
  in_dev.template rightCols<N>() = -spread * s;

  Matrix<K, kPoints> out_points;
  for (int i = 0; i < kPoints; ++i)
    out_points.col(i) = g(Vector<N>(mean + in_dev.col(i)));

  Vector<kPoints> mean_weights =
      Vector<kPoints>::Constant(0.5 / (n + lambda));
  Vector<kPoints> cov_weights = mean_weights;
  mean_weights(0) = lambda / (n + lambda);
  cov_weights(0) = mean_weights(0) + 1.0 - params.alpha * params.alpha + params.beta;
  return detail::assemble_moments<N, K, kPoints>(in_dev, out_points, mean_weights,
                                                 cov_weights, out_ops);
}

/// First-order (Jacobian) propagation; the EKF route through the same shape.
template <int N, int K>
TransformResult<N, K> linearized_transform(const Matrix<N>& cov,
                                           const Vector<K>& mean_out,
                                           const Matrix<K, N>& jacobian) {
  TransformResult<N, K> result;
  result.mean = mean_out;
  result.cov = jacobian * cov * jacobian.transpose();
  result.cov = (0.5 * (result.cov + result.cov.transpose())).eval();
  result.cross = cov * jacobian.transpose();
  return result;
}

template <int N, int M>
struct GaussianUpdate {
  Vector<N> mean = Vector<N>::Zero();
  Matrix<N> cov = Matrix<N>::Zero();
  Vector<M> innovation = Vector<M>::Zero();
  Matrix<N, M> gain = Matrix<N, M>::Zero();
  bool ok = true;  // false: innovation covariance not factorizable, skipped
};

/// Shared correction algebra: K = cross * S^-1, mean += K * innovation,
/// cov -= K * S * K^T with symmetrization and PSD repair. A singular
/// innovation covariance leaves the estimate untouched and reports ok=false.
template <int N, int M>
GaussianUpdate<N, M> kalman_update(const Vector<N>& mean, const Matrix<N>& cov,
                                   const TransformResult<N, M>& predicted,
                                   const Matrix<M>& noise, const Vector<M>& z,
                                   const ComponentOps<N>& state_ops,
                                   const ComponentOps<M>& meas_ops) {
  GaussianUpdate<N, M> out;
  out.mean = mean;
  out.cov = cov;
  out.innovation = meas_ops.residual(z, predicted.mean);

  Matrix<M> s = predicted.cov + noise;
  s = (0.5 * (s + s.transpose())).eval();
  Eigen::LLT<Matrix<M>> llt(s);
  if (llt.info() != Eigen::Success) {
    out.ok = false;
    return out;
  }

  out.gain = llt.solve(predicted.cross.transpose()).transpose();
  out.mean = state_ops.add(mean, out.gain * out.innovation);
  out.cov = cov - out.gain * s * out.gain.transpose();
  make_psd<N>(out.cov);
  return out;
}

}  // namespace mrcl
