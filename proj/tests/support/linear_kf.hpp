#pragma once

// Closed-form linear Kalman filter, used only as a test oracle. Kept free of
// the library's transform/update code paths on purpose.

#include <Eigen/Dense>

namespace oracle {

template <int N, int M>
struct LinearKf {
  Eigen::Matrix<double, N, N> a;
  Eigen::Matrix<double, N, N> q;
  Eigen::Matrix<double, M, N> h;
  Eigen::Matrix<double, M, M> r;
  Eigen::Matrix<double, N, 1> mean;
  Eigen::Matrix<double, N, N> cov;

  void predict() {
    mean = a * mean;
    cov = a * cov * a.transpose() + q;
  }

  void correct(const Eigen::Matrix<double, M, 1>& z) {
    const Eigen::Matrix<double, M, M> s = h * cov * h.transpose() + r;
    const Eigen::Matrix<double, N, M> k = cov * h.transpose() * s.inverse();
    mean += k * (z - h * mean);
    cov -= k * s * k.transpose();
    cov = (0.5 * (cov + cov.transpose())).eval();
  }
};

}  // namespace oracle
