#pragma once

#include <complex>
#include <random>

#include <Eigen/Dense>

#include "apc/numeric.hpp"
#include "apc/state.hpp"

namespace apc::testing {

inline std::mt19937_64& rng() {
  static std::mt19937_64 gen(0x5eed1234ULL);
  return gen;
}

inline double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng()); }

inline cplx gaussian_complex() {
  std::normal_distribution<double> n(0.0, 1.0);
  return {n(rng()), n(rng())};
}

inline Mat random_matrix(int d) {
  Mat m(d, d);
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) m(r, c) = gaussian_complex();
  return m;
}

/// Haar-distributed unitary: QR of a Ginibre matrix with R's diagonal
/// phases folded back into Q.
inline Mat haar_unitary(int d) {
  const Mat z = random_matrix(d);
  Eigen::HouseholderQR<Mat> qr(z);
  Mat q = qr.householderQ();
  const Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int k = 0; k < d; ++k) {
    const cplx p = r(k, k) / std::abs(r(k, k));
    q.col(k) *= p;
  }
  return q;
}

inline Vec random_vec(int d) {
  Vec v(d);
  for (int k = 0; k < d; ++k) v(k) = gaussian_complex();
  return v;
}

inline AnbitState random_state(int d = 2) { return AnbitState(random_vec(d)); }

inline cplx random_phase() { return std::polar(1.0, uniform(0.0, kTwoPi)); }

inline double max_abs(const Mat& m) { return m.cwiseAbs().maxCoeff(); }

/// Truncated sum_{k < terms} A^k.
inline Mat neumann_series(const Mat& a, int terms) {
  Mat sum = Mat::Identity(a.rows(), a.cols());
  Mat power = Mat::Identity(a.rows(), a.cols());
  for (int k = 1; k < terms; ++k) {
    power = power * a;
    sum += power;
  }
  return sum;
}

inline double spectral_radius(const Mat& a) { return a.eigenvalues().cwiseAbs().maxCoeff(); }

}  // namespace apc::testing
