#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include <Eigen/Dense>

namespace apc {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr cplx kI{0.0, 1.0};

/// Default tolerance used to classify gates (unitarity and singularity).
inline constexpr double kClassTol = 1e-9;

/// Combined absolute/relative tolerance for complex comparisons.
struct Tolerance {
  double atol = 1e-12;
  double rtol = 1e-9;
};

inline bool approx_equal(cplx x, cplx y, Tolerance tol = {}) {
  return std::abs(x - y) <= tol.atol + tol.rtol * std::max(std::abs(x), std::abs(y));
}

inline bool approx_equal(const Mat& a, const Mat& b, Tolerance tol = {}) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  for (Eigen::Index r = 0; r < a.rows(); ++r)
    for (Eigen::Index c = 0; c < a.cols(); ++c)
      if (!approx_equal(a(r, c), b(r, c), tol)) return false;
  return true;
}

/// Maps an angle into [0, 2pi).
inline double wrap_2pi(double angle) {
  double w = std::fmod(angle, kTwoPi);
  if (w < 0) w += kTwoPi;
  if (w >= kTwoPi) w -= kTwoPi;
  return w;
}

inline Mat identity(int d) { return Mat::Identity(d, d); }

/// Kronecker product with the left factor varying slowest.
inline Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index r = 0; r < a.rows(); ++r)
    for (Eigen::Index c = 0; c < a.cols(); ++c)
      out.block(r * b.rows(), c * b.cols(), b.rows(), b.cols()) = a(r, c) * b;
  return out;
}

inline Vec kron(const Vec& a, const Vec& b) {
  Vec out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

// Elementary SU(2) rotations about the Cartesian axes of the Bloch sphere.

inline Mat rz(double angle) {
  Mat m = Mat::Zero(2, 2);
  m(0, 0) = std::polar(1.0, -angle / 2);
  m(1, 1) = std::polar(1.0, angle / 2);
  return m;
}

inline Mat rx(double angle) {
  const double c = std::cos(angle / 2), s = std::sin(angle / 2);
  Mat m(2, 2);
  m << c, cplx(0, -s), cplx(0, -s), c;
  return m;
}

inline Mat ry(double angle) {
  const double c = std::cos(angle / 2), s = std::sin(angle / 2);
  Mat m(2, 2);
  m << c, -s, s, c;
  return m;
}

inline Mat diag2(cplx a, cplx b) {
  Mat m = Mat::Zero(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return m;
}

}  // namespace apc
