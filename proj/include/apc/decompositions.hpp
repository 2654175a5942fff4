#pragma once

#include <array>
#include <cmath>
#include <vector>

#include "apc/errors.hpp"
#include "apc/gates.hpp"
#include "apc/numeric.hpp"

namespace apc {

enum class EulerConvention { ZXZ, ZYZ };

inline const char* to_string(EulerConvention c) { return c == EulerConvention::ZXZ ? "ZXZ" : "ZYZ"; }

/// U = e^{i delta} Rz(alpha3) R_mid(alpha2) Rz(alpha1), mid = x or y.
struct EulerFactors {
  double delta = 0.0;
  double alpha1 = 0.0;
  double alpha2 = 0.0;
  double alpha3 = 0.0;
  EulerConvention convention = EulerConvention::ZXZ;
};

inline Mat reconstruct(const EulerFactors& e) {
  const Mat mid = e.convention == EulerConvention::ZXZ ? rx(e.alpha2) : ry(e.alpha2);
  return std::polar(1.0, e.delta) * rz(e.alpha3) * mid * rz(e.alpha1);
}

namespace detail {

inline void require_unitary_2x2(const GateMatrix& u, const char* what) {
  if (u.dim() != 2) throw DimError(std::string(what) + " needs a 2x2 gate");
  if (u.gate_class() != GateClass::Unitary) throw ClassError(std::string(what) + " needs a unitary gate");
}

inline EulerFactors euler(const GateMatrix& u, EulerConvention conv) {
  require_unitary_2x2(u, conv == EulerConvention::ZXZ ? "euler_zxz" : "euler_zyz");
  const Mat& m = u.matrix();
  EulerFactors e;
  e.convention = conv;
  e.delta = std::arg(m.determinant()) / 2;
  const Mat v = std::polar(1.0, -e.delta) * m;

  const double c = std::abs(v(0, 0)), s = std::abs(v(1, 0));
  e.alpha2 = 2.0 * std::atan2(s, c);
  const double sigma = c < 1e-12 ? 0.0 : -std::arg(v(0, 0));
  if (s < 1e-12) {
    e.alpha1 = 0.0;
    e.alpha3 = 2.0 * sigma;
  } else {
    const double offset = conv == EulerConvention::ZXZ ? kPi / 2 : 0.0;
    const double diff = std::arg(v(1, 0)) + offset;
    e.alpha1 = sigma - diff;
    e.alpha3 = sigma + diff;
  }

  // Rz(a + 2 pi k) = (-1)^k Rz(a): wrapping may flip the sign, which is
  // absorbed into the global phase.
  long shifts = 0;
  for (double* a : {&e.alpha1, &e.alpha3}) {
    const double w = wrap_2pi(*a);
    shifts += std::lround((w - *a) / kTwoPi);
    *a = w;
  }
  if (shifts % 2 != 0) e.delta += kPi;
  e.delta = wrap_2pi(e.delta);
  return e;
}

}  // namespace detail

inline EulerFactors euler_zxz(const GateMatrix& u) { return detail::euler(u, EulerConvention::ZXZ); }
inline EulerFactors euler_zyz(const GateMatrix& u) { return detail::euler(u, EulerConvention::ZYZ); }

/// M = U2 diag(d1, d2) U1 with d1 >= d2 >= 0.
struct SvdFactors {
  GateMatrix u2 = GateMatrix::identity(2);
  double d1 = 0.0;
  double d2 = 0.0;
  GateMatrix u1 = GateMatrix::identity(2);
};

inline Mat reconstruct(const SvdFactors& f) { return f.u2.matrix() * diag2(f.d1, f.d2) * f.u1.matrix(); }

namespace detail {

inline Vec complement(const Vec& v) {
  Vec w(2);
  w << -std::conj(v(1)), std::conj(v(0));
  return w;
}

/// Scales v so its largest-modulus entry is real and positive.
inline Vec fix_phase(const Vec& v) {
  Eigen::Index k = 0;
  v.cwiseAbs().maxCoeff(&k);
  const double mag = std::abs(v(k));
  if (mag == 0.0) return v;
  return v * (std::conj(v(k)) / mag);
}

/// Unit eigenvector of the larger eigenvalue of a 2x2 Hermitian matrix,
/// via a Jacobi rotation so that near-degenerate spectra stay accurate.
inline Vec top_eigenvector(const Mat& h) {
  const double a = h(0, 0).real(), c = h(1, 1).real();
  const double b = std::abs(h(0, 1));
  const double theta = 0.5 * std::atan2(2.0 * b, a - c);
  Vec v(2);
  v << std::cos(theta), std::polar(std::sin(theta), -std::arg(h(0, 1)));
  return v;
}

}  // namespace detail

inline SvdFactors svd2(const GateMatrix& g) {
  if (g.dim() != 2) throw DimError("svd2 needs a 2x2 gate");
  const Mat& m = g.matrix();
  SvdFactors f;
  if (m.norm() == 0.0) return f;

  const Vec v1 = detail::fix_phase(detail::top_eigenvector(m.adjoint() * m));
  const Vec v2 = detail::fix_phase(detail::complement(v1));
  const Vec mv1 = m * v1;
  f.d1 = mv1.norm();
  const Vec u1 = mv1 / f.d1;
  const Vec c = detail::complement(u1);
  const cplx p = c.dot(m * v2);
  f.d2 = std::abs(p);
  const Vec u2 = f.d2 > 0.0 ? Vec(c * (p / f.d2)) : c;

  Mat left(2, 2), right(2, 2);
  left << u1, u2;
  right << v1, v2;
  f.u2 = GateMatrix(left);
  f.u1 = GateMatrix(right.adjoint());
  return f;
}

/// M = sum_k alpha_k sigma_k.
struct PauliCoefficients {
  std::array<cplx, 4> alpha{};
};

inline PauliCoefficients pauli_decompose(const GateMatrix& g) {
  if (g.dim() != 2) throw DimError("pauli_decompose needs a 2x2 gate");
  const Mat& m = g.matrix();
  PauliCoefficients p;
  p.alpha[0] = (m(0, 0) + m(1, 1)) / 2.0;
  p.alpha[1] = (m(0, 1) + m(1, 0)) / 2.0;
  p.alpha[2] = kI * (m(0, 1) - m(1, 0)) / 2.0;
  p.alpha[3] = (m(0, 0) - m(1, 1)) / 2.0;
  return p;
}

inline Mat reconstruct(const PauliCoefficients& p) {
  Mat m = Mat::Zero(2, 2);
  for (int k = 0; k < 4; ++k) m += p.alpha[k] * pauli(k).matrix();
  return m;
}

/// G = U e^{iA} e^{B} with A = [[0, a], [-a, 0]] and B real symmetric,
/// expanded as (U U1) L1 (U1^+ U2) L2 U2^+.
struct MostowFactors {
  GateMatrix u = GateMatrix::identity(2);
  double a = 0.0;
  Eigen::Matrix2d b = Eigen::Matrix2d::Zero();
  Mat u1 = Mat::Identity(2, 2);
  std::array<double, 2> lambda1{1.0, 1.0};
  Mat u2 = Mat::Identity(2, 2);
  std::array<double, 2> lambda2{1.0, 1.0};

  /// The five stages in written (left-to-right) order.
  std::vector<Mat> expanded() const {
    return {u.matrix() * u1, diag2(lambda1[0], lambda1[1]), u1.adjoint() * u2, diag2(lambda2[0], lambda2[1]),
            u2.adjoint()};
  }

  Mat exp_ia() const { return u1 * diag2(lambda1[0], lambda1[1]) * u1.adjoint(); }
  Mat exp_b() const { return u2 * diag2(lambda2[0], lambda2[1]) * u2.adjoint(); }

  Mat product() const {
    Mat g = Mat::Identity(2, 2);
    for (const Mat& s : expanded()) g = g * s;
    return g;
  }
};

inline MostowFactors mostow_synthesize(const GateMatrix& u, double a, const Eigen::Matrix2d& b) {
  detail::require_unitary_2x2(u, "mostow_synthesize");
  if (!b.allFinite() || !std::isfinite(a)) throw ParamError("Mostow parameters must be finite");
  if (std::abs(b(0, 1) - b(1, 0)) > 1e-9 * std::max(1.0, b.norm()))
    throw SymmetryError("Mostow B matrix must be symmetric");

  MostowFactors f;
  f.u = u;
  f.a = a;
  f.b = b;

  // i A = -a sigma_y, eigenvectors (1, i)/sqrt2 and (1, -i)/sqrt2.
  const double r = 1.0 / std::sqrt(2.0);
  f.u1 << r, r, cplx(0, r), cplx(0, -r);
  f.lambda1 = {std::exp(-a), std::exp(a)};

  const double p = b(0, 0), q = 0.5 * (b(0, 1) + b(1, 0)), s = b(1, 1);
  const double theta = 0.5 * std::atan2(2.0 * q, p - s);
  const double mean = 0.5 * (p + s), rad = 0.5 * std::hypot(p - s, 2.0 * q);
  f.u2 << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
  f.lambda2 = {std::exp(mean + rad), std::exp(mean - rad)};
  return f;
}

}  // namespace apc
