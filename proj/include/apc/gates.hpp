#pragma once

#include <array>
#include <cmath>
#include <string>
#include <utility>

#include "apc/errors.hpp"
#include "apc/numeric.hpp"
#include "apc/state.hpp"

namespace apc {

enum class GateClass { Unitary, GeneralLinear, Singular };

inline const char* to_string(GateClass c) {
  switch (c) {
    case GateClass::Unitary: return "Unitary";
    case GateClass::GeneralLinear: return "GeneralLinear";
    case GateClass::Singular: return "Singular";
  }
  return "?";
}

/// Classifies a square matrix. Unitarity is tested first, so a unitary
/// matrix is never reported as merely general linear.
inline GateClass classify_matrix(const Mat& f, double tol = kClassTol) {
  const auto d = f.rows();
  const double unit_err = (f.adjoint() * f - Mat::Identity(d, d)).norm();
  if (unit_err <= tol * static_cast<double>(d)) return GateClass::Unitary;
  const double scale = std::pow(f.norm(), static_cast<double>(d));
  if (std::abs(f.determinant()) <= tol * scale) return GateClass::Singular;
  return GateClass::GeneralLinear;
}

/// Square complex matrix acting on andits, with a cached classification.
class GateMatrix {
 public:
  explicit GateMatrix(Mat entries, double tol = kClassTol) : f_(std::move(entries)), tol_(tol) {
    if (f_.rows() == 0 || f_.rows() != f_.cols()) throw DimError("gate matrix must be square and non-empty");
    cls_ = classify_matrix(f_, tol_);
  }

  static GateMatrix identity(int d) { return GateMatrix(Mat::Identity(d, d)); }

  int dim() const { return static_cast<int>(f_.rows()); }
  const Mat& matrix() const { return f_; }
  cplx operator()(int r, int c) const { return f_(r, c); }
  GateClass gate_class() const { return cls_; }
  double tol() const { return tol_; }

  /// Copy with one entry replaced; the class is recomputed.
  GateMatrix with_entry(int r, int c, cplx value) const {
    if (r < 0 || c < 0 || r >= dim() || c >= dim()) throw IndexError("gate entry out of range");
    Mat m = f_;
    m(r, c) = value;
    return GateMatrix(std::move(m), tol_);
  }

  GateMatrix with_tol(double tol) const { return GateMatrix(f_, tol); }

 private:
  Mat f_;
  double tol_;
  GateClass cls_;
};

inline GateClass classify(const GateMatrix& g) { return g.gate_class(); }

inline GateMatrix operator*(const GateMatrix& a, const GateMatrix& b) {
  if (a.dim() != b.dim()) throw DimError("cannot compose gates of different dimension");
  return GateMatrix(a.matrix() * b.matrix(), a.tol());
}

inline AnbitState apply(const GateMatrix& g, const AnbitState& s) {
  if (g.dim() != s.dim()) throw DimError("gate and state dimensions differ");
  return AnbitState(g.matrix() * s.amps(), s.delta_t());
}

struct RotationSpec {
  std::array<double, 3> axis{0.0, 0.0, 1.0};
  double angle = 0.0;
  double global_phase = 0.0;
};

/// e^{i delta} R_n(alpha) for a unit axis n.
inline GateMatrix rotation_matrix(const RotationSpec& spec) {
  const auto [nx, ny, nz] = spec.axis;
  const double len = std::sqrt(nx * nx + ny * ny + nz * nz);
  if (!std::isfinite(len) || std::abs(len - 1.0) > 1e-9) throw AxisError("rotation axis must be a unit vector");
  const double c = std::cos(spec.angle / 2), s = std::sin(spec.angle / 2);
  Mat u(2, 2);
  u << cplx(c, -nz * s), cplx(-ny * s, -nx * s),
       cplx(ny * s, -nx * s), cplx(c, nz * s);
  return GateMatrix(std::polar(1.0, spec.global_phase) * u);
}

inline GateMatrix pauli(int k) {
  Mat m(2, 2);
  switch (k) {
    case 0: m << 1, 0, 0, 1; break;
    case 1: m << 0, 1, 1, 0; break;
    case 2: m << 0, -kI, kI, 0; break;
    case 3: m << 1, 0, 0, -1; break;
    default: throw IndexError("Pauli index must be 0..3");
  }
  return GateMatrix(std::move(m));
}

inline std::array<double, 3> pauli_axis(int k) {
  switch (k) {
    case 1: return {1, 0, 0};
    case 2: return {0, 1, 0};
    case 3: return {0, 0, 1};
    default: throw IndexError("Pauli axis index must be 1..3");
  }
}

inline constexpr int kMaxControls = 16;

/// A 2x2 target gate conditioned on n control anbits. The dense embedding
/// is block diagonal: identity everywhere except the all-ones control block.
class ControlledGate {
 public:
  ControlledGate(GateMatrix target, int n_controls) : target_(std::move(target)), n_(n_controls) {
    if (target_.dim() != 2) throw DimError("controlled gates need a 2x2 target");
    if (n_ < 1 || n_ > kMaxControls) throw ParamError("number of controls must be in 1..16");
  }

  int n_controls() const { return n_; }
  const GateMatrix& target() const { return target_; }
  long embedded_dim() const { return 2L << n_; }

  GateMatrix embedded() const {
    const long d = embedded_dim();
    Mat m = Mat::Identity(d, d);
    m.bottomRightCorner(2, 2) = target_.matrix();
    return GateMatrix(std::move(m), target_.tol());
  }

  /// Applies the embedding to a flat vector without materialising it.
  Vec apply_flat(const Vec& v) const {
    if (v.size() != embedded_dim()) throw DimError("input length does not match the controlled gate");
    Vec out = v;
    out.tail(2) = target_.matrix() * v.tail(2);
    return out;
  }

 private:
  GateMatrix target_;
  int n_;
};

inline ControlledGate controlled(const GateMatrix& target, int n_controls) {
  return ControlledGate(target, n_controls);
}

inline GateMatrix toffoli() { return controlled(pauli(1), 2).embedded(); }

/// All-optical control: c0 |0> (x) t + c1 |1> (x) F t.
inline CompositeState apply_controlled_superposed(const ControlledGate& cg, const AnbitState& control,
                                                  const AnbitState& target) {
  if (cg.n_controls() != 1) throw ParamError("superposed control supports a single control anbit");
  if (control.dim() != 2 || target.dim() != 2) throw DimError("control and target must be anbits");
  Vec flat(4);
  flat.head(2) = control[0] * target.amps();
  flat.tail(2) = control[1] * (cg.target().matrix() * target.amps());
  return CompositeState::tensor_from_flat(std::move(flat), {2, 2});
}

/// NAND evaluated through the Toffoli gate acting on |b1, b2, 1>.
inline int nand_emulate(int b1, int b2) {
  if ((b1 != 0 && b1 != 1) || (b2 != 0 && b2 != 1)) throw ParamError("NAND inputs must be bits");
  const CompositeState in = tensor_compose({AnbitState::basis(2, b1), AnbitState::basis(2, b2), AnbitState::basis(2, 1)});
  const Vec out = toffoli().matrix() * in.flat();
  Eigen::Index idx = 0;
  out.cwiseAbs().maxCoeff(&idx);
  return static_cast<int>(idx & 1);
}

}  // namespace apc
