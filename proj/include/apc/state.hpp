#pragma once

#include <cmath>
#include <initializer_list>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "apc/errors.hpp"
#include "apc/numeric.hpp"

namespace apc {

/// A d-dimensional complex amplitude vector: an anbit for d = 2, an andit
/// otherwise. The optional delay is the inter-amplitude delay used by
/// differential encoding and is carried as metadata only.
class AnbitState {
 public:
  explicit AnbitState(Vec amps, std::optional<double> delta_t = std::nullopt)
      : amps_(std::move(amps)), delta_t_(delta_t) {
    if (amps_.size() == 0) throw DimError("anbit state needs at least one amplitude");
  }

  AnbitState(std::initializer_list<cplx> amps) : AnbitState(from_list(amps)) {}

  static AnbitState null(int dim) { return AnbitState(Vec::Zero(dim)); }

  static AnbitState basis(int dim, int k) {
    if (k < 0 || k >= dim) throw IndexError("basis index out of range");
    Vec v = Vec::Zero(dim);
    v(k) = 1.0;
    return AnbitState(std::move(v));
  }

  int dim() const { return static_cast<int>(amps_.size()); }
  const Vec& amps() const { return amps_; }
  cplx operator[](int k) const { return amps_(k); }
  std::optional<double> delta_t() const { return delta_t_; }

  AnbitState with_delta_t(std::optional<double> delta_t) const { return AnbitState(amps_, delta_t); }

  double norm_sq() const { return amps_.squaredNorm(); }

  bool is_null(double tol = 0.0) const {
    for (Eigen::Index k = 0; k < amps_.size(); ++k)
      if (std::abs(amps_(k)) > tol) return false;
    return true;
  }

 private:
  static Vec from_list(std::initializer_list<cplx> amps) {
    Vec v(static_cast<Eigen::Index>(amps.size()));
    Eigen::Index i = 0;
    for (cplx a : amps) v(i++) = a;
    return v;
  }

  Vec amps_;
  std::optional<double> delta_t_;
};

inline AnbitState operator+(const AnbitState& a, const AnbitState& b) {
  if (a.dim() != b.dim()) throw DimError("cannot add states of different dimension");
  return AnbitState(a.amps() + b.amps());
}

inline AnbitState operator-(const AnbitState& a, const AnbitState& b) {
  if (a.dim() != b.dim()) throw DimError("cannot subtract states of different dimension");
  return AnbitState(a.amps() - b.amps());
}

inline AnbitState operator*(cplx s, const AnbitState& a) { return AnbitState(s * a.amps(), a.delta_t()); }

/// Standard complex inner product, conjugate-linear in the first argument.
inline cplx inner_product(const AnbitState& a, const AnbitState& b) {
  if (a.dim() != b.dim()) throw DimError("inner product of states with different dimension");
  return a.amps().dot(b.amps());
}

inline double norm_sq(const AnbitState& s) { return s.norm_sq(); }

inline bool approx_equal(const AnbitState& a, const AnbitState& b, Tolerance tol = {}) {
  if (a.dim() != b.dim()) return false;
  for (int k = 0; k < a.dim(); ++k)
    if (!approx_equal(a[k], b[k], tol)) return false;
  return true;
}

enum class CompositeMode { Tensor, Cartesian };

inline const char* to_string(CompositeMode m) { return m == CompositeMode::Tensor ? "tensor" : "cartesian"; }

/// A multi-anbit state. Cartesian composites always know their parts;
/// tensor composites produced by gates may be non-separable, in which case
/// only the flattened vector and the part dimensions are kept.
class CompositeState {
 public:
  CompositeState(CompositeMode mode, std::vector<AnbitState> parts) : mode_(mode) {
    if (parts.empty()) throw DimError("composite state needs at least one part");
    for (const auto& p : parts) part_dims_.push_back(p.dim());
    flat_ = parts.front().amps();
    for (std::size_t i = 1; i < parts.size(); ++i) {
      if (mode_ == CompositeMode::Tensor) {
        flat_ = kron(flat_, parts[i].amps());
      } else {
        Vec joined(flat_.size() + parts[i].dim());
        joined << flat_, parts[i].amps();
        flat_ = std::move(joined);
      }
    }
    parts_ = std::move(parts);
  }

  /// Builds a tensor-mode state from a flat amplitude vector with no known
  /// factorisation.
  static CompositeState tensor_from_flat(Vec flat, std::vector<int> part_dims) {
    long expected = 1;
    for (int d : part_dims) expected *= d;
    if (part_dims.empty() || expected != flat.size())
      throw DimError("flat vector length does not match the product of part dimensions");
    CompositeState s;
    s.mode_ = CompositeMode::Tensor;
    s.part_dims_ = std::move(part_dims);
    s.flat_ = std::move(flat);
    return s;
  }

  CompositeMode mode() const { return mode_; }
  const Vec& flat() const { return flat_; }
  const std::vector<int>& part_dims() const { return part_dims_; }
  bool has_parts() const { return parts_.has_value(); }

  const std::vector<AnbitState>& parts() const {
    if (!parts_) throw ModeError("composite state is not separable into parts");
    return *parts_;
  }

 private:
  CompositeState() = default;

  CompositeMode mode_ = CompositeMode::Tensor;
  std::vector<int> part_dims_;
  std::optional<std::vector<AnbitState>> parts_;
  Vec flat_;
};

/// Iterated Kronecker product; the earliest part varies slowest.
inline CompositeState tensor_compose(std::vector<AnbitState> parts) {
  return CompositeState(CompositeMode::Tensor, std::move(parts));
}

/// Vertical concatenation of the parts' amplitude vectors.
inline CompositeState cartesian_compose(std::vector<AnbitState> parts) {
  return CompositeState(CompositeMode::Cartesian, std::move(parts));
}

/// Point on the generalised Bloch sphere of radius sqrt(P).
struct BlochPoint {
  double radius = 0.0;
  double theta = 0.0;
  double phi = 0.0;
};

inline BlochPoint to_bloch(const AnbitState& s) {
  if (s.dim() != 2) throw DimError("Bloch coordinates need a two-dimensional anbit");
  if (s.is_null()) throw DegenerateStateError("Bloch angles are undefined for the null anbit");
  BlochPoint p;
  p.radius = std::sqrt(s.norm_sq());
  const double m0 = std::abs(s[0]), m1 = std::abs(s[1]);
  p.theta = 2.0 * std::atan2(m1, m0);
  // phi is meaningless at the poles; pin it to zero so it stays invariant
  // under a global phase.
  const double pole = 1e-15 * p.radius;
  p.phi = (m0 <= pole || m1 <= pole) ? 0.0 : wrap_2pi(std::arg(s[1] * std::conj(s[0])));
  return p;
}

inline AnbitState from_bloch(const BlochPoint& p) {
  if (p.radius < 0) throw ParamError("Bloch radius must be non-negative");
  Vec v(2);
  v(0) = p.radius * std::cos(p.theta / 2);
  v(1) = std::polar(p.radius * std::sin(p.theta / 2), p.phi);
  return AnbitState(std::move(v));
}

/// Removes the global phase: the first amplitude with modulus above tol
/// becomes real and non-negative.
inline AnbitState normalize_global_phase(const AnbitState& s, double tol = 1e-12) {
  for (int k = 0; k < s.dim(); ++k) {
    const double mag = std::abs(s[k]);
    if (mag > tol) {
      Vec v = s.amps() * (std::conj(s[k]) / mag);
      v(k) = mag;
      return AnbitState(std::move(v), s.delta_t());
    }
  }
  return s;
}

}  // namespace apc
