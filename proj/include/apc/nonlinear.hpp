#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "apc/errors.hpp"
#include "apc/gates.hpp"
#include "apc/numeric.hpp"
#include "apc/state.hpp"

namespace apc {

struct SpmParams {
  double gamma = 0.0;  ///< nonlinear coefficient, 1/(W m)
  double l_eff = 0.0;  ///< effective length, m
};

/// Self-phase modulation: psi_k -> psi_k exp(-i gamma |psi_k|^2 L_eff).
inline AnbitState spm_gate(const AnbitState& s, const SpmParams& p) {
  if (s.dim() != 1 && s.dim() != 2) throw DimError("SPM gate acts on one- or two-dimensional states");
  if (!std::isfinite(p.gamma * p.l_eff)) throw ParamError("SPM parameters must be finite");
  Vec out(s.dim());
  for (int k = 0; k < s.dim(); ++k) out(k) = s[k] * std::polar(1.0, -p.gamma * std::norm(s[k]) * p.l_eff);
  return AnbitState(std::move(out), s.delta_t());
}

inline constexpr int kDefaultTaylorOrder = 4;

/// Holomorphic nonlinear gate given by its Taylor coefficients about
/// z_ref. For order n and output k the tensor holds d^n partial
/// derivatives d^n f_k / dz_i1 ... dz_in with the first index varying
/// slowest. The order-n response is the full contraction with
/// h = z - z_ref divided by n!.
class TaylorGate {
 public:
  explicit TaylorGate(Vec ref_point, int max_order = kDefaultTaylorOrder)
      : ref_(std::move(ref_point)), max_order_(max_order), tensors_(static_cast<std::size_t>(max_order)) {
    if (ref_.size() == 0) throw DimError("reference point must be non-empty");
    if (max_order < 1) throw OrderError("maximum order must be at least 1");
  }

  /// Order-1 gate with derivative matrix F about the origin.
  static TaylorGate linear(const GateMatrix& f, int max_order = kDefaultTaylorOrder) {
    TaylorGate g(Vec::Zero(f.dim()), max_order);
    for (int k = 0; k < f.dim(); ++k) g.set_tensor(1, k, f.matrix().row(k).transpose());
    return g;
  }

  int dim() const { return static_cast<int>(ref_.size()); }
  int max_order() const { return max_order_; }
  const Vec& ref_point() const { return ref_; }

  bool has_order(int n) const {
    return n >= 1 && n <= max_order_ && !tensors_[static_cast<std::size_t>(n - 1)].empty();
  }

  /// Sets the tensor for output k at order n. Outputs without an explicit
  /// tensor at an order that has one are treated as zero.
  void set_tensor(int n, int k, Vec values) {
    if (n < 1 || n > max_order_) throw OrderError("order " + std::to_string(n) + " exceeds the gate's maximum");
    if (k < 0 || k >= dim()) throw IndexError("output component out of range");
    const long expected = ipow(dim(), n);
    if (values.size() != expected) throw DimError("derivative tensor has the wrong size");
    check_symmetric(values, n);
    auto& slot = tensors_[static_cast<std::size_t>(n - 1)];
    if (slot.empty()) slot.assign(static_cast<std::size_t>(dim()), Vec::Zero(expected));
    slot[static_cast<std::size_t>(k)] = std::move(values);
  }

  const Vec& tensor(int n, int k) const {
    if (!has_order(n)) throw OrderError("no derivative tensor of order " + std::to_string(n));
    return tensors_[static_cast<std::size_t>(n - 1)][static_cast<std::size_t>(k)];
  }

  static long ipow(int base, int e) {
    long r = 1;
    for (int i = 0; i < e; ++i) r *= base;
    return r;
  }

 private:
  void check_symmetric(const Vec& t, int n) const {
    const int d = dim();
    std::vector<int> idx(static_cast<std::size_t>(n));
    for (long flat = 0; flat < t.size(); ++flat) {
      long rem = flat;
      for (int j = n - 1; j >= 0; --j) {
        idx[static_cast<std::size_t>(j)] = static_cast<int>(rem % d);
        rem /= d;
      }
      std::sort(idx.begin(), idx.end());
      long canon = 0;
      for (int v : idx) canon = canon * d + v;
      if (!approx_equal(t(flat), t(canon), {1e-12, 1e-9}))
        throw SymmetryError("derivative tensor is not symmetric in its indices");
    }
  }

  Vec ref_;
  int max_order_;
  std::vector<std::vector<Vec>> tensors_;
};

/// Order-n term of the expansion, evaluated at the given state.
inline AnbitState taylor_response(const TaylorGate& g, const AnbitState& s, int n) {
  if (s.dim() != g.dim()) throw DimError("state and Taylor gate dimensions differ");
  if (n < 1 || n > g.max_order() || !g.has_order(n))
    throw OrderError("no derivative tensor of order " + std::to_string(n));
  const int d = g.dim();
  const Vec h = s.amps() - g.ref_point();
  double factorial = 1.0;
  for (int i = 2; i <= n; ++i) factorial *= i;

  Vec out(d);
  for (int k = 0; k < d; ++k) {
    Vec v = g.tensor(n, k);
    for (int level = n; level >= 1; --level) {
      const long outer = TaylorGate::ipow(d, level - 1);
      Vec next(outer);
      for (long o = 0; o < outer; ++o) next(o) = v.segment(o * d, d).cwiseProduct(h).sum();
      v = std::move(next);
    }
    out(k) = v(0) / factorial;
  }
  return AnbitState(std::move(out));
}

/// Sum of the responses of orders 1..order.
inline AnbitState taylor_apply(const TaylorGate& g, const AnbitState& s, int order) {
  if (order < 1 || order > g.max_order()) throw OrderError("requested order outside 1..max_order");
  Vec total = Vec::Zero(g.dim());
  for (int n = 1; n <= order; ++n) total += taylor_response(g, s, n).amps();
  return AnbitState(std::move(total));
}

/// One neural-network layer on d scalar andits: z_k = f((M x)_k).
inline CompositeState ann_layer(const GateMatrix& weights, const std::function<cplx(cplx)>& activation,
                                const CompositeState& x) {
  if (x.mode() != CompositeMode::Cartesian) throw ModeError("ANN layer needs a Cartesian composite input");
  for (int d : x.part_dims())
    if (d != 1) throw ModeError("ANN layer needs one-dimensional andits");
  if (static_cast<int>(x.part_dims().size()) != weights.dim()) throw DimError("weight matrix does not match the input");
  const Vec y = weights.matrix() * x.flat();
  std::vector<AnbitState> parts;
  for (Eigen::Index k = 0; k < y.size(); ++k) parts.emplace_back(Vec::Constant(1, activation(y(k))));
  return cartesian_compose(std::move(parts));
}

}  // namespace apc
