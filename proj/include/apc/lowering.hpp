#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "apc/circuits.hpp"
#include "apc/decompositions.hpp"
#include "apc/errors.hpp"
#include "apc/gates.hpp"
#include "apc/netlist.hpp"
#include "apc/state.hpp"

namespace apc {

namespace detail {

inline void append_rz(Netlist& nl, int w0, int w1, double angle) {
  nl.add(phase_shifter(w0, -angle / 2));
  nl.add(phase_shifter(w1, angle / 2));
}

inline void append_common_phase(Netlist& nl, int w0, int w1, cplx c) {
  nl.add(gain_element(w0, std::abs(c)));
  nl.add(phase_shifter(w0, std::arg(c)));
  nl.add(gain_element(w1, std::abs(c)));
  nl.add(phase_shifter(w1, std::arg(c)));
}

inline void append_zxz(Netlist& nl, const EulerFactors& e, int w0, int w1) {
  append_rz(nl, w0, w1, e.alpha1);
  nl.add(tunable_coupler(w0, w1, e.alpha2));
  append_rz(nl, w0, w1, e.alpha3);
  nl.add(phase_shifter(w0, e.delta));
  nl.add(phase_shifter(w1, e.delta));
}

inline void append_unitary(Netlist& nl, const Mat& u, int w0, int w1) {
  append_zxz(nl, euler_zxz(GateMatrix(u)), w0, w1);
}

/// Signed diagonal stage: negative entries get an extra pi phase shifter.
inline void append_diagonal(Netlist& nl, double l0, double l1, int w0, int w1) {
  for (auto [w, l] : {std::pair{w0, l0}, std::pair{w1, l1}}) {
    nl.add(gain_element(w, std::abs(l)));
    if (l < 0) nl.add(phase_shifter(w, kPi));
  }
}

/// One fan-in rail pair: diag(sqrt2 n, -i sqrt2 m) . BS . diag(1, -i).
inline void append_fanin_rail(Netlist& nl, const FanInGate& g, int a, int b) {
  nl.add(phase_shifter(b, -kPi / 2));
  nl.add(splitter5050(a, b));
  nl.add(gain_element(a, std::sqrt(2.0) * std::abs(g.n)));
  nl.add(phase_shifter(a, std::arg(g.n)));
  nl.add(gain_element(b, std::sqrt(2.0) * std::abs(g.m)));
  nl.add(phase_shifter(b, std::arg(g.m) - kPi / 2));
}

/// Fan-in over two 2-wire slots starting at wires sa and sb.
inline void append_fanin_block(Netlist& nl, const FanInGate& g, int sa, int sb) {
  append_fanin_rail(nl, g, sa, sb);
  append_fanin_rail(nl, g, sa + 1, sb + 1);
}

inline Netlist two_wire_netlist() {
  Netlist nl;
  nl.wires = 2;
  nl.inputs = {0, 1};
  nl.outputs = {0, 1};
  return nl;
}

}  // namespace detail

/// Phase-shifter pair, tunable coupler, phase-shifter pair, common phase.
inline Netlist lower_unitary_zxz(const GateMatrix& u) {
  const EulerFactors e = euler_zxz(u);
  Netlist nl = detail::two_wire_netlist();
  detail::append_zxz(nl, e, 0, 1);
  return nl;
}

/// Fixed-coupler variant using
///   e^{id} Rz(a3) Ry(a2) Rz(a1) = e^{i(d+pi)} Rz(a3) BS Rz(a2-pi) BS Rz(a1-pi).
inline Netlist lower_unitary_zyz_fixed(const GateMatrix& u) {
  const EulerFactors e = euler_zyz(u);
  Netlist nl = detail::two_wire_netlist();
  detail::append_rz(nl, 0, 1, e.alpha1 - kPi);
  nl.add(splitter5050(0, 1));
  detail::append_rz(nl, 0, 1, e.alpha2 - kPi);
  nl.add(splitter5050(0, 1));
  detail::append_rz(nl, 0, 1, e.alpha3);
  nl.add(phase_shifter(0, e.delta + kPi));
  nl.add(phase_shifter(1, e.delta + kPi));
  return nl;
}

/// U1, then one gain element per singular value, then U2.
inline Netlist lower_general_svd(const GateMatrix& m) {
  const SvdFactors f = svd2(m);
  Netlist nl = detail::two_wire_netlist();
  detail::append_unitary(nl, f.u1.matrix(), 0, 1);
  nl.add(gain_element(0, f.d1));
  nl.add(gain_element(1, f.d2));
  detail::append_unitary(nl, f.u2.matrix(), 0, 1);
  return nl;
}

/// Stages U2^+, L2, U1^+ U2, L1, U U1 in propagation order.
inline Netlist lower_mostow(const MostowFactors& f) {
  const std::vector<Mat> st = f.expanded();
  Netlist nl = detail::two_wire_netlist();
  detail::append_unitary(nl, st[4], 0, 1);
  detail::append_diagonal(nl, st[3](0, 0).real(), st[3](1, 1).real(), 0, 1);
  detail::append_unitary(nl, st[2], 0, 1);
  detail::append_diagonal(nl, st[1](0, 0).real(), st[1](1, 1).real(), 0, 1);
  detail::append_unitary(nl, st[0], 0, 1);
  return nl;
}

/// Four wire pairs (slots). The input is cloned into every slot, slot k
/// applies c_k R_k(pi) (c_0 = alpha0 with R_0 = I, c_k = i alpha_k), and
/// three fan-ins sum the branches back into slot 0.
inline Netlist lower_pauli_mgate(const GateMatrix& m) {
  const PauliCoefficients p = pauli_decompose(m);
  Netlist nl;
  nl.wires = 8;
  nl.inputs = {0, 1};
  nl.outputs = {0, 1};
  const FanInGate unit;

  detail::append_fanin_block(nl, unit, 0, 2);
  detail::append_fanin_block(nl, unit, 0, 4);
  detail::append_fanin_block(nl, unit, 2, 6);

  for (int k = 0; k < 4; ++k) {
    const int w = 2 * k;
    cplx c = p.alpha[k];
    if (k > 0) {
      detail::append_unitary(nl, rotation_matrix({pauli_axis(k), kPi, 0.0}).matrix(), w, w + 1);
      c *= kI;
    }
    detail::append_common_phase(nl, w, w + 1, c);
  }

  detail::append_fanin_block(nl, unit, 0, 2);
  detail::append_fanin_block(nl, unit, 4, 6);
  detail::append_fanin_block(nl, unit, 0, 4);
  return nl;
}

/// Four wires: (psi0, psi1, phi0, phi1), rails (0, 2) and (1, 3).
inline Netlist lower_fanin(const FanInGate& g) {
  Netlist nl;
  nl.wires = 4;
  nl.inputs = {0, 1, 2, 3};
  nl.outputs = {0, 1, 2, 3};
  detail::append_fanin_block(nl, g, 0, 2);
  return nl;
}

namespace detail {

inline int basis_bit(const AnbitState& s) {
  if (s.dim() != 2) throw DimError("control anbits must be two-dimensional");
  const double a0 = std::abs(s[0]), a1 = std::abs(s[1]);
  const double tol = 1e-9;
  if (a1 <= tol && std::abs(a0 - 1.0) <= tol) return 0;
  if (a0 <= tol && std::abs(a1 - 1.0) <= tol) return 1;
  throw ControlEncodingError("electro-optic control needs computational basis states");
}

inline std::vector<double> idle_parameters(const Netlist& nl) {
  std::vector<double> p;
  for (const Device& d : nl.devices) p.push_back(is_gain(d.kind) ? 1.0 : 0.0);
  return p;
}

}  // namespace detail

/// Control anbits become electrical signals: the target's own circuit is
/// reused and the control word selects its parameter set. Controls are
/// listed most significant first.
inline Netlist lower_controlled_electrooptic(const ControlledGate& cg, const std::vector<AnbitState>& control_setting) {
  if (static_cast<int>(control_setting.size()) != cg.n_controls())
    throw ParamError("expected " + std::to_string(cg.n_controls()) + " control anbits");
  std::string key;
  for (const AnbitState& c : control_setting) key += static_cast<char>('0' + detail::basis_bit(c));

  Netlist active = cg.target().gate_class() == GateClass::Unitary ? lower_unitary_zxz(cg.target())
                                                                  : lower_general_svd(cg.target());
  for (Device& d : active.devices) d.binding = "ctrl";
  ControlMap cm;
  cm.n_controls = cg.n_controls();
  cm.settings[std::string(cg.n_controls(), '1')] = active.parameters();
  cm.settings["default"] = detail::idle_parameters(active);
  active.control_map = cm;
  return active.with_setting(key);
}

}  // namespace apc
