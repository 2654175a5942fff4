#pragma once

#include <cmath>
#include <cstdio>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "apc/errors.hpp"
#include "apc/numeric.hpp"

namespace apc {

enum class DeviceKind { PhaseShifter, TunableCoupler, Splitter5050, Attenuator, Amplifier, Resonator };

inline const char* mnemonic(DeviceKind k) {
  switch (k) {
    case DeviceKind::PhaseShifter: return "PS";
    case DeviceKind::TunableCoupler: return "DC";
    case DeviceKind::Splitter5050: return "BS";
    case DeviceKind::Attenuator: return "ATT";
    case DeviceKind::Amplifier: return "AMP";
    case DeviceKind::Resonator: return "RES";
  }
  return "?";
}

inline bool is_gain(DeviceKind k) { return k == DeviceKind::Attenuator || k == DeviceKind::Amplifier; }
inline int wire_count(DeviceKind k) {
  return (k == DeviceKind::TunableCoupler || k == DeviceKind::Splitter5050) ? 2 : 1;
}

/// A photonic primitive acting on one or two wires.
///   PS:  e^{i phi}                    DC:  Rx(alpha2), coupling kL = alpha2 / 2
///   BS:  [[1, i], [i, 1]] / sqrt2      ATT/AMP: real gain
/// Resonators are part of the vocabulary but have no transfer model.
struct Device {
  DeviceKind kind = DeviceKind::PhaseShifter;
  std::vector<int> wires;
  double param = 0.0;
  std::string binding;

  Mat forward() const {
    switch (kind) {
      case DeviceKind::PhaseShifter: return Mat::Constant(1, 1, std::polar(1.0, param));
      case DeviceKind::TunableCoupler: return rx(param);
      case DeviceKind::Splitter5050: return rx(-kPi / 2);
      case DeviceKind::Attenuator:
      case DeviceKind::Amplifier: return Mat::Constant(1, 1, param);
      case DeviceKind::Resonator: break;
    }
    throw ParamError("resonators have no transfer model");
  }

  /// Transfer seen by light travelling from the device's outputs to its
  /// inputs. All current primitives are reciprocal.
  Mat backward() const { return forward().transpose(); }
};

inline Device phase_shifter(int w, double phi) { return {DeviceKind::PhaseShifter, {w}, phi, {}}; }
inline Device tunable_coupler(int w0, int w1, double alpha2) { return {DeviceKind::TunableCoupler, {w0, w1}, alpha2, {}}; }
inline Device splitter5050(int w0, int w1) { return {DeviceKind::Splitter5050, {w0, w1}, 0.0, {}}; }
inline Device resonator(int w, double phi) { return {DeviceKind::Resonator, {w}, phi, {}}; }

/// Attenuator for gains in [0, 1], amplifier above.
inline Device gain_element(int w, double g) {
  if (!(g >= 0.0) || !std::isfinite(g)) throw ParamError("gain must be finite and non-negative");
  return {g <= 1.0 ? DeviceKind::Attenuator : DeviceKind::Amplifier, {w}, g, {}};
}

/// Device parameter assignments selected by the electrical control word.
/// Keys are control bit strings (first control most significant) or
/// "default" for every setting without its own entry.
struct ControlMap {
  int n_controls = 1;
  std::map<std::string, std::vector<double>> settings;
};

struct Netlist {
  int wires = 2;
  std::vector<int> inputs{0, 1};
  std::vector<int> outputs{0, 1};
  std::vector<Device> devices;
  std::optional<ControlMap> control_map;

  void add(Device d) {
    for (int w : d.wires)
      if (w < 0 || w >= wires) throw ParamError("device wire out of range");
    if (static_cast<int>(d.wires.size()) != wire_count(d.kind)) throw ParamError("wrong number of device wires");
    devices.push_back(std::move(d));
  }

  std::vector<double> parameters() const {
    std::vector<double> p;
    for (const Device& d : devices) p.push_back(d.param);
    return p;
  }

  /// Copy with device parameters taken from the control map entry for key.
  Netlist with_setting(const std::string& key) const {
    if (!control_map) throw ParamError("netlist has no control map");
    auto it = control_map->settings.find(key);
    if (it == control_map->settings.end()) it = control_map->settings.find("default");
    if (it == control_map->settings.end()) throw ParamError("no control setting for '" + key + "'");
    if (it->second.size() != devices.size()) throw ParamError("control setting has the wrong length");
    Netlist out = *this;
    for (std::size_t i = 0; i < devices.size(); ++i) {
      Device& d = out.devices[i];
      if (is_gain(d.kind)) d = Device{gain_element(d.wires[0], it->second[i]).kind, d.wires, it->second[i], d.binding};
      else d.param = it->second[i];
    }
    return out;
  }
};

namespace detail {

inline Mat embed(const Device& d, const Mat& local, int wires) {
  Mat m = Mat::Identity(wires, wires);
  for (std::size_t r = 0; r < d.wires.size(); ++r)
    for (std::size_t c = 0; c < d.wires.size(); ++c) m(d.wires[r], d.wires[c]) = local(r, c);
  return m;
}

inline Mat select(const Mat& full, const std::vector<int>& rows, const std::vector<int>& cols) {
  Mat out(rows.size(), cols.size());
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < cols.size(); ++c) out(r, c) = full(rows[r], cols[c]);
  return out;
}

}  // namespace detail

/// Full wire-to-wire forward transfer: devices applied in list order.
inline Mat full_forward_transfer(const Netlist& nl) {
  Mat t = Mat::Identity(nl.wires, nl.wires);
  for (const Device& d : nl.devices) t = detail::embed(d, d.forward(), nl.wires) * t;
  return t;
}

/// Full backward transfer: devices traversed in reverse order.
inline Mat full_backward_transfer(const Netlist& nl) {
  Mat t = Mat::Identity(nl.wires, nl.wires);
  for (auto it = nl.devices.rbegin(); it != nl.devices.rend(); ++it)
    t = detail::embed(*it, it->backward(), nl.wires) * t;
  return t;
}

/// Reduced forward transfer, rows = output wires, cols = input wires.
/// Wires that are not inputs carry the null anbit.
inline Mat forward_transfer(const Netlist& nl) { return detail::select(full_forward_transfer(nl), nl.outputs, nl.inputs); }

/// Reduced backward transfer, rows = input wires, cols = output wires.
inline Mat backward_transfer(const Netlist& nl) {
  return detail::select(full_backward_transfer(nl), nl.inputs, nl.outputs);
}

/// S = [[0, Tb], [Tf, 0]] over (input ports, output ports). With the
/// reciprocal flag Tb is taken as Tf^T; otherwise it is computed from the
/// per-device backward matrices.
inline Mat scattering_matrix(const Netlist& nl, bool reciprocal) {
  const Mat tf = forward_transfer(nl);
  const Mat tb = reciprocal ? Mat(tf.transpose()) : backward_transfer(nl);
  const auto ni = static_cast<Eigen::Index>(nl.inputs.size());
  const auto no = static_cast<Eigen::Index>(nl.outputs.size());
  Mat s = Mat::Zero(ni + no, ni + no);
  s.topRightCorner(ni, no) = tb;
  s.bottomLeftCorner(no, ni) = tf;
  return s;
}

inline bool is_symmetric(const Mat& s, double tol = 1e-12) {
  if (s.rows() != s.cols()) return false;
  const double scale = std::max(1.0, s.cwiseAbs().maxCoeff());
  return (s - s.transpose()).cwiseAbs().maxCoeff() <= tol * scale;
}

enum class FbSymmetry { Symmetric, Asymmetric };

inline const char* to_string(FbSymmetry s) { return s == FbSymmetry::Symmetric ? "Symmetric" : "Asymmetric"; }

/// Forward-backward symmetry: the reduced forward and backward transfers
/// coincide.
inline FbSymmetry check_fb_symmetry(const Netlist& nl, double tol = 1e-10) {
  const Mat tf = forward_transfer(nl);
  const Mat tb = backward_transfer(nl);
  if (tf.rows() != tb.rows() || tf.cols() != tb.cols()) return FbSymmetry::Asymmetric;
  const double scale = std::max(1.0, tf.cwiseAbs().maxCoeff());
  return (tf - tb).cwiseAbs().maxCoeff() <= tol * scale ? FbSymmetry::Symmetric : FbSymmetry::Asymmetric;
}

inline std::string format_double(double x) {
  if (x == 0.0) x = 0.0;
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

/// Line-oriented text form, e.g.
///   WIRES 2 / INPUTS 0 1 / OUTPUTS 0 1 / PS 0 1.5708 / DC 0 1 3.1416 @ctrl
/// followed by optional CONTROL n and SETTING key p0 p1 ... lines.
inline std::string to_text(const Netlist& nl) {
  std::ostringstream os;
  os << "WIRES " << nl.wires << "\nINPUTS";
  for (int w : nl.inputs) os << ' ' << w;
  os << "\nOUTPUTS";
  for (int w : nl.outputs) os << ' ' << w;
  os << '\n';
  for (const Device& d : nl.devices) {
    os << mnemonic(d.kind);
    for (int w : d.wires) os << ' ' << w;
    if (d.kind != DeviceKind::Splitter5050) os << ' ' << format_double(d.param);
    if (!d.binding.empty()) os << " @" << d.binding;
    os << '\n';
  }
  if (nl.control_map) {
    os << "CONTROL " << nl.control_map->n_controls << '\n';
    for (const auto& [key, values] : nl.control_map->settings) {
      os << "SETTING " << key;
      for (double v : values) os << ' ' << format_double(v);
      os << '\n';
    }
  }
  return os.str();
}

namespace detail {

inline double parse_number(const std::string& tok, int line) {
  try {
    std::size_t used = 0;
    const double v = std::stod(tok, &used);
    if (used != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw ParseError("line " + std::to_string(line) + ": bad number '" + tok + "'");
  }
}

inline int parse_int(const std::string& tok, int line) {
  const double v = parse_number(tok, line);
  if (v != std::floor(v) || v < 0) throw ParseError("line " + std::to_string(line) + ": bad index '" + tok + "'");
  return static_cast<int>(v);
}

}  // namespace detail

inline Netlist netlist_from_text(const std::string& text) {
  Netlist nl;
  nl.inputs.clear();
  nl.outputs.clear();
  bool have_wires = false;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  const std::map<std::string, DeviceKind> kinds{{"PS", DeviceKind::PhaseShifter}, {"DC", DeviceKind::TunableCoupler},
                                                {"BS", DeviceKind::Splitter5050}, {"ATT", DeviceKind::Attenuator},
                                                {"AMP", DeviceKind::Amplifier},   {"RES", DeviceKind::Resonator}};
  while (std::getline(in, raw)) {
    ++line_no;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    std::istringstream ls(raw);
    std::vector<std::string> tok;
    for (std::string t; ls >> t;) tok.push_back(t);
    if (tok.empty()) continue;
    const std::string& head = tok[0];
    const auto where = "line " + std::to_string(line_no) + ": ";

    if (head == "WIRES") {
      if (tok.size() != 2) throw ParseError(where + "WIRES takes one value");
      nl.wires = detail::parse_int(tok[1], line_no);
      if (nl.wires < 1) throw ParseError(where + "wire count must be positive");
      have_wires = true;
    } else if (head == "INPUTS" || head == "OUTPUTS") {
      auto& dst = head == "INPUTS" ? nl.inputs : nl.outputs;
      for (std::size_t i = 1; i < tok.size(); ++i) dst.push_back(detail::parse_int(tok[i], line_no));
    } else if (head == "CONTROL") {
      if (tok.size() != 2) throw ParseError(where + "CONTROL takes one value");
      nl.control_map = ControlMap{detail::parse_int(tok[1], line_no), {}};
    } else if (head == "SETTING") {
      if (!nl.control_map || tok.size() < 2) throw ParseError(where + "SETTING needs a preceding CONTROL line");
      std::vector<double> values;
      for (std::size_t i = 2; i < tok.size(); ++i) values.push_back(detail::parse_number(tok[i], line_no));
      nl.control_map->settings[tok[1]] = std::move(values);
    } else if (auto k = kinds.find(head); k != kinds.end()) {
      if (!have_wires) throw ParseError(where + "WIRES must precede devices");
      Device d;
      d.kind = k->second;
      std::size_t i = 1;
      if (!tok.empty() && tok.back().front() == '@') {
        d.binding = tok.back().substr(1);
        tok.pop_back();
      }
      const std::size_t nw = static_cast<std::size_t>(wire_count(d.kind));
      const std::size_t expected = 1 + nw + (d.kind == DeviceKind::Splitter5050 ? 0 : 1);
      if (tok.size() != expected) throw ParseError(where + "wrong number of fields for " + head);
      for (; i <= nw; ++i) d.wires.push_back(detail::parse_int(tok[i], line_no));
      if (i < tok.size()) d.param = detail::parse_number(tok[i], line_no);
      if (is_gain(d.kind) && d.param < 0) throw ParseError(where + "gain must be non-negative");
      try {
        nl.add(std::move(d));
      } catch (const ParamError& e) {
        throw ParseError(where + e.what());
      }
    } else {
      throw ParseError(where + "unknown directive '" + head + "'");
    }
  }
  if (!have_wires) throw ParseError("netlist has no WIRES line");
  for (int w : nl.inputs)
    if (w >= nl.wires) throw ParseError("input wire out of range");
  for (int w : nl.outputs)
    if (w >= nl.wires) throw ParseError("output wire out of range");
  if (nl.control_map)
    for (const auto& [key, values] : nl.control_map->settings)
      if (values.size() != nl.devices.size()) throw ParseError("SETTING '" + key + "' has the wrong length");
  return nl;
}

}  // namespace apc
