#pragma once

#include <array>
#include <cstdio>
#include <fstream>
#include <future>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "apc/circuits.hpp"
#include "apc/decompositions.hpp"
#include "apc/errors.hpp"
#include "apc/gates.hpp"
#include "apc/json_io.hpp"
#include "apc/lowering.hpp"
#include "apc/measurement.hpp"
#include "apc/netlist.hpp"
#include "apc/state.hpp"

namespace apc {

/// Bloch-sphere path of a state under a one-parameter gate family.
/// Parameters are spaced evenly from start to stop inclusive.
inline std::vector<BlochPoint> emit_trajectory(const RotationSpec& family, double angle_start, double angle_stop,
                                               const AnbitState& state, int steps) {
  if (state.dim() != 2) throw DimError("trajectories need a two-dimensional anbit");
  if (state.is_null()) throw DegenerateStateError("trajectory of the null anbit is undefined");
  if (steps < 1) throw ParamError("trajectory needs at least one step");
  std::vector<BlochPoint> out;
  out.reserve(static_cast<std::size_t>(steps));
  for (int k = 0; k < steps; ++k) {
    RotationSpec r = family;
    r.angle = steps == 1 ? angle_start : angle_start + (angle_stop - angle_start) * k / (steps - 1);
    out.push_back(to_bloch(apply(rotation_matrix(r), state)));
  }
  return out;
}

/// Path under diag(d1, d2) with both entries swept linearly.
inline std::vector<BlochPoint> emit_diagonal_trajectory(std::array<double, 2> d1, std::array<double, 2> d2,
                                                        const AnbitState& state, int steps) {
  if (state.dim() != 2) throw DimError("trajectories need a two-dimensional anbit");
  if (state.is_null()) throw DegenerateStateError("trajectory of the null anbit is undefined");
  if (steps < 1) throw ParamError("trajectory needs at least one step");
  std::vector<BlochPoint> out;
  for (int k = 0; k < steps; ++k) {
    const double t = steps == 1 ? 0.0 : static_cast<double>(k) / (steps - 1);
    const GateMatrix g(diag2(d1[0] + (d1[1] - d1[0]) * t, d2[0] + (d2[1] - d2[0]) * t));
    out.push_back(to_bloch(apply(g, state)));
  }
  return out;
}

inline std::string trajectory_csv(const std::vector<BlochPoint>& pts) {
  std::string s = "step,radius,theta,phi\n";
  for (std::size_t k = 0; k < pts.size(); ++k)
    s += std::to_string(k) + "," + format_double(pts[k].radius) + "," + format_double(pts[k].theta) + "," +
         format_double(pts[k].phi) + "\n";
  return s;
}

struct RunConfig {
  std::string command;
  std::vector<std::string> inputs;
  std::string input_state;
  std::optional<std::string> output;
  std::string format = "json";
  bool batch = false;
  std::string method;
  std::string arch;
  std::optional<double> a;
  std::optional<std::array<double, 3>> b;
  std::string control_setting;
  std::string kind = "coherent";
  double responsivity = 1.0;
  std::optional<double> omega_c;
  std::optional<double> tol;
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(what, ErrorCategory::Validation) {}
  const char* kind() const noexcept override { return "IoError"; }
};

inline int exit_code(ErrorCategory c) {
  switch (c) {
    case ErrorCategory::Validation: return 2;
    case ErrorCategory::Singular: return 3;
    case ErrorCategory::ClassOrDim: return 4;
  }
  return 2;
}

namespace cli_detail {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline json read_json(const std::string& path) { return parse_json_text(read_file(path)); }

inline GateMatrix load_gate(const std::string& path, const RunConfig& cfg) {
  GateMatrix g = gate_from_json(read_json(path));
  return cfg.tol ? g.with_tol(*cfg.tol) : g;
}

inline const std::string& single_input(const RunConfig& cfg) {
  if (cfg.inputs.size() != 1) throw ParseError("'" + cfg.command + "' takes exactly one input file");
  return cfg.inputs.front();
}

inline json factor(const std::string& name, json value) { return {{"name", name}, {"value", std::move(value)}}; }

inline json sinks_json(const std::map<std::string, AnbitState>& sinks) {
  json out = json::object();
  for (const auto& [id, st] : sinks) out[id] = to_json(st);
  return out;
}

inline std::string sinks_csv(const std::map<std::string, AnbitState>& sinks, const std::string& circuit = {}) {
  std::string s;
  for (const auto& [id, st] : sinks)
    for (int k = 0; k < st.dim(); ++k)
      s += (circuit.empty() ? "" : circuit + ",") + id + "," + std::to_string(k) + "," + format_double(st[k].real()) +
           "," + format_double(st[k].imag()) + "\n";
  return s;
}

inline std::map<std::string, AnbitState> circuit_inputs(const json& j, const CircuitGraph& g) {
  std::map<std::string, AnbitState> in;
  if (j.is_object() && j.contains("amps")) {
    const auto sources = g.source_ids();
    if (sources.size() != 1) throw GraphError("a single input state needs a circuit with exactly one source");
    in.emplace(sources.front(), state_from_json(j));
    return in;
  }
  if (!j.is_object()) throw ParseError("input must be a state or an object of source id to state");
  for (const auto& [id, st] : j.items()) in.emplace(id, state_from_json(st));
  return in;
}

inline std::string simulate(const RunConfig& cfg) {
  if (cfg.inputs.empty()) throw ParseError("simulate needs a circuit file");
  if (cfg.inputs.size() > 1 && !cfg.batch) throw ParseError("several circuits need --batch");
  if (cfg.format != "json" && cfg.format != "csv") throw ParseError("format must be json or csv");
  const json input = read_json(cfg.input_state);

  const auto run_one = [&](const std::string& path) {
    const CircuitGraph g = circuit_from_json(read_json(path));
    return g.solve(circuit_inputs(input, g));
  };

  if (!cfg.batch) {
    const auto sinks = run_one(cfg.inputs.front());
    if (cfg.format == "csv") return "sink,component,re,im\n" + sinks_csv(sinks);
    return json{{"sinks", sinks_json(sinks)}}.dump(2) + "\n";
  }

  std::vector<std::future<std::map<std::string, AnbitState>>> jobs;
  for (const auto& path : cfg.inputs) jobs.push_back(std::async(std::launch::async, run_one, path));
  json arr = json::array();
  std::string csv = "circuit,sink,component,re,im\n";
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    const auto sinks = jobs[i].get();
    arr.push_back({{"circuit", cfg.inputs[i]}, {"sinks", sinks_json(sinks)}});
    csv += sinks_csv(sinks, cfg.inputs[i]);
  }
  return cfg.format == "csv" ? csv : arr.dump(2) + "\n";
}

inline MostowFactors mostow_from_config(const GateMatrix& u, const RunConfig& cfg) {
  Eigen::Matrix2d b = Eigen::Matrix2d::Zero();
  if (cfg.b) b << (*cfg.b)[0], (*cfg.b)[1], (*cfg.b)[1], (*cfg.b)[2];
  return mostow_synthesize(u, cfg.a.value_or(0.0), b);
}

inline std::string decompose(const RunConfig& cfg) {
  const GateMatrix g = load_gate(single_input(cfg), cfg);
  json factors = json::array();
  double err = 0.0;
  if (cfg.method == "euler-zxz" || cfg.method == "euler-zyz") {
    const EulerFactors e = cfg.method == "euler-zxz" ? euler_zxz(g) : euler_zyz(g);
    factors = {factor("delta", e.delta), factor("alpha1", e.alpha1), factor("alpha2", e.alpha2),
               factor("alpha3", e.alpha3)};
    err = (g.matrix() - reconstruct(e)).norm();
  } else if (cfg.method == "svd") {
    const SvdFactors f = svd2(g);
    factors = {factor("u2", matrix_to_json(f.u2.matrix())), factor("d1", f.d1), factor("d2", f.d2),
               factor("u1", matrix_to_json(f.u1.matrix()))};
    err = (g.matrix() - reconstruct(f)).norm();
  } else if (cfg.method == "pauli") {
    const PauliCoefficients p = pauli_decompose(g);
    for (int k = 0; k < 4; ++k) factors.push_back(factor("alpha" + std::to_string(k), to_json(p.alpha[k])));
    err = (g.matrix() - reconstruct(p)).norm();
  } else if (cfg.method == "mostow-synth") {
    const MostowFactors f = mostow_from_config(g, cfg);
    const char* names[] = {"U*U1", "Lambda1", "U1^H*U2", "Lambda2", "U2^H"};
    const auto stages = f.expanded();
    for (std::size_t i = 0; i < stages.size(); ++i) factors.push_back(factor(names[i], matrix_to_json(stages[i])));
    err = (f.product() - g.matrix() * f.exp_ia() * f.exp_b()).norm();
  } else {
    throw ParseError("unknown decomposition method '" + cfg.method + "'");
  }
  return json{{"method", cfg.method}, {"factors", factors}, {"reconstruction_error", err}}.dump(2) + "\n";
}

inline std::string lower(const RunConfig& cfg) {
  const json j = read_json(single_input(cfg));
  if (cfg.arch == "fanin") {
    const cplx n = j.contains("n") ? complex_from_json(j["n"]) : cplx(1.0);
    const cplx m = j.contains("m") ? complex_from_json(j["m"]) : cplx(1.0);
    return to_text(lower_fanin(FanInGate(n, m)));
  }
  GateMatrix g = gate_from_json(j);
  if (cfg.tol) g = g.with_tol(*cfg.tol);

  if (!cfg.control_setting.empty()) {
    std::vector<AnbitState> controls;
    for (char c : cfg.control_setting) {
      if (c != '0' && c != '1') throw ControlEncodingError("control setting must be a bit string");
      controls.push_back(AnbitState::basis(2, c - '0'));
    }
    const ControlledGate cg(g, static_cast<int>(controls.size()));
    return to_text(lower_controlled_electrooptic(cg, controls));
  }

  if (cfg.arch == "zxz") return to_text(lower_unitary_zxz(g));
  if (cfg.arch == "zyz") return to_text(lower_unitary_zyz_fixed(g));
  if (cfg.arch == "svd") return to_text(lower_general_svd(g));
  if (cfg.arch == "pauli") return to_text(lower_pauli_mgate(g));
  if (cfg.arch == "mostow") return to_text(lower_mostow(mostow_from_config(g, cfg)));
  throw ParseError("unknown architecture '" + cfg.arch + "'");
}

inline std::string analyze(const RunConfig& cfg) {
  const Netlist nl = netlist_from_text(read_file(single_input(cfg)));
  const Mat s = scattering_matrix(nl, false);
  const json report{{"reciprocal", is_symmetric(s)},
                    {"fb_symmetric", check_fb_symmetry(nl) == FbSymmetry::Symmetric},
                    {"s_matrix", matrix_to_json(s)},
                    {"forward_transfer", matrix_to_json(forward_transfer(nl))}};
  return report.dump(2) + "\n";
}

inline std::string measure(const RunConfig& cfg) {
  const AnbitState s = state_from_json(read_json(single_input(cfg)));
  MeasurementRecord rec;
  if (cfg.kind == "coherent") rec = measure_coherent(s, cfg.responsivity);
  else if (cfg.kind == "differential") rec = measure_differential(s, cfg.responsivity, cfg.omega_c.value_or(0.0));
  else throw ParseError("measurement kind must be coherent or differential");
  return to_json(rec).dump(2) + "\n";
}

/// Sweep spec: {"family": "rotation", "axis", "global_phase", "angle_start",
/// "angle_stop", "steps", "state"} or {"family": "diagonal", "d1": [from, to],
/// "d2": [from, to], "steps", "state"}.
inline std::string trajectory(const RunConfig& cfg) {
  const json spec = read_json(single_input(cfg));
  return detail::guarded([&] {
    const std::string family = spec.value("family", "rotation");
    const AnbitState state = state_from_json(detail::field(spec, "state"));
    const int steps = spec.value("steps", 100);
    if (family == "rotation") {
      RotationSpec r;
      if (spec.contains("axis")) {
        const auto axis = spec["axis"].get<std::vector<double>>();
        if (axis.size() != 3) throw ParseError("'axis' must have three components");
        r.axis = {axis[0], axis[1], axis[2]};
      }
      r.global_phase = spec.value("global_phase", 0.0);
      return trajectory_csv(
          emit_trajectory(r, spec.value("angle_start", 0.0), spec.value("angle_stop", kTwoPi), state, steps));
    }
    if (family == "diagonal") {
      const auto d1 = spec.value("d1", std::vector<double>{1.0, 1.0});
      const auto d2 = spec.value("d2", std::vector<double>{1.0, 0.0});
      if (d1.size() != 2 || d2.size() != 2) throw ParseError("'d1' and 'd2' are [from, to] pairs");
      return trajectory_csv(emit_diagonal_trajectory({d1[0], d1[1]}, {d2[0], d2[1]}, state, steps));
    }
    throw ParseError("unknown trajectory family '" + family + "'");
  });
}

}  // namespace cli_detail

/// Executes one command. Results go to cfg.output or `out`; failures are
/// reported on `err` as {"error", "message"} JSON.
inline int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto report = [&](const char* kind, const std::string& msg, int code) {
    err << json{{"error", kind}, {"message", msg}}.dump() << "\n";
    return code;
  };
  try {
    std::string result;
    if (cfg.command == "simulate") result = cli_detail::simulate(cfg);
    else if (cfg.command == "decompose") result = cli_detail::decompose(cfg);
    else if (cfg.command == "lower") result = cli_detail::lower(cfg);
    else if (cfg.command == "analyze") result = cli_detail::analyze(cfg);
    else if (cfg.command == "measure") result = cli_detail::measure(cfg);
    else if (cfg.command == "trajectory") result = cli_detail::trajectory(cfg);
    else throw ParseError("unknown command '" + cfg.command + "'");

    if (cfg.output) {
      std::ofstream f(*cfg.output, std::ios::binary);
      if (!f) throw IoError("cannot write '" + *cfg.output + "'");
      f << result;
    } else {
      out << result;
    }
    return 0;
  } catch (const Error& e) {
    return report(e.kind(), e.what(), exit_code(e.category()));
  } catch (const std::exception& e) {
    return report("ParseError", e.what(), 2);
  }
}

}  // namespace apc
