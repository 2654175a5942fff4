#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "apc/circuits.hpp"
#include "apc/errors.hpp"
#include "apc/gates.hpp"
#include "apc/measurement.hpp"
#include "apc/state.hpp"

namespace apc {

using json = nlohmann::json;

namespace detail {

inline const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw ParseError(std::string("missing field '") + key + "'");
  return j.at(key);
}

inline double number(const json& j, const char* what) {
  if (!j.is_number()) throw ParseError(std::string(what) + " must be a number");
  return j.get<double>();
}

template <class F>
auto guarded(F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    throw ParseError(e.what());
  }
}

}  // namespace detail

inline json to_json(cplx z) { return json::array({z.real(), z.imag()}); }

/// Complex numbers are [re, im] pairs; a bare number is read as real.
inline cplx complex_from_json(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2) throw ParseError("complex numbers are [re, im] pairs");
  return {detail::number(j[0], "real part"), detail::number(j[1], "imaginary part")};
}

inline json to_json(const AnbitState& s) {
  json amps = json::array();
  for (int k = 0; k < s.dim(); ++k) amps.push_back(to_json(s[k]));
  json j{{"dim", s.dim()}, {"amps", amps}};
  j["delta_t"] = s.delta_t() ? json(*s.delta_t()) : json(nullptr);
  return j;
}

inline AnbitState state_from_json(const json& j) {
  const json& amps = detail::field(j, "amps");
  if (!amps.is_array() || amps.empty()) throw ParseError("'amps' must be a non-empty array");
  Vec v(static_cast<Eigen::Index>(amps.size()));
  for (std::size_t k = 0; k < amps.size(); ++k) v(static_cast<Eigen::Index>(k)) = complex_from_json(amps[k]);
  if (j.contains("dim") && (!j["dim"].is_number_integer() || j["dim"].get<long>() != v.size()))
    throw ParseError("'dim' does not match the number of amplitudes");
  std::optional<double> dt;
  if (j.contains("delta_t") && !j["delta_t"].is_null()) dt = detail::number(j["delta_t"], "delta_t");
  return AnbitState(std::move(v), dt);
}

inline json matrix_to_json(const Mat& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(to_json(m(r, c)));
    rows.push_back(row);
  }
  return rows;
}

inline Mat matrix_from_json(const json& rows) {
  if (!rows.is_array() || rows.empty()) throw ParseError("matrix entries must be a non-empty array of rows");
  const std::size_t n = rows.size();
  Mat m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t r = 0; r < n; ++r) {
    if (!rows[r].is_array() || rows[r].size() != n) throw ParseError("matrix must be square");
    for (std::size_t c = 0; c < n; ++c)
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = complex_from_json(rows[r][c]);
  }
  return m;
}

inline json to_json(const GateMatrix& g) { return {{"dim", g.dim()}, {"entries", matrix_to_json(g.matrix())}}; }

inline GateMatrix gate_from_json(const json& j) {
  Mat m = matrix_from_json(detail::field(j, "entries"));
  if (j.contains("dim") && (!j["dim"].is_number_integer() || j["dim"].get<long>() != m.rows()))
    throw ParseError("'dim' does not match the matrix size");
  return GateMatrix(std::move(m));
}

inline json to_json(const RotationSpec& r) {
  return {{"axis", {r.axis[0], r.axis[1], r.axis[2]}}, {"angle", r.angle}, {"global_phase", r.global_phase}};
}

inline RotationSpec rotation_from_json(const json& j) {
  RotationSpec r;
  const json& axis = detail::field(j, "axis");
  if (!axis.is_array() || axis.size() != 3) throw ParseError("'axis' must have three components");
  for (int i = 0; i < 3; ++i) r.axis[static_cast<std::size_t>(i)] = detail::number(axis[static_cast<std::size_t>(i)], "axis");
  r.angle = detail::number(detail::field(j, "angle"), "angle");
  if (j.contains("global_phase")) r.global_phase = detail::number(j["global_phase"], "global_phase");
  return r;
}

inline json to_json(const MeasurementRecord& rec) {
  json j{{"kind", to_string(rec.kind)},
         {"responsivity", rec.responsivity},
         {"photocurrents", rec.photocurrents},
         {"recovered", to_json(rec.recovered)},
         {"edf", rec.edf}};
  if (rec.phase) j["phase"] = *rec.phase;
  return j;
}

inline MeasurementRecord record_from_json(const json& j) {
  return detail::guarded([&] {
    MeasurementRecord rec;
    const std::string kind = detail::field(j, "kind").get<std::string>();
    if (kind == "coherent") rec.kind = MeasurementKind::Coherent;
    else if (kind == "differential") rec.kind = MeasurementKind::Differential;
    else throw ParseError("unknown measurement kind '" + kind + "'");
    rec.responsivity = detail::number(detail::field(j, "responsivity"), "responsivity");
    rec.photocurrents = detail::field(j, "photocurrents").get<std::vector<double>>();
    rec.recovered = state_from_json(detail::field(j, "recovered"));
    rec.edf = detail::field(j, "edf").get<int>();
    if (j.contains("phase")) rec.phase = detail::number(j["phase"], "phase");
    return rec;
  });
}

inline json to_json(const CircuitGraph& g) {
  json nodes = json::array();
  for (const Node& n : g.nodes()) {
    json params = json::object();
    std::visit(
        [&](const auto& k) {
          using T = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<T, GateNode>) {
            params["entries"] = matrix_to_json(k.gate.matrix());
          } else if constexpr (std::is_same_v<T, FanInNode>) {
            params["n"] = to_json(k.gate.n);
            params["m"] = to_json(k.gate.m);
          } else if constexpr (std::is_same_v<T, FanOutNode>) {
            params["n"] = k.gate.n;
            params["m"] = k.gate.m;
            if (k.gate.m12) params["m12"] = matrix_to_json(*k.gate.m12);
            if (k.gate.m22) params["m22"] = matrix_to_json(*k.gate.m22);
          }
        },
        n.kind);
    nodes.push_back({{"id", n.id}, {"kind", kind_name(n.kind)}, {"params", params}});
  }
  json edges = json::array();
  for (const Edge& e : g.edges())
    edges.push_back({{"from", {g.nodes()[e.from.node].id, e.from.port}}, {"to", {g.nodes()[e.to.node].id, e.to.port}}});
  return {{"dim", g.dim()}, {"nodes", nodes}, {"edges", edges}, {"sources", g.source_ids()}, {"sinks", g.sink_ids()}};
}

inline CircuitGraph circuit_from_json(const json& j) {
  return detail::guarded([&] {
    const json& nodes = detail::field(j, "nodes");
    const json& edges = detail::field(j, "edges");
    if (!nodes.is_array() || !edges.is_array()) throw ParseError("'nodes' and 'edges' must be arrays");

    int dim = 0;
    if (j.contains("dim")) dim = j["dim"].get<int>();
    for (const json& n : nodes)
      if (dim == 0 && n.value("kind", "") == "gate") dim = static_cast<int>(detail::field(n.at("params"), "entries").size());
    if (dim == 0) dim = 2;

    CircuitGraph g(dim);
    for (const json& n : nodes) {
      const std::string id = detail::field(n, "id").get<std::string>();
      const std::string kind = detail::field(n, "kind").get<std::string>();
      const json params = n.contains("params") ? n["params"] : json::object();
      if (kind == "source") g.add_source(id);
      else if (kind == "sink") g.add_sink(id);
      else if (kind == "null") g.add_null(id);
      else if (kind == "gate") g.add_gate(id, GateMatrix(matrix_from_json(detail::field(params, "entries"))));
      else if (kind == "fanin")
        g.add_fan_in(id, FanInGate(params.contains("n") ? complex_from_json(params["n"]) : cplx(1.0),
                                   params.contains("m") ? complex_from_json(params["m"]) : cplx(1.0)));
      else if (kind == "fanout") {
        std::optional<Mat> m12, m22;
        if (params.contains("m12")) m12 = matrix_from_json(params["m12"]);
        if (params.contains("m22")) m22 = matrix_from_json(params["m22"]);
        g.add_fan_out(id, FanOutGate(params.value("n", 1.0), params.value("m", 1.0), m12, m22));
      } else {
        throw ParseError("unknown node kind '" + kind + "'");
      }
    }
    for (const json& e : edges) {
      const json& from = detail::field(e, "from");
      const json& to = detail::field(e, "to");
      if (!from.is_array() || from.size() != 2 || !to.is_array() || to.size() != 2)
        throw ParseError("edge endpoints are [node, port] pairs");
      g.connect(from[0].get<std::string>(), from[1].get<int>(), to[0].get<std::string>(), to[1].get<int>());
    }

    const auto check_list = [&](const char* key, std::vector<std::string> actual) {
      if (!j.contains(key)) return;
      auto listed = j[key].get<std::vector<std::string>>();
      std::sort(listed.begin(), listed.end());
      std::sort(actual.begin(), actual.end());
      if (listed != actual) throw ParseError(std::string("'") + key + "' does not match the node list");
    };
    check_list("sources", g.source_ids());
    check_list("sinks", g.sink_ids());
    return g;
  });
}

inline json parse_json_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
}

}  // namespace apc
