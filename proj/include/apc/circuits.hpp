#pragma once

#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "apc/errors.hpp"
#include "apc/gates.hpp"
#include "apc/numeric.hpp"
#include "apc/state.hpp"

namespace apc {

/// Anbit addition: (psi, phi) -> (n (psi + phi), m (psi - phi)).
struct FanInGate {
  cplx n{1.0, 0.0};
  cplx m{1.0, 0.0};

  FanInGate() = default;
  FanInGate(cplx n_, cplx m_) : n(n_), m(m_) {
    if (n == 0.0 || m == 0.0) throw ParamError("fan-in parameters must be non-zero");
    if (!std::isfinite(std::abs(n)) || !std::isfinite(std::abs(m))) throw ParamError("fan-in parameters must be finite");
  }

  Mat matrix(int d) const {
    const Mat id = Mat::Identity(d, d);
    Mat g(2 * d, 2 * d);
    g << n * id, n * id, m * id, -m * id;
    return g;
  }
};

/// Anbit cloning: (psi, ancilla) -> (n psi + M12 a, m psi + M22 a). The
/// ancilla blocks default to n I and -m I.
struct FanOutGate {
  double n = 1.0;
  double m = 1.0;
  std::optional<Mat> m12;
  std::optional<Mat> m22;

  FanOutGate() = default;
  FanOutGate(double n_, double m_, std::optional<Mat> m12_ = std::nullopt, std::optional<Mat> m22_ = std::nullopt)
      : n(n_), m(m_), m12(std::move(m12_)), m22(std::move(m22_)) {
    if (!(n > 0.0) || !(m > 0.0) || !std::isfinite(n) || !std::isfinite(m))
      throw ParamError("fan-out parameters must be positive and finite");
  }

  Mat block12(int d) const { return m12 ? checked(*m12, d) : Mat(n * Mat::Identity(d, d)); }
  Mat block22(int d) const { return m22 ? checked(*m22, d) : Mat(-m * Mat::Identity(d, d)); }

  Mat matrix(int d) const {
    Mat g(2 * d, 2 * d);
    g << n * Mat::Identity(d, d), block12(d), m * Mat::Identity(d, d), block22(d);
    return g;
  }

 private:
  static const Mat& checked(const Mat& b, int d) {
    if (b.rows() != d || b.cols() != d) throw DimError("fan-out ancilla block has the wrong size");
    return b;
  }
};

inline std::pair<AnbitState, AnbitState> fan_in(const AnbitState& psi, const AnbitState& phi, cplx n = 1.0,
                                                cplx m = 1.0) {
  const FanInGate g(n, m);
  if (psi.dim() != phi.dim()) throw DimError("fan-in inputs must share a dimension");
  return {AnbitState(g.n * (psi.amps() + phi.amps())), AnbitState(g.m * (psi.amps() - phi.amps()))};
}

inline std::pair<AnbitState, AnbitState> fan_out(const AnbitState& psi, double n = 1.0, double m = 1.0) {
  const FanOutGate g(n, m);
  return {AnbitState(g.n * psi.amps()), AnbitState(g.m * psi.amps())};
}

namespace detail {

inline bool resolvent_singular(const Mat& g) {
  const double scale = std::pow(g.norm(), static_cast<double>(g.rows()));
  return std::abs(g.determinant()) <= 1e-12 * scale;
}

}  // namespace detail

/// Closed-form single-loop equivalent n1 n2 (I - n1 m2 M1 M2)^{-1} M1.
inline GateMatrix loop_equivalent(const GateMatrix& m1, const GateMatrix& m2, cplx n1 = 1.0, double n2 = 1.0,
                                  double m2_param = 1.0) {
  if (m1.dim() != m2.dim()) throw DimError("loop gates must share a dimension");
  const int d = m1.dim();
  const Mat g = Mat::Identity(d, d) - n1 * m2_param * m1.matrix() * m2.matrix();
  if (detail::resolvent_singular(g)) throw LoopSingularError("loop resolvent I - n1 m2 M1 M2 is singular");
  return GateMatrix(n1 * n2 * g.partialPivLu().solve(m1.matrix()));
}

/// Parameters of the two-anbit sequential system: fan-ins (n1, m1) and
/// (n2, m2) feed M1 and M2; fan-outs (n3, m3) and (n4, m4) clone their
/// outputs back across the loop.
struct LoopParams {
  cplx n1{1.0, 0.0}, m1{1.0, 0.0};
  cplx n2{1.0, 0.0}, m2{1.0, 0.0};
  double n3 = 1.0, m3 = 1.0;
  double n4 = 1.0, m4 = 1.0;
};

/// phi1 = A1 psi1 + A2 psi2, phi2 = B1 psi1 + B2 psi2.
struct LoopOperators {
  GateMatrix a1, a2, b1, b2;
};

inline LoopOperators two_anbit_loop(const GateMatrix& m1, const GateMatrix& m2, const LoopParams& p = {}) {
  if (m1.dim() != m2.dim()) throw DimError("loop gates must share a dimension");
  const int d = m1.dim();
  const Mat& x = m1.matrix();
  const Mat& y = m2.matrix();
  const cplx k = p.n1 * p.n2 * p.m3 * p.m4;
  const Mat g1 = Mat::Identity(d, d) - k * x * y;
  const Mat g2 = Mat::Identity(d, d) - k * y * x;
  if (detail::resolvent_singular(g1) || detail::resolvent_singular(g2))
    throw LoopSingularError("two-anbit loop resolvent is singular");
  const auto lu1 = g1.partialPivLu();
  const auto lu2 = g2.partialPivLu();
  return {GateMatrix(p.n1 * p.n3 * lu1.solve(x)), GateMatrix(p.n1 * p.n2 * p.n3 * p.m4 * lu1.solve(x * y)),
          GateMatrix(p.n1 * p.n2 * p.m3 * p.n4 * lu2.solve(y * x)), GateMatrix(p.n2 * p.n4 * lu2.solve(y))};
}

/// Compares the tensor-product reading of fan-in, |psi+phi> (x) |psi-phi>,
/// with the output of its apparent matrix on the product basis, whose
/// (k,l) diagonal entry is the |k,l> component of the rule applied to
/// (e_k, e_l). The two differ for generic inputs, so fan-in has no
/// tensor-space matrix.
inline std::pair<Vec, Vec> fanin_tensor_nonlinearity_witness(const AnbitState& psi, const AnbitState& phi) {
  if (psi.dim() != phi.dim()) throw DimError("witness inputs must share a dimension");
  const int d = psi.dim();
  const auto tensor_rule = [](const Vec& a, const Vec& b) { return kron(Vec(a + b), Vec(a - b)); };

  Mat apparent = Mat::Zero(d * d, d * d);
  for (int k = 0; k < d; ++k)
    for (int l = 0; l < d; ++l) {
      const int i = k * d + l;
      apparent(i, i) = tensor_rule(AnbitState::basis(d, k).amps(), AnbitState::basis(d, l).amps())(i);
    }

  return {tensor_rule(psi.amps(), phi.amps()), apparent * kron(psi.amps(), phi.amps())};
}

struct SourceNode {};
struct SinkNode {};
/// Source that always emits the null anbit; used for ancilla inputs.
struct NullNode {};
struct GateNode {
  GateMatrix gate;
};
struct FanInNode {
  FanInGate gate;
};
struct FanOutNode {
  FanOutGate gate;
};

using NodeKind = std::variant<SourceNode, SinkNode, NullNode, GateNode, FanInNode, FanOutNode>;

struct Node {
  std::string id;
  NodeKind kind;
};

struct PortRef {
  int node = 0;
  int port = 0;
};

struct Edge {
  PortRef from;
  PortRef to;
};

inline int input_port_count(const NodeKind& k) {
  return std::visit(
      [](const auto& n) -> int {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, SourceNode> || std::is_same_v<T, NullNode>) return 0;
        else if constexpr (std::is_same_v<T, SinkNode> || std::is_same_v<T, GateNode>) return 1;
        else return 2;
      },
      k);
}

inline int output_port_count(const NodeKind& k) {
  return std::visit(
      [](const auto& n) -> int {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, SinkNode>) return 0;
        else if constexpr (std::is_same_v<T, FanInNode> || std::is_same_v<T, FanOutNode>) return 2;
        else return 1;
      },
      k);
}

inline const char* kind_name(const NodeKind& k) {
  static constexpr const char* names[] = {"source", "sink", "null", "gate", "fanin", "fanout"};
  return names[k.index()];
}

/// Directed signal-flow graph over d-dimensional andits. Cycles are allowed;
/// cloning a signal requires an explicit fan-out node.
class CircuitGraph {
 public:
  explicit CircuitGraph(int dim) : dim_(dim) {
    if (dim < 1) throw DimError("circuit dimension must be positive");
  }

  int dim() const { return dim_; }
  const std::vector<Node>& nodes() const { return nodes_; }
  const std::vector<Edge>& edges() const { return edges_; }

  int add_node(std::string id, NodeKind kind) {
    if (id.empty()) throw GraphError("node id must be non-empty");
    if (index_.count(id)) throw GraphError("duplicate node id '" + id + "'");
    if (const auto* g = std::get_if<GateNode>(&kind); g && g->gate.dim() != dim_)
      throw DimError("gate '" + id + "' does not match the circuit dimension");
    const int idx = static_cast<int>(nodes_.size());
    index_.emplace(id, idx);
    nodes_.push_back({std::move(id), std::move(kind)});
    return idx;
  }

  int add_source(std::string id) { return add_node(std::move(id), SourceNode{}); }
  int add_sink(std::string id) { return add_node(std::move(id), SinkNode{}); }
  int add_null(std::string id) { return add_node(std::move(id), NullNode{}); }
  int add_gate(std::string id, GateMatrix g) { return add_node(std::move(id), GateNode{std::move(g)}); }
  int add_fan_in(std::string id, FanInGate g) { return add_node(std::move(id), FanInNode{g}); }
  int add_fan_out(std::string id, FanOutGate g) { return add_node(std::move(id), FanOutNode{std::move(g)}); }

  int node_index(const std::string& id) const {
    auto it = index_.find(id);
    if (it == index_.end()) throw GraphError("unknown node '" + id + "'");
    return it->second;
  }

  void connect(int from_node, int from_port, int to_node, int to_port) {
    check_node(from_node);
    check_node(to_node);
    if (from_port < 0 || from_port >= output_port_count(nodes_[from_node].kind))
      throw GraphError("node '" + nodes_[from_node].id + "' has no output port " + std::to_string(from_port));
    if (to_port < 0 || to_port >= input_port_count(nodes_[to_node].kind))
      throw GraphError("node '" + nodes_[to_node].id + "' has no input port " + std::to_string(to_port));
    for (const Edge& e : edges_) {
      if (e.from.node == from_node && e.from.port == from_port)
        throw GraphError("output port already driven; use a fan-out node to clone signals");
      if (e.to.node == to_node && e.to.port == to_port) throw GraphError("input port already has a driver");
    }
    edges_.push_back({{from_node, from_port}, {to_node, to_port}});
  }

  void connect(const std::string& from, int from_port, const std::string& to, int to_port) {
    connect(node_index(from), from_port, node_index(to), to_port);
  }

  std::vector<std::string> ids_of(std::size_t kind_index) const {
    std::vector<std::string> out;
    for (const Node& n : nodes_)
      if (n.kind.index() == kind_index) out.push_back(n.id);
    return out;
  }

  std::vector<std::string> source_ids() const { return ids_of(0); }
  std::vector<std::string> sink_ids() const { return ids_of(1); }

  /// Every input port must be driven by exactly one edge.
  void validate() const {
    for (std::size_t i = 0; i < nodes_.size(); ++i)
      for (int p = 0; p < input_port_count(nodes_[i].kind); ++p)
        if (incoming_edge(static_cast<int>(i), p) < 0)
          throw GraphError("input port " + std::to_string(p) + " of node '" + nodes_[i].id + "' is not connected");
  }

  /// Steady-state solution. Every edge carries a d-vector; each edge adds
  /// d equations tying it to the node driving it, and the whole system is
  /// solved at once, so feedback loops need no iteration.
  std::map<std::string, AnbitState> solve(const std::map<std::string, AnbitState>& inputs) const {
    validate();
    for (const auto& [id, st] : inputs) {
      const int idx = node_index(id);
      if (!std::holds_alternative<SourceNode>(nodes_[idx].kind)) throw GraphError("'" + id + "' is not a source");
      if (st.dim() != dim_) throw DimError("input for '" + id + "' has the wrong dimension");
    }

    const int d = dim_;
    const int n_edges = static_cast<int>(edges_.size());
    const Eigen::Index size = static_cast<Eigen::Index>(n_edges) * d;
    Mat a = Mat::Identity(size, size);
    Vec b = Vec::Zero(size);
    const Mat id = Mat::Identity(d, d);

    for (int e = 0; e < n_edges; ++e) {
      const PortRef from = edges_[e].from;
      const Node& node = nodes_[from.node];
      const auto row = static_cast<Eigen::Index>(e) * d;
      const auto couple = [&](int in_port, const Mat& k) {
        const auto col = static_cast<Eigen::Index>(incoming_edge(from.node, in_port)) * d;
        a.block(row, col, d, d) -= k;
      };
      std::visit(
          [&](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, SourceNode>) {
              auto it = inputs.find(node.id);
              if (it == inputs.end()) throw GraphError("no input assigned to source '" + node.id + "'");
              b.segment(row, d) = it->second.amps();
            } else if constexpr (std::is_same_v<T, GateNode>) {
              couple(0, n.gate.matrix());
            } else if constexpr (std::is_same_v<T, FanInNode>) {
              const cplx s = from.port == 0 ? n.gate.n : n.gate.m;
              couple(0, s * id);
              couple(1, (from.port == 0 ? s : -s) * id);
            } else if constexpr (std::is_same_v<T, FanOutNode>) {
              couple(0, (from.port == 0 ? n.gate.n : n.gate.m) * id);
              couple(1, from.port == 0 ? n.gate.block12(d) : n.gate.block22(d));
            }
          },
          node.kind);
    }

    const auto lu = a.partialPivLu();
    const double scale = a.cwiseAbs().maxCoeff();
    if (lu.matrixLU().diagonal().cwiseAbs().minCoeff() <= 1e-12 * scale)
      throw LoopSingularError("circuit equations are singular (feedback resolvent not invertible)");
    const Vec x = lu.solve(b);

    std::map<std::string, AnbitState> out;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      if (!std::holds_alternative<SinkNode>(nodes_[i].kind)) continue;
      const int e = incoming_edge(static_cast<int>(i), 0);
      out.emplace(nodes_[i].id, AnbitState(x.segment(static_cast<Eigen::Index>(e) * d, d)));
    }
    return out;
  }

 private:
  void check_node(int idx) const {
    if (idx < 0 || idx >= static_cast<int>(nodes_.size())) throw GraphError("node index out of range");
  }

  int incoming_edge(int node, int port) const {
    for (std::size_t e = 0; e < edges_.size(); ++e)
      if (edges_[e].to.node == node && edges_[e].to.port == port) return static_cast<int>(e);
    return -1;
  }

  int dim_;
  std::vector<Node> nodes_;
  std::vector<Edge> edges_;
  std::map<std::string, int> index_;
};

/// Single feedback loop: source "psi", output sink "phi", garbage sink "garbage".
inline CircuitGraph single_loop_graph(const GateMatrix& m1, const GateMatrix& m2, cplx n1 = 1.0, cplx m1_param = 1.0,
                                double n2 = 1.0, double m2_param = 1.0) {
  CircuitGraph g(m1.dim());
  g.add_source("psi");
  g.add_fan_in("fi", FanInGate(n1, m1_param));
  g.add_gate("M1", m1);
  g.add_null("ancilla");
  g.add_fan_out("fo", FanOutGate(n2, m2_param));
  g.add_gate("M2", m2);
  g.add_sink("phi");
  g.add_sink("garbage");
  g.connect("psi", 0, "fi", 0);
  g.connect("fi", 0, "M1", 0);
  g.connect("fi", 1, "garbage", 0);
  g.connect("M1", 0, "fo", 0);
  g.connect("ancilla", 0, "fo", 1);
  g.connect("fo", 0, "phi", 0);
  g.connect("fo", 1, "M2", 0);
  g.connect("M2", 0, "fi", 1);
  return g;
}

/// Two coupled loops: sources "psi1", "psi2"; sinks "phi1", "phi2" plus
/// garbage sinks "g1", "g2".
inline CircuitGraph coupled_loop_graph(const GateMatrix& m1, const GateMatrix& m2, const LoopParams& p = {}) {
  CircuitGraph g(m1.dim());
  g.add_source("psi1");
  g.add_source("psi2");
  g.add_fan_in("fi1", FanInGate(p.n1, p.m1));
  g.add_fan_in("fi2", FanInGate(p.n2, p.m2));
  g.add_gate("M1", m1);
  g.add_gate("M2", m2);
  g.add_null("a1");
  g.add_null("a2");
  g.add_fan_out("fo1", FanOutGate(p.n3, p.m3));
  g.add_fan_out("fo2", FanOutGate(p.n4, p.m4));
  g.add_sink("phi1");
  g.add_sink("phi2");
  g.add_sink("g1");
  g.add_sink("g2");

  g.connect("psi1", 0, "fi1", 0);
  g.connect("fi1", 0, "M1", 0);
  g.connect("fi1", 1, "g1", 0);
  g.connect("M1", 0, "fo1", 0);
  g.connect("a1", 0, "fo1", 1);
  g.connect("fo1", 0, "phi1", 0);
  g.connect("fo1", 1, "fi2", 1);

  g.connect("psi2", 0, "fi2", 0);
  g.connect("fi2", 0, "M2", 0);
  g.connect("fi2", 1, "g2", 0);
  g.connect("M2", 0, "fo2", 0);
  g.connect("a2", 0, "fo2", 1);
  g.connect("fo2", 0, "phi2", 0);
  g.connect("fo2", 1, "fi1", 1);
  return g;
}

/// Feed-forward network phi1 = M3 psi1 + M5 psi2, phi2 = M4 psi1 + M6 psi2
/// built from default fan-outs and fan-ins. Same port names as coupled_loop_graph.
inline CircuitGraph feedforward_graph(const GateMatrix& m3, const GateMatrix& m4, const GateMatrix& m5,
                                const GateMatrix& m6) {
  CircuitGraph g(m3.dim());
  g.add_source("psi1");
  g.add_source("psi2");
  g.add_null("a1");
  g.add_null("a2");
  g.add_fan_out("fo1", FanOutGate());
  g.add_fan_out("fo2", FanOutGate());
  g.add_gate("M3", m3);
  g.add_gate("M4", m4);
  g.add_gate("M5", m5);
  g.add_gate("M6", m6);
  g.add_fan_in("fi1", FanInGate());
  g.add_fan_in("fi2", FanInGate());
  g.add_sink("phi1");
  g.add_sink("phi2");
  g.add_sink("g1");
  g.add_sink("g2");

  g.connect("psi1", 0, "fo1", 0);
  g.connect("a1", 0, "fo1", 1);
  g.connect("psi2", 0, "fo2", 0);
  g.connect("a2", 0, "fo2", 1);
  g.connect("fo1", 0, "M3", 0);
  g.connect("fo1", 1, "M4", 0);
  g.connect("fo2", 0, "M5", 0);
  g.connect("fo2", 1, "M6", 0);
  g.connect("M3", 0, "fi1", 0);
  g.connect("M5", 0, "fi1", 1);
  g.connect("M4", 0, "fi2", 0);
  g.connect("M6", 0, "fi2", 1);
  g.connect("fi1", 0, "phi1", 0);
  g.connect("fi1", 1, "g1", 0);
  g.connect("fi2", 0, "phi2", 0);
  g.connect("fi2", 1, "g2", 0);
  return g;
}

}  // namespace apc
