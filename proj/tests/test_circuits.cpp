#include <gtest/gtest.h>

#include <functional>

#include "apc/circuits.hpp"
#include "test_util.hpp"

using namespace apc;
using apc::testing::gaussian_complex;
using apc::testing::neumann_series;
using apc::testing::random_matrix;
using apc::testing::random_state;
using apc::testing::spectral_radius;
using apc::testing::uniform;

namespace {

bool states_close(const AnbitState& a, const AnbitState& b, double tol) {
  return (a.amps() - b.amps()).norm() <= tol * std::max(1.0, b.amps().norm());
}

/// Recursive evaluation of an acyclic graph, independent of the linear solve.
std::map<std::string, AnbitState> forward_eval(const CircuitGraph& g, const std::map<std::string, AnbitState>& in) {
  const int d = g.dim();
  std::function<Vec(int, int)> out_of = [&](int node, int port) -> Vec {
    const Node& n = g.nodes()[node];
    const auto input = [&](int p) {
      for (const Edge& e : g.edges())
        if (e.to.node == node && e.to.port == p) return out_of(e.from.node, e.from.port);
      throw std::logic_error("dangling");
    };
    if (std::holds_alternative<SourceNode>(n.kind)) return in.at(n.id).amps();
    if (std::holds_alternative<NullNode>(n.kind)) return Vec::Zero(d);
    if (const auto* gn = std::get_if<GateNode>(&n.kind)) return gn->gate.matrix() * input(0);
    if (const auto* fi = std::get_if<FanInNode>(&n.kind)) {
      const Vec a = input(0), b = input(1);
      return port == 0 ? Vec(fi->gate.n * (a + b)) : Vec(fi->gate.m * (a - b));
    }
    const auto& fo = std::get<FanOutNode>(n.kind).gate;
    const Vec a = input(0), b = input(1);
    return port == 0 ? Vec(fo.n * a + fo.block12(d) * b) : Vec(fo.m * a + fo.block22(d) * b);
  };
  std::map<std::string, AnbitState> out;
  for (std::size_t i = 0; i < g.nodes().size(); ++i)
    if (std::holds_alternative<SinkNode>(g.nodes()[i].kind))
      for (const Edge& e : g.edges())
        if (e.to.node == static_cast<int>(i)) out.emplace(g.nodes()[i].id, AnbitState(out_of(e.from.node, e.from.port)));
  return out;
}

double resolvent_det(const Mat& g) { return std::abs(g.determinant()) / std::pow(g.norm(), g.rows()); }

}  // namespace

TEST(FanIn, Examples) {
  auto [a, b] = fan_in({1, 2}, {3, 4});
  EXPECT_TRUE(approx_equal(a, AnbitState{4, 6}));
  EXPECT_TRUE(approx_equal(b, AnbitState{-2, -2}));
  const AnbitState psi{cplx(1, 1), -3};
  std::tie(a, b) = fan_in(psi, AnbitState::null(2));
  EXPECT_TRUE(approx_equal(a, psi));
  EXPECT_TRUE(approx_equal(b, psi));
  EXPECT_THROW(fan_in(psi, psi, 0.0, 1.0), ParamError);
  EXPECT_THROW(fan_in(psi, psi, 1.0, 0.0), ParamError);
  EXPECT_THROW(fan_in(psi, AnbitState{1}), DimError);
}

TEST(FanIn, SwapWithNegatedSecondParameter) {
  for (int i = 0; i < 100; ++i) {
    const auto psi = random_state(), phi = random_state();
    const cplx n = gaussian_complex(), m = gaussian_complex();
    const auto [a1, b1] = fan_in(psi, phi, n, m);
    const auto [a2, b2] = fan_in(phi, psi, n, -m);
    EXPECT_TRUE(approx_equal(a1, a2, {0, 0}));
    EXPECT_TRUE(approx_equal(b1, b2, {0, 0}));
  }
}

TEST(FanIn, DeterminantAndUnitarity) {
  for (int i = 0; i < 100; ++i) {
    const FanInGate g(gaussian_complex(), gaussian_complex());
    const cplx want = 4.0 * g.n * g.n * g.m * g.m;
    EXPECT_NEAR(std::abs(g.matrix(2).determinant() - want), 0.0, 1e-10 * std::max(1.0, std::abs(want)));
  }
  const double r = 1.0 / std::sqrt(2.0);
  EXPECT_EQ(classify_matrix(FanInGate(r, cplx(0, r)).matrix(2)), GateClass::Unitary);
  EXPECT_EQ(classify_matrix(FanInGate(1, 1).matrix(2)), GateClass::GeneralLinear);
  EXPECT_EQ(classify_matrix(FanInGate(r, 0.5).matrix(2)), GateClass::GeneralLinear);
}

TEST(FanOut, Examples) {
  const AnbitState psi{1, cplx(0, 1)};
  auto [a, b] = fan_out(psi);
  EXPECT_TRUE(approx_equal(a, psi));
  EXPECT_TRUE(approx_equal(b, psi));
  std::tie(a, b) = fan_out(psi, 2, 1);
  EXPECT_TRUE(approx_equal(a, AnbitState{2, cplx(0, 2)}));
  EXPECT_TRUE(approx_equal(b, psi));
  EXPECT_THROW(fan_out(psi, 0, 1), ParamError);
  EXPECT_THROW(fan_out(psi, 1, -1), ParamError);
}

TEST(FanOut, EqualsFanInWithNullAncilla) {
  for (int i = 0; i < 100; ++i) {
    const auto psi = random_state();
    const double n = uniform(0.1, 3), m = uniform(0.1, 3);
    const auto [a, b] = fan_out(psi, n, m);
    const auto [c, e] = fan_in(psi, AnbitState::null(2), n, m);
    EXPECT_TRUE(approx_equal(a, c, {0, 0}));
    EXPECT_TRUE(approx_equal(b, e, {0, 0}));
  }
}

TEST(FanOut, MatrixWithNullAncillaIgnoresFreeBlocks) {
  const FanOutGate g(1.5, 0.5, random_matrix(2), random_matrix(2));
  const auto psi = random_state();
  Vec in(4);
  in << psi.amps(), Vec::Zero(2);
  const Vec out = g.matrix(2) * in;
  EXPECT_TRUE(approx_equal(Mat(out.head(2)), Mat(1.5 * psi.amps())));
  EXPECT_TRUE(approx_equal(Mat(out.tail(2)), Mat(0.5 * psi.amps())));
}

TEST(Witness, TensorRuleDiffersFromApparentMatrix) {
  const auto [t, m] = fanin_tensor_nonlinearity_witness({1, 0}, {0, 1});
  Vec want_t(4), want_m(4);
  want_t << 1, -1, 1, -1;
  want_m << 0, -1, 0, 0;
  EXPECT_TRUE(approx_equal(Mat(t), Mat(want_t)));
  EXPECT_TRUE(approx_equal(Mat(m), Mat(want_m)));

  const AnbitState psi{cplx(0.5, 1), 2};
  const auto [t2, m2] = fanin_tensor_nonlinearity_witness(psi, psi);
  EXPECT_EQ(t2.norm(), 0.0);
  Vec w(4);
  w << 0, -psi[0] * psi[1], -psi[1] * psi[0], 0;
  EXPECT_TRUE(approx_equal(Mat(m2), Mat(w)));

  const auto [t3, m3] = fanin_tensor_nonlinearity_witness(AnbitState::null(2), AnbitState::null(2));
  EXPECT_EQ(t3.norm(), 0.0);
  EXPECT_EQ(m3.norm(), 0.0);
}

TEST(Witness, GenericInputsDiffer) {
  for (int i = 0; i < 100; ++i) {
    const auto psi = random_state(), phi = random_state();
    const auto [t, m] = fanin_tensor_nonlinearity_witness(psi, phi);
    Vec lit(4);
    lit << (psi[0] + phi[0]) * (psi[0] - phi[0]), (psi[0] + phi[0]) * (psi[1] - phi[1]),
        (psi[1] + phi[1]) * (psi[0] - phi[0]), (psi[1] + phi[1]) * (psi[1] - phi[1]);
    Vec app(4);
    app << 0, -psi[0] * phi[1], -psi[1] * phi[0], 0;
    EXPECT_TRUE(approx_equal(Mat(t), Mat(lit)));
    EXPECT_TRUE(approx_equal(Mat(m), Mat(app)));
    EXPECT_GT((t - m).norm(), 1e-6);
  }
}

TEST(LoopEquivalent, Examples) {
  const GateMatrix m1(random_matrix(2));
  EXPECT_TRUE(approx_equal(loop_equivalent(m1, GateMatrix(Mat::Zero(2, 2))).matrix(), m1.matrix()));
  const GateMatrix half(0.5 * Mat::Identity(2, 2));
  EXPECT_LE((loop_equivalent(half, half).matrix() - (2.0 / 3.0) * Mat::Identity(2, 2)).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_THROW(loop_equivalent(GateMatrix::identity(2), GateMatrix::identity(2)), LoopSingularError);
}

TEST(LoopEquivalent, NeumannOracleAndRefactoring) {
  int checked = 0;
  for (int i = 0; i < 300 && checked < 100; ++i) {
    const Mat x = random_matrix(2) * 0.4, y = random_matrix(2) * 0.4;
    const cplx n1 = std::polar(uniform(0.5, 1.2), uniform(0, kTwoPi));
    const double n2 = uniform(0.5, 1.5), m2 = uniform(0.5, 1.5);
    const Mat a = n1 * m2 * x * y;
    if (spectral_radius(a) >= 0.9) continue;
    ++checked;
    const Mat meq = loop_equivalent(GateMatrix(x), GateMatrix(y), n1, n2, m2).matrix();
    const Mat series = n1 * n2 * neumann_series(a, 200) * x;
    EXPECT_LE((meq - series).norm(), 1e-8);
    const Mat g = Mat::Identity(2, 2) - a;
    EXPECT_LE((meq - n1 * n2 * g.inverse() * x).norm(), 1e-10 * std::max(1.0, meq.norm()));
  }
  EXPECT_EQ(checked, 100);
}

TEST(TwoAnbitLoop, SeveredFeedback) {
  const GateMatrix m1(random_matrix(2)), zero(Mat::Zero(2, 2));
  LoopParams p;
  p.n1 = 0.7;
  p.n3 = 1.3;
  const auto ops = two_anbit_loop(m1, zero, p);
  EXPECT_TRUE(approx_equal(ops.a1.matrix(), Mat(0.7 * 1.3 * m1.matrix())));
  EXPECT_EQ(ops.a2.matrix().norm(), 0.0);
  EXPECT_EQ(ops.b1.matrix().norm(), 0.0);
  EXPECT_EQ(ops.b2.matrix().norm(), 0.0);
}

TEST(TwoAnbitLoop, ScalarCase) {
  const GateMatrix half(0.5 * Mat::Identity(2, 2));
  const auto ops = two_anbit_loop(half, half);
  EXPECT_LE((ops.a1.matrix() - (2.0 / 3.0) * Mat::Identity(2, 2)).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_THROW(two_anbit_loop(GateMatrix::identity(2), GateMatrix::identity(2)), LoopSingularError);
}

TEST(Graph, SingleGate) {
  CircuitGraph g(2);
  g.add_source("in");
  g.add_gate("F", GateMatrix(random_matrix(2)));
  g.add_sink("out");
  g.connect("in", 0, "F", 0);
  g.connect("F", 0, "out", 0);
  const auto s = random_state();
  const auto out = g.solve({{"in", s}});
  const auto& f = std::get<GateNode>(g.nodes()[1].kind).gate;
  EXPECT_TRUE(approx_equal(out.at("out"), apply(f, s)));
}

TEST(Graph, Validation) {
  CircuitGraph g(2);
  g.add_source("in");
  g.add_gate("F", pauli(1));
  g.add_sink("out");
  g.add_sink("out2");
  g.connect("in", 0, "F", 0);
  EXPECT_THROW(g.solve({{"in", random_state()}}), GraphError);
  g.connect("F", 0, "out", 0);
  EXPECT_THROW(g.connect("F", 0, "out2", 0), GraphError);
  EXPECT_THROW(g.connect("in", 0, "out2", 0), GraphError);
  EXPECT_THROW(g.connect("F", 1, "out2", 0), GraphError);
  EXPECT_THROW(g.connect("in", 0, "F", 0), GraphError);
  EXPECT_THROW(g.add_sink("out"), GraphError);
  EXPECT_THROW(g.add_gate("G", GateMatrix::identity(3)), DimError);
  EXPECT_THROW(g.node_index("nope"), GraphError);
}

TEST(Graph, MissingSourceInput) {
  CircuitGraph g(2);
  g.add_source("in");
  g.add_sink("out");
  g.connect("in", 0, "out", 0);
  EXPECT_THROW(g.solve({}), GraphError);
  EXPECT_THROW(g.solve({{"in", AnbitState{1, 0, 0}}}), DimError);
}

TEST(Graph, AcyclicMatchesForwardEvaluation) {
  for (int i = 0; i < 50; ++i) {
    const auto g = feedforward_graph(GateMatrix(random_matrix(2)), GateMatrix(random_matrix(2)), GateMatrix(random_matrix(2)),
                               GateMatrix(random_matrix(2)));
    const std::map<std::string, AnbitState> in{{"psi1", random_state()}, {"psi2", random_state()}};
    const auto a = g.solve(in);
    const auto b = forward_eval(g, in);
    ASSERT_EQ(a.size(), b.size());
    for (const auto& [id, st] : b) EXPECT_TRUE(states_close(a.at(id), st, 1e-12)) << id;
  }
}

TEST(Graph, SingleLoopWorkedCase) {
  const GateMatrix half(0.5 * Mat::Identity(2, 2));
  const auto s = random_state();
  const auto out = single_loop_graph(half, half).solve({{"psi", s}});
  EXPECT_TRUE(states_close(out.at("phi"), AnbitState((2.0 / 3.0) * s.amps()), 1e-12));
}

TEST(Graph, SingleLoopSingular) {
  EXPECT_THROW(single_loop_graph(GateMatrix::identity(2), GateMatrix::identity(2)).solve({{"psi", random_state()}}),
               LoopSingularError);
}

TEST(Graph, SingleLoopMatchesLoopEquivalent) {
  int checked = 0;
  for (int i = 0; i < 200 && checked < 100; ++i) {
    const Mat x = random_matrix(2), y = random_matrix(2);
    const cplx n1 = gaussian_complex(), m1 = gaussian_complex();
    const double n2 = uniform(0.2, 2), m2 = uniform(0.2, 2);
    if (resolvent_det(Mat::Identity(2, 2) - n1 * m2 * x * y) < 1e-3) continue;
    ++checked;
    const GateMatrix meq = loop_equivalent(GateMatrix(x), GateMatrix(y), n1, n2, m2);
    const auto s = random_state();
    const auto out = single_loop_graph(GateMatrix(x), GateMatrix(y), n1, m1, n2, m2).solve({{"psi", s}});
    EXPECT_TRUE(states_close(out.at("phi"), apply(meq, s), 1e-10));
  }
  EXPECT_EQ(checked, 100);
}

TEST(Graph, CoupledLoopMatchesClosedForms) {
  for (int i = 0; i < 50; ++i) {
    const Mat x = random_matrix(2), y = random_matrix(2);
    LoopParams p{gaussian_complex(), gaussian_complex(), gaussian_complex(), gaussian_complex(),
                 uniform(0.2, 2),    uniform(0.2, 2),    uniform(0.2, 2),    uniform(0.2, 2)};
    const cplx k = p.n1 * p.n2 * p.m3 * p.m4;
    if (resolvent_det(Mat::Identity(2, 2) - k * x * y) < 1e-3) continue;
    const auto ops = two_anbit_loop(GateMatrix(x), GateMatrix(y), p);
    const auto s1 = random_state(), s2 = random_state();
    const auto out = coupled_loop_graph(GateMatrix(x), GateMatrix(y), p).solve({{"psi1", s1}, {"psi2", s2}});
    EXPECT_TRUE(states_close(out.at("phi1"), apply(ops.a1, s1) + apply(ops.a2, s2), 1e-10));
    EXPECT_TRUE(states_close(out.at("phi2"), apply(ops.b1, s1) + apply(ops.b2, s2), 1e-10));
  }
}

TEST(Graph, SequentialEqualsCombinational) {
  for (int i = 0; i < 50; ++i) {
    const Mat x = random_matrix(2), y = random_matrix(2);
    LoopParams p{gaussian_complex(), gaussian_complex(), gaussian_complex(), gaussian_complex(),
                 uniform(0.2, 2),    uniform(0.2, 2),    uniform(0.2, 2),    uniform(0.2, 2)};
    const cplx k = p.n1 * p.n2 * p.m3 * p.m4;
    if (resolvent_det(Mat::Identity(2, 2) - k * x * y) < 1e-3) continue;
    const auto ops = two_anbit_loop(GateMatrix(x), GateMatrix(y), p);
    const std::map<std::string, AnbitState> in{{"psi1", random_state()}, {"psi2", random_state()}};
    const auto seq = coupled_loop_graph(GateMatrix(x), GateMatrix(y), p).solve(in);
    const auto comb = feedforward_graph(ops.a1, ops.b1, ops.a2, ops.b2).solve(in);
    EXPECT_TRUE(states_close(seq.at("phi1"), comb.at("phi1"), 1e-10));
    EXPECT_TRUE(states_close(seq.at("phi2"), comb.at("phi2"), 1e-10));
  }
}
