#include <gtest/gtest.h>

#include <algorithm>
#include <chrono>

#include "boqc/protocol.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

namespace boqc::protocol {
namespace {

using testing::Rng;

constexpr double kChannelTol = 1e-9;
const IoMode kAllModes[] = {IoMode::cc, IoMode::cq, IoMode::qc, IoMode::qq};

std::size_t count_kind(const Transcript& t, MessageKind k) {
  return static_cast<std::size_t>(
      std::count_if(t.messages.begin(), t.messages.end(), [&](const Message& m) { return m.kind == k; }));
}

// ---- pre-protocol -----------------------------------------------------------

TEST(PreProtocol, GroverDraftsGiveExamplePublicInfo) {
  const PreProtocol pre = pre_protocol(testing::grover_alice(), testing::grover_oscar(), {{7, 2}, {8, 1}}, 4);
  EXPECT_EQ(pre.graph.edges, testing::grover_graph().edges);
  EXPECT_TRUE(pre.info.quantum_inputs.empty());
  EXPECT_TRUE(pre.info.quantum_outputs.empty());
  EXPECT_EQ(pre.info.alice_nodes, (NodeSet{1, 2, 3, 4}));
  EXPECT_EQ(pre.info.oscar_nodes, (NodeSet{5, 6, 7, 8}));
  EXPECT_EQ(pre.info.order, (TotalOrder{5, 6, 7, 8, 1, 2, 3, 4}));
  EXPECT_EQ(pre.info.b, 4);
}

TEST(PreProtocol, NoOracleQueriesUsesAliceGraphAlone) {
  const PreProtocol pre = pre_protocol(testing::path_graph(), 2);
  EXPECT_EQ(pre.info.vertices, (NodeSet{1, 2, 3}));
  EXPECT_EQ(pre.info.alice_nodes, (NodeSet{1, 2, 3}));
  EXPECT_TRUE(pre.info.oscar_nodes.empty());
  EXPECT_EQ(pre.info.order, (TotalOrder{1, 2, 3}));
}

TEST(PreProtocol, OracleAnglesDoNotChangePublicInfo) {
  Rng rng(11);
  protocol::Setup a = testing::grover_setup(rng, IoMode::cc, 3);
  protocol::Setup b = a;
  b.psi = testing::random_angles(rng, a.graph.oscar_nodes, 3);
  EXPECT_EQ(public_info(a), public_info(b));
}

TEST(PreProtocol, JoinWithoutFlowIsRejected) {
  // a triangle with one input and one output has no flow
  OpenGraph g = OpenGraph::make({1, 2, 3}, {{1, 2}, {2, 3}, {1, 3}}, {1}, {2});
  EXPECT_THROW(pre_protocol(g, 2), InvalidConnection);
}

TEST(ClientInputs, ValidationRejectsBadInputs) {
  Rng rng(3);
  const protocol::Setup good = testing::random_setup(rng, testing::path_graph(), IoMode::cc, 2);
  EXPECT_NO_THROW(validate_setup(good));

  protocol::Setup missing = good;
  missing.phi.erase(2);
  EXPECT_THROW(validate_setup(missing), ValidationError);

  protocol::Setup unknown = good;
  unknown.phi.emplace(9, DyadicAngle(1, 2));
  EXPECT_THROW(validate_setup(unknown), ValidationError);

  protocol::Setup precision = good;
  precision.phi[2] = DyadicAngle(1, 3);
  EXPECT_THROW(validate_setup(precision), PrecisionMismatch);

  protocol::Setup bit = good;
  bit.classical_input[1] = 2;
  EXPECT_THROW(validate_setup(bit), ValidationError);

  protocol::Setup order = good;
  order.order = {2, 1, 3};
  EXPECT_THROW(validate_setup(order), ValidationError);

  Rng rng2(4);
  protocol::Setup out = testing::random_setup(rng2, testing::path_graph(), IoMode::cq, 2);
  out.phi.emplace(3, DyadicAngle(1, 2));
  EXPECT_THROW(validate_setup(out), ValidationError);
}

TEST(Program, UnknownNodeIsAnError) {
  Rng rng(5);
  const Program p = compile(testing::random_setup(rng, testing::path_graph(), IoMode::cc, 2), Variant::boqc,
                            World::real);
  EXPECT_THROW(p.index_of(42), NotFound);
}

// ---- correctness ------------------------------------------------------------

class PathModes : public ::testing::TestWithParam<IoMode> {};

TEST_P(PathModes, ExhaustiveOutputMatchesPattern) {
  Rng rng(100 + static_cast<int>(GetParam()));
  for (int trial = 0; trial < 3; ++trial) {
    const protocol::Setup s = testing::random_setup(rng, testing::path_graph(), GetParam(), 2);
    const calc::CqState want = reference_output(s);
    for (Variant v : {Variant::boqc, Variant::boqco}) {
      const calc::CqState got = output_channel(s, v, World::real, bob_honest());
      EXPECT_LE(cq_trace_distance(got, want), kChannelTol) << to_string(v) << " " << to_string(GetParam());
    }
  }
}

TEST_P(PathModes, EveryKeyGivesThePatternChannel) {
  Rng rng(200 + static_cast<int>(GetParam()));
  const protocol::Setup s = testing::random_setup(rng, testing::path_graph(), GetParam(), 2);
  const calc::CqState want = reference_output(s);
  for (Variant v : {Variant::boqc, Variant::boqco}) {
    const KeyVerification kv = verify_every_key(s, v, World::real, bob_honest(), want);
    EXPECT_TRUE(kv.passed(kChannelTol)) << to_string(v) << " distance " << kv.max_distance << " keys "
                                         << kv.keys_checked << "/" << kv.key_space;
    EXPECT_GT(kv.key_space, 1u);
  }
}

TEST_P(PathModes, SerialAndParallelEnumerationAgree) {
  Rng rng(300 + static_cast<int>(GetParam()));
  const protocol::Setup s = testing::random_setup(rng, testing::path_graph(), GetParam(), 2);
  EnumerationOptions serial;
  serial.parallel = false;
  const calc::CqState a = output_channel(s, Variant::boqc, World::real, bob_honest(), serial);
  const calc::CqState b = output_channel(s, Variant::boqc, World::real, bob_honest());
  EXPECT_LE(cq_trace_distance(a, b), 1e-12);
}

INSTANTIATE_TEST_SUITE_P(AllModes, PathModes, ::testing::ValuesIn(kAllModes),
                         [](const auto& info) { return to_string(info.param); });

TEST(Correctness, QuantumPathOutputIsTheIsometry) {
  Rng rng(17);
  for (int seed = 0; seed < 20; ++seed) {
    const protocol::Setup s = testing::random_setup(rng, testing::path_graph(), IoMode::qq, 2);
    calc::Angles theta = s.phi;
    const qsim::Matrix v = calc::isometry_matrix(s.graph, theta);
    // reference qubit 1000 is untouched; input node 1 maps to output node 3
    const qsim::Amplitudes in = s.quantum_input.amplitudes_in_order({1, 1000});
    Eigen::Map<const Eigen::VectorXcd> psi(in.data(), 4);
    Eigen::VectorXcd want(4);
    for (int r = 0; r < 2; ++r) {
      Eigen::Vector2cd col(psi(0 + 2 * r), psi(1 + 2 * r));
      want.segment(2 * r, 2) = v * col;
    }
    const RunResult res = run_boqc(s, bob_honest(), Seeds::from(static_cast<std::uint64_t>(seed)));
    const qsim::Amplitudes got = res.state.amplitudes_in_order({3, 1000});
    EXPECT_GT(qsim::state_fidelity(got, qsim::Amplitudes(want.data(), want.data() + 4)), 1 - 1e-9);
  }
}

TEST(Correctness, ClassicalInputMatchesPlusStateInput) {
  Rng rng(23);
  for (int trial = 0; trial < 4; ++trial) {
    const protocol::Setup classical = testing::random_setup(rng, testing::path_graph(), IoMode::cc, 2);
    protocol::Setup quantum = classical;
    apply_io_mode(quantum.graph, IoMode::qc);
    quantum.classical_input.clear();
    quantum.quantum_input = qsim::QuantumRegister();
    quantum.quantum_input.alloc_plus(1, DyadicAngle(0, 2).plus_pi(classical.classical_input.at(1)));
    const auto a = output_channel(classical, Variant::boqc, World::real, bob_honest());
    const auto b = output_channel(quantum, Variant::boqc, World::real, bob_honest());
    EXPECT_LE(cq_trace_distance(a, b), kChannelTol);
  }
}

TEST(Correctness, GroverCqEveryKey) {
  Rng rng(31);
  const protocol::Setup s = testing::grover_setup(rng, IoMode::cq, 2);
  const calc::CqState want = reference_output(s);
  for (Variant v : {Variant::boqc, Variant::boqco}) {
    const KeyVerification kv = verify_every_key(s, v, World::real, bob_honest(), want);
    EXPECT_TRUE(kv.passed(kChannelTol)) << to_string(v) << " distance " << kv.max_distance;
    EXPECT_EQ(kv.key_space, std::uint64_t{1} << 18);  // 4^6 pads times 2^6 keys
  }
}

TEST(Correctness, GroverCcEveryKey) {
  Rng rng(33);
  const protocol::Setup s = testing::grover_setup(rng, IoMode::cc, 2);
  const calc::CqState want = reference_output(s);
  for (Variant v : {Variant::boqc, Variant::boqco}) {
    const KeyVerification kv = verify_every_key(s, v, World::real, bob_honest(), want);
    EXPECT_TRUE(kv.passed(kChannelTol)) << to_string(v) << " distance " << kv.max_distance;
    EXPECT_EQ(kv.key_space, std::uint64_t{1} << 24);  // 4^8 pads times 2^8 keys
  }
}

TEST(Correctness, GroverBoqcAndBoqcoAgreeWithoutKeys) {
  Rng rng(37);
  const protocol::Setup s = testing::grover_setup(rng, IoMode::cc, 2);
  const auto a = output_channel(s, Variant::boqc, World::real, bob_honest(), EnumerationOptions{true, true});
  const auto b = output_channel(s, Variant::boqco, World::real, bob_honest(), EnumerationOptions{true, true});
  EXPECT_LE(cq_trace_distance(a, b), kChannelTol);
  EXPECT_LE(cq_trace_distance(a, reference_output(s)), kChannelTol);
}

TEST(Correctness, ZeroKeysSendThePlainCorrectedAngles) {
  Rng rng(41);
  const protocol::Setup s = testing::grover_setup(rng, IoMode::cc, 3);
  const Program prog = compile(s, Variant::boqc, World::real);
  const RunResult res = execute(prog, bob_honest(), zero_secret_chooser(9));
  std::map<NodeId, int> signal;
  for (const Message& m : res.transcript.messages) {
    if (m.kind == MessageKind::outcome && m.to == Endpoint::alice) signal[m.node] = *m.bit;
  }
  std::size_t angles = 0;
  for (const Message& m : res.transcript.messages) {
    if (m.kind != MessageKind::angle) continue;
    ++angles;
    const auto parent = s.flow.inverse(m.node);
    int sz = 0;
    for (NodeId k : z_dependencies(s.graph, s.flow, m.node)) sz ^= signal.at(k);
    EXPECT_EQ(*m.angle, correct_angle(base_angle(s, m.node), parent ? signal.at(*parent) : 0, sz)) << m.node;
  }
  EXPECT_EQ(angles, 8u);
}

// ---- transcripts ------------------------------------------------------------

TEST(Transcript, CapabilitiesFollowTheIoMode) {
  const std::map<IoMode, std::pair<std::set<std::string>, std::set<std::string>>> want = {
      {IoMode::cc, {{"C1"}, {"S1"}}},
      {IoMode::cq, {{"C1", "C2"}, {"S1", "S2"}}},
      {IoMode::qc, {{"C1", "C3"}, {"S1", "S3"}}},
      {IoMode::qq, {{"C1", "C2", "C3"}, {"S1", "S2", "S3"}}},
  };
  Rng rng(43);
  for (IoMode mode : kAllModes) {
    for (Variant v : {Variant::boqc, Variant::boqco}) {
      const protocol::Setup s = testing::random_setup(rng, testing::path_graph(), mode, 2);
      const RunResult res = run_protocol(s, v, World::real, bob_honest(), Seeds::from(1));
      EXPECT_EQ(res.transcript.capabilities.alice, want.at(mode).first) << to_string(mode);
      EXPECT_EQ(res.transcript.capabilities.bob, want.at(mode).second) << to_string(mode);
      EXPECT_TRUE(res.transcript.capabilities.oscar.empty());
    }
  }
  for (IoMode mode : {IoMode::cc, IoMode::cq}) {
    const protocol::Setup s = testing::grover_setup(rng, mode, 2);
    const RunResult res = run_boqc(s, bob_honest(), Seeds::from(2));
    EXPECT_EQ(res.transcript.capabilities.alice, want.at(mode).first);
    EXPECT_EQ(res.transcript.capabilities.oscar, (std::set<std::string>{"C1"}));
    EXPECT_EQ(res.transcript.capabilities.bob, want.at(mode).second);
  }
}

TEST(Transcript, ClientsNeverTalkAfterKeyShare) {
  Rng rng(47);
  const protocol::Setup s = testing::grover_setup(rng, IoMode::cq, 4);
  for (Variant v : {Variant::boqc, Variant::boqco}) {
    const RunResult res = run_protocol(s, v, World::real, bob_honest(), Seeds::from(3));
    for (const Message& m : res.transcript.messages) {
      const bool clients = (m.from == Endpoint::alice && m.to == Endpoint::oscar) ||
                           (m.from == Endpoint::oscar && m.to == Endpoint::alice);
      EXPECT_FALSE(clients);
    }
  }
}

TEST(Transcript, HonestRunMessageCounts) {
  Rng rng(53);
  const protocol::Setup s = testing::grover_setup(rng, IoMode::cq, 4);
  const RunResult res = run_boqc(s, bob_honest(), Seeds::from(4));
  EXPECT_EQ(count_kind(res.transcript, MessageKind::angle), 6u);
  EXPECT_EQ(count_kind(res.transcript, MessageKind::qubit), 6u);
  EXPECT_EQ(count_kind(res.transcript, MessageKind::outcome), 12u);
  EXPECT_EQ(count_kind(res.transcript, MessageKind::output_qubit), 2u);
  EXPECT_EQ(count_kind(res.transcript, MessageKind::key_share), 2u);
  for (std::size_t i = 0; i < res.transcript.messages.size(); ++i) EXPECT_EQ(res.transcript.messages[i].seq, i);
  EXPECT_TRUE(res.transcript.deviations.empty());
  // keys cover exactly the measured nodes, t is empty without quantum inputs
  EXPECT_EQ(res.transcript.keys.r.size(), 6u);
  EXPECT_TRUE(res.transcript.keys.t.empty());
}

TEST(Transcript, HonestBobReportsTheSameBitToBothClients) {
  Rng rng(59);
  const protocol::Setup s = testing::grover_setup(rng, IoMode::cc, 2);
  const RunResult res = run_boqco(s, bob_honest(), Seeds::from(5));
  std::map<NodeId, int> to_alice, to_oscar;
  for (const Message& m : res.transcript.messages) {
    if (m.kind != MessageKind::outcome) continue;
    (m.to == Endpoint::alice ? to_alice : to_oscar)[m.node] = *m.bit;
  }
  EXPECT_EQ(to_alice, to_oscar);
  EXPECT_EQ(to_alice.size(), 8u);
}

TEST(Transcript, BobViewHoldsOnlyHisMessages) {
  Rng rng(61);
  const protocol::Setup s = testing::random_setup(rng, testing::path_graph(), IoMode::qq, 2);
  const RunResult res = run_boqc(s, bob_honest(), Seeds::from(6));
  const BobTranscript view = bob_view(res.transcript, public_info(s));
  EXPECT_EQ(view.info, public_info(s));
  for (const Message& m : view.messages) {
    EXPECT_TRUE(m.from == Endpoint::bob || m.to == Endpoint::bob);
    EXPECT_NE(m.kind, MessageKind::key_share);
  }
  static_assert(std::is_same_v<decltype(BobTranscript{}.messages), std::vector<Message>>);
}

TEST(Transcript, BoqcoSendsAnglesBeforeLaterQubits) {
  Rng rng(67);
  for (const OpenGraph& g : {testing::lazy_graph(), testing::grover_graph()}) {
    const protocol::Setup s = testing::random_setup(rng, g, IoMode::cc, 2);
    const RunResult res = run_boqco(s, bob_honest(), Seeds::from(7));
    const auto assigned = assignment_sets(s.graph, s.order);
    std::map<NodeId, std::size_t> pos, angle_at, qubit_at;
    for (std::size_t k = 0; k < s.order.size(); ++k) pos[s.order[k]] = k;
    for (const Message& m : res.transcript.messages) {
      if (m.kind == MessageKind::angle) angle_at[m.node] = m.seq;
      if (m.kind == MessageKind::qubit) qubit_at[m.node] = m.seq;
    }
    for (NodeId i : s.order) {
      if (!angle_at.count(i)) continue;
      for (NodeId later : s.order) {
        if (pos[later] <= pos[i]) continue;
        for (NodeId j : assigned.at(later)) {
          if (qubit_at.count(j)) EXPECT_LT(angle_at[i], qubit_at[j]) << i << " before " << j;
        }
      }
    }
  }
}

TEST(Transcript, SameSeedsGiveTheSameRun) {
  Rng rng(71);
  const protocol::Setup s = testing::grover_setup(rng, IoMode::cq, 4);
  const RunResult a = run_boqc(s, bob_honest(), Seeds::from(99));
  const RunResult b = run_boqc(s, bob_honest(), Seeds::from(99));
  EXPECT_EQ(a.bob_record, b.bob_record);
  EXPECT_EQ(a.transcript.keys.r, b.transcript.keys.r);
  EXPECT_EQ(qsim::state_fidelity(a.state.amplitudes(), b.state.amplitudes()), 1.0);
}

// ---- lazy qubit bound -------------------------------------------------------

TEST(LazyBound, BoqcoPeakOnLazyExampleIsFour) {
  Rng rng(73);
  const protocol::Setup s = testing::random_setup(rng, testing::lazy_graph(), IoMode::cq, 2);
  const RunResult res = run_boqco(s, bob_honest(), Seeds::from(8));
  EXPECT_EQ(res.bob_peak_qubits, 4);
  const RunResult plain = run_boqc(s, bob_honest(), Seeds::from(8));
  EXPECT_EQ(plain.bob_peak_qubits, 7);
}

TEST(LazyBound, RandomFlowGraphsStayWithinOutputsPlusOne) {
  Rng rng(79);
  for (int trial = 0; trial < 50; ++trial) {
    const OpenGraph g = testing::random_flow_graph(rng, 12);
    const protocol::Setup s = testing::random_setup(rng, g, IoMode::cq, 2);
    const RunResult res = run_boqco(s, bob_honest(), Seeds::from(static_cast<std::uint64_t>(trial)));
    EXPECT_LE(res.bob_peak_qubits, static_cast<int>(g.outputs.size()) + 1) << trial;
  }
}

// ---- dishonest Bob ----------------------------------------------------------

TEST(DishonestBob, ConstantReportDecodesToTheKey) {
  Rng rng(83);
  const protocol::Setup s = testing::random_setup(rng, testing::path_graph(), IoMode::cc, 2);
  for (std::uint64_t seed = 0; seed < 16; ++seed) {
    const RunResult res = run_boqc(s, bob_constant_report(0), Seeds::from(seed));
    EXPECT_EQ(res.classical_output.at(3), res.transcript.keys.r.at(3));
  }
}

TEST(DishonestBob, RandomReportsStillTerminate) {
  Rng rng(89);
  const protocol::Setup s = testing::grover_setup(rng, IoMode::cq, 3);
  const RunResult res = run_boqco(s, bob_random_report(5), Seeds::from(10));
  EXPECT_EQ(count_kind(res.transcript, MessageKind::angle), 6u);
  EXPECT_EQ(count_kind(res.transcript, MessageKind::output_qubit), 2u);
  EXPECT_EQ(res.state.num_qubits(), 2u);
  EXPECT_NEAR(res.state.norm(), 1.0, 1e-12);
}

TEST(DishonestBob, PiOffsetFlipsEigenstateOutcomes) {
  for (std::int64_t k = 0; k < 8; ++k) {
    const DyadicAngle delta(k, 3);
    qsim::QuantumRegister reg;
    reg.alloc_plus(1, delta);
    const auto p = reg.probabilities(1, qsim::Basis::equatorial(delta.plus_pi(1).radians()));
    EXPECT_NEAR(p[1], 1.0, 1e-12);
  }
  // measuring at delta + pi is the honest measurement with the report flipped
  Rng rng(97);
  const protocol::Setup s = testing::random_setup(rng, testing::path_graph(), IoMode::cq, 2);
  const BobBehavior flipped = bob_custom(
      "flip", {}, [](NodeId, int raw, const BobMemory&) { return Reports{raw ^ 1, raw ^ 1}; });
  BobBehavior flipped_stateless = flipped;
  flipped_stateless.stateless = true;
  const auto a = output_channel(s, Variant::boqc, World::real, bob_angle_offset_pi());
  const auto b = output_channel(s, Variant::boqc, World::real, flipped_stateless);
  EXPECT_LE(cq_trace_distance(a, b), kChannelTol);
  EXPECT_GT(cq_trace_distance(a, reference_output(s)), 0.1);
}

TEST(DishonestBob, DeviationsAreLogged) {
  Rng rng(101);
  const protocol::Setup s = testing::random_setup(rng, testing::path_graph(), IoMode::cc, 2);
  const RunResult res = run_boqc(s, bob_angle_offset(1), Seeds::from(11));
  EXPECT_EQ(res.transcript.deviations.size(), 3u);
  const BobBehavior meddling = bob_custom("meddle", {}, {}, [](NodeId v, BobHands& h) { h.apply_z(v); });
  const RunResult m = run_boqc(s, meddling, Seeds::from(11));
  EXPECT_EQ(m.transcript.deviations.size(), 3u);
}

TEST(DishonestBob, StatefulBobIsRefusedByTheKeyVerifier) {
  Rng rng(103);
  const protocol::Setup s = testing::random_setup(rng, testing::path_graph(), IoMode::cc, 2);
  const BobBehavior stateful = bob_custom("stateful", {}, {});
  EXPECT_THROW(verify_every_key(s, Variant::boqc, World::real, stateful, reference_output(s)), ValidationError);
}

// ---- caps -------------------------------------------------------------------

TEST(Caps, ExhaustiveLimitsRaiseSizeError) {
  Rng rng(107);
  const protocol::Setup fine = testing::random_setup(rng, testing::path_graph(), IoMode::cc, 3);
  EXPECT_THROW(require_enumerable(compile(fine, Variant::boqc, World::real)), SizeError);
  OpenGraph long_path = OpenGraph::make({1, 2, 3, 4, 5, 6, 7, 8, 9, 10},
                                        {{1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 6}, {6, 7}, {7, 8}, {8, 9}, {9, 10}},
                                        {1}, {10});
  const protocol::Setup big = testing::random_setup(rng, long_path, IoMode::cq, 2);
  EXPECT_THROW(require_enumerable(compile(big, Variant::boqc, World::real)), SizeError);
  const protocol::Setup ok = testing::random_setup(rng, testing::path_graph(), IoMode::cq, 2);
  EXPECT_NO_THROW(require_enumerable(compile(ok, Variant::boqc, World::real)));
  EXPECT_EQ(leaf_bound(compile(ok, Variant::boqc, World::real), false), 4u * 4u * 4u * 4u);
}

}  // namespace
}  // namespace boqc::protocol
