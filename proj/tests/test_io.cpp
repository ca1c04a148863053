#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>

#include "boqc/io/json_io.hpp"
#include "support/fixtures.hpp"

namespace boqc::io {
namespace {

namespace fs = std::filesystem;

const fs::path kScenarios = BOQC_SCENARIO_DIR;

fs::path temp_file(const std::string& name, const std::string& text) {
  const fs::path p = fs::temp_directory_path() / ("boqc_io_" + name);
  std::ofstream(p) << text;
  return p;
}

TEST(AngleJson, RoundTrip) {
  const DyadicAngle a(5, 3);
  EXPECT_EQ(to_json(a), Json::parse(R"({"k":5,"b":3})"));
  EXPECT_EQ(angle_from_json(to_json(a)), a);
  EXPECT_THROW(angle_from_json(Json::parse(R"({"k":1})")), FormatError);
  EXPECT_THROW(angle_from_json(Json::parse(R"({"k":1,"b":0})")), ValidationError);
}

TEST(GraphJson, RoundTripKeepsEveryField) {
  GraphFile gf;
  gf.graph = testing::grover_graph();
  gf.graph.quantum_outputs = {3, 4};
  gf.order = TotalOrder{5, 6, 7, 8, 1, 2, 3, 4};
  gf.flow = find_flow(gf.graph);
  gf.b = 4;
  const GraphFile back = graph_from_json(graph_file_json(gf));
  EXPECT_EQ(back.graph, gf.graph);
  EXPECT_EQ(back.order, gf.order);
  EXPECT_EQ(back.flow, gf.flow);
  EXPECT_EQ(back.b, 4);
}

TEST(GraphJson, ShippedExampleMatchesTheJoinedDrafts) {
  const GraphFile gf = load_graph(kScenarios / "graphs/grover2.json");
  OpenGraph want = testing::grover_graph();
  want.quantum_outputs = {3, 4};
  EXPECT_EQ(gf.graph, want);
  EXPECT_EQ(gf.b, 4);
}

TEST(GraphJson, RejectsMalformedInput) {
  EXPECT_THROW(graph_from_json(Json::parse(R"({"edges":[]})")), FormatError);
  EXPECT_THROW(graph_from_json(Json::parse(R"({"vertices":[1,2],"edges":[[1,2,3]],"I":[1],"O":[2]})")), FormatError);
  EXPECT_THROW(graph_from_json(Json::parse(R"({"vertices":[1,2],"edges":[[1,1]],"I":[1],"O":[2]})")), FormatError);
  EXPECT_THROW(graph_from_json(Json::parse(R"({"vertices":"x","I":[1],"O":[2]})")), FormatError);
  // edge to an unknown vertex
  EXPECT_THROW(graph_from_json(Json::parse(R"({"vertices":[1,2],"edges":[[1,3]],"I":[1],"O":[2]})")), ValidationError);
  EXPECT_THROW(read_json(temp_file("bad.json", "{not json")), FormatError);
  EXPECT_THROW(read_json("/nonexistent/graph.json"), FormatError);
}

TEST(JoinJson, ShippedDraftsJoinToExampleOne) {
  const auto req = join_request_from_json(read_json(kScenarios / "graphs/grover2_drafts.json"));
  EXPECT_EQ(req.b, 4);
  EXPECT_EQ(req.io_mode, protocol::IoMode::cq);
  ASSERT_EQ(req.alice.slots.size(), 1u);
  EXPECT_EQ(req.alice.slots[0].boundary, (std::vector<NodeId>{1, 2}));
  const auto pre = protocol::pre_protocol(req.alice, req.oscar, req.connection, req.b, req.io_mode);
  EXPECT_EQ(pre.graph.edges, testing::grover_graph().edges);
  EXPECT_EQ(pre.order, (TotalOrder{5, 6, 7, 8, 1, 2, 3, 4}));
}

TEST(StateJson, MatrixRoundTripAndPairLayout) {
  qsim::Matrix m(2, 2);
  m << qsim::cplx{0.5, 0}, qsim::cplx{0, -0.25}, qsim::cplx{0, 0.25}, qsim::cplx{0.5, 0};
  const Json j = to_json(m);
  EXPECT_EQ(j[0][1], Json::parse("[0.0,-0.25]"));
  EXPECT_EQ(matrix_from_json(j), m);
  EXPECT_THROW(matrix_from_json(Json::parse("[[[1,0]],[]]")), FormatError);
  EXPECT_THROW(matrix_from_json(Json::parse("[[[1,0,0]]]")), FormatError);
}

TEST(PatternJson, CommandsInOrder) {
  const auto g = testing::path_graph();
  const auto fl = *find_flow(g);
  const calc::Angles theta{{1, DyadicAngle(1, 2)}, {2, DyadicAngle(0, 2)}};
  const Json j = to_json(calc::build_standard_pattern(g, fl, theta));
  std::string ops;
  for (const auto& c : j["commands"]) ops += c["op"].get<std::string>();
  EXPECT_EQ(ops.substr(0, 4), "NNEE");
  EXPECT_EQ(std::count(ops.begin(), ops.end(), 'M'), 2);
  EXPECT_EQ(j["commands"][4]["op"], "M");
  EXPECT_EQ(j["commands"][4]["node"], 1);
  EXPECT_EQ(j["commands"][4]["angle"]["k"], 1);
}

TEST(ScenarioJson, Grover2GivesSixMeasurementRounds) {
  const Scenario sc = load_scenario(kScenarios / "grover2.json");
  EXPECT_EQ(sc.name, "grover2");
  EXPECT_EQ(sc.graph.b, 4);
  EXPECT_EQ(sc.io_mode, protocol::IoMode::cq);
  EXPECT_EQ(sc.master_seed, 7u);
  const protocol::Setup s = make_setup(sc);
  EXPECT_EQ(s.b, 4);
  EXPECT_EQ(s.psi.at(7), DyadicAngle(8, 4));
  const auto r = protocol::run_protocol(s, sc.variant, protocol::World::real, protocol::bob_honest(), sc.seeds);
  const Json rep = run_report(sc, s, r);
  EXPECT_EQ(rep["nodes"], 8);
  EXPECT_EQ(rep["measurement_rounds"], 6);
  EXPECT_EQ(rep["output"]["quantum"]["labels"], Json::parse("[3,4]"));
  // sequence numbers are consecutive from zero
  const auto& msgs = rep["transcript"]["messages"];
  for (std::size_t i = 0; i < msgs.size(); ++i) EXPECT_EQ(msgs[i]["seq"], i);
}

TEST(ScenarioJson, ReportIsReproducible) {
  const Scenario sc = load_scenario(kScenarios / "path3.json");
  auto once = [&] {
    const auto s = make_setup(sc);
    return run_report(sc, s, protocol::run_protocol(s, sc.variant, protocol::World::real, protocol::bob_honest(), sc.seeds))
        .dump(2);
  };
  EXPECT_EQ(once(), once());
  Scenario other = sc;
  reseed(other, 12345);
  const auto s = make_setup(other);
  const auto r = protocol::run_protocol(s, other.variant, protocol::World::real, protocol::bob_honest(), other.seeds);
  EXPECT_EQ(run_report(other, s, r)["seed"], 12345);
}

TEST(ScenarioJson, QuantumInputForms) {
  const Scenario sc = load_scenario(kScenarios / "lazy7.json");
  const protocol::Setup s = make_setup(sc);
  ASSERT_TRUE(s.quantum_input.holds(1));
  ASSERT_TRUE(s.quantum_input.holds(2));
  const auto amps = s.quantum_input.amplitudes_in_order({1, 2});
  const double h = 1.0 / std::sqrt(2.0);
  // node 1 is |+_{pi/2}>, node 2 is |0>
  EXPECT_NEAR(std::abs(amps[0] - qsim::cplx{h, 0}), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(amps[1] - qsim::cplx{0, h}), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(amps[2]), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(amps[3]), 0.0, 1e-12);
}

Json path_scenario() {
  return Json::parse(R"({
    "graph": {"vertices":[1,2,3],"edges":[[1,2],[2,3]],"I":[1],"O":[3],"b":2},
    "io_mode": "cc", "phi": {"1": 1, "2": 3, "3": 0}, "classical_input": {"1": 1}
  })");
}

TEST(ScenarioJson, ValidatesAgainstGraphAndAngles) {
  EXPECT_NO_THROW(make_setup(scenario_from_json(path_scenario(), ".")));

  Json missing = path_scenario();
  missing["phi"].erase("2");
  EXPECT_THROW(make_setup(scenario_from_json(missing, ".")), ValidationError);

  Json stranger = path_scenario();
  stranger["phi"]["9"] = 0;
  EXPECT_THROW(make_setup(scenario_from_json(stranger, ".")), ValidationError);

  Json bad_bit = path_scenario();
  bad_bit["classical_input"]["1"] = 2;
  EXPECT_THROW(make_setup(scenario_from_json(bad_bit, ".")), ValidationError);

  Json bad_mode = path_scenario();
  bad_mode["io_mode"] = "xq";
  EXPECT_THROW(scenario_from_json(bad_mode, "."), ValidationError);

  Json bad_key = path_scenario();
  bad_key["phi"]["two"] = 0;
  EXPECT_THROW(scenario_from_json(bad_key, "."), FormatError);

  Json unnormalized = path_scenario();
  unnormalized["io_mode"] = "qc";
  unnormalized.erase("classical_input");
  unnormalized["quantum_input"] = Json::parse(R"({"1": [[1,0],[1,0]]})");
  EXPECT_THROW(make_setup(scenario_from_json(unnormalized, ".")), ValidationError);

  Json order = path_scenario();
  order["graph"]["total_order"] = Json::parse("[2,1,3]");
  EXPECT_THROW(make_setup(scenario_from_json(order, ".")), ValidationError);

  EXPECT_THROW(make_setup(load_scenario(kScenarios / "no_flow.json")), InvalidConnection);
}

TEST(ScenarioJson, PartialQuantumSetsNeedAnExplicitMode) {
  Json j = path_scenario();
  j.erase("io_mode");
  j["graph"]["tilde_O"] = Json::parse("[3]");
  EXPECT_EQ(scenario_from_json(j, ".").io_mode, protocol::IoMode::cq);
  j["graph"]["I"] = Json::parse("[1,2]");
  j["graph"]["O"] = Json::parse("[3]");
  j["graph"]["tilde_I"] = Json::parse("[1]");
  EXPECT_THROW(scenario_from_json(j, "."), FormatError);
}

TEST(BlindnessJson, CarriesHistogramsStatesAndDistances) {
  const Scenario sc = load_scenario(kScenarios / "path3.json");
  const auto s = make_setup(sc);
  const auto rep = security::check_blindness(s, sc.variant, protocol::bob_honest(), sc.enumeration);
  const Json j = blindness_report(rep);
  EXPECT_EQ(j["io_mode"], "cc");
  EXPECT_TRUE(j["passed"].get<bool>());
  EXPECT_LE(j["classical_tvd"].get<double>(), 1e-9);
  EXPECT_LE(j["quantum_trace_distance"].get<double>(), 1e-9);
  EXPECT_EQ(j["delta_histograms"].size(), 3u);
  EXPECT_EQ(j["delta_histograms"]["2"]["visits"].size(), 4u);
  EXPECT_EQ(j["received_states"].size(), 3u);
  const qsim::Matrix half = matrix_from_json(j["received_states"]["1"]);
  EXPECT_NEAR((half - qsim::Matrix::Identity(2, 2) * 0.5).cwiseAbs().maxCoeff(), 0.0, 1e-10);
  EXPECT_TRUE(j["enumeration"]["exhaustive"].get<bool>());
  EXPECT_GT(j["enumeration"]["real"]["runs"].get<int>(), 0);
}

TEST(LazyJson, ExampleTwoProfile) {
  const GraphFile gf = load_graph(kScenarios / "graphs/lazy7.json");
  const Json j = lazy_report(gf.graph, *gf.order);
  EXPECT_EQ(j["peak"], 4);
  EXPECT_EQ(j["bound"], 4);
  EXPECT_TRUE(j["bound_holds"].get<bool>());
  EXPECT_EQ(j["steps"].size(), 7u);
}

TEST(WriteJson, TrailingNewlineAndStableBytes) {
  const fs::path p = fs::temp_directory_path() / "boqc_io_write.json";
  write_json(p, Json::parse(R"({"b":1,"a":[1,2]})"));
  std::ifstream in(p);
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  EXPECT_EQ(text, "{\n  \"a\": [\n    1,\n    2\n  ],\n  \"b\": 1\n}\n");
}

}  // namespace
}  // namespace boqc::io
