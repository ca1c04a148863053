#include "boqc/io/json_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace boqc::io {

namespace {

using protocol::IoMode;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

const Json& field(const Json& j, const char* key) {
  if (!j.is_object()) throw FormatError("expected a JSON object");
  auto it = j.find(key);
  if (it == j.end()) throw FormatError(std::string("missing field \"") + key + "\"");
  return *it;
}

template <class T>
T as(const Json& j, const char* what) {
  try {
    return j.get<T>();
  } catch (const Json::exception&) {
    throw FormatError(std::string("field \"") + what + "\" has the wrong type");
  }
}

NodeSet node_set(const Json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) return {};
  const auto v = as<std::vector<NodeId>>(*it, key);
  return NodeSet(v.begin(), v.end());
}

NodeId node_key(const std::string& s) {
  std::size_t used = 0;
  int v = 0;
  try {
    v = std::stoi(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) throw FormatError("\"" + s + "\" is not a node id");
  return v;
}

template <class T>
std::map<NodeId, T> node_map(const Json& j, const char* key) {
  std::map<NodeId, T> out;
  auto it = j.find(key);
  if (it == j.end()) return out;
  if (!it->is_object()) throw FormatError(std::string("field \"") + key + "\" must map node ids to values");
  for (const auto& [k, v] : it->items()) out.emplace(node_key(k), as<T>(v, key));
  return out;
}

template <class T>
Json keyed(const std::map<NodeId, T>& m) {
  Json out = Json::object();
  for (const auto& [k, v] : m) out[std::to_string(k)] = v;
  return out;
}

Json keyed_angles(const calc::Angles& m) {
  Json out = Json::object();
  for (const auto& [k, v] : m) out[std::to_string(k)] = to_json(v);
  return out;
}

Json list(const NodeSet& s) { return Json(std::vector<NodeId>(s.begin(), s.end())); }

Json edge_list(const std::set<Edge>& edges) {
  Json out = Json::array();
  for (auto [a, b] : edges) out.push_back({a, b});
  return out;
}

std::set<Edge> edges_from(const Json& j, const char* key) {
  std::set<Edge> out;
  auto it = j.find(key);
  if (it == j.end()) return out;
  for (const auto& e : as<std::vector<std::vector<NodeId>>>(*it, key)) {
    if (e.size() != 2) throw FormatError(std::string("every entry of \"") + key + "\" must be a pair");
    if (e[0] == e[1]) throw FormatError("self-loop at node " + std::to_string(e[0]));
    out.insert(make_edge(e[0], e[1]));
  }
  return out;
}

Json complex_pair(qsim::cplx z) { return Json::array({z.real(), z.imag()}); }

qsim::cplx complex_from(const Json& j) {
  const auto v = as<std::vector<double>>(j, "amplitude");
  if (v.size() != 2) throw FormatError("complex numbers are written as [re, im]");
  return {v[0], v[1]};
}

std::string bit_key(const std::string& bits) { return bits.empty() ? "-" : bits; }

}  // namespace

Json to_json(const DyadicAngle& a) { return Json{{"k", a.k()}, {"b", a.b()}}; }

DyadicAngle angle_from_json(const Json& j) {
  return DyadicAngle(as<std::int64_t>(field(j, "k"), "k"), as<int>(field(j, "b"), "b"));
}

// ---- graphs -----------------------------------------------------------------

Json to_json(const OpenGraph& g) {
  Json j;
  j["vertices"] = list(g.vertices);
  j["edges"] = edge_list(g.edges);
  j["I"] = list(g.inputs);
  j["O"] = list(g.outputs);
  j["tilde_I"] = list(g.quantum_inputs);
  j["tilde_O"] = list(g.quantum_outputs);
  j["V_A"] = list(g.alice_nodes);
  j["V_O"] = list(g.oscar_nodes);
  return j;
}

Json to_json(const Flow& fl) {
  Json j;
  j["f"] = keyed(fl.f);
  Json layers = Json::array();
  for (const auto& l : fl.layers) layers.push_back(list(l));
  j["layers"] = layers;
  return j;
}

Json graph_file_json(const GraphFile& gf) {
  Json j = to_json(gf.graph);
  if (gf.order) j["total_order"] = *gf.order;
  if (gf.flow) j["flow"] = to_json(*gf.flow);
  j["b"] = gf.b;
  return j;
}

GraphFile graph_from_json(const Json& j) {
  GraphFile gf;
  OpenGraph& g = gf.graph;
  g.vertices = node_set(j, "vertices");
  field(j, "vertices");
  g.edges = edges_from(j, "edges");
  g.inputs = node_set(j, "I");
  g.outputs = node_set(j, "O");
  g.quantum_inputs = node_set(j, "tilde_I");
  g.quantum_outputs = node_set(j, "tilde_O");
  g.alice_nodes = node_set(j, "V_A");
  g.oscar_nodes = node_set(j, "V_O");
  if (auto it = j.find("b"); it != j.end()) gf.b = as<int>(*it, "b");
  if (auto it = j.find("total_order"); it != j.end()) gf.order = as<TotalOrder>(*it, "total_order");
  if (auto it = j.find("flow"); it != j.end()) {
    Flow fl;
    fl.f = node_map<NodeId>(*it, "f");
    for (const auto& l : as<std::vector<std::vector<NodeId>>>(field(*it, "layers"), "layers")) {
      fl.layers.emplace_back(l.begin(), l.end());
    }
    gf.flow = std::move(fl);
  }
  g.validate_structure();
  return gf;
}

GraphFile load_graph(const std::filesystem::path& path) { return graph_from_json(read_json(path)); }

JoinRequest join_request_from_json(const Json& j) {
  JoinRequest r;
  const Json& a = field(j, "alice");
  r.alice.graph.vertices = node_set(a, "vertices");
  r.alice.graph.edges = edges_from(a, "edges");
  r.alice.graph.inputs = node_set(a, "I");
  r.alice.graph.outputs = node_set(a, "O");
  if (auto it = a.find("slots"); it != a.end()) {
    for (const auto& s : *it) {
      r.alice.slots.push_back(
          SlotMarker{as<NodeId>(field(s, "id"), "id"), as<std::vector<NodeId>>(field(s, "boundary"), "boundary")});
    }
  }
  const Json& o = field(j, "oscar");
  r.oscar.vertices = node_set(o, "vertices");
  r.oscar.edges = edges_from(o, "edges");
  r.oscar.inputs = node_set(o, "I");
  r.oscar.outputs = node_set(o, "O");
  for (const auto& e : as<std::vector<std::vector<NodeId>>>(field(j, "connection"), "connection")) {
    if (e.size() != 2) throw FormatError("connection entries are [oscar node, alice node] pairs");
    r.connection.emplace_back(e[0], e[1]);
  }
  if (auto it = j.find("b"); it != j.end()) r.b = as<int>(*it, "b");
  if (auto it = j.find("io_mode"); it != j.end()) r.io_mode = protocol::parse_io_mode(as<std::string>(*it, "io_mode"));
  return r;
}

// ---- states -----------------------------------------------------------------

Json to_json(const qsim::Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(complex_pair(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

qsim::Matrix matrix_from_json(const Json& j) {
  if (!j.is_array()) throw FormatError("a matrix is an array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = rows == 0 ? Eigen::Index{0} : static_cast<Eigen::Index>(j[0].size());
  qsim::Matrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const Json& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) throw FormatError("ragged matrix rows");
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = complex_from(row[static_cast<std::size_t>(c)]);
  }
  return m;
}

Json to_json(const qsim::DensityMatrix& d) {
  return Json{{"labels", d.labels}, {"matrix", to_json(d.matrix)}};
}

Json to_json(const calc::CqState& cq) {
  Json blocks = Json::object();
  for (const auto& [bits, m] : cq.blocks) {
    const double w = m.trace().real();
    blocks[bit_key(bits)] = Json{{"probability", w}, {"state", to_json(w > 0 ? qsim::Matrix(m / w) : m)}};
  }
  return Json{{"labels", cq.labels}, {"blocks", blocks}};
}

// ---- patterns and transcripts -----------------------------------------------

Json to_json(const calc::Pattern& p) {
  Json cmds = Json::array();
  for (const auto& c : p.commands) {
    cmds.push_back(std::visit(
        overloaded{
            [](const calc::Prepare& x) { return Json{{"op", "N"}, {"node", x.node}, {"angle", to_json(x.angle)}}; },
            [](const calc::Entangle& x) { return Json{{"op", "E"}, {"nodes", {x.a, x.b}}}; },
            [](const calc::Measure& x) {
              return Json{{"op", "M"},         {"node", x.node}, {"angle", to_json(x.angle)},
                          {"x", list(x.x_signals)}, {"z", list(x.z_signals)}};
            },
            [](const calc::CorrectX& x) { return Json{{"op", "X"}, {"node", x.node}, {"signals", list(x.signals)}}; },
            [](const calc::CorrectZ& x) { return Json{{"op", "Z"}, {"node", x.node}, {"signals", list(x.signals)}}; },
        },
        c));
  }
  return Json{{"inputs", list(p.inputs)}, {"outputs", list(p.outputs)}, {"commands", cmds}};
}

Json to_json(const protocol::PublicInfo& info) {
  Json j;
  j["vertices"] = list(info.vertices);
  j["edges"] = edge_list(info.edges);
  j["tilde_I"] = list(info.quantum_inputs);
  j["tilde_O"] = list(info.quantum_outputs);
  j["V_A"] = list(info.alice_nodes);
  j["V_O"] = list(info.oscar_nodes);
  Json layers = Json::array();
  for (const auto& l : info.layers) layers.push_back(list(l));
  j["layers"] = layers;
  j["total_order"] = info.order;
  j["b"] = info.b;
  return j;
}

Json to_json(const protocol::Transcript& t) {
  Json msgs = Json::array();
  for (const auto& m : t.messages) {
    Json r;
    r["seq"] = m.seq;
    r["from"] = protocol::to_string(m.from);
    r["to"] = protocol::to_string(m.to);
    r["kind"] = protocol::to_string(m.kind);
    if (m.kind != protocol::MessageKind::key_share) r["node"] = m.node;
    if (m.angle) r["angle"] = to_json(*m.angle);
    if (m.bit) r["bit"] = *m.bit;
    msgs.push_back(std::move(r));
  }
  Json j;
  j["messages"] = msgs;
  j["keys"] = Json{{"r", keyed(t.keys.r)}, {"t", keyed(t.keys.t)}};
  j["deviations"] = t.deviations;
  j["capabilities"] = Json{{"alice", t.capabilities.alice}, {"oscar", t.capabilities.oscar}, {"bob", t.capabilities.bob}};
  return j;
}

Json to_json(const protocol::Seeds& s) {
  return Json{{"keys", s.keys},
              {"alice_pads", s.alice_pads},
              {"oscar_pads", s.oscar_pads},
              {"outcomes", s.outcomes},
              {"simulator", s.simulator}};
}

// ---- scenarios --------------------------------------------------------------

Scenario scenario_from_json(const Json& j, const std::filesystem::path& base) {
  Scenario sc;
  if (auto it = j.find("name"); it != j.end()) sc.name = as<std::string>(*it, "name");
  const Json& graph = field(j, "graph");
  if (graph.is_string()) {
    std::filesystem::path p = as<std::string>(graph, "graph");
    if (p.is_relative()) p = base / p;
    sc.graph = load_graph(p);
  } else {
    sc.graph = graph_from_json(graph);
  }
  if (auto it = j.find("b"); it != j.end()) sc.graph.b = as<int>(*it, "b");
  const int b = sc.graph.b;
  if (b < 1 || b > kMaxPrecision) throw ValidationError("precision b out of range");

  const OpenGraph& g = sc.graph.graph;
  if (auto it = j.find("io_mode"); it != j.end()) {
    sc.io_mode = protocol::parse_io_mode(as<std::string>(*it, "io_mode"));
  } else {
    const bool qi = !g.quantum_inputs.empty(), qo = !g.quantum_outputs.empty();
    if ((qi && g.quantum_inputs != g.inputs) || (qo && g.quantum_outputs != g.outputs)) {
      throw FormatError("tilde_I and tilde_O must be empty or all of I and O; set io_mode instead");
    }
    sc.io_mode = qi ? (qo ? IoMode::qq : IoMode::qc) : (qo ? IoMode::cq : IoMode::cc);
  }
  if (auto it = j.find("protocol"); it != j.end()) sc.variant = protocol::parse_variant(as<std::string>(*it, "protocol"));
  sc.phi = node_map<std::int64_t>(j, "phi");
  sc.psi = node_map<std::int64_t>(j, "psi");
  sc.classical_input = node_map<int>(j, "classical_input");
  if (auto it = j.find("quantum_input"); it != j.end()) {
    if (!it->is_object()) throw FormatError("\"quantum_input\" maps node ids to states");
    for (const auto& [k, v] : it->items()) {
      std::array<qsim::cplx, 2> amp;
      if (v.is_object()) {
        const DyadicAngle a(as<std::int64_t>(field(v, "k"), "k"), b);
        amp = {qsim::cplx{1.0 / std::sqrt(2.0), 0}, std::polar(1.0 / std::sqrt(2.0), a.radians())};
      } else {
        if (!v.is_array() || v.size() != 2) throw FormatError("a single-qubit state is {\"k\": n} or [[re,im],[re,im]]");
        amp = {complex_from(v[0]), complex_from(v[1])};
      }
      sc.quantum_input.emplace(node_key(k), amp);
    }
  }
  if (auto it = j.find("bob"); it != j.end()) sc.bob = as<std::string>(*it, "bob");

  reseed(sc, 1);
  if (auto it = j.find("seed"); it != j.end()) reseed(sc, as<std::uint64_t>(*it, "seed"));
  if (auto it = j.find("seeds"); it != j.end()) {
    auto get = [&](const char* key, std::uint64_t& dst) {
      if (auto s = it->find(key); s != it->end()) dst = as<std::uint64_t>(*s, key);
    };
    get("keys", sc.seeds.keys);
    get("alice_pads", sc.seeds.alice_pads);
    get("oscar_pads", sc.seeds.oscar_pads);
    get("outcomes", sc.seeds.outcomes);
    get("simulator", sc.seeds.simulator);
  }
  if (auto it = j.find("enumeration"); it != j.end()) {
    auto& e = sc.enumeration;
    if (auto s = it->find("exhaustive"); s != it->end()) e.exhaustive = as<bool>(*s, "exhaustive");
    if (auto s = it->find("shots"); s != it->end()) e.shots = as<std::uint64_t>(*s, "shots");
    if (auto s = it->find("seed"); s != it->end()) e.seed = as<std::uint64_t>(*s, "seed");
    if (auto s = it->find("joint_cap"); s != it->end()) e.joint_cap = as<std::size_t>(*s, "joint_cap");
  }
  return sc;
}

Scenario load_scenario(const std::filesystem::path& path) {
  Scenario sc = scenario_from_json(read_json(path), path.parent_path());
  if (sc.name.empty()) sc.name = path.stem().string();
  return sc;
}

void reseed(Scenario& sc, std::uint64_t master) {
  sc.master_seed = master;
  sc.seeds = protocol::Seeds::from(master);
  sc.enumeration.seed = master;
}

protocol::Setup make_setup(const Scenario& sc) {
  const int b = sc.graph.b;
  auto pre = protocol::pre_protocol(sc.graph.graph, b, sc.io_mode);
  protocol::Setup s;
  s.graph = std::move(pre.graph);
  s.flow = std::move(pre.flow);
  s.order = std::move(pre.order);
  s.b = b;
  if (sc.graph.flow) {
    if (!verify_flow(s.graph, *sc.graph.flow)) throw ValidationError("the flow in the graph file is not a flow");
    s.flow = *sc.graph.flow;
    s.order = linearize(s.flow);
  }
  if (sc.graph.order) s.order = *sc.graph.order;
  for (const auto& [v, k] : sc.phi) s.phi.emplace(v, DyadicAngle(k, b));
  for (const auto& [v, k] : sc.psi) s.psi.emplace(v, DyadicAngle(k, b));
  s.classical_input = sc.classical_input;
  for (const auto& [v, amp] : sc.quantum_input) {
    if (!s.graph.quantum_inputs.count(v)) {
      throw ValidationError("quantum input state given for node " + std::to_string(v) + " which is not in tilde_I");
    }
  }
  for (NodeId v : s.graph.quantum_inputs) {
    auto it = sc.quantum_input.find(v);
    if (it == sc.quantum_input.end()) {
      s.quantum_input.alloc_plus(v, DyadicAngle::zero(b));
    } else {
      try {
        s.quantum_input.alloc_state(v, it->second[0], it->second[1]);
      } catch (const qsim::AllocationError& e) {
        throw ValidationError("quantum input for node " + std::to_string(v) + ": " + e.what());
      }
    }
  }
  protocol::validate_setup(s);
  return s;
}

// ---- reports ----------------------------------------------------------------

Json run_report(const Scenario& sc, const protocol::Setup& s, const protocol::RunResult& r) {
  Json j;
  j["scenario"] = sc.name;
  j["protocol"] = protocol::to_string(sc.variant);
  j["io_mode"] = protocol::to_string(s.io_mode());
  j["bob"] = sc.bob;
  j["seed"] = sc.master_seed;
  j["seeds"] = to_json(sc.seeds);
  j["public_info"] = to_json(protocol::public_info(s));
  j["phi"] = keyed_angles(s.phi);
  j["psi"] = keyed_angles(s.psi);
  j["nodes"] = s.graph.vertices.size();
  std::size_t rounds = 0;
  for (const auto& m : r.transcript.messages) rounds += m.kind == protocol::MessageKind::angle;
  j["measurement_rounds"] = rounds;

  Json out;
  out["classical"] = keyed(r.classical_output);
  if (r.output_labels.empty()) {
    out["quantum"] = nullptr;
  } else {
    out["quantum"] = to_json(qsim::DensityMatrix::pure(r.output_labels, r.state.amplitudes_in_order(r.output_labels)));
  }
  out["probability"] = r.probability;
  j["output"] = out;
  j["bob_peak_qubits"] = r.bob_peak_qubits;
  j["transcript"] = to_json(r.transcript);
  return j;
}

namespace {

Json view_meta(const security::BobView& v) {
  return Json{{"runs", v.runs},
              {"total_weight", v.total_weight},
              {"records", v.records.size()},
              {"snapshots", v.holdings.size()},
              {"bob_peak_qubits", v.bob_peak_qubits},
              {"simulator_peak_halves", v.simulator_peak_halves}};
}

}  // namespace

Json blindness_report(const security::BlindnessReport& rep) {
  Json j;
  j["protocol"] = protocol::to_string(rep.variant);
  const bool qi = !rep.real.info.quantum_inputs.empty(), qo = !rep.real.info.quantum_outputs.empty();
  j["io_mode"] = qi ? (qo ? "qq" : "qc") : (qo ? "cq" : "cc");
  j["bob"] = rep.bob;
  j["public_info"] = to_json(rep.real.info);
  j["enumeration"] = Json{{"exhaustive", rep.options.exhaustive},
                          {"shots", rep.options.exhaustive ? Json(nullptr) : Json(rep.options.shots)},
                          {"seed", rep.options.exhaustive ? Json(nullptr) : Json(rep.options.seed)},
                          {"zero_secrets", rep.options.zero_secrets},
                          {"joint_cap", rep.options.joint_cap},
                          {"real", view_meta(rep.real)},
                          {"ideal", view_meta(rep.ideal)}};

  Json hist = Json::object();
  for (const auto& [node, h] : rep.real.delta) {
    Json e{{"mass", h.mass}, {"visits", h.visits}};
    if (auto it = rep.chi_square.find(node); it != rep.chi_square.end()) {
      e["chi_square"] = Json{{"statistic", it->second.statistic}, {"dof", it->second.dof}, {"p_value", it->second.p_value}};
    }
    hist[std::to_string(node)] = std::move(e);
  }
  j["delta_histograms"] = hist;

  Json recv = Json::object();
  for (const auto& [node, m] : rep.real.received) {
    const double w = m.trace().real();
    recv[std::to_string(node)] = to_json(w > 0 ? qsim::Matrix(m / w) : m);
  }
  j["received_states"] = recv;
  j["max_pad_deviation"] = rep.max_pad_deviation;
  j["delta_uniform"] = rep.delta_uniform;
  j["classical_tvd"] = rep.distance.classical_tvd;
  j["quantum_trace_distance"] = rep.distance.quantum_trace_distance;
  j["worst_snapshot"] = rep.distance.worst_snapshot;
  j["passed"] = rep.passed;
  return j;
}

Json lazy_report(const OpenGraph& g, const TotalOrder& order) {
  const auto profile = calc::lazy_profile(g, order);
  Json steps = Json::array();
  int peak = static_cast<int>(g.inputs.size());
  for (const auto& s : profile) {
    steps.push_back(Json{{"node", s.node}, {"prepared", list(s.prepared)}, {"live", s.live_peak}, {"live_after", s.live_after}});
    peak = std::max(peak, s.live_peak);
  }
  const int bound = static_cast<int>(g.outputs.size()) + 1;
  return Json{{"order", order}, {"steps", steps}, {"peak", peak}, {"bound", bound}, {"bound_holds", peak <= bound}};
}

Json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot read " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

void write_json(const std::filesystem::path& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

}  // namespace boqc::io
