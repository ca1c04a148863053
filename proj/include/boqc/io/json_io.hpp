#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include "json.hpp"

#include "boqc/calculus.hpp"
#include "boqc/graph.hpp"
#include "boqc/protocol.hpp"
#include "boqc/security.hpp"

namespace boqc::io {

using Json = nlohmann::json;

// Malformed file contents. Derives from ValidationError so callers can treat both alike.
class FormatError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

Json to_json(const DyadicAngle& a);
DyadicAngle angle_from_json(const Json& j);

// ---- graphs -----------------------------------------------------------------

struct GraphFile {
  OpenGraph graph;
  std::optional<TotalOrder> order;
  std::optional<Flow> flow;
  int b = 2;
};

Json to_json(const OpenGraph& g);
Json to_json(const Flow& fl);
Json graph_file_json(const GraphFile& gf);
GraphFile graph_from_json(const Json& j);
GraphFile load_graph(const std::filesystem::path& path);

// {"alice": {...,"slots":[{"id","boundary"}]}, "oscar": {...}, "connection": [[oscar, alice], ...], "b", "io_mode"}
struct JoinRequest {
  AliceDraft alice;
  OscarDraft oscar;
  std::vector<Edge> connection;
  int b = 2;
  protocol::IoMode io_mode = protocol::IoMode::cc;
};
JoinRequest join_request_from_json(const Json& j);

// ---- states -----------------------------------------------------------------

// rows of [re, im] pairs
Json to_json(const qsim::Matrix& m);
qsim::Matrix matrix_from_json(const Json& j);
Json to_json(const qsim::DensityMatrix& d);
Json to_json(const calc::CqState& cq);

// ---- patterns and transcripts -----------------------------------------------

Json to_json(const calc::Pattern& p);
Json to_json(const protocol::PublicInfo& info);
Json to_json(const protocol::Transcript& t);
Json to_json(const protocol::Seeds& s);

// ---- scenarios --------------------------------------------------------------

struct Scenario {
  std::string name;
  GraphFile graph;
  protocol::IoMode io_mode = protocol::IoMode::cc;
  protocol::Variant variant = protocol::Variant::boqc;
  std::map<NodeId, std::int64_t> phi;  // angle steps k
  std::map<NodeId, std::int64_t> psi;
  std::map<NodeId, int> classical_input;
  std::map<NodeId, std::array<qsim::cplx, 2>> quantum_input;  // missing quantum inputs start in |+>
  protocol::Seeds seeds;
  std::uint64_t master_seed = 1;
  std::string bob = "honest";
  security::ViewOptions enumeration;
};

// `base` resolves a relative "graph" path
Scenario scenario_from_json(const Json& j, const std::filesystem::path& base);
Scenario load_scenario(const std::filesystem::path& path);
void reseed(Scenario& sc, std::uint64_t master);

// Runs the pre-protocol on the scenario graph and fills the client inputs. Throws ValidationError.
protocol::Setup make_setup(const Scenario& sc);

// ---- reports ----------------------------------------------------------------

Json run_report(const Scenario& sc, const protocol::Setup& s, const protocol::RunResult& r);
Json blindness_report(const security::BlindnessReport& rep);
Json lazy_report(const OpenGraph& g, const TotalOrder& order);

Json read_json(const std::filesystem::path& path);
// two-space indent and a trailing newline
void write_json(const std::filesystem::path& path, const Json& j);

}  // namespace boqc::io
