#include <chrono>
#include <cstdio>
#include <iostream>
#include <optional>
#include <random>
#include <string>

#include "CLI11.hpp"

#include "boqc/calculus.hpp"
#include "boqc/graph.hpp"
#include "boqc/io/json_io.hpp"
#include "boqc/protocol.hpp"
#include "boqc/security.hpp"

namespace {

using namespace boqc;
using io::Json;

enum Exit : int { kPass = 0, kValidation = 2, kViolation = 3, kSize = 4 };

struct Common {
  std::optional<std::uint64_t> seed;
  std::string protocol;
  std::string io_mode;
  std::string bob;
  std::string report;
  bool timing = false;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--seed", c.seed, "master seed for every random stream");
  cmd->add_option("--protocol", c.protocol, "boqc or boqco")->check(CLI::IsMember({"boqc", "boqco"}));
  cmd->add_option("--io", c.io_mode, "cc, cq, qc or qq")->check(CLI::IsMember({"cc", "cq", "qc", "qq"}));
  cmd->add_option("--bob", c.bob, "honest, constant-report-0/1, angle-offset, angle-offset-pi, random-report, split-report");
  cmd->add_option("--report", c.report, "write the JSON report here instead of stdout");
  cmd->add_flag("--timing", c.timing, "add wall-clock time to the report");
}

io::Scenario load(const std::string& path, const Common& c) {
  io::Scenario sc = io::load_scenario(path);
  if (c.seed) io::reseed(sc, *c.seed);
  if (!c.protocol.empty()) sc.variant = protocol::parse_variant(c.protocol);
  if (!c.io_mode.empty()) sc.io_mode = protocol::parse_io_mode(c.io_mode);
  if (!c.bob.empty()) sc.bob = c.bob;
  return sc;
}

void emit(const Json& j, const std::string& path) {
  if (path.empty()) {
    std::cout << j.dump(2) << '\n';
  } else {
    io::write_json(path, j);
  }
}

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

// ---- run --------------------------------------------------------------------

int cmd_run(const std::string& path, const Common& c, bool exhaustive) {
  const auto t0 = Clock::now();
  const io::Scenario sc = load(path, c);
  const protocol::Setup s = io::make_setup(sc);
  const auto bob = protocol::bob_by_name(sc.bob, sc.master_seed);
  const auto result = protocol::run_protocol(s, sc.variant, protocol::World::real, bob, sc.seeds);
  Json rep = io::run_report(sc, s, result);
  int code = kPass;
  if (exhaustive) {
    const auto reference = protocol::reference_output(s);
    const auto channel = protocol::output_channel(s, sc.variant, protocol::World::real, bob);
    const double d = calc::cq_trace_distance(channel, reference);
    const bool ok = d <= security::kBlindnessTol;
    rep["correctness"] = Json{{"reference_distance", d}, {"tolerance", security::kBlindnessTol}, {"passed", ok}};
    if (!ok) code = kViolation;
  }
  if (c.timing) rep["timing"] = Json{{"seconds", seconds_since(t0)}};
  emit(rep, c.report);
  return code;
}

// ---- blindness --------------------------------------------------------------

int cmd_blindness(const std::string& path, const Common& c, bool exhaustive, std::optional<std::uint64_t> shots,
                  bool no_randomness, std::optional<std::size_t> joint_cap) {
  const auto t0 = Clock::now();
  io::Scenario sc = load(path, c);
  security::ViewOptions opt = sc.enumeration;
  if (shots) {
    opt.exhaustive = false;
    opt.shots = *shots;
  }
  if (exhaustive) opt.exhaustive = true;
  if (joint_cap) opt.joint_cap = *joint_cap;
  opt.zero_secrets = no_randomness;
  const protocol::Setup s = io::make_setup(sc);
  const auto bob = protocol::bob_by_name(sc.bob, sc.master_seed);
  const auto rep = security::check_blindness(s, sc.variant, bob, opt);
  Json j = io::blindness_report(rep);
  j["scenario"] = sc.name;
  if (c.timing) j["timing"] = Json{{"seconds", seconds_since(t0)}};
  emit(j, c.report);
  std::fprintf(stderr, "classical_tvd %.3g  quantum_trace_distance %.3g  %s\n", rep.distance.classical_tvd,
               rep.distance.quantum_trace_distance, rep.passed ? "pass" : "FAIL");
  return rep.passed ? kPass : kViolation;
}

// ---- lazy-stats -------------------------------------------------------------

TotalOrder order_for(const io::GraphFile& gf, const Flow& fl) {
  if (!gf.order) return linearize(fl);
  if (!is_permutation_of(*gf.order, gf.graph.vertices) || !respects_flow(gf.graph, fl, *gf.order)) {
    throw ValidationError("total_order does not respect the flow");
  }
  return *gf.order;
}

int cmd_lazy_stats(const std::string& path, int batch, int max_nodes, std::uint64_t seed, const std::string& report) {
  Json out;
  bool holds = true;
  if (!path.empty()) {
    const io::GraphFile gf = io::load_graph(path);
    const auto fl = find_flow(gf.graph);
    if (!fl) throw InvalidConnection("graph has no flow");
    const Json r = io::lazy_report(gf.graph, order_for(gf, *fl));
    std::printf("%-6s %-14s %5s %6s\n", "node", "prepared", "live", "after");
    for (const auto& s : r["steps"]) {
      std::string prep;
      for (const auto& v : s["prepared"]) prep += (prep.empty() ? "" : ",") + std::to_string(v.get<int>());
      std::printf("%-6d %-14s %5d %6d\n", s["node"].get<int>(), prep.empty() ? "-" : prep.c_str(), s["live"].get<int>(),
                  s["live_after"].get<int>());
    }
    const bool ok = r["bound_holds"].get<bool>();
    std::printf("peak %d, |O|+1 = %d, bound %s\n", r["peak"].get<int>(), r["bound"].get<int>(), ok ? "holds" : "VIOLATED");
    holds = ok;
    out["graph"] = r;
  }
  if (batch > 0) {
    std::mt19937_64 rng(seed);
    Json rows = Json::array();
    int violations = 0;
    std::printf("%4s %3s %3s %6s %6s %6s\n", "#", "n", "|O|", "canon", "random", "bound");
    for (int i = 0; i < batch; ++i) {
      const OpenGraph g = random_flow_graph(rng, max_nodes);
      const Flow fl = *find_flow(g);
      const Json canon = io::lazy_report(g, linearize(fl));
      const Json random = io::lazy_report(g, random_flow_order(rng, g, fl));
      const bool ok = canon["bound_holds"].get<bool>() && random["bound_holds"].get<bool>();
      violations += !ok;
      std::printf("%4d %3zu %3zu %6d %6d %6d%s\n", i, g.vertices.size(), g.outputs.size(), canon["peak"].get<int>(),
                  random["peak"].get<int>(), canon["bound"].get<int>(), ok ? "" : "  VIOLATION");
      Json row{{"graph", io::to_json(g)}, {"canonical", canon}, {"random_order", random}, {"bound_holds", ok}};
      rows.push_back(std::move(row));
    }
    std::printf("bound violated on %d of %d graphs\n", violations, batch);
    out["batch"] = Json{{"seed", seed}, {"max_nodes", max_nodes}, {"graphs", rows}, {"violations", violations}};
    holds = holds && violations == 0;
  }
  if (!report.empty()) io::write_json(report, out);
  return holds ? kPass : kViolation;
}

// ---- verify-flow / join -----------------------------------------------------

int cmd_verify_flow(const std::string& path, const std::string& report) {
  const io::GraphFile gf = io::load_graph(path);
  Json out;
  bool ok = false;
  if (gf.flow) {
    ok = verify_flow(gf.graph, *gf.flow);
    out["checked"] = "given";
    out["flow"] = io::to_json(*gf.flow);
  } else {
    const auto fl = find_flow(gf.graph);
    ok = fl.has_value();
    out["checked"] = "found";
    if (fl) {
      out["flow"] = io::to_json(*fl);
      out["total_order"] = linearize(*fl);
    }
  }
  out["has_flow"] = ok;
  emit(out, report);
  return ok ? kPass : kViolation;
}

int cmd_join(const std::string& path, const std::string& report) {
  const auto req = io::join_request_from_json(io::read_json(path));
  const auto pre = protocol::pre_protocol(req.alice, req.oscar, req.connection, req.b, req.io_mode);
  io::GraphFile gf{pre.graph, pre.order, pre.flow, req.b};
  emit(io::graph_file_json(gf), report);
  return kPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Blind oracular quantum computation simulator"};
  app.require_subcommand(1);

  std::string path;
  Common common;

  auto* run = app.add_subcommand("run", "run one protocol execution and write its report");
  run->add_option("scenario", path, "scenario JSON")->required();
  bool run_exhaustive = false;
  run->add_flag("--exhaustive", run_exhaustive, "also compare the full output channel with the reference pattern");
  add_common(run, common);

  auto* blind = app.add_subcommand("blindness", "compare Bob's view in the real and the simulated world");
  blind->add_option("scenario", path, "scenario JSON")->required();
  bool blind_exhaustive = false, no_randomness = false;
  std::optional<std::uint64_t> shots;
  std::optional<std::size_t> joint_cap;
  blind->add_flag("--exhaustive", blind_exhaustive, "enumerate every key, pad and outcome");
  blind->add_option("--shots", shots, "sampled mode with this many runs per world");
  blind->add_flag("--no-randomness", no_randomness, "clients skip keys and pads (negative control)");
  blind->add_option("--joint-cap", joint_cap, "largest snapshot kept as a joint state");
  add_common(blind, common);

  auto* lazy = app.add_subcommand("lazy-stats", "live-qubit counts of the just-in-time schedule");
  lazy->add_option("graph", path, "graph JSON");
  int batch = 0, max_nodes = 12;
  std::uint64_t lazy_seed = 1;
  std::string lazy_report;
  lazy->add_option("--random", batch, "also survey this many random flow graphs");
  lazy->add_option("--max-nodes", max_nodes, "node cap for the random graphs")->check(CLI::Range(2, 20));
  lazy->add_option("--seed", lazy_seed, "seed for the random graphs");
  lazy->add_option("--report", lazy_report, "write the JSON report here");

  auto* verify = app.add_subcommand("verify-flow", "check the graph's flow, or search for one");
  verify->add_option("graph", path, "graph JSON")->required();
  std::string verify_report;
  verify->add_option("--report", verify_report, "write the JSON report here instead of stdout");

  auto* join = app.add_subcommand("join", "join Alice's and Oscar's drafts and fix flow and order");
  join->add_option("request", path, "join request JSON")->required();
  std::string join_report;
  join->add_option("--report", join_report, "write the joined graph here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kValidation;
  }

  try {
    if (*run) return cmd_run(path, common, run_exhaustive);
    if (*blind) return cmd_blindness(path, common, blind_exhaustive, shots, no_randomness, joint_cap);
    if (*lazy) {
      if (path.empty() && batch == 0) throw ValidationError("give a graph file, --random N, or both");
      return cmd_lazy_stats(path, batch, max_nodes, lazy_seed, lazy_report);
    }
    if (*verify) return cmd_verify_flow(path, verify_report);
    if (*join) return cmd_join(path, join_report);
  } catch (const SizeError& e) {
    std::cerr << "size error: " << e.what() << '\n';
    return kSize;
  } catch (const ValidationError& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kValidation;
  } catch (const qsim::AllocationError& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kValidation;
  } catch (const protocol::ProtocolViolation& e) {
    std::cerr << "protocol violation: " << e.what() << '\n';
    return kViolation;
  } catch (const security::StructuralMismatch& e) {
    std::cerr << "view mismatch: " << e.what() << '\n';
    return kViolation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kValidation;
  }
  return kValidation;
}
