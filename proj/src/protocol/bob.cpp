#include "boqc/protocol/engine.hpp"

namespace boqc::protocol {

namespace {

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

BobBehavior bob_honest() { return BobBehavior{}; }

BobBehavior bob_constant_report(int bit) {
  BobBehavior b;
  b.name = "constant-report-" + std::to_string(bit & 1);
  b.report = [bit](NodeId, int, const BobMemory&) { return Reports{bit & 1, bit & 1}; };
  return b;
}

BobBehavior bob_angle_offset(std::int64_t steps) {
  BobBehavior b;
  b.name = "angle-offset-" + std::to_string(steps);
  b.angle = [steps](NodeId, const DyadicAngle& delta, const BobMemory&) {
    const std::int64_t m = delta.modulus();
    return DyadicAngle(((delta.k() + steps) % m + m) % m, delta.b());
  };
  return b;
}

BobBehavior bob_angle_offset_pi() {
  BobBehavior b;
  b.name = "angle-offset-pi";
  b.angle = [](NodeId, const DyadicAngle& delta, const BobMemory&) { return delta.plus_pi(1); };
  return b;
}

BobBehavior bob_random_report(std::uint64_t seed) {
  BobBehavior b;
  b.name = "random-report";
  // a fixed function of (seed, node) so that enumeration stays deterministic
  b.report = [seed](NodeId v, int, const BobMemory&) {
    const int bit = static_cast<int>(splitmix(splitmix(seed) ^ v) & 1);
    return Reports{bit, bit};
  };
  return b;
}

BobBehavior bob_split_report() {
  BobBehavior b;
  b.name = "split-report";
  b.report = [](NodeId, int raw, const BobMemory&) { return Reports{raw, raw ^ 1}; };
  return b;
}

BobBehavior bob_custom(std::string name, std::function<DyadicAngle(NodeId, const DyadicAngle&, const BobMemory&)> angle,
                       std::function<Reports(NodeId, int, const BobMemory&)> report,
                       std::function<void(NodeId, BobHands&)> on_receive,
                       std::function<void(NodeId, BobHands&)> before_return) {
  BobBehavior b;
  b.name = std::move(name);
  b.stateless = false;
  b.angle = std::move(angle);
  b.report = std::move(report);
  b.on_receive = std::move(on_receive);
  b.before_return = std::move(before_return);
  return b;
}

BobBehavior bob_by_name(const std::string& name, std::uint64_t seed) {
  if (name == "honest") return bob_honest();
  if (name == "constant-report" || name == "constant-report-0") return bob_constant_report(0);
  if (name == "constant-report-1") return bob_constant_report(1);
  if (name == "angle-offset") return bob_angle_offset(1);
  if (name == "angle-offset-pi") return bob_angle_offset_pi();
  if (name == "random-report") return bob_random_report(seed);
  if (name == "split-report") return bob_split_report();
  throw ValidationError("unknown bob behaviour '" + name +
                        "' (expected honest, constant-report, constant-report-1, angle-offset, angle-offset-pi, "
                        "random-report or split-report)");
}

}  // namespace boqc::protocol
