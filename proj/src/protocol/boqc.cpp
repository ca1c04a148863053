#include "boqc/protocol/runs.hpp"

namespace boqc::protocol {

RunResult run_boqc(const Setup& s, const BobBehavior& bob, const Seeds& seeds) {
  return run_protocol(s, Variant::boqc, World::real, bob, seeds);
}

RunResult run_boqco(const Setup& s, const BobBehavior& bob, const Seeds& seeds) {
  return run_protocol(s, Variant::boqco, World::real, bob, seeds);
}

}  // namespace boqc::protocol
