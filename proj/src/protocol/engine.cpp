#include <algorithm>
#include <cmath>

#include "../common/overloaded.hpp"
#include "boqc/protocol/engine.hpp"

namespace boqc::protocol {

using detail::overloaded;

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

void put_index(std::string& rec, char tag, std::size_t v) {
  rec.push_back(tag);
  rec.push_back(static_cast<char>(v & 0xff));
  rec.push_back(static_cast<char>((v >> 8) & 0xff));
}

void put_bit(std::string& rec, char tag, std::size_t v, int bit) {
  put_index(rec, tag, v);
  rec.push_back(static_cast<char>(bit));
}

void put_angle(std::string& rec, std::size_t v, std::int64_t k) {
  put_index(rec, 'd', v);
  for (int byte = 0; byte < 4; ++byte) rec.push_back(static_cast<char>((k >> (8 * byte)) & 0xff));
}

Endpoint endpoint_of(Party p) {
  switch (p) {
    case Party::alice: return Endpoint::alice;
    case Party::oscar: return Endpoint::oscar;
    case Party::bob: return Endpoint::bob;
  }
  return Endpoint::bob;
}

}  // namespace

std::string to_string(Endpoint e) {
  switch (e) {
    case Endpoint::alice: return "alice";
    case Endpoint::oscar: return "oscar";
    case Endpoint::bob: return "bob";
    case Endpoint::key_channel: return "key-channel";
  }
  return "?";
}

std::string to_string(MessageKind k) {
  switch (k) {
    case MessageKind::key_share: return "key-share";
    case MessageKind::qubit: return "qubit";
    case MessageKind::angle: return "angle";
    case MessageKind::outcome: return "outcome";
    case MessageKind::output_qubit: return "output-qubit";
  }
  return "?";
}

BobTranscript bob_view(const Transcript& t, const PublicInfo& info) {
  BobTranscript out{info, {}};
  for (const Message& m : t.messages) {
    if (m.from == Endpoint::bob || m.to == Endpoint::bob) out.messages.push_back(m);
  }
  return out;
}

Holder RunState::holder_of(qsim::QubitLabel l) const {
  for (const auto& [label, h] : holders) {
    if (label == l) return h;
  }
  throw qsim::AllocationError("qubit " + std::to_string(l) + " has no holder");
}

std::vector<qsim::QubitLabel> RunState::held_by(Holder h) const {
  std::vector<qsim::QubitLabel> out;
  for (const auto& [label, who] : holders) {
    if (who == h) out.push_back(label);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::optional<DyadicAngle> BobMemory::delta(NodeId v) const {
  const std::int64_t k = st_.delta_k[prog_.index_of(v)];
  if (k < 0) return std::nullopt;
  return DyadicAngle(k, prog_.b);
}

std::optional<int> BobMemory::outcome(NodeId v) const {
  const int m = st_.raw[prog_.index_of(v)];
  if (m < 0) return std::nullopt;
  return m;
}

bool BobHands::owns(NodeId v, const char* op) {
  bool held = false;
  for (const auto& [label, h] : st_.holders) held = held || (label == v && h == Holder::bob);
  if (st_.recording) {
    st_.transcript.deviations.push_back(std::string("bob ") + op + " on " + std::to_string(v) +
                                        (held ? "" : " refused: qubit not held by bob"));
  }
  return held;
}

void BobHands::apply_x(NodeId v) {
  if (owns(v, "applied X")) st_.reg.apply_x(v);
}

void BobHands::apply_z(NodeId v) {
  if (owns(v, "applied Z")) st_.reg.apply_z(v);
}

void BobHands::apply_h(NodeId v) {
  if (owns(v, "applied H")) st_.reg.apply_h(v);
}

void BobHands::apply_rotation(NodeId v, const DyadicAngle& theta) {
  if (owns(v, "applied a Z rotation")) st_.reg.apply_z_rotation(v, theta);
}

void BobHands::apply_cz(NodeId a, NodeId b) {
  if (owns(a, "applied CZ") && owns(b, "applied CZ")) st_.reg.apply_cz(a, b);
}

ProtocolRun::ProtocolRun(std::shared_ptr<const Program> prog, std::shared_ptr<const BobBehavior> bob, bool recording)
    : prog_(std::move(prog)), bob_(std::move(bob)) {
  const std::size_t n = prog_->nodes.size();
  st_.reg = prog_->initial;
  for (qsim::QubitLabel l : st_.reg.labels()) {
    st_.holders.emplace_back(l, prog_->world == World::real ? Holder::alice : Holder::resource);
  }
  st_.alice.assign(n, ClientSlot{});
  st_.oscar.assign(n, ClientSlot{});
  for (std::size_t i = 0; i < n; ++i) {
    const NodeInfo& node = prog_->nodes[i];
    st_.alice[i].pad = st_.oscar[i].pad = DyadicAngle::zero(prog_->b);
    st_.alice[i].angle = st_.oscar[i].angle = DyadicAngle::zero(prog_->b);
    (node.owner == Party::alice ? st_.alice[i] : st_.oscar[i]).angle = node.angle;
  }
  st_.delta_k.assign(n, -1);
  st_.raw.assign(n, -1);
  st_.report_alice.assign(n, -1);
  st_.report_oscar.assign(n, -1);
  st_.sim_delta.assign(n, -1);
  st_.recording = recording;
}

void ProtocolRun::log(Endpoint from, Endpoint to, MessageKind kind, NodeId node, std::optional<DyadicAngle> angle,
                      std::optional<int> bit) {
  if (!st_.recording) return;
  Message m;
  m.seq = st_.transcript.messages.size();
  m.from = from;
  m.to = to;
  m.kind = kind;
  m.node = node;
  m.angle = angle;
  m.bit = bit;
  st_.transcript.messages.push_back(std::move(m));
}

void ProtocolRun::deviation(std::string what) {
  if (st_.recording) st_.transcript.deviations.push_back(std::move(what));
}

void ProtocolRun::give(qsim::QubitLabel l, Holder h) {
  for (auto& [label, who] : st_.holders) {
    if (label == l) {
      who = h;
      return;
    }
  }
  st_.holders.emplace_back(l, h);
}

void ProtocolRun::require_holder(qsim::QubitLabel l, Holder h, const char* what) const {
  if (st_.holder_of(l) != h) {
    throw ProtocolViolation(std::string(what) + ": qubit " + std::to_string(l) + " is held by another party");
  }
}

ClientSlot& ProtocolRun::owner_slot(std::size_t v) {
  return prog_->nodes[v].owner == Party::alice ? st_.alice[v] : st_.oscar[v];
}

DyadicAngle ProtocolRun::corrected_angle(std::size_t v, const std::vector<ClientSlot>& mem) const {
  const NodeInfo& node = prog_->nodes[v];
  auto signal = [&](std::size_t k) {
    if (mem[k].s < 0) {
      throw ProtocolViolation("angle of node " + std::to_string(node.id) + " needs the undecoded signal of node " +
                              std::to_string(prog_->nodes[k].id));
    }
    return mem[k].s;
  };
  const int sx = node.flow_parent ? signal(*node.flow_parent) : 0;
  int sz = 0;
  for (std::size_t k : node.z_deps) sz ^= signal(k);
  return correct_angle(mem[v].angle, sx, sz);
}

int ProtocolRun::t_parity(std::size_t v, const std::vector<ClientSlot>& mem) const {
  int t = 0;
  for (std::size_t k : prog_->nodes[v].input_neighbors) t ^= mem[k].t;
  return t;
}

void ProtocolRun::apply_t_updates(std::size_t v, int t) {
  if (!t) return;
  st_.alice[v].angle = -st_.alice[v].angle;
  for (std::size_t j : prog_->nodes[v].neighbors) {
    ClientSlot& slot = owner_slot(j);
    slot.angle = slot.angle.plus_pi(1);
  }
}

void ProtocolRun::bob_received(std::size_t v) {
  const NodeInfo& node = prog_->nodes[v];
  st_.bob_peak = std::max(st_.bob_peak, ++st_.bob_live);
  if (st_.keep_record) put_index(st_.record, 'q', v);
  if (st_.recording) {
    st_.transcript.capabilities.bob.insert("S1");
    if (node.quantum_input) st_.transcript.capabilities.bob.insert("S3");
  }
  if (bob_->on_receive) {
    BobHands hands(*prog_, st_);
    bob_->on_receive(node.id, hands);
  }
}

bool ProtocolRun::advance(Observer* obs) {
  if (st_.pending.kind != ChoiceKind::none) return true;
  while (st_.pc < prog_->steps.size()) {
    execute(prog_->steps[st_.pc], obs);
    if (st_.pending.kind != ChoiceKind::none) return true;
    ++st_.pc;
  }
  if (obs) obs->on_leaf(st_);
  return false;
}

void ProtocolRun::execute(const Step& s, Observer* obs) {
  const int b = prog_->b;
  auto id_of = [&](std::size_t v) { return prog_->nodes[v].id; };
  auto uniform = [&](ChoiceKind kind, std::size_t v, int options) {
    st_.pending = Pending{};
    st_.pending.kind = kind;
    st_.pending.v = v;
    st_.pending.options = options;
  };
  auto born = [&](ChoiceKind kind, std::size_t v, qsim::QubitLabel label, const qsim::Basis& basis) {
    st_.pending = Pending{};
    st_.pending.kind = kind;
    st_.pending.v = v;
    st_.pending.options = 2;
    st_.pending.basis = basis;
    st_.pending.label = label;
    st_.pending.p = st_.reg.probabilities(label, basis);
  };

  std::visit(
      overloaded{
          [&](const step::KeyShare&) {
            log(Endpoint::key_channel, Endpoint::alice, MessageKind::key_share, 0);
            log(Endpoint::key_channel, Endpoint::oscar, MessageKind::key_share, 0);
          },
          [&](const step::DrawKey& d) { uniform(ChoiceKind::key, d.v, 2); },
          [&](const step::DrawPad& d) {
            uniform(prog_->nodes[d.v].owner == Party::alice ? ChoiceKind::alice_pad : ChoiceKind::oscar_pad, d.v,
                    1 << b);
          },
          [&](const step::ClientSend& c) {
            const NodeInfo& node = prog_->nodes[c.v];
            ClientSlot& mine = owner_slot(c.v);
            const Holder owner = node.owner == Party::alice ? Holder::alice : Holder::oscar;
            auto& caps = node.owner == Party::alice ? st_.transcript.capabilities.alice
                                                    : st_.transcript.capabilities.oscar;
            if (node.quantum_input) {
              require_holder(node.id, Holder::alice, "one-time pad");
              st_.reg.apply_one_time_pad(node.id, mine.pad, st_.alice[c.v].t);
              apply_t_updates(c.v, st_.alice[c.v].t);
              if (st_.recording) caps.insert("C3");
            } else {
              st_.reg.alloc_plus(node.id, mine.pad.plus_pi(node.classical_bit));
              give(node.id, owner);
              if (st_.recording) caps.insert("C1");
            }
            give(node.id, Holder::bob);
            log(endpoint_of(node.owner), Endpoint::bob, MessageKind::qubit, node.id);
            bob_received(c.v);
          },
          [&](const step::BobPrepareOutput& c) {
            const NodeId id = id_of(c.v);
            st_.reg.alloc_plus(id, DyadicAngle::zero(b));
            give(id, Holder::bob);
            st_.bob_peak = std::max(st_.bob_peak, ++st_.bob_live);
            if (st_.recording) st_.transcript.capabilities.bob.insert("S2");
          },
          [&](const step::BobEntangle& e) {
            for (auto [x, y] : e.edges) {
              require_holder(id_of(x), Holder::bob, "entangle");
              require_holder(id_of(y), Holder::bob, "entangle");
              st_.reg.apply_cz(id_of(x), id_of(y));
            }
          },
          [&](const step::SendAngle& a) {
            const NodeInfo& node = prog_->nodes[a.v];
            DyadicAngle delta;
            if (prog_->world == World::real) {
              const ClientSlot& mine = owner_slot(a.v);
              const auto& mem = node.owner == Party::alice ? st_.alice : st_.oscar;
              delta = corrected_angle(a.v, mem).plus_pi(mine.r) + mine.pad;
            } else {
              delta = DyadicAngle(st_.sim_delta[a.v], b);
            }
            st_.delta_k[a.v] = delta.k();
            if (st_.keep_record) put_angle(st_.record, a.v, delta.k());
            log(endpoint_of(node.owner), Endpoint::bob, MessageKind::angle, node.id, delta);
            if (obs) obs->on_angle(st_, node.id, delta);
          },
          [&](const step::SimDrawDelta& d) { uniform(ChoiceKind::simulator, d.v, 1 << b); },
          [&](const step::BobMeasure& m) {
            const NodeId id = id_of(m.v);
            require_holder(id, Holder::bob, "measure");
            const DyadicAngle delta(st_.delta_k[m.v], b);
            DyadicAngle angle = delta;
            if (bob_->angle) angle = bob_->angle(id, delta, BobMemory(*prog_, st_));
            if (angle != delta) {
              deviation("bob measured " + std::to_string(id) + " at " + angle.to_string() + " instead of " +
                        delta.to_string());
            }
            born(ChoiceKind::bob_outcome, m.v, id, qsim::Basis::equatorial(angle.radians()));
          },
          [&](const step::BobReport& r) {
            const NodeInfo& node = prog_->nodes[r.v];
            const int raw = st_.raw[r.v];
            Reports rep{raw, raw};
            if (bob_->report) rep = bob_->report(node.id, raw, BobMemory(*prog_, st_));
            rep.to_alice &= 1;
            rep.to_oscar &= 1;
            st_.report_alice[r.v] = rep.to_alice;
            st_.report_oscar[r.v] = rep.to_oscar;
            if (st_.keep_record) {
              put_bit(st_.record, 'a', r.v, rep.to_alice);
              put_bit(st_.record, 'o', r.v, rep.to_oscar);
            }
            if (rep.to_alice != raw || rep.to_oscar != raw) {
              deviation("bob reported " + std::to_string(rep.to_alice) + "/" + std::to_string(rep.to_oscar) +
                        " for node " + std::to_string(node.id) + " after measuring " + std::to_string(raw));
            }
            log(Endpoint::bob, Endpoint::alice, MessageKind::outcome, node.id, std::nullopt, rep.to_alice);
            log(Endpoint::bob, Endpoint::oscar, MessageKind::outcome, node.id, std::nullopt, rep.to_oscar);
          },
          [&](const step::ClientsDecode& d) {
            st_.alice[d.v].s = st_.report_alice[d.v] ^ st_.alice[d.v].r;
            st_.oscar[d.v].s = st_.report_oscar[d.v] ^ st_.oscar[d.v].r;
            ClientSlot& mine = owner_slot(d.v);
            mine.pad = DyadicAngle::zero(b);
            mine.has_pad = false;
            st_.alice[d.v].r = st_.oscar[d.v].r = -1;
          },
          [&](const step::SimEprHalf& e) {
            const NodeInfo& node = prog_->nodes[e.v];
            const qsim::QubitLabel partner = kPartnerBase + node.id;
            st_.reg.append_state({node.id, partner}, {kInvSqrt2, 0.0, 0.0, kInvSqrt2});
            give(partner, Holder::resource);
            give(node.id, Holder::bob);
            log(endpoint_of(node.owner), Endpoint::bob, MessageKind::qubit, node.id);
            bob_received(e.v);
          },
          [&](const step::ResourceTeleportInput& t) {
            const NodeId id = id_of(t.v);
            st_.reg.apply_cnot(kAliceInputBase + id, kPartnerBase + id);
            born(ChoiceKind::resource_outcome, t.v, kPartnerBase + id, qsim::Basis::computational());
          },
          [&](const step::ResourceMeasure& r) {
            const NodeInfo& node = prog_->nodes[r.v];
            const auto& mem = node.owner == Party::alice ? st_.alice : st_.oscar;
            const DyadicAngle delta(st_.sim_delta[r.v], b);
            const DyadicAngle diff = delta - corrected_angle(r.v, mem);
            DyadicAngle theta;
            qsim::QubitLabel target = kPartnerBase + node.id;
            if (node.quantum_input) {
              theta = prog_->unsigned_teleport_angle ? diff : diff.signed_by(st_.alice[r.v].t);
              target = kAliceInputBase + node.id;
            } else {
              theta = diff.plus_pi(node.classical_bit);
            }
            // H Z(theta) then a computational measurement projects onto |+_{-theta}> / |-_{-theta}>
            born(ChoiceKind::resource_outcome, r.v, target, qsim::Basis::equatorial((-theta).radians()));
          },
          [&](const step::ReturnOutput& o) {
            const NodeInfo& node = prog_->nodes[o.v];
            if (bob_->before_return) {
              BobHands hands(*prog_, st_);
              bob_->before_return(node.id, hands);
            }
            require_holder(node.id, Holder::bob, "return output");
            give(node.id, prog_->world == World::real ? Holder::alice : Holder::resource);
            --st_.bob_live;
            if (st_.keep_record) put_index(st_.record, 'r', o.v);
            log(Endpoint::bob, Endpoint::alice, MessageKind::output_qubit, node.id);
            if (st_.recording) {
              st_.transcript.capabilities.bob.insert("S2");
              if (prog_->world == World::real) st_.transcript.capabilities.alice.insert("C2");
            }
            const auto& mem = st_.alice;
            const int sx = (node.flow_parent ? mem[*node.flow_parent].s : 0) ^ mem[o.v].t;
            int sz = t_parity(o.v, mem);
            for (std::size_t k : node.z_deps) sz ^= mem[k].s;
            st_.reg.apply_correction(node.id, sx, sz);
          },
          [&](const step::Snapshot& snap) {
            if (!obs) return;
            if (snap.received) {
              obs->on_snapshot(st_, snap, {static_cast<qsim::QubitLabel>(id_of(*snap.received))});
            } else {
              obs->on_snapshot(st_, snap, st_.held_by(Holder::bob));
            }
          },
      },
      s);
}

void ProtocolRun::choose(int option, bool certain) {
  Pending& p = st_.pending;
  if (p.kind == ChoiceKind::none) throw std::logic_error("no choice is pending");
  if (option < 0 || option >= p.options) throw std::out_of_range("choice out of range");
  const std::size_t v = p.v;
  const int b = prog_->b;
  const NodeInfo& node = prog_->nodes[v];
  switch (p.kind) {
    case ChoiceKind::key: {
      const bool is_t = std::get<step::DrawKey>(prog_->steps[st_.pc]).is_t;
      if (is_t) {
        st_.alice[v].t = st_.oscar[v].t = option;
        if (st_.recording) st_.transcript.keys.t[node.id] = option;
      } else {
        st_.alice[v].r = st_.oscar[v].r = option;
        if (st_.recording) st_.transcript.keys.r[node.id] = option;
      }
      break;
    }
    case ChoiceKind::alice_pad:
    case ChoiceKind::oscar_pad: {
      ClientSlot& mine = owner_slot(v);
      mine.pad = DyadicAngle(option, b);
      mine.has_pad = true;
      break;
    }
    case ChoiceKind::simulator: st_.sim_delta[v] = option; break;
    case ChoiceKind::bob_outcome: {
      st_.reg.collapse(p.label, p.basis, option);
      st_.raw[v] = option;
      st_.holders.erase(std::find_if(st_.holders.begin(), st_.holders.end(),
                                     [&](const auto& h) { return h.first == p.label; }));
      --st_.bob_live;
      if (st_.keep_record) put_bit(st_.record, 'm', v, option);
      break;
    }
    case ChoiceKind::resource_outcome: {
      st_.reg.collapse(p.label, p.basis, option);
      st_.holders.erase(std::find_if(st_.holders.begin(), st_.holders.end(),
                                     [&](const auto& h) { return h.first == p.label; }));
      if (std::holds_alternative<step::ResourceTeleportInput>(prog_->steps[st_.pc])) {
        st_.alice[v].t = st_.oscar[v].t = option;
        apply_t_updates(v, option);
      } else {
        st_.alice[v].r = st_.oscar[v].r = option;
        st_.alice[v].s = st_.report_alice[v] ^ option;
        st_.oscar[v].s = st_.report_oscar[v] ^ option;
      }
      break;
    }
    case ChoiceKind::none: break;
  }
  if (!certain) st_.weight *= p.secret() ? 1.0 / p.options : p.p[static_cast<std::size_t>(option)];
  p = Pending{};
  ++st_.pc;
}

}  // namespace boqc::protocol
