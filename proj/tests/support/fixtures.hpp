#pragma once

#include <random>

#include "boqc/graph.hpp"
#include "boqc/protocol/setup.hpp"

namespace boqc::testing {

// 2-qubit Grover: Alice {1,2,3,4}, oracle {5,6,7,8}, connection {(7,2),(8,1)}
OpenGraph grover_graph();
AliceDraft grover_alice();
OscarDraft grover_oscar();

// lazy scheduling example on seven nodes
OpenGraph lazy_graph();

// 1 - 2 - 3 with I = {1}, O = {3}
OpenGraph path_graph();

// Complete client inputs for `g` in the given io mode: random angles on every measured node,
// random classical bits, and a random quantum input entangled with reference qubits 1000, 1001, ...
protocol::Setup random_setup(std::mt19937_64& rng, const OpenGraph& g, protocol::IoMode mode, int b);

// Grover graph with its drafts joined through the pre-protocol
protocol::Setup grover_setup(std::mt19937_64& rng, protocol::IoMode mode, int b);

}  // namespace boqc::testing
