#pragma once

#include <string>
#include <vector>

#include "uncover/hypergraph.hpp"

namespace uncover {

/// Canonical labelling of a graph: the position of every node and edge in the
/// canonical order, plus the byte encoding of the relabelled graph.
/// Two graphs have equal keys iff they are isomorphic. Keys are not stable
/// across versions of this library.
struct CanonicalLabelling {
    std::string key;
    std::vector<NodeId> node_position;
    std::vector<EdgeId> edge_position;
};

CanonicalLabelling canonical_labelling(const Hypergraph& g);

std::string canonical_key(const Hypergraph& g);

/// `g` with nodes and edges renumbered into canonical order. Isomorphic inputs
/// give identical (operator==) outputs.
Hypergraph canonical_form(const Hypergraph& g);

/// Throws SignatureMismatch when the graphs use different label sets.
bool isomorphic(const Hypergraph& a, const Hypergraph& b);

} // namespace uncover
