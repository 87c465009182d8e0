#pragma once

#include <optional>
#include <string>
#include <vector>

#include "uncover/order.hpp"

namespace uncover {

struct Successor {
    Hypergraph graph;
    std::string rule;       ///< name of the applied rule
    PartialMorphism match;  ///< L → parent graph
    std::string description;
};

/// Results of all applicable (conflict-free, NAC-respecting) rule matches,
/// one per isomorphism class, in rule and match order.
std::vector<Successor> successors(const Hypergraph& g, const std::vector<Rule>& rules);

struct ExploreBounds {
    std::size_t max_depth = 6;
    std::size_t max_states = 20000;
    std::size_t max_nodes = 8;
    std::size_t max_edges = 12;
};

struct WitnessStep {
    std::string rule;
    PartialMorphism match; ///< relative to the previous graph of the witness
    std::string description;
    std::string result_key;
    Hypergraph result;
};

struct Witness {
    Hypergraph start;
    Hypergraph end;
    std::vector<WitnessStep> steps;
};

struct ForwardOutcome {
    std::optional<Witness> witness; ///< empty means NotWithinBounds
    std::size_t explored = 0;
};

/// Breadth-first search from g0 for a graph above some element of f.
ForwardOutcome coverable_bounded(const Hypergraph& g0, const std::vector<Hypergraph>& f, OrderKind order,
                                 const std::vector<Rule>& rules, const ExploreBounds& bounds);

/// Re-applies the witness steps from its start graph. Throws on a step that
/// does not apply; returns the final graph.
Hypergraph replay(const Witness& witness, const std::vector<Rule>& rules);

} // namespace uncover
