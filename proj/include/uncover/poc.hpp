#pragma once

#include <optional>
#include <vector>

#include "uncover/order.hpp"

namespace uncover {

struct PocRequest {
    const Rule& rule;
    const PartialMorphism& comatch; ///< R → S, total
    OrderKind order = OrderKind::Subgraph;
    int variant = 2;
    RestrictionSpec restriction = AllGraphs{};
};

struct Complement {
    Hypergraph graph;
    PartialMorphism match;  ///< L → G, total and conflict-free
    PartialMorphism corule; ///< G ⇀ S
};

struct PocResult {
    std::vector<Complement> complements;
};

/// Checks that applying the rule at `match` reproduces S, with an isomorphism
/// that commutes with the comatch. Returns the induced G ⇀ S on success.
std::optional<PartialMorphism> verify_complement(const Rule& rule, const PartialMorphism& comatch,
                                                 const PartialMorphism& match);

/// Minimal pushout complements of the rule span along the comatch.
/// The induced order requires variant 1 with a path-and-multiplicity bound;
/// otherwise the set of minimal complements need not be finite.
PocResult minimal_pushout_complements(const PocRequest& req);

struct BruteComplement {
    Hypergraph graph;
    PartialMorphism match;
};

/// Every complement with at most the given numbers of nodes and edges, found
/// by enumerating graphs and matches. Neither restrictions nor NACs are applied.
/// Throws BudgetTooLarge when the graph universe would be unreasonably big.
std::vector<BruteComplement> brute_force_pushout_complements(const Rule& rule, const PartialMorphism& comatch,
                                                             std::size_t node_budget, std::size_t edge_budget);

/// All graphs over the signature within the budgets, one per isomorphism class.
const std::vector<Hypergraph>& graph_universe(const SignaturePtr& sig, std::size_t node_budget,
                                              std::size_t edge_budget);

} // namespace uncover
