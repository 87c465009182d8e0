#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "uncover/morphism.hpp"

namespace uncover {

enum class OrderKind {
    Subgraph,
    InducedSubgraph,
    Minor, // accepted by the parser, rejected by every operation
};

std::string_view to_string(OrderKind order);
std::optional<OrderKind> parse_order(std::string_view text);

/// Throws UnsupportedOrder for Minor and NotDirectedGraph when the induced
/// order meets an edge of arity other than 2.
void require_supported(OrderKind order, const Hypergraph& g);

/// Embedding g1 → g2 witnessing g1 ⊑ g2 (edge-closed image for the induced order).
std::optional<PartialMorphism> order_embedding(const Hypergraph& g1, const Hypergraph& g2, OrderKind order);
bool leq(const Hypergraph& g1, const Hypergraph& g2, OrderKind order);

/// Whether a (valid) partial morphism belongs to the class representing `order`.
bool order_morphism_check(const PartialMorphism& m, OrderKind order);

struct SmallerGraph {
    Hypergraph graph;
    PartialMorphism mu; ///< r ⇀ graph, identity on kept elements
};

/// Every order morphism out of r (one per kept element subset), unreduced.
std::vector<SmallerGraph> enumerate_order_morphisms(const Hypergraph& r, OrderKind order);

/// One representative per isomorphism class of graphs below r, in canonical-key order.
std::vector<SmallerGraph> enumerate_smaller(const Hypergraph& r, OrderKind order);

/// Indices of the minimal elements, one per isomorphism class, ordered by
/// (node count, edge count, canonical key).
std::vector<std::size_t> minimal_indices(const std::vector<Hypergraph>& ws, OrderKind order);

/// Minimal elements in canonical form.
std::vector<Hypergraph> minimize(const std::vector<Hypergraph>& ws, OrderKind order);

bool upward_member(const Hypergraph& g, const std::vector<Hypergraph>& basis, OrderKind order);

} // namespace uncover
