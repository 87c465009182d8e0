#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "uncover/error.hpp"

namespace uncover {

using LabelId = std::uint32_t;
using NodeId = std::uint32_t;
using EdgeId = std::uint32_t;

/// Finite set of edge labels, each with a fixed arity.
class Signature {
public:
    LabelId add(std::string name, unsigned arity);

    std::optional<LabelId> find(std::string_view name) const;
    const std::string& name(LabelId label) const { return names_.at(label); }
    unsigned arity(LabelId label) const { return arities_.at(label); }
    std::size_t size() const noexcept { return names_.size(); }
    bool contains(LabelId label) const noexcept { return label < names_.size(); }

    /// True iff every label has arity 2.
    bool all_binary() const;

    bool operator==(const Signature&) const = default;

private:
    std::vector<std::string> names_;
    std::vector<unsigned> arities_;
};

using SignaturePtr = std::shared_ptr<const Signature>;

bool same_signature(const SignaturePtr& a, const SignaturePtr& b);

struct Edge {
    LabelId label = 0;
    std::vector<NodeId> conn;

    bool operator==(const Edge&) const = default;
};

/// A finite edge-labelled hypergraph. Nodes are the dense range [0, node_count()),
/// edges are indexed in insertion order. Construction does not enforce the
/// arity or endpoint invariants; use validate() for that.
class Hypergraph {
public:
    Hypergraph() = default;
    explicit Hypergraph(SignaturePtr signature, std::size_t nodes = 0)
        : signature_(std::move(signature)), node_count_(nodes) {}

    NodeId add_node() { return static_cast<NodeId>(node_count_++); }
    EdgeId add_edge(LabelId label, std::vector<NodeId> conn);

    std::size_t node_count() const noexcept { return node_count_; }
    std::size_t edge_count() const noexcept { return edges_.size(); }
    bool empty() const noexcept { return node_count_ == 0 && edges_.empty(); }

    const Edge& edge(EdgeId e) const { return edges_.at(e); }
    const std::vector<Edge>& edges() const noexcept { return edges_; }
    const SignaturePtr& signature() const noexcept { return signature_; }

    /// Edges with `v` somewhere in their connection sequence.
    std::vector<EdgeId> incident_edges(NodeId v) const;
    bool is_isolated(NodeId v) const;

    /// Structural identity (same indices, same edges), not isomorphism.
    bool operator==(const Hypergraph& other) const;

private:
    SignaturePtr signature_;
    std::size_t node_count_ = 0;
    std::vector<Edge> edges_;
};

/// Restriction of `g` to kept elements. Edges whose endpoints are not all kept
/// are dropped regardless of `keep_edges`. The maps send old indices to new
/// ones (-1 for removed elements).
struct SubgraphView {
    Hypergraph graph;
    std::vector<int> node_map;
    std::vector<int> edge_map;
};

SubgraphView restrict_to(const Hypergraph& g, const std::vector<bool>& keep_nodes,
                         const std::vector<bool>& keep_edges);

/// Returns the first violated invariant, or nothing when `g` is well formed.
std::optional<Error> validate(const Hypergraph& g);
void validate_or_throw(const Hypergraph& g);

/// Length (in edges) of the longest elementary undirected path.
std::size_t longest_undirected_path(const Hypergraph& g);

/// True iff some elementary undirected path has more than `bound` edges.
/// Stops as soon as one is found.
bool has_path_longer_than(const Hypergraph& g, std::size_t bound);

/// Maximum number of edges sharing one label and one connection sequence.
/// Throws NotDirectedGraph unless every edge has arity 2.
std::size_t max_parallel_multiplicity(const Hypergraph& g);

bool is_directed_graph(const Hypergraph& g);

struct AllGraphs {
    bool operator==(const AllGraphs&) const = default;
};
struct PathBound {
    std::size_t k = 1;
    bool operator==(const PathBound&) const = default;
};
struct PathAndMultBound {
    std::size_t n = 0;
    std::size_t k = 1;
    bool operator==(const PathAndMultBound&) const = default;
};

/// The downward-closed set of graphs the analysis is confined to.
using RestrictionSpec = std::variant<AllGraphs, PathBound, PathAndMultBound>;

bool in_restriction(const Hypergraph& g, const RestrictionSpec& q);
std::string describe(const RestrictionSpec& q);

} // namespace uncover
