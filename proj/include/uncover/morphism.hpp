#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "uncover/hypergraph.hpp"

namespace uncover {

inline constexpr int kUndefined = -1;

/// A partial hypergraph morphism. `node_map[v]` / `edge_map[e]` hold the image
/// index in the target, or kUndefined.
struct PartialMorphism {
    Hypergraph source;
    Hypergraph target;
    std::vector<int> node_map;
    std::vector<int> edge_map;

    /// Everywhere-undefined morphism between the two graphs.
    static PartialMorphism undefined_between(Hypergraph source, Hypergraph target);
    static PartialMorphism identity(const Hypergraph& g);

    bool is_total() const;
    bool defined_node(NodeId v) const { return node_map.at(v) != kUndefined; }
    bool defined_edge(EdgeId e) const { return edge_map.at(e) != kUndefined; }
};

std::optional<Error> check_morphism(const PartialMorphism& m);

/// g ∘ f. Throws TypeMismatch unless f.target == g.source.
PartialMorphism compose(const PartialMorphism& f, const PartialMorphism& g);

/// Negative application condition: `pattern` extends the rule's left-hand side
/// by edges between existing nodes only; `embedding` is the inclusion.
struct Nac {
    Hypergraph pattern;
    PartialMorphism embedding;
};

class Rule {
public:
    Rule() = default;
    Rule(std::string name, PartialMorphism span, std::vector<Nac> nacs = {},
         std::optional<PartialMorphism> origin = std::nullopt);

    const std::string& name() const noexcept { return name_; }
    const Hypergraph& lhs() const noexcept { return span_.source; }
    const Hypergraph& rhs() const noexcept { return span_.target; }
    const PartialMorphism& span() const noexcept { return span_; }
    const std::vector<Nac>& nacs() const noexcept { return nacs_; }
    /// The user's rule this one was derived from (same lhs). Matches must be
    /// conflict-free for it too, or they would not exist in a forward run.
    const PartialMorphism& origin() const noexcept { return origin_ ? *origin_ : span_; }
    bool derived() const noexcept { return origin_.has_value(); }

private:
    std::string name_;
    PartialMorphism span_;
    std::vector<Nac> nacs_;
    std::optional<PartialMorphism> origin_;
};

/// Options for the backtracking morphism search.
struct SearchOptions {
    bool injective = false;
    /// Every host edge whose endpoints all lie in the image must have a preimage.
    bool edge_closed = false;
};

using MorphismVisitor = std::function<bool(const std::vector<int>& nodes, const std::vector<int>& edges)>;

/// Enumerates total morphisms pattern → host, edges first, then the remaining
/// nodes. `fixed_nodes` / `fixed_edges` (possibly empty) pin images in advance.
/// The visitor returns false to stop the search.
void search_morphisms(const Hypergraph& pattern, const Hypergraph& host, const SearchOptions& options,
                      std::span<const int> fixed_nodes, std::span<const int> fixed_edges,
                      const MorphismVisitor& visit);

bool is_conflict_free(const PartialMorphism& match, const PartialMorphism& span);

/// All total morphisms l → g, optionally only those conflict-free w.r.t. the rule.
std::vector<PartialMorphism> enumerate_matches(const Hypergraph& l, const Hypergraph& g,
                                               const Rule* conflict_free_wrt = nullptr);

/// Index of the first NAC the match violates (the match extends to its pattern).
std::optional<std::size_t> violated_nac(const Rule& rule, const PartialMorphism& match);

/// A total bijective morphism a → b extending the pinned images, if any.
std::optional<PartialMorphism> find_isomorphism(const Hypergraph& a, const Hypergraph& b,
                                                std::span<const int> fixed_nodes = {},
                                                std::span<const int> fixed_edges = {});

struct Pushout {
    Hypergraph graph;
    PartialMorphism from_first;  ///< G1 ⇀ G3
    PartialMorphism from_second; ///< G2 ⇀ G3
};

/// Pushout of f: G0 ⇀ G1 and g: G0 ⇀ G2 by gluing along G0 and dropping
/// every class that contains a partially mapped element.
Pushout pushout(const PartialMorphism& f, const PartialMorphism& g);

struct RuleApplication {
    Hypergraph result;
    PartialMorphism comatch; ///< R → H, total
    PartialMorphism corule;  ///< G ⇀ H
};

/// SPO rewriting step. Throws NotConflictFree or NacViolated.
RuleApplication apply_rule(const Rule& rule, const PartialMorphism& match);

/// Printable "x->y" list of the node map, for witness descriptions.
std::string describe_mapping(const PartialMorphism& m);

} // namespace uncover
