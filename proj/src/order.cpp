#include "uncover/order.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <tuple>

#include "uncover/canonical.hpp"

namespace uncover {

std::string_view to_string(OrderKind order) {
    switch (order) {
    case OrderKind::Subgraph:
        return "subgraph";
    case OrderKind::InducedSubgraph:
        return "induced";
    case OrderKind::Minor:
        return "minor";
    }
    return "?";
}

std::optional<OrderKind> parse_order(std::string_view text) {
    if (text == "subgraph")
        return OrderKind::Subgraph;
    if (text == "induced")
        return OrderKind::InducedSubgraph;
    if (text == "minor")
        return OrderKind::Minor;
    return std::nullopt;
}

void require_supported(OrderKind order, const Hypergraph& g) {
    if (order == OrderKind::Minor)
        throw Error(Errc::UnsupportedOrder, "the minor ordering is not implemented");
    if (order == OrderKind::InducedSubgraph && !is_directed_graph(g))
        throw Error(Errc::NotDirectedGraph, "the induced subgraph order needs binary edges");
}

namespace {

std::vector<std::size_t> label_histogram(const Hypergraph& g) {
    std::vector<std::size_t> h(g.signature() ? g.signature()->size() : 0, 0);
    for (const auto& e : g.edges()) {
        if (e.label >= h.size())
            h.resize(e.label + 1, 0);
        ++h[e.label];
    }
    return h;
}

bool histogram_fits(const Hypergraph& small, const Hypergraph& large) {
    const auto a = label_histogram(small);
    const auto b = label_histogram(large);
    for (std::size_t l = 0; l < a.size(); ++l)
        if (a[l] > (l < b.size() ? b[l] : 0))
            return false;
    return true;
}

} // namespace

std::optional<PartialMorphism> order_embedding(const Hypergraph& g1, const Hypergraph& g2, OrderKind order) {
    require_supported(order, g1);
    require_supported(order, g2);
    if (g1.node_count() > g2.node_count() || g1.edge_count() > g2.edge_count() || !histogram_fits(g1, g2))
        return std::nullopt;
    std::optional<PartialMorphism> found;
    SearchOptions options{.injective = true, .edge_closed = order == OrderKind::InducedSubgraph};
    search_morphisms(g1, g2, options, {}, {}, [&](const std::vector<int>& nodes, const std::vector<int>& edges) {
        found = PartialMorphism{g1, g2, nodes, edges};
        return false;
    });
    return found;
}

bool leq(const Hypergraph& g1, const Hypergraph& g2, OrderKind order) {
    if (!same_signature(g1.signature(), g2.signature()))
        throw Error(Errc::SignatureMismatch, "order comparison across signatures");
    return order_embedding(g1, g2, order).has_value();
}

bool order_morphism_check(const PartialMorphism& m, OrderKind order) {
    if (order == OrderKind::Minor)
        throw Error(Errc::UnsupportedOrder, "the minor ordering is not implemented");
    auto injective_and_onto = [](const std::vector<int>& map, std::size_t target_size) {
        std::vector<int> hits(target_size, 0);
        for (int x : map)
            if (x != kUndefined && ++hits[static_cast<std::size_t>(x)] > 1)
                return false;
        return std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; });
    };
    if (!injective_and_onto(m.node_map, m.target.node_count()) ||
        !injective_and_onto(m.edge_map, m.target.edge_count()))
        return false;
    if (order == OrderKind::InducedSubgraph) {
        for (EdgeId e = 0; e < m.source.edge_count(); ++e) {
            if (m.edge_map[e] != kUndefined)
                continue;
            const auto& conn = m.source.edge(e).conn;
            if (std::all_of(conn.begin(), conn.end(), [&](NodeId v) { return m.node_map[v] != kUndefined; }))
                return false;
        }
    }
    return true;
}

namespace {

SmallerGraph keep_subset(const Hypergraph& r, const std::vector<bool>& nodes, const std::vector<bool>& edges) {
    SubgraphView view = restrict_to(r, nodes, edges);
    PartialMorphism mu{r, view.graph, std::move(view.node_map), std::move(view.edge_map)};
    return SmallerGraph{std::move(view.graph), std::move(mu)};
}

} // namespace

std::vector<SmallerGraph> enumerate_order_morphisms(const Hypergraph& r, OrderKind order) {
    require_supported(order, r);
    const std::size_t n = r.node_count(), m = r.edge_count();
    std::vector<SmallerGraph> out;
    if (order == OrderKind::InducedSubgraph) {
        if (n >= 20)
            throw Error(Errc::BudgetTooLarge, "too many nodes to enumerate subsets");
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
            std::vector<bool> nodes(n);
            for (std::size_t v = 0; v < n; ++v)
                nodes[v] = (mask >> v) & 1u;
            out.push_back(keep_subset(r, nodes, std::vector<bool>(m, true)));
        }
        return out;
    }
    if (n + m >= 24)
        throw Error(Errc::BudgetTooLarge, "too many elements to enumerate subsets");
    for (std::uint64_t emask = 0; emask < (std::uint64_t{1} << m); ++emask) {
        std::vector<bool> edges(m), forced(n, false);
        for (std::size_t e = 0; e < m; ++e) {
            edges[e] = (emask >> e) & 1u;
            if (edges[e])
                for (NodeId v : r.edge(static_cast<EdgeId>(e)).conn)
                    forced[v] = true;
        }
        std::vector<NodeId> optional_nodes;
        for (NodeId v = 0; v < n; ++v)
            if (!forced[v])
                optional_nodes.push_back(v);
        for (std::uint64_t nmask = 0; nmask < (std::uint64_t{1} << optional_nodes.size()); ++nmask) {
            std::vector<bool> nodes = forced;
            for (std::size_t i = 0; i < optional_nodes.size(); ++i)
                nodes[optional_nodes[i]] = (nmask >> i) & 1u;
            out.push_back(keep_subset(r, nodes, edges));
        }
    }
    return out;
}

std::vector<SmallerGraph> enumerate_smaller(const Hypergraph& r, OrderKind order) {
    std::map<std::string, SmallerGraph> by_key;
    for (auto& s : enumerate_order_morphisms(r, order))
        by_key.try_emplace(canonical_key(s.graph), std::move(s));
    std::vector<SmallerGraph> out;
    out.reserve(by_key.size());
    for (auto& [key, s] : by_key)
        out.push_back(std::move(s));
    return out;
}

std::vector<std::size_t> minimal_indices(const std::vector<Hypergraph>& ws, OrderKind order) {
    std::vector<std::string> keys(ws.size());
    for (std::size_t i = 0; i < ws.size(); ++i) {
        require_supported(order, ws[i]);
        keys[i] = canonical_key(ws[i]);
    }
    std::vector<std::size_t> idx(ws.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        return std::forward_as_tuple(ws[a].node_count(), ws[a].edge_count(), keys[a]) <
               std::forward_as_tuple(ws[b].node_count(), ws[b].edge_count(), keys[b]);
    });
    // A strictly smaller graph always sorts earlier, so a single pass suffices.
    std::vector<std::size_t> kept;
    for (std::size_t i : idx) {
        if (!kept.empty() && keys[kept.back()] == keys[i])
            continue;
        bool dominated = false;
        for (std::size_t k : kept) {
            // distinct classes: only a strictly smaller graph can lie below, and for
            // the induced order it needs strictly fewer nodes
            const std::size_t n = ws[k].node_count(), m = ws[k].edge_count();
            if (order == OrderKind::InducedSubgraph ? n >= ws[i].node_count()
                                                    : m > ws[i].edge_count() ||
                                                          (n == ws[i].node_count() && m == ws[i].edge_count()))
                continue;
            if (leq(ws[k], ws[i], order)) {
                dominated = true;
                break;
            }
        }
        if (!dominated)
            kept.push_back(i);
    }
    return kept;
}

std::vector<Hypergraph> minimize(const std::vector<Hypergraph>& ws, OrderKind order) {
    std::vector<Hypergraph> out;
    for (std::size_t i : minimal_indices(ws, order))
        out.push_back(canonical_form(ws[i]));
    return out;
}

bool upward_member(const Hypergraph& g, const std::vector<Hypergraph>& basis, OrderKind order) {
    return std::any_of(basis.begin(), basis.end(), [&](const Hypergraph& b) { return leq(b, g, order); });
}

} // namespace uncover
