#include "uncover/canonical.hpp"

#include <algorithm>
#include <numeric>

namespace uncover {

namespace {

using Code = std::vector<std::uint32_t>;

// Colour refinement plus individualisation. The search tree is canonical (every
// colour is a rank of an isomorphism-invariant signature), so the smallest leaf
// encoding is a canonical form.
class Canonicaliser {
public:
    explicit Canonicaliser(const Hypergraph& g) : g_(g), self_contained_(g.node_count(), true) {
        for (const auto& e : g.edges())
            for (NodeId v : e.conn)
                for (NodeId w : e.conn)
                    if (v != w)
                        self_contained_[v] = false;
    }

    CanonicalLabelling run() {
        std::vector<std::uint32_t> colours(g_.node_count(), 0);
        refine(colours);
        search(colours);

        CanonicalLabelling out;
        out.node_position.assign(best_nodes_.begin(), best_nodes_.end());
        out.edge_position = best_edges_;
        out.key.reserve(best_code_.size() * 4);
        for (std::uint32_t word : best_code_)
            for (int shift = 0; shift < 32; shift += 8)
                out.key.push_back(static_cast<char>((word >> shift) & 0xffu));
        return out;
    }

private:
    static std::size_t rerank(std::vector<std::uint32_t>& colours, const std::vector<Code>& sigs) {
        std::vector<std::size_t> order(sigs.size());
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return sigs[a] < sigs[b]; });
        std::uint32_t rank = 0;
        for (std::size_t i = 0; i < order.size(); ++i) {
            if (i > 0 && sigs[order[i]] != sigs[order[i - 1]])
                ++rank;
            colours[order[i]] = rank;
        }
        return order.empty() ? 0 : rank + 1;
    }

    void refine(std::vector<std::uint32_t>& colours) const {
        const std::size_t n = g_.node_count();
        std::size_t classes = 0;
        {
            std::vector<Code> sigs(n);
            for (std::size_t v = 0; v < n; ++v)
                sigs[v] = {colours[v]};
            classes = rerank(colours, sigs);
        }
        while (true) {
            std::vector<std::vector<Code>> incidences(n);
            for (const auto& e : g_.edges()) {
                for (std::size_t i = 0; i < e.conn.size(); ++i) {
                    Code t{e.label, static_cast<std::uint32_t>(i)};
                    for (NodeId w : e.conn)
                        t.push_back(colours[w]);
                    incidences[e.conn[i]].push_back(std::move(t));
                }
            }
            std::vector<Code> sigs(n);
            for (std::size_t v = 0; v < n; ++v) {
                auto& inc = incidences[v];
                std::sort(inc.begin(), inc.end());
                Code& s = sigs[v];
                s.push_back(colours[v]);
                for (const auto& t : inc) {
                    s.push_back(static_cast<std::uint32_t>(t.size()));
                    s.insert(s.end(), t.begin(), t.end());
                }
            }
            const std::size_t next = rerank(colours, sigs);
            if (next == classes)
                return;
            classes = next;
        }
    }

    void search(const std::vector<std::uint32_t>& colours) {
        const std::size_t n = g_.node_count();
        std::vector<std::size_t> cell_size(n, 0);
        for (auto c : colours)
            ++cell_size[c];
        std::uint32_t target = 0;
        bool discrete = true;
        for (std::uint32_t c = 0; c < n; ++c) {
            if (cell_size[c] > 1) {
                target = c;
                discrete = false;
                break;
            }
        }
        if (discrete) {
            leaf(colours);
            return;
        }
        bool all_self_contained = true;
        for (NodeId v = 0; v < n; ++v)
            if (colours[v] == target && !self_contained_[v])
                all_self_contained = false;
        for (NodeId v = 0; v < n; ++v) {
            if (colours[v] != target)
                continue;
            std::vector<std::uint32_t> next(n);
            for (NodeId u = 0; u < n; ++u)
                next[u] = 2 * colours[u] + ((colours[u] == target && u != v) ? 1 : 0);
            refine(next);
            search(next);
            // Nodes whose edges only touch themselves and that share a cell are
            // interchangeable; one branch covers them all.
            if (all_self_contained)
                break;
        }
    }

    void leaf(const std::vector<std::uint32_t>& position) {
        std::vector<Code> edge_codes(g_.edge_count());
        for (EdgeId e = 0; e < g_.edge_count(); ++e) {
            const Edge& edge = g_.edge(e);
            Code& c = edge_codes[e];
            c.push_back(edge.label);
            c.push_back(static_cast<std::uint32_t>(edge.conn.size()));
            for (NodeId v : edge.conn)
                c.push_back(position[v]);
        }
        std::vector<EdgeId> order(g_.edge_count());
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(),
                         [&](EdgeId a, EdgeId b) { return edge_codes[a] < edge_codes[b]; });
        Code code{static_cast<std::uint32_t>(g_.node_count()), static_cast<std::uint32_t>(g_.edge_count())};
        for (EdgeId e : order)
            code.insert(code.end(), edge_codes[e].begin(), edge_codes[e].end());
        if (!have_best_ || code < best_code_) {
            have_best_ = true;
            best_code_ = std::move(code);
            best_nodes_ = position;
            best_edges_.assign(g_.edge_count(), 0);
            for (std::size_t i = 0; i < order.size(); ++i)
                best_edges_[order[i]] = static_cast<EdgeId>(i);
        }
    }

    const Hypergraph& g_;
    std::vector<bool> self_contained_;
    bool have_best_ = false;
    Code best_code_;
    std::vector<std::uint32_t> best_nodes_;
    std::vector<EdgeId> best_edges_;
};

} // namespace

CanonicalLabelling canonical_labelling(const Hypergraph& g) { return Canonicaliser(g).run(); }

std::string canonical_key(const Hypergraph& g) { return canonical_labelling(g).key; }

Hypergraph canonical_form(const Hypergraph& g) {
    const auto lab = canonical_labelling(g);
    Hypergraph out(g.signature(), g.node_count());
    std::vector<EdgeId> by_position(g.edge_count());
    for (EdgeId e = 0; e < g.edge_count(); ++e)
        by_position[lab.edge_position[e]] = e;
    for (EdgeId e : by_position) {
        const Edge& edge = g.edge(e);
        std::vector<NodeId> conn;
        conn.reserve(edge.conn.size());
        for (NodeId v : edge.conn)
            conn.push_back(lab.node_position[v]);
        out.add_edge(edge.label, std::move(conn));
    }
    return out;
}

bool isomorphic(const Hypergraph& a, const Hypergraph& b) {
    if (!same_signature(a.signature(), b.signature()))
        throw Error(Errc::SignatureMismatch, "isomorphism test across different signatures");
    if (a.node_count() != b.node_count() || a.edge_count() != b.edge_count())
        return false;
    return canonical_key(a) == canonical_key(b);
}

} // namespace uncover
