#include "uncover/poc.hpp"

#include <functional>
#include <map>
#include <mutex>
#include <set>
#include <tuple>

#include "uncover/canonical.hpp"

namespace uncover {

std::optional<PartialMorphism> verify_complement(const Rule& rule, const PartialMorphism& comatch,
                                                 const PartialMorphism& match) {
    if (!match.is_total() || !is_conflict_free(match, rule.span()) || !is_conflict_free(match, rule.origin()))
        return std::nullopt;
    Pushout po = pushout(rule.span(), match);
    const Hypergraph& s = comatch.target;
    if (po.graph.node_count() != s.node_count() || po.graph.edge_count() != s.edge_count())
        return std::nullopt;
    std::vector<int> fixed_nodes(po.graph.node_count(), kUndefined);
    std::vector<int> fixed_edges(po.graph.edge_count(), kUndefined);
    auto pin = [](std::vector<int>& fixed, int from, int to) {
        if (from == kUndefined)
            return false;
        auto& slot = fixed[static_cast<std::size_t>(from)];
        if (slot != kUndefined && slot != to)
            return false;
        slot = to;
        return true;
    };
    for (std::size_t z = 0; z < comatch.node_map.size(); ++z)
        if (!pin(fixed_nodes, po.from_first.node_map[z], comatch.node_map[z]))
            return std::nullopt;
    for (std::size_t z = 0; z < comatch.edge_map.size(); ++z)
        if (!pin(fixed_edges, po.from_first.edge_map[z], comatch.edge_map[z]))
            return std::nullopt;
    auto eta = find_isomorphism(po.graph, s, fixed_nodes, fixed_edges);
    if (!eta)
        return std::nullopt;
    return compose(po.from_second, *eta);
}

namespace {

// Restricted-growth enumeration of the partitions of {0..n-1} into blocks of
// pairwise compatible elements. `compatible` must be an equivalence.
void for_each_partition(std::size_t n, const std::function<bool(std::size_t, std::size_t)>& compatible,
                        const std::function<void(const std::vector<int>&, std::size_t)>& visit) {
    std::vector<int> block(n, -1);
    std::vector<std::size_t> reps;
    std::function<void(std::size_t)> go = [&](std::size_t i) {
        if (i == n) {
            visit(block, reps.size());
            return;
        }
        for (std::size_t b = 0; b < reps.size(); ++b) {
            if (compatible(i, reps[b])) {
                block[i] = static_cast<int>(b);
                go(i + 1);
            }
        }
        block[i] = static_cast<int>(reps.size());
        reps.push_back(i);
        go(i + 1);
        reps.pop_back();
    };
    go(0);
}

class ComplementBuilder {
public:
    ComplementBuilder(const Rule& rule, const PartialMorphism& comatch)
        : rule_(rule), c_(comatch), s_(comatch.target) {}

    // Graphs G built from a quotient of L plus the context of S, verified.
    // `deleted_nodes` receives, per complement, which G nodes the rule deletes.
    void run(std::vector<Complement>& out, std::vector<std::vector<bool>>& deleted_nodes) {
        if (!c_.is_total() || !(c_.source == rule_.rhs()))
            throw Error(Errc::TypeMismatch, "comatch must be a total morphism from the right-hand side");
        const auto& r = rule_.span();
        const Hypergraph& l = rule_.lhs();
        const Hypergraph& rhs = rule_.rhs();

        std::vector<int> node_hits(s_.node_count(), 0), edge_hits(s_.edge_count(), 0);
        for (int x : c_.node_map)
            ++node_hits[static_cast<std::size_t>(x)];
        for (int x : c_.edge_map)
            ++edge_hits[static_cast<std::size_t>(x)];

        // Created elements are singleton pushout classes: their images are
        // unshared, and no context edge can touch a created node.
        std::vector<bool> node_created_r(rhs.node_count(), true), edge_created_r(rhs.edge_count(), true);
        for (int x : r.node_map)
            if (x != kUndefined)
                node_created_r[static_cast<std::size_t>(x)] = false;
        for (int x : r.edge_map)
            if (x != kUndefined)
                edge_created_r[static_cast<std::size_t>(x)] = false;
        std::vector<bool> s_node_created(s_.node_count(), false);
        for (NodeId z = 0; z < rhs.node_count(); ++z) {
            if (!node_created_r[z])
                continue;
            const auto s = static_cast<std::size_t>(c_.node_map[z]);
            if (node_hits[s] > 1)
                return;
            s_node_created[s] = true;
        }
        for (EdgeId z = 0; z < rhs.edge_count(); ++z)
            if (edge_created_r[z] && edge_hits[static_cast<std::size_t>(c_.edge_map[z])] > 1)
                return;
        for (EdgeId e = 0; e < s_.edge_count(); ++e) {
            if (edge_hits[e] > 0)
                continue;
            context_edges_.push_back(e);
            for (NodeId v : s_.edge(e).conn)
                if (s_node_created[v])
                    return;
        }
        context_nodes_.clear();
        for (NodeId v = 0; v < s_.node_count(); ++v)
            if (node_hits[v] == 0)
                context_nodes_.push_back(v);

        node_target_.assign(l.node_count(), kUndefined);
        for (NodeId x = 0; x < l.node_count(); ++x)
            if (r.node_map[x] != kUndefined)
                node_target_[x] = c_.node_map[static_cast<std::size_t>(r.node_map[x])];
        edge_target_.assign(l.edge_count(), kUndefined);
        for (EdgeId e = 0; e < l.edge_count(); ++e)
            if (r.edge_map[e] != kUndefined)
                edge_target_[e] = c_.edge_map[static_cast<std::size_t>(r.edge_map[e])];

        out_ = &out;
        deleted_out_ = &deleted_nodes;
        for_each_partition(
            l.node_count(),
            [&](std::size_t a, std::size_t b) {
                const auto& o = rule_.origin().node_map;
                const bool da = r.node_map[a] == kUndefined, db = r.node_map[b] == kUndefined;
                return da == db && (o[a] == kUndefined) == (o[b] == kUndefined) && node_target_[a] == node_target_[b];
            },
            [&](const std::vector<int>& block, std::size_t blocks) { with_node_quotient(block, blocks); });
    }

private:
    void with_node_quotient(const std::vector<int>& node_block, std::size_t blocks) {
        const Hypergraph& l = rule_.lhs();
        const auto& r = rule_.span();
        std::vector<std::vector<NodeId>> conn(l.edge_count());
        for (EdgeId e = 0; e < l.edge_count(); ++e)
            for (NodeId v : l.edge(e).conn)
                conn[e].push_back(static_cast<NodeId>(node_block[v]));
        for_each_partition(
            l.edge_count(),
            [&](std::size_t a, std::size_t b) {
                const auto& o = rule_.origin().edge_map;
                return l.edge(static_cast<EdgeId>(a)).label == l.edge(static_cast<EdgeId>(b)).label &&
                       conn[a] == conn[b] && (r.edge_map[a] == kUndefined) == (r.edge_map[b] == kUndefined) &&
                       (o[a] == kUndefined) == (o[b] == kUndefined) && edge_target_[a] == edge_target_[b];
            },
            [&](const std::vector<int>& edge_block, std::size_t edge_blocks) {
                Hypergraph g(l.signature(), blocks);
                std::vector<bool> placed(edge_blocks, false);
                std::vector<EdgeId> by_block(edge_blocks);
                for (EdgeId e = 0; e < l.edge_count(); ++e) {
                    const auto b = static_cast<std::size_t>(edge_block[e]);
                    if (!placed[b]) {
                        placed[b] = true;
                        by_block[b] = e;
                    }
                }
                for (std::size_t b = 0; b < edge_blocks; ++b)
                    g.add_edge(l.edge(by_block[b]).label, conn[by_block[b]]);
                std::vector<int> block_target(blocks, kUndefined);
                std::vector<bool> deleted(blocks, false);
                for (NodeId x = 0; x < l.node_count(); ++x) {
                    block_target[static_cast<std::size_t>(node_block[x])] = node_target_[x];
                    deleted[static_cast<std::size_t>(node_block[x])] = r.node_map[x] == kUndefined;
                }
                with_quotient(std::move(g), node_block, edge_block, block_target, deleted);
            });
    }

    void with_quotient(Hypergraph g, const std::vector<int>& node_block, const std::vector<int>& edge_block,
                       const std::vector<int>& block_target, std::vector<bool> deleted) {
        std::vector<int> s_to_g(s_.node_count(), kUndefined);
        for (NodeId s : context_nodes_) {
            s_to_g[s] = static_cast<int>(g.add_node());
            deleted.push_back(false);
        }
        // Endpoint choices for the context edges: a context node maps to its
        // own copy, an image node to any preserved class that the rule sends there.
        std::vector<std::vector<NodeId>> choices;
        for (EdgeId e : context_edges_) {
            for (NodeId s : s_.edge(e).conn) {
                std::vector<NodeId> opts;
                if (s_to_g[s] != kUndefined)
                    opts.push_back(static_cast<NodeId>(s_to_g[s]));
                else
                    for (std::size_t b = 0; b < block_target.size(); ++b)
                        if (block_target[b] == static_cast<int>(s))
                            opts.push_back(static_cast<NodeId>(b));
                if (opts.empty())
                    return;
                choices.push_back(std::move(opts));
            }
        }
        std::vector<NodeId> pick(choices.size());
        std::function<void(std::size_t)> go = [&](std::size_t i) {
            if (i < choices.size()) {
                for (NodeId v : choices[i]) {
                    pick[i] = v;
                    go(i + 1);
                }
                return;
            }
            Hypergraph full = g;
            std::size_t k = 0;
            for (EdgeId e : context_edges_) {
                std::vector<NodeId> conn;
                for (std::size_t j = 0; j < s_.edge(e).conn.size(); ++j)
                    conn.push_back(pick[k++]);
                full.add_edge(s_.edge(e).label, std::move(conn));
            }
            PartialMorphism match{rule_.lhs(), full, node_block, edge_block};
            if (auto corule = verify_complement(rule_, c_, match)) {
                out_->push_back(Complement{full, std::move(match), std::move(*corule)});
                deleted_out_->push_back(deleted);
            }
        };
        go(0);
    }

    const Rule& rule_;
    const PartialMorphism& c_;
    const Hypergraph& s_;
    std::vector<NodeId> context_nodes_;
    std::vector<EdgeId> context_edges_;
    std::vector<int> node_target_;
    std::vector<int> edge_target_;
    std::vector<Complement>* out_ = nullptr;
    std::vector<std::vector<bool>>* deleted_out_ = nullptr;
};

// Adds every multiset of edges touching a deleted node, up to k parallel
// copies, that keeps the graph inside the restriction. The pushout drops all
// of them, so match and corule carry over unchanged.
void augment(const Complement& base, const std::vector<bool>& deleted, const PathAndMultBound& bound,
             const std::function<void(Complement&&)>& out) {
    const Hypergraph& g = base.graph;
    const auto& sig = *g.signature();
    std::vector<std::tuple<LabelId, NodeId, NodeId>> slots;
    for (LabelId l = 0; l < sig.size(); ++l)
        for (NodeId u = 0; u < g.node_count(); ++u)
            for (NodeId v = 0; v < g.node_count(); ++v)
                if (deleted[u] || deleted[v])
                    slots.emplace_back(l, u, v);
    std::map<std::tuple<LabelId, NodeId, NodeId>, std::size_t> existing;
    for (const auto& e : g.edges())
        ++existing[{e.label, e.conn[0], e.conn[1]}];

    std::function<void(std::size_t, const Hypergraph&)> go = [&](std::size_t i, const Hypergraph& cur) {
        if (i == slots.size()) {
            PartialMorphism match{base.match.source, cur, base.match.node_map, base.match.edge_map};
            PartialMorphism corule{cur, base.corule.target, base.corule.node_map, base.corule.edge_map};
            corule.edge_map.resize(cur.edge_count(), kUndefined);
            out(Complement{cur, std::move(match), std::move(corule)});
            return;
        }
        go(i + 1, cur);
        const auto [l, u, v] = slots[i];
        const std::size_t have = existing.count(slots[i]) ? existing[slots[i]] : 0;
        Hypergraph next = cur;
        for (std::size_t copies = have + 1; copies <= bound.k; ++copies) {
            next.add_edge(l, {u, v});
            if (has_path_longer_than(next, bound.n))
                break;
            go(i + 1, next);
        }
    };
    go(0, g);
}

} // namespace

PocResult minimal_pushout_complements(const PocRequest& req) {
    const Rule& rule = req.rule;
    require_supported(req.order, rule.lhs());
    require_supported(req.order, req.comatch.target);
    const bool induced = req.order == OrderKind::InducedSubgraph;
    const auto* bound = std::get_if<PathAndMultBound>(&req.restriction);
    if (induced && (req.variant != 1 || !bound))
        throw Error(Errc::InvalidProblem,
                    "the induced subgraph order needs variant 1 with a path-and-multiplicity bound");

    std::vector<Complement> core;
    std::vector<std::vector<bool>> deleted;
    ComplementBuilder(rule, req.comatch).run(core, deleted);

    // One candidate per graph class. The class is settled once some match of
    // it passes the NACs; other matches of the same graph are still tried.
    std::vector<Complement> kept;
    std::set<std::string> settled;
    auto offer = [&](Complement&& cand) {
        std::string key = canonical_key(cand.graph);
        if (settled.count(key) || violated_nac(rule, cand.match))
            return;
        settled.insert(std::move(key));
        kept.push_back(std::move(cand));
    };
    for (std::size_t i = 0; i < core.size(); ++i) {
        if (req.variant == 1 && !in_restriction(core[i].graph, req.restriction))
            continue;
        if (induced)
            augment(core[i], deleted[i], *bound, offer);
        else
            offer(std::move(core[i]));
    }

    std::vector<Hypergraph> graphs;
    graphs.reserve(kept.size());
    for (const auto& k : kept)
        graphs.push_back(k.graph);
    PocResult result;
    for (std::size_t i : minimal_indices(graphs, req.order))
        result.complements.push_back(std::move(kept[i]));
    return result;
}

namespace {

std::string signature_key(const SignaturePtr& sig) {
    std::string key;
    if (sig)
        for (LabelId l = 0; l < sig->size(); ++l)
            key += sig->name(l) + "/" + std::to_string(sig->arity(l)) + ";";
    return key;
}

double multiset_count(std::size_t slots, std::size_t max_size) {
    double total = 0, term = 1; // C(slots + k - 1, k), summed over k
    for (std::size_t k = 0; k <= max_size; ++k) {
        if (k > 0)
            term = term * static_cast<double>(slots + k - 1) / static_cast<double>(k);
        total += term;
    }
    return total;
}

} // namespace

const std::vector<Hypergraph>& graph_universe(const SignaturePtr& sig, std::size_t node_budget,
                                              std::size_t edge_budget) {
    static std::mutex mutex;
    static std::map<std::tuple<std::string, std::size_t, std::size_t>, std::vector<Hypergraph>> cache;
    if (node_budget > 6 || edge_budget > 8)
        throw Error(Errc::BudgetTooLarge, "brute force is limited to 6 nodes and 8 edges");

    std::lock_guard lock(mutex);
    const auto key = std::make_tuple(signature_key(sig), node_budget, edge_budget);
    if (auto it = cache.find(key); it != cache.end())
        return it->second;

    double estimate = 0;
    for (std::size_t n = 0; n <= node_budget; ++n) {
        std::size_t slots = 0;
        if (sig)
            for (LabelId l = 0; l < sig->size(); ++l) {
                std::size_t t = 1;
                for (unsigned i = 0; i < sig->arity(l); ++i)
                    t *= n;
                slots += t;
            }
        estimate += multiset_count(slots, edge_budget);
    }
    if (estimate > 3e6)
        throw Error(Errc::BudgetTooLarge, "graph universe too large for brute force");

    std::vector<Hypergraph> graphs;
    std::set<std::string> seen;
    for (std::size_t n = 0; n <= node_budget; ++n) {
        std::vector<std::pair<LabelId, std::vector<NodeId>>> slots;
        if (sig) {
            for (LabelId l = 0; l < sig->size(); ++l) {
                std::vector<NodeId> conn(sig->arity(l), 0);
                if (n == 0 && !conn.empty())
                    continue;
                while (true) {
                    slots.emplace_back(l, conn);
                    std::size_t pos = 0;
                    while (pos < conn.size() && ++conn[pos] == n)
                        conn[pos++] = 0;
                    if (pos == conn.size())
                        break;
                }
            }
        }
        std::function<void(std::size_t, Hypergraph&)> go = [&](std::size_t from, Hypergraph& g) {
            if (seen.insert(canonical_key(g)).second)
                graphs.push_back(g);
            if (g.edge_count() == edge_budget)
                return;
            for (std::size_t s = from; s < slots.size(); ++s) {
                Hypergraph next = g;
                next.add_edge(slots[s].first, slots[s].second);
                go(s, next);
            }
        };
        Hypergraph empty(sig, n);
        go(0, empty);
    }
    return cache.emplace(key, std::move(graphs)).first->second;
}

std::vector<BruteComplement> brute_force_pushout_complements(const Rule& rule, const PartialMorphism& comatch,
                                                             std::size_t node_budget, std::size_t edge_budget) {
    std::vector<BruteComplement> out;
    for (const Hypergraph& g : graph_universe(rule.lhs().signature(), node_budget, edge_budget)) {
        for (auto& m : enumerate_matches(rule.lhs(), g, &rule))
            if (verify_complement(rule, comatch, m))
                out.push_back(BruteComplement{g, std::move(m)});
    }
    return out;
}

} // namespace uncover
