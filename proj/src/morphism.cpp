#include "uncover/morphism.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace uncover {

PartialMorphism PartialMorphism::undefined_between(Hypergraph source, Hypergraph target) {
    PartialMorphism m;
    m.node_map.assign(source.node_count(), kUndefined);
    m.edge_map.assign(source.edge_count(), kUndefined);
    m.source = std::move(source);
    m.target = std::move(target);
    return m;
}

PartialMorphism PartialMorphism::identity(const Hypergraph& g) {
    PartialMorphism m{g, g, std::vector<int>(g.node_count()), std::vector<int>(g.edge_count())};
    std::iota(m.node_map.begin(), m.node_map.end(), 0);
    std::iota(m.edge_map.begin(), m.edge_map.end(), 0);
    return m;
}

bool PartialMorphism::is_total() const {
    return std::none_of(node_map.begin(), node_map.end(), [](int x) { return x == kUndefined; }) &&
           std::none_of(edge_map.begin(), edge_map.end(), [](int x) { return x == kUndefined; });
}

std::optional<Error> check_morphism(const PartialMorphism& m) {
    if (m.node_map.size() != m.source.node_count() || m.edge_map.size() != m.source.edge_count())
        return Error(Errc::TypeMismatch, "map sizes do not match the source graph");
    for (int x : m.node_map)
        if (x != kUndefined && (x < 0 || static_cast<std::size_t>(x) >= m.target.node_count()))
            return Error(Errc::TypeMismatch, "node image out of range");
    for (EdgeId e = 0; e < m.source.edge_count(); ++e) {
        const int image = m.edge_map[e];
        if (image == kUndefined)
            continue;
        if (image < 0 || static_cast<std::size_t>(image) >= m.target.edge_count())
            return Error(Errc::TypeMismatch, "edge image out of range");
        const Edge& src = m.source.edge(e);
        const Edge& tgt = m.target.edge(static_cast<EdgeId>(image));
        if (src.label != tgt.label)
            return Error(Errc::LabelMismatch, "edge " + std::to_string(e));
        if (src.conn.size() != tgt.conn.size())
            return Error(Errc::ConnMismatch, "edge " + std::to_string(e));
        for (std::size_t i = 0; i < src.conn.size(); ++i) {
            const int v = m.node_map[src.conn[i]];
            if (v == kUndefined)
                return Error(Errc::IncidentNodeUndefined,
                             "edge " + std::to_string(e) + " is mapped but node " +
                                 std::to_string(src.conn[i]) + " is not");
            if (static_cast<NodeId>(v) != tgt.conn[i])
                return Error(Errc::ConnMismatch, "edge " + std::to_string(e));
        }
    }
    return std::nullopt;
}

PartialMorphism compose(const PartialMorphism& f, const PartialMorphism& g) {
    if (!(f.target == g.source))
        throw Error(Errc::TypeMismatch, "cannot compose: target and source differ");
    PartialMorphism out = PartialMorphism::undefined_between(f.source, g.target);
    for (std::size_t v = 0; v < f.node_map.size(); ++v)
        if (f.node_map[v] != kUndefined)
            out.node_map[v] = g.node_map[static_cast<std::size_t>(f.node_map[v])];
    for (std::size_t e = 0; e < f.edge_map.size(); ++e)
        if (f.edge_map[e] != kUndefined)
            out.edge_map[e] = g.edge_map[static_cast<std::size_t>(f.edge_map[e])];
    return out;
}

Rule::Rule(std::string name, PartialMorphism span, std::vector<Nac> nacs, std::optional<PartialMorphism> origin)
    : name_(std::move(name)), span_(std::move(span)), nacs_(std::move(nacs)), origin_(std::move(origin)) {
    if (origin_ && !(origin_->source == span_.source))
        throw Error(Errc::TypeMismatch, "a derived rule must share the left-hand side of its origin");
}

namespace {

class MorphismSearch {
public:
    MorphismSearch(const Hypergraph& pattern, const Hypergraph& host, const SearchOptions& options,
                   std::span<const int> fixed_nodes, std::span<const int> fixed_edges,
                   const MorphismVisitor& visit)
        : p_(pattern), h_(host), opt_(options), fixed_edges_(fixed_edges), visit_(visit),
          node_map_(pattern.node_count(), kUndefined), edge_map_(pattern.edge_count(), kUndefined),
          node_use_(host.node_count(), 0), edge_use_(host.edge_count(), 0) {
        const std::size_t labels = std::max<std::size_t>(host.signature() ? host.signature()->size() : 0, 1);
        by_label_.resize(labels);
        for (EdgeId e = 0; e < host.edge_count(); ++e) {
            const LabelId l = host.edge(e).label;
            if (l >= by_label_.size())
                by_label_.resize(l + 1);
            by_label_[l].push_back(e);
        }
        for (std::size_t v = 0; v < fixed_nodes.size() && v < node_map_.size(); ++v) {
            const int image = fixed_nodes[v];
            if (image == kUndefined)
                continue;
            if (image < 0 || static_cast<std::size_t>(image) >= host.node_count() ||
                (opt_.injective && node_use_[static_cast<std::size_t>(image)] > 0)) {
                feasible_ = false;
                return;
            }
            node_map_[v] = image;
            ++node_use_[static_cast<std::size_t>(image)];
        }
        if (opt_.injective &&
            (pattern.node_count() > host.node_count() || pattern.edge_count() > host.edge_count()))
            feasible_ = false;
        order_edges();
    }

    void run() {
        if (feasible_)
            match_edge(0);
    }

private:
    void order_edges() {
        const std::size_t m = p_.edge_count();
        std::vector<bool> placed(m, false);
        std::vector<bool> covered(p_.node_count(), false);
        for (std::size_t v = 0; v < node_map_.size(); ++v)
            covered[v] = node_map_[v] != kUndefined;
        for (std::size_t step = 0; step < m; ++step) {
            std::size_t best = m;
            long best_score = -1;
            for (std::size_t e = 0; e < m; ++e) {
                if (placed[e])
                    continue;
                long score = 0;
                if (e < fixed_edges_.size() && fixed_edges_[e] != kUndefined)
                    score += 1000;
                for (NodeId v : p_.edge(static_cast<EdgeId>(e)).conn)
                    score += covered[v] ? 10 : 0;
                if (score > best_score) {
                    best_score = score;
                    best = e;
                }
            }
            placed[best] = true;
            for (NodeId v : p_.edge(static_cast<EdgeId>(best)).conn)
                covered[v] = true;
            edge_order_.push_back(static_cast<EdgeId>(best));
        }
    }

    void match_edge(std::size_t k) {
        if (stop_)
            return;
        if (k == edge_order_.size()) {
            match_node(0);
            return;
        }
        const EdgeId pe = edge_order_[k];
        const Edge& pattern_edge = p_.edge(pe);
        const bool pinned = pe < fixed_edges_.size() && fixed_edges_[pe] != kUndefined;
        static const std::vector<EdgeId> kNone;
        const std::vector<EdgeId>& pool = pattern_edge.label < by_label_.size() ? by_label_[pattern_edge.label] : kNone;
        auto try_candidate = [&](EdgeId he) {
            if (opt_.injective && edge_use_[he] > 0)
                return;
            const Edge& host_edge = h_.edge(he);
            if (host_edge.label != pattern_edge.label || host_edge.conn.size() != pattern_edge.conn.size())
                return;
            std::vector<NodeId> bound;
            bool ok = true;
            for (std::size_t i = 0; i < pattern_edge.conn.size(); ++i) {
                const NodeId pv = pattern_edge.conn[i];
                const NodeId hv = host_edge.conn[i];
                if (node_map_[pv] == kUndefined) {
                    if (opt_.injective && node_use_[hv] > 0) {
                        ok = false;
                        break;
                    }
                    node_map_[pv] = static_cast<int>(hv);
                    ++node_use_[hv];
                    bound.push_back(pv);
                } else if (node_map_[pv] != static_cast<int>(hv)) {
                    ok = false;
                    break;
                }
            }
            if (ok) {
                edge_map_[pe] = static_cast<int>(he);
                ++edge_use_[he];
                match_edge(k + 1);
                --edge_use_[he];
                edge_map_[pe] = kUndefined;
            }
            for (NodeId pv : bound) {
                --node_use_[static_cast<std::size_t>(node_map_[pv])];
                node_map_[pv] = kUndefined;
            }
        };
        if (pinned) {
            const int he = fixed_edges_[pe];
            if (he >= 0 && static_cast<std::size_t>(he) < h_.edge_count())
                try_candidate(static_cast<EdgeId>(he));
            return;
        }
        for (EdgeId he : pool) {
            try_candidate(he);
            if (stop_)
                return;
        }
    }

    void match_node(std::size_t v) {
        if (stop_)
            return;
        while (v < node_map_.size() && node_map_[v] != kUndefined)
            ++v;
        if (v == node_map_.size()) {
            finish();
            return;
        }
        for (NodeId hv = 0; hv < h_.node_count(); ++hv) {
            if (opt_.injective && node_use_[hv] > 0)
                continue;
            node_map_[v] = static_cast<int>(hv);
            ++node_use_[hv];
            match_node(v + 1);
            --node_use_[hv];
            node_map_[v] = kUndefined;
            if (stop_)
                return;
        }
    }

    void finish() {
        if (opt_.edge_closed) {
            for (EdgeId he = 0; he < h_.edge_count(); ++he) {
                if (edge_use_[he] > 0)
                    continue;
                const auto& conn = h_.edge(he).conn;
                if (std::all_of(conn.begin(), conn.end(), [&](NodeId v) { return node_use_[v] > 0; }))
                    return;
            }
        }
        if (!visit_(node_map_, edge_map_))
            stop_ = true;
    }

    const Hypergraph& p_;
    const Hypergraph& h_;
    SearchOptions opt_;
    std::span<const int> fixed_edges_;
    const MorphismVisitor& visit_;
    std::vector<int> node_map_;
    std::vector<int> edge_map_;
    std::vector<int> node_use_;
    std::vector<int> edge_use_;
    std::vector<std::vector<EdgeId>> by_label_;
    std::vector<EdgeId> edge_order_;
    bool feasible_ = true;
    bool stop_ = false;
};

} // namespace

void search_morphisms(const Hypergraph& pattern, const Hypergraph& host, const SearchOptions& options,
                      std::span<const int> fixed_nodes, std::span<const int> fixed_edges,
                      const MorphismVisitor& visit) {
    MorphismSearch(pattern, host, options, fixed_nodes, fixed_edges, visit).run();
}

bool is_conflict_free(const PartialMorphism& match, const PartialMorphism& span) {
    auto check = [](const std::vector<int>& m, const std::vector<int>& r) {
        for (std::size_t x = 0; x < m.size(); ++x)
            for (std::size_t y = x + 1; y < m.size(); ++y)
                if (m[x] == m[y] && m[x] != kUndefined && (r[x] == kUndefined) != (r[y] == kUndefined))
                    return false;
        return true;
    };
    return check(match.node_map, span.node_map) && check(match.edge_map, span.edge_map);
}

std::vector<PartialMorphism> enumerate_matches(const Hypergraph& l, const Hypergraph& g,
                                               const Rule* conflict_free_wrt) {
    if (!same_signature(l.signature(), g.signature()))
        throw Error(Errc::SignatureMismatch, "match enumeration across signatures");
    std::vector<PartialMorphism> out;
    search_morphisms(l, g, {}, {}, {}, [&](const std::vector<int>& nodes, const std::vector<int>& edges) {
        PartialMorphism m{l, g, nodes, edges};
        if (!conflict_free_wrt || (is_conflict_free(m, conflict_free_wrt->span()) &&
                                   is_conflict_free(m, conflict_free_wrt->origin())))
            out.push_back(std::move(m));
        return true;
    });
    return out;
}

std::optional<std::size_t> violated_nac(const Rule& rule, const PartialMorphism& match) {
    for (std::size_t i = 0; i < rule.nacs().size(); ++i) {
        const Nac& nac = rule.nacs()[i];
        std::vector<int> fixed_nodes(nac.pattern.node_count(), kUndefined);
        std::vector<int> fixed_edges(nac.pattern.edge_count(), kUndefined);
        for (std::size_t v = 0; v < nac.embedding.node_map.size(); ++v)
            fixed_nodes[static_cast<std::size_t>(nac.embedding.node_map[v])] = match.node_map[v];
        for (std::size_t e = 0; e < nac.embedding.edge_map.size(); ++e)
            fixed_edges[static_cast<std::size_t>(nac.embedding.edge_map[e])] = match.edge_map[e];
        bool extends = false;
        search_morphisms(nac.pattern, match.target, {}, fixed_nodes, fixed_edges,
                         [&](const std::vector<int>&, const std::vector<int>&) {
                             extends = true;
                             return false;
                         });
        if (extends)
            return i;
    }
    return std::nullopt;
}

std::optional<PartialMorphism> find_isomorphism(const Hypergraph& a, const Hypergraph& b,
                                                std::span<const int> fixed_nodes,
                                                std::span<const int> fixed_edges) {
    if (a.node_count() != b.node_count() || a.edge_count() != b.edge_count())
        return std::nullopt;
    std::optional<PartialMorphism> found;
    search_morphisms(a, b, SearchOptions{.injective = true}, fixed_nodes, fixed_edges,
                     [&](const std::vector<int>& nodes, const std::vector<int>& edges) {
                         found = PartialMorphism{a, b, nodes, edges};
                         return false;
                     });
    return found;
}

namespace {

class UnionFind {
public:
    explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
    std::size_t find(std::size_t x) {
        while (parent_[x] != x)
            x = parent_[x] = parent_[parent_[x]];
        return x;
    }
    void unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a != b)
            parent_[std::max(a, b)] = std::min(a, b);
    }

private:
    std::vector<std::size_t> parent_;
};

} // namespace

Pushout pushout(const PartialMorphism& f, const PartialMorphism& g) {
    if (!(f.source == g.source))
        throw Error(Errc::TypeMismatch, "pushout needs a common source");
    const Hypergraph& g0 = f.source;
    const Hypergraph& g1 = f.target;
    const Hypergraph& g2 = g.target;
    const std::size_t n1 = g1.node_count(), n2 = g2.node_count();
    const std::size_t m1 = g1.edge_count(), m2 = g2.edge_count();

    UnionFind nodes(n1 + n2), edges(m1 + m2);
    std::vector<bool> node_tainted(n1 + n2, false), edge_tainted(m1 + m2, false);
    for (NodeId x = 0; x < g0.node_count(); ++x) {
        const int a = f.node_map[x], b = g.node_map[x];
        if (a != kUndefined && b != kUndefined)
            nodes.unite(static_cast<std::size_t>(a), n1 + static_cast<std::size_t>(b));
        else if (a != kUndefined)
            node_tainted[static_cast<std::size_t>(a)] = true;
        else if (b != kUndefined)
            node_tainted[n1 + static_cast<std::size_t>(b)] = true;
    }
    for (EdgeId x = 0; x < g0.edge_count(); ++x) {
        const int a = f.edge_map[x], b = g.edge_map[x];
        if (a != kUndefined && b != kUndefined)
            edges.unite(static_cast<std::size_t>(a), m1 + static_cast<std::size_t>(b));
        else if (a != kUndefined)
            edge_tainted[static_cast<std::size_t>(a)] = true;
        else if (b != kUndefined)
            edge_tainted[m1 + static_cast<std::size_t>(b)] = true;
    }

    std::vector<bool> node_class_valid(n1 + n2, true), edge_class_valid(m1 + m2, true);
    for (std::size_t i = 0; i < n1 + n2; ++i)
        if (node_tainted[i])
            node_class_valid[nodes.find(i)] = false;
    for (std::size_t i = 0; i < m1 + m2; ++i)
        if (edge_tainted[i])
            edge_class_valid[edges.find(i)] = false;
    auto edge_at = [&](std::size_t i) -> const Edge& {
        return i < m1 ? g1.edge(static_cast<EdgeId>(i)) : g2.edge(static_cast<EdgeId>(i - m1));
    };
    auto node_index = [&](std::size_t i, NodeId v) { return i < m1 ? v : n1 + v; };
    for (std::size_t i = 0; i < m1 + m2; ++i)
        for (NodeId v : edge_at(i).conn)
            if (!node_class_valid[nodes.find(node_index(i, v))])
                edge_class_valid[edges.find(i)] = false;

    Pushout out;
    out.graph = Hypergraph(g1.signature() ? g1.signature() : g2.signature());
    std::vector<int> node_class_id(n1 + n2, kUndefined), edge_class_id(m1 + m2, kUndefined);
    for (std::size_t i = 0; i < n1 + n2; ++i) {
        const std::size_t root = nodes.find(i);
        if (node_class_valid[root] && node_class_id[root] == kUndefined)
            node_class_id[root] = static_cast<int>(out.graph.add_node());
    }
    for (std::size_t i = 0; i < m1 + m2; ++i) {
        const std::size_t root = edges.find(i);
        if (!edge_class_valid[root] || edge_class_id[root] != kUndefined)
            continue;
        const Edge& rep = edge_at(i);
        std::vector<NodeId> conn;
        for (NodeId v : rep.conn)
            conn.push_back(static_cast<NodeId>(node_class_id[nodes.find(node_index(i, v))]));
        edge_class_id[root] = static_cast<int>(out.graph.add_edge(rep.label, std::move(conn)));
    }

    out.from_first = PartialMorphism::undefined_between(g1, out.graph);
    out.from_second = PartialMorphism::undefined_between(g2, out.graph);
    for (std::size_t v = 0; v < n1; ++v)
        out.from_first.node_map[v] = node_class_id[nodes.find(v)];
    for (std::size_t v = 0; v < n2; ++v)
        out.from_second.node_map[v] = node_class_id[nodes.find(n1 + v)];
    for (std::size_t e = 0; e < m1; ++e)
        out.from_first.edge_map[e] = edge_class_id[edges.find(e)];
    for (std::size_t e = 0; e < m2; ++e)
        out.from_second.edge_map[e] = edge_class_id[edges.find(m1 + e)];
    return out;
}

RuleApplication apply_rule(const Rule& rule, const PartialMorphism& match) {
    if (!(match.source == rule.lhs()) || !match.is_total())
        throw Error(Errc::TypeMismatch, "match must be a total morphism from the left-hand side");
    if (!is_conflict_free(match, rule.span()) || !is_conflict_free(match, rule.origin()))
        throw Error(Errc::NotConflictFree, "rule '" + rule.name() + "'");
    if (auto nac = violated_nac(rule, match))
        throw Error(Errc::NacViolated, "rule '" + rule.name() + "', condition " + std::to_string(*nac));
    Pushout po = pushout(rule.span(), match);
    return RuleApplication{std::move(po.graph), std::move(po.from_first), std::move(po.from_second)};
}

std::string describe_mapping(const PartialMorphism& m) {
    std::ostringstream out;
    out << '{';
    for (std::size_t v = 0; v < m.node_map.size(); ++v) {
        if (v)
            out << ", ";
        out << v << "->";
        if (m.node_map[v] == kUndefined)
            out << '_';
        else
            out << m.node_map[v];
    }
    out << '}';
    return out.str();
}

} // namespace uncover
