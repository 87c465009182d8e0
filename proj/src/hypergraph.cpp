#include "uncover/hypergraph.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace uncover {

LabelId Signature::add(std::string name, unsigned arity) {
    if (find(name))
        throw Error(Errc::DuplicateName, "label '" + name + "' declared twice");
    names_.push_back(std::move(name));
    arities_.push_back(arity);
    return static_cast<LabelId>(names_.size() - 1);
}

std::optional<LabelId> Signature::find(std::string_view name) const {
    for (std::size_t i = 0; i < names_.size(); ++i)
        if (names_[i] == name)
            return static_cast<LabelId>(i);
    return std::nullopt;
}

bool Signature::all_binary() const {
    return std::all_of(arities_.begin(), arities_.end(), [](unsigned a) { return a == 2; });
}

bool same_signature(const SignaturePtr& a, const SignaturePtr& b) {
    if (a == b)
        return true;
    if (!a || !b)
        return (!a || a->size() == 0) && (!b || b->size() == 0);
    return *a == *b;
}

EdgeId Hypergraph::add_edge(LabelId label, std::vector<NodeId> conn) {
    edges_.push_back(Edge{label, std::move(conn)});
    return static_cast<EdgeId>(edges_.size() - 1);
}

std::vector<EdgeId> Hypergraph::incident_edges(NodeId v) const {
    std::vector<EdgeId> out;
    for (EdgeId e = 0; e < edges_.size(); ++e)
        if (std::find(edges_[e].conn.begin(), edges_[e].conn.end(), v) != edges_[e].conn.end())
            out.push_back(e);
    return out;
}

bool Hypergraph::is_isolated(NodeId v) const {
    for (const auto& e : edges_)
        if (std::find(e.conn.begin(), e.conn.end(), v) != e.conn.end())
            return false;
    return true;
}

bool Hypergraph::operator==(const Hypergraph& other) const {
    return node_count_ == other.node_count_ && edges_ == other.edges_ &&
           same_signature(signature_, other.signature_);
}

SubgraphView restrict_to(const Hypergraph& g, const std::vector<bool>& keep_nodes,
                         const std::vector<bool>& keep_edges) {
    SubgraphView view{Hypergraph(g.signature()), std::vector<int>(g.node_count(), -1),
                      std::vector<int>(g.edge_count(), -1)};
    for (NodeId v = 0; v < g.node_count(); ++v)
        if (keep_nodes[v])
            view.node_map[v] = static_cast<int>(view.graph.add_node());
    for (EdgeId e = 0; e < g.edge_count(); ++e) {
        if (!keep_edges[e])
            continue;
        const Edge& edge = g.edge(e);
        std::vector<NodeId> conn;
        bool ok = true;
        for (NodeId v : edge.conn) {
            if (view.node_map[v] < 0) {
                ok = false;
                break;
            }
            conn.push_back(static_cast<NodeId>(view.node_map[v]));
        }
        if (ok)
            view.edge_map[e] = static_cast<int>(view.graph.add_edge(edge.label, std::move(conn)));
    }
    return view;
}

std::optional<Error> validate(const Hypergraph& g) {
    const auto& sig = g.signature();
    for (EdgeId e = 0; e < g.edge_count(); ++e) {
        const Edge& edge = g.edge(e);
        if (!sig || !sig->contains(edge.label))
            return Error(Errc::UnknownLabel, "edge " + std::to_string(e));
        if (edge.conn.size() != sig->arity(edge.label))
            return Error(Errc::ArityMismatch,
                         "edge " + std::to_string(e) + " (" + sig->name(edge.label) + ") has " +
                             std::to_string(edge.conn.size()) + " endpoints, arity is " +
                             std::to_string(sig->arity(edge.label)));
        for (NodeId v : edge.conn)
            if (v >= g.node_count())
                return Error(Errc::DanglingEndpoint,
                             "edge " + std::to_string(e) + " references node " + std::to_string(v));
    }
    return std::nullopt;
}

void validate_or_throw(const Hypergraph& g) {
    if (auto err = validate(g))
        throw *err;
}

namespace {

// Exhaustive search over elementary undirected paths. `limit` lets callers stop
// once a path longer than a bound is known to exist.
class PathSearch {
public:
    PathSearch(const Hypergraph& g, std::size_t limit)
        : g_(g), limit_(limit), node_used_(g.node_count(), false), edge_used_(g.edge_count(), false),
          incident_(g.node_count()) {
        for (EdgeId e = 0; e < g.edge_count(); ++e) {
            const auto& conn = g.edge(e).conn;
            for (std::size_t i = 0; i < conn.size(); ++i)
                if (std::find(conn.begin(), conn.begin() + static_cast<long>(i), conn[i]) ==
                    conn.begin() + static_cast<long>(i))
                    incident_[conn[i]].push_back(e);
        }
    }

    std::size_t run() {
        for (NodeId v = 0; v < g_.node_count() && best_ <= limit_; ++v) {
            node_used_[v] = true;
            extend(v, 0);
            node_used_[v] = false;
        }
        return best_;
    }

private:
    void extend(NodeId v, std::size_t length) {
        best_ = std::max(best_, length);
        if (best_ > limit_)
            return;
        for (EdgeId e : incident_[v]) {
            if (edge_used_[e])
                continue;
            edge_used_[e] = true;
            for (NodeId w : g_.edge(e).conn) {
                if (node_used_[w])
                    continue;
                node_used_[w] = true;
                extend(w, length + 1);
                node_used_[w] = false;
                if (best_ > limit_)
                    break;
            }
            edge_used_[e] = false;
            if (best_ > limit_)
                return;
        }
    }

    const Hypergraph& g_;
    std::size_t limit_;
    std::size_t best_ = 0;
    std::vector<bool> node_used_;
    std::vector<bool> edge_used_;
    std::vector<std::vector<EdgeId>> incident_;
};

} // namespace

std::size_t longest_undirected_path(const Hypergraph& g) {
    return PathSearch(g, g.edge_count() + 1).run();
}

bool has_path_longer_than(const Hypergraph& g, std::size_t bound) {
    if (g.edge_count() <= bound)
        return false;
    return PathSearch(g, bound).run() > bound;
}

bool is_directed_graph(const Hypergraph& g) {
    return std::all_of(g.edges().begin(), g.edges().end(),
                       [](const Edge& e) { return e.conn.size() == 2; });
}

std::size_t max_parallel_multiplicity(const Hypergraph& g) {
    if (!is_directed_graph(g))
        throw Error(Errc::NotDirectedGraph, "multiplicity is only defined for binary edges");
    std::map<std::tuple<LabelId, NodeId, NodeId>, std::size_t> counts;
    std::size_t best = 0;
    for (const auto& e : g.edges())
        best = std::max(best, ++counts[{e.label, e.conn[0], e.conn[1]}]);
    return best;
}

bool in_restriction(const Hypergraph& g, const RestrictionSpec& q) {
    if (std::holds_alternative<AllGraphs>(q))
        return true;
    if (const auto* p = std::get_if<PathBound>(&q))
        return !has_path_longer_than(g, p->k);
    const auto& pm = std::get<PathAndMultBound>(q);
    if (!is_directed_graph(g))
        throw Error(Errc::NotDirectedGraph, "path-and-multiplicity bound needs binary edges");
    return max_parallel_multiplicity(g) <= pm.k && !has_path_longer_than(g, pm.n);
}

std::string describe(const RestrictionSpec& q) {
    std::ostringstream out;
    if (std::holds_alternative<AllGraphs>(q))
        out << "none";
    else if (const auto* p = std::get_if<PathBound>(&q))
        out << "path " << p->k;
    else {
        const auto& pm = std::get<PathAndMultBound>(q);
        out << "pathmult " << pm.n << ' ' << pm.k;
    }
    return out.str();
}

} // namespace uncover
