#include "uncover/backward.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <map>
#include <set>
#include <thread>

#include "uncover/canonical.hpp"

namespace uncover {

std::string_view to_string(VerdictTag tag) {
    switch (tag) {
    case VerdictTag::GeneralCoverable:
        return "GeneralCoverable";
    case VerdictTag::NotRestrictedCoverable:
        return "NotRestrictedCoverable";
    case VerdictTag::NotCoverable:
        return "NotCoverable";
    case VerdictTag::UnknownNotConverged:
        return "UnknownNotConverged";
    }
    return "?";
}

void validate_problem(const AnalysisProblem& p) {
    if (p.variant != 1 && p.variant != 2)
        throw Error(Errc::InvalidProblem, "variant must be 1 or 2");
    if (p.error_basis.empty())
        throw Error(Errc::InvalidProblem, "no error graphs given");
    if (p.variant == 1 && std::holds_alternative<AllGraphs>(p.restriction))
        throw Error(Errc::InvalidProblem, "variant 1 needs a restriction");
    if (p.order == OrderKind::InducedSubgraph &&
        (p.variant != 1 || !std::holds_alternative<PathAndMultBound>(p.restriction)))
        throw Error(Errc::InvalidProblem,
                    "the induced subgraph order needs variant 1 with a path-and-multiplicity bound");
    for (const auto& f : p.error_basis) {
        validate_or_throw(f);
        require_supported(p.order, f);
        if (p.variant == 1 && !in_restriction(f, p.restriction))
            throw Error(Errc::InvalidProblem, "an error graph lies outside the restriction");
    }
    for (const auto& rule : p.rules) {
        require_supported(p.order, rule.lhs());
        require_supported(p.order, rule.rhs());
        if (auto err = check_morphism(rule.span()))
            throw *err;
    }
}

namespace {

// Rules as graphs: one node per element of L, R and the origin's right-hand
// side, marked by kind and label, with position edges from hyperedge-elements
// to their nodes and map edges along both spans. Isomorphic encodings mean
// interchangeable rules.
std::string rule_key(const PartialMorphism& span, const PartialMorphism& origin) {
    const auto& base = span.source.signature() ? *span.source.signature() : Signature{};
    auto sig = std::make_shared<Signature>();
    const LabelId l_node = sig->add("ln", 1), r_node = sig->add("rn", 1), o_node = sig->add("on", 1),
                  map = sig->add("map", 2), omap = sig->add("omap", 2);
    std::vector<LabelId> l_edge, r_edge, o_edge;
    unsigned max_arity = 0;
    for (LabelId l = 0; l < base.size(); ++l) {
        l_edge.push_back(sig->add("le" + std::to_string(l), 1));
        r_edge.push_back(sig->add("re" + std::to_string(l), 1));
        o_edge.push_back(sig->add("oe" + std::to_string(l), 1));
        max_arity = std::max(max_arity, base.arity(l));
    }
    std::vector<LabelId> pos;
    for (unsigned i = 0; i < max_arity; ++i)
        pos.push_back(sig->add("p" + std::to_string(i), 2));

    Hypergraph enc(sig);
    auto add_side = [&](const Hypergraph& g, LabelId node_label, const std::vector<LabelId>& edge_labels,
                        std::vector<NodeId>& node_of, std::vector<NodeId>& edge_of) {
        for (NodeId v = 0; v < g.node_count(); ++v) {
            node_of.push_back(enc.add_node());
            enc.add_edge(node_label, {node_of.back()});
        }
        for (EdgeId e = 0; e < g.edge_count(); ++e) {
            edge_of.push_back(enc.add_node());
            enc.add_edge(edge_labels[g.edge(e).label], {edge_of.back()});
            const auto& conn = g.edge(e).conn;
            for (std::size_t i = 0; i < conn.size(); ++i)
                enc.add_edge(pos[i], {edge_of.back(), node_of[conn[i]]});
        }
    };
    std::vector<NodeId> ln, le, rn, re, on, oe;
    add_side(span.source, l_node, l_edge, ln, le);
    add_side(span.target, r_node, r_edge, rn, re);
    add_side(origin.target, o_node, o_edge, on, oe);
    auto add_maps = [&](const PartialMorphism& m, LabelId label, const std::vector<NodeId>& to_nodes,
                        const std::vector<NodeId>& to_edges) {
        for (std::size_t v = 0; v < m.node_map.size(); ++v)
            if (m.node_map[v] != kUndefined)
                enc.add_edge(label, {ln[v], to_nodes[static_cast<std::size_t>(m.node_map[v])]});
        for (std::size_t e = 0; e < m.edge_map.size(); ++e)
            if (m.edge_map[e] != kUndefined)
                enc.add_edge(label, {le[e], to_edges[static_cast<std::size_t>(m.edge_map[e])]});
    };
    add_maps(span, map, rn, re);
    add_maps(origin, omap, on, oe);
    return canonical_key(enc);
}

unsigned worker_count(unsigned requested) {
    if (requested > 0)
        return requested;
    if (const char* env = std::getenv("UNCOVERKIT_THREADS")) {
        const long n = std::strtol(env, nullptr, 10);
        if (n > 0)
            return static_cast<unsigned>(std::min<long>(n, 256));
    }
    return 1;
}

// Candidate predecessors of every graph in `frontier`, in a fixed order
// (frontier graph, rule, comatch, complement) regardless of thread count.
std::vector<Hypergraph> expand(const std::vector<Hypergraph>& frontier, const std::vector<Rule>& prepared,
                               OrderKind order, int variant, const RestrictionSpec& restriction,
                               unsigned threads) {
    const std::size_t items = frontier.size() * prepared.size();
    std::vector<std::vector<Hypergraph>> results(items);
    std::vector<std::exception_ptr> errors(items);
    auto work = [&](std::size_t item) {
        const Hypergraph& g = frontier[item / prepared.size()];
        const Rule& rule = prepared[item % prepared.size()];
        try {
            search_morphisms(rule.rhs(), g, {}, {}, {}, [&](const std::vector<int>& nodes, const std::vector<int>& edges) {
                PartialMorphism comatch{rule.rhs(), g, nodes, edges};
                auto poc = minimal_pushout_complements(
                    PocRequest{.rule = rule, .comatch = comatch, .order = order, .variant = variant,
                               .restriction = restriction});
                for (auto& c : poc.complements)
                    results[item].push_back(std::move(c.graph));
                return true;
            });
        } catch (...) {
            errors[item] = std::current_exception();
        }
    };
    if (threads <= 1 || items <= 1) {
        for (std::size_t i = 0; i < items; ++i)
            work(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < std::min<std::size_t>(threads, items); ++t)
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < items; i = next++)
                    work(i);
            });
        for (auto& th : pool)
            th.join();
    }
    std::vector<Hypergraph> out;
    for (std::size_t i = 0; i < items; ++i) {
        if (errors[i])
            std::rethrow_exception(errors[i]);
        for (auto& g : results[i])
            out.push_back(std::move(g));
    }
    return out;
}

} // namespace

std::vector<Rule> prepare_rules(const std::vector<Rule>& rules, OrderKind order) {
    std::vector<Rule> out;
    for (const Rule& rule : rules) {
        std::set<std::string> seen;
        std::size_t index = 0;
        for (const auto& smaller : enumerate_order_morphisms(rule.rhs(), order)) {
            PartialMorphism span = compose(rule.span(), smaller.mu);
            if (order_morphism_check(span, order))
                continue;
            if (!seen.insert(rule_key(span, rule.span())).second)
                continue;
            out.emplace_back(rule.name() + "#" + std::to_string(index++), std::move(span), rule.nacs(), rule.span());
        }
    }
    return out;
}

std::vector<Hypergraph> backward_step(const std::vector<Hypergraph>& w, const std::vector<Rule>& prepared,
                                      OrderKind order, int variant, const RestrictionSpec& restriction) {
    std::vector<Hypergraph> all = w;
    for (auto& g : expand(w, prepared, order, variant, restriction, worker_count(0)))
        all.push_back(std::move(g));
    return minimize(all, order);
}

BasisResult run(const AnalysisProblem& problem, const RunOptions& options) {
    validate_problem(problem);
    const unsigned threads = worker_count(options.threads);
    const std::vector<Rule> prepared = prepare_rules(problem.rules, problem.order);

    BasisResult result;
    result.prepared_rules = prepared.size();
    std::vector<Hypergraph> w = minimize(problem.error_basis, problem.order);
    std::map<std::string, std::size_t> added_at;
    std::size_t traced_graphs = 0;
    auto record = [&](const std::vector<Hypergraph>& added, std::size_t iteration) {
        IterationRecord rec;
        rec.added = added.size();
        rec.basis_size = w.size();
        for (const auto& g : added) {
            rec.added_keys.push_back(canonical_key(g));
            added_at.emplace(rec.added_keys.back(), iteration);
        }
        if (traced_graphs + added.size() <= options.trace_graph_cap) {
            rec.added_graphs = added;
            traced_graphs += added.size();
        } else {
            result.trace_truncated = true;
        }
        result.trace.push_back(std::move(rec));
    };
    record(w, 0);

    std::vector<Hypergraph> frontier = w;
    while (true) {
        if (options.progress)
            options.progress(result.iterations, w.size(), frontier.size());
        std::vector<Hypergraph> fresh;
        for (auto& g : expand(frontier, prepared, problem.order, problem.variant, problem.restriction, threads))
            if (!upward_member(g, w, problem.order))
                fresh.push_back(std::move(g));
        if (fresh.empty()) {
            result.converged = true;
            break;
        }
        if (result.iterations >= problem.max_iterations)
            break;
        fresh = minimize(fresh, problem.order);
        std::set<std::string> fresh_keys;
        for (const auto& g : fresh)
            fresh_keys.insert(canonical_key(g));
        std::vector<Hypergraph> merged = w;
        merged.insert(merged.end(), fresh.begin(), fresh.end());
        w = minimize(merged, problem.order);
        frontier.clear();
        for (const auto& g : w)
            if (fresh_keys.count(canonical_key(g)))
                frontier.push_back(g);
        ++result.iterations;
        record(frontier, result.iterations);
    }
    result.basis = w;
    for (const auto& g : w)
        result.basis_iteration.push_back(added_at.at(canonical_key(g)));
    return result;
}

Verdict decide_cover(const Hypergraph& g0, const BasisResult& result, const AnalysisProblem& problem) {
    std::optional<std::size_t> first;
    if (!result.trace_truncated) {
        for (std::size_t i = 0; i < result.trace.size() && !first; ++i)
            if (upward_member(g0, result.trace[i].added_graphs, problem.order))
                first = i;
    } else {
        for (std::size_t i = 0; i < result.basis.size(); ++i)
            if (leq(result.basis[i], g0, problem.order))
                first = std::min(first.value_or(result.basis_iteration[i]), result.basis_iteration[i]);
    }
    if (first)
        return Verdict{VerdictTag::GeneralCoverable, first};
    if (!result.converged)
        return Verdict{VerdictTag::UnknownNotConverged, std::nullopt};
    if (problem.variant == 2 || problem.assume_closed_under_reachability)
        return Verdict{VerdictTag::NotCoverable, std::nullopt};
    return Verdict{VerdictTag::NotRestrictedCoverable, std::nullopt};
}

} // namespace uncover
