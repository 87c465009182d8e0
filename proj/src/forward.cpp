#include "uncover/forward.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <unordered_set>

#include "uncover/canonical.hpp"

namespace uncover {

std::vector<Successor> successors(const Hypergraph& g, const std::vector<Rule>& rules) {
    std::vector<Successor> out;
    std::set<std::string> seen;
    for (const Rule& rule : rules) {
        for (auto& m : enumerate_matches(rule.lhs(), g, &rule)) {
            if (violated_nac(rule, m))
                continue;
            RuleApplication app = apply_rule(rule, m);
            if (!seen.insert(canonical_key(app.result)).second)
                continue;
            std::string description = rule.name() + " at " + describe_mapping(m);
            out.push_back(Successor{std::move(app.result), rule.name(), std::move(m), std::move(description)});
        }
    }
    return out;
}

ForwardOutcome coverable_bounded(const Hypergraph& g0, const std::vector<Hypergraph>& f, OrderKind order,
                                 const std::vector<Rule>& rules, const ExploreBounds& bounds) {
    struct State {
        Hypergraph graph;
        std::size_t parent;
        std::size_t depth;
        std::optional<WitnessStep> step;
    };
    std::vector<State> states;
    std::unordered_set<std::string> visited;
    ForwardOutcome outcome;

    auto witness_to = [&](std::size_t index) {
        Witness w;
        w.start = g0;
        w.end = states[index].graph;
        for (std::size_t i = index; i != 0; i = states[i].parent)
            w.steps.push_back(*states[i].step);
        std::reverse(w.steps.begin(), w.steps.end());
        return w;
    };

    states.push_back(State{g0, 0, 0, std::nullopt});
    visited.insert(canonical_key(g0));
    outcome.explored = 1;
    if (upward_member(g0, f, order)) {
        outcome.witness = witness_to(0);
        return outcome;
    }
    std::deque<std::size_t> queue{0};
    while (!queue.empty()) {
        const std::size_t current = queue.front();
        queue.pop_front();
        if (states[current].depth >= bounds.max_depth)
            continue;
        for (auto& succ : successors(states[current].graph, rules)) {
            if (succ.graph.node_count() > bounds.max_nodes || succ.graph.edge_count() > bounds.max_edges)
                continue;
            std::string key = canonical_key(succ.graph);
            if (!visited.insert(key).second)
                continue;
            if (states.size() >= bounds.max_states)
                return outcome;
            WitnessStep step{succ.rule, std::move(succ.match), std::move(succ.description), std::move(key),
                             succ.graph};
            states.push_back(State{std::move(succ.graph), current, states[current].depth + 1, std::move(step)});
            ++outcome.explored;
            if (upward_member(states.back().graph, f, order)) {
                outcome.witness = witness_to(states.size() - 1);
                return outcome;
            }
            queue.push_back(states.size() - 1);
        }
    }
    return outcome;
}

Hypergraph replay(const Witness& witness, const std::vector<Rule>& rules) {
    Hypergraph current = witness.start;
    for (const auto& step : witness.steps) {
        const Rule* rule = nullptr;
        for (const auto& r : rules)
            if (r.name() == step.rule)
                rule = &r;
        if (!rule)
            throw Error(Errc::UndeclaredReference, "witness uses unknown rule '" + step.rule + "'");
        if (!(step.match.target == current))
            throw Error(Errc::TypeMismatch, "witness match does not fit the current graph");
        current = apply_rule(*rule, step.match).result;
    }
    return current;
}

} // namespace uncover
