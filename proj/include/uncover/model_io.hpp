#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "uncover/backward.hpp"

namespace uncover {

struct NamedGraph {
    std::string name;
    Hypergraph graph;
    std::vector<std::string> node_names;
    std::vector<std::string> edge_names;
};

struct AnalysisSpec {
    OrderKind order = OrderKind::Subgraph;
    int variant = 2;
    RestrictionSpec restriction = AllGraphs{};
    std::vector<std::string> error_graphs;
    std::vector<std::string> initial_graphs;
    bool assume_closed_under_reachability = false;
    std::optional<std::size_t> max_iterations;
};

struct Model {
    SignaturePtr signature;
    std::vector<NamedGraph> graphs;
    std::vector<Rule> rules;
    std::optional<AnalysisSpec> analysis;

    const NamedGraph* find_graph(std::string_view name) const;
    const Rule* find_rule(std::string_view name) const;
};

/// Parses the text model format. Errors carry "source:line:col:" prefixes.
Model parse_model(std::string_view text, std::string_view source = "<input>");
Model load_model(const std::string& path);

/// The analysis block as a problem. Throws MissingOrder when there is none.
AnalysisProblem make_problem(const Model& model);

std::string serialize_signature(const Signature& sig);
/// A `graph` block with ordinal names n0.., e0...
std::string serialize_graph(const Hypergraph& g, std::string_view name);
std::string serialize_rule(const Rule& rule);
/// Signature, graphs, rules and analysis block; parses back to an equivalent model.
std::string serialize_model(const Model& model);

/// Graphviz rendering: binary edges as arrows, unary labels folded into the
/// node label, other arities as boxes with numbered tentacles.
std::string to_dot(const Hypergraph& g, std::string_view name);

} // namespace uncover
