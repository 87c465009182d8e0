#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "uncover/backward.hpp"
#include "uncover/canonical.hpp"
#include "uncover/forward.hpp"
#include "uncover/model_io.hpp"

using namespace uncover;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitCoverable = 10;
constexpr int kExitBudget = 11;

std::string hex(const std::string& bytes) {
    static const char* digits = "0123456789abcdef";
    std::string out;
    for (unsigned char c : bytes) {
        out += digits[c >> 4];
        out += digits[c & 15];
    }
    return out;
}

const NamedGraph& graph_or_throw(const Model& model, const std::string& name) {
    const NamedGraph* g = model.find_graph(name);
    if (!g)
        throw Error(Errc::UndeclaredReference, "no graph named '" + name + "'");
    return *g;
}

struct AnalyzeArgs {
    std::string file;
    std::optional<std::size_t> max_iter;
    std::string emit_basis;
    bool json = false;
    bool timing = false;
    bool progress = false;
};

int analyze(const AnalyzeArgs& args) {
    const Model model = load_model(args.file);
    AnalysisProblem problem = make_problem(model);
    if (args.max_iter)
        problem.max_iterations = *args.max_iter;

    RunOptions options;
    if (args.progress)
        options.progress = [](std::size_t it, std::size_t basis, std::size_t frontier) {
            std::cerr << "step " << it << ": basis " << basis << ", frontier " << frontier << '\n';
        };
    const auto started = std::chrono::steady_clock::now();
    const BasisResult result = run(problem, options);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();

    std::vector<std::pair<std::string, Verdict>> verdicts;
    for (std::size_t i = 0; i < problem.initial_graphs.size(); ++i)
        verdicts.emplace_back(model.analysis->initial_graphs[i],
                              decide_cover(problem.initial_graphs[i], result, problem));

    if (!args.emit_basis.empty()) {
        std::filesystem::create_directories(args.emit_basis);
        for (std::size_t i = 0; i < result.basis.size(); ++i) {
            const std::string name = "basis" + std::to_string(i);
            std::ofstream(std::filesystem::path(args.emit_basis) / (name + ".gts"))
                << serialize_signature(*model.signature) << serialize_graph(result.basis[i], name);
            std::ofstream(std::filesystem::path(args.emit_basis) / (name + ".dot")) << to_dot(result.basis[i], name);
        }
    }

    if (args.json) {
        json report;
        report["model"] = std::filesystem::path(args.file).filename().string();
        report["order"] = std::string(to_string(problem.order));
        report["variant"] = problem.variant;
        report["restriction"] = describe(problem.restriction);
        report["prepared_rules"] = result.prepared_rules;
        report["converged"] = result.converged;
        report["iterations"] = result.iterations;
        report["basis"] = json::array();
        for (std::size_t i = 0; i < result.basis.size(); ++i) {
            const std::string name = "basis" + std::to_string(i);
            report["basis"].push_back({{"name", name},
                                       {"nodes", result.basis[i].node_count()},
                                       {"edges", result.basis[i].edge_count()},
                                       {"added_in_step", result.basis_iteration[i]},
                                       {"key", hex(canonical_key(result.basis[i]))},
                                       {"text", serialize_graph(result.basis[i], name)},
                                       {"dot", to_dot(result.basis[i], name)}});
        }
        report["trace"] = json::array();
        for (std::size_t i = 0; i < result.trace.size(); ++i)
            report["trace"].push_back(
                {{"step", i}, {"added", result.trace[i].added}, {"basis_size", result.trace[i].basis_size}});
        report["verdicts"] = json::array();
        for (const auto& [name, v] : verdicts) {
            json entry{{"initial", name}, {"verdict", std::string(to_string(v.tag))}};
            entry["witness_step"] = v.witness_iteration ? json(*v.witness_iteration) : json(nullptr);
            report["verdicts"].push_back(entry);
        }
        if (args.timing)
            report["seconds"] = seconds;
        std::cout << report.dump(2) << '\n';
    } else {
        std::cout << "order: " << to_string(problem.order) << "\nvariant: " << problem.variant
                  << "\nrestriction: " << describe(problem.restriction) << "\nprepared rules: " << result.prepared_rules
                  << "\nsteps: " << result.iterations << "\nconverged: " << (result.converged ? "yes" : "no")
                  << "\nbasis size: " << result.basis.size() << '\n';
        for (std::size_t i = 0; i < result.basis.size(); ++i)
            std::cout << serialize_graph(result.basis[i], "basis" + std::to_string(i));
        for (const auto& [name, v] : verdicts) {
            std::cout << "initial " << name << ": " << to_string(v.tag);
            if (v.witness_iteration)
                std::cout << " (step " << *v.witness_iteration << ")";
            std::cout << '\n';
        }
        if (args.timing)
            std::cout << "time: " << seconds << " s\n";
    }

    for (const auto& [name, v] : verdicts)
        if (v.tag == VerdictTag::GeneralCoverable)
            return kExitCoverable;
    return result.converged ? kExitOk : kExitBudget;
}

int simulate(const std::string& file, const ExploreBounds& bounds, const std::string& from) {
    const Model model = load_model(file);
    const AnalysisProblem problem = make_problem(model);
    std::vector<std::string> starts = model.analysis->initial_graphs;
    if (!from.empty())
        starts = {from};
    bool any = false;
    for (const auto& name : starts) {
        const ForwardOutcome out =
            coverable_bounded(graph_or_throw(model, name).graph, problem.error_basis, problem.order, model.rules, bounds);
        std::cout << "initial " << name << ": ";
        if (!out.witness) {
            std::cout << "NotWithinBounds (" << out.explored << " states)\n";
            continue;
        }
        any = true;
        std::cout << "CoverableWitness, " << out.witness->steps.size() << " steps\n";
        for (const auto& step : out.witness->steps)
            std::cout << "  " << step.description << '\n';
        std::cout << serialize_graph(out.witness->end, "reached");
    }
    return any ? kExitCoverable : kExitOk;
}

int order_check(const std::string& file, const std::string& left, const std::string& right, const std::string& order_name) {
    const Model model = load_model(file);
    OrderKind order = model.analysis ? model.analysis->order : OrderKind::Subgraph;
    if (!order_name.empty()) {
        auto parsed = parse_order(order_name);
        if (!parsed)
            throw Error(Errc::ParseError, "unknown order '" + order_name + "'");
        order = *parsed;
    }
    const auto& l = graph_or_throw(model, left);
    const auto& r = graph_or_throw(model, right);
    const auto witness = order_embedding(l.graph, r.graph, order);
    std::cout << left << " <= " << right << " (" << to_string(order) << "): " << (witness ? "true" : "false") << '\n';
    if (witness) {
        for (std::size_t v = 0; v < witness->node_map.size(); ++v)
            std::cout << "  node " << l.node_names[v] << " -> " << r.node_names[static_cast<std::size_t>(witness->node_map[v])]
                      << '\n';
        for (std::size_t e = 0; e < witness->edge_map.size(); ++e)
            std::cout << "  edge " << l.edge_names[e] << " -> " << r.edge_names[static_cast<std::size_t>(witness->edge_map[e])]
                      << '\n';
    }
    return kExitOk;
}

int poc(const std::string& file, const std::string& rule_name, const std::string& target) {
    const Model model = load_model(file);
    const Rule* rule = model.find_rule(rule_name);
    if (!rule)
        throw Error(Errc::UndeclaredReference, "no rule named '" + rule_name + "'");
    const Hypergraph& s = graph_or_throw(model, target).graph;
    const AnalysisProblem problem = model.analysis ? make_problem(model) : AnalysisProblem{};
    std::size_t comatches = 0;
    search_morphisms(rule->rhs(), s, {}, {}, {}, [&](const std::vector<int>& nodes, const std::vector<int>& edges) {
        PartialMorphism comatch{rule->rhs(), s, nodes, edges};
        const auto result = minimal_pushout_complements(PocRequest{.rule = *rule,
                                                                   .comatch = comatch,
                                                                   .order = problem.order,
                                                                   .variant = problem.variant,
                                                                   .restriction = problem.restriction});
        std::cout << "comatch " << comatches << " (" << describe_mapping(comatch) << "): "
                  << result.complements.size() << " minimal complements\n";
        for (std::size_t i = 0; i < result.complements.size(); ++i)
            std::cout << serialize_graph(result.complements[i].graph,
                                         "c" + std::to_string(comatches) + "_" + std::to_string(i));
        ++comatches;
        return true;
    });
    if (comatches == 0)
        std::cout << "no comatch of the right-hand side into " << target << '\n';
    return kExitOk;
}

int export_dot(const std::string& file, const std::vector<std::string>& names, const std::string& dir) {
    const Model model = load_model(file);
    std::vector<const NamedGraph*> graphs;
    if (names.empty())
        for (const auto& g : model.graphs)
            graphs.push_back(&g);
    for (const auto& n : names)
        graphs.push_back(&graph_or_throw(model, n));
    for (const NamedGraph* g : graphs) {
        if (dir.empty()) {
            std::cout << to_dot(g->graph, g->name);
        } else {
            std::filesystem::create_directories(dir);
            std::ofstream(std::filesystem::path(dir) / (g->name + ".dot")) << to_dot(g->graph, g->name);
        }
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Backward coverability analysis for graph transformation systems"};
    app.require_subcommand(1);

    AnalyzeArgs analyze_args;
    auto* analyze_cmd = app.add_subcommand("analyze", "run the backward search and decide coverability");
    analyze_cmd->add_option("file", analyze_args.file, "model file")->required();
    analyze_cmd->add_option("--max-iter", analyze_args.max_iter, "backward step budget");
    analyze_cmd->add_option("--emit-basis", analyze_args.emit_basis, "directory for basis graphs (.gts and .dot)");
    analyze_cmd->add_flag("--json", analyze_args.json, "machine-readable report");
    analyze_cmd->add_flag("--timing", analyze_args.timing, "include wall-clock time");
    analyze_cmd->add_flag("--progress", analyze_args.progress, "print step statistics to stderr");

    std::string sim_file, sim_from;
    ExploreBounds bounds;
    auto* sim_cmd = app.add_subcommand("simulate", "bounded forward search for an error graph");
    sim_cmd->add_option("file", sim_file, "model file")->required();
    sim_cmd->add_option("--depth", bounds.max_depth, "maximal number of rule applications")->required();
    sim_cmd->add_option("--max-states", bounds.max_states, "state budget");
    sim_cmd->add_option("--max-nodes", bounds.max_nodes, "largest graph explored (nodes)");
    sim_cmd->add_option("--max-edges", bounds.max_edges, "largest graph explored (edges)");
    sim_cmd->add_option("--from", sim_from, "start graph (default: the initial graphs)");

    std::string oc_file, oc_left, oc_right, oc_order;
    auto* oc_cmd = app.add_subcommand("order-check", "decide left <= right and print the embedding");
    oc_cmd->add_option("file", oc_file, "model file")->required();
    oc_cmd->add_option("--left", oc_left, "smaller graph")->required();
    oc_cmd->add_option("--right", oc_right, "larger graph")->required();
    oc_cmd->add_option("--order", oc_order, "subgraph or induced (default: model's order)");

    std::string poc_file, poc_rule, poc_target;
    auto* poc_cmd = app.add_subcommand("poc", "minimal pushout complements for every comatch");
    poc_cmd->add_option("file", poc_file, "model file")->required();
    poc_cmd->add_option("--rule", poc_rule, "rule name")->required();
    poc_cmd->add_option("--target", poc_target, "graph name")->required();

    std::string dot_file, dot_dir;
    std::vector<std::string> dot_graphs;
    auto* dot_cmd = app.add_subcommand("export-dot", "render graphs of a model as Graphviz");
    dot_cmd->add_option("file", dot_file, "model file")->required();
    dot_cmd->add_option("--graph", dot_graphs, "graphs to render (default: all)");
    dot_cmd->add_option("--out", dot_dir, "output directory (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitInput;
    }

    try {
        if (analyze_cmd->parsed())
            return analyze(analyze_args);
        if (sim_cmd->parsed())
            return simulate(sim_file, bounds, sim_from);
        if (oc_cmd->parsed())
            return order_check(oc_file, oc_left, oc_right, oc_order);
        if (poc_cmd->parsed())
            return poc(poc_file, poc_rule, poc_target);
        if (dot_cmd->parsed())
            return export_dot(dot_file, dot_graphs, dot_dir);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInput;
    }
    return kExitOk;
}
