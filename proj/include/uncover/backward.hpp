#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "uncover/poc.hpp"

namespace uncover {

struct AnalysisProblem {
    std::vector<Rule> rules;
    OrderKind order = OrderKind::Subgraph;
    int variant = 2;
    RestrictionSpec restriction = AllGraphs{};
    std::vector<Hypergraph> error_basis;
    std::size_t max_iterations = 1000;
    std::vector<Hypergraph> initial_graphs;
    /// User assertion that the restriction is closed under reachability.
    bool assume_closed_under_reachability = false;
};

/// Throws InvalidProblem (or the order's own errors) when the problem is malformed.
void validate_problem(const AnalysisProblem& problem);

struct IterationRecord {
    std::size_t added = 0;      ///< graphs newly entering W
    std::size_t basis_size = 0; ///< |W| after minimisation
    std::vector<std::string> added_keys;
    /// The added graphs themselves, while the trace is under its memory cap.
    std::vector<Hypergraph> added_graphs;
};

struct BasisResult {
    std::vector<Hypergraph> basis;
    bool converged = false;
    std::size_t iterations = 0;
    std::size_t prepared_rules = 0;
    /// Index 0 is the minimised error basis; entry i is backward step i.
    std::vector<IterationRecord> trace;
    /// Step at which each basis element was added (parallel to basis).
    std::vector<std::size_t> basis_iteration;
    bool trace_truncated = false;
};

enum class VerdictTag { GeneralCoverable, NotRestrictedCoverable, NotCoverable, UnknownNotConverged };

struct Verdict {
    VerdictTag tag = VerdictTag::UnknownNotConverged;
    std::optional<std::size_t> witness_iteration;
};

std::string_view to_string(VerdictTag tag);

/// Every rule composed with every order morphism out of its right-hand side,
/// deduplicated, without those whose span is itself an order morphism.
std::vector<Rule> prepare_rules(const std::vector<Rule>& rules, OrderKind order);

/// One backward step over all of w; returns the new minimised working set.
std::vector<Hypergraph> backward_step(const std::vector<Hypergraph>& w, const std::vector<Rule>& prepared,
                                      OrderKind order, int variant, const RestrictionSpec& restriction);

struct RunOptions {
    /// Total number of graphs kept in the trace before it switches to keys only.
    std::size_t trace_graph_cap = 20000;
    /// Worker threads for the step; 0 reads UNCOVERKIT_THREADS, defaulting to 1.
    unsigned threads = 0;
    std::function<void(std::size_t iteration, std::size_t basis_size, std::size_t frontier)> progress;
};

/// Procedure 1. Never throws IterationBudgetExhausted; a spent budget shows
/// as converged == false.
BasisResult run(const AnalysisProblem& problem, const RunOptions& options = {});

Verdict decide_cover(const Hypergraph& g0, const BasisResult& result, const AnalysisProblem& problem);

} // namespace uncover
