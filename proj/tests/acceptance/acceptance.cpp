// One PASS/FAIL line per acceptance criterion. Exit status 1 if any fails.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>

#include "support/generators.hpp"
#include "support/oracles.hpp"
#include "support/poc_oracle.hpp"
#include "uncover/backward.hpp"
#include "uncover/canonical.hpp"
#include "uncover/forward.hpp"

using namespace uncover;

namespace {

constexpr double kRightsSeconds = 60.0;
constexpr std::size_t kPocInstances = 240;
constexpr std::size_t kPocNodes = 4, kPocEdges = 4;
constexpr std::size_t kOrderCorpusNodes = 4;
constexpr std::size_t kAgreementSystems = 60;
constexpr std::size_t kTerminationSystems = 60;
constexpr std::size_t kWitnessMaxLength = 5;

int failures = 0;

// ACCEPTANCE_SEED shifts every generator seed, for exploring beyond the pinned runs.
unsigned seed(unsigned base) {
    const char* env = std::getenv("ACCEPTANCE_SEED");
    return base + (env ? static_cast<unsigned>(std::strtoul(env, nullptr, 10)) : 0u);
}

void report(const char* name, bool pass, const std::string& detail) {
    std::printf("%-24s %s  %s\n", name, pass ? "PASS" : "FAIL", detail.c_str());
    std::fflush(stdout);
    failures += !pass;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

// Some node that carries an O edge and has two distinct W edges attached.
bool has_contested_object(const Hypergraph& g) {
    const auto& sig = *g.signature();
    const LabelId o = *sig.find("O"), w = *sig.find("W");
    for (NodeId v = 0; v < g.node_count(); ++v) {
        bool object = false;
        std::size_t writes = 0;
        for (const Edge& e : g.edges()) {
            object = object || (e.label == o && e.conn[0] == v);
            writes += e.label == w && (e.conn[0] == v || e.conn[1] == v);
        }
        if (object && writes >= 2)
            return true;
    }
    return false;
}

void rights_checks() {
    const Model m = gen::load("rights.gts");
    const AnalysisProblem problem = make_problem(m);
    const auto t0 = std::chrono::steady_clock::now();
    const BasisResult result = run(problem);
    const double secs = seconds_since(t0);
    report("rights-basis", result.converged && result.basis.size() == 4 && secs <= kRightsSeconds,
           fmt("converged=%s basis=%zu (want 4) time=%.3fs (limit %.0fs)", result.converged ? "yes" : "no",
               result.basis.size(), secs, kRightsSeconds));

    const Hypergraph& error = m.find_graph("error")->graph;
    bool has_error = false, all_contested = !result.basis.empty();
    for (const auto& b : result.basis) {
        has_error = has_error || oracle::isomorphic(b, error);
        all_contested = all_contested && has_contested_object(b);
    }
    report("rights-basis-content", has_error && all_contested,
           fmt("error graph in basis=%s, every element has an object with two W edges=%s", has_error ? "yes" : "no",
               all_contested ? "yes" : "no"));

    const Verdict empty = decide_cover(m.find_graph("empty")->graph, result, problem);
    report("rights-empty-safe", empty.tag == VerdictTag::NotCoverable,
           fmt("verdict for the empty graph: %s", std::string(to_string(empty.tag)).c_str()));

    const Hypergraph& start = m.find_graph("double_write")->graph;
    const auto fw = coverable_bounded(start, {error}, OrderKind::Subgraph, problem.rules,
                                      ExploreBounds{kWitnessMaxLength});
    bool replayed = false;
    if (fw.witness)
        replayed = oracle::embeds(error, replay(*fw.witness, problem.rules), false);
    report("trading-witness", fw.witness && replayed && fw.witness->steps.size() <= kWitnessMaxLength,
           fw.witness ? fmt("witness of %zu steps (limit %zu), replay covers the error graph=%s",
                            fw.witness->steps.size(), kWitnessMaxLength, replayed ? "yes" : "no")
                      : fmt("no witness within %zu steps", kWitnessMaxLength));
}

void transclosure_check() {
    const Model m = gen::load("transclosure.gts");
    const AnalysisProblem problem = make_problem(m);
    const BasisResult result = run(problem);
    bool all_parallel = !result.basis.empty();
    for (const auto& b : result.basis)
        all_parallel = all_parallel && oracle::multiplicity(b) >= 2;
    report("nac-basis", result.converged && all_parallel,
           fmt("converged=%s basis=%zu, all with two parallel A edges=%s", result.converged ? "yes" : "no",
               result.basis.size(), all_parallel ? "yes" : "no"));
}

void poc_check() {
    struct Setting {
        OrderKind order;
        int variant;
        RestrictionSpec q;
        SignaturePtr sig;
        bool nacs;
    };
    const std::vector<Setting> settings{
        {OrderKind::Subgraph, 2, AllGraphs{}, gen::signature({{"U", 1}, {"A", 2}}), false},
        {OrderKind::Subgraph, 1, PathBound{2}, gen::signature({{"U", 1}, {"A", 2}}), true},
        {OrderKind::InducedSubgraph, 1, PathAndMultBound{3, 2}, gen::signature({{"A", 2}}), true},
        {OrderKind::Subgraph, 2, AllGraphs{}, gen::signature({{"A", 2}, {"B", 2}}), true},
    };
    std::mt19937 rng(seed(2024));
    std::size_t done = 0, mismatches = 0, unsound = 0, nonempty = 0;
    for (std::size_t i = 0; done < kPocInstances; ++i) {
        const auto& st = settings[i % settings.size()];
        auto inst = gen::random_poc_instance(st.sig, rng, st.nacs);
        if (!inst || inst->comatch.target.node_count() > kPocNodes)
            continue;
        // Under the induced order every way of wiring edges to deleted nodes is
        // its own minimal complement; two deleted nodes already give millions.
        if (st.order == OrderKind::InducedSubgraph && gen::deleted_nodes(inst->rule) > 1)
            continue;
        if (std::getenv("ACCEPTANCE_VERBOSE"))
            std::fprintf(stderr, "%s%s", serialize_rule(inst->rule).c_str(),
                         serialize_graph(inst->comatch.target, "S").c_str());
        const auto t0 = std::chrono::steady_clock::now();
        const auto cmp = oracle::compare_poc(PocRequest{inst->rule, inst->comatch, st.order, st.variant, st.q},
                                             kPocNodes, kPocEdges);
        if (std::getenv("ACCEPTANCE_VERBOSE"))
            std::fprintf(stderr, "poc %zu setting %zu: %.2fs\n", done, i % settings.size(), seconds_since(t0));
        mismatches += !cmp.complete;
        unsound += !cmp.sound;
        nonempty += cmp.expected > 0;
        ++done;
    }
    report("poc-vs-exhaustion", mismatches == 0 && unsound == 0,
           fmt("%zu instances (%zu with complements), %zu mismatches, %zu unsound results, budget %zu nodes %zu edges",
               done, nonempty, mismatches, unsound, kPocNodes, kPocEdges));
}

void order_check() {
    auto sig = gen::signature({{"A", 2}, {"B", 2}});
    std::mt19937 rng(seed(7));
    std::vector<Hypergraph> corpus;
    for (int i = 0; i < 45; ++i)
        corpus.push_back(gen::random_graph(sig, rng, kOrderCorpusNodes, 5));
    for (int i = 0; i < 15; ++i) {
        Hypergraph g = corpus[static_cast<std::size_t>(i)];
        if (g.node_count() > 0)
            gen::add_random_edge(g, rng);
        corpus.push_back(g);
    }
    std::size_t pairs = 0, violations = 0;
    for (const auto& a : corpus)
        for (const auto& b : corpus) {
            ++pairs;
            const bool sub = leq(a, b, OrderKind::Subgraph), ind = leq(a, b, OrderKind::InducedSubgraph);
            violations += sub != oracle::embeds(a, b, false);
            violations += ind != oracle::embeds(a, b, true);
            violations += ind && !sub;
            for (auto order : {OrderKind::Subgraph, OrderKind::InducedSubgraph}) {
                const bool ab = order == OrderKind::Subgraph ? sub : ind;
                if (ab && leq(b, a, order) && !oracle::isomorphic(a, b))
                    ++violations;
            }
        }
    std::size_t triples = 0;
    for (auto order : {OrderKind::Subgraph, OrderKind::InducedSubgraph})
        for (const auto& a : corpus) {
            violations += !leq(a, a, order);
            for (const auto& b : corpus) {
                if (!leq(a, b, order))
                    continue;
                for (const auto& c : corpus)
                    if (leq(b, c, order)) {
                        ++triples;
                        violations += !leq(a, c, order);
                    }
            }
        }
    report("order-laws", violations == 0,
           fmt("%zu graphs, %zu pairs, %zu chained triples, %zu violations", corpus.size(), pairs, triples, violations));
}

struct System {
    std::vector<Rule> rules;
    Hypergraph error;
    std::vector<Hypergraph> starts;
};

System random_system(const SignaturePtr& sig, std::mt19937& rng, const gen::RuleShape& shape = {2, 2, 1, 1, 0.8, 0.6, 0.1},
                     std::size_t error_nodes = 2, std::size_t error_edges = 2) {
    System s;
    const std::size_t n = gen::uniform(rng, 1, 3);
    for (std::size_t i = 0; i < n; ++i)
        s.rules.push_back(gen::random_rule(sig, rng, shape, "r" + std::to_string(i)));
    do
        s.error = gen::random_graph(sig, rng, error_nodes, error_edges, 1);
    while (s.error.edge_count() == 0);
    for (int i = 0; i < 4; ++i)
        s.starts.push_back(gen::random_graph(sig, rng, 3, 3));
    return s;
}

void dump(const char* why, const System& s, const Hypergraph& g0) {
    if (!std::getenv("ACCEPTANCE_VERBOSE"))
        return;
    std::string text = serialize_signature(*g0.signature());
    for (const auto& r : s.rules)
        text += serialize_rule(r);
    text += serialize_graph(s.error, "error") + serialize_graph(g0, "start");
    std::fprintf(stderr, "disagreement (%s)\n%s", why, text.c_str());
}

void agreement_check() {
    auto sig = gen::signature({{"U", 1}, {"A", 2}});
    std::mt19937 rng(seed(99));
    std::size_t systems = 0, tried = 0, disagreements = 0, forward_witnesses = 0, backward_confirmed = 0;
    std::size_t longest = 0;
    std::size_t inconclusive = 0;
    while (systems < kAgreementSystems && tried < 20 * kAgreementSystems) {
        ++tried;
        const System s = random_system(sig, rng);
        AnalysisProblem p;
        p.rules = s.rules;
        p.error_basis = {s.error};
        p.max_iterations = 6;
        const BasisResult result = run(p);
        std::size_t max_r_nodes = 0, max_r_edges = 0;
        for (const auto& r : s.rules) {
            max_r_nodes = std::max(max_r_nodes, r.rhs().node_count());
            max_r_edges = std::max(max_r_edges, r.rhs().edge_count());
        }
        bool conclusive = true;
        for (const auto& g0 : s.starts) {
            const Verdict v = decide_cover(g0, result, p);
            if (std::getenv("ACCEPTANCE_VERBOSE"))
                std::fprintf(stderr, "system %zu: converged=%d steps=%zu basis=%zu start %zu/%zu verdict %s\n", tried,
                             result.converged, result.iterations, result.basis.size(), g0.node_count(),
                             g0.edge_count(), std::string(to_string(v.tag)).c_str());
            const auto fw = coverable_bounded(g0, p.error_basis, p.order, p.rules, ExploreBounds{3, 5000, 6, 8});
            if (fw.witness) {
                ++forward_witnesses;
                if (v.tag != VerdictTag::GeneralCoverable) {
                    if (result.converged || fw.witness->steps.size() <= result.iterations) {
                        ++disagreements;
                        dump("forward witness not seen backwards", s, g0);
                    }
                    else
                        conclusive = false;
                }
            }
            if (v.tag == VerdictTag::GeneralCoverable && result.converged) {
                const std::size_t j = *v.witness_iteration;
                const ExploreBounds generous{j, 400000, g0.node_count() + j * max_r_nodes,
                                             g0.edge_count() + j * max_r_edges};
                if (coverable_bounded(g0, p.error_basis, p.order, p.rules, generous).witness) {
                    ++backward_confirmed;
                    longest = std::max(longest, j);
                }
                else {
                    ++disagreements;
                    dump("backward verdict without forward witness", s, g0);
                }
            }
        }
        if (!result.converged && !conclusive) {
            ++inconclusive;
            continue;
        }
        ++systems;
    }
    report("backward-forward", systems >= kAgreementSystems && disagreements == 0,
           fmt("%zu systems (%zu skipped as inconclusive), %zu forward witnesses, %zu backward verdicts replayed "
               "(longest %zu steps), %zu disagreements",
               systems, inconclusive, forward_witnesses, backward_confirmed, longest, disagreements));
}

void termination_check() {
    auto sig = gen::signature({{"U", 1}, {"A", 2}});
    std::mt19937 rng(seed(314));
    std::size_t converged = 0, total = 0, max_steps = 0, max_basis = 0;
    const gen::RuleShape shape{2, 3, 2, 2, 0.8, 0.5, 0.1};
    const auto t0 = std::chrono::steady_clock::now();
    for (; total < kTerminationSystems; ++total) {
        System s = random_system(sig, rng, shape, 3, 3);
        while (has_path_longer_than(s.error, 3))
            s = random_system(sig, rng, shape, 3, 3);
        if (total % 2 == 0) {
            // x => x -A-> fresh: backwards this keeps shrinking paths, with the
            // bound cutting off the ever longer ones
            const auto l = gen::graph(sig, 1, {});
            const auto r = gen::graph(sig, 2, {{"A", {0, 1}}});
            s.rules.emplace_back("grow", gen::morphism(l, r, {0}, {}));
        }
        AnalysisProblem p;
        p.rules = s.rules;
        p.error_basis = {s.error};
        p.variant = 1;
        p.restriction = PathBound{3};
        const BasisResult result = run(p);
        converged += result.converged;
        max_steps = std::max(max_steps, result.iterations);
        max_basis = std::max(max_basis, result.basis.size());
        if (std::getenv("ACCEPTANCE_VERBOSE"))
            std::fprintf(stderr, "system %zu: converged=%d steps=%zu basis=%zu %.1fs\n", total, result.converged,
                         result.iterations, result.basis.size(), seconds_since(t0));
    }
    report("variant1-termination", converged == total,
           fmt("%zu of %zu systems converged (budget %zu steps), longest run %zu steps, largest basis %zu, %.1fs",
               converged, total, AnalysisProblem{}.max_iterations, max_steps, max_basis, seconds_since(t0)));
}

} // namespace

int main(int argc, char** argv) {
    // optional arguments pick groups: rights nac poc order agreement termination
    const std::vector<std::pair<std::string, void (*)()>> groups{
        {"rights", rights_checks}, {"nac", transclosure_check},  {"poc", poc_check},
        {"order", order_check},    {"agreement", agreement_check}, {"termination", termination_check}};
    for (const auto& [name, fn] : groups) {
        bool wanted = argc == 1;
        for (int i = 1; i < argc; ++i)
            wanted = wanted || name == argv[i];
        if (wanted)
            fn();
    }
    return failures == 0 ? 0 : 1;
}
