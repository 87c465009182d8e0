#include <catch2/catch_amalgamated.hpp>

#include "support/generators.hpp"
#include "support/poc_oracle.hpp"
#include "uncover/canonical.hpp"
#include "uncover/poc.hpp"

using namespace uncover;

namespace {

Hypergraph graph_named(const Model& m, const std::string& name) { return m.find_graph(name)->graph; }

PocResult complements_of(const Rule& rule, const PartialMorphism& c, int variant = 2,
                         RestrictionSpec q = AllGraphs{}, OrderKind order = OrderKind::Subgraph) {
    return minimal_pushout_complements(PocRequest{rule, c, order, variant, q});
}

} // namespace

TEST_CASE("deleting a node leaves one minimal complement") {
    const Model m = gen::load("rights.gts");
    const Rule& del = *m.find_rule("delete");
    const auto s = gen::graph(m.signature, 1, {{"O", {0}}});
    const auto res = complements_of(del, gen::morphism(del.rhs(), s, {}, {}));
    REQUIRE(res.complements.size() == 1);
    CHECK(isomorphic(res.complements[0].graph, gen::graph(m.signature, 2, {{"O", {0}}})));
    const auto& c = res.complements[0];
    CHECK(verify_complement(del, gen::morphism(del.rhs(), s, {}, {}), c.match).has_value());
}

TEST_CASE("created elements need fresh preimages") {
    const Model m = gen::load("rights.gts");
    const Rule& add_user = *m.find_rule("add_user");
    const auto error = graph_named(m, "error");
    const auto cs = enumerate_matches(add_user.rhs(), error);
    REQUIRE(cs.size() == 2);
    // the created user is attached to a W edge the rule cannot have produced
    for (const auto& c : cs)
        CHECK(complements_of(add_user, c).complements.empty());

    const Rule& get_read = *m.find_rule("get_read");
    const auto reader = gen::graph(m.signature, 2, {{"U", {0}}, {"O", {1}}, {"R", {0, 1}}});
    const auto rc = enumerate_matches(get_read.rhs(), reader);
    REQUIRE(rc.size() == 1);
    const auto res = complements_of(get_read, rc[0]);
    REQUIRE(res.complements.size() == 1);
    CHECK(isomorphic(res.complements[0].graph, gen::graph(m.signature, 2, {{"U", {0}}, {"O", {1}}})));
}

TEST_CASE("trading a write edge backwards") {
    const Model m = gen::load("rights.gts");
    const Rule& trade = *m.find_rule("trade_W");
    const auto error = graph_named(m, "error");
    const auto cs = enumerate_matches(trade.rhs(), error);
    REQUIRE_FALSE(cs.empty());
    std::set<std::string> keys;
    for (const auto& c : cs)
        for (const auto& x : complements_of(trade, c).complements) {
            REQUIRE(verify_complement(trade, c, x.match));
            keys.insert(canonical_key(x.graph));
        }
    // the previous owner held both write edges, or the trade went user to itself
    const auto doubled = gen::graph(m.signature, 3, {{"U", {0}}, {"U", {1}}, {"O", {2}}, {"W", {1, 2}}, {"W", {1, 2}}});
    CHECK(keys.count(canonical_key(doubled)) == 1);
    CHECK(keys.count(canonical_key(error)) == 1);
    CHECK(keys.size() == 2);
}

TEST_CASE("rights rules against exhaustion") {
    const Model m = gen::load("rights.gts");
    const std::vector<Hypergraph> targets{gen::graph(m.signature, 2, {{"U", {0}}, {"O", {1}}, {"W", {0, 1}}}),
                                          gen::graph(m.signature, 2, {{"U", {0}}, {"U", {1}}}),
                                          gen::graph(m.signature, 1, {{"O", {0}}, {"U", {0}}})};
    std::size_t instances = 0;
    for (const Rule& rule : m.rules)
        for (const auto& s : targets)
            for (const auto& c : enumerate_matches(rule.rhs(), s)) {
                INFO(rule.name());
                const auto cmp = oracle::compare_poc(PocRequest{rule, c}, 3, 4);
                REQUIRE(cmp.sound);
                REQUIRE(cmp.complete);
                ++instances;
            }
    CHECK(instances > 10);
}

TEST_CASE("induced order needs a path and multiplicity bound") {
    const Model tc = gen::load("transclosure.gts");
    const Rule& close = tc.rules.at(0);
    const auto s = graph_named(tc, "path");
    Hypergraph tri = s;
    tri.add_edge(0, {0, 2});
    const auto cs = enumerate_matches(close.rhs(), tri);
    REQUIRE_FALSE(cs.empty());
    for (int variant : {1, 2}) {
        try {
            complements_of(close, cs[0], variant, PathBound{3}, OrderKind::InducedSubgraph);
            FAIL("expected InvalidProblem");
        } catch (const Error& e) {
            CHECK(e.code() == Errc::InvalidProblem);
        }
    }
    const auto res = complements_of(close, cs[0], 1, PathAndMultBound{4, 2}, OrderKind::InducedSubgraph);
    REQUIRE_FALSE(res.complements.empty());
    for (const auto& x : res.complements) {
        CHECK(in_restriction(x.graph, PathAndMultBound{4, 2}));
        CHECK_FALSE(violated_nac(close, x.match).has_value());
    }
    const auto cmp = oracle::compare_poc(
        PocRequest{close, cs[0], OrderKind::InducedSubgraph, 1, PathAndMultBound{4, 2}}, 3, 4);
    CHECK(cmp.sound);
    CHECK(cmp.complete);
}

TEST_CASE("random complements against exhaustion") {
    struct Setting {
        OrderKind order;
        int variant;
        RestrictionSpec q;
        SignaturePtr sig;
    };
    const std::vector<Setting> settings{
        {OrderKind::Subgraph, 2, AllGraphs{}, gen::signature({{"U", 1}, {"A", 2}})},
        {OrderKind::Subgraph, 1, PathBound{2}, gen::signature({{"U", 1}, {"A", 2}})},
        {OrderKind::InducedSubgraph, 1, PathAndMultBound{3, 2}, gen::signature({{"A", 2}})},
    };
    std::mt19937 rng(61);
    for (const auto& st : settings) {
        std::size_t done = 0, nonempty = 0;
        while (done < 40) {
            auto inst = gen::random_poc_instance(st.sig, rng, true);
            if (!inst || (st.order == OrderKind::InducedSubgraph && gen::deleted_nodes(inst->rule) > 1))
                continue;
            const auto cmp = oracle::compare_poc(PocRequest{inst->rule, inst->comatch, st.order, st.variant, st.q}, 4, 4);
            INFO("order " << to_string(st.order) << " variant " << st.variant << " instance " << done);
            REQUIRE(cmp.sound);
            REQUIRE(cmp.complete);
            nonempty += cmp.expected > 0;
            ++done;
        }
        CHECK(nonempty > 10);
    }
}

TEST_CASE("brute force refuses oversized universes") {
    auto sig = gen::signature({{"A", 2}});
    try {
        graph_universe(sig, 7, 2);
        FAIL("expected BudgetTooLarge");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::BudgetTooLarge);
    }
    // graphs with one binary label: 1 with no nodes, 2 on one node with <= 1 edge,
    // and on two nodes with <= 1 edge: empty, loop, edge
    CHECK(graph_universe(sig, 0, 1).size() == 1);
    CHECK(graph_universe(sig, 1, 1).size() == 3);
    CHECK(graph_universe(sig, 2, 1).size() == 6);
}
