#include <catch2/catch_amalgamated.hpp>

#include "support/generators.hpp"
#include "support/oracles.hpp"
#include "uncover/canonical.hpp"

using namespace uncover;

namespace {

SignaturePtr rights_sig() { return gen::signature({{"U", 1}, {"O", 1}, {"R", 2}, {"W", 2}}); }

Hypergraph error_graph(const SignaturePtr& sig) {
    return gen::graph(sig, 3, {{"U", {0}}, {"U", {1}}, {"O", {2}}, {"W", {0, 2}}, {"W", {1, 2}}});
}

} // namespace

TEST_CASE("validate") {
    auto sig = rights_sig();
    CHECK_FALSE(validate(Hypergraph(sig)).has_value());
    CHECK_FALSE(validate(error_graph(sig)).has_value());

    Hypergraph bad(sig, 3);
    bad.add_edge(*sig->find("W"), {0, 1, 2});
    REQUIRE(validate(bad).has_value());
    CHECK(validate(bad)->code() == Errc::ArityMismatch);

    Hypergraph dangling(sig, 1);
    dangling.add_edge(*sig->find("W"), {0, 4});
    CHECK(validate(dangling)->code() == Errc::DanglingEndpoint);

    Hypergraph unknown(sig, 1);
    unknown.add_edge(17, {0});
    CHECK(validate(unknown)->code() == Errc::UnknownLabel);
    CHECK_THROWS_AS(validate_or_throw(unknown), Error);
}

TEST_CASE("signature rejects duplicate labels") {
    Signature sig;
    sig.add("A", 2);
    CHECK_THROWS_AS(sig.add("A", 1), Error);
}

TEST_CASE("isomorphic") {
    auto sig = rights_sig();
    const auto g = error_graph(sig);
    CHECK(isomorphic(g, g));
    CHECK_FALSE(isomorphic(Hypergraph(sig), Hypergraph(sig, 1)));

    // users swapped
    const auto swapped = gen::graph(sig, 3, {{"U", {1}}, {"U", {0}}, {"O", {2}}, {"W", {1, 2}}, {"W", {0, 2}}});
    CHECK(oracle::isomorphic(g, swapped));
    CHECK(isomorphic(g, swapped));

    auto other = gen::signature({{"A", 2}});
    CHECK_THROWS_AS(isomorphic(g, Hypergraph(other)), Error);
}

TEST_CASE("canonical key is invariant under relabelling") {
    std::mt19937 rng(7);
    auto sig = gen::signature({{"U", 1}, {"A", 2}, {"T", 3}});
    for (int round = 0; round < 10; ++round) {
        const auto g = gen::random_graph(sig, rng, 6, 8, 1);
        const auto key = canonical_key(g);
        for (int i = 0; i < 100; ++i)
            REQUIRE(canonical_key(gen::shuffled(g, rng)) == key);
        REQUIRE(canonical_form(gen::shuffled(g, rng)) == canonical_form(g));
    }
    CHECK(canonical_key(Hypergraph(sig)) != canonical_key(Hypergraph(sig, 1)));
}

TEST_CASE("canonical key agrees with brute-force isomorphism") {
    std::mt19937 rng(11);
    auto sig = gen::signature({{"U", 1}, {"A", 2}});
    std::vector<Hypergraph> corpus;
    for (int i = 0; i < 120; ++i)
        corpus.push_back(gen::random_graph(sig, rng, 5, 5));
    // Isomorphic pairs are rare at random; seed the corpus with relabelled copies.
    for (int i = 0; i < 40; ++i)
        corpus.push_back(gen::shuffled(corpus[static_cast<std::size_t>(i)], rng));
    std::size_t iso_pairs = 0;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        for (std::size_t j = i; j < corpus.size(); ++j) {
            const bool expected = oracle::isomorphic(corpus[i], corpus[j]);
            iso_pairs += expected;
            REQUIRE((canonical_key(corpus[i]) == canonical_key(corpus[j])) == expected);
        }
    }
    CHECK(iso_pairs > corpus.size());
}

TEST_CASE("canonical key separates regular graphs") {
    // Two 2-regular graphs on six nodes: a hexagon and two triangles.
    auto sig = gen::signature({{"A", 2}});
    const auto hexagon =
        gen::graph(sig, 6, {{"A", {0, 1}}, {"A", {1, 2}}, {"A", {2, 3}}, {"A", {3, 4}}, {"A", {4, 5}}, {"A", {5, 0}}});
    const auto triangles =
        gen::graph(sig, 6, {{"A", {0, 1}}, {"A", {1, 2}}, {"A", {2, 0}}, {"A", {3, 4}}, {"A", {4, 5}}, {"A", {5, 3}}});
    CHECK_FALSE(isomorphic(hexagon, triangles));
    CHECK(oracle::isomorphic(hexagon, triangles) == false);
}

TEST_CASE("longest undirected path") {
    auto sig = rights_sig();
    CHECK(longest_undirected_path(Hypergraph(sig)) == 0);
    CHECK(longest_undirected_path(gen::graph(sig, 2, {{"W", {0, 1}}})) == 1);
    CHECK(longest_undirected_path(error_graph(sig)) == oracle::longest_path(error_graph(sig)));
    CHECK(longest_undirected_path(error_graph(sig)) == 2);
    // unary edges and loops never extend a path
    CHECK(longest_undirected_path(gen::graph(sig, 1, {{"U", {0}}, {"W", {0, 0}}})) == 0);

    std::mt19937 rng(3);
    auto hsig = gen::signature({{"U", 1}, {"A", 2}, {"T", 3}});
    for (int i = 0; i < 300; ++i) {
        const auto g = gen::random_graph(hsig, rng, 6, 7);
        const std::size_t expected = oracle::longest_path(g);
        REQUIRE(longest_undirected_path(g) == expected);
        for (std::size_t b = 0; b <= 4; ++b)
            REQUIRE(has_path_longer_than(g, b) == (expected > b));
    }
}

TEST_CASE("parallel multiplicity") {
    auto sig = gen::signature({{"A", 2}, {"B", 2}});
    CHECK(max_parallel_multiplicity(gen::graph(sig, 2, {{"A", {0, 1}}})) == 1);
    CHECK(max_parallel_multiplicity(gen::graph(sig, 2, {{"A", {0, 1}}, {"A", {0, 1}}})) == 2);
    const auto both_ways = gen::graph(sig, 2, {{"A", {0, 1}}, {"A", {1, 0}}});
    CHECK(max_parallel_multiplicity(both_ways) == oracle::multiplicity(both_ways));
    CHECK(max_parallel_multiplicity(both_ways) == 1);
    CHECK(max_parallel_multiplicity(gen::graph(sig, 2, {{"A", {0, 1}}, {"B", {0, 1}}})) == 1);
    CHECK(max_parallel_multiplicity(Hypergraph(sig)) == 0);

    auto rsig = rights_sig();
    try {
        max_parallel_multiplicity(error_graph(rsig));
        FAIL("expected NotDirectedGraph");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::NotDirectedGraph);
    }

    std::mt19937 rng(5);
    for (int i = 0; i < 200; ++i) {
        const auto g = gen::random_graph(sig, rng, 3, 6);
        REQUIRE(max_parallel_multiplicity(g) == oracle::multiplicity(g));
    }
}

TEST_CASE("restriction membership") {
    auto sig = rights_sig();
    CHECK(in_restriction(Hypergraph(sig), PathBound{0}));
    CHECK(in_restriction(error_graph(sig), PathBound{2}));
    CHECK_FALSE(in_restriction(error_graph(sig), PathBound{1}));
    CHECK(in_restriction(error_graph(sig), AllGraphs{}));
    auto asig = gen::signature({{"A", 2}});
    const auto path3 = gen::graph(asig, 3, {{"A", {0, 1}}, {"A", {1, 2}}});
    CHECK_FALSE(in_restriction(path3, PathBound{1}));
    CHECK(in_restriction(path3, PathAndMultBound{2, 1}));
    CHECK_FALSE(in_restriction(gen::graph(asig, 2, {{"A", {0, 1}}, {"A", {0, 1}}}), PathAndMultBound{4, 1}));
    CHECK_THROWS_AS(in_restriction(error_graph(sig), PathAndMultBound{4, 2}), Error);
    CHECK(describe(RestrictionSpec{PathAndMultBound{4, 2}}) == "pathmult 4 2");
}

TEST_CASE("restrictions are downward closed") {
    std::mt19937 rng(19);
    auto sig = gen::signature({{"A", 2}, {"B", 2}});
    const std::vector<RestrictionSpec> specs{PathBound{1}, PathBound{2}, PathBound{3}, PathAndMultBound{2, 1},
                                             PathAndMultBound{3, 2}};
    for (int i = 0; i < 200; ++i) {
        const auto g = gen::random_graph(sig, rng, 5, 6, 1);
        std::vector<bool> nodes(g.node_count()), edges(g.edge_count());
        for (std::size_t v = 0; v < nodes.size(); ++v)
            nodes[v] = gen::coin(rng, 0.7);
        for (std::size_t e = 0; e < edges.size(); ++e)
            edges[e] = gen::coin(rng, 0.7);
        const auto sub = restrict_to(g, nodes, edges).graph;
        for (const auto& q : specs)
            if (in_restriction(g, q))
                REQUIRE(in_restriction(sub, q));
    }
}
