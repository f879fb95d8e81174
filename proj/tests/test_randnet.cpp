#include "krongcrf/randnet.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

using namespace krongcrf;

TEST_CASE("erdos-renyi edge counts match the closed form") {
    RngStream rng(1, 0);
    CHECK(gen_erdos_renyi(50, 0.10, rng).edge_count() == 122);
    CHECK(gen_erdos_renyi(30, 0.10, rng).edge_count() == 43);
    CHECK(gen_erdos_renyi(10, 1.0, rng).edge_count() == 45);
    CHECK(gen_erdos_renyi(100, 0.10, rng).edge_count() == 495);
}

TEST_CASE("erdos-renyi edges are simple and deterministic per stream") {
    RngStream a(42, 7), b(42, 7), c(42, 8);
    const GraphTopology ga = gen_erdos_renyi(20, 0.3, a);
    const GraphTopology gb = gen_erdos_renyi(20, 0.3, b);
    const GraphTopology gc = gen_erdos_renyi(20, 0.3, c);
    CHECK(ga.edges == gb.edges);
    CHECK(ga.edges != gc.edges);

    std::set<std::pair<Index, Index>> unique(ga.edges.begin(), ga.edges.end());
    CHECK(unique.size() == ga.edges.size());
    for (const auto& [i, j] : ga.edges) {
        CHECK(i < j);
        CHECK(j < 20);
    }
}

TEST_CASE("watts-strogatz ring degree and edge counts") {
    RngStream rng(2, 0);
    CHECK(gen_watts_strogatz(100, 0.0202, 0.1, rng).edge_count() == 100);
    CHECK(gen_watts_strogatz(100, 0.202, 0.1, rng).edge_count() == 1000);
    CHECK(gen_watts_strogatz(100, 0.10, 0.1, rng).edge_count() == 500);
    CHECK_THROWS_AS(gen_watts_strogatz(100, 0.001, 0.1, rng), DegreeOutOfRange);
}

TEST_CASE("watts-strogatz with no rewiring is exactly the ring lattice") {
    RngStream rng(2, 1);
    const GraphTopology g = gen_watts_strogatz(12, 4.0 / 11.0, 0.0, rng); // k = 4
    CHECK(g.edge_count() == 24);
    std::set<std::pair<Index, Index>> edges(g.edges.begin(), g.edges.end());
    for (Index i = 0; i < 12; ++i) {
        for (Index m = 1; m <= 2; ++m) {
            Index j = (i + m) % 12;
            auto e = i < j ? std::make_pair(i, j) : std::make_pair(j, i);
            CHECK(edges.count(e) == 1);
        }
    }
}

TEST_CASE("barabasi-albert attachment counts reproduce the published sweeps") {
    CHECK(barabasi_albert_attachment(100, 0.10) == 5);
    CHECK(barabasi_albert_attachment(100, 0.30) == 18);
    CHECK(barabasi_albert_attachment(100, 0.50) == 45);
    CHECK(barabasi_albert_attachment(100, 0.65) == 50);
    CHECK(barabasi_albert_attachment(100, 0.80) == 50);
    CHECK(barabasi_albert_attachment(50, 0.10) == 3);

    RngStream rng(3, 0);
    CHECK(gen_barabasi_albert(100, 0.10, rng).edge_count() == 475);
    CHECK(gen_barabasi_albert(100, 0.80, rng).edge_count() == 2500);
    CHECK(gen_barabasi_albert(50, 0.10, rng).edge_count() == 141);
}

TEST_CASE("barabasi-albert graphs are simple") {
    RngStream rng(9, 4);
    const GraphTopology g = gen_barabasi_albert(40, 0.2, rng);
    std::set<std::pair<Index, Index>> unique(g.edges.begin(), g.edges.end());
    CHECK(unique.size() == g.edges.size());
    for (const auto& [i, j] : g.edges) {
        CHECK(i != j);
        CHECK(j < 40);
    }
}

TEST_CASE("assign_weights matches the kernel and the edge support") {
    GraphTopology g;
    g.n = 3;
    g.edges = {{0, 1}};

    SUBCASE("zero attributes give unit weights") {
        const SimilarityMatrix s = assign_weights(g, Vector::Zero(3));
        CHECK(s(0, 1) == doctest::Approx(1.0));
        CHECK(s(1, 0) == doctest::Approx(1.0));
        CHECK(s(0, 2) == 0.0);
    }
    SUBCASE("equal attributes give unit weight") {
        Vector y(3);
        y << 0.3, 0.3, 9.0;
        CHECK(assign_weights(g, y)(0, 1) == doctest::Approx(1.0));
    }
    SUBCASE("the symmetrized kernel is exp(-|difference|)") {
        Vector y(3);
        y << 1.0, 0.0, 0.0;
        const SimilarityMatrix s = assign_weights(g, y);
        CHECK(s(0, 1) == doctest::Approx(std::exp(-1.0)));
        CHECK(s(1, 0) == doctest::Approx(std::exp(-1.0)));
    }
}

TEST_CASE("assign_weights support equals the edge set") {
    RngStream rng(4, 2);
    const GraphTopology g = gen_erdos_renyi(15, 0.3, rng);
    Vector y(15);
    for (Index i = 0; i < 15; ++i) y[i] = rng.normal();
    const SimilarityMatrix s = assign_weights(g, y);

    std::set<std::pair<Index, Index>> edges(g.edges.begin(), g.edges.end());
    for (Index i = 0; i < 15; ++i) {
        for (Index j = 0; j < i; ++j) {
            const bool has = edges.count({j, i}) == 1;
            CHECK((s(i, j) > 0.0) == has);
        }
    }
}
