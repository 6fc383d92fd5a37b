#include "tsing/dualgraph.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <random>

using namespace tsing;

TEST_CASE("blow-down arithmetic") {
    SECTION("(-1) meeting one (-2)") {
        Configuration c;
        CurveId e = add_curve(c, -1);
        CurveId a = add_curve(c, -2);
        c.add_edge(e, a);
        blow_down_at(c, e);
        REQUIRE(c.curves.size() == 1);
        CHECK(c.curve(a).self_int == -1);
        CHECK(c.curve(a).k_degree == -1);
        CHECK(c.edges.empty());
    }
    SECTION("(-1) meeting one curve with multiplicity 2") {
        Configuration c;
        CurveId e = add_curve(c, -1);
        CurveId a = add_curve(c, -6);
        c.add_edge(e, a, 2);
        blow_down_at(c, e);
        CHECK(c.curve(a).self_int == -2);
        CHECK(c.curve(a).k_degree == 2);
        CHECK(c.curve(a).node_count == 1);
    }
    SECTION("two disjoint neighbors gain an edge") {
        Configuration c;
        CurveId e = add_curve(c, -1);
        CurveId a = add_curve(c, -3);
        CurveId b = add_curve(c, -4);
        c.add_edge(e, a);
        c.add_edge(e, b);
        blow_down_at(c, e);
        CHECK(c.edge(a, b) == 1);
        CHECK(c.curve(a).self_int == -2);
        CHECK(c.curve(b).self_int == -3);
    }
    SECTION("only (-1)-curves contract") {
        Configuration c;
        CurveId a = add_curve(c, -2);
        CHECK_THROWS_AS(blow_down_at(c, a), std::invalid_argument);
    }
}

TEST_CASE("validate_config") {
    Configuration c;
    add_tchain(c, Chain{4, 2, 6, 2, 2});
    REQUIRE(validate_config(c).empty());
    REQUIRE(c.chain_data.size() == 1);
    CHECK(c.chain_data[0].params.n == 10);

    Configuration bad;
    add_tchain(bad, Chain{2, 2});
    CHECK_FALSE(validate_config(bad).empty());

    // crossings inside the chain union must be simple, but a free curve
    // may meet a chain curve at several points (a blown-up nodal fiber)
    Configuration w;
    auto ids = add_tchain(w, Chain{4, 2, 6, 2, 2});
    CurveId a = add_curve(w, -1);
    w.add_edge(a, ids[0], 2);
    CHECK(validate_config(w).empty());
    w.add_edge(ids[0], ids[2], 2);
    CHECK_FALSE(validate_config(w).empty());
}

TEST_CASE("exceptional divisors of a two-step tower") {
    // X: A(-2) -- B(-1); contracting B then A is a tower of two
    // blow-ups, E_1 = A + B, E_2 = B.
    Configuration x;
    CurveId a = add_curve(x, -2);
    CurveId b = add_curve(x, -1);
    x.add_edge(a, b);
    auto r = contract_to_minimal(x);
    CHECK(r.m == 2);
    CHECK(r.minimal.curves.empty());
    auto eis = exceptional_divisors(r.log, x);
    REQUIRE(eis.size() == 2);
    CHECK(eis[0].coeff == (Divisor{{a, 1}, {b, 1}}));
    CHECK(eis[1].coeff == (Divisor{{b, 1}}));
    CHECK(pairing(eis[0].coeff, eis[0].coeff, x) == -1);
    CHECK(pairing(eis[0].coeff, eis[1].coeff, x) == 0);
}

TEST_CASE("contraction is insensitive to order on a small corpus") {
    // exhaustively contract in all maximal orders and compare results
    Configuration x;
    CurveId a = add_curve(x, -4);
    CurveId e1 = blow_up_at(x, {a});
    blow_up_at(x, {e1});
    blow_up_at(x, {a, e1});
    blow_up_at(x, {});

    struct Walker {
        std::vector<std::pair<Int, Configuration>> finals;
        void walk(const Configuration& c, Int m) {
            std::vector<CurveId> minus_ones;
            for (const auto& [id, cu] : c.curves)
                if (cu.self_int == -1 && cu.k_degree == -1)
                    minus_ones.push_back(id);
            if (minus_ones.empty()) {
                finals.emplace_back(m, c);
                return;
            }
            for (CurveId id : minus_ones) {
                Configuration next = c;
                blow_down_at(next, id);
                walk(next, m + 1);
            }
        }
    } w;
    w.walk(x, 0);
    REQUIRE(!w.finals.empty());
    for (const auto& [m, c] : w.finals) {
        CHECK(m == w.finals.front().first);
        CHECK(c.curves == w.finals.front().second.curves);
        CHECK(c.edges == w.finals.front().second.edges);
    }
}

TEST_CASE("random blow-up histories round-trip m and Eq. (1)") {
    std::mt19937 rng(20240817);
    for (int trial = 0; trial < 300; ++trial) {
        // the chain words are pinned on X, so blow-ups stay off C
        Configuration seed;
        add_tchain(seed, Chain{2, 5, 3});
        add_tchain(seed, Chain{4});
        CurveId free1 = add_curve(seed, -3);
        CurveId free2 = add_curve(seed, -4);
        seed.add_edge(free1, free2);
        seed.add_edge(free1, seed.tchains[0][2]);
        REQUIRE(validate_config(seed).empty());

        Configuration x = seed;
        int k = int(rng() % 9);
        for (int i = 0; i < k; ++i) {
            std::vector<CurveId> targets;
            for (const auto& [id, cu] : x.curves)
                if (!cu.in_c())
                    targets.push_back(id);
            std::vector<std::pair<CurveId, CurveId>> free_edges;
            for (const auto& [key, w] : x.edges)
                if (!x.curve(key.first).in_c() && !x.curve(key.second).in_c())
                    free_edges.push_back(key);
            int kind = int(rng() % 3);
            if (kind == 2 && free_edges.empty())
                kind = 0;
            if (kind == 0)
                blow_up_at(x, {});
            else if (kind == 1)
                blow_up_at(x, {targets[rng() % targets.size()]});
            else {
                auto [u, v] = free_edges[rng() % free_edges.size()];
                blow_up_at(x, {u, v});
            }
        }

        auto r = contract_to_minimal(x);
        REQUIRE(r.m == k);
        CHECK(r.minimal.curves == seed.curves);
        CHECK(r.minimal.edges == seed.edges);

        // canonical invariants self-check (throws on any mismatch)
        auto inv = canonical_invariants(x, r);
        CHECK(inv.kx_square == x.ks_square - k);
        CHECK(Rational(inv.kw_square) == inv.kw_square_pairing);
    }
}

TEST_CASE("ampleness screen") {
    SECTION("(-1) joining the 3-ends of two [2,5,3] passes") {
        Configuration x;
        auto c1 = add_tchain(x, Chain{2, 5, 3});
        auto c2 = add_tchain(x, Chain{2, 5, 3});
        CurveId e = add_curve(x, -1);
        x.add_edge(e, c1[2]);
        x.add_edge(e, c2[2]);
        REQUIRE(validate_config(x).empty());
        auto rep = ampleness_screen(x);
        REQUIRE(rep.verdicts.size() == 1);
        CHECK(rep.passed);
        CHECK(rep.verdicts[0].value == Rational(1, 5));  // -1 + 6/5
    }
    SECTION("(-1) joining both ends of [2,2,2,7] fails") {
        // end discrepancies -1/5 and -4/5 sum to exactly -1: not enough
        Configuration x;
        auto c1 = add_tchain(x, Chain{2, 2, 2, 7});
        CurveId e = add_curve(x, -1);
        x.add_edge(e, c1.front());
        x.add_edge(e, c1.back());
        REQUIRE(validate_config(x).empty());
        auto rep = ampleness_screen(x);
        CHECK_FALSE(rep.passed);
        REQUIRE(rep.verdicts.size() == 1);
        CHECK(rep.verdicts[0].value == 0);
    }
    SECTION("(-2) disjoint from C fails") {
        Configuration x;
        add_tchain(x, Chain{4});
        add_curve(x, -2);
        REQUIRE(validate_config(x).empty());
        auto rep = ampleness_screen(x);
        CHECK_FALSE(rep.passed);
    }
}

TEST_CASE("canonical invariants when X = S") {
    Configuration x;
    add_tchain(x, Chain{2, 5, 3});  // r - d = 2
    add_tchain(x, Chain{4});        // r - d = 0
    x.ks_square = -5;
    REQUIRE(validate_config(x).empty());
    auto r = contract_to_minimal(x);
    CHECK(r.m == 0);
    auto inv = canonical_invariants(x, r);
    CHECK(inv.kw_square == x.ks_square + (2 + 1) + (0 + 1));
    // lambda = sum(r_j - d_j + 2) when no curve is contracted
    CHECK(inv.lambda == (2 + 2) + (0 + 2));
    CHECK(inv.sum_ei_dot_c == 0);
}
