#include "tsing/tchain.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace tsing;

namespace {

GrowState state(Chain c, std::vector<Int> t, Int n) {
    return GrowState{std::move(c), std::move(t), std::move(n)};
}

}  // namespace

TEST_CASE("grow steps from the base case") {
    GrowState s = grow(state({4}, {1}, 2), Side::right);
    CHECK(s.chain == (Chain{5, 2}));
    CHECK(s.t == (std::vector<Int>{1, 2}));
    CHECK(s.n == 3);

    s = grow(s, Side::left);
    CHECK(s.chain == (Chain{2, 5, 3}));
    CHECK(s.t == (std::vector<Int>{3, 1, 2}));
    CHECK(s.n == 5);

    s = grow(state({3, 3}, {1, 1}, 2), Side::left);
    CHECK(s.chain == (Chain{2, 3, 4}));
    CHECK(s.t == (std::vector<Int>{2, 1, 1}));
    CHECK(s.n == 3);
}

TEST_CASE("is_t_chain accepts the documented chains") {
    auto d = is_t_chain(Chain{3, 2, 2, 3});
    REQUIRE(d.has_value());
    CHECK(d->params == (TParams{4, 2, 1}));

    d = is_t_chain(Chain{4, 2, 6, 2, 2});
    REQUIRE(d.has_value());
    CHECK(d->params == (TParams{1, 10, 3}));
    CHECK(d->delta == (std::vector<Rational>{{-7, 10}, {-4, 5}, {-9, 10}, {-3, 5}, {-3, 10}}));
    CHECK(d->center == (std::vector<int>{3}));
    CHECK(d->r_minus_d == 4);

    d = is_t_chain(Chain{2, 5, 3});
    REQUIRE(d.has_value());
    CHECK(d->params == (TParams{1, 5, 3}));
    CHECK(d->delta == (std::vector<Rational>{{-2, 5}, {-4, 5}, {-3, 5}}));
    CHECK(d->center == (std::vector<int>{2}));
}

TEST_CASE("is_t_chain rejects non-T-chains") {
    CHECK_FALSE(is_t_chain(Chain{2, 2}).has_value());
    CHECK_FALSE(is_t_chain(Chain{2, 2, 2}).has_value());
    CHECK_FALSE(is_t_chain(Chain{5}).has_value());
    CHECK_FALSE(is_t_chain(Chain{3, 4, 3}).has_value());
    CHECK_FALSE(is_t_chain(Chain{2, 3}).has_value());
}

TEST_CASE("adjunction oracle on known chains") {
    CHECK(discrepancies_adjunction_oracle(Chain{4}) ==
          (std::vector<Rational>{{-1, 2}}));
    CHECK(discrepancies_adjunction_oracle(Chain{2, 5, 3}) ==
          (std::vector<Rational>{{-2, 5}, {-4, 5}, {-3, 5}}));
    // not a T-chain; the oracle still solves the linear system
    auto d = discrepancies_adjunction_oracle(Chain{2, 2, 2});
    REQUIRE(d.size() == 3);
    for (const Rational& x : d) {
        CHECK(x > -1);
        CHECK(x <= 0);
    }
}

TEST_CASE("enumeration at small length") {
    auto one = enumerate_t_chains(1);
    REQUIRE(one.size() == 1);
    CHECK(one[0].chain == Chain{4});

    auto two = enumerate_t_chains(2);
    std::vector<Chain> chains;
    for (const auto& t : two)
        chains.push_back(t.chain);
    CHECK(chains == (std::vector<Chain>{{4}, {2, 5}, {3, 3}, {5, 2}}));
}

TEST_CASE("enumeration matches recognizer exhaustively at r <= 3, entries <= 8") {
    std::set<Chain> enumerated;
    for (const auto& t : enumerate_t_chains(3))
        enumerated.insert(t.chain);

    std::set<Chain> accepted;
    std::vector<Chain> pending{{}};
    for (int r = 1; r <= 3; ++r) {
        std::vector<Chain> next;
        for (const Chain& c : pending) {
            for (int b = 2; b <= 8; ++b) {
                Chain ext = c;
                ext.push_back(b);
                if (is_t_chain(ext))
                    accepted.insert(ext);
                next.push_back(std::move(ext));
            }
        }
        pending = std::move(next);
    }
    // enumerated chains of r <= 3 have entries <= 6, within the cap
    CHECK(enumerated == accepted);
}

TEST_CASE("T-chain invariants over the enumeration, r <= 9") {
    for (const TChainData& t : enumerate_t_chains(9)) {
        const Int& n = t.params.n;
        const Int& d = t.params.d;
        Int r = Int(t.chain.size());

        // t-recursion discrepancies equal the adjunction oracle exactly
        CHECK(t.delta == discrepancies_adjunction_oracle(t.chain));

        // t1 + tr = n
        CHECK(t.t.front() + t.t.back() == n);

        // sum(b_i - 2) = r - d + 2
        Int s = 0;
        for (const Int& b : t.chain)
            s += b - 2;
        CHECK(s == r - d + 2);

        // fraction identity
        Fraction f = hj_evaluate(t.chain);
        CHECK(f.m == d * n * n);
        CHECK(f.q == d * n * t.params.a - 1);

        // the recognizer agrees with the parameter oracle
        auto p = t_params_from_fraction(f.m, f.q);
        REQUIRE(p.has_value());
        CHECK(*p == t.params);

        // centers are exactly the positions of minimal discrepancy -(n-1)/n
        Rational lo = Rational(1, n) - 1;
        std::vector<int> centers;
        for (std::size_t j = 0; j < t.delta.size(); ++j) {
            CHECK(t.delta[j] > -1);
            CHECK(t.delta[j] < 0);
            CHECK(t.delta[j] >= lo);
            if (t.delta[j] == lo)
                centers.push_back(int(j) + 1);
        }
        CHECK(centers == t.center);

        // ending (-2)-curves have discrepancy > -1/2
        if (t.chain.front() == 2)
            CHECK(t.delta.front() > Rational(-1, 2));
        if (t.chain.back() == 2)
            CHECK(t.delta.back() > Rational(-1, 2));

        // grow then recognize round-trips, preserving d
        for (Side side : {Side::left, Side::right}) {
            GrowState g = grow(GrowState{t.chain, t.t, n}, side);
            auto back = is_t_chain(g.chain);
            REQUIRE(back.has_value());
            CHECK(back->params.d == d);
            CHECK(back->params.n == g.n);
            CHECK(back->chain.size() == t.chain.size() + 1);
            CHECK(back->t == g.t);
        }
    }
}

TEST_CASE("fibonacci index profile") {
    auto prof = fibonacci_index_profile(10);
    CHECK(prof[0] == 2);
    CHECK(prof[1] == 3);
    CHECK(prof[2] == 5);
    CHECK(prof[3] == 8);
    CHECK(prof[10] == 233);
}
