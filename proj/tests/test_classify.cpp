#include "tsing/classify.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace tsing;

namespace {

struct Pipeline {
    Configuration x;
    ContractionResult r;
    std::vector<ExceptionalDivisor> eis;
    UnitEiAnalysis units;
    std::vector<EiClassification> cls;
    DecoratedGraph graph;
};

Pipeline run(Configuration x) {
    REQUIRE(validate_config(x).empty());
    Pipeline p;
    p.x = std::move(x);
    p.r = contract_to_minimal(p.x);
    p.eis = exceptional_divisors(p.r.log, p.x);
    p.units = unit_Ei_set(p.x, p.eis);
    for (std::size_t i : p.units.maximal)
        p.cls.push_back(classify_Ei(p.units.units[i], p.x));
    p.graph = decorated_graph(p.x, p.units, p.cls);
    return p;
}

}  // namespace

TEST_CASE("two interior-attached units on a pair of [2,5,3]") {
    // degree-2 base change of a rational elliptic surface over an I_1:
    // the I_2 components become the two -5 curves, two sections the -3s
    Configuration x;
    auto c0 = add_tchain(x, Chain{2, 5, 3});
    auto c1 = add_tchain(x, Chain{2, 5, 3});
    CurveId g0 = add_curve(x, -1);
    x.add_edge(g0, c0[0]);
    x.add_edge(g0, c1[1]);
    CurveId g1 = add_curve(x, -1);
    x.add_edge(g1, c1[0]);
    x.add_edge(g1, c0[1]);

    Pipeline p = run(std::move(x));
    CHECK(p.r.m == 4);
    CHECK(ampleness_screen(p.x).passed);
    auto inv = canonical_invariants(p.x, p.r);
    CHECK(inv.kw_square == 2);
    CHECK(inv.lambda == 2);

    CHECK(p.units.z == 2);
    REQUIRE(p.cls.size() == 2);
    for (const EiClassification& c : p.cls) {
        CHECK(c.variant == EiVariant::T21);
        CHECK(c.parameters.at("m") == 1);
        CHECK(c.circle_end_hits == std::vector<int>{1});
    }
    CHECK(p.units.s_counts == (std::map<Int, Int>{{2, 4}}));

    // two parallel edges: the decorated graph is a single cycle
    REQUIRE(p.graph.components.size() == 1);
    const GraphComponent& comp = p.graph.components[0];
    CHECK(comp.shape == Shape::G2);
    CHECK(comp.l_prime == 2);
    CHECK(comp.l_value == 4);
    CHECK(comp.f_value == Rational(1, 2));
    CHECK(comp.z_prime == 2);
    CHECK(comp.cycle_edge_idx.size() == 2);
    CHECK_FALSE(comp.cycle_all_t22);
}

TEST_CASE("unit attached to two chain ends on [2,5,3] + [2,3,4]") {
    // degree-3 base change over an I_1 and a smooth fiber; one section
    Configuration x;
    auto c0 = add_tchain(x, Chain{2, 5, 3});
    auto c1 = add_tchain(x, Chain{2, 3, 4});
    CurveId g0 = add_curve(x, -1);
    x.add_edge(g0, c1[0]);
    x.add_edge(g0, c0[1]);
    CurveId g1 = add_curve(x, -1);
    x.add_edge(g1, c0[0]);
    x.add_edge(g1, c1[2]);

    Pipeline p = run(std::move(x));
    CHECK(p.r.m == 4);
    CHECK(ampleness_screen(p.x).passed);
    auto inv = canonical_invariants(p.x, p.r);
    CHECK(inv.kw_square == 1);
    CHECK(inv.lambda == 1);

    CHECK(p.units.z == 2);
    REQUIRE(p.cls.size() == 2);
    std::vector<int> hits;
    for (const EiClassification& c : p.cls) {
        CHECK(c.variant == EiVariant::T21);
        CHECK(c.parameters.at("m") == 1);
        hits.push_back(c.circle_end_hits.at(0));
    }
    std::sort(hits.begin(), hits.end());
    // one unit meets an interior curve, the other an ending curve
    CHECK(hits == std::vector<int>{1, 2});

    REQUIRE(p.graph.components.size() == 1);
    CHECK(p.graph.components[0].shape == Shape::G2);
}

TEST_CASE("run of length two") {
    Configuration x;
    auto c0 = add_tchain(x, Chain{2, 2, 5, 4});
    auto c1 = add_tchain(x, Chain{2, 5, 3});
    CurveId g = add_curve(x, -1);
    x.add_edge(g, c0[0]);
    x.add_edge(g, c1[1]);

    Pipeline p = run(std::move(x));
    CHECK(p.r.m == 3);
    CHECK(p.units.z == 2);
    REQUIRE(p.cls.size() == 1);
    CHECK(p.cls[0].variant == EiVariant::T21);
    CHECK(p.cls[0].parameters.at("m") == 2);
    CHECK(p.cls[0].chains == std::vector<int>{1, 0});

    REQUIRE(p.graph.components.size() == 1);
    const GraphComponent& comp = p.graph.components[0];
    CHECK(comp.shape == Shape::G1);
    CHECK(comp.l_value == 2);
    CHECK(comp.f_value == 0);
    CHECK(comp.z_prime == 2);
}

TEST_CASE("boxes on both chains") {
    // contracting the (-1)-curve pulls three curves of the two runs along
    Configuration x;
    auto c0 = add_tchain(x, Chain{2, 5, 3});
    auto c1 = add_tchain(x, Chain{3, 2, 3});
    CurveId g = add_curve(x, -1);
    x.add_edge(g, c0[0]);
    x.add_edge(g, c1[0]);

    Pipeline p = run(std::move(x));
    CHECK(p.r.m == 4);
    CHECK(p.units.z == 3);
    REQUIRE(p.cls.size() == 1);
    CHECK(p.cls[0].variant == EiVariant::T22);
    CHECK(p.cls[0].parameters.at("m") == 1);
    CHECK(p.cls[0].parameters.at("n") == 2);

    REQUIRE(p.graph.components.size() == 1);
    const GraphComponent& comp = p.graph.components[0];
    CHECK(comp.shape == Shape::G1);
    CHECK(comp.z_prime == 3);
}

TEST_CASE("single-chain unit attached at the outermost run curve") {
    Configuration x;
    auto c0 = add_tchain(x, Chain{4, 2, 6, 2, 2});
    CurveId g = add_curve(x, -1);
    x.add_edge(g, c0[4]);
    x.add_edge(g, c0[2]);

    Pipeline p = run(std::move(x));
    CHECK(p.r.m == 3);
    CHECK(p.units.z == 2);
    REQUIRE(p.cls.size() == 1);
    CHECK(p.cls[0].variant == EiVariant::C1);
    CHECK(p.cls[0].parameters.at("m") == 2);

    REQUIRE(p.graph.components.size() == 1);
    const GraphComponent& comp = p.graph.components[0];
    CHECK(comp.shape == Shape::G3);
    CHECK(comp.l_prime == 1);
    CHECK(comp.l_value == 2);  // doubled for a loop of this kind
    CHECK(comp.f_value == 0);
    CHECK(comp.z_prime == 2);
}

TEST_CASE("single-chain unit attached next to the run") {
    // blow-up of a K3 with an I_4 and a nodal fiber and two sections;
    // the nodal fiber becomes the -6, one exceptional curve the -2 box
    Configuration x;
    auto c0 = add_tchain(x, Chain{2, 6, 2, 3});
    auto c1 = add_tchain(x, Chain{3, 2, 3});
    CurveId d = add_curve(x, -2);  // fourth component of the I_4
    x.add_edge(d, c0[3]);
    x.add_edge(d, c1[1]);
    CurveId g0 = add_curve(x, -1);
    x.add_edge(g0, c0[0]);
    x.add_edge(g0, c0[1]);
    CurveId g1 = add_curve(x, -1);
    x.add_edge(g1, c0[3]);
    x.add_edge(g1, c1[0]);
    CurveId g2 = add_curve(x, -1);
    x.add_edge(g2, c1[2]);
    x.add_edge(g2, c0[1]);

    Pipeline p = run(std::move(x));
    CHECK(p.r.m == 4);
    CHECK(ampleness_screen(p.x).passed);
    auto inv = canonical_invariants(p.x, p.r);
    CHECK(inv.kw_square == 1);
    CHECK(inv.lambda == 0);
    // the nodal fiber contracts back to a square-zero curve with a node
    CHECK(p.r.minimal.curve(c0[1]).self_int == 0);
    CHECK(p.r.minimal.curve(c0[1]).k_degree == 0);
    CHECK(p.r.minimal.curve(c0[1]).node_count == 1);

    CHECK(p.units.z == 1);
    CHECK(p.units.s_counts == (std::map<Int, Int>{{2, 4}}));
    REQUIRE(p.cls.size() == 1);
    CHECK(p.cls[0].variant == EiVariant::C2);
    CHECK(p.cls[0].parameters.at("m") == 1);

    REQUIRE(p.graph.components.size() == 2);
    const GraphComponent& comp = p.graph.components[0];
    CHECK(comp.shape == Shape::G3);
    CHECK(comp.l_value == 1);
    CHECK(comp.f_value == 1);
    CHECK(p.graph.components[1].shape == Shape::G1);
    CHECK(p.graph.components[1].l_prime == 1);
}

TEST_CASE("unit using a fully contained [4]") {
    Configuration x;
    auto c0 = add_tchain(x, Chain{4, 2, 6, 2, 2});
    auto c1 = add_tchain(x, Chain{4});
    CurveId g = add_curve(x, -1);
    x.add_edge(g, c0[3]);  // inner curve of the ending (-2)-run
    x.add_edge(g, c1[0]);

    Pipeline p = run(std::move(x));
    CHECK(p.r.m == 4);
    CHECK(p.units.z == 2);
    REQUIRE(p.cls.size() == 1);
    CHECK(p.cls[0].variant == EiVariant::T24);
    CHECK(p.cls[0].circle_end_hits == std::vector<int>{1});

    REQUIRE(p.graph.components.size() == 1);
    const GraphComponent& comp = p.graph.components[0];
    CHECK(comp.shape == Shape::G3);
    CHECK(comp.l_prime == 2);
    CHECK(comp.l_value == 2);
    CHECK(comp.f_value == 2);
    CHECK(comp.z_prime == 2);
}

TEST_CASE("unit using a fully contained [2,5,3]") {
    // needs a chain with three ending (-2)-curves on the other side
    Configuration x;
    auto c0 = add_tchain(x, Chain{7, 2, 2, 2});
    auto c1 = add_tchain(x, Chain{2, 5, 3});
    CurveId g = add_curve(x, -1);
    x.add_edge(g, c0[3]);
    x.add_edge(g, c1[1]);

    Pipeline p = run(std::move(x));
    CHECK(p.units.z == 5);
    REQUIRE(p.cls.size() == 1);
    CHECK(p.cls[0].variant == EiVariant::T25);

    REQUIRE(p.graph.components.size() == 1);
    const GraphComponent& comp = p.graph.components[0];
    CHECK(comp.shape == Shape::G3);
    CHECK(comp.f_value == 3);
    CHECK(comp.z_prime == 5);
}

TEST_CASE("two units sharing the end of a middle chain") {
    Configuration x;
    auto c0 = add_tchain(x, Chain{2, 5, 3});
    auto cm = add_tchain(x, Chain{5, 2});
    auto c1 = add_tchain(x, Chain{2, 5, 3});
    CurveId g0 = add_curve(x, -1);
    x.add_edge(g0, c0[0]);
    x.add_edge(g0, cm[0]);
    CurveId g1 = add_curve(x, -1);
    x.add_edge(g1, c1[0]);
    x.add_edge(g1, cm[0]);

    Pipeline p = run(std::move(x));
    CHECK(ampleness_screen(p.x).passed);
    CHECK(p.r.m == 6);
    CHECK(p.units.z == 3);
    REQUIRE(p.cls.size() == 1);
    CHECK(p.cls[0].variant == EiVariant::T31);
    CHECK(p.cls[0].parameters.at("m") == 1);
    CHECK(p.cls[0].parameters.at("n") == 1);
    CHECK(p.cls[0].chains == std::vector<int>{0, 1, 2});

    REQUIRE(p.graph.components.size() == 1);
    const GraphComponent& comp = p.graph.components[0];
    CHECK(comp.shape == Shape::G3);
    CHECK(comp.l_prime == 3);
    CHECK(comp.l_value == 3);
    CHECK(comp.f_value == 1);
    CHECK(comp.z_prime == 3);
}

TEST_CASE("two units at the two marked curves of a middle chain") {
    Configuration x;
    auto c0 = add_tchain(x, Chain{7, 2, 2, 2});   // three ending (-2)-curves
    auto cm = add_tchain(x, Chain{2, 6, 2, 3});   // fully contained
    auto c1 = add_tchain(x, Chain{2, 5, 3});      // one ending (-2)-curve
    CurveId g0 = add_curve(x, -1);
    x.add_edge(g0, c0[3]);
    x.add_edge(g0, cm[1]);  // the -6, at distance m-1 = 2 from the -3 end
    CurveId g1 = add_curve(x, -1);
    x.add_edge(g1, c1[0]);
    x.add_edge(g1, cm[3]);  // the -3 end

    Pipeline p = run(std::move(x));
    CHECK(p.r.m == 10);
    CHECK(p.units.z == 7);
    REQUIRE(p.cls.size() == 1);
    CHECK(p.cls[0].variant == EiVariant::T32);
    CHECK(p.cls[0].parameters.at("m") == 3);
    CHECK(p.cls[0].parameters.at("n") == 1);
    CHECK(p.cls[0].chains == std::vector<int>{0, 1, 2});

    REQUIRE(p.graph.components.size() == 1);
    const GraphComponent& comp = p.graph.components[0];
    CHECK(comp.shape == Shape::G3);
    CHECK(comp.l_value == 3);
    CHECK(comp.f_value == 1);
    CHECK(comp.z_prime == 7);
    // edge weights m and m+n-1
    std::vector<Int> weights;
    for (const DecoratedEdge& e : p.graph.edges)
        weights.push_back(e.weight);
    std::sort(weights.begin(), weights.end());
    CHECK(weights == std::vector<Int>{3, 3});
}

TEST_CASE("configuration without units") {
    Configuration x;
    auto c0 = add_tchain(x, Chain{2, 5, 3});
    auto c1 = add_tchain(x, Chain{2, 5, 3});
    CurveId g = add_curve(x, -1);
    x.add_edge(g, c0[2]);
    x.add_edge(g, c1[2]);

    Pipeline p = run(std::move(x));
    CHECK(p.units.z == 0);
    CHECK(p.units.maximal.empty());
    REQUIRE(p.graph.components.size() == 2);
    for (const GraphComponent& comp : p.graph.components) {
        CHECK(comp.shape == Shape::G1);
        CHECK(comp.l_prime == 1);
        CHECK(comp.z_prime == 0);
    }
}

TEST_CASE("malformed units are rejected") {
    Configuration x;
    auto c0 = add_tchain(x, Chain{4, 2, 6, 2, 2});
    CurveId g = add_curve(x, -1);
    x.add_edge(g, c0[0]);
    REQUIRE(validate_config(x).empty());

    SECTION("interior chain curve") {
        UnitEi fake;
        fake.support = {c0[2], g};
        CHECK_THROWS_WITH(classify_Ei(fake, x),
                          Catch::Matchers::ContainsSubstring("chain end"));
    }
    SECTION("no (-1)-curve") {
        UnitEi fake;
        fake.support = {c0[0]};
        CHECK_THROWS_WITH(classify_Ei(fake, x),
                          Catch::Matchers::ContainsSubstring("no (-1)-curve"));
    }
}
