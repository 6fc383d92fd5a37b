#include "tsing/io.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <fstream>
#include <sstream>

using namespace tsing;

namespace {

std::string fixture(const std::string& name) {
    return std::string(TSING_FIXTURE_DIR) + "/" + name;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

}  // namespace

TEST_CASE("config parsing") {
    SECTION("minimal file: one chain, no edges") {
        LoadedConfig cfg = parse_config(Json::parse(R"({
            "ks2": -1, "ks_nef": false, "tchains": [[4]]
        })"));
        CHECK(cfg.x.curves.size() == 1);
        CHECK(cfg.x.curve(0).self_int == -4);
        CHECK(cfg.x.chain_data.size() == 1);
        CHECK(!cfg.ambient);
    }

    SECTION("chain addressing is 1-based") {
        LoadedConfig cfg = parse_config(Json::parse(R"({
            "ks2": 0, "ks_nef": true, "tchains": [[2,5,3],[4]],
            "extra_curves": [{"id":"G","self":-1}],
            "edges": [["G","T1.2"],["G","T2.1"]]
        })"));
        CurveId g = cfg.names.at("G");
        CHECK(cfg.x.edge(g, cfg.x.tchains[0][1]) == 1);
        CHECK(cfg.x.edge(g, cfg.x.tchains[1][0]) == 1);
    }

    SECTION("errors name the offending field") {
        auto expect = [](const char* text, const char* needle) {
            try {
                parse_config(Json::parse(text));
                FAIL("expected a config error");
            } catch (const std::invalid_argument& e) {
                CHECK_THAT(e.what(), Catch::Matchers::ContainsSubstring(needle));
            }
        };
        expect(R"({"ks2":0,"ks_nef":true,"tchains":[[2,5,3],[4]],
                   "edges":[["T3.1","T1.1"]]})",
               "edges[0][0]: unknown id \"T3.1\"");
        expect(R"({"ks2":0,"ks_nef":true,"tchains":[[2,5,3]],
                   "edges":[["T1.4","T1.1"]]})", "unknown id \"T1.4\"");
        expect(R"({"ks_nef":true,"tchains":[[4]]})", "ks2");
        expect(R"({"ks2":0,"ks_nef":true,"tchains":[[1,2]]})", "at least 2");
        expect(R"({"ks2":0,"ks_nef":true,"tchains":[[4]],"typo":1})", "unknown field");
        expect(R"({"ks2":0,"ks_nef":true,"tchains":[[2,2]]})", "not a T-chain");
    }

    SECTION("scan-bundle files load as plain configs") {
        LoadedConfig cfg = parse_config(Json::parse(R"({
            "ks2": 0, "ks_nef": true, "tchains": [[4]],
            "finding": {"kind": "x", "detail": "y"}
        })"));
        CHECK(cfg.x.curves.size() == 1);
    }

    SECTION("ambient block") {
        LoadedConfig cfg = parse_config(Json::parse(R"({
            "ks2": 0, "ks_nef": true, "tchains": [[4]],
            "ambient": {"chi": 2, "p_g": 1, "multiple_fibers": [2,3],
                        "fiber_degree_counts": [[1,2]]}
        })"));
        REQUIRE(cfg.ambient);
        CHECK(cfg.ambient->chi == Int(2));
        CHECK(cfg.ambient->multiple_fibers.size() == 2);
        CHECK(cfg.ambient->fiber_degree_counts.at(1) == 2);
    }
}

TEST_CASE("config round-trips through its JSON form") {
    LoadedConfig cfg = load_config(fixture("c2_example.json"));
    LoadedConfig again = parse_config(config_json(cfg.x));
    CHECK(config_json(again.x) == config_json(cfg.x));
    Analysis a1 = analyze(cfg.x);
    Analysis a2 = analyze(again.x);
    CHECK(report_json(global_report(a1)) == report_json(global_report(a2)));
}

TEST_CASE("every fixture loads, verifies, and matches its expected report") {
    for (const std::string& name :
         {"c1_example", "c2_example", "t24_example", "t21_t21_example",
          "t21_t22_example"}) {
        INFO(name);
        LoadedConfig cfg = load_config(fixture(name + ".json"));
        VerifyOutput out = verify_output(cfg);
        CHECK(out.ok);
        CHECK(out.doc.dump(2) + "\n" == slurp(fixture(name + ".expected.json")));
    }
}

TEST_CASE("fixture reports carry the stated tight rows") {
    auto applied = [](const std::string& name) {
        VerifyOutput out = verify_output(load_config(fixture(name)));
        return out.doc["two_chain"];
    };
    auto tight = [](const Json& tc, const std::string& check) {
        for (const Json& c : tc["checks"])
            if (c["name"] == check)
                return c.contains("tight") && c["tight"].get<bool>();
        return false;
    };
    Json c1 = applied("c1_example.json");
    CHECK(c1["applied_row"] == "C.1");
    CHECK(tight(c1, "l2:C.1"));
    Json c2 = applied("c2_example.json");
    CHECK(c2["applied_row"] == "C.2");
    CHECK(tight(c2, "l2:C.2"));
    Json t24 = applied("t24_example.json");
    CHECK(t24["applied_row"] == "T.2.4");
    CHECK(tight(t24, "l2:T.2.4"));
    Json tt = applied("t21_t21_example.json");
    CHECK(tt["applied_row"] == "(T.2.1)+(T.2.1)");
    CHECK(tight(tt, "l2:T.2.1+T.2.1"));
}

TEST_CASE("dot export stages") {
    LoadedConfig cfg = load_config(fixture("c1_example.json"));
    Analysis an = analyze(cfg.x);

    std::string x = dot_export(an, DotStage::X);
    CHECK(x.find("graph X {") == 0);
    CHECK(x.find("shape=box") != std::string::npos);     // chain curves
    CHECK(x.find("shape=circle") != std::string::npos);  // the (-1)-curves
    CHECK(x.find("T1.3") != std::string::npos);

    // on the Ei stage the chain curves missed by every maximal unit
    // degenerate to filled dots
    std::string ei = dot_export(an, DotStage::Ei);
    CHECK(ei.find("shape=point") != std::string::npos);

    std::string s = dot_export(an, DotStage::S);
    CHECK(s.find("graph S {") == 0);
    CHECK(s.find("shape=circle") == std::string::npos);  // only fiber/section images

    std::string dec = dot_export(an, DotStage::Decorated);
    CHECK(dec.find("t0 -- t0") != std::string::npos);  // the C.1 loop
    CHECK(dec.find("(C.1)") != std::string::npos);
    CHECK(dec.find("[4,2,6,2,2]") != std::string::npos);

    CHECK(dot_export(an, DotStage::X) == x);  // byte-stable
    CHECK_THROWS_AS(dot_stage_from("nope"), std::invalid_argument);
}

TEST_CASE("scan reports serialize deterministically") {
    ScanLimits lim;
    lim.max_curves = 6;
    lim.max_chain_len = 3;
    auto rep = classification_scan(lim);
    auto rep2 = classification_scan(lim);
    CHECK(scan_json(rep).dump(2) == scan_json(rep2).dump(2));
    Json j = scan_json(rep);
    CHECK(j["scan"] == "classification");
    CHECK(j["limits"]["max_chain_len"] == 3);
    CHECK(j["findings"].is_array());
}
