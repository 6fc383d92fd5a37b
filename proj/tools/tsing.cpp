// Command-line front end.  Exit codes: 0 all recorded checks pass,
// 1 a recorded inequality fails, 2 invalid input, 3 internal invariant
// violation.

#include "tsing/io.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

namespace {

using namespace tsing;

void print_chain(const Chain& c, std::ostream& os) {
    os << "[";
    for (std::size_t j = 0; j < c.size(); ++j)
        os << (j ? "," : "") << c[j];
    os << "]";
}

int cmd_tchain_check(const std::vector<std::int64_t>& entries) {
    Chain c(entries.begin(), entries.end());
    auto data = is_t_chain(c);
    print_chain(c, std::cout);
    if (!data) {
        std::cout << ": not a T-chain\n";
        return 1;
    }
    std::cout << ": T-chain, d=" << data->params.d << " n=" << data->params.n
              << " a=" << data->params.a << "\n";
    std::cout << "delta:";
    for (const Rational& d : data->delta)
        std::cout << " " << detail::rational_str(d);
    std::cout << "\ncenter:";
    for (int p : data->center)
        std::cout << " " << p;
    std::cout << "\nr-d: " << data->r_minus_d << "\n";
    return 0;
}

int cmd_tchain_enum(int max_r) {
    for (const TChainData& t : enumerate_t_chains(max_r)) {
        print_chain(t.chain, std::cout);
        std::cout << " d=" << t.params.d << " n=" << t.params.n << " a=" << t.params.a
                  << "\n";
    }
    return 0;
}

int cmd_hj(const std::string& ms, const std::string& qs) {
    Int m(ms), q(qs);
    Chain c = hj_expand(m, q);
    std::cout << m << "/" << q << " = ";
    print_chain(c, std::cout);
    std::cout << "\n";
    if (auto p = t_params_from_fraction(m, q))
        std::cout << "T-singularity: d=" << p->d << " n=" << p->n << " a=" << p->a << "\n";
    else
        std::cout << "not a T-singularity\n";
    return 0;
}

int cmd_verify(const std::string& path) {
    VerifyOutput out = verify_output(load_config(path));
    std::cout << out.doc.dump(2) << "\n";
    return out.ok ? 0 : 1;
}

int cmd_classify(const std::string& path) {
    LoadedConfig cfg = load_config(path);
    Analysis an = analyze(cfg.x);
    std::cout << analysis_json(an).dump(2) << "\n";
    return 0;
}

int cmd_dot(const std::string& path, const std::string& stage) {
    LoadedConfig cfg = load_config(path);
    Analysis an = analyze(cfg.x);
    std::cout << dot_export(an, dot_stage_from(stage));
    return 0;
}

void write_bundle(const std::string& dir, const std::vector<ScanFinding>& findings) {
    if (dir.empty() || findings.empty())
        return;
    std::filesystem::create_directories(dir);
    char name[64];
    for (std::size_t i = 0; i < findings.size(); ++i) {
        std::snprintf(name, sizeof name, "finding-%04zu.json", i);
        Json doc = config_json(findings[i].x);
        doc["finding"] = Json{{"kind", findings[i].kind}, {"detail", findings[i].detail}};
        std::ofstream out(std::filesystem::path(dir) / name);
        out << doc.dump(2) << "\n";
    }
}

int cmd_optimal(int n, int l, bool verify) {
    OptimalExample ex = build_optimal_example(n, l);
    std::cout << "optimal example n=" << n << " l=" << l << "\n";
    for (std::size_t k = 0; k < ex.x.chain_data.size(); ++k) {
        std::cout << "  T" << k + 1 << " = ";
        print_chain(ex.x.chain_data[k].chain, std::cout);
        std::cout << "\n";
    }
    std::cout << "R-D=" << ex.r_minus_d << " Z=" << ex.z << " lambda=" << ex.lambda
              << " delta-K=" << ex.delta_k << " m=" << ex.m << "\n";
    if (!verify)
        return 0;
    bool ok = true;
    for (const BoundCheck& c : ex.report.checks) {
        std::cout << c.name << ": ";
        if (!c.evaluated) {
            std::cout << "SKIPPED\n";
            continue;
        }
        std::cout << detail::rational_str(c.lhs) << " vs " << detail::rational_str(c.rhs)
                  << " " << (!c.satisfied ? "FAILED" : c.tight ? "TIGHT" : "SATISFIED")
                  << "\n";
        ok = ok && c.satisfied;
    }
    return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"T-chain configurations: recognition, contraction, "
                 "classification, and bound reports"};
    app.require_subcommand(1);

    auto* tchain = app.add_subcommand("tchain", "T-chain recognition and enumeration");
    tchain->require_subcommand(1);
    std::vector<std::int64_t> entries;
    auto* check = tchain->add_subcommand("check", "recognize one chain word");
    check->add_option("entries", entries, "chain entries b_1 ... b_r")->required();
    int max_r = 5;
    auto* en = tchain->add_subcommand("enum", "list all T-chains up to a length");
    en->add_option("--max-r", max_r, "maximum chain length")->required();

    std::string hj_m, hj_q;
    auto* hj = app.add_subcommand("hj", "continued-fraction expansion of m/q");
    hj->add_option("m", hj_m)->required();
    hj->add_option("q", hj_q)->required();

    std::string verify_path;
    auto* verify = app.add_subcommand("verify", "full bound report for a config file");
    verify->add_option("file", verify_path)->required();

    std::string classify_path;
    auto* classify = app.add_subcommand("classify", "unit types and decorated graph");
    classify->add_option("file", classify_path)->required();

    std::string dot_path, dot_stage = "decorated";
    auto* dot = app.add_subcommand("dot", "DOT graph for a config file");
    dot->add_option("file", dot_path)->required();
    dot->add_option("--stage", dot_stage, "x|s|ei|decorated");

    ScanLimits lim;
    std::string bundle_dir;
    auto* scan = app.add_subcommand("scan", "exhaustive scans");
    scan->require_subcommand(1);
    auto* scl = scan->add_subcommand("classification", "classify every screened candidate");
    auto* sst = scan->add_subcommand("starc", "center preservation over chain assemblies");
    for (auto* s : {scl, sst}) {
        s->add_option("--max-curves", lim.max_curves);
        s->add_option("--max-chain-len", lim.max_chain_len);
        s->add_option("--max-abs-self-int", lim.max_abs_self_int);
        s->add_option("--max-blowups", lim.max_blowups);
        s->add_option("--seed", lim.seed);
        s->add_option("--bundle-dir", bundle_dir,
                      "write each finding as a reproducible config file");
    }

    int opt_n = 0, opt_l = 0;
    bool opt_verify = false;
    auto* optimal = app.add_subcommand("optimal", "build the tight example family");
    optimal->add_option("--n", opt_n)->required();
    optimal->add_option("--l", opt_l)->required();
    optimal->add_flag("--verify", opt_verify, "print and check every recorded bound");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (check->parsed())
            return cmd_tchain_check(entries);
        if (en->parsed())
            return cmd_tchain_enum(max_r);
        if (hj->parsed())
            return cmd_hj(hj_m, hj_q);
        if (verify->parsed())
            return cmd_verify(verify_path);
        if (classify->parsed())
            return cmd_classify(classify_path);
        if (dot->parsed())
            return cmd_dot(dot_path, dot_stage);
        if (scl->parsed()) {
            auto rep = classification_scan(lim);
            std::cout << scan_json(rep).dump(2) << "\n";
            write_bundle(bundle_dir, rep.findings);
            return rep.findings.empty() ? 0 : 1;
        }
        if (sst->parsed()) {
            auto rep = starc_scan(lim);
            std::cout << scan_json(rep).dump(2) << "\n";
            write_bundle(bundle_dir, rep.findings);
            return rep.findings.empty() ? 0 : 1;
        }
        if (optimal->parsed())
            return cmd_optimal(opt_n, opt_l, opt_verify);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    }
    return 2;
}
