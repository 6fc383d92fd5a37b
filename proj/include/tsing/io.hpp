#pragma once

// Configuration-file ingestion and report emission: JSON in, JSON and
// DOT out.  Everything here is plumbing; the output is byte-deterministic
// (ordered keys, sorted node ids) so fixtures diff cleanly.

#include "tsing/search.hpp"

#include <json.hpp>

#include <cstdint>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>

namespace tsing {

using Json = nlohmann::ordered_json;

namespace detail {

[[noreturn]] inline void config_error(const std::string& where, const std::string& what) {
    throw std::invalid_argument("config: " + where + ": " + what);
}

inline Int config_int(const Json& j, const std::string& where) {
    if (j.is_number_integer())
        return Int(j.get<std::int64_t>());
    if (j.is_string()) {
        try {
            return Int(j.get<std::string>());
        } catch (const std::exception&) {
        }
    }
    config_error(where, "expected an integer");
}

}  // namespace detail

struct LoadedConfig {
    Configuration x;
    std::optional<Ambient> ambient;
    // extra-curve names from the file, in declaration order
    std::map<std::string, CurveId> names;
};

// Accepted document:
//   { "ks2": int, "ks_nef": bool, "tchains": [[int,...],...],
//     "extra_curves": [{"id": str, "self": int},...],
//     "edges": [[endpoint, endpoint, multiplicity?],...],
//     "ambient": { "chi": int, "p_g": int, "multiple_fibers": [int,...],
//                  "fiber_degree_counts": [[degree, count],...] } }
// Endpoints are extra-curve names or "T{k}.{j}" with both indices 1-based.
inline LoadedConfig parse_config(const Json& doc) {
    if (!doc.is_object())
        detail::config_error("(root)", "expected an object");
    // "finding" is written into scan-bundle files for context; it is
    // ignored on load so bundles reproduce directly
    for (const auto& [key, _] : doc.items())
        if (key != "ks2" && key != "ks_nef" && key != "tchains" &&
            key != "extra_curves" && key != "edges" && key != "ambient" &&
            key != "finding")
            detail::config_error(key, "unknown field");

    LoadedConfig out;
    if (!doc.contains("ks2"))
        detail::config_error("ks2", "missing");
    out.x.ks_square = detail::config_int(doc["ks2"], "ks2");
    if (!doc.contains("ks_nef") || !doc["ks_nef"].is_boolean())
        detail::config_error("ks_nef", "expected a boolean");
    out.x.ks_nef = doc["ks_nef"].get<bool>();

    if (!doc.contains("tchains") || !doc["tchains"].is_array())
        detail::config_error("tchains", "expected a list of integer lists");
    for (std::size_t k = 0; k < doc["tchains"].size(); ++k) {
        const Json& jc = doc["tchains"][k];
        std::string where = "tchains[" + std::to_string(k) + "]";
        if (!jc.is_array() || jc.empty())
            detail::config_error(where, "expected a nonempty integer list");
        Chain word;
        for (std::size_t j = 0; j < jc.size(); ++j) {
            Int b = detail::config_int(jc[j], where + "[" + std::to_string(j) + "]");
            if (b < 2)
                detail::config_error(where + "[" + std::to_string(j) + "]",
                                     "chain entries must be at least 2");
            word.push_back(b);
        }
        add_tchain(out.x, word);
    }

    if (doc.contains("extra_curves")) {
        if (!doc["extra_curves"].is_array())
            detail::config_error("extra_curves", "expected a list");
        for (std::size_t i = 0; i < doc["extra_curves"].size(); ++i) {
            const Json& jc = doc["extra_curves"][i];
            std::string where = "extra_curves[" + std::to_string(i) + "]";
            if (!jc.is_object() || !jc.contains("id") || !jc["id"].is_string() ||
                !jc.contains("self"))
                detail::config_error(where, "expected {\"id\": string, \"self\": integer}");
            std::string name = jc["id"].get<std::string>();
            if (out.names.count(name))
                detail::config_error(where + ".id", "duplicate id \"" + name + "\"");
            out.names[name] = add_curve(out.x, detail::config_int(jc["self"], where + ".self"));
        }
    }

    auto resolve = [&](const Json& j, const std::string& where) -> CurveId {
        if (!j.is_string())
            detail::config_error(where, "expected an endpoint name");
        std::string name = j.get<std::string>();
        auto it = out.names.find(name);
        if (it != out.names.end())
            return it->second;
        std::size_t dot = name.find('.');
        if (name.size() > 2 && name[0] == 'T' && dot != std::string::npos) {
            try {
                std::size_t k = std::stoul(name.substr(1, dot - 1));
                std::size_t p = std::stoul(name.substr(dot + 1));
                if (k >= 1 && k <= out.x.tchains.size() && p >= 1 &&
                    p <= out.x.tchains[k - 1].size())
                    return out.x.tchains[k - 1][p - 1];
            } catch (const std::exception&) {
            }
        }
        detail::config_error(where, "unknown id \"" + name + "\"");
    };

    if (doc.contains("edges")) {
        if (!doc["edges"].is_array())
            detail::config_error("edges", "expected a list");
        for (std::size_t i = 0; i < doc["edges"].size(); ++i) {
            const Json& je = doc["edges"][i];
            std::string where = "edges[" + std::to_string(i) + "]";
            if (!je.is_array() || je.size() < 2 || je.size() > 3)
                detail::config_error(where, "expected [endpoint, endpoint, multiplicity?]");
            CurveId a = resolve(je[0], where + "[0]");
            CurveId b = resolve(je[1], where + "[1]");
            Int w = je.size() == 3 ? detail::config_int(je[2], where + "[2]") : Int(1);
            if (w < 1)
                detail::config_error(where + "[2]", "multiplicity must be at least 1");
            if (a == b)
                detail::config_error(where, "endpoints coincide");
            out.x.add_edge(a, b, w);
        }
    }

    if (doc.contains("ambient")) {
        const Json& ja = doc["ambient"];
        if (!ja.is_object())
            detail::config_error("ambient", "expected an object");
        Ambient amb;
        if (ja.contains("chi"))
            amb.chi = detail::config_int(ja["chi"], "ambient.chi");
        if (ja.contains("p_g"))
            amb.p_g = detail::config_int(ja["p_g"], "ambient.p_g");
        if (ja.contains("multiple_fibers")) {
            if (!ja["multiple_fibers"].is_array())
                detail::config_error("ambient.multiple_fibers", "expected a list");
            for (std::size_t i = 0; i < ja["multiple_fibers"].size(); ++i)
                amb.multiple_fibers.push_back(detail::config_int(
                    ja["multiple_fibers"][i],
                    "ambient.multiple_fibers[" + std::to_string(i) + "]"));
        }
        if (ja.contains("fiber_degree_counts")) {
            const Json& jf = ja["fiber_degree_counts"];
            if (!jf.is_array())
                detail::config_error("ambient.fiber_degree_counts",
                                     "expected a list of [degree, count] pairs");
            for (std::size_t i = 0; i < jf.size(); ++i) {
                std::string where = "ambient.fiber_degree_counts[" + std::to_string(i) + "]";
                if (!jf[i].is_array() || jf[i].size() != 2)
                    detail::config_error(where, "expected [degree, count]");
                amb.fiber_degree_counts[detail::config_int(jf[i][0], where + "[0]")] =
                    detail::config_int(jf[i][1], where + "[1]");
            }
        }
        out.ambient = std::move(amb);
    }

    auto errs = validate_config(out.x);
    if (!errs.empty())
        detail::config_error("(validation)", errs.front());
    return out;
}

inline LoadedConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::invalid_argument("config: cannot open " + path);
    Json doc;
    try {
        doc = Json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument("config: " + path + ": " + e.what());
    }
    return parse_config(doc);
}

// ---------------------------------------------------------------------------
// JSON emission

namespace detail {

inline Json json_int(const Int& v) {
    if (v >= Int(std::numeric_limits<std::int64_t>::min()) &&
        v <= Int(std::numeric_limits<std::int64_t>::max()))
        return Json(v.convert_to<std::int64_t>());
    return Json(v.str());
}

inline std::string rational_str(const Rational& r) {
    std::string s = numerator(r).str();
    if (denominator(r) != 1)
        s += "/" + denominator(r).str();
    return s;
}

// endpoint naming that parse_config resolves back to the same curve
inline std::string endpoint_name(const Curve& cu) {
    if (cu.in_c())
        return "T" + std::to_string(cu.chain + 1) + "." + std::to_string(cu.pos);
    return "C" + std::to_string(cu.id);
}

}  // namespace detail

// Inverse of parse_config up to curve renumbering; chain-path edges are
// implied by "tchains" and omitted here.
inline Json config_json(const Configuration& x) {
    Json j;
    j["ks2"] = detail::json_int(x.ks_square);
    j["ks_nef"] = x.ks_nef;
    j["tchains"] = Json::array();
    for (const auto& ids : x.tchains) {
        Json word = Json::array();
        for (CurveId id : ids)
            word.push_back(detail::json_int(-x.curve(id).self_int));
        j["tchains"].push_back(std::move(word));
    }
    Json extras = Json::array();
    for (const auto& [id, cu] : x.curves)
        if (!cu.in_c())
            extras.push_back(Json{{"id", detail::endpoint_name(cu)},
                                  {"self", detail::json_int(cu.self_int)}});
    if (!extras.empty())
        j["extra_curves"] = std::move(extras);
    Json edges = Json::array();
    for (const auto& [key, w] : x.edges) {
        const Curve& a = x.curve(key.first);
        const Curve& b = x.curve(key.second);
        Int extra = w;
        if (a.in_c() && a.chain == b.chain && (a.pos - b.pos == 1 || b.pos - a.pos == 1))
            extra -= 1;  // the path edge comes with the chain
        if (extra > 0)
            edges.push_back(Json::array({detail::endpoint_name(a), detail::endpoint_name(b),
                                         detail::json_int(extra)}));
    }
    if (!edges.empty())
        j["edges"] = std::move(edges);
    return j;
}

inline Json check_json(const BoundCheck& c) {
    Json j;
    j["name"] = c.name;
    j["rule"] = c.rule;
    if (c.evaluated) {
        j["lhs"] = detail::rational_str(c.lhs);
        j["rhs"] = detail::rational_str(c.rhs);
        j["satisfied"] = c.satisfied;
        j["tight"] = c.tight;
    } else {
        j["skipped"] = true;
    }
    if (!c.note.empty())
        j["note"] = c.note;
    return j;
}

inline Json checks_json(const std::vector<BoundCheck>& cs) {
    Json j = Json::array();
    for (const BoundCheck& c : cs)
        j.push_back(check_json(c));
    return j;
}

inline Json report_json(const BoundReport& rep) {
    Json j;
    j["l"] = detail::json_int(rep.l);
    j["m"] = detail::json_int(rep.m);
    j["R"] = detail::json_int(rep.big_r);
    j["D"] = detail::json_int(rep.big_d);
    j["Z"] = detail::json_int(rep.z);
    j["lambda"] = detail::json_int(rep.lambda);
    j["ks2"] = detail::json_int(rep.ks_square);
    j["kw2"] = detail::json_int(rep.kw_square);
    j["ks_nef"] = rep.ks_nef;
    Json s = Json::object();
    for (const auto& [h, c] : rep.s_counts)
        s[h.str()] = detail::json_int(c);
    j["s_counts"] = std::move(s);
    Json comps = Json::array();
    for (const ComponentRecord& c : rep.components) {
        Json jc;
        jc["shape"] = to_string(c.shape);
        jc["l_prime"] = c.l_prime;
        jc["l_value"] = detail::json_int(c.l_value);
        jc["f_value"] = detail::rational_str(c.f_value);
        jc["r_minus_d"] = detail::json_int(c.r_minus_d);
        jc["z_prime"] = detail::json_int(c.z_prime);
        if (c.loop_source)
            jc["loop_source"] = to_string(*c.loop_source);
        comps.push_back(std::move(jc));
    }
    j["components"] = std::move(comps);
    j["checks"] = checks_json(rep.checks);
    j["all_satisfied"] = rep.all_satisfied;
    return j;
}

inline Json classification_json(const EiClassification& c) {
    Json j;
    j["variant"] = to_string(c.variant);
    Json params = Json::object();
    for (const auto& [k, v] : c.parameters)
        params[k] = detail::json_int(v);
    j["parameters"] = std::move(params);
    Json chains = Json::array();
    for (int k : c.chains)
        chains.push_back("T" + std::to_string(k + 1));
    j["chains"] = std::move(chains);
    j["circle_end_hits"] = c.circle_end_hits;
    j["divisor_index"] = c.divisor_index;
    return j;
}

inline Json analysis_json(const Analysis& an) {
    Json j;
    j["m"] = detail::json_int(an.contraction.m);
    j["unit_count"] = detail::json_int(an.units.z);
    j["maximal_count"] = detail::json_int(Int(an.units.maximal.size()));
    Json cls = Json::array();
    for (const EiClassification& c : an.classified)
        cls.push_back(classification_json(c));
    j["classified"] = std::move(cls);
    Json g;
    g["vertices"] = an.graph.vertex_count;
    Json edges = Json::array();
    for (const DecoratedEdge& e : an.graph.edges)
        edges.push_back(Json{{"a", "T" + std::to_string(e.a + 1)},
                             {"b", "T" + std::to_string(e.b + 1)},
                             {"weight", detail::json_int(e.weight)},
                             {"source", to_string(e.source)},
                             {"divisor_index", e.divisor_index}});
    g["edges"] = std::move(edges);
    Json loops = Json::array();
    for (const DecoratedLoop& l : an.graph.loops)
        loops.push_back(Json{{"vertex", "T" + std::to_string(l.vertex + 1)},
                             {"weight", detail::json_int(l.weight)},
                             {"source", to_string(l.source)},
                             {"divisor_index", l.divisor_index}});
    g["loops"] = std::move(loops);
    Json comps = Json::array();
    for (const GraphComponent& c : an.graph.components) {
        Json jc;
        jc["shape"] = to_string(c.shape);
        Json verts = Json::array();
        for (int v : c.vertices)
            verts.push_back("T" + std::to_string(v + 1));
        jc["vertices"] = std::move(verts);
        jc["l_prime"] = c.l_prime;
        jc["z_prime"] = detail::json_int(c.z_prime);
        comps.push_back(std::move(jc));
    }
    g["components"] = std::move(comps);
    g["total_weight"] = detail::json_int(an.graph.total_weight);
    j["graph"] = std::move(g);
    return j;
}

inline Json limits_json(const ScanLimits& lim) {
    Json j;
    j["max_curves"] = lim.max_curves;
    j["max_chain_len"] = lim.max_chain_len;
    j["max_abs_self_int"] = lim.max_abs_self_int;
    j["max_blowups"] = lim.max_blowups;
    j["seed"] = lim.seed;
    return j;
}

inline Json findings_json(const std::vector<ScanFinding>& fs) {
    Json j = Json::array();
    for (const ScanFinding& f : fs)
        j.push_back(Json{{"kind", f.kind}, {"detail", f.detail}, {"config", config_json(f.x)}});
    return j;
}

inline Json scan_json(const ClassificationScanReport& rep) {
    Json j;
    j["scan"] = "classification";
    j["limits"] = limits_json(rep.limits);
    j["candidates"] = rep.candidates;
    j["screened_out"] = rep.screened_out;
    j["survivors"] = rep.survivors;
    j["units_seen"] = rep.units_seen;
    j["non_pseudotree"] = rep.non_pseudotree;
    Json vc = Json::object();
    for (const auto& [k, v] : rep.variant_counts)
        vc[k] = v;
    j["variant_counts"] = std::move(vc);
    j["findings"] = findings_json(rep.findings);
    return j;
}

inline Json scan_json(const StarcScanReport& rep) {
    Json j;
    j["scan"] = "starc";
    j["limits"] = limits_json(rep.limits);
    j["assemblies"] = rep.assemblies;
    j["junction_rejected"] = rep.junction_rejected;
    j["checked"] = rep.checked;
    j["findings"] = findings_json(rep.findings);
    return j;
}

// Everything `verify` reports on one configuration: the global report,
// the per-unit local bounds, the two-chain table row when it applies,
// and the ambient checks when the file provides an ambient block.
struct VerifyOutput {
    Json doc;
    bool ok = true;  // every evaluated check satisfied
};

inline bool checks_pass(const std::vector<BoundCheck>& cs) {
    for (const BoundCheck& c : cs)
        if (c.evaluated && !c.satisfied)
            return false;
    return true;
}

inline VerifyOutput verify_output(const LoadedConfig& cfg) {
    Analysis an = analyze(cfg.x);
    VerifyOutput out;
    BoundReport rep = global_report(an);
    out.doc["report"] = report_json(rep);
    std::vector<BoundCheck> local = local_Ei_bounds(an);
    out.doc["local"] = checks_json(local);
    out.ok = rep.all_satisfied && checks_pass(local);
    if (an.x.tchains.size() == 2) {
        L2Report l2 = l2_report(an);
        Json jl;
        jl["applied_row"] = l2.applied_row;
        jl["checks"] = checks_json(l2.checks);
        jl["all_satisfied"] = l2.all_satisfied;
        out.doc["two_chain"] = std::move(jl);
        out.ok = out.ok && l2.all_satisfied;
    }
    if (cfg.ambient) {
        std::vector<BoundCheck> aux = auxiliary_bounds(*cfg.ambient, an);
        out.doc["auxiliary"] = checks_json(aux);
        out.ok = out.ok && checks_pass(aux);
    }
    return out;
}

// ---------------------------------------------------------------------------
// DOT emission.  Node shapes: box = chain curve inside a maximal unit,
// circle = non-chain curve, filled dot = chain curve outside every
// maximal unit.  The x and s stages only distinguish chain/non-chain.

enum class DotStage { X, S, Ei, Decorated };

inline DotStage dot_stage_from(const std::string& s) {
    if (s == "x")
        return DotStage::X;
    if (s == "s")
        return DotStage::S;
    if (s == "ei")
        return DotStage::Ei;
    if (s == "decorated")
        return DotStage::Decorated;
    throw std::invalid_argument("unknown dot stage \"" + s + "\" (use x|s|ei|decorated)");
}

namespace detail {

inline std::string dot_curve_graph(const Configuration& x, const std::string& name,
                                   const std::set<CurveId>* unit_support) {
    std::ostringstream os;
    os << "graph " << name << " {\n";
    for (const auto& [id, cu] : x.curves) {
        std::string shape;
        if (!cu.in_c())
            shape = "circle";
        else if (unit_support == nullptr || unit_support->count(id))
            shape = "box";
        else
            shape = "point";
        os << "  n" << id << " [shape=" << shape << ", label=\"" << endpoint_name(cu)
           << "\\n" << cu.self_int << "\"];\n";
    }
    for (const auto& [key, w] : x.edges) {
        os << "  n" << key.first << " -- n" << key.second;
        if (w != 1)
            os << " [label=\"" << w << "\"]";
        os << ";\n";
    }
    os << "}\n";
    return os.str();
}

}  // namespace detail

inline std::string dot_export(const Analysis& an, DotStage stage) {
    if (stage == DotStage::X)
        return detail::dot_curve_graph(an.x, "X", nullptr);
    if (stage == DotStage::S)
        return detail::dot_curve_graph(an.contraction.minimal, "S", nullptr);
    if (stage == DotStage::Ei) {
        std::set<CurveId> support;
        for (std::size_t i : an.units.maximal)
            support.insert(an.units.units[i].support.begin(),
                           an.units.units[i].support.end());
        return detail::dot_curve_graph(an.x, "Ei", &support);
    }
    std::ostringstream os;
    os << "graph decorated {\n";
    for (int k = 0; k < an.graph.vertex_count; ++k) {
        os << "  t" << k << " [shape=box, label=\"T" << k + 1 << " [";
        const Chain& word = an.x.chain_data[std::size_t(k)].chain;
        for (std::size_t j = 0; j < word.size(); ++j)
            os << (j ? "," : "") << word[j];
        os << "]\"];\n";
    }
    for (const DecoratedEdge& e : an.graph.edges)
        os << "  t" << e.a << " -- t" << e.b << " [label=\"" << e.weight << " ("
           << to_string(e.source) << ")\"];\n";
    for (const DecoratedLoop& l : an.graph.loops)
        os << "  t" << l.vertex << " -- t" << l.vertex << " [label=\"" << l.weight << " ("
           << to_string(l.source) << ")\"];\n";
    os << "}\n";
    return os.str();
}

}  // namespace tsing
