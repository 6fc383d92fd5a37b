#pragma once

#include "tsing/dualgraph.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

// Recognition of the exceptional divisors E_i with E_i.C = 1 ("units"),
// their classification into the nine local shapes, and the decorated
// incidence graph built from the maximal units.
//
// Throughout, W is the surface obtained by contracting the chains of C,
// and the divisors come from exceptional_divisors() on a full contraction
// X -> S.  A unit E_i meets C with total degree 1, which for an ample
// contraction splits as E_i.(C inside E_i) = -1 and E_i.(C outside) = 2.

namespace tsing {

struct UnitEi {
    int divisor_index = 0;  // blow-up index of the reconstructed divisor
    Divisor coeff;
    std::set<CurveId> support;
};

struct UnitEiAnalysis {
    std::vector<UnitEi> units;         // every E_i with E_i.C = 1
    std::vector<std::size_t> maximal;  // indices into units, maximal by support
    Int z = 0;                         // number of units
    std::map<Int, Int> s_counts;       // h -> #{i : E_i.(C outside E_i) = h}
};

inline UnitEiAnalysis unit_Ei_set(const Configuration& x,
                                  const std::vector<ExceptionalDivisor>& divisors) {
    UnitEiAnalysis out;
    for (const ExceptionalDivisor& e : divisors) {
        Int inside = 0;
        Int outside = 0;
        for (const auto& [id, cu] : x.curves) {
            if (!cu.in_c())
                continue;
            Int p = pairing(e.coeff, Divisor{{id, 1}}, x);
            auto it = e.coeff.find(id);
            if (it != e.coeff.end() && it->second != 0)
                inside += p;
            else
                outside += p;
        }
        out.s_counts[outside] += 1;
        if (inside + outside != 1)
            continue;
        // the split 1 = 2 + (-1) is forced; anything else means the
        // configuration is not the blow-up of an ample contraction
        if (outside != 2 || inside != -1)
            throw std::runtime_error("unit E_" + std::to_string(e.index) +
                                     " has (outside, inside) = (" + outside.str() + ", " +
                                     inside.str() + "), expected (2, -1)");
        UnitEi u;
        u.divisor_index = e.index;
        u.coeff = e.coeff;
        for (const auto& [id, c] : e.coeff)
            if (c != 0)
                u.support.insert(id);
        // the local graph of a unit has no multiple edges
        for (const auto& [key, w] : x.edges)
            if (w != 1 && (u.support.count(key.first) || u.support.count(key.second)))
                throw std::runtime_error("unit E_" + std::to_string(e.index) +
                                         " touches a multiple edge");
        out.units.push_back(std::move(u));
    }
    out.z = Int(out.units.size());
    for (std::size_t i = 0; i < out.units.size(); ++i) {
        bool contained = false;
        for (std::size_t j = 0; j < out.units.size() && !contained; ++j)
            contained = j != i && out.units[i].support.size() < out.units[j].support.size() &&
                        std::includes(out.units[j].support.begin(), out.units[j].support.end(),
                                      out.units[i].support.begin(), out.units[i].support.end());
        if (!contained)
            out.maximal.push_back(i);
    }
    return out;
}

// ---------------------------------------------------------------------------
// classification of a maximal unit into the nine local shapes

enum class EiVariant { T21, T22, T23, T24, T25, T31, T32, C1, C2 };

inline std::string to_string(EiVariant v) {
    switch (v) {
        case EiVariant::T21: return "T.2.1";
        case EiVariant::T22: return "T.2.2";
        case EiVariant::T23: return "T.2.3";
        case EiVariant::T24: return "T.2.4";
        case EiVariant::T25: return "T.2.5";
        case EiVariant::T31: return "T.3.1";
        case EiVariant::T32: return "T.3.2";
        case EiVariant::C1: return "C.1";
        case EiVariant::C2: return "C.2";
    }
    return "?";
}

struct EiClassification {
    EiVariant variant{};
    std::map<std::string, Int> parameters;  // "m" and, where present, "n"
    std::vector<int> chains;                // incident chains in template role order
    std::vector<CurveId> circles;           // the (-1)-curves of E_i not in C
    std::vector<int> circle_end_hits;       // per circle: attachments at chain ends
    int divisor_index = 0;
};

namespace detail {

[[noreturn]] inline void classification_violation(const std::string& what) {
    throw std::runtime_error("classification violation: " + what);
}

// the curves of one chain lying in E_i always form a run at one chain end
struct RunTrace {
    int chain = -1;
    int r = 0;
    int run_len = 0;  // 0 when the chain only meets E_i in a (-1)-curve
    bool full = false;
    bool at_back = false;
};

struct EiProfile {
    const Configuration* x = nullptr;
    std::vector<CurveId> circles;
    std::map<int, RunTrace> traces;
    // per circle, its chain attachments as (chain, 0-based position)
    std::vector<std::vector<std::pair<int, int>>> att;
};

inline Int entry(const EiProfile& p, int chain, int pos) {
    return -p.x->curve(p.x->tchains[std::size_t(chain)][std::size_t(pos)]).self_int;
}

// position of the k-th run curve counted from the chain end it occupies
inline int run_pos(const RunTrace& t, int k) { return t.at_back ? t.r - 1 - k : k; }
inline int outer_pos(const RunTrace& t) { return run_pos(t, 0); }
inline int inner_pos(const RunTrace& t) { return run_pos(t, t.run_len - 1); }

inline bool run_all_twos(const EiProfile& p, const RunTrace& t) {
    for (int k = 0; k < t.run_len; ++k)
        if (entry(p, t.chain, run_pos(t, k)) != 2)
            return false;
    return true;
}

inline EiProfile build_profile(const UnitEi& e, const Configuration& x) {
    EiProfile p;
    p.x = &x;
    std::map<int, std::vector<int>> boxes;
    for (CurveId id : e.support) {
        const Curve& cu = x.curve(id);
        if (cu.in_c()) {
            boxes[cu.chain].push_back(cu.pos - 1);
        } else {
            if (cu.self_int != -1)
                classification_violation("E_i contains a curve off C that is not a (-1)-curve");
            p.circles.push_back(id);
        }
    }
    if (p.circles.empty())
        classification_violation("E_i contains no (-1)-curve");
    std::sort(p.circles.begin(), p.circles.end());
    for (std::size_t i = 0; i < p.circles.size(); ++i)
        for (std::size_t j = i + 1; j < p.circles.size(); ++j)
            if (x.edge(p.circles[i], p.circles[j]) != 0)
                classification_violation("two (-1)-curves of E_i meet");
    std::set<int> incident;
    for (CurveId c : p.circles) {
        std::vector<std::pair<int, int>> a;
        for (int k = 0; k < int(x.tchains.size()); ++k)
            for (int j = 0; j < int(x.tchains[std::size_t(k)].size()); ++j)
                if (x.edge(c, x.tchains[std::size_t(k)][std::size_t(j)]) != 0) {
                    a.emplace_back(k, j);
                    incident.insert(k);
                }
        std::sort(a.begin(), a.end());
        p.att.push_back(std::move(a));
    }
    for (const auto& [k, pos] : boxes)
        incident.insert(k);
    for (int k : incident) {
        RunTrace t;
        t.chain = k;
        t.r = int(x.tchains[std::size_t(k)].size());
        auto it = boxes.find(k);
        if (it != boxes.end()) {
            std::vector<int>& pos = it->second;
            std::sort(pos.begin(), pos.end());
            if (pos.back() - pos.front() + 1 != int(pos.size()))
                classification_violation("chain curves of E_i are not consecutive");
            t.run_len = int(pos.size());
            t.full = t.run_len == t.r;
            if (!t.full) {
                if (pos.front() == 0)
                    t.at_back = false;
                else if (pos.back() == t.r - 1)
                    t.at_back = true;
                else
                    classification_violation("chain curves of E_i do not reach a chain end");
            }
        }
        p.traces.emplace(k, t);
    }
    return p;
}

// each matcher returns the variant, parameters and chain roles on success

inline std::optional<EiClassification> match_t21(const EiProfile& p) {
    if (p.circles.size() != 1 || p.traces.size() != 2)
        return std::nullopt;
    const auto& a = p.att[0];
    if (a.size() != 2 || a[0].first == a[1].first)
        return std::nullopt;
    for (int s = 0; s < 2; ++s) {
        const auto& [ka, ja] = a[std::size_t(s)];      // chain met in a black curve
        const auto& [kb, jb] = a[std::size_t(1 - s)];  // chain carrying the boxes
        const RunTrace& ta = p.traces.at(ka);
        const RunTrace& tb = p.traces.at(kb);
        if (ta.run_len != 0 || tb.run_len == 0 || tb.full)
            continue;
        if (jb != outer_pos(tb) || !run_all_twos(p, tb))
            continue;
        EiClassification c;
        c.variant = EiVariant::T21;
        c.parameters["m"] = tb.run_len;
        c.chains = {ka, kb};
        return c;
    }
    return std::nullopt;
}

inline std::optional<EiClassification> match_t22(const EiProfile& p) {
    if (p.circles.size() != 1 || p.traces.size() != 2)
        return std::nullopt;
    auto a = p.att[0];
    if (a.size() != 2 || a[0].first == a[1].first)
        return std::nullopt;
    const RunTrace& t0 = p.traces.at(a[0].first);
    const RunTrace& t1 = p.traces.at(a[1].first);
    if (t0.run_len == 0 || t0.full || t1.run_len == 0 || t1.full)
        return std::nullopt;
    if (a[0].second != outer_pos(t0) || a[1].second != outer_pos(t1))
        return std::nullopt;
    EiClassification c;
    c.variant = EiVariant::T22;
    c.parameters["m"] = t0.run_len;
    c.parameters["n"] = t1.run_len;
    c.chains = {a[0].first, a[1].first};
    return c;
}

inline std::optional<EiClassification> match_t23(const EiProfile& p) {
    if (p.circles.size() != 1 || p.traces.size() != 2)
        return std::nullopt;
    const auto& a = p.att[0];
    if (a.size() != 2 || a[0].first == a[1].first)
        return std::nullopt;
    for (int s = 0; s < 2; ++s) {
        const auto& [kc, jc] = a[std::size_t(s)];      // chain carrying the deep curve V
        const auto& [ka, ja] = a[std::size_t(1 - s)];  // other chain, m boxes or none
        const RunTrace& tc = p.traces.at(kc);
        const RunTrace& ta = p.traces.at(ka);
        if (tc.run_len < 2 || tc.full || jc != inner_pos(tc))
            continue;
        bool twos = true;
        for (int k = 0; k + 1 < tc.run_len; ++k)
            twos = twos && entry(p, kc, run_pos(tc, k)) == 2;
        if (!twos)
            continue;
        Int m = 0;
        if (ta.run_len != 0) {
            if (ta.full || ja != outer_pos(ta) || !run_all_twos(p, ta))
                continue;
            m = ta.run_len;
        }
        if (entry(p, kc, jc) != m + 2)
            continue;
        EiClassification c;
        c.variant = EiVariant::T23;
        c.parameters["m"] = m;
        c.parameters["n"] = tc.run_len - 1;
        c.chains = {ka, kc};
        return c;
    }
    return std::nullopt;
}

inline std::optional<EiClassification> match_t24(const EiProfile& p) {
    if (p.circles.size() != 1 || p.traces.size() != 2)
        return std::nullopt;
    const auto& a = p.att[0];
    if (a.size() != 2 || a[0].first == a[1].first)
        return std::nullopt;
    for (int s = 0; s < 2; ++s) {
        const auto& [kb, jb] = a[std::size_t(s)];      // the [4] chain
        const auto& [ka, ja] = a[std::size_t(1 - s)];  // chain with two boxes
        const RunTrace& tb = p.traces.at(kb);
        const RunTrace& ta = p.traces.at(ka);
        if (!tb.full || tb.r != 1 || entry(p, kb, 0) != 4 || jb != 0)
            continue;
        if (ta.full || ta.run_len != 2 || !run_all_twos(p, ta) || ja != inner_pos(ta))
            continue;
        EiClassification c;
        c.variant = EiVariant::T24;
        c.chains = {ka, kb};
        return c;
    }
    return std::nullopt;
}

inline std::optional<EiClassification> match_t25(const EiProfile& p) {
    if (p.circles.size() != 1 || p.traces.size() != 2)
        return std::nullopt;
    const auto& a = p.att[0];
    if (a.size() != 2 || a[0].first == a[1].first)
        return std::nullopt;
    for (int s = 0; s < 2; ++s) {
        const auto& [kb, jb] = a[std::size_t(s)];      // the [2,5,3] chain
        const auto& [ka, ja] = a[std::size_t(1 - s)];  // chain with three boxes
        const RunTrace& tb = p.traces.at(kb);
        const RunTrace& ta = p.traces.at(ka);
        if (!tb.full || tb.r != 3 || entry(p, kb, 1) != 5 || jb != 1)
            continue;
        if (entry(p, kb, 0) + entry(p, kb, 2) != 5)  // {2, 3} in either order
            continue;
        if (ta.full || ta.run_len != 3 || !run_all_twos(p, ta) || ja != outer_pos(ta))
            continue;
        EiClassification c;
        c.variant = EiVariant::T25;
        c.chains = {ka, kb};
        return c;
    }
    return std::nullopt;
}

// shared frame for the two three-chain shapes: each (-1)-curve meets the
// fully contained middle chain and the outermost curve of an all-(-2)
// end run on its own outer chain
struct ThreeChainFrame {
    int middle = -1;
    int outer[2] = {-1, -1};   // per circle
    int run[2] = {0, 0};       // per circle, outer run length
    int middle_pos[2] = {0, 0};  // per circle, attachment position on the middle
};

inline std::optional<ThreeChainFrame> three_chain_frame(const EiProfile& p) {
    if (p.circles.size() != 2 || p.traces.size() != 3)
        return std::nullopt;
    int middle = -1;
    for (const auto& [k, t] : p.traces) {
        if (!t.full)
            continue;
        if (middle != -1)
            return std::nullopt;
        middle = k;
    }
    if (middle == -1)
        return std::nullopt;
    ThreeChainFrame f;
    f.middle = middle;
    for (int i = 0; i < 2; ++i) {
        const auto& a = p.att[std::size_t(i)];
        if (a.size() != 2)
            return std::nullopt;
        int hits = 0;
        for (const auto& [k, j] : a) {
            if (k == middle) {
                f.middle_pos[i] = j;
                ++hits;
            } else {
                const RunTrace& t = p.traces.at(k);
                if (t.run_len == 0 || t.full || j != outer_pos(t) || !run_all_twos(p, t))
                    return std::nullopt;
                f.outer[i] = k;
                f.run[i] = t.run_len;
            }
        }
        if (hits != 1 || f.outer[i] == -1)
            return std::nullopt;
    }
    if (f.outer[0] == f.outer[1])
        return std::nullopt;
    return f;
}

inline std::optional<EiClassification> match_t31(const EiProfile& p) {
    auto f = three_chain_frame(p);
    if (!f)
        return std::nullopt;
    const RunTrace& tm = p.traces.at(f->middle);
    int v = f->middle_pos[0];
    if (f->middle_pos[1] != v || (v != 0 && v != tm.r - 1))
        return std::nullopt;
    Int m = f->run[0];
    Int n = f->run[1];
    if (Int(tm.r) != m + n || entry(p, f->middle, v) != m + n + 3)
        return std::nullopt;
    for (int j = 0; j < tm.r; ++j)
        if (j != v && entry(p, f->middle, j) != 2)
            return std::nullopt;
    EiClassification c;
    c.variant = EiVariant::T31;
    c.parameters["m"] = m;
    c.parameters["n"] = n;
    c.chains = {f->outer[0], f->middle, f->outer[1]};
    return c;
}

inline std::optional<EiClassification> match_t32(const EiProfile& p) {
    auto f = three_chain_frame(p);
    if (!f)
        return std::nullopt;
    const RunTrace& tm = p.traces.at(f->middle);
    if (f->middle_pos[0] == f->middle_pos[1])
        return std::nullopt;
    // one circle meets an end of the middle chain, the other an interior curve
    for (int s = 0; s < 2; ++s) {
        int ve = f->middle_pos[s];          // end attachment, with the n-run circle
        int vi = f->middle_pos[1 - s];      // interior attachment, with the m-run circle
        if (ve != 0 && ve != tm.r - 1)
            continue;
        Int n = f->run[s];
        Int m = f->run[1 - s];
        if (Int(tm.r) != m + n)
            continue;
        // middle chain read from the end met by the circle:
        // n+2, then m-2 curves of type -2, then m+3, then n curves of type -2
        auto from_end = [&](int k) { return ve == 0 ? k : tm.r - 1 - k; };
        if (vi != from_end(int(m) - 1))
            continue;
        bool ok = entry(p, f->middle, ve) == n + 2 && entry(p, f->middle, vi) == m + 3;
        for (int k = 1; ok && k < tm.r; ++k)
            if (k != int(m) - 1)
                ok = entry(p, f->middle, from_end(k)) == 2;
        if (!ok)
            continue;
        EiClassification c;
        c.variant = EiVariant::T32;
        c.parameters["m"] = m;
        c.parameters["n"] = n;
        c.chains = {f->outer[1 - s], f->middle, f->outer[s]};
        return c;
    }
    return std::nullopt;
}

// the one-chain shapes: a (-1)-curve meets an all-(-2) end run and a black
// curve of the same chain.  C.1 attaches at the outermost run curve, C.2 at
// the innermost; when the run has length one the black attachment decides:
// adjacent to the run means C.2 (the degenerate deep-curve shape), anything
// further along the chain means C.1.
inline std::optional<EiClassification> match_c(const EiProfile& p, EiVariant which) {
    if (p.circles.size() != 1 || p.traces.size() != 1)
        return std::nullopt;
    const auto& a = p.att[0];
    if (a.size() != 2 || a[0].first != a[1].first)
        return std::nullopt;
    const RunTrace& t = p.traces.at(a[0].first);
    if (t.run_len == 0 || t.full || !run_all_twos(p, t))
        return std::nullopt;
    auto in_run = [&](int j) { return t.at_back ? j >= t.r - t.run_len : j < t.run_len; };
    int jb = -1;
    int jblk = -1;
    for (const auto& [k, j] : a)
        (in_run(j) ? jb : jblk) = j;
    if (jb == -1 || jblk == -1)
        return std::nullopt;
    bool adjacent = jblk - jb == 1 || jb - jblk == 1;
    bool is_c1 = jb == outer_pos(t) && (t.run_len >= 2 || !adjacent);
    bool is_c2 = jb == inner_pos(t) && (t.run_len >= 2 || adjacent);
    if (which == EiVariant::C1 ? !is_c1 : !is_c2)
        return std::nullopt;
    EiClassification c;
    c.variant = which;
    c.parameters["m"] = t.run_len;
    c.chains = {a[0].first};
    return c;
}

}  // namespace detail

inline EiClassification classify_Ei(const UnitEi& e, const Configuration& x) {
    detail::EiProfile p = detail::build_profile(e, x);
    std::vector<EiClassification> found;
    auto add = [&](std::optional<EiClassification> c) {
        if (c)
            found.push_back(std::move(*c));
    };
    add(detail::match_t21(p));
    add(detail::match_t22(p));
    add(detail::match_t23(p));
    add(detail::match_t24(p));
    add(detail::match_t25(p));
    add(detail::match_t31(p));
    add(detail::match_t32(p));
    add(detail::match_c(p, EiVariant::C1));
    add(detail::match_c(p, EiVariant::C2));
    if (found.empty())
        detail::classification_violation("unit E_" + std::to_string(e.divisor_index) +
                                         " matches no shape");
    if (found.size() > 1) {
        std::string names;
        for (const EiClassification& c : found)
            names += (names.empty() ? "" : ", ") + to_string(c.variant);
        detail::classification_violation("unit E_" + std::to_string(e.divisor_index) +
                                         " is ambiguous: " + names);
    }
    EiClassification c = std::move(found.front());
    c.divisor_index = e.divisor_index;
    c.circles = p.circles;
    for (const auto& atts : p.att) {
        int hits = 0;
        for (const auto& [k, j] : atts)
            if (j == 0 || j + 1 == int(x.tchains[std::size_t(k)].size()))
                ++hits;
        c.circle_end_hits.push_back(hits);
    }
    return c;
}

// ---------------------------------------------------------------------------
// decorated graph: one vertex per chain, an edge or loop of each maximal
// unit, weighted so that the total weight equals the number of units

enum class Shape { G1, G2, G3 };

inline std::string to_string(Shape s) {
    switch (s) {
        case Shape::G1: return "G1";
        case Shape::G2: return "G2";
        case Shape::G3: return "G3";
    }
    return "?";
}

struct DecoratedEdge {
    int a = 0;
    int b = 0;
    Int weight;
    EiVariant source{};
    int divisor_index = 0;
};

struct DecoratedLoop {
    int vertex = 0;
    Int weight;
    EiVariant source{};
    int divisor_index = 0;
};

struct GraphComponent {
    std::vector<int> vertices;
    std::vector<std::size_t> edge_idx;
    std::vector<std::size_t> loop_idx;
    std::vector<std::size_t> cycle_edge_idx;  // G2 only
    Shape shape = Shape::G1;
    int l_prime = 0;
    Int l_value;         // l', or 2l' when the bound doubles
    Rational f_value;    // additive correction carried by the component
    Int z_prime;         // total weight of the component
    bool cycle_all_t22 = false;  // never true for an ample contraction
};

struct DecoratedGraph {
    int vertex_count = 0;
    std::vector<DecoratedEdge> edges;
    std::vector<DecoratedLoop> loops;
    std::vector<GraphComponent> components;
    Int total_weight;
};

namespace detail {

inline Int expected_unit_count(const EiClassification& c) {
    auto par = [&](const char* k) { return c.parameters.at(k); };
    switch (c.variant) {
        case EiVariant::T21: return par("m");
        case EiVariant::T22: return par("m") + par("n");
        case EiVariant::T23: return par("m") + 1;
        case EiVariant::T24: return 2;
        case EiVariant::T25: return 5;
        case EiVariant::T31: return par("m") + par("n") + 1;
        case EiVariant::T32: return 2 * par("m") + par("n");
        case EiVariant::C1: return par("m");
        case EiVariant::C2: return 1;
    }
    return 0;
}

inline bool builder_variant(EiVariant v) {
    return v == EiVariant::T21 || v == EiVariant::T22;
}

inline GraphComponent component_shape(const DecoratedGraph& g, std::vector<int> verts) {
    GraphComponent comp;
    std::sort(verts.begin(), verts.end());
    comp.vertices = verts;
    comp.l_prime = int(verts.size());
    std::set<int> in(verts.begin(), verts.end());
    for (std::size_t i = 0; i < g.edges.size(); ++i)
        if (in.count(g.edges[i].a))
            comp.edge_idx.push_back(i);
    for (std::size_t i = 0; i < g.loops.size(); ++i)
        if (in.count(g.loops[i].vertex))
            comp.loop_idx.push_back(i);
    comp.z_prime = 0;
    for (std::size_t i : comp.edge_idx)
        comp.z_prime += g.edges[i].weight;
    for (std::size_t i : comp.loop_idx)
        comp.z_prime += g.loops[i].weight;

    std::size_t v = verts.size();
    std::size_t ne = comp.edge_idx.size();
    std::size_t nl = comp.loop_idx.size();
    auto connected_without = [&](std::size_t skip) {
        std::set<int> seen{verts.front()};
        std::vector<int> queue{verts.front()};
        while (!queue.empty()) {
            int u = queue.back();
            queue.pop_back();
            for (std::size_t i : comp.edge_idx) {
                if (i == skip)
                    continue;
                const DecoratedEdge& e = g.edges[i];
                int w = e.a == u ? e.b : e.b == u ? e.a : -1;
                if (w != -1 && seen.insert(w).second)
                    queue.push_back(w);
            }
        }
        return seen.size() == v;
    };

    if (nl == 0 && ne + 1 == v) {
        comp.shape = Shape::G1;
        for (std::size_t i : comp.edge_idx)
            if (!builder_variant(g.edges[i].source))
                detail::classification_violation("tree component with a non-tree edge shape");
        comp.l_value = comp.l_prime;
        comp.f_value = 0;
    } else if (nl == 0 && ne == v) {
        comp.shape = Shape::G2;
        for (std::size_t i : comp.edge_idx) {
            if (!builder_variant(g.edges[i].source))
                detail::classification_violation("cycle component with a non-tree edge shape");
            if (!connected_without(i))
                continue;  // bridge
            comp.cycle_edge_idx.push_back(i);
        }
        comp.cycle_all_t22 = true;
        for (std::size_t i : comp.cycle_edge_idx)
            comp.cycle_all_t22 = comp.cycle_all_t22 && g.edges[i].source == EiVariant::T22;
        comp.l_value = 2 * Int(comp.l_prime);
        comp.f_value = Rational(1, 2);
    } else if (nl == 1 && ne + 1 == v) {
        comp.shape = Shape::G3;
        const DecoratedLoop& loop = g.loops[comp.loop_idx.front()];
        for (std::size_t i : comp.edge_idx)
            if (!builder_variant(g.edges[i].source) &&
                g.edges[i].divisor_index != loop.divisor_index)
                detail::classification_violation("loop component with a second non-tree shape");
        comp.l_value = loop.source == EiVariant::C1 ? 2 * Int(comp.l_prime) : Int(comp.l_prime);
        switch (loop.source) {
            case EiVariant::T24: comp.f_value = 2; break;
            case EiVariant::T25: comp.f_value = 3; break;
            case EiVariant::C1: comp.f_value = 0; break;
            default: comp.f_value = 1; break;  // T.2.3, T.3.1, T.3.2, C.2
        }
    } else {
        detail::classification_violation(
            "component is not a tree, a cycle, or a tree with one loop");
    }
    return comp;
}

}  // namespace detail

inline DecoratedGraph decorated_graph(const Configuration& x, const UnitEiAnalysis& a,
                                      const std::vector<EiClassification>& cls) {
    if (cls.size() != a.maximal.size())
        throw std::invalid_argument("decorated_graph: one classification per maximal unit");
    DecoratedGraph g;
    g.vertex_count = int(x.tchains.size());
    g.total_weight = 0;
    for (std::size_t i = 0; i < cls.size(); ++i) {
        const EiClassification& c = cls[i];
        auto par = [&](const char* k) { return c.parameters.at(k); };
        auto edge = [&](int va, int vb, Int w) {
            g.edges.push_back({std::min(va, vb), std::max(va, vb), w, c.variant,
                               c.divisor_index});
        };
        auto loop = [&](int vv, Int w) {
            g.loops.push_back({vv, w, c.variant, c.divisor_index});
        };
        switch (c.variant) {
            case EiVariant::T21: edge(c.chains[0], c.chains[1], par("m")); break;
            case EiVariant::T22: edge(c.chains[0], c.chains[1], par("m") + par("n")); break;
            case EiVariant::T23:
                // the weight-0 edge still joins the chains in one component
                edge(c.chains[0], c.chains[1], par("m"));
                loop(c.chains[1], 1);
                break;
            case EiVariant::T24:
                edge(c.chains[0], c.chains[1], 1);
                loop(c.chains[1], 1);
                break;
            case EiVariant::T25:
                edge(c.chains[0], c.chains[1], 3);
                loop(c.chains[1], 2);
                break;
            case EiVariant::T31:
                edge(c.chains[0], c.chains[1], par("m"));
                edge(c.chains[2], c.chains[1], par("n"));
                loop(c.chains[1], 1);
                break;
            case EiVariant::T32:
                edge(c.chains[0], c.chains[1], par("m"));
                edge(c.chains[2], c.chains[1], par("m") + par("n") - 1);
                loop(c.chains[1], 1);
                break;
            case EiVariant::C1: loop(c.chains[0], par("m")); break;
            case EiVariant::C2: loop(c.chains[0], 1); break;
        }
        // every unit nests inside exactly one maximal unit, and the weight
        // of a shape counts the units nested in it
        const UnitEi& u = a.units[a.maximal[i]];
        Int nested = 0;
        for (const UnitEi& other : a.units)
            if (std::includes(u.support.begin(), u.support.end(), other.support.begin(),
                              other.support.end()))
                nested += 1;
        if (nested != detail::expected_unit_count(c))
            throw std::logic_error("unit count nested in E_" +
                                   std::to_string(c.divisor_index) + " is " + nested.str() +
                                   ", shape " + to_string(c.variant) + " predicts " +
                                   detail::expected_unit_count(c).str());
    }
    for (const DecoratedEdge& e : g.edges)
        g.total_weight += e.weight;
    for (const DecoratedLoop& l : g.loops)
        g.total_weight += l.weight;
    if (g.total_weight != a.z)
        throw std::logic_error("decorated graph weight " + g.total_weight.str() +
                               " differs from the unit count " + a.z.str());

    // split into connected components (weight-0 edges still connect)
    std::vector<int> rep(std::size_t(g.vertex_count));
    for (int i = 0; i < g.vertex_count; ++i)
        rep[std::size_t(i)] = i;
    std::function<int(int)> find = [&](int i) {
        while (rep[std::size_t(i)] != i)
            i = rep[std::size_t(i)] = rep[std::size_t(rep[std::size_t(i)])];
        return i;
    };
    for (const DecoratedEdge& e : g.edges)
        rep[std::size_t(find(e.a))] = find(e.b);
    std::map<int, std::vector<int>> groups;
    for (int i = 0; i < g.vertex_count; ++i)
        groups[find(i)].push_back(i);
    for (auto& [r, verts] : groups)
        g.components.push_back(detail::component_shape(g, std::move(verts)));
    return g;
}

// Full pipeline from a raw configuration to its decorated graph.
struct Analysis {
    Configuration x;
    ContractionResult contraction;
    std::vector<ExceptionalDivisor> divisors;
    UnitEiAnalysis units;
    std::vector<EiClassification> classified;  // one per maximal unit
    DecoratedGraph graph;
};

inline Analysis analyze(Configuration x) {
    auto errs = validate_config(x);
    if (!errs.empty())
        throw std::invalid_argument("invalid configuration: " + errs.front());
    Analysis a;
    a.x = std::move(x);
    a.contraction = contract_to_minimal(a.x);
    a.divisors = exceptional_divisors(a.contraction.log, a.x);
    a.units = unit_Ei_set(a.x, a.divisors);
    for (std::size_t i : a.units.maximal)
        a.classified.push_back(classify_Ei(a.units.units[i], a.x));
    a.graph = decorated_graph(a.x, a.units, a.classified);
    return a;
}

}  // namespace tsing
