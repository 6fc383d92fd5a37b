#pragma once

#include "tsing/tchain.hpp"

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace tsing {

using CurveId = int;

// A rational curve in the configuration.  k_degree is K.curve and is
// maintained through contractions, so it stays correct even when the
// image acquires nodes; node_count tracks those (diagnostic only).
// chain/pos locate the curve inside a declared T-chain (pos is
// 1-based), or chain = -1 for a free curve.
struct Curve {
    CurveId id = -1;
    Int self_int = 0;
    Int k_degree = 0;
    Int node_count = 0;
    int chain = -1;
    int pos = -1;

    bool operator==(const Curve&) const = default;

    bool in_c() const { return chain >= 0; }
};

// Weighted dual graph.  Edge keys are normalized (low id, high id);
// weights are positive.  On X every weight is 1 (simple normal
// crossings); larger weights appear only in contracted images.
struct Configuration {
    std::map<CurveId, Curve> curves;
    std::map<std::pair<CurveId, CurveId>, Int> edges;
    std::vector<std::vector<CurveId>> tchains;
    Int ks_square = 0;
    bool ks_nef = false;
    // filled by validate_config, parallel to tchains
    std::vector<TChainData> chain_data;

    static std::pair<CurveId, CurveId> ekey(CurveId a, CurveId b) {
        return a < b ? std::make_pair(a, b) : std::make_pair(b, a);
    }

    Int edge(CurveId a, CurveId b) const {
        auto it = edges.find(ekey(a, b));
        return it == edges.end() ? Int(0) : it->second;
    }

    void add_edge(CurveId a, CurveId b, Int w = 1) {
        if (a == b)
            throw std::invalid_argument("no self edges");
        if (w <= 0)
            throw std::invalid_argument("edge weights must be positive");
        edges[ekey(a, b)] += w;
    }

    const Curve& curve(CurveId id) const {
        auto it = curves.find(id);
        if (it == curves.end())
            throw std::invalid_argument("unknown curve id " + std::to_string(id));
        return it->second;
    }

    std::vector<std::pair<CurveId, Int>> neighbors(CurveId id) const {
        std::vector<std::pair<CurveId, Int>> out;
        for (const auto& [k, w] : edges) {
            if (k.first == id)
                out.emplace_back(k.second, w);
            else if (k.second == id)
                out.emplace_back(k.first, w);
        }
        return out;
    }

    // fresh id for curves added programmatically
    CurveId next_id() const {
        return curves.empty() ? 0 : curves.rbegin()->first + 1;
    }
};

// Convenience builder: appends a T-chain as a path of curves with
// self-intersections -b_j and returns their ids in chain order.
inline std::vector<CurveId> add_tchain(Configuration& c, const Chain& word) {
    int k = int(c.tchains.size());
    std::vector<CurveId> ids;
    CurveId id = c.next_id();
    for (std::size_t j = 0; j < word.size(); ++j, ++id) {
        Curve cu;
        cu.id = id;
        cu.self_int = -word[j];
        cu.k_degree = word[j] - 2;
        cu.chain = k;
        cu.pos = int(j) + 1;
        c.curves[id] = cu;
        ids.push_back(id);
        if (j > 0)
            c.add_edge(ids[j - 1], id);
    }
    c.tchains.push_back(ids);
    return ids;
}

inline CurveId add_curve(Configuration& c, Int self_int, CurveId id = -1) {
    if (id < 0)
        id = c.next_id();
    Curve cu;
    cu.id = id;
    cu.self_int = self_int;
    cu.k_degree = -2 - self_int;
    if (!c.curves.emplace(id, cu).second)
        throw std::invalid_argument("duplicate curve id " + std::to_string(id));
    return id;
}

// Checks the on-X invariants and attaches TChainData to the
// configuration.  Returns a list of human-readable violations; empty
// means valid.
inline std::vector<std::string> validate_config(Configuration& c) {
    std::vector<std::string> errs;
    for (const auto& [id, cu] : c.curves) {
        if (cu.id != id)
            errs.push_back("curve " + std::to_string(id) + ": id mismatch");
        if (cu.k_degree != -2 - cu.self_int)
            errs.push_back("curve " + std::to_string(id) +
                           ": k_degree must be -2 - self_int on X");
    }
    for (const auto& [k, w] : c.edges) {
        if (k.first == k.second)
            errs.push_back("self edge at " + std::to_string(k.first));
        if (w <= 0)
            errs.push_back("edge weights must be positive");
        if (!c.curves.count(k.first) || !c.curves.count(k.second))
            errs.push_back("edge endpoint does not resolve");
        // two smooth curves may meet transversally at several points
        // (e.g. a nodal fiber's blow-up), but inside the chain union
        // every crossing must be a single point
        else if (w > 1 && c.curves.at(k.first).in_c() && c.curves.at(k.second).in_c())
            errs.push_back("edge (" + std::to_string(k.first) + "," +
                           std::to_string(k.second) +
                           "): chain curves must meet with multiplicity 1");
    }
    c.chain_data.clear();
    for (std::size_t k = 0; k < c.tchains.size(); ++k) {
        const auto& ids = c.tchains[k];
        Chain word;
        bool ok = true;
        for (std::size_t j = 0; j < ids.size(); ++j) {
            auto it = c.curves.find(ids[j]);
            if (it == c.curves.end()) {
                errs.push_back("tchain " + std::to_string(k + 1) + ": unknown curve id");
                ok = false;
                break;
            }
            const Curve& cu = it->second;
            if (cu.chain != int(k) || cu.pos != int(j) + 1) {
                errs.push_back("tchain " + std::to_string(k + 1) +
                               ": curve membership labels inconsistent");
                ok = false;
            }
            if (cu.self_int > -2) {
                errs.push_back("tchain " + std::to_string(k + 1) +
                               ": entries must be <= -2");
                ok = false;
            }
            word.push_back(-cu.self_int);
            if (j > 0 && c.edge(ids[j - 1], ids[j]) != 1) {
                errs.push_back("tchain " + std::to_string(k + 1) +
                               ": consecutive curves must meet with multiplicity 1");
                ok = false;
            }
        }
        if (!ok) {
            c.chain_data.emplace_back();
            continue;
        }
        auto data = is_t_chain(word);
        if (!data) {
            errs.push_back("tchain " + std::to_string(k + 1) + ": word is not a T-chain");
            c.chain_data.emplace_back();
        } else {
            c.chain_data.push_back(std::move(*data));
        }
    }
    return errs;
}

// One recorded contraction: the (-1)-curve and its neighbors with
// intersection multiplicities at the time it was contracted.
struct ContractionStep {
    CurveId curve;
    std::vector<std::pair<CurveId, Int>> neighbors;
};

using ContractionLog = std::vector<ContractionStep>;

// Standard blow-down arithmetic.  For each neighbor A met with
// multiplicity t: A.self += t^2, K.A -= t, and A acquires t(t-1)/2
// nodes; formerly distinct neighbors A, B gain t_A * t_B extra
// intersection.
inline ContractionStep blow_down_at(Configuration& c, CurveId id) {
    const Curve& cu = c.curve(id);
    if (cu.self_int != -1)
        throw std::invalid_argument("blow_down_at: curve is not a (-1)-curve");
    // self-intersection -1 alone is not enough: the image of a curve
    // with nodes can reach -1 without being an exceptional curve
    if (cu.k_degree != -1)
        throw std::invalid_argument("blow_down_at: curve is not smooth rational");
    ContractionStep step{id, c.neighbors(id)};
    for (const auto& [a, t] : step.neighbors) {
        Curve& ca = c.curves.at(a);
        ca.self_int += t * t;
        ca.k_degree -= t;
        ca.node_count += t * (t - 1) / 2;
        c.edges.erase(Configuration::ekey(id, a));
    }
    for (std::size_t i = 0; i < step.neighbors.size(); ++i)
        for (std::size_t j = i + 1; j < step.neighbors.size(); ++j)
            c.add_edge(step.neighbors[i].first, step.neighbors[j].first,
                       step.neighbors[i].second * step.neighbors[j].second);
    c.curves.erase(id);
    return step;
}

// Inverse operations, used by forward generators and tests.  The new
// exceptional curve is returned.  targets lists the curves through the
// blown-up point: none (free point), one (smooth point of a curve), or
// two (a node, consuming one unit of their mutual intersection).
inline CurveId blow_up_at(Configuration& c, const std::vector<CurveId>& targets) {
    if (targets.size() > 2)
        throw std::invalid_argument("blow_up_at: at most two target curves");
    if (targets.size() == 2) {
        Int w = c.edge(targets[0], targets[1]);
        if (w < 1)
            throw std::invalid_argument("blow_up_at: targets do not meet");
        auto key = Configuration::ekey(targets[0], targets[1]);
        if (w == 1)
            c.edges.erase(key);
        else
            c.edges[key] = w - 1;
    }
    CurveId id = add_curve(c, -1);
    for (CurveId t : targets) {
        Curve& ct = c.curves.at(t);
        ct.self_int -= 1;
        ct.k_degree += 1;
        c.add_edge(id, t);
    }
    return id;
}

struct ContractionResult {
    Configuration minimal;
    Int m = 0;
    ContractionLog log;
};

// Contracts (-1)-curves in canonical order (lowest id first, rescan
// after each contraction) until none remain.
inline ContractionResult contract_to_minimal(const Configuration& x) {
    ContractionResult r;
    r.minimal = x;
    for (;;) {
        CurveId pick = -1;
        for (const auto& [id, cu] : r.minimal.curves) {
            if (cu.self_int == -1 && cu.k_degree == -1) {
                pick = id;
                break;
            }
        }
        if (pick < 0)
            break;
        r.log.push_back(blow_down_at(r.minimal, pick));
        r.m += 1;
    }
    return r;
}

// An integer-coefficient divisor supported on the curves of X.
using Divisor = std::map<CurveId, Int>;

// E_i: the total transform in X of the i-th blown-up point.
struct ExceptionalDivisor {
    int index = 0;  // blow-up order, 1-based: contraction step m+1-index
    Divisor coeff;
};

// Intersection form of X evaluated on two divisors.
inline Int pairing(const Divisor& d1, const Divisor& d2, const Configuration& x) {
    Int out = 0;
    for (const auto& [a, ca] : d1) {
        for (const auto& [b, cb] : d2) {
            if (ca == 0 || cb == 0)
                continue;
            out += ca * cb * (a == b ? x.curve(a).self_int : x.edge(a, b));
        }
    }
    return out;
}

inline Divisor reduced_c_divisor(const Configuration& x) {
    Divisor c;
    for (const auto& [id, cu] : x.curves)
        if (cu.in_c())
            c[id] = 1;
    return c;
}

// Reconstructs every E_i by replaying the contraction log in reverse
// (blow-ups from S back to X): when a curve reappears, each existing
// divisor gains on it the multiplicity of the blown-up point on that
// divisor, i.e. the t-weighted sum of its coefficients on the curves
// through the point.  Verifies E_i.E_j = -1 iff i = j, else 0.
inline std::vector<ExceptionalDivisor> exceptional_divisors(const ContractionLog& log,
                                                            const Configuration& x) {
    std::vector<ExceptionalDivisor> out;
    out.reserve(log.size());
    for (auto it = log.rbegin(); it != log.rend(); ++it) {
        for (ExceptionalDivisor& e : out) {
            Int c = 0;
            for (const auto& [a, t] : it->neighbors) {
                auto f = e.coeff.find(a);
                if (f != e.coeff.end())
                    c += t * f->second;
            }
            if (c != 0)
                e.coeff[it->curve] = c;
        }
        ExceptionalDivisor fresh;
        fresh.index = int(out.size()) + 1;
        fresh.coeff[it->curve] = 1;
        out.push_back(std::move(fresh));
    }
    for (std::size_t i = 0; i < out.size(); ++i) {
        for (std::size_t j = i; j < out.size(); ++j) {
            Int p = pairing(out[i].coeff, out[j].coeff, x);
            if (p != (i == j ? -1 : 0))
                throw std::logic_error("exceptional divisor pairing invariant failed");
        }
        // each component meets E_i in 0 or -1, with -1 at most once
        int neg = 0;
        for (const auto& [a, ca] : out[i].coeff) {
            Divisor comp{{a, 1}};
            Int p = pairing(out[i].coeff, comp, x);
            if (p == -1)
                ++neg;
            else if (p != 0)
                throw std::logic_error("exceptional divisor component pairing not in {0,-1}");
        }
        if (neg != 1)
            throw std::logic_error("exceptional divisor must meet exactly one component at -1");
    }
    return out;
}

// Per-curve verdicts of the nef/ampleness necessary conditions: for
// every curve G not in C, G.K_X - sum delta_{i,j} (C_{i,j}.G) must be
// strictly positive.  Only a screen: passing never certifies
// ampleness.
struct ScreenVerdict {
    CurveId curve;
    Rational value;  // the left-hand side above
    bool pass;
};

struct ScreenReport {
    std::vector<ScreenVerdict> verdicts;
    bool passed = true;
};

inline ScreenReport ampleness_screen(const Configuration& x) {
    if (x.chain_data.size() != x.tchains.size())
        throw std::logic_error("ampleness_screen needs a validated configuration");
    ScreenReport rep;
    for (const auto& [id, cu] : x.curves) {
        if (cu.in_c())
            continue;
        Rational v = cu.k_degree;  // G.K_X = -2 - G^2 on X
        for (std::size_t k = 0; k < x.tchains.size(); ++k) {
            const auto& ids = x.tchains[k];
            const auto& delta = x.chain_data[k].delta;
            for (std::size_t j = 0; j < ids.size(); ++j) {
                Int w = x.edge(id, ids[j]);
                if (w != 0)
                    v -= delta[j] * w;
            }
        }
        bool pass = v > 0;
        rep.verdicts.push_back(ScreenVerdict{id, v, pass});
        rep.passed = rep.passed && pass;
    }
    return rep;
}

// Canonical-class bookkeeping through the contraction, with the two
// independent K_W^2 computations cross-checked, plus the intersection
// identity sum E_i.C = sum (r_j - d_j + 2) - lambda.
struct CanonicalInvariants {
    Int m = 0;
    Int kx_square = 0;
    Int kw_square = 0;          // K_S^2 - m + sum(r_i - d_i + 1)
    Rational kw_square_pairing; // K_X^2 - sum delta_{i,j} (b_{i,j} - 2)
    Int lambda = 0;             // K_S . image of C
    Int sum_ei_dot_c = 0;
};

inline CanonicalInvariants canonical_invariants(const Configuration& x,
                                                const ContractionResult& r) {
    if (x.chain_data.size() != x.tchains.size())
        throw std::logic_error("canonical_invariants needs a validated configuration");
    CanonicalInvariants inv;
    inv.m = r.m;
    inv.kx_square = x.ks_square - r.m;

    Int rd1 = 0;  // sum (r_i - d_i + 1)
    Int rd2 = 0;  // sum (r_i - d_i + 2)
    for (const TChainData& t : x.chain_data) {
        rd1 += t.r_minus_d + 1;
        rd2 += t.r_minus_d + 2;
    }
    inv.kw_square = x.ks_square - r.m + rd1;

    inv.kw_square_pairing = inv.kx_square;
    for (std::size_t k = 0; k < x.tchains.size(); ++k)
        for (std::size_t j = 0; j < x.tchains[k].size(); ++j)
            inv.kw_square_pairing -=
                x.chain_data[k].delta[j] * (x.chain_data[k].chain[j] - 2);

    for (const auto& [id, cu] : r.minimal.curves)
        if (cu.in_c())
            inv.lambda += cu.k_degree;

    Divisor c = reduced_c_divisor(x);
    for (const ExceptionalDivisor& e : exceptional_divisors(r.log, x))
        inv.sum_ei_dot_c += pairing(e.coeff, c, x);

    if (Rational(inv.kw_square) != inv.kw_square_pairing)
        throw std::logic_error("K_W^2 bookkeeping mismatch (engine defect)");
    if (inv.sum_ei_dot_c != rd2 - inv.lambda)
        throw std::logic_error("sum E_i.C != sum(r_j-d_j+2) - lambda (engine defect)");
    return inv;
}

}  // namespace tsing
