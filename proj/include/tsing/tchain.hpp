#pragma once

#include "tsing/cfrac.hpp"

#include <map>
#include <set>
#include <utility>

namespace tsing {

enum class Side { left, right };

// Working state for the T-chain recursion: the chain together with its
// t-vector (t_1,...,t_r, where the discrepancy of the j-th curve is
// -1 + t_j/n) and the index n.  t_1 + t_r = n throughout.
struct GrowState {
    Chain chain;
    std::vector<Int> t;
    Int n;
};

// One step of the T-chain recursion, preserving d:
//   left:  [b1,...,br] -> [2, b1,..., br+1],  t -> (t1+tr, t1,...,tr),  n -> n+tr
//   right: [b1,...,br] -> [b1+1,...,br, 2],   t -> (t1,...,tr, t1+tr),  n -> n+t1
inline GrowState grow(const GrowState& s, Side side) {
    GrowState out;
    out.chain.reserve(s.chain.size() + 1);
    out.t.reserve(s.t.size() + 1);
    if (side == Side::left) {
        out.n = s.n + s.t.back();
        out.chain.push_back(2);
        out.chain.insert(out.chain.end(), s.chain.begin(), s.chain.end());
        out.chain.back() += 1;
        out.t.push_back(s.t.front() + s.t.back());
        out.t.insert(out.t.end(), s.t.begin(), s.t.end());
    } else {
        out.n = s.n + s.t.front();
        out.chain.insert(out.chain.end(), s.chain.begin(), s.chain.end());
        out.chain.front() += 1;
        out.chain.push_back(2);
        out.t.insert(out.t.end(), s.t.begin(), s.t.end());
        out.t.push_back(s.t.front() + s.t.back());
    }
    return out;
}

// A recognized T-chain with all derived data.  center holds 1-based
// positions (the curves with t_j = 1, equivalently minimal discrepancy
// -(n-1)/n).
struct TChainData {
    Chain chain;
    TParams params;
    std::vector<Int> t;
    std::vector<Rational> delta;
    std::vector<int> center;
    Int r_minus_d;
};

namespace detail {

// Base cases of the recursion: [4] (d = 1) and [3,2,...,2,3] where the
// number of 2's is d - 2 (so d = r).  Both have n = 2 and all t_j = 1.
inline std::optional<Int> base_case_d(const Chain& c) {
    if (c.size() == 1)
        return c[0] == 4 ? std::optional<Int>(1) : std::nullopt;
    if (c.front() != 3 || c.back() != 3)
        return std::nullopt;
    for (std::size_t j = 1; j + 1 < c.size(); ++j)
        if (c[j] != 2)
            return std::nullopt;
    return Int(c.size());
}

inline TChainData finish(GrowState s, Int d) {
    TChainData out;
    Fraction f = hj_evaluate(s.chain);
    Int dn = d * s.n;
    if (f.m != d * s.n * s.n || (f.q + 1) % dn != 0)
        throw std::logic_error("T-chain replay disagrees with its fraction");
    Int a = (f.q + 1) / dn;
    if (a <= 0 || a >= s.n || boost::multiprecision::gcd(s.n, a) != 1)
        throw std::logic_error("T-chain replay produced invalid residue a");
    out.params = TParams{d, s.n, a};
    out.r_minus_d = Int(s.chain.size()) - d;
    out.delta.reserve(s.t.size());
    for (std::size_t j = 0; j < s.t.size(); ++j) {
        out.delta.push_back(Rational(s.t[j], s.n) - 1);
        if (s.t[j] == 1)
            out.center.push_back(int(j) + 1);
    }
    out.chain = std::move(s.chain);
    out.t = std::move(s.t);
    return out;
}

}  // namespace detail

// Reverse recognition: peel grow steps until a base case appears, then
// replay forward to rebuild the t-vector and n.  A chain that is not a
// base case and has 2 at both ends (or 2 at neither) is not a T-chain;
// this also rejects the ADE chains [2,...,2].
inline std::optional<TChainData> is_t_chain(const Chain& c) {
    require_chain(c);
    Chain w = c;
    std::vector<Side> sides;  // peeled outermost-first
    std::optional<Int> d;
    while (!(d = detail::base_case_d(w))) {
        if (w.size() >= 2 && w.front() == 2 && w.back() >= 3) {
            sides.push_back(Side::left);
            w.erase(w.begin());
            w.back() -= 1;
        } else if (w.size() >= 2 && w.back() == 2 && w.front() >= 3) {
            sides.push_back(Side::right);
            w.pop_back();
            w.front() -= 1;
        } else {
            return std::nullopt;
        }
    }
    GrowState s{std::move(w), std::vector<Int>(0), 2};
    s.t.assign(s.chain.size(), 1);
    for (auto it = sides.rbegin(); it != sides.rend(); ++it)
        s = grow(s, *it);
    if (s.chain != c)
        throw std::logic_error("T-chain replay did not reproduce the input");
    return detail::finish(std::move(s), *d);
}

// Independent discrepancy oracle via adjunction: solves
//   sum_k delta_k (C_k . C_j) = b_j - 2   for all j,
// where the intersection matrix is tridiagonal with diagonal -b_j and
// off-diagonal 1.  Works for any chain, T or not.
inline std::vector<Rational> discrepancies_adjunction_oracle(const Chain& c) {
    require_chain(c);
    std::size_t r = c.size();
    // dense Gaussian elimination over exact rationals; r is tiny
    std::vector<std::vector<Rational>> m(r, std::vector<Rational>(r + 1, 0));
    for (std::size_t j = 0; j < r; ++j) {
        m[j][j] = -Rational(c[j]);
        if (j > 0)
            m[j][j - 1] = 1;
        if (j + 1 < r)
            m[j][j + 1] = 1;
        m[j][r] = Rational(c[j]) - 2;
    }
    for (std::size_t col = 0; col < r; ++col) {
        std::size_t piv = col;
        while (piv < r && m[piv][col] == 0)
            ++piv;
        if (piv == r)
            throw std::logic_error("singular intersection matrix");
        std::swap(m[piv], m[col]);
        for (std::size_t row = 0; row < r; ++row) {
            if (row == col || m[row][col] == 0)
                continue;
            Rational f = m[row][col] / m[col][col];
            for (std::size_t k = col; k <= r; ++k)
                m[row][k] -= f * m[col][k];
        }
    }
    std::vector<Rational> delta(r);
    for (std::size_t j = 0; j < r; ++j)
        delta[j] = m[j][r] / m[j][j];
    return delta;
}

// All T-chains of length <= max_r, breadth-first from the base cases,
// deduplicated, ordered by length then lexicographically.
inline std::vector<TChainData> enumerate_t_chains(int max_r) {
    if (max_r < 1)
        throw std::invalid_argument("max_r must be >= 1");
    std::vector<GrowState> frontier;
    auto base = [](Chain c) {
        GrowState s{std::move(c), {}, 2};
        s.t.assign(s.chain.size(), 1);
        return s;
    };
    frontier.push_back(base(Chain{4}));
    for (int r = 2; r <= max_r; ++r) {
        Chain c(std::size_t(r), Int(2));
        c.front() = c.back() = 3;
        frontier.push_back(base(std::move(c)));
    }
    std::set<Chain> seen;
    std::vector<Chain> chains;
    while (!frontier.empty()) {
        std::vector<GrowState> next;
        for (GrowState& s : frontier) {
            if (!seen.insert(s.chain).second)
                continue;
            chains.push_back(s.chain);
            if (int(s.chain.size()) < max_r) {
                next.push_back(grow(s, Side::left));
                next.push_back(grow(s, Side::right));
            }
        }
        frontier = std::move(next);
    }
    std::sort(chains.begin(), chains.end(), [](const Chain& x, const Chain& y) {
        if (x.size() != y.size())
            return x.size() < y.size();
        return x < y;
    });
    std::vector<TChainData> out;
    out.reserve(chains.size());
    for (const Chain& c : chains)
        out.push_back(*is_t_chain(c));
    return out;
}

// Maximum index n over all T-chains with a given r - d.  Since r - d
// equals the number of grow steps and n depends only on the t-vector
// ends (which start at (1, 1) with n = 2 for every base case), it is
// enough to explore grow sequences from [4].  The resulting maxima are
// asserted to satisfy a Fibonacci recurrence from some offset on.
inline std::map<int, Int> fibonacci_index_profile(int max_rd) {
    if (max_rd < 0)
        throw std::invalid_argument("max_rd must be >= 0");
    std::map<int, Int> best;
    // state: (t_front, t_back, n); grows only touch the ends
    struct Ends {
        Int tf, tb, n;
    };
    std::vector<Ends> level{{1, 1, 2}};
    for (int k = 0; k <= max_rd; ++k) {
        for (const Ends& e : level) {
            auto it = best.find(k);
            if (it == best.end() || it->second < e.n)
                best[k] = e.n;
        }
        if (k == max_rd)
            break;
        std::vector<Ends> next;
        next.reserve(level.size() * 2);
        for (const Ends& e : level) {
            next.push_back(Ends{e.tf + e.tb, e.tb, e.n + e.tb});  // left
            next.push_back(Ends{e.tf, e.tf + e.tb, e.n + e.tf});  // right
        }
        level = std::move(next);
    }
    for (int k = 2; k <= max_rd; ++k)
        if (best[k] != best[k - 1] + best[k - 2])
            throw std::logic_error("index profile is not Fibonacci from offset 2");
    return best;
}

}  // namespace tsing
