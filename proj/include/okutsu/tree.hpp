#pragma once

#include "okutsu/errors.hpp"
#include "okutsu/rational.hpp"

#include <algorithm>
#include <compare>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

namespace okutsu {

using PrimeId = std::string;

/// One level (e, f, h) of an OM representation; the slope is h/e.
struct LevelData {
    std::int64_t e = 1;
    std::int64_t f = 1;
    std::int64_t h = 1;

    Rational slope() const { return make_rational(h, e); }
    friend bool operator==(const LevelData&, const LevelData&) = default;
};

/// One edge of a refinement chain in the non-optimised tree.
/// `phi` and `psi` are opaque labels; equal labels denote equal objects.
struct RefinementStep {
    std::string phi;
    Rational slope;
    std::string psi;

    friend bool operator==(const RefinementStep&, const RefinementStep&) = default;
};

using RefinementChain = std::vector<RefinementStep>;

struct PrimeNode {
    PrimeId id;
    std::string component;
    std::int64_t f0 = 1;
    /// levels[i - 1] is level i; the last entry is the final level r_p + 1.
    std::vector<LevelData> levels;
    /// Either empty or one optional chain per level.
    std::vector<std::optional<RefinementChain>> refinements;

    /// The Okutsu depth r_p.
    int depth() const { return static_cast<int>(levels.size()) - 1; }

    const LevelData& level(int i) const
    {
        if (i < 1 || i > static_cast<int>(levels.size()))
            throw UsageError("level " + std::to_string(i) + " out of range for prime " + id);
        return levels[static_cast<std::size_t>(i - 1)];
    }

    const RefinementChain* chain(int i) const
    {
        if (i < 1 || i > static_cast<int>(refinements.size())) return nullptr;
        const auto& c = refinements[static_cast<std::size_t>(i - 1)];
        return c ? &*c : nullptr;
    }
};

/// Coincidence data for an unordered pair of primes in one component.
/// `lambda_pq` is the hidden slope of p with respect to q.
struct PairRecord {
    PrimeId p;
    PrimeId q;
    int ell = 0;
    std::optional<Rational> lambda_pq;
    std::optional<Rational> lambda_qp;
    std::optional<bool> phi_match_p;
    std::optional<bool> phi_match_q;
    std::optional<int> minor_index;
};

struct OMTree {
    std::vector<PrimeNode> primes;
    std::vector<PairRecord> pairs;
    std::optional<std::vector<PrimeId>> ordering;
    std::map<PrimeId, Rational> x_valuations;

    bool has_prime(const PrimeId& id) const
    {
        return std::any_of(primes.begin(), primes.end(), [&](const PrimeNode& n) { return n.id == id; });
    }

    const PrimeNode& prime(const PrimeId& id) const
    {
        for (const auto& n : primes)
            if (n.id == id) return n;
        throw UsageError("unknown prime '" + id + "'");
    }

    const PairRecord* find_pair(const PrimeId& p, const PrimeId& q) const
    {
        for (const auto& r : pairs)
            if ((r.p == p && r.q == q) || (r.p == q && r.q == p)) return &r;
        return nullptr;
    }

    /// w_p(x); zero unless supplied.
    Rational x_valuation(const PrimeId& p) const
    {
        auto it = x_valuations.find(p);
        return it == x_valuations.end() ? Rational(0) : it->second;
    }

    std::vector<PrimeId> ids() const
    {
        std::vector<PrimeId> out;
        for (const auto& n : primes) out.push_back(n.id);
        return out;
    }
};

namespace detail {

inline std::int64_t checked_mul(std::int64_t a, std::int64_t b)
{
    std::int64_t r = 0;
    if (__builtin_mul_overflow(a, b, &r)) throw UsageError("degree overflow");
    return r;
}

}  // namespace detail

/// Invariants derived from the levels of one prime. Vectors are indexed by level,
/// with entry 0 describing x (degree 1).
struct DerivedInvariants {
    std::vector<std::int64_t> m;      ///< m[i] = deg phi_i, i = 0..r+1
    std::vector<Rational> V;          ///< V[i], i = 1..r+1 (V[0] = 0)
    std::vector<std::int64_t> E;      ///< E[i] = e_1 ... e_{i-1}, i = 1..r+1
    std::int64_t n = 0;               ///< n_p = m_{r+1}
    std::int64_t ramification = 1;    ///< e(p/m)
    std::int64_t residue_degree = 1;  ///< f(p/m)
};

inline DerivedInvariants derived_invariants(const PrimeNode& node)
{
    if (node.levels.empty()) throw UsageError("prime " + node.id + " has no levels");
    const int r = node.depth();
    DerivedInvariants d;
    d.m.assign(static_cast<std::size_t>(r + 2), 1);
    d.V.assign(static_cast<std::size_t>(r + 2), Rational(0));
    d.E.assign(static_cast<std::size_t>(r + 2), 1);
    d.m[1] = node.f0;
    d.residue_degree = node.f0;
    for (int i = 1; i <= r; ++i) {
        const LevelData& L = node.level(i);
        const auto ef = detail::checked_mul(L.e, L.f);
        d.m[static_cast<std::size_t>(i + 1)] = detail::checked_mul(ef, d.m[static_cast<std::size_t>(i)]);
        d.V[static_cast<std::size_t>(i + 1)] =
            Rational(ef) * (Rational(L.e) * d.V[static_cast<std::size_t>(i)] + Rational(L.h));
        d.E[static_cast<std::size_t>(i + 1)] = detail::checked_mul(d.E[static_cast<std::size_t>(i)], L.e);
        d.ramification = detail::checked_mul(d.ramification, L.e);
        d.residue_degree = detail::checked_mul(d.residue_degree, L.f);
    }
    d.n = d.m[static_cast<std::size_t>(r + 1)];
    return d;
}

inline DerivedInvariants derived_invariants(const OMTree& tree, const PrimeId& p)
{
    return derived_invariants(tree.prime(p));
}

inline bool same_component(const OMTree& tree, const PrimeId& p, const PrimeId& q)
{
    return tree.prime(p).component == tree.prime(q).component;
}

/// i(p, q): 0 across components, otherwise the stored index.
inline int index_of_coincidence(const OMTree& tree, const PrimeId& p, const PrimeId& q)
{
    if (p == q) throw UsageError("index of coincidence needs two distinct primes");
    if (!same_component(tree, p, q)) return 0;
    const PairRecord* rec = tree.find_pair(p, q);
    if (!rec) throw InsufficientData("no coincidence record for pair (" + p + ", " + q + ")");
    return rec->ell;
}

/// i(S) = min of i(p, q) over distinct pairs; 0 when S has fewer than two primes.
inline int index_of_coincidence(const OMTree& tree, const std::vector<PrimeId>& S)
{
    int best = -1;
    for (std::size_t a = 0; a < S.size(); ++a)
        for (std::size_t b = a + 1; b < S.size(); ++b) {
            const int v = index_of_coincidence(tree, S[a], S[b]);
            if (best < 0 || v < best) best = v;
        }
    return best < 0 ? 0 : best;
}

/// Comparison of the level-ell chains of two primes.
struct ChainComparison {
    bool coherent = false;
    int minor_index = 0;
    Rational lambda_pq;
    Rational lambda_qp;
    bool match_p = false;
    bool match_q = false;
};

inline ChainComparison compare_chains(const RefinementChain& cp, const RefinementChain& cq)
{
    ChainComparison out;
    const std::size_t common = std::min(cp.size(), cq.size());
    std::size_t k = 0;
    while (k < common && cp[k] == cq[k]) ++k;
    // Edges leaving a common node share their representative; after the first
    // differing edge the chains lie in different subtrees.
    if (k == common || cp[k].phi != cq[k].phi) return out;
    out.coherent = true;
    out.minor_index = static_cast<int>(k + 1);
    for (std::size_t i = 0; i <= k; ++i) {
        out.lambda_pq += cp[i].slope;
        out.lambda_qp += cq[i].slope;
    }
    out.match_p = (k + 1 == cp.size());
    out.match_q = (k + 1 == cq.size());
    return out;
}

struct HiddenSlopes {
    Rational lambda_pq;  ///< lambda_p^q
    Rational lambda_qp;  ///< lambda_q^p
    bool match_p = false;  ///< phi_{ell,p} = phi(p,q)
    bool match_q = false;  ///< phi_{ell,q} = phi(p,q)

    friend bool operator==(const HiddenSlopes&, const HiddenSlopes&) = default;
};

namespace detail {

inline std::optional<ChainComparison> chain_data(const OMTree& tree, const PrimeId& p, const PrimeId& q, int ell)
{
    const RefinementChain* cp = tree.prime(p).chain(ell);
    const RefinementChain* cq = tree.prime(q).chain(ell);
    if (!cp || !cq) return std::nullopt;
    return compare_chains(*cp, *cq);
}

inline std::optional<HiddenSlopes> stored_slopes(const PairRecord& rec, const PrimeId& p)
{
    if (!rec.lambda_pq || !rec.lambda_qp || !rec.phi_match_p || !rec.phi_match_q) return std::nullopt;
    HiddenSlopes h{*rec.lambda_pq, *rec.lambda_qp, *rec.phi_match_p, *rec.phi_match_q};
    if (rec.p != p) {
        std::swap(h.lambda_pq, h.lambda_qp);
        std::swap(h.match_p, h.match_q);
    }
    return h;
}

}  // namespace detail

/// Hidden slopes of a pair in one component, oriented as (p, q).
inline HiddenSlopes hidden_slopes(const OMTree& tree, const PrimeId& p, const PrimeId& q)
{
    const int ell = index_of_coincidence(tree, p, q);
    if (ell == 0) throw UsageError("hidden slopes are undefined for primes in different components");
    const PairRecord* rec = tree.find_pair(p, q);
    std::optional<HiddenSlopes> stored = detail::stored_slopes(*rec, p);
    std::optional<HiddenSlopes> derived;
    if (auto c = detail::chain_data(tree, p, q, ell)) {
        if (!c->coherent)
            throw InconsistentTree("refinement chains of " + p + " and " + q + " at level " + std::to_string(ell) +
                                   " do not branch from a common representative");
        derived = HiddenSlopes{c->lambda_pq, c->lambda_qp, c->match_p, c->match_q};
    }
    if (stored && derived && !(*stored == *derived))
        throw InconsistentTree("stored hidden slopes of (" + p + ", " + q + ") disagree with refinement chains");
    if (derived) return *derived;
    if (stored) return *stored;
    throw InsufficientData("no hidden slopes for pair (" + p + ", " + q + ")");
}

/// Extended index I(p, q) = [i(p, q), minor index]; [0, 0] across components.
struct ExtendedIndex {
    int ell = 0;
    int minor = 0;

    friend auto operator<=>(const ExtendedIndex&, const ExtendedIndex&) = default;
};

inline ExtendedIndex extended_index(const OMTree& tree, const PrimeId& p, const PrimeId& q)
{
    const int ell = index_of_coincidence(tree, p, q);
    if (ell == 0) return {0, 0};
    const PairRecord* rec = tree.find_pair(p, q);
    std::optional<int> derived;
    if (auto c = detail::chain_data(tree, p, q, ell)) {
        if (!c->coherent)
            throw InconsistentTree("refinement chains of " + p + " and " + q + " are not coherent");
        derived = c->minor_index;
    }
    if (derived && rec->minor_index && *derived != *rec->minor_index)
        throw InconsistentTree("stored minor index of (" + p + ", " + q + ") disagrees with refinement chains");
    if (derived) return {ell, *derived};
    if (rec->minor_index) return {ell, *rec->minor_index};
    throw InsufficientData("insufficient tree data: no refinement chains or minor index for (" + p + ", " + q + ")");
}

/// Extended index when available, treating unknown minor indices as 1.
inline ExtendedIndex extended_index_or_default(const OMTree& tree, const PrimeId& p, const PrimeId& q)
{
    try {
        return extended_index(tree, p, q);
    } catch (const InsufficientData&) {
        return {index_of_coincidence(tree, p, q), 1};
    }
}

}  // namespace okutsu
