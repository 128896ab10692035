#pragma once

#include "okutsu/valuation.hpp"

#include <algorithm>
#include <map>
#include <string>
#include <vector>

namespace okutsu {

/// Radix of level i in the mixed-radix numerators: f0 for x, e_i f_i otherwise.
inline std::int64_t level_radix(const PrimeNode& np, int i)
{
    if (i == 0) return np.f0;
    const LevelData& L = np.level(i);
    return L.e * L.f;
}

/// D(g): total excess degree of the p-parts over n_p.
inline std::int64_t disorder(const OMTree& tree, const std::vector<PrimeId>& S, const FactorProduct& g)
{
    std::int64_t d = 0;
    for (const auto& p : S) d += std::max<std::int64_t>(degree(tree, g.part(p)) - derived_invariants(tree, p).n, 0);
    return d;
}

/// Every exponent below the final level is smaller than its radix.
inline bool is_canonical(const OMTree& tree, const FactorProduct& g)
{
    for (const auto& [k, e] : g.factors()) {
        const PrimeNode& np = tree.prime(k.prime);
        if (k.level <= np.depth() && e >= level_radix(np, k.level)) return false;
    }
    return true;
}

/// g is a product of one extended Okutsu numerator per prime of S.
inline bool in_okutsu_set(const OMTree& tree, const std::vector<PrimeId>& S, const FactorProduct& g)
{
    for (const auto& p : g.primes())
        if (std::find(S.begin(), S.end(), p) == S.end()) return false;
    if (!is_canonical(tree, g)) return false;
    for (const auto& p : S)
        if (degree(tree, g.part(p)) > derived_invariants(tree, p).n) return false;
    return true;
}

namespace detail {

/// A prime q of S with lambda_q^p <= lambda_p^q for every p of S sharing its root.
inline PrimeId min_slope_within_components(const OMTree& tree, std::vector<PrimeId> S)
{
    std::sort(S.begin(), S.end());
    for (const auto& q : S) {
        bool ok = true;
        for (const auto& p : S) {
            if (p == q || !same_component(tree, p, q)) continue;
            const HiddenSlopes h = hidden_slopes(tree, q, p);
            if (h.lambda_pq > h.lambda_qp) {
                ok = false;
                break;
            }
        }
        if (ok) return q;
    }
    throw InconsistentTree("no prime of minimal hidden slope; hidden slopes are inconsistent");
}

/// The prime of `candidates` closest to q: largest extended index, then larger lambda_l^q, then lower id.
inline PrimeId closest_prime(const OMTree& tree, const PrimeId& q, std::vector<PrimeId> candidates)
{
    std::sort(candidates.begin(), candidates.end());
    std::optional<PrimeId> best;
    ExtendedIndex best_idx;
    Rational best_lam;
    for (const auto& l : candidates) {
        if (l == q) continue;
        const ExtendedIndex idx = extended_index_or_default(tree, q, l);
        const Rational lam = idx.ell > 0 ? hidden_slopes(tree, l, q).lambda_pq : Rational(0);
        if (!best || idx > best_idx || (idx == best_idx && lam > best_lam)) {
            best = l;
            best_idx = idx;
            best_lam = lam;
        }
    }
    if (!best) throw UsageError("no candidate prime other than " + q);
    return *best;
}

inline ExtValue adjusted(const OMTree& tree, const PrimeId& p, const PrimeId& q, int level)
{
    const ExtValue w = w_phi(tree, p, q, level);
    if (w.is_infinite()) return w;
    return ExtValue(w.value() / Rational(derived_invariants(tree, q).m[static_cast<std::size_t>(level)]));
}

}  // namespace detail

/// A prime p0 of the connected set S with lambda_{p0}^p <= lambda_p^{p0} for all p in S.
inline PrimeId select_min_slope_prime(const OMTree& tree, const std::vector<PrimeId>& S)
{
    if (S.empty()) throw UsageError("empty set of primes");
    if (S.size() > 1 && index_of_coincidence(tree, S) == 0)
        throw UsageError("minimal-slope prime is defined for connected sets only");
    return detail::min_slope_within_components(tree, S);
}

/// Rewrites g of degree at most n_S into an element of Ok(S) with no smaller w_p for any p in S.
inline FactorProduct canonicalize(const OMTree& tree, const std::vector<PrimeId>& S, const FactorProduct& g)
{
    std::int64_t nS = 0;
    for (const auto& p : S) nS += derived_invariants(tree, p).n;
    for (const auto& p : g.primes())
        if (std::find(S.begin(), S.end(), p) == S.end()) throw UsageError("g has factors outside S: " + p);
    if (degree(tree, g) > nS) throw UsageError("degree of g exceeds n_S");

    std::map<PrimeId, FactorProduct> part;
    std::vector<PrimeId> S0;
    for (const auto& p : S) {
        part[p] = g.part(p);
        if (part[p] != FactorProduct::single(p, tree.prime(p).depth() + 1)) S0.push_back(p);
    }

    auto total_disorder = [&] {
        std::int64_t d = 0;
        for (const auto& p : S)
            d += std::max<std::int64_t>(degree(tree, part[p]) - derived_invariants(tree, p).n, 0);
        return d;
    };

    for (;;) {
        // Make every p-part canonical without lowering any valuation.
        std::vector<PrimeId> open = S0;
        while (!open.empty()) {
            const PrimeId q = detail::min_slope_within_components(tree, open);
            open.erase(std::find(open.begin(), open.end(), q));
            const PrimeNode& nq = tree.prime(q);
            for (int i = 0; i <= nq.depth(); ++i) {
                const std::int64_t radix = level_radix(nq, i);
                const std::int64_t a = part[q].exponent(q, i);
                if (a < radix) continue;
                bool increasing = true;
                for (const auto& p : open)
                    if (detail::adjusted(tree, p, q, i) > detail::adjusted(tree, p, q, i + 1)) increasing = false;
                if (increasing) {
                    part[q].set(q, i, a % radix);
                    part[q].multiply(q, i + 1, a / radix);
                } else {
                    const PrimeId l = detail::closest_prime(tree, q, open);
                    if (i > 0 && index_of_coincidence(tree, q, l) < i)
                        throw std::logic_error("closest prime does not share level " + std::to_string(i));
                    const std::int64_t moved = a - radix + 1;
                    part[q].divide(q, i, moved);
                    part[l].multiply(l, i, moved);
                }
            }
        }
        if (total_disorder() == 0) break;

        // Move the excess of one overfull part to its closest partner.
        PrimeId q;
        for (const auto& p : S0)
            if (degree(tree, part[p]) > derived_invariants(tree, p).n) {
                q = p;
                break;
            }
        std::vector<PrimeId> others;
        for (const auto& p : S0)
            if (p != q) others.push_back(p);
        if (others.empty()) throw std::logic_error("overfull part without a partner");
        const PrimeId l = detail::closest_prime(tree, q, others);
        const int ell = same_component(tree, q, l) ? index_of_coincidence(tree, q, l) : 0;
        const DerivedInvariants dq = derived_invariants(tree, q);
        const std::int64_t m_ell = dq.m[static_cast<std::size_t>(ell)];
        const int top = tree.prime(q).depth() + 1;
        FactorProduct rest = part[q];
        rest.divide(q, top, 1);
        for (const auto& [k, e] : rest.factors()) {
            if (k.level < ell)
                part[l].multiply(l, k.level, e);
            else
                part[l].multiply(l, ell, e * dq.m[static_cast<std::size_t>(k.level)] / m_ell);
        }
        part[q] = FactorProduct::single(q, top);
        S0.erase(std::find(S0.begin(), S0.end(), q));
    }

    FactorProduct out;
    for (const auto& p : S) out = out * part[p];
    return out;
}

}  // namespace okutsu
