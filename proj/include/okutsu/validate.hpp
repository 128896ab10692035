#pragma once

#include "okutsu/ordering.hpp"
#include "okutsu/tree.hpp"

#include <numeric>
#include <set>
#include <string>
#include <vector>

namespace okutsu {

struct Violation {
    std::string invariant;
    std::string message;
    std::vector<PrimeId> primes;
    std::vector<int> levels;
};

namespace detail {

class ViolationSink {
public:
    void add(std::string invariant, std::string message, std::vector<PrimeId> primes = {}, std::vector<int> levels = {})
    {
        out_.push_back({std::move(invariant), std::move(message), std::move(primes), std::move(levels)});
    }
    std::size_t size() const { return out_.size(); }
    std::vector<Violation> take() { return std::move(out_); }

private:
    std::vector<Violation> out_;
};

inline void check_prime(const PrimeNode& n, ViolationSink& sink)
{
    if (n.levels.empty()) {
        sink.add("level-count", "prime has no levels", {n.id});
        return;
    }
    if (n.f0 < 1) sink.add("positive-data", "f0 must be at least 1", {n.id}, {0});
    const int final_level = n.depth() + 1;
    for (int i = 1; i <= final_level; ++i) {
        const LevelData& L = n.level(i);
        if (L.e < 1 || L.f < 1 || L.h < 1) {
            sink.add("positive-data", "e, f, h must be positive", {n.id}, {i});
            continue;
        }
        if (std::gcd(L.e, L.h) != 1) sink.add("coprime-slope", "gcd(e, h) must be 1", {n.id}, {i});
        if (i < final_level && L.e * L.f <= 1)
            sink.add("optimal-level", "non-final level must have e*f > 1", {n.id}, {i});
        if (i == final_level && (L.e != 1 || L.f != 1))
            sink.add("final-level", "final level must have e=f=1", {n.id}, {i});
    }
    if (!n.refinements.empty() && n.refinements.size() != n.levels.size()) {
        sink.add("refinement-shape", "refinements must list one entry per level", {n.id});
        return;
    }
    for (int i = 1; i <= static_cast<int>(n.refinements.size()); ++i) {
        const RefinementChain* c = n.chain(i);
        if (!c) continue;
        if (c->empty()) {
            sink.add("refinement-sum", "refinement chain is empty", {n.id}, {i});
            continue;
        }
        Rational sum = 0;
        for (std::size_t k = 0; k < c->size(); ++k) {
            const Rational& s = (*c)[k].slope;
            if (s <= 0) sink.add("refinement-slope", "refinement slopes must be positive", {n.id}, {i});
            if (k + 1 < c->size() && !is_integer(s))
                sink.add("refinement-slope", "refined edges must have integer slope", {n.id}, {i});
            sum += s;
        }
        if (sum != n.level(i).slope())
            sink.add("refinement-sum", "refinement slopes do not sum to the level slope", {n.id}, {i});
    }
}

inline void check_hidden_side(const OMTree& tree, const PrimeId& p, const PrimeId& q, int ell, const Rational& lam,
                              bool match, ViolationSink& sink)
{
    const Rational top = tree.prime(p).level(ell).slope();
    if (lam <= 0) sink.add("hidden-slope-bound", "hidden slope must be positive", {p, q}, {ell});
    if (match && lam != top)
        sink.add("hidden-slope-bound", "hidden slope must equal the level slope when phi(p,q) = phi_{ell,p}", {p, q},
                 {ell});
    if (match && ell == tree.prime(p).depth() + 1)
        sink.add("final-level-match", "the Okutsu approximation of a prime cannot be a common phi-polynomial", {p, q},
                 {ell});
    if (!match && !(top > lam))
        sink.add("hidden-slope-bound", "level slope must exceed the hidden slope when phi_{ell,p} is refined", {p, q},
                 {ell});
}

}  // namespace detail

/// All structural violations of the tree; empty means the tree is coherent.
inline std::vector<Violation> validate(const OMTree& tree)
{
    detail::ViolationSink sink;
    std::set<PrimeId> ids;
    for (const auto& n : tree.primes) {
        if (!ids.insert(n.id).second) sink.add("duplicate-id", "prime id appears twice", {n.id});
        detail::check_prime(n, sink);
    }
    if (tree.primes.empty()) sink.add("empty-tree", "tree has no primes");
    if (sink.size() > 0) return sink.take();

    for (const auto& a : tree.primes)
        for (const auto& b : tree.primes)
            if (a.id < b.id && a.component == b.component && a.f0 != b.f0)
                sink.add("component-f0", "primes sharing a root must share f0", {a.id, b.id}, {0});

    // Pair records.
    std::set<std::pair<PrimeId, PrimeId>> seen;
    for (const auto& rec : tree.pairs) {
        if (!tree.has_prime(rec.p) || !tree.has_prime(rec.q)) {
            sink.add("pair-unknown-prime", "pair record names an unknown prime", {rec.p, rec.q});
            continue;
        }
        if (rec.p == rec.q) {
            sink.add("pair-self", "pair record relates a prime to itself", {rec.p});
            continue;
        }
        auto key = std::minmax(rec.p, rec.q);
        if (!seen.insert({key.first, key.second}).second)
            sink.add("pair-duplicate", "pair recorded twice", {rec.p, rec.q});
        const PrimeNode& np = tree.prime(rec.p);
        const PrimeNode& nq = tree.prime(rec.q);
        if (np.component != nq.component) {
            if (rec.ell != 0)
                sink.add("pair-cross-component", "primes in different components have index 0", {rec.p, rec.q});
            continue;
        }
        if (rec.ell < 1 || rec.ell > std::min(np.depth(), nq.depth()) + 1) {
            sink.add("ell-range", "index of coincidence out of range", {rec.p, rec.q}, {rec.ell});
            continue;
        }
        for (int i = 1; i < rec.ell; ++i) {
            if (!(np.level(i) == nq.level(i)))
                sink.add("shared-levels", "levels below the index of coincidence must agree", {rec.p, rec.q}, {i});
            const RefinementChain* cp = np.chain(i);
            const RefinementChain* cq = nq.chain(i);
            if (cp && cq && *cp != *cq)
                sink.add("shared-levels", "refinement chains below the index of coincidence must agree",
                         {rec.p, rec.q}, {i});
        }
        if (rec.minor_index && *rec.minor_index < 1)
            sink.add("minor-index", "minor index must be positive", {rec.p, rec.q}, {rec.ell});
    }
    for (const auto& a : tree.primes)
        for (const auto& b : tree.primes)
            if (a.id < b.id && a.component == b.component && !tree.find_pair(a.id, b.id))
                sink.add("pair-missing", "primes sharing a root need a coincidence record", {a.id, b.id});
    if (sink.size() > 0) return sink.take();

    for (const auto& rec : tree.pairs) {
        if (rec.ell == 0) continue;
        try {
            const HiddenSlopes h = hidden_slopes(tree, rec.p, rec.q);
            detail::check_hidden_side(tree, rec.p, rec.q, rec.ell, h.lambda_pq, h.match_p, sink);
            detail::check_hidden_side(tree, rec.q, rec.p, rec.ell, h.lambda_qp, h.match_q, sink);
        } catch (const InconsistentTree& e) {
            sink.add("hidden-slope-recompute", e.what(), {rec.p, rec.q}, {rec.ell});
        } catch (const InsufficientData& e) {
            sink.add("hidden-slope-missing", e.what(), {rec.p, rec.q}, {rec.ell});
        }
        try {
            (void)extended_index(tree, rec.p, rec.q);
        } catch (const InconsistentTree& e) {
            sink.add("minor-index-recompute", e.what(), {rec.p, rec.q}, {rec.ell});
        } catch (const InsufficientData&) {
        }
    }

    // Ultrametric property of i and of the extended index.
    const auto& P = tree.primes;
    for (std::size_t a = 0; a < P.size(); ++a)
        for (std::size_t b = a + 1; b < P.size(); ++b)
            for (std::size_t c = b + 1; c < P.size(); ++c) {
                if (P[a].component != P[b].component || P[a].component != P[c].component) continue;
                std::vector<int> v{index_of_coincidence(tree, P[a].id, P[b].id),
                                   index_of_coincidence(tree, P[a].id, P[c].id),
                                   index_of_coincidence(tree, P[b].id, P[c].id)};
                std::sort(v.begin(), v.end());
                if (v[0] != v[1]) {
                    sink.add("ultrametric", "the two smallest indices of coincidence in a triple must agree",
                             {P[a].id, P[b].id, P[c].id});
                    continue;
                }
                try {
                    std::vector<ExtendedIndex> w{extended_index(tree, P[a].id, P[b].id),
                                                 extended_index(tree, P[a].id, P[c].id),
                                                 extended_index(tree, P[b].id, P[c].id)};
                    std::sort(w.begin(), w.end());
                    if (w[0] != w[1])
                        sink.add("ultrametric-extended", "the two smallest extended indices in a triple must agree",
                                 {P[a].id, P[b].id, P[c].id});
                } catch (const std::exception&) {
                }
            }

    if (tree.ordering) {
        std::vector<PrimeId> a = *tree.ordering;
        std::vector<PrimeId> b = tree.ids();
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        if (a != b) {
            sink.add("ordering-permutation", "ordering must list every prime exactly once", *tree.ordering);
        } else if (sink.size() == 0) {
            for (const auto& ns : interval_violations(tree, *tree.ordering))
                sink.add("ordering-interval", "primes below a common node must be contiguous in the ordering",
                         ns.members, {ns.depth});
        }
    }

    // Valuations of x.
    std::map<std::string, std::optional<Rational>> comp_value;
    bool uses_x = false;
    std::set<std::string> components;
    for (const auto& n : tree.primes) {
        components.insert(n.component);
        if (n.f0 > 1) uses_x = true;
    }
    for (const auto& [p, v] : tree.x_valuations) {
        if (!tree.has_prime(p)) {
            sink.add("x-valuation-unknown-prime", "x valuation given for an unknown prime", {p});
            continue;
        }
        const PrimeNode& n = tree.prime(p);
        if (v < 0) sink.add("x-valuation-negative", "valuation of x must be non-negative", {p});
        if (v > 0 && n.f0 > 1) sink.add("x-valuation-f0", "x is a unit at primes whose root has degree > 1", {p});
        auto& slot = comp_value[n.component];
        if (slot && *slot != v)
            sink.add("x-valuation-component", "primes sharing a root must share the valuation of x", {p});
        slot = v;
    }
    if (uses_x && components.size() > 1)
        for (const auto& n : tree.primes)
            if (n.f0 == 1 && !tree.x_valuations.count(n.id))
                sink.add("x-valuation-required",
                         "x appears in numerators and this prime's root may be y; supply its valuation of x", {n.id});
    return sink.take();
}

}  // namespace okutsu
