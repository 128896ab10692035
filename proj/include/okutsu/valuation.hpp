#pragma once

#include "okutsu/tree.hpp"

#include <algorithm>
#include <compare>
#include <map>
#include <string>
#include <vector>

namespace okutsu {

struct FactorKey {
    PrimeId prime;
    int level = 0;  ///< 0 is x, r_p + 1 is the Okutsu approximation phi_p

    friend auto operator<=>(const FactorKey&, const FactorKey&) = default;
};

/// A product of phi-polynomials, stored as exponents keyed by (prime, level).
class FactorProduct {
public:
    FactorProduct() = default;

    static FactorProduct single(const PrimeId& p, int level, std::int64_t exponent = 1)
    {
        FactorProduct g;
        g.multiply(p, level, exponent);
        return g;
    }

    std::int64_t exponent(const PrimeId& p, int level) const
    {
        auto it = exps_.find({p, level});
        return it == exps_.end() ? 0 : it->second;
    }

    void multiply(const PrimeId& p, int level, std::int64_t exponent)
    {
        if (exponent < 0) throw UsageError("negative exponent");
        if (exponent == 0) return;
        exps_[{p, level}] += exponent;
    }

    /// Removes `exponent` copies of a factor; the factor must be present that often.
    void divide(const PrimeId& p, int level, std::int64_t exponent)
    {
        auto it = exps_.find({p, level});
        if (exponent < 0 || it == exps_.end() || it->second < exponent) throw UsageError("factor not present");
        it->second -= exponent;
        if (it->second == 0) exps_.erase(it);
    }

    void set(const PrimeId& p, int level, std::int64_t exponent)
    {
        exps_.erase({p, level});
        multiply(p, level, exponent);
    }

    /// The factors keyed by p.
    FactorProduct part(const PrimeId& p) const
    {
        FactorProduct out;
        for (const auto& [k, e] : exps_)
            if (k.prime == p) out.exps_.emplace(k, e);
        return out;
    }

    std::vector<PrimeId> primes() const
    {
        std::vector<PrimeId> out;
        for (const auto& [k, e] : exps_)
            if (out.empty() || out.back() != k.prime) out.push_back(k.prime);
        return out;
    }

    bool empty() const { return exps_.empty(); }
    const std::map<FactorKey, std::int64_t>& factors() const { return exps_; }

    friend FactorProduct operator*(FactorProduct a, const FactorProduct& b)
    {
        for (const auto& [k, e] : b.exps_) a.multiply(k.prime, k.level, e);
        return a;
    }

    friend bool operator==(const FactorProduct&, const FactorProduct&) = default;

private:
    std::map<FactorKey, std::int64_t> exps_;
};

/// I = prod p^{a_p}; primes not listed have exponent 0.
struct FractionalIdeal {
    std::map<PrimeId, std::int64_t> exponents;

    std::int64_t exponent(const PrimeId& p) const
    {
        auto it = exponents.find(p);
        return it == exponents.end() ? 0 : it->second;
    }

    /// a_p / e(p/m), the amount subtracted from w_p.
    Rational shift(const OMTree& tree, const PrimeId& p) const
    {
        return make_rational(exponent(p), derived_invariants(tree, p).ramification);
    }
};

/// w_p(phi_{i,q}) for observer p and owner q.
inline ExtValue w_phi(const OMTree& tree, const PrimeId& p, const PrimeId& q, int i)
{
    const PrimeNode& nq = tree.prime(q);
    (void)tree.prime(p);
    const int r = nq.depth();
    if (i < 0 || i > r + 1)
        throw UsageError("level " + std::to_string(i) + " out of range for prime " + q);
    if (i == 0) return ExtValue(tree.x_valuation(p));
    const DerivedInvariants d = derived_invariants(nq);
    const auto I = static_cast<std::size_t>(i);
    if (p == q) {
        if (i == r + 1) return ExtValue::infinity();
        return ExtValue((d.V[I] + nq.level(i).slope()) / Rational(d.E[I]));
    }
    const int ell = index_of_coincidence(tree, p, q);
    if (ell == 0) return ExtValue(Rational(0));
    if (i < ell) return ExtValue((d.V[I] + nq.level(i).slope()) / Rational(d.E[I]));
    const auto L = static_cast<std::size_t>(ell);
    const HiddenSlopes h = hidden_slopes(tree, p, q);
    if (i == ell && h.match_q) return ExtValue((d.V[L] + h.lambda_pq) / Rational(d.E[L]));
    const Rational lam = std::min(h.lambda_pq, h.lambda_qp);
    return ExtValue(Rational(d.m[I], d.m[L]) * (d.V[L] + lam) / Rational(d.E[L]));
}

inline std::int64_t degree(const OMTree& tree, const FactorProduct& g)
{
    std::int64_t deg = 0;
    for (const auto& [k, e] : g.factors()) {
        const DerivedInvariants d = derived_invariants(tree, k.prime);
        if (k.level < 0 || k.level > tree.prime(k.prime).depth() + 1)
            throw UsageError("level out of range for prime " + k.prime);
        deg += e * d.m[static_cast<std::size_t>(k.level)];
    }
    return deg;
}

/// The Okutsu numerator g_{i,p}; g_{n_p,p} is phi_p.
inline FactorProduct okutsu_numerator(const OMTree& tree, const PrimeId& p, std::int64_t i)
{
    const PrimeNode& np = tree.prime(p);
    const DerivedInvariants d = derived_invariants(np);
    if (i < 0 || i > d.n) throw UsageError("numerator index out of range for prime " + p);
    const int r = np.depth();
    FactorProduct g;
    if (i == d.n) {
        g.multiply(p, r + 1, 1);
        return g;
    }
    std::int64_t rem = i;
    for (int j = r; j >= 1; --j) {
        const std::int64_t mj = d.m[static_cast<std::size_t>(j)];
        g.multiply(p, j, rem / mj);
        rem %= mj;
    }
    g.multiply(p, 0, rem);
    return g;
}

/// w_p(g) under the convention that any factor phi_p makes it infinite.
inline ExtValue w_product(const OMTree& tree, const PrimeId& p, const FactorProduct& g)
{
    ExtValue total(Rational(0));
    for (const auto& [k, e] : g.factors()) total += e * w_phi(tree, p, k.prime, k.level);
    return total;
}

/// w_{p,I}(g) = w_p(g) - a_p / e(p/m).
inline ExtValue w_ideal(const OMTree& tree, const PrimeId& p, const FactorProduct& g, const FractionalIdeal& I)
{
    return w_product(tree, p, g) - I.shift(tree, p);
}

/// w_{S,I}(g) = min over p in S of w_{p,I}(g).
inline ExtValue w_S(const OMTree& tree, const std::vector<PrimeId>& S, const FactorProduct& g,
                    const FractionalIdeal& I)
{
    if (S.empty()) throw UsageError("w_S needs a non-empty set of primes");
    ExtValue best = ExtValue::infinity();
    for (const auto& p : S) best = std::min(best, w_ideal(tree, p, g, I));
    return best;
}

/// w_p(g) / deg g.
inline ExtValue degree_adjusted(const OMTree& tree, const PrimeId& p, const FactorProduct& g)
{
    const std::int64_t deg = degree(tree, g);
    if (deg == 0) throw UsageError("degree-adjusted valuation of a constant");
    const ExtValue w = w_product(tree, p, g);
    if (w.is_infinite()) return w;
    return ExtValue(w.value() / Rational(deg));
}

/// values[k][i][j] = w_{S[k]}(g_{j, S[i]}) for an ordered set S.
class CrossValuationTable {
public:
    CrossValuationTable() = default;
    CrossValuationTable(std::vector<PrimeId> primes, std::vector<std::int64_t> n,
                        std::vector<std::vector<std::vector<ExtValue>>> values)
        : primes_(std::move(primes)), n_(std::move(n)), values_(std::move(values))
    {
    }

    std::size_t size() const { return primes_.size(); }
    const std::vector<PrimeId>& primes() const { return primes_; }
    std::int64_t n(std::size_t i) const { return n_.at(i); }
    std::int64_t total_degree() const
    {
        std::int64_t s = 0;
        for (auto v : n_) s += v;
        return s;
    }

    const ExtValue& at(std::size_t k, std::size_t i, std::int64_t j) const
    {
        return values_.at(k).at(i).at(static_cast<std::size_t>(j));
    }

    /// Overwrites one entry; used to inject faults when testing verifiers.
    void set(std::size_t k, std::size_t i, std::int64_t j, ExtValue v)
    {
        values_.at(k).at(i).at(static_cast<std::size_t>(j)) = std::move(v);
    }

private:
    std::vector<PrimeId> primes_;
    std::vector<std::int64_t> n_;
    std::vector<std::vector<std::vector<ExtValue>>> values_;
};

inline CrossValuationTable build_table(const OMTree& tree, const std::vector<PrimeId>& S)
{
    if (S.empty()) throw UsageError("valuation table needs a non-empty set of primes");
    std::vector<std::int64_t> n;
    for (const auto& p : S) n.push_back(derived_invariants(tree, p).n);
    std::vector<std::vector<std::vector<ExtValue>>> values(S.size());
    for (std::size_t k = 0; k < S.size(); ++k) {
        values[k].resize(S.size());
        for (std::size_t i = 0; i < S.size(); ++i) {
            const int r = tree.prime(S[i]).depth();
            std::vector<ExtValue> per_level;
            for (int lv = 0; lv <= r + 1; ++lv) per_level.push_back(w_phi(tree, S[k], S[i], lv));
            for (std::int64_t j = 0; j <= n[i]; ++j) {
                ExtValue v(Rational(0));
                const FactorProduct g = okutsu_numerator(tree, S[i], j);
                for (const auto& [key, e] : g.factors())
                    v += e * per_level[static_cast<std::size_t>(key.level)];
                values[k][i].push_back(v);
            }
        }
    }
    return CrossValuationTable(S, std::move(n), std::move(values));
}

}  // namespace okutsu
