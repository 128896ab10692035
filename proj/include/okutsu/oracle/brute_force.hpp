#pragma once

#include "okutsu/errors.hpp"
#include "okutsu/maxmin.hpp"
#include "okutsu/valuation.hpp"

#include <cstdint>
#include <cstdlib>
#include <string>
#include <vector>

namespace okutsu::oracle {

inline constexpr std::uint64_t kDefaultOracleBudget = 10'000'000;

/// Evaluation budget: OKUTSU_ORACLE_BUDGET if set, otherwise 10^7.
inline std::uint64_t oracle_budget()
{
    if (const char* env = std::getenv("OKUTSU_ORACLE_BUDGET")) {
        char* end = nullptr;
        const unsigned long long v = std::strtoull(env, &end, 10);
        if (end != env && *end == '\0') return v;
    }
    return kDefaultOracleBudget;
}

/// Per degree: the largest min-valuation over all products of Okutsu numerators and one witness.
struct BruteForceResult {
    std::vector<ExtValue> best;
    std::vector<MultiIndex> witness;
    std::uint64_t evaluations = 0;
};

/// Values w_{S[k]}(g_{j, S[i]}) for owners i, observers k and indices j.
using ValueCube = std::vector<std::vector<std::vector<ExtValue>>>;

inline BruteForceResult brute_force_cube(const ValueCube& cube, const std::vector<std::int64_t>& n,
                                         const std::vector<Rational>& shifts, std::uint64_t budget)
{
    const std::size_t s = n.size();
    std::uint64_t count = s;
    for (auto v : n) {
        const auto factor = static_cast<std::uint64_t>(v + 1);
        if (count > budget / factor + 1) throw BudgetExceeded("exhaustive search exceeds the evaluation budget");
        count *= factor;
    }
    if (count > budget)
        throw BudgetExceeded("exhaustive search needs " + std::to_string(count) + " evaluations; budget is " +
                             std::to_string(budget));
    std::int64_t total = 0;
    for (auto v : n) total += v;
    BruteForceResult out;
    out.best.assign(static_cast<std::size_t>(total + 1), ExtValue(Rational(0)));
    out.witness.assign(static_cast<std::size_t>(total + 1), MultiIndex{});
    std::vector<bool> seen(static_cast<std::size_t>(total + 1), false);

    // Odometer over all multi-indices; partial[i][k] holds the sum over owners < i.
    std::vector<std::int64_t> idx(s, 0);
    std::vector<std::vector<ExtValue>> partial(s + 1, std::vector<ExtValue>(s, ExtValue(Rational(0))));
    auto refresh = [&](std::size_t from) {
        for (std::size_t i = from; i < s; ++i)
            for (std::size_t k = 0; k < s; ++k)
                partial[i + 1][k] = partial[i][k] + cube[i][k][static_cast<std::size_t>(idx[i])];
    };
    refresh(0);
    for (;;) {
        std::int64_t deg = 0;
        for (auto c : idx) deg += c;
        ExtValue v = ExtValue::infinity();
        for (std::size_t k = 0; k < s; ++k) v = std::min(v, partial[s][k] - shifts[k]);
        out.evaluations += s;
        const auto d = static_cast<std::size_t>(deg);
        if (!seen[d] || v > out.best[d]) {
            seen[d] = true;
            out.best[d] = v;
            out.witness[d] = MultiIndex{idx};
        }
        std::size_t pos = s;
        while (pos > 0) {
            --pos;
            if (idx[pos] < n[pos]) {
                ++idx[pos];
                break;
            }
            idx[pos] = 0;
            if (pos == 0) return out;
        }
        refresh(pos);
    }
}

/// Exhaustive maximum, valuing numerators through w_product rather than the MaxMin table.
inline BruteForceResult brute_force_max(const OMTree& tree, const std::vector<PrimeId>& S, const FractionalIdeal& I,
                                        std::uint64_t budget = oracle_budget())
{
    if (S.empty()) throw UsageError("exhaustive search needs a non-empty set of primes");
    std::vector<std::int64_t> n;
    std::vector<Rational> shifts;
    for (const auto& p : S) {
        n.push_back(derived_invariants(tree, p).n);
        shifts.push_back(I.shift(tree, p));
    }
    std::uint64_t count = 1;
    for (auto v : n) count *= static_cast<std::uint64_t>(v + 1);
    if (count > budget / S.size())
        throw BudgetExceeded("exhaustive search needs " + std::to_string(count * S.size()) +
                             " evaluations; budget is " + std::to_string(budget));
    ValueCube cube(S.size());
    for (std::size_t i = 0; i < S.size(); ++i) {
        cube[i].resize(S.size());
        for (std::int64_t j = 0; j <= n[i]; ++j) {
            const FactorProduct g = okutsu_numerator(tree, S[i], j);
            for (std::size_t k = 0; k < S.size(); ++k) cube[i][k].push_back(w_product(tree, S[k], g));
        }
    }
    return brute_force_cube(cube, n, shifts, budget);
}

/// Exhaustive maximum over a bare table.
inline BruteForceResult brute_force_table(const CrossValuationTable& T, const std::vector<Rational>& shifts,
                                          std::uint64_t budget = oracle_budget())
{
    ValueCube cube(T.size());
    std::vector<std::int64_t> n;
    for (std::size_t i = 0; i < T.size(); ++i) {
        n.push_back(T.n(i));
        cube[i].resize(T.size());
        for (std::int64_t j = 0; j <= T.n(i); ++j)
            for (std::size_t k = 0; k < T.size(); ++k) cube[i][k].push_back(T.at(k, i, j));
    }
    return brute_force_cube(cube, n, shifts, budget);
}

}  // namespace okutsu::oracle
