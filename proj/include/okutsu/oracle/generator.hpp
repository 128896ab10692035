#pragma once

#include "okutsu/tree.hpp"
#include "okutsu/validate.hpp"
#include "okutsu/valuation.hpp"

#include <cstdint>
#include <numeric>
#include <random>
#include <string>
#include <vector>

namespace okutsu::oracle {

struct IntRange {
    std::int64_t lo = 0;
    std::int64_t hi = 0;
};

/// Parameters of the random tree generator. Equal configs give equal trees.
struct GeneratorConfig {
    std::uint64_t seed = 0;
    IntRange num_primes{2, 5};
    IntRange num_components{1, 2};
    IntRange max_depth{0, 3};  ///< range of the Okutsu depth r_p
    std::int64_t max_ef = 4;   ///< bound on e_i * f_i
    std::int64_t max_f0 = 2;
    std::int64_t max_slope_numerator = 7;
    IntRange refinement_chain_length{1, 3};
    IntRange fractional_exponent_range{-3, 3};
    IntRange common_prefix_levels{0, 0};  ///< levels shared by every prime of a component
    std::int64_t max_degree = 24;         ///< bound on n_S
    int max_attempts = 5000;
};

/// The generator could not produce a tree within its attempt budget.
class GenerationFailed : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

class TreeBuilder {
public:
    /// Raised when a draw leads nowhere; the caller starts a new attempt.
    struct Retry {};

    TreeBuilder(const GeneratorConfig& cfg, std::mt19937_64& rng) : cfg_(cfg), rng_(rng) {}

    OMTree build()
    {
        const auto s = uniform(cfg_.num_primes.lo, cfg_.num_primes.hi);
        const auto c = uniform(std::min(cfg_.num_components.lo, s), std::min(cfg_.num_components.hi, s));
        const int width = s >= 10 ? 2 : 1;
        std::vector<PrimeId> ids;
        for (std::int64_t i = 1; i <= s; ++i) {
            std::string num = std::to_string(i);
            while (static_cast<int>(num.size()) < width) num = "0" + num;
            ids.push_back("p" + num);
        }
        // Split the primes into c non-empty components.
        std::vector<std::size_t> cuts(static_cast<std::size_t>(s - 1));
        std::iota(cuts.begin(), cuts.end(), 1);
        std::shuffle(cuts.begin(), cuts.end(), rng_);
        cuts.resize(static_cast<std::size_t>(c - 1));
        std::sort(cuts.begin(), cuts.end());
        cuts.push_back(static_cast<std::size_t>(s));
        std::size_t start = 0;
        for (std::size_t k = 0; k < cuts.size(); ++k) {
            std::vector<std::size_t> members;
            for (std::size_t i = start; i < cuts[k]; ++i) {
                PrimeNode np;
                np.id = ids[i];
                np.component = "c" + std::to_string(k + 1);
                np.f0 = uniform(1, cfg_.max_f0);
                nodes_.push_back(np);
                members.push_back(nodes_.size() - 1);
            }
            const std::int64_t f0 = nodes_[members.front()].f0;
            for (auto m : members) nodes_[m].f0 = f0;
            grow(members, 1);
            start = cuts[k];
        }
        OMTree tree;
        tree.primes = nodes_;
        for (std::size_t a = 0; a < nodes_.size(); ++a)
            for (std::size_t b = a + 1; b < nodes_.size(); ++b) {
                if (nodes_[a].component != nodes_[b].component) continue;
                int ell = 1;
                const int top = std::min(nodes_[a].depth(), nodes_[b].depth()) + 1;
                while (ell < top && *nodes_[a].chain(ell) == *nodes_[b].chain(ell)) ++ell;
                const ChainComparison cc = compare_chains(*nodes_[a].chain(ell), *nodes_[b].chain(ell));
                tree.pairs.push_back({nodes_[a].id, nodes_[b].id, ell, cc.lambda_pq, cc.lambda_qp, cc.match_p,
                                      cc.match_q, cc.minor_index});
            }
        bool uses_x = false;
        for (const auto& n : nodes_) uses_x = uses_x || n.f0 > 1;
        if (uses_x && c > 1)
            for (const auto& n : nodes_) tree.x_valuations[n.id] = 0;
        return tree;
    }

private:
    std::int64_t uniform(std::int64_t lo, std::int64_t hi)
    {
        if (hi < lo) throw Retry{};
        return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng_);
    }

    bool coin(double p) { return std::bernoulli_distribution(p)(rng_); }

    std::string fresh(const char* prefix) { return prefix + std::to_string(++labels_); }

    std::pair<std::int64_t, std::int64_t> draw_ef()
    {
        std::vector<std::pair<std::int64_t, std::int64_t>> options;
        for (std::int64_t e = 1; e <= cfg_.max_ef; ++e)
            for (std::int64_t f = 1; e * f <= cfg_.max_ef; ++f)
                if (e * f > 1) options.emplace_back(e, f);
        if (options.empty()) throw Retry{};
        return options[static_cast<std::size_t>(uniform(0, static_cast<std::int64_t>(options.size()) - 1))];
    }

    std::int64_t draw_h(std::int64_t e)
    {
        for (int t = 0; t < 64; ++t) {
            const std::int64_t h = uniform(1, cfg_.max_slope_numerator);
            if (std::gcd(h, e) == 1) return h;
        }
        throw Retry{};
    }

    std::int64_t small_integer_slope() { return uniform(1, std::max<std::int64_t>(1, cfg_.max_slope_numerator / 2)); }

    bool chain_has_room(std::size_t used) const
    {
        return static_cast<std::int64_t>(used) + 1 < cfg_.refinement_chain_length.hi;
    }

    void push_level(const std::vector<std::size_t>& members, const LevelData& L, const RefinementChain& chain)
    {
        for (auto m : members) {
            nodes_[m].levels.push_back(L);
            nodes_[m].refinements.emplace_back(chain);
        }
    }

    /// Chooses level k for primes that share every level below k.
    void grow(const std::vector<std::size_t>& members, int k)
    {
        const bool must_end = k > cfg_.max_depth.hi;
        const bool shared = members.size() > 1 && k <= cfg_.common_prefix_levels.hi &&
                            (k <= cfg_.common_prefix_levels.lo || coin(0.5));
        if (shared && !must_end) {
            const auto [e, f] = draw_ef();
            const std::int64_t h = draw_h(e);
            push_level(members, {e, f, h}, {{fresh("a"), make_rational(h, e), fresh("s")}});
            grow(members, k + 1);
            return;
        }
        node(members, k, {}, 0, must_end);
    }

    /// Expands one node of the non-optimised tree inside level k.
    void node(const std::vector<std::size_t>& members, int k, RefinementChain prefix, std::int64_t int_sum,
              bool must_end)
    {
        const std::string phi = fresh("a");
        std::vector<std::vector<std::size_t>> groups;
        if (members.size() == 1) {
            groups.push_back(members);
        } else {
            std::vector<std::size_t> shuffled = members;
            std::shuffle(shuffled.begin(), shuffled.end(), rng_);
            const auto lo = must_end ? static_cast<std::int64_t>(members.size()) : 1;
            const auto g = uniform(lo, std::max(lo, std::min<std::int64_t>(static_cast<std::int64_t>(members.size()), 3)));
            groups.resize(static_cast<std::size_t>(g));
            for (std::size_t i = 0; i < shuffled.size(); ++i)
                groups[i < groups.size() ? i : static_cast<std::size_t>(uniform(0, g - 1))].push_back(shuffled[i]);
            for (auto& grp : groups) std::sort(grp.begin(), grp.end());
        }
        for (const auto& grp : groups) {
            const bool room = chain_has_room(prefix.size());
            // A final edge leaving a shared node would make phi_p a common phi-polynomial.
            const bool alone = members.size() == 1;
            const bool refine = room && coin(must_end && !alone ? 1.0 : 0.3);
            if (!room && must_end && !alone) throw Retry{};
            RefinementChain chain = prefix;
            if (refine) {
                const std::int64_t s = small_integer_slope();
                chain.push_back({phi, Rational(s), fresh("s")});
                node(grp, k, chain, int_sum + s, must_end);
                continue;
            }
            const bool final_edge = alone && (must_end || coin(0.45));
            if (final_edge) {
                const std::int64_t s = small_integer_slope();
                chain.push_back({phi, Rational(s), fresh("s")});
                push_level(grp, {1, 1, int_sum + s}, chain);
                continue;
            }
            const auto [e, f] = draw_ef();
            const std::int64_t h = draw_h(e);
            chain.push_back({phi, make_rational(h, e), fresh("s")});
            push_level(grp, {e, f, h + e * int_sum}, chain);
            grow(grp, k + 1);
        }
    }

    const GeneratorConfig& cfg_;
    std::mt19937_64& rng_;
    std::vector<PrimeNode> nodes_;
    std::uint64_t labels_ = 0;
};

}  // namespace detail

inline std::int64_t total_degree(const OMTree& tree)
{
    std::int64_t n = 0;
    for (const auto& np : tree.primes) n += derived_invariants(np).n;
    return n;
}

/// A random coherent tree: the non-optimised tree is drawn first and collapsed.
inline OMTree generate_tree(const GeneratorConfig& cfg)
{
    std::mt19937_64 rng(cfg.seed);
    for (int attempt = 0; attempt < cfg.max_attempts; ++attempt) {
        OMTree tree;
        try {
            detail::TreeBuilder builder(cfg, rng);
            tree = builder.build();
        } catch (const detail::TreeBuilder::Retry&) {
            continue;
        }
        if (total_degree(tree) > cfg.max_degree) continue;
        bool depth_ok = true;
        for (const auto& np : tree.primes) depth_ok = depth_ok && np.depth() >= cfg.max_depth.lo;
        if (!depth_ok) continue;
        const auto violations = validate(tree);
        if (!violations.empty())
            throw std::logic_error("generator produced an invalid tree: " + violations.front().invariant + ": " +
                                   violations.front().message);
        return tree;
    }
    throw GenerationFailed("no tree within " + std::to_string(cfg.max_attempts) + " attempts for seed " +
                           std::to_string(cfg.seed));
}

/// A random ideal with exponents drawn from `range` for every prime.
inline FractionalIdeal random_ideal(const OMTree& tree, std::uint64_t seed, IntRange range)
{
    std::mt19937_64 rng(seed);
    FractionalIdeal I;
    for (const auto& np : tree.primes)
        I.exponents[np.id] = std::uniform_int_distribution<std::int64_t>(range.lo, range.hi)(rng);
    return I;
}

/// A random element of Phi(S): a product of phi-polynomials of primes in S, any level, degree <= n_S.
inline FactorProduct random_phi_product(const OMTree& tree, const std::vector<PrimeId>& S, std::uint64_t seed,
                                        int max_factors = 8)
{
    if (S.empty()) throw UsageError("random element of an empty set");
    std::mt19937_64 rng(seed);
    std::int64_t budget = 0;
    for (const auto& p : S) budget += derived_invariants(tree, p).n;
    const auto target = std::uniform_int_distribution<std::int64_t>(0, budget)(rng);
    FactorProduct g;
    std::int64_t deg = 0;
    for (int t = 0; t < max_factors * 4 && deg < target; ++t) {
        const PrimeId& p = S[std::uniform_int_distribution<std::size_t>(0, S.size() - 1)(rng)];
        const int r = tree.prime(p).depth();
        const int level = std::uniform_int_distribution<int>(0, r + 1)(rng);
        const std::int64_t m = derived_invariants(tree, p).m[static_cast<std::size_t>(level)];
        if (deg + m > target) continue;
        const std::int64_t room = (target - deg) / m;
        const auto e = std::uniform_int_distribution<std::int64_t>(1, std::min<std::int64_t>(room, 3))(rng);
        g.multiply(p, level, e);
        deg += e * m;
    }
    return g;
}

}  // namespace okutsu::oracle
