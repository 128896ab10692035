#pragma once

#include "okutsu/canonicalize.hpp"
#include "okutsu/maxmin.hpp"
#include "okutsu/nonoptimised.hpp"
#include "okutsu/oracle/brute_force.hpp"
#include "okutsu/oracle/generator.hpp"

#include <optional>
#include <random>
#include <string>
#include <vector>

namespace okutsu::oracle {

struct MaximalityReport {
    bool passed = true;
    std::vector<ExtValue> greedy;
    std::vector<ExtValue> oracle;
    std::optional<std::int64_t> failing_degree;
    MultiIndex greedy_index;  ///< at the failing degree
    MultiIndex witness;       ///< oracle maximiser at the failing degree
};

namespace detail {

inline MaximalityReport compare_with_oracle(const MaxMinOutput& run, const BruteForceResult& brute)
{
    MaximalityReport rep;
    rep.greedy = run.values;
    rep.oracle = brute.best;
    for (std::size_t d = 0; d < run.values.size(); ++d) {
        if (run.values[d] != brute.best[d]) {
            rep.passed = false;
            rep.failing_degree = static_cast<std::int64_t>(d);
            rep.greedy_index = run.indices[d];
            rep.witness = brute.witness[d];
            break;
        }
    }
    return rep;
}

}  // namespace detail

/// Compares MaxMin with exhaustive search degree by degree.
inline MaximalityReport verify_maximality(const OMTree& tree, const std::vector<PrimeId>& S, const FractionalIdeal& I,
                                          TieBreak tie = TieBreak::least, std::uint64_t budget = oracle_budget())
{
    const BruteForceResult brute = brute_force_max(tree, S, I, budget);
    return detail::compare_with_oracle(maxmin(tree, S, I, tie), brute);
}

/// As above, with MaxMin driven by a caller-supplied (possibly corrupted) table.
inline MaximalityReport verify_maximality_with_table(const OMTree& tree, const std::vector<PrimeId>& S,
                                                     const FractionalIdeal& I, const CrossValuationTable& table,
                                                     std::uint64_t budget = oracle_budget())
{
    const BruteForceResult brute = brute_force_max(tree, S, I, budget);
    std::vector<Rational> shifts;
    for (const auto& p : S) shifts.push_back(I.shift(tree, p));
    return detail::compare_with_oracle(maxmin(table, shifts), brute);
}

struct BlocksReport {
    bool passed = true;
    std::int64_t m_ell = 1;
    bool coordinates_divisible = true;
    bool runs_repeat = true;
    bool outputs_agree = true;
    std::string failure;
};

/// Checks the block structure of MaxMin for a set sharing m_ell.
inline BlocksReport verify_blocks(const OMTree& tree, const std::vector<PrimeId>& S, const FractionalIdeal& I)
{
    BlocksReport rep;
    rep.m_ell = common_block_size(tree, S);
    const std::int64_t m = rep.m_ell;
    const MaxMinOutput full = maxmin(tree, S, I);
    for (std::size_t k = 0; k < full.indices.size(); k += static_cast<std::size_t>(m))
        for (auto c : full.indices[k].coords)
            if (c % m != 0) {
                rep.coordinates_divisible = false;
                rep.failure = "output " + std::to_string(k) + " has a coordinate not divisible by m_ell";
            }
    for (std::size_t start = 0; start < full.argmin_trace.size(); start += static_cast<std::size_t>(m))
        for (std::size_t t = start; t < start + static_cast<std::size_t>(m) && t < full.argmin_trace.size(); ++t)
            if (full.argmin_trace[t] != full.argmin_trace[start]) {
                rep.runs_repeat = false;
                rep.failure = "argmin changes inside the block starting at step " + std::to_string(start);
            }
    const MaxMinOutput blocks = maxmin_blocks(tree, S, I, m);
    for (std::size_t k = 0; k < blocks.indices.size(); ++k) {
        const std::size_t j = k * static_cast<std::size_t>(m);
        if (j >= full.indices.size() || !(blocks.indices[k] == full.indices[j]) || blocks.values[k] != full.values[j]) {
            rep.outputs_agree = false;
            rep.failure = "block output " + std::to_string(k) + " differs from MaxMin output " + std::to_string(j);
            break;
        }
    }
    rep.passed = rep.coordinates_divisible && rep.runs_repeat && rep.outputs_agree;
    return rep;
}

struct PrecomputationReport {
    bool passed = true;
    bool criterion_holds = true;
    bool is_node_set = false;
    bool identification_checked = false;
    bool identification_holds = true;
    std::optional<std::size_t> failing_step;
};

/// Evaluates the precomputation criterion for an interval of S and, when it holds,
/// checks that the partitioned run reproduces MaxMin.
inline PrecomputationReport verify_precomputation(const OMTree& tree, const std::vector<PrimeId>& S,
                                                  const FractionalIdeal& I, const std::vector<PrimeId>& interval)
{
    if (interval.empty()) throw UsageError("empty interval");
    const auto first = std::find(S.begin(), S.end(), interval.front());
    if (first == S.end() || static_cast<std::size_t>(S.end() - first) < interval.size() ||
        !std::equal(interval.begin(), interval.end(), first))
        throw UsageError("not an interval of S");
    PrecomputationReport rep;
    for (const auto& ns : node_sets(tree, S)) {
        std::vector<PrimeId> sorted = interval;
        std::sort(sorted.begin(), sorted.end());
        if (ns.members == sorted) rep.is_node_set = true;
    }
    const MaxMinOutput run = maxmin(tree, S, I);
    for (std::size_t k = 0; k < run.numerators.size(); ++k) {
        const FactorProduct& g = run.numerators[k];
        if (w_S(tree, interval, g, I) != run.values[k]) continue;
        FactorProduct G;
        for (const auto& q : S)
            if (std::find(interval.begin(), interval.end(), q) == interval.end()) G = G * g.part(q);
        const ExtValue ref = w_product(tree, interval.front(), G);
        for (const auto& p : interval)
            if (w_product(tree, p, G) != ref) {
                rep.criterion_holds = false;
                if (!rep.failing_step) rep.failing_step = k;
            }
    }
    if (rep.criterion_holds) {
        std::vector<std::vector<PrimeId>> partition;
        for (auto it = S.begin(); it != first; ++it) partition.push_back({*it});
        partition.push_back(interval);
        for (auto it = first + static_cast<std::ptrdiff_t>(interval.size()); it != S.end(); ++it) partition.push_back({*it});
        const PartitionedOutput part = maxmin_partitioned(tree, S, partition, I);
        rep.identification_checked = true;
        rep.identification_holds = part.indices == run.indices && part.values == run.values;
    }
    rep.passed = rep.criterion_holds && rep.identification_holds;
    return rep;
}

enum class SplitCase { A, B, C, D };

inline char case_letter(SplitCase c) { return "ABCD"[static_cast<int>(c)]; }

struct SplitClassification {
    SplitCase split_case = SplitCase::A;
    std::vector<PrimeId> U;
    std::vector<PrimeId> D;
    std::vector<PrimeId> ordering;  ///< U followed by D, each in the order of S
    int ell = 0;
    std::int64_t m_ell = 1;
    Rational c;
    std::map<PrimeId, Rational> delta;  ///< Case D only
};

/// Splits S into U and D following the shape of its non-optimised tree.
inline SplitClassification classify_split(const OMTree& tree, const std::vector<PrimeId>& S)
{
    if (S.size() < 2) throw UsageError("a split needs at least two primes");
    SplitClassification out;
    auto finish = [&](std::vector<PrimeId> D) {
        for (const auto& p : S) (std::find(D.begin(), D.end(), p) == D.end() ? out.U : out.D).push_back(p);
        out.ordering = out.U;
        out.ordering.insert(out.ordering.end(), out.D.begin(), out.D.end());
        return out;
    };
    const int ell = index_of_coincidence(tree, S);
    if (ell == 0) {
        out.split_case = SplitCase::A;
        out.m_ell = 1;
        out.c = 0;
        std::vector<PrimeId> D;
        for (const auto& p : S)
            if (same_component(tree, p, S.back())) D.push_back(p);
        return finish(D);
    }
    const NonOptimisedTree nt = expand_nonoptimised(tree);
    const int B = nt.common_ancestor(S);
    if (B < 0) throw std::logic_error("connected set without a common node");
    Rational prefix = 0;
    for (int cur = B; !nt.nodes[static_cast<std::size_t>(cur)].closes_level;
         cur = nt.nodes[static_cast<std::size_t>(cur)].parent)
        prefix += nt.nodes[static_cast<std::size_t>(cur)].edge->slope;

    struct Branch {
        std::vector<PrimeId> members;  // in S order
        Rational slope;
        bool refined = false;
        std::size_t last = 0;  // largest position in S
    };
    std::vector<Branch> branches;
    for (int c : nt.nodes[static_cast<std::size_t>(B)].children) {
        const NonOptNode& child = nt.nodes[static_cast<std::size_t>(c)];
        Branch br;
        for (std::size_t pos = 0; pos < S.size(); ++pos)
            if (std::find(child.primes.begin(), child.primes.end(), S[pos]) != child.primes.end()) {
                br.members.push_back(S[pos]);
                br.last = pos;
            }
        if (br.members.empty()) continue;
        br.slope = child.edge->slope;
        br.refined = !child.closes_level.has_value();
        if (child.level != ell) throw std::logic_error("branching level disagrees with i(S)");
        branches.push_back(std::move(br));
    }
    Rational edge_min = branches.front().slope;
    for (const auto& br : branches) edge_min = std::min(edge_min, br.slope);
    const DerivedInvariants d = derived_invariants(tree, S.front());
    const auto L = static_cast<std::size_t>(ell);
    out.ell = ell;
    out.m_ell = d.m[L];
    const Rational lambda_min = prefix + edge_min;
    out.c = (d.V[L] + lambda_min) / Rational(d.E[L]);

    const Branch* refined_min = nullptr;
    const Branch* last_min = nullptr;
    bool all_min = true;
    for (const auto& br : branches) {
        if (br.slope != edge_min) {
            all_min = false;
            continue;
        }
        if (br.refined && (!refined_min || br.last > refined_min->last)) refined_min = &br;
        if (!last_min || br.last > last_min->last) last_min = &br;
    }
    if (refined_min) {
        out.split_case = SplitCase::B;
        return finish(refined_min->members);
    }
    if (all_min) {
        out.split_case = SplitCase::C;
        return finish(last_min->members);
    }
    out.split_case = SplitCase::D;
    std::vector<PrimeId> D;
    for (const auto& br : branches) {
        if (br.slope == edge_min)
            D.insert(D.end(), br.members.begin(), br.members.end());
        else
            for (const auto& p : br.members) out.delta[p] = (br.slope - edge_min) / Rational(d.E[L]);
    }
    return finish(D);
}

struct NuReport {
    bool passed = true;
    SplitClassification split;
    std::vector<ExtValue> nu;
    std::vector<ExtValue> nu_prime;
    std::vector<std::pair<std::int64_t, std::int64_t>> pairs;
    bool monotone = true;
    bool identified = true;
    bool flow_equations = true;
    bool interleaved = true;
    bool case_d_properties = true;
    std::string failure;
};

/// Checks the interleaving of the nu sequences of U and D along the block run of S.
inline NuReport verify_nu_sequences(const OMTree& tree, const std::vector<PrimeId>& S, const FractionalIdeal& I)
{
    NuReport rep;
    rep.split = classify_split(tree, S);
    const SplitClassification& sc = rep.split;
    const std::int64_t m = sc.m_ell;
    const MaxMinOutput runU = maxmin_blocks(tree, sc.U, I, m);
    const MaxMinOutput runD = maxmin_blocks(tree, sc.D, I, m);
    const MaxMinOutput runS = maxmin_blocks(tree, sc.ordering, I, m);
    auto fail = [&](bool& flag, const std::string& why) {
        flag = false;
        if (rep.failure.empty()) rep.failure = why;
    };
    for (std::size_t i = 0; i < runU.values.size(); ++i)
        rep.nu.push_back(runU.values[i] - Rational(static_cast<std::int64_t>(i)) * sc.c);
    for (std::size_t j = 0; j < runD.values.size(); ++j)
        rep.nu_prime.push_back(runD.values[j] - Rational(static_cast<std::int64_t>(j)) * sc.c);
    for (std::size_t i = 1; i < rep.nu.size(); ++i)
        if (rep.nu[i - 1] > rep.nu[i]) fail(rep.monotone, "nu decreases at " + std::to_string(i));
    for (std::size_t j = 1; j < rep.nu_prime.size(); ++j)
        if (rep.nu_prime[j - 1] > rep.nu_prime[j]) fail(rep.monotone, "nu' decreases at " + std::to_string(j));

    const bool case_d = sc.split_case == SplitCase::D;
    // ord_{phi_ell} of the D-numerators; phi_{ell,q} = phi_ell on unrefined branches.
    auto bracket = [&](std::size_t j) {
        std::int64_t e = 0;
        for (const auto& q : sc.D) e += runD.numerators[j].exponent(q, sc.ell);
        return e;
    };
    if (case_d) {
        for (std::size_t i = 1; i < rep.nu.size(); ++i)
            if (!(rep.nu[i - 1] < rep.nu[i])) fail(rep.case_d_properties, "nu not strictly increasing");
        for (std::size_t j = 1; j < rep.nu_prime.size(); ++j)
            if (bracket(j) != 0 && rep.nu_prime[j - 1] != rep.nu_prime[j])
                fail(rep.case_d_properties, "nu' changes although [j] > 0");
    }

    const std::size_t nU = sc.U.size();
    auto at = [](const std::vector<ExtValue>& v, std::int64_t i) {
        return i < 0 ? std::optional<ExtValue>() : std::optional<ExtValue>(v[static_cast<std::size_t>(i)]);
    };
    auto le = [](const std::optional<ExtValue>& a, const ExtValue& b) { return !a || *a <= b; };
    for (std::size_t k = 0; k < runS.indices.size(); ++k) {
        const auto& coords = runS.indices[k].coords;
        MultiIndex ui{std::vector<std::int64_t>(coords.begin(), coords.begin() + static_cast<std::ptrdiff_t>(nU))};
        MultiIndex di{std::vector<std::int64_t>(coords.begin() + static_cast<std::ptrdiff_t>(nU), coords.end())};
        const std::int64_t i = ui.degree() / m;
        const std::int64_t j = di.degree() / m;
        rep.pairs.emplace_back(i, j);
        if (!(runU.indices[static_cast<std::size_t>(i)] == ui) || !(runD.indices[static_cast<std::size_t>(j)] == di)) {
            fail(rep.identified, "output " + std::to_string(k) + " is not a product of precomputed outputs");
            continue;
        }
        const ExtValue nu_i = rep.nu[static_cast<std::size_t>(i)];
        const ExtValue nu_j = rep.nu_prime[static_cast<std::size_t>(j)];
        const bool first = le(at(rep.nu_prime, j - 1), nu_i) && nu_i <= nu_j;
        const bool second = le(at(rep.nu, i - 1), nu_j) && nu_j < nu_i;
        if (!first && !second) fail(rep.interleaved, "pair (" + std::to_string(i) + "," + std::to_string(j) + ")");

        const FactorProduct& g = runS.numerators[k];
        const Rational jc = Rational(j) * sc.c;
        ExtValue expectU = ExtValue::infinity();
        const std::int64_t br = case_d ? bracket(static_cast<std::size_t>(j)) : 0;
        for (const auto& p : sc.U) {
            ExtValue v = w_ideal(tree, p, runU.numerators[static_cast<std::size_t>(i)], I);
            if (br > 0) v += ExtValue(Rational(br) * sc.delta.at(p));
            expectU = std::min(expectU, v);
        }
        if (expectU.is_finite()) expectU = ExtValue(expectU.value() + jc);
        const ExtValue expectD = nu_j.is_finite() ? ExtValue(nu_j.value() + Rational(i + j) * sc.c) : nu_j;
        if (w_S(tree, sc.U, g, I) != expectU || w_S(tree, sc.D, g, I) != expectD)
            fail(rep.flow_equations, "valuation of output " + std::to_string(k) + " is not determined by nu");
    }
    rep.passed = rep.monotone && rep.identified && rep.interleaved && rep.flow_equations && rep.case_d_properties;
    return rep;
}

struct UniversalWitness {
    CrossValuationTable table;
    std::int64_t degree = 0;
    ExtValue greedy;
    ExtValue best;
};

/// Searches random tables that are not valuation tables for a degree where MaxMin is not maximal.
inline std::optional<UniversalWitness> counterexample_search_universal(std::uint64_t seed, int trials)
{
    std::mt19937_64 rng(seed);
    auto uni = [&](std::int64_t lo, std::int64_t hi) { return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng); };
    for (int t = 0; t < trials; ++t) {
        const std::size_t s = static_cast<std::size_t>(uni(2, 3));
        std::vector<PrimeId> ids;
        std::vector<std::int64_t> n;
        for (std::size_t i = 0; i < s; ++i) {
            ids.push_back("u" + std::to_string(i + 1));
            n.push_back(uni(1, 4));
        }
        std::vector<std::vector<std::vector<ExtValue>>> values(s, std::vector<std::vector<ExtValue>>(s));
        for (std::size_t k = 0; k < s; ++k)
            for (std::size_t i = 0; i < s; ++i)
                for (std::int64_t j = 0; j <= n[i]; ++j) {
                    if (j == 0) values[k][i].push_back(ExtValue(Rational(0)));
                    else if (k == i && j == n[i]) values[k][i].push_back(ExtValue::infinity());
                    else values[k][i].push_back(ExtValue(make_rational(uni(0, 12), 2)));
                }
        CrossValuationTable T(ids, n, values);
        const std::vector<Rational> zero(s, Rational(0));
        const MaxMinOutput run = maxmin(T, zero);
        const BruteForceResult brute = brute_force_table(T, zero);
        for (std::size_t d = 0; d < run.values.size(); ++d)
            if (run.values[d] != brute.best[d])
                return UniversalWitness{T, static_cast<std::int64_t>(d), run.values[d], brute.best[d]};
    }
    return std::nullopt;
}

struct CanonicalReport {
    bool passed = true;
    FactorProduct input;
    FactorProduct output;
    bool degree_preserved = true;
    bool in_okutsu_set = true;
    std::vector<PrimeId> decreased;  ///< primes p with w_p(output) < w_p(input)
};

inline CanonicalReport verify_canonical(const OMTree& tree, const std::vector<PrimeId>& S, const FactorProduct& g)
{
    CanonicalReport rep;
    rep.input = g;
    rep.output = canonicalize(tree, S, g);
    rep.degree_preserved = degree(tree, rep.output) == degree(tree, g);
    rep.in_okutsu_set = in_okutsu_set(tree, S, rep.output);
    for (const auto& p : S)
        if (w_product(tree, p, rep.output) < w_product(tree, p, g)) rep.decreased.push_back(p);
    rep.passed = rep.degree_preserved && rep.in_okutsu_set && rep.decreased.empty();
    return rep;
}

struct ShiftReport {
    bool passed = true;
    std::string failure;
};

/// Shifting every a_p by c * e(p/m) must keep indices and trace and lower finite values by c.
inline ShiftReport verify_shift(const OMTree& tree, const std::vector<PrimeId>& S, const FractionalIdeal& I,
                                std::int64_t c)
{
    ShiftReport rep;
    FractionalIdeal J = I;
    for (const auto& p : S) J.exponents[p] = I.exponent(p) + c * derived_invariants(tree, p).ramification;
    const MaxMinOutput a = maxmin(tree, S, I);
    const MaxMinOutput b = maxmin(tree, S, J);
    if (a.indices != b.indices || a.argmin_trace != b.argmin_trace) {
        rep.passed = false;
        rep.failure = "indices or argmin trace changed";
        return rep;
    }
    for (std::size_t k = 0; k < a.values.size(); ++k) {
        const bool ok = a.values[k].is_infinite() ? b.values[k].is_infinite()
                                                  : b.values[k] == ExtValue(a.values[k].value() - Rational(c));
        if (!ok) {
            rep.passed = false;
            rep.failure = "value " + std::to_string(k) + " not shifted by " + std::to_string(-c);
            return rep;
        }
    }
    return rep;
}

}  // namespace okutsu::oracle
