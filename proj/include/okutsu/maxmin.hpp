#pragma once

#include "okutsu/ordering.hpp"
#include "okutsu/valuation.hpp"

#include <algorithm>
#include <map>
#include <string>
#include <vector>

namespace okutsu {

/// Exponents (i_p) of the Okutsu numerators g_{i_p,p}, one per prime of an ordered set.
struct MultiIndex {
    std::vector<std::int64_t> coords;

    std::int64_t degree() const
    {
        std::int64_t d = 0;
        for (auto c : coords) d += c;
        return d;
    }

    friend bool operator==(const MultiIndex&, const MultiIndex&) = default;
};

enum class TieBreak { least, greatest };

struct MaxMinOutput {
    std::vector<PrimeId> primes;
    std::vector<MultiIndex> indices;
    std::vector<FactorProduct> numerators;       ///< empty when run on a bare table
    std::vector<ExtValue> values;                ///< min over observers of w_{p,I}
    std::vector<std::vector<ExtValue>> vectors;  ///< w_{p,I} per observer
    std::vector<std::size_t> argmin_trace;       ///< position incremented after each output but the last
};

namespace detail {

inline std::vector<ExtValue> value_vector(const CrossValuationTable& T, const std::vector<Rational>& shifts,
                                          const MultiIndex& idx)
{
    std::vector<ExtValue> vec;
    for (std::size_t k = 0; k < T.size(); ++k) {
        ExtValue v(Rational(0));
        for (std::size_t i = 0; i < T.size(); ++i) v += T.at(k, i, idx.coords[i]);
        vec.push_back(v - shifts[k]);
    }
    return vec;
}

inline std::size_t pick(const std::vector<ExtValue>& vec, const ExtValue& target, TieBreak tie)
{
    std::size_t chosen = vec.size();
    for (std::size_t k = 0; k < vec.size(); ++k)
        if (vec[k] == target && (chosen == vec.size() || tie == TieBreak::greatest)) chosen = k;
    return chosen;
}

inline std::vector<Rational> shifts_for(const OMTree& tree, const std::vector<PrimeId>& S, const FractionalIdeal& I)
{
    std::vector<Rational> out;
    for (const auto& p : S) out.push_back(I.shift(tree, p));
    return out;
}

inline void require_ordered(const OMTree& tree, const std::vector<PrimeId>& S)
{
    if (S.empty()) throw UsageError("MaxMin needs a non-empty set of primes");
    for (std::size_t a = 0; a < S.size(); ++a) {
        (void)tree.prime(S[a]);
        for (std::size_t b = a + 1; b < S.size(); ++b)
            if (S[a] == S[b]) throw UsageError("prime listed twice: " + S[a]);
    }
    for (const auto& ns : node_sets(tree, S))
        if (!is_interval(S, ns.members))
            throw UsageError("ordering of S violates the interval property");
}

inline void attach_numerators(const OMTree& tree, MaxMinOutput& out)
{
    for (const auto& idx : out.indices) {
        FactorProduct g;
        for (std::size_t i = 0; i < out.primes.size(); ++i) g = g * okutsu_numerator(tree, out.primes[i], idx.coords[i]);
        out.numerators.push_back(std::move(g));
    }
}

}  // namespace detail

/// Greedy run on a bare table, advancing `step` degrees per output.
inline MaxMinOutput maxmin(const CrossValuationTable& T, const std::vector<Rational>& shifts, std::int64_t step = 1,
                           TieBreak tie = TieBreak::least)
{
    if (T.size() == 0) throw UsageError("MaxMin needs a non-empty table");
    if (shifts.size() != T.size()) throw UsageError("one shift per prime is required");
    if (step < 1) throw UsageError("block size must be positive");
    for (std::size_t i = 0; i < T.size(); ++i)
        if (T.n(i) % step != 0) throw UsageError("block size must divide every n_p");
    MaxMinOutput out;
    out.primes = T.primes();
    MultiIndex idx{std::vector<std::int64_t>(T.size(), 0)};
    const std::int64_t steps = T.total_degree() / step;
    for (std::int64_t k = 0;; ++k) {
        std::vector<ExtValue> vec = detail::value_vector(T, shifts, idx);
        const ExtValue value = *std::min_element(vec.begin(), vec.end());
        out.indices.push_back(idx);
        out.values.push_back(value);
        out.vectors.push_back(vec);
        if (k == steps) break;
        const std::size_t j = detail::pick(vec, value, tie);
        if (idx.coords[j] + step > T.n(j))
            throw std::logic_error("MaxMin stepped past phi_p; the table is not a valuation table");
        out.argmin_trace.push_back(j);
        idx.coords[j] += step;
    }
    return out;
}

/// Algorithm MaxMin for the ordered set S and ideal I.
inline MaxMinOutput maxmin(const OMTree& tree, const std::vector<PrimeId>& S, const FractionalIdeal& I = {},
                           TieBreak tie = TieBreak::least)
{
    detail::require_ordered(tree, S);
    MaxMinOutput out = maxmin(build_table(tree, S), detail::shifts_for(tree, S, I), 1, tie);
    detail::attach_numerators(tree, out);
    return out;
}

/// The block variant: each step multiplies by the numerator of degree m_ell of one prime.
inline MaxMinOutput maxmin_blocks(const OMTree& tree, const std::vector<PrimeId>& S, const FractionalIdeal& I,
                                  std::int64_t m_ell)
{
    detail::require_ordered(tree, S);
    if (m_ell < 1) throw UsageError("block size must be positive");
    for (const auto& p : S)
        if (derived_invariants(tree, p).n % m_ell != 0)
            throw UsageError("m_ell = " + std::to_string(m_ell) + " does not divide n_" + p);
    MaxMinOutput out = maxmin(build_table(tree, S), detail::shifts_for(tree, S, I), m_ell);
    detail::attach_numerators(tree, out);
    return out;
}

/// m_ell for S: 1 when S spans several roots, m_{i(S)} when connected, n_p for a single prime.
inline std::int64_t common_block_size(const OMTree& tree, const std::vector<PrimeId>& S)
{
    if (S.empty()) throw UsageError("block size of an empty set");
    if (S.size() == 1) return derived_invariants(tree, S.front()).n;
    const int ell = index_of_coincidence(tree, S);
    if (ell == 0) return 1;
    return derived_invariants(tree, S.front()).m[static_cast<std::size_t>(ell)];
}

struct PartitionedOutput {
    std::vector<std::vector<PrimeId>> blocks;
    std::vector<MaxMinOutput> block_runs;
    std::vector<MultiIndex> block_indices;  ///< one coordinate per block
    std::vector<MultiIndex> indices;        ///< the same outputs as multi-indices over S
    std::vector<ExtValue> values;
    std::vector<std::size_t> argmin_trace;  ///< block incremented after each output but the last
};

/// MaxMin over an order-preserving interval partition, each block pre-computed.
inline PartitionedOutput maxmin_partitioned(const OMTree& tree, const std::vector<PrimeId>& S,
                                            const std::vector<std::vector<PrimeId>>& partition,
                                            const FractionalIdeal& I = {})
{
    detail::require_ordered(tree, S);
    std::vector<PrimeId> flat;
    std::vector<std::size_t> block_of;
    for (std::size_t b = 0; b < partition.size(); ++b) {
        if (partition[b].empty()) throw UsageError("partition contains an empty block");
        for (const auto& p : partition[b]) {
            flat.push_back(p);
            block_of.push_back(b);
        }
    }
    if (flat != S) throw UsageError("partition is not an order-preserving interval partition of S");

    const CrossValuationTable T = build_table(tree, S);
    const std::vector<Rational> shifts = detail::shifts_for(tree, S, I);
    PartitionedOutput out;
    out.blocks = partition;
    std::vector<std::size_t> offset;
    for (std::size_t b = 0, pos = 0; b < partition.size(); pos += partition[b].size(), ++b) {
        offset.push_back(pos);
        out.block_runs.push_back(maxmin(tree, partition[b], I));
    }

    // Values at every observer of S for each block output.
    auto block_value = [&](std::size_t k, std::size_t b, std::int64_t d) {
        const MultiIndex& sub = out.block_runs[b].indices[static_cast<std::size_t>(d)];
        ExtValue v(Rational(0));
        for (std::size_t i = 0; i < partition[b].size(); ++i) v += T.at(k, offset[b] + i, sub.coords[i]);
        return v;
    };

    MultiIndex bidx{std::vector<std::int64_t>(partition.size(), 0)};
    const std::int64_t total = T.total_degree();
    for (std::int64_t step = 0;; ++step) {
        std::vector<ExtValue> vec;
        for (std::size_t k = 0; k < S.size(); ++k) {
            ExtValue v(Rational(0));
            for (std::size_t b = 0; b < partition.size(); ++b) v += block_value(k, b, bidx.coords[b]);
            vec.push_back(v - shifts[k]);
        }
        const ExtValue value = *std::min_element(vec.begin(), vec.end());
        MultiIndex full;
        for (std::size_t b = 0; b < partition.size(); ++b) {
            const MultiIndex& sub = out.block_runs[b].indices[static_cast<std::size_t>(bidx.coords[b])];
            full.coords.insert(full.coords.end(), sub.coords.begin(), sub.coords.end());
        }
        out.block_indices.push_back(bidx);
        out.indices.push_back(full);
        out.values.push_back(value);
        if (step == total) break;
        const std::size_t j = block_of[detail::pick(vec, value, TieBreak::least)];
        out.argmin_trace.push_back(j);
        ++bidx.coords[j];
    }
    return out;
}

struct BasisElement {
    FactorProduct numerator;
    std::int64_t degree = 0;
    ExtValue nu;       ///< w_{S,I} of the numerator
    Integer exponent;  ///< floor(nu); the element is numerator / pi^exponent
};

/// The reduced basis: all outputs but the last, each divided by pi^floor(nu).
inline std::vector<BasisElement> assemble_basis(const MaxMinOutput& run)
{
    if (run.numerators.size() != run.indices.size()) throw UsageError("MaxMin output lacks numerators");
    if (run.indices.empty()) throw UsageError("empty MaxMin output");
    std::vector<BasisElement> out;
    for (std::size_t k = 0; k + 1 < run.indices.size(); ++k) {
        if (run.values[k].is_infinite()) throw UsageError("infinite value before the final output");
        out.push_back({run.numerators[k], run.indices[k].degree(), run.values[k], floor_of(run.values[k].value())});
    }
    return out;
}

struct Threshold {
    Rational tau;
    std::optional<Rational> row_bound;  ///< largest requirement coming from output rows
    Rational frame_bound;               ///< tau must exceed this value
    std::int64_t h = 1;                 ///< tau = (V_{r+1} + h) / (e_1 ... e_r)
};

/// Least admissible finite stand-in for w_p(phi_p), per prime of the run.
/// Values are taken on the grid (V_{r+1} + h) / (e_1 ... e_r), h >= 1, of possible valuations.
inline std::map<PrimeId, Threshold> sfl_thresholds(const OMTree& tree, const MaxMinOutput& run,
                                                   const FractionalIdeal& I = {})
{
    const std::vector<PrimeId>& S = run.primes;
    const CrossValuationTable T = build_table(tree, S);
    std::map<PrimeId, Threshold> out;
    for (std::size_t pi = 0; pi < S.size(); ++pi) {
        const PrimeId& p = S[pi];
        const PrimeNode& np = tree.prime(p);
        const DerivedInvariants d = derived_invariants(np);
        const auto top = static_cast<std::size_t>(np.depth() + 1);
        const Rational E(d.E[top]);
        Threshold th;
        th.frame_bound = d.V[top] / E;
        const Rational shift = I.shift(tree, p);
        for (std::size_t k = 0; k < run.indices.size(); ++k) {
            const MultiIndex& idx = run.indices[k];
            if (idx.coords[pi] != d.n || run.values[k].is_infinite()) continue;
            ExtValue rest(Rational(0));
            for (std::size_t i = 0; i < S.size(); ++i)
                if (i != pi) rest += T.at(pi, i, idx.coords[i]);
            if (rest.is_infinite()) continue;
            const Rational need = run.values[k].value() + shift - rest.value();
            if (!th.row_bound || need > *th.row_bound) th.row_bound = need;
        }
        std::int64_t h = 1;
        if (th.row_bound) {
            const Integer c = -floor_of(-(*th.row_bound * E - d.V[top]));
            if (c > h) h = static_cast<std::int64_t>(c);
        }
        th.h = h;
        th.tau = (d.V[top] + Rational(h)) / E;
        out.emplace(p, th);
    }
    return out;
}

}  // namespace okutsu
