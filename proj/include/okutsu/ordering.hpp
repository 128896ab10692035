#pragma once

#include "okutsu/tree.hpp"

#include <algorithm>
#include <set>
#include <string>
#include <vector>

namespace okutsu {

/// The set S_t of primes lying below an optimised node t.
struct NodeSet {
    std::string component;
    int depth = 0;  ///< order of the node's type; 0 for a root
    std::vector<PrimeId> members;  ///< sorted by id
};

/// Every optimised node of the subtree spanned by S, one entry per distinct S_t.
inline std::vector<NodeSet> node_sets(const OMTree& tree, const std::vector<PrimeId>& S)
{
    std::vector<NodeSet> out;
    std::set<std::vector<PrimeId>> seen;
    for (const auto& p : S) {
        const PrimeNode& np = tree.prime(p);
        for (int k = 0; k <= np.depth() + 1; ++k) {
            NodeSet ns{np.component, k, {}};
            for (const auto& q : S) {
                if (!same_component(tree, p, q)) continue;
                if (q == p || k == 0 || index_of_coincidence(tree, p, q) > k) ns.members.push_back(q);
            }
            std::sort(ns.members.begin(), ns.members.end());
            if (seen.insert(ns.members).second) out.push_back(std::move(ns));
        }
    }
    return out;
}

inline std::vector<NodeSet> node_sets(const OMTree& tree) { return node_sets(tree, tree.ids()); }

inline bool is_interval(const std::vector<PrimeId>& order, const std::vector<PrimeId>& members)
{
    if (members.empty()) return true;
    std::vector<std::size_t> pos;
    for (const auto& m : members) {
        auto it = std::find(order.begin(), order.end(), m);
        if (it == order.end()) return false;
        pos.push_back(static_cast<std::size_t>(it - order.begin()));
    }
    auto [lo, hi] = std::minmax_element(pos.begin(), pos.end());
    return *hi - *lo + 1 == members.size();
}

/// Node sets that are not contiguous in `order`; empty when the interval property holds.
inline std::vector<NodeSet> interval_violations(const OMTree& tree, const std::vector<PrimeId>& order)
{
    std::vector<NodeSet> bad;
    for (auto& ns : node_sets(tree, order))
        if (!is_interval(order, ns.members)) bad.push_back(std::move(ns));
    return bad;
}

namespace detail {

inline void dfs_order(const OMTree& tree, std::vector<PrimeId> members, int depth, std::vector<PrimeId>& out)
{
    if (members.size() == 1) {
        out.push_back(members.front());
        return;
    }
    std::vector<std::vector<PrimeId>> groups;
    for (const auto& p : members) {
        auto it = std::find_if(groups.begin(), groups.end(), [&](const std::vector<PrimeId>& g) {
            return index_of_coincidence(tree, g.front(), p) > depth + 1;
        });
        if (it == groups.end())
            groups.push_back({p});
        else
            it->push_back(p);
    }
    for (auto& g : groups) std::sort(g.begin(), g.end());
    std::sort(groups.begin(), groups.end(), [&](const auto& a, const auto& b) {
        const Rational sa = tree.prime(a.front()).level(depth + 1).slope();
        const Rational sb = tree.prime(b.front()).level(depth + 1).slope();
        if (sa != sb) return sa < sb;
        return a.front() < b.front();
    });
    for (auto& g : groups) dfs_order(tree, std::move(g), depth + 1, out);
}

}  // namespace detail

/// Depth-first ordering: components by label, children by ascending slope then id.
inline std::vector<PrimeId> default_order(const OMTree& tree)
{
    std::map<std::string, std::vector<PrimeId>> components;
    for (const auto& n : tree.primes) components[n.component].push_back(n.id);
    std::vector<PrimeId> out;
    for (auto& [label, members] : components) {
        std::sort(members.begin(), members.end());
        detail::dfs_order(tree, members, 0, out);
    }
    return out;
}

/// The stored ordering if present (checked), otherwise the depth-first default.
inline std::vector<PrimeId> order_primes(const OMTree& tree)
{
    if (!tree.ordering) return default_order(tree);
    const auto& ord = *tree.ordering;
    std::vector<PrimeId> a = ord;
    std::vector<PrimeId> b = tree.ids();
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    if (a != b) throw UsageError("ordering is not a permutation of the primes");
    auto bad = interval_violations(tree, ord);
    if (!bad.empty()) {
        std::string msg = "ordering violates the interval property for {";
        for (std::size_t i = 0; i < bad.front().members.size(); ++i)
            msg += (i ? "," : "") + bad.front().members[i];
        throw UsageError(msg + "}");
    }
    return ord;
}

/// The members of `subset` listed in the order induced by `order`.
inline std::vector<PrimeId> restrict_order(const std::vector<PrimeId>& order, const std::vector<PrimeId>& subset)
{
    std::vector<PrimeId> out;
    for (const auto& p : order)
        if (std::find(subset.begin(), subset.end(), p) != subset.end()) out.push_back(p);
    if (out.size() != subset.size()) throw UsageError("subset contains primes outside the ordering");
    return out;
}

}  // namespace okutsu
