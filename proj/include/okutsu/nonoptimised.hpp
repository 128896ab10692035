#pragma once

#include "okutsu/tree.hpp"

#include <algorithm>
#include <map>
#include <string>
#include <vector>

namespace okutsu {

/// A node of the non-optimised tree. Roots carry the component label and f0;
/// every other node is reached through a refinement edge.
struct NonOptNode {
    int parent = -1;
    std::optional<RefinementStep> edge;
    int level = 0;  ///< level of the incoming edge
    std::optional<LevelData> closes_level;  ///< set on nodes of the optimised tree
    std::vector<int> children;
    std::vector<PrimeId> primes;  ///< primes whose path passes through this node
    std::string component;
    std::int64_t f0 = 1;
};

struct NonOptimisedTree {
    std::vector<NonOptNode> nodes;
    std::vector<int> roots;
    std::map<PrimeId, std::vector<int>> paths;  ///< root first, leaf last

    /// Deepest node common to the paths of all primes in S; -1 when S spans several roots.
    int common_ancestor(const std::vector<PrimeId>& S) const
    {
        if (S.empty()) throw UsageError("common ancestor of an empty set");
        const std::vector<int>& first = paths.at(S.front());
        std::size_t depth = first.size();
        for (const auto& p : S) {
            const std::vector<int>& path = paths.at(p);
            std::size_t k = 0;
            while (k < depth && k < path.size() && path[k] == first[k]) ++k;
            depth = k;
        }
        return depth == 0 ? -1 : first[depth - 1];
    }
};

namespace detail {

inline RefinementChain synthesized_chain(const OMTree& tree, const PrimeId& p, int k)
{
    const PrimeNode& np = tree.prime(p);
    std::vector<PrimeId> upper;   // primes sharing the node below level k
    std::vector<PrimeId> shared;  // primes sharing level k
    std::vector<PrimeId> partners;
    for (const auto& n : tree.primes) {
        if (n.component != np.component) continue;
        if (n.id == p) {
            upper.push_back(p);
            shared.push_back(p);
            continue;
        }
        const int i = index_of_coincidence(tree, p, n.id);
        if (k == 1 || i > k - 1) upper.push_back(n.id);
        if (i > k) shared.push_back(n.id);
        if (i == k) partners.push_back(n.id);
    }
    for (const auto& q : upper)
        if (tree.prime(q).chain(k))
            throw InsufficientData("refinement chain of " + p + " at level " + std::to_string(k) +
                                   " is needed to align with " + q);
    const PrimeId rep_upper = *std::min_element(upper.begin(), upper.end());
    const PrimeId rep = *std::min_element(shared.begin(), shared.end());
    const std::string node = np.component + "/" + std::to_string(k - 1) + "/" + rep_upper;
    const std::string tag = std::to_string(k) + "," + rep;
    const Rational lam = np.level(k).slope();

    std::optional<Rational> split;
    bool any_match = false;
    for (const auto& q : partners) {
        const PairRecord* rec = tree.find_pair(p, q);
        if (rec->minor_index && *rec->minor_index > 1)
            throw InsufficientData("refinement chains are required where the minor index exceeds 1 (" + p + ", " + q +
                                   ")");
        const HiddenSlopes h = hidden_slopes(tree, p, q);
        if (h.match_p) {
            any_match = true;
            continue;
        }
        if (split && *split != h.lambda_pq)
            throw InsufficientData("refinement chains are required to place " + p + " against several partners");
        split = h.lambda_pq;
    }
    if (split && any_match)
        throw InsufficientData("refinement chains are required to place " + p + " against several partners");
    if (!split) return {{"phi@" + node, lam, "psi[" + tag + "]"}};
    return {{"phi@" + node, *split, "psi*[" + tag + "]"}, {"phi[" + tag + "]", lam - *split, "psi[" + tag + "]"}};
}

}  // namespace detail

/// Level-k refinement chain of p: the stored chain, or one synthesised from pair data
/// under the assumption that no unrecorded refinement took place.
inline RefinementChain level_chain(const OMTree& tree, const PrimeId& p, int k)
{
    const PrimeNode& np = tree.prime(p);
    if (const RefinementChain* c = np.chain(k)) return *c;
    return detail::synthesized_chain(tree, p, k);
}

inline NonOptimisedTree expand_nonoptimised(const OMTree& tree)
{
    NonOptimisedTree out;
    std::map<std::string, int> root_of;
    for (const auto& np : tree.primes) {
        auto it = root_of.find(np.component);
        if (it == root_of.end()) {
            NonOptNode root;
            root.component = np.component;
            root.f0 = np.f0;
            root.closes_level = LevelData{1, np.f0, 0};
            out.nodes.push_back(root);
            const int id = static_cast<int>(out.nodes.size()) - 1;
            out.roots.push_back(id);
            it = root_of.emplace(np.component, id).first;
        }
        int cur = it->second;
        std::vector<int> path{cur};
        out.nodes[static_cast<std::size_t>(cur)].primes.push_back(np.id);
        for (int k = 1; k <= np.depth() + 1; ++k) {
            const RefinementChain chain = level_chain(tree, np.id, k);
            Rational sum = 0;
            for (const auto& step : chain) sum += step.slope;
            if (sum != np.level(k).slope())
                throw InconsistentTree("refinement slopes of " + np.id + " do not sum to the slope of level " +
                                       std::to_string(k));
            for (const auto& step : chain) {
                NonOptNode& node = out.nodes[static_cast<std::size_t>(cur)];
                const int expected_level = node.closes_level ? node.level + 1 : node.level;
                if (k != expected_level)
                    throw InconsistentTree("node below " + np.id + " mixes a level boundary with a refinement");
                int next = -1;
                for (int c : node.children) {
                    const NonOptNode& child = out.nodes[static_cast<std::size_t>(c)];
                    if (child.edge->phi != step.phi)
                        throw InconsistentTree("edges leaving one node must share their representative");
                    if (*child.edge == step) next = c;
                }
                if (next < 0) {
                    NonOptNode child;
                    child.parent = cur;
                    child.edge = step;
                    child.level = k;
                    child.component = np.component;
                    child.f0 = np.f0;
                    out.nodes.push_back(child);
                    next = static_cast<int>(out.nodes.size()) - 1;
                    out.nodes[static_cast<std::size_t>(cur)].children.push_back(next);
                }
                cur = next;
                path.push_back(cur);
                out.nodes[static_cast<std::size_t>(cur)].primes.push_back(np.id);
            }
            NonOptNode& end = out.nodes[static_cast<std::size_t>(cur)];
            if (end.closes_level && !(*end.closes_level == np.level(k)))
                throw InconsistentTree("conflicting level data at a shared node of " + np.id);
            if (!end.closes_level && !end.children.empty())
                throw InconsistentTree("level " + std::to_string(k) + " of " + np.id + " ends inside a refinement");
            end.closes_level = np.level(k);
        }
        out.paths[np.id] = std::move(path);
    }
    return out;
}

/// Rebuilds the optimised tree (levels, chains and pair data) from an expansion.
inline OMTree collapse(const NonOptimisedTree& nt)
{
    OMTree tree;
    std::map<PrimeId, std::vector<RefinementChain>> chains;
    for (const auto& [p, path] : nt.paths) {
        const NonOptNode& root = nt.nodes[static_cast<std::size_t>(path.front())];
        PrimeNode np;
        np.id = p;
        np.component = root.component;
        np.f0 = root.f0;
        std::vector<RefinementChain> cs;
        for (std::size_t k = 1; k < path.size(); ++k) {
            const NonOptNode& node = nt.nodes[static_cast<std::size_t>(path[k])];
            if (static_cast<int>(cs.size()) < node.level) cs.emplace_back();
            cs.back().push_back(*node.edge);
            if (node.closes_level) np.levels.push_back(*node.closes_level);
        }
        for (const auto& c : cs) np.refinements.emplace_back(c);
        chains[p] = cs;
        tree.primes.push_back(std::move(np));
    }
    for (std::size_t a = 0; a < tree.primes.size(); ++a)
        for (std::size_t b = a + 1; b < tree.primes.size(); ++b) {
            const PrimeNode& np = tree.primes[a];
            const PrimeNode& nq = tree.primes[b];
            if (np.component != nq.component) continue;
            const auto& pp = nt.paths.at(np.id);
            const auto& pq = nt.paths.at(nq.id);
            std::size_t k = 0;
            while (k < pp.size() && k < pq.size() && pp[k] == pq[k]) ++k;
            if (k >= pp.size() || k >= pq.size()) throw InconsistentTree("leaf paths are nested");
            const int ell = nt.nodes[static_cast<std::size_t>(pp[k])].level;
            const ChainComparison c =
                compare_chains(chains[np.id][static_cast<std::size_t>(ell - 1)], chains[nq.id][static_cast<std::size_t>(ell - 1)]);
            if (!c.coherent) throw InconsistentTree("incoherent chains in expansion");
            tree.pairs.push_back({np.id, nq.id, ell, c.lambda_pq, c.lambda_qp, c.match_p, c.match_q, c.minor_index});
        }
    return tree;
}

}  // namespace okutsu
