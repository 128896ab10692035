// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include "okutsu/io/commands.hpp"
#include "okutsu/oracle/verify.hpp"

#include <chrono>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

using namespace okutsu;
using namespace okutsu::oracle;

namespace {

// Limits are pinned here; all value comparisons are exact.
constexpr double kGoldenSeconds = 1.0;
constexpr double kMaximalitySeconds = 300.0;
constexpr int kMaximalityTrees = 520;
constexpr int kMaximalityIdeals = 60;
constexpr int kBlockTrees = 110;
constexpr int kPrecompTrees = 300;
constexpr int kCanonicalSamples = 240;
constexpr int kNuInstances = 120;
constexpr int kShiftInstances = 50;
constexpr std::int64_t kShifts[] = {-3, -1, 1, 2, 5};

const std::string kFixture = std::string(OKUTSU_FIXTURES) + "/three-primes.json";

struct Verdict {
    bool pass = false;
    std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

ExtValue X(std::int64_t n) { return ExtValue(Rational(n)); }

std::vector<ExtValue> phi_vector(const OMTree& t, const PrimeId& q, int level)
{
    std::vector<ExtValue> v;
    for (const PrimeId& p : {"p", "q", "l"}) v.push_back(w_phi(t, p, q, level));
    return v;
}

Verdict golden()
{
    const auto t0 = std::chrono::steady_clock::now();
    std::ostringstream out, err;
    const int code = io::cmd_trace({kFixture, "", "", "json"}, out, err);
    if (code != io::kOk) return {false, "trace exited with " + std::to_string(code) + ": " + err.str()};
    const io::json j = io::json::parse(out.str());
    const std::vector<std::string> values{"0", "4", "8", "12", "18", "24", "29", "33", "37", "42", "51", "55", "59", "inf"};
    const auto& steps = j["steps"];
    if (steps.size() != values.size()) return {false, "expected 14 steps, got " + std::to_string(steps.size())};
    for (std::size_t k = 0; k < values.size(); ++k)
        if (steps[k]["value"] != values[k]) return {false, "step " + std::to_string(k) + " value " + steps[k]["value"].dump()};
    if (steps[4]["numerator"] != "phi[1,p] * phi[2,q]") return {false, "step 4 numerator " + steps[4]["numerator"].dump()};
    if (steps[4]["vector"] != io::json::array({"18", "22", "21"})) return {false, "step 4 vector " + steps[4]["vector"].dump()};

    const OMTree t = io::load_tree(kFixture);
    const ExtValue inf = ExtValue::infinity();
    const bool vectors = phi_vector(t, "p", 1) == std::vector<ExtValue>{X(6), X(4), X(4)} &&
                         phi_vector(t, "p", 2) == std::vector<ExtValue>{inf, X(16), X(16)} &&
                         phi_vector(t, "q", 2) == std::vector<ExtValue>{X(12), X(18), X(17)} &&
                         phi_vector(t, "q", 3) == std::vector<ExtValue>{X(24), inf, X(34)} &&
                         phi_vector(t, "l", 2) == std::vector<ExtValue>{X(12), X(17), inf};
    if (!vectors) return {false, "phi valuation vectors differ"};
    const double s = seconds_since(t0);
    std::ostringstream d;
    d << "14 steps, vectors exact, " << s << " s";
    return {s < kGoldenSeconds, d.str()};
}

Verdict maximality()
{
    const auto t0 = std::chrono::steady_clock::now();
    int trees = 0, ideals = 0, skipped = 0;
    std::uint64_t seed = 100000;
    while (trees < kMaximalityTrees) {
        GeneratorConfig cfg;
        cfg.seed = seed++;
        if (cfg.seed % 2) cfg.common_prefix_levels = {1, 2};
        const OMTree t = generate_tree(cfg);
        const auto S = order_primes(t);
        try {
            const MaximalityReport plain = verify_maximality(t, S, {});
            if (!plain.passed)
                return {false, "seed " + std::to_string(cfg.seed) + " degree " + std::to_string(*plain.failing_degree)};
            if (ideals < kMaximalityIdeals || cfg.seed % 3 == 0) {
                const FractionalIdeal I = random_ideal(t, cfg.seed * 31 + 7, cfg.fractional_exponent_range);
                const MaximalityReport rep = verify_maximality(t, S, I);
                if (!rep.passed)
                    return {false, "seed " + std::to_string(cfg.seed) + " with ideal, degree " +
                                       std::to_string(*rep.failing_degree)};
                ++ideals;
            }
        } catch (const BudgetExceeded&) {
            ++skipped;
            continue;
        }
        ++trees;
    }
    const double s = seconds_since(t0);
    std::ostringstream d;
    d << trees << " trees, " << ideals << " ideals, " << skipped << " over budget, " << s << " s";
    return {ideals >= kMaximalityIdeals && s < kMaximalitySeconds, d.str()};
}

Verdict witness()
{
    const OMTree t = io::load_tree(kFixture);
    const std::vector<PrimeId> S{"p", "q", "l"};
    FactorProduct g;
    const std::int64_t idx[] = {1, 2, 1};
    for (std::size_t i = 0; i < 3; ++i) g = g * okutsu_numerator(t, S[i], idx[i]);
    const ExtValue alt = w_S(t, S, g, {});
    const ExtValue best = brute_force_max(t, S, {}).best[4];
    const ExtValue greedy = maxmin(t, S).values[4];
    std::ostringstream d;
    d << "w(1,2,1) = " << alt.str() << ", oracle = " << best.str() << ", MaxMin = " << greedy.str();
    return {alt == X(16) && best == X(18) && greedy == X(18), d.str()};
}

Verdict blocks()
{
    const OMTree t = io::load_tree(kFixture);
    const BlocksReport ql = verify_blocks(t, {"q", "l"}, {});
    if (!ql.passed || ql.m_ell != 3) return {false, "{q,l}: " + ql.failure};
    int trees = 0;
    std::uint64_t seed = 200000;
    GeneratorConfig cfg;
    cfg.num_components = {1, 1};
    cfg.common_prefix_levels = {1, 2};
    cfg.max_depth = {1, 3};
    while (trees < kBlockTrees) {
        cfg.seed = seed++;
        const OMTree tr = generate_tree(cfg);
        const auto S = order_primes(tr);
        if (S.size() < 2 || index_of_coincidence(tr, S) < 2) continue;
        const BlocksReport rep = verify_blocks(tr, S, random_ideal(tr, cfg.seed, {-2, 2}));
        if (!rep.passed) return {false, "seed " + std::to_string(cfg.seed) + ": " + rep.failure};
        ++trees;
    }
    return {true, "{q,l} with m=3 and " + std::to_string(trees) + " connected trees with i(S) >= 2"};
}

Verdict precomputation()
{
    int nodes = 0;
    for (std::uint64_t seed = 300000; seed < 300000 + kPrecompTrees; ++seed) {
        GeneratorConfig cfg;
        cfg.seed = seed;
        if (seed % 2) cfg.common_prefix_levels = {1, 2};
        const OMTree t = generate_tree(cfg);
        const auto S = order_primes(t);
        const FractionalIdeal I = random_ideal(t, seed, cfg.fractional_exponent_range);
        for (const auto& ns : node_sets(t, S)) {
            const PrecomputationReport rep = verify_precomputation(t, S, I, restrict_order(S, ns.members));
            if (!rep.passed) return {false, "seed " + std::to_string(seed)};
            ++nodes;
        }
    }
    return {true, std::to_string(nodes) + " node sets over " + std::to_string(kPrecompTrees) + " trees"};
}

Verdict canonicalizer()
{
    int samples = 0;
    std::uint64_t seed = 400000;
    while (samples < kCanonicalSamples) {
        GeneratorConfig cfg;
        cfg.seed = seed++;
        if (cfg.seed % 2) cfg.common_prefix_levels = {1, 2};
        const OMTree t = generate_tree(cfg);
        const auto S = order_primes(t);
        for (int k = 0; k < 4; ++k, ++samples) {
            const FactorProduct g = random_phi_product(t, S, cfg.seed * 13 + static_cast<std::uint64_t>(k));
            const CanonicalReport rep = verify_canonical(t, S, g);
            if (!rep.passed) return {false, "seed " + std::to_string(cfg.seed) + " sample " + std::to_string(k)};
        }
    }
    return {true, std::to_string(samples) + " samples, zero violations"};
}

Verdict nu()
{
    int instances = 0;
    int cases[4] = {0, 0, 0, 0};
    std::uint64_t seed = 500000;
    while (instances < kNuInstances) {
        GeneratorConfig cfg;
        cfg.seed = seed++;
        if (cfg.seed % 2) cfg.common_prefix_levels = {1, 2};
        const OMTree t = generate_tree(cfg);
        const auto order = order_primes(t);
        std::vector<std::vector<PrimeId>> sets;
        for (const auto& ns : node_sets(t))
            if (ns.members.size() >= 2) sets.push_back(restrict_order(order, ns.members));
        if (order.size() >= 2 && index_of_coincidence(t, order) == 0) sets.push_back(order);
        for (const auto& S : sets) {
            const NuReport rep = verify_nu_sequences(t, S, random_ideal(t, cfg.seed, {-2, 2}));
            if (!rep.passed)
                return {false, "seed " + std::to_string(cfg.seed) + " case " + case_letter(rep.split.split_case) + ": " +
                                   rep.failure};
            ++cases[static_cast<int>(rep.split.split_case)];
            ++instances;
        }
    }
    std::ostringstream d;
    d << instances << " instances (A " << cases[0] << ", B " << cases[1] << ", C " << cases[2] << ", D " << cases[3] << ")";
    return {true, d.str()};
}

Verdict shift()
{
    for (std::uint64_t seed = 600000; seed < 600000 + kShiftInstances; ++seed) {
        GeneratorConfig cfg;
        cfg.seed = seed;
        const OMTree t = generate_tree(cfg);
        const FractionalIdeal I = random_ideal(t, seed, cfg.fractional_exponent_range);
        for (auto c : kShifts) {
            const ShiftReport rep = verify_shift(t, order_primes(t), I, c);
            if (!rep.passed) return {false, "seed " + std::to_string(seed) + ": " + rep.failure};
        }
    }
    return {true, std::to_string(kShiftInstances) + " instances x 5 shifts"};
}

}  // namespace

int main()
{
    const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
        {"golden trace", golden},
        {"oracle maximality", maximality},
        {"non-maximal index witness", witness},
        {"block agreement", blocks},
        {"precomputation", precomputation},
        {"canonicalizer dominance", canonicalizer},
        {"nu interleaving", nu},
        {"uniform shift", shift},
    };
    bool all = true;
    int n = 0;
    for (const auto& [name, run] : criteria) {
        Verdict v;
        try {
            v = run();
        } catch (const std::exception& e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        all = all && v.pass;
        std::cout << (v.pass ? "PASS" : "FAIL") << " " << ++n << " " << name << ": " << v.detail << std::endl;
    }
    return all ? 0 : 1;
}
