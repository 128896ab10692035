#pragma once

#include "okutsu/io/tree_json.hpp"
#include "okutsu/oracle/generator.hpp"

#include <string>
#include <vector>

namespace okutsu::testing {

inline OMTree three_primes() { return io::load_tree(std::string(OKUTSU_FIXTURES) + "/three-primes.json"); }

inline Rational R(std::int64_t n, std::int64_t d = 1) { return make_rational(n, d); }
inline ExtValue X(std::int64_t n, std::int64_t d = 1) { return ExtValue(make_rational(n, d)); }
inline ExtValue inf() { return ExtValue::infinity(); }

inline FactorProduct phi(const PrimeId& p, int level, std::int64_t e = 1) { return FactorProduct::single(p, level, e); }

/// Generated trees for seeds [first, first + count); every other seed shares leading levels.
inline std::vector<OMTree> generated(std::uint64_t first, std::uint64_t count, oracle::GeneratorConfig base = {})
{
    std::vector<OMTree> out;
    for (std::uint64_t s = first; s < first + count; ++s) {
        oracle::GeneratorConfig cfg = base;
        cfg.seed = s;
        if (s % 2 == 1 && cfg.common_prefix_levels.hi == 0) cfg.common_prefix_levels = {1, 2};
        out.push_back(oracle::generate_tree(cfg));
    }
    return out;
}

}  // namespace okutsu::testing
