#include "support.hpp"

#include "okutsu/valuation.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace okutsu;
using namespace okutsu::testing;

namespace {

std::vector<ExtValue> vec(const OMTree& t, const FactorProduct& g)
{
    std::vector<ExtValue> out;
    for (const PrimeId& p : {"p", "q", "l"}) out.push_back(w_product(t, p, g));
    return out;
}

}  // namespace

TEST(ExplicitValuations, WorkedExampleVectors)
{
    const OMTree t = three_primes();
    EXPECT_EQ(vec(t, phi("p", 1)), (std::vector<ExtValue>{X(6), X(4), X(4)}));
    EXPECT_EQ(vec(t, phi("p", 2)), (std::vector<ExtValue>{inf(), X(16), X(16)}));
    EXPECT_EQ(vec(t, phi("q", 2)), (std::vector<ExtValue>{X(12), X(18), X(17)}));
    EXPECT_EQ(vec(t, phi("q", 3)), (std::vector<ExtValue>{X(24), inf(), X(34)}));
    EXPECT_EQ(vec(t, phi("l", 2)), (std::vector<ExtValue>{X(12), X(17), inf()}));
}

TEST(ExplicitValuations, LevelOutOfRange)
{
    const OMTree t = three_primes();
    EXPECT_THROW(w_phi(t, "p", "q", 4), UsageError);
    EXPECT_THROW(w_phi(t, "p", "q", -1), UsageError);
    EXPECT_EQ(w_phi(t, "p", "q", 0), X(0));
}

TEST(Numerators, MixedRadixDigits)
{
    const OMTree t = three_primes();
    EXPECT_EQ(okutsu_numerator(t, "q", 3), phi("q", 2));
    EXPECT_EQ(okutsu_numerator(t, "q", 5), phi("q", 2) * phi("q", 1, 2));
    EXPECT_EQ(okutsu_numerator(t, "q", 6), phi("q", 3));
    EXPECT_TRUE(okutsu_numerator(t, "p", 0).empty());
    EXPECT_THROW(okutsu_numerator(t, "p", 5), UsageError);
}

TEST(Numerators, DegreeAndDigitBoundsOnGeneratedTrees)
{
    for (const auto& t : generated(0, 80))
        for (const auto& np : t.primes) {
            const auto d = derived_invariants(np);
            for (std::int64_t i = 0; i <= d.n; ++i) {
                const FactorProduct g = okutsu_numerator(t, np.id, i);
                ASSERT_EQ(degree(t, g), i);
                if (i == d.n) continue;
                ASSERT_LT(g.exponent(np.id, 0), np.f0);
                for (int lv = 1; lv <= np.depth(); ++lv)
                    ASSERT_LT(g.exponent(np.id, lv), np.level(lv).e * np.level(lv).f);
                ASSERT_EQ(g.exponent(np.id, np.depth() + 1), 0);
            }
        }
}

TEST(Products, WorkedExampleRows)
{
    const OMTree t = three_primes();
    EXPECT_EQ(w_product(t, "q", phi("p", 1) * phi("q", 2)), X(22));
    EXPECT_EQ(w_product(t, "q", phi("p", 2) * phi("q", 2) * phi("l", 2)), X(51));
    EXPECT_EQ(w_product(t, "q", FactorProduct{}), X(0));
    const std::vector<PrimeId> S{"p", "q", "l"};
    EXPECT_EQ(w_S(t, S, phi("p", 1) * phi("q", 2), {}), X(18));
    EXPECT_EQ(w_S(t, S, phi("p", 2) * phi("q", 3) * phi("l", 2), {}), inf());
    EXPECT_EQ(w_S(t, S, FactorProduct{}, {}), X(0));
    EXPECT_THROW(w_S(t, {}, FactorProduct{}, {}), UsageError);
}

TEST(Products, IdealShift)
{
    const OMTree t = three_primes();
    FractionalIdeal I;
    I.exponents["q"] = 2;
    EXPECT_EQ(w_ideal(t, "q", phi("p", 1), I), X(2));
    EXPECT_EQ(w_ideal(t, "q", phi("p", 1), {}), w_product(t, "q", phi("p", 1)));
    EXPECT_EQ(w_ideal(t, "p", phi("p", 2), I), inf());
}

TEST(Products, DegreeAdjusted)
{
    const OMTree t = three_primes();
    EXPECT_EQ(degree_adjusted(t, "q", phi("q", 2)), X(6));
    EXPECT_EQ(degree_adjusted(t, "p", phi("p", 1)), X(6));
    EXPECT_EQ(degree_adjusted(t, "p", phi("q", 1)), X(6));
    EXPECT_THROW(degree_adjusted(t, "p", FactorProduct{}), UsageError);
}

TEST(Table, WorkedExampleEntries)
{
    const OMTree t = three_primes();
    const CrossValuationTable T = build_table(t, {"p", "q", "l"});
    EXPECT_EQ(T.at(0, 1, 3), X(12));
    EXPECT_EQ(T.at(1, 1, 3), X(18));
    EXPECT_EQ(T.at(2, 1, 3), X(17));
    EXPECT_EQ(T.at(0, 0, 4), inf());
    EXPECT_EQ(T.total_degree(), 13);
}

TEST(Table, ShapeAndConsistencyOnGeneratedTrees)
{
    for (const auto& t : generated(100, 80)) {
        const auto S = t.ids();
        const CrossValuationTable T = build_table(t, S);
        for (std::size_t k = 0; k < S.size(); ++k)
            for (std::size_t i = 0; i < S.size(); ++i) {
                ASSERT_EQ(T.at(k, i, 0), X(0));
                for (std::int64_t j = 0; j <= T.n(i); ++j) {
                    const ExtValue direct = w_product(t, S[k], okutsu_numerator(t, S[i], j));
                    ASSERT_EQ(T.at(k, i, j), direct);
                    ASSERT_EQ(T.at(k, i, j).is_infinite(), k == i && j == T.n(i));
                }
            }
    }
}

TEST(Products, AdditivityOnGeneratedTrees)
{
    std::mt19937_64 rng(5);
    for (const auto& t : generated(300, 60)) {
        const auto S = t.ids();
        for (int trial = 0; trial < 10; ++trial) {
            const FactorProduct g = oracle::random_phi_product(t, S, rng());
            const FactorProduct h = oracle::random_phi_product(t, S, rng());
            for (const auto& p : S) ASSERT_EQ(w_product(t, p, g * h), w_product(t, p, g) + w_product(t, p, h));
            ASSERT_EQ(degree(t, g * h), degree(t, g) + degree(t, h));
        }
    }
}

// Degree-adjusted values along one's own frame increase strictly.
TEST(FrameValues, OwnValuesIncreaseStrictly)
{
    for (const auto& t : generated(500, 100))
        for (const auto& np : t.primes)
            for (int i = 1; i < np.depth(); ++i)
                ASSERT_LT(degree_adjusted(t, np.id, phi(np.id, i)), degree_adjusted(t, np.id, phi(np.id, i + 1)));
}

// Cross values: strict increase below the index of coincidence, constant above it,
// and constant across it when lambda_q^p >= lambda_p^q.
TEST(FrameValues, CrossValuesOnGeneratedTrees)
{
    int checked = 0;
    for (const auto& t : generated(700, 150))
        for (const auto& p : t.ids())
            for (const auto& q : t.ids()) {
                if (p == q || !same_component(t, p, q)) continue;
                const int ell = index_of_coincidence(t, p, q);
                const int rq = t.prime(q).depth();
                auto wt = [&](int i) { return degree_adjusted(t, p, phi(q, i)); };
                for (int i = 1; i < ell && i + 1 <= rq + 1; ++i) ASSERT_LT(wt(i), wt(i + 1));
                for (int i = ell + 1; i <= rq; ++i) ASSERT_EQ(wt(i), wt(i + 1));
                const HiddenSlopes h = hidden_slopes(t, p, q);
                if (h.lambda_qp >= h.lambda_pq && ell <= rq) {
                    ASSERT_EQ(wt(ell), wt(ell + 1));
                    ++checked;
                }
            }
    EXPECT_GT(checked, 20);
}

// Moving phi_{i,q} to the closest prime l at level ell = i(q,l) never lowers w_p for p outside {q}.
TEST(FrameValues, GreaterCrossValueOnGeneratedTrees)
{
    int checked = 0;
    for (const auto& t : generated(900, 150)) {
        const auto ids = t.ids();
        for (const auto& q : ids)
            for (const auto& l : ids) {
                if (q == l || !same_component(t, q, l)) continue;
                const ExtendedIndex Iql = extended_index(t, q, l);
                const HiddenSlopes hql = hidden_slopes(t, l, q);
                bool closest = true;
                for (const auto& p : ids) {
                    if (p == q || p == l || !same_component(t, p, q)) continue;
                    const ExtendedIndex Iqp = extended_index(t, q, p);
                    if (Iqp > Iql || (Iqp == Iql && hidden_slopes(t, p, q).lambda_pq > hql.lambda_pq)) closest = false;
                }
                if (!closest) continue;
                const int ell = Iql.ell;
                const auto dq = derived_invariants(t, q);
                for (int i = ell; i <= t.prime(q).depth() + 1; ++i) {
                    const std::int64_t mult = dq.m[static_cast<std::size_t>(i)] / dq.m[static_cast<std::size_t>(ell)];
                    const FactorProduct moved = phi(l, ell, mult);
                    for (const auto& p : ids) {
                        if (p == q || !same_component(t, p, q)) continue;
                        ASSERT_GE(w_product(t, p, moved), w_product(t, p, phi(q, i)))
                            << "q=" << q << " l=" << l << " p=" << p << " i=" << i;
                        ++checked;
                    }
                }
            }
    }
    EXPECT_GT(checked, 50);
}
