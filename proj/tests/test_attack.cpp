#include <gtest/gtest.h>

#include <cmath>
#include <memory>

#include "crooked/attack.hpp"
#include "crooked/errors.hpp"
#include "crooked/stats.hpp"

using namespace crooked;

namespace {

PublicRandomness draw(std::size_t n, std::size_t ell, std::uint64_t seed) {
    RngStream rng(seed, streams::public_randomness);
    return PublicRandomness::sample(n, ell, rng);
}

// Direct prefix check of every round, independent of the solver.
bool all_prefixes_zero(const PublicRandomness& r, std::size_t ell, std::size_t lambda, const Gf2Vec& x0,
                       const Gf2Vec& x1) {
    for (std::size_t i = 1; i <= ell; ++i) {
        const Gf2Vec enc = r.layer(i).a * (i % 2 ? x1 : x0) ^ r.layer(i).b;
        for (std::size_t k = 0; k < lambda; ++k)
            if (enc.get(k)) return false;
    }
    return true;
}

}  // namespace

TEST(Attack, LambdaAndRoundLimit) {
    EXPECT_EQ(attack_lambda(32, 16), 3u);
    EXPECT_EQ(attack_lambda(10, 3), 4u);
    EXPECT_EQ(max_attack_rounds(32, 0.0625), 16u);
    EXPECT_EQ(max_attack_rounds(48, 0.25), 48u);
    EXPECT_THROW(max_attack_rounds(32, 1.5), ParameterError);
}

TEST(Attack, SystemShapes) {
    const auto small = build_system(draw(8, 2, 1), 8, 2, 1);
    EXPECT_EQ(small.odd.a.n_rows(), 1u);
    EXPECT_EQ(small.even.a.n_rows(), 1u);
    EXPECT_EQ(small.odd.a.n_cols(), 8u);

    const auto inst = build_system(draw(32, 16, 2), 32, 16, 3);
    EXPECT_EQ(inst.odd.a.n_rows(), 24u);
    EXPECT_EQ(inst.odd.a.n_cols(), 32u);
    EXPECT_EQ(inst.even.a.n_rows(), 24u);
    EXPECT_EQ(inst.odd.rounds.size(), 8u);
}

TEST(Attack, EachGroupHasFullRank) {
    const auto r = draw(32, 16, 3);
    const auto inst = build_system(r, 32, 16, 3);
    for (const auto* side : {&inst.odd, &inst.even}) {
        for (std::size_t g = 0; g < side->rounds.size(); ++g) {
            std::vector<Gf2Vec> rows;
            for (std::size_t k = 0; k < 3; ++k) rows.push_back(side->a.row(3 * g + k));
            EXPECT_EQ(stack(rows).rank(), 3u);
        }
    }
}

TEST(Attack, SolutionsPassDirectPrefixCheck) {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const auto r = draw(32, 16, seed);
        const auto inst = build_system(r, 32, 16, 3);
        const auto pair = find_collapse_pair(inst, r);
        if (!pair) continue;
        EXPECT_TRUE(all_prefixes_zero(r, 16, 3, pair->first, pair->second));
        EXPECT_TRUE(collapse_predicate(r, 16, 3, pair->first, pair->second));
    }
}

TEST(Attack, NoSolutionRateAtThirtyTwoBits) {
    std::size_t failures = 0;
    for (std::uint64_t seed = 100; seed < 300; ++seed) {
        const auto r = draw(32, 16, seed);
        if (!find_collapse_pair(build_system(r, 32, 16, 3), r)) ++failures;
    }
    EXPECT_LE(failures, 10u);  // at most 5% of 200
}

TEST(Attack, ZeroRoundsIsTriviallySolvable) {
    const auto r = draw(8, 0, 1);
    const auto inst = build_system(r, 8, 0, 1);
    EXPECT_TRUE(find_collapse_pair(inst, r).has_value());
}

TEST(Attack, PredictedOutputAlternates) {
    const Gf2Vec a = Gf2Vec::from_u64(4, 1), b = Gf2Vec::from_u64(4, 2);
    EXPECT_EQ(predicted_output(16, a, b), std::make_pair(a, b));
    EXPECT_EQ(predicted_output(15, a, b), std::make_pair(b, a));
}

TEST(Attack, RealHitsOnEverySolvableDraw) {
    AttackConfig cfg;
    cfg.trials = 100;
    cfg.seed = 7;
    const auto rep = run_attack(cfg);
    EXPECT_EQ(rep.ell, 16u);
    EXPECT_EQ(rep.lambda, 3u);
    EXPECT_TRUE(rep.hit_on_every_solvable);
    EXPECT_EQ(rep.real_hits, rep.solvable);
    EXPECT_GE(rep.advantage, 0.9);
    EXPECT_LE(rep.no_solution_rate, 0.1);
    for (const auto& t : rep.records) {
        EXPECT_EQ(t.distinguisher_f_queries, 0u);
        if (t.solvable) {
            EXPECT_TRUE(t.prefix_ok);
        }
    }
    // 2^-3 of inputs are subverted, more than eps = 2^-4.
    EXPECT_DOUBLE_EQ(rep.dishonest_fraction, 0.125);
    EXPECT_FALSE(rep.within_eps);
}

TEST(Attack, IdealSideNeverHits) {
    AttackConfig cfg;
    cfg.trials = 10000;
    cfg.seed = 99;
    EXPECT_EQ(run_attack(cfg).ideal_hits, 0u);
}

TEST(Attack, RejectsTooManyRounds) {
    AttackConfig cfg;
    cfg.ell = 17;
    EXPECT_THROW(run_attack(cfg), ParameterError);
}

TEST(Attack, RankScanFailureRateFallsWithN) {
    const auto rule = [](std::size_t n) { return max_attack_rounds(n, 0.0625); };
    const auto rows = full_rank_probability_scan({16, 24, 32, 48}, rule, 400, 5);
    ASSERT_EQ(rows.size(), 4u);
    std::size_t inversions = 0;
    for (std::size_t k = 1; k < rows.size(); ++k) {
        if (rows[k].rate <= rows[k - 1].rate) continue;
        ++inversions;
        const double sigma = std::hypot(binomial_sigma(rows[k].rate, 400), binomial_sigma(rows[k - 1].rate, 400));
        EXPECT_LE(rows[k].rate - rows[k - 1].rate, 2 * sigma);
    }
    EXPECT_LE(inversions, 1u);
    const auto tiny = full_rank_probability_scan({8}, rule, 400, 6);
    EXPECT_LT(tiny[0].rate, 1.0);
    EXPECT_TRUE(full_rank_probability_scan({16}, rule, 0, 1).empty());
}
