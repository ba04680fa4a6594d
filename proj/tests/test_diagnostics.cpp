#include <gtest/gtest.h>

#include "crooked/diagnostics.hpp"
#include "crooked/errors.hpp"
#include "crooked/harness.hpp"

using namespace crooked;

namespace {

std::vector<bool> honest_with(std::size_t len, std::initializer_list<std::size_t> bad) {
    std::vector<bool> v(len, true);
    for (std::size_t k : bad) v[k] = false;
    return v;
}

// A chain x_0..x_{ell+1} over random CF values, inserted in round order.
CfTable sequential_table(std::size_t ell, RngStream& rng, std::vector<Gf2Vec>& xs) {
    CfTable t(ell);
    xs.assign(ell + 2, Gf2Vec(16));
    xs[0] = Gf2Vec::random(16, rng);
    xs[1] = Gf2Vec::random(16, rng);
    for (std::size_t i = 1; i <= ell; ++i) {
        const Gf2Vec y = Gf2Vec::random(16, rng);
        t.insert(i, xs[i], y, i);
        xs[i + 1] = xs[i - 1] ^ y;
    }
    return t;
}

}  // namespace

TEST(MonotoneScan, SequentialChainHasNoViolation) {
    RngStream rng(1);
    std::vector<Gf2Vec> xs;
    EXPECT_TRUE(monotone_scan(sequential_table(12, rng, xs)).empty());
}

TEST(MonotoneScan, MiddleInsertedLastIsReported) {
    RngStream rng(2);
    std::vector<Gf2Vec> xs;
    CfTable t = sequential_table(12, rng, xs);
    // Re-set x_6's value (same value) with the newest order.
    const Gf2Vec y6 = t.find(6, xs[6])->y;
    t.assign(6, xs[6], y6, 100);
    const auto v = monotone_scan(t);
    ASSERT_EQ(v.size(), 1u);
    EXPECT_EQ(v[0].round, 6u);
    EXPECT_EQ(v[0].prev, xs[5]);
    EXPECT_EQ(v[0].mid, xs[6]);
    EXPECT_EQ(v[0].next, xs[7]);
}

TEST(BadRegionScan, FullyHonestChainIsClean) {
    EXPECT_TRUE(bad_region_scan(std::vector<bool>(48, true), 14, 8).empty());
}

TEST(BadRegionScan, SinglePointRegionSpansTheRunAroundIt) {
    const auto r = bad_region_scan(honest_with(48, {20}), 14, 0);
    ASSERT_EQ(r.size(), 1u);
    EXPECT_EQ(r[0].start, 7u);
    EXPECT_EQ(r[0].end, 33u);
    EXPECT_EQ(r[0].length(), 27u);
    EXPECT_TRUE(r[0].too_long);
}

TEST(BadRegionScan, RegionsClipAndMerge) {
    // 2 and 10 are 7 honest apart with run 4: separate; 10 and 12 merge.
    const auto r = bad_region_scan(honest_with(20, {2, 10, 12}), 4, 9);
    ASSERT_EQ(r.size(), 2u);
    EXPECT_EQ(r[0], (BadRegion{0, 5, false}));
    EXPECT_EQ(r[1], (BadRegion{7, 15, false}));
    const auto tight = bad_region_scan(honest_with(20, {2, 10, 12}), 4, 8);
    EXPECT_FALSE(tight[0].too_long);
    EXPECT_TRUE(tight[1].too_long);
    EXPECT_THROW(bad_region_scan({true}, 0), ParameterError);
}

TEST(BadRegionScan, InjectedPointsAreFoundExactly) {
    const auto r = bad_region_scan(honest_with(100, {10, 50, 52, 90}), 5, 12);
    ASSERT_EQ(r.size(), 3u);
    EXPECT_EQ(r[0], (BadRegion{6, 14, false}));
    EXPECT_EQ(r[1], (BadRegion{46, 56, false}));
    EXPECT_EQ(r[2], (BadRegion{86, 94, false}));
}

TEST(BadRegionScan, LimitFollowsRoundCount) {
    EXPECT_EQ(bad_region_limit(ConstructionParams::paper_8n(48)), 8u);
}

TEST(Diagnostics, HonestG5RunsAreClean) {
    ChainWalkDistinguisher d(true, 2);
    const auto p = ConstructionParams::tiny();
    for (std::size_t t = 0; t < 30; ++t) {
        const GameRun run = run_game(GameId::G5, d, p, builtin_subverter("honest", p.n), 9, t);
        const auto rep = run_diagnostics(*run.game);
        EXPECT_GT(rep.chains, 0u);
        EXPECT_EQ(rep.monotone_violations, 0u);
        EXPECT_EQ(rep.bad_regions, 0u);
    }
}

TEST(Diagnostics, ChainHonestyFlagsTheSubvertedRound) {
    ChainWalkDistinguisher d;
    const auto p = ConstructionParams::tiny();
    // Round 5 is subverted everywhere but never adapted, so the chain completes.
    const GameRun run = run_game(GameId::G1, d, p, builtin_subverter("round_dishonest:5", p.n), 4, 0);
    ASSERT_EQ(run.transcript.status, GameStatus::Completed);
    ASSERT_EQ(run.game->chains().size(), 1u);
    const auto h = chain_honesty(run.game->tables(), run.game->randomness(), run.game->program(), run.game->chains()[0]);
    for (std::size_t i = 1; i <= p.ell; ++i) EXPECT_EQ(h[i - 1], i != 5) << i;
    const auto regions = bad_region_scan(h, 3, 4);
    ASSERT_EQ(regions.size(), 1u);
    EXPECT_EQ(regions[0], (BadRegion{2, 6, true}));
}
