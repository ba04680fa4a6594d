#include <gtest/gtest.h>

#include <sstream>

#include "crooked/errors.hpp"
#include "crooked/games.hpp"
#include "crooked/harness.hpp"

using namespace crooked;

namespace {

const ConstructionParams kTiny = ConstructionParams::tiny();

ProgramPtr sub(const std::string& kind) { return builtin_subverter(kind, kTiny.n); }

// Event lines with the game label removed.
std::vector<nlohmann::json> strip_game(const std::string& jsonl) {
    std::vector<nlohmann::json> out;
    std::istringstream is(jsonl);
    std::string line;
    while (std::getline(is, line)) {
        auto j = nlohmann::json::parse(line);
        j.erase("game_id");
        out.push_back(std::move(j));
    }
    return out;
}

}  // namespace

TEST(Games, ParseGameId) {
    EXPECT_EQ(parse_game_id("g3"), GameId::G3);
    EXPECT_EQ(parse_game_id("G5"), GameId::G5);
    EXPECT_THROW(parse_game_id("g6"), ConfigError);
    EXPECT_STREQ(to_string(GameId::G4), "G4");
}

TEST(Games, HonestChainWalkCompletesInEveryGame) {
    ChainWalkDistinguisher d;
    for (auto id : {GameId::G1, GameId::G2, GameId::G3, GameId::G4, GameId::G5}) {
        for (std::size_t t = 0; t < 10; ++t) {
            const GameRun run = run_game(id, d, kTiny, sub("honest"), 21, t);
            EXPECT_EQ(run.transcript.status, GameStatus::Completed) << to_string(id);
            EXPECT_FALSE(run.transcript.bad_complete);
            EXPECT_FALSE(run.transcript.bad_eval);
            EXPECT_TRUE(run.transcript.decision);
        }
    }
}

TEST(Games, DishonestAdaptSlotAbortsG5WithBadComplete) {
    ChainWalkDistinguisher d;
    const GameRun run = run_game(GameId::G5, d, kTiny, sub("round_dishonest:12"), 3, 0);
    EXPECT_EQ(run.transcript.status, GameStatus::Aborted);
    EXPECT_TRUE(run.transcript.bad_complete);
    EXPECT_EQ(run.transcript.status_string(), "Abort(BadComplete)");
    const auto s = run.transcript.summary();
    EXPECT_EQ(s.at("status"), "Abort(BadComplete)");
    EXPECT_EQ(s.at("bad_flags").at("BadComplete"), true);
}

TEST(Games, G1AndG2TranscriptsCoincideWithoutRfCollisions) {
    ChainWalkDistinguisher d;
    for (std::size_t t = 0; t < 20; ++t) {
        const GameRun g1 = run_game(GameId::G1, d, kTiny, sub("honest"), 5, t, true);
        const GameRun g2 = run_game(GameId::G2, d, kTiny, sub("honest"), 5, t, true);
        ASSERT_FALSE(g1.transcript.events.empty());
        EXPECT_EQ(strip_game(g1.transcript.events), strip_game(g2.transcript.events)) << t;
        EXPECT_EQ(g2.transcript.overwrite_count, 0u);
    }
}

TEST(Games, HonestBadEventRatesAreZero) {
    ChainWalkDistinguisher d;
    for (auto id : {GameId::G4, GameId::G5}) {
        const auto rep = bad_event_rates(id, d, 500, kTiny, sub("honest"), 8);
        EXPECT_EQ(rep.trials, 500u);
        EXPECT_EQ(rep.bad_complete, 0u);
        EXPECT_EQ(rep.bad_eval, 0u);
        EXPECT_EQ(rep.other_aborts, 0u);
        EXPECT_DOUBLE_EQ(rep.ci_bad_complete.low, 0.0);
    }
}

TEST(Games, ZeroTrialsGiveEmptyReport) {
    ChainWalkDistinguisher d;
    const auto rep = bad_event_rates(GameId::G5, d, 0, kTiny, sub("honest"), 1);
    EXPECT_EQ(rep.trials, 0u);
    EXPECT_TRUE(rep.flags.empty());
}

TEST(Games, G4AndG5FlagsAgreeTrialByTrial) {
    for (const char* kind : {"honest", "round_dishonest:12", "round_dishonest:21", "prefix_zero:3"}) {
        for (const char* dk : {"chain_walk", "chain_walk_rf_first", "random_probe"}) {
            auto d = builtin_distinguisher(dk, 32, kTiny.n);
            const auto g4 = bad_event_rates(GameId::G4, *d, 40, kTiny, sub(kind), 13);
            const auto g5 = bad_event_rates(GameId::G5, *d, 40, kTiny, sub(kind), 13);
            EXPECT_EQ(g4.flags, g5.flags) << kind << " " << dk;
        }
    }
}

TEST(Games, G5KeepsSInsideM) {
    for (const char* dk : {"chain_walk", "chain_walk_rf_first", "random_probe"}) {
        auto d = builtin_distinguisher(dk, 64, kTiny.n);
        for (std::size_t t = 0; t < 20; ++t) {
            const GameRun run = run_game(GameId::G5, *d, kTiny, sub("honest"), 17, t);
            const auto* g = dynamic_cast<const DualGame*>(run.game.get());
            ASSERT_NE(g, nullptr);
            if (run.transcript.status != GameStatus::Completed) continue;
            EXPECT_GT(g->subset_checks(), 0u);
            EXPECT_EQ(g->subset_violations(), 0u) << dk << " " << t;
            EXPECT_TRUE(g->subset_holds());
        }
    }
}

TEST(Games, G5ProgramsRfOnlyThroughChains) {
    RandomProbeDistinguisher d(64);
    const GameRun run = run_game(GameId::G5, d, kTiny, sub("honest"), 4, 0);
    const auto* g = dynamic_cast<const DualGame*>(run.game.get());
    ASSERT_NE(g, nullptr);
    EXPECT_GE(g->rf().size(), g->m_chains().size());
    for (const auto& rec : g->m_chains()) {
        const Block* out = g->rf().lookup_forward({rec.xs[0], rec.xs[1]});
        ASSERT_NE(out, nullptr);
        EXPECT_EQ(*out, Block(rec.xs[kTiny.ell], rec.xs[kTiny.ell + 1]));
    }
}

TEST(Games, G3ToleratesWhatG4Rejects) {
    auto d = builtin_distinguisher("chain_walk_rf_first", 0, kTiny.n);
    std::size_t g3_aborts = 0, g4_aborts = 0;
    for (std::size_t t = 0; t < 30; ++t) {
        g3_aborts += run_game(GameId::G3, *d, kTiny, sub("prefix_zero:3"), 2, t).transcript.status == GameStatus::Aborted;
        g4_aborts += run_game(GameId::G4, *d, kTiny, sub("prefix_zero:3"), 2, t).transcript.status == GameStatus::Aborted;
    }
    EXPECT_LE(g3_aborts, g4_aborts);
}

TEST(Games, RunsAreReproducible) {
    RandomProbeDistinguisher d(40);
    for (auto id : {GameId::G1, GameId::G4, GameId::G5}) {
        const GameRun a = run_game(id, d, kTiny, sub("honest"), 6, 3, true);
        const GameRun b = run_game(id, d, kTiny, sub("honest"), 6, 3, true);
        EXPECT_EQ(a.transcript.events, b.transcript.events);
        EXPECT_EQ(a.transcript.summary(), b.transcript.summary());
    }
}

TEST(Games, CfTapeIsIndependentOfEvaluationOrder) {
    RngStream rr(5, streams::public_randomness);
    const auto r = PublicRandomness::sample(kTiny.n, kTiny.ell, rr);
    DualGame g4(GameId::G4, kTiny, r, sub("honest"), 5);
    DualGame g5(GameId::G5, kTiny, r, sub("honest"), 5);
    RngStream rng(6);
    const Block in{Gf2Vec::random(kTiny.n, rng), Gf2Vec::random(kTiny.n, rng)};
    // The RF answer is the construction over the tape in both games.
    std::vector<Gf2Vec> xs{in.first, in.second};
    for (std::size_t i = 1; i <= kTiny.ell; ++i) xs.push_back(xs[i - 1] ^ g4.tape(i, xs[i]));
    const Block expect{xs[kTiny.ell], xs[kTiny.ell + 1]};
    EXPECT_EQ(g4.p_forward(in), expect);
    EXPECT_EQ(g5.p_forward(in), expect);
    EXPECT_EQ(g5.p_inverse(expect), in);
    // Table entries agree with the tape whichever side defined them.
    for (std::size_t i = 1; i <= kTiny.ell; ++i) {
        EXPECT_EQ(g4.m_tables().find(i, xs[i])->y, g5.tape(i, xs[i])) << i;
        EXPECT_EQ(g5.m_tables().find(i, xs[i])->y, g5.tape(i, xs[i])) << i;
    }
}
