#include <gtest/gtest.h>

#include <memory>
#include <sstream>

#include "crooked/errors.hpp"
#include "crooked/simulator.hpp"

using namespace crooked;

namespace {

const ConstructionParams kTiny = ConstructionParams::tiny();

PublicRandomness draw_r(const ConstructionParams& p, std::uint64_t seed) {
    RngStream rng(seed, streams::public_randomness);
    return PublicRandomness::sample(p.n, p.ell, rng);
}

std::unique_ptr<Simulator> game1(const std::string& subverter = "honest", std::uint64_t seed = 1, bool record = true) {
    return make_game1(kTiny, draw_r(kTiny, seed), builtin_subverter(subverter, kTiny.n), seed, record);
}

class TableView final : public CfOracle {
public:
    explicit TableView(const CfTable& t) : t_(t) {}
    Gf2Vec cf(std::size_t round, const Gf2Vec& x) override {
        const auto* e = t_.find(round, x);
        if (!e) throw NotEvaluatedError("missing");
        return e->y;
    }

private:
    const CfTable& t_;
};

// Defines x_s, x_{s+1}, x_{s+2} in S with the chain relation at s+1.
Chain define_window(Simulator& sim, std::size_t s, RngStream& rng) {
    const Gf2Vec a = Gf2Vec::random(kTiny.n, rng), b = Gf2Vec::random(kTiny.n, rng);
    const Gf2Vec y = sim.cf_inner(s + 1, b);
    sim.cf_inner(s, a);
    const Gf2Vec c = a ^ y;
    sim.cf_inner(s + 2, c);
    return {s, {a, b, c}};
}

}  // namespace

TEST(Simulator, RepeatedQueryIsStable) {
    auto sim = game1();
    const Gf2Vec x = Gf2Vec::from_u64(20, 77);
    const Gf2Vec y = sim->cf(4, x);
    EXPECT_EQ(sim->cf(4, x), y);
    EXPECT_EQ(sim->tables().size(), 1u);
}

TEST(Simulator, IsolatedQueriesNeverEnqueue) {
    auto sim = game1();
    RngStream rng(2);
    for (int k = 0; k < 30; ++k)
        for (std::size_t i : {1u, 3u, 5u}) sim->cf(i, Gf2Vec::random(20, rng));
    EXPECT_EQ(sim->transcript().count(EventKind::Enqueue), 0u);
    EXPECT_TRUE(sim->chains().empty());
}

TEST(Simulator, ConsistentWindowEnqueuesOnce) {
    auto sim = game1();
    RngStream rng(3);
    const Chain c = define_window(*sim, 1, rng);
    ASSERT_EQ(sim->queue().size(), 1u);
    EXPECT_EQ(sim->queue().front(), c);
}

TEST(Simulator, BrokenRelationIsNotEnqueued) {
    auto sim = game1();
    RngStream rng(4);
    const Gf2Vec a = Gf2Vec::random(20, rng), b = Gf2Vec::random(20, rng);
    const Gf2Vec y = sim->cf_inner(2, b);
    sim->cf_inner(1, a);
    Gf2Vec c = a ^ y;
    c.flip(0);
    sim->cf_inner(3, c);
    EXPECT_TRUE(sim->queue().empty());
    EXPECT_EQ(sim->enqueue_new_chains(3, c), 0u);
    EXPECT_EQ(sim->enqueue_new_chains(3, Gf2Vec(20)), 0u);  // undefined point
}

TEST(Simulator, HonestWindowPlansOnceWithLowAdaptPosition) {
    auto sim = game1();
    RngStream rng(5);
    const Chain c = define_window(*sim, 1, rng);
    const auto plan = sim->check(c);
    ASSERT_TRUE(plan.has_value());
    EXPECT_EQ(plan->u, kTiny.u_lo);
    EXPECT_EQ(plan->xs, c.values[0]);
    EXPECT_EQ(plan->xs1, c.values[1]);
    EXPECT_EQ(sim->honesty_checked().size(), 2u);
    EXPECT_FALSE(sim->check(c).has_value());
}

TEST(Simulator, MiddleWindowUsesHighAdaptPosition) {
    auto sim = game1();
    RngStream rng(6);
    const Chain c = define_window(*sim, 8, rng);  // rounds 8..10 touch the band
    const auto plan = sim->check(c);
    ASSERT_TRUE(plan.has_value());
    EXPECT_EQ(plan->u, kTiny.u_hi);
}

TEST(Simulator, DishonestMemberBlocksThePlan) {
    auto sim = game1("round_dishonest:2");
    RngStream rng(7);
    const Chain c = define_window(*sim, 1, rng);
    EXPECT_FALSE(sim->check(c).has_value());
}

TEST(Simulator, CompletedChainIsDiscardedAtCheck) {
    auto sim = game1();
    RngStream rng(8);
    const Chain c = define_window(*sim, 1, rng);
    sim->drain();
    ASSERT_EQ(sim->chains().size(), 1u);
    EXPECT_FALSE(sim->check(c).has_value());
    EXPECT_FALSE(sim->check({2, {c.values[1], c.values[2], sim->chains()[0].xs[4]}}).has_value());
}

TEST(Simulator, CompletionMatchesTheIdealObject) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        auto sim = game1("honest", seed);
        RngStream rng(seed + 100);
        define_window(*sim, 1 + rng.uniform(18), rng);
        sim->drain();
        ASSERT_EQ(sim->chains().size(), 1u);
        const ChainRecord& rec = sim->chains()[0];
        TableView view(sim->tables());
        for (std::size_t i = 1; i <= kTiny.ell; ++i)
            EXPECT_EQ(rec.xs[i + 1], rec.xs[i - 1] ^ subverted_cf(view, sim->randomness(), sim->program(), i, rec.xs[i]));
        const Block out = sim->ideal().forward({rec.xs[0], rec.xs[1]});
        EXPECT_EQ(out, Block(rec.xs[kTiny.ell], rec.xs[kTiny.ell + 1]));
        EXPECT_TRUE(sim->verify_completed_chains());
        EXPECT_EQ(sim->tables().size(), kTiny.ell);
    }
}

TEST(Simulator, PredefinedAdaptSlotAbortsWithFreshness) {
    auto sim = game1();
    RngStream rng(9);
    const std::size_t u = kTiny.u_lo;
    std::vector<Gf2Vec> xs(kTiny.ell + 2, Gf2Vec(20));
    xs[1] = Gf2Vec::random(20, rng);
    xs[2] = Gf2Vec::random(20, rng);
    for (std::size_t p = 2; p <= u - 1; ++p) xs[p + 1] = xs[p - 1] ^ sim->cf_inner(p, xs[p]);
    sim->cf_inner(u, xs[u]);
    try {
        sim->complete({1, xs[1], xs[2], u});
        FAIL() << "expected an abort";
    } catch (const SimAbort& a) {
        EXPECT_EQ(a.kind, AbortKind::Freshness);
        EXPECT_EQ(a.round, u);
    }
}

TEST(Simulator, DishonestAdaptSlotAbortsWithHonesty) {
    auto sim = game1("round_dishonest:12");
    RngStream rng(10);
    const Gf2Vec a = Gf2Vec::random(20, rng), b = Gf2Vec::random(20, rng);
    sim->cf(1, a);
    const Gf2Vec y = sim->cf(2, b);
    try {
        sim->cf(3, a ^ y);
        FAIL() << "expected an abort";
    } catch (const SimAbort& e) {
        EXPECT_EQ(e.kind, AbortKind::Honesty);
        EXPECT_EQ(e.round, 12u);
    }
    ASSERT_TRUE(sim->aborted().has_value());
    EXPECT_THROW(sim->cf(1, a), HarnessError);
    EXPECT_EQ(sim->transcript().count(EventKind::Abort), 1u);
}

TEST(Simulator, PermutationQueriesRoundTrip) {
    auto sim = game1();
    RngStream rng(11);
    for (int k = 0; k < 20; ++k) {
        const Block in{Gf2Vec::random(20, rng), Gf2Vec::random(20, rng)};
        const Block out = sim->p_forward(in);
        EXPECT_EQ(sim->p_forward(in), out);
        EXPECT_EQ(sim->p_inverse(out), in);
    }
    EXPECT_EQ(sim->external_queries(), 60u);
    EXPECT_EQ(sim->size_series().size(), 60u);
}

TEST(Simulator, TableCapRaisesHarnessError) {
    auto sim = game1();
    sim->set_table_cap(3);
    RngStream rng(12);
    EXPECT_THROW(
        {
            for (int k = 0; k < 10; ++k) sim->cf(1, Gf2Vec::random(20, rng));
        },
        HarnessError);
}

TEST(Simulator, TranscriptIsJsonLines) {
    auto sim = game1();
    RngStream rng(13);
    define_window(*sim, 2, rng);
    sim->drain();
    sim->p_forward({Gf2Vec(20), Gf2Vec(20)});
    std::istringstream is(sim->transcript().to_jsonl({{"game_id", "G1"}}));
    std::string line;
    std::size_t seq = 0;
    while (std::getline(is, line)) {
        const auto j = nlohmann::json::parse(line);
        EXPECT_EQ(j.at("seq").get<std::size_t>(), seq++);
        EXPECT_EQ(j.at("game_id"), "G1");
        EXPECT_TRUE(j.contains("event"));
    }
    EXPECT_EQ(seq, sim->transcript().events().size());
    EXPECT_EQ(sim->transcript().count(EventKind::Adapted), 1u);
}

TEST(CfTable, InsertAssignAndDump) {
    CfTable t(3);
    const Gf2Vec x = Gf2Vec::from_u64(4, 3);
    EXPECT_TRUE(t.insert(2, x, Gf2Vec::from_u64(4, 1), 1));
    EXPECT_FALSE(t.insert(2, x, Gf2Vec::from_u64(4, 2), 2));
    EXPECT_EQ(t.find(2, x)->y, Gf2Vec::from_u64(4, 1));
    EXPECT_FALSE(t.assign(2, x, Gf2Vec::from_u64(4, 1), 3));
    EXPECT_TRUE(t.assign(2, x, Gf2Vec::from_u64(4, 5), 4));
    EXPECT_EQ(t.size(), 1u);
    EXPECT_EQ(t.dump(), "2," + x.to_hex() + "," + Gf2Vec::from_u64(4, 5).to_hex() + "\n");
}
