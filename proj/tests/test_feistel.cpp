#include <gtest/gtest.h>

#include <memory>

#include "crooked/errors.hpp"
#include "crooked/feistel.hpp"

using namespace crooked;

namespace {

struct Setup {
    PublicRandomness r;
    SubvertedOracle o;
};

Setup make(std::size_t n, std::size_t ell, std::uint64_t seed, ProgramPtr prog) {
    RngStream rr(seed, streams::public_randomness);
    return {PublicRandomness::sample(n, ell, rr), SubvertedOracle(n, ell, RngStream(seed, streams::round_functions), prog)};
}

}  // namespace

TEST(PublicRandomness, EncodeDecodeRoundTrip) {
    RngStream rng(4);
    const auto r = PublicRandomness::sample(24, 6, rng);
    for (std::size_t i = 1; i <= 6; ++i) {
        EXPECT_TRUE(r.layer(i).a.is_invertible());
        const Gf2Vec x = Gf2Vec::random(24, rng);
        EXPECT_EQ(r.decode(i, r.encode(i, x)), x);
    }
    EXPECT_THROW((void)r.layer(0), IndexError);
    EXPECT_THROW((void)r.layer(7), IndexError);
}

TEST(PublicRandomness, RejectsSingularLayer) {
    std::vector<std::pair<Gf2Mat, Gf2Vec>> pairs{{Gf2Mat(4, 4), Gf2Vec(4)}};
    EXPECT_THROW(PublicRandomness::from_pairs(pairs), ParameterError);
}

TEST(Construction, CfIsFAtTheEncodedPoint) {
    auto s = make(16, 5, 3, std::make_shared<HonestProgram>());
    RngStream rng(5);
    for (int k = 0; k < 50; ++k) {
        const std::size_t i = 1 + rng.uniform(5);
        const Gf2Vec x = Gf2Vec::random(16, rng);
        const Gf2Vec enc = mat_vec_mul(s.r.layer(i).a, x) ^ s.r.layer(i).b;
        EXPECT_EQ(cf(s.o, s.r, i, x), s.o.query_f(i, enc));
        EXPECT_EQ(cf(s.o, s.r, i, x), cf(s.o, s.r, i, x));
    }
}

TEST(Construction, IdentityEncodingHonestIsRawF) {
    const auto r = PublicRandomness::identity(12, 3);
    SubvertedOracle o(12, 3, RngStream(1), std::make_shared<HonestProgram>());
    RngStream rng(2);
    for (int k = 0; k < 30; ++k) {
        const Gf2Vec x = Gf2Vec::random(12, rng);
        EXPECT_EQ(cf_tilde(o, r, 2, x), o.query_f(2, x));
    }
}

TEST(Construction, TildeSubvertsAtTheEncodedPoint) {
    auto s = make(16, 2, 8, std::make_shared<PrefixZeroProgram>(2));
    RngStream rng(6);
    for (int k = 0; k < 200; ++k) {
        const Gf2Vec x = Gf2Vec::random(16, rng);
        const bool trig = s.r.encode(1, x).has_zero_prefix(2);
        EXPECT_EQ(cf_tilde(s.o, s.r, 1, x).is_zero(), trig || cf(s.o, s.r, 1, x).is_zero());
    }
}

TEST(Construction, ZeroSubverterAlternates) {
    RngStream rng(9);
    for (std::size_t ell : {4u, 5u}) {
        auto s = make(10, ell, 2, std::make_shared<ZeroProgram>());
        const Gf2Vec x0 = Gf2Vec::random(10, rng), x1 = Gf2Vec::random(10, rng);
        const auto out = evaluate(s.o, s.r, x0, x1);
        if (ell % 2 == 0) {
            EXPECT_EQ(out, std::make_pair(x0, x1));
            EXPECT_EQ(invert(s.o, s.r, x0, x1), std::make_pair(x0, x1));
        } else {
            EXPECT_EQ(out, std::make_pair(x1, x0));
        }
    }
}

TEST(Construction, OneRoundUnrolled) {
    auto s = make(12, 1, 4, std::make_shared<HonestProgram>());
    RngStream rng(10);
    const Gf2Vec x0 = Gf2Vec::random(12, rng), x1 = Gf2Vec::random(12, rng);
    const Gf2Vec f = s.o.query_f(1, s.r.layer(1).a * x1 ^ s.r.layer(1).b);
    EXPECT_EQ(evaluate(s.o, s.r, x0, x1), std::make_pair(x1, x0 ^ f));
}

TEST(Construction, TwoRoundInverseUnrolled) {
    auto s = make(12, 2, 5, std::make_shared<HonestProgram>());
    RngStream rng(11);
    const Gf2Vec x2 = Gf2Vec::random(12, rng), x3 = Gf2Vec::random(12, rng);
    const Gf2Vec x1 = x3 ^ s.o.query_f(2, s.r.layer(2).a * x2 ^ s.r.layer(2).b);
    const Gf2Vec x0 = x2 ^ s.o.query_f(1, s.r.layer(1).a * x1 ^ s.r.layer(1).b);
    EXPECT_EQ(invert(s.o, s.r, x2, x3), std::make_pair(x0, x1));
}

TEST(Construction, InvertUndoesEvaluate) {
    for (const char* kind : {"honest", "prefix_zero:2", "round_dishonest:3"}) {
        auto s = make(16, 9, 12, builtin_subverter(kind, 16));
        RngStream rng(13);
        for (int k = 0; k < 100; ++k) {
            const Gf2Vec x0 = Gf2Vec::random(16, rng), x1 = Gf2Vec::random(16, rng);
            const auto out = evaluate(s.o, s.r, x0, x1);
            EXPECT_EQ(invert(s.o, s.r, out.first, out.second), std::make_pair(x0, x1)) << kind;
        }
    }
}

TEST(Construction, TraceSatisfiesRecurrence) {
    auto s = make(16, 7, 14, builtin_subverter("prefix_zero:1", 16));
    RngStream rng(15);
    const Gf2Vec x0 = Gf2Vec::random(16, rng), x1 = Gf2Vec::random(16, rng);
    const auto xs = evaluate_trace(s.o, s.r, x0, x1);
    ASSERT_EQ(xs.size(), 9u);
    for (std::size_t i = 1; i <= 7; ++i) EXPECT_EQ(xs[i + 1], xs[i - 1] ^ cf_tilde(s.o, s.r, i, xs[i]));
    EXPECT_EQ(evaluate(s.o, s.r, x0, x1), std::make_pair(xs[7], xs[8]));
    FeistelState st{x0, x1, 0};
    for (std::size_t i = 1; i <= 7; ++i) step(s.o, s.r, st);
    EXPECT_EQ(st.x_prev, xs[7]);
    EXPECT_EQ(st.x_cur, xs[8]);
}

TEST(Params, EightNProfile) {
    const auto p = ConstructionParams::paper_8n(20);
    EXPECT_EQ(p.ell, 160u);
    EXPECT_EQ(p.u_lo, 80u);
    EXPECT_EQ(p.u_hi, 140u);
    EXPECT_EQ(p.mid_lo, 60u);
    EXPECT_EQ(p.mid_hi, 100u);
    EXPECT_EQ(p.w, 2u);
    EXPECT_DOUBLE_EQ(p.efficiency_bound(3, 2), (88.0 * 2 + 1) * 3);
    EXPECT_EQ(ConstructionParams::paper_8n(30).w, 3u);
}

TEST(Params, TinyAndParse) {
    const auto t = ConstructionParams::tiny();
    const auto p = ConstructionParams::parse(20, "custom:24,3,12,21,9,15");
    EXPECT_EQ(p.ell, t.ell);
    EXPECT_EQ(p.profile_string(), "custom:24,3,12,21,9,15");
    EXPECT_EQ(ConstructionParams::parse(5, "8n").ell, 40u);
    EXPECT_THROW(ConstructionParams::parse(20, "custom:24,3"), ParameterError);
    EXPECT_THROW(ConstructionParams::parse(20, "custom:24,3,x,21,9,15"), ParameterError);
    EXPECT_THROW(ConstructionParams::parse(20, "huge"), ParameterError);
    EXPECT_THROW(ConstructionParams::parse(20, "custom:24,3,12,23,9,15"), ParameterError);  // u_hi > l - 2
    EXPECT_THROW(ConstructionParams::parse(20, "eps", 0.7), ParameterError);
}

TEST(Params, AdaptPositionByWindow) {
    const auto p = ConstructionParams::tiny();  // w = 3, mid = [9, 15]
    EXPECT_EQ(p.adapt_position(1), p.u_lo);     // window 1..3
    EXPECT_EQ(p.adapt_position(6), p.u_lo);     // window 6..8
    EXPECT_EQ(p.adapt_position(7), p.u_hi);     // touches 9
    EXPECT_EQ(p.adapt_position(15), p.u_hi);
    EXPECT_EQ(p.adapt_position(16), p.u_lo);    // past the band
}
