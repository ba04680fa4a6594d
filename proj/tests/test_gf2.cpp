#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <vector>

#include "crooked/errors.hpp"
#include "crooked/gf2.hpp"

using namespace crooked;

namespace {

using IntMat = std::vector<std::vector<int>>;

IntMat to_int(const Gf2Mat& m) {
    IntMat out(m.n_rows(), std::vector<int>(m.n_cols()));
    for (std::size_t r = 0; r < m.n_rows(); ++r)
        for (std::size_t c = 0; c < m.n_cols(); ++c) out[r][c] = m.at(r, c) ? 1 : 0;
    return out;
}

// Plain elimination over ints mod 2, independent of the packed implementation.
std::size_t int_rank(IntMat m) {
    std::size_t rank = 0;
    const std::size_t cols = m.empty() ? 0 : m[0].size();
    for (std::size_t c = 0; c < cols && rank < m.size(); ++c) {
        std::size_t piv = rank;
        while (piv < m.size() && m[piv][c] == 0) ++piv;
        if (piv == m.size()) continue;
        std::swap(m[piv], m[rank]);
        for (std::size_t r = 0; r < m.size(); ++r)
            if (r != rank && m[r][c])
                for (std::size_t k = 0; k < cols; ++k) m[r][k] ^= m[rank][k];
        ++rank;
    }
    return rank;
}

Gf2Mat from_rows(std::initializer_list<const char*> rows) {
    std::vector<Gf2Vec> v;
    for (const char* r : rows) v.push_back(Gf2Vec::from_bits(r));
    return Gf2Mat::stack(v);
}

}  // namespace

TEST(Gf2Vec, BitsHexAndU64RoundTrip) {
    RngStream rng(11);
    for (std::size_t n : {1u, 7u, 20u, 63u, 64u, 65u, 130u}) {
        const Gf2Vec v = Gf2Vec::random(n, rng);
        EXPECT_EQ(Gf2Vec::from_hex(n, v.to_hex()), v);
        EXPECT_EQ(Gf2Vec::from_bits(v.to_bits()), v);
        if (n <= 64) {
            EXPECT_EQ(Gf2Vec::from_u64(n, v.to_u64()), v);
        }
    }
}

TEST(Gf2Vec, HexDigitHoldsBitsMsbFirst) {
    const Gf2Vec v = Gf2Vec::from_hex(8, "81");
    EXPECT_EQ(v.to_bits(), "10000001");
    EXPECT_THROW(Gf2Vec::from_hex(6, "ff"), FormatError);  // padding bits set
    EXPECT_THROW(Gf2Vec::from_hex(8, "g0"), FormatError);
    EXPECT_THROW(Gf2Vec::from_hex(8, "0"), FormatError);
}

TEST(Gf2Vec, XorDotPrefix) {
    const Gf2Vec a = Gf2Vec::from_bits("1100");
    const Gf2Vec b = Gf2Vec::from_bits("1010");
    EXPECT_EQ((a ^ b).to_bits(), "0110");
    EXPECT_TRUE(a.dot(b));
    EXPECT_FALSE(a.dot(Gf2Vec::from_bits("1100")));
    EXPECT_TRUE(Gf2Vec::from_bits("0010").has_zero_prefix(2));
    EXPECT_FALSE(Gf2Vec::from_bits("0010").has_zero_prefix(3));
    EXPECT_EQ(a.popcount(), 2u);
    EXPECT_THROW((void)(a ^ Gf2Vec(5)), DimensionError);
    EXPECT_THROW((void)a.get(4), IndexError);
    EXPECT_THROW(Gf2Vec(kMaxGf2Bits + 1), DimensionError);
}

TEST(Gf2Mat, IdentityTimesVectorIsVector) {
    const Gf2Mat id = Gf2Mat::identity(4);
    for (std::uint64_t x = 0; x < 16; ++x) EXPECT_EQ(id * Gf2Vec::from_u64(4, x), Gf2Vec::from_u64(4, x));
}

TEST(Gf2Mat, AnythingTimesZeroIsZero) {
    RngStream rng(3);
    for (int k = 0; k < 20; ++k) EXPECT_TRUE((Gf2Mat::random(5, 9, rng) * Gf2Vec(9)).is_zero());
}

TEST(Gf2Mat, HandWorkedProduct) {
    const Gf2Mat m = from_rows({"110", "011", "101"});
    EXPECT_EQ(mat_vec_mul(m, Gf2Vec::from_bits("101")), Gf2Vec::from_bits("110"));
}

TEST(Gf2Mat, ProductMatchesIntegerArithmetic) {
    RngStream rng(5);
    for (int k = 0; k < 50; ++k) {
        const Gf2Mat m = Gf2Mat::random(7, 70, rng);
        const Gf2Vec v = Gf2Vec::random(70, rng);
        for (std::size_t r = 0; r < 7; ++r) {
            int acc = 0;
            for (std::size_t c = 0; c < 70; ++c) acc ^= (m.at(r, c) && v.get(c)) ? 1 : 0;
            EXPECT_EQ((m * v).get(r), acc == 1);
        }
    }
}

TEST(Gf2Mat, RankSmallCases) {
    EXPECT_EQ(rank(Gf2Mat::identity(5)), 5u);
    EXPECT_EQ(rank(Gf2Mat(3, 7)), 0u);
    EXPECT_EQ(rank(from_rows({"0110101", "0110101"})), 1u);
}

TEST(Gf2Mat, RankMatchesIndependentElimination) {
    RngStream rng(17);
    for (int k = 0; k < 200; ++k) {
        const std::size_t rows = 1 + rng.uniform(12);
        const std::size_t cols = 1 + rng.uniform(80);
        std::vector<Gf2Vec> v;
        for (std::size_t r = 0; r < rows; ++r) {
            // Mix in duplicated and summed rows so deficient ranks occur.
            if (r >= 2 && rng.uniform(3) == 0)
                v.push_back(v[r - 1] ^ v[r - 2]);
            else
                v.push_back(Gf2Vec::random(cols, rng));
        }
        const Gf2Mat m = stack(v);
        EXPECT_EQ(m.rank(), int_rank(to_int(m)));
    }
}

TEST(Gf2Mat, StackCases) {
    const std::vector<Gf2Vec> copies(4, Gf2Vec::unit(6, 0));
    EXPECT_EQ(stack(copies).rank(), 1u);
    std::vector<Gf2Vec> unit_rows;
    for (std::size_t i = 0; i < 6; ++i) unit_rows.push_back(Gf2Vec::unit(6, i));
    EXPECT_EQ(stack(unit_rows), Gf2Mat::identity(6));
    EXPECT_THROW(Gf2Mat::stack(std::vector<Gf2Vec>{}), DimensionError);
    EXPECT_THROW(Gf2Mat::stack(std::vector<Gf2Vec>{Gf2Vec(3), Gf2Vec(4)}), DimensionError);
    EXPECT_EQ(Gf2Mat::stack(std::vector<Gf2Vec>{}, 5).n_cols(), 5u);
}

TEST(Gf2Mat, SolveIdentity) {
    RngStream rng(2);
    const Gf2Vec b = Gf2Vec::random(4, rng);
    EXPECT_EQ(solve(Gf2Mat::identity(4), b), b);
}

TEST(Gf2Mat, SolveInconsistentZeroRow) {
    const Gf2Mat a = from_rows({"1000", "0000", "0010"});
    EXPECT_FALSE(a.solve(Gf2Vec::from_bits("010")).has_value());
    EXPECT_TRUE(a.solve(Gf2Vec::from_bits("101")).has_value());
}

TEST(Gf2Mat, SolveFullRowRankSystems) {
    RngStream rng(23);
    int solved = 0;
    for (int k = 0; k < 100; ++k) {
        const Gf2Mat a = Gf2Mat::random(6, 10, rng);
        if (a.rank() != 6) continue;
        const Gf2Vec b = Gf2Vec::random(6, rng);
        const auto x = a.solve(b);
        ASSERT_TRUE(x.has_value());
        EXPECT_EQ(a * *x, b);
        ++solved;
    }
    EXPECT_GT(solved, 50);
}

TEST(Gf2Mat, SolvedSystemsAreConsistentWhenRankDeficient) {
    RngStream rng(29);
    for (int k = 0; k < 200; ++k) {
        const Gf2Mat a = Gf2Mat::random(8, 5, rng);
        const Gf2Vec b = Gf2Vec::random(8, rng);
        const auto x = a.solve(b);
        // Consistent iff appending b does not raise the rank.
        std::vector<Gf2Vec> aug;
        for (std::size_t r = 0; r < 8; ++r) {
            Gf2Vec row(6);
            for (std::size_t c = 0; c < 5; ++c) row.set(c, a.at(r, c));
            row.set(5, b.get(r));
            aug.push_back(row);
        }
        EXPECT_EQ(x.has_value(), int_rank(to_int(stack(aug))) == a.rank());
        if (x) {
            EXPECT_EQ(a * *x, b);
        }
    }
}

TEST(Gf2Mat, InverseRoundTrip) {
    RngStream rng(31);
    for (int k = 0; k < 50; ++k) {
        const Gf2Mat a = sample_invertible(16, rng);
        const auto inv = a.inverse();
        ASSERT_TRUE(inv.has_value());
        EXPECT_EQ(a * *inv, Gf2Mat::identity(16));
    }
    EXPECT_FALSE(Gf2Mat(3, 3).inverse().has_value());
}

TEST(SampleInvertible, OneByOneIsOne) {
    RngStream rng(1);
    for (int k = 0; k < 20; ++k) EXPECT_EQ(sample_invertible(1, rng), Gf2Mat::identity(1));
    EXPECT_THROW(sample_invertible(0, rng), ParameterError);
}

TEST(SampleInvertible, UniformOverGl2) {
    // Brute-force enumeration of GL(2, F2).
    std::map<std::uint64_t, int> counts;
    for (std::uint64_t m = 0; m < 16; ++m) {
        const bool a = m & 1, b = m & 2, c = m & 4, d = m & 8;
        if ((a && d) != (b && c)) counts[m] = 0;
    }
    ASSERT_EQ(counts.size(), 6u);
    RngStream rng(41);
    const int samples = 6000;
    for (int k = 0; k < samples; ++k) {
        const Gf2Mat g = sample_invertible(2, rng);
        const std::uint64_t key = g.at(0, 0) | g.at(0, 1) << 1 | g.at(1, 0) << 2 | g.at(1, 1) << 3;
        ASSERT_TRUE(counts.count(key));
        ++counts[key];
    }
    const double sigma = std::sqrt(samples * (1.0 / 6) * (5.0 / 6));
    for (const auto& [key, c] : counts) EXPECT_LE(std::abs(c - samples / 6.0), 3 * sigma) << key;
}

TEST(SampleInvertible, FullRankAtEightBits) {
    RngStream rng(43);
    for (int k = 0; k < 10000; ++k) ASSERT_EQ(sample_invertible(8, rng).rank(), 8u);
}

TEST(Rng, StreamsAreReproducibleAndDistinct) {
    RngStream a(9, 2), b(9, 2), c(9, 3);
    for (int k = 0; k < 100; ++k) {
        const auto x = a.next_u64();
        EXPECT_EQ(x, b.next_u64());
        EXPECT_NE(x, c.next_u64());
    }
    EXPECT_NE(trial_seed(1, 0), trial_seed(1, 1));
    EXPECT_EQ(trial_seed(1, 5), trial_seed(1, 5));
}
