#pragma once

// Bit-packed vectors and matrices over GF(2).
//
// Bit i of a vector lives in word i / 64 at position i % 64. Unused high bits
// of the last word are always zero, so word-wise comparison and hashing agree
// with bitwise equality.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "crooked/rng.hpp"

namespace crooked {

inline constexpr std::size_t kMaxGf2Bits = 4096;

class Gf2Vec {
public:
    Gf2Vec() = default;
    explicit Gf2Vec(std::size_t n);

    static Gf2Vec zero(std::size_t n) { return Gf2Vec(n); }
    static Gf2Vec unit(std::size_t n, std::size_t i);
    // Characters '0' / '1'; character k becomes bit k.
    static Gf2Vec from_bits(std::string_view bits);
    // Bit i of `value` becomes bit i of the vector (n <= 64).
    static Gf2Vec from_u64(std::size_t n, std::uint64_t value);
    // ceil(n/4) hex digits; digit k holds bits 4k..4k+3 with bit 4k as its MSB.
    static Gf2Vec from_hex(std::size_t n, std::string_view hex);
    static Gf2Vec random(std::size_t n, RngStream& rng);

    [[nodiscard]] std::size_t size() const noexcept { return size_; }
    [[nodiscard]] bool get(std::size_t i) const;
    void set(std::size_t i, bool value);
    void flip(std::size_t i);

    [[nodiscard]] bool is_zero() const noexcept;
    [[nodiscard]] std::size_t popcount() const noexcept;
    // True when bits 0..k-1 are all zero.
    [[nodiscard]] bool has_zero_prefix(std::size_t k) const;
    [[nodiscard]] Gf2Vec prefix(std::size_t k) const;
    // Parity of the bitwise AND.
    [[nodiscard]] bool dot(const Gf2Vec& other) const;

    Gf2Vec& operator^=(const Gf2Vec& other);
    friend Gf2Vec operator^(Gf2Vec lhs, const Gf2Vec& rhs) { return lhs ^= rhs; }

    [[nodiscard]] std::uint64_t to_u64() const;
    [[nodiscard]] std::string to_hex() const;
    [[nodiscard]] std::string to_bits() const;

    [[nodiscard]] std::span<const std::uint64_t> words() const noexcept { return words_; }
    [[nodiscard]] std::size_t hash() const noexcept;

    friend bool operator==(const Gf2Vec&, const Gf2Vec&) = default;
    friend std::strong_ordering operator<=>(const Gf2Vec& a, const Gf2Vec& b) noexcept;

private:
    void check_index(std::size_t i) const;
    void check_same_size(const Gf2Vec& other) const;

    std::size_t size_ = 0;
    std::vector<std::uint64_t> words_;
};

struct Gf2VecHash {
    std::size_t operator()(const Gf2Vec& v) const noexcept { return v.hash(); }
};

class Gf2Mat {
public:
    Gf2Mat() = default;
    Gf2Mat(std::size_t n_rows, std::size_t n_cols);

    static Gf2Mat identity(std::size_t n);
    static Gf2Mat random(std::size_t n_rows, std::size_t n_cols, RngStream& rng);
    // Rows must share one length; an empty list needs the explicit overload.
    static Gf2Mat stack(std::span<const Gf2Vec> rows);
    static Gf2Mat stack(std::span<const Gf2Vec> rows, std::size_t n_cols);

    [[nodiscard]] std::size_t n_rows() const noexcept { return rows_.size(); }
    [[nodiscard]] std::size_t n_cols() const noexcept { return cols_; }
    [[nodiscard]] const Gf2Vec& row(std::size_t r) const;
    [[nodiscard]] std::span<const Gf2Vec> rows() const noexcept { return rows_; }
    [[nodiscard]] bool at(std::size_t r, std::size_t c) const;
    void set(std::size_t r, std::size_t c, bool value);

    [[nodiscard]] Gf2Vec operator*(const Gf2Vec& v) const;
    [[nodiscard]] Gf2Mat operator*(const Gf2Mat& other) const;
    [[nodiscard]] Gf2Mat transpose() const;
    [[nodiscard]] Gf2Mat top_rows(std::size_t k) const;

    [[nodiscard]] std::size_t rank() const;
    [[nodiscard]] bool is_invertible() const { return n_rows() == n_cols() && rank() == n_rows(); }
    // Any x with A x = b; free variables are zero. Empty when inconsistent.
    [[nodiscard]] std::optional<Gf2Vec> solve(const Gf2Vec& b) const;
    [[nodiscard]] std::optional<Gf2Mat> inverse() const;

    friend bool operator==(const Gf2Mat&, const Gf2Mat&) = default;

private:
    std::size_t cols_ = 0;
    std::vector<Gf2Vec> rows_;
};

[[nodiscard]] inline Gf2Vec mat_vec_mul(const Gf2Mat& m, const Gf2Vec& v) { return m * v; }
[[nodiscard]] inline std::size_t rank(const Gf2Mat& m) { return m.rank(); }
[[nodiscard]] inline std::optional<Gf2Vec> solve(const Gf2Mat& a, const Gf2Vec& b) { return a.solve(b); }
[[nodiscard]] inline Gf2Mat stack(std::span<const Gf2Vec> rows) { return Gf2Mat::stack(rows); }

// Uniform element of GL(n, F2), by rejection sampling of uniform matrices.
[[nodiscard]] Gf2Mat sample_invertible(std::size_t n, RngStream& rng);

}  // namespace crooked

template <>
struct std::hash<crooked::Gf2Vec> {
    std::size_t operator()(const crooked::Gf2Vec& v) const noexcept { return v.hash(); }
};
