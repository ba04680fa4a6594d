#include "crooked/gf2.hpp"

#include <algorithm>
#include <bit>
#include <string>

#include "crooked/errors.hpp"

namespace crooked {

namespace {

std::size_t words_for(std::size_t n) { return (n + 63) / 64; }

void check_width(std::size_t n) {
    if (n > kMaxGf2Bits)
        throw DimensionError("gf2 width " + std::to_string(n) + " exceeds " + std::to_string(kMaxGf2Bits));
}

int hex_value(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

}  // namespace

Gf2Vec::Gf2Vec(std::size_t n) : size_(n) {
    check_width(n);
    words_.assign(words_for(n), 0);
}

Gf2Vec Gf2Vec::unit(std::size_t n, std::size_t i) {
    Gf2Vec v(n);
    v.set(i, true);
    return v;
}

Gf2Vec Gf2Vec::from_bits(std::string_view bits) {
    Gf2Vec v(bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i) {
        if (bits[i] == '1')
            v.set(i, true);
        else if (bits[i] != '0')
            throw FormatError("bit string contains '" + std::string(1, bits[i]) + "'");
    }
    return v;
}

Gf2Vec Gf2Vec::from_u64(std::size_t n, std::uint64_t value) {
    if (n > 64) throw DimensionError("from_u64 needs n <= 64");
    Gf2Vec v(n);
    if (n > 0) v.words_[0] = n == 64 ? value : value & ((std::uint64_t{1} << n) - 1);
    return v;
}

Gf2Vec Gf2Vec::from_hex(std::size_t n, std::string_view hex) {
    if (hex.size() != (n + 3) / 4)
        throw FormatError("hex string of length " + std::to_string(hex.size()) + " for " + std::to_string(n) + " bits");
    Gf2Vec v(n);
    for (std::size_t k = 0; k < hex.size(); ++k) {
        const int d = hex_value(hex[k]);
        if (d < 0) throw FormatError("bad hex digit '" + std::string(1, hex[k]) + "'");
        for (std::size_t j = 0; j < 4; ++j) {
            const bool bit = (d >> (3 - j)) & 1;
            const std::size_t i = 4 * k + j;
            if (i < n)
                v.set(i, bit);
            else if (bit)
                throw FormatError("hex string sets padding bits");
        }
    }
    return v;
}

Gf2Vec Gf2Vec::random(std::size_t n, RngStream& rng) {
    Gf2Vec v(n);
    for (auto& w : v.words_) w = rng.next_u64();
    if (n % 64 != 0) v.words_.back() &= (std::uint64_t{1} << (n % 64)) - 1;
    return v;
}

void Gf2Vec::check_index(std::size_t i) const {
    if (i >= size_) throw IndexError("bit " + std::to_string(i) + " of a " + std::to_string(size_) + "-bit vector");
}

void Gf2Vec::check_same_size(const Gf2Vec& other) const {
    if (size_ != other.size_)
        throw DimensionError("vector sizes " + std::to_string(size_) + " and " + std::to_string(other.size_));
}

bool Gf2Vec::get(std::size_t i) const {
    check_index(i);
    return (words_[i / 64] >> (i % 64)) & 1;
}

void Gf2Vec::set(std::size_t i, bool value) {
    check_index(i);
    const std::uint64_t mask = std::uint64_t{1} << (i % 64);
    if (value)
        words_[i / 64] |= mask;
    else
        words_[i / 64] &= ~mask;
}

void Gf2Vec::flip(std::size_t i) {
    check_index(i);
    words_[i / 64] ^= std::uint64_t{1} << (i % 64);
}

bool Gf2Vec::is_zero() const noexcept {
    return std::all_of(words_.begin(), words_.end(), [](std::uint64_t w) { return w == 0; });
}

std::size_t Gf2Vec::popcount() const noexcept {
    std::size_t c = 0;
    for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
}

bool Gf2Vec::has_zero_prefix(std::size_t k) const {
    if (k > size_) throw DimensionError("prefix longer than vector");
    std::size_t full = k / 64;
    for (std::size_t w = 0; w < full; ++w)
        if (words_[w] != 0) return false;
    if (k % 64 == 0) return true;
    return (words_[full] & ((std::uint64_t{1} << (k % 64)) - 1)) == 0;
}

Gf2Vec Gf2Vec::prefix(std::size_t k) const {
    if (k > size_) throw DimensionError("prefix longer than vector");
    Gf2Vec out(k);
    std::copy_n(words_.begin(), out.words_.size(), out.words_.begin());
    if (k % 64 != 0) out.words_.back() &= (std::uint64_t{1} << (k % 64)) - 1;
    return out;
}

bool Gf2Vec::dot(const Gf2Vec& other) const {
    check_same_size(other);
    std::uint64_t acc = 0;
    for (std::size_t w = 0; w < words_.size(); ++w) acc ^= words_[w] & other.words_[w];
    return std::popcount(acc) & 1;
}

Gf2Vec& Gf2Vec::operator^=(const Gf2Vec& other) {
    check_same_size(other);
    for (std::size_t w = 0; w < words_.size(); ++w) words_[w] ^= other.words_[w];
    return *this;
}

std::uint64_t Gf2Vec::to_u64() const {
    if (size_ > 64) throw DimensionError("to_u64 needs n <= 64");
    return words_.empty() ? 0 : words_[0];
}

std::string Gf2Vec::to_hex() const {
    static constexpr char digits[] = "0123456789abcdef";
    std::string out;
    out.reserve((size_ + 3) / 4);
    for (std::size_t k = 0; 4 * k < size_; ++k) {
        int d = 0;
        for (std::size_t j = 0; j < 4; ++j) {
            const std::size_t i = 4 * k + j;
            d = (d << 1) | (i < size_ && get(i) ? 1 : 0);
        }
        out.push_back(digits[d]);
    }
    return out;
}

std::string Gf2Vec::to_bits() const {
    std::string out(size_, '0');
    for (std::size_t i = 0; i < size_; ++i)
        if (get(i)) out[i] = '1';
    return out;
}

std::size_t Gf2Vec::hash() const noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL ^ size_;
    for (auto w : words_) {
        h ^= w;
        h *= 0x100000001b3ULL;
        h ^= h >> 29;
    }
    return static_cast<std::size_t>(h);
}

std::strong_ordering operator<=>(const Gf2Vec& a, const Gf2Vec& b) noexcept {
    if (auto c = a.size_ <=> b.size_; c != 0) return c;
    return std::lexicographical_compare_three_way(a.words_.begin(), a.words_.end(), b.words_.begin(),
                                                  b.words_.end());
}

// ---------------------------------------------------------------------------

Gf2Mat::Gf2Mat(std::size_t n_rows, std::size_t n_cols) : cols_(n_cols), rows_(n_rows, Gf2Vec(n_cols)) {
    check_width(n_rows);
}

Gf2Mat Gf2Mat::identity(std::size_t n) {
    Gf2Mat m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.rows_[i].set(i, true);
    return m;
}

Gf2Mat Gf2Mat::random(std::size_t n_rows, std::size_t n_cols, RngStream& rng) {
    Gf2Mat m(n_rows, n_cols);
    for (auto& r : m.rows_) r = Gf2Vec::random(n_cols, rng);
    return m;
}

Gf2Mat Gf2Mat::stack(std::span<const Gf2Vec> rows) {
    if (rows.empty()) throw DimensionError("stack of no rows has no column count");
    return stack(rows, rows.front().size());
}

Gf2Mat Gf2Mat::stack(std::span<const Gf2Vec> rows, std::size_t n_cols) {
    Gf2Mat m(0, n_cols);
    m.rows_.reserve(rows.size());
    for (const auto& r : rows) {
        if (r.size() != n_cols)
            throw DimensionError("ragged stack: row of " + std::to_string(r.size()) + " bits, expected " +
                                 std::to_string(n_cols));
        m.rows_.push_back(r);
    }
    return m;
}

const Gf2Vec& Gf2Mat::row(std::size_t r) const {
    if (r >= rows_.size()) throw IndexError("row " + std::to_string(r));
    return rows_[r];
}

bool Gf2Mat::at(std::size_t r, std::size_t c) const { return row(r).get(c); }

void Gf2Mat::set(std::size_t r, std::size_t c, bool value) {
    if (r >= rows_.size()) throw IndexError("row " + std::to_string(r));
    rows_[r].set(c, value);
}

Gf2Vec Gf2Mat::operator*(const Gf2Vec& v) const {
    if (v.size() != cols_)
        throw DimensionError("matrix with " + std::to_string(cols_) + " columns times " + std::to_string(v.size()) +
                             "-bit vector");
    Gf2Vec out(rows_.size());
    for (std::size_t r = 0; r < rows_.size(); ++r)
        if (rows_[r].dot(v)) out.set(r, true);
    return out;
}

Gf2Mat Gf2Mat::operator*(const Gf2Mat& other) const {
    if (other.n_rows() != cols_) throw DimensionError("matrix product shape mismatch");
    Gf2Mat out(rows_.size(), other.cols_);
    for (std::size_t r = 0; r < rows_.size(); ++r)
        for (std::size_t k = 0; k < cols_; ++k)
            if (rows_[r].get(k)) out.rows_[r] ^= other.rows_[k];
    return out;
}

Gf2Mat Gf2Mat::transpose() const {
    Gf2Mat out(cols_, rows_.size());
    for (std::size_t r = 0; r < rows_.size(); ++r)
        for (std::size_t c = 0; c < cols_; ++c)
            if (rows_[r].get(c)) out.rows_[c].set(r, true);
    return out;
}

Gf2Mat Gf2Mat::top_rows(std::size_t k) const {
    if (k > rows_.size()) throw DimensionError("top_rows beyond matrix height");
    return stack(std::span<const Gf2Vec>(rows_.data(), k), cols_);
}

std::size_t Gf2Mat::rank() const {
    std::vector<Gf2Vec> work = rows_;
    std::size_t rk = 0;
    for (std::size_t c = 0; c < cols_ && rk < work.size(); ++c) {
        std::size_t p = rk;
        while (p < work.size() && !work[p].get(c)) ++p;
        if (p == work.size()) continue;
        std::swap(work[rk], work[p]);
        for (std::size_t r = rk + 1; r < work.size(); ++r)
            if (work[r].get(c)) work[r] ^= work[rk];
        ++rk;
    }
    return rk;
}

std::optional<Gf2Vec> Gf2Mat::solve(const Gf2Vec& b) const {
    if (b.size() != rows_.size())
        throw DimensionError("right-hand side of " + std::to_string(b.size()) + " bits for " +
                             std::to_string(rows_.size()) + " rows");
    std::vector<Gf2Vec> work = rows_;
    Gf2Vec rhs = b;
    std::vector<std::size_t> pivot_col;
    std::size_t rk = 0;
    for (std::size_t c = 0; c < cols_ && rk < work.size(); ++c) {
        std::size_t p = rk;
        while (p < work.size() && !work[p].get(c)) ++p;
        if (p == work.size()) continue;
        if (p != rk) {
            std::swap(work[rk], work[p]);
            const bool t = rhs.get(rk);
            rhs.set(rk, rhs.get(p));
            rhs.set(p, t);
        }
        for (std::size_t r = 0; r < work.size(); ++r) {
            if (r != rk && work[r].get(c)) {
                work[r] ^= work[rk];
                if (rhs.get(rk)) rhs.flip(r);
            }
        }
        pivot_col.push_back(c);
        ++rk;
    }
    for (std::size_t r = rk; r < work.size(); ++r)
        if (rhs.get(r)) return std::nullopt;
    Gf2Vec x(cols_);
    for (std::size_t r = 0; r < rk; ++r) x.set(pivot_col[r], rhs.get(r));
    return x;
}

std::optional<Gf2Mat> Gf2Mat::inverse() const {
    if (rows_.size() != cols_) throw DimensionError("inverse of a non-square matrix");
    const std::size_t n = cols_;
    std::vector<Gf2Vec> work = rows_;
    std::vector<Gf2Vec> inv = identity(n).rows_;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && !work[p].get(c)) ++p;
        if (p == n) return std::nullopt;
        std::swap(work[c], work[p]);
        std::swap(inv[c], inv[p]);
        for (std::size_t r = 0; r < n; ++r) {
            if (r != c && work[r].get(c)) {
                work[r] ^= work[c];
                inv[r] ^= inv[c];
            }
        }
    }
    Gf2Mat out(0, n);
    out.rows_ = std::move(inv);
    return out;
}

Gf2Mat sample_invertible(std::size_t n, RngStream& rng) {
    if (n == 0) throw ParameterError("sample_invertible needs n >= 1");
    for (;;) {
        Gf2Mat m = Gf2Mat::random(n, n, rng);
        if (m.rank() == n) return m;
    }
}

}  // namespace crooked
