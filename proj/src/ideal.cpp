#include "crooked/ideal.hpp"

#include <string>

#include "crooked/errors.hpp"

namespace crooked {

PermutationTable::PermutationTable(std::size_t n, RngStream rng, std::size_t retry_cap)
    : n_(n), rng_(rng), retry_cap_(retry_cap) {
    if (n == 0) throw ParameterError("n must be positive");
}

Block PermutationTable::sample_fresh(const std::unordered_map<Block, Block, BlockHash>& avoid) {
    for (std::size_t attempt = 0; attempt < retry_cap_; ++attempt) {
        Gf2Vec l = Gf2Vec::random(n_, rng_);
        Gf2Vec r = Gf2Vec::random(n_, rng_);
        Block b{std::move(l), std::move(r)};
        if (!avoid.count(b)) return b;
    }
    throw RetryExhausted("no fresh permutation value after " + std::to_string(retry_cap_) + " draws");
}

Block PermutationTable::forward(const Block& in) {
    if (in.first.size() != n_ || in.second.size() != n_) throw DimensionError("permutation input width");
    if (auto it = down_.find(in); it != down_.end()) return it->second;
    Block out = sample_fresh(up_);
    down_.emplace(in, out);
    up_.emplace(out, in);
    return out;
}

Block PermutationTable::inverse(const Block& out) {
    if (out.first.size() != n_ || out.second.size() != n_) throw DimensionError("permutation input width");
    if (auto it = up_.find(out); it != up_.end()) return it->second;
    Block in = sample_fresh(down_);
    up_.emplace(out, in);
    down_.emplace(in, out);
    return in;
}

bool PermutationTable::is_consistent() const {
    if (down_.size() != up_.size()) return false;
    for (const auto& [in, out] : down_) {
        auto it = up_.find(out);
        if (it == up_.end() || it->second != in) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------

TwoSidedRF::TwoSidedRF(std::size_t n, RngStream rng) : n_(n), rng_(rng) {
    if (n == 0) throw ParameterError("n must be positive");
}

Block TwoSidedRF::sample() {
    Gf2Vec l = Gf2Vec::random(n_, rng_);
    Gf2Vec r = Gf2Vec::random(n_, rng_);
    return {std::move(l), std::move(r)};
}

bool TwoSidedRF::set_down(const Block& in, const Block& out) {
    auto [it, inserted] = down_.try_emplace(in, out);
    if (inserted || it->second == out) return false;
    it->second = out;
    return true;
}

bool TwoSidedRF::set_up(const Block& out, const Block& in) {
    auto [it, inserted] = up_.try_emplace(out, in);
    if (inserted || it->second == in) return false;
    it->second = in;
    return true;
}

Block TwoSidedRF::forward(const Block& in) {
    if (in.first.size() != n_ || in.second.size() != n_) throw DimensionError("RF input width");
    if (auto it = down_.find(in); it != down_.end()) return it->second;
    Block out = tape_ ? tape_(in, true) : sample();
    down_.emplace(in, out);
    if (set_up(out, in)) ++overwrites_;
    return out;
}

Block TwoSidedRF::inverse(const Block& out) {
    if (out.first.size() != n_ || out.second.size() != n_) throw DimensionError("RF input width");
    if (auto it = up_.find(out); it != up_.end()) return it->second;
    Block in = tape_ ? tape_(out, false) : sample();
    if (set_down(in, out)) ++overwrites_;
    up_.emplace(out, in);
    return in;
}

void TwoSidedRF::program(const Block& in, const Block& out) {
    const bool a = set_down(in, out);
    const bool b = set_up(out, in);
    if (a || b) ++overwrites_;
}

const Block* TwoSidedRF::lookup_forward(const Block& in) const {
    auto it = down_.find(in);
    return it == down_.end() ? nullptr : &it->second;
}

const Block* TwoSidedRF::lookup_inverse(const Block& out) const {
    auto it = up_.find(out);
    return it == up_.end() ? nullptr : &it->second;
}

}  // namespace crooked
