#pragma once

// Ideal objects on 2n-bit blocks: a lazily sampled random permutation P and
// the two-sided random function RF that may overwrite on collisions.

#include <cstddef>
#include <functional>
#include <unordered_map>
#include <utility>

#include "crooked/gf2.hpp"
#include "crooked/rng.hpp"

namespace crooked {

using Block = std::pair<Gf2Vec, Gf2Vec>;

struct BlockHash {
    std::size_t operator()(const Block& b) const noexcept {
        return b.first.hash() * 0x9e3779b97f4a7c15ULL ^ b.second.hash();
    }
};

class IdealObject {
public:
    virtual ~IdealObject() = default;
    virtual Block forward(const Block& in) = 0;
    virtual Block inverse(const Block& out) = 0;
    [[nodiscard]] virtual std::size_t size() const = 0;
};

class PermutationTable final : public IdealObject {
public:
    static constexpr std::size_t kDefaultRetryCap = 64;

    PermutationTable(std::size_t n, RngStream rng, std::size_t retry_cap = kDefaultRetryCap);

    Block forward(const Block& in) override;
    Block inverse(const Block& out) override;
    [[nodiscard]] std::size_t size() const override { return down_.size(); }
    [[nodiscard]] bool has_forward(const Block& in) const { return down_.count(in) != 0; }
    [[nodiscard]] bool has_inverse(const Block& out) const { return up_.count(out) != 0; }
    // Both directions agree: every down entry has the mirrored up entry.
    [[nodiscard]] bool is_consistent() const;

private:
    Block sample_fresh(const std::unordered_map<Block, Block, BlockHash>& avoid);

    std::size_t n_;
    RngStream rng_;
    std::size_t retry_cap_;
    std::unordered_map<Block, Block, BlockHash> down_;
    std::unordered_map<Block, Block, BlockHash> up_;
};

class TwoSidedRF final : public IdealObject {
public:
    // Answers fresh queries; `forward` tells the direction.
    using Tape = std::function<Block(const Block&, bool forward)>;

    TwoSidedRF(std::size_t n, RngStream rng);
    // Fresh entries come from `tape` instead of the stream.
    void set_tape(Tape tape) { tape_ = std::move(tape); }

    Block forward(const Block& in) override;
    Block inverse(const Block& out) override;
    [[nodiscard]] std::size_t size() const override { return down_.size(); }

    // Sets RF(down, in) := out and RF(up, out) := in, counting any entry
    // replaced with a different value.
    void program(const Block& in, const Block& out);

    [[nodiscard]] const Block* lookup_forward(const Block& in) const;
    [[nodiscard]] const Block* lookup_inverse(const Block& out) const;
    [[nodiscard]] std::size_t overwrite_count() const { return overwrites_; }

private:
    bool set_down(const Block& in, const Block& out);
    bool set_up(const Block& out, const Block& in);
    Block sample();

    std::size_t n_;
    RngStream rng_;
    Tape tape_;
    std::unordered_map<Block, Block, BlockHash> down_;
    std::unordered_map<Block, Block, BlockHash> up_;
    std::size_t overwrites_ = 0;
};

}  // namespace crooked
