#pragma once

// Ideal-world simulator S^P: lazily sampled CF tables, chain detection over a
// FIFO queue, honesty checks and chain completion that programs positions
// u, u+1 to agree with the ideal object.

#include <cstdint>
#include <deque>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "crooked/feistel.hpp"
#include "crooked/gf2.hpp"
#include "crooked/ideal.hpp"
#include "crooked/oracle.hpp"
#include "crooked/rng.hpp"
#include "crooked/transcript.hpp"

namespace crooked {

enum class AbortKind {
    Freshness,          // adapt slot already defined
    Honesty,            // adapted point is dishonest
    CrossQuery,         // adapted point queried by another chain member
    CompletedConflict,  // plan at u_hi hits a chain completed by M
    MiddleEval,         // evaluation of a protected middle point
    MiddleFreshness,    // middle point of an M chain already defined
    MiddleHonesty,      // middle point of an M chain is dishonest
    ProgramConflict,    // S adapt slot already defined in M
};

const char* to_string(AbortKind k);

enum class BadEvent { None, BadComplete, BadEval };

const char* to_string(BadEvent b);

struct SimAbort : std::runtime_error {
    SimAbort(AbortKind k, std::size_t r, BadEvent b = BadEvent::None);
    AbortKind kind;
    std::size_t round;
    BadEvent bad;
};

// x_s..x_{s+r}
struct Chain {
    std::size_t s = 0;
    std::vector<Gf2Vec> values;
    friend bool operator==(const Chain&, const Chain&) = default;
};

struct Plan {
    std::size_t s = 0;
    Gf2Vec xs;
    Gf2Vec xs1;
    std::size_t u = 0;
};

// (i, x_i, x_{i+1})
struct Link {
    std::size_t i = 0;
    Gf2Vec a;
    Gf2Vec b;
    friend auto operator<=>(const Link&, const Link&) = default;
    friend bool operator==(const Link&, const Link&) = default;
};

// A completed full chain: x_0..x_{l+1}, Q_1..Q_l (index 0 unused), adapt position.
struct ChainRecord {
    std::vector<Gf2Vec> xs;
    std::vector<QuerySet> q;
    std::size_t u = 0;
};

// Per-round CF table with insertion order.
class CfTable {
public:
    struct Entry {
        Gf2Vec y;
        std::uint64_t order = 0;
    };
    using Round = std::unordered_map<Gf2Vec, Entry, Gf2VecHash>;

    explicit CfTable(std::size_t ell = 0) : rounds_(ell + 1) {}

    [[nodiscard]] std::size_t ell() const { return rounds_.size() - 1; }
    [[nodiscard]] const Entry* find(std::size_t i, const Gf2Vec& x) const;
    [[nodiscard]] bool contains(std::size_t i, const Gf2Vec& x) const { return find(i, x) != nullptr; }
    // False (and no change) when (i, x) is already present.
    bool insert(std::size_t i, const Gf2Vec& x, Gf2Vec y, std::uint64_t order);
    // Inserts or replaces; true when an existing different value was replaced.
    bool assign(std::size_t i, const Gf2Vec& x, Gf2Vec y, std::uint64_t order);
    [[nodiscard]] const Round& round(std::size_t i) const { return rounds_.at(i); }
    [[nodiscard]] std::size_t size() const { return size_; }
    // Lines "i,x_hex,y_hex" sorted by (i, x).
    [[nodiscard]] std::string dump() const;

private:
    std::vector<Round> rounds_;
    std::size_t size_ = 0;
};

// Scratch state of one completion: x_0..x_{l+1} and Q_1..Q_l.
struct CompletionContext {
    Plan plan;
    std::vector<Gf2Vec> xs;
    std::vector<QuerySet> q;
};

class Simulator : public CfOracle {
public:
    static constexpr std::size_t kDefaultTableCap = 1u << 22;

    Simulator(ConstructionParams params, PublicRandomness r, ProgramPtr program, RngStream cf_rng,
              std::unique_ptr<IdealObject> ideal, bool record_transcript = false);
    ~Simulator() override = default;

    // External CF query: answer, then drain the chain queue.
    Gf2Vec cf(std::size_t round, const Gf2Vec& x) override;
    // External queries to the ideal object.
    Block p_forward(const Block& in);
    Block p_inverse(const Block& out);

    // Internal procedures, exposed for tests.
    virtual Gf2Vec cf_inner(std::size_t round, const Gf2Vec& x);
    Gf2Vec cf_tilde_inner(std::size_t round, const Gf2Vec& x, QuerySet* q = nullptr);
    std::size_t enqueue_new_chains(std::size_t round, const Gf2Vec& x);
    std::optional<Plan> check(const Chain& c);
    std::optional<Plan> honesty_check(const Chain& c);
    virtual void complete(const Plan& plan);
    virtual void adapt(CompletionContext& ctx);
    void drain();

    [[nodiscard]] const ConstructionParams& params() const { return params_; }
    [[nodiscard]] const PublicRandomness& randomness() const { return r_; }
    [[nodiscard]] const SubversionProgram& program() const { return *program_; }
    [[nodiscard]] const CfTable& tables() const { return s_; }
    [[nodiscard]] const std::set<Link>& completed() const { return completed_; }
    [[nodiscard]] const std::set<Link>& honesty_checked() const { return honesty_checked_; }
    [[nodiscard]] const std::vector<ChainRecord>& chains() const { return chains_; }
    [[nodiscard]] const std::deque<Chain>& queue() const { return queue_; }
    [[nodiscard]] IdealObject& ideal() { return *ideal_; }
    [[nodiscard]] const Transcript& transcript() const { return transcript_; }
    Transcript& transcript() { return transcript_; }
    [[nodiscard]] const std::optional<SimAbort>& aborted() const { return aborted_; }
    [[nodiscard]] std::size_t external_queries() const { return external_; }
    // |S.CF| after each external query.
    [[nodiscard]] const std::vector<std::size_t>& size_series() const { return size_series_; }
    void set_table_cap(std::size_t cap) { table_cap_ = cap; }

    // Re-walks every recorded chain through S and the subverter without
    // touching any table and compares with the ideal object.
    [[nodiscard]] bool verify_completed_chains();

    // Value of the lazily sampled CF at (round, x): a function of the point
    // and the seed only, so games evaluating in different orders agree.
    [[nodiscard]] Gf2Vec tape(std::size_t round, const Gf2Vec& x, std::uint64_t domain = 0) const;

protected:
    void evaluate_forward(CompletionContext& ctx);
    void evaluate_backward(CompletionContext& ctx);
    // Cross-query condition: (p, x_p) in Q_j for some j != p.
    [[nodiscard]] bool queried_elsewhere(const CompletionContext& ctx, std::size_t p) const;
    CompletionContext start_context(const Plan& plan) const;
    void insert_s(std::size_t round, const Gf2Vec& x, Gf2Vec y);
    void check_cap() const;
    virtual void note_abort(const SimAbort& a);
    virtual Block external_forward(const Block& in);
    virtual Block external_inverse(const Block& out);
    // Throws HarnessError when the run has already aborted.
    void require_live() const;

    ConstructionParams params_;
    PublicRandomness r_;
    ProgramPtr program_;
    RngStream rng_;
    std::unique_ptr<IdealObject> ideal_;
    Transcript transcript_;

    CfTable s_;
    std::uint64_t order_ = 0;
    std::deque<Chain> queue_;
    std::set<Link> completed_;
    std::set<Link> honesty_checked_;
    std::map<QueryPoint, std::pair<Gf2Vec, QuerySet>> tilde_cache_;
    std::vector<ChainRecord> chains_;
    std::optional<SimAbort> aborted_;
    std::size_t external_ = 0;
    std::vector<std::size_t> size_series_;
    std::size_t table_cap_ = kDefaultTableCap;
};

// Simulator against a lazily sampled permutation (Game 1).
std::unique_ptr<Simulator> make_game1(const ConstructionParams& p, const PublicRandomness& r, ProgramPtr program,
                                      std::uint64_t seed, bool record_transcript = false);
// Same simulator against the two-sided random function (Game 2).
std::unique_ptr<Simulator> make_game2(const ConstructionParams& p, const PublicRandomness& r, ProgramPtr program,
                                      std::uint64_t seed, bool record_transcript = false);

}  // namespace crooked
