#pragma once

// Intermediate hybrid games. G1 and G2 are the simulator against P and RF.
// G3..G5 add a second set of tables M that completes chains on behalf of
// RF queries; S and M share MiddlePoints and AdaptedPoints bookkeeping.

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "crooked/simulator.hpp"
#include "crooked/stats.hpp"
#include "crooked/world.hpp"

namespace crooked {

enum class GameId { G1 = 1, G2, G3, G4, G5 };

const char* to_string(GameId g);
// "g1".."g5", case-insensitive; throws ConfigError otherwise.
GameId parse_game_id(const std::string& s);

class DualGame final : public Simulator {
public:
    DualGame(GameId id, ConstructionParams params, PublicRandomness r, ProgramPtr program, std::uint64_t seed,
             bool record_transcript = false);

    Gf2Vec cf(std::size_t round, const Gf2Vec& x) override;
    Gf2Vec cf_inner(std::size_t round, const Gf2Vec& x) override;
    void complete(const Plan& plan) override;
    void adapt(CompletionContext& ctx) override;

    // M-side procedures. `guard` is false for the point being evaluated and
    // for the completion's own structural reads.
    Gf2Vec m_cf_inner(std::size_t round, const Gf2Vec& x, bool guard);
    Gf2Vec m_cf_tilde(std::size_t round, const Gf2Vec& x, QuerySet* q = nullptr);
    // Completion of the chain through (s, a, b), s in {0, l}, triggered by a
    // fresh RF entry.
    void m_complete(std::size_t s, const Gf2Vec& a, const Gf2Vec& b);

    [[nodiscard]] GameId id() const { return id_; }
    [[nodiscard]] const CfTable& m_tables() const { return m_; }
    [[nodiscard]] const std::set<QueryPoint>& middle_points() const { return middle_; }
    [[nodiscard]] const std::set<QueryPoint>& adapted_points() const { return adapted_; }
    [[nodiscard]] const std::set<Link>& m_completed() const { return m_completed_; }
    [[nodiscard]] const std::vector<ChainRecord>& m_chains() const { return m_chains_; }
    [[nodiscard]] const TwoSidedRF& rf() const { return *rf_; }
    // Conditions G3 tolerates that would abort G4, by kind.
    [[nodiscard]] const std::map<AbortKind, std::size_t>& suppressed() const { return suppressed_; }
    [[nodiscard]] std::size_t m_overwrites() const { return m_overwrites_; }
    // Event boundaries (G4, G5) at which S was not contained in M.
    [[nodiscard]] std::size_t subset_violations() const { return subset_violations_; }
    [[nodiscard]] std::size_t subset_checks() const { return subset_checks_; }
    [[nodiscard]] bool subset_holds() const;
    // |M.CF| after each external query.
    [[nodiscard]] const std::vector<std::size_t>& m_size_series() const { return m_size_series_; }

protected:
    Block external_forward(const Block& in) override;
    Block external_inverse(const Block& out) override;
    void note_abort(const SimAbort& a) override;

private:
    [[nodiscard]] bool strict() const { return id_ != GameId::G3; }
    [[nodiscard]] Gf2Vec tape_round(std::size_t i, const Gf2Vec& x) const;
    [[nodiscard]] Block rf_tape(const Block& b, bool forward) const;
    void raise_or_log(AbortKind k, std::size_t round, BadEvent bad);
    void m_insert(std::size_t round, const Gf2Vec& x, Gf2Vec y);
    // G3 only: sets M even when defined; logs the replaced slot.
    void m_assign(std::size_t round, const Gf2Vec& x, Gf2Vec y);
    void m_step_middle_pre(std::size_t p, const Gf2Vec& x);
    void m_step_middle_post(std::size_t p, const Gf2Vec& x, const Gf2Vec& y);
    void m_walk_forward(CompletionContext& ctx);
    void m_walk_backward(CompletionContext& ctx);
    void m_adapt(CompletionContext& ctx);
    void m_complete_sequential(CompletionContext& ctx);
    void m_cross_check(const CompletionContext& ctx);
    void m_record(const CompletionContext& ctx);
    void copy_from_m(const Plan& plan);
    void complete_sequential(const Plan& plan);
    void audit();
    void note_m_size();

    GameId id_;
    TwoSidedRF* rf_;
    CfTable m_;
    std::uint64_t m_order_ = 0;
    std::set<QueryPoint> middle_;
    std::set<QueryPoint> adapted_;
    std::set<Link> m_completed_;
    std::vector<ChainRecord> m_chains_;
    std::map<Link, std::size_t> m_chain_of_;
    std::map<AbortKind, std::size_t> suppressed_;
    std::size_t m_overwrites_ = 0;
    std::size_t subset_violations_ = 0;
    std::size_t subset_checks_ = 0;
    std::vector<std::size_t> m_size_series_;
    std::size_t rf_slot_ = 0;  // adapt position of the S completion in progress
};

// A distinguisher's view of a game.
class GameWorld final : public World {
public:
    explicit GameWorld(Simulator& sim) : sim_(sim) {}
    Gf2Vec cf(std::size_t round, const Gf2Vec& x) override { return sim_.cf(round, x); }
    Block construction(const Block& in) override { return sim_.p_forward(in); }
    Block construction_inverse(const Block& out) override { return sim_.p_inverse(out); }
    [[nodiscard]] const ConstructionParams& params() const override { return sim_.params(); }
    [[nodiscard]] const PublicRandomness& randomness() const override { return sim_.randomness(); }
    [[nodiscard]] const SubversionProgram& program() const override { return sim_.program(); }
    [[nodiscard]] std::string name() const override { return "ideal"; }

private:
    Simulator& sim_;
};

// Builds G1..G5 over the same seed derivation, so runs of different games
// with one seed draw from identical streams.
std::unique_ptr<Simulator> make_game(GameId id, const ConstructionParams& p, const PublicRandomness& r,
                                     ProgramPtr program, std::uint64_t seed, bool record_transcript = false);

enum class GameStatus { Completed, Aborted };

struct GameTranscript {
    GameId game = GameId::G1;
    GameStatus status = GameStatus::Completed;
    std::optional<SimAbort> abort;
    bool bad_complete = false;
    bool bad_eval = false;
    bool decision = false;
    std::size_t overwrite_count = 0;
    std::size_t subset_violations = 0;
    std::size_t s_size = 0;
    std::size_t m_size = 0;
    std::vector<std::size_t> s_sizes;
    std::vector<std::size_t> m_sizes;
    std::map<AbortKind, std::size_t> suppressed;
    std::string events;  // JSON lines, empty unless recorded

    [[nodiscard]] std::string status_string() const;
    [[nodiscard]] nlohmann::json summary() const;
};

struct GameRun {
    std::unique_ptr<Simulator> game;
    GameTranscript transcript;
};

// One trial: R and the game are derived from trial_seed(seed, trial) and
// `d` runs against the game.
GameRun run_game(GameId id, Distinguisher& d, const ConstructionParams& p, ProgramPtr program, std::uint64_t seed,
                 std::size_t trial = 0, bool record_transcript = false);

struct BadEventReport {
    GameId game = GameId::G4;
    std::size_t trials = 0;
    std::size_t bad_complete = 0;
    std::size_t bad_eval = 0;
    std::size_t other_aborts = 0;
    double p_bad_complete = 0.0;
    double p_bad_eval = 0.0;
    Interval ci_bad_complete;
    Interval ci_bad_eval;
    std::vector<std::array<bool, 2>> flags;  // per trial: {BadComplete, BadEval}
};

BadEventReport bad_event_rates(GameId id, Distinguisher& d, std::size_t trials, const ConstructionParams& p,
                               ProgramPtr program, std::uint64_t seed);

}  // namespace crooked
