#pragma once

// Real and ideal worlds, built-in distinguishers, and the coupled
// real-vs-ideal experiment runner.

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "crooked/feistel.hpp"
#include "crooked/games.hpp"
#include "crooked/oracle.hpp"
#include "crooked/stats.hpp"
#include "crooked/world.hpp"

namespace crooked {

inline constexpr int kSchemaVersion = 1;

// C^{F~} with the distinguisher's CF queries answered by F through R.
class RealWorld final : public World {
public:
    RealWorld(ConstructionParams p, PublicRandomness r, ProgramPtr program, RngStream f_rng);
    Gf2Vec cf(std::size_t round, const Gf2Vec& x) override;
    Block construction(const Block& in) override;
    Block construction_inverse(const Block& out) override;
    [[nodiscard]] const ConstructionParams& params() const override { return p_; }
    [[nodiscard]] const PublicRandomness& randomness() const override { return r_; }
    [[nodiscard]] const SubversionProgram& program() const override { return oracle_.program(); }
    [[nodiscard]] std::string name() const override { return "real"; }
    [[nodiscard]] SubvertedOracle& oracle() { return oracle_; }

private:
    ConstructionParams p_;
    PublicRandomness r_;
    SubvertedOracle oracle_;
};

struct RecordedQuery {
    enum class Kind { Cf, Forward, Inverse } kind = Kind::Cf;
    std::size_t round = 0;
    Gf2Vec a;
    Gf2Vec b;
    friend bool operator==(const RecordedQuery&, const RecordedQuery&) = default;
};

nlohmann::json to_json(const RecordedQuery& q);
RecordedQuery recorded_query_from_json(const nlohmann::json& j, std::size_t n);
// One JSON object per line; throws FormatError on malformed input.
std::vector<RecordedQuery> read_recording(std::istream& is, std::size_t n);
void write_recording(std::ostream& os, const std::vector<RecordedQuery>& qs);

// Enforces the distinguisher's query budget and keeps a log of its queries.
class BudgetedWorld final : public World {
public:
    BudgetedWorld(World& inner, std::size_t budget) : inner_(inner), budget_(budget) {}
    Gf2Vec cf(std::size_t round, const Gf2Vec& x) override;
    Block construction(const Block& in) override;
    Block construction_inverse(const Block& out) override;
    [[nodiscard]] const ConstructionParams& params() const override { return inner_.params(); }
    [[nodiscard]] const PublicRandomness& randomness() const override { return inner_.randomness(); }
    [[nodiscard]] const SubversionProgram& program() const override { return inner_.program(); }
    [[nodiscard]] std::string name() const override { return inner_.name(); }

    [[nodiscard]] std::size_t used() const { return log_.size(); }
    [[nodiscard]] std::size_t cf_queries() const { return cf_queries_; }
    [[nodiscard]] const std::vector<RecordedQuery>& log() const { return log_; }

private:
    void charge();

    World& inner_;
    std::size_t budget_;
    std::size_t cf_queries_ = 0;
    std::vector<RecordedQuery> log_;
};

// Picks random (x0, x1), walks the subverted chain through the CF oracle and
// outputs 1 iff the construction oracle agrees, `walks` times over. With
// rf_first the construction is queried before each walk.
class ChainWalkDistinguisher final : public Distinguisher {
public:
    explicit ChainWalkDistinguisher(bool rf_first = false, std::size_t walks = 1)
        : rf_first_(rf_first), walks_(walks) {}
    bool run(World& w, RngStream& rng) override;
    [[nodiscard]] std::string name() const override;
    [[nodiscard]] std::size_t query_bound(const World& w) const override;

private:
    bool rf_first_;
    std::size_t walks_;
};

// q uniformly random queries spread over CF, forward and inverse; outputs
// the parity of the low bits of all answers.
class RandomProbeDistinguisher final : public Distinguisher {
public:
    explicit RandomProbeDistinguisher(std::size_t q) : q_(q) {}
    bool run(World& w, RngStream& rng) override;
    [[nodiscard]] std::string name() const override { return "random_probe"; }
    [[nodiscard]] std::size_t query_bound(const World&) const override { return q_; }

private:
    std::size_t q_;
};

// Solves for a collapse pair under R and outputs 1 iff the construction
// returns the predicted pair. Issues one construction query and no CF queries.
class AttackDistinguisher final : public Distinguisher {
public:
    bool run(World& w, RngStream& rng) override;
    [[nodiscard]] std::string name() const override { return "attack"; }
    [[nodiscard]] std::size_t query_bound(const World&) const override { return 1; }
};

// Re-issues a recorded query sequence; outputs the low bit of the last answer.
class ReplayDistinguisher final : public Distinguisher {
public:
    explicit ReplayDistinguisher(std::vector<RecordedQuery> qs) : qs_(std::move(qs)) {}
    bool run(World& w, RngStream& rng) override;
    [[nodiscard]] std::string name() const override { return "replay"; }
    [[nodiscard]] std::size_t query_bound(const World&) const override { return qs_.size(); }

private:
    std::vector<RecordedQuery> qs_;
};

// "chain_walk[:W]", "chain_walk_rf_first[:W]", "random_probe", "attack" or
// "replay:<path>". q_d sizes random_probe (64 when 0).
DistinguisherPtr builtin_distinguisher(const std::string& kind, std::size_t q_d, std::size_t n);

enum class WorldChoice { Real, Ideal, Both };

struct ExperimentConfig {
    std::size_t n = 20;
    std::string ell_profile = "custom:24,3,12,21,9,15";
    double eps = 0.0625;
    std::string subverter = "honest";
    std::string distinguisher = "chain_walk";
    std::size_t q_d = 0;  // 0: the distinguisher's own bound
    std::size_t q_a = 0;  // 0: the subverter's declared budget
    std::size_t trials = 100;
    std::uint64_t seed = 1;
    WorldChoice world = WorldChoice::Both;
    std::optional<GameId> game;  // ideal side runs this game instead of G1
    std::size_t threads = 1;
    bool timing = false;

    [[nodiscard]] ConstructionParams params() const;
    // Throws ConfigError.
    void validate() const;
    [[nodiscard]] nlohmann::json to_json() const;
};

WorldChoice parse_world(const std::string& s);
const char* to_string(WorldChoice w);

struct TrialRecord {
    std::size_t trial = 0;
    std::string world;
    bool bit = false;
    bool aborted = false;
    std::string abort_kind;
    std::string bad_event;
    std::size_t s_size = 0;
    std::size_t m_size = 0;
    std::size_t queries = 0;
    std::size_t cf_queries = 0;
    bool efficiency_ok = true;
    double wall_ms = 0.0;
};

struct AdvantageReport {
    ExperimentConfig config;
    std::size_t real_trials = 0;
    std::size_t ideal_trials = 0;
    std::size_t real_ones = 0;
    std::size_t ideal_ones = 0;
    double p_real = 0.0;
    double p_ideal = 0.0;
    double advantage = 0.0;  // p_real - p_ideal
    Interval ci;
    std::size_t aborts = 0;
    std::size_t bad_complete = 0;
    std::size_t bad_eval = 0;
    std::size_t efficiency_violations = 0;
    std::size_t max_queries = 0;
    std::vector<TrialRecord> records;

    [[nodiscard]] nlohmann::json to_json() const;
    void write_csv(std::ostream& os) const;
};

// Trial t uses trial_seed(seed, t) for R, F (or the simulator's CF draws),
// the ideal object and the distinguisher, in both worlds.
AdvantageReport run_distinguishing_experiment(const ExperimentConfig& cfg);

struct EfficiencyRun {
    std::size_t trial = 0;
    std::vector<std::size_t> sizes;  // |S.CF| after query k = 1..K
    std::vector<double> bounds;
    std::size_t violations = 0;
    double max_ratio = 0.0;
    bool monotone = true;
};

struct EfficiencyReport {
    std::size_t q_a = 0;
    std::vector<EfficiencyRun> runs;
    std::size_t violations = 0;
    [[nodiscard]] nlohmann::json to_json() const;
};

// Ideal-world (or G5) table growth against the efficiency bound.
EfficiencyReport efficiency_probe(const ExperimentConfig& cfg);

}  // namespace crooked
