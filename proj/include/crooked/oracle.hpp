#pragma once

// Lazily sampled round-function family F = (F_1..F_l) and the subverted
// family F~ defined by a deterministic oracle program.

#include <functional>
#include <iosfwd>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "crooked/gf2.hpp"
#include "crooked/rng.hpp"

namespace crooked {

struct QueryPoint {
    std::size_t round = 0;
    Gf2Vec x;
    friend auto operator<=>(const QueryPoint&, const QueryPoint&) = default;
    friend bool operator==(const QueryPoint&, const QueryPoint&) = default;
};

using QuerySet = std::set<QueryPoint>;

// What a subversion program sees: F_j(y) for any round j, in raw F coordinates.
class RoundOracle {
public:
    virtual ~RoundOracle() = default;
    virtual Gf2Vec query(std::size_t round, const Gf2Vec& x) = 0;
    [[nodiscard]] virtual std::size_t n() const = 0;
    [[nodiscard]] virtual std::size_t ell() const = 0;
};

class SubversionProgram {
public:
    virtual ~SubversionProgram() = default;
    // Must be deterministic in (round, x, answers received from f).
    virtual Gf2Vec evaluate(std::size_t round, const Gf2Vec& x, RoundOracle& f) const = 0;
    [[nodiscard]] virtual std::size_t query_budget() const = 0;
    [[nodiscard]] virtual std::string name() const = 0;
};

using ProgramPtr = std::shared_ptr<const SubversionProgram>;

class HonestProgram final : public SubversionProgram {
public:
    Gf2Vec evaluate(std::size_t round, const Gf2Vec& x, RoundOracle& f) const override { return f.query(round, x); }
    [[nodiscard]] std::size_t query_budget() const override { return 1; }
    [[nodiscard]] std::string name() const override { return "honest"; }
};

// Outputs 0^n whenever the first lambda input bits are zero.
class PrefixZeroProgram final : public SubversionProgram {
public:
    explicit PrefixZeroProgram(std::size_t lambda);
    Gf2Vec evaluate(std::size_t round, const Gf2Vec& x, RoundOracle& f) const override;
    [[nodiscard]] std::size_t query_budget() const override { return 1; }
    [[nodiscard]] std::string name() const override;
    [[nodiscard]] std::size_t lambda() const { return lambda_; }

private:
    std::size_t lambda_;
};

// Returns `payload` on the single input `trigger`, F_i(x) elsewhere.
class TriggerProgram final : public SubversionProgram {
public:
    TriggerProgram(Gf2Vec trigger, Gf2Vec payload);
    Gf2Vec evaluate(std::size_t round, const Gf2Vec& x, RoundOracle& f) const override;
    [[nodiscard]] std::size_t query_budget() const override { return 1; }
    [[nodiscard]] std::string name() const override;

private:
    Gf2Vec trigger_;
    Gf2Vec payload_;
};

// Test fixture: every round outputs 0^n.
class ZeroProgram final : public SubversionProgram {
public:
    Gf2Vec evaluate(std::size_t round, const Gf2Vec& x, RoundOracle& f) const override;
    [[nodiscard]] std::size_t query_budget() const override { return 1; }
    [[nodiscard]] std::string name() const override { return "zero"; }
};

// Test fixture: flips the low bit of F_r(x) on every input of the listed rounds.
class RoundDishonestProgram final : public SubversionProgram {
public:
    explicit RoundDishonestProgram(std::set<std::size_t> rounds) : rounds_(std::move(rounds)) {}
    Gf2Vec evaluate(std::size_t round, const Gf2Vec& x, RoundOracle& f) const override;
    [[nodiscard]] std::size_t query_budget() const override { return 1; }
    [[nodiscard]] std::string name() const override;

private:
    std::set<std::size_t> rounds_;
};

// Arbitrary program from a callable; for tests and experiments.
class FunctionProgram final : public SubversionProgram {
public:
    using Body = std::function<Gf2Vec(std::size_t, const Gf2Vec&, RoundOracle&)>;
    FunctionProgram(std::string name, std::size_t budget, Body body)
        : name_(std::move(name)), budget_(budget), body_(std::move(body)) {}
    Gf2Vec evaluate(std::size_t round, const Gf2Vec& x, RoundOracle& f) const override { return body_(round, x, f); }
    [[nodiscard]] std::size_t query_budget() const override { return budget_; }
    [[nodiscard]] std::string name() const override { return name_; }

private:
    std::string name_;
    std::size_t budget_;
    Body body_;
};

// "honest", "prefix_zero:L", "trigger:T_HEX[:PAYLOAD_HEX]", "zero",
// "round_dishonest:R[,R...]". n fixes the width of hex arguments.
ProgramPtr builtin_subverter(const std::string& kind, std::size_t n);

// Wraps a RoundOracle and throws BudgetError once more than `budget` queries arrive.
class BudgetedRoundOracle final : public RoundOracle {
public:
    BudgetedRoundOracle(RoundOracle& inner, std::size_t budget, std::string who)
        : inner_(inner), budget_(budget), who_(std::move(who)) {}
    Gf2Vec query(std::size_t round, const Gf2Vec& x) override;
    [[nodiscard]] std::size_t n() const override { return inner_.n(); }
    [[nodiscard]] std::size_t ell() const override { return inner_.ell(); }
    [[nodiscard]] std::size_t used() const { return used_; }

private:
    RoundOracle& inner_;
    std::size_t budget_;
    std::string who_;
    std::size_t used_ = 0;
};

// Lazy table of F_1..F_l; each new (i, x) draws the next value from one stream.
class OracleTable final : public RoundOracle {
public:
    OracleTable(std::size_t n, std::size_t ell, RngStream rng);

    Gf2Vec query(std::size_t round, const Gf2Vec& x) override;
    [[nodiscard]] std::size_t n() const override { return n_; }
    [[nodiscard]] std::size_t ell() const override { return ell_; }

    [[nodiscard]] bool contains(std::size_t round, const Gf2Vec& x) const;
    [[nodiscard]] std::size_t size() const { return size_; }
    [[nodiscard]] std::size_t query_count() const { return query_count_; }
    // Lines "i,x_hex,y_hex" sorted by (i, x).
    void dump(std::ostream& os) const;

private:
    void check(std::size_t round, const Gf2Vec& x) const;

    std::size_t n_;
    std::size_t ell_;
    RngStream rng_;
    std::vector<std::unordered_map<Gf2Vec, Gf2Vec, Gf2VecHash>> rounds_;
    std::size_t size_ = 0;
    std::size_t query_count_ = 0;
};

struct EpsilonEstimate {
    double fraction = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    std::size_t samples = 0;
    std::size_t disagreements = 0;
};

class SubvertedOracle {
public:
    SubvertedOracle(std::size_t n, std::size_t ell, RngStream rng, ProgramPtr program);

    [[nodiscard]] std::size_t n() const { return table_.n(); }
    [[nodiscard]] std::size_t ell() const { return table_.ell(); }
    [[nodiscard]] const SubversionProgram& program() const { return *program_; }
    [[nodiscard]] const ProgramPtr& program_ptr() const { return program_; }

    Gf2Vec query_f(std::size_t round, const Gf2Vec& x);
    // F~_i(x). F_i(x) is evaluated first, so Q_i(x) always holds (i, x).
    Gf2Vec query_f_tilde(std::size_t round, const Gf2Vec& x);
    [[nodiscard]] const QuerySet& query_log_lookup(std::size_t round, const Gf2Vec& x) const;
    [[nodiscard]] bool is_honest(std::size_t round, const Gf2Vec& x);

    EpsilonEstimate estimate_epsilon(std::size_t round, std::size_t samples, RngStream& rng);
    // Exhaustive count over all 2^n inputs; n <= 24.
    EpsilonEstimate exact_epsilon(std::size_t round);

    [[nodiscard]] const OracleTable& table() const { return table_; }
    OracleTable& table() { return table_; }
    void dump(std::ostream& os) const { table_.dump(os); }
    // Lines "i,x_hex,j,q_hex", one per recorded query point.
    void dump_query_log(std::ostream& os) const;

private:
    OracleTable table_;
    ProgramPtr program_;
    std::map<QueryPoint, QuerySet> query_log_;
    std::map<QueryPoint, Gf2Vec> tilde_cache_;
};

}  // namespace crooked
