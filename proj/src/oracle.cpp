#include "crooked/oracle.hpp"

#include <algorithm>
#include <ostream>
#include <sstream>

#include "crooked/errors.hpp"
#include "crooked/stats.hpp"

namespace crooked {

PrefixZeroProgram::PrefixZeroProgram(std::size_t lambda) : lambda_(lambda) {
    if (lambda == 0) throw ParameterError("prefix_zero needs lambda >= 1");
}

Gf2Vec PrefixZeroProgram::evaluate(std::size_t round, const Gf2Vec& x, RoundOracle& f) const {
    if (lambda_ > x.size()) throw ParameterError("prefix_zero lambda exceeds n");
    Gf2Vec y = f.query(round, x);
    if (x.has_zero_prefix(lambda_)) return Gf2Vec(x.size());
    return y;
}

std::string PrefixZeroProgram::name() const { return "prefix_zero:" + std::to_string(lambda_); }

TriggerProgram::TriggerProgram(Gf2Vec trigger, Gf2Vec payload)
    : trigger_(std::move(trigger)), payload_(std::move(payload)) {
    if (trigger_.size() != payload_.size()) throw ParameterError("trigger and payload widths differ");
}

Gf2Vec TriggerProgram::evaluate(std::size_t round, const Gf2Vec& x, RoundOracle& f) const {
    if (x.size() != trigger_.size()) throw ParameterError("trigger width differs from n");
    Gf2Vec y = f.query(round, x);
    return x == trigger_ ? payload_ : y;
}

std::string TriggerProgram::name() const { return "trigger:" + trigger_.to_hex() + ":" + payload_.to_hex(); }

Gf2Vec ZeroProgram::evaluate(std::size_t round, const Gf2Vec& x, RoundOracle& f) const {
    f.query(round, x);
    return Gf2Vec(x.size());
}

Gf2Vec RoundDishonestProgram::evaluate(std::size_t round, const Gf2Vec& x, RoundOracle& f) const {
    Gf2Vec y = f.query(round, x);
    if (rounds_.count(round)) y.flip(0);
    return y;
}

std::string RoundDishonestProgram::name() const {
    std::string s = "round_dishonest:";
    bool first = true;
    for (auto r : rounds_) {
        if (!first) s += ",";
        s += std::to_string(r);
        first = false;
    }
    return s;
}

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(s);
    while (std::getline(is, cur, sep)) out.push_back(cur);
    return out;
}

std::size_t parse_count(const std::string& s, const std::string& what) {
    try {
        std::size_t pos = 0;
        const unsigned long long v = std::stoull(s, &pos);
        if (pos != s.size()) throw ParameterError("");
        return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
        throw ParameterError("bad " + what + " '" + s + "'");
    }
}

}  // namespace

ProgramPtr builtin_subverter(const std::string& kind, std::size_t n) {
    const auto colon = kind.find(':');
    const std::string head = kind.substr(0, colon);
    const std::string rest = colon == std::string::npos ? "" : kind.substr(colon + 1);

    if (head == "honest" && rest.empty()) return std::make_shared<HonestProgram>();
    if (head == "zero" && rest.empty()) return std::make_shared<ZeroProgram>();
    if (head == "prefix_zero") {
        const std::size_t lambda = parse_count(rest, "prefix_zero lambda");
        if (lambda < 1 || lambda > n)
            throw ParameterError("prefix_zero lambda must lie in [1, " + std::to_string(n) + "]");
        return std::make_shared<PrefixZeroProgram>(lambda);
    }
    if (head == "trigger") {
        const auto parts = split(rest, ':');
        if (parts.empty() || parts.size() > 2) throw ParameterError("trigger needs T_HEX[:PAYLOAD_HEX]");
        try {
            Gf2Vec t = Gf2Vec::from_hex(n, parts[0]);
            Gf2Vec payload = parts.size() == 2 ? Gf2Vec::from_hex(n, parts[1]) : Gf2Vec(n);
            return std::make_shared<TriggerProgram>(std::move(t), std::move(payload));
        } catch (const FormatError& e) {
            throw ParameterError(std::string("trigger: ") + e.what());
        }
    }
    if (head == "round_dishonest") {
        std::set<std::size_t> rounds;
        for (const auto& r : split(rest, ',')) rounds.insert(parse_count(r, "round"));
        if (rounds.empty()) throw ParameterError("round_dishonest needs at least one round");
        return std::make_shared<RoundDishonestProgram>(std::move(rounds));
    }
    throw ParameterError("unknown subverter '" + kind + "'");
}

Gf2Vec BudgetedRoundOracle::query(std::size_t round, const Gf2Vec& x) {
    if (++used_ > budget_)
        throw BudgetError(who_ + " issued more than " + std::to_string(budget_) + " oracle queries");
    return inner_.query(round, x);
}

// ---------------------------------------------------------------------------

OracleTable::OracleTable(std::size_t n, std::size_t ell, RngStream rng)
    : n_(n), ell_(ell), rng_(rng), rounds_(ell) {
    if (n == 0) throw ParameterError("n must be positive");
}

void OracleTable::check(std::size_t round, const Gf2Vec& x) const {
    if (round < 1 || round > ell_)
        throw IndexError("round " + std::to_string(round) + " outside 1.." + std::to_string(ell_));
    if (x.size() != n_) throw DimensionError("oracle input of " + std::to_string(x.size()) + " bits");
}

Gf2Vec OracleTable::query(std::size_t round, const Gf2Vec& x) {
    check(round, x);
    ++query_count_;
    auto& tbl = rounds_[round - 1];
    auto it = tbl.find(x);
    if (it != tbl.end()) return it->second;
    ++size_;
    return tbl.emplace(x, Gf2Vec::random(n_, rng_)).first->second;
}

bool OracleTable::contains(std::size_t round, const Gf2Vec& x) const {
    check(round, x);
    return rounds_[round - 1].count(x) != 0;
}

void OracleTable::dump(std::ostream& os) const {
    for (std::size_t i = 0; i < ell_; ++i) {
        std::vector<std::pair<Gf2Vec, Gf2Vec>> rows(rounds_[i].begin(), rounds_[i].end());
        std::sort(rows.begin(), rows.end());
        for (const auto& [x, y] : rows) os << (i + 1) << ',' << x.to_hex() << ',' << y.to_hex() << '\n';
    }
}

// ---------------------------------------------------------------------------

namespace {

class RecordingOracle final : public RoundOracle {
public:
    RecordingOracle(RoundOracle& inner, QuerySet& q) : inner_(inner), q_(q) {}
    Gf2Vec query(std::size_t round, const Gf2Vec& x) override {
        Gf2Vec y = inner_.query(round, x);
        q_.insert({round, x});
        return y;
    }
    [[nodiscard]] std::size_t n() const override { return inner_.n(); }
    [[nodiscard]] std::size_t ell() const override { return inner_.ell(); }

private:
    RoundOracle& inner_;
    QuerySet& q_;
};

}  // namespace

SubvertedOracle::SubvertedOracle(std::size_t n, std::size_t ell, RngStream rng, ProgramPtr program)
    : table_(n, ell, rng), program_(std::move(program)) {
    if (!program_) throw ParameterError("null subversion program");
}

Gf2Vec SubvertedOracle::query_f(std::size_t round, const Gf2Vec& x) { return table_.query(round, x); }

Gf2Vec SubvertedOracle::query_f_tilde(std::size_t round, const Gf2Vec& x) {
    QueryPoint key{round, x};
    if (auto it = tilde_cache_.find(key); it != tilde_cache_.end()) return it->second;
    table_.query(round, x);
    QuerySet q{key};
    RecordingOracle rec(table_, q);
    BudgetedRoundOracle budgeted(rec, program_->query_budget(), program_->name());
    Gf2Vec y = program_->evaluate(round, x, budgeted);
    if (y.size() != n()) throw DimensionError("subversion program returned " + std::to_string(y.size()) + " bits");
    query_log_.emplace(key, std::move(q));
    tilde_cache_.emplace(std::move(key), y);
    return y;
}

const QuerySet& SubvertedOracle::query_log_lookup(std::size_t round, const Gf2Vec& x) const {
    auto it = query_log_.find({round, x});
    if (it == query_log_.end())
        throw NotEvaluatedError("F~_" + std::to_string(round) + "(" + x.to_hex() + ") not evaluated");
    return it->second;
}

bool SubvertedOracle::is_honest(std::size_t round, const Gf2Vec& x) {
    return query_f_tilde(round, x) == query_f(round, x);
}

EpsilonEstimate SubvertedOracle::estimate_epsilon(std::size_t round, std::size_t samples, RngStream& rng) {
    if (samples == 0) throw ParameterError("estimate_epsilon needs samples >= 1");
    EpsilonEstimate e;
    e.samples = samples;
    for (std::size_t s = 0; s < samples; ++s)
        if (!is_honest(round, Gf2Vec::random(n(), rng))) ++e.disagreements;
    e.fraction = static_cast<double>(e.disagreements) / static_cast<double>(samples);
    const auto ci = wilson_interval(e.disagreements, samples);
    e.ci_low = ci.low;
    e.ci_high = ci.high;
    return e;
}

EpsilonEstimate SubvertedOracle::exact_epsilon(std::size_t round) {
    if (n() > 24) throw ParameterError("exact_epsilon limited to n <= 24");
    EpsilonEstimate e;
    e.samples = std::size_t{1} << n();
    for (std::uint64_t v = 0; v < e.samples; ++v)
        if (!is_honest(round, Gf2Vec::from_u64(n(), v))) ++e.disagreements;
    e.fraction = static_cast<double>(e.disagreements) / static_cast<double>(e.samples);
    e.ci_low = e.ci_high = e.fraction;
    return e;
}

void SubvertedOracle::dump_query_log(std::ostream& os) const {
    for (const auto& [key, q] : query_log_)
        for (const auto& p : q) os << key.round << ',' << key.x.to_hex() << ',' << p.round << ',' << p.x.to_hex() << '\n';
}

}  // namespace crooked
