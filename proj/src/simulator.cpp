#include "crooked/simulator.hpp"

#include <algorithm>
#include <sstream>

#include "crooked/errors.hpp"

namespace crooked {

const char* to_string(AbortKind k) {
    switch (k) {
        case AbortKind::Freshness:
            return "Freshness";
        case AbortKind::Honesty:
            return "Honesty";
        case AbortKind::CrossQuery:
            return "CrossQuery";
        case AbortKind::CompletedConflict:
            return "CompletedConflict";
        case AbortKind::MiddleEval:
            return "MiddleEval";
        case AbortKind::MiddleFreshness:
            return "MiddleFreshness";
        case AbortKind::MiddleHonesty:
            return "MiddleHonesty";
        case AbortKind::ProgramConflict:
            return "ProgramConflict";
    }
    return "?";
}

const char* to_string(BadEvent b) {
    switch (b) {
        case BadEvent::None:
            return "None";
        case BadEvent::BadComplete:
            return "BadComplete";
        case BadEvent::BadEval:
            return "BadEval";
    }
    return "?";
}

SimAbort::SimAbort(AbortKind k, std::size_t r, BadEvent b)
    : std::runtime_error(std::string("abort: ") + to_string(k) + " at round " + std::to_string(r)),
      kind(k),
      round(r),
      bad(b) {}

// ---------------------------------------------------------------------------

const CfTable::Entry* CfTable::find(std::size_t i, const Gf2Vec& x) const {
    if (i >= rounds_.size()) return nullptr;
    auto it = rounds_[i].find(x);
    return it == rounds_[i].end() ? nullptr : &it->second;
}

bool CfTable::insert(std::size_t i, const Gf2Vec& x, Gf2Vec y, std::uint64_t order) {
    auto [it, inserted] = rounds_.at(i).try_emplace(x, Entry{std::move(y), order});
    if (inserted) ++size_;
    return inserted;
}

bool CfTable::assign(std::size_t i, const Gf2Vec& x, Gf2Vec y, std::uint64_t order) {
    auto& round = rounds_.at(i);
    auto it = round.find(x);
    if (it == round.end()) {
        round.emplace(x, Entry{std::move(y), order});
        ++size_;
        return false;
    }
    const bool changed = it->second.y != y;
    it->second = Entry{std::move(y), order};
    return changed;
}

std::string CfTable::dump() const {
    std::ostringstream os;
    for (std::size_t i = 1; i < rounds_.size(); ++i) {
        std::vector<const Round::value_type*> rows;
        rows.reserve(rounds_[i].size());
        for (const auto& kv : rounds_[i]) rows.push_back(&kv);
        std::sort(rows.begin(), rows.end(), [](auto* a, auto* b) { return a->first < b->first; });
        for (const auto* kv : rows) os << i << ',' << kv->first.to_hex() << ',' << kv->second.y.to_hex() << '\n';
    }
    return os.str();
}

// ---------------------------------------------------------------------------

namespace {

nlohmann::json block_json(const Block& b) { return {{"left", b.first.to_hex()}, {"right", b.second.to_hex()}}; }

// S as a read-only CF source.
class FrozenCf final : public CfOracle {
public:
    explicit FrozenCf(const CfTable& t) : t_(t) {}
    Gf2Vec cf(std::size_t round, const Gf2Vec& x) override {
        const auto* e = t_.find(round, x);
        if (!e) throw NotEvaluatedError("CF_" + std::to_string(round) + "(" + x.to_hex() + ") undefined");
        return e->y;
    }

private:
    const CfTable& t_;
};

// Routes subverter queries to the simulator's inner CF procedure.
class InnerCf final : public CfOracle {
public:
    explicit InnerCf(Simulator& s) : s_(s) {}
    Gf2Vec cf(std::size_t round, const Gf2Vec& x) override { return s_.cf_inner(round, x); }

private:
    Simulator& s_;
};

}  // namespace

Simulator::Simulator(ConstructionParams params, PublicRandomness r, ProgramPtr program, RngStream cf_rng,
                     std::unique_ptr<IdealObject> ideal, bool record_transcript)
    : params_(params),
      r_(std::move(r)),
      program_(std::move(program)),
      rng_(cf_rng),
      ideal_(std::move(ideal)),
      transcript_(record_transcript),
      s_(params.ell) {
    params_.validate();
    if (r_.ell() != params_.ell || r_.n() != params_.n)
        throw ParameterError("public randomness does not match the construction parameters");
    if (!program_) throw ParameterError("simulator needs a subversion program");
    if (!ideal_) throw ParameterError("simulator needs an ideal object");
}

void Simulator::require_live() const {
    if (aborted_) throw HarnessError("query issued after the run aborted");
}

void Simulator::note_abort(const SimAbort& a) {
    aborted_ = a;
    transcript_.add(EventKind::Abort,
                    {{"kind", to_string(a.kind)}, {"round", a.round}, {"bad", to_string(a.bad)}});
}

void Simulator::check_cap() const {
    if (s_.size() > table_cap_)
        throw HarnessError("simulator table exceeded " + std::to_string(table_cap_) + " entries");
}

void Simulator::insert_s(std::size_t round, const Gf2Vec& x, Gf2Vec y) {
    const std::string yh = transcript_.enabled() ? y.to_hex() : std::string();
    const std::uint64_t ord = ++order_;
    if (!s_.insert(round, x, std::move(y), ord)) throw std::logic_error("S table overwrite attempted");
    transcript_.add(EventKind::TableInsert,
                    {{"table", "S"}, {"round", round}, {"x", x.to_hex()}, {"y", yh}, {"order", ord}});
    check_cap();
}

Gf2Vec Simulator::cf(std::size_t round, const Gf2Vec& x) {
    require_live();
    if (round < 1 || round > params_.ell) throw IndexError("round " + std::to_string(round) + " outside 1..l");
    if (x.size() != params_.n) throw DimensionError("CF input width differs from n");
    ++external_;
    transcript_.add(EventKind::ExternalQuery, {{"oracle", "cf"}, {"round", round}, {"x", x.to_hex()}});
    try {
        cf_inner(round, x);
        drain();
    } catch (const SimAbort& a) {
        note_abort(a);
        size_series_.push_back(s_.size());
        throw;
    }
    size_series_.push_back(s_.size());
    return s_.find(round, x)->y;
}

Block Simulator::p_forward(const Block& in) {
    require_live();
    ++external_;
    nlohmann::json data = block_json(in);
    data["oracle"] = "p";
    data["dir"] = "forward";
    transcript_.add(EventKind::ExternalQuery, std::move(data));
    try {
        Block out = external_forward(in);
        size_series_.push_back(s_.size());
        return out;
    } catch (const SimAbort& a) {
        note_abort(a);
        size_series_.push_back(s_.size());
        throw;
    }
}

Block Simulator::p_inverse(const Block& out) {
    require_live();
    ++external_;
    nlohmann::json data = block_json(out);
    data["oracle"] = "p";
    data["dir"] = "inverse";
    transcript_.add(EventKind::ExternalQuery, std::move(data));
    try {
        Block in = external_inverse(out);
        size_series_.push_back(s_.size());
        return in;
    } catch (const SimAbort& a) {
        note_abort(a);
        size_series_.push_back(s_.size());
        throw;
    }
}

Block Simulator::external_forward(const Block& in) { return ideal_->forward(in); }
Block Simulator::external_inverse(const Block& out) { return ideal_->inverse(out); }

Gf2Vec Simulator::tape(std::size_t round, const Gf2Vec& x, std::uint64_t domain) const {
    RngStream s = rng_.fork(domain).fork(round);
    for (std::uint64_t w : x.words()) s = s.fork(w);
    return Gf2Vec::random(params_.n, s);
}

Gf2Vec Simulator::cf_inner(std::size_t round, const Gf2Vec& x) {
    if (const auto* e = s_.find(round, x)) return e->y;
    insert_s(round, x, tape(round, x));
    enqueue_new_chains(round, x);
    return s_.find(round, x)->y;
}

Gf2Vec Simulator::cf_tilde_inner(std::size_t round, const Gf2Vec& x, QuerySet* q) {
    const QueryPoint key{round, x};
    if (auto it = tilde_cache_.find(key); it != tilde_cache_.end()) {
        if (q) q->insert(it->second.second.begin(), it->second.second.end());
        return it->second.first;
    }
    QuerySet local;
    InnerCf inner(*this);
    Gf2Vec y = subverted_cf(inner, r_, *program_, round, x, &local);
    if (q) q->insert(local.begin(), local.end());
    tilde_cache_.emplace(key, std::make_pair(y, std::move(local)));
    return y;
}

std::size_t Simulator::enqueue_new_chains(std::size_t round, const Gf2Vec& x) {
    const std::size_t w = params_.w;
    const std::size_t ell = params_.ell;
    if (!s_.contains(round, x)) return 0;
    std::vector<Chain> backward, forward;

    // Windows [round - w + 1, round]: pick x_{round-1}, derive downwards.
    if (round >= w) {
        const std::size_t s = round - w + 1;
        for (const auto& [prev, e_prev] : s_.round(round - 1)) {
            std::vector<Gf2Vec> vals{x, prev};  // x_round, x_{round-1}, ...
            bool ok = true;
            for (std::size_t j = round - 1; j > s; --j) {
                const auto* e = s_.find(j, vals.back());
                Gf2Vec next = vals[vals.size() - 2] ^ e->y;
                if (!s_.contains(j - 1, next)) {
                    ok = false;
                    break;
                }
                vals.push_back(std::move(next));
            }
            if (!ok) continue;
            std::reverse(vals.begin(), vals.end());
            backward.push_back({s, std::move(vals)});
        }
    }
    // Windows [round, round + w - 1]: pick x_{round+1}, derive upwards.
    if (round + w - 1 <= ell) {
        const std::size_t last = round + w - 1;
        for (const auto& [nxt, e_nxt] : s_.round(round + 1)) {
            std::vector<Gf2Vec> vals{x, nxt};
            bool ok = true;
            for (std::size_t j = round + 1; j < last; ++j) {
                const auto* e = s_.find(j, vals.back());
                Gf2Vec next = vals[vals.size() - 2] ^ e->y;
                if (!s_.contains(j + 1, next)) {
                    ok = false;
                    break;
                }
                vals.push_back(std::move(next));
            }
            if (!ok) continue;
            forward.push_back({round, std::move(vals)});
        }
    }
    auto by_values = [](const Chain& a, const Chain& b) { return a.values < b.values; };
    std::sort(backward.begin(), backward.end(), by_values);
    std::sort(forward.begin(), forward.end(), by_values);
    std::size_t pushed = 0;
    for (auto* group : {&backward, &forward}) {
        for (auto& c : *group) {
            if (transcript_.enabled()) {
                nlohmann::json vals = nlohmann::json::array();
                for (const auto& v : c.values) vals.push_back(v.to_hex());
                transcript_.add(EventKind::Enqueue, {{"s", c.s}, {"values", std::move(vals)}});
            }
            queue_.push_back(std::move(c));
            ++pushed;
        }
    }
    return pushed;
}

std::optional<Plan> Simulator::check(const Chain& c) {
    for (std::size_t k = 0; k + 1 < c.values.size(); ++k) {
        const Link l{c.s + k, c.values[k], c.values[k + 1]};
        if (completed_.count(l) || honesty_checked_.count(l)) {
            transcript_.add(EventKind::Discard, {{"s", c.s}});
            return std::nullopt;
        }
    }
    return honesty_check(c);
}

std::optional<Plan> Simulator::honesty_check(const Chain& c) {
    for (std::size_t k = 0; k + 1 < c.values.size(); ++k) honesty_checked_.insert({c.s + k, c.values[k], c.values[k + 1]});
    bool honest = true;
    for (std::size_t k = 0; k < c.values.size(); ++k) {
        const std::size_t i = c.s + k;
        const Gf2Vec yt = cf_tilde_inner(i, c.values[k]);
        if (yt != cf_inner(i, c.values[k])) honest = false;
    }
    if (!honest) {
        transcript_.add(EventKind::Discard, {{"s", c.s}, {"dishonest", true}});
        return std::nullopt;
    }
    Plan p{c.s, c.values[0], c.values[1], params_.adapt_position(c.s)};
    transcript_.add(EventKind::PlanEmitted, {{"s", p.s}, {"u", p.u}});
    return p;
}

void Simulator::drain() {
    while (!queue_.empty()) {
        Chain c = std::move(queue_.front());
        queue_.pop_front();
        if (auto plan = check(c)) complete(*plan);
    }
}

CompletionContext Simulator::start_context(const Plan& plan) const {
    CompletionContext ctx;
    ctx.plan = plan;
    ctx.xs.assign(params_.ell + 2, Gf2Vec(params_.n));
    ctx.q.assign(params_.ell + 1, QuerySet{});
    ctx.xs[plan.s] = plan.xs;
    ctx.xs[plan.s + 1] = plan.xs1;
    return ctx;
}

void Simulator::evaluate_forward(CompletionContext& ctx) {
    const std::size_t ell = params_.ell;
    const std::size_t u = ctx.plan.u;
    std::size_t pos = ctx.plan.s;
    completed_.insert({pos, ctx.xs[pos], ctx.xs[pos + 1]});
    while (pos != u - 1) {
        if (pos == ell) {
            Block in = ideal_->inverse({ctx.xs[ell], ctx.xs[ell + 1]});
            ctx.xs[0] = std::move(in.first);
            ctx.xs[1] = std::move(in.second);
            pos = 0;
            continue;
        }
        const std::size_t p = pos + 1;
        ctx.xs[p + 1] = ctx.xs[pos] ^ cf_tilde_inner(p, ctx.xs[p], &ctx.q[p]);
        completed_.insert({p, ctx.xs[p], ctx.xs[p + 1]});
        pos = p;
    }
}

void Simulator::evaluate_backward(CompletionContext& ctx) {
    const std::size_t ell = params_.ell;
    const std::size_t u = ctx.plan.u;
    std::size_t pos = ctx.plan.s;
    while (pos != u + 1) {
        if (pos == 0) {
            Block out = ideal_->forward({ctx.xs[0], ctx.xs[1]});
            ctx.xs[ell] = std::move(out.first);
            ctx.xs[ell + 1] = std::move(out.second);
            pos = ell;
            continue;
        }
        ctx.xs[pos - 1] = ctx.xs[pos + 1] ^ cf_tilde_inner(pos, ctx.xs[pos], &ctx.q[pos]);
        completed_.insert({pos - 1, ctx.xs[pos - 1], ctx.xs[pos]});
        --pos;
    }
}

bool Simulator::queried_elsewhere(const CompletionContext& ctx, std::size_t p) const {
    const QueryPoint pt{p, ctx.xs[p]};
    for (std::size_t j = 1; j <= params_.ell; ++j)
        if (j != p && ctx.q[j].count(pt)) return true;
    return false;
}

void Simulator::complete(const Plan& plan) {
    CompletionContext ctx = start_context(plan);
    evaluate_forward(ctx);
    evaluate_backward(ctx);
    adapt(ctx);
}

void Simulator::adapt(CompletionContext& ctx) {
    const std::size_t u = ctx.plan.u;
    auto& xs = ctx.xs;
    if (s_.contains(u, xs[u])) throw SimAbort(AbortKind::Freshness, u);
    if (s_.contains(u + 1, xs[u + 1])) throw SimAbort(AbortKind::Freshness, u + 1);
    insert_s(u, xs[u], xs[u - 1] ^ xs[u + 1]);
    insert_s(u + 1, xs[u + 1], xs[u] ^ xs[u + 2]);
    for (std::size_t p : {u, u + 1})
        if (cf_tilde_inner(p, xs[p], &ctx.q[p]) != s_.find(p, xs[p])->y) throw SimAbort(AbortKind::Honesty, p);
    completed_.insert({u, xs[u], xs[u + 1]});
    for (std::size_t p : {u, u + 1})
        if (queried_elsewhere(ctx, p)) throw SimAbort(AbortKind::CrossQuery, p);
    transcript_.add(EventKind::Adapted, {{"u", u}, {"x_u", xs[u].to_hex()}, {"x_u1", xs[u + 1].to_hex()}});
    chains_.push_back({xs, ctx.q, u});
}

bool Simulator::verify_completed_chains() {
    FrozenCf frozen(s_);
    for (const auto& rec : chains_) {
        try {
            for (std::size_t i = 1; i <= params_.ell; ++i) {
                const Gf2Vec y = subverted_cf(frozen, r_, *program_, i, rec.xs[i]);
                if ((rec.xs[i - 1] ^ y) != rec.xs[i + 1]) return false;
            }
        } catch (const NotEvaluatedError&) {
            return false;
        }
        const Block out = ideal_->forward({rec.xs[0], rec.xs[1]});
        if (out.first != rec.xs[params_.ell] || out.second != rec.xs[params_.ell + 1]) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------

std::unique_ptr<Simulator> make_game1(const ConstructionParams& p, const PublicRandomness& r, ProgramPtr program,
                                      std::uint64_t seed, bool record_transcript) {
    return std::make_unique<Simulator>(p, r, std::move(program), RngStream(seed, streams::round_functions),
                                       std::make_unique<PermutationTable>(p.n, RngStream(seed, streams::ideal_object)),
                                       record_transcript);
}

std::unique_ptr<Simulator> make_game2(const ConstructionParams& p, const PublicRandomness& r, ProgramPtr program,
                                      std::uint64_t seed, bool record_transcript) {
    return std::make_unique<Simulator>(p, r, std::move(program), RngStream(seed, streams::round_functions),
                                       std::make_unique<TwoSidedRF>(p.n, RngStream(seed, streams::ideal_object)),
                                       record_transcript);
}

}  // namespace crooked
