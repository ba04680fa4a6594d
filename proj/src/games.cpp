#include "crooked/games.hpp"

#include <algorithm>
#include <cctype>

#include "crooked/errors.hpp"

namespace crooked {

const char* to_string(GameId g) {
    switch (g) {
        case GameId::G1:
            return "G1";
        case GameId::G2:
            return "G2";
        case GameId::G3:
            return "G3";
        case GameId::G4:
            return "G4";
        case GameId::G5:
            return "G5";
    }
    return "?";
}

GameId parse_game_id(const std::string& s) {
    std::string t = s;
    std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) { return std::tolower(c); });
    if (t == "g1") return GameId::G1;
    if (t == "g2") return GameId::G2;
    if (t == "g3") return GameId::G3;
    if (t == "g4") return GameId::G4;
    if (t == "g5") return GameId::G5;
    throw ConfigError("unknown game '" + s + "' (expected g1..g5)");
}

namespace {

// Subverter queries answered by M; the point under evaluation is exempt from
// the middle-point guard.
class MInnerCf final : public CfOracle {
public:
    MInnerCf(DualGame& g, std::size_t round, const Gf2Vec& x) : g_(g), round_(round), x_(x) {}
    Gf2Vec cf(std::size_t round, const Gf2Vec& x) override {
        return g_.m_cf_inner(round, x, !(round == round_ && x == x_));
    }

private:
    DualGame& g_;
    std::size_t round_;
    const Gf2Vec& x_;
};

// Answers subverter queries straight from the CF tape.
class TapeCf final : public CfOracle {
public:
    explicit TapeCf(const Simulator& s) : s_(s) {}
    Gf2Vec cf(std::size_t round, const Gf2Vec& x) override { return s_.tape(round, x); }

private:
    const Simulator& s_;
};

std::unique_ptr<IdealObject> make_rf(std::size_t n, std::uint64_t seed) {
    return std::make_unique<TwoSidedRF>(n, RngStream(seed, streams::ideal_object));
}

constexpr std::uint64_t kSlotDomain = 0x736c6f74;

}  // namespace

DualGame::DualGame(GameId id, ConstructionParams params, PublicRandomness r, ProgramPtr program, std::uint64_t seed,
                   bool record_transcript)
    : Simulator(params, std::move(r), std::move(program), RngStream(seed, streams::round_functions),
                make_rf(params.n, seed), record_transcript),
      id_(id),
      rf_(static_cast<TwoSidedRF*>(ideal_.get())),
      m_(params.ell) {
    if (id != GameId::G3 && id != GameId::G4 && id != GameId::G5)
        throw HarnessError(std::string("DualGame runs G3..G5, not ") + to_string(id));
    // G3 and G4 sample RF as the construction over the CF tape, which is the
    // value G5 programs, so coupled runs see the same chains. At the adapt
    // slots of the completion that samples the entry, a subverted value that
    // differs from the tape is replaced by an independent one: G5 aborts there
    // and so does the adapted honesty check.
    if (id != GameId::G5)
        rf_->set_tape([this](const Block& b, bool forward) { return rf_tape(b, forward); });
}

Gf2Vec DualGame::tape_round(std::size_t i, const Gf2Vec& x) const {
    TapeCf base(*this);
    Gf2Vec y = subverted_cf(base, r_, *program_, i, x);
    const std::size_t u = rf_slot_ ? rf_slot_ : params_.u_lo;
    const bool slot = i == u || i == u + 1;
    if (slot && y != tape(i, x)) return tape(i, x, kSlotDomain);
    return y;
}

Block DualGame::rf_tape(const Block& b, bool forward) const {
    const std::size_t ell = params_.ell;
    std::vector<Gf2Vec> xs(ell + 2, Gf2Vec(params_.n));
    if (forward) {
        xs[0] = b.first;
        xs[1] = b.second;
        for (std::size_t i = 1; i <= ell; ++i) xs[i + 1] = xs[i - 1] ^ tape_round(i, xs[i]);
        return {xs[ell], xs[ell + 1]};
    }
    xs[ell] = b.first;
    xs[ell + 1] = b.second;
    for (std::size_t i = ell; i >= 1; --i) xs[i - 1] = xs[i + 1] ^ tape_round(i, xs[i]);
    return {xs[0], xs[1]};
}

void DualGame::note_abort(const SimAbort& a) {
    SimAbort c = a;
    if (c.bad == BadEvent::None) c.bad = BadEvent::BadComplete;
    Simulator::note_abort(c);
}

void DualGame::raise_or_log(AbortKind k, std::size_t round, BadEvent bad) {
    if (strict()) throw SimAbort(k, round, bad);
    ++suppressed_[k];
    transcript_.add(EventKind::Abort, {{"kind", to_string(k)}, {"round", round}, {"suppressed", true}});
}

void DualGame::m_insert(std::size_t round, const Gf2Vec& x, Gf2Vec y) {
    const std::string yh = transcript_.enabled() ? y.to_hex() : std::string();
    const std::uint64_t ord = ++m_order_;
    if (!m_.insert(round, x, std::move(y), ord)) throw std::logic_error("M table overwrite attempted");
    transcript_.add(EventKind::TableInsert,
                    {{"table", "M"}, {"round", round}, {"x", x.to_hex()}, {"y", yh}, {"order", ord}});
    if (m_.size() > table_cap_) throw HarnessError("M table exceeded the safety cap");
}

void DualGame::m_assign(std::size_t round, const Gf2Vec& x, Gf2Vec y) {
    if (m_.contains(round, x)) {
        transcript_.add(EventKind::Abort,
                        {{"kind", to_string(AbortKind::ProgramConflict)}, {"round", round}, {"suppressed", true}});
        ++suppressed_[AbortKind::ProgramConflict];
    }
    const std::string yh = transcript_.enabled() ? y.to_hex() : std::string();
    const std::uint64_t ord = ++m_order_;
    if (m_.assign(round, x, std::move(y), ord)) ++m_overwrites_;
    transcript_.add(EventKind::TableInsert,
                    {{"table", "M"}, {"round", round}, {"x", x.to_hex()}, {"y", yh}, {"order", ord}});
}

bool DualGame::subset_holds() const {
    for (std::size_t i = 1; i <= params_.ell; ++i)
        for (const auto& [x, e] : s_.round(i)) {
            const auto* me = m_.find(i, x);
            if (!me || me->y != e.y) return false;
        }
    return true;
}

void DualGame::audit() {
    if (id_ == GameId::G3) return;
    ++subset_checks_;
    if (!subset_holds()) ++subset_violations_;
}

void DualGame::note_m_size() { m_size_series_.push_back(m_.size()); }

// ---------------------------------------------------------------------------
// External interface

Gf2Vec DualGame::cf(std::size_t round, const Gf2Vec& x) {
    try {
        Gf2Vec y = Simulator::cf(round, x);
        audit();
        note_m_size();
        return y;
    } catch (const SimAbort&) {
        note_m_size();
        throw;
    }
}

Block DualGame::external_forward(const Block& in) {
    if (!rf_->lookup_forward(in)) {
        try {
            if (id_ != GameId::G5) rf_->forward(in);
            m_complete(0, in.first, in.second);
        } catch (const SimAbort&) {
            note_m_size();
            throw;
        }
        audit();
    }
    note_m_size();
    return *rf_->lookup_forward(in);
}

Block DualGame::external_inverse(const Block& out) {
    if (!rf_->lookup_inverse(out)) {
        try {
            if (id_ != GameId::G5) rf_->inverse(out);
            m_complete(params_.ell, out.first, out.second);
        } catch (const SimAbort&) {
            note_m_size();
            throw;
        }
        audit();
    }
    note_m_size();
    return *rf_->lookup_inverse(out);
}

// ---------------------------------------------------------------------------
// S side

Gf2Vec DualGame::cf_inner(std::size_t round, const Gf2Vec& x) {
    if (const auto* e = s_.find(round, x)) return e->y;
    const QueryPoint pt{round, x};
    if (const auto* me = m_.find(round, x)) {
        Gf2Vec y = me->y;
        if (id_ == GameId::G3) {
            // An adapted M value is not reused; S draws its own.
            insert_s(round, x, adapted_.count(pt) ? Gf2Vec::random(params_.n, rng_) : std::move(y));
        } else {
            if (middle_.count(pt)) throw SimAbort(AbortKind::MiddleEval, round, BadEvent::BadEval);
            insert_s(round, x, std::move(y));
        }
    } else {
        Gf2Vec y = tape(round, x);
        insert_s(round, x, y);
        m_insert(round, x, std::move(y));
    }
    enqueue_new_chains(round, x);
    audit();
    return s_.find(round, x)->y;
}

void DualGame::complete(const Plan& plan) {
    const Link l{plan.s, plan.xs, plan.xs1};
    if (id_ != GameId::G3 && m_completed_.count(l)) {
        if (plan.u == params_.u_hi) throw SimAbort(AbortKind::CompletedConflict, plan.s, BadEvent::BadComplete);
        copy_from_m(plan);
    } else if (id_ == GameId::G5) {
        complete_sequential(plan);
    } else {
        rf_slot_ = plan.u;
        try {
            Simulator::complete(plan);
        } catch (...) {
            rf_slot_ = 0;
            throw;
        }
        rf_slot_ = 0;
    }
    audit();
}

void DualGame::adapt(CompletionContext& ctx) {
    const std::size_t u = ctx.plan.u;
    auto& xs = ctx.xs;
    for (std::size_t p : {u, u + 1})
        if (s_.contains(p, xs[p])) throw SimAbort(AbortKind::Freshness, p, BadEvent::BadComplete);
    const Gf2Vec vu = xs[u - 1] ^ xs[u + 1];
    const Gf2Vec vu1 = xs[u] ^ xs[u + 2];
    insert_s(u, xs[u], vu);
    insert_s(u + 1, xs[u + 1], vu1);
    if (id_ == GameId::G3) {
        m_assign(u, xs[u], vu);
        m_assign(u + 1, xs[u + 1], vu1);
    } else {
        for (std::size_t p : {u, u + 1})
            if (m_.contains(p, xs[p])) throw SimAbort(AbortKind::ProgramConflict, p, BadEvent::BadComplete);
        m_insert(u, xs[u], vu);
        m_insert(u + 1, xs[u + 1], vu1);
    }
    for (std::size_t p : {u, u + 1})
        if (cf_tilde_inner(p, xs[p], &ctx.q[p]) != s_.find(p, xs[p])->y)
            throw SimAbort(AbortKind::Honesty, p, BadEvent::BadComplete);
    completed_.insert({u, xs[u], xs[u + 1]});
    for (std::size_t p : {u, u + 1})
        if (queried_elsewhere(ctx, p)) throw SimAbort(AbortKind::CrossQuery, p, BadEvent::BadComplete);
    transcript_.add(EventKind::Adapted, {{"u", u}, {"x_u", xs[u].to_hex()}, {"x_u1", xs[u + 1].to_hex()}});
    chains_.push_back({xs, ctx.q, u});
}

void DualGame::copy_from_m(const Plan& plan) {
    auto it = m_chain_of_.find({plan.s, plan.xs, plan.xs1});
    if (it == m_chain_of_.end()) throw std::logic_error("M completed a link without recording its chain");
    const ChainRecord rec = m_chains_[it->second];
    const std::size_t u = rec.u;
    for (std::size_t p : {u, u + 1})
        if (s_.contains(p, rec.xs[p])) throw SimAbort(AbortKind::Freshness, p, BadEvent::BadComplete);
    const QueryPoint a{u, rec.xs[u]};
    const QueryPoint b{u + 1, rec.xs[u + 1]};
    for (std::size_t j = 1; j <= params_.ell; ++j) {
        for (const auto& pt : rec.q[j]) {
            if (s_.contains(pt.round, pt.x)) continue;
            const auto* me = m_.find(pt.round, pt.x);
            if (!me) throw std::logic_error("M chain refers to an undefined point");
            insert_s(pt.round, pt.x, me->y);
            if (pt != a && pt != b) enqueue_new_chains(pt.round, pt.x);
        }
    }
    for (std::size_t i = 0; i <= params_.ell; ++i) completed_.insert({i, rec.xs[i], rec.xs[i + 1]});
    transcript_.add(EventKind::Adapted,
                    {{"u", u}, {"x_u", rec.xs[u].to_hex()}, {"x_u1", rec.xs[u + 1].to_hex()}, {"copied", true}});
    chains_.push_back(rec);
}

void DualGame::complete_sequential(const Plan& plan) {
    CompletionContext ctx = start_context(plan);
    const std::size_t ell = params_.ell;
    const std::size_t u = plan.u;
    const std::size_t s = plan.s;
    auto& xs = ctx.xs;
    auto eval = [&](std::size_t p) {
        const bool slot = p == u || p == u + 1;
        if (slot && (s_.contains(p, xs[p]) || m_.contains(p, xs[p])))
            throw SimAbort(AbortKind::Freshness, p, BadEvent::BadComplete);
        Gf2Vec y = cf_tilde_inner(p, xs[p], &ctx.q[p]);
        if (slot && y != s_.find(p, xs[p])->y) throw SimAbort(AbortKind::Honesty, p, BadEvent::BadComplete);
        return y;
    };
    completed_.insert({s, xs[s], xs[s + 1]});
    for (std::size_t p = s + 1; p <= ell; ++p) {
        xs[p + 1] = xs[p - 1] ^ eval(p);
        completed_.insert({p, xs[p], xs[p + 1]});
    }
    for (std::size_t p = s; p >= 1; --p) {
        xs[p - 1] = xs[p + 1] ^ eval(p);
        completed_.insert({p - 1, xs[p - 1], xs[p]});
    }
    for (std::size_t p : {u, u + 1})
        if (queried_elsewhere(ctx, p)) throw SimAbort(AbortKind::CrossQuery, p, BadEvent::BadComplete);
    rf_->program({xs[0], xs[1]}, {xs[ell], xs[ell + 1]});
    transcript_.add(EventKind::Adapted, {{"u", u}, {"x_u", xs[u].to_hex()}, {"x_u1", xs[u + 1].to_hex()}});
    chains_.push_back({xs, ctx.q, u});
}

// ---------------------------------------------------------------------------
// M side

Gf2Vec DualGame::m_cf_inner(std::size_t round, const Gf2Vec& x, bool guard) {
    if (const auto* e = s_.find(round, x)) return e->y;
    if (const auto* e = m_.find(round, x)) {
        if (guard && middle_.count({round, x})) raise_or_log(AbortKind::MiddleEval, round, BadEvent::BadEval);
        return e->y;
    }
    Gf2Vec y = tape(round, x);
    m_insert(round, x, y);
    return y;
}

Gf2Vec DualGame::m_cf_tilde(std::size_t round, const Gf2Vec& x, QuerySet* q) {
    MInnerCf inner(*this, round, x);
    return subverted_cf(inner, r_, *program_, round, x, q);
}

void DualGame::m_step_middle_pre(std::size_t p, const Gf2Vec& x) {
    if (!params_.in_middle(p)) return;
    const bool seen = m_.contains(p, x);
    middle_.insert({p, x});
    if (seen) raise_or_log(AbortKind::MiddleFreshness, p, BadEvent::BadComplete);
}

void DualGame::m_step_middle_post(std::size_t p, const Gf2Vec& x, const Gf2Vec& y) {
    if (!params_.in_middle(p)) return;
    const auto* e = m_.find(p, x);
    if (!e || e->y != y) raise_or_log(AbortKind::MiddleHonesty, p, BadEvent::BadComplete);
}

void DualGame::m_complete(std::size_t s, const Gf2Vec& a, const Gf2Vec& b) {
    CompletionContext ctx = start_context({s, a, b, params_.u_lo});
    if (id_ == GameId::G5) {
        m_complete_sequential(ctx);
        return;
    }
    m_walk_forward(ctx);
    m_walk_backward(ctx);
    m_adapt(ctx);
}

void DualGame::m_walk_forward(CompletionContext& ctx) {
    const std::size_t ell = params_.ell;
    const std::size_t u = ctx.plan.u;
    auto& xs = ctx.xs;
    std::size_t pos = ctx.plan.s;
    m_completed_.insert({pos, xs[pos], xs[pos + 1]});
    while (pos != u - 1) {
        if (pos == ell) {
            Block in = rf_->inverse({xs[ell], xs[ell + 1]});
            xs[0] = std::move(in.first);
            xs[1] = std::move(in.second);
            pos = 0;
            continue;
        }
        const std::size_t p = pos + 1;
        m_step_middle_pre(p, xs[p]);
        const Gf2Vec y = m_cf_tilde(p, xs[p], &ctx.q[p]);
        m_step_middle_post(p, xs[p], y);
        xs[p + 1] = xs[pos] ^ y;
        m_completed_.insert({p, xs[p], xs[p + 1]});
        pos = p;
    }
}

void DualGame::m_walk_backward(CompletionContext& ctx) {
    const std::size_t ell = params_.ell;
    const std::size_t u = ctx.plan.u;
    auto& xs = ctx.xs;
    std::size_t pos = ctx.plan.s;
    while (pos != u + 1) {
        if (pos == 0) {
            Block out = rf_->forward({xs[0], xs[1]});
            xs[ell] = std::move(out.first);
            xs[ell + 1] = std::move(out.second);
            pos = ell;
            continue;
        }
        m_step_middle_pre(pos, xs[pos]);
        const Gf2Vec y = m_cf_tilde(pos, xs[pos], &ctx.q[pos]);
        m_step_middle_post(pos, xs[pos], y);
        xs[pos - 1] = xs[pos + 1] ^ y;
        m_completed_.insert({pos - 1, xs[pos - 1], xs[pos]});
        --pos;
    }
}

void DualGame::m_adapt(CompletionContext& ctx) {
    const std::size_t u = ctx.plan.u;
    auto& xs = ctx.xs;
    const Gf2Vec vu = xs[u - 1] ^ xs[u + 1];
    const Gf2Vec vu1 = xs[u] ^ xs[u + 2];
    if (strict()) {
        for (std::size_t p : {u, u + 1})
            if (m_.contains(p, xs[p])) throw SimAbort(AbortKind::Freshness, p, BadEvent::BadComplete);
        m_insert(u, xs[u], vu);
        m_insert(u + 1, xs[u + 1], vu1);
    } else {
        m_assign(u, xs[u], vu);
        m_assign(u + 1, xs[u + 1], vu1);
    }
    for (std::size_t p : {u, u + 1}) {
        if (params_.in_middle(p)) middle_.insert({p, xs[p]});
        adapted_.insert({p, xs[p]});
    }
    bool honest = true;
    for (std::size_t p : {u, u + 1}) {
        const Gf2Vec y = m_cf_tilde(p, xs[p], &ctx.q[p]);
        if (m_.find(p, xs[p])->y != y) {
            honest = false;
            raise_or_log(AbortKind::Honesty, p, BadEvent::BadComplete);
        }
    }
    if (honest) m_completed_.insert({u, xs[u], xs[u + 1]});
    m_cross_check(ctx);
    m_record(ctx);
}

void DualGame::m_complete_sequential(CompletionContext& ctx) {
    const std::size_t ell = params_.ell;
    const std::size_t u = ctx.plan.u;
    auto& xs = ctx.xs;
    auto eval = [&](std::size_t p) {
        m_step_middle_pre(p, xs[p]);
        Gf2Vec y = m_cf_tilde(p, xs[p], &ctx.q[p]);
        m_step_middle_post(p, xs[p], y);
        if (p == u || p == u + 1) adapted_.insert({p, xs[p]});
        return y;
    };
    if (ctx.plan.s == 0) {
        m_completed_.insert({0, xs[0], xs[1]});
        for (std::size_t p = 1; p <= ell; ++p) {
            xs[p + 1] = xs[p - 1] ^ eval(p);
            m_completed_.insert({p, xs[p], xs[p + 1]});
        }
    } else {
        m_completed_.insert({ell, xs[ell], xs[ell + 1]});
        for (std::size_t p = ell; p >= 1; --p) {
            xs[p - 1] = xs[p + 1] ^ eval(p);
            m_completed_.insert({p - 1, xs[p - 1], xs[p]});
        }
    }
    m_cross_check(ctx);
    rf_->program({xs[0], xs[1]}, {xs[ell], xs[ell + 1]});
    m_record(ctx);
}

void DualGame::m_cross_check(const CompletionContext& ctx) {
    for (std::size_t i = params_.mid_lo; i <= params_.mid_hi; ++i)
        if (queried_elsewhere(ctx, i)) raise_or_log(AbortKind::CrossQuery, i, BadEvent::BadComplete);
}

void DualGame::m_record(const CompletionContext& ctx) {
    const std::size_t idx = m_chains_.size();
    m_chains_.push_back({ctx.xs, ctx.q, ctx.plan.u});
    for (std::size_t i = 0; i <= params_.ell; ++i) m_chain_of_.emplace(Link{i, ctx.xs[i], ctx.xs[i + 1]}, idx);
}

// ---------------------------------------------------------------------------

std::unique_ptr<Simulator> make_game(GameId id, const ConstructionParams& p, const PublicRandomness& r,
                                     ProgramPtr program, std::uint64_t seed, bool record_transcript) {
    switch (id) {
        case GameId::G1:
            return make_game1(p, r, std::move(program), seed, record_transcript);
        case GameId::G2:
            return make_game2(p, r, std::move(program), seed, record_transcript);
        default:
            return std::make_unique<DualGame>(id, p, r, std::move(program), seed, record_transcript);
    }
}

std::string GameTranscript::status_string() const {
    if (status == GameStatus::Completed) return "Completed";
    if (!abort) return "Abort";
    return std::string("Abort(") + (abort->bad == BadEvent::None ? to_string(abort->kind) : to_string(abort->bad)) +
           ")";
}

nlohmann::json GameTranscript::summary() const {
    nlohmann::json j = {{"game_id", to_string(game)},
                        {"status", status_string()},
                        {"bad_flags", {{"BadComplete", bad_complete}, {"BadEval", bad_eval}}},
                        {"decision", decision},
                        {"overwrite_count", overwrite_count},
                        {"subset_violations", subset_violations},
                        {"s_size", s_size},
                        {"m_size", m_size}};
    if (abort) j["abort"] = {{"kind", to_string(abort->kind)}, {"round", abort->round}};
    nlohmann::json sup = nlohmann::json::object();
    for (const auto& [k, c] : suppressed) sup[to_string(k)] = c;
    j["suppressed"] = sup;
    return j;
}

GameRun run_game(GameId id, Distinguisher& d, const ConstructionParams& p, ProgramPtr program, std::uint64_t seed,
                 std::size_t trial, bool record_transcript) {
    const std::uint64_t ts = trial_seed(seed, trial);
    RngStream r_rng(ts, streams::public_randomness);
    const PublicRandomness r = PublicRandomness::sample(p.n, p.ell, r_rng);
    GameRun run;
    run.game = make_game(id, p, r, std::move(program), ts, record_transcript);
    GameWorld w(*run.game);
    RngStream d_rng(ts, streams::distinguisher);
    GameTranscript& t = run.transcript;
    t.game = id;
    try {
        t.decision = d.run(w, d_rng);
    } catch (const SimAbort&) {
        // Recorded through aborted() below.
    }
    const Simulator& g = *run.game;
    if (g.aborted()) {
        t.status = GameStatus::Aborted;
        t.abort = g.aborted();
        t.bad_complete = t.abort->bad == BadEvent::BadComplete;
        t.bad_eval = t.abort->bad == BadEvent::BadEval;
    }
    t.s_size = g.tables().size();
    t.s_sizes = g.size_series();
    if (const auto* dg = dynamic_cast<const DualGame*>(&g)) {
        t.m_size = dg->m_tables().size();
        t.m_sizes = dg->m_size_series();
        t.overwrite_count = dg->rf().overwrite_count();
        t.subset_violations = dg->subset_violations();
        t.suppressed = dg->suppressed();
    } else if (const auto* rf = dynamic_cast<const TwoSidedRF*>(&run.game->ideal())) {
        t.overwrite_count = rf->overwrite_count();
    }
    if (record_transcript) t.events = g.transcript().to_jsonl({{"game_id", to_string(id)}});
    return run;
}

BadEventReport bad_event_rates(GameId id, Distinguisher& d, std::size_t trials, const ConstructionParams& p,
                               ProgramPtr program, std::uint64_t seed) {
    BadEventReport rep;
    rep.game = id;
    rep.trials = trials;
    if (trials == 0) return rep;
    for (std::size_t t = 0; t < trials; ++t) {
        const GameRun run = run_game(id, d, p, program, seed, t);
        const auto& tr = run.transcript;
        rep.bad_complete += tr.bad_complete;
        rep.bad_eval += tr.bad_eval;
        if (tr.status == GameStatus::Aborted && !tr.bad_complete && !tr.bad_eval) ++rep.other_aborts;
        rep.flags.push_back({tr.bad_complete, tr.bad_eval});
    }
    const double n = static_cast<double>(trials);
    rep.p_bad_complete = static_cast<double>(rep.bad_complete) / n;
    rep.p_bad_eval = static_cast<double>(rep.bad_eval) / n;
    rep.ci_bad_complete = wilson_interval(rep.bad_complete, trials);
    rep.ci_bad_eval = wilson_interval(rep.bad_eval, trials);
    return rep;
}

}  // namespace crooked
