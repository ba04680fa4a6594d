#include "crooked/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <exception>
#include <fstream>
#include <istream>
#include <map>
#include <mutex>
#include <ostream>
#include <thread>

#include "crooked/attack.hpp"
#include "crooked/errors.hpp"

namespace crooked {

namespace {

// The world's CF oracle, memoized for the duration of one C~F evaluation.
class MemoWorldCf final : public CfOracle {
public:
    explicit MemoWorldCf(World& w) : w_(w) {}
    Gf2Vec cf(std::size_t round, const Gf2Vec& x) override {
        const QueryPoint key{round, x};
        if (auto it = memo_.find(key); it != memo_.end()) return it->second;
        Gf2Vec y = w_.cf(round, x);
        memo_.emplace(key, y);
        return y;
    }

private:
    World& w_;
    std::map<QueryPoint, Gf2Vec> memo_;
};

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

}  // namespace

Gf2Vec world_cf_tilde(World& w, std::size_t round, const Gf2Vec& x) {
    MemoWorldCf base(w);
    return subverted_cf(base, w.randomness(), w.program(), round, x);
}

// ---------------------------------------------------------------------------

RealWorld::RealWorld(ConstructionParams p, PublicRandomness r, ProgramPtr program, RngStream f_rng)
    : p_(p), r_(std::move(r)), oracle_(p.n, p.ell, f_rng, std::move(program)) {}

Gf2Vec RealWorld::cf(std::size_t round, const Gf2Vec& x) { return crooked::cf(oracle_, r_, round, x); }

Block RealWorld::construction(const Block& in) { return evaluate(oracle_, r_, in.first, in.second); }

Block RealWorld::construction_inverse(const Block& out) { return invert(oracle_, r_, out.first, out.second); }

// ---------------------------------------------------------------------------

nlohmann::json to_json(const RecordedQuery& q) {
    switch (q.kind) {
        case RecordedQuery::Kind::Cf:
            return {{"oracle", "cf"}, {"round", q.round}, {"x", q.a.to_hex()}};
        case RecordedQuery::Kind::Forward:
            return {{"oracle", "p"}, {"dir", "forward"}, {"left", q.a.to_hex()}, {"right", q.b.to_hex()}};
        case RecordedQuery::Kind::Inverse:
            return {{"oracle", "p"}, {"dir", "inverse"}, {"left", q.a.to_hex()}, {"right", q.b.to_hex()}};
    }
    return {};
}

RecordedQuery recorded_query_from_json(const nlohmann::json& j, std::size_t n) {
    try {
        RecordedQuery q;
        const std::string oracle = j.at("oracle").get<std::string>();
        if (oracle == "cf") {
            q.kind = RecordedQuery::Kind::Cf;
            q.round = j.at("round").get<std::size_t>();
            q.a = Gf2Vec::from_hex(n, j.at("x").get<std::string>());
        } else if (oracle == "p") {
            const std::string dir = j.at("dir").get<std::string>();
            if (dir == "forward")
                q.kind = RecordedQuery::Kind::Forward;
            else if (dir == "inverse")
                q.kind = RecordedQuery::Kind::Inverse;
            else
                throw FormatError("unknown direction '" + dir + "'");
            q.a = Gf2Vec::from_hex(n, j.at("left").get<std::string>());
            q.b = Gf2Vec::from_hex(n, j.at("right").get<std::string>());
        } else {
            throw FormatError("unknown oracle '" + oracle + "'");
        }
        return q;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("bad recorded query: ") + e.what());
    }
}

std::vector<RecordedQuery> read_recording(std::istream& is, std::size_t n) {
    std::vector<RecordedQuery> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception&) {
            throw FormatError("line " + std::to_string(lineno) + " is not JSON");
        }
        out.push_back(recorded_query_from_json(j, n));
    }
    return out;
}

void write_recording(std::ostream& os, const std::vector<RecordedQuery>& qs) {
    for (const auto& q : qs) os << to_json(q).dump() << '\n';
}

// ---------------------------------------------------------------------------

void BudgetedWorld::charge() {
    if (log_.size() >= budget_)
        throw BudgetError("distinguisher exceeded its budget of " + std::to_string(budget_) + " queries");
}

Gf2Vec BudgetedWorld::cf(std::size_t round, const Gf2Vec& x) {
    charge();
    log_.push_back({RecordedQuery::Kind::Cf, round, x, Gf2Vec()});
    ++cf_queries_;
    return inner_.cf(round, x);
}

Block BudgetedWorld::construction(const Block& in) {
    charge();
    log_.push_back({RecordedQuery::Kind::Forward, 0, in.first, in.second});
    return inner_.construction(in);
}

Block BudgetedWorld::construction_inverse(const Block& out) {
    charge();
    log_.push_back({RecordedQuery::Kind::Inverse, 0, out.first, out.second});
    return inner_.construction_inverse(out);
}

// ---------------------------------------------------------------------------

std::string ChainWalkDistinguisher::name() const {
    std::string s = rf_first_ ? "chain_walk_rf_first" : "chain_walk";
    if (walks_ != 1) s += ":" + std::to_string(walks_);
    return s;
}

bool ChainWalkDistinguisher::run(World& w, RngStream& rng) {
    const std::size_t n = w.params().n;
    const std::size_t ell = w.params().ell;
    bool ok = true;
    for (std::size_t k = 0; k < walks_; ++k) {
        std::vector<Gf2Vec> xs(ell + 2, Gf2Vec(n));
        xs[0] = Gf2Vec::random(n, rng);
        xs[1] = Gf2Vec::random(n, rng);
        std::optional<Block> early;
        if (rf_first_) early = w.construction({xs[0], xs[1]});
        for (std::size_t i = 1; i <= ell; ++i) xs[i + 1] = xs[i - 1] ^ world_cf_tilde(w, i, xs[i]);
        const Block out = early ? *early : w.construction({xs[0], xs[1]});
        ok = ok && out.first == xs[ell] && out.second == xs[ell + 1];
    }
    return ok;
}

std::size_t ChainWalkDistinguisher::query_bound(const World& w) const {
    return walks_ * (w.params().ell * w.program().query_budget() + 1);
}

bool RandomProbeDistinguisher::run(World& w, RngStream& rng) {
    const std::size_t n = w.params().n;
    const std::size_t ell = w.params().ell;
    bool bit = false;
    for (std::size_t k = 0; k < q_; ++k) {
        const auto pick = rng.uniform(4);
        if (pick < 2) {
            const std::size_t round = 1 + rng.uniform(ell);
            bit ^= w.cf(round, Gf2Vec::random(n, rng)).get(0);
        } else {
            Gf2Vec a = Gf2Vec::random(n, rng);
            Gf2Vec b = Gf2Vec::random(n, rng);
            const Block out = pick == 2 ? w.construction({a, b}) : w.construction_inverse({a, b});
            bit ^= out.first.get(0) ^ out.second.get(0);
        }
    }
    return bit;
}

bool AttackDistinguisher::run(World& w, RngStream&) {
    const std::size_t n = w.params().n;
    const std::size_t ell = w.params().ell;
    const std::size_t lambda = attack_lambda(n, ell);
    if (lambda > n) return false;
    const auto pair = find_collapse_pair(build_system(w.randomness(), n, ell, lambda), w.randomness());
    if (!pair) return false;
    return w.construction(*pair) == predicted_output(ell, pair->first, pair->second);
}

bool ReplayDistinguisher::run(World& w, RngStream&) {
    bool bit = false;
    for (const auto& q : qs_) {
        switch (q.kind) {
            case RecordedQuery::Kind::Cf:
                bit = w.cf(q.round, q.a).get(0);
                break;
            case RecordedQuery::Kind::Forward:
                bit = w.construction({q.a, q.b}).first.get(0);
                break;
            case RecordedQuery::Kind::Inverse:
                bit = w.construction_inverse({q.a, q.b}).first.get(0);
                break;
        }
    }
    return bit;
}

DistinguisherPtr builtin_distinguisher(const std::string& kind, std::size_t q_d, std::size_t n) {
    auto walks_of = [&](const std::string& prefix) -> std::size_t {
        if (kind.size() == prefix.size()) return 1;
        try {
            const long long v = std::stoll(kind.substr(prefix.size() + 1));
            if (v < 1) throw ConfigError("walk count must be positive");
            return static_cast<std::size_t>(v);
        } catch (const std::logic_error&) {
            throw ConfigError("bad walk count in '" + kind + "'");
        }
    };
    auto has_prefix = [&](const std::string& p) {
        return kind == p || (kind.size() > p.size() && kind.compare(0, p.size() + 1, p + ":") == 0);
    };
    if (has_prefix("chain_walk_rf_first"))
        return std::make_shared<ChainWalkDistinguisher>(true, walks_of("chain_walk_rf_first"));
    if (has_prefix("chain_walk")) return std::make_shared<ChainWalkDistinguisher>(false, walks_of("chain_walk"));
    if (kind == "random_probe") return std::make_shared<RandomProbeDistinguisher>(q_d == 0 ? 64 : q_d);
    if (kind == "attack") return std::make_shared<AttackDistinguisher>();
    if (kind.rfind("replay:", 0) == 0) {
        const std::string path = kind.substr(7);
        std::ifstream in(path);
        if (!in) throw ConfigError("cannot open replay file '" + path + "'");
        return std::make_shared<ReplayDistinguisher>(read_recording(in, n));
    }
    throw ConfigError("unknown distinguisher '" + kind + "'");
}

// ---------------------------------------------------------------------------

WorldChoice parse_world(const std::string& s) {
    if (s == "real") return WorldChoice::Real;
    if (s == "ideal") return WorldChoice::Ideal;
    if (s == "both") return WorldChoice::Both;
    throw ConfigError("unknown world '" + s + "' (expected real, ideal or both)");
}

const char* to_string(WorldChoice w) {
    switch (w) {
        case WorldChoice::Real:
            return "real";
        case WorldChoice::Ideal:
            return "ideal";
        case WorldChoice::Both:
            return "both";
    }
    return "?";
}

ConstructionParams ExperimentConfig::params() const {
    try {
        return ConstructionParams::parse(n, ell_profile, eps);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
}

void ExperimentConfig::validate() const {
    if (n < 1 || n > kMaxGf2Bits) throw ConfigError("n must lie in [1, " + std::to_string(kMaxGf2Bits) + "]");
    if (!(eps > 0.0 && eps <= 0.5)) throw ConfigError("eps must lie in (0, 1/2]");
    if (trials < 1) throw ConfigError("trials must be positive");
    if (threads < 1) throw ConfigError("threads must be positive");
    try {
        (void)params();
        builtin_subverter(subverter, n);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    if (distinguisher.rfind("replay:", 0) != 0) builtin_distinguisher(distinguisher, q_d, n);
}

nlohmann::json ExperimentConfig::to_json() const {
    nlohmann::json j = {{"n", n},
                        {"ell_profile", ell_profile},
                        {"eps", eps},
                        {"subverter", subverter},
                        {"distinguisher", distinguisher},
                        {"q_d", q_d},
                        {"q_a", q_a},
                        {"trials", trials},
                        {"seed", seed},
                        {"world", to_string(world)}};
    j["game"] = game ? nlohmann::json(to_string(*game)) : nlohmann::json(nullptr);
    return j;
}

nlohmann::json AdvantageReport::to_json() const {
    nlohmann::json recs = nlohmann::json::array();
    for (const auto& r : records) {
        nlohmann::json j = {{"trial", r.trial},
                            {"world", r.world},
                            {"bit", r.bit},
                            {"aborted", r.aborted},
                            {"s_size", r.s_size},
                            {"m_size", r.m_size},
                            {"queries", r.queries},
                            {"cf_queries", r.cf_queries},
                            {"efficiency_ok", r.efficiency_ok}};
        if (r.aborted) {
            j["abort_kind"] = r.abort_kind;
            j["bad_event"] = r.bad_event;
        }
        if (config.timing) j["wall_ms"] = r.wall_ms;
        recs.push_back(std::move(j));
    }
    return {{"schema", kSchemaVersion},
            {"config", config.to_json()},
            {"real_trials", real_trials},
            {"ideal_trials", ideal_trials},
            {"real_ones", real_ones},
            {"ideal_ones", ideal_ones},
            {"p_real", p_real},
            {"p_ideal", p_ideal},
            {"advantage", advantage},
            {"ci_low", ci.low},
            {"ci_high", ci.high},
            {"aborts", aborts},
            {"bad_complete", bad_complete},
            {"bad_eval", bad_eval},
            {"efficiency_violations", efficiency_violations},
            {"max_queries", max_queries},
            {"records", std::move(recs)}};
}

void AdvantageReport::write_csv(std::ostream& os) const {
    os << "schema,trial,world,bit,aborted,abort_kind,bad_event,s_size,m_size,queries,cf_queries,efficiency_ok";
    if (config.timing) os << ",wall_ms";
    os << '\n';
    for (const auto& r : records) {
        os << kSchemaVersion << ',' << r.trial << ',' << r.world << ',' << r.bit << ',' << r.aborted << ','
           << r.abort_kind << ',' << r.bad_event << ',' << r.s_size << ',' << r.m_size << ',' << r.queries << ','
           << r.cf_queries << ',' << r.efficiency_ok;
        if (config.timing) os << ',' << r.wall_ms;
        os << '\n';
    }
}

namespace {

struct Task {
    std::size_t trial;
    bool real;
};

PublicRandomness trial_randomness(const ConstructionParams& p, std::uint64_t ts) {
    RngStream rng(ts, streams::public_randomness);
    return PublicRandomness::sample(p.n, p.ell, rng);
}

std::size_t subverter_budget(const ExperimentConfig& cfg, const SubversionProgram& prog) {
    return cfg.q_a == 0 ? prog.query_budget() : cfg.q_a;
}

TrialRecord run_task(const ExperimentConfig& cfg, const ConstructionParams& p, const ProgramPtr& program,
                     Distinguisher& d, const Task& task) {
    const auto t0 = std::chrono::steady_clock::now();
    const std::uint64_t ts = trial_seed(cfg.seed, task.trial);
    const PublicRandomness r = trial_randomness(p, ts);
    RngStream d_rng(ts, streams::distinguisher);
    TrialRecord rec;
    rec.trial = task.trial;
    if (task.real) {
        rec.world = "real";
        RealWorld rw(p, r, program, RngStream(ts, streams::round_functions));
        BudgetedWorld bw(rw, cfg.q_d ? cfg.q_d : d.query_bound(rw));
        rec.bit = d.run(bw, d_rng);
        rec.queries = bw.used();
        rec.cf_queries = bw.cf_queries();
        rec.s_size = rw.oracle().table().size();
    } else {
        const GameId id = cfg.game.value_or(GameId::G1);
        rec.world = cfg.game ? std::string(to_string(id)) : "ideal";
        auto game = make_game(id, p, r, program, ts);
        GameWorld gw(*game);
        BudgetedWorld bw(gw, cfg.q_d ? cfg.q_d : d.query_bound(gw));
        try {
            rec.bit = d.run(bw, d_rng);
        } catch (const SimAbort&) {
            rec.bit = false;
        }
        if (const auto& a = game->aborted()) {
            rec.aborted = true;
            rec.abort_kind = to_string(a->kind);
            rec.bad_event = to_string(a->bad);
        }
        rec.queries = bw.used();
        rec.cf_queries = bw.cf_queries();
        rec.s_size = game->tables().size();
        if (const auto* dg = dynamic_cast<const DualGame*>(game.get())) rec.m_size = dg->m_tables().size();
        const std::size_t qa = subverter_budget(cfg, *program);
        const auto& series = game->size_series();
        for (std::size_t k = 0; k < series.size(); ++k)
            if (static_cast<double>(series[k]) > p.efficiency_bound(k + 1, qa)) rec.efficiency_ok = false;
    }
    if (cfg.timing)
        rec.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return rec;
}

// Runs fn(i) for i in [0, count) on `threads` workers; rethrows the first failure.
template <typename Fn>
void parallel_for(std::size_t count, std::size_t threads, Fn&& fn) {
    threads = std::max<std::size_t>(1, std::min(threads, count));
    if (threads == 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex mu;
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(mu);
                    if (!failure) failure = std::current_exception();
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
}

}  // namespace

AdvantageReport run_distinguishing_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    const ConstructionParams p = cfg.params();
    const ProgramPtr program = builtin_subverter(cfg.subverter, cfg.n);
    const DistinguisherPtr d = builtin_distinguisher(cfg.distinguisher, cfg.q_d, cfg.n);

    std::vector<Task> tasks;
    for (std::size_t t = 0; t < cfg.trials; ++t) {
        if (cfg.world != WorldChoice::Ideal) tasks.push_back({t, true});
        if (cfg.world != WorldChoice::Real) tasks.push_back({t, false});
    }
    AdvantageReport rep;
    rep.config = cfg;
    rep.records.resize(tasks.size());
    parallel_for(tasks.size(), cfg.threads,
                 [&](std::size_t i) { rep.records[i] = run_task(cfg, p, program, *d, tasks[i]); });

    for (const auto& r : rep.records) {
        rep.max_queries = std::max(rep.max_queries, r.queries);
        if (r.world == "real") {
            ++rep.real_trials;
            rep.real_ones += r.bit;
        } else {
            ++rep.ideal_trials;
            rep.ideal_ones += r.bit;
            rep.aborts += r.aborted;
            rep.bad_complete += r.bad_event == "BadComplete";
            rep.bad_eval += r.bad_event == "BadEval";
            rep.efficiency_violations += !r.efficiency_ok;
        }
    }
    if (rep.real_trials) rep.p_real = static_cast<double>(rep.real_ones) / static_cast<double>(rep.real_trials);
    if (rep.ideal_trials) rep.p_ideal = static_cast<double>(rep.ideal_ones) / static_cast<double>(rep.ideal_trials);
    if (rep.real_trials && rep.ideal_trials) {
        rep.advantage = rep.p_real - rep.p_ideal;
        rep.ci = difference_interval(rep.real_ones, rep.real_trials, rep.ideal_ones, rep.ideal_trials);
    }
    return rep;
}

nlohmann::json EfficiencyReport::to_json() const {
    nlohmann::json runs_j = nlohmann::json::array();
    for (const auto& r : runs)
        runs_j.push_back({{"trial", r.trial},
                          {"sizes", r.sizes},
                          {"bounds", r.bounds},
                          {"violations", r.violations},
                          {"max_ratio", r.max_ratio},
                          {"monotone", r.monotone}});
    return {{"schema", kSchemaVersion}, {"q_a", q_a}, {"violations", violations}, {"runs", std::move(runs_j)}};
}

EfficiencyReport efficiency_probe(const ExperimentConfig& cfg) {
    cfg.validate();
    const ConstructionParams p = cfg.params();
    const ProgramPtr program = builtin_subverter(cfg.subverter, cfg.n);
    const DistinguisherPtr d = builtin_distinguisher(cfg.distinguisher, cfg.q_d, cfg.n);
    const GameId id = cfg.game.value_or(GameId::G1);
    if (id != GameId::G1 && id != GameId::G5) throw ConfigError("efficiency probe runs the ideal world or G5");

    EfficiencyReport rep;
    rep.q_a = subverter_budget(cfg, *program);
    rep.runs.resize(cfg.trials);
    parallel_for(cfg.trials, cfg.threads, [&](std::size_t t) {
        const std::uint64_t ts = trial_seed(cfg.seed, t);
        auto game = make_game(id, p, trial_randomness(p, ts), program, ts);
        GameWorld gw(*game);
        BudgetedWorld bw(gw, cfg.q_d ? cfg.q_d : d->query_bound(gw));
        RngStream d_rng(ts, streams::distinguisher);
        try {
            d->run(bw, d_rng);
        } catch (const SimAbort&) {
        }
        EfficiencyRun run;
        run.trial = t;
        run.sizes = game->size_series();
        for (std::size_t k = 0; k < run.sizes.size(); ++k) {
            const double bound = p.efficiency_bound(k + 1, rep.q_a);
            run.bounds.push_back(bound);
            if (static_cast<double>(run.sizes[k]) > bound) ++run.violations;
            run.max_ratio = std::max(run.max_ratio, static_cast<double>(run.sizes[k]) / bound);
            if (k > 0 && run.sizes[k] < run.sizes[k - 1]) run.monotone = false;
        }
        rep.runs[t] = std::move(run);
    });
    for (const auto& r : rep.runs) rep.violations += r.violations;
    return rep;
}

}  // namespace crooked
