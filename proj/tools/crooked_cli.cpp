#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "crooked/attack.hpp"
#include "crooked/diagnostics.hpp"
#include "crooked/errors.hpp"
#include "crooked/games.hpp"
#include "crooked/harness.hpp"

using namespace crooked;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitAssert = 3;

struct Options {
    std::optional<std::size_t> n;
    std::string ell_profile = "custom:24,3,12,21,9,15";
    double eps = 0.0625;
    std::string subverter = "honest";
    std::string distinguisher = "chain_walk";
    std::string game;
    std::string world = "both";
    std::size_t q_d = 0;
    std::size_t q_a = 0;
    std::size_t trials = 100;
    std::uint64_t seed = 1;
    std::size_t threads = 1;
    std::size_t rounds = 0;
    bool timing = false;
    bool events = false;
    std::string out;
    std::string format = "json";
};

ExperimentConfig experiment_config(const Options& o) {
    ExperimentConfig c;
    c.n = o.n.value_or(20);
    c.ell_profile = o.ell_profile;
    c.eps = o.eps;
    c.subverter = o.subverter;
    c.distinguisher = o.distinguisher;
    c.q_d = o.q_d;
    c.q_a = o.q_a;
    c.trials = o.trials;
    c.seed = o.seed;
    c.world = parse_world(o.world);
    if (!o.game.empty()) c.game = parse_game_id(o.game);
    c.threads = o.threads;
    c.timing = o.timing;
    c.validate();
    return c;
}

std::string csv_line(std::initializer_list<std::string> fields) {
    std::string s;
    for (const auto& f : fields) {
        if (!s.empty()) s += ',';
        s += f;
    }
    return s + '\n';
}

std::string b(bool v) { return v ? "1" : "0"; }
std::string num(std::size_t v) { return std::to_string(v); }

// Each command writes its report to `os` and returns the exit code.
int cmd_attack(const Options& o, std::ostream& os) {
    AttackConfig cfg;
    cfg.n = o.n.value_or(32);
    cfg.eps = o.eps;
    cfg.ell = o.rounds;
    cfg.trials = o.trials;
    cfg.seed = o.seed;
    const AttackReport rep = run_attack(cfg);
    if (o.format == "csv") {
        os << csv_line({"trial", "solvable", "prefix_ok", "real_hit", "ideal_hit"});
        for (const auto& t : rep.records)
            os << csv_line({num(t.trial), b(t.solvable), b(t.prefix_ok), b(t.real_hit), b(t.ideal_hit)});
    } else {
        json recs = json::array();
        for (const auto& t : rep.records)
            recs.push_back({{"trial", t.trial},
                            {"solvable", t.solvable},
                            {"prefix_ok", t.prefix_ok},
                            {"real_hit", t.real_hit},
                            {"ideal_hit", t.ideal_hit},
                            {"construction_queries", t.construction_queries},
                            {"distinguisher_f_queries", t.distinguisher_f_queries}});
        json j = {{"schema", kSchemaVersion},
                  {"n", rep.n},
                  {"ell", rep.ell},
                  {"lambda", rep.lambda},
                  {"eps", rep.eps},
                  {"dishonest_fraction", rep.dishonest_fraction},
                  {"within_eps", rep.within_eps},
                  {"seed", cfg.seed},
                  {"trials", rep.trials},
                  {"solvable", rep.solvable},
                  {"real_hits", rep.real_hits},
                  {"ideal_hits", rep.ideal_hits},
                  {"advantage", rep.advantage},
                  {"no_solution_rate", rep.no_solution_rate},
                  {"hit_on_every_solvable", rep.hit_on_every_solvable},
                  {"records", std::move(recs)}};
        os << j.dump(2) << '\n';
    }
    return rep.hit_on_every_solvable ? kExitOk : kExitAssert;
}

int cmd_distinguish(const Options& o, std::ostream& os) {
    const AdvantageReport rep = run_distinguishing_experiment(experiment_config(o));
    if (o.format == "csv")
        rep.write_csv(os);
    else
        os << rep.to_json().dump(2) << '\n';
    return rep.efficiency_violations == 0 ? kExitOk : kExitAssert;
}

// One JSON line per trial of the chosen game (G1 by default), followed by
// its event transcript when requested.
int cmd_simulate(const Options& o, std::ostream& os) {
    const ExperimentConfig cfg = experiment_config(o);
    const ConstructionParams p = cfg.params();
    const ProgramPtr program = builtin_subverter(cfg.subverter, cfg.n);
    const DistinguisherPtr d = builtin_distinguisher(cfg.distinguisher, cfg.q_d, cfg.n);
    const GameId id = cfg.game.value_or(GameId::G1);
    bool all_verified = true;
    if (o.format == "csv")
        os << csv_line({"trial", "status", "decision", "s_size", "m_size", "chains", "verified", "monotone_violations",
                        "long_bad_regions"});
    for (std::size_t t = 0; t < cfg.trials; ++t) {
        GameRun run = run_game(id, *d, p, program, cfg.seed, t, o.events);
        const bool verified = run.game->verify_completed_chains();
        all_verified = all_verified && verified;
        const DiagnosticsReport diag = run_diagnostics(*run.game);
        const std::size_t chains = run.game->chains().size();
        if (o.format == "csv") {
            os << csv_line({num(t), run.transcript.status_string(), b(run.transcript.decision),
                            num(run.transcript.s_size), num(run.transcript.m_size), num(chains), b(verified),
                            num(diag.monotone_violations), num(diag.long_bad_regions)});
            continue;
        }
        json j = run.transcript.summary();
        j["schema"] = kSchemaVersion;
        j["trial"] = t;
        j["chains"] = chains;
        j["verified"] = verified;
        j["monotone_violations"] = diag.monotone_violations;
        j["bad_regions"] = diag.bad_regions;
        j["long_bad_regions"] = diag.long_bad_regions;
        os << j.dump() << '\n';
        if (o.events) os << run.transcript.events;
    }
    return all_verified ? kExitOk : kExitAssert;
}

int cmd_games(const Options& o, std::ostream& os) {
    ExperimentConfig cfg = experiment_config(o);
    const GameId id = cfg.game.value_or(GameId::G5);
    const ConstructionParams p = cfg.params();
    const ProgramPtr program = builtin_subverter(cfg.subverter, cfg.n);
    const DistinguisherPtr d = builtin_distinguisher(cfg.distinguisher, cfg.q_d, cfg.n);
    const BadEventReport rep = bad_event_rates(id, *d, cfg.trials, p, program, cfg.seed);
    if (o.format == "csv") {
        os << csv_line({"trial", "bad_complete", "bad_eval"});
        for (std::size_t t = 0; t < rep.flags.size(); ++t)
            os << csv_line({num(t), b(rep.flags[t][0]), b(rep.flags[t][1])});
        return kExitOk;
    }
    json flags = json::array();
    for (const auto& f : rep.flags) flags.push_back({f[0], f[1]});
    cfg.game = id;
    json j = {{"schema", kSchemaVersion},
              {"config", cfg.to_json()},
              {"game", to_string(id)},
              {"trials", rep.trials},
              {"bad_complete", rep.bad_complete},
              {"bad_eval", rep.bad_eval},
              {"other_aborts", rep.other_aborts},
              {"p_bad_complete", rep.p_bad_complete},
              {"p_bad_eval", rep.p_bad_eval},
              {"ci_bad_complete", {rep.ci_bad_complete.low, rep.ci_bad_complete.high}},
              {"ci_bad_eval", {rep.ci_bad_eval.low, rep.ci_bad_eval.high}},
              {"flags", std::move(flags)}};
    os << j.dump(2) << '\n';
    return kExitOk;
}

int cmd_bench(const Options& o, std::ostream& os) {
    const ExperimentConfig cfg = experiment_config(o);
    const EfficiencyReport rep = efficiency_probe(cfg);
    if (o.format == "csv") {
        os << csv_line({"trial", "k", "size", "bound"});
        for (const auto& r : rep.runs)
            for (std::size_t k = 0; k < r.sizes.size(); ++k) {
                std::ostringstream bound;
                bound << r.bounds[k];
                os << csv_line({num(r.trial), num(k + 1), num(r.sizes[k]), bound.str()});
            }
    } else {
        json j = rep.to_json();
        j["config"] = cfg.to_json();
        os << j.dump(2) << '\n';
    }
    return rep.violations == 0 ? kExitOk : kExitAssert;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Crooked Feistel experiments"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_config("--config", "", "key=value file mirroring the long flags");

    Options o;
    app.add_option("--n", o.n, "Half-block width in bits (attack default 32, otherwise 20)");
    app.add_option("--ell-profile", o.ell_profile, "8n, eps or custom:l,w,u_lo,u_hi,mid_lo,mid_hi")
        ->capture_default_str();
    app.add_option("--eps", o.eps, "Subversion rate bound")->capture_default_str();
    app.add_option("--subverter", o.subverter, "honest, prefix_zero:L, trigger:T[:P], zero, round_dishonest:R,...")
        ->capture_default_str();
    app.add_option("--distinguisher", o.distinguisher, "chain_walk[:W], chain_walk_rf_first[:W], random_probe, "
                                                       "attack, replay:PATH")
        ->capture_default_str();
    app.add_option("--game", o.game, "g1..g5");
    app.add_option("--world", o.world, "real, ideal or both")->capture_default_str();
    app.add_option("--q-d", o.q_d, "Distinguisher query budget (0: its own bound)");
    app.add_option("--q-a", o.q_a, "Subverter query budget (0: the program's declared budget)");
    app.add_option("--rounds", o.rounds, "attack: round count (0: floor(2n / log2(1/eps)))");
    app.add_option("--trials", o.trials)->capture_default_str();
    app.add_option("--seed", o.seed, "Master seed; CROOKED_SEED overrides it")->capture_default_str();
    app.add_option("--threads", o.threads)->capture_default_str()->check(CLI::PositiveNumber);
    app.add_flag("--timing", o.timing, "Include wall-clock times in reports");
    app.add_flag("--events", o.events, "simulate: append each trial's event transcript");
    app.add_option("--out", o.out, "Output path (default stdout)");
    app.add_option("--format", o.format)->check(CLI::IsMember({"json", "csv"}))->capture_default_str();

    auto* attack = app.add_subcommand("attack", "Collapse attack against too few rounds");
    auto* distinguish = app.add_subcommand("distinguish", "Real-vs-ideal advantage experiment");
    auto* simulate = app.add_subcommand("simulate", "Run a distinguisher against the simulator, one line per trial");
    auto* games = app.add_subcommand("games", "Bad-event rates of a hybrid game");
    auto* bench = app.add_subcommand("bench", "Simulator table growth against the efficiency bound");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    if (const char* env = std::getenv("CROOKED_SEED")) {
        try {
            std::size_t pos = 0;
            o.seed = std::stoull(env, &pos);
            if (env[pos] != '\0') throw std::invalid_argument(env);
        } catch (const std::exception&) {
            std::cerr << "error: CROOKED_SEED is not an unsigned integer\n";
            return kExitConfig;
        }
    }

    std::ofstream file;
    if (!o.out.empty()) {
        file.open(o.out);
        if (!file) {
            std::cerr << "error: cannot open " << o.out << '\n';
            return kExitConfig;
        }
    }
    std::ostream& os = o.out.empty() ? std::cout : file;

    try {
        if (attack->parsed()) return cmd_attack(o, os);
        if (distinguish->parsed()) return cmd_distinguish(o, os);
        if (simulate->parsed()) return cmd_simulate(o, os);
        if (games->parsed()) return cmd_games(o, os);
        if (bench->parsed()) return cmd_bench(o, os);
    } catch (const std::invalid_argument& e) {
        // ConfigError, ParameterError and DimensionError
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const FormatError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "assertion failed: " << e.what() << '\n';
        return kExitAssert;
    }
    return kExitConfig;
}
