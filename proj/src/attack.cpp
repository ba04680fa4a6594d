#include "crooked/attack.hpp"

#include <cmath>
#include <string>

#include "crooked/errors.hpp"
#include "crooked/ideal.hpp"
#include "crooked/oracle.hpp"

namespace crooked {

std::size_t attack_lambda(std::size_t n, std::size_t ell) {
    if (ell == 0) throw ParameterError("attack_lambda needs l >= 1");
    return n / ell + 1;
}

std::size_t max_attack_rounds(std::size_t n, double eps) {
    if (!(eps > 0.0 && eps < 1.0)) throw ParameterError("eps must lie in (0, 1)");
    // Small slack so that exact powers of two do not round down.
    return static_cast<std::size_t>(std::floor(2.0 * static_cast<double>(n) / std::log2(1.0 / eps) + 1e-9));
}

AttackInstance build_system(const PublicRandomness& r, std::size_t n, std::size_t ell, std::size_t lambda) {
    if (ell > r.ell()) throw ParameterError("l exceeds the public randomness length");
    if (lambda < 1 || lambda > n) throw ParameterError("lambda must lie in [1, n]");
    if (ell > 0 && r.n() != n) throw ParameterError("public randomness width differs from n");

    AttackInstance inst;
    inst.n = n;
    inst.ell = ell;
    inst.lambda = lambda;
    std::vector<Gf2Vec> odd_rows, even_rows;
    std::vector<bool> odd_b, even_b;
    for (std::size_t i = 1; i <= ell; ++i) {
        const auto& layer = r.layer(i);
        auto& side = (i % 2 == 1) ? inst.odd : inst.even;
        auto& rows = (i % 2 == 1) ? odd_rows : even_rows;
        auto& bits = (i % 2 == 1) ? odd_b : even_b;
        side.rounds.push_back(i);
        for (std::size_t k = 0; k < lambda; ++k) {
            rows.push_back(layer.a.row(k));
            bits.push_back(layer.b.get(k));
        }
    }
    auto finish = [n](SideSystem& side, const std::vector<Gf2Vec>& rows, const std::vector<bool>& bits) {
        side.a = Gf2Mat::stack(rows, n);
        side.b = Gf2Vec(bits.size());
        for (std::size_t k = 0; k < bits.size(); ++k) side.b.set(k, bits[k]);
    };
    finish(inst.odd, odd_rows, odd_b);
    finish(inst.even, even_rows, even_b);
    return inst;
}

bool collapse_predicate(const PublicRandomness& r, std::size_t ell, std::size_t lambda, const Gf2Vec& x0,
                        const Gf2Vec& x1) {
    for (std::size_t i = 1; i <= ell; ++i)
        if (!r.encode(i, i % 2 == 1 ? x1 : x0).has_zero_prefix(lambda)) return false;
    return true;
}

std::optional<std::pair<Gf2Vec, Gf2Vec>> find_collapse_pair(const AttackInstance& inst, const PublicRandomness& r) {
    auto x1 = inst.odd.a.solve(inst.odd.b);
    if (!x1) return std::nullopt;
    auto x0 = inst.even.a.solve(inst.even.b);
    if (!x0) return std::nullopt;
    if (!collapse_predicate(r, inst.ell, inst.lambda, *x0, *x1))
        throw std::logic_error("solved attack system fails the collapse predicate");
    return std::make_pair(std::move(*x0), std::move(*x1));
}

std::pair<Gf2Vec, Gf2Vec> predicted_output(std::size_t ell, const Gf2Vec& x0, const Gf2Vec& x1) {
    return ell % 2 == 0 ? std::make_pair(x0, x1) : std::make_pair(x1, x0);
}

AttackTrial run_attack_trial(const AttackConfig& cfg, std::size_t ell, std::size_t lambda, std::size_t trial) {
    const std::uint64_t ts = trial_seed(cfg.seed, trial);
    RngStream r_rng(ts, streams::public_randomness);
    const PublicRandomness r = PublicRandomness::sample(cfg.n, ell, r_rng);

    AttackTrial rec;
    rec.trial = trial;
    const AttackInstance inst = build_system(r, cfg.n, ell, lambda);
    const auto pair = find_collapse_pair(inst, r);
    if (!pair) return rec;
    rec.solvable = true;
    rec.prefix_ok = collapse_predicate(r, ell, lambda, pair->first, pair->second);
    const auto predicted = predicted_output(ell, pair->first, pair->second);

    SubvertedOracle o(cfg.n, ell, RngStream(ts, streams::round_functions),
                      std::make_shared<PrefixZeroProgram>(lambda));
    rec.real_hit = evaluate(o, r, pair->first, pair->second) == predicted;
    rec.construction_queries = 1;

    PermutationTable p(cfg.n, RngStream(ts, streams::ideal_object));
    rec.ideal_hit = p.forward(*pair) == predicted;
    return rec;
}

AttackReport run_attack(const AttackConfig& cfg) {
    const std::size_t ell = cfg.ell == 0 ? max_attack_rounds(cfg.n, cfg.eps) : cfg.ell;
    if (ell < 1) throw ParameterError("attack needs at least one round");
    if (ell > max_attack_rounds(cfg.n, cfg.eps))
        throw ParameterError("attack needs l <= floor(2n / log2(1/eps)) = " +
                             std::to_string(max_attack_rounds(cfg.n, cfg.eps)));
    AttackReport rep;
    rep.n = cfg.n;
    rep.ell = ell;
    rep.lambda = attack_lambda(cfg.n, ell);
    rep.eps = cfg.eps;
    rep.dishonest_fraction = std::ldexp(1.0, -static_cast<int>(rep.lambda));
    rep.within_eps = rep.dishonest_fraction <= cfg.eps;
    rep.trials = cfg.trials;
    for (std::size_t t = 0; t < cfg.trials; ++t) {
        AttackTrial rec = run_attack_trial(cfg, ell, rep.lambda, t);
        if (rec.solvable) {
            ++rep.solvable;
            if (!rec.real_hit || !rec.prefix_ok) rep.hit_on_every_solvable = false;
        }
        rep.real_hits += rec.real_hit;
        rep.ideal_hits += rec.ideal_hit;
        rep.records.push_back(rec);
    }
    if (cfg.trials > 0) {
        const double tt = static_cast<double>(cfg.trials);
        rep.advantage = (static_cast<double>(rep.real_hits) - static_cast<double>(rep.ideal_hits)) / tt;
        rep.no_solution_rate = static_cast<double>(cfg.trials - rep.solvable) / tt;
    }
    return rep;
}

std::vector<RankScanRow> full_rank_probability_scan(const std::vector<std::size_t>& n_list,
                                                    const std::function<std::size_t(std::size_t)>& ell_rule,
                                                    std::size_t trials, std::uint64_t seed) {
    std::vector<RankScanRow> out;
    if (trials == 0) return out;
    for (std::size_t n : n_list) {
        RankScanRow row;
        row.n = n;
        row.ell = ell_rule(n);
        row.lambda = attack_lambda(n, row.ell);
        row.trials = trials;
        for (std::size_t t = 0; t < trials; ++t) {
            RngStream rng(trial_seed(seed ^ (n * 0x100000001b3ULL), t), streams::public_randomness);
            const PublicRandomness r = PublicRandomness::sample(n, row.ell, rng);
            if (!find_collapse_pair(build_system(r, n, row.ell, row.lambda), r)) ++row.failures;
        }
        row.rate = static_cast<double>(row.failures) / static_cast<double>(trials);
        out.push_back(row);
    }
    return out;
}

}  // namespace crooked
