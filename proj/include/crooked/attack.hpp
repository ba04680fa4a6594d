#pragma once

// Distinguisher against too few rounds: pick (x0, x1) so that every encoded
// round input a_i x_i ^ b_i starts with lambda zero bits. Under the
// prefix-zero subverter every round then outputs 0^n and the chain just
// alternates x0, x1.

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "crooked/feistel.hpp"
#include "crooked/gf2.hpp"

namespace crooked {

// floor(n / l + 1)
std::size_t attack_lambda(std::size_t n, std::size_t ell);
// floor(2n / log2(1/eps))
std::size_t max_attack_rounds(std::size_t n, double eps);

// A x = B  <=>  every listed round's encoded input has a zero prefix.
struct SideSystem {
    std::vector<std::size_t> rounds;
    Gf2Mat a;
    Gf2Vec b;
};

struct AttackInstance {
    std::size_t n = 0;
    std::size_t ell = 0;
    std::size_t lambda = 0;
    SideSystem odd;   // solved by x1
    SideSystem even;  // solved by x0
};

AttackInstance build_system(const PublicRandomness& r, std::size_t n, std::size_t ell, std::size_t lambda);

// True when x_i (x1 for odd i, x0 for even i) encodes to a lambda-zero prefix
// at every round 1..l.
bool collapse_predicate(const PublicRandomness& r, std::size_t ell, std::size_t lambda, const Gf2Vec& x0,
                        const Gf2Vec& x1);

// Empty when either side is inconsistent. The returned pair is re-verified.
std::optional<std::pair<Gf2Vec, Gf2Vec>> find_collapse_pair(const AttackInstance& inst, const PublicRandomness& r);

// (x0, x1) for even l, (x1, x0) for odd l.
std::pair<Gf2Vec, Gf2Vec> predicted_output(std::size_t ell, const Gf2Vec& x0, const Gf2Vec& x1);

struct AttackConfig {
    std::size_t n = 32;
    double eps = 0.0625;
    std::size_t ell = 0;  // 0: floor(2n / log2(1/eps))
    std::size_t trials = 100;
    std::uint64_t seed = 1;
};

struct AttackTrial {
    std::size_t trial = 0;
    bool solvable = false;
    bool prefix_ok = false;  // every encoded round input had lambda zero bits
    bool real_hit = false;
    bool ideal_hit = false;
    std::size_t construction_queries = 0;
    std::size_t distinguisher_f_queries = 0;
};

struct AttackReport {
    std::size_t n = 0;
    std::size_t ell = 0;
    std::size_t lambda = 0;
    double eps = 0.0;
    double dishonest_fraction = 0.0;  // 2^-lambda
    bool within_eps = false;          // 2^-lambda <= eps
    std::size_t trials = 0;
    std::size_t solvable = 0;
    std::size_t real_hits = 0;
    std::size_t ideal_hits = 0;
    double advantage = 0.0;
    double no_solution_rate = 0.0;
    bool hit_on_every_solvable = true;
    std::vector<AttackTrial> records;
};

// One (R, F) draw per trial. The ideal side compares a fresh random
// permutation's output on the same input with the same prediction.
AttackTrial run_attack_trial(const AttackConfig& cfg, std::size_t ell, std::size_t lambda, std::size_t trial);
AttackReport run_attack(const AttackConfig& cfg);

struct RankScanRow {
    std::size_t n = 0;
    std::size_t ell = 0;
    std::size_t lambda = 0;
    std::size_t trials = 0;
    std::size_t failures = 0;
    double rate = 0.0;
};

// Empirical Pr[no collapse pair] for each n, with l = ell_rule(n).
std::vector<RankScanRow> full_rank_probability_scan(const std::vector<std::size_t>& n_list,
                                                    const std::function<std::size_t(std::size_t)>& ell_rule,
                                                    std::size_t trials, std::uint64_t seed);

}  // namespace crooked
