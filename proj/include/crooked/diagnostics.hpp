#pragma once

// Read-only structural checks over finished runs.

#include <cstddef>
#include <vector>

#include "crooked/games.hpp"
#include "crooked/simulator.hpp"

namespace crooked {

// A length-3 unsubverted chain whose middle value was set after both ends.
struct MonotoneViolation {
    std::size_t round = 0;  // index of the middle element
    Gf2Vec prev;
    Gf2Vec mid;
    Gf2Vec next;
    friend bool operator==(const MonotoneViolation&, const MonotoneViolation&) = default;
};

// Every (x_{i-1}, x_i, x_{i+1}) with x_{i+1} = x_{i-1} ^ CF_i(x_i) and all
// three defined, where the middle has the largest insertion order.
std::vector<MonotoneViolation> monotone_scan(const CfTable& t);

struct BadRegion {
    std::size_t start = 0;  // offsets into the honesty vector, inclusive
    std::size_t end = 0;
    bool too_long = false;
    [[nodiscard]] std::size_t length() const { return end - start + 1; }
    friend bool operator==(const BadRegion&, const BadRegion&) = default;
};

// Maximal stretches that contain a dishonest element and no run of
// `honest_run` consecutive honest elements. Regions longer than `max_length`
// are flagged.
std::vector<BadRegion> bad_region_scan(const std::vector<bool>& honest, std::size_t honest_run = 14,
                                       std::size_t max_length = 0);

// l / 48, which is n / 6 when l = 8n.
std::size_t bad_region_limit(const ConstructionParams& p);

// Honesty of x_1..x_l of a recorded chain, evaluated against table t only.
// Points missing from t count as dishonest.
std::vector<bool> chain_honesty(const CfTable& t, const PublicRandomness& r, const SubversionProgram& program,
                                const ChainRecord& rec);

struct DiagnosticsReport {
    std::size_t monotone_violations = 0;
    std::size_t bad_regions = 0;
    std::size_t long_bad_regions = 0;
    std::size_t chains = 0;
};

// Monotone scan on M (S for G1/G2) plus a bad-region scan of every chain
// completed by S or M, read from the same tables.
DiagnosticsReport run_diagnostics(const Simulator& sim, std::size_t honest_run = 14);

}  // namespace crooked
