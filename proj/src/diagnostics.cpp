#include "crooked/diagnostics.hpp"

#include <algorithm>
#include <set>

#include "crooked/errors.hpp"

namespace crooked {

std::vector<MonotoneViolation> monotone_scan(const CfTable& t) {
    std::vector<MonotoneViolation> out;
    for (std::size_t i = 2; i < t.ell(); ++i) {
        for (const auto& [mid, e_mid] : t.round(i)) {
            for (const auto& [prev, e_prev] : t.round(i - 1)) {
                const Gf2Vec next = prev ^ e_mid.y;
                const auto* e_next = t.find(i + 1, next);
                if (!e_next) continue;
                if (e_mid.order > e_prev.order && e_mid.order > e_next->order) out.push_back({i, prev, mid, next});
            }
        }
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        return std::tie(a.round, a.mid, a.prev) < std::tie(b.round, b.mid, b.prev);
    });
    return out;
}

std::vector<BadRegion> bad_region_scan(const std::vector<bool>& honest, std::size_t honest_run,
                                       std::size_t max_length) {
    if (honest_run == 0) throw ParameterError("honest run length must be positive");
    std::vector<std::size_t> bad;
    for (std::size_t k = 0; k < honest.size(); ++k)
        if (!honest[k]) bad.push_back(k);
    std::vector<BadRegion> out;
    const std::size_t reach = honest_run - 1;  // honest elements a region may absorb on each side
    std::size_t k = 0;
    while (k < bad.size()) {
        std::size_t last = k;
        // Dishonest points separated by fewer than honest_run honest ones merge.
        while (last + 1 < bad.size() && bad[last + 1] - bad[last] - 1 < honest_run) ++last;
        BadRegion r;
        r.start = bad[k] >= reach ? bad[k] - reach : 0;
        r.end = std::min(bad[last] + reach, honest.size() - 1);
        r.too_long = r.length() > max_length;
        out.push_back(r);
        k = last + 1;
    }
    return out;
}

std::size_t bad_region_limit(const ConstructionParams& p) { return p.ell / 48; }

namespace {

class TableCf final : public CfOracle {
public:
    explicit TableCf(const CfTable& t) : t_(t) {}
    Gf2Vec cf(std::size_t round, const Gf2Vec& x) override {
        const auto* e = t_.find(round, x);
        if (!e) throw NotEvaluatedError("undefined table point");
        return e->y;
    }

private:
    const CfTable& t_;
};

}  // namespace

std::vector<bool> chain_honesty(const CfTable& t, const PublicRandomness& r, const SubversionProgram& program,
                                const ChainRecord& rec) {
    const std::size_t ell = rec.xs.size() - 2;
    std::vector<bool> out(ell, false);
    TableCf view(t);
    for (std::size_t i = 1; i <= ell; ++i) {
        const auto* e = t.find(i, rec.xs[i]);
        if (!e) continue;
        try {
            out[i - 1] = subverted_cf(view, r, program, i, rec.xs[i]) == e->y;
        } catch (const NotEvaluatedError&) {
            out[i - 1] = false;
        }
    }
    return out;
}

DiagnosticsReport run_diagnostics(const Simulator& sim, std::size_t honest_run) {
    DiagnosticsReport rep;
    const auto* dg = dynamic_cast<const DualGame*>(&sim);
    const CfTable& t = dg ? dg->m_tables() : sim.tables();
    // Chains completed by either side of a dual game; S copies of M chains
    // count once.
    std::vector<const ChainRecord*> chains;
    std::set<std::vector<Gf2Vec>> seen;
    if (dg)
        for (const auto& rec : dg->m_chains())
            if (seen.insert(rec.xs).second) chains.push_back(&rec);
    for (const auto& rec : sim.chains())
        if (seen.insert(rec.xs).second) chains.push_back(&rec);
    rep.monotone_violations = monotone_scan(t).size();
    const std::size_t limit = bad_region_limit(sim.params());
    for (const auto* rec : chains) {
        ++rep.chains;
        for (const auto& r : bad_region_scan(chain_honesty(t, sim.randomness(), sim.program(), *rec), honest_run, limit)) {
            ++rep.bad_regions;
            rep.long_bad_regions += r.too_long;
        }
    }
    return rep;
}

}  // namespace crooked
