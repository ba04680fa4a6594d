#include "crooked/feistel.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "crooked/errors.hpp"

namespace crooked {

PublicRandomness::PublicRandomness(std::vector<AffineLayer> layers) : layers_(std::move(layers)) {
    if (layers_.empty()) return;
    n_ = layers_.front().b.size();
    for (const auto& l : layers_) {
        if (l.a.n_rows() != n_ || l.a.n_cols() != n_ || l.a_inv.n_rows() != n_ || l.b.size() != n_)
            throw DimensionError("affine layer shape mismatch");
        if (!(l.a * l.a_inv == Gf2Mat::identity(n_))) throw ParameterError("a_inv is not the inverse of a");
    }
}

PublicRandomness PublicRandomness::from_pairs(std::vector<std::pair<Gf2Mat, Gf2Vec>> pairs) {
    std::vector<AffineLayer> layers;
    layers.reserve(pairs.size());
    for (auto& [a, b] : pairs) {
        if (a.n_rows() != a.n_cols()) throw DimensionError("a_i must be square");
        auto inv = a.inverse();
        if (!inv) throw ParameterError("a_i is not invertible");
        layers.push_back({std::move(a), std::move(*inv), std::move(b)});
    }
    return PublicRandomness(std::move(layers));
}

PublicRandomness PublicRandomness::sample(std::size_t n, std::size_t ell, RngStream& rng) {
    std::vector<AffineLayer> layers;
    layers.reserve(ell);
    for (std::size_t i = 0; i < ell; ++i) {
        Gf2Mat a = sample_invertible(n, rng);
        Gf2Mat a_inv = *a.inverse();
        layers.push_back({std::move(a), std::move(a_inv), Gf2Vec::random(n, rng)});
    }
    PublicRandomness r;
    r.n_ = n;
    r.layers_ = std::move(layers);
    return r;
}

PublicRandomness PublicRandomness::identity(std::size_t n, std::size_t ell) {
    PublicRandomness r;
    r.n_ = n;
    r.layers_.assign(ell, AffineLayer{Gf2Mat::identity(n), Gf2Mat::identity(n), Gf2Vec(n)});
    return r;
}

const AffineLayer& PublicRandomness::layer(std::size_t round) const {
    if (round < 1 || round > layers_.size())
        throw IndexError("round " + std::to_string(round) + " outside 1.." + std::to_string(layers_.size()));
    return layers_[round - 1];
}

Gf2Vec PublicRandomness::encode(std::size_t round, const Gf2Vec& x) const {
    const auto& l = layer(round);
    return l.a * x ^ l.b;
}

Gf2Vec PublicRandomness::decode(std::size_t round, const Gf2Vec& y) const {
    const auto& l = layer(round);
    return l.a_inv * (y ^ l.b);
}

// ---------------------------------------------------------------------------

ConstructionParams ConstructionParams::paper_8n(std::size_t n) {
    ConstructionParams p;
    p.n = n;
    p.ell = 8 * n;
    p.w = std::max<std::size_t>(2, n / 10);
    p.u_lo = 4 * n;
    p.u_hi = 7 * n;
    p.mid_lo = 3 * n;
    p.mid_hi = 5 * n;
    p.profile = Profile::Paper8n;
    p.validate();
    return p;
}

ConstructionParams ConstructionParams::paper_eps(std::size_t n, double eps) {
    if (!(eps > 0.0 && eps <= 0.5)) throw ParameterError("eps must lie in (0, 1/2]");
    ConstructionParams p;
    p.n = n;
    p.ell = static_cast<std::size_t>(std::ceil(2000.0 * static_cast<double>(n) / std::log2(1.0 / eps)));
    // Every c*n of the 8n profile becomes c*l/8.
    p.w = std::max<std::size_t>(2, p.ell / 80);
    p.u_lo = p.ell / 2;
    p.u_hi = 7 * p.ell / 8;
    p.mid_lo = 3 * p.ell / 8;
    p.mid_hi = 5 * p.ell / 8;
    p.profile = Profile::PaperEps;
    p.eps = eps;
    p.validate();
    return p;
}

ConstructionParams ConstructionParams::custom(std::size_t n, std::size_t ell, std::size_t w, std::size_t u_lo,
                                              std::size_t u_hi, std::size_t mid_lo, std::size_t mid_hi) {
    ConstructionParams p;
    p.n = n;
    p.ell = ell;
    p.w = w;
    p.u_lo = u_lo;
    p.u_hi = u_hi;
    p.mid_lo = mid_lo;
    p.mid_hi = mid_hi;
    p.profile = Profile::Custom;
    p.validate();
    return p;
}

ConstructionParams ConstructionParams::parse(std::size_t n, const std::string& profile, double eps) {
    if (profile == "8n") return paper_8n(n);
    if (profile == "eps") return paper_eps(n, eps);
    if (profile.rfind("custom:", 0) == 0) {
        std::vector<std::size_t> v;
        std::istringstream is(profile.substr(7));
        std::string tok;
        while (std::getline(is, tok, ',')) {
            std::size_t pos = 0;
            unsigned long long x = 0;
            try {
                x = std::stoull(tok, &pos);
            } catch (const std::exception&) {
                pos = std::string::npos;
            }
            if (pos != tok.size() || tok.empty()) throw ParameterError("bad custom profile field '" + tok + "'");
            v.push_back(static_cast<std::size_t>(x));
        }
        if (v.size() != 6) throw ParameterError("custom profile needs 6 fields: l,w,u_lo,u_hi,mid_lo,mid_hi");
        return custom(n, v[0], v[1], v[2], v[3], v[4], v[5]);
    }
    throw ParameterError("unknown profile '" + profile + "'");
}

void ConstructionParams::validate() const {
    auto fail = [&](const std::string& why) { throw ParameterError("profile " + profile_string() + ": " + why); };
    if (n < 1) fail("n must be positive");
    if (ell < 4) fail("l must be at least 4");
    if (w < 2 || w >= ell) fail("need 2 <= w < l");
    if (u_lo < 2) fail("need u_lo >= 2");
    if (u_hi > ell - 2) fail("need u_hi <= l - 2");
    if (mid_lo < 1 || mid_lo > u_lo) fail("need 1 <= mid_lo <= u_lo");
    if (u_lo + 1 > mid_hi) fail("need u_lo + 1 <= mid_hi");
    if (mid_hi + w - 1 >= u_hi) fail("need mid_hi + w - 1 < u_hi");
}

std::string ConstructionParams::profile_string() const {
    switch (profile) {
        case Profile::Paper8n:
            return "8n";
        case Profile::PaperEps:
            return "eps";
        case Profile::Custom:
            break;
    }
    return "custom:" + std::to_string(ell) + "," + std::to_string(w) + "," + std::to_string(u_lo) + "," +
           std::to_string(u_hi) + "," + std::to_string(mid_lo) + "," + std::to_string(mid_hi);
}

std::size_t ConstructionParams::adapt_position(std::size_t s) const {
    const std::size_t e = s + w - 1;
    return (e < mid_lo || s > mid_hi) ? u_lo : u_hi;
}

double ConstructionParams::efficiency_bound(std::size_t k, std::size_t q_a) const {
    const double kk = static_cast<double>(k);
    const double q = static_cast<double>(q_a);
    if (profile == Profile::Paper8n) return (88.0 * q + 1.0) * kk;
    return (static_cast<double>(ell) * q * 1.1 / static_cast<double>(w) + 1.0) * kk;
}

// ---------------------------------------------------------------------------

namespace {

class CfBackedRoundOracle final : public RoundOracle {
public:
    CfBackedRoundOracle(CfOracle& base, const PublicRandomness& r, QuerySet* q) : base_(base), r_(r), q_(q) {}
    Gf2Vec query(std::size_t round, const Gf2Vec& y) override {
        Gf2Vec x = r_.decode(round, y);
        Gf2Vec v = base_.cf(round, x);
        if (q_) q_->insert({round, std::move(x)});
        return v;
    }
    [[nodiscard]] std::size_t n() const override { return r_.n(); }
    [[nodiscard]] std::size_t ell() const override { return r_.ell(); }

private:
    CfOracle& base_;
    const PublicRandomness& r_;
    QuerySet* q_;
};

}  // namespace

Gf2Vec subverted_cf(CfOracle& base, const PublicRandomness& r, const SubversionProgram& program, std::size_t round,
                    const Gf2Vec& x, QuerySet* q) {
    base.cf(round, x);
    if (q) q->insert({round, x});
    CfBackedRoundOracle inner(base, r, q);
    BudgetedRoundOracle budgeted(inner, program.query_budget(), program.name());
    Gf2Vec y = program.evaluate(round, r.encode(round, x), budgeted);
    if (y.size() != r.n()) throw DimensionError("subversion program returned " + std::to_string(y.size()) + " bits");
    return y;
}

Gf2Vec RealCf::cf(std::size_t round, const Gf2Vec& x) { return o_.query_f(round, r_.encode(round, x)); }

Gf2Vec cf(SubvertedOracle& o, const PublicRandomness& r, std::size_t round, const Gf2Vec& x) {
    return o.query_f(round, r.encode(round, x));
}

Gf2Vec cf_tilde(SubvertedOracle& o, const PublicRandomness& r, std::size_t round, const Gf2Vec& x, QuerySet* q) {
    const Gf2Vec y = r.encode(round, x);
    Gf2Vec out = o.query_f_tilde(round, y);
    if (q)
        for (const auto& p : o.query_log_lookup(round, y)) q->insert({p.round, r.decode(p.round, p.x)});
    return out;
}

void step(SubvertedOracle& o, const PublicRandomness& r, FeistelState& st) {
    const std::size_t i = st.round + 1;
    Gf2Vec next = st.x_prev ^ cf_tilde(o, r, i, st.x_cur);
    st.x_prev = std::move(st.x_cur);
    st.x_cur = std::move(next);
    st.round = i;
}

namespace {

void check_inputs(const SubvertedOracle& o, const PublicRandomness& r, const Gf2Vec& a, const Gf2Vec& b) {
    if (a.size() != o.n() || b.size() != o.n()) throw DimensionError("construction input width differs from n");
    if (r.ell() > o.ell()) throw ParameterError("public randomness has more rounds than the oracle");
    if (r.ell() > 0 && r.n() != o.n()) throw DimensionError("public randomness width differs from n");
}

}  // namespace

std::pair<Gf2Vec, Gf2Vec> evaluate(SubvertedOracle& o, const PublicRandomness& r, const Gf2Vec& x0,
                                   const Gf2Vec& x1) {
    check_inputs(o, r, x0, x1);
    FeistelState st{x0, x1, 0};
    while (st.round < r.ell()) step(o, r, st);
    return {std::move(st.x_prev), std::move(st.x_cur)};
}

std::pair<Gf2Vec, Gf2Vec> invert(SubvertedOracle& o, const PublicRandomness& r, const Gf2Vec& xl, const Gf2Vec& xl1) {
    check_inputs(o, r, xl, xl1);
    // lo = x_i, hi = x_{i+1}; x_{i-1} = x_{i+1} ^ C~F_i(x_i).
    Gf2Vec hi = xl1;
    Gf2Vec lo = xl;
    for (std::size_t i = r.ell(); i >= 1; --i) {
        Gf2Vec prev = hi ^ cf_tilde(o, r, i, lo);
        hi = std::move(lo);
        lo = std::move(prev);
    }
    return {std::move(lo), std::move(hi)};
}

std::vector<Gf2Vec> evaluate_trace(SubvertedOracle& o, const PublicRandomness& r, const Gf2Vec& x0,
                                   const Gf2Vec& x1) {
    check_inputs(o, r, x0, x1);
    std::vector<Gf2Vec> xs{x0, x1};
    xs.reserve(r.ell() + 2);
    for (std::size_t i = 1; i <= r.ell(); ++i) xs.push_back(xs[i - 1] ^ cf_tilde(o, r, i, xs[i]));
    return xs;
}

}  // namespace crooked
