#pragma once

// The construction C: x_{i+1} = x_{i-1} ^ F~_i(a_i x_i ^ b_i), i = 1..l,
// output (x_l, x_{l+1}). Rounds are 1-based throughout.

#include <string>
#include <utility>
#include <vector>

#include "crooked/gf2.hpp"
#include "crooked/oracle.hpp"
#include "crooked/rng.hpp"

namespace crooked {

struct AffineLayer {
    Gf2Mat a;
    Gf2Mat a_inv;
    Gf2Vec b;
};

class PublicRandomness {
public:
    PublicRandomness() = default;
    explicit PublicRandomness(std::vector<AffineLayer> layers);
    // Checks invertibility and computes the inverses.
    static PublicRandomness from_pairs(std::vector<std::pair<Gf2Mat, Gf2Vec>> pairs);
    static PublicRandomness sample(std::size_t n, std::size_t ell, RngStream& rng);
    static PublicRandomness identity(std::size_t n, std::size_t ell);

    [[nodiscard]] std::size_t ell() const { return layers_.size(); }
    [[nodiscard]] std::size_t n() const { return n_; }
    [[nodiscard]] const AffineLayer& layer(std::size_t round) const;

    // a_i x ^ b_i, the point where F_i is queried for CF_i(x).
    [[nodiscard]] Gf2Vec encode(std::size_t round, const Gf2Vec& x) const;
    [[nodiscard]] Gf2Vec decode(std::size_t round, const Gf2Vec& y) const;

private:
    std::size_t n_ = 0;
    std::vector<AffineLayer> layers_;
};

enum class Profile { Paper8n, PaperEps, Custom };

// Round count plus the simulator's window, adapt positions and middle band.
struct ConstructionParams {
    std::size_t n = 0;
    std::size_t ell = 0;
    std::size_t w = 0;
    std::size_t u_lo = 0;
    std::size_t u_hi = 0;
    std::size_t mid_lo = 0;
    std::size_t mid_hi = 0;
    Profile profile = Profile::Custom;
    double eps = 0.0;

    static ConstructionParams paper_8n(std::size_t n);
    static ConstructionParams paper_eps(std::size_t n, double eps);
    static ConstructionParams custom(std::size_t n, std::size_t ell, std::size_t w, std::size_t u_lo, std::size_t u_hi,
                                     std::size_t mid_lo, std::size_t mid_hi);
    // "8n", "eps" or "custom:l,w,u_lo,u_hi,mid_lo,mid_hi".
    static ConstructionParams parse(std::size_t n, const std::string& profile, double eps = 0.0);
    // The tiny desk profile: n = 20, custom:24,3,12,21,9,15.
    static ConstructionParams tiny() { return custom(20, 24, 3, 12, 21, 9, 15); }

    void validate() const;
    [[nodiscard]] std::string profile_string() const;
    [[nodiscard]] bool in_middle(std::size_t round) const { return round >= mid_lo && round <= mid_hi; }
    // Adapt position for the window starting at s.
    [[nodiscard]] std::size_t adapt_position(std::size_t s) const;
    // Bound on |S.CF| after k external queries: (l q_A / (w / 1.1) + 1) k.
    // With the 8n profile and w = n/10 this is (88 q_A + 1) k.
    [[nodiscard]] double efficiency_bound(std::size_t k, std::size_t q_a) const;
};

// Source of unsubverted round values CF_i(x), real or simulated.
class CfOracle {
public:
    virtual ~CfOracle() = default;
    virtual Gf2Vec cf(std::size_t round, const Gf2Vec& x) = 0;
};

// C~F_i(x) computed by running `program` against `base` through the affine
// layers. CF_i(x) is evaluated first; Q (if given) receives the queried points
// in CF coordinates.
Gf2Vec subverted_cf(CfOracle& base, const PublicRandomness& r, const SubversionProgram& program, std::size_t round,
                    const Gf2Vec& x, QuerySet* q = nullptr);

class RealCf final : public CfOracle {
public:
    RealCf(SubvertedOracle& o, const PublicRandomness& r) : o_(o), r_(r) {}
    Gf2Vec cf(std::size_t round, const Gf2Vec& x) override;

private:
    SubvertedOracle& o_;
    const PublicRandomness& r_;
};

Gf2Vec cf(SubvertedOracle& o, const PublicRandomness& r, std::size_t round, const Gf2Vec& x);
Gf2Vec cf_tilde(SubvertedOracle& o, const PublicRandomness& r, std::size_t round, const Gf2Vec& x,
                QuerySet* q = nullptr);

struct FeistelState {
    Gf2Vec x_prev;
    Gf2Vec x_cur;
    std::size_t round = 0;
};

// One forward step: (x_{i-1}, x_i) at round i-1 becomes (x_i, x_{i+1}).
void step(SubvertedOracle& o, const PublicRandomness& r, FeistelState& st);

std::pair<Gf2Vec, Gf2Vec> evaluate(SubvertedOracle& o, const PublicRandomness& r, const Gf2Vec& x0,
                                   const Gf2Vec& x1);
std::pair<Gf2Vec, Gf2Vec> invert(SubvertedOracle& o, const PublicRandomness& r, const Gf2Vec& xl,
                                 const Gf2Vec& xl1);
// All of x_0..x_{l+1}.
std::vector<Gf2Vec> evaluate_trace(SubvertedOracle& o, const PublicRandomness& r, const Gf2Vec& x0,
                                   const Gf2Vec& x1);

}  // namespace crooked
