#pragma once

// What a distinguisher talks to: a CF oracle and the two-way construction
// (or ideal object), plus the public description it is given.

#include <cstddef>
#include <memory>
#include <string>

#include "crooked/feistel.hpp"
#include "crooked/ideal.hpp"
#include "crooked/rng.hpp"

namespace crooked {

class World {
public:
    virtual ~World() = default;
    virtual Gf2Vec cf(std::size_t round, const Gf2Vec& x) = 0;
    virtual Block construction(const Block& in) = 0;
    virtual Block construction_inverse(const Block& out) = 0;
    [[nodiscard]] virtual const ConstructionParams& params() const = 0;
    [[nodiscard]] virtual const PublicRandomness& randomness() const = 0;
    [[nodiscard]] virtual const SubversionProgram& program() const = 0;
    [[nodiscard]] virtual std::string name() const = 0;
};

// C~F_i(x) computed by the distinguisher itself: it runs the subverter with
// answers taken from the world's CF oracle.
Gf2Vec world_cf_tilde(World& w, std::size_t round, const Gf2Vec& x);

class Distinguisher {
public:
    virtual ~Distinguisher() = default;
    // Issues queries against `w` and returns the decision bit.
    virtual bool run(World& w, RngStream& rng) = 0;
    [[nodiscard]] virtual std::string name() const = 0;
    // Upper bound on the queries this strategy issues.
    [[nodiscard]] virtual std::size_t query_bound(const World& w) const = 0;
};

using DistinguisherPtr = std::shared_ptr<Distinguisher>;

}  // namespace crooked
