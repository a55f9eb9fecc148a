#pragma once

// Shared helpers for the test suites: seeded RNG wrappers and random samplers
// for ring elements and series.  Seeds are fixed so failures reproduce.

#include <cobar/calculus.hpp>
#include <cobar/ring.hpp>
#include <cobar/series.hpp>

#include <cstdint>
#include <random>

namespace testutil {

struct Rng {
    std::mt19937_64 eng;
    explicit Rng(std::uint64_t seed) : eng(seed) {}

    long range(long lo, long hi) {  // inclusive
        return std::uniform_int_distribution<long>(lo, hi)(eng);
    }
    bool chance(double p) { return std::uniform_real_distribution<>(0.0, 1.0)(eng) < p; }
};

inline cobar::RingElem random_elem(Rng& rng, const cobar::RingPtr& r, int width = 3) {
    using cobar::RingElem;
    switch (r->kind) {
        case cobar::Ring::Kind::Rationals: {
            mpq_class q(rng.range(-9, 9), rng.range(1, 9));
            q.canonicalize();
            return RingElem::from_rational(r, q);
        }
        case cobar::Ring::Kind::Integers:
            return RingElem::from_int(r, rng.range(-9, 9));
        case cobar::Ring::Kind::Residues:
            return RingElem::from_int(r, rng.range(0, r->modulus.get_si() - 1));
        default: {
            RingElem acc = cobar::embed(random_elem(rng, r->root(), width), r);
            for (int i = 0; i < width; ++i) {
                RingElem term = cobar::embed(random_elem(rng, r->root(), width), r);
                // random small monomial in the outer generators
                for (const auto& g : r->gens)
                    if (rng.chance(0.5))
                        term = term * RingElem::generator(r, g.name).pow(
                                          static_cast<unsigned>(rng.range(1, 2)));
                acc = acc + term;
            }
            return acc;
        }
    }
}

enum class PowerKind { Any, Even, Odd };

// Random polynomial in t with powers in [val_min, max_deg] of the requested
// power parity; coefficients sampled from the context ring.
inline cobar::CommSeries random_comm_poly(Rng& rng, const cobar::GradingPtr& ctx,
                                          PowerKind kind = PowerKind::Any, int val_min = 1,
                                          int max_deg = -1) {
    using namespace cobar;
    if (max_deg < 0) max_deg = ctx->trunc;
    std::vector<std::pair<int, RingElem>> coeffs;
    for (int i = val_min; i <= max_deg; ++i) {
        if (kind == PowerKind::Even && i % 2 != 0) continue;
        if (kind == PowerKind::Odd && i % 2 != 1) continue;
        if (rng.chance(0.6)) coeffs.emplace_back(i, random_elem(rng, ctx->ring, 2));
    }
    return CommSeries::poly(ctx, coeffs);
}

// Random odd-power series with an invertible linear coefficient (an "F").
inline cobar::CommSeries random_substitution(Rng& rng, const cobar::GradingPtr& ctx) {
    using namespace cobar;
    CommSeries f = random_comm_poly(rng, ctx, PowerKind::Odd, 3);
    RingElem lin = random_elem(rng, ctx->ring, 2);
    while (!lin.is_invertible())
        lin = lin + RingElem::one(ctx->ring);
    return f + CommSeries::t(ctx).scaled(lin);
}

inline cobar::NcSeries random_nc(Rng& rng, const cobar::GradingPtr& ctx, int max_len = -1,
                                 int tries = 6) {
    using namespace cobar;
    if (max_len < 0) max_len = ctx->trunc;
    NcSeries s = NcSeries::zero(ctx);
    for (int i = 0; i < tries; ++i) {
        int len = static_cast<int>(rng.range(0, max_len));
        Word w;
        for (int j = 0; j < len; ++j) w = rng.chance(0.5) ? w.then_t() : w.then_tau();
        s = s + NcSeries::monomial(ctx, w, random_elem(rng, ctx->ring, 2));
    }
    return s;
}

}  // namespace testutil
