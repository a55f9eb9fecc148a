#include <catch2/catch_amalgamated.hpp>

#include <cobar/deform.hpp>

#include "support.hpp"

using namespace cobar;
using Catch::Matchers::ContainsSubstring;

namespace {
GradingPtr qctx(int d, int N) { return Grading::make(Ring::rationals(), d, N); }

bool same_map(const Derivation& a, const Derivation& b) {
    return agree(a.img_tau(), b.img_tau()) && agree(a.img_t(), b.img_t());
}

Derivation cochain(const GradingPtr& ctx, std::vector<std::pair<int, long>> a,
                   std::vector<std::pair<int, long>> b) {
    return Derivation::from_comm(CommSeries::poly_int(ctx, a), CommSeries::poly_int(ctx, b));
}

Derivation random_cochain(testutil::Rng& rng, const GradingPtr& ctx, int max_deg) {
    return Derivation::from_comm(
        testutil::random_comm_poly(rng, ctx, testutil::PowerKind::Any, 1, max_deg),
        testutil::random_comm_poly(rng, ctx, testutil::PowerKind::Any, 1, max_deg));
}

Derivation lift(const Derivation& d, const GradingPtr& into) {
    return d.map_coefficients(into, [&](const RingElem& c) { return embed(c, into->ring); });
}

// Random series with coefficients in the augmentation ideal.
CommSeries ker_poly(testutil::Rng& rng, const GradingPtr& ctx, testutil::PowerKind kind,
                    int val_min, int max_deg) {
    CommSeries s = testutil::random_comm_poly(rng, ctx, kind, val_min, max_deg);
    return s.map_coefficients(
        ctx, [&](const RingElem& c) { return c - embed(c.counit(), ctx->ring); });
}

DeformationOverBase random_def(testutil::Rng& rng, const GradingPtr& ctx, int max_deg) {
    if (ctx->parity_t() == 1)
        return DeformationOverBase(
            MooreStructure::odd(ker_poly(rng, ctx, testutil::PowerKind::Even, 2, max_deg),
                                ker_poly(rng, ctx, testutil::PowerKind::Even, 2, max_deg)));
    return DeformationOverBase(
        MooreStructure::even(ker_poly(rng, ctx, testutil::PowerKind::Any, 1, max_deg)));
}

GaugePair random_pointed(testutil::Rng& rng, const GradingPtr& ctx, bool zero_G) {
    auto kind = ctx->parity_t() == 1 ? testutil::PowerKind::Odd : testutil::PowerKind::Any;
    CommSeries G = zero_G ? CommSeries::zero(ctx) : ker_poly(rng, ctx, kind, 1, 5);
    CommSeries F = CommSeries::t(ctx) + ker_poly(rng, ctx, kind, 1, 5);
    return GaugePair(G, F);
}
}  // namespace

TEST_CASE("deformation bases", "[deform]") {
    RingPtr L = Ring::square_zero(Ring::rationals(), {{"e", 0}});
    GradingPtr ctx = Grading::make(L, 1, 8);
    RingElem eps = RingElem::generator(L, "e");
    CommSeries vt2 = CommSeries::t_power(ctx, 2).scaled(eps);
    DeformationOverBase D(MooreStructure::odd(vt2, vt2));

    CHECK(agree(D.augmentation_image(), MooreStructure::trivial(D.scalar_ctx())));
    CHECK(D.is_infinitesimal());
    CHECK(D.scalar_ctx()->ring->kind == Ring::Kind::Rationals);

    CHECK_THROWS_WITH(DeformationOverBase(MooreStructure::trivial(qctx(1, 8))),
                      ContainsSubstring("extension ring"));

    RingPtr P1 = Ring::polynomial(Ring::rationals(), {{"x", 0}}, 1);
    RingPtr P2 = Ring::polynomial(Ring::rationals(), {{"x", 0}}, 2);
    RingPtr T = Ring::square_zero(P1, {{"y", 0}});
    CHECK(DeformationOverBase(MooreStructure::trivial(Grading::make(P1, 1, 6)))
              .is_infinitesimal());
    CHECK_FALSE(DeformationOverBase(MooreStructure::trivial(Grading::make(P2, 1, 6)))
                    .is_infinitesimal());
    CHECK_FALSE(DeformationOverBase(MooreStructure::trivial(Grading::make(T, 1, 6)))
                    .is_infinitesimal());

    // the augmentation image recovers exactly the scalar part
    testutil::Rng rng(2026'0801);
    for (int it = 0; it < 10; ++it) {
        GradingPtr c2 = Grading::make(L, 2, 8);
        CommSeries u = testutil::random_comm_poly(rng, c2, testutil::PowerKind::Any, 1, 6);
        MooreStructure img =
            DeformationOverBase(MooreStructure::even(u)).augmentation_image();
        CommSeries expect = u.map_coefficients(DeformationOverBase(MooreStructure::even(u))
                                                   .scalar_ctx(),
                                               [](const RingElem& c) { return c.counit(); });
        CHECK(agree(img.u(), expect));
    }
}

TEST_CASE("push-outs along base maps", "[deform]") {
    testutil::Rng rng(2026'0802);

    SECTION("identity map") {
        RingPtr L = Ring::square_zero(Ring::rationals(), {{"e", 0}});
        GradingPtr ctx = Grading::make(L, 1, 8);
        for (int it = 0; it < 5; ++it) {
            DeformationOverBase D = random_def(rng, ctx, 6);
            CHECK(agree(push_out(RingMap::identity(L), D).structure(), D.structure()));
        }
    }

    SECTION("odd universal specialised to a one-generator square-zero base") {
        DeformationOverBase U = universal_odd_deformation(qctx(1, 8));
        const RingPtr& UR = U.ctx()->ring;
        REQUIRE(UR->gens.size() == 4);
        CHECK(UR->gens[0].degree == 4);
        CHECK(UR->gens[1].degree == 10);
        RingPtr L = Ring::square_zero(Ring::rationals(), {{"e", 4}});
        RingElem eps = RingElem::generator(L, "e");
        RingMap f(UR, L,
                  {{"w1", eps},
                   {"w2", RingElem::zero(L)},
                   {"w3", RingElem::zero(L)},
                   {"w4", RingElem::zero(L)}});
        DeformationOverBase D = push_out(f, U);
        GradingPtr ctx = D.ctx();
        CHECK(agree(D.structure().v(), CommSeries::zero(ctx)));
        CHECK(agree(D.structure().w(), CommSeries::t_power(ctx, 2).scaled(eps)));
    }

    SECTION("even universal survives the square-zero quotient") {
        DeformationOverBase U = universal_even_deformation(qctx(2, 6));
        const RingPtr& UR = U.ctx()->ring;
        REQUIRE(UR->gens.size() == 6);
        std::vector<RingGen> gens = UR->gens;
        RingPtr Q = Ring::square_zero(Ring::rationals(), gens);
        std::vector<std::pair<std::string, RingElem>> imgs;
        for (const auto& g : gens) imgs.emplace_back(g.name, RingElem::generator(Q, g.name));
        DeformationOverBase D = push_out(RingMap(UR, Q, imgs), U);
        for (int i = 1; i <= 6; ++i)
            CHECK(D.structure().u()[i] == RingElem::generator(Q, "u" + std::to_string(i)));
    }

    SECTION("composition and equivariance") {
        RingPtr L1 = Ring::polynomial(Ring::rationals(), {{"a", 0}, {"b", 0}}, 2);
        RingPtr L2 = Ring::polynomial(Ring::rationals(), {{"x", 0}}, 2);
        RingPtr L3 = Ring::square_zero(Ring::rationals(), {{"y", 0}});
        RingElem x = RingElem::generator(L2, "x");
        RingMap f(L1, L2, {{"a", x}, {"b", x * x}});
        RingMap g(L2, L3, {{"x", RingElem::generator(L3, "y")}});
        for (int d : {1, 2}) {
            GradingPtr c1 = Grading::make(L1, d, 8);
            for (int it = 0; it < 8; ++it) {
                DeformationOverBase D = random_def(rng, c1, 6);
                CHECK(agree(push_out(g, push_out(f, D)).structure(),
                            push_out(map_compose(g, f), D).structure()));

                GaugePair p = random_pointed(rng, c1, d == 2);
                GradingPtr c2 = Grading::make(L2, d, 8);
                GaugePair fp = p.map_coefficients(c2, [&](const RingElem& c) { return f(c); });
                CHECK(agree(push_out(f, pointed_conjugate(p, D)).structure(),
                            pointed_conjugate(fp, push_out(f, D)).structure()));
            }
        }

        DeformationOverBase D = random_def(rng, Grading::make(L2, 1, 8), 6);
        CHECK_THROWS_WITH(push_out(f, D), ContainsSubstring("domain"));
    }

    SECTION("push-out target must be augmented") {
        RingPtr L1 = Ring::polynomial(Ring::rationals(), {{"a", 0}}, 2);
        RingMap to_scalar(L1, Ring::rationals(), {{"a", RingElem::zero(Ring::rationals())}});
        DeformationOverBase D = random_def(rng, Grading::make(L1, 2, 8), 5);
        CHECK_THROWS_WITH(push_out(to_scalar, D), ContainsSubstring("extension ring"));
    }
}

TEST_CASE("pointed conjugation", "[deform]") {
    testutil::Rng rng(2026'0803);

    SECTION("a linear substitution twists a one-term structure") {
        RingPtr P = Ring::polynomial(Ring::rationals(), {{"x", 0}, {"y", 0}}, 2);
        GradingPtr ctx = Grading::make(P, 2, 6);
        RingElem x = RingElem::generator(P, "x");
        RingElem y = RingElem::generator(P, "y");
        DeformationOverBase D(MooreStructure::even(CommSeries::t(ctx).scaled(x)));
        GaugePair p(CommSeries::zero(ctx), CommSeries::t(ctx) + CommSeries::t(ctx).scaled(y));
        DeformationOverBase moved = pointed_conjugate(p, D);
        CHECK(agree(moved.structure().u(), CommSeries::t(ctx).scaled(x + x * y)));

        CHECK(agree(pointed_conjugate(GaugePair::identity(ctx), D).structure(), D.structure()));

        GaugePair bad(CommSeries::zero(ctx), CommSeries::t(ctx).scaled(RingElem::from_int(P, 2)));
        CHECK_THROWS_WITH(pointed_conjugate(bad, D), ContainsSubstring("pointed"));
    }

    SECTION("pairs with vanishing G fix deformations over square-zero bases") {
        RingPtr L = Ring::square_zero(Ring::rationals(), {{"e1", 0}, {"e2", 0}});
        for (int d : {1, 2}) {
            GradingPtr ctx = Grading::make(L, d, 8);
            for (int it = 0; it < 15; ++it) {
                DeformationOverBase D = random_def(rng, ctx, 6);
                GaugePair p = random_pointed(rng, ctx, true);
                CHECK(agree(pointed_conjugate(p, D).structure(), D.structure()));
            }
        }
    }

    SECTION("nonzero G shifts v but not the underlying class") {
        RingPtr L = Ring::square_zero(Ring::rationals(), {{"e1", 0}, {"e2", 0}});
        GradingPtr ctx = Grading::make(L, 1, 8);
        for (int it = 0; it < 15; ++it) {
            CommSeries w = ker_poly(rng, ctx, testutil::PowerKind::Even, 2, 6);
            DeformationOverBase D(MooreStructure::odd(CommSeries::zero(ctx), w));
            GaugePair p = random_pointed(rng, ctx, false);
            MooreStructure moved = pointed_conjugate(p, D).structure();
            CHECK(agree(moved.v(),
                        (CommSeries::t(ctx) * p.G()).scaled(RingElem::from_int(L, 2))));
            CHECK(agree(moved.w(), w));
            CHECK(agree(normal_form(moved).normal, D.structure()));
        }
    }
}

TEST_CASE("miniversal classification", "[deform]") {
    testutil::Rng rng(2026'0804);

    SECTION("the universal structures classify themselves by identities") {
        for (int d : {1, 2}) {
            DeformationOverBase U = d == 1 ? universal_odd_deformation(qctx(1, 8))
                                           : universal_even_deformation(qctx(2, 6));
            MiniversalClassification C = classify_miniversal(U);
            CHECK(C.gauge.is_identity());
            CHECK(agree(C.transported.structure(), U.structure()));
            for (const auto& g : U.ctx()->ring->gens)
                CHECK(C.f(RingElem::generator(U.ctx()->ring, g.name)) ==
                      RingElem::generator(U.ctx()->ring, g.name));
        }
    }

    SECTION("one-parameter odd example over the dual numbers") {
        RingPtr L = Ring::square_zero(Ring::rationals(), {{"e", 0}});
        GradingPtr ctx = Grading::make(L, 1, 8);
        RingElem eps = RingElem::generator(L, "e");
        CommSeries et2 = CommSeries::t_power(ctx, 2).scaled(eps);
        MiniversalClassification C =
            classify_miniversal(DeformationOverBase(MooreStructure::odd(et2, et2)));

        RingElem mhalf = RingElem::from_rational(L, mpq_class(-1, 2));
        CHECK(agree(C.gauge.G(), CommSeries::t(ctx).scaled(eps * mhalf)));
        CHECK(agree(C.gauge.F(), CommSeries::t(ctx)));
        CHECK(agree(C.transported.structure(),
                    MooreStructure::odd(CommSeries::zero(ctx), et2)));
        CHECK(C.f(RingElem::generator(C.universal.ctx()->ring, "w1")) == eps);
        for (int i = 2; i <= 4; ++i)
            CHECK(C.f(RingElem::generator(C.universal.ctx()->ring, "w" + std::to_string(i)))
                      .is_zero());
        CHECK(C.f_unique);
        CHECK(agree(push_out(C.f, C.universal).structure(), C.transported.structure()));
    }

    SECTION("one-parameter even example") {
        RingPtr L = Ring::polynomial(Ring::rationals(), {{"l1", 0}}, 1);
        GradingPtr ctx = Grading::make(L, 2, 6);
        RingElem l1 = RingElem::generator(L, "l1");
        MiniversalClassification C =
            classify_miniversal(DeformationOverBase(MooreStructure::even(
                CommSeries::t(ctx).scaled(l1))));
        CHECK(C.gauge.is_identity());
        CHECK(C.f(RingElem::generator(C.universal.ctx()->ring, "u1")) == l1);
        for (int i = 2; i <= 6; ++i)
            CHECK(C.f(RingElem::generator(C.universal.ctx()->ring, "u" + std::to_string(i)))
                      .is_zero());
        CHECK(C.f_unique);
        CHECK(agree(push_out(C.f, C.universal).structure(), C.transported.structure()));
    }

    SECTION("round trips over random bases") {
        RingPtr S = Ring::square_zero(Ring::rationals(), {{"e1", 0}, {"e2", 0}});
        RingPtr P = Ring::polynomial(Ring::rationals(), {{"a", 0}, {"b", 0}}, 2);
        for (const RingPtr& L : {S, P}) {
            for (int d : {1, 2}) {
                GradingPtr ctx = Grading::make(L, d, 8);
                for (int it = 0; it < 10; ++it) {
                    DeformationOverBase D = random_def(rng, ctx, 6);
                    MiniversalClassification C = classify_miniversal(D);
                    CHECK(agree(push_out(C.f, C.universal).structure(),
                                C.transported.structure()));
                    EquivalenceCheck eq =
                        verify_equivalence(C.gauge, D.structure(), C.transported.structure());
                    CHECK(eq.equivalent);
                    CHECK(C.f_unique == (L == S));
                    CHECK(is_pointed(C.gauge));
                }
            }
        }
    }

    SECTION("rejects deformations of a nontrivial structure") {
        RingPtr L = Ring::square_zero(Ring::rationals(), {{"e", 0}});
        GradingPtr ctx = Grading::make(L, 1, 8);
        CommSeries w = CommSeries::poly_int(ctx, {{2, 1}}) +
                       CommSeries::t_power(ctx, 2).scaled(RingElem::generator(L, "e"));
        CHECK_THROWS_WITH(
            classify_miniversal(DeformationOverBase(MooreStructure::odd(CommSeries::zero(ctx), w))),
            ContainsSubstring("trivial structure"));
    }
}

TEST_CASE("jet construction and order checks", "[deform]") {
    testutil::Rng rng(2026'0805);
    GradingPtr ce = qctx(2, 8);
    MooreStructure m0e = MooreStructure::trivial(ce);

    SECTION("a linear coefficient that squares to zero passes every order") {
        Derivation m1 = cochain(ce, {{2, 1}}, {});
        for (int n : {1, 2, 3}) {
            DeformationJet J(m0e, 0, n, {m1});
            JetCheck chk = jet_order_check(J);
            CHECK(chk.ok);
            CHECK(chk.first_failing_order == 0);
        }
    }

    SECTION("a non-cocycle coefficient fails at order one") {
        MooreStructure m = MooreStructure::even(CommSeries::poly_int(ce, {{2, 1}}));
        DeformationJet J(m, 0, 2, {cochain(ce, {}, {{1, 1}})});
        JetCheck chk = jet_order_check(J);
        CHECK_FALSE(chk.ok);
        CHECK(chk.first_failing_order == 1);
        CHECK_FALSE(chk.witness.empty());
    }

    SECTION("the zero jet is a deformation to any order") {
        CHECK(jet_order_check(DeformationJet::trivial(m0e, 0, 4)).ok);
    }

    SECTION("coefficients round-trip through the realization") {
        GradingPtr co = qctx(1, 10);
        MooreStructure m = MooreStructure::odd(CommSeries::zero(co),
                                               CommSeries::poly_int(co, {{4, 1}}));
        for (int it = 0; it < 10; ++it) {
            std::vector<Derivation> cs = {random_cochain(rng, co, 7),
                                          random_cochain(rng, co, 7),
                                          random_cochain(rng, co, 7)};
            DeformationJet J(m, 0, 3, cs);
            CHECK(same_map(J.coefficient(0), m.derivation()));
            for (int k = 1; k <= 3; ++k) CHECK(same_map(J.coefficient(k), cs[k - 1]));
            DeformationJet up = J.at_order(5);
            CHECK(up.order() == 5);
            CHECK(same_map(up.coefficient(2), cs[1]));
            CHECK(same_map(up.coefficient(5), Derivation::zero(co)));
            DeformationJet ext = J.extended(cs[0]);
            CHECK(ext.order() == 4);
            CHECK(same_map(ext.coefficient(4), cs[0]));
        }
    }

    SECTION("strict contexts pin the coefficient degrees to the parameter") {
        GradingPtr cs = Grading::make(Ring::rationals(), 2, 6, true);
        MooreStructure ms = MooreStructure::trivial(cs);
        CHECK_NOTHROW(DeformationJet(ms, 2, 2, {cochain(cs, {{1, 1}}, {})}));
        CHECK_THROWS_WITH(DeformationJet(ms, 2, 2, {cochain(cs, {{2, 1}}, {})}),
                          ContainsSubstring("strict"));
    }

    SECTION("the natural parameter degree admits the leading direction") {
        GradingPtr cs = Grading::make(Ring::rationals(), 2, 6, true);
        CHECK(DeformationJet::natural_s_degree(cs) == 2);
        CHECK_NOTHROW(DeformationJet(MooreStructure::trivial(cs), 2, 1,
                                     {cochain(cs, {{1, 1}}, {})}));
        GradingPtr cso = Grading::make(Ring::rationals(), 1, 8, true);
        CHECK(DeformationJet::natural_s_degree(cso) == 4);
        CHECK_NOTHROW(DeformationJet(MooreStructure::trivial(cso), 4, 1,
                                     {cochain(cso, {{2, 1}}, {})}));
    }

    SECTION("shape validation") {
        CHECK_THROWS_WITH(DeformationJet(m0e, 1, 2, {}), ContainsSubstring("even degree"));
        CHECK_THROWS_WITH(DeformationJet(m0e, 0, 0, {}), ContainsSubstring("at least 1"));
        Derivation taued(NcSeries::gen_tau(ce), NcSeries::zero(ce));
        CHECK_THROWS_WITH(DeformationJet(m0e, 0, 1, {taued}),
                          ContainsSubstring("normalised"));
    }
}

TEST_CASE("obstruction values and extendibility", "[deform]") {
    testutil::Rng rng(2026'0806);

    SECTION("even golden value") {
        GradingPtr ce = qctx(2, 8);
        DeformationJet J(MooreStructure::trivial(ce), 0, 1, {cochain(ce, {}, {{2, 1}})});
        CHECK(same_map(obstruction(J), cochain(ce, {}, {{3, 2}})));
    }

    SECTION("the same coefficient is unobstructed when t is odd") {
        GradingPtr co = qctx(1, 8);
        DeformationJet J(MooreStructure::trivial(co), 0, 1, {cochain(co, {}, {{2, 1}})});
        CHECK(same_map(obstruction(J), Derivation::zero(co)));
    }

    SECTION("an unreachable obstruction blocks every extension") {
        GradingPtr co = qctx(1, 12);
        MooreStructure m0 = MooreStructure::trivial(co);
        DeformationJet J(m0, 0, 1, {cochain(co, {}, {{1, 1}})});
        Derivation obs = obstruction(J);
        CHECK(same_map(obs, cochain(co, {}, {{1, 1}})));
        CHECK_FALSE(solve_coboundary(-obs, m0).is_coboundary);
        for (int it = 0; it < 10; ++it) {
            JetCheck chk = jet_order_check(J.extended(random_cochain(rng, co, 9)));
            CHECK_FALSE(chk.ok);
            CHECK(chk.first_failing_order == 2);
        }
    }

    SECTION("a reachable obstruction yields the next coefficient") {
        GradingPtr co = qctx(1, 12);
        MooreStructure m0 = MooreStructure::trivial(co);
        DeformationJet J(m0, 0, 2, {cochain(co, {}, {{2, 1}}), cochain(co, {}, {{3, 1}})});
        REQUIRE(jet_order_check(J).ok);
        // m_1(t^3) telescopes to t^4 and m_2(t^2) contributes 2t^4.
        Derivation obs = obstruction(J);
        CHECK(same_map(obs, cochain(co, {}, {{4, 3}})));
        CoboundaryResult sol = solve_coboundary(-obs, m0);
        REQUIRE(sol.is_coboundary);
        CHECK(jet_order_check(J.extended(sol.preimage)).ok);
    }

    SECTION("random jets against the closed form of the square") {
        GradingPtr co = qctx(1, 12);
        MooreStructure m0 = MooreStructure::trivial(co);
        for (int it = 0; it < 20; ++it) {
            CommSeries B = testutil::random_comm_poly(rng, co, testutil::PowerKind::Even, 2, 8);
            CommSeries C = testutil::random_comm_poly(rng, co, testutil::PowerKind::Any, 1, 8);
            CommSeries z = CommSeries::zero(co);
            DeformationJet J(m0, 0, 2,
                             {Derivation::from_comm(z, B), Derivation::from_comm(z, C)});
            REQUIRE(jet_order_check(J).ok);
            Derivation obs = obstruction(J);
            CommSeries expect = B * C.odd_power_part().divide_by_t() +
                                B.derivative() * C.odd_power_part();
            CHECK(same_map(obs, Derivation::from_comm(z, expect)));
            CoboundaryResult sol = solve_coboundary(-obs, m0);
            REQUIRE(sol.is_coboundary);
            CHECK(jet_order_check(J.extended(sol.preimage)).ok);
        }
    }

    SECTION("rejects jets that already fail") {
        GradingPtr ce = qctx(2, 8);
        MooreStructure m = MooreStructure::even(CommSeries::poly_int(ce, {{2, 1}}));
        DeformationJet J(m, 0, 1, {cochain(ce, {}, {{1, 1}})});
        CHECK_THROWS_WITH(obstruction(J), ContainsSubstring("square-zero"));
    }
}

TEST_CASE("automorphism jets", "[deform]") {
    testutil::Rng rng(2026'0807);
    GradingPtr ce = qctx(2, 8);
    CommSeries z = CommSeries::zero(ce);

    SECTION("the square of tau picks up the square of the first coefficient") {
        AutomorphismJet phi(ce, 0, 2, {{CommSeries::poly_int(ce, {{2, 1}}), z}});
        NcSeries tau = NcSeries::gen_tau(phi.jet_ctx());
        NcSeries img = phi.endo().apply(tau * tau);
        NcSeries s2 = img.map_coefficients(
            ce, [](const RingElem& c) { return c.outer_coefficient(2); });
        NcSeries t1 = NcSeries::gen_t(ce);
        CHECK(agree(s2, t1 * t1 * t1 * t1));
    }

    SECTION("constants stay fixed and words multiply") {
        AutomorphismJet phi(ce, 0, 2,
                            {{CommSeries::poly_int(ce, {{2, 1}}), CommSeries::poly_int(ce, {{3, 1}})},
                             {z, CommSeries::poly_int(ce, {{2, 1}})}});
        NcSeries one = NcSeries::one(phi.jet_ctx());
        CHECK(agree(phi.endo().apply(one), one));
        for (int it = 0; it < 10; ++it) {
            NcSeries a = testutil::random_nc(rng, phi.jet_ctx(), 3);
            NcSeries b = testutil::random_nc(rng, phi.jet_ctx(), 3);
            CHECK(agree(phi.endo().apply(a * b), phi.endo().apply(a) * phi.endo().apply(b)));
        }
        auto [p1, q1] = phi.coefficient(1);
        CHECK(agree(p1, CommSeries::poly_int(ce, {{2, 1}})));
        CHECK(agree(q1, CommSeries::poly_int(ce, {{3, 1}})));
    }

    SECTION("identity jets and zero extensions") {
        AutomorphismJet id = AutomorphismJet::identity(ce, 0, 2);
        CHECK(agree(id.endo().img_tau(), NcSeries::gen_tau(id.jet_ctx())));
        CHECK(agree(id.endo().img_t(), NcSeries::gen_t(id.jet_ctx())));
        AutomorphismJet ext = extend_automorphism(id, {{z, CommSeries::poly_int(ce, {{3, 1}})}});
        CHECK(ext.order() == 3);
        CHECK(agree(ext.coefficient(1).second, z));
        CHECK(agree(ext.coefficient(2).second, z));
        CHECK(agree(ext.coefficient(3).second, CommSeries::poly_int(ce, {{3, 1}})));
    }

    SECTION("adopted realizations are validated") {
        GradingPtr jct =
            Grading::make(Ring::polynomial(Ring::rationals(), {{"s", 0}}, 2), 2, 8);
        NcSeries t2 = NcSeries::gen_t(jct) * NcSeries::gen_t(jct);
        Endomorphism off(NcSeries::gen_tau(jct) + t2, NcSeries::gen_t(jct));
        CHECK_THROWS_WITH(AutomorphismJet(ce, 0, 2, off),
                          ContainsSubstring("identity at s = 0"));
        RingElem s = RingElem::generator(jct->ring, "s");
        Endomorphism crooked(NcSeries::gen_tau(jct),
                             NcSeries::gen_t(jct) +
                                 (NcSeries::gen_tau(jct) * NcSeries::gen_t(jct)).scaled(s));
        CHECK_THROWS_WITH(AutomorphismJet(ce, 0, 2, crooked), ContainsSubstring("tau"));
    }
}

TEST_CASE("integration of infinitesimals", "[deform]") {
    testutil::Rng rng(2026'0808);
    GradingPtr ce = qctx(2, 8);
    MooreStructure m0 = MooreStructure::trivial(ce);
    Derivation phi_t = cochain(ce, {}, {{1, 1}});

    SECTION("the exponential of t d_t rescales t by exp(s)") {
        AutomorphismJet E = integrate_infinitesimal(m0, phi_t, 1, 4);
        long fact = 1;
        for (int k = 1; k <= 4; ++k) {
            fact *= k;
            auto [p, q] = E.coefficient(k);
            CHECK(agree(p, CommSeries::zero(ce)));
            CHECK(agree(q, CommSeries::t(ce).scaled(
                               RingElem::from_rational(ce->ring, mpq_class(1, fact)))));
        }
        Derivation lifted = lift(m0.derivation(), E.jet_ctx());
        CHECK(same_map(conjugate(E.endo(), lifted), lifted));
    }

    SECTION("spacing the parameter leaves gaps") {
        AutomorphismJet E = integrate_infinitesimal(m0, phi_t, 2, 5);
        CHECK(agree(E.coefficient(1).second, CommSeries::zero(ce)));
        CHECK(agree(E.coefficient(2).second, CommSeries::t(ce)));
        CHECK(agree(E.coefficient(3).second, CommSeries::zero(ce)));
        CHECK(agree(E.coefficient(4).second,
                    CommSeries::t(ce).scaled(RingElem::from_rational(ce->ring, mpq_class(1, 2)))));
    }

    SECTION("the zero infinitesimal integrates to the identity") {
        AutomorphismJet E = integrate_infinitesimal(m0, Derivation::zero(ce), 1, 3);
        CHECK(agree(E.endo().img_tau(), NcSeries::gen_tau(E.jet_ctx())));
        CHECK(agree(E.endo().img_t(), NcSeries::gen_t(E.jet_ctx())));
    }

    SECTION("char 2 coefficients are rejected") {
        GradingPtr cf = Grading::make(Ring::residues(2), 2, 6);
        MooreStructure mf = MooreStructure::trivial(cf);
        CHECK_THROWS_WITH(integrate_infinitesimal(mf, cochain(cf, {}, {{1, 1}}), 1, 3),
                          ContainsSubstring("requires rationals"));
    }

    SECTION("non-commuting infinitesimals are rejected") {
        MooreStructure m = MooreStructure::even(CommSeries::poly_int(ce, {{2, 1}}));
        CHECK_THROWS_WITH(integrate_infinitesimal(m, phi_t, 1, 3),
                          ContainsSubstring("commute"));
    }

    SECTION("odd-parity cocycles are rejected even when they bracket to zero") {
        Derivation phi = cochain(ce, {{2, 1}}, {});
        REQUIRE(same_map(hh_differential(phi, m0), Derivation::zero(ce)));
        CHECK_THROWS_WITH(integrate_infinitesimal(m0, phi, 1, 3),
                          ContainsSubstring("even derivation"));
    }

    SECTION("random integrable cochains commute after integration") {
        // Over even t every t^i d_t is an even map; d_tau legs are odd.
        for (int it = 0; it < 8; ++it) {
            Derivation phi = Derivation::from_comm(
                CommSeries::zero(ce),
                testutil::random_comm_poly(rng, ce, testutil::PowerKind::Any, 1, 5));
            AutomorphismJet E = integrate_infinitesimal(m0, phi, 1, 3);
            Derivation lifted = lift(m0.derivation(), E.jet_ctx());
            CHECK(same_map(conjugate(E.endo(), lifted), lifted));
            NcSeries a = testutil::random_nc(rng, E.jet_ctx(), 3);
            NcSeries b = testutil::random_nc(rng, E.jet_ctx(), 3);
            CHECK(agree(E.endo().apply(a * b), E.endo().apply(a) * E.endo().apply(b)));
        }
    }
}

TEST_CASE("trivializing jets", "[deform]") {
    testutil::Rng rng(2026'0809);

    SECTION("the zero jet needs no steps") {
        GradingPtr co = qctx(1, 10);
        MooreStructure m = MooreStructure::odd(CommSeries::zero(co),
                                               CommSeries::poly_int(co, {{4, 1}}));
        TrivializeResult r = trivialize(DeformationJet::trivial(m, 0, 3));
        CHECK(r.success);
        CHECK(r.steps.empty());
        CHECK(same_map(r.reduced.realized(), lift(m.derivation(), r.reduced.jet_ctx())));
    }

    SECTION("a coboundary coefficient is undone by its preimage") {
        GradingPtr co = qctx(1, 12);
        MooreStructure m = MooreStructure::odd(CommSeries::zero(co),
                                               CommSeries::poly_int(co, {{4, 1}}));
        Derivation eta = cochain(co, {}, {{3, 1}});
        Derivation m1 = hh_differential(eta, m);
        REQUIRE(same_map(m1, cochain(co, {{6, 4}}, {})));
        TrivializeResult r = trivialize(DeformationJet(m, 0, 1, {m1}));
        CHECK(r.success);
        REQUIRE(r.steps.size() == 1);
        CHECK(r.steps[0].order == 1);
        CHECK(same_map(r.steps[0].xi, -eta));
        CHECK(same_map(r.reduced.coefficient(1), Derivation::zero(co)));
    }

    SECTION("conjugates of the trivial jet unwind completely") {
        GradingPtr co = qctx(1, 12);
        MooreStructure m = MooreStructure::odd(CommSeries::zero(co),
                                               CommSeries::poly_int(co, {{2, 1}}));
        for (int it = 0; it < 8; ++it) {
            std::vector<std::pair<CommSeries, CommSeries>> coeffs;
            for (int k = 0; k < 4; ++k)
                coeffs.emplace_back(
                    testutil::random_comm_poly(rng, co, testutil::PowerKind::Odd, 1, 7),
                    testutil::random_comm_poly(rng, co, testutil::PowerKind::Odd, 1, 7));
            AutomorphismJet psi(co, 0, 4, coeffs);
            Derivation conj = conjugate(psi.endo(), lift(m.derivation(), psi.jet_ctx()));
            std::vector<Derivation> comps;
            for (int k = 1; k <= 4; ++k)
                comps.push_back(conj.map_coefficients(co, [k](const RingElem& c) {
                    return c.outer_coefficient(static_cast<unsigned>(k));
                }));
            DeformationJet J(m, 0, 4, comps);
            REQUIRE(jet_order_check(J).ok);
            TrivializeResult r = trivialize(J);
            REQUIRE(r.success);
            for (int k = 1; k <= 4; ++k)
                CHECK(same_map(r.reduced.coefficient(k), Derivation::zero(co)));

            TrivializeResult partial = trivialize(J, 2);
            CHECK(partial.success);
            CHECK(same_map(partial.reduced.coefficient(1), Derivation::zero(co)));
            CHECK(same_map(partial.reduced.coefficient(2), Derivation::zero(co)));
        }
    }

    SECTION("a stuck class over char 2 is still reachable by a pointed pair") {
        GradingPtr cf = Grading::make(Ring::residues(2), 2, 8);
        MooreStructure mf = MooreStructure::trivial(cf);
        Derivation m2 = cochain(cf, {{2, 1}}, {});
        DeformationJet J(mf, 0, 2, {Derivation::zero(cf), m2});
        TrivializeResult r = trivialize(J);
        CHECK_FALSE(r.success);
        CHECK(r.stuck_order == 2);
        CHECK(same_map(r.stuck_class, m2));
        CHECK_THAT(r.detail, ContainsSubstring("not a coboundary"));

        const GradingPtr& jctx = J.jet_ctx();
        RingElem s = RingElem::generator(jctx->ring, "s");
        GaugePair cert(CommSeries::t(jctx).scaled(s), CommSeries::t(jctx));
        MooreStructure lifted = mf.map_coefficients(
            jctx, [&](const RingElem& c) { return embed(c, jctx->ring); });
        MooreStructure moved = act(cert, lifted);
        CHECK(same_map(moved.derivation(), J.realized()));
    }

    SECTION("preconditions") {
        GradingPtr co = qctx(1, 10);
        MooreStructure bent = MooreStructure::odd(CommSeries::poly_int(co, {{2, 1}}),
                                                  CommSeries::zero(co));
        CHECK_THROWS_WITH(trivialize(DeformationJet::trivial(bent, 0, 2)),
                          ContainsSubstring("normal-form"));
        GradingPtr ce = qctx(2, 8);
        MooreStructure m = MooreStructure::even(CommSeries::poly_int(ce, {{2, 1}}));
        DeformationJet bad(m, 0, 1, {cochain(ce, {}, {{1, 1}})});
        CHECK_THROWS_WITH(trivialize(bad), ContainsSubstring("square-zero"));
    }
}

TEST_CASE("comparing obstructions across conjugate jets", "[deform]") {
    testutil::Rng rng(2026'0810);
    GradingPtr co = qctx(1, 12);
    MooreStructure m = MooreStructure::odd(CommSeries::zero(co),
                                           CommSeries::poly_int(co, {{4, 1}}));

    SECTION("identical jets under the identity") {
        DeformationJet J(m, 0, 1, {cochain(co, {}, {{2, 1}})});
        ObstructionComparison cmp =
            obstructions_cohomologous_check(J, J, AutomorphismJet::identity(co, 0, 1));
        CHECK(cmp.cohomologous);
        CHECK(same_map(cmp.difference, Derivation::zero(co)));
        CHECK(same_map(cmp.xi, Derivation::zero(co)));
        CHECK(cmp.xi_certifies);
    }

    SECTION("random conjugates stay cohomologous with a certifying discrepancy") {
        for (int it = 0; it < 8; ++it) {
            CommSeries B = testutil::random_comm_poly(rng, co, testutil::PowerKind::Even, 2, 8);
            DeformationJet J1(m, 0, 1,
                              {Derivation::from_comm(CommSeries::zero(co), B)});
            AutomorphismJet psi(
                co, 0, 1,
                {{testutil::random_comm_poly(rng, co, testutil::PowerKind::Odd, 1, 7),
                  testutil::random_comm_poly(rng, co, testutil::PowerKind::Odd, 1, 7)}});
            Derivation conj = conjugate(psi.endo(), J1.realized());
            Derivation comp1 = conj.map_coefficients(
                co, [](const RingElem& c) { return c.outer_coefficient(1); });
            DeformationJet J2(m, 0, 1, {comp1});
            ObstructionComparison cmp = obstructions_cohomologous_check(J1, J2, psi);
            CHECK(cmp.cohomologous);
            CHECK(cmp.xi_certifies);
        }
    }

    SECTION("shape and conjugacy preconditions") {
        DeformationJet J(m, 0, 1, {cochain(co, {}, {{2, 1}})});
        CHECK_THROWS_WITH(
            obstructions_cohomologous_check(J, J.at_order(2),
                                            AutomorphismJet::identity(co, 0, 1)),
            ContainsSubstring("same shape"));
        CHECK_THROWS_WITH(
            obstructions_cohomologous_check(J, J, AutomorphismJet::identity(co, 0, 2)),
            ContainsSubstring("shape of the deformation"));
        DeformationJet other(m, 0, 1, {cochain(co, {}, {{2, 1}, {4, 1}})});
        CHECK_THROWS_WITH(
            obstructions_cohomologous_check(J, other, AutomorphismJet::identity(co, 0, 1)),
            ContainsSubstring("not conjugate"));
    }

    SECTION("char-2 pointed certificate compares degenerately") {
        GradingPtr cf = Grading::make(Ring::residues(2), 2, 8);
        MooreStructure mf = MooreStructure::trivial(cf);
        DeformationJet Jtriv = DeformationJet::trivial(mf, 0, 2);
        DeformationJet Jstuck(mf, 0, 2, {Derivation::zero(cf), cochain(cf, {{2, 1}}, {})});
        AutomorphismJet psi(cf, 0, 2, {{CommSeries::t(cf), CommSeries::zero(cf)}});
        ObstructionComparison cmp = obstructions_cohomologous_check(Jtriv, Jstuck, psi);
        CHECK(cmp.cohomologous);
        CHECK(same_map(cmp.difference, Derivation::zero(cf)));
        CHECK(same_map(cmp.xi, Derivation::zero(cf)));
        CHECK(cmp.xi_certifies);
    }
}
