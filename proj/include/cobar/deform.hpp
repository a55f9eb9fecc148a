#pragma once

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include <cobar/hochschild.hpp>

namespace cobar {

namespace detail {

// Context with the same grading data over the given coefficient ring.
inline GradingPtr with_ring(const GradingPtr& base, const RingPtr& ring) {
    return Grading::make(ring, base->d, base->trunc, base->strict);
}

inline GradingPtr scalar_context(const GradingPtr& ctx) {
    return with_ring(ctx, ctx->ring->root());
}

inline CommSeries embed_series(const CommSeries& c, const GradingPtr& into) {
    return c.map_coefficients(into, [&](const RingElem& x) { return embed(x, into->ring); });
}

inline Derivation embed_derivation(const Derivation& d, const GradingPtr& into) {
    return d.map_coefficients(into, [&](const RingElem& x) { return embed(x, into->ring); });
}

// Coefficient of the k-th power of the outer generator, over the inner
// context.  Requires a single-generator extension ring.
inline Derivation outer_component(const Derivation& d, unsigned k, const GradingPtr& inner) {
    return d.map_coefficients(inner,
                              [k](const RingElem& x) { return x.outer_coefficient(k); });
}

}  // namespace detail

// Composite ring map x -> g(f(x)).
inline RingMap map_compose(const RingMap& g, const RingMap& f) {
    if (!f.to()->same_as(*g.from()))
        throw Error("ring map composition requires matching middle rings");
    std::vector<std::pair<std::string, RingElem>> imgs;
    for (const auto& [name, img] : f.images()) imgs.emplace_back(name, g(img));
    return RingMap(f.from(), g.to(), std::move(imgs));
}

// A Moore structure over an augmented extension ring, viewed relative to the
// augmentation onto the scalars.  The augmentation image is the structure
// being deformed; the genuinely deformed part of every coefficient lies in
// the augmentation ideal automatically.
class DeformationOverBase {
public:
    explicit DeformationOverBase(MooreStructure structure) : structure_(std::move(structure)) {
        if (!structure_.ctx()->ring->is_extension())
            throw Error("a deformation base must be an augmented extension ring");
    }

    const MooreStructure& structure() const { return structure_; }
    const GradingPtr& ctx() const { return structure_.ctx(); }
    GradingPtr scalar_ctx() const { return detail::scalar_context(structure_.ctx()); }

    // Push down along the augmentation: the undeformed structure.
    MooreStructure augmentation_image() const {
        GradingPtr sc = scalar_ctx();
        return structure_.map_coefficients(sc, [](const RingElem& c) { return c.counit(); });
    }

    // (ker eps)^2 = 0: a one-level square-zero extension, or a polynomial
    // extension truncated at degree 1.
    bool is_infinitesimal() const {
        const RingPtr& r = structure_.ctx()->ring;
        if (r->base->is_extension()) return false;
        return r->kind == Ring::Kind::SquareZero ||
               (r->kind == Ring::Kind::Polynomial && r->trunc <= 1);
    }

    std::string str() const { return structure_.str(); }

private:
    MooreStructure structure_;
};

// Base change along an augmented-ring map: apply f to every coefficient.
inline DeformationOverBase push_out(const RingMap& f, const DeformationOverBase& D) {
    if (!f.from()->same_as(*D.ctx()->ring))
        throw Error("push-out map domain does not match the deformation base");
    if (!f.to()->is_extension())
        throw Error("push-out target must be an augmented extension ring");
    GradingPtr nctx = detail::with_ring(D.ctx(), f.to());
    return DeformationOverBase(
        D.structure().map_coefficients(nctx, [&](const RingElem& c) { return f(c); }));
}

// The augmentation sends the pair to the identity: counit kills G entirely
// and sends F to t.
inline bool is_pointed(const GaugePair& p) {
    const GradingPtr& ctx = p.ctx();
    const RingPtr root = ctx->ring->root();
    for (int i = 0; i <= ctx->trunc; ++i) {
        if (!p.G()[i].counit().is_zero()) return false;
        RingElem fc = p.F()[i].counit();
        if (i == 1) {
            if (!(fc == RingElem::one(root))) return false;
        } else if (!fc.is_zero()) {
            return false;
        }
    }
    return true;
}

inline DeformationOverBase pointed_conjugate(const GaugePair& p, const DeformationOverBase& D) {
    check_same_ctx(p.ctx(), D.ctx());
    if (!is_pointed(p))
        throw Error("conjugating a deformation requires a pointed pair: the augmentation "
                    "must send (G, F) to (0, t)");
    return DeformationOverBase(act(p, D.structure()));
}

// Normal-form structures over polynomial bases with one generator per
// coefficient slot, graded to make the structure homogeneous of degree -1.
inline DeformationOverBase universal_odd_deformation(const GradingPtr& scalar,
                                                     long base_trunc = 3) {
    if (scalar->parity_t() != 1)
        throw Error("the odd universal structure requires a context with odd t");
    std::vector<RingGen> gens;
    for (int i = 1; 2 * i <= scalar->trunc; ++i)
        gens.push_back({"w" + std::to_string(i), 2l * i * (scalar->d + 2) - 2});
    RingPtr U = Ring::polynomial(scalar->ring, gens, base_trunc);
    GradingPtr ctx = detail::with_ring(scalar, U);
    CommSeries w = CommSeries::zero(ctx);
    for (int i = 1; 2 * i <= scalar->trunc; ++i)
        w = w + CommSeries::t_power(ctx, 2 * i)
                    .scaled(RingElem::generator(U, "w" + std::to_string(i)));
    return DeformationOverBase(MooreStructure::odd(CommSeries::zero(ctx), w));
}

inline DeformationOverBase universal_even_deformation(const GradingPtr& scalar,
                                                      long base_trunc = 3) {
    if (scalar->parity_t() != 0)
        throw Error("the even universal structure requires a context with even t");
    std::vector<RingGen> gens;
    for (int i = 1; i <= scalar->trunc; ++i)
        gens.push_back({"u" + std::to_string(i), static_cast<long>(i) * (scalar->d + 2) - 2});
    RingPtr U = Ring::polynomial(scalar->ring, gens, base_trunc);
    GradingPtr ctx = detail::with_ring(scalar, U);
    CommSeries u = CommSeries::zero(ctx);
    for (int i = 1; i <= scalar->trunc; ++i)
        u = u + CommSeries::t_power(ctx, i)
                    .scaled(RingElem::generator(U, "u" + std::to_string(i)));
    return DeformationOverBase(MooreStructure::even(u));
}

struct MiniversalClassification {
    GaugePair gauge;                 // pointed pair bringing D to normal form
    RingMap f;                       // universal base -> base of D
    DeformationOverBase universal;   // the structure specialised by f
    DeformationOverBase transported; // the conjugated input, equal to the push-out
    bool f_unique = false;           // certified over infinitesimal bases
};

// Express a deformation of the trivial structure as a base change of the
// universal one: conjugate to normal form, then read the generator images off
// the coefficients.
inline MiniversalClassification classify_miniversal(const DeformationOverBase& D,
                                                    long base_trunc = 3) {
    const GradingPtr& ctx = D.ctx();
    if (!D.augmentation_image().is_trivial_up_to(ctx->trunc))
        throw Error("miniversal classification requires a deformation of the trivial structure");
    GradingPtr scalar = D.scalar_ctx();
    bool odd = ctx->parity_t() == 1;
    DeformationOverBase uni = odd ? universal_odd_deformation(scalar, base_trunc)
                                  : universal_even_deformation(scalar, base_trunc);
    GaugePair gauge = odd ? GaugePair(-D.structure().v().divide_by_2t(), CommSeries::t(ctx))
                          : GaugePair::identity(ctx);
    DeformationOverBase moved = pointed_conjugate(gauge, D);
    const CommSeries& coeffs = moved.structure().normal_series();
    std::vector<std::pair<std::string, RingElem>> imgs;
    const RingPtr& U = uni.ctx()->ring;
    for (size_t idx = 0; idx < U->gens.size(); ++idx) {
        int power = odd ? 2 * (static_cast<int>(idx) + 1) : static_cast<int>(idx) + 1;
        imgs.emplace_back(U->gens[idx].name, coeffs[power]);
    }
    RingMap f(U, ctx->ring, std::move(imgs));
    return {gauge, f, uni, moved, D.is_infinitesimal()};
}

// A one-parameter family m + s m_1 + ... + s^n m_n realized as a single
// derivation over R[s]/(s^(n+1)).  The coefficient view is extracted from the
// realization on demand.
class DeformationJet {
public:
    DeformationJet() = default;

    DeformationJet(MooreStructure ambient, long s_degree, int order,
                   const std::vector<Derivation>& coeffs)
        : ambient_(std::move(ambient)), sdeg_(s_degree), order_(order) {
        const GradingPtr& base = ambient_.ctx();
        if (order < 1) throw Error("jet order must be at least 1");
        if (s_degree % 2 != 0) throw Error("the jet parameter must have even degree");
        if (coeffs.size() > static_cast<size_t>(order))
            throw Error("more jet coefficients than the jet order admits");
        jet_ctx_ = detail::with_ring(base, Ring::polynomial(base->ring, {{"s", s_degree}}, order));
        RingElem s = RingElem::generator(jet_ctx_->ring, "s");
        Derivation total = detail::embed_derivation(ambient_.derivation(), jet_ctx_);
        for (size_t i = 0; i < coeffs.size(); ++i) {
            check_same_ctx(coeffs[i].ctx(), base);
            if (!coeffs[i].is_normalised())
                throw Error("jet coefficients must be normalised derivations");
            total = total + detail::embed_derivation(coeffs[i], jet_ctx_)
                                .scaled(s.pow(static_cast<unsigned>(i) + 1));
        }
        realized_ = std::move(total);
        if (base->strict && !realized_.is_homogeneous(-1))
            throw Error("strict grading violated: jet coefficients do not match the "
                        "parameter degree");
    }

    static DeformationJet trivial(const MooreStructure& ambient, long s_degree, int order) {
        return DeformationJet(ambient, s_degree, order, {});
    }

    // The parameter degree that lines the coefficient slots up with the
    // leading deformation directions of the ambient parity: under it the
    // first slot admits t^2 d_tau when t is odd and t d_tau when t is even.
    static long natural_s_degree(const GradingPtr& ctx) {
        return ctx->parity_t() == 1 ? 2L * ctx->d + 2 : ctx->d;
    }

    bool valid() const { return ambient_.valid(); }
    const MooreStructure& ambient() const { return ambient_; }
    long s_degree() const { return sdeg_; }
    int order() const { return order_; }
    const GradingPtr& jet_ctx() const { return jet_ctx_; }
    const Derivation& realized() const { return realized_; }

    // s^k-coefficient over the ambient context; k = 0 recovers the ambient.
    Derivation coefficient(int k) const {
        if (k < 0 || k > order_) throw Error("jet coefficient index out of range");
        return detail::outer_component(realized_, static_cast<unsigned>(k), ambient_.ctx());
    }

    std::vector<Derivation> coefficients() const {
        std::vector<Derivation> out;
        for (int k = 1; k <= order_; ++k) out.push_back(coefficient(k));
        return out;
    }

    // Same coefficients, reinterpreted at another order.  Raising the order
    // extends by zero; lowering it truncates.
    DeformationJet at_order(int new_order) const {
        std::vector<Derivation> cs;
        for (int k = 1; k <= std::min(order_, new_order); ++k) cs.push_back(coefficient(k));
        return DeformationJet(ambient_, sdeg_, new_order, cs);
    }

    DeformationJet extended(const Derivation& next) const {
        std::vector<Derivation> cs = coefficients();
        cs.push_back(next);
        return DeformationJet(ambient_, sdeg_, order_ + 1, cs);
    }

    std::string str() const {
        return "jet of order " + std::to_string(order_) + ": " + realized_.str();
    }

private:
    MooreStructure ambient_;
    long sdeg_ = 0;
    int order_ = 0;
    GradingPtr jet_ctx_;
    Derivation realized_;
};

inline bool agree(const DeformationJet& a, const DeformationJet& b) {
    return a.order() == b.order() && a.s_degree() == b.s_degree() &&
           agree(a.realized(), b.realized());
}

struct JetCheck {
    bool ok = true;
    int first_failing_order = 0;  // 0 when ok
    std::string witness;
};

// The square-zero condition, order by order: at order k the bracket of the
// k-th coefficient with the ambient structure must cancel the accumulated
// compositions of the lower coefficients,
//   [m_k, m] + sum_{i+j=k, i,j>=1} m_i m_j = 0.
// When every coefficient has the same map parity as m the bracket is the
// anticommutator and these are exactly the s^k-components of the square of
// the realization; the bracket form also covers coefficients of the other
// parity, where the plain square picks up spurious cross terms.
inline JetCheck jet_order_check(const DeformationJet& J) {
    const GradingPtr& base = J.ambient().ctx();
    const Derivation& m = J.ambient().derivation();
    std::vector<Derivation> ms = J.coefficients();
    for (int k = 1; k <= J.order(); ++k) {
        Derivation defect = bracket(ms[static_cast<size_t>(k) - 1], m);
        for (int i = 1; i < k; ++i) {
            const Derivation& a = ms[static_cast<size_t>(i) - 1];
            const Derivation& b = ms[static_cast<size_t>(k - i) - 1];
            defect = defect + Derivation(a.apply(b.img_tau()), a.apply(b.img_t()));
        }
        if (!agree(defect, Derivation::zero(base)))
            return {false, k,
                    "the order-" + std::to_string(k) +
                        " deformation condition leaves " + defect.str()};
    }
    return {};
}

// sum_{i+j=n+1, i,j>=1} m_i m_j, extracted as the s^(n+1)-component of the
// square of the order-n jet extended by zero: the failure term a candidate
// m_{n+1} would have to cancel through its bracket with m.
inline Derivation obstruction(const DeformationJet& J) {
    JetCheck pre = jet_order_check(J);
    if (!pre.ok)
        throw Error("obstruction requires a square-zero jet; order " +
                    std::to_string(pre.first_failing_order) + " fails: " + pre.witness);
    const GradingPtr& base = J.ambient().ctx();
    DeformationJet up = J.at_order(J.order() + 1);
    const Derivation& M = up.realized();
    Derivation square(M.apply(M.img_tau()), M.apply(M.img_t()));
    Derivation obs =
        detail::outer_component(square, static_cast<unsigned>(J.order()) + 1, base);
    if (!obs.is_normalised())
        throw Error("internal: obstruction is not a normalised derivation");
    Derivation db = bracket(obs, J.ambient().derivation());
    if (!agree(db, Derivation::zero(base)))
        throw Error("internal: obstruction fails the cocycle identity");
    return obs;
}

// A jet of pointed automorphisms 1 + s phi_1 + ... + s^n phi_n, realized as a
// generator-image endomorphism over R[s]/(s^(n+1)).  Values on words follow
// from multiplicativity of the realization, which holds by construction.
class AutomorphismJet {
public:
    AutomorphismJet() = default;

    AutomorphismJet(const GradingPtr& base_ctx, long s_degree, int order,
                    const std::vector<std::pair<CommSeries, CommSeries>>& coeffs)
        : base_ctx_(base_ctx), sdeg_(s_degree), order_(order) {
        validate_shape(coeffs.size());
        jet_ctx_ = detail::with_ring(base_ctx_,
                                     Ring::polynomial(base_ctx_->ring, {{"s", s_degree}}, order));
        RingElem s = RingElem::generator(jet_ctx_->ring, "s");
        NcSeries itau = NcSeries::gen_tau(jet_ctx_);
        NcSeries it = NcSeries::gen_t(jet_ctx_);
        for (size_t i = 0; i < coeffs.size(); ++i) {
            const auto& [ptau, pt] = coeffs[i];
            check_same_ctx(ptau.ctx(), base_ctx_);
            check_same_ctx(pt.ctx(), base_ctx_);
            if (!ptau[0].is_zero() || !pt[0].is_zero())
                throw Error("automorphism jet coefficients must kill constants");
            RingElem sk = s.pow(static_cast<unsigned>(i) + 1);
            itau = itau + detail::embed_series(ptau, jet_ctx_).to_nc().scaled(sk);
            it = it + detail::embed_series(pt, jet_ctx_).to_nc().scaled(sk);
        }
        endo_ = Endomorphism(std::move(itau), std::move(it));
    }

    // Adopt an existing endomorphism over R[s]/(s^(n+1)).  Its s^0-part must
    // be the identity and the higher parts substitutions in t alone.
    AutomorphismJet(const GradingPtr& base_ctx, long s_degree, int order, Endomorphism realized)
        : base_ctx_(base_ctx), sdeg_(s_degree), order_(order), endo_(std::move(realized)) {
        validate_shape(0);
        jet_ctx_ = detail::with_ring(base_ctx_,
                                     Ring::polynomial(base_ctx_->ring, {{"s", s_degree}}, order));
        check_same_ctx(endo_.ctx(), jet_ctx_);
        NcSeries tau0 = component_nc(endo_.img_tau(), 0);
        NcSeries t0 = component_nc(endo_.img_t(), 0);
        if (!agree(tau0, NcSeries::gen_tau(base_ctx_)) || !agree(t0, NcSeries::gen_t(base_ctx_)))
            throw Error("an automorphism jet must restrict to the identity at s = 0");
        for (int k = 1; k <= order_; ++k) coefficient(k);
    }

    static AutomorphismJet identity(const GradingPtr& base_ctx, long s_degree, int order) {
        return AutomorphismJet(base_ctx, s_degree, order,
                               std::vector<std::pair<CommSeries, CommSeries>>{});
    }

    bool valid() const { return base_ctx_ != nullptr; }
    const GradingPtr& base_ctx() const { return base_ctx_; }
    long s_degree() const { return sdeg_; }
    int order() const { return order_; }
    const GradingPtr& jet_ctx() const { return jet_ctx_; }
    const Endomorphism& endo() const { return endo_; }

    // The pair (phi_k(tau), phi_k(t)) as substitutions in t; k >= 1.
    std::pair<CommSeries, CommSeries> coefficient(int k) const {
        if (k < 1 || k > order_) throw Error("jet coefficient index out of range");
        return {CommSeries::from_nc(component_nc(endo_.img_tau(), k)),
                CommSeries::from_nc(component_nc(endo_.img_t(), k))};
    }

    std::string str() const {
        return "automorphism jet of order " + std::to_string(order_) + ": " + endo_.str();
    }

private:
    GradingPtr base_ctx_;
    long sdeg_ = 0;
    int order_ = 0;
    GradingPtr jet_ctx_;
    Endomorphism endo_;

    void validate_shape(size_t ncoeffs) const {
        if (order_ < 1) throw Error("jet order must be at least 1");
        if (sdeg_ % 2 != 0) throw Error("the jet parameter must have even degree");
        if (ncoeffs > static_cast<size_t>(order_))
            throw Error("more jet coefficients than the jet order admits");
    }

    NcSeries component_nc(const NcSeries& a, int k) const {
        return a.map_coefficients(base_ctx_, [k](const RingElem& c) {
            return c.outer_coefficient(static_cast<unsigned>(k));
        });
    }
};

// Append further coefficients; values on words come from recomposing the
// realization at the larger order.
inline AutomorphismJet extend_automorphism(
    const AutomorphismJet& psi, const std::vector<std::pair<CommSeries, CommSeries>>& images) {
    std::vector<std::pair<CommSeries, CommSeries>> cs;
    for (int k = 1; k <= psi.order(); ++k) cs.push_back(psi.coefficient(k));
    for (const auto& im : images) cs.push_back(im);
    return AutomorphismJet(psi.base_ctx(), psi.s_degree(),
                           psi.order() + static_cast<int>(images.size()), cs);
}

// exp(s^k phi) as an automorphism jet commuting with m.  Needs rational
// scalars for the factorials, and an even phi: for an even derivation the
// Leibniz rule carries no signs, so the exponential is multiplicative and
// commuting with m is the same as being fixed under conjugation.
inline AutomorphismJet integrate_infinitesimal(const MooreStructure& m, const Derivation& phi,
                                               int k, int order, long s_degree = 0) {
    const GradingPtr& ctx = m.ctx();
    check_same_ctx(phi.ctx(), ctx);
    if (!ctx->ring->contains_rationals())
        throw Error("integrating an infinitesimal requires rationals in the coefficient ring");
    if (!phi.is_normalised())
        throw Error("the infinitesimal must be a normalised derivation");
    if (k < 1 || k > order) throw Error("integration requires 1 <= k <= order");
    if (!phi.component(1).stored_zero() &&
        !agree(phi.component(1), Derivation::zero(ctx)))
        throw Error("integration requires an even derivation: the exponential of an "
                    "odd one is not multiplicative");
    Derivation db = bracket(phi, m.derivation());
    if (!agree(db, Derivation::zero(ctx)))
        throw Error("the infinitesimal does not commute with the structure");
    GradingPtr jctx =
        detail::with_ring(ctx, Ring::polynomial(ctx->ring, {{"s", s_degree}}, order));
    Derivation D = detail::embed_derivation(phi, jctx);
    RingElem sk = RingElem::generator(jctx->ring, "s").pow(static_cast<unsigned>(k));
    NcSeries itau = NcSeries::gen_tau(jctx);
    NcSeries it = NcSeries::gen_t(jctx);
    NcSeries ptau = itau;
    NcSeries pt = it;
    mpz_class fact = 1;
    for (int j = 1; j * k <= order; ++j) {
        ptau = D.apply(ptau);
        pt = D.apply(pt);
        fact *= j;
        RingElem scale =
            sk.pow(static_cast<unsigned>(j)) *
            embed(RingElem::from_rational(ctx->ring->root(), mpq_class(mpz_class(1), fact)),
                  jctx->ring);
        itau = itau + ptau.scaled(scale);
        it = it + pt.scaled(scale);
    }
    return AutomorphismJet(ctx, s_degree, order, Endomorphism(std::move(itau), std::move(it)));
}

struct TrivializeStep {
    int order = 0;
    Derivation xi;  // conjugation coefficient used at this order
};

struct TrivializeResult {
    bool success = false;
    std::vector<TrivializeStep> steps;
    DeformationJet reduced;  // the jet after the recorded steps
    int stuck_order = 0;     // first order whose class resists; 0 on success
    Derivation stuck_class;
    std::string detail;
};

// Clear jet coefficients order by order by conjugating with 1 + s^k xi,
// stopping at the first class the coboundary solver cannot reach.
inline TrivializeResult trivialize(const DeformationJet& J, int max_order = -1) {
    const MooreStructure& m = J.ambient();
    if (!m.is_normal_form())
        throw Error("trivialization requires a normal-form ambient structure; "
                    "reduce via normal_form first");
    JetCheck pre = jet_order_check(J);
    if (!pre.ok)
        throw Error("trivialization requires a square-zero jet; order " +
                    std::to_string(pre.first_failing_order) + " fails: " + pre.witness);
    const GradingPtr& base = m.ctx();
    const GradingPtr& jctx = J.jet_ctx();
    int bound = max_order < 0 ? J.order() : std::min(max_order, J.order());
    Derivation current = J.realized();
    auto rebuild = [&](const Derivation& cur) {
        std::vector<Derivation> cs;
        for (int i = 1; i <= J.order(); ++i)
            cs.push_back(detail::outer_component(cur, static_cast<unsigned>(i), base));
        return DeformationJet(m, J.s_degree(), J.order(), cs);
    };
    TrivializeResult res;
    for (int k = 1; k <= bound; ++k) {
        Derivation mk = detail::outer_component(current, static_cast<unsigned>(k), base);
        if (agree(mk, Derivation::zero(base))) continue;
        CoboundaryResult sol = solve_coboundary(-mk, m);
        if (!sol.is_coboundary) {
            res.stuck_order = k;
            res.stuck_class = mk;
            res.reduced = rebuild(current);
            res.detail = "the order-" + std::to_string(k) + " class " + mk.str() +
                         " is not a coboundary";
            return res;
        }
        const Derivation& xi = sol.preimage;
        RingElem sk = RingElem::generator(jctx->ring, "s").pow(static_cast<unsigned>(k));
        Endomorphism phi(NcSeries::gen_tau(jctx) +
                             detail::embed_series(xi.comm_tau_part(), jctx).to_nc().scaled(sk),
                         NcSeries::gen_t(jctx) +
                             detail::embed_series(xi.comm_t_part(), jctx).to_nc().scaled(sk));
        current = conjugate(phi, current);
        Derivation cleared = detail::outer_component(current, static_cast<unsigned>(k), base);
        if (!agree(cleared, Derivation::zero(base)))
            throw Error("internal: conjugation failed to clear the order-" + std::to_string(k) +
                        " coefficient");
        res.steps.push_back({k, xi});
    }
    res.success = true;
    res.reduced = rebuild(current);
    res.detail = res.steps.empty()
                     ? "already trivial to the requested order"
                     : "cleared " + std::to_string(res.steps.size()) + " coefficient(s)";
    return res;
}

struct ObstructionComparison {
    bool cohomologous = false;
    Derivation difference;           // second obstruction minus the first
    CoboundaryResult certificate{};  // solver output for the difference
    Derivation xi;                   // order-(n+1) discrepancy of the conjugation
    bool xi_certifies = false;       // d(xi) reproduces the difference exactly
};

// Compare the obstructions of two jets that psi conjugates into one another
// through their stated order.
inline ObstructionComparison obstructions_cohomologous_check(const DeformationJet& J1,
                                                             const DeformationJet& J2,
                                                             const AutomorphismJet& psi) {
    if (!agree(J1.ambient(), J2.ambient()))
        throw Error("obstruction comparison requires a shared ambient structure");
    if (J1.order() != J2.order() || J1.s_degree() != J2.s_degree())
        throw Error("obstruction comparison requires jets of the same shape");
    if (psi.order() != J1.order() || psi.s_degree() != J1.s_degree())
        throw Error("the conjugating jet must match the shape of the deformation jets");
    check_same_ctx(psi.base_ctx(), J1.ambient().ctx());
    const MooreStructure& m = J1.ambient();
    const GradingPtr& base = m.ctx();
    int n = J1.order();
    Derivation conj = conjugate(psi.endo(), J1.realized());
    for (int i = 0; i <= n; ++i) {
        if (!agree(detail::outer_component(conj, static_cast<unsigned>(i), base),
                   J2.coefficient(i)))
            throw Error("the jets are not conjugate through order " + std::to_string(n));
    }
    Derivation obs1 = obstruction(J1);
    Derivation obs2 = obstruction(J2);
    ObstructionComparison out;
    out.difference = obs2 - obs1;
    out.certificate = solve_coboundary(out.difference, m);
    out.cohomologous = out.certificate.is_coboundary;
    CommSeries z = CommSeries::zero(base);
    DeformationJet up1 = J1.at_order(n + 1);
    DeformationJet up2 = J2.at_order(n + 1);
    AutomorphismJet psie = extend_automorphism(psi, {{z, z}});
    Derivation conj_e = conjugate(psie.endo(), up1.realized());
    out.xi = detail::outer_component(up2.realized() - conj_e, static_cast<unsigned>(n) + 1, base);
    if (out.xi.is_normalised()) {
        Derivation dxi = bracket(out.xi, m.derivation());
        out.xi_certifies = agree(dxi, out.difference);
    }
    return out;
}

}  // namespace cobar
