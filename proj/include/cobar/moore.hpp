#pragma once

// Moore structures and the gauge group acting on them.
//
// Odd case (t odd):  m(tau) = w(t) + tau^2,  m(t) = v(t) + [tau, t]
//                    with v, w even-power series, zero constant terms.
// Even case (t even): m(tau) = u(t) + tau^2, m(t) = [tau, t],
//                    u with zero constant term, any powers.
//
// A gauge pair (G, F) acts as the substitution tau -> tau + G(t), t -> F(t).
// In the odd case the action has a closed form; in the even case it is
// computed by the conjugation oracle and re-read as a Moore structure.

#include <cobar/calculus.hpp>

namespace cobar {

class MooreStructure {
public:
    MooreStructure() = default;

    static MooreStructure odd(const CommSeries& v, const CommSeries& w) {
        check_same_ctx(v.ctx(), w.ctx());
        const GradingPtr& ctx = v.ctx();
        if (ctx->parity_t() != 1)
            throw Error("odd Moore structure requires t of odd parity (d odd)");
        if (!v[0].is_zero() || !w[0].is_zero())
            throw Error("Moore structure series must have zero constant term");
        if (!v.only_even_powers() || !w.only_even_powers())
            throw Error("odd Moore structure requires even-power series v and w");
        MooreStructure m;
        m.ctx_ = ctx;
        m.v_ = v;
        m.w_ = w;
        m.u_ = CommSeries::zero(ctx);
        m.deriv_ = Derivation::m0(ctx) + Derivation::from_comm(w, v);
        m.validate_strict();
        return m;
    }

    static MooreStructure even(const CommSeries& u) {
        const GradingPtr& ctx = u.ctx();
        if (ctx->parity_t() != 0)
            throw Error("even Moore structure requires t of even parity (d even)");
        if (!u[0].is_zero())
            throw Error("Moore structure series must have zero constant term");
        MooreStructure m;
        m.ctx_ = ctx;
        m.u_ = u;
        m.v_ = CommSeries::zero(ctx);
        m.w_ = CommSeries::zero(ctx);
        m.deriv_ = Derivation::m0(ctx) + Derivation::from_comm(u, CommSeries::zero(ctx));
        m.validate_strict();
        return m;
    }

    static MooreStructure trivial(const GradingPtr& ctx) {
        return ctx->parity_t() == 1 ? odd(CommSeries::zero(ctx), CommSeries::zero(ctx))
                                    : even(CommSeries::zero(ctx));
    }

    // Reads a derivation back as a Moore structure if it has the right shape.
    static std::optional<MooreStructure> from_derivation(const Derivation& D) {
        const GradingPtr& ctx = D.ctx();
        NcSeries tau_sq = NcSeries::monomial(ctx, Word::tau().concat(Word::tau()), 1);
        NcSeries a_part = D.img_tau() - tau_sq;
        if (!a_part.is_t_only()) return std::nullopt;
        NcSeries ad_tau = graded_commutator(NcSeries::gen_tau(ctx), NcSeries::gen_t(ctx));
        NcSeries b_part = D.img_t() - ad_tau;
        if (!b_part.is_t_only()) return std::nullopt;
        CommSeries A = CommSeries::from_nc(a_part.with_trusted(D.img_tau().trusted()));
        CommSeries B = CommSeries::from_nc(b_part.with_trusted(D.img_t().trusted()));
        if (!A[0].is_zero() || !B[0].is_zero()) return std::nullopt;
        try {
            if (ctx->parity_t() == 1) return odd(B, A);
            if (!B.stored_zero()) return std::nullopt;
            return even(A.with_trusted(std::min(A.trusted(), B.trusted())));
        } catch (const Error&) {
            return std::nullopt;
        }
    }

    const GradingPtr& ctx() const { return ctx_; }
    bool valid() const { return ctx_ != nullptr; }
    bool is_odd_case() const { return ctx_->parity_t() == 1; }
    const CommSeries& v() const { return v_; }
    const CommSeries& w() const { return w_; }
    const CommSeries& u() const { return u_; }
    const Derivation& derivation() const { return deriv_; }

    bool is_normal_form() const { return is_odd_case() ? v_.stored_zero() : true; }
    // The dtau-coefficient of a normal form (w in the odd case, u in the even).
    const CommSeries& normal_series() const { return is_odd_case() ? w_ : u_; }

    bool is_trivial_up_to(int k) const {
        return is_odd_case() ? v_.is_zero_up_to(k) && w_.is_zero_up_to(k) : u_.is_zero_up_to(k);
    }

    MooreStructure map_coefficients(const GradingPtr& new_ctx,
                                    const std::function<RingElem(const RingElem&)>& f) const {
        return is_odd_case() ? odd(v_.map_coefficients(new_ctx, f), w_.map_coefficients(new_ctx, f))
                             : even(u_.map_coefficients(new_ctx, f));
    }

    std::string str() const {
        if (is_odd_case())
            return "odd Moore structure: v = " + v_.str() + ", w = " + w_.str();
        return "even Moore structure: u = " + u_.str();
    }

private:
    GradingPtr ctx_;
    CommSeries v_, w_, u_;
    Derivation deriv_;

    void validate_strict() const {
        if (!ctx_->strict) return;
        if (!deriv_.is_homogeneous(-1))
            throw Error("strict grading violated: structure coefficients are not "
                        "homogeneous of total degree -1");
    }
};

inline bool agree(const MooreStructure& a, const MooreStructure& b) {
    if (a.is_odd_case() != b.is_odd_case()) return false;
    if (a.is_odd_case()) return agree(a.v(), b.v()) && agree(a.w(), b.w());
    return agree(a.u(), b.u());
}

class GaugePair {
public:
    GaugePair() = default;

    GaugePair(const CommSeries& G, const CommSeries& F) : G_(G), F_(F) {
        check_same_ctx(G.ctx(), F.ctx());
        ctx_ = G.ctx();
        if (!G_[0].is_zero() || !F_[0].is_zero())
            throw Error("gauge pair series must have zero constant term");
        if (!F_[1].is_invertible())
            throw Error("gauge pair requires an invertible linear coefficient in F");
        if (ctx_->parity_t() == 1) {
            if (!G_.only_odd_powers() || !F_.only_odd_powers())
                throw Error("odd-case gauge pairs require odd-power series G and F");
        }
        if (ctx_->strict) {
            if (!G_.is_homogeneous(ctx_->deg_tau()) || !F_.is_homogeneous(ctx_->deg_t()))
                throw Error("strict grading violated: gauge pair is not degree-preserving");
        }
    }

    static GaugePair identity(const GradingPtr& ctx) {
        return GaugePair(CommSeries::zero(ctx), CommSeries::t(ctx));
    }

    const GradingPtr& ctx() const { return ctx_; }
    const CommSeries& G() const { return G_; }
    const CommSeries& F() const { return F_; }
    bool valid() const { return ctx_ != nullptr; }

    bool is_identity() const {
        return G_.stored_zero() && agree(F_, CommSeries::t(ctx_));
    }
    bool is_pointed_trivial() const { return G_.stored_zero(); }

    Endomorphism to_endomorphism() const {
        return Endomorphism(NcSeries::gen_tau(ctx_) + G_.to_nc(), F_.to_nc());
    }

    GaugePair map_coefficients(const GradingPtr& new_ctx,
                               const std::function<RingElem(const RingElem&)>& f) const {
        return GaugePair(G_.map_coefficients(new_ctx, f), F_.map_coefficients(new_ctx, f));
    }

    std::string str() const { return "(" + G_.str() + ", " + F_.str() + ")"; }

private:
    GradingPtr ctx_;
    CommSeries G_, F_;
};

// Group law matching endomorphism composition: pair_compose(p, q) acts as
// "p after q", and (G,F) o (G',F') = (G + G'(F), F'(F)).
inline GaugePair pair_compose(const GaugePair& p, const GaugePair& q) {
    check_same_ctx(p.ctx(), q.ctx());
    return GaugePair(p.G() + comm_compose(q.G(), p.F()), comm_compose(q.F(), p.F()));
}

inline GaugePair pair_invert(const GaugePair& p) {
    CommSeries Finv = p.F().comm_inverse();
    return GaugePair(-comm_compose(p.G(), Finv), Finv);
}

// Sum over i of v_{2i} F^{2i-1}: the series v(F)/F for even-power v, computed
// without division.
inline CommSeries substituted_quotient(const CommSeries& v, const CommSeries& F) {
    const GradingPtr& ctx = v.ctx();
    CommSeries acc = CommSeries::zero(ctx);
    for (int i = 2; i <= ctx->trunc; i += 2)
        acc = acc + F.power(i - 1).scaled(v[i]);
    int raw = std::min(v.trusted(), sat_add(F.trusted(), 0));
    return acc.with_trusted(raw >= kExact ? acc.trusted() : std::min(raw, ctx->trunc));
}

// The action of a gauge pair.  Odd case: the closed substitution formula
//   v' = 2tG + t v(F)/F,   w' = -G v(F)/F + w(F) - G^2.
// Even case: conjugation, then re-extraction; leaves the family when G != 0
// unless 2 = 0 in the coefficient ring.
inline MooreStructure act(const GaugePair& p, const MooreStructure& m) {
    check_same_ctx(p.ctx(), m.ctx());
    const GradingPtr& ctx = m.ctx();
    if (m.is_odd_case()) {
        CommSeries q = substituted_quotient(m.v(), p.F());
        CommSeries t = CommSeries::t(ctx);
        CommSeries two_t_G = (t * p.G()).scaled(RingElem::from_int(ctx->ring, 2));
        CommSeries v_new = two_t_G + t * q;
        CommSeries w_new = -(p.G() * q) + comm_compose(m.w(), p.F()) - p.G() * p.G();
        return MooreStructure::odd(v_new, w_new);
    }
    Derivation conj = conjugate(p.to_endomorphism(), m.derivation());
    auto out = MooreStructure::from_derivation(conj);
    if (!out)
        throw Error("even-case gauge action left the Moore family; "
                    "G must vanish unless 2 = 0 in the coefficient ring");
    return *out;
}

// The same action computed purely by the conjugation oracle.
inline MooreStructure act_oracle(const GaugePair& p, const MooreStructure& m) {
    Derivation conj = conjugate(p.to_endomorphism(), m.derivation());
    auto out = MooreStructure::from_derivation(conj);
    if (!out) throw Error("gauge action left the Moore family");
    return *out;
}

struct NormalFormResult {
    GaugePair gauge;        // sends the input to the normal form
    CommSeries u;           // dtau-series of the normal form
    MooreStructure normal;  // m0 + u dtau
};

// Odd case: gauge (-v/2t, t) kills v and yields u = (v/2t)^2 + w; needs 2
// invertible.  Even case: already normal, identity gauge.
inline NormalFormResult normal_form(const MooreStructure& m) {
    const GradingPtr& ctx = m.ctx();
    if (!m.is_odd_case())
        return {GaugePair::identity(ctx), m.u(), m};
    CommSeries half_v_over_t = m.v().divide_by_2t();
    GaugePair gauge(-half_v_over_t, CommSeries::t(ctx));
    CommSeries u = half_v_over_t * half_v_over_t + m.w();
    MooreStructure normal = MooreStructure::odd(CommSeries::zero(ctx).with_trusted(u.trusted()), u);
    return {std::move(gauge), std::move(u), std::move(normal)};
}

struct EquivalenceCheck {
    bool equivalent = false;
    MooreStructure transported;  // act(pair, first)
    std::string detail;
};

// Does the pair carry m1 to m2?
inline EquivalenceCheck verify_equivalence(const GaugePair& p, const MooreStructure& m1,
                                           const MooreStructure& m2) {
    EquivalenceCheck res;
    res.transported = act(p, m1);
    res.equivalent = agree(res.transported, m2);
    if (!res.equivalent)
        res.detail = "pair sends the first structure to " + res.transported.str() +
                     ", which differs from " + m2.str();
    return res;
}

}  // namespace cobar
