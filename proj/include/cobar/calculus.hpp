#pragma once

// Continuous derivations and endomorphisms of the completed free algebra on
// {tau, t}, given by their values on the generators.  Derivations are applied
// by the graded Leibniz rule; a derivation whose generator images mix word
// parities is handled by splitting it into its parity-homogeneous components
// (the sign in the Leibniz rule depends on the component's parity as a map).
//
// Map parity convention: a derivation component sending a generator x to a
// word w acts with parity  parity(w) - parity(x)  (mod 2).

#include <cobar/series.hpp>

namespace cobar {

class Derivation {
public:
    Derivation() = default;

    Derivation(NcSeries img_tau, NcSeries img_t)
        : ctx_(img_tau.ctx()), img_tau_(std::move(img_tau)), img_t_(std::move(img_t)) {
        check_same_ctx(img_tau_.ctx(), img_t_.ctx());
    }

    static Derivation zero(const GradingPtr& ctx) {
        return Derivation(NcSeries::zero(ctx), NcSeries::zero(ctx));
    }

    // The undeformed structure: tau -> tau^2, t -> [tau, t].
    static Derivation m0(const GradingPtr& ctx) {
        NcSeries tau = NcSeries::gen_tau(ctx);
        NcSeries t = NcSeries::gen_t(ctx);
        return Derivation(tau * tau, graded_commutator(tau, t));
    }

    // Normalised derivation A(t) dtau + B(t) dt.
    static Derivation from_comm(const CommSeries& A, const CommSeries& B) {
        return Derivation(A.to_nc(), B.to_nc());
    }

    const GradingPtr& ctx() const { return ctx_; }
    const NcSeries& img_tau() const { return img_tau_; }
    const NcSeries& img_t() const { return img_t_; }
    bool valid() const { return ctx_ != nullptr; }

    bool stored_zero() const { return img_tau_.stored_zero() && img_t_.stored_zero(); }
    int trusted() const { return std::min(img_tau_.trusted(), img_t_.trusted()); }

    // A derivation is normalised when both generator images are series in t
    // alone with vanishing constant term.
    bool is_normalised() const {
        return img_tau_.is_t_only() && img_t_.is_t_only() && !img_tau_.has_constant_term() &&
               !img_t_.has_constant_term();
    }
    CommSeries comm_tau_part() const { return CommSeries::from_nc(img_tau_); }
    CommSeries comm_t_part() const { return CommSeries::from_nc(img_t_); }

    Derivation operator-() const { return Derivation(-img_tau_, -img_t_); }
    friend Derivation operator+(const Derivation& a, const Derivation& b) {
        return Derivation(a.img_tau_ + b.img_tau_, a.img_t_ + b.img_t_);
    }
    friend Derivation operator-(const Derivation& a, const Derivation& b) {
        return Derivation(a.img_tau_ - b.img_tau_, a.img_t_ - b.img_t_);
    }
    Derivation scaled(const RingElem& c) const {
        return Derivation(img_tau_.scaled(c), img_t_.scaled(c));
    }

    // The parity-p component as a derivation (p = 0 even, p = 1 odd).
    Derivation component(int p) const {
        auto [te, to] = img_tau_.parity_split();
        auto [ue, uo] = img_t_.parity_split();
        int pt = ctx_->parity_t();
        // tau has parity 1: image words of parity (p + 1) & 1 belong to component p
        NcSeries itau = ((p + 1) & 1) == 0 ? te : to;
        NcSeries it = ((p + pt) & 1) == 0 ? ue : uo;
        return Derivation(std::move(itau), std::move(it));
    }

    // nullopt if the generator images determine inconsistent map parities.
    std::optional<int> map_parity() const {
        std::optional<int> par;
        auto see = [&](const NcSeries& img, int gen_parity) -> bool {
            for (const auto& [w, c] : img.terms()) {
                int p = (w.parity(*ctx_) - gen_parity + 2) % 2;
                if (par && *par != p) return false;
                par = p;
            }
            return true;
        };
        if (!see(img_tau_, 1)) return std::nullopt;
        if (!see(img_t_, ctx_->parity_t())) return std::nullopt;
        return par ? par : std::optional<int>(1);  // zero derivation: call it odd
    }

    // Degree as a map, when the images are homogeneous and consistent.
    std::optional<long> map_degree() const {
        std::optional<long> deg;
        auto see = [&](const NcSeries& img, long gen_degree) -> bool {
            for (const auto& [w, c] : img.terms()) {
                auto cd = c.homogeneous_degree();
                if (!cd) {
                    if (c.is_homogeneous(0)) cd = 0;
                    else return false;
                }
                long d = w.degree(*ctx_) + *cd - gen_degree;
                if (deg && *deg != d) return false;
                deg = d;
            }
            return true;
        };
        if (!see(img_tau_, ctx_->deg_tau())) return std::nullopt;
        if (!see(img_t_, ctx_->deg_t())) return std::nullopt;
        return deg;
    }
    bool is_homogeneous(long deg) const {
        return img_tau_.is_homogeneous(deg + ctx_->deg_tau()) &&
               img_t_.is_homogeneous(deg + ctx_->deg_t());
    }

    NcSeries apply(const NcSeries& a) const {
        check_same_ctx(ctx_, a.ctx());
        NcSeries res = NcSeries::zero(ctx_);
        for (int p = 0; p < 2; ++p) {
            Derivation comp = component(p);
            if (comp.stored_zero()) continue;
            res = res + comp.apply_homogeneous(p, a);
        }
        // trust: unknown input terms of length L feed terms of length >= L - 1 + val(img),
        // so constant-term images (val 0) genuinely lose one order
        int vimg = std::min(img_tau_.stored_zero() ? kInfiniteValuation : img_tau_.valuation(),
                            img_t_.stored_zero() ? kInfiniteValuation : img_t_.valuation());
        int shift = vimg >= kInfiniteValuation ? kExact : vimg - 1;
        int raw = std::max(std::min(sat_add(a.trusted(), shift), trusted()), 0);
        if (raw < kExact) raw = std::min(raw, ctx_->trunc);
        return res.with_trusted(raw);
    }

    Derivation map_coefficients(const GradingPtr& new_ctx,
                                const std::function<RingElem(const RingElem&)>& f) const {
        return Derivation(img_tau_.map_coefficients(new_ctx, f),
                          img_t_.map_coefficients(new_ctx, f));
    }

    std::string str() const {
        std::string out;
        if (!img_tau_.stored_zero()) out += "{" + img_tau_.str() + "} dtau";
        if (!img_t_.stored_zero()) {
            if (!out.empty()) out += " + ";
            out += "{" + img_t_.str() + "} dt";
        }
        return out.empty() ? "0" : out;
    }

private:
    GradingPtr ctx_;
    NcSeries img_tau_, img_t_;

    // Leibniz application of a parity-homogeneous component of parity p.
    NcSeries apply_homogeneous(int p, const NcSeries& a) const {
        NcSeries res = NcSeries::zero(ctx_);
        for (const auto& [w, c] : a.terms()) {
            int prefix_parity = 0;
            for (int i = 0; i < w.length(); ++i) {
                const NcSeries& img = w.letter_is_t(i) ? img_t_ : img_tau_;
                if (!img.stored_zero()) {
                    NcSeries pre = NcSeries::monomial(ctx_, w.prefix(i), 1);
                    NcSeries suf = NcSeries::monomial(ctx_, w.suffix(i + 1), 1);
                    NcSeries term = (pre * img) * suf;
                    RingElem k = (p && prefix_parity) ? -c : c;
                    res = res + term.scaled(k);
                }
                int letter_parity = w.letter_is_t(i) ? ctx_->parity_t() : 1;
                prefix_parity = (prefix_parity + letter_parity) & 1;
            }
        }
        return res;
    }
};

// Graded commutator of derivations: [a, b] = ab - (-1)^{|a||b|} ba, computed
// on parity-homogeneous components and evaluated on the generators.
inline Derivation bracket(const Derivation& a, const Derivation& b) {
    check_same_ctx(a.ctx(), b.ctx());
    Derivation res = Derivation::zero(a.ctx());
    for (int p = 0; p < 2; ++p) {
        Derivation ap = a.component(p);
        if (ap.stored_zero()) continue;
        for (int q = 0; q < 2; ++q) {
            Derivation bq = b.component(q);
            if (bq.stored_zero()) continue;
            NcSeries itau = ap.apply(bq.img_tau());
            NcSeries it = ap.apply(bq.img_t());
            NcSeries jtau = bq.apply(ap.img_tau());
            NcSeries jt = bq.apply(ap.img_t());
            if (p & q) {  // (-1)^{pq} = -1: [a,b] = ab + ba
                res = res + Derivation(itau + jtau, it + jt);
            } else {
                res = res + Derivation(itau - jtau, it - jt);
            }
        }
    }
    return res;
}

inline bool agree(const Derivation& a, const Derivation& b) {
    return agree(a.img_tau(), b.img_tau()) && agree(a.img_t(), b.img_t());
}

struct SquareZeroWitness {
    bool ok = true;
    int checked_order = 0;       // orders up to which the check is meaningful
    std::string generator;       // "tau" or "t" when !ok
    Word word;                   // offending word
    RingElem coeff;              // its coefficient
    std::string describe() const {
        if (ok) return "square-zero up to order " + std::to_string(checked_order);
        return "m(m(" + generator + ")) has nonzero coefficient " + coeff.str() + " at word " +
               word.str();
    }
};

inline SquareZeroWitness is_square_zero(const Derivation& m) {
    SquareZeroWitness wit;
    NcSeries stau = m.apply(m.img_tau());
    NcSeries st = m.apply(m.img_t());
    int k = std::min(common_trust(stau.trusted(), kExact, m.ctx()->trunc),
                     common_trust(st.trusted(), kExact, m.ctx()->trunc));
    wit.checked_order = k;
    for (const auto& [w, c] : stau.terms()) {
        if (w.length() <= k) {
            wit.ok = false;
            wit.generator = "tau";
            wit.word = w;
            wit.coeff = c;
            return wit;
        }
    }
    for (const auto& [w, c] : st.terms()) {
        if (w.length() <= k) {
            wit.ok = false;
            wit.generator = "t";
            wit.word = w;
            wit.coeff = c;
            return wit;
        }
    }
    return wit;
}

// Continuous algebra endomorphism fixing the ring, given on generators.
// Images must have vanishing constant term (continuity on the completion).
class Endomorphism {
public:
    Endomorphism() = default;

    Endomorphism(NcSeries img_tau, NcSeries img_t)
        : ctx_(img_tau.ctx()), img_tau_(std::move(img_tau)), img_t_(std::move(img_t)) {
        check_same_ctx(img_tau_.ctx(), img_t_.ctx());
        if (img_tau_.has_constant_term() || img_t_.has_constant_term())
            throw Error("endomorphism images must have vanishing constant term");
    }

    static Endomorphism identity(const GradingPtr& ctx) {
        return Endomorphism(NcSeries::gen_tau(ctx), NcSeries::gen_t(ctx));
    }

    const GradingPtr& ctx() const { return ctx_; }
    const NcSeries& img_tau() const { return img_tau_; }
    const NcSeries& img_t() const { return img_t_; }
    bool valid() const { return ctx_ != nullptr; }
    int trusted() const { return std::min(img_tau_.trusted(), img_t_.trusted()); }

    NcSeries apply(const NcSeries& a) const {
        check_same_ctx(ctx_, a.ctx());
        NcSeries res = NcSeries::zero(ctx_);
        for (const auto& [w, c] : a.terms()) {
            NcSeries acc = NcSeries::one(ctx_);
            for (int i = 0; i < w.length(); ++i)
                acc = acc * (w.letter_is_t(i) ? img_t_ : img_tau_);
            res = res + acc.scaled(c);
        }
        return res.with_trusted(a.trusted());
    }

    // phi after psi: x -> phi(psi(x)).
    friend Endomorphism compose_endos(const Endomorphism& phi, const Endomorphism& psi) {
        check_same_ctx(phi.ctx_, psi.ctx_);
        return Endomorphism(phi.apply(psi.img_tau_), phi.apply(psi.img_t_));
    }

    // Inverse of a triangular substitution tau -> a tau + S(t), t -> F(t)
    // with a and the linear coefficient of F invertible.
    Endomorphism inverse() const {
        RingElem a = img_tau_.coeff(Word::tau());
        NcSeries s_nc = img_tau_ - NcSeries::monomial(ctx_, Word::tau(), a);
        if (!s_nc.is_t_only())
            throw Error("endomorphism inverse requires a triangular substitution "
                        "(tau -> a*tau + S(t), t -> F(t))");
        if (!img_t_.is_t_only())
            throw Error("endomorphism inverse requires the image of t to involve t alone");
        auto ainv = a.inverse();
        if (!ainv) throw Error("endomorphism inverse requires an invertible tau-coefficient");
        CommSeries F = CommSeries::from_nc(img_t_);
        CommSeries Finv = F.comm_inverse();
        CommSeries S = CommSeries::from_nc(s_nc.with_trusted(img_tau_.trusted()));
        CommSeries SFinv = comm_compose(S, Finv);
        NcSeries inv_tau = (NcSeries::gen_tau(ctx_) - SFinv.to_nc()).scaled(*ainv);
        return Endomorphism(inv_tau.with_trusted(std::min(img_tau_.trusted(), ctx_->trunc)),
                            Finv.to_nc());
    }

    Endomorphism map_coefficients(const GradingPtr& new_ctx,
                                  const std::function<RingElem(const RingElem&)>& f) const {
        return Endomorphism(img_tau_.map_coefficients(new_ctx, f),
                            img_t_.map_coefficients(new_ctx, f));
    }

    std::string str() const {
        return "tau -> " + img_tau_.str() + ", t -> " + img_t_.str();
    }

private:
    GradingPtr ctx_;
    NcSeries img_tau_, img_t_;
};

// phi o xi o phi^{-1}: the conjugation oracle every closed formula is tested
// against.
inline Derivation conjugate(const Endomorphism& phi, const Derivation& xi) {
    Endomorphism inv = phi.inverse();
    return Derivation(phi.apply(xi.apply(inv.img_tau())), phi.apply(xi.apply(inv.img_t())));
}

inline Derivation conjugate(const Endomorphism& phi, const Endomorphism& phi_inv,
                            const Derivation& xi) {
    return Derivation(phi.apply(xi.apply(phi_inv.img_tau())),
                      phi.apply(xi.apply(phi_inv.img_t())));
}

}  // namespace cobar
