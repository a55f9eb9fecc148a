#pragma once

#include <algorithm>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <cobar/linalg.hpp>
#include <cobar/moore.hpp>

namespace cobar {

// The differential d(xi) = [xi, m] on normalised derivations, in closed form.
// Odd case, xi = A dtau + B dt with odd-power parts A1, B1:
//   d(xi) = {B1 w' - A1 v/t} dtau + {B1 (v' - v/t) + 2t A1} dt.
// Even case the bracket collapses onto the substitution part:
//   d(xi) = B u' dtau.
// Either way the calculus bracket is the oracle this must agree with.
inline Derivation hh_differential(const Derivation& xi, const MooreStructure& m) {
    check_same_ctx(xi.ctx(), m.ctx());
    if (!xi.is_normalised())
        throw Error("differential requires a normalised derivation "
                    "(t-only images with vanishing constant terms)");
    const GradingPtr& ctx = xi.ctx();
    CommSeries A = xi.comm_tau_part();
    CommSeries B = xi.comm_t_part();
    if (!m.is_odd_case())
        return Derivation::from_comm(B * m.u().derivative(), CommSeries::zero(ctx));
    CommSeries A1 = A.odd_power_part();
    CommSeries B1 = B.odd_power_part();
    CommSeries vt = m.v().divide_by_t();
    CommSeries tau_part = B1 * m.w().derivative() - A1 * vt;
    CommSeries t_part = B1 * (m.v().derivative() - vt) +
                        (CommSeries::t(ctx) * A1).scaled(RingElem::from_int(ctx->ring, 2));
    return Derivation::from_comm(tau_part, t_part);
}

struct CoboundaryResult {
    bool is_coboundary = false;
    Derivation preimage;  // d(preimage) = target when is_coboundary
    Derivation residual;  // the certified unreachable part otherwise
    std::string detail;
};

namespace detail {

// Solve q * divisor = rhs for q coefficientwise, powers of q restricted to
// `parity` (0 even, 1 odd, -1 any), ascending through the trusted window.
// Unsolvable coefficients stay behind in the returned remainder.
struct TriangularDivision {
    CommSeries quotient, remainder;
};

inline TriangularDivision divide_triangular(const CommSeries& rhs, const CommSeries& divisor,
                                            int parity, int bound) {
    const GradingPtr& ctx = rhs.ctx();
    TriangularDivision out{CommSeries::zero(ctx), rhs};
    if (divisor.valuation() >= kInfiniteValuation) return out;
    int lead = divisor.valuation();
    RingElem lead_coeff = divisor[lead];
    for (int j = 1; j + lead <= bound; ++j) {
        if (parity >= 0 && j % 2 != parity) continue;
        auto b = solve_in_ring(lead_coeff, out.remainder[j + lead]);
        if (!b) continue;
        CommSeries term = CommSeries::t_power(ctx, j).scaled(*b);
        out.quotient = out.quotient + term;
        out.remainder = out.remainder - term * divisor;
    }
    out.quotient = out.quotient.with_trusted(bound);
    return out;
}

}  // namespace detail

// Invert the differential at a cocycle target over a normal-form structure.
// Odd case: the t-part of the target pins the dtau-part of the preimage via
// 2t A1 = T_t, and the dtau-part pins the dt-part via B1 w' = T_tau.  Even
// case: B u' = T_tau, and no dt-part is reachable at all.
inline CoboundaryResult solve_coboundary(const Derivation& target, const MooreStructure& m) {
    check_same_ctx(target.ctx(), m.ctx());
    if (!target.is_normalised())
        throw Error("coboundary solving requires a normalised target");
    if (!m.is_normal_form())
        throw Error("coboundary solving requires a normal-form structure; "
                    "reduce via normal_form first");
    const GradingPtr& ctx = m.ctx();
    Derivation dtarget = hh_differential(target, m);
    int check = std::min(common_trust(dtarget.trusted(), kExact, ctx->trunc), ctx->trunc);
    if (!dtarget.comm_tau_part().is_zero_up_to(check) ||
        !dtarget.comm_t_part().is_zero_up_to(check))
        throw Error("target is not a cocycle: d(target) = " + dtarget.str());

    CommSeries T_tau = target.comm_tau_part();
    CommSeries T_t = target.comm_t_part();
    int bound = std::min(target.trusted(), ctx->trunc);

    CoboundaryResult res;
    if (m.is_odd_case()) {
        CommSeries two_t =
            CommSeries::t(ctx).scaled(RingElem::from_int(ctx->ring, 2));
        auto adiv = detail::divide_triangular(T_t, two_t, 1, bound);
        auto bdiv = detail::divide_triangular(T_tau, m.w().derivative(), 1, bound);
        res.preimage = Derivation::from_comm(adiv.quotient, bdiv.quotient);
        res.residual = Derivation::from_comm(bdiv.remainder, adiv.remainder);
    } else {
        auto bdiv = detail::divide_triangular(T_tau, m.u().derivative(), -1, bound);
        res.preimage = Derivation::from_comm(CommSeries::zero(ctx), bdiv.quotient);
        res.residual = Derivation::from_comm(bdiv.remainder, T_t);
    }
    res.is_coboundary = res.residual.comm_tau_part().is_zero_up_to(bound) &&
                        res.residual.comm_t_part().is_zero_up_to(bound);
    res.detail = res.is_coboundary
                     ? "preimage " + res.preimage.str()
                     : "not a coboundary; unreachable class " + res.residual.str();
    return res;
}

struct CohomologyClass {
    Derivation representative;
    RingElem annihilator;  // zero for a free class
    std::optional<long> degree_standard;
    std::optional<long> degree_classical;  // 1 - standard

    bool is_free() const { return annihilator.is_zero(); }
};

struct CohomologyPresentation {
    GradingPtr ctx;
    int order = 0;
    int free_rank = 0;
    std::vector<CohomologyClass> classes;
    std::vector<std::string> hypothesis_failures;

    std::string str() const {
        std::ostringstream os;
        os << "order " << order << ": free rank " << free_rank;
        for (size_t i = 0; i < classes.size(); ++i) {
            os << "\n  [" << i + 1 << "] " << classes[i].representative.str();
            if (classes[i].is_free())
                os << "  (free";
            else
                os << "  (annihilator " << classes[i].annihilator.str();
            if (classes[i].degree_standard)
                os << ", degree " << *classes[i].degree_standard << " standard / "
                   << *classes[i].degree_classical << " classical";
            os << ")";
        }
        for (const auto& h : hypothesis_failures) os << "\n  hypothesis not met: " << h;
        return os.str();
    }
};

namespace detail {

inline void stamp_degrees(CohomologyClass& c) {
    c.degree_standard = c.representative.map_degree();
    if (c.degree_standard) c.degree_classical = 1 - *c.degree_standard;
}

inline CohomologyClass make_class(Derivation rep, RingElem ann) {
    CohomologyClass c{std::move(rep), std::move(ann), std::nullopt, std::nullopt};
    stamp_degrees(c);
    return c;
}

// Window basis: t^j dtau for j = 1..order, then t^j dt.
inline Derivation window_basis_elem(const GradingPtr& ctx, int order, size_t idx) {
    int j = static_cast<int>(idx % static_cast<size_t>(order)) + 1;
    CommSeries p = CommSeries::t_power(ctx, j);
    CommSeries z = CommSeries::zero(ctx);
    return idx < static_cast<size_t>(order) ? Derivation::from_comm(p, z)
                                            : Derivation::from_comm(z, p);
}

inline Derivation combine_window(const GradingPtr& ctx, int order,
                                 const std::vector<RingElem>& coords) {
    CommSeries a = CommSeries::zero(ctx), b = CommSeries::zero(ctx);
    for (size_t i = 0; i < coords.size(); ++i) {
        if (coords[i].is_zero()) continue;
        int j = static_cast<int>(i % static_cast<size_t>(order)) + 1;
        CommSeries term = CommSeries::t_power(ctx, j).scaled(coords[i]);
        if (i < static_cast<size_t>(order))
            a = a + term;
        else
            b = b + term;
    }
    return Derivation::from_comm(a, b);
}

}  // namespace detail

// Cohomology of a normal-form odd structure in the window of t-powers
// 1..order, presented as annihilator-tagged classes of an R-module.  The
// computation runs on the cochain complex itself: exact kernel of the
// differential on polynomial cochains, modulo the coboundaries that land in
// the window.  Supported coefficient rings: Q and Z/p by elimination, Z by
// Smith normal form.
inline CohomologyPresentation hh_module(const MooreStructure& m, int order) {
    const GradingPtr& ctx = m.ctx();
    if (!m.is_odd_case())
        throw Error("module presentations are implemented for the odd case");
    if (!m.is_normal_form())
        throw Error("module presentations require normal form (v = 0); "
                    "reduce via normal_form first");
    if (order < 1 || order > ctx->trunc)
        throw Error("cohomology window must satisfy 1 <= order <= truncation order");
    const RingPtr& R = ctx->ring;

    enum class Mode { Field, Lattice } mode;
    if (R->kind == Ring::Kind::Rationals)
        mode = Mode::Field;
    else if (R->kind == Ring::Kind::Integers)
        mode = Mode::Lattice;
    else if (R->kind == Ring::Kind::Residues &&
             mpz_probab_prime_p(R->modulus.get_mpz_t(), 32) > 0)
        mode = Mode::Field;
    else
        throw Error("module presentations support Q, Z and Z/p coefficients, not " + R->str());

    CohomologyPresentation pres;
    pres.ctx = ctx;
    pres.order = order;

    const CommSeries& w = m.w();
    if (w.valuation() >= kInfiniteValuation) {
        pres.hypothesis_failures.push_back("w vanishes");
    } else {
        int val = w.valuation();
        RingElem wk = w[val];
        bool zero_div = false;
        if (R->kind == Ring::Kind::Residues) {
            mpz_class g;
            mpz_gcd(g.get_mpz_t(), wk.integer().get_mpz_t(), R->modulus.get_mpz_t());
            zero_div = g != 1;
        }
        if (zero_div)
            pres.hypothesis_failures.push_back("leading coefficient of w is a zero divisor");
        if (R->kind == Ring::Kind::Residues) {
            mpz_class g;
            mpz_class kz = val / 2;
            mpz_gcd(g.get_mpz_t(), kz.get_mpz_t(), R->modulus.get_mpz_t());
            if (g != 1) pres.hypothesis_failures.push_back("coefficient ring has k-torsion");
        }
    }
    if (!RingElem::from_int(R, 2).is_invertible())
        pres.hypothesis_failures.push_back("2 is not invertible");

    // Columns: d of each window basis cochain, exact.  Rows cover every
    // t-power the images reach so nothing is silently truncated.
    const size_t n = 2 * static_cast<size_t>(order);
    std::vector<Derivation> images;
    int reach = order;
    for (size_t i = 0; i < n; ++i) {
        Derivation db = hh_differential(detail::window_basis_elem(ctx, order, i), m);
        if (db.trusted() < kExact)
            throw Error("series truncation too small for the requested window; "
                        "raise the truncation order");
        reach = std::max({reach, db.comm_tau_part().degree(), db.comm_t_part().degree()});
        images.push_back(std::move(db));
    }
    const size_t rows = 2 * static_cast<size_t>(reach);
    auto row_of = [&](bool tau_part, int power) {
        return static_cast<size_t>(power - 1) + (tau_part ? 0 : static_cast<size_t>(reach));
    };
    auto in_window = [&](size_t row) {
        size_t p = row % static_cast<size_t>(reach);
        return p < static_cast<size_t>(order);
    };

    if (mode == Mode::Field) {
        MatF D(rows, std::vector<RingElem>(n, RingElem::zero(R)));
        for (size_t c = 0; c < n; ++c)
            for (int e = 1; e <= reach; ++e) {
                D[row_of(true, e)][c] = images[c].comm_tau_part()[e];
                D[row_of(false, e)][c] = images[c].comm_t_part()[e];
            }
        std::vector<std::vector<RingElem>> Z = field_kernel(D, R);
        MatF beyond;
        for (size_t r = 0; r < rows; ++r)
            if (!in_window(r)) beyond.push_back(D[r]);
        if (beyond.empty())  // kernel of a 0-row map is everything
            beyond.emplace_back(n, RingElem::zero(R));
        std::vector<std::vector<RingElem>> N = field_kernel(beyond, R);
        std::vector<std::vector<RingElem>> B;
        for (const auto& y : N) {
            std::vector<RingElem> img(n, RingElem::zero(R));
            bool nonzero = false;
            for (size_t r = 0; r < rows; ++r) {
                RingElem acc = RingElem::zero(R);
                for (size_t c = 0; c < n; ++c) acc = acc + D[r][c] * y[c];
                if (acc.is_zero()) continue;
                if (!in_window(r))
                    throw Error("internal: coboundary escaped the window");
                size_t p = r % static_cast<size_t>(reach);
                img[p + (r < static_cast<size_t>(reach) ? 0 : static_cast<size_t>(order))] =
                    acc;
                nonzero = true;
            }
            if (nonzero) B.push_back(std::move(img));
        }
        // Quotient: run elimination over [B | Z]; Z-columns that still add a
        // pivot represent classes.
        MatF q(n, std::vector<RingElem>(B.size() + Z.size(), RingElem::zero(R)));
        for (size_t j = 0; j < B.size(); ++j)
            for (size_t i = 0; i < n; ++i) q[i][j] = B[j][i];
        for (size_t j = 0; j < Z.size(); ++j)
            for (size_t i = 0; i < n; ++i) q[i][B.size() + j] = Z[j][i];
        std::vector<size_t> pivots = reduce_echelon(q);
        for (size_t p : pivots) {
            if (p < B.size()) continue;
            pres.classes.push_back(
                detail::make_class(detail::combine_window(ctx, order, Z[p - B.size()]),
                                   RingElem::zero(R)));
        }
        pres.free_rank = static_cast<int>(pres.classes.size());
        return pres;
    }

    // Lattice mode over Z.
    MatZ D = zmat_zero(rows, n);
    for (size_t c = 0; c < n; ++c)
        for (int e = 1; e <= reach; ++e) {
            D[row_of(true, e)][c] = images[c].comm_tau_part()[e].integer();
            D[row_of(false, e)][c] = images[c].comm_t_part()[e].integer();
        }
    std::vector<std::vector<mpz_class>> Z = integer_kernel(D);
    MatZ beyond;
    for (size_t r = 0; r < rows; ++r)
        if (!in_window(r)) beyond.push_back(D[r]);
    if (beyond.empty()) beyond.emplace_back(n, 0);
    std::vector<std::vector<mpz_class>> N = integer_kernel(beyond);
    std::vector<std::vector<mpz_class>> B;
    for (const auto& y : N) {
        std::vector<mpz_class> full = zmat_apply(D, y);
        std::vector<mpz_class> img(n, 0);
        bool nonzero = false;
        for (size_t r = 0; r < rows; ++r) {
            if (full[r] == 0) continue;
            if (!in_window(r)) throw Error("internal: coboundary escaped the window");
            size_t p = r % static_cast<size_t>(reach);
            img[p + (r < static_cast<size_t>(reach) ? 0 : static_cast<size_t>(order))] =
                full[r];
            nonzero = true;
        }
        if (nonzero) B.push_back(std::move(img));
    }

    // Relations of the coboundary lattice inside the cocycle lattice.
    const size_t zdim = Z.size();
    MatZ zmat = zmat_zero(n, zdim);
    for (size_t j = 0; j < zdim; ++j)
        for (size_t i = 0; i < n; ++i) zmat[i][j] = Z[j][i];
    MatZ X = zmat_zero(zdim, B.size());
    for (size_t j = 0; j < B.size(); ++j) {
        auto x = integer_solve(zmat, B[j]);
        if (!x) throw Error("internal: coboundary fell outside the cocycle lattice");
        for (size_t i = 0; i < zdim; ++i) X[i][j] = (*x)[i];
    }
    SmithDecomposition snf = smith_normal_form(X);
    for (size_t i = 0; i < zdim; ++i) {
        mpz_class ann = i < snf.rank ? snf.S[i][i] : mpz_class(0);
        if (ann == 1) continue;
        std::vector<RingElem> coords(n, RingElem::zero(R));
        for (size_t r = 0; r < n; ++r) {
            mpz_class acc = 0;
            for (size_t j = 0; j < zdim; ++j) acc += zmat[r][j] * snf.Uinv[j][i];
            coords[r] = RingElem::from_integer(R, acc);
        }
        pres.classes.push_back(detail::make_class(detail::combine_window(ctx, order, coords),
                                                  RingElem::from_integer(R, ann)));
        if (ann == 0) ++pres.free_rank;
    }
    // Free classes last, torsion by ascending invariant in between; reorder so
    // free classes come first for stable reporting.
    std::stable_sort(pres.classes.begin(), pres.classes.end(),
                     [](const CohomologyClass& a, const CohomologyClass& b) {
                         return a.is_free() && !b.is_free();
                     });
    return pres;
}

struct BracketTableEntry {
    size_t i, j;       // indices into the presentation's class list
    Derivation value;  // [rep_i, rep_j] in closed form
};

struct TrivialCohomology {
    CohomologyPresentation presentation;
    std::vector<BracketTableEntry> table;
};

// Cohomology of the trivial odd structure m0: every even-power t^e dtau and
// odd-power t^e dt survives freely, and the only nonzero brackets are
// [B dt, A dtau] = B A' dtau together with the dt-part closing on itself.
inline TrivialCohomology hh_trivial(const GradingPtr& ctx, int order) {
    if (ctx->parity_t() != 1)
        throw Error("the trivial-structure presentation is for the odd case");
    if (!RingElem::from_int(ctx->ring, 2).is_invertible())
        throw Error("the trivial-structure presentation requires 2 to be invertible in " +
                    ctx->ring->str());
    if (order < 1 || order > ctx->trunc)
        throw Error("cohomology window must satisfy 1 <= order <= truncation order");

    TrivialCohomology out;
    out.presentation.ctx = ctx;
    out.presentation.order = order;
    CommSeries z = CommSeries::zero(ctx);
    std::vector<CommSeries> reps;  // comm data; dtau classes first
    std::vector<bool> is_tau;
    for (int e = 2; e <= order; e += 2) {
        out.presentation.classes.push_back(detail::make_class(
            Derivation::from_comm(CommSeries::t_power(ctx, e), z), RingElem::zero(ctx->ring)));
        reps.push_back(CommSeries::t_power(ctx, e));
        is_tau.push_back(true);
    }
    for (int e = 1; e <= order; e += 2) {
        out.presentation.classes.push_back(detail::make_class(
            Derivation::from_comm(z, CommSeries::t_power(ctx, e)), RingElem::zero(ctx->ring)));
        reps.push_back(CommSeries::t_power(ctx, e));
        is_tau.push_back(false);
    }
    out.presentation.free_rank = static_cast<int>(out.presentation.classes.size());

    for (size_t i = 0; i < reps.size(); ++i)
        for (size_t j = i + 1; j < reps.size(); ++j) {
            CommSeries val_tau = z, val_t = z;
            if (is_tau[i] && !is_tau[j]) {
                val_tau = -(reps[j] * reps[i].derivative());  // [A dtau, B dt] = -B A' dtau
            } else if (!is_tau[i] && is_tau[j]) {
                val_tau = reps[i] * reps[j].derivative();  // [B dt, A dtau] = B A' dtau
            } else if (!is_tau[i] && !is_tau[j]) {
                val_t = reps[i] * reps[j].derivative() - reps[j] * reps[i].derivative();
            }
            out.table.push_back({i, j, Derivation::from_comm(val_tau, val_t)});
        }
    return out;
}

}  // namespace cobar
