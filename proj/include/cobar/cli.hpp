#pragma once

// Command dispatcher for the cobar tool.  Exit codes: 0 when the mathematical
// answer is positive, 1 when the computation succeeded but the answer is
// negative (the report carries a witness), 2 for usage and domain errors.

#include <cobar/deform.hpp>
#include <cobar/parse.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <memory>
#include <ostream>
#include <string>
#include <vector>

namespace cobar {
namespace cli {

using nlohmann::json;

inline constexpr const char* kSchema = "cobar-report/1";

inline long clamp_trusted(long t, const GradingPtr& ctx) {
    return std::min<long>(t, ctx->trunc);
}

inline json structure_json(const MooreStructure& m) {
    if (m.is_odd_case())
        return json{{"case", "odd"}, {"v", m.v().str()}, {"w", m.w().str()}};
    return json{{"case", "even"}, {"u", m.u().str()}};
}

inline json gauge_json(const GaugePair& p) {
    return json{{"G", p.G().str()}, {"F", p.F().str()}};
}

// Normalised derivations only: both images must be substitutions in t.
inline json cochain_json(const Derivation& d) {
    return json{{"dtau", d.comm_tau_part().str()}, {"dt", d.comm_t_part().str()}};
}

inline json presentation_json(const CohomologyPresentation& P) {
    json classes = json::array();
    for (const auto& c : P.classes) {
        json e;
        e["representative"] = cochain_json(c.representative);
        e["annihilator"] = c.annihilator.str();
        e["free"] = c.is_free();
        if (c.degree_standard) {
            e["degree_standard"] = *c.degree_standard;
            e["degree_classical"] = *c.degree_classical;
        }
        classes.push_back(std::move(e));
    }
    json out;
    out["order"] = P.order;
    out["free_rank"] = P.free_rank;
    out["classes"] = std::move(classes);
    out["hypothesis_failures"] = P.hypothesis_failures;
    return out;
}

// Flags shared by every subcommand, plus the per-command extras.  The parity
// of t resolves from the first of --d, --d-parity, --odd/--even that was
// given, falling back to which structure series were passed.
struct Flags {
    std::string ring_spec = "Q";
    long d = 0;
    std::string d_parity;
    bool odd_flag = false;
    bool even_flag = false;
    long order = 8;
    bool strict = false;
    std::string format = "json";
    std::string v_text, w_text, u_text;
    std::string G_text = "0", F_text = "t";
    std::string v2_text, w2_text, u2_text;
    std::string jet_text, phi_text;
    long sdeg = 0;
    long jet_order = 0;
    long max_order = -1;
    long k = 1;
    long base_trunc = 3;
    bool bracket_table = false;

    CLI::Option* d_opt = nullptr;
    CLI::Option* v_opt = nullptr;
    CLI::Option* w_opt = nullptr;
    CLI::Option* u_opt = nullptr;

    void attach_common(CLI::App* cmd, bool with_structure) {
        cmd->add_option("--ring", ring_spec,
                        "coefficient ring: Q, Z, Z/6, F2, poly(Q; x:0, y:0; 2), sqz(Q; e:0)");
        d_opt = cmd->add_option("--d", d, "cell parameter d; t has degree -(d+2)");
        cmd->add_option("--d-parity", d_parity, "parity of d: odd or even")
            ->check(CLI::IsMember({"odd", "even"}));
        cmd->add_flag("--odd", odd_flag, "shorthand for --d-parity odd");
        cmd->add_flag("--even", even_flag, "shorthand for --d-parity even");
        cmd->add_option("--order", order, "truncation order for all series");
        cmd->add_flag("--strict", strict, "enforce homogeneity of structure maps");
        cmd->add_option("--format", format, "report format")
            ->check(CLI::IsMember({"json", "text"}));
        if (with_structure) {
            v_opt = cmd->add_option("--v", v_text, "odd-case dt coefficient v(t)");
            w_opt = cmd->add_option("--w", w_text, "odd-case dtau coefficient w(t)");
            u_opt = cmd->add_option("--u", u_text, "even-case dtau coefficient u(t)");
        }
    }

    long resolve_d() const {
        if (d_opt && d_opt->count()) return d;
        if (d_parity == "odd") return 1;
        if (d_parity == "even") return 2;
        if (odd_flag) return 1;
        if (even_flag) return 2;
        if ((v_opt && v_opt->count()) || (w_opt && w_opt->count())) return 1;
        if (u_opt && u_opt->count()) return 2;
        throw Error("cannot tell whether t is odd or even: pass --d, --d-parity, "
                    "--odd, or --even");
    }

    GradingPtr context() const { return context_with_trunc(order); }

    GradingPtr context_with_trunc(long trunc) const {
        if (order < 1) throw Error("--order must be at least 1");
        return Grading::make(parse_ring_spec(ring_spec), resolve_d(),
                             static_cast<int>(trunc), strict);
    }

    MooreStructure structure(const GradingPtr& ctx) const {
        if (ctx->parity_t() == 1) {
            if (u_opt && u_opt->count())
                throw Error("--u belongs to the even case; odd structures take --v and --w");
            return MooreStructure::odd(parse_comm_series(v_or_default(), ctx),
                                       parse_comm_series(w_or_default(), ctx));
        }
        if ((v_opt && v_opt->count()) || (w_opt && w_opt->count()))
            throw Error("--v and --w belong to the odd case; even structures take --u");
        return MooreStructure::even(parse_comm_series(u_or_default(), ctx));
    }

    std::string v_or_default() const { return v_opt && v_opt->count() ? v_text : "0"; }
    std::string w_or_default() const { return w_opt && w_opt->count() ? w_text : "0"; }
    std::string u_or_default() const { return u_opt && u_opt->count() ? u_text : "0"; }

    json inputs(const GradingPtr& ctx, bool with_structure) const {
        json in;
        in["ring"] = ctx->ring->str();
        in["d"] = ctx->d;
        in["order"] = ctx->trunc;
        if (strict) in["strict"] = true;
        if (with_structure) {
            if (ctx->parity_t() == 1) {
                in["v"] = v_or_default();
                in["w"] = w_or_default();
            } else {
                in["u"] = u_or_default();
            }
        }
        return in;
    }

    DeformationJet jet(const MooreStructure& m) const {
        std::vector<Derivation> coeffs = parse_jet_coefficients(jet_text, m.ctx());
        long n = jet_order > 0 ? jet_order : static_cast<long>(coeffs.size());
        if (n < 1) throw Error("the jet needs at least one coefficient or --jet-order");
        return DeformationJet(m, sdeg, static_cast<int>(n), coeffs);
    }
};

inline int emit(std::ostream& out, const Flags& fl, const std::string& command,
                const json& inputs, long trusted, const json& result,
                const std::string& text, int code) {
    if (fl.format == "text") {
        out << text << "\n";
        return code;
    }
    json rep;
    rep["schema"] = kSchema;
    rep["command"] = command;
    rep["inputs"] = inputs;
    rep["trusted_order"] = trusted;
    rep["result"] = result;
    out << rep.dump(2) << "\n";
    return code;
}

inline int cmd_check_structure(const Flags& fl, std::ostream& out) {
    GradingPtr ctx = fl.context();
    MooreStructure m = fl.structure(ctx);
    SquareZeroWitness wit = is_square_zero(m.derivation());
    json result;
    result["square_zero"] = wit.ok;
    result["checked_order"] = wit.checked_order;
    if (!wit.ok) result["witness"] = wit.describe();
    return emit(out, fl, "check-structure", fl.inputs(ctx, true), wit.checked_order, result,
                wit.describe(), wit.ok ? 0 : 1);
}

inline int cmd_conjugate(const Flags& fl, std::ostream& out) {
    GradingPtr ctx = fl.context();
    MooreStructure m = fl.structure(ctx);
    GaugePair p(parse_comm_series(fl.G_text, ctx), parse_comm_series(fl.F_text, ctx));
    MooreStructure moved = act(p, m);
    json in = fl.inputs(ctx, true);
    in["G"] = fl.G_text;
    in["F"] = fl.F_text;
    json result;
    result["transported"] = structure_json(moved);
    long trusted = clamp_trusted(
        moved.is_odd_case() ? std::min(moved.v().trusted(), moved.w().trusted())
                            : moved.u().trusted(),
        ctx);
    return emit(out, fl, "conjugate", in, trusted, result, moved.str(), 0);
}

inline int cmd_normal_form(const Flags& fl, std::ostream& out) {
    GradingPtr ctx = fl.context();
    MooreStructure m = fl.structure(ctx);
    NormalFormResult nf = normal_form(m);
    json result;
    result["gauge"] = gauge_json(nf.gauge);
    result["u"] = nf.u.str();
    result["normal"] = structure_json(nf.normal);
    return emit(out, fl, "normal-form", fl.inputs(ctx, true), clamp_trusted(nf.u.trusted(), ctx),
                result, "gauge " + nf.gauge.str() + "\nu = " + nf.u.str(), 0);
}

inline int cmd_hh(const Flags& fl, std::ostream& out) {
    // The window runs to --order; the working truncation doubles it so the
    // differential of every window cochain is exact.
    GradingPtr ctx = fl.context_with_trunc(2 * fl.order);
    MooreStructure m = fl.structure(ctx);
    json result;
    std::string text;
    if (fl.bracket_table) {
        if (!m.is_trivial_up_to(ctx->trunc))
            throw Error("--bracket-table presents the trivial structure; drop --v/--w/--u");
        TrivialCohomology tc = hh_trivial(ctx, static_cast<int>(fl.order));
        result["presentation"] = presentation_json(tc.presentation);
        json table = json::array();
        for (const auto& e : tc.table)
            table.push_back(json{{"i", e.i}, {"j", e.j}, {"value", cochain_json(e.value)}});
        result["bracket_table"] = std::move(table);
        text = tc.presentation.str();
    } else {
        CohomologyPresentation pres = hh_module(m, static_cast<int>(fl.order));
        result = presentation_json(pres);
        text = pres.str();
    }
    json in = fl.inputs(ctx, true);
    in["order"] = fl.order;
    return emit(out, fl, "hh", in, fl.order, result, text, 0);
}

inline int cmd_deform_check(const Flags& fl, std::ostream& out) {
    GradingPtr ctx = fl.context();
    MooreStructure m = fl.structure(ctx);
    DeformationJet J = fl.jet(m);
    JetCheck chk = jet_order_check(J);
    json in = fl.inputs(ctx, true);
    in["jet"] = fl.jet_text;
    in["s_degree"] = fl.sdeg;
    in["jet_order"] = J.order();
    json result;
    result["ok"] = chk.ok;
    result["first_failing_order"] = chk.first_failing_order;
    if (!chk.ok) result["witness"] = chk.witness;
    return emit(out, fl, "deform-check", in, ctx->trunc, result,
                chk.ok ? "square-zero jet through order " + std::to_string(J.order())
                       : chk.witness,
                chk.ok ? 0 : 1);
}

inline int cmd_obstruction(const Flags& fl, std::ostream& out) {
    GradingPtr ctx = fl.context();
    MooreStructure m = fl.structure(ctx);
    DeformationJet J = fl.jet(m);
    Derivation obs = obstruction(J);
    CoboundaryResult sol = solve_coboundary(obs, m);
    json in = fl.inputs(ctx, true);
    in["jet"] = fl.jet_text;
    in["s_degree"] = fl.sdeg;
    in["jet_order"] = J.order();
    json result;
    result["obstruction"] = cochain_json(obs);
    result["is_coboundary"] = sol.is_coboundary;
    result["detail"] = sol.detail;
    if (sol.is_coboundary) {
        result["preimage"] = cochain_json(sol.preimage);
        result["extension_coefficient"] = cochain_json(-sol.preimage);
    } else {
        result["residual"] = cochain_json(sol.residual);
    }
    return emit(out, fl, "obstruction", in, clamp_trusted(obs.trusted(), ctx), result,
                "obstruction " + obs.str() + "\n" + sol.detail, sol.is_coboundary ? 0 : 1);
}

inline int cmd_trivialize(const Flags& fl, std::ostream& out) {
    GradingPtr ctx = fl.context();
    MooreStructure m = fl.structure(ctx);
    DeformationJet J = fl.jet(m);
    TrivializeResult res = trivialize(J, static_cast<int>(fl.max_order));
    json in = fl.inputs(ctx, true);
    in["jet"] = fl.jet_text;
    in["s_degree"] = fl.sdeg;
    in["jet_order"] = J.order();
    in["max_order"] = fl.max_order;
    json steps = json::array();
    for (const auto& s : res.steps)
        steps.push_back(json{{"order", s.order}, {"xi", cochain_json(s.xi)}});
    json result;
    result["success"] = res.success;
    result["steps"] = std::move(steps);
    if (!res.success) {
        result["stuck_order"] = res.stuck_order;
        result["stuck_class"] = cochain_json(res.stuck_class);
    }
    result["detail"] = res.detail;
    return emit(out, fl, "trivialize", in, ctx->trunc, result, res.detail,
                res.success ? 0 : 1);
}

inline int cmd_integrate(const Flags& fl, std::ostream& out) {
    GradingPtr ctx = fl.context();
    MooreStructure m = fl.structure(ctx);
    Derivation phi = parse_cochain(fl.phi_text, ctx);
    long n = fl.jet_order > 0 ? fl.jet_order : 6;
    AutomorphismJet psi = integrate_infinitesimal(m, phi, static_cast<int>(fl.k),
                                                  static_cast<int>(n), fl.sdeg);
    json in = fl.inputs(ctx, true);
    in["phi"] = fl.phi_text;
    in["k"] = fl.k;
    in["s_degree"] = fl.sdeg;
    in["jet_order"] = n;
    json coeffs = json::array();
    for (int i = 1; i <= psi.order(); ++i) {
        auto [ptau, pt] = psi.coefficient(i);
        coeffs.push_back(json{{"k", i}, {"tau_image", ptau.str()}, {"t_image", pt.str()}});
    }
    Derivation M = detail::embed_derivation(m.derivation(), psi.jet_ctx());
    bool fixes = agree(conjugate(psi.endo(), M), M);
    json result;
    result["order"] = psi.order();
    result["s_degree"] = psi.s_degree();
    result["coefficients"] = std::move(coeffs);
    result["fixes_structure"] = fixes;
    return emit(out, fl, "integrate", in, ctx->trunc, result, psi.str(), fixes ? 0 : 1);
}

inline int cmd_classify(const Flags& fl, std::ostream& out) {
    GradingPtr ctx = fl.context();
    MooreStructure m = fl.structure(ctx);
    DeformationOverBase D(m);
    MiniversalClassification mc = classify_miniversal(D, fl.base_trunc);
    json in = fl.inputs(ctx, true);
    in["base_trunc"] = fl.base_trunc;
    json fmap;
    for (const auto& [name, img] : mc.f.images()) fmap[name] = img.str();
    bool matches = agree(push_out(mc.f, mc.universal).structure(), mc.transported.structure());
    json result;
    result["gauge"] = gauge_json(mc.gauge);
    result["map"] = std::move(fmap);
    result["universal"] = structure_json(mc.universal.structure());
    result["transported"] = structure_json(mc.transported.structure());
    result["f_unique"] = mc.f_unique;
    result["push_out_matches"] = matches;
    std::string text = "transported: " + mc.transported.structure().str();
    return emit(out, fl, "classify", in, ctx->trunc, result, text, matches ? 0 : 1);
}

inline int cmd_verify_equivalence(const Flags& fl, std::ostream& out) {
    GradingPtr ctx = fl.context();
    MooreStructure m1 = fl.structure(ctx);
    MooreStructure m2 =
        ctx->parity_t() == 1
            ? MooreStructure::odd(parse_comm_series(fl.v2_text.empty() ? "0" : fl.v2_text, ctx),
                                  parse_comm_series(fl.w2_text.empty() ? "0" : fl.w2_text, ctx))
            : MooreStructure::even(parse_comm_series(fl.u2_text.empty() ? "0" : fl.u2_text, ctx));
    GaugePair p(parse_comm_series(fl.G_text, ctx), parse_comm_series(fl.F_text, ctx));
    EquivalenceCheck res = verify_equivalence(p, m1, m2);
    json in = fl.inputs(ctx, true);
    in["G"] = fl.G_text;
    in["F"] = fl.F_text;
    if (ctx->parity_t() == 1) {
        in["v2"] = fl.v2_text.empty() ? "0" : fl.v2_text;
        in["w2"] = fl.w2_text.empty() ? "0" : fl.w2_text;
    } else {
        in["u2"] = fl.u2_text.empty() ? "0" : fl.u2_text;
    }
    json result;
    result["equivalent"] = res.equivalent;
    result["transported"] = structure_json(res.transported);
    if (!res.equivalent) result["detail"] = res.detail;
    return emit(out, fl, "verify-equivalence", in, ctx->trunc, result,
                res.equivalent ? "equivalent" : res.detail, res.equivalent ? 0 : 1);
}

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"exact calculus for Moore algebra structures", "cobar"};
    app.require_subcommand(1);
    int code = 0;

    auto common = [&](CLI::App* sc, bool with_structure) {
        auto fl = std::make_shared<Flags>();
        fl->attach_common(sc, with_structure);
        return fl;
    };

    {
        auto* sc = app.add_subcommand("check-structure",
                                      "verify that the structure derivation squares to zero");
        auto fl = common(sc, true);
        sc->callback([&code, fl, &out] { code = cmd_check_structure(*fl, out); });
    }
    {
        auto* sc = app.add_subcommand("conjugate", "transport a structure along a gauge pair");
        auto fl = common(sc, true);
        sc->add_option("--G", fl->G_text, "gauge series G(t)");
        sc->add_option("--F", fl->F_text, "gauge substitution F(t), an invertible series");
        sc->callback([&code, fl, &out] { code = cmd_conjugate(*fl, out); });
    }
    {
        auto* sc = app.add_subcommand("normal-form",
                                      "gauge away the dt part of an odd structure");
        auto fl = common(sc, true);
        sc->callback([&code, fl, &out] { code = cmd_normal_form(*fl, out); });
    }
    {
        auto* sc = app.add_subcommand("hh", "cohomology of a normal-form structure");
        auto fl = common(sc, true);
        sc->add_flag("--bracket-table", fl->bracket_table,
                     "present the trivial odd structure with its bracket table");
        sc->callback([&code, fl, &out] { code = cmd_hh(*fl, out); });
    }
    {
        auto* sc = app.add_subcommand("deform-check",
                                      "check the order-by-order square-zero condition of a jet");
        auto fl = common(sc, true);
        sc->add_option("--jet", fl->jet_text, "coefficients, e.g. \"m1: t^2 dt; m2: t^3 dt\"")
            ->required();
        sc->add_option("--sdeg", fl->sdeg, "internal degree of the jet parameter");
        sc->add_option("--jet-order", fl->jet_order, "jet order; defaults to the top entry");
        sc->callback([&code, fl, &out] { code = cmd_deform_check(*fl, out); });
    }
    {
        auto* sc = app.add_subcommand(
            "obstruction", "the class blocking a one-order extension of a square-zero jet");
        auto fl = common(sc, true);
        sc->add_option("--jet", fl->jet_text, "coefficients, e.g. \"m1: t^2 dt\"")->required();
        sc->add_option("--sdeg", fl->sdeg, "internal degree of the jet parameter");
        sc->add_option("--jet-order", fl->jet_order, "jet order; defaults to the top entry");
        sc->callback([&code, fl, &out] { code = cmd_obstruction(*fl, out); });
    }
    {
        auto* sc = app.add_subcommand("trivialize",
                                      "clear jet coefficients order by order by conjugation");
        auto fl = common(sc, true);
        sc->add_option("--jet", fl->jet_text, "coefficients, e.g. \"m2: t^2 dtau\"")->required();
        sc->add_option("--sdeg", fl->sdeg, "internal degree of the jet parameter");
        sc->add_option("--jet-order", fl->jet_order, "jet order; defaults to the top entry");
        sc->add_option("--max-order", fl->max_order, "stop after this order");
        sc->callback([&code, fl, &out] { code = cmd_trivialize(*fl, out); });
    }
    {
        auto* sc = app.add_subcommand("integrate",
                                      "exponentiate an infinitesimal symmetry to a jet");
        auto fl = common(sc, true);
        sc->add_option("--phi", fl->phi_text, "cochain to integrate, e.g. \"t^3 dt\"")
            ->required();
        sc->add_option("--k", fl->k, "power of the parameter in exp(s^k phi)");
        sc->add_option("--sdeg", fl->sdeg, "internal degree of the jet parameter");
        sc->add_option("--jet-order", fl->jet_order, "order of the resulting jet (default 6)");
        sc->callback([&code, fl, &out] { code = cmd_integrate(*fl, out); });
    }
    {
        auto* sc = app.add_subcommand(
            "classify", "express a deformation as a base change of the universal one");
        auto fl = common(sc, true);
        sc->add_option("--base-trunc", fl->base_trunc,
                       "truncation of the universal coefficient base");
        sc->callback([&code, fl, &out] { code = cmd_classify(*fl, out); });
    }
    {
        auto* sc = app.add_subcommand("verify-equivalence",
                                      "check that a gauge pair carries one structure to another");
        auto fl = common(sc, true);
        sc->add_option("--G", fl->G_text, "gauge series G(t)");
        sc->add_option("--F", fl->F_text, "gauge substitution F(t)");
        sc->add_option("--v2", fl->v2_text, "target odd-case v(t)");
        sc->add_option("--w2", fl->w2_text, "target odd-case w(t)");
        sc->add_option("--u2", fl->u2_text, "target even-case u(t)");
        sc->callback([&code, fl, &out] { code = cmd_verify_equivalence(*fl, out); });
    }

    std::vector<const char*> argv;
    argv.push_back("cobar");
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        int c = app.exit(e, out, err);
        return c == 0 ? 0 : 2;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    return code;
}

}  // namespace cli
}  // namespace cobar
