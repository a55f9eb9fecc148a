#pragma once

// Text front end: ring specs, series expressions, cochains, and jet
// coefficient lists.  The grammars accept exactly what the str() methods
// emit, so parse(str(x)) round-trips for every value the library prints.

#include <cobar/calculus.hpp>

#include <cctype>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace cobar {
namespace parsing {

struct Token {
    enum Kind { Int, Name, Plus, Minus, Star, Slash, Caret, LParen, RParen, Semi, Colon, Comma, End };
    Kind kind = End;
    std::string text;
    size_t pos = 0;
};

inline const char* token_label(Token::Kind k) {
    switch (k) {
        case Token::Int: return "an integer";
        case Token::Name: return "a name";
        case Token::Plus: return "'+'";
        case Token::Minus: return "'-'";
        case Token::Star: return "'*'";
        case Token::Slash: return "'/'";
        case Token::Caret: return "'^'";
        case Token::LParen: return "'('";
        case Token::RParen: return "')'";
        case Token::Semi: return "';'";
        case Token::Colon: return "':'";
        case Token::Comma: return "','";
        case Token::End: return "end of input";
    }
    return "?";
}

inline std::vector<Token> tokenize(const std::string& text) {
    std::vector<Token> out;
    size_t i = 0;
    while (i < text.size()) {
        char c = text[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        size_t start = i;
        if (std::isdigit(static_cast<unsigned char>(c))) {
            while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
            out.push_back({Token::Int, text.substr(start, i - start), start});
            continue;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            while (i < text.size() && (std::isalnum(static_cast<unsigned char>(text[i])) ||
                                       text[i] == '_'))
                ++i;
            out.push_back({Token::Name, text.substr(start, i - start), start});
            continue;
        }
        Token::Kind k;
        switch (c) {
            case '+': k = Token::Plus; break;
            case '-': k = Token::Minus; break;
            case '*': k = Token::Star; break;
            case '/': k = Token::Slash; break;
            case '^': k = Token::Caret; break;
            case '(': k = Token::LParen; break;
            case ')': k = Token::RParen; break;
            case ';': k = Token::Semi; break;
            case ':': k = Token::Colon; break;
            case ',': k = Token::Comma; break;
            default:
                throw Error("parse error at position " + std::to_string(start) +
                            ": unexpected character '" + std::string(1, c) + "'");
        }
        out.push_back({k, text.substr(start, 1), start});
        ++i;
    }
    out.push_back({Token::End, "", text.size()});
    return out;
}

// Recursive-descent reader over a token stream.  Series grammar:
//   expr   := term (('+' | '-') term)*
//   term   := factor ('*' factor)*
//   factor := atom ('^' Int)?
//   atom   := Int ('/' Int)? | Name | '(' expr ')' | '-' factor
// The slash only forms rational literals, it is not a general operator.
class Reader {
public:
    Reader(std::vector<Token> toks, GradingPtr ctx)
        : toks_(std::move(toks)), ctx_(std::move(ctx)) {}

    const Token& peek() const { return toks_[at_]; }
    Token take() { return toks_[at_++]; }

    [[noreturn]] void fail(const std::string& expected) const {
        const Token& t = peek();
        throw Error("parse error at position " + std::to_string(t.pos) + ": expected " +
                    expected + ", found " + token_label(t.kind) +
                    (t.text.empty() ? "" : " '" + t.text + "'"));
    }

    Token expect(Token::Kind k, const std::string& what) {
        if (peek().kind != k) fail(what);
        return take();
    }

    void expect_end() {
        if (peek().kind != Token::End) fail("end of input");
    }

    NcSeries expr() {
        NcSeries acc = signed_term();
        while (peek().kind == Token::Plus || peek().kind == Token::Minus) {
            bool minus = take().kind == Token::Minus;
            NcSeries rhs = term();
            acc = minus ? acc - rhs : acc + rhs;
        }
        return acc;
    }

    NcSeries term() {
        NcSeries acc = factor();
        while (peek().kind == Token::Star) {
            take();
            acc = acc * factor();
        }
        return acc;
    }

private:
    std::vector<Token> toks_;
    size_t at_ = 0;
    GradingPtr ctx_;

    NcSeries signed_term() {
        if (peek().kind == Token::Minus) {
            take();
            return -term();
        }
        return term();
    }

    NcSeries factor() {
        NcSeries base = atom();
        if (peek().kind == Token::Caret) {
            take();
            Token e = expect(Token::Int, "an exponent");
            long n = std::stol(e.text);
            if (n > 4096)
                throw Error("parse error at position " + std::to_string(e.pos) +
                            ": exponent " + e.text + " is too large");
            NcSeries acc = NcSeries::one(ctx_);
            for (long i = 0; i < n; ++i) acc = acc * base;
            return acc;
        }
        return base;
    }

    NcSeries atom() {
        const Token& t = peek();
        switch (t.kind) {
            case Token::Int: {
                Token num = take();
                mpz_class n(num.text);
                if (peek().kind == Token::Slash) {
                    take();
                    Token den = expect(Token::Int, "a denominator");
                    mpz_class d(den.text);
                    if (d == 0)
                        throw Error("parse error at position " + std::to_string(den.pos) +
                                    ": zero denominator");
                    return NcSeries::one(ctx_).scaled(
                        RingElem::from_rational(ctx_->ring, mpq_class(n, d)));
                }
                return NcSeries::one(ctx_).scaled(RingElem::from_integer(ctx_->ring, n));
            }
            case Token::Name: {
                Token name = take();
                if (name.text == "tau") return NcSeries::gen_tau(ctx_);
                if (name.text == "t") return NcSeries::gen_t(ctx_);
                if (!ctx_->ring->is_extension() || !ctx_->ring->has_gen(name.text))
                    throw Error("parse error at position " + std::to_string(name.pos) +
                                ": unknown generator '" + name.text + "' in ring " +
                                ctx_->ring->str());
                return NcSeries::one(ctx_).scaled(RingElem::generator(ctx_->ring, name.text));
            }
            case Token::LParen: {
                take();
                NcSeries inner = expr();
                expect(Token::RParen, "')'");
                return inner;
            }
            case Token::Minus: {
                take();
                return -factor();
            }
            default:
                fail("a series atom");
        }
    }
};

}  // namespace parsing

inline NcSeries parse_series(const std::string& text, const GradingPtr& ctx) {
    parsing::Reader r(parsing::tokenize(text), ctx);
    NcSeries s = r.expr();
    r.expect_end();
    return s;
}

inline CommSeries parse_comm_series(const std::string& text, const GradingPtr& ctx) {
    return CommSeries::from_nc(parse_series(text, ctx));
}

// A cochain is a sum of legs, each a t-series juxtaposed with dtau or dt:
//   cochain := ['-'] leg (('+' | '-') leg)*
//   leg     := term? ('dtau' | 'dt')
// "t^2 dtau", "dt", and "t dtau - (1/2)*t^3 dt" are all legal.
inline std::pair<CommSeries, CommSeries> parse_cochain_parts(const std::string& text,
                                                             const GradingPtr& ctx) {
    parsing::Reader r(parsing::tokenize(text), ctx);
    CommSeries A = CommSeries::zero(ctx);
    CommSeries B = CommSeries::zero(ctx);
    bool first = true;
    while (true) {
        bool minus = false;
        if (first) {
            if (r.peek().kind == parsing::Token::Minus) {
                r.take();
                minus = true;
            }
        } else if (r.peek().kind == parsing::Token::Plus ||
                   r.peek().kind == parsing::Token::Minus) {
            minus = r.take().kind == parsing::Token::Minus;
        } else {
            r.fail("'+', '-', or end of cochain");
        }
        first = false;
        NcSeries coeff = NcSeries::one(ctx);
        if (!(r.peek().kind == parsing::Token::Name &&
              (r.peek().text == "dtau" || r.peek().text == "dt")))
            coeff = r.term();
        if (r.peek().kind != parsing::Token::Name ||
            (r.peek().text != "dtau" && r.peek().text != "dt"))
            r.fail("'dtau' or 'dt'");
        parsing::Token leg = r.take();
        CommSeries c = CommSeries::from_nc(minus ? -coeff : coeff);
        if (leg.text == "dtau")
            A = A + c;
        else
            B = B + c;
        if (r.peek().kind == parsing::Token::End) break;
    }
    return {std::move(A), std::move(B)};
}

inline Derivation parse_cochain(const std::string& text, const GradingPtr& ctx) {
    auto [A, B] = parse_cochain_parts(text, ctx);
    return Derivation::from_comm(A, B);
}

// Jet coefficient lists: entries "m3: <cochain>" (or any other one-letter
// prefix) separated by semicolons; unmentioned slots are zero.
//   jet := entry (';' entry)*     entry := NAME ':' cochain
inline std::vector<std::pair<CommSeries, CommSeries>> parse_jet_parts(const std::string& text,
                                                                      const GradingPtr& ctx,
                                                                      char prefix) {
    std::map<int, std::pair<CommSeries, CommSeries>> slots;
    size_t at = 0;
    while (at <= text.size()) {
        size_t end = text.find(';', at);
        std::string entry = text.substr(at, end == std::string::npos ? end : end - at);
        size_t colon = entry.find(':');
        if (colon == std::string::npos)
            throw Error("jet entry '" + entry + "' is missing ':'");
        std::string label = entry.substr(0, colon);
        size_t l = label.find_first_not_of(" \t");
        size_t rgt = label.find_last_not_of(" \t");
        label = l == std::string::npos ? "" : label.substr(l, rgt - l + 1);
        if (label.size() < 2 || label[0] != prefix)
            throw Error("jet entry label '" + label + "' should look like '" +
                        std::string(1, prefix) + "2'");
        int k = 0;
        for (size_t i = 1; i < label.size(); ++i) {
            if (!std::isdigit(static_cast<unsigned char>(label[i])))
                throw Error("jet entry label '" + label + "' should look like '" +
                            std::string(1, prefix) + "2'");
            k = k * 10 + (label[i] - '0');
        }
        if (k < 1) throw Error("jet entry label '" + label + "' needs index >= 1");
        if (slots.count(k)) throw Error("jet entry '" + label + "' given twice");
        slots.emplace(k, parse_cochain_parts(entry.substr(colon + 1), ctx));
        if (end == std::string::npos) break;
        at = end + 1;
    }
    int top = slots.empty() ? 0 : slots.rbegin()->first;
    std::vector<std::pair<CommSeries, CommSeries>> out(
        static_cast<size_t>(top), {CommSeries::zero(ctx), CommSeries::zero(ctx)});
    for (auto& [k, parts] : slots) out[static_cast<size_t>(k) - 1] = std::move(parts);
    return out;
}

inline std::vector<Derivation> parse_jet_coefficients(const std::string& text,
                                                      const GradingPtr& ctx) {
    std::vector<Derivation> out;
    for (auto& [A, B] : parse_jet_parts(text, ctx, 'm'))
        out.push_back(Derivation::from_comm(A, B));
    return out;
}

namespace parsing {

inline bool is_probable_prime(const mpz_class& n) {
    if (n < 2) return false;
    for (mpz_class p = 2; p * p <= n; ++p)
        if (n % p == 0) return false;
    return true;
}

// Ring specs, matching Ring::str():
//   spec := 'Q' | 'Z' | 'Z' '/' Int | 'Z' Int | 'F' Int
//         | 'poly' '(' spec ';' gens ';' Int ')'
//         | 'sqz'  '(' spec ';' gens ')'
//   gens := Name (':' ['-'] Int)? (',' Name (':' ['-'] Int)?)*
// 'F<p>' requires p prime and is an alias for Z/p; Z-degree defaults to 0.
inline RingPtr ring_spec(Reader& r) {
    Token head = r.expect(Token::Name, "a ring name");
    const std::string& h = head.text;
    auto residue_alias = [&](size_t off, bool need_prime) -> RingPtr {
        mpz_class n(h.substr(off));
        if (need_prime && !is_probable_prime(n))
            throw Error("ring spec 'F" + n.get_str() + "' needs a prime; use Z/" + n.get_str() +
                        " for composite moduli");
        return Ring::residues(n);
    };
    if (h == "Q") return Ring::rationals();
    if (h == "Z") {
        if (r.peek().kind == Token::Slash) {
            r.take();
            Token n = r.expect(Token::Int, "a modulus");
            return Ring::residues(mpz_class(n.text));
        }
        return Ring::integers();
    }
    if (h.size() > 1 && (h[0] == 'Z' || h[0] == 'F') &&
        h.find_first_not_of("0123456789", 1) == std::string::npos)
        return residue_alias(1, h[0] == 'F');
    if (h == "poly" || h == "sqz") {
        r.expect(Token::LParen, "'('");
        RingPtr base = ring_spec(r);
        r.expect(Token::Semi, "';'");
        std::vector<RingGen> gens;
        while (true) {
            Token g = r.expect(Token::Name, "a generator name");
            long deg = 0;
            if (r.peek().kind == Token::Colon) {
                r.take();
                bool neg = r.peek().kind == Token::Minus;
                if (neg) r.take();
                Token d = r.expect(Token::Int, "a degree");
                deg = std::stol(d.text);
                if (neg) deg = -deg;
            }
            gens.push_back({g.text, deg});
            if (r.peek().kind != Token::Comma) break;
            r.take();
        }
        if (h == "sqz") {
            r.expect(Token::RParen, "')'");
            return Ring::square_zero(base, gens);
        }
        r.expect(Token::Semi, "';' before the truncation order");
        Token tr = r.expect(Token::Int, "a truncation order");
        r.expect(Token::RParen, "')'");
        return Ring::polynomial(base, gens, std::stoi(tr.text));
    }
    throw Error("parse error at position " + std::to_string(head.pos) + ": unknown ring '" + h +
                "'");
}

}  // namespace parsing

inline RingPtr parse_ring_spec(const std::string& text) {
    parsing::Reader r(parsing::tokenize(text), nullptr);
    RingPtr out = parsing::ring_spec(r);
    r.expect_end();
    return out;
}

}  // namespace cobar
