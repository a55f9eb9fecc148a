#pragma once

// Exact-arithmetic coefficient rings: Q, Z, Z/n, and towers of graded
// polynomial / square-zero extensions over them.  Elements are immutable
// values; every operation returns a canonical form (sorted monomials, no
// zero coefficients, truncation applied).

#include <gmpxx.h>

#include <algorithm>
#include <cctype>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace cobar {

struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class Ring;
using RingPtr = std::shared_ptr<const Ring>;

struct RingGen {
    std::string name;
    long degree = 0;  // internal degree; must be even wherever strict grading is in force
};

class Ring : public std::enable_shared_from_this<Ring> {
public:
    enum class Kind { Rationals, Integers, Residues, Polynomial, SquareZero };

    Kind kind;
    mpz_class modulus;          // Residues only, >= 2
    RingPtr base;               // extensions only
    std::vector<RingGen> gens;  // extensions only; names unique across the tower
    long trunc = 0;             // Polynomial only: monomials of total exponent > trunc vanish

    static RingPtr rationals() { return std::shared_ptr<Ring>(new Ring(Kind::Rationals)); }
    static RingPtr integers() { return std::shared_ptr<Ring>(new Ring(Kind::Integers)); }

    static RingPtr residues(const mpz_class& n) {
        if (n < 2) throw Error("Z/n requires n >= 2, got n = " + n.get_str());
        auto r = std::shared_ptr<Ring>(new Ring(Kind::Residues));
        r->modulus = n;
        return r;
    }

    static RingPtr polynomial(RingPtr base_ring, std::vector<RingGen> generators, long truncation) {
        if (truncation < 0) throw Error("polynomial extension requires truncation order >= 0");
        auto r = std::shared_ptr<Ring>(new Ring(Kind::Polynomial));
        r->base = std::move(base_ring);
        r->gens = std::move(generators);
        r->trunc = truncation;
        r->validate_gens();
        return r;
    }

    static RingPtr square_zero(RingPtr base_ring, std::vector<RingGen> generators) {
        auto r = std::shared_ptr<Ring>(new Ring(Kind::SquareZero));
        r->base = std::move(base_ring);
        r->gens = std::move(generators);
        r->validate_gens();
        return r;
    }

    bool is_extension() const { return kind == Kind::Polynomial || kind == Kind::SquareZero; }

    // Innermost base of the tower.
    RingPtr root() const {
        const Ring* r = this;
        while (r->is_extension()) r = r->base.get();
        return r->shared_from_this();
    }

    bool contains_rationals() const { return root()->kind == Kind::Rationals; }

    bool has_gen(const std::string& name) const {
        for (const Ring* r = this; r->is_extension(); r = r->base.get())
            for (const auto& g : r->gens)
                if (g.name == name) return true;
        return false;
    }

    long gen_degree(const std::string& name) const {
        for (const Ring* r = this; r->is_extension(); r = r->base.get())
            for (const auto& g : r->gens)
                if (g.name == name) return g.degree;
        throw Error("no generator named '" + name + "' in ring " + str());
    }

    bool evenly_graded() const {
        for (const Ring* r = this; r->is_extension(); r = r->base.get())
            for (const auto& g : r->gens)
                if (g.degree % 2 != 0) return false;
        return true;
    }

    bool same_as(const Ring& o) const {
        if (kind != o.kind) return false;
        switch (kind) {
            case Kind::Rationals:
            case Kind::Integers: return true;
            case Kind::Residues: return modulus == o.modulus;
            default: break;
        }
        if (gens.size() != o.gens.size()) return false;
        for (size_t i = 0; i < gens.size(); ++i)
            if (gens[i].name != o.gens[i].name || gens[i].degree != o.gens[i].degree) return false;
        if (kind == Kind::Polynomial && trunc != o.trunc) return false;
        return base->same_as(*o.base);
    }

    // Canonical text form; round-trips through the ring grammar.
    std::string str() const {
        switch (kind) {
            case Kind::Rationals: return "Q";
            case Kind::Integers: return "Z";
            case Kind::Residues: return "Z/" + modulus.get_str();
            default: break;
        }
        std::ostringstream os;
        os << (kind == Kind::Polynomial ? "poly(" : "sqz(") << base->str() << "; ";
        for (size_t i = 0; i < gens.size(); ++i) {
            if (i) os << ", ";
            os << gens[i].name << ":" << gens[i].degree;
        }
        if (kind == Kind::Polynomial) os << "; " << trunc;
        os << ")";
        return os.str();
    }

private:
    explicit Ring(Kind k) : kind(k) {}

    void validate_gens() const {
        if (gens.empty()) throw Error("ring extension requires at least one generator");
        for (const auto& g : gens) {
            if (g.name.empty()) throw Error("generator name must be nonempty");
            if (g.name == "t" || g.name == "tau" || g.name == "dt" || g.name == "dtau")
                throw Error("generator name '" + g.name + "' is reserved");
            bool ok = (std::isalpha(static_cast<unsigned char>(g.name[0])) || g.name[0] == '_');
            for (char c : g.name)
                ok = ok && (std::isalnum(static_cast<unsigned char>(c)) || c == '_');
            if (!ok) throw Error("generator name '" + g.name + "' is not an identifier");
        }
        for (size_t i = 0; i < gens.size(); ++i)
            for (size_t j = i + 1; j < gens.size(); ++j)
                if (gens[i].name == gens[j].name)
                    throw Error("duplicate generator name '" + gens[i].name + "'");
        for (const auto& g : gens)
            if (base->has_gen(g.name))
                throw Error("generator name '" + g.name + "' already used in base ring");
    }
};

inline mpz_class floor_mod(const mpz_class& a, const mpz_class& n) {
    mpz_class r;
    mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), n.get_mpz_t());
    return r;
}

// Exponent vector aligned with ring->gens.
using Mono = std::vector<unsigned>;

class RingElem {
public:
    struct Term;  // { Mono mono; RingElem coeff; }

    RingElem() = default;  // moved-from / placeholder state only

    static RingElem zero(const RingPtr& r);
    static RingElem one(const RingPtr& r);
    static RingElem from_int(const RingPtr& r, long v);
    static RingElem from_integer(const RingPtr& r, const mpz_class& v);
    // Interprets p/q as p * q^{-1}; fails if q is not invertible in r.
    static RingElem from_rational(const RingPtr& r, const mpq_class& v);
    static RingElem generator(const RingPtr& r, const std::string& name);
    // Wraps an element of r->base as a constant term of r.
    static RingElem constant(const RingPtr& r, const RingElem& base_coeff);

    const RingPtr& ring() const { return ring_; }
    bool valid() const { return ring_ != nullptr; }

    bool is_zero() const;
    bool is_one() const;

    RingElem operator-() const;
    friend RingElem operator+(const RingElem& a, const RingElem& b);
    friend RingElem operator-(const RingElem& a, const RingElem& b);
    friend RingElem operator*(const RingElem& a, const RingElem& b);
    bool operator==(const RingElem& o) const;
    bool operator!=(const RingElem& o) const { return !(*this == o); }

    RingElem pow(unsigned e) const;

    bool is_invertible() const { return inverse().has_value(); }
    std::optional<RingElem> inverse() const;

    // Augmentation split x = constant + kernel part: first component lives in
    // the root ring, second in this ring with zero constant term.
    std::pair<RingElem, RingElem> augment() const;
    RingElem counit() const;  // element of root()

    bool is_homogeneous(long degree) const;  // zero counts as homogeneous of any degree
    std::optional<long> homogeneous_degree() const;  // nullopt if zero or inhomogeneous

    // Coefficient of gen^power for single-generator extensions (element of base).
    RingElem outer_coefficient(unsigned power) const;
    unsigned outer_max_power() const;

    std::string str() const;

    // Raw payload access (used by linear algebra over base kinds).
    const mpq_class& rat() const { return q_; }
    const mpz_class& integer() const { return z_; }
    const std::vector<Term>& terms() const { return terms_; }

private:
    RingPtr ring_;
    mpq_class q_;              // Rationals
    mpz_class z_;              // Integers / Residues, canonical in [0, n) for Residues
    std::vector<Term> terms_;  // extensions: sorted by mono, nonzero coeffs only

    explicit RingElem(RingPtr r) : ring_(std::move(r)) {}
    static void check_same_ring(const RingElem& a, const RingElem& b);
    bool mono_kept(const Mono& m) const;
    void normalize_terms();
};

struct RingElem::Term {
    Mono mono;
    RingElem coeff;
};

// Embeds x into a ring whose base tower contains x's ring (identity if equal).
RingElem embed(const RingElem& x, const RingPtr& into);

inline void RingElem::check_same_ring(const RingElem& a, const RingElem& b) {
    if (!a.valid() || !b.valid()) throw Error("operation on uninitialized ring element");
    if (!a.ring_->same_as(*b.ring_)) throw Error("ring elements belong to different rings");
}

inline RingElem RingElem::zero(const RingPtr& r) {
    RingElem e(r);
    if (r->kind == Ring::Kind::Rationals) e.q_ = 0;
    return e;
}

inline RingElem RingElem::one(const RingPtr& r) { return from_int(r, 1); }

inline RingElem RingElem::from_integer(const RingPtr& r, const mpz_class& v) {
    RingElem e(r);
    switch (r->kind) {
        case Ring::Kind::Rationals: e.q_ = v; break;
        case Ring::Kind::Integers: e.z_ = v; break;
        case Ring::Kind::Residues: e.z_ = floor_mod(v, r->modulus); break;
        default: {
            RingElem c = from_integer(r->base, v);
            if (!c.is_zero()) e.terms_.push_back({Mono(r->gens.size(), 0), std::move(c)});
            break;
        }
    }
    return e;
}

inline RingElem RingElem::from_int(const RingPtr& r, long v) { return from_integer(r, mpz_class(v)); }

inline RingElem RingElem::from_rational(const RingPtr& r, const mpq_class& v) {
    if (r->kind == Ring::Kind::Rationals) {
        RingElem e(r);
        e.q_ = v;
        e.q_.canonicalize();
        return e;
    }
    mpq_class c(v);
    c.canonicalize();
    RingElem num = from_integer(r, c.get_num());
    if (c.get_den() == 1) return num;
    auto dinv = from_integer(r, c.get_den()).inverse();
    if (!dinv) throw Error("denominator " + c.get_den().get_str() + " is not invertible in " + r->str());
    return num * *dinv;
}

inline RingElem RingElem::generator(const RingPtr& r, const std::string& name) {
    if (!r->is_extension()) throw Error("ring " + r->str() + " has no generators");
    for (size_t i = 0; i < r->gens.size(); ++i) {
        if (r->gens[i].name == name) {
            RingElem e(r);
            Mono m(r->gens.size(), 0);
            m[i] = 1;
            if (e.mono_kept(m)) e.terms_.push_back({std::move(m), one(r->base)});
            return e;
        }
    }
    return constant(r, generator(r->base, name));
}

inline RingElem RingElem::constant(const RingPtr& r, const RingElem& base_coeff) {
    if (!r->is_extension()) throw Error("constant() requires an extension ring");
    if (!base_coeff.ring()->same_as(*r->base))
        throw Error("constant coefficient must live in the base ring");
    RingElem e(r);
    if (!base_coeff.is_zero()) e.terms_.push_back({Mono(r->gens.size(), 0), base_coeff});
    return e;
}

inline bool RingElem::mono_kept(const Mono& m) const {
    unsigned long total = 0;
    for (unsigned e : m) total += e;
    if (ring_->kind == Ring::Kind::SquareZero) return total <= 1;
    return total <= static_cast<unsigned long>(ring_->trunc);
}

inline void RingElem::normalize_terms() {
    std::sort(terms_.begin(), terms_.end(),
              [](const Term& a, const Term& b) { return a.mono < b.mono; });
    std::vector<Term> out;
    for (auto& t : terms_) {
        if (!out.empty() && out.back().mono == t.mono)
            out.back().coeff = out.back().coeff + t.coeff;
        else
            out.push_back(std::move(t));
    }
    terms_.clear();
    for (auto& t : out)
        if (!t.coeff.is_zero() && mono_kept(t.mono)) terms_.push_back(std::move(t));
}

inline bool RingElem::is_zero() const {
    if (!valid()) throw Error("operation on uninitialized ring element");
    switch (ring_->kind) {
        case Ring::Kind::Rationals: return q_ == 0;
        case Ring::Kind::Integers:
        case Ring::Kind::Residues: return z_ == 0;
        default: return terms_.empty();
    }
}

inline bool RingElem::is_one() const {
    switch (ring_->kind) {
        case Ring::Kind::Rationals: return q_ == 1;
        case Ring::Kind::Integers: return z_ == 1;
        case Ring::Kind::Residues: return z_ == floor_mod(mpz_class(1), ring_->modulus);
        default:
            return terms_.size() == 1 &&
                   std::all_of(terms_[0].mono.begin(), terms_[0].mono.end(),
                               [](unsigned e) { return e == 0; }) &&
                   terms_[0].coeff.is_one();
    }
}

inline RingElem RingElem::operator-() const {
    RingElem e(ring_);
    switch (ring_->kind) {
        case Ring::Kind::Rationals: e.q_ = -q_; break;
        case Ring::Kind::Integers: e.z_ = -z_; break;
        case Ring::Kind::Residues: e.z_ = floor_mod(-z_, ring_->modulus); break;
        default:
            e.terms_ = terms_;
            for (auto& t : e.terms_) t.coeff = -t.coeff;
            break;
    }
    return e;
}

inline RingElem operator+(const RingElem& a, const RingElem& b) {
    RingElem::check_same_ring(a, b);
    RingElem e(a.ring_);
    switch (a.ring_->kind) {
        case Ring::Kind::Rationals: e.q_ = a.q_ + b.q_; break;
        case Ring::Kind::Integers: e.z_ = a.z_ + b.z_; break;
        case Ring::Kind::Residues: e.z_ = floor_mod(a.z_ + b.z_, a.ring_->modulus); break;
        default:
            e.terms_ = a.terms_;
            e.terms_.insert(e.terms_.end(), b.terms_.begin(), b.terms_.end());
            e.normalize_terms();
            break;
    }
    return e;
}

inline RingElem operator-(const RingElem& a, const RingElem& b) { return a + (-b); }

inline RingElem operator*(const RingElem& a, const RingElem& b) {
    RingElem::check_same_ring(a, b);
    RingElem e(a.ring_);
    switch (a.ring_->kind) {
        case Ring::Kind::Rationals: e.q_ = a.q_ * b.q_; break;
        case Ring::Kind::Integers: e.z_ = a.z_ * b.z_; break;
        case Ring::Kind::Residues: e.z_ = floor_mod(a.z_ * b.z_, a.ring_->modulus); break;
        default: {
            for (const auto& ta : a.terms_) {
                for (const auto& tb : b.terms_) {
                    Mono m(ta.mono.size());
                    for (size_t i = 0; i < m.size(); ++i) m[i] = ta.mono[i] + tb.mono[i];
                    if (!e.mono_kept(m)) continue;
                    e.terms_.push_back({std::move(m), ta.coeff * tb.coeff});
                }
            }
            e.normalize_terms();
            break;
        }
    }
    return e;
}

inline bool RingElem::operator==(const RingElem& o) const {
    check_same_ring(*this, o);
    switch (ring_->kind) {
        case Ring::Kind::Rationals: return q_ == o.q_;
        case Ring::Kind::Integers:
        case Ring::Kind::Residues: return z_ == o.z_;
        default:
            if (terms_.size() != o.terms_.size()) return false;
            for (size_t i = 0; i < terms_.size(); ++i)
                if (terms_[i].mono != o.terms_[i].mono || !(terms_[i].coeff == o.terms_[i].coeff))
                    return false;
            return true;
    }
}

inline RingElem RingElem::pow(unsigned e) const {
    RingElem acc = one(ring_);
    RingElem b = *this;
    while (e) {
        if (e & 1) acc = acc * b;
        b = b * b;
        e >>= 1;
    }
    return acc;
}

inline RingElem RingElem::counit() const {
    if (!ring_->is_extension()) return *this;
    for (const auto& t : terms_) {
        bool is_const = std::all_of(t.mono.begin(), t.mono.end(), [](unsigned e) { return e == 0; });
        if (is_const) return t.coeff.counit();
    }
    return zero(ring_->root());
}

inline std::pair<RingElem, RingElem> RingElem::augment() const {
    RingElem c = counit();
    RingElem k = *this - embed(c, ring_);
    return {std::move(c), std::move(k)};
}

inline std::optional<RingElem> RingElem::inverse() const {
    switch (ring_->kind) {
        case Ring::Kind::Rationals: {
            if (q_ == 0) return std::nullopt;
            RingElem e(ring_);
            e.q_ = 1 / q_;
            return e;
        }
        case Ring::Kind::Integers: {
            if (z_ != 1 && z_ != -1) return std::nullopt;
            return *this;
        }
        case Ring::Kind::Residues: {
            mpz_class inv;
            if (mpz_invert(inv.get_mpz_t(), z_.get_mpz_t(), ring_->modulus.get_mpz_t()) == 0)
                return std::nullopt;
            RingElem e(ring_);
            e.z_ = inv;
            return e;
        }
        default: break;
    }
    // Extension: invert the constant part, then a geometric series over the
    // nilpotent kernel part.  a = c(1 + c^{-1}k)  =>  a^{-1} = (sum (-c^{-1}k)^i) c^{-1}.
    auto [c, k] = augment();
    auto cinv_root = c.inverse();
    if (!cinv_root) return std::nullopt;
    RingElem cinv = embed(*cinv_root, ring_);
    RingElem x = -(cinv * k);
    RingElem sum = one(ring_);
    // x is nilpotent: every monomial carries generator degree, and the tower
    // truncations cap the total.  Iterate until the powers die out.
    for (RingElem p = x; !p.is_zero(); p = p * x) sum = sum + p;
    return sum * cinv;
}

inline bool RingElem::is_homogeneous(long degree) const {
    if (is_zero()) return true;
    if (!ring_->is_extension()) return degree == 0;
    for (const auto& t : terms_) {
        long mdeg = 0;
        for (size_t i = 0; i < t.mono.size(); ++i)
            mdeg += static_cast<long>(t.mono[i]) * ring_->gens[i].degree;
        if (!t.coeff.is_homogeneous(degree - mdeg)) return false;
    }
    return true;
}

inline std::optional<long> RingElem::homogeneous_degree() const {
    if (is_zero()) return std::nullopt;
    if (!ring_->is_extension()) return 0;
    std::optional<long> deg;
    for (const auto& t : terms_) {
        long mdeg = 0;
        for (size_t i = 0; i < t.mono.size(); ++i)
            mdeg += static_cast<long>(t.mono[i]) * ring_->gens[i].degree;
        auto cd = t.coeff.homogeneous_degree();
        if (!cd) return std::nullopt;
        long d = *cd + mdeg;
        if (deg && *deg != d) return std::nullopt;
        deg = d;
    }
    return deg;
}

inline RingElem RingElem::outer_coefficient(unsigned power) const {
    if (!ring_->is_extension() || ring_->gens.size() != 1)
        throw Error("outer_coefficient requires a single-generator extension ring");
    for (const auto& t : terms_)
        if (t.mono[0] == power) return t.coeff;
    return zero(ring_->base);
}

inline unsigned RingElem::outer_max_power() const {
    if (!ring_->is_extension() || ring_->gens.size() != 1)
        throw Error("outer_max_power requires a single-generator extension ring");
    unsigned m = 0;
    for (const auto& t : terms_) m = std::max(m, t.mono[0]);
    return m;
}

inline std::string RingElem::str() const {
    switch (ring_->kind) {
        case Ring::Kind::Rationals: return q_.get_str();
        case Ring::Kind::Integers:
        case Ring::Kind::Residues: return z_.get_str();
        default: break;
    }
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& t : terms_) {
        if (!first) os << " + ";
        first = false;
        std::string ms;
        for (size_t i = 0; i < t.mono.size(); ++i) {
            if (t.mono[i] == 0) continue;
            if (!ms.empty()) ms += "*";
            ms += ring_->gens[i].name;
            if (t.mono[i] > 1) ms += "^" + std::to_string(t.mono[i]);
        }
        if (ms.empty()) {
            std::string cs = t.coeff.str();
            bool wrap = cs.find_first_of("+ ") != std::string::npos;
            os << (wrap ? "(" + cs + ")" : cs);
        } else if (t.coeff.is_one()) {
            os << ms;
        } else {
            std::string cs = t.coeff.str();
            bool wrap = cs.find_first_of("+- /") != std::string::npos;
            os << (wrap ? "(" + cs + ")" : cs) << "*" << ms;
        }
    }
    return os.str();
}

inline RingElem embed(const RingElem& x, const RingPtr& into) {
    if (x.ring()->same_as(*into)) return x;
    if (!into->is_extension())
        throw Error("cannot embed element of " + x.ring()->str() + " into " + into->str());
    return RingElem::constant(into, embed(x, into->base));
}

// Ring homomorphism determined by generator images, fixing the root ring.
// Images must be augmentation-compatible: counit(image) = 0 for every
// generator, so the map commutes with the augmentations.
class RingMap {
public:
    RingMap(RingPtr from, RingPtr to, std::vector<std::pair<std::string, RingElem>> images)
        : from_(std::move(from)), to_(std::move(to)) {
        if (!from_->root()->same_as(*to_->root()))
            throw Error("ring map requires matching root rings (" + from_->root()->str() +
                        " vs " + to_->root()->str() + ")");
        for (auto& [name, img] : images) {
            if (!from_->has_gen(name))
                throw Error("ring map image given for unknown generator '" + name + "'");
            if (!img.ring()->same_as(*to_))
                throw Error("ring map image for '" + name + "' lives in the wrong ring");
            if (!img.counit().is_zero())
                throw Error("ring map is not augmentation-compatible: counit of image of '" +
                            name + "' is nonzero");
            images_.emplace_back(name, img);
        }
        for (const Ring* r = from_.get(); r->is_extension(); r = r->base.get())
            for (const auto& g : r->gens)
                if (!find(g.name))
                    throw Error("ring map is missing an image for generator '" + g.name + "'");
    }

    static RingMap identity(const RingPtr& r) {
        std::vector<std::pair<std::string, RingElem>> imgs;
        for (const Ring* p = r.get(); p->is_extension(); p = p->base.get())
            for (const auto& g : p->gens)
                imgs.emplace_back(g.name, RingElem::generator(r, g.name));
        return RingMap(r, r, std::move(imgs));
    }

    const RingPtr& from() const { return from_; }
    const RingPtr& to() const { return to_; }
    const std::vector<std::pair<std::string, RingElem>>& images() const { return images_; }

    RingElem operator()(const RingElem& x) const {
        if (!x.ring()->same_as(*from_) && !x.ring()->root()->same_as(*from_->root()))
            throw Error("ring map applied to element of the wrong ring");
        return eval(x);
    }

private:
    RingPtr from_, to_;
    std::vector<std::pair<std::string, RingElem>> images_;

    const RingElem* find(const std::string& name) const {
        for (const auto& [n, img] : images_)
            if (n == name) return &img;
        return nullptr;
    }

    RingElem eval(const RingElem& x) const {
        if (!x.ring()->is_extension()) return embed(x, to_);
        RingElem out = RingElem::zero(to_);
        for (const auto& t : x.terms()) {
            RingElem term = eval(t.coeff);
            for (size_t i = 0; i < t.mono.size(); ++i) {
                if (t.mono[i] == 0) continue;
                const RingElem* img = find(x.ring()->gens[i].name);
                if (!img) throw Error("ring map is missing an image for generator '" +
                                      x.ring()->gens[i].name + "'");
                term = term * img->pow(t.mono[i]);
            }
            out = out + term;
        }
        return out;
    }
};

// Smallest-effort solution of a*x = c, or nullopt when none exists.  Exact
// over Q, Z and Z/n; over extension rings only unit divisors are handled.
inline std::optional<RingElem> solve_in_ring(const RingElem& a, const RingElem& c) {
    const RingPtr& r = a.ring();
    if (c.is_zero()) return RingElem::zero(r);
    if (auto ainv = a.inverse()) return c * *ainv;
    switch (r->kind) {
        case Ring::Kind::Rationals:
            return std::nullopt;  // a = 0, c != 0
        case Ring::Kind::Integers: {
            if (a.is_zero()) return std::nullopt;
            mpz_class q, rem;
            mpz_fdiv_qr(q.get_mpz_t(), rem.get_mpz_t(), c.integer().get_mpz_t(),
                        a.integer().get_mpz_t());
            if (rem != 0) return std::nullopt;
            return RingElem::from_integer(r, q);
        }
        case Ring::Kind::Residues: {
            // a*x = c (mod n) is solvable iff gcd(a, n) divides c.
            mpz_class n = r->modulus;
            mpz_class g;
            mpz_gcd(g.get_mpz_t(), a.integer().get_mpz_t(), n.get_mpz_t());
            if (c.integer() % g != 0) return std::nullopt;
            mpz_class a0 = a.integer() / g, c0 = c.integer() / g, n0 = n / g;
            mpz_class inv;
            if (mpz_invert(inv.get_mpz_t(), a0.get_mpz_t(), n0.get_mpz_t()) == 0)
                return std::nullopt;
            return RingElem::from_integer(r, (inv * c0) % n0);
        }
        default:
            throw Error("coefficientwise division by a non-unit is not supported over " +
                        r->str());
    }
}

}  // namespace cobar
