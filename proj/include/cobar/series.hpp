#pragma once

// Formal series in the free graded algebra on {tau, t} and its commutative
// t-only counterpart, truncated at a fixed word length / t-power N.
//
// Every series carries a trusted order: coefficients of words up to that
// length are exact, beyond it they are unknown (not necessarily zero).
// Literal polynomial inputs are exact to all orders (EXACT sentinel); a
// truncating operation downgrades to N only when a nonzero term actually
// overflows the bound.  Comparisons only ever look at trusted coefficients.

#include <cobar/ring.hpp>

#include <cstdint>
#include <functional>
#include <limits>
#include <map>

namespace cobar {

constexpr int kExact = 1 << 24;          // trusted-order sentinel: exact at all orders
constexpr int kInfiniteValuation = 1 << 25;  // valuation of the zero series

inline int sat_add(int a, int b) {
    long s = static_cast<long>(a) + b;
    return s >= kExact ? kExact : static_cast<int>(s);
}

class Grading;
using GradingPtr = std::shared_ptr<const Grading>;

// Grading data shared by every series of a computation: the coefficient
// ring, the integer d (deg t = -(d+2), t odd iff d odd, deg tau = -1), the
// truncation order N and the strict-grading flag.
class Grading : public std::enable_shared_from_this<Grading> {
public:
    RingPtr ring;
    int d = 0;
    int trunc = 1;  // N
    bool strict = false;

    static GradingPtr make(RingPtr ring, int d, int trunc, bool strict = false) {
        if (!ring) throw Error("grading context requires a ring");
        if (trunc < 1) throw Error("truncation order must be >= 1");
        if (trunc > 60) throw Error("truncation order must be <= 60");
        if (strict && !ring->evenly_graded())
            throw Error("strict grading requires an evenly graded coefficient ring");
        auto g = std::shared_ptr<Grading>(new Grading());
        g->ring = std::move(ring);
        g->d = d;
        g->trunc = trunc;
        g->strict = strict;
        return g;
    }

    int deg_tau() const { return -1; }
    int deg_t() const { return -(d + 2); }
    int parity_t() const { return ((d % 2) + 2) % 2; }  // 1 iff t is odd

    bool same_as(const Grading& o) const {
        return ring->same_as(*o.ring) && d == o.d && trunc == o.trunc && strict == o.strict;
    }

private:
    Grading() = default;
};

inline void check_same_ctx(const GradingPtr& a, const GradingPtr& b) {
    if (!a || !b) throw Error("operation on series without grading context");
    if (!a->same_as(*b)) throw Error("series belong to different grading contexts");
}

// A word in the letters tau, t; bit i of bits_ is 1 when letter i is t.
class Word {
public:
    Word() = default;

    static Word empty() { return Word(); }
    static Word tau() { return Word(0b0, 1); }
    static Word t() { return Word(0b1, 1); }
    static Word t_power(int k) {
        Word w;
        for (int i = 0; i < k; ++i) w = w.then_t();
        return w;
    }

    int length() const { return len_; }
    bool letter_is_t(int i) const { return (bits_ >> i) & 1u; }
    int t_count() const { return __builtin_popcountll(bits_); }
    int tau_count() const { return len_ - t_count(); }

    Word then_tau() const { return append(false); }
    Word then_t() const { return append(true); }

    Word concat(const Word& o) const {
        if (len_ + o.len_ > 60) throw Error("word too long");
        return Word(bits_ | (o.bits_ << len_), len_ + o.len_);
    }
    Word prefix(int n) const { return Word(bits_ & ((1ull << n) - 1), n); }
    Word suffix(int from) const { return Word(bits_ >> from, len_ - from); }

    int parity(const Grading& g) const { return (tau_count() + t_count() * g.parity_t()) & 1; }
    long degree(const Grading& g) const {
        return static_cast<long>(tau_count()) * g.deg_tau() + static_cast<long>(t_count()) * g.deg_t();
    }

    bool operator==(const Word& o) const { return len_ == o.len_ && bits_ == o.bits_; }
    bool operator<(const Word& o) const {  // length, then lexicographic with tau < t
        if (len_ != o.len_) return len_ < o.len_;
        for (int i = 0; i < len_; ++i)
            if (letter_is_t(i) != o.letter_is_t(i)) return !letter_is_t(i);
        return false;
    }

    std::string str() const {
        if (len_ == 0) return "1";
        std::string out;
        int i = 0;
        while (i < len_) {
            bool is_t = letter_is_t(i);
            int run = 0;
            while (i < len_ && letter_is_t(i) == is_t) ++run, ++i;
            if (!out.empty()) out += "*";
            out += is_t ? "t" : "tau";
            if (run > 1) out += "^" + std::to_string(run);
        }
        return out;
    }

private:
    std::uint64_t bits_ = 0;
    int len_ = 0;
    Word(std::uint64_t bits, int len) : bits_(bits), len_(len) {}
    Word append(bool is_t) const {
        if (len_ >= 60) throw Error("word too long");
        return Word(bits_ | (static_cast<std::uint64_t>(is_t) << len_), len_ + 1);
    }
};

class CommSeries;

// Sparse noncommutative series, words of length <= N.
class NcSeries {
public:
    NcSeries() = default;

    static NcSeries zero(GradingPtr ctx) { return NcSeries(std::move(ctx), {}, kExact); }
    static NcSeries one(GradingPtr ctx) {
        return monomial(std::move(ctx), Word::empty(), 1);
    }
    static NcSeries gen_tau(GradingPtr ctx) { return monomial(std::move(ctx), Word::tau(), 1); }
    static NcSeries gen_t(GradingPtr ctx) { return monomial(std::move(ctx), Word::t(), 1); }

    static NcSeries monomial(GradingPtr ctx, const Word& w, const RingElem& c) {
        NcSeries s(std::move(ctx), {}, kExact);
        if (!c.ring()->same_as(*s.ctx_->ring)) throw Error("coefficient from the wrong ring");
        if (w.length() <= s.ctx_->trunc && !c.is_zero()) s.terms_[w] = c;
        return s;
    }
    static NcSeries monomial(GradingPtr ctx, const Word& w, long c) {
        auto r = ctx->ring;
        return monomial(std::move(ctx), w, RingElem::from_int(r, c));
    }

    const GradingPtr& ctx() const { return ctx_; }
    const std::map<Word, RingElem>& terms() const { return terms_; }
    int trusted() const { return trusted_; }
    bool valid() const { return ctx_ != nullptr; }

    NcSeries with_trusted(int k) const {
        NcSeries s = *this;
        s.trusted_ = std::min(k, trusted_);
        return s;
    }

    RingElem coeff(const Word& w) const {
        auto it = terms_.find(w);
        return it == terms_.end() ? RingElem::zero(ctx_->ring) : it->second;
    }

    bool stored_zero() const { return terms_.empty(); }
    bool is_zero_up_to(int k) const {
        for (const auto& [w, c] : terms_)
            if (w.length() <= k) return false;
        return true;
    }

    int valuation() const {
        if (terms_.empty()) return kInfiniteValuation;
        return terms_.begin()->first.length();
    }
    int max_length() const {
        return terms_.empty() ? 0 : terms_.rbegin()->first.length();
    }

    NcSeries operator-() const {
        NcSeries s = *this;
        for (auto& [w, c] : s.terms_) c = -c;
        return s;
    }

    friend NcSeries operator+(const NcSeries& a, const NcSeries& b) {
        check_same_ctx(a.ctx_, b.ctx_);
        NcSeries s = a;
        s.trusted_ = std::min(a.trusted_, b.trusted_);
        for (const auto& [w, c] : b.terms_) {
            auto it = s.terms_.find(w);
            if (it == s.terms_.end()) {
                s.terms_[w] = c;
            } else {
                it->second = it->second + c;
                if (it->second.is_zero()) s.terms_.erase(it);
            }
        }
        return s;
    }
    friend NcSeries operator-(const NcSeries& a, const NcSeries& b) { return a + (-b); }

    friend NcSeries operator*(const NcSeries& a, const NcSeries& b) {
        check_same_ctx(a.ctx_, b.ctx_);
        NcSeries s(a.ctx_, {}, 0);
        bool dropped = false;
        for (const auto& [wa, ca] : a.terms_) {
            for (const auto& [wb, cb] : b.terms_) {
                if (wa.length() + wb.length() > a.ctx_->trunc) {
                    dropped = true;
                    continue;
                }
                RingElem c = ca * cb;
                if (c.is_zero()) continue;
                Word w = wa.concat(wb);
                auto it = s.terms_.find(w);
                if (it == s.terms_.end()) {
                    s.terms_[w] = std::move(c);
                } else {
                    it->second = it->second + c;
                    if (it->second.is_zero()) s.terms_.erase(it);
                }
            }
        }
        int raw = std::min(sat_add(a.trusted_, b.valuation()), sat_add(b.trusted_, a.valuation()));
        s.trusted_ = (raw >= kExact && !dropped) ? kExact : std::min(raw, a.ctx_->trunc);
        return s;
    }

    NcSeries scaled(const RingElem& c) const {
        NcSeries s(ctx_, {}, trusted_);
        if (!c.ring()->same_as(*ctx_->ring)) throw Error("coefficient from the wrong ring");
        for (const auto& [w, x] : terms_) {
            RingElem y = c * x;
            if (!y.is_zero()) s.terms_[w] = std::move(y);
        }
        return s;
    }

    // Splits into (even, odd) word-parity parts; trusted order is inherited.
    std::pair<NcSeries, NcSeries> parity_split() const {
        NcSeries ev(ctx_, {}, trusted_), od(ctx_, {}, trusted_);
        for (const auto& [w, c] : terms_)
            (w.parity(*ctx_) == 0 ? ev : od).terms_[w] = c;
        return {std::move(ev), std::move(od)};
    }

    bool is_t_only() const {
        for (const auto& [w, c] : terms_)
            if (w.tau_count() > 0) return false;
        return true;
    }
    bool has_constant_term() const { return terms_.count(Word::empty()) > 0; }

    // True when every trusted term has word degree + coefficient degree == deg.
    bool is_homogeneous(long deg) const {
        for (const auto& [w, c] : terms_)
            if (!c.is_homogeneous(deg - w.degree(*ctx_))) return false;
        return true;
    }

    NcSeries map_coefficients(const GradingPtr& new_ctx,
                              const std::function<RingElem(const RingElem&)>& f) const {
        NcSeries s(new_ctx, {}, trusted_);
        if (new_ctx->trunc < ctx_->trunc && max_length() > new_ctx->trunc)
            throw Error("cannot shrink truncation with nonzero high-order terms");
        for (const auto& [w, c] : terms_) {
            RingElem y = f(c);
            if (!y.is_zero()) s.terms_[w] = std::move(y);
        }
        return s;
    }

    std::string str() const {
        if (terms_.empty()) return "0";
        std::string out;
        for (const auto& [w, c] : terms_) {
            if (!out.empty()) out += " + ";
            std::string cs = c.str();
            bool wrap = cs.find_first_of("+- /") != std::string::npos;
            if (w.length() == 0)
                out += wrap && cs.find_first_of("+ ") != std::string::npos ? "(" + cs + ")" : cs;
            else if (c.is_one())
                out += w.str();
            else
                out += (wrap ? "(" + cs + ")" : cs) + "*" + w.str();
        }
        return out;
    }

private:
    GradingPtr ctx_;
    std::map<Word, RingElem> terms_;
    int trusted_ = 0;

    NcSeries(GradingPtr ctx, std::map<Word, RingElem> terms, int trusted)
        : ctx_(std::move(ctx)), terms_(std::move(terms)), trusted_(trusted) {}
};

// Trusted-coefficient comparison: equal at every order both sides know.
inline bool agree_to(const NcSeries& a, const NcSeries& b, int k) {
    check_same_ctx(a.ctx(), b.ctx());
    k = std::min(k, a.ctx()->trunc);
    for (const auto& [w, c] : a.terms())
        if (w.length() <= k && !(c == b.coeff(w))) return false;
    for (const auto& [w, c] : b.terms())
        if (w.length() <= k && !(c == a.coeff(w))) return false;
    return true;
}

inline int common_trust(int ta, int tb, int trunc) {
    int k = std::min(ta, tb);
    return k >= kExact ? trunc : std::min(k, trunc);
}

inline bool agree(const NcSeries& a, const NcSeries& b) {
    return agree_to(a, b, common_trust(a.trusted(), b.trusted(), a.ctx()->trunc));
}

// [a, b] = ab - (-1)^{|a||b|} ba, computed on word-parity components.
inline NcSeries graded_commutator(const NcSeries& a, const NcSeries& b) {
    auto [ae, ao] = a.parity_split();
    auto [be, bo] = b.parity_split();
    NcSeries r = ae * be - be * ae;
    r = r + (ae * bo - bo * ae);
    r = r + (ao * be - be * ao);
    r = r + (ao * bo + bo * ao);  // both odd: sign flips
    return r;
}

// Dense commutative series in t alone: coefficients of t^0 .. t^N.
class CommSeries {
public:
    CommSeries() = default;

    static CommSeries zero(GradingPtr ctx) {
        return CommSeries(std::move(ctx), kExact);
    }
    static CommSeries t(GradingPtr ctx) { return t_power(std::move(ctx), 1); }
    static CommSeries t_power(GradingPtr ctx, int k) {
        CommSeries s(std::move(ctx), kExact);
        if (k < 0) throw Error("negative t-power");
        if (k <= s.ctx_->trunc) s.c_[k] = RingElem::one(s.ctx_->ring);
        return s;
    }
    static CommSeries constant(GradingPtr ctx, const RingElem& c) {
        CommSeries s(std::move(ctx), kExact);
        if (!c.ring()->same_as(*s.ctx_->ring)) throw Error("coefficient from the wrong ring");
        s.c_[0] = c;
        return s;
    }
    // Builds sum c_i t^i from sparse (power, coefficient) data; exact.
    static CommSeries poly(GradingPtr ctx, const std::vector<std::pair<int, RingElem>>& coeffs) {
        CommSeries s(std::move(ctx), kExact);
        for (const auto& [i, c] : coeffs) {
            if (i < 0 || i > s.ctx_->trunc) throw Error("t-power out of range");
            if (!c.ring()->same_as(*s.ctx_->ring)) throw Error("coefficient from the wrong ring");
            s.c_[i] = s.c_[i] + c;
        }
        return s;
    }
    static CommSeries poly_int(GradingPtr ctx, const std::vector<std::pair<int, long>>& coeffs) {
        std::vector<std::pair<int, RingElem>> v;
        for (auto [i, n] : coeffs) v.emplace_back(i, RingElem::from_int(ctx->ring, n));
        return poly(std::move(ctx), v);
    }

    const GradingPtr& ctx() const { return ctx_; }
    int trusted() const { return trusted_; }
    bool valid() const { return ctx_ != nullptr; }

    const RingElem& operator[](int i) const {
        if (i < 0 || i > ctx_->trunc) throw Error("coefficient index beyond truncation");
        return c_[i];
    }

    CommSeries with_trusted(int k) const {
        CommSeries s = *this;
        s.trusted_ = std::min(k, trusted_);
        return s;
    }

    bool stored_zero() const {
        for (const auto& c : c_)
            if (!c.is_zero()) return false;
        return true;
    }
    bool is_zero_up_to(int k) const {
        for (int i = 0; i <= std::min(k, ctx_->trunc); ++i)
            if (!c_[i].is_zero()) return false;
        return true;
    }

    int valuation() const {
        for (int i = 0; i <= ctx_->trunc; ++i)
            if (!c_[i].is_zero()) return i;
        return kInfiniteValuation;
    }
    int degree() const {  // highest stored nonzero power, -1 if none
        for (int i = ctx_->trunc; i >= 0; --i)
            if (!c_[i].is_zero()) return i;
        return -1;
    }

    bool only_even_powers() const {
        for (int i = 1; i <= ctx_->trunc; i += 2)
            if (!c_[i].is_zero()) return false;
        return true;
    }
    bool only_odd_powers() const {
        for (int i = 0; i <= ctx_->trunc; i += 2)
            if (!c_[i].is_zero()) return false;
        return true;
    }

    CommSeries even_power_part() const {
        CommSeries s = *this;
        for (int i = 1; i <= ctx_->trunc; i += 2) s.c_[i] = RingElem::zero(ctx_->ring);
        return s;
    }
    CommSeries odd_power_part() const {
        CommSeries s = *this;
        for (int i = 0; i <= ctx_->trunc; i += 2) s.c_[i] = RingElem::zero(ctx_->ring);
        return s;
    }

    CommSeries operator-() const {
        CommSeries s = *this;
        for (auto& c : s.c_) c = -c;
        return s;
    }

    friend CommSeries operator+(const CommSeries& a, const CommSeries& b) {
        check_same_ctx(a.ctx_, b.ctx_);
        CommSeries s = a;
        s.trusted_ = std::min(a.trusted_, b.trusted_);
        for (int i = 0; i <= a.ctx_->trunc; ++i) s.c_[i] = s.c_[i] + b.c_[i];
        return s;
    }
    friend CommSeries operator-(const CommSeries& a, const CommSeries& b) { return a + (-b); }

    friend CommSeries operator*(const CommSeries& a, const CommSeries& b) {
        check_same_ctx(a.ctx_, b.ctx_);
        int N = a.ctx_->trunc;
        CommSeries s(a.ctx_, 0);
        bool dropped = false;
        for (int i = 0; i <= N; ++i) {
            if (a.c_[i].is_zero()) continue;
            for (int j = 0; j <= N; ++j) {
                if (b.c_[j].is_zero()) continue;
                if (i + j > N) {
                    dropped = true;
                    break;
                }
                s.c_[i + j] = s.c_[i + j] + a.c_[i] * b.c_[j];
            }
        }
        int raw = std::min(sat_add(a.trusted_, b.valuation()), sat_add(b.trusted_, a.valuation()));
        s.trusted_ = (raw >= kExact && !dropped) ? kExact : std::min(raw, N);
        return s;
    }

    CommSeries scaled(const RingElem& k) const {
        CommSeries s = *this;
        for (auto& c : s.c_) c = k * c;
        return s;
    }

    CommSeries power(int e) const {
        CommSeries acc = one_like(*this);
        CommSeries b = *this;
        while (e) {
            if (e & 1) acc = acc * b;
            if (e >>= 1) b = b * b;
        }
        return acc;
    }

    // f(g): requires g to have zero constant term.
    friend CommSeries comm_compose(const CommSeries& f, const CommSeries& g) {
        check_same_ctx(f.ctx_, g.ctx_);
        if (!g.c_[0].is_zero()) throw Error("composition requires a series with zero constant term");
        int N = f.ctx_->trunc;
        // Horner from the top stored coefficient; drops only affect orders > N.
        CommSeries acc = CommSeries::constant(f.ctx_, f.c_[N]);
        for (int i = N - 1; i >= 0; --i) {
            CommSeries next = acc * g;
            next.c_[0] = next.c_[0] + f.c_[i];
            acc = std::move(next);
        }
        int vg = g.valuation();
        int raw;
        if (vg >= kInfiniteValuation) {
            raw = g.trusted_;  // f(0) = const term; f's constant is exact here
        } else {
            long lin = static_cast<long>(std::min(f.trusted_, kExact - 1)) + 1;
            long prod = lin * vg - 1;
            raw = static_cast<int>(std::min<long>(prod, kExact));
            raw = std::min(raw, g.trusted_);
        }
        bool exact_inputs = f.trusted_ >= kExact && g.trusted_ >= kExact;
        // exactness survives only if no nonzero term overflowed N
        if (exact_inputs) {
            long degf = f.degree() < 0 ? 0 : f.degree();
            long degg = g.degree() < 0 ? 0 : g.degree();
            if (degf * degg <= N)
                acc.trusted_ = kExact;
            else
                acc.trusted_ = N;
        } else {
            acc.trusted_ = std::min(raw, N);
        }
        return acc;
    }

    CommSeries derivative() const {
        CommSeries s(ctx_, trusted_ >= kExact ? kExact : std::max(trusted_ - 1, 0));
        for (int i = 1; i <= ctx_->trunc; ++i)
            s.c_[i - 1] = RingElem::from_int(ctx_->ring, i) * c_[i];
        return s;
    }

    // f / t: requires zero constant term.
    CommSeries divide_by_t() const {
        if (!c_[0].is_zero()) throw Error("series is not divisible by t: nonzero constant term");
        CommSeries s(ctx_, trusted_ >= kExact ? kExact : std::max(trusted_ - 1, 0));
        for (int i = 1; i <= ctx_->trunc; ++i) s.c_[i - 1] = c_[i];
        return s;
    }

    // f / 2t: requires 2 to be a unit in the coefficient ring.  Exact integer
    // divisibility is deliberately not accepted.
    CommSeries divide_by_2t() const {
        auto half = RingElem::from_int(ctx_->ring, 2).inverse();
        if (!half)
            throw Error("division by 2t requires 2 to be invertible in " + ctx_->ring->str());
        return divide_by_t().scaled(*half);
    }

    // w~(t) = w(sqrt t): requires only even powers.
    CommSeries tilde() const {
        for (int i = 1; i <= std::min(trusted_, ctx_->trunc); i += 2)
            if (!c_[i].is_zero())
                throw Error("tilde requires an even-power series, found nonzero t^" +
                            std::to_string(i) + " coefficient");
        CommSeries s(ctx_, trusted_ >= kExact ? kExact : trusted_ / 2);
        for (int i = 0; 2 * i <= ctx_->trunc; ++i) s.c_[i] = c_[2 * i];
        return s;
    }

    // Compositional inverse: requires zero constant term and a unit linear
    // coefficient.  Solved order by order.
    CommSeries comm_inverse() const {
        if (!c_[0].is_zero())
            throw Error("compositional inverse requires zero constant term");
        auto lin_inv = c_[1].inverse();
        if (!lin_inv)
            throw Error("compositional inverse requires an invertible linear coefficient");
        int N = ctx_->trunc;
        CommSeries g(ctx_, kExact);
        g.c_[1] = *lin_inv;
        for (int k = 2; k <= N; ++k) {
            CommSeries r = comm_compose(*this, g);
            g.c_[k] = -(*lin_inv * r.c_[k]);
        }
        g.trusted_ = std::min(trusted_, N);
        return g;
    }

    bool is_homogeneous(long deg) const {
        for (int i = 0; i <= ctx_->trunc; ++i)
            if (!c_[i].is_homogeneous(deg - static_cast<long>(i) * ctx_->deg_t())) return false;
        return true;
    }

    NcSeries to_nc() const {
        NcSeries s = NcSeries::zero(ctx_);
        for (int i = 0; i <= ctx_->trunc; ++i)
            s = s + NcSeries::monomial(ctx_, Word::t_power(i), c_[i]);
        return s.with_trusted(trusted_);
    }

    static CommSeries from_nc(const NcSeries& n) {
        if (!n.is_t_only())
            throw Error("series involves tau, cannot be read as a commutative t-series");
        CommSeries s(n.ctx(), n.trusted());
        for (const auto& [w, c] : n.terms()) s.c_[w.t_count()] = c;
        return s;
    }

    CommSeries map_coefficients(const GradingPtr& new_ctx,
                                const std::function<RingElem(const RingElem&)>& f) const {
        if (new_ctx->trunc != ctx_->trunc)
            throw Error("coefficient maps require matching truncation orders");
        CommSeries s(new_ctx, trusted_);
        for (int i = 0; i <= ctx_->trunc; ++i) s.c_[i] = f(c_[i]);
        return s;
    }

    std::string str() const {
        std::string out;
        for (int i = 0; i <= ctx_->trunc; ++i) {
            if (c_[i].is_zero()) continue;
            if (!out.empty()) out += " + ";
            std::string cs = c_[i].str();
            bool wrap = cs.find_first_of("+- /") != std::string::npos;
            std::string tp = i == 0 ? "" : (i == 1 ? "t" : "t^" + std::to_string(i));
            if (i == 0)
                out += cs.find_first_of("+ ") != std::string::npos ? "(" + cs + ")" : cs;
            else if (c_[i].is_one())
                out += tp;
            else
                out += (wrap ? "(" + cs + ")" : cs) + "*" + tp;
        }
        return out.empty() ? "0" : out;
    }

private:
    GradingPtr ctx_;
    std::vector<RingElem> c_;
    int trusted_ = 0;

    CommSeries(GradingPtr ctx, int trusted) : ctx_(std::move(ctx)), trusted_(trusted) {
        c_.assign(ctx_->trunc + 1, RingElem::zero(ctx_->ring));
    }
    static CommSeries one_like(const CommSeries& s) {
        return constant(s.ctx_, RingElem::one(s.ctx_->ring));
    }
};

inline bool agree_to(const CommSeries& a, const CommSeries& b, int k) {
    check_same_ctx(a.ctx(), b.ctx());
    for (int i = 0; i <= std::min(k, a.ctx()->trunc); ++i)
        if (!(a[i] == b[i])) return false;
    return true;
}

inline bool agree(const CommSeries& a, const CommSeries& b) {
    return agree_to(a, b, common_trust(a.trusted(), b.trusted(), a.ctx()->trunc));
}

}  // namespace cobar
