/*
 * polynomial.hpp
 * --------------
 * Sparse multivariate polynomials over an exact coefficient field (Q or
 * Q(zeta_N)), keyed by exponent vectors under descending graded-lex order
 * in the declared variable order. All outputs and iterations follow that
 * order, so rendered polynomials and reports are bit-stable.
 */
#ifndef CYCLO_POLYNOMIAL_HPP
#define CYCLO_POLYNOMIAL_HPP

#include <climits>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cyclo/cyclotomic.hpp"
#include "cyclo/rational.hpp"

namespace cyclo {

class VariableContext {
  public:
    explicit VariableContext(std::vector<std::string> names);
    const std::vector<std::string> &names() const { return names_; }
    int arity() const { return static_cast<int>(names_.size()); }
    const std::string &name(int i) const { return names_[static_cast<size_t>(i)]; }
    int index_of(const std::string &name) const; // -1 when absent
    bool operator==(const VariableContext &o) const { return names_ == o.names_; }

  private:
    std::vector<std::string> names_;
};

using ContextPtr = std::shared_ptr<const VariableContext>;

ContextPtr make_context(std::vector<std::string> names);

inline void check_same_context(const ContextPtr &a, const ContextPtr &b) {
    if (a == b) return;
    if (!a || !b || !(*a == *b)) throw std::invalid_argument("polynomial: variable context mismatch");
}

using ExponentVector = std::vector<int>;

inline long total_degree(const ExponentVector &e) {
    long sum = 0;
    for (int v : e) sum += v;
    return sum;
}

inline ExponentVector exp_add(const ExponentVector &a, const ExponentVector &b) {
    ExponentVector out(a.size());
    for (size_t i = 0; i < a.size(); ++i) {
        long sum = static_cast<long>(a[i]) + b[i];
        if (sum > INT_MAX / 2) throw std::overflow_error("exponent overflow");
        out[i] = static_cast<int>(sum);
    }
    return out;
}

inline bool exp_divides(const ExponentVector &a, const ExponentVector &b) {
    for (size_t i = 0; i < a.size(); ++i)
        if (a[i] > b[i]) return false;
    return true;
}

inline ExponentVector exp_sub(const ExponentVector &a, const ExponentVector &b) {
    ExponentVector out(a.size());
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i] < b[i]) throw std::domain_error("exponent subtraction below zero");
        out[i] = a[i] - b[i];
    }
    return out;
}

// Descending graded-lex: higher total degree first, ties broken by the
// first differing exponent in declared variable order (larger first).
struct GrlexDescending {
    bool operator()(const ExponentVector &a, const ExponentVector &b) const {
        long da = total_degree(a), db = total_degree(b);
        if (da != db) return da > db;
        for (size_t i = 0; i < a.size(); ++i)
            if (a[i] != b[i]) return a[i] > b[i];
        return false;
    }
};

// All exponent vectors of total degree m, descending graded-lex.
std::vector<ExponentVector> monomial_basis(int arity, int m);

namespace coeff {

inline bool is_zero(const Rational &c) { return c.is_zero(); }
inline bool is_one(const Rational &c) { return c.is_one(); }
inline bool is_zero(const CycloNum &c) { return c.is_zero(); }
inline bool is_one(const CycloNum &c) { return c.is_one(); }
inline Rational inverse(const Rational &c) { return c.inverse(); }
inline CycloNum inverse(const CycloNum &c) { return c.inverse(); }

inline std::string str(const Rational &c) { return c.str(); }
inline std::string str(const CycloNum &c) {
    return c.is_rational() ? c.rational_part().str() : "(" + c.str() + ")";
}
// Sign-aware pieces for rendering "a - b" instead of "a + -b".
inline bool print_negative(const Rational &c) { return c.sign() < 0; }
inline std::string magnitude_str(const Rational &c) { return c.abs().str(); }
inline bool print_negative(const CycloNum &c) {
    return c.is_rational() && c.rational_part().sign() < 0;
}
inline std::string magnitude_str(const CycloNum &c) {
    if (c.is_rational()) return c.rational_part().abs().str();
    return "(" + c.str() + ")";
}
inline bool magnitude_is_one(const Rational &c) { return c.abs().is_one(); }
inline bool magnitude_is_one(const CycloNum &c) {
    return c.is_rational() && c.rational_part().abs().is_one();
}

} // namespace coeff

template <class C>
class Polynomial {
  public:
    using TermMap = std::map<ExponentVector, C, GrlexDescending>;

    explicit Polynomial(ContextPtr ctx) : ctx_(std::move(ctx)) {}

    static Polynomial zero(const ContextPtr &ctx) { return Polynomial(ctx); }

    static Polynomial monomial(const ContextPtr &ctx, const ExponentVector &e, const C &c) {
        if (static_cast<int>(e.size()) != ctx->arity())
            throw std::invalid_argument("polynomial: exponent arity mismatch");
        Polynomial p(ctx);
        if (!coeff::is_zero(c)) p.terms_.emplace(e, c);
        return p;
    }

    static Polynomial constant(const ContextPtr &ctx, const C &c) {
        return monomial(ctx, ExponentVector(static_cast<size_t>(ctx->arity())), c);
    }

    static Polynomial variable(const ContextPtr &ctx, int i, const C &one) {
        ExponentVector e(static_cast<size_t>(ctx->arity()));
        e[static_cast<size_t>(i)] = 1;
        return monomial(ctx, e, one);
    }

    const ContextPtr &context() const { return ctx_; }
    const TermMap &terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    size_t term_count() const { return terms_.size(); }

    bool is_constant() const {
        if (terms_.empty()) return true;
        return terms_.size() == 1 && total_degree(terms_.begin()->first) == 0;
    }

    long degree() const { // -1 for the zero polynomial
        long d = -1;
        for (const auto &[e, c] : terms_) d = std::max(d, total_degree(e));
        return d;
    }

    const std::pair<const ExponentVector, C> &leading_term() const {
        if (terms_.empty()) throw std::domain_error("polynomial: leading term of zero");
        return *terms_.begin();
    }

    void add_term(const ExponentVector &e, const C &c) {
        if (coeff::is_zero(c)) return;
        auto it = terms_.find(e);
        if (it == terms_.end()) {
            terms_.emplace(e, c);
        } else {
            it->second = it->second + c;
            if (coeff::is_zero(it->second)) terms_.erase(it);
        }
    }

    Polynomial operator-() const {
        Polynomial out(ctx_);
        for (const auto &[e, c] : terms_) out.terms_.emplace(e, -c);
        return out;
    }

    Polynomial operator+(const Polynomial &o) const {
        check_same_context(ctx_, o.ctx_);
        Polynomial out = *this;
        for (const auto &[e, c] : o.terms_) out.add_term(e, c);
        return out;
    }

    Polynomial operator-(const Polynomial &o) const {
        check_same_context(ctx_, o.ctx_);
        Polynomial out = *this;
        for (const auto &[e, c] : o.terms_) out.add_term(e, -c);
        return out;
    }

    Polynomial operator*(const Polynomial &o) const {
        check_same_context(ctx_, o.ctx_);
        Polynomial out(ctx_);
        for (const auto &[e1, c1] : terms_)
            for (const auto &[e2, c2] : o.terms_) out.add_term(exp_add(e1, e2), c1 * c2);
        return out;
    }

    Polynomial operator*(const C &c) const {
        Polynomial out(ctx_);
        if (coeff::is_zero(c)) return out;
        for (const auto &[e, k] : terms_) out.add_term(e, k * c);
        return out;
    }

    Polynomial pow(long e) const {
        if (e < 0) throw std::invalid_argument("polynomial: negative power");
        if (terms_.empty() && e == 0) throw std::domain_error("polynomial: 0^0");
        Polynomial acc(ctx_);
        bool started = false;
        Polynomial base = *this;
        while (e > 0) {
            if (e & 1) acc = started ? acc * base : (started = true, base);
            base = base * base;
            e >>= 1;
        }
        if (!started) {
            // e == 0 on a nonzero polynomial: the constant 1 in the same field.
            const C &exemplar = terms_.begin()->second;
            return constant(ctx_, exemplar * coeff::inverse(exemplar));
        }
        return acc;
    }

    bool operator==(const Polynomial &o) const {
        check_same_context(ctx_, o.ctx_);
        return terms_ == o.terms_;
    }
    bool operator!=(const Polynomial &o) const { return !(*this == o); }

    template <class F>
    auto map_coefficients(const ContextPtr &ctx, F &&f) const
        -> Polynomial<std::decay_t<decltype(f(std::declval<C>()))>> {
        Polynomial<std::decay_t<decltype(f(std::declval<C>()))>> out(ctx);
        for (const auto &[e, c] : terms_) out.add_term(e, f(c));
        return out;
    }

    // Reinterprets this polynomial in a wider context; var_map[i] is the
    // index in the target context of our variable i.
    Polynomial embed(const ContextPtr &target, const std::vector<int> &var_map) const {
        Polynomial out(target);
        for (const auto &[e, c] : terms_) {
            ExponentVector w(static_cast<size_t>(target->arity()));
            for (size_t i = 0; i < e.size(); ++i) w[static_cast<size_t>(var_map[i])] = e[i];
            out.add_term(w, c);
        }
        return out;
    }

    std::string str() const {
        if (terms_.empty()) return "0";
        std::string out;
        for (const auto &[e, c] : terms_) {
            bool first = out.empty();
            bool neg = coeff::print_negative(c);
            if (!first) out += neg ? " - " : " + ";
            else if (neg) out += "-";
            bool wrote_coeff = false;
            if (total_degree(e) == 0 || !coeff::magnitude_is_one(c)) {
                out += coeff::magnitude_str(c);
                wrote_coeff = true;
            }
            bool first_var = true;
            for (size_t i = 0; i < e.size(); ++i) {
                if (e[i] == 0) continue;
                if (!first_var || wrote_coeff) out += "*";
                out += ctx_->name(static_cast<int>(i));
                if (e[i] > 1) out += "^" + std::to_string(e[i]);
                first_var = false;
            }
        }
        return out;
    }

  private:
    ContextPtr ctx_;
    TermMap terms_;
};

using QPolynomial = Polynomial<Rational>;
using CPolynomial = Polynomial<CycloNum>;

// m if every term has total degree m; nullopt otherwise. Zero is rejected:
// callers must special-case it.
template <class C>
std::optional<long> is_homogeneous(const Polynomial<C> &p) {
    if (p.is_zero()) throw std::invalid_argument("is_homogeneous: zero polynomial");
    long m = total_degree(p.terms().begin()->first);
    for (const auto &[e, c] : p.terms())
        if (total_degree(e) != m) return std::nullopt;
    return m;
}

template <class C>
std::map<long, Polynomial<C>> homogeneous_components(const Polynomial<C> &p) {
    std::map<long, Polynomial<C>> out;
    for (const auto &[e, c] : p.terms()) {
        long d = total_degree(e);
        auto it = out.find(d);
        if (it == out.end()) it = out.emplace(d, Polynomial<C>::zero(p.context())).first;
        it->second.add_term(e, c);
    }
    return out;
}

// Single-divisor multivariate division under graded-lex; returns p/q when
// the division is exact, nullopt otherwise.
template <class C>
std::optional<Polynomial<C>> divide_exact(const Polynomial<C> &p, const Polynomial<C> &q) {
    check_same_context(p.context(), q.context());
    if (q.is_zero()) throw std::domain_error("divide_exact: division by zero polynomial");
    Polynomial<C> quotient(p.context());
    Polynomial<C> rem = p;
    const auto &[lq_exp, lq_coeff] = q.leading_term();
    C lq_inv = coeff::inverse(lq_coeff);
    while (!rem.is_zero()) {
        const auto &[lr_exp, lr_coeff] = rem.leading_term();
        if (!exp_divides(lq_exp, lr_exp)) return std::nullopt; // a remainder term is unavoidable
        ExponentVector shift = exp_sub(lr_exp, lq_exp);
        C factor = lr_coeff * lq_inv;
        quotient.add_term(shift, factor);
        rem = rem - q * Polynomial<C>::monomial(p.context(), shift, factor);
    }
    return quotient;
}

inline CPolynomial embed_in_field(const QPolynomial &p, const FieldPtr &f) {
    return p.map_coefficients(p.context(), [&](const Rational &r) { return CycloNum::constant(f, r); });
}

// Diagonal variable-scaling automorphism x_i -> scale_i * x_i over Q(zeta_N).
class DiagonalAutomorphism {
  public:
    DiagonalAutomorphism(ContextPtr ctx, FieldPtr field, std::vector<CycloNum> scales);

    const ContextPtr &context() const { return ctx_; }
    const FieldPtr &field() const { return field_; }
    const std::vector<CycloNum> &scales() const { return scales_; }

    static DiagonalAutomorphism identity(const ContextPtr &ctx, const FieldPtr &f);
    DiagonalAutomorphism inverse() const;
    DiagonalAutomorphism power(long m) const;
    bool is_identity() const;

    CPolynomial operator()(const CPolynomial &p) const;

  private:
    ContextPtr ctx_;
    FieldPtr field_;
    std::vector<CycloNum> scales_;
};

} // namespace cyclo

#endif
