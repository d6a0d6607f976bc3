/*
 * cyclotomic.hpp
 * --------------
 * The field Q(zeta_N), realized as Q[t] modulo the N-th cyclotomic
 * polynomial Phi_N. Phi_N is computed by recursive exact division of
 * t^N - 1 by the product of the Phi_d for proper divisors d. Elements
 * are unique remainders mod Phi_N, so equality is coefficient-wise.
 */
#ifndef CYCLO_CYCLOTOMIC_HPP
#define CYCLO_CYCLOTOMIC_HPP

#include <memory>
#include <string>
#include <vector>

#include "cyclo/rational.hpp"
#include "cyclo/upoly.hpp"

namespace cyclo {

// Phi_N, monic of degree phi(N). N >= 1.
ZPoly cyclotomic_polynomial(long N);

class CyclotomicField;
using FieldPtr = std::shared_ptr<const CyclotomicField>;

class CyclotomicField {
  public:
    static FieldPtr make(long N);

    long order() const { return N_; }
    int degree() const { return static_cast<int>(modulus_.size()) - 1; } // phi(N)
    const ZPoly &modulus() const { return modulus_; }

  private:
    explicit CyclotomicField(long N);
    long N_;
    ZPoly modulus_;
};

class CycloNum {
  public:
    CycloNum() = default; // unusable until given a field
    static CycloNum zero(const FieldPtr &f);
    static CycloNum one(const FieldPtr &f);
    static CycloNum constant(const FieldPtr &f, const Rational &r);
    // zeta^e with e reduced mod N (e may be negative).
    static CycloNum zeta_pow(const FieldPtr &f, long e);

    const FieldPtr &field() const { return field_; }
    const std::vector<Rational> &coeffs() const { return coeffs_; }

    bool is_zero() const;
    bool is_one() const;
    bool is_rational() const; // all coefficients beyond the constant vanish
    Rational rational_part() const;

    CycloNum operator-() const;
    CycloNum operator+(const CycloNum &o) const;
    CycloNum operator-(const CycloNum &o) const;
    CycloNum operator*(const CycloNum &o) const;
    CycloNum operator*(const Rational &r) const;
    CycloNum inverse() const; // extended Euclid against Phi_N; throws on zero
    CycloNum pow(long e) const;

    bool operator==(const CycloNum &o) const;
    bool operator!=(const CycloNum &o) const { return !(*this == o); }

    std::string str(const std::string &zeta = "zeta") const;

  private:
    CycloNum(FieldPtr f, std::vector<Rational> c) : field_(std::move(f)), coeffs_(std::move(c)) {}
    static CycloNum from_qpoly(const FieldPtr &f, const QPoly &p); // reduces mod Phi_N
    void check_same_field(const CycloNum &o) const;

    FieldPtr field_;
    std::vector<Rational> coeffs_; // length phi(N), coefficient of zeta^i
};

// Sum_{m=0}^{N-1} zeta^{m e}: N when N | e, else 0. Verified internally
// against the literal summation.
CycloNum geometric_sum(const FieldPtr &f, long e);

} // namespace cyclo

#endif
