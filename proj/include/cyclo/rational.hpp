/*
 * rational.hpp
 * ------------
 * Exact rational numbers backed by GMP. Always stored reduced with a
 * positive denominator; the canonical zero is 0/1.
 */
#ifndef CYCLO_RATIONAL_HPP
#define CYCLO_RATIONAL_HPP

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace cyclo {

class Rational {
  public:
    Rational() : q_(0) {}
    Rational(long n) : q_(static_cast<long>(n)) {}
    Rational(int n) : q_(static_cast<long>(n)) {}
    explicit Rational(const mpz_class &n) : q_(n) {}
    Rational(long n, long d) : q_(n, d) { canonicalize_checked(); }
    Rational(const mpz_class &n, const mpz_class &d) : q_(n, d) { canonicalize_checked(); }
    explicit Rational(const mpq_class &q) : q_(q) { q_.canonicalize(); }

    // Accepts "n", "-n", "n/d" with arbitrary-precision parts.
    static Rational from_string(const std::string &text);

    const mpz_class &numerator() const { return q_.get_num(); }
    const mpz_class &denominator() const { return q_.get_den(); }

    bool is_zero() const { return sgn(q_) == 0; }
    bool is_one() const { return q_ == 1; }
    bool is_integer() const { return q_.get_den() == 1; }
    int sign() const { return sgn(q_); }

    Rational operator-() const { return Rational(mpq_class(-q_)); }
    Rational operator+(const Rational &o) const { return Rational(mpq_class(q_ + o.q_)); }
    Rational operator-(const Rational &o) const { return Rational(mpq_class(q_ - o.q_)); }
    Rational operator*(const Rational &o) const { return Rational(mpq_class(q_ * o.q_)); }
    Rational operator/(const Rational &o) const {
        if (o.is_zero()) throw std::domain_error("Rational: division by zero");
        return Rational(mpq_class(q_ / o.q_));
    }

    Rational &operator+=(const Rational &o) { q_ += o.q_; return *this; }
    Rational &operator-=(const Rational &o) { q_ -= o.q_; return *this; }
    Rational &operator*=(const Rational &o) { q_ *= o.q_; return *this; }
    Rational &operator/=(const Rational &o) { *this = *this / o; return *this; }

    Rational inverse() const {
        if (is_zero()) throw std::domain_error("Rational: inverse of zero");
        return Rational(mpq_class(1 / q_));
    }

    Rational pow(long e) const;
    Rational abs() const { return Rational(mpq_class(::abs(q_))); }

    bool operator==(const Rational &o) const { return q_ == o.q_; }
    bool operator!=(const Rational &o) const { return q_ != o.q_; }
    bool operator<(const Rational &o) const { return q_ < o.q_; }
    bool operator<=(const Rational &o) const { return q_ <= o.q_; }
    bool operator>(const Rational &o) const { return q_ > o.q_; }
    bool operator>=(const Rational &o) const { return q_ >= o.q_; }

    // "n" for integers, "n/d" otherwise.
    std::string str() const;

  private:
    void canonicalize_checked() {
        if (q_.get_den() == 0) throw std::domain_error("Rational: zero denominator");
        q_.canonicalize();
    }

    mpq_class q_;
};

inline Rational operator*(long n, const Rational &r) { return Rational(n) * r; }

} // namespace cyclo

#endif
