#include "cyclo/cyclotomic.hpp"

#include <map>
#include <mutex>
#include <stdexcept>

namespace cyclo {

namespace {

std::map<long, ZPoly> phi_cache;
std::mutex phi_mutex;

ZPoly cyclotomic_uncached(long N) {
    if (N == 1) return ZPoly{-1, 1}; // t - 1
    ZPoly divisor_product{1};
    for (long d = 1; d < N; ++d) {
        if (N % d != 0) continue;
        divisor_product = zmul(divisor_product, cyclotomic_polynomial(d));
    }
    auto quo = zdiv_exact(zpow_minus_one(N), divisor_product);
    if (!quo) throw std::logic_error("cyclotomic_polynomial: inexact division");
    return *quo;
}

} // namespace

ZPoly cyclotomic_polynomial(long N) {
    if (N < 1) throw std::invalid_argument("cyclotomic_polynomial: N must be >= 1");
    {
        std::lock_guard<std::mutex> lock(phi_mutex);
        auto it = phi_cache.find(N);
        if (it != phi_cache.end()) return it->second;
    }
    ZPoly result = cyclotomic_uncached(N);
    std::lock_guard<std::mutex> lock(phi_mutex);
    phi_cache.emplace(N, result);
    return result;
}

CyclotomicField::CyclotomicField(long N) : N_(N), modulus_(cyclotomic_polynomial(N)) {}

FieldPtr CyclotomicField::make(long N) {
    return FieldPtr(new CyclotomicField(N));
}

CycloNum CycloNum::zero(const FieldPtr &f) {
    return CycloNum(f, std::vector<Rational>(static_cast<size_t>(f->degree())));
}

CycloNum CycloNum::one(const FieldPtr &f) {
    return constant(f, Rational(1));
}

CycloNum CycloNum::constant(const FieldPtr &f, const Rational &r) {
    if (f->degree() == 0) throw std::logic_error("CycloNum: degenerate field");
    std::vector<Rational> c(static_cast<size_t>(f->degree()));
    c[0] = r;
    // N = 1 has Phi_1 = t - 1, so the representation is still a constant.
    return CycloNum(f, std::move(c));
}

CycloNum CycloNum::zeta_pow(const FieldPtr &f, long e) {
    long N = f->order();
    long r = ((e % N) + N) % N;
    QPoly p(static_cast<size_t>(r) + 1);
    p[static_cast<size_t>(r)] = Rational(1);
    return from_qpoly(f, p);
}

CycloNum CycloNum::from_qpoly(const FieldPtr &f, const QPoly &p) {
    QPoly rem = qdivmod(p, qfrom_z(f->modulus())).second;
    std::vector<Rational> c(static_cast<size_t>(f->degree()));
    for (size_t i = 0; i < rem.size(); ++i) c[i] = rem[i];
    return CycloNum(f, std::move(c));
}

void CycloNum::check_same_field(const CycloNum &o) const {
    if (!field_ || !o.field_ || field_->order() != o.field_->order())
        throw std::invalid_argument("CycloNum: mixed cyclotomic fields");
}

bool CycloNum::is_zero() const {
    for (const auto &c : coeffs_)
        if (!c.is_zero()) return false;
    return true;
}

bool CycloNum::is_one() const {
    if (coeffs_.empty() || !coeffs_[0].is_one()) return false;
    for (size_t i = 1; i < coeffs_.size(); ++i)
        if (!coeffs_[i].is_zero()) return false;
    return true;
}

bool CycloNum::is_rational() const {
    for (size_t i = 1; i < coeffs_.size(); ++i)
        if (!coeffs_[i].is_zero()) return false;
    return true;
}

Rational CycloNum::rational_part() const {
    if (!is_rational()) throw std::domain_error("CycloNum: not a rational value");
    return coeffs_.empty() ? Rational() : coeffs_[0];
}

CycloNum CycloNum::operator-() const {
    std::vector<Rational> c(coeffs_.size());
    for (size_t i = 0; i < coeffs_.size(); ++i) c[i] = -coeffs_[i];
    return CycloNum(field_, std::move(c));
}

CycloNum CycloNum::operator+(const CycloNum &o) const {
    check_same_field(o);
    std::vector<Rational> c(coeffs_.size());
    for (size_t i = 0; i < coeffs_.size(); ++i) c[i] = coeffs_[i] + o.coeffs_[i];
    return CycloNum(field_, std::move(c));
}

CycloNum CycloNum::operator-(const CycloNum &o) const {
    check_same_field(o);
    std::vector<Rational> c(coeffs_.size());
    for (size_t i = 0; i < coeffs_.size(); ++i) c[i] = coeffs_[i] - o.coeffs_[i];
    return CycloNum(field_, std::move(c));
}

CycloNum CycloNum::operator*(const CycloNum &o) const {
    check_same_field(o);
    QPoly a(coeffs_.begin(), coeffs_.end());
    QPoly b(o.coeffs_.begin(), o.coeffs_.end());
    qtrim(a);
    qtrim(b);
    return from_qpoly(field_, qmul(a, b));
}

CycloNum CycloNum::operator*(const Rational &r) const {
    std::vector<Rational> c(coeffs_.size());
    for (size_t i = 0; i < coeffs_.size(); ++i) c[i] = coeffs_[i] * r;
    return CycloNum(field_, std::move(c));
}

CycloNum CycloNum::inverse() const {
    if (is_zero()) throw std::domain_error("CycloNum: inverse of zero");
    // Extended Euclid in Q[t] for gcd(a, Phi_N) = 1: find u with u*a = 1 mod Phi_N.
    QPoly a(coeffs_.begin(), coeffs_.end());
    qtrim(a);
    QPoly r0 = qfrom_z(field_->modulus()), r1 = a;
    QPoly u0, u1{Rational(1)}; // coefficients of a in the Bezout chain
    while (!r1.empty()) {
        auto [q, r2] = qdivmod(r0, r1);
        QPoly u2 = qsub(u0, qmul(q, u1));
        r0 = std::move(r1);
        r1 = std::move(r2);
        u0 = std::move(u1);
        u1 = std::move(u2);
    }
    if (qdegree(r0) != 0)
        throw std::logic_error("CycloNum: modulus not coprime with element");
    return from_qpoly(field_, qscale(u0, r0[0].inverse()));
}

CycloNum CycloNum::pow(long e) const {
    if (e < 0) return inverse().pow(-e);
    CycloNum acc = one(field_);
    CycloNum base = *this;
    while (e > 0) {
        if (e & 1) acc = acc * base;
        base = base * base;
        e >>= 1;
    }
    return acc;
}

bool CycloNum::operator==(const CycloNum &o) const {
    check_same_field(o);
    return coeffs_ == o.coeffs_;
}

std::string CycloNum::str(const std::string &zeta) const {
    QPoly p(coeffs_.begin(), coeffs_.end());
    qtrim(p);
    return qpoly_str(p, zeta);
}

CycloNum geometric_sum(const FieldPtr &f, long e) {
    long N = f->order();
    CycloNum closed = (((e % N) + N) % N == 0) ? CycloNum::constant(f, Rational(N))
                                               : CycloNum::zero(f);
    CycloNum literal = CycloNum::zero(f);
    for (long m = 0; m < N; ++m) literal = literal + CycloNum::zeta_pow(f, m * e);
    if (!(closed == literal))
        throw std::logic_error("geometric_sum: closed form disagrees with summation");
    return closed;
}

} // namespace cyclo
