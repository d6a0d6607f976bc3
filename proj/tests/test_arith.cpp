#include "doctest.h"

#include <random>

#include "cyclo/cyclotomic.hpp"
#include "cyclo/rational.hpp"

using namespace cyclo;

namespace {

// Independent Euler phi by gcd counting.
int phi_by_counting(int n) {
    int count = 0;
    for (int i = 1; i <= n; ++i) {
        int a = i, b = n;
        while (b) {
            int t = a % b;
            a = b;
            b = t;
        }
        if (a == 1) ++count;
    }
    return count;
}

ZPoly zp(std::initializer_list<long> coeffs) {
    ZPoly p;
    for (long c : coeffs) p.emplace_back(c);
    return p;
}

Rational rnd_rational(std::mt19937 &rng) {
    std::uniform_int_distribution<int> num(-9, 9), den(1, 7);
    return Rational(num(rng), den(rng));
}

} // namespace

TEST_CASE("rational canonical form") {
    CHECK(Rational(2, 4) == Rational(1, 2));
    CHECK(Rational(3, -6) == Rational(-1, 2));
    CHECK(Rational(3, -6).denominator() == 2);
    CHECK(Rational(0, 5).str() == "0");
    CHECK(Rational(-7, 3).str() == "-7/3");
    CHECK(Rational::from_string("-7/3") == Rational(-7, 3));
    CHECK(Rational::from_string("42") == Rational(42));
    CHECK_THROWS_AS(Rational(1, 0), std::domain_error);
    CHECK_THROWS_AS(Rational(1) / Rational(0), std::domain_error);
    CHECK_THROWS_AS(Rational(0).inverse(), std::domain_error);
    CHECK(Rational(-2, 3).pow(-2) == Rational(9, 4));
}

TEST_CASE("cyclotomic polynomials: frozen small cases") {
    CHECK(cyclotomic_polynomial(1) == zp({-1, 1}));           // t - 1
    CHECK(cyclotomic_polynomial(3) == zp({1, 1, 1}));         // t^2 + t + 1
    CHECK(cyclotomic_polynomial(7) == zp({1, 1, 1, 1, 1, 1, 1}));
    CHECK(cyclotomic_polynomial(12) == zp({1, 0, -1, 0, 1})); // t^4 - t^2 + 1
    CHECK_THROWS_AS(cyclotomic_polynomial(0), std::invalid_argument);
}

TEST_CASE("cyclotomic polynomials: product and degree oracles") {
    for (long n = 1; n <= 30; ++n) {
        ZPoly product{1};
        for (long d = 1; d <= n; ++d)
            if (n % d == 0) product = zmul(product, cyclotomic_polynomial(d));
        CHECK(product == zpow_minus_one(n));
        ZPoly phi = cyclotomic_polynomial(n);
        CHECK(zdegree(phi) == phi_by_counting(static_cast<int>(n)));
        CHECK(phi.back() == 1);
    }
}

TEST_CASE("zeta powers") {
    auto f2 = CyclotomicField::make(2);
    CHECK(CycloNum::zeta_pow(f2, 1) == CycloNum::constant(f2, Rational(-1)));
    auto f3 = CyclotomicField::make(3);
    CHECK(CycloNum::zeta_pow(f3, 3) == CycloNum::one(f3));
    auto f4 = CyclotomicField::make(4);
    CHECK(CycloNum::zeta_pow(f4, 2) == CycloNum::constant(f4, Rational(-1)));

    std::mt19937 rng(20240817);
    for (long N : {2L, 3L, 5L, 8L, 12L}) {
        auto f = CyclotomicField::make(N);
        std::uniform_int_distribution<long> e(-3 * N, 3 * N);
        for (int trial = 0; trial < 25; ++trial) {
            long e1 = e(rng), e2 = e(rng);
            CHECK(CycloNum::zeta_pow(f, e1) * CycloNum::zeta_pow(f, e2) ==
                  CycloNum::zeta_pow(f, e1 + e2));
            CHECK(CycloNum::zeta_pow(f, e1) * CycloNum::zeta_pow(f, -e1) == CycloNum::one(f));
        }
    }
}

TEST_CASE("field arithmetic and inversion") {
    auto f3 = CyclotomicField::make(3);
    CycloNum zeta = CycloNum::zeta_pow(f3, 1);
    CycloNum one_plus_zeta = CycloNum::one(f3) + zeta;
    CHECK(one_plus_zeta.inverse() == -zeta);
    CHECK(one_plus_zeta * -zeta == CycloNum::one(f3));
    CHECK(CycloNum::one(f3).inverse() == CycloNum::one(f3));

    auto f4 = CyclotomicField::make(4);
    CycloNum i = CycloNum::zeta_pow(f4, 1);
    CHECK(i * i == CycloNum::constant(f4, Rational(-1)));

    CHECK_THROWS_AS(CycloNum::zero(f3).inverse(), std::domain_error);

    std::mt19937 rng(7);
    for (long N : {1L, 2L, 3L, 4L, 5L, 7L, 9L, 12L}) {
        auto f = CyclotomicField::make(N);
        for (int trial = 0; trial < 20; ++trial) {
            CycloNum a = CycloNum::zero(f);
            for (int j = 0; j < f->degree(); ++j)
                a = a + CycloNum::zeta_pow(f, j) * rnd_rational(rng);
            if (a.is_zero()) continue;
            CHECK(a * a.inverse() == CycloNum::one(f));
        }
    }
}

TEST_CASE("modulus annihilates zeta") {
    for (long N = 1; N <= 20; ++N) {
        auto f = CyclotomicField::make(N);
        CycloNum acc = CycloNum::zero(f);
        const ZPoly &phi = f->modulus();
        for (size_t j = 0; j < phi.size(); ++j)
            acc = acc + CycloNum::zeta_pow(f, static_cast<long>(j)) * Rational(phi[j]);
        CHECK(acc.is_zero());
    }
}

TEST_CASE("geometric sums") {
    auto f3 = CyclotomicField::make(3);
    CHECK(geometric_sum(f3, 1).is_zero());
    CHECK(geometric_sum(f3, 3) == CycloNum::constant(f3, Rational(3)));
    auto f7 = CyclotomicField::make(7);
    // brute force oracle for N=7, e=4
    CycloNum brute = CycloNum::zero(f7);
    for (long m = 0; m < 7; ++m) brute = brute + CycloNum::zeta_pow(f7, 4 * m);
    CHECK(brute.is_zero());
    CHECK(geometric_sum(f7, 4) == brute);

    for (long N = 2; N <= 30; ++N) {
        auto f = CyclotomicField::make(N);
        for (long e = 1; e <= 3 * N; ++e) {
            bool zero = geometric_sum(f, e).is_zero();
            CHECK(zero == (e % N != 0));
        }
    }
}
