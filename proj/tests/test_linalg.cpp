#include "doctest.h"

#include <random>

#include "cyclo/linalg.hpp"

using namespace cyclo;

namespace {

RationalMatrix mat(std::initializer_list<std::initializer_list<long>> rows) {
    int r = static_cast<int>(rows.size());
    int c = r ? static_cast<int>(rows.begin()->size()) : 0;
    RationalMatrix m(r, c);
    int i = 0;
    for (const auto &row : rows) {
        int j = 0;
        for (long v : row) m.at(i, j++) = Rational(v);
        ++i;
    }
    return m;
}

// Laplace cofactor expansion along the first row.
Rational det_cofactor(const RationalMatrix &m) {
    int n = m.rows();
    if (n == 0) return Rational(1);
    if (n == 1) return m.at(0, 0);
    Rational acc;
    for (int j = 0; j < n; ++j) {
        if (m.at(0, j).is_zero()) continue;
        RationalMatrix minor(n - 1, n - 1);
        for (int r = 1; r < n; ++r) {
            int cc = 0;
            for (int c = 0; c < n; ++c) {
                if (c == j) continue;
                minor.at(r - 1, cc++) = m.at(r, c);
            }
        }
        Rational term = m.at(0, j) * det_cofactor(minor);
        acc += (j % 2 == 0) ? term : -term;
    }
    return acc;
}

QPoly qp(std::initializer_list<long> coeffs) {
    QPoly p;
    for (long c : coeffs) p.emplace_back(c);
    return p;
}

} // namespace

TEST_CASE("determinant: frozen examples") {
    CHECK(determinant(mat({{-1, 2}, {0, -1}})) == Rational(1));
    // Jouanolou n=3, s=2
    CHECK(determinant(mat({{-1, 2, 0}, {0, -1, 2}, {2, 0, -1}})) == Rational(7));
    // the 4-variable example: w_d = 0
    CHECK(determinant(mat({{-1, 0, 0, 2}, {0, -1, 1, 1}, {0, 2, -1, 0}, {1, 1, 0, -1}})) ==
          Rational(0));
    CHECK_THROWS_AS(determinant(RationalMatrix(2, 3)), std::invalid_argument);
}

TEST_CASE("determinant agrees with cofactor expansion on random matrices") {
    std::mt19937 rng(42);
    std::uniform_int_distribution<int> num(-6, 6), den(1, 4), dim(1, 5);
    for (int trial = 0; trial < 60; ++trial) {
        int n = dim(rng);
        RationalMatrix m(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) m.at(i, j) = Rational(num(rng), den(rng));
        CHECK(determinant(m) == det_cofactor(m));
    }
}

TEST_CASE("nullspace: frozen examples and normalization") {
    auto basis = nullspace(mat({{1, 1}, {1, 1}}));
    REQUIRE(basis.size() == 1);
    CHECK(basis[0] == std::vector<Rational>{Rational(-1), Rational(1)});

    CHECK(nullspace(mat({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}})).empty());
}

TEST_CASE("nullspace properties on random matrices") {
    std::mt19937 rng(2025);
    std::uniform_int_distribution<int> num(-4, 4), dim(1, 6);
    for (int trial = 0; trial < 60; ++trial) {
        int r = dim(rng), c = dim(rng);
        RationalMatrix m(r, c);
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < c; ++j) m.at(i, j) = Rational(num(rng));
        auto basis = nullspace(m);
        // rank-nullity
        CHECK(static_cast<int>(basis.size()) == c - rank(m));
        // every vector is in the kernel
        for (const auto &v : basis)
            for (int i = 0; i < r; ++i) {
                Rational acc;
                for (int j = 0; j < c; ++j) acc += m.at(i, j) * v[static_cast<size_t>(j)];
                CHECK(acc.is_zero());
            }
        // linear independence: stack vectors as rows and check full rank
        if (!basis.empty()) {
            RationalMatrix b(static_cast<int>(basis.size()), c);
            for (size_t i = 0; i < basis.size(); ++i)
                for (int j = 0; j < c; ++j) b.at(static_cast<int>(i), j) = basis[i][static_cast<size_t>(j)];
            CHECK(rank(b) == static_cast<int>(basis.size()));
        }
    }
}

TEST_CASE("characteristic polynomial") {
    CHECK(char_poly(mat({{0, 1}, {0, 0}})) == qp({0, 0, 1}));       // t^2
    CHECK(char_poly(mat({{2, 0}, {0, 3}})) == qp({6, -5, 1}));      // t^2 - 5t + 6
    CHECK(char_poly(mat({{1, 1, 1}, {1, 1, 1}, {1, 1, 1}})) == qp({0, 0, -3, 1})); // t^3 - 3t^2

    // quadrature-style oracle: char_poly(M)(x) = det(xI - M) at several points
    std::mt19937 rng(99);
    std::uniform_int_distribution<int> num(-5, 5), dim(1, 5);
    for (int trial = 0; trial < 25; ++trial) {
        int n = dim(rng);
        RationalMatrix m(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) m.at(i, j) = Rational(num(rng));
        QPoly p = char_poly(m);
        for (long x = -2; x <= 2; ++x) {
            RationalMatrix shifted = m;
            for (int i = 0; i < n; ++i) shifted.at(i, i) = Rational(x) - m.at(i, i);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    if (i != j) shifted.at(i, j) = -m.at(i, j);
            CHECK(qeval(p, Rational(x)) == determinant(shifted));
        }
    }
}

TEST_CASE("rational roots") {
    CHECK(rational_roots(qp({-1, 0, 1})) == std::vector<Rational>{Rational(-1), Rational(1)});
    CHECK(rational_roots(qp({1, 0, 0, 1})) == std::vector<Rational>{Rational(-1)}); // t^3 + 1
    CHECK(rational_roots(qp({1, 0, 1})).empty());                                   // t^2 + 1
    CHECK_THROWS_AS(rational_roots(QPoly{}), std::invalid_argument);

    // multiplicities and fractions: (2t - 1)^2 (t + 3) t^2
    QPoly p = qmul(qmul(qp({-1, 2}), qp({-1, 2})), qmul(qp({3, 1}), qp({0, 0, 1})));
    auto roots = rational_roots(p);
    std::vector<Rational> expected{Rational(-3), Rational(0), Rational(0), Rational(1, 2),
                                   Rational(1, 2)};
    CHECK(roots == expected);

    // every root reported actually annihilates p, and M - rI is singular for
    // char_poly roots
    RationalMatrix m = mat({{2, 1, 0}, {0, 2, 0}, {1, 0, -1}});
    QPoly cp = char_poly(m);
    for (const Rational &r : rational_roots(cp)) {
        CHECK(qeval(cp, r).is_zero());
        RationalMatrix shifted = m;
        for (int i = 0; i < m.rows(); ++i) shifted.at(i, i) -= r;
        CHECK(determinant(shifted).is_zero());
    }
}
