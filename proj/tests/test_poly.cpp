#include "doctest.h"

#include <random>

#include "cyclo/dsl.hpp"
#include "cyclo/polynomial.hpp"

using namespace cyclo;

namespace {

ContextPtr xy() {
    static ContextPtr ctx = make_context({"x", "y"});
    return ctx;
}

QPolynomial P(const std::string &text, const ContextPtr &ctx = xy()) {
    return parse_polynomial(text, ctx);
}

QPolynomial random_poly(const ContextPtr &ctx, std::mt19937 &rng, int max_deg = 3) {
    std::uniform_int_distribution<int> nterms(0, 4), expo(0, max_deg), num(-5, 5), den(1, 3);
    QPolynomial p(ctx);
    int terms = nterms(rng);
    for (int t = 0; t < terms; ++t) {
        ExponentVector e(static_cast<size_t>(ctx->arity()));
        for (auto &x : e) x = expo(rng);
        p.add_term(e, Rational(num(rng), den(rng)));
    }
    return p;
}

} // namespace

TEST_CASE("ring operations") {
    CHECK(P("x - y") * P("x + y") == P("x^2 - y^2"));
    CHECK(P("x - y") * P("x^2 + x*y + y^2") == P("x^3 - y^3"));
    CHECK(P("x + y^2") + P("0") == P("x + y^2"));
    CHECK(P("x") - P("x") == P("0"));
    CHECK_THROWS_AS(P("x") + QPolynomial::zero(make_context({"u"})), std::invalid_argument);

    std::mt19937 rng(11);
    ContextPtr ctx = make_context({"x", "y", "z"});
    for (int trial = 0; trial < 40; ++trial) {
        QPolynomial a = random_poly(ctx, rng), b = random_poly(ctx, rng), c = random_poly(ctx, rng);
        CHECK(a + b == b + a);
        CHECK(a * b == b * a);
        CHECK((a + b) + c == a + (b + c));
        CHECK((a * b) * c == a * (b * c));
        CHECK(a * (b + c) == a * b + a * c);
    }
}

TEST_CASE("homogeneity") {
    CHECK(is_homogeneous(P("x^2 + x*y")) == 2);
    CHECK(is_homogeneous(P("x + x^2")) == std::nullopt);
    CHECK(is_homogeneous(P("x^3 - y^3")) == 3);
    CHECK_THROWS_AS(is_homogeneous(P("0")), std::invalid_argument);

    auto comps = homogeneous_components(P("x + x^2"));
    REQUIRE(comps.size() == 2);
    CHECK(comps.at(1) == P("x"));
    CHECK(comps.at(2) == P("x^2"));
    CHECK(homogeneous_components(P("x^3 - y^3")).size() == 1);
    CHECK(homogeneous_components(P("0")).empty());

    std::mt19937 rng(13);
    for (int trial = 0; trial < 30; ++trial) {
        QPolynomial p = random_poly(xy(), rng);
        QPolynomial sum = QPolynomial::zero(xy());
        for (const auto &[deg, comp] : homogeneous_components(p)) {
            if (!comp.is_zero()) CHECK(is_homogeneous(comp) == deg);
            sum = sum + comp;
        }
        CHECK(sum == p);
    }
}

TEST_CASE("exact division") {
    CHECK(divide_exact(P("y^2 - x^2"), P("x - y")) == P("-x - y"));
    CHECK(divide_exact(P("x^2 - y^2"), P("x - y")) == P("x + y"));
    CHECK(divide_exact(P("x^2 + y^2"), P("x - y")) == std::nullopt);
    CHECK(divide_exact(P("0"), P("x - y")) == P("0"));
    CHECK_THROWS_AS(divide_exact(P("x"), P("0")), std::domain_error);

    std::mt19937 rng(17);
    for (int trial = 0; trial < 40; ++trial) {
        QPolynomial p = random_poly(xy(), rng), q = random_poly(xy(), rng);
        if (q.is_zero()) continue;
        CHECK(divide_exact(p * q, q) == p);
    }
}

TEST_CASE("diagonal automorphisms") {
    auto f2 = CyclotomicField::make(2);
    DiagonalAutomorphism flip(xy(), f2, {CycloNum::one(f2), CycloNum::zeta_pow(f2, 1)});
    CHECK(flip(embed_in_field(P("x + y"), f2)) == embed_in_field(P("x - y"), f2));

    DiagonalAutomorphism id = DiagonalAutomorphism::identity(xy(), f2);
    CHECK(id(embed_in_field(P("x^2 - 3*y"), f2)) == embed_in_field(P("x^2 - 3*y"), f2));

    auto f3 = CyclotomicField::make(3);
    DiagonalAutomorphism rot(xy(), f3, {CycloNum::one(f3), CycloNum::zeta_pow(f3, 1)});
    CPolynomial image = rot(embed_in_field(P("x - y"), f3));
    CPolynomial expected = embed_in_field(P("x"), f3) -
                           CPolynomial::variable(xy(), 1, CycloNum::zeta_pow(f3, 1));
    CHECK(image == expected);

    CHECK_THROWS_AS(DiagonalAutomorphism(xy(), f3, {CycloNum::one(f3), CycloNum::zero(f3)}),
                    std::invalid_argument);

    // multiplicativity sigma(pq) = sigma(p) sigma(q)
    std::mt19937 rng(19);
    for (int trial = 0; trial < 25; ++trial) {
        CPolynomial p = embed_in_field(random_poly(xy(), rng), f3);
        CPolynomial q = embed_in_field(random_poly(xy(), rng), f3);
        CHECK(rot(p * q) == rot(p) * rot(q));
    }
    CHECK(rot.power(3).is_identity());
    CHECK(rot.inverse()(rot(embed_in_field(P("x*y - y^2"), f3))) ==
          embed_in_field(P("x*y - y^2"), f3));
}

TEST_CASE("monomial basis") {
    auto b21 = monomial_basis(2, 1);
    REQUIRE(b21.size() == 2);
    CHECK(b21[0] == ExponentVector{1, 0});
    CHECK(b21[1] == ExponentVector{0, 1});

    auto b22 = monomial_basis(2, 2);
    REQUIRE(b22.size() == 3);
    CHECK(b22[0] == ExponentVector{2, 0});
    CHECK(b22[1] == ExponentVector{1, 1});
    CHECK(b22[2] == ExponentVector{0, 2});

    auto b31 = monomial_basis(3, 1);
    REQUIRE(b31.size() == 3);
    CHECK(b31[0] == ExponentVector{1, 0, 0});
    CHECK(b31[2] == ExponentVector{0, 0, 1});

    // |basis(n, m)| = C(m+n-1, n-1), descending graded-lex, all degree m
    GrlexDescending less;
    for (int n = 1; n <= 4; ++n) {
        for (int m = 0; m <= 5; ++m) {
            auto basis = monomial_basis(n, m);
            long expected = 1;
            for (int i = 1; i <= n - 1; ++i) expected = expected * (m + i) / i;
            CHECK(static_cast<long>(basis.size()) == expected);
            for (size_t i = 0; i + 1 < basis.size(); ++i) CHECK(less(basis[i], basis[i + 1]));
            for (const auto &e : basis) CHECK(total_degree(e) == m);
        }
    }
}

TEST_CASE("printing follows descending graded-lex") {
    CHECK(P("y + x^2 - 1").str() == "x^2 + y - 1");
    CHECK(P("x^3 - y^3").str() == "x^3 - y^3");
    CHECK(P("0").str() == "0");
    CHECK(P("-x - y").str() == "-x - y");
    CHECK(P("2/3*x*y - y^2").str() == "2/3*x*y - y^2");
}
