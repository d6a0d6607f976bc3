#include "doctest.h"

#include <random>

#include "cyclo/derivation.hpp"
#include "cyclo/dsl.hpp"

using namespace cyclo;

namespace {

MonomialDerivation four_var() {
    return parse_derivation_spec("vars x, y, z, w;\n"
                                 "d(x) = w^2; d(y) = z*w; d(z) = y^2; d(w) = x*y;\n");
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

TEST_CASE("apply: worked examples") {
    MonomialDerivation j22 = gen_jouanolou(2, 2);
    ContextPtr ctx = j22.context();
    CHECK(apply(j22, parse_polynomial("x1 - x2", ctx)) == parse_polynomial("x2^2 - x1^2", ctx));

    MonomialDerivation toy = parse_derivation_spec("vars x, y; d(x) = y; d(y) = x;");
    CHECK(apply(toy, parse_polynomial("x^2 - y^2", toy.context())).is_zero());
    CHECK(apply(toy, parse_polynomial("5", toy.context())).is_zero());
}

TEST_CASE("apply: Leibniz and linearity on random inputs") {
    std::mt19937 rng(23);
    MonomialDerivation d = four_var();
    ContextPtr ctx = d.context();
    for (int trial = 0; trial < 30; ++trial) {
        QPolynomial p = random_poly(ctx, rng, 2), q = random_poly(ctx, rng, 2);
        CHECK(apply(d, p * q) == apply(d, p) * q + p * apply(d, q));
        Rational a(3, 2), b(-2);
        CHECK(apply(d, p * a + q * b) == apply(d, p) * a + apply(d, q) * b);
    }
}

TEST_CASE("homogeneity degree") {
    CHECK(homogeneity_degree(gen_jouanolou(3, 2)) == 1);
    MonomialDerivation toy = parse_derivation_spec("vars x, y; d(x) = y; d(y) = x;");
    CHECK(homogeneity_degree(toy) == 0);
    MonomialDerivation mixed = parse_derivation_spec("vars x, y; d(x) = y; d(y) = x^2;");
    CHECK(homogeneity_degree(mixed) == std::nullopt);
    // homogeneous d maps degree-m slices to degree-(m+s-1) slices
    MonomialDerivation d = four_var();
    std::mt19937 rng(29);
    for (int trial = 0; trial < 20; ++trial) {
        QPolynomial p(d.context());
        for (const auto &e : monomial_basis(4, 3))
            p.add_term(e, Rational(std::uniform_int_distribution<int>(-3, 3)(rng)));
        QPolynomial image = apply(d, p);
        if (!image.is_zero()) CHECK(is_homogeneous(image) == 3 + 1);
    }
}

TEST_CASE("exponent matrix and w_d") {
    auto j32 = exponent_matrix_and_wd(gen_jouanolou(3, 2));
    CHECK(j32.wd == Rational(7));
    CHECK(j32.unit_coefficients);

    auto four = exponent_matrix_and_wd(four_var());
    CHECK(four.wd == Rational(0));

    MonomialDerivation idd = parse_derivation_spec("vars x, y; d(x) = x; d(y) = y;");
    auto id_res = exponent_matrix_and_wd(idd);
    CHECK(id_res.wd == Rational(0));
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) CHECK(id_res.A.at(i, j).is_zero());
}

TEST_CASE("partition detection: the 4-variable example") {
    MonomialDerivation d = four_var();
    CyclotomicDetection det = detect_cyclotomic(d);
    CHECK(det.discrepancy_gcd == 2);
    REQUIRE(det.partition.has_value());
    CHECK(det.partition->k == 2);
    CHECK(det.partition->classes == std::vector<int>{1, 1, 2, 2});
    CHECK(det.partition->sizes == std::vector<int>{2, 2});
    CHECK(det.feasible_k == std::vector<int>{2});
    CHECK(partition_valid(d, *det.partition));
}

TEST_CASE("partition detection: Jouanolou derivations") {
    for (int n : {2, 3, 4}) {
        for (int s : {1, 2, 3}) {
            MonomialDerivation d = gen_jouanolou(n, s);
            auto p = detect_cyclotomic_partition(d);
            REQUIRE(p.has_value());
            CHECK(p->k == n);
            CHECK(p->sizes == std::vector<int>(static_cast<size_t>(n), 1));
            // singleton classes in cyclic order
            for (int v = 0; v < n; ++v) CHECK(p->classes[static_cast<size_t>(v)] == v + 1);
            CHECK(partition_valid(d, *p));
        }
    }
    CHECK(detect_cyclotomic(gen_jouanolou(3, 2)).discrepancy_gcd == 3);
}

TEST_CASE("partition detection: degenerate cases") {
    MonomialDerivation self = parse_derivation_spec("vars x; d(x) = x^2;");
    CHECK(detect_cyclotomic(self).discrepancy_gcd == 1);
    CHECK(!detect_cyclotomic_partition(self).has_value());

    // constant image joins the class forced by incoming edges
    MonomialDerivation chain = parse_derivation_spec("vars x, y; d(x) = y; d(y) = 1;");
    auto p = partition_for_k(chain, 2);
    REQUIRE(p.has_value());
    CHECK(p->classes == std::vector<int>{1, 2});
    CHECK(partition_valid(chain, *p));

    // fully unconstrained variable lands in class 1
    MonomialDerivation with_iso =
        parse_derivation_spec("vars x, y, u; d(x) = y; d(y) = x; d(u) = 1;");
    auto piso = detect_cyclotomic_partition(with_iso);
    REQUIRE(piso.has_value());
    CHECK(piso->k == 2);
    CHECK(piso->classes == std::vector<int>{1, 2, 1});

    // invariant re-check on every edge for the detected partition
    MonomialDerivation d = four_var();
    auto det = detect_cyclotomic(d);
    for (int u = 0; u < d.arity(); ++u) {
        int cls = det.partition->classes[static_cast<size_t>(u)];
        const ExponentVector &e = d.image(u).expo;
        for (size_t v = 0; v < e.size(); ++v)
            if (e[v] > 0) CHECK(det.partition->classes[v] == (cls % det.partition->k) + 1);
    }
}

TEST_CASE("partition for a requested k") {
    MonomialDerivation j42 = gen_jouanolou(4, 2);
    auto p4 = partition_for_k(j42, 4);
    REQUIRE(p4.has_value());
    CHECK(p4->k == 4);
    auto p2 = partition_for_k(j42, 2);
    REQUIRE(p2.has_value());
    CHECK(p2->k == 2);
    CHECK(partition_valid(j42, *p2));
    CHECK(!partition_for_k(j42, 3).has_value());
    CHECK(detect_cyclotomic(j42).feasible_k == std::vector<int>{4, 2});
}

TEST_CASE("direct sums") {
    MonomialDerivation a = gen_jouanolou(2, 2);
    MonomialDerivation b = parse_derivation_spec("vars u, v; d(u) = v^2; d(v) = u^2;");
    MonomialDerivation sum = direct_sum(a, b);
    CHECK(sum.context()->names() == std::vector<std::string>{"x1", "x2", "u", "v"});
    CHECK(sum.image_poly(0) == parse_polynomial("x2^2", sum.context()));
    CHECK(sum.image_poly(2) == parse_polynomial("v^2", sum.context()));
    CHECK(homogeneity_degree(sum) == 1);

    // restriction to the first block agrees with the summand
    std::mt19937 rng(31);
    std::vector<int> var_map{0, 1};
    for (int trial = 0; trial < 25; ++trial) {
        QPolynomial p = random_poly(a.context(), rng);
        CHECK(apply(sum, p.embed(sum.context(), var_map)) ==
              apply(a, p).embed(sum.context(), var_map));
    }

    CHECK_THROWS_AS(direct_sum(a, gen_jouanolou(2, 2)), std::invalid_argument);
}

TEST_CASE("generators") {
    MonomialDerivation j32 = gen_jouanolou(3, 2);
    CHECK(print_derivation_spec(j32) ==
          "vars x1, x2, x3;\nd(x1) = x2^2;\nd(x2) = x3^2;\nd(x3) = x1^2;\n");
    MonomialDerivation j21 = gen_jouanolou(2, 1);
    CHECK(j21.image_poly(0) == parse_polynomial("x2", j21.context()));
    CHECK_THROWS_AS(gen_jouanolou(1, 2), std::invalid_argument);
    CHECK_THROWS_AS(gen_jouanolou(2, 0), std::invalid_argument);

    auto p4 = detect_cyclotomic_partition(gen_jouanolou(4, 2));
    REQUIRE(p4.has_value());
    CHECK(p4->k == 4);

    // the 4-variable example as a generalized cyclotomic instance
    MonomialDerivation g =
        gen_generalized_cyclotomic({2, 2}, {{{0, 2}, {1, 1}}, {{0, 2}, {1, 1}}});
    CHECK(g.context()->names() == std::vector<std::string>{"x1_1", "x1_2", "x2_1", "x2_2"});
    // d(x1_1) = x2_2^2, d(x1_2) = x2_1 x2_2, d(x2_1) = x1_2^2, d(x2_2) = x1_1 x1_2
    CHECK(g.image_poly(0) == parse_polynomial("x2_2^2", g.context()));
    CHECK(g.image_poly(1) == parse_polynomial("x2_1*x2_2", g.context()));
    CHECK(g.image_poly(3) == parse_polynomial("x1_1*x1_2", g.context()));
    auto det = detect_cyclotomic(g);
    REQUIRE(det.partition.has_value());
    CHECK(det.partition->k == 2);

    // Jouanolou as the all-singleton specialization
    MonomialDerivation spec = gen_generalized_cyclotomic({1, 1}, {{{2}}, {{2}}});
    CHECK(spec.image_poly(0) == parse_polynomial("x2_1^2", spec.context()));
    CHECK(spec.image_poly(1) == parse_polynomial("x1_1^2", spec.context()));

    CHECK_THROWS_AS(gen_generalized_cyclotomic({1}, {{{1}}}), std::invalid_argument);
    CHECK_THROWS_AS(gen_generalized_cyclotomic({1, 1}, {{{2, 9}}, {{2}}}), std::invalid_argument);
}
