/*
 * upoly.hpp
 * ---------
 * Dense univariate polynomials, two flavours:
 *   ZPoly — integer coefficients (used for the cyclotomic moduli),
 *   QPoly — rational coefficients (extended Euclid, characteristic polys).
 * Coefficient i is the coefficient of t^i; the top coefficient is nonzero
 * except for the zero polynomial, which is the empty vector.
 */
#ifndef CYCLO_UPOLY_HPP
#define CYCLO_UPOLY_HPP

#include <gmpxx.h>

#include <optional>
#include <string>
#include <vector>

#include "cyclo/rational.hpp"

namespace cyclo {

using ZPoly = std::vector<mpz_class>;
using QPoly = std::vector<Rational>;

// ---- integer univariate ----

void ztrim(ZPoly &p);
int zdegree(const ZPoly &p); // -1 for the zero polynomial
ZPoly zmul(const ZPoly &a, const ZPoly &b);
// Exact division; returns nullopt when b does not divide a over Z.
std::optional<ZPoly> zdiv_exact(const ZPoly &a, const ZPoly &b);
// t^n - 1
ZPoly zpow_minus_one(long n);

// ---- rational univariate ----

void qtrim(QPoly &p);
int qdegree(const QPoly &p);
bool qis_zero(const QPoly &p);
QPoly qadd(const QPoly &a, const QPoly &b);
QPoly qsub(const QPoly &a, const QPoly &b);
QPoly qmul(const QPoly &a, const QPoly &b);
QPoly qscale(const QPoly &a, const Rational &c);
// Division with remainder; divisor must be nonzero.
std::pair<QPoly, QPoly> qdivmod(const QPoly &a, const QPoly &b);
Rational qeval(const QPoly &p, const Rational &x);
QPoly qfrom_z(const ZPoly &p);
QPoly qderivative(const QPoly &p);
// Monic gcd by the Euclidean algorithm.
QPoly qgcd(const QPoly &a, const QPoly &b);

std::string qpoly_str(const QPoly &p, const std::string &var = "t");

} // namespace cyclo

#endif
