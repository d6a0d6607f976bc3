/*
 * darboux.hpp
 * -----------
 * Degree-bounded search for Darboux polynomials d(f) = lambda*f of a
 * homogeneous monomial derivation, exact over Q.
 *
 * Two engines share the linear skeleton M_d (the matrix of d restricted
 * to a homogeneous slice):
 *  - monomial_cofactor_search: complete for cofactors c*mu with mu a
 *    single monomial of degree s-1 (eigen-pencil reduction);
 *  - general_cofactor_search: full bilinear system in the coefficients
 *    of f and lambda, closed by pivot case-splitting plus elimination;
 *    NONE is reported only when every branch closes.
 */
#ifndef CYCLO_DARBOUX_HPP
#define CYCLO_DARBOUX_HPP

#include <string>
#include <vector>

#include "cyclo/derivation.hpp"

namespace cyclo {

struct DarbouxPair {
    QPolynomial f;        // non-constant, monic leading coefficient
    QPolynomial cofactor; // possibly zero
};

enum class SearchStatus { None, Found, Undecided };

std::string status_name(SearchStatus s);

struct DegreeResult {
    int degree = 0;
    SearchStatus status = SearchStatus::Undecided;
    std::vector<DarbouxPair> pairs;
    std::vector<std::string> undecided_branches; // residual systems, verbatim
};

struct SearchConfig {
    long branch_cap = 4096;
    bool monomial_only = false;
};

struct SearchReport {
    int max_degree = 0;
    SearchConfig config;
    std::vector<DegreeResult> entries;

    bool any_undecided() const;
    bool any_found() const;
};

// Matrix of d : A^m -> A^{m+s-1}; columns over monomial_basis(m), rows
// over monomial_basis(m+s-1), both descending graded-lex.
RationalMatrix derivation_matrix(const MonomialDerivation &d, int m);

std::vector<DarbouxPair> monomial_cofactor_search(const MonomialDerivation &d, int m);

DegreeResult general_cofactor_search(const MonomialDerivation &d, int m,
                                     const SearchConfig &config = {});

SearchReport search_up_to(const MonomialDerivation &d, int max_degree,
                          const SearchConfig &config = {});

// True iff apply(d, f) = lambda * f exactly. f must be non-constant.
bool verify_darboux(const MonomialDerivation &d, const QPolynomial &f, const QPolynomial &lambda);

// From a nontrivial rational constant p/q of d (gcd-reduced by the
// caller), recover the Darboux pairs of numerator and denominator.
struct ConstantWitness {
    std::optional<DarbouxPair> p_pair;
    std::optional<DarbouxPair> q_pair;
};
ConstantWitness rational_constant_to_darboux(const MonomialDerivation &d, const QPolynomial &p,
                                             const QPolynomial &q);

} // namespace cyclo

#endif
