/*
 * certify.hpp
 * -----------
 * Machine-checkable certificates for cyclic block derivations: the
 * root-of-unity structure (N, q_i, sigma), the conjugation identity
 * sigma^{-1} d sigma = zeta d, the delta bound and vanishing of the
 * twisted cofactor sum Lambda, homogeneous-component checks, and the
 * orbit product F = prod sigma^m(f), an explicit rational constant
 * built from any Darboux polynomial.
 */
#ifndef CYCLO_CERTIFY_HPP
#define CYCLO_CERTIFY_HPP

#include <optional>
#include <string>
#include <vector>

#include "cyclo/darboux.hpp"
#include "cyclo/derivation.hpp"

namespace cyclo {

struct CyclotomicStructure {
    ContextPtr ctx;
    CyclotomicPartition partition;
    int s = 0;            // total degree of every image
    long N = 0;           // 1 + s + ... + s^{k-1}
    std::vector<long> q;  // q_i = 1 + s + ... + s^i, so q_{k-1} = N
    FieldPtr field;       // Q(zeta_N)
    DiagonalAutomorphism sigma; // scales class k-i by zeta^{q_i}
};

// Structure constants from (partition, s) alone; does not look at any
// derivation. Used by build_structure, by re-checkers, and by tests that
// need a deliberately wrong s.
CyclotomicStructure make_structure(const ContextPtr &ctx, const CyclotomicPartition &partition,
                                   int s);

// Validated: d homogeneous with unit coefficients and image degree s >= 1,
// partition valid for d. Asserts q_{k-1} = N and sigma^N = id.
CyclotomicStructure build_structure(const MonomialDerivation &d,
                                    const CyclotomicPartition &partition);

struct ConjugationRow {
    std::string variable;
    CPolynomial lhs; // sigma^{-1}(d(sigma(x)))
    CPolynomial rhs; // zeta * d(x)
    bool equal;
};

struct ConjugationReport {
    bool ok = false;
    std::optional<std::string> failing_variable;
    std::vector<ConjugationRow> rows;
};

// Per-variable check of sigma^{-1} d sigma = zeta d; sufficient because
// both sides are compositions of a derivation with automorphisms.
ConjugationReport check_conjugation(const MonomialDerivation &d, const CyclotomicStructure &st);

struct DeltaInfo {
    long delta = 0;
    std::vector<long> p; // block degree sums p_1..p_k
};

// delta = sum_{l=2}^{k} p_l q_{k-l} for a cofactor monomial beta of total
// degree s-1.
DeltaInfo delta_of(const ExponentVector &beta, const CyclotomicStructure &st);

struct LambdaEntry {
    ExponentVector beta;
    std::vector<long> p;
    long delta = 0;
    bool bound_ok = false;    // 0 < delta+1 <= s^{k-1} < N
    CycloNum geometric;       // closed-form sum over zeta^{m(delta+1)}
    CycloNum direct;          // literal sum of zeta^m * (sigma^m scale of X^beta)
    bool vanishes = false;    // both sums equal and zero
};

struct LambdaReport {
    bool ok = false;
    long s_pow_k_minus_1 = 0;
    std::vector<LambdaEntry> entries;
    std::optional<std::string> failure;
};

LambdaReport lambda_vanishing_certificate(const CyclotomicStructure &st);

struct OrbitWitness {
    CPolynomial F;                        // prod_{m=0}^{N-1} sigma^m(f)
    std::optional<QPolynomial> F_rational; // present when all coefficients are rational
};

// Requires a verified pair and a passing conjugation check; aborts loudly
// if d(F) != 0, which would contradict the certified identities.
OrbitWitness orbit_product(const MonomialDerivation &d, const CyclotomicStructure &st,
                           const DarbouxPair &pair);

struct LemmaComponentRow {
    long degree;
    QPolynomial component;
    bool darboux_with_same_cofactor;
};

struct LemmaReport {
    bool ok = false;
    bool cofactor_homogeneous = false;
    std::optional<long> failing_degree;
    std::vector<LemmaComponentRow> rows;
};

// The homogeneous-component lemma: the cofactor of a Darboux polynomial
// of a degree-(s-1) homogeneous derivation is zero or homogeneous of
// degree s-1, and every homogeneous component of f is Darboux with the
// same cofactor.
LemmaReport check_lemma_components(const MonomialDerivation &d, const QPolynomial &f,
                                   const QPolynomial &lambda);

struct WitnessRecord {
    DarbouxPair pair;
    int found_degree = 0;
    OrbitWitness orbit;
};

struct Certificate {
    MonomialDerivation derivation;
    RationalMatrix exponent_matrix;
    Rational wd;
    std::optional<int> image_degree; // s when homogeneous
    CyclotomicDetection detection;
    std::optional<CyclotomicPartition> certified_partition;
    std::optional<CyclotomicStructure> structure;
    std::optional<ConjugationReport> conjugation;
    std::optional<LambdaReport> lambda_cert;
    std::optional<SearchReport> search;
    std::optional<WitnessRecord> witness;
    std::vector<std::string> notes;

    bool structure_certified() const {
        return structure && conjugation && conjugation->ok && lambda_cert && lambda_cert->ok;
    }
    bool any_undecided() const { return search && search->any_undecided(); }
};

struct PipelineOptions {
    std::optional<int> requested_k; // certify this k instead of the detected maximum
    SearchConfig search;
};

Certificate theorem_pipeline(const MonomialDerivation &d, int max_degree,
                             const PipelineOptions &options = {});

} // namespace cyclo

#endif
