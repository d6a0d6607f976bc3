/*
 * derivation.hpp
 * --------------
 * Monomial derivations d(x_i) = c_i * X^{alpha_i}: application via the
 * Leibniz rule, homogeneity, the exponent matrix A = [alpha_ij] - I and
 * its determinant w_d, cyclic block-partition detection, direct sums,
 * and the standard generators.
 */
#ifndef CYCLO_DERIVATION_HPP
#define CYCLO_DERIVATION_HPP

#include <optional>
#include <vector>

#include "cyclo/linalg.hpp"
#include "cyclo/polynomial.hpp"

namespace cyclo {

struct MonomialImage {
    Rational coeff;       // nonzero
    ExponentVector expo;  // may be all-zero (constant monomial)
};

class MonomialDerivation {
  public:
    MonomialDerivation(ContextPtr ctx, std::vector<MonomialImage> images);

    const ContextPtr &context() const { return ctx_; }
    const std::vector<MonomialImage> &images() const { return images_; }
    const MonomialImage &image(int var) const { return images_[static_cast<size_t>(var)]; }
    int arity() const { return ctx_->arity(); }

    bool unit_coefficients() const;
    QPolynomial image_poly(int var) const;

  private:
    ContextPtr ctx_;
    std::vector<MonomialImage> images_;
};

QPolynomial apply(const MonomialDerivation &d, const QPolynomial &p);
// d extended coefficient-linearly to Q(zeta_N)[S].
CPolynomial apply(const MonomialDerivation &d, const CPolynomial &p, const FieldPtr &f);

// s - 1 when every image is a monomial of the same total degree s; nullopt
// otherwise.
std::optional<int> homogeneity_degree(const MonomialDerivation &d);

struct ExponentMatrixResult {
    RationalMatrix A;
    Rational wd;
    bool unit_coefficients; // the matrix ignores coefficients; callers may warn
};
ExponentMatrixResult exponent_matrix_and_wd(const MonomialDerivation &d);

struct CyclotomicPartition {
    int k = 0;
    std::vector<int> classes; // per variable, in 1..k
    std::vector<int> sizes;   // t_1..t_k

    std::vector<std::vector<int>> members() const; // variable indices per class
};

// Literal re-check of d(S_i) subseteq K[S_{i+1 mod k}] on every image.
bool partition_valid(const MonomialDerivation &d, const CyclotomicPartition &p);

struct CyclotomicDetection {
    long discrepancy_gcd = 0;         // 0 = unconstrained
    std::vector<int> feasible_k;      // descending
    std::optional<CyclotomicPartition> partition; // for the largest feasible k
};

CyclotomicDetection detect_cyclotomic(const MonomialDerivation &d);
std::optional<CyclotomicPartition> detect_cyclotomic_partition(const MonomialDerivation &d);
std::optional<CyclotomicPartition> partition_for_k(const MonomialDerivation &d, int k);

// Disjoint variable sets; the result restricts to each summand.
MonomialDerivation direct_sum(const MonomialDerivation &a, const MonomialDerivation &b);

// d(x_1)=x_2^s, ..., d(x_n)=x_1^s with unit coefficients.
MonomialDerivation gen_jouanolou(int n, int s);

// Block-cyclic derivation from partition sizes and per-class exponent
// tables: tables[i][j] has t_{i+1 mod k} entries, the image exponents of
// the j-th variable of class i+1. Variables are named x<i>_<j>.
MonomialDerivation gen_generalized_cyclotomic(const std::vector<int> &sizes,
                                              const std::vector<std::vector<std::vector<int>>> &tables);

} // namespace cyclo

#endif
