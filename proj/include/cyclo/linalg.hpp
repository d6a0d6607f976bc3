/*
 * linalg.hpp
 * ----------
 * Exact dense linear algebra over Q: fraction-free determinant, nullspace
 * bases in reduced echelon parameterization, characteristic polynomials,
 * and rational root extraction.
 */
#ifndef CYCLO_LINALG_HPP
#define CYCLO_LINALG_HPP

#include <vector>

#include "cyclo/rational.hpp"
#include "cyclo/upoly.hpp"

namespace cyclo {

class RationalMatrix {
  public:
    RationalMatrix() : rows_(0), cols_(0) {}
    RationalMatrix(int rows, int cols)
        : rows_(rows), cols_(cols), entries_(static_cast<size_t>(rows) * cols) {}

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    Rational &at(int i, int j) { return entries_[static_cast<size_t>(i) * cols_ + j]; }
    const Rational &at(int i, int j) const { return entries_[static_cast<size_t>(i) * cols_ + j]; }

    static RationalMatrix identity(int n);
    RationalMatrix operator-(const RationalMatrix &o) const;
    RationalMatrix operator*(const RationalMatrix &o) const;
    bool operator==(const RationalMatrix &o) const = default;

    // Appends the rows of o (same column count).
    void stackimpl(const RationalMatrix &o);

  private:
    int rows_, cols_;
    std::vector<Rational> entries_;
};

RationalMatrix vstack(const RationalMatrix &a, const RationalMatrix &b);

// Bareiss fraction-free elimination with first-nonzero pivoting; exact.
Rational determinant(const RationalMatrix &m);

// Basis of {v : Mv = 0}, one vector per free column in ascending column
// order, each normalized with 1 in its free coordinate.
std::vector<std::vector<Rational>> nullspace(const RationalMatrix &m);

int rank(const RationalMatrix &m);

// det(tI - M) via the Faddeev-LeVerrier recurrence; monic of degree n.
QPoly char_poly(const RationalMatrix &m);

// All rational roots with multiplicity, ascending. p must be nonzero.
std::vector<Rational> rational_roots(const QPoly &p);

} // namespace cyclo

#endif
