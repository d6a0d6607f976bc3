/*
 * dsl.hpp
 * -------
 * Text format for derivations and polynomials.
 *
 *   vars x, y, z, w;
 *   d(x) = w^2;
 *   d(y) = z*w;
 *   d(z) = y^2;
 *   d(w) = x*y;
 *
 * Images are single monomials with an optional rational coefficient;
 * "1" is the constant monomial. '#' starts a comment to end of line.
 * Polynomial expressions (for --f/--lambda) are sums of such terms.
 */
#ifndef CYCLO_DSL_HPP
#define CYCLO_DSL_HPP

#include <stdexcept>
#include <string>

#include "cyclo/derivation.hpp"

namespace cyclo {

class ParseError : public std::runtime_error {
  public:
    ParseError(const std::string &message, int line, int col)
        : std::runtime_error(message + " (line " + std::to_string(line) + ", column " +
                             std::to_string(col) + ")"),
          line_(line), col_(col) {}
    int line() const { return line_; }
    int col() const { return col_; }

  private:
    int line_, col_;
};

MonomialDerivation parse_derivation_spec(const std::string &text);
std::string print_derivation_spec(const MonomialDerivation &d);

QPolynomial parse_polynomial(const std::string &text, const ContextPtr &ctx);

} // namespace cyclo

#endif
