#include "cyclo/rational.hpp"

namespace cyclo {

Rational Rational::from_string(const std::string &text) {
    auto slash = text.find('/');
    try {
        if (slash == std::string::npos) {
            return Rational(mpz_class(text));
        }
        mpz_class num(text.substr(0, slash));
        mpz_class den(text.substr(slash + 1));
        return Rational(num, den);
    } catch (const std::invalid_argument &) {
        throw std::invalid_argument("Rational: cannot parse '" + text + "'");
    }
}

Rational Rational::pow(long e) const {
    if (e < 0) return inverse().pow(-e);
    mpz_class num, den;
    mpz_pow_ui(num.get_mpz_t(), numerator().get_mpz_t(), static_cast<unsigned long>(e));
    mpz_pow_ui(den.get_mpz_t(), denominator().get_mpz_t(), static_cast<unsigned long>(e));
    return Rational(num, den);
}

std::string Rational::str() const {
    if (is_integer()) return numerator().get_str();
    return numerator().get_str() + "/" + denominator().get_str();
}

} // namespace cyclo
