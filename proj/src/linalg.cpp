#include "cyclo/linalg.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace cyclo {

RationalMatrix RationalMatrix::identity(int n) {
    RationalMatrix m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = Rational(1);
    return m;
}

RationalMatrix RationalMatrix::operator-(const RationalMatrix &o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_)
        throw std::invalid_argument("RationalMatrix: dimension mismatch in subtraction");
    RationalMatrix out(rows_, cols_);
    for (size_t i = 0; i < entries_.size(); ++i) out.entries_[i] = entries_[i] - o.entries_[i];
    return out;
}

RationalMatrix RationalMatrix::operator*(const RationalMatrix &o) const {
    if (cols_ != o.rows_) throw std::invalid_argument("RationalMatrix: dimension mismatch in product");
    RationalMatrix out(rows_, o.cols_);
    for (int i = 0; i < rows_; ++i)
        for (int k = 0; k < cols_; ++k) {
            if (at(i, k).is_zero()) continue;
            for (int j = 0; j < o.cols_; ++j) out.at(i, j) += at(i, k) * o.at(k, j);
        }
    return out;
}

void RationalMatrix::stackimpl(const RationalMatrix &o) {
    if (cols_ != o.cols_) throw std::invalid_argument("RationalMatrix: column mismatch in stack");
    entries_.insert(entries_.end(), o.entries_.begin(), o.entries_.end());
    rows_ += o.rows_;
}

RationalMatrix vstack(const RationalMatrix &a, const RationalMatrix &b) {
    RationalMatrix out = a;
    out.stackimpl(b);
    return out;
}

Rational determinant(const RationalMatrix &m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("determinant: matrix not square");
    int n = m.rows();
    if (n == 0) return Rational(1);

    // Clear denominators per row, then run integer Bareiss.
    std::vector<std::vector<mpz_class>> a(static_cast<size_t>(n), std::vector<mpz_class>(static_cast<size_t>(n)));
    Rational scale(1);
    for (int i = 0; i < n; ++i) {
        mpz_class l(1);
        for (int j = 0; j < n; ++j) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), m.at(i, j).denominator().get_mpz_t());
        scale = scale * Rational(l);
        for (int j = 0; j < n; ++j) {
            const Rational &r = m.at(i, j);
            a[i][j] = r.numerator() * (l / r.denominator());
        }
    }

    int sign = 1;
    mpz_class prev(1);
    for (int k = 0; k < n - 1; ++k) {
        int pivot = -1;
        for (int r = k; r < n; ++r)
            if (a[r][k] != 0) { pivot = r; break; }
        if (pivot < 0) return Rational(0);
        if (pivot != k) {
            std::swap(a[pivot], a[k]);
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i) {
            for (int j = k + 1; j < n; ++j) {
                mpz_class num = a[k][k] * a[i][j] - a[i][k] * a[k][j];
                mpz_divexact(a[i][j].get_mpz_t(), num.get_mpz_t(), prev.get_mpz_t());
            }
            a[i][k] = 0;
        }
        prev = a[k][k];
    }
    Rational det(a[static_cast<size_t>(n) - 1][static_cast<size_t>(n) - 1]);
    if (sign < 0) det = -det;
    return det / scale;
}

namespace {

// Reduced row echelon form in place; returns pivot column per pivot row.
std::vector<int> rref(RationalMatrix &m) {
    std::vector<int> pivots;
    int row = 0;
    for (int col = 0; col < m.cols() && row < m.rows(); ++col) {
        int pivot = -1;
        for (int r = row; r < m.rows(); ++r)
            if (!m.at(r, col).is_zero()) { pivot = r; break; }
        if (pivot < 0) continue;
        if (pivot != row)
            for (int j = 0; j < m.cols(); ++j) std::swap(m.at(pivot, j), m.at(row, j));
        Rational inv = m.at(row, col).inverse();
        for (int j = col; j < m.cols(); ++j) m.at(row, j) *= inv;
        for (int r = 0; r < m.rows(); ++r) {
            if (r == row || m.at(r, col).is_zero()) continue;
            Rational factor = m.at(r, col);
            for (int j = col; j < m.cols(); ++j) m.at(r, j) -= factor * m.at(row, j);
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

} // namespace

std::vector<std::vector<Rational>> nullspace(const RationalMatrix &m) {
    RationalMatrix r = m;
    std::vector<int> pivots = rref(r);
    std::vector<bool> is_pivot(static_cast<size_t>(m.cols()), false);
    for (int c : pivots) is_pivot[static_cast<size_t>(c)] = true;

    std::vector<std::vector<Rational>> basis;
    for (int free = 0; free < m.cols(); ++free) {
        if (is_pivot[static_cast<size_t>(free)]) continue;
        std::vector<Rational> v(static_cast<size_t>(m.cols()));
        v[static_cast<size_t>(free)] = Rational(1);
        for (size_t pr = 0; pr < pivots.size(); ++pr)
            v[static_cast<size_t>(pivots[pr])] = -r.at(static_cast<int>(pr), free);
        basis.push_back(std::move(v));
    }
    return basis;
}

int rank(const RationalMatrix &m) {
    RationalMatrix r = m;
    return static_cast<int>(rref(r).size());
}

QPoly char_poly(const RationalMatrix &m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("char_poly: matrix not square");
    int n = m.rows();
    QPoly p(static_cast<size_t>(n) + 1);
    p[static_cast<size_t>(n)] = Rational(1);
    if (n == 0) return p;

    RationalMatrix mk = m;
    for (int k = 1; k <= n; ++k) {
        Rational trace;
        for (int i = 0; i < n; ++i) trace += mk.at(i, i);
        Rational ck = -(trace / Rational(k));
        p[static_cast<size_t>(n - k)] = ck;
        if (k == n) break;
        for (int i = 0; i < n; ++i) mk.at(i, i) += ck;
        mk = m * mk;
    }
    return p;
}

namespace {

mpz_class pollard_brent(const mpz_class &n, unsigned long seed) {
    // Brent's cycle variant; n must be composite and odd.
    mpz_class y(seed % 7 + 2), c(seed % 11 + 1), m(128), g(1), r(1), q(1), x, ys;
    while (g == 1) {
        x = y;
        for (mpz_class i = 0; i < r; ++i) y = (y * y + c) % n;
        mpz_class k(0);
        while (k < r && g == 1) {
            ys = y;
            mpz_class limit = std::min(m, mpz_class(r - k));
            for (mpz_class i = 0; i < limit; ++i) {
                y = (y * y + c) % n;
                q = q * abs(x - y) % n;
            }
            g = gcd(q, n);
            k += m;
        }
        r *= 2;
    }
    if (g == n) {
        do {
            ys = (ys * ys + c) % n;
            g = gcd(abs(x - ys), n);
        } while (g == 1);
    }
    return g;
}

void factor_into(const mpz_class &value, std::map<mpz_class, int> &factors) {
    mpz_class n = value;
    if (n <= 1) return;
    for (long p : {2L, 3L, 5L, 7L, 11L, 13L, 17L, 19L, 23L, 29L, 31L, 37L}) {
        while (n % p == 0) {
            ++factors[mpz_class(p)];
            n /= p;
        }
    }
    // trial division for small factors
    for (mpz_class p(41); p * p <= n && p < 100000; p += 2) {
        while (n % p == 0) {
            ++factors[p];
            n /= p;
        }
    }
    if (n == 1) return;
    if (mpz_probab_prime_p(n.get_mpz_t(), 30)) {
        ++factors[n];
        return;
    }
    unsigned long seed = 1;
    mpz_class d = pollard_brent(n, seed);
    while (d == n) d = pollard_brent(n, ++seed);
    factor_into(d, factors);
    factor_into(n / d, factors);
}

std::vector<mpz_class> positive_divisors(const mpz_class &value) {
    mpz_class v = abs(value);
    if (v == 0) throw std::logic_error("positive_divisors: zero input");
    std::map<mpz_class, int> factors;
    factor_into(v, factors);
    std::vector<mpz_class> divisors{mpz_class(1)};
    for (const auto &[prime, mult] : factors) {
        size_t base = divisors.size();
        mpz_class power(1);
        for (int e = 1; e <= mult; ++e) {
            power *= prime;
            for (size_t i = 0; i < base; ++i) divisors.push_back(divisors[i] * power);
        }
    }
    std::sort(divisors.begin(), divisors.end());
    return divisors;
}

} // namespace

std::vector<Rational> rational_roots(const QPoly &p) {
    QPoly q = p;
    qtrim(q);
    if (q.empty()) throw std::invalid_argument("rational_roots: zero polynomial");

    std::vector<Rational> roots;
    size_t low = 0;
    while (low < q.size() && q[low].is_zero()) ++low;
    for (size_t i = 0; i < low; ++i) roots.emplace_back(0);
    q.erase(q.begin(), q.begin() + static_cast<long>(low));

    if (qdegree(q) >= 1) {
        // Squarefree part first: much smaller degree and coefficients for the
        // divisor enumeration; multiplicities recovered by deflating q.
        QPoly sf = q;
        QPoly gq = qgcd(q, qderivative(q));
        if (qdegree(gq) >= 1) sf = qdivmod(q, gq).first;

        // Primitive integer form of the squarefree part.
        mpz_class l(1);
        for (const auto &c : sf) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.denominator().get_mpz_t());
        std::vector<mpz_class> z;
        z.reserve(sf.size());
        mpz_class content(0);
        for (const auto &c : sf) {
            z.push_back(c.numerator() * (l / c.denominator()));
            mpz_gcd(content.get_mpz_t(), content.get_mpz_t(), z.back().get_mpz_t());
        }
        for (auto &c : z) c /= content;
        QPoly zq;
        for (const auto &c : z) zq.emplace_back(c);

        for (const mpz_class &num : positive_divisors(z.front())) {
            for (const mpz_class &den : positive_divisors(z.back())) {
                mpz_class g;
                mpz_gcd(g.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
                if (g != 1) continue;
                for (int sign : {1, -1}) {
                    Rational candidate(sign * num, den);
                    if (!qeval(zq, candidate).is_zero()) continue;
                    QPoly rem = q;
                    QPoly linear{-candidate, Rational(1)};
                    while (true) {
                        auto [quo, r] = qdivmod(rem, linear);
                        if (!qis_zero(r)) break;
                        roots.push_back(candidate);
                        rem = quo;
                        if (rem.size() <= 1) break;
                    }
                }
            }
        }
    }
    std::sort(roots.begin(), roots.end());
    return roots;
}

} // namespace cyclo
