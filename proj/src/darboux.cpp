#include "cyclo/darboux.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

namespace cyclo {

std::string status_name(SearchStatus s) {
    switch (s) {
        case SearchStatus::None: return "NONE";
        case SearchStatus::Found: return "FOUND";
        case SearchStatus::Undecided: return "UNDECIDED";
    }
    return "?";
}

bool SearchReport::any_undecided() const {
    for (const auto &e : entries)
        if (e.status == SearchStatus::Undecided) return true;
    return false;
}

bool SearchReport::any_found() const {
    for (const auto &e : entries)
        if (!e.pairs.empty()) return true;
    return false;
}

namespace {

int image_degree_checked(const MonomialDerivation &d) {
    auto h = homogeneity_degree(d);
    if (!h) throw std::invalid_argument("darboux search: derivation is not homogeneous");
    int s = *h + 1;
    if (s < 1) throw std::invalid_argument("darboux search: constant images are unsupported");
    return s;
}

using RowIndex = std::map<ExponentVector, int, GrlexDescending>;

RowIndex index_of(const std::vector<ExponentVector> &basis) {
    RowIndex idx;
    for (size_t i = 0; i < basis.size(); ++i) idx.emplace(basis[i], static_cast<int>(i));
    return idx;
}

QPolynomial from_coefficient_vector(const ContextPtr &ctx,
                                    const std::vector<ExponentVector> &basis,
                                    const std::vector<Rational> &v) {
    QPolynomial p(ctx);
    for (size_t i = 0; i < basis.size(); ++i) p.add_term(basis[i], v[i]);
    return p;
}

QPolynomial monic(const QPolynomial &p) {
    if (p.is_zero()) return p;
    return p * p.leading_term().second.inverse();
}

std::string pair_key(const DarbouxPair &pr) { return pr.cofactor.str() + " | " + pr.f.str(); }

void sort_pairs(std::vector<DarbouxPair> &pairs) {
    std::sort(pairs.begin(), pairs.end(), [](const DarbouxPair &a, const DarbouxPair &b) {
        return pair_key(a) < pair_key(b);
    });
}

} // namespace

RationalMatrix derivation_matrix(const MonomialDerivation &d, int m) {
    if (m < 1) throw std::invalid_argument("derivation_matrix: degree must be >= 1");
    int s = image_degree_checked(d);
    auto cols = monomial_basis(d.arity(), m);
    auto rows = monomial_basis(d.arity(), m + s - 1);
    RowIndex row_idx = index_of(rows);

    RationalMatrix M(static_cast<int>(rows.size()), static_cast<int>(cols.size()));
    for (size_t j = 0; j < cols.size(); ++j) {
        QPolynomial image = apply(d, QPolynomial::monomial(d.context(), cols[j], Rational(1)));
        for (const auto &[e, c] : image.terms()) M.at(row_idx.at(e), static_cast<int>(j)) = c;
    }
    return M;
}

std::vector<DarbouxPair> monomial_cofactor_search(const MonomialDerivation &d, int m) {
    int s = image_degree_checked(d);
    if (m < 1) throw std::invalid_argument("monomial_cofactor_search: degree must be >= 1");
    const ContextPtr &ctx = d.context();
    auto cols = monomial_basis(d.arity(), m);
    auto rows = monomial_basis(d.arity(), m + s - 1);
    RowIndex row_idx = index_of(rows);
    RationalMatrix M = derivation_matrix(d, m);
    int D = static_cast<int>(cols.size());

    std::vector<DarbouxPair> pairs;
    std::set<std::string> seen;
    auto emit = [&](const QPolynomial &f, const QPolynomial &lambda) {
        DarbouxPair pr{monic(f), lambda};
        if (!verify_darboux(d, pr.f, pr.cofactor))
            throw std::logic_error("monomial_cofactor_search: candidate failed re-verification");
        if (seen.insert(pair_key(pr)).second) pairs.push_back(std::move(pr));
    };

    // Zero cofactor: the kernel of M_d.
    for (const auto &v : nullspace(M))
        emit(from_coefficient_vector(ctx, cols, v), QPolynomial::zero(ctx));

    for (const auto &mu : monomial_basis(d.arity(), s - 1)) {
        // Split rows into the shifted copies nu+mu and the rest.
        std::vector<bool> is_shift(rows.size(), false);
        RationalMatrix E(D, D);
        for (int i = 0; i < D; ++i) {
            int r = row_idx.at(exp_add(cols[static_cast<size_t>(i)], mu));
            is_shift[static_cast<size_t>(r)] = true;
            for (int j = 0; j < D; ++j) E.at(i, j) = M.at(r, j);
        }
        RationalMatrix rest(0, D);
        for (size_t r = 0; r < rows.size(); ++r) {
            if (is_shift[r]) continue;
            RationalMatrix row(1, D);
            for (int j = 0; j < D; ++j) row.at(0, j) = M.at(static_cast<int>(r), j);
            rest.stackimpl(row);
        }

        std::vector<Rational> eigen = rational_roots(char_poly(E));
        eigen.erase(std::unique(eigen.begin(), eigen.end()), eigen.end());
        for (const Rational &c : eigen) {
            if (c.is_zero()) continue; // cofactor 0*mu is the zero-cofactor case above
            RationalMatrix shifted = E;
            for (int i = 0; i < D; ++i) shifted.at(i, i) -= c;
            RationalMatrix system = rest.rows() > 0 ? vstack(shifted, rest) : shifted;
            for (const auto &v : nullspace(system))
                emit(from_coefficient_vector(ctx, cols, v),
                     QPolynomial::monomial(ctx, mu, c));
        }
    }
    sort_pairs(pairs);
    return pairs;
}

namespace {

// ---- general cofactor search: a small exact case-splitting solver ----
//
// Unknowns: the coefficients a_nu of f over monomial_basis(m), then the
// coefficients c_gamma of lambda over monomial_basis(s-1). Equations are
// polynomials over the unknowns (one per monomial of degree m+s-1).

struct SolverLayout {
    ContextPtr unknown_ctx;
    int num_a = 0;
    int num_c = 0;
    std::vector<ExponentVector> a_basis; // monomials of f
    std::vector<ExponentVector> c_basis; // monomials of lambda
};

// Coefficients of p viewed as univariate in `var`, constants in the other
// unknowns; index = degree in var.
std::vector<QPolynomial> coefficients_in(const QPolynomial &p, int var) {
    int deg = 0;
    for (const auto &[e, c] : p.terms()) deg = std::max(deg, e[static_cast<size_t>(var)]);
    std::vector<QPolynomial> out(static_cast<size_t>(deg) + 1, QPolynomial::zero(p.context()));
    for (const auto &[e, c] : p.terms()) {
        ExponentVector red = e;
        int k = red[static_cast<size_t>(var)];
        red[static_cast<size_t>(var)] = 0;
        out[static_cast<size_t>(k)].add_term(red, c);
    }
    return out;
}

QPolynomial primitive_scaled(const QPolynomial &p);
int degree_in(const QPolynomial &p, int var);

// Pseudo-remainder of f by g with respect to `var`: lc_var(g)^k f - q g,
// an element of the ideal (f, g) with strictly smaller var-degree.
QPolynomial pseudo_remainder(const QPolynomial &f, const QPolynomial &g, int var) {
    int dg = degree_in(g, var);
    std::vector<QPolynomial> gc = coefficients_in(g, var);
    const QPolynomial &lcg = gc[static_cast<size_t>(dg)];
    QPolynomial r = f;
    while (!r.is_zero()) {
        int dr = degree_in(r, var);
        if (dr < dg) break;
        std::vector<QPolynomial> rc = coefficients_in(r, var);
        ExponentVector shift(static_cast<size_t>(r.context()->arity()));
        shift[static_cast<size_t>(var)] = dr - dg;
        r = r * lcg -
            g * rc[static_cast<size_t>(dr)] *
                QPolynomial::monomial(r.context(), shift, Rational(1));
        r = primitive_scaled(r);
    }
    return r;
}

// Pseudo-remainder chain in `var`; every element lies in the ideal (a, b),
// so the final var-free element vanishes on every common zero. Returns zero
// when the chain degenerates (a, b share a factor involving var) or the
// intermediate polynomials blow up.
QPolynomial eliminate_unknown(const QPolynomial &a, const QPolynomial &b, int var) {
    QPolynomial f = a, g = b;
    if (degree_in(f, var) < degree_in(g, var)) std::swap(f, g);
    while (true) {
        if (degree_in(g, var) == 0) return g;
        QPolynomial r = pseudo_remainder(f, g, var);
        if (r.is_zero()) return r;
        if (r.term_count() > 2000) return QPolynomial::zero(a.context()); // growth guard
        f = std::move(g);
        g = std::move(r);
    }
}

QPolynomial substitute(const QPolynomial &p, int var, const QPolynomial &repl) {
    QPolynomial out(p.context());
    for (const auto &[e, c] : p.terms()) {
        int power = e[static_cast<size_t>(var)];
        if (power == 0) {
            out.add_term(e, c);
            continue;
        }
        ExponentVector base = e;
        base[static_cast<size_t>(var)] = 0;
        out = out + QPolynomial::monomial(p.context(), base, c) * repl.pow(power);
    }
    return out;
}

// Integer-primitive scaling with positive leading coefficient; keeps the
// coefficient growth of long elimination chains in check.
QPolynomial primitive_scaled(const QPolynomial &p) {
    if (p.is_zero()) return p;
    mpz_class l(1);
    for (const auto &[e, c] : p.terms())
        mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.denominator().get_mpz_t());
    mpz_class g(0);
    for (const auto &[e, c] : p.terms()) {
        mpz_class num = c.numerator() * (l / c.denominator());
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), num.get_mpz_t());
    }
    Rational scale(l, g);
    if (p.leading_term().second.sign() < 0) scale = -scale;
    return p * scale;
}

std::set<int> unknown_support(const QPolynomial &p) {
    std::set<int> vars;
    for (const auto &[e, c] : p.terms())
        for (size_t i = 0; i < e.size(); ++i)
            if (e[i] > 0) vars.insert(static_cast<int>(i));
    return vars;
}

int degree_in(const QPolynomial &p, int var) {
    int deg = 0;
    for (const auto &[e, c] : p.terms()) deg = std::max(deg, e[static_cast<size_t>(var)]);
    return deg;
}

QPolynomial multi_gcd(QPolynomial a, QPolynomial b);

// Normal form of p under leading-term division by the equations in gs
// (index `skip` excluded); p and the result generate the same ideal
// together with gs, so replacing p by it never changes the zero set.
QPolynomial normal_form(const QPolynomial &input, const std::vector<QPolynomial> &gs, size_t skip) {
    QPolynomial p = input;
    QPolynomial remainder(p.context());
    long steps = 0;
    while (!p.is_zero()) {
        if (++steps > 1000 || p.term_count() > 3000) return input; // reduction too costly
        const auto &[lt_e, lt_c] = p.leading_term();
        bool reduced = false;
        for (size_t k = 0; k < gs.size(); ++k) {
            if (k == skip || gs[k].is_zero()) continue;
            const auto &[ge, gc] = gs[k].leading_term();
            if (!exp_divides(ge, lt_e)) continue;
            p = p - gs[k] * QPolynomial::monomial(p.context(), exp_sub(lt_e, ge),
                                                  lt_c * coeff::inverse(gc));
            reduced = true;
            break;
        }
        if (!reduced) {
            remainder.add_term(lt_e, lt_c);
            p = p - QPolynomial::monomial(p.context(), lt_e, lt_c);
        }
    }
    return remainder;
}

// gcd of the coefficient polynomials of p viewed as univariate in var.
QPolynomial content_in(const QPolynomial &p, int var) {
    QPolynomial cont = QPolynomial::zero(p.context());
    for (auto &ck : coefficients_in(p, var))
        if (!ck.is_zero()) cont = multi_gcd(cont, ck);
    return cont;
}

// Multivariate gcd over Q by the primitive pseudo-remainder chain; the
// result is integer-primitive with positive leading coefficient.
QPolynomial multi_gcd(QPolynomial a, QPolynomial b) {
    if (a.is_zero()) return b.is_zero() ? b : primitive_scaled(b);
    if (b.is_zero()) return primitive_scaled(a);
    a = primitive_scaled(a);
    b = primitive_scaled(b);
    auto one = [&] { return QPolynomial::constant(a.context(), Rational(1)); };
    if (a.is_constant() || b.is_constant()) return one();

    std::set<int> sa = unknown_support(a), sb = unknown_support(b);
    int u = -1;
    for (int v : sa)
        if (sb.count(v)) {
            u = v;
            break;
        }
    if (u < 0) return one(); // disjoint supports: only unit common divisors

    QPolynomial ca = content_in(a, u), cb = content_in(b, u);
    QPolynomial gc = multi_gcd(ca, cb);
    QPolynomial f = *divide_exact(a, ca);
    QPolynomial g = *divide_exact(b, cb);
    if (degree_in(f, u) < degree_in(g, u)) std::swap(f, g);
    while (true) {
        if (degree_in(g, u) == 0) return primitive_scaled(gc); // coprime primitive parts
        QPolynomial r = pseudo_remainder(f, g, u);
        if (r.is_zero()) {
            QPolynomial ppg = *divide_exact(g, content_in(g, u));
            return primitive_scaled(gc * ppg);
        }
        f = std::move(g);
        g = *divide_exact(r, content_in(r, u));
    }
}

// sqrt of a monomial c*X^e when it exists: even exponents, square rational.
std::optional<std::pair<ExponentVector, Rational>> monomial_sqrt(const ExponentVector &e,
                                                                 const Rational &c) {
    if (c.sign() < 0) return std::nullopt;
    ExponentVector half(e.size());
    for (size_t i = 0; i < e.size(); ++i) {
        if (e[i] % 2 != 0) return std::nullopt;
        half[i] = e[i] / 2;
    }
    mpz_class num_root, den_root;
    if (!mpz_perfect_square_p(c.numerator().get_mpz_t()) ||
        !mpz_perfect_square_p(c.denominator().get_mpz_t()))
        return std::nullopt;
    mpz_sqrt(num_root.get_mpz_t(), c.numerator().get_mpz_t());
    mpz_sqrt(den_root.get_mpz_t(), c.denominator().get_mpz_t());
    return std::make_pair(half, Rational(num_root, den_root));
}

// (A + B)^2 or (A - B)^2 with monomial A, B collapses to the linear form.
std::optional<QPolynomial> perfect_square_root(const QPolynomial &p) {
    if (p.term_count() != 3) return std::nullopt;
    auto it = p.terms().begin();
    const auto &[e1, c1] = *it++;
    const auto &[e2, c2] = *it++;
    const auto &[e3, c3] = *it;
    auto a = monomial_sqrt(e1, c1);
    auto b = monomial_sqrt(e3, c3);
    if (!a || !b) return std::nullopt;
    if (exp_add(a->first, b->first) != e2) return std::nullopt;
    Rational cross = a->second * b->second * Rational(2);
    int sign;
    if (c2 == cross) sign = 1;
    else if (c2 == -cross) sign = -1;
    else return std::nullopt;
    QPolynomial root(p.context());
    root.add_term(a->first, a->second);
    root.add_term(b->first, sign > 0 ? b->second : -b->second);
    return root;
}

bool constant_value(const QPolynomial &p, Rational &out) {
    if (p.is_zero()) {
        out = Rational(0);
        return true;
    }
    if (p.is_constant()) {
        out = p.terms().begin()->second;
        return true;
    }
    return false;
}

struct Branch {
    std::vector<QPolynomial> equations;     // pure cofactor system under work
    std::vector<QPolynomial> ground;        // the untransformed system it came from
    std::vector<QPolynomial> assumptions;   // pivots presumed nonzero; their zero loci
                                            // are explored by sibling branches
    std::map<int, QPolynomial> assignments; // unknown -> expression in free unknowns
    std::string origin;                     // pivot description for residual output
    int elim_budget = 0;                    // triangularization rounds left
    int retighten_budget = 0;               // re-checks against the ground system left
};

class GeneralSearch {
  public:
    GeneralSearch(const MonomialDerivation &d, int m, const SearchConfig &config)
        : d_(d), m_(m), config_(config), s_(image_degree_checked(d)) {
        layout_.a_basis = monomial_basis(d.arity(), m);
        layout_.c_basis = monomial_basis(d.arity(), s_ - 1);
        layout_.num_a = static_cast<int>(layout_.a_basis.size());
        layout_.num_c = static_cast<int>(layout_.c_basis.size());
        std::vector<std::string> names;
        for (const auto &e : layout_.a_basis)
            names.push_back("a(" + QPolynomial::monomial(d.context(), e, Rational(1)).str() + ")");
        for (const auto &e : layout_.c_basis)
            names.push_back("c(" + QPolynomial::monomial(d.context(), e, Rational(1)).str() + ")");
        layout_.unknown_ctx = make_context(std::move(names));
        M_ = derivation_matrix(d, m);
        rows_ = monomial_basis(d.arity(), m + s_ - 1);
        cofactor_index_ = index_of(layout_.c_basis);
    }

    DegreeResult run() {
        DegreeResult result;
        result.degree = m_;

        std::vector<Branch> stack;
        for (int pivot = 0; pivot < layout_.num_a && !capped_; ++pivot)
            reduce_f_coefficients(pivot, stack, result);

        while (!stack.empty() && !capped_) {
            if (!charge(result)) break;
            Branch b = std::move(stack.back());
            stack.pop_back();
            if (!visited_.insert(state_key(b)).second) continue; // identical subtree done
            step(std::move(b), stack, result);
        }

        finalize(result);
        return result;
    }

  private:
    std::string state_key(const Branch &b) const {
        std::vector<std::string> parts;
        for (const auto &eq : b.equations) parts.push_back(eq.str());
        std::sort(parts.begin(), parts.end());
        std::string key;
        for (const auto &[u, expr] : b.assignments) key += std::to_string(u) + "=" + expr.str() + ";";
        key += "|";
        for (const auto &p : parts) key += p + ";";
        key += "|";
        std::vector<std::string> assumed;
        for (const auto &a : b.assumptions) assumed.push_back(a.str());
        std::sort(assumed.begin(), assumed.end());
        for (const auto &p : assumed) key += p + ";";
        key += "|";
        std::vector<std::string> ground;
        for (const auto &g : b.ground) ground.push_back(g.str());
        std::sort(ground.begin(), ground.end());
        for (const auto &p : ground) key += p + ";";
        return key;
    }

    bool charge(DegreeResult &result) {
        if (++branches_used_ <= config_.branch_cap) return true;
        if (!capped_)
            result.undecided_branches.push_back("branch cap " + std::to_string(config_.branch_cap) +
                                                " exhausted; remaining case splits unexplored");
        capped_ = true;
        return false;
    }

    ExponentVector unit_exp(int unknown) const {
        ExponentVector e(static_cast<size_t>(layout_.num_a + layout_.num_c));
        e[static_cast<size_t>(unknown)] = 1;
        return e;
    }

    // ---- phase 1 ----
    //
    // With the pivot coefficient of f normalized to 1, d(f) = lambda f is a
    // linear system over Q[c] in the remaining coefficients of f. Gaussian
    // elimination with exact case splits on non-constant pivot entries
    // reduces each path to a polynomial system in the cofactor coefficients
    // alone. Retired pivot rows are solvable as long as their pivot entry is
    // nonzero; the complementary case is explored by the split, and any
    // ghost cofactors the division assumptions let through are filtered at
    // completion by the exact eigenspace computation.

    struct LinState {
        std::vector<std::vector<QPolynomial>> rows; // width = free a-columns + 1 constant column
        std::vector<QPolynomial> constraints;       // accumulated cofactor equations
        std::vector<QPolynomial> assumptions;       // pivots this path presumes nonzero
        std::vector<size_t> remaining;              // a-columns not yet eliminated
        int cases = 0;
    };

    void row_scale(std::vector<QPolynomial> &row) const {
        mpz_class l(1), g(0);
        for (const auto &entry : row)
            for (const auto &[e, c] : entry.terms()) {
                mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.denominator().get_mpz_t());
            }
        for (const auto &entry : row)
            for (const auto &[e, c] : entry.terms()) {
                mpz_class num = c.numerator() * (l / c.denominator());
                mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), num.get_mpz_t());
            }
        if (g == 0) return;
        Rational scale(l, g);
        for (auto &entry : row) entry = entry * scale;
    }

    void reduce_f_coefficients(int pivot, std::vector<Branch> &out, DegreeResult &result) {
        const ContextPtr &uctx = layout_.unknown_ctx;
        RowIndex a_idx = index_of(layout_.a_basis);
        std::string origin =
            "pivot " +
            QPolynomial::monomial(d_.context(), layout_.a_basis[static_cast<size_t>(pivot)], Rational(1))
                .str();

        size_t width_a = static_cast<size_t>(layout_.num_a - pivot - 1);
        LinState init;
        init.rows.reserve(rows_.size());
        for (size_t r = 0; r < rows_.size(); ++r) {
            std::vector<QPolynomial> row(width_a + 1, QPolynomial::zero(uctx));
            auto entry_for = [&](int a_col) {
                QPolynomial e(uctx);
                const Rational &m = M_.at(static_cast<int>(r), a_col);
                if (!m.is_zero())
                    e.add_term(ExponentVector(static_cast<size_t>(layout_.num_a + layout_.num_c)), m);
                const ExponentVector &nu = layout_.a_basis[static_cast<size_t>(a_col)];
                if (exp_divides(nu, rows_[r])) {
                    ExponentVector gamma = exp_sub(rows_[r], nu);
                    auto it = cofactor_index_.find(gamma);
                    if (it != cofactor_index_.end())
                        e.add_term(unit_exp(layout_.num_a + it->second), Rational(-1));
                }
                return e;
            };
            for (size_t j = 0; j < width_a; ++j)
                row[j] = entry_for(pivot + 1 + static_cast<int>(j));
            row[width_a] = entry_for(pivot); // coefficient of the normalized pivot
            bool nonzero = false;
            for (const auto &e : row) nonzero = nonzero || !e.is_zero();
            if (nonzero) init.rows.push_back(std::move(row));
        }

        for (size_t j = 0; j < width_a; ++j) init.remaining.push_back(j);

        std::vector<LinState> work{std::move(init)};
        while (!work.empty()) {
            if (!charge(result)) return;
            LinState st = std::move(work.back());
            work.pop_back();

            bool dead = false;
            while (!dead) {
                // Sweep rows whose a-part is gone into the constraint set.
                std::vector<std::vector<QPolynomial>> active;
                for (auto &row : st.rows) {
                    bool has_a = false;
                    for (size_t j = 0; j + 1 < row.size(); ++j) has_a = has_a || !row[j].is_zero();
                    if (has_a) {
                        active.push_back(std::move(row));
                        continue;
                    }
                    if (row.back().is_zero()) continue;
                    Rational cval;
                    if (constant_value(row.back(), cval)) {
                        dead = true; // unsatisfiable row
                        break;
                    }
                    st.constraints.push_back(primitive_scaled(row.back()));
                }
                if (dead) break;
                st.rows = std::move(active);

                if (st.rows.empty() || st.remaining.empty()) {
                    Branch leaf;
                    leaf.origin = origin + (st.cases ? " case " + std::to_string(st.cases) : "");
                    std::set<std::string> seen_eqs;
                    for (auto &eq : st.constraints)
                        if (seen_eqs.insert(eq.str()).second) leaf.equations.push_back(eq);
                    leaf.ground = leaf.equations;
                    leaf.assumptions = st.assumptions;
                    leaf.elim_budget = 2 * layout_.num_c + 6;
                    leaf.retighten_budget = layout_.num_c + 4;
                    out.push_back(std::move(leaf));
                    break;
                }

                // Global pivot choice: any constant entry avoids a case
                // split; otherwise fork on the smallest entry available.
                size_t pv = 0, pc = 0;
                bool found = false, pv_constant = false;
                for (size_t c : st.remaining) {
                    for (size_t i = 0; i < st.rows.size(); ++i) {
                        const QPolynomial &entry = st.rows[i][c];
                        if (entry.is_zero()) continue;
                        if (entry.is_constant()) {
                            pv = i;
                            pc = c;
                            found = pv_constant = true;
                            break;
                        }
                        if (!found || entry.term_count() < st.rows[pv][pc].term_count()) {
                            pv = i;
                            pc = c;
                            found = true;
                        }
                    }
                    if (pv_constant) break;
                }
                if (!found) {
                    // No remaining column occurs in any row.
                    st.remaining.clear();
                    continue;
                }

                if (!pv_constant) {
                    // The pivot entry might vanish; explore that locus too.
                    LinState forked = st;
                    forked.rows[pv][pc] = QPolynomial::zero(uctx);
                    forked.constraints.push_back(primitive_scaled(st.rows[pv][pc]));
                    forked.cases = ++st.cases;
                    work.push_back(std::move(forked));
                    st.assumptions.push_back(primitive_scaled(st.rows[pv][pc]));
                }

                const std::vector<QPolynomial> pivot_row = std::move(st.rows[pv]);
                const QPolynomial &p = pivot_row[pc];
                std::vector<std::vector<QPolynomial>> next;
                next.reserve(st.rows.size());
                for (size_t i = 0; i < st.rows.size(); ++i) {
                    if (i == pv) continue;
                    std::vector<QPolynomial> row = std::move(st.rows[i]);
                    const QPolynomial e = row[pc]; // copy: row[pc] is overwritten below
                    if (!e.is_zero()) {
                        for (size_t j = 0; j < row.size(); ++j)
                            row[j] = row[j] * p - pivot_row[j] * e;
                        row_scale(row);
                    }
                    next.push_back(std::move(row));
                }
                st.rows = std::move(next);
                st.remaining.erase(std::find(st.remaining.begin(), st.remaining.end(), pc));
            }
        }
    }

    // The untransformed leaf system under the branch's assignments.
    std::vector<QPolynomial> ground_residual(const Branch &b) const {
        std::vector<QPolynomial> out;
        std::set<std::string> seen;
        for (QPolynomial eq : b.ground) {
            for (const auto &[u, expr] : b.assignments) eq = substitute(eq, u, expr);
            if (eq.is_zero()) continue;
            eq = primitive_scaled(eq);
            if (seen.insert(eq.str()).second) out.push_back(std::move(eq));
        }
        return out;
    }

    // Merge any ground equations the transformed system lost track of;
    // returns true when the branch should keep solving.
    bool retighten(Branch &b) const {
        if (b.retighten_budget <= 0) return false;
        std::set<std::string> current;
        for (const auto &eq : b.equations) current.insert(eq.str());
        bool added = false;
        for (auto &eq : ground_residual(b)) {
            if (current.count(eq.str())) continue;
            b.equations.push_back(std::move(eq));
            added = true;
        }
        if (added) --b.retighten_budget;
        return added;
    }

    Branch assigned(Branch b, int unknown, const QPolynomial &expr) const {
        for (auto &[u, val] : b.assignments) val = substitute(val, unknown, expr);
        std::vector<QPolynomial> eqs;
        eqs.reserve(b.equations.size());
        for (const auto &eq : b.equations) {
            QPolynomial next = substitute(eq, unknown, expr);
            if (!next.is_zero()) eqs.push_back(primitive_scaled(next));
        }
        b.equations = std::move(eqs);
        for (auto &a : b.assumptions) a = substitute(a, unknown, expr);
        b.assignments.emplace(unknown, expr);
        return b;
    }

    void step(Branch b, std::vector<Branch> &stack, DegreeResult &result) {
        const bool debug = getenv("CYCLO_DEBUG") != nullptr;
        long iter = 0;
        while (true) {
            if (debug && ++iter % 1 == 0) {
                size_t terms = 0;
                int maxdeg = 0;
                for (const auto &eq : b.equations) {
                    terms += eq.term_count();
                    maxdeg = std::max<int>(maxdeg, static_cast<int>(eq.degree()));
                }
                fprintf(stderr, "[%s] iter=%ld eqs=%zu terms=%zu maxdeg=%d assigned=%zu budget=%d\n",
                        b.origin.c_str(), iter, b.equations.size(), terms, maxdeg,
                        b.assignments.size(), b.elim_budget);
            }
            // A vanished nonzero-pivot assumption puts this branch on a locus
            // its fork sibling explores.
            for (const auto &a : b.assumptions)
                if (a.is_zero()) return;

            // Dedup and collapse perfect-square trinomials to their roots.
            {
                std::set<std::string> uniq;
                std::vector<QPolynomial> cleaned;
                for (auto &eq : b.equations) {
                    QPolynomial next = eq;
                    while (auto root = perfect_square_root(next)) next = primitive_scaled(*root);
                    if (uniq.insert(next.str()).second) cleaned.push_back(std::move(next));
                }
                b.equations = std::move(cleaned);
            }

            // Inter-reduce the small equations: normal forms modulo the other
            // equations keep the ideal (and zero set) intact while stripping
            // redundancy. Oversized polynomials stay out of it; reducing
            // against them costs more than it saves.
            {
                auto small = [](const QPolynomial &eq) {
                    return eq.degree() <= 16 && eq.term_count() <= 120;
                };
                std::vector<QPolynomial> workset;
                std::vector<size_t> where;
                for (size_t i = 0; i < b.equations.size(); ++i)
                    if (small(b.equations[i])) {
                        workset.push_back(b.equations[i]);
                        where.push_back(i);
                    }
                for (int pass = 0; pass < 4 && !workset.empty(); ++pass) {
                    bool changed = false;
                    for (size_t i = 0; i < workset.size(); ++i) {
                        QPolynomial nf = normal_form(workset[i], workset, i);
                        if (!nf.is_zero()) nf = primitive_scaled(nf);
                        if (!(nf == workset[i]) && small(nf)) {
                            workset[i] = std::move(nf);
                            changed = true;
                        }
                    }
                    if (!changed) break;
                }
                for (size_t i = 0; i < where.size(); ++i) b.equations[where[i]] = workset[i];
                std::erase_if(b.equations, [](const QPolynomial &eq) { return eq.is_zero(); });
            }

            // Contradictions.
            for (const auto &eq : b.equations) {
                Rational c;
                if (constant_value(eq, c) && !c.is_zero()) return; // branch closes empty
            }

            // An equation linear in some unknown with nonzero constant
            // coefficient: solve it and substitute.
            bool progressed = false;
            for (const auto &eq : b.equations) {
                for (int u : unknown_support(eq)) {
                    if (degree_in(eq, u) != 1) continue;
                    QPolynomial coeff(layout_.unknown_ctx), rest(layout_.unknown_ctx);
                    for (const auto &[e, c] : eq.terms()) {
                        if (e[static_cast<size_t>(u)] == 1) {
                            ExponentVector red = e;
                            red[static_cast<size_t>(u)] = 0;
                            coeff.add_term(red, c);
                        } else {
                            rest.add_term(e, c);
                        }
                    }
                    Rational alpha;
                    if (!constant_value(coeff, alpha) || alpha.is_zero()) continue;
                    QPolynomial expr = rest * (-alpha.inverse());
                    b = assigned(std::move(b), u, expr);
                    progressed = true;
                    break;
                }
                if (progressed) break;
            }
            if (progressed) continue;

            // A univariate residual: branch over its rational roots.
            for (size_t i = 0; i < b.equations.size(); ++i) {
                std::set<int> vars = unknown_support(b.equations[i]);
                if (vars.size() != 1) continue;
                int u = *vars.begin();
                QPoly univar;
                for (const auto &[e, c] : b.equations[i].terms()) {
                    size_t deg = static_cast<size_t>(e[static_cast<size_t>(u)]);
                    if (univar.size() <= deg) univar.resize(deg + 1);
                    univar[deg] += c;
                }
                qtrim(univar);
                std::vector<Rational> roots = rational_roots(univar);
                roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
                for (const Rational &r : roots)
                    stack.push_back(assigned(b, u, QPolynomial::constant(layout_.unknown_ctx, r)));
                return; // no rational roots: closes empty
            }

            // A single-term equation: some unknown in it must vanish.
            for (const auto &eq : b.equations) {
                if (eq.term_count() != 1 || eq.is_constant()) continue;
                std::set<int> vars = unknown_support(eq);
                for (int u : vars)
                    stack.push_back(assigned(b, u, QPolynomial::zero(layout_.unknown_ctx)));
                return;
            }

            // A common variable factor u^k splits exactly: u = 0, or the
            // cofactor equation holds.
            for (size_t i = 0; i < b.equations.size(); ++i) {
                const QPolynomial &eq = b.equations[i];
                int u = -1, shared = 0;
                for (int v : unknown_support(eq)) {
                    int min_exp = INT_MAX;
                    for (const auto &[e, c] : eq.terms())
                        min_exp = std::min(min_exp, e[static_cast<size_t>(v)]);
                    if (min_exp >= 1) {
                        u = v;
                        shared = min_exp;
                        break;
                    }
                }
                if (u < 0) continue;
                stack.push_back(assigned(b, u, QPolynomial::zero(layout_.unknown_ctx)));
                Branch quotient = b;
                QPolynomial reduced(layout_.unknown_ctx);
                for (const auto &[e, c] : eq.terms()) {
                    ExponentVector red = e;
                    red[static_cast<size_t>(u)] -= shared;
                    reduced.add_term(red, c);
                }
                quotient.equations[i] = primitive_scaled(reduced);
                stack.push_back(std::move(quotient));
                return;
            }

            // A nontrivial content with respect to one unknown splits the
            // equation into an exact factor pair.
            for (size_t i = 0; i < b.equations.size(); ++i) {
                const QPolynomial &eq = b.equations[i];
                if (eq.is_constant() || eq.term_count() < 2) continue;
                for (int u : unknown_support(eq)) {
                    QPolynomial cont = content_in(eq, u);
                    if (cont.is_constant()) continue;
                    Branch factor = b;
                    factor.equations[static_cast<size_t>(i)] = primitive_scaled(cont);
                    stack.push_back(std::move(factor));
                    Branch prim = b;
                    prim.equations[static_cast<size_t>(i)] = primitive_scaled(*divide_exact(eq, cont));
                    stack.push_back(std::move(prim));
                    return;
                }
            }

            if (b.equations.empty()) {
                if (retighten(b)) continue; // assignments violated the base system
                complete(b, result);
                return;
            }

            // Triangularization round: take the last unknown alive in two or
            // more equations, keep its lowest-degree equation as the pivot,
            // and replace every other occurrence by the u-free consequence of
            // the pseudo-remainder chain. Consequences only enlarge the zero
            // set, so closures stay proofs; candidate cofactors are verified
            // at completion anyway.
            if (b.elim_budget > 0) {
                int total = layout_.num_a + layout_.num_c;
                int target = -1, target_deg = -1;
                size_t target_work = 0;
                for (int u = total - 1; u >= 0; --u) {
                    int occurrences = 0, mindeg = -1;
                    size_t work = 0;
                    for (const auto &eq : b.equations) {
                        int deg = degree_in(eq, u);
                        if (deg > 0) {
                            ++occurrences;
                            work += eq.term_count();
                            if (mindeg < 0 || deg < mindeg) mindeg = deg;
                        }
                    }
                    // cheapest elimination first: lowest degree, then least
                    // touched material
                    if (occurrences >= 2 &&
                        (target < 0 || mindeg < target_deg ||
                         (mindeg == target_deg && work < target_work))) {
                        target = u;
                        target_deg = mindeg;
                        target_work = work;
                    }
                }
                if (target >= 0) {
                    size_t pivot_idx = 0;
                    int best_deg = -1;
                    for (size_t i = 0; i < b.equations.size(); ++i) {
                        int deg = degree_in(b.equations[i], target);
                        if (deg > 0 && (best_deg < 0 || deg < best_deg)) {
                            best_deg = deg;
                            pivot_idx = i;
                        }
                    }
                    std::vector<QPolynomial> next;
                    std::set<std::string> seen_eqs;
                    for (size_t i = 0; i < b.equations.size(); ++i) {
                        QPolynomial eq = b.equations[i];
                        if (i != pivot_idx && degree_in(eq, target) > 0)
                            eq = eliminate_unknown(eq, b.equations[pivot_idx], target);
                        if (eq.is_zero()) continue;
                        eq = primitive_scaled(eq);
                        if (seen_eqs.insert(eq.str()).second) next.push_back(std::move(eq));
                    }
                    b.equations = std::move(next);
                    --b.elim_budget;
                    continue;
                }
            }

            if (retighten(b)) continue; // restore rigidity lost to consequences

            // An assumption that is a multiple of a residual equation
            // vanishes on every remaining zero; the fork sibling covers them.
            for (const auto &a : b.assumptions) {
                if (a.is_constant()) continue;
                for (const auto &eq : b.equations)
                    if (!eq.is_constant() && divide_exact(a, eq)) return;
            }

            // Stuck: emit the residual system verbatim.
            std::string residual = b.origin + ": ";
            for (size_t i = 0; i < b.equations.size(); ++i) {
                if (i) residual += "; ";
                residual += b.equations[i].str() + " = 0";
            }
            if (debug)
                for (const auto &a : b.assumptions)
                    fprintf(stderr, "[%s] STUCK assumption: %s\n", b.origin.c_str(), a.str().c_str());
            result.undecided_branches.push_back(std::move(residual));
            return;
        }
    }

    // A branch with no equations left: the cofactor must be pinned down;
    // the f-space for that cofactor is recovered as an exact nullspace.
    void complete(const Branch &b, DegreeResult &result) {
        // A vanished nonzero-pivot assumption puts the whole branch on a
        // locus its fork sibling explores.
        for (const auto &a : b.assumptions)
            if (a.is_zero()) return;

        QPolynomial lambda(d_.context());
        for (int g = 0; g < layout_.num_c; ++g) {
            int unknown = layout_.num_a + g;
            auto it = b.assignments.find(unknown);
            if (it == b.assignments.end()) {
                result.undecided_branches.push_back(
                    b.origin + ": cofactor coefficient " +
                    layout_.unknown_ctx->name(unknown) + " is unconstrained");
                return;
            }
            Rational value;
            if (!constant_value(it->second, value)) {
                result.undecided_branches.push_back(
                    b.origin + ": cofactor coefficient " + layout_.unknown_ctx->name(unknown) +
                    " depends on free unknowns: " + it->second.str());
                return;
            }
            lambda.add_term(layout_.c_basis[static_cast<size_t>(g)], value);
        }

        // Rows of (d - lambda) restricted to degree m.
        RowIndex a_idx = index_of(layout_.a_basis);
        RationalMatrix L = M_;
        for (size_t r = 0; r < rows_.size(); ++r) {
            for (const auto &[gamma, c] : lambda.terms()) {
                if (!exp_divides(gamma, rows_[r])) continue;
                ExponentVector nu = exp_sub(rows_[r], gamma);
                auto it = a_idx.find(nu);
                if (it == a_idx.end()) continue;
                L.at(static_cast<int>(r), it->second) -= c;
            }
        }
        for (const auto &v : nullspace(L)) {
            DarbouxPair pr{monic(from_coefficient_vector(d_.context(), layout_.a_basis, v)), lambda};
            if (!verify_darboux(d_, pr.f, pr.cofactor))
                throw std::logic_error("general_cofactor_search: candidate failed re-verification");
            if (seen_.insert(pair_key(pr)).second) result.pairs.push_back(std::move(pr));
        }
    }

    void finalize(DegreeResult &result) {
        sort_pairs(result.pairs);
        std::sort(result.undecided_branches.begin(), result.undecided_branches.end());
        if (!result.undecided_branches.empty()) result.status = SearchStatus::Undecided;
        else if (!result.pairs.empty()) result.status = SearchStatus::Found;
        else result.status = SearchStatus::None;
    }

    const MonomialDerivation &d_;
    int m_;
    SearchConfig config_;
    int s_;
    SolverLayout layout_;
    RationalMatrix M_;
    std::vector<ExponentVector> rows_;
    RowIndex cofactor_index_;
    long branches_used_ = 0;
    bool capped_ = false;
    std::set<std::string> visited_;
    std::set<std::string> seen_;
};

} // namespace

DegreeResult general_cofactor_search(const MonomialDerivation &d, int m, const SearchConfig &config) {
    return GeneralSearch(d, m, config).run();
}

SearchReport search_up_to(const MonomialDerivation &d, int max_degree, const SearchConfig &config) {
    if (max_degree < 1) throw std::invalid_argument("search_up_to: max degree must be >= 1");
    image_degree_checked(d);
    SearchReport report;
    report.max_degree = max_degree;
    report.config = config;
    for (int m = 1; m <= max_degree; ++m) {
        std::vector<DarbouxPair> fast = monomial_cofactor_search(d, m);
        DegreeResult entry;
        if (config.monomial_only) {
            entry.degree = m;
            entry.pairs = std::move(fast);
            // The fast path alone cannot certify absence.
            entry.status = entry.pairs.empty() ? SearchStatus::Undecided : SearchStatus::Found;
            if (entry.pairs.empty())
                entry.undecided_branches.push_back("general cofactor search skipped (monomial-only mode)");
        } else {
            entry = general_cofactor_search(d, m, config);
            std::set<std::string> keys;
            for (const auto &pr : entry.pairs) keys.insert(pair_key(pr));
            for (auto &pr : fast) {
                if (keys.count(pair_key(pr))) continue;
                if (entry.status == SearchStatus::None)
                    throw std::logic_error("search_up_to: fast path found a pair the solver missed");
                entry.pairs.push_back(std::move(pr));
            }
            sort_pairs(entry.pairs);
            if (entry.status == SearchStatus::None && !entry.pairs.empty())
                entry.status = SearchStatus::Found;
        }
        report.entries.push_back(std::move(entry));
    }
    return report;
}

bool verify_darboux(const MonomialDerivation &d, const QPolynomial &f, const QPolynomial &lambda) {
    if (f.is_constant()) throw std::invalid_argument("verify_darboux: f must be non-constant");
    return apply(d, f) == lambda * f;
}

ConstantWitness rational_constant_to_darboux(const MonomialDerivation &d, const QPolynomial &p,
                                             const QPolynomial &q) {
    if (q.is_zero()) throw std::invalid_argument("rational_constant_to_darboux: zero denominator");
    if (p.is_constant() && q.is_constant())
        throw std::invalid_argument("rational_constant_to_darboux: p/q is trivially constant");
    if (!(apply(d, p) * q == p * apply(d, q)))
        throw std::invalid_argument("rational_constant_to_darboux: p/q is not a constant of d");

    auto make_pair = [&](const QPolynomial &g) -> std::optional<DarbouxPair> {
        if (g.is_constant()) return std::nullopt;
        auto lambda = divide_exact(apply(d, g), g);
        if (!lambda)
            throw std::invalid_argument(
                "rational_constant_to_darboux: cofactor is not polynomial; inputs likely share a factor");
        return DarbouxPair{g, *lambda};
    };

    ConstantWitness w;
    w.p_pair = make_pair(p);
    w.q_pair = make_pair(q);
    if (w.p_pair && w.q_pair && !(w.p_pair->cofactor == w.q_pair->cofactor))
        throw std::invalid_argument(
            "rational_constant_to_darboux: cofactors disagree; inputs likely share a factor");
    return w;
}

} // namespace cyclo
