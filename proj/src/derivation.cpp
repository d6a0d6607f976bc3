#include "cyclo/derivation.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace cyclo {

MonomialDerivation::MonomialDerivation(ContextPtr ctx, std::vector<MonomialImage> images)
    : ctx_(std::move(ctx)), images_(std::move(images)) {
    if (static_cast<int>(images_.size()) != ctx_->arity())
        throw std::invalid_argument("MonomialDerivation: one image per variable required");
    for (const auto &img : images_) {
        if (img.coeff.is_zero())
            throw std::invalid_argument("MonomialDerivation: zero image coefficient");
        if (static_cast<int>(img.expo.size()) != ctx_->arity())
            throw std::invalid_argument("MonomialDerivation: image exponent arity mismatch");
        for (int e : img.expo)
            if (e < 0) throw std::invalid_argument("MonomialDerivation: negative exponent");
    }
}

bool MonomialDerivation::unit_coefficients() const {
    for (const auto &img : images_)
        if (!img.coeff.is_one()) return false;
    return true;
}

QPolynomial MonomialDerivation::image_poly(int var) const {
    return QPolynomial::monomial(ctx_, images_[static_cast<size_t>(var)].expo,
                                 images_[static_cast<size_t>(var)].coeff);
}

namespace {

// Leibniz: d(X^e) = sum_i e_i X^{e - e_i} d(x_i), extended linearly.
template <class C, class Lift>
Polynomial<C> apply_impl(const MonomialDerivation &d, const Polynomial<C> &p, Lift lift) {
    check_same_context(d.context(), p.context());
    Polynomial<C> out(p.context());
    for (const auto &[e, c] : p.terms()) {
        for (size_t i = 0; i < e.size(); ++i) {
            if (e[i] == 0) continue;
            ExponentVector shifted = e;
            --shifted[i];
            const MonomialImage &img = d.image(static_cast<int>(i));
            out.add_term(exp_add(shifted, img.expo), c * lift(Rational(e[i]) * img.coeff));
        }
    }
    return out;
}

} // namespace

QPolynomial apply(const MonomialDerivation &d, const QPolynomial &p) {
    return apply_impl(d, p, [](const Rational &r) { return r; });
}

CPolynomial apply(const MonomialDerivation &d, const CPolynomial &p, const FieldPtr &f) {
    return apply_impl(d, p, [&](const Rational &r) { return CycloNum::constant(f, r); });
}

std::optional<int> homogeneity_degree(const MonomialDerivation &d) {
    long s = total_degree(d.image(0).expo);
    for (int i = 1; i < d.arity(); ++i)
        if (total_degree(d.image(i).expo) != s) return std::nullopt;
    return static_cast<int>(s) - 1;
}

ExponentMatrixResult exponent_matrix_and_wd(const MonomialDerivation &d) {
    int n = d.arity();
    RationalMatrix A(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            A.at(i, j) = Rational(d.image(i).expo[static_cast<size_t>(j)]);
            if (i == j) A.at(i, j) -= Rational(1);
        }
    return {A, determinant(A), d.unit_coefficients()};
}

std::vector<std::vector<int>> CyclotomicPartition::members() const {
    std::vector<std::vector<int>> out(static_cast<size_t>(k));
    for (size_t v = 0; v < classes.size(); ++v)
        out[static_cast<size_t>(classes[v] - 1)].push_back(static_cast<int>(v));
    return out;
}

bool partition_valid(const MonomialDerivation &d, const CyclotomicPartition &p) {
    if (p.k < 2) return false;
    if (static_cast<int>(p.classes.size()) != d.arity()) return false;
    if (static_cast<int>(p.sizes.size()) != p.k) return false;
    std::vector<int> counts(static_cast<size_t>(p.k), 0);
    for (int c : p.classes) {
        if (c < 1 || c > p.k) return false;
        ++counts[static_cast<size_t>(c - 1)];
    }
    for (int i = 0; i < p.k; ++i) {
        if (counts[static_cast<size_t>(i)] != p.sizes[static_cast<size_t>(i)]) return false;
        if (counts[static_cast<size_t>(i)] == 0) return false; // parts must be nonempty
    }
    for (int u = 0; u < d.arity(); ++u) {
        int expected = (p.classes[static_cast<size_t>(u)] % p.k) + 1;
        const ExponentVector &e = d.image(u).expo;
        for (size_t v = 0; v < e.size(); ++v)
            if (e[v] > 0 && p.classes[v] != expected) return false;
    }
    return true;
}

namespace {

struct PotentialData {
    long g = 0;                           // gcd of |discrepancies|
    std::vector<std::vector<int>> comps;  // non-isolated components, by first variable
    std::vector<long> potential;          // per variable (valid within its component)
    std::vector<int> isolated;            // variables with no incident edge
};

PotentialData compute_potentials(const MonomialDerivation &d) {
    int n = d.arity();
    std::vector<std::vector<int>> out_edges(static_cast<size_t>(n)), in_edges(static_cast<size_t>(n));
    for (int u = 0; u < n; ++u) {
        const ExponentVector &e = d.image(u).expo;
        for (int v = 0; v < n; ++v)
            if (e[static_cast<size_t>(v)] > 0) {
                out_edges[static_cast<size_t>(u)].push_back(v);
                in_edges[static_cast<size_t>(v)].push_back(u);
            }
    }

    PotentialData data;
    data.potential.assign(static_cast<size_t>(n), 0);
    std::vector<int> state(static_cast<size_t>(n), 0); // 0 unvisited, 1 visited
    for (int root = 0; root < n; ++root) {
        if (state[static_cast<size_t>(root)]) continue;
        if (out_edges[static_cast<size_t>(root)].empty() && in_edges[static_cast<size_t>(root)].empty()) {
            state[static_cast<size_t>(root)] = 1;
            data.isolated.push_back(root);
            continue;
        }
        std::vector<int> comp;
        std::vector<int> stack{root};
        state[static_cast<size_t>(root)] = 1;
        data.potential[static_cast<size_t>(root)] = 0;
        while (!stack.empty()) {
            int u = stack.back();
            stack.pop_back();
            comp.push_back(u);
            auto visit = [&](int v, long expected) {
                if (!state[static_cast<size_t>(v)]) {
                    state[static_cast<size_t>(v)] = 1;
                    data.potential[static_cast<size_t>(v)] = expected;
                    stack.push_back(v);
                } else {
                    long diff = expected - data.potential[static_cast<size_t>(v)];
                    if (diff != 0) data.g = std::gcd(data.g, diff < 0 ? -diff : diff);
                }
            };
            for (int v : out_edges[static_cast<size_t>(u)]) visit(v, data.potential[static_cast<size_t>(u)] + 1);
            for (int v : in_edges[static_cast<size_t>(u)]) visit(v, data.potential[static_cast<size_t>(u)] - 1);
        }
        std::sort(comp.begin(), comp.end());
        data.comps.push_back(std::move(comp));
    }
    std::sort(data.comps.begin(), data.comps.end(),
              [](const auto &a, const auto &b) { return a.front() < b.front(); });
    return data;
}

// Class assignment for one k: first component anchored so its first
// variable lands in class 1; later components greedily pick the shift
// covering the most still-empty classes (smallest shift on ties).
std::optional<CyclotomicPartition> assign_classes(const MonomialDerivation &d,
                                                  const PotentialData &data, int k) {
    int n = d.arity();
    std::vector<int> classes(static_cast<size_t>(n), 0);
    std::vector<bool> used(static_cast<size_t>(k), false);

    auto class_of = [&](long pot, long shift) {
        long c = (pot + shift) % k;
        if (c < 0) c += k;
        return static_cast<int>(c); // 0-based here
    };

    bool first_comp = true;
    for (const auto &comp : data.comps) {
        long chosen_shift = 0;
        if (first_comp) {
            chosen_shift = -data.potential[static_cast<size_t>(comp.front())];
            first_comp = false;
        } else {
            int best_cover = -1;
            for (long shift = 0; shift < k; ++shift) {
                std::vector<bool> hits(static_cast<size_t>(k), false);
                int cover = 0;
                for (int v : comp) {
                    int c = class_of(data.potential[static_cast<size_t>(v)], shift);
                    if (!used[static_cast<size_t>(c)] && !hits[static_cast<size_t>(c)]) {
                        hits[static_cast<size_t>(c)] = true;
                        ++cover;
                    }
                }
                if (cover > best_cover) {
                    best_cover = cover;
                    chosen_shift = shift;
                }
            }
        }
        for (int v : comp) {
            int c = class_of(data.potential[static_cast<size_t>(v)], chosen_shift);
            classes[static_cast<size_t>(v)] = c + 1;
            used[static_cast<size_t>(c)] = true;
        }
    }
    for (int v : data.isolated) {
        classes[static_cast<size_t>(v)] = 1;
        used[0] = true;
    }

    for (bool u : used)
        if (!u) return std::nullopt;

    CyclotomicPartition p;
    p.k = k;
    p.classes = std::move(classes);
    p.sizes.assign(static_cast<size_t>(k), 0);
    for (int c : p.classes) ++p.sizes[static_cast<size_t>(c - 1)];
    if (!partition_valid(d, p)) return std::nullopt;
    return p;
}

} // namespace

CyclotomicDetection detect_cyclotomic(const MonomialDerivation &d) {
    PotentialData data = compute_potentials(d);
    CyclotomicDetection result;
    result.discrepancy_gcd = data.g;

    std::vector<int> candidates;
    if (data.g == 1) {
        // A unit discrepancy (e.g. a self-loop) rules out every k >= 2.
    } else if (data.g == 0) {
        for (int k = d.arity(); k >= 2; --k) candidates.push_back(k);
    } else {
        for (long k = data.g; k >= 2; --k)
            if (data.g % k == 0) candidates.push_back(static_cast<int>(k));
    }

    for (int k : candidates) {
        auto p = assign_classes(d, data, k);
        if (!p) continue;
        result.feasible_k.push_back(k);
        if (!result.partition) result.partition = std::move(p);
    }
    return result;
}

std::optional<CyclotomicPartition> detect_cyclotomic_partition(const MonomialDerivation &d) {
    return detect_cyclotomic(d).partition;
}

std::optional<CyclotomicPartition> partition_for_k(const MonomialDerivation &d, int k) {
    if (k < 2) return std::nullopt;
    PotentialData data = compute_potentials(d);
    if (data.g == 1) return std::nullopt;
    if (data.g > 0 && data.g % k != 0) return std::nullopt;
    return assign_classes(d, data, k);
}

MonomialDerivation direct_sum(const MonomialDerivation &a, const MonomialDerivation &b) {
    std::vector<std::string> names = a.context()->names();
    for (const auto &n : b.context()->names()) {
        if (a.context()->index_of(n) >= 0)
            throw std::invalid_argument("direct_sum: variable name collision on '" + n + "'");
        names.push_back(n);
    }
    ContextPtr ctx = make_context(std::move(names));
    int na = a.arity(), nb = b.arity();
    std::vector<MonomialImage> images;
    images.reserve(static_cast<size_t>(na + nb));
    for (int i = 0; i < na; ++i) {
        ExponentVector e(static_cast<size_t>(na + nb));
        for (int j = 0; j < na; ++j) e[static_cast<size_t>(j)] = a.image(i).expo[static_cast<size_t>(j)];
        images.push_back({a.image(i).coeff, std::move(e)});
    }
    for (int i = 0; i < nb; ++i) {
        ExponentVector e(static_cast<size_t>(na + nb));
        for (int j = 0; j < nb; ++j) e[static_cast<size_t>(na + j)] = b.image(i).expo[static_cast<size_t>(j)];
        images.push_back({b.image(i).coeff, std::move(e)});
    }
    return MonomialDerivation(ctx, std::move(images));
}

MonomialDerivation gen_jouanolou(int n, int s) {
    if (n < 2) throw std::invalid_argument("gen_jouanolou: n must be >= 2");
    if (s < 1) throw std::invalid_argument("gen_jouanolou: s must be >= 1");
    std::vector<std::string> names;
    names.reserve(static_cast<size_t>(n));
    for (int i = 1; i <= n; ++i) names.push_back("x" + std::to_string(i));
    ContextPtr ctx = make_context(std::move(names));
    std::vector<MonomialImage> images;
    for (int i = 0; i < n; ++i) {
        ExponentVector e(static_cast<size_t>(n));
        e[static_cast<size_t>((i + 1) % n)] = s;
        images.push_back({Rational(1), std::move(e)});
    }
    return MonomialDerivation(ctx, std::move(images));
}

MonomialDerivation gen_generalized_cyclotomic(const std::vector<int> &sizes,
                                              const std::vector<std::vector<std::vector<int>>> &tables) {
    int k = static_cast<int>(sizes.size());
    if (k < 2) throw std::invalid_argument("gen_generalized_cyclotomic: need k >= 2 parts");
    if (static_cast<int>(tables.size()) != k)
        throw std::invalid_argument("gen_generalized_cyclotomic: one table per part required");
    for (int t : sizes)
        if (t < 1) throw std::invalid_argument("gen_generalized_cyclotomic: empty part");

    std::vector<std::string> names;
    std::vector<int> offset(static_cast<size_t>(k) + 1, 0);
    for (int i = 0; i < k; ++i) {
        offset[static_cast<size_t>(i + 1)] = offset[static_cast<size_t>(i)] + sizes[static_cast<size_t>(i)];
        for (int j = 1; j <= sizes[static_cast<size_t>(i)]; ++j)
            names.push_back("x" + std::to_string(i + 1) + "_" + std::to_string(j));
    }
    int n = offset[static_cast<size_t>(k)];
    ContextPtr ctx = make_context(std::move(names));

    std::vector<MonomialImage> images(static_cast<size_t>(n));
    for (int i = 0; i < k; ++i) {
        int next = (i + 1) % k;
        if (static_cast<int>(tables[static_cast<size_t>(i)].size()) != sizes[static_cast<size_t>(i)])
            throw std::invalid_argument("gen_generalized_cyclotomic: table row count mismatch");
        for (int j = 0; j < sizes[static_cast<size_t>(i)]; ++j) {
            const auto &row = tables[static_cast<size_t>(i)][static_cast<size_t>(j)];
            if (static_cast<int>(row.size()) != sizes[static_cast<size_t>(next)])
                throw std::invalid_argument("gen_generalized_cyclotomic: table column count mismatch");
            ExponentVector e(static_cast<size_t>(n));
            for (int l = 0; l < sizes[static_cast<size_t>(next)]; ++l) {
                if (row[static_cast<size_t>(l)] < 0)
                    throw std::invalid_argument("gen_generalized_cyclotomic: negative exponent");
                e[static_cast<size_t>(offset[static_cast<size_t>(next)] + l)] = row[static_cast<size_t>(l)];
            }
            images[static_cast<size_t>(offset[static_cast<size_t>(i)] + j)] = {Rational(1), std::move(e)};
        }
    }
    return MonomialDerivation(ctx, std::move(images));
}

} // namespace cyclo
