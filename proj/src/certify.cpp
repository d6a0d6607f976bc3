#include "cyclo/certify.hpp"

#include <stdexcept>

namespace cyclo {

namespace {

long pow_checked(long base, int e) {
    long acc = 1;
    for (int i = 0; i < e; ++i) {
        if (acc > (1L << 40) / (base > 1 ? base : 1))
            throw std::overflow_error("cyclotomic structure: s^k out of range");
        acc *= base;
    }
    return acc;
}

} // namespace

CyclotomicStructure make_structure(const ContextPtr &ctx, const CyclotomicPartition &partition,
                                   int s) {
    if (s < 1) throw std::invalid_argument("make_structure: image degree s must be >= 1");
    int k = partition.k;
    if (k < 2) throw std::invalid_argument("make_structure: partition needs k >= 2");

    std::vector<long> q(static_cast<size_t>(k));
    long acc = 0, power = 1;
    for (int i = 0; i < k; ++i) {
        acc += power;
        q[static_cast<size_t>(i)] = acc;
        if (acc > (1L << 40)) throw std::overflow_error("cyclotomic structure: N out of range");
        power *= s;
    }
    long N = q[static_cast<size_t>(k - 1)];

    FieldPtr field = CyclotomicField::make(N);
    std::vector<CycloNum> scales;
    scales.reserve(static_cast<size_t>(ctx->arity()));
    for (int v = 0; v < ctx->arity(); ++v) {
        int cls = partition.classes[static_cast<size_t>(v)];
        // class k-i is scaled by zeta^{q_i}, i.e. class c by zeta^{q_{k-c}};
        // class 1 gets zeta^{q_{k-1}} = zeta^N = 1.
        long exponent = (cls == 1) ? N : q[static_cast<size_t>(k - cls)];
        scales.push_back(CycloNum::zeta_pow(field, exponent));
    }
    return CyclotomicStructure{ctx, partition, s, N, std::move(q), field,
                               DiagonalAutomorphism(ctx, field, std::move(scales))};
}

CyclotomicStructure build_structure(const MonomialDerivation &d, const CyclotomicPartition &partition) {
    if (!d.unit_coefficients())
        throw std::invalid_argument("build_structure: image coefficients must all be 1");
    auto h = homogeneity_degree(d);
    if (!h) throw std::invalid_argument("build_structure: derivation is not homogeneous");
    int s = *h + 1;
    if (s < 1) throw std::invalid_argument("build_structure: image degree must be >= 1");
    if (!partition_valid(d, partition))
        throw std::invalid_argument("build_structure: partition is not valid for this derivation");

    CyclotomicStructure st = make_structure(d.context(), partition, s);
    if (st.q[static_cast<size_t>(st.partition.k - 1)] != st.N)
        throw std::logic_error("build_structure: q_{k-1} != N");
    if (!st.sigma.power(st.N).is_identity())
        throw std::logic_error("build_structure: sigma^N is not the identity");
    return st;
}

ConjugationReport check_conjugation(const MonomialDerivation &d, const CyclotomicStructure &st) {
    check_same_context(d.context(), st.ctx);
    ConjugationReport report;
    report.ok = true;
    DiagonalAutomorphism sigma_inv = st.sigma.inverse();
    CycloNum zeta = CycloNum::zeta_pow(st.field, 1);

    for (int v = 0; v < d.arity(); ++v) {
        CPolynomial var = CPolynomial::variable(st.ctx, v, CycloNum::one(st.field));
        CPolynomial lhs = sigma_inv(apply(d, st.sigma(var), st.field));
        CPolynomial rhs = apply(d, var, st.field) * zeta;
        bool equal = lhs == rhs;
        if (!equal && report.ok) {
            report.ok = false;
            report.failing_variable = st.ctx->name(v);
        }
        report.rows.push_back({st.ctx->name(v), std::move(lhs), std::move(rhs), equal});
    }
    return report;
}

DeltaInfo delta_of(const ExponentVector &beta, const CyclotomicStructure &st) {
    if (static_cast<int>(beta.size()) != st.ctx->arity())
        throw std::invalid_argument("delta_of: exponent arity mismatch");
    if (total_degree(beta) != st.s - 1)
        throw std::invalid_argument("delta_of: monomial must have total degree s-1");
    int k = st.partition.k;
    DeltaInfo info;
    info.p.assign(static_cast<size_t>(k), 0);
    for (size_t v = 0; v < beta.size(); ++v)
        info.p[static_cast<size_t>(st.partition.classes[v] - 1)] += beta[v];
    for (int l = 2; l <= k; ++l)
        info.delta += info.p[static_cast<size_t>(l - 1)] * st.q[static_cast<size_t>(k - l)];
    return info;
}

LambdaReport lambda_vanishing_certificate(const CyclotomicStructure &st) {
    LambdaReport report;
    report.ok = true;
    report.s_pow_k_minus_1 = pow_checked(st.s, st.partition.k - 1);
    CycloNum zero = CycloNum::zero(st.field);

    for (const auto &beta : monomial_basis(st.ctx->arity(), st.s - 1)) {
        LambdaEntry entry{beta, {}, 0, false, zero, zero, false};
        DeltaInfo info = delta_of(beta, st);
        entry.p = info.p;
        entry.delta = info.delta;
        entry.bound_ok = 0 < info.delta + 1 && info.delta + 1 <= report.s_pow_k_minus_1 &&
                         report.s_pow_k_minus_1 < st.N;
        entry.geometric = geometric_sum(st.field, info.delta + 1);

        // Literal route: sum zeta^m times the sigma^m scale factor of X^beta,
        // powering the stored scales; the class-1 factor zeta^{m p_1 N} rides
        // along and contributes 1.
        CycloNum direct = zero;
        for (long m = 0; m < st.N; ++m) {
            CycloNum factor = CycloNum::zeta_pow(st.field, m);
            for (size_t v = 0; v < beta.size(); ++v)
                if (beta[v] != 0) factor = factor * st.sigma.scales()[v].pow(m * beta[v]);
            direct = direct + factor;
        }
        entry.direct = direct;
        entry.vanishes = entry.geometric.is_zero() && entry.direct == entry.geometric;

        if (!(entry.bound_ok && entry.vanishes) && report.ok) {
            report.ok = false;
            report.failure = "monomial " +
                             QPolynomial::monomial(st.ctx, beta, Rational(1)).str() +
                             " violates the vanishing certificate";
        }
        report.entries.push_back(std::move(entry));
    }
    return report;
}

OrbitWitness orbit_product(const MonomialDerivation &d, const CyclotomicStructure &st,
                           const DarbouxPair &pair) {
    if (pair.f.is_constant())
        throw std::invalid_argument("orbit_product: f must be non-constant");
    if (!verify_darboux(d, pair.f, pair.cofactor))
        throw std::invalid_argument("orbit_product: pair is not Darboux for d");
    if (!check_conjugation(d, st).ok)
        throw std::invalid_argument("orbit_product: conjugation certificate fails for this structure");

    CPolynomial f_ext = embed_in_field(pair.f, st.field);
    CPolynomial F = f_ext;
    for (long m = 1; m < st.N; ++m) F = F * st.sigma.power(m)(f_ext);

    if (!apply(d, F, st.field).is_zero())
        throw std::logic_error("orbit_product: d(F) != 0; certified identities are inconsistent");
    if (F.is_constant())
        throw std::logic_error("orbit_product: F is constant despite non-constant f");

    OrbitWitness witness{F, std::nullopt};
    bool rational = true;
    for (const auto &[e, c] : F.terms())
        if (!c.is_rational()) { rational = false; break; }
    if (rational) {
        QPolynomial fq(st.ctx);
        for (const auto &[e, c] : F.terms()) fq.add_term(e, c.rational_part());
        witness.F_rational = std::move(fq);
    }
    return witness;
}

LemmaReport check_lemma_components(const MonomialDerivation &d, const QPolynomial &f,
                                   const QPolynomial &lambda) {
    auto h = homogeneity_degree(d);
    if (!h) throw std::invalid_argument("check_lemma_components: derivation is not homogeneous");
    if (!verify_darboux(d, f, lambda))
        throw std::invalid_argument("check_lemma_components: (f, lambda) is not a Darboux pair");

    LemmaReport report;
    report.cofactor_homogeneous = lambda.is_zero() || is_homogeneous(lambda) == *h;
    report.ok = report.cofactor_homogeneous;

    for (auto &[degree, component] : homogeneous_components(f)) {
        bool good = apply(d, component) == lambda * component;
        if (!good && !report.failing_degree) {
            report.ok = false;
            report.failing_degree = degree;
        }
        report.rows.push_back({degree, component, good});
    }
    return report;
}

Certificate theorem_pipeline(const MonomialDerivation &d, int max_degree,
                             const PipelineOptions &options) {
    ExponentMatrixResult mat = exponent_matrix_and_wd(d);
    Certificate cert{d,
                     mat.A,
                     mat.wd,
                     std::nullopt,
                     detect_cyclotomic(d),
                     std::nullopt,
                     std::nullopt,
                     std::nullopt,
                     std::nullopt,
                     std::nullopt,
                     std::nullopt,
                     {}};

    auto h = homogeneity_degree(d);
    if (h && *h >= 0) cert.image_degree = *h + 1;

    if (options.requested_k) {
        cert.certified_partition = partition_for_k(d, *options.requested_k);
        if (!cert.certified_partition)
            cert.notes.push_back("requested k=" + std::to_string(*options.requested_k) +
                                 " admits no valid partition");
    } else {
        cert.certified_partition = cert.detection.partition;
        if (!cert.certified_partition)
            cert.notes.push_back("no cyclic block partition detected (gcd of discrepancies: " +
                                 std::to_string(cert.detection.discrepancy_gcd) + ")");
    }

    if (cert.certified_partition) {
        if (!cert.image_degree) {
            cert.notes.push_back("derivation is not homogeneous; structure certificate skipped");
        } else if (!d.unit_coefficients()) {
            cert.notes.push_back("image coefficients are not all 1; structure certificate skipped");
        } else {
            cert.structure = build_structure(d, *cert.certified_partition);
            cert.conjugation = check_conjugation(d, *cert.structure);
            cert.lambda_cert = lambda_vanishing_certificate(*cert.structure);
        }
    }

    if (cert.image_degree) {
        cert.search = search_up_to(d, max_degree, options.search);
    } else {
        cert.notes.push_back("derivation is not homogeneous; Darboux search skipped");
    }

    if (cert.search && cert.structure_certified()) {
        for (const auto &entry : cert.search->entries) {
            if (entry.pairs.empty()) continue;
            const DarbouxPair &pair = entry.pairs.front();
            cert.witness = WitnessRecord{pair, entry.degree,
                                         orbit_product(d, *cert.structure, pair)};
            break;
        }
    } else if (cert.search && cert.search->any_found()) {
        cert.notes.push_back("Darboux polynomials found but no certified structure; orbit witness skipped");
    }
    return cert;
}

} // namespace cyclo
