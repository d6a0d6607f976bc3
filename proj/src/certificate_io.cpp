#include "cyclo/certificate_io.hpp"

#include <fstream>

#include "cyclo/dsl.hpp"

namespace cyclo {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

ordered_json rational_json(const Rational &r) { return r.str(); }

ordered_json cyclo_json(const CycloNum &c) {
    ordered_json arr = ordered_json::array();
    for (const auto &r : c.coeffs()) arr.push_back(r.str());
    return arr;
}

ordered_json qpoly_json(const QPolynomial &p) {
    ordered_json terms = ordered_json::array();
    for (const auto &[e, c] : p.terms()) {
        ordered_json t;
        t["e"] = e;
        t["c"] = c.str();
        terms.push_back(std::move(t));
    }
    return ordered_json{{"terms", std::move(terms)}};
}

ordered_json cpoly_json(const CPolynomial &p) {
    ordered_json terms = ordered_json::array();
    for (const auto &[e, c] : p.terms()) {
        ordered_json t;
        t["e"] = e;
        t["c"] = cyclo_json(c);
        terms.push_back(std::move(t));
    }
    return ordered_json{{"terms", std::move(terms)}};
}

ordered_json matrix_json(const RationalMatrix &m) {
    ordered_json rows = ordered_json::array();
    for (int i = 0; i < m.rows(); ++i) {
        ordered_json row = ordered_json::array();
        for (int j = 0; j < m.cols(); ++j) row.push_back(m.at(i, j).str());
        rows.push_back(std::move(row));
    }
    return rows;
}

ordered_json partition_json(const CyclotomicPartition &p) {
    return ordered_json{{"k", p.k}, {"classes", p.classes}, {"sizes", p.sizes}};
}

ordered_json pair_json(const DarbouxPair &pr) {
    return ordered_json{{"f", qpoly_json(pr.f)}, {"cofactor", qpoly_json(pr.cofactor)}};
}

// ---- parsing back (shared by the re-checker) ----

Rational parse_rational(const json &j) {
    if (!j.is_string()) throw std::invalid_argument("expected rational string");
    return Rational::from_string(j.get<std::string>());
}

ExponentVector parse_exponents(const json &j, int arity) {
    if (!j.is_array() || static_cast<int>(j.size()) != arity)
        throw std::invalid_argument("bad exponent vector");
    ExponentVector e;
    for (const auto &v : j) {
        int x = v.get<int>();
        if (x < 0) throw std::invalid_argument("negative exponent");
        e.push_back(x);
    }
    return e;
}

QPolynomial parse_qpoly(const json &j, const ContextPtr &ctx) {
    QPolynomial p(ctx);
    for (const auto &t : j.at("terms"))
        p.add_term(parse_exponents(t.at("e"), ctx->arity()), parse_rational(t.at("c")));
    return p;
}

CycloNum parse_cyclo(const json &j, const FieldPtr &f) {
    if (!j.is_array() || static_cast<int>(j.size()) != f->degree())
        throw std::invalid_argument("bad cyclotomic coefficient vector");
    CycloNum acc = CycloNum::zero(f);
    int i = 0;
    for (const auto &v : j) {
        Rational r = parse_rational(v);
        if (!r.is_zero()) acc = acc + CycloNum::zeta_pow(f, i) * r;
        ++i;
    }
    return acc;
}

CPolynomial parse_cpoly(const json &j, const ContextPtr &ctx, const FieldPtr &f) {
    CPolynomial p(ctx);
    for (const auto &t : j.at("terms"))
        p.add_term(parse_exponents(t.at("e"), ctx->arity()), parse_cyclo(t.at("c"), f));
    return p;
}

MonomialDerivation parse_derivation(const json &j) {
    std::vector<std::string> names = j.at("variables").get<std::vector<std::string>>();
    ContextPtr ctx = make_context(names);
    std::vector<MonomialImage> images;
    for (const auto &img : j.at("images"))
        images.push_back({parse_rational(img.at("coeff")),
                          parse_exponents(img.at("exponents"), ctx->arity())});
    return MonomialDerivation(ctx, std::move(images));
}

CyclotomicPartition parse_partition(const json &j) {
    CyclotomicPartition p;
    p.k = j.at("k").get<int>();
    p.classes = j.at("classes").get<std::vector<int>>();
    p.sizes = j.at("sizes").get<std::vector<int>>();
    return p;
}

SearchStatus parse_status(const std::string &s) {
    if (s == "NONE") return SearchStatus::None;
    if (s == "FOUND") return SearchStatus::Found;
    if (s == "UNDECIDED") return SearchStatus::Undecided;
    throw std::invalid_argument("unknown search status '" + s + "'");
}

} // namespace

ordered_json certificate_to_json(const Certificate &cert) {
    ordered_json doc;
    doc["schema"] = kCertificateSchema;

    ordered_json deriv;
    deriv["variables"] = cert.derivation.context()->names();
    ordered_json images = ordered_json::array();
    for (const auto &img : cert.derivation.images())
        images.push_back(ordered_json{{"coeff", img.coeff.str()}, {"exponents", img.expo}});
    deriv["images"] = std::move(images);
    deriv["text"] = print_derivation_spec(cert.derivation);
    doc["derivation"] = std::move(deriv);

    doc["exponent_matrix"] = matrix_json(cert.exponent_matrix);
    doc["w_d"] = cert.wd.str();
    doc["image_degree"] = cert.image_degree ? ordered_json(*cert.image_degree) : ordered_json(nullptr);

    ordered_json det;
    det["discrepancy_gcd"] = cert.detection.discrepancy_gcd;
    det["feasible_k"] = cert.detection.feasible_k;
    det["partition"] =
        cert.detection.partition ? partition_json(*cert.detection.partition) : ordered_json(nullptr);
    doc["detection"] = std::move(det);

    doc["certified_partition"] = cert.certified_partition
                                     ? partition_json(*cert.certified_partition)
                                     : ordered_json(nullptr);

    if (cert.structure) {
        const CyclotomicStructure &st = *cert.structure;
        ordered_json s;
        s["s"] = st.s;
        s["N"] = st.N;
        s["q"] = st.q;
        ordered_json scales = ordered_json::array();
        for (const auto &sc : st.sigma.scales()) scales.push_back(cyclo_json(sc));
        s["sigma_scales"] = std::move(scales);
        doc["structure"] = std::move(s);
    } else {
        doc["structure"] = nullptr;
    }

    if (cert.conjugation) {
        ordered_json c;
        c["ok"] = cert.conjugation->ok;
        c["failing_variable"] = cert.conjugation->failing_variable
                                    ? ordered_json(*cert.conjugation->failing_variable)
                                    : ordered_json(nullptr);
        ordered_json rows = ordered_json::array();
        for (const auto &row : cert.conjugation->rows)
            rows.push_back(ordered_json{{"variable", row.variable},
                                        {"lhs", cpoly_json(row.lhs)},
                                        {"rhs", cpoly_json(row.rhs)},
                                        {"equal", row.equal}});
        c["rows"] = std::move(rows);
        doc["conjugation"] = std::move(c);
    } else {
        doc["conjugation"] = nullptr;
    }

    if (cert.lambda_cert) {
        ordered_json l;
        l["ok"] = cert.lambda_cert->ok;
        l["s_pow_k_minus_1"] = cert.lambda_cert->s_pow_k_minus_1;
        ordered_json entries = ordered_json::array();
        for (const auto &e : cert.lambda_cert->entries)
            entries.push_back(ordered_json{{"beta", e.beta},
                                           {"p", e.p},
                                           {"delta", e.delta},
                                           {"bound_ok", e.bound_ok},
                                           {"geometric", cyclo_json(e.geometric)},
                                           {"direct", cyclo_json(e.direct)},
                                           {"vanishes", e.vanishes}});
        l["entries"] = std::move(entries);
        doc["lambda"] = std::move(l);
    } else {
        doc["lambda"] = nullptr;
    }

    if (cert.search) {
        ordered_json s;
        s["max_degree"] = cert.search->max_degree;
        s["branch_cap"] = cert.search->config.branch_cap;
        s["monomial_only"] = cert.search->config.monomial_only;
        ordered_json entries = ordered_json::array();
        for (const auto &e : cert.search->entries) {
            ordered_json entry;
            entry["degree"] = e.degree;
            entry["status"] = status_name(e.status);
            ordered_json pairs = ordered_json::array();
            for (const auto &pr : e.pairs) pairs.push_back(pair_json(pr));
            entry["pairs"] = std::move(pairs);
            entry["undecided"] = e.undecided_branches;
            entries.push_back(std::move(entry));
        }
        s["entries"] = std::move(entries);
        doc["search"] = std::move(s);
    } else {
        doc["search"] = nullptr;
    }

    if (cert.witness) {
        ordered_json w;
        w["degree"] = cert.witness->found_degree;
        w["f"] = qpoly_json(cert.witness->pair.f);
        w["cofactor"] = qpoly_json(cert.witness->pair.cofactor);
        w["F"] = cpoly_json(cert.witness->orbit.F);
        w["F_rational"] = cert.witness->orbit.F_rational
                              ? qpoly_json(*cert.witness->orbit.F_rational)
                              : ordered_json(nullptr);
        doc["witness"] = std::move(w);
    } else {
        doc["witness"] = nullptr;
    }

    doc["notes"] = cert.notes;
    return doc;
}

void write_certificate(const Certificate &cert, const std::string &path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out << certificate_to_json(cert).dump(2) << "\n";
}

RecheckResult recheck_certificate(const json &doc) {
    RecheckResult result;
    auto guard = [&](const std::string &where, auto &&fn) {
        try {
            fn();
        } catch (const std::exception &e) {
            result.fail(where + ": " + e.what());
        }
    };

    if (!doc.contains("schema") || doc.at("schema") != kCertificateSchema) {
        result.fail("schema: missing or unsupported");
        return result;
    }

    std::optional<MonomialDerivation> d;
    guard("derivation", [&] { d = parse_derivation(doc.at("derivation")); });
    if (!d) return result;
    const ContextPtr &ctx = d->context();

    guard("exponent_matrix", [&] {
        ExponentMatrixResult mat = exponent_matrix_and_wd(*d);
        const json &rows = doc.at("exponent_matrix");
        if (static_cast<int>(rows.size()) != mat.A.rows())
            throw std::invalid_argument("row count mismatch");
        for (int i = 0; i < mat.A.rows(); ++i)
            for (int j = 0; j < mat.A.cols(); ++j)
                if (parse_rational(rows.at(i).at(j)) != mat.A.at(i, j))
                    throw std::invalid_argument("entry mismatch");
        if (parse_rational(doc.at("w_d")) != mat.wd)
            throw std::invalid_argument("w_d does not match recomputed determinant");
    });

    std::optional<int> image_degree;
    guard("image_degree", [&] {
        auto h = homogeneity_degree(*d);
        std::optional<int> recomputed;
        if (h && *h >= 0) recomputed = *h + 1;
        std::optional<int> stored;
        if (!doc.at("image_degree").is_null()) stored = doc.at("image_degree").get<int>();
        if (stored != recomputed)
            throw std::invalid_argument("stored image degree disagrees with the images");
        image_degree = recomputed;
    });

    std::optional<CyclotomicPartition> partition;
    guard("certified_partition", [&] {
        if (doc.at("certified_partition").is_null()) return;
        CyclotomicPartition p = parse_partition(doc.at("certified_partition"));
        if (!partition_valid(*d, p))
            throw std::invalid_argument("partition fails the block-cyclic condition");
        partition = std::move(p);
    });

    std::optional<CyclotomicStructure> structure;
    guard("structure", [&] {
        if (doc.at("structure").is_null()) return;
        if (!partition) throw std::invalid_argument("structure without a certified partition");
        if (!image_degree) throw std::invalid_argument("structure without homogeneous images");
        if (!d->unit_coefficients())
            throw std::invalid_argument("structure requires unit image coefficients");
        const json &s = doc.at("structure");
        int stored_s = s.at("s").get<int>();
        if (stored_s != *image_degree) throw std::invalid_argument("stored s mismatch");
        CyclotomicStructure rebuilt = make_structure(ctx, *partition, stored_s);
        if (s.at("N").get<long>() != rebuilt.N) throw std::invalid_argument("stored N mismatch");
        if (s.at("q").get<std::vector<long>>() != rebuilt.q)
            throw std::invalid_argument("stored q mismatch");
        const json &scales = s.at("sigma_scales");
        if (static_cast<int>(scales.size()) != ctx->arity())
            throw std::invalid_argument("sigma scale count mismatch");
        for (int v = 0; v < ctx->arity(); ++v)
            if (parse_cyclo(scales.at(v), rebuilt.field) != rebuilt.sigma.scales()[static_cast<size_t>(v)])
                throw std::invalid_argument("sigma scale mismatch on " + ctx->name(v));
        structure = std::move(rebuilt);
    });

    guard("conjugation", [&] {
        if (doc.at("conjugation").is_null()) return;
        if (!structure) throw std::invalid_argument("conjugation table without structure");
        const json &c = doc.at("conjugation");
        ConjugationReport recomputed = check_conjugation(*d, *structure);
        const json &rows = c.at("rows");
        if (rows.size() != recomputed.rows.size())
            throw std::invalid_argument("conjugation row count mismatch");
        bool all_equal = true;
        for (size_t i = 0; i < rows.size(); ++i) {
            const json &row = rows.at(i);
            const ConjugationRow &want = recomputed.rows[i];
            if (row.at("variable").get<std::string>() != want.variable)
                throw std::invalid_argument("conjugation row order mismatch");
            CPolynomial lhs = parse_cpoly(row.at("lhs"), ctx, structure->field);
            CPolynomial rhs = parse_cpoly(row.at("rhs"), ctx, structure->field);
            if (!(lhs == want.lhs) || !(rhs == want.rhs))
                throw std::invalid_argument("conjugation table entry differs from recomputation");
            if (row.at("equal").get<bool>() != want.equal)
                throw std::invalid_argument("conjugation equality flag mismatch");
            all_equal = all_equal && want.equal;
        }
        if (c.at("ok").get<bool>() != all_equal)
            throw std::invalid_argument("conjugation ok flag inconsistent");
    });

    guard("lambda", [&] {
        if (doc.at("lambda").is_null()) return;
        if (!structure) throw std::invalid_argument("lambda certificate without structure");
        const json &l = doc.at("lambda");
        LambdaReport recomputed = lambda_vanishing_certificate(*structure);
        if (l.at("s_pow_k_minus_1").get<long>() != recomputed.s_pow_k_minus_1)
            throw std::invalid_argument("s^{k-1} mismatch");
        const json &entries = l.at("entries");
        if (entries.size() != recomputed.entries.size())
            throw std::invalid_argument("lambda entry count mismatch");
        for (size_t i = 0; i < entries.size(); ++i) {
            const json &e = entries.at(i);
            const LambdaEntry &want = recomputed.entries[i];
            if (parse_exponents(e.at("beta"), ctx->arity()) != want.beta)
                throw std::invalid_argument("lambda entry order mismatch");
            if (e.at("p").get<std::vector<long>>() != want.p ||
                e.at("delta").get<long>() != want.delta)
                throw std::invalid_argument("delta data mismatch");
            if (!e.at("bound_ok").get<bool>() || !want.bound_ok)
                throw std::invalid_argument("delta bound violated");
            if (parse_cyclo(e.at("geometric"), structure->field) != want.geometric ||
                parse_cyclo(e.at("direct"), structure->field) != want.direct)
                throw std::invalid_argument("stored sums differ from recomputation");
            if (!e.at("vanishes").get<bool>() || !want.vanishes)
                throw std::invalid_argument("lambda sum does not vanish");
        }
        if (!l.at("ok").get<bool>() || !recomputed.ok)
            throw std::invalid_argument("lambda ok flag inconsistent");
    });

    guard("search", [&] {
        if (doc.at("search").is_null()) return;
        const json &s = doc.at("search");
        int expected_degree = 1;
        for (const json &entry : s.at("entries")) {
            if (entry.at("degree").get<int>() != expected_degree++)
                throw std::invalid_argument("search degrees are not 1..D");
            SearchStatus status = parse_status(entry.at("status").get<std::string>());
            size_t pair_count = entry.at("pairs").size();
            size_t undecided = entry.at("undecided").size();
            if (status == SearchStatus::None && (pair_count > 0 || undecided > 0))
                throw std::invalid_argument("NONE entry with pairs or residuals");
            if (status == SearchStatus::Found && (pair_count == 0 || undecided > 0))
                throw std::invalid_argument("FOUND entry without pairs or with residuals");
            if (status == SearchStatus::Undecided && undecided == 0)
                throw std::invalid_argument("UNDECIDED entry without residuals");
            for (const json &pj : entry.at("pairs")) {
                QPolynomial f = parse_qpoly(pj.at("f"), ctx);
                QPolynomial cof = parse_qpoly(pj.at("cofactor"), ctx);
                if (!verify_darboux(*d, f, cof))
                    throw std::invalid_argument("stored pair fails d(f) = lambda f");
            }
        }
    });

    guard("witness", [&] {
        if (doc.at("witness").is_null()) return;
        if (!structure) throw std::invalid_argument("witness without structure");
        const json &w = doc.at("witness");
        QPolynomial f = parse_qpoly(w.at("f"), ctx);
        QPolynomial cof = parse_qpoly(w.at("cofactor"), ctx);
        if (!verify_darboux(*d, f, cof))
            throw std::invalid_argument("witness pair fails d(f) = lambda f");
        CPolynomial F = parse_cpoly(w.at("F"), ctx, structure->field);
        CPolynomial f_ext = embed_in_field(f, structure->field);
        CPolynomial expected = f_ext;
        for (long m = 1; m < structure->N; ++m)
            expected = expected * structure->sigma.power(m)(f_ext);
        if (!(F == expected))
            throw std::invalid_argument("stored F is not the orbit product of f");
        if (!apply(*d, F, structure->field).is_zero())
            throw std::invalid_argument("d(F) != 0");
        if (F.is_constant()) throw std::invalid_argument("witness F is constant");
        if (!w.at("F_rational").is_null()) {
            QPolynomial fr = parse_qpoly(w.at("F_rational"), ctx);
            if (!(embed_in_field(fr, structure->field) == F))
                throw std::invalid_argument("F_rational disagrees with F");
        }
    });

    return result;
}

RecheckResult recheck_certificate_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        RecheckResult r;
        r.fail("cannot open '" + path + "'");
        return r;
    }
    json doc;
    try {
        in >> doc;
    } catch (const std::exception &e) {
        RecheckResult r;
        r.fail(std::string("json parse error: ") + e.what());
        return r;
    }
    return recheck_certificate(doc);
}

} // namespace cyclo
