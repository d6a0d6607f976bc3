// cyclo-darboux: exact workbench for monomial derivations -- Darboux
// polynomial search, cyclic block structure certificates, and orbit-product
// constants.
//
// Exit codes: 0 success, 1 verification failure, 2 usage or parse error,
// 3 search left UNDECIDED degrees.

#include "CLI11.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include "cyclo/certificate_io.hpp"
#include "cyclo/certify.hpp"
#include "cyclo/darboux.hpp"
#include "cyclo/derivation.hpp"
#include "cyclo/dsl.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kVerifyFail = 1;
constexpr int kUsage = 2;
constexpr int kUndecided = 3;

std::string read_input(const std::string &path) {
    if (path == "-") {
        std::ostringstream buf;
        buf << std::cin.rdbuf();
        return buf.str();
    }
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

cyclo::MonomialDerivation load_derivation(const std::string &path) {
    return cyclo::parse_derivation_spec(read_input(path));
}

void print_matrix(const cyclo::RationalMatrix &m) {
    for (int i = 0; i < m.rows(); ++i) {
        std::cout << "  [";
        for (int j = 0; j < m.cols(); ++j) {
            if (j) std::cout << ", ";
            std::cout << m.at(i, j).str();
        }
        std::cout << "]\n";
    }
}

void print_partition(const cyclo::CyclotomicPartition &p, const cyclo::ContextPtr &ctx) {
    std::cout << "  k = " << p.k << "\n";
    auto members = p.members();
    for (int c = 0; c < p.k; ++c) {
        std::cout << "  S_" << (c + 1) << " = {";
        for (size_t i = 0; i < members[static_cast<size_t>(c)].size(); ++i) {
            if (i) std::cout << ", ";
            std::cout << ctx->name(members[static_cast<size_t>(c)][i]);
        }
        std::cout << "}\n";
    }
}

void print_search_report(const cyclo::SearchReport &report) {
    for (const auto &entry : report.entries) {
        std::cout << "degree " << entry.degree << ": " << cyclo::status_name(entry.status) << "\n";
        for (const auto &pr : entry.pairs)
            std::cout << "  f = " << pr.f.str() << "   cofactor = " << pr.cofactor.str() << "\n";
        for (const auto &residual : entry.undecided_branches)
            std::cout << "  residual: " << residual << "\n";
    }
}

int cmd_analyze(const std::string &spec) {
    cyclo::MonomialDerivation d = load_derivation(spec);
    std::cout << cyclo::print_derivation_spec(d);

    auto h = cyclo::homogeneity_degree(d);
    if (h)
        std::cout << "homogeneous: yes (image degree s = " << *h + 1 << ", derivation degree s-1 = "
                  << *h << ")\n";
    else
        std::cout << "homogeneous: no\n";

    cyclo::ExponentMatrixResult mat = cyclo::exponent_matrix_and_wd(d);
    if (!mat.unit_coefficients)
        std::cout << "warning: image coefficients are not all 1; A uses exponents only\n";
    std::cout << "A = [alpha_ij] - I:\n";
    print_matrix(mat.A);
    std::cout << "w_d = " << mat.wd.str() << "\n";

    cyclo::CyclotomicDetection det = cyclo::detect_cyclotomic(d);
    std::cout << "discrepancy gcd: " << det.discrepancy_gcd << "\n";
    if (det.feasible_k.empty()) {
        std::cout << "cyclic block partition: none\n";
        return kOk;
    }
    std::cout << "feasible k:";
    for (int k : det.feasible_k) std::cout << " " << k;
    std::cout << "\npartition for k = " << det.partition->k << ":\n";
    print_partition(*det.partition, d.context());
    return kOk;
}

int cmd_darboux(const std::string &spec, int max_degree, bool monomial_only, long branch_cap) {
    cyclo::MonomialDerivation d = load_derivation(spec);
    cyclo::SearchConfig config;
    config.monomial_only = monomial_only;
    config.branch_cap = branch_cap;
    cyclo::SearchReport report = cyclo::search_up_to(d, max_degree, config);
    print_search_report(report);
    return report.any_undecided() ? kUndecided : kOk;
}

int cmd_certify(const std::string &spec, int max_degree, std::optional<int> k,
                const std::string &out_path, long branch_cap) {
    cyclo::MonomialDerivation d = load_derivation(spec);
    cyclo::PipelineOptions options;
    options.requested_k = k;
    options.search.branch_cap = branch_cap;
    cyclo::Certificate cert = cyclo::theorem_pipeline(d, max_degree, options);

    for (const auto &note : cert.notes) std::cout << "note: " << note << "\n";
    if (cert.certified_partition) {
        std::cout << "partition:\n";
        print_partition(*cert.certified_partition, d.context());
    }
    if (cert.structure) {
        std::cout << "s = " << cert.structure->s << ", N = " << cert.structure->N << ", q =";
        for (long qi : cert.structure->q) std::cout << " " << qi;
        std::cout << "\n";
    }
    if (cert.conjugation)
        std::cout << "conjugation sigma^-1 d sigma = zeta d: "
                  << (cert.conjugation->ok ? "verified" : "FAILED") << "\n";
    if (cert.lambda_cert)
        std::cout << "Lambda vanishing certificate: " << (cert.lambda_cert->ok ? "verified" : "FAILED")
                  << "\n";
    if (cert.search) print_search_report(*cert.search);
    if (cert.witness) {
        std::cout << "orbit witness from degree " << cert.witness->found_degree
                  << ": f = " << cert.witness->pair.f.str() << "\n";
        if (cert.witness->orbit.F_rational)
            std::cout << "F = " << cert.witness->orbit.F_rational->str() << " (rational)\n";
        else
            std::cout << "F = " << cert.witness->orbit.F.str() << "\n";
    }

    if (!out_path.empty()) {
        cyclo::write_certificate(cert, out_path);
        std::cout << "certificate written to " << out_path << "\n";
    }

    bool structure_expected = cert.certified_partition.has_value();
    if (structure_expected && !cert.structure_certified()) return kVerifyFail;
    if (!structure_expected) return kVerifyFail; // nothing certifiable about this derivation
    if (cert.any_undecided()) return kUndecided;
    return kOk;
}

int cmd_orbit(const std::string &spec, const std::string &f_text, const std::string &lambda_text,
              std::optional<int> k) {
    cyclo::MonomialDerivation d = load_derivation(spec);
    cyclo::QPolynomial f = cyclo::parse_polynomial(f_text, d.context());
    cyclo::QPolynomial lambda = cyclo::parse_polynomial(lambda_text, d.context());

    if (f.is_constant()) {
        std::cerr << "error: f must be non-constant\n";
        return kUsage;
    }
    if (!cyclo::verify_darboux(d, f, lambda)) {
        std::cerr << "error: d(f) != lambda * f; pair does not verify\n";
        return kVerifyFail;
    }
    std::cout << "pair verified: d(f) = lambda * f\n";

    std::optional<cyclo::CyclotomicPartition> partition =
        k ? cyclo::partition_for_k(d, *k) : cyclo::detect_cyclotomic_partition(d);
    if (!partition) {
        std::cerr << "error: no cyclic block partition available\n";
        return kVerifyFail;
    }
    cyclo::CyclotomicStructure st = cyclo::build_structure(d, *partition);
    if (!cyclo::check_conjugation(d, st).ok) {
        std::cerr << "error: conjugation certificate failed\n";
        return kVerifyFail;
    }
    cyclo::OrbitWitness witness = cyclo::orbit_product(d, st, {f, lambda});
    std::cout << "N = " << st.N << "\n";
    if (witness.F_rational)
        std::cout << "F = " << witness.F_rational->str() << "\n";
    else
        std::cout << "F = " << witness.F.str() << "\n";
    std::cout << "d(F) = 0 verified\n";
    return kOk;
}

std::vector<std::vector<std::vector<int>>> parse_tables_file(const std::string &path,
                                                             const std::vector<int> &sizes) {
    std::string text = read_input(path);
    std::vector<std::vector<int>> rows;
    std::istringstream lines(text);
    std::string line;
    while (std::getline(lines, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        std::istringstream fields(line);
        std::vector<int> row;
        int value;
        while (fields >> value) row.push_back(value);
        if (!fields.eof())
            throw std::invalid_argument("tables: non-integer field in line '" + line + "'");
        if (!row.empty()) rows.push_back(std::move(row));
    }
    std::vector<std::vector<std::vector<int>>> tables;
    size_t next = 0;
    for (size_t i = 0; i < sizes.size(); ++i) {
        std::vector<std::vector<int>> block;
        for (int j = 0; j < sizes[i]; ++j) {
            if (next >= rows.size()) throw std::invalid_argument("tables: too few rows");
            block.push_back(rows[next++]);
        }
        tables.push_back(std::move(block));
    }
    if (next != rows.size()) throw std::invalid_argument("tables: too many rows");
    return tables;
}

int cmd_recheck(const std::string &path) {
    cyclo::RecheckResult result = cyclo::recheck_certificate_file(path);
    if (result.ok) {
        std::cout << "certificate re-verified\n";
        return kOk;
    }
    for (const auto &f : result.failures) std::cout << "FAIL " << f << "\n";
    return kVerifyFail;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"exact Darboux/cyclotomic workbench for monomial derivations"};
    app.require_subcommand(1);

    std::string spec, spec_b, out_path, f_text, lambda_text, tables_path, cert_path;
    int max_degree = 1, gen_n = 3, gen_s = 2;
    long branch_cap = 4096;
    bool monomial_only = false;
    int requested_k = 0;
    std::vector<int> sizes;

    CLI::App *analyze = app.add_subcommand("analyze", "homogeneity, A, w_d, block partition");
    analyze->add_option("spec", spec, "derivation spec file or - for stdin")->required();

    CLI::App *darboux = app.add_subcommand("darboux", "degree-bounded Darboux search");
    darboux->add_option("spec", spec)->required();
    darboux->add_option("--max-degree", max_degree, "search degrees 1..D")->required();
    darboux->add_flag("--monomial-cofactors-only", monomial_only, "fast path only");
    darboux->add_option("--branch-cap", branch_cap, "case-split budget per degree");

    CLI::App *certify = app.add_subcommand("certify", "full certificate pipeline");
    certify->add_option("spec", spec)->required();
    certify->add_option("--max-degree", max_degree)->required();
    certify->add_option("--k", requested_k, "certify this block count instead of the detected maximum");
    certify->add_option("--out", out_path, "write the JSON certificate here");
    certify->add_option("--branch-cap", branch_cap);

    CLI::App *orbit = app.add_subcommand("orbit", "verify a pair and print the orbit product");
    orbit->add_option("spec", spec)->required();
    orbit->add_option("--f", f_text, "Darboux polynomial")->required();
    orbit->add_option("--lambda", lambda_text, "its cofactor")->required();
    orbit->add_option("--k", requested_k);

    CLI::App *gen = app.add_subcommand("gen", "emit a derivation spec");
    gen->require_subcommand(1);
    CLI::App *gen_j = gen->add_subcommand("jouanolou", "cyclic d(x_i) = x_{i+1}^s");
    gen_j->add_option("--n", gen_n)->required();
    gen_j->add_option("--s", gen_s)->required();
    CLI::App *gen_c = gen->add_subcommand("cyclotomic", "block-cyclic derivation from tables");
    gen_c->add_option("--sizes", sizes, "part sizes t_1,...,t_k")->required()->delimiter(',');
    gen_c->add_option("--tables", tables_path, "exponent rows, one line per variable")->required();

    CLI::App *tensor = app.add_subcommand("tensor", "direct sum of two derivation specs");
    tensor->add_option("specA", spec)->required();
    tensor->add_option("specB", spec_b)->required();

    CLI::App *recheck = app.add_subcommand("recheck", "independently re-verify a certificate file");
    recheck->add_option("certificate", cert_path)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return kUsage;
    }

    try {
        if (*analyze) return cmd_analyze(spec);
        if (*darboux) return cmd_darboux(spec, max_degree, monomial_only, branch_cap);
        if (*certify)
            return cmd_certify(spec, max_degree,
                               requested_k > 0 ? std::optional<int>(requested_k) : std::nullopt,
                               out_path, branch_cap);
        if (*orbit)
            return cmd_orbit(spec, f_text, lambda_text,
                             requested_k > 0 ? std::optional<int>(requested_k) : std::nullopt);
        if (*gen_j) {
            std::cout << cyclo::print_derivation_spec(cyclo::gen_jouanolou(gen_n, gen_s));
            return kOk;
        }
        if (*gen_c) {
            auto tables = parse_tables_file(tables_path, sizes);
            std::cout << cyclo::print_derivation_spec(cyclo::gen_generalized_cyclotomic(sizes, tables));
            return kOk;
        }
        if (*tensor) {
            cyclo::MonomialDerivation a = load_derivation(spec);
            cyclo::MonomialDerivation b = load_derivation(spec_b);
            std::cout << cyclo::print_derivation_spec(cyclo::direct_sum(a, b));
            return kOk;
        }
        if (*recheck) return cmd_recheck(cert_path);
    } catch (const cyclo::ParseError &e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::invalid_argument &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kVerifyFail;
    }
    return kUsage;
}
