/*
 * certificate_io.hpp
 * ------------------
 * Versioned JSON certificate files (schema "cyclo-darboux/1") and the
 * independent re-checker. Every number is exact: rationals are
 * "num/den" strings, cyclotomic numbers are coefficient-vector arrays.
 * The re-checker recomputes each claim from the raw data in the file
 * using only field/polynomial operations; it never re-runs the search.
 */
#ifndef CYCLO_CERTIFICATE_IO_HPP
#define CYCLO_CERTIFICATE_IO_HPP

#include <nlohmann/json.hpp>

#include <string>
#include <vector>

#include "cyclo/certify.hpp"

namespace cyclo {

inline constexpr const char *kCertificateSchema = "cyclo-darboux/1";

nlohmann::ordered_json certificate_to_json(const Certificate &cert);
void write_certificate(const Certificate &cert, const std::string &path);

struct RecheckResult {
    bool ok = true;
    std::vector<std::string> failures;

    void fail(std::string what) {
        ok = false;
        failures.push_back(std::move(what));
    }
};

RecheckResult recheck_certificate(const nlohmann::json &doc);
RecheckResult recheck_certificate_file(const std::string &path);

} // namespace cyclo

#endif
