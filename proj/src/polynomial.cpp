#include "cyclo/polynomial.hpp"

#include <set>

namespace cyclo {

VariableContext::VariableContext(std::vector<std::string> names) : names_(std::move(names)) {
    if (names_.empty()) throw std::invalid_argument("VariableContext: no variables");
    std::set<std::string> seen;
    for (const auto &n : names_) {
        if (n.empty()) throw std::invalid_argument("VariableContext: empty variable name");
        if (!seen.insert(n).second)
            throw std::invalid_argument("VariableContext: duplicate variable '" + n + "'");
    }
}

int VariableContext::index_of(const std::string &name) const {
    for (size_t i = 0; i < names_.size(); ++i)
        if (names_[i] == name) return static_cast<int>(i);
    return -1;
}

ContextPtr make_context(std::vector<std::string> names) {
    return std::make_shared<const VariableContext>(std::move(names));
}

namespace {

void fill_basis(int arity, int pos, int remaining, ExponentVector &current,
                std::vector<ExponentVector> &out) {
    if (pos == arity - 1) {
        current[static_cast<size_t>(pos)] = remaining;
        out.push_back(current);
        return;
    }
    for (int e = remaining; e >= 0; --e) {
        current[static_cast<size_t>(pos)] = e;
        fill_basis(arity, pos + 1, remaining - e, current, out);
    }
}

} // namespace

std::vector<ExponentVector> monomial_basis(int arity, int m) {
    if (m < 0) throw std::invalid_argument("monomial_basis: negative degree");
    if (arity < 1) throw std::invalid_argument("monomial_basis: empty context");
    std::vector<ExponentVector> out;
    ExponentVector current(static_cast<size_t>(arity));
    fill_basis(arity, 0, m, current, out);
    return out;
}

DiagonalAutomorphism::DiagonalAutomorphism(ContextPtr ctx, FieldPtr field,
                                           std::vector<CycloNum> scales)
    : ctx_(std::move(ctx)), field_(std::move(field)), scales_(std::move(scales)) {
    if (static_cast<int>(scales_.size()) != ctx_->arity())
        throw std::invalid_argument("DiagonalAutomorphism: one scale per variable required");
    for (const auto &s : scales_)
        if (s.is_zero()) throw std::invalid_argument("DiagonalAutomorphism: zero scale");
}

DiagonalAutomorphism DiagonalAutomorphism::identity(const ContextPtr &ctx, const FieldPtr &f) {
    return DiagonalAutomorphism(ctx, f,
                                std::vector<CycloNum>(static_cast<size_t>(ctx->arity()),
                                                      CycloNum::one(f)));
}

DiagonalAutomorphism DiagonalAutomorphism::inverse() const {
    std::vector<CycloNum> inv;
    inv.reserve(scales_.size());
    for (const auto &s : scales_) inv.push_back(s.inverse());
    return DiagonalAutomorphism(ctx_, field_, std::move(inv));
}

DiagonalAutomorphism DiagonalAutomorphism::power(long m) const {
    std::vector<CycloNum> p;
    p.reserve(scales_.size());
    for (const auto &s : scales_) p.push_back(s.pow(m));
    return DiagonalAutomorphism(ctx_, field_, std::move(p));
}

bool DiagonalAutomorphism::is_identity() const {
    for (const auto &s : scales_)
        if (!s.is_one()) return false;
    return true;
}

CPolynomial DiagonalAutomorphism::operator()(const CPolynomial &p) const {
    check_same_context(ctx_, p.context());
    CPolynomial out(ctx_);
    for (const auto &[e, c] : p.terms()) {
        CycloNum factor = c;
        for (size_t i = 0; i < e.size(); ++i)
            if (e[i] != 0) factor = factor * scales_[i].pow(e[i]);
        out.add_term(e, factor);
    }
    return out;
}

} // namespace cyclo
