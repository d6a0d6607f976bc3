#include "cyclo/upoly.hpp"

#include <stdexcept>

namespace cyclo {

void ztrim(ZPoly &p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}

int zdegree(const ZPoly &p) { return static_cast<int>(p.size()) - 1; }

ZPoly zmul(const ZPoly &a, const ZPoly &b) {
    if (a.empty() || b.empty()) return {};
    ZPoly out(a.size() + b.size() - 1, mpz_class(0));
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    ztrim(out);
    return out;
}

std::optional<ZPoly> zdiv_exact(const ZPoly &a, const ZPoly &b) {
    if (b.empty()) throw std::domain_error("zdiv_exact: division by zero polynomial");
    ZPoly rem = a;
    ztrim(rem);
    if (rem.empty()) return ZPoly{};
    if (rem.size() < b.size()) return std::nullopt;
    ZPoly quo(rem.size() - b.size() + 1, mpz_class(0));
    const mpz_class &lead = b.back();
    for (int k = static_cast<int>(quo.size()) - 1; k >= 0; --k) {
        mpz_class top = rem[k + b.size() - 1];
        if (top == 0) continue;
        mpz_class q, r;
        mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), top.get_mpz_t(), lead.get_mpz_t());
        if (r != 0) return std::nullopt;
        quo[k] = q;
        for (size_t j = 0; j < b.size(); ++j) rem[k + j] -= q * b[j];
    }
    for (const auto &c : rem)
        if (c != 0) return std::nullopt;
    ztrim(quo);
    return quo;
}

ZPoly zpow_minus_one(long n) {
    ZPoly p(static_cast<size_t>(n) + 1, mpz_class(0));
    p[0] = -1;
    p[static_cast<size_t>(n)] = 1;
    return p;
}

void qtrim(QPoly &p) {
    while (!p.empty() && p.back().is_zero()) p.pop_back();
}

int qdegree(const QPoly &p) { return static_cast<int>(p.size()) - 1; }

bool qis_zero(const QPoly &p) {
    for (const auto &c : p)
        if (!c.is_zero()) return false;
    return true;
}

QPoly qadd(const QPoly &a, const QPoly &b) {
    QPoly out(std::max(a.size(), b.size()));
    for (size_t i = 0; i < out.size(); ++i) {
        if (i < a.size()) out[i] += a[i];
        if (i < b.size()) out[i] += b[i];
    }
    qtrim(out);
    return out;
}

QPoly qsub(const QPoly &a, const QPoly &b) {
    QPoly out(std::max(a.size(), b.size()));
    for (size_t i = 0; i < out.size(); ++i) {
        if (i < a.size()) out[i] += a[i];
        if (i < b.size()) out[i] -= b[i];
    }
    qtrim(out);
    return out;
}

QPoly qmul(const QPoly &a, const QPoly &b) {
    if (a.empty() || b.empty()) return {};
    QPoly out(a.size() + b.size() - 1);
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i].is_zero()) continue;
        for (size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    }
    qtrim(out);
    return out;
}

QPoly qscale(const QPoly &a, const Rational &c) {
    if (c.is_zero()) return {};
    QPoly out(a.size());
    for (size_t i = 0; i < a.size(); ++i) out[i] = a[i] * c;
    qtrim(out);
    return out;
}

std::pair<QPoly, QPoly> qdivmod(const QPoly &a, const QPoly &b) {
    if (b.empty()) throw std::domain_error("qdivmod: division by zero polynomial");
    QPoly rem = a, quo;
    qtrim(rem);
    if (rem.size() >= b.size()) {
        quo.assign(rem.size() - b.size() + 1, Rational());
        Rational inv = b.back().inverse();
        for (int k = static_cast<int>(quo.size()) - 1; k >= 0; --k) {
            Rational c = rem[k + b.size() - 1] * inv;
            if (c.is_zero()) continue;
            quo[k] = c;
            for (size_t j = 0; j < b.size(); ++j) rem[k + j] -= c * b[j];
        }
    }
    qtrim(quo);
    qtrim(rem);
    return {quo, rem};
}

Rational qeval(const QPoly &p, const Rational &x) {
    Rational acc;
    for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * x + *it;
    return acc;
}

QPoly qderivative(const QPoly &p) {
    QPoly out;
    for (size_t i = 1; i < p.size(); ++i) out.push_back(p[i] * Rational(static_cast<long>(i)));
    qtrim(out);
    return out;
}

QPoly qgcd(const QPoly &a, const QPoly &b) {
    QPoly f = a, g = b;
    qtrim(f);
    qtrim(g);
    while (!g.empty()) {
        QPoly r = qdivmod(f, g).second;
        f = std::move(g);
        g = std::move(r);
    }
    if (!f.empty()) {
        Rational inv = f.back().inverse();
        for (auto &c : f) c *= inv;
    }
    return f;
}

QPoly qfrom_z(const ZPoly &p) {
    QPoly out;
    out.reserve(p.size());
    for (const auto &c : p) out.emplace_back(c);
    qtrim(out);
    return out;
}

std::string qpoly_str(const QPoly &p, const std::string &var) {
    if (p.empty()) return "0";
    std::string out;
    for (int i = qdegree(p); i >= 0; --i) {
        const Rational &c = p[static_cast<size_t>(i)];
        if (c.is_zero()) continue;
        bool first = out.empty();
        Rational mag = c.abs();
        if (!first) out += c.sign() < 0 ? " - " : " + ";
        else if (c.sign() < 0) out += "-";
        bool unit = mag.is_one() && i != 0;
        if (!unit) out += mag.str();
        if (i > 0) {
            if (!unit) out += "*";
            out += var;
            if (i > 1) out += "^" + std::to_string(i);
        }
    }
    return out;
}

} // namespace cyclo
