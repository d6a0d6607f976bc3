#include "cyclo/dsl.hpp"

#include <cctype>
#include <map>
#include <vector>

namespace cyclo {

namespace {

enum class Tok { Ident, Number, Comma, Semi, LParen, RParen, Equals, Star, Caret, Plus, Minus, Slash, End };

struct Token {
    Tok kind;
    std::string text;
    int line, col;
};

class Lexer {
  public:
    explicit Lexer(const std::string &text) : text_(text) { advance(); }

    const Token &peek() const { return current_; }

    Token next() {
        Token t = current_;
        advance();
        return t;
    }

    [[noreturn]] void fail(const std::string &message) const {
        throw ParseError(message, current_.line, current_.col);
    }

  private:
    void advance() {
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (c == '#') {
                while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
                continue;
            }
            if (c == '\n') {
                ++line_;
                col_ = 1;
                ++pos_;
                continue;
            }
            if (std::isspace(static_cast<unsigned char>(c))) {
                ++col_;
                ++pos_;
                continue;
            }
            break;
        }
        current_.line = line_;
        current_.col = col_;
        if (pos_ >= text_.size()) {
            current_ = {Tok::End, "", line_, col_};
            return;
        }
        char c = text_[pos_];
        auto single = [&](Tok k) {
            current_ = {k, std::string(1, c), line_, col_};
            ++pos_;
            ++col_;
        };
        switch (c) {
            case ',': single(Tok::Comma); return;
            case ';': single(Tok::Semi); return;
            case '(': single(Tok::LParen); return;
            case ')': single(Tok::RParen); return;
            case '=': single(Tok::Equals); return;
            case '*': single(Tok::Star); return;
            case '^': single(Tok::Caret); return;
            case '+': single(Tok::Plus); return;
            case '-': single(Tok::Minus); return;
            case '/': single(Tok::Slash); return;
            default: break;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            size_t start = pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                ++pos_;
                ++col_;
            }
            current_ = {Tok::Number, text_.substr(start, pos_ - start), line_, current_.col};
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            size_t start = pos_;
            while (pos_ < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
                ++pos_;
                ++col_;
            }
            current_ = {Tok::Ident, text_.substr(start, pos_ - start), line_, current_.col};
            return;
        }
        throw ParseError(std::string("unexpected character '") + c + "'", line_, col_);
    }

    std::string text_;
    size_t pos_ = 0;
    int line_ = 1, col_ = 1;
    Token current_{Tok::End, "", 1, 1};
};

struct Term {
    Rational coeff;
    std::map<std::string, int> powers;
};

class Parser {
  public:
    explicit Parser(const std::string &text) : lex_(text) {}

    MonomialDerivation derivation() {
        expect_keyword("vars");
        std::vector<std::string> names;
        names.push_back(expect(Tok::Ident, "variable name").text);
        while (lex_.peek().kind == Tok::Comma) {
            lex_.next();
            names.push_back(expect(Tok::Ident, "variable name").text);
        }
        expect(Tok::Semi, "';' after variable list");

        ContextPtr ctx;
        try {
            ctx = make_context(names);
        } catch (const std::invalid_argument &e) {
            lex_.fail(e.what());
        }

        std::map<std::string, MonomialImage> images;
        while (lex_.peek().kind != Tok::End) {
            Token dkw = expect(Tok::Ident, "'d'");
            if (dkw.text != "d") throw ParseError("expected 'd(<var>) = ...'", dkw.line, dkw.col);
            expect(Tok::LParen, "'('");
            Token var = expect(Tok::Ident, "variable name");
            if (ctx->index_of(var.text) < 0)
                throw ParseError("undeclared variable '" + var.text + "'", var.line, var.col);
            if (images.count(var.text))
                throw ParseError("duplicate image for '" + var.text + "'", var.line, var.col);
            expect(Tok::RParen, "')'");
            expect(Tok::Equals, "'='");
            Term t = term(*ctx);
            if (lex_.peek().kind == Tok::Plus || lex_.peek().kind == Tok::Minus)
                lex_.fail("image must be a single monomial");
            expect(Tok::Semi, "';' after image");
            if (t.coeff.is_zero()) throw ParseError("image coefficient is zero", var.line, var.col);
            ExponentVector e(static_cast<size_t>(ctx->arity()));
            for (const auto &[name, power] : t.powers)
                e[static_cast<size_t>(ctx->index_of(name))] = power;
            images.emplace(var.text, MonomialImage{t.coeff, std::move(e)});
        }

        std::vector<MonomialImage> ordered;
        for (const auto &name : ctx->names()) {
            auto it = images.find(name);
            if (it == images.end())
                lex_.fail("missing image for variable '" + name + "'");
            ordered.push_back(it->second);
        }
        return MonomialDerivation(ctx, std::move(ordered));
    }

    QPolynomial polynomial(const ContextPtr &ctx) {
        QPolynomial out(ctx);
        bool negative = false;
        if (lex_.peek().kind == Tok::Plus || lex_.peek().kind == Tok::Minus)
            negative = lex_.next().kind == Tok::Minus;
        while (true) {
            Term t = term(*ctx);
            ExponentVector e(static_cast<size_t>(ctx->arity()));
            for (const auto &[name, power] : t.powers)
                e[static_cast<size_t>(ctx->index_of(name))] = power;
            out.add_term(e, negative ? -t.coeff : t.coeff);
            if (lex_.peek().kind == Tok::Plus || lex_.peek().kind == Tok::Minus) {
                negative = lex_.next().kind == Tok::Minus;
                continue;
            }
            break;
        }
        expect(Tok::End, "end of polynomial");
        return out;
    }

  private:
    Token expect(Tok kind, const std::string &what) {
        if (lex_.peek().kind != kind) lex_.fail("expected " + what);
        return lex_.next();
    }

    void expect_keyword(const std::string &kw) {
        Token t = expect(Tok::Ident, "'" + kw + "'");
        if (t.text != kw) throw ParseError("expected '" + kw + "'", t.line, t.col);
    }

    Rational number() {
        Token n = expect(Tok::Number, "number");
        mpz_class num(n.text);
        if (lex_.peek().kind == Tok::Slash) {
            lex_.next();
            Token d = expect(Tok::Number, "denominator");
            mpz_class den(d.text);
            if (den == 0) throw ParseError("zero denominator", d.line, d.col);
            return Rational(num, den);
        }
        return Rational(num);
    }

    // coeff? factor (* factor)* with factor = ident[^int]; bare coeff is the
    // constant monomial.
    Term term(const VariableContext &ctx) {
        Term t;
        t.coeff = Rational(1);
        bool saw_sign = false;
        while (lex_.peek().kind == Tok::Minus || lex_.peek().kind == Tok::Plus) {
            if (lex_.next().kind == Tok::Minus) t.coeff = -t.coeff;
            saw_sign = true;
        }
        bool any = false;
        if (lex_.peek().kind == Tok::Number) {
            t.coeff = t.coeff * number();
            any = true;
            if (lex_.peek().kind == Tok::Star) lex_.next();
            else if (lex_.peek().kind != Tok::Ident) return t; // pure constant
        }
        while (true) {
            if (lex_.peek().kind != Tok::Ident) break;
            Token var = lex_.next();
            if (ctx.index_of(var.text) < 0)
                throw ParseError("undeclared variable '" + var.text + "'", var.line, var.col);
            int power = 1;
            if (lex_.peek().kind == Tok::Caret) {
                lex_.next();
                Token e = expect(Tok::Number, "exponent");
                power = std::stoi(e.text);
            }
            t.powers[var.text] += power;
            any = true;
            if (lex_.peek().kind == Tok::Star) {
                lex_.next();
                if (lex_.peek().kind == Tok::Number) {
                    t.coeff = t.coeff * number();
                    if (lex_.peek().kind == Tok::Star) lex_.next();
                }
                continue;
            }
            if (lex_.peek().kind == Tok::Ident) continue; // juxtaposition: 2x y
            break;
        }
        if (!any) {
            if (saw_sign) lex_.fail("expected a term after sign");
            lex_.fail("expected a monomial");
        }
        return t;
    }

    Lexer lex_;
};

} // namespace

MonomialDerivation parse_derivation_spec(const std::string &text) {
    return Parser(text).derivation();
}

std::string print_derivation_spec(const MonomialDerivation &d) {
    std::string out = "vars ";
    const auto &names = d.context()->names();
    for (size_t i = 0; i < names.size(); ++i) {
        if (i) out += ", ";
        out += names[i];
    }
    out += ";\n";
    for (int v = 0; v < d.arity(); ++v)
        out += "d(" + names[static_cast<size_t>(v)] + ") = " + d.image_poly(v).str() + ";\n";
    return out;
}

QPolynomial parse_polynomial(const std::string &text, const ContextPtr &ctx) {
    return Parser(text).polynomial(ctx);
}

} // namespace cyclo
