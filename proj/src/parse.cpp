#include "folab/parse.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <vector>

#include "folab/errors.hpp"

namespace folab {

namespace {

struct Token {
    enum Kind { Ident, Number, Plus, Minus, Caret, LParen, RParen, Comma, Equals, End } kind;
    std::string text;
    double num = 0;
    int line = 1, col = 1;
};

class Lexer {
public:
    explicit Lexer(const std::string& s) : s_(s) { advance(); }
    const Token& peek() const { return tok_; }
    Token next() {
        Token t = tok_;
        advance();
        return t;
    }

    struct State {
        std::size_t pos;
        int line, col;
        Token tok;
    };
    State state() const { return {pos_, line_, col_, tok_}; }
    void restore(const State& st) {
        pos_ = st.pos;
        line_ = st.line;
        col_ = st.col;
        tok_ = st.tok;
    }

private:
    void advance() {
        while (pos_ < s_.size()) {
            char c = s_[pos_];
            if (c == '#') {
                while (pos_ < s_.size() && s_[pos_] != '\n') ++pos_;
                continue;
            }
            if (c == '\n') {
                ++line_;
                col_ = 1;
                ++pos_;
                continue;
            }
            if (c == ' ' || c == '\t' || c == '\r') {
                ++col_;
                ++pos_;
                continue;
            }
            break;
        }
        tok_.line = line_;
        tok_.col = col_;
        if (pos_ >= s_.size()) {
            tok_.kind = Token::End;
            return;
        }
        char c = s_[pos_];
        auto single = [&](Token::Kind k) {
            tok_.kind = k;
            tok_.text = std::string(1, c);
            ++pos_;
            ++col_;
        };
        if (std::isalpha(static_cast<unsigned char>(c))) {
            std::size_t b = pos_;
            while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) {
                ++pos_;
                ++col_;
            }
            tok_.kind = Token::Ident;
            tok_.text = s_.substr(b, pos_ - b);
            return;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            std::size_t b = pos_;
            while (pos_ < s_.size() &&
                   (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.' ||
                    s_[pos_] == 'e' || s_[pos_] == 'E' ||
                    ((s_[pos_] == '+' || s_[pos_] == '-') && pos_ > b &&
                     (s_[pos_ - 1] == 'e' || s_[pos_ - 1] == 'E')))) {
                ++pos_;
                ++col_;
            }
            tok_.kind = Token::Number;
            tok_.text = s_.substr(b, pos_ - b);
            try {
                tok_.num = std::stod(tok_.text);
            } catch (...) {
                throw ParseError(tok_.line, tok_.col, "bad numeric literal '" + tok_.text + "'");
            }
            return;
        }
        switch (c) {
            case '+': single(Token::Plus); return;
            case '-': single(Token::Minus); return;
            case '^': single(Token::Caret); return;
            case '(': single(Token::LParen); return;
            case ')': single(Token::RParen); return;
            case ',': single(Token::Comma); return;
            case '=': single(Token::Equals); return;
            default:
                throw ParseError(line_, col_, std::string("unexpected character '") + c + "'");
        }
    }

    const std::string& s_;
    std::size_t pos_ = 0;
    int line_ = 1, col_ = 1;
    Token tok_;
};

using Poly = std::map<std::pair<int, int>, Cplx>;

Poly pmul(const Poly& a, const Poly& b) {
    Poly r;
    for (const auto& [ma, ca] : a)
        for (const auto& [mb, cb] : b)
            r[{ma.first + mb.first, ma.second + mb.second}] += ca * cb;
    return r;
}

void padd(Poly& a, const Poly& b, Cplx s) {
    for (const auto& [m, c] : b) a[m] += c * s;
}

class Parser {
public:
    explicit Parser(const std::string& text) : lex_(text) {}

    OneForm parse() {
        expect_ident("omega");
        expect(Token::Equals, "'='");
        Poly adx, ady;
        double sign = 1;
        if (lex_.peek().kind == Token::Minus) {
            lex_.next();
            sign = -1;
        } else if (lex_.peek().kind == Token::Plus) {
            lex_.next();
        }
        parse_dterm(adx, ady, sign);
        while (lex_.peek().kind == Token::Plus || lex_.peek().kind == Token::Minus) {
            double s = lex_.next().kind == Token::Plus ? 1 : -1;
            parse_dterm(adx, ady, s);
        }
        if (lex_.peek().kind != Token::End)
            throw ParseError(lex_.peek().line, lex_.peek().col,
                             "unexpected trailing input '" + lex_.peek().text + "'");
        if (adx.empty() && ady.empty())
            throw ParseError(1, 1, "form has no terms");
        return build(adx, ady);
    }

private:
    void expect_ident(const std::string& name) {
        Token t = lex_.next();
        if (t.kind != Token::Ident || t.text != name)
            throw ParseError(t.line, t.col, "expected '" + name + "'");
    }
    void expect(Token::Kind k, const std::string& what) {
        Token t = lex_.next();
        if (t.kind != k) throw ParseError(t.line, t.col, "expected " + what);
    }

    // one differential term: [factors] (dx|dy)  or  d(<poly>)
    void parse_dterm(Poly& adx, Poly& ady, double sign) {
        // exact-differential sugar
        if (lex_.peek().kind == Token::Ident && lex_.peek().text == "d") {
            lex_.next();
            expect(Token::LParen, "'(' after d");
            Poly f = parse_poly();
            expect(Token::RParen, "')'");
            for (const auto& [m, c] : f) {
                auto [i, j] = m;
                if (i > 0) adx[{i - 1, j}] += c * double(i) * sign;
                if (j > 0) ady[{i, j - 1}] += c * double(j) * sign;
            }
            return;
        }
        Poly acc;
        acc[{0, 0}] = Cplx(sign);
        while (true) {
            const Token& t = lex_.peek();
            if (t.kind == Token::Ident && (t.text == "dx" || t.text == "dy")) {
                bool is_dx = t.text == "dx";
                lex_.next();
                padd(is_dx ? adx : ady, acc, Cplx(1));
                return;
            }
            if (t.kind == Token::End || t.kind == Token::Plus || t.kind == Token::Minus)
                throw ParseError(t.line, t.col, "term is missing its differential (dx or dy)");
            Poly f = parse_factor();
            acc = pmul(acc, f);
        }
    }

    Poly parse_poly() {
        Poly acc;
        double sign = 1;
        if (lex_.peek().kind == Token::Minus) {
            lex_.next();
            sign = -1;
        } else if (lex_.peek().kind == Token::Plus) {
            lex_.next();
        }
        padd(acc, parse_term(), Cplx(sign));
        while (lex_.peek().kind == Token::Plus || lex_.peek().kind == Token::Minus) {
            double s = lex_.next().kind == Token::Plus ? 1 : -1;
            padd(acc, parse_term(), Cplx(s));
        }
        return acc;
    }

    Poly parse_term() {
        Poly acc;
        acc[{0, 0}] = Cplx(1);
        bool any = false;
        while (true) {
            const Token& t = lex_.peek();
            bool starts_factor = t.kind == Token::Number || t.kind == Token::LParen ||
                                 (t.kind == Token::Ident && (t.text == "x" || t.text == "y"));
            if (!starts_factor) break;
            acc = pmul(acc, parse_factor());
            any = true;
        }
        if (!any)
            throw ParseError(lex_.peek().line, lex_.peek().col, "expected a term");
        return acc;
    }

    Poly parse_factor() {
        Token t = lex_.next();
        Poly p;
        if (t.kind == Token::Number) {
            p[{0, 0}] = Cplx(t.num);
            return p;
        }
        if (t.kind == Token::Ident && (t.text == "x" || t.text == "y")) {
            int e = parse_power();
            p[{t.text == "x" ? e : 0, t.text == "y" ? e : 0}] = Cplx(1);
            return p;
        }
        if (t.kind == Token::LParen) {
            // complex literal "(re, im)" or parenthesized polynomial
            if (lex_.peek().kind == Token::Number || lex_.peek().kind == Token::Minus ||
                lex_.peek().kind == Token::Plus) {
                // try complex literal: [sign] number , [sign] number )
                Lexer::State save = lex_.state();
                double re, im;
                if (try_signed_number(re) && lex_.peek().kind == Token::Comma) {
                    lex_.next();
                    if (!try_signed_number(im))
                        throw ParseError(lex_.peek().line, lex_.peek().col,
                                         "expected imaginary part of complex literal");
                    expect(Token::RParen, "')' closing complex literal");
                    int e = parse_power();
                    Cplx base(re, im), val(1);
                    for (int k = 0; k < e; ++k) val *= base;
                    p[{0, 0}] = val;
                    return p;
                }
                lex_.restore(save); // not a complex literal: fall through to poly
            }
            Poly inner = parse_poly();
            expect(Token::RParen, "')'");
            int e = parse_power();
            Poly acc;
            acc[{0, 0}] = Cplx(1);
            for (int k = 0; k < e; ++k) acc = pmul(acc, inner);
            return acc;
        }
        throw ParseError(t.line, t.col, "unexpected token '" + t.text + "'");
    }

    bool try_signed_number(double& out) {
        double sign = 1;
        if (lex_.peek().kind == Token::Minus) {
            lex_.next();
            sign = -1;
        } else if (lex_.peek().kind == Token::Plus) {
            lex_.next();
        }
        if (lex_.peek().kind != Token::Number) return false;
        out = sign * lex_.next().num;
        return true;
    }

    int parse_power() {
        if (lex_.peek().kind != Token::Caret) return 1;
        lex_.next();
        Token t = lex_.next();
        if (t.kind != Token::Number || t.num != std::floor(t.num) || t.num < 0)
            throw ParseError(t.line, t.col, "exponent must be a nonnegative integer");
        return static_cast<int>(t.num);
    }

    OneForm build(const Poly& adx, const Poly& ady) {
        int deg = 0;
        for (const auto& [m, c] : adx)
            if (std::abs(c) > 0) deg = std::max(deg, m.first + m.second);
        for (const auto& [m, c] : ady)
            if (std::abs(c) > 0) deg = std::max(deg, m.first + m.second);
        TruncSeries2 a(deg), b(deg);
        for (const auto& [m, c] : adx) a.set(m.first, m.second, a.at(m.first, m.second) + c);
        for (const auto& [m, c] : ady) b.set(m.first, m.second, b.at(m.first, m.second) + c);
        return OneForm(a, b, true);
    }

    Lexer lex_;
};

std::string cplx_to_text(Cplx c) {
    char buf[80];
    if (c.imag() == 0.0) {
        std::snprintf(buf, sizeof buf, "%.17g", c.real());
        return buf;
    }
    std::snprintf(buf, sizeof buf, "(%.17g,%.17g)", c.real(), c.imag());
    return buf;
}

void poly_to_text(std::string& out, const TruncSeries2& s, const char* diff, bool& first) {
    for (int d = 0; d <= s.order(); ++d)
        for (int j = 0; j <= d; ++j) {
            int i = d - j;
            Cplx c = s.at(i, j);
            if (c == Cplx(0)) continue;
            if (!first) out += " + ";
            first = false;
            out += cplx_to_text(c);
            if (i > 0) out += " x^" + std::to_string(i);
            if (j > 0) out += " y^" + std::to_string(j);
            out += " ";
            out += diff;
        }
}

} // namespace

OneForm parse_oneform(const std::string& text) {
    Parser p(text);
    return p.parse();
}

std::string oneform_to_text(const OneForm& w) {
    std::string out = "omega = ";
    bool first = true;
    poly_to_text(out, w.a, "dx", first);
    poly_to_text(out, w.b, "dy", first);
    if (first) out += "0 dx"; // zero form (never valid input, but printable)
    return out;
}

} // namespace folab
