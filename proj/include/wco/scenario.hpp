#pragma once

#include <cctype>
#include <cstdlib>
#include <optional>
#include <string>
#include <vector>

#include "wco/discfunction.hpp"
#include "wco/errors.hpp"
#include "wco/estimators.hpp"
#include "wco/exponent.hpp"
#include "wco/funcspace.hpp"

namespace wco {

/// One analysis job: the symbols u and phi in a small prefix grammar, the
/// exponent pair, and optional overrides of the numeric defaults.
///
/// Grammar (one `key = value` statement per line, `#` comments):
///   expr := z | <number> | complex(re, im)
///         | add(e, e) | sub(e, e) | mul(e, e) | neg(e)
///         | pow(e, n) | poly(c0, c1, ...) | ratio(poly(...), poly(...))
///         | blaschke(a1, ...) | kernel(a) | kpow(a, t) | cauchy(w)
///         | compose(f, g) | dilate(f, r)
/// Scalars inside add/mul promote to constant functions; pow(e, n) is
/// z^n composed with e.
struct Scenario {
    std::string name = "scenario";
    DiscFunction u = DiscFunction::constant(cplx(1.0, 0.0));
    DiscFunction phi = DiscFunction::identity();
    Exponent p = Exponent::finite(2.0);
    Exponent q = Exponent::finite(2.0);
    Settings settings;

    bool operator==(const Scenario& o) const;
};

namespace scenario_detail {

struct Token {
    enum Kind { ident, number, lparen, rparen, comma, equals, end } kind = end;
    std::string text;
    double value = 0.0;
    int line = 1, col = 1;
};

class Lexer {
public:
    explicit Lexer(const std::string& src) : src_(src) {}

    Token next() {
        skip_space();
        Token t;
        t.line = line_;
        t.col = col_;
        if (pos_ >= src_.size()) {
            t.kind = Token::end;
            return t;
        }
        const char c = src_[pos_];
        if (c == '(') { advance(); t.kind = Token::lparen; return t; }
        if (c == ')') { advance(); t.kind = Token::rparen; return t; }
        if (c == ',') { advance(); t.kind = Token::comma; return t; }
        if (c == '=') { advance(); t.kind = Token::equals; return t; }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::string s;
            while (pos_ < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[pos_])) ||
                    src_[pos_] == '_')) {
                s += src_[pos_];
                advance();
            }
            t.kind = Token::ident;
            t.text = s;
            return t;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '+' ||
            c == '.') {
            const char* start = src_.c_str() + pos_;
            char* endp = nullptr;
            const double v = std::strtod(start, &endp);
            if (endp == start)
                throw ParseError("unexpected character '" + std::string(1, c) + "'",
                                 line_, col_);
            const auto len = static_cast<std::size_t>(endp - start);
            for (std::size_t i = 0; i < len; ++i) advance();
            t.kind = Token::number;
            t.value = v;
            t.text = std::string(start, len);
            return t;
        }
        throw ParseError("unexpected character '" + std::string(1, c) + "'", line_, col_);
    }

    /// Peeks whether the rest of the current line is blank.
    bool at_line_end() {
        std::size_t p = pos_;
        while (p < src_.size() && src_[p] != '\n') {
            if (src_[p] == '#') return true;
            if (!std::isspace(static_cast<unsigned char>(src_[p]))) return false;
            ++p;
        }
        return true;
    }

    int line() const { return line_; }
    int col() const { return col_; }

private:
    void advance() {
        if (src_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    void skip_space() {
        while (pos_ < src_.size()) {
            const char c = src_[pos_];
            if (c == '#') {
                while (pos_ < src_.size() && src_[pos_] != '\n') advance();
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else {
                break;
            }
        }
    }

    const std::string& src_;
    std::size_t pos_ = 0;
    int line_ = 1, col_ = 1;
};

class ExprParser {
public:
    explicit ExprParser(Lexer& lex) : lex_(lex) { bump(); }

    DiscFunction parse() {
        DiscFunction f = expr();
        return f;
    }

    Token current() const { return cur_; }

private:
    void bump() { cur_ = lex_.next(); }

    [[noreturn]] void fail(const std::string& msg) {
        throw ParseError(msg, cur_.line, cur_.col);
    }

    void expect(Token::Kind k, const char* what) {
        if (cur_.kind != k) fail(std::string("expected ") + what);
        bump();
    }

    double number_arg() {
        const bool neg = false;
        (void)neg;
        if (cur_.kind != Token::number) fail("expected a number");
        const double v = cur_.value;
        bump();
        return v;
    }

    cplx complex_arg() {
        if (cur_.kind == Token::number) {
            const double v = cur_.value;
            bump();
            return cplx(v, 0.0);
        }
        if (cur_.kind == Token::ident && cur_.text == "complex") {
            bump();
            expect(Token::lparen, "'('");
            const double re = number_arg();
            expect(Token::comma, "','");
            const double im = number_arg();
            expect(Token::rparen, "')'");
            return cplx(re, im);
        }
        fail("expected a number or complex(re, im)");
    }

    std::vector<cplx> complex_list() {
        std::vector<cplx> out;
        out.push_back(complex_arg());
        while (cur_.kind == Token::comma) {
            bump();
            out.push_back(complex_arg());
        }
        return out;
    }

    DiscFunction expr() {
        if (cur_.kind == Token::number) {
            const double v = cur_.value;
            bump();
            return DiscFunction::constant(cplx(v, 0.0));
        }
        if (cur_.kind != Token::ident) fail("expected an expression");
        const std::string head = cur_.text;
        const Token head_tok = cur_;
        bump();
        if (head == "z") return DiscFunction::identity();
        if (cur_.kind != Token::lparen)
            throw ParseError("unknown symbol '" + head + "'", head_tok.line, head_tok.col);
        bump();  // consume '('
        DiscFunction out = DiscFunction::constant(cplx(0.0, 0.0));
        if (head == "complex") {
            const double re = number_arg();
            expect(Token::comma, "','");
            const double im = number_arg();
            out = DiscFunction::constant(cplx(re, im));
        } else if (head == "add" || head == "mul") {
            std::vector<DiscFunction> args;
            args.push_back(expr());
            while (cur_.kind == Token::comma) {
                bump();
                args.push_back(expr());
            }
            if (args.size() < 2) fail(head + " needs at least two arguments");
            out = args[0];
            for (std::size_t i = 1; i < args.size(); ++i)
                out = head == "add" ? DiscFunction::sum(out, args[i])
                                    : simplified_product(out, args[i]);
        } else if (head == "sub") {
            DiscFunction a = expr();
            expect(Token::comma, "','");
            DiscFunction b = expr();
            out = DiscFunction::sum(a, DiscFunction::scalar_multiple(cplx(-1.0, 0.0), b));
        } else if (head == "neg") {
            out = DiscFunction::scalar_multiple(cplx(-1.0, 0.0), expr());
        } else if (head == "pow") {
            DiscFunction base = expr();
            expect(Token::comma, "','");
            const double n = number_arg();
            if (n < 0 || n != std::floor(n)) fail("pow exponent must be a nonnegative integer");
            if (base.kind() == FuncKind::monomial_power && base.to_string() == "z")
                out = DiscFunction::monomial(static_cast<long>(n));
            else
                out = DiscFunction::compose(DiscFunction::monomial(static_cast<long>(n)),
                                            base);
        } else if (head == "poly") {
            out = DiscFunction::polynomial(complex_list());
        } else if (head == "ratio") {
            DiscFunction num = expr();
            expect(Token::comma, "','");
            DiscFunction den = expr();
            if (num.kind() != FuncKind::polynomial || den.kind() != FuncKind::polynomial)
                fail("ratio expects poly(...) arguments");
            out = DiscFunction::rational(num.poly_coefficients(), den.poly_coefficients());
        } else if (head == "blaschke") {
            out = DiscFunction::blaschke(complex_list());
        } else if (head == "kernel") {
            out = DiscFunction::kernel(complex_arg());
        } else if (head == "kpow") {
            const cplx a = complex_arg();
            expect(Token::comma, "','");
            out = DiscFunction::kernel_power(a, number_arg());
        } else if (head == "cauchy") {
            out = DiscFunction::cauchy_kernel(complex_arg());
        } else if (head == "compose") {
            DiscFunction f = expr();
            expect(Token::comma, "','");
            DiscFunction g = expr();
            out = DiscFunction::compose(f, g);
        } else if (head == "dilate") {
            DiscFunction f = expr();
            expect(Token::comma, "','");
            out = radial_dilation(f, number_arg());
        } else {
            throw ParseError("unknown function '" + head + "'", head_tok.line, head_tok.col);
        }
        expect(Token::rparen, "')'");
        return out;
    }

    /// mul(scalar, f) lowers to a scalar multiple so the canonical text
    /// round-trips through the same node kind.
    static DiscFunction simplified_product(const DiscFunction& a, const DiscFunction& b) {
        auto scalar_of = [](const DiscFunction& f) -> std::optional<cplx> {
            if (f.kind() == FuncKind::polynomial) {
                const auto& c = f.poly_coefficients();
                bool constant = true;
                for (std::size_t i = 1; i < c.size(); ++i)
                    if (c[i] != cplx(0.0, 0.0)) constant = false;
                if (constant && !c.empty()) return c[0];
            }
            return std::nullopt;
        };
        if (auto s = scalar_of(a)) return DiscFunction::scalar_multiple(*s, b);
        if (auto s = scalar_of(b)) return DiscFunction::scalar_multiple(*s, a);
        return DiscFunction::product(a, b);
    }

    Lexer& lex_;
    Token cur_;
};

} // namespace scenario_detail

/// Parses a scenario document.  Unknown keys are rejected; a phi that is
/// not a self-map raises ValidationError.
inline Scenario parse_scenario(const std::string& text) {
    using scenario_detail::Lexer;
    using scenario_detail::Token;
    Scenario sc;
    bool have_phi_expr = false;
    std::string u_text = "poly(1)";
    std::string phi_text = "z";

    // statement-at-a-time: re-lex each line region so expression errors
    // carry their own position
    Lexer lex(text);
    for (;;) {
        Token key = lex.next();
        if (key.kind == Token::end) break;
        if (key.kind != Token::ident)
            throw ParseError("expected a key", key.line, key.col);
        Token eq = lex.next();
        if (eq.kind != Token::equals)
            throw ParseError("expected '=' after '" + key.text + "'", eq.line, eq.col);

        auto number_value = [&lex]() {
            Token v = lex.next();
            if (v.kind != Token::number)
                throw ParseError("expected a number", v.line, v.col);
            return v.value;
        };

        const std::string& k = key.text;
        if (k == "name") {
            Token v = lex.next();
            if (v.kind != Token::ident && v.kind != Token::number)
                throw ParseError("expected a name", v.line, v.col);
            sc.name = v.text;
        } else if (k == "u" || k == "phi") {
            scenario_detail::ExprParser ep(lex);
            DiscFunction f = ep.parse();
            if (k == "u") {
                sc.u = f;
                u_text = f.to_string();
            } else {
                sc.phi = f;
                phi_text = f.to_string();
                have_phi_expr = true;
            }
        } else if (k == "p" || k == "q") {
            Token v = lex.next();
            Exponent e = Exponent::finite(2.0);
            if (v.kind == Token::ident && v.text == "inf") {
                e = Exponent::infinity();
            } else if (v.kind == Token::number) {
                e = Exponent::finite(v.value);
            } else {
                throw ParseError("expected a number or 'inf'", v.line, v.col);
            }
            (k == "p" ? sc.p : sc.q) = e;
        } else if (k == "grid") {
            sc.settings.grid = static_cast<std::size_t>(number_value());
            if (!detail::is_power_of_two(sc.settings.grid))
                throw ValidationError("grid must be a power of two");
        } else if (k == "kernel_grid") {
            sc.settings.kernel_grid = static_cast<std::size_t>(number_value());
            if (!detail::is_power_of_two(sc.settings.kernel_grid))
                throw ValidationError("kernel_grid must be a power of two");
        } else if (k == "depth") {
            sc.settings.depth = static_cast<int>(number_value());
        } else if (k == "alpha") {
            sc.settings.alpha = number_value();
            if (!(sc.settings.alpha > 0.0) || !(sc.settings.alpha < 1.0))
                throw ValidationError("alpha must lie in (0, 1)");
        } else if (k == "boundary_threshold") {
            sc.settings.boundary_threshold = number_value();
        } else if (k == "ring_k_min") {
            sc.settings.ring.k_min = static_cast<int>(number_value());
        } else if (k == "ring_k_max") {
            sc.settings.ring.k_max = static_cast<int>(number_value());
        } else if (k == "ring_angles") {
            sc.settings.ring.angles = static_cast<std::size_t>(number_value());
        } else if (k == "eps_k_min") {
            sc.settings.eps_k_min = static_cast<int>(number_value());
        } else if (k == "eps_k_max") {
            sc.settings.eps_k_max = static_cast<int>(number_value());
        } else if (k == "mphi_k_min") {
            sc.settings.mphi_k_min = static_cast<int>(number_value());
        } else if (k == "mphi_k_max") {
            sc.settings.mphi_k_max = static_cast<int>(number_value());
        } else if (k == "trunc_degree") {
            sc.settings.trunc_degree = static_cast<std::size_t>(number_value());
        } else if (k == "compact_threshold") {
            sc.settings.compact_threshold = number_value();
        } else if (k == "sharper_h2_comp_norm") {
            sc.settings.sharper_h2_comp_norm = number_value() != 0.0;
        } else {
            throw ParseError("unknown key '" + k + "'", key.line, key.col);
        }
    }
    (void)have_phi_expr;
    (void)u_text;
    (void)phi_text;
    // semantic validation: phi must be a self-map (SelfMap throws otherwise)
    SelfMap check(sc.phi);
    (void)check;
    return sc;
}

/// Canonical text form; parse_scenario(serialize(s)) reproduces s.
inline std::string serialize(const Scenario& sc) {
    std::string out;
    out += "name = " + sc.name + "\n";
    out += "u = " + sc.u.to_string() + "\n";
    out += "phi = " + sc.phi.to_string() + "\n";
    out += "p = " + sc.p.str() + "\n";
    out += "q = " + sc.q.str() + "\n";
    const Settings d;
    const Settings& s = sc.settings;
    auto emit_num = [&out](const char* key, double v) {
        out += std::string(key) + " = " + detail::fmt_double(v) + "\n";
    };
    if (s.grid != d.grid) emit_num("grid", static_cast<double>(s.grid));
    if (s.kernel_grid != d.kernel_grid)
        emit_num("kernel_grid", static_cast<double>(s.kernel_grid));
    if (s.depth != d.depth) emit_num("depth", s.depth);
    if (s.alpha != d.alpha) emit_num("alpha", s.alpha);
    if (s.boundary_threshold != d.boundary_threshold)
        emit_num("boundary_threshold", s.boundary_threshold);
    if (s.ring.k_min != d.ring.k_min) emit_num("ring_k_min", s.ring.k_min);
    if (s.ring.k_max != d.ring.k_max) emit_num("ring_k_max", s.ring.k_max);
    if (s.ring.angles != d.ring.angles)
        emit_num("ring_angles", static_cast<double>(s.ring.angles));
    if (s.eps_k_min != d.eps_k_min) emit_num("eps_k_min", s.eps_k_min);
    if (s.eps_k_max != d.eps_k_max) emit_num("eps_k_max", s.eps_k_max);
    if (s.mphi_k_min != d.mphi_k_min) emit_num("mphi_k_min", s.mphi_k_min);
    if (s.mphi_k_max != d.mphi_k_max) emit_num("mphi_k_max", s.mphi_k_max);
    if (s.trunc_degree != d.trunc_degree)
        emit_num("trunc_degree", static_cast<double>(s.trunc_degree));
    if (s.compact_threshold != d.compact_threshold)
        emit_num("compact_threshold", s.compact_threshold);
    if (s.sharper_h2_comp_norm != d.sharper_h2_comp_norm)
        emit_num("sharper_h2_comp_norm", s.sharper_h2_comp_norm ? 1.0 : 0.0);
    return out;
}

inline bool Scenario::operator==(const Scenario& o) const {
    return serialize(*this) == serialize(o);
}

} // namespace wco
