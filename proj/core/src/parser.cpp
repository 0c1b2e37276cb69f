#include "pshlab/parser.hpp"

#include <cctype>
#include <charconv>
#include <string>

namespace pshlab {

namespace {

class Parser {
public:
    Parser(std::string_view text, int n) : text_(text), n_(n) {}

    NodePtr run() {
        NodePtr e = expr();
        skip_ws();
        if (pos_ != text_.size()) fail("unexpected trailing input");
        return e;
    }

private:
    [[noreturn]] void fail(const std::string& message) const { throw ParseError(message, pos_); }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    char peek() {
        skip_ws();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }

    bool consume(char c) {
        if (peek() == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c, const char* what) {
        if (!consume(c)) fail(std::string("expected '") + c + "' " + what);
    }

    bool lookahead_keyword(std::string_view kw) {
        skip_ws();
        if (text_.substr(pos_, kw.size()) != kw) return false;
        pos_ += kw.size();
        return true;
    }

    NodePtr expr() {
        std::vector<NodePtr> terms;
        bool negate_first = false;
        if (consume('-'))
            negate_first = true;
        else
            consume('+');
        NodePtr first = term();
        if (negate_first)
            first = Node::prod({Node::constant(Cplx{-1.0, 0.0}), std::move(first)});
        terms.push_back(std::move(first));
        while (true) {
            if (consume('+')) {
                terms.push_back(term());
            } else if (consume('-')) {
                terms.push_back(Node::prod({Node::constant(Cplx{-1.0, 0.0}), term()}));
            } else {
                break;
            }
        }
        if (terms.size() == 1) return terms[0];
        return Node::sum(std::move(terms));
    }

    NodePtr term() {
        std::vector<NodePtr> factors;
        factors.push_back(factor());
        while (consume('*')) factors.push_back(factor());
        if (factors.size() == 1) return factors[0];
        return Node::prod(std::move(factors));
    }

    NodePtr factor() {
        NodePtr a = atom();
        if (consume('^')) {
            const int k = parse_uint("power exponent");
            return Node::int_pow(std::move(a), k);
        }
        return a;
    }

    NodePtr atom() {
        const char c = peek();
        if (c == '(') {
            ++pos_;
            NodePtr e = expr();
            expect(')', "to close parenthesized expression");
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (c == 'z') {
            ++pos_;
            const std::size_t at = pos_;
            const int j = parse_uint("variable index");
            if (j < 1 || j > n_)
                throw std::out_of_range("variable z" + std::to_string(j) +
                                        " out of range for dimension " + std::to_string(n_) +
                                        " (at position " + std::to_string(at) + ")");
            return Node::var(j);
        }
        if (c == 'i' && !starts_identifier("im(")) {
            ++pos_;
            return Node::constant(Cplx{0.0, 1.0});
        }
        if (lookahead_keyword("conj(")) return close_call(Node::conj(expr()));
        if (lookahead_keyword("exp(")) return close_call(Node::exp(expr()));
        if (lookahead_keyword("re(")) {
            // (e + conj(e)) / 2
            NodePtr e = expr();
            expect(')', "to close re()");
            return Node::prod({Node::constant(Cplx{0.5, 0.0}), Node::sum({e, Node::conj(e)})});
        }
        if (lookahead_keyword("im(")) {
            // (e - conj(e)) / (2i)
            NodePtr e = expr();
            expect(')', "to close im()");
            return Node::prod(
                {Node::constant(Cplx{0.0, -0.5}),
                 Node::sum({e, Node::prod({Node::constant(Cplx{-1.0, 0.0}), Node::conj(e)})})});
        }
        if (lookahead_keyword("abs2(")) {
            NodePtr e = expr();
            expect(')', "to close abs2()");
            return Node::prod({e, Node::conj(e)});
        }
        fail("expected a number, variable, function call or parenthesized expression");
    }

    bool starts_identifier(std::string_view kw) {
        skip_ws();
        return text_.substr(pos_, kw.size()) == kw;
    }

    NodePtr close_call(NodePtr e) {
        expect(')', "to close function call");
        return e;
    }

    int parse_uint(const char* what) {
        skip_ws();
        int value = 0;
        const auto* begin = text_.data() + pos_;
        const auto* end = text_.data() + text_.size();
        auto [ptr, ec] = std::from_chars(begin, end, value);
        if (ec != std::errc{} || ptr == begin) fail(std::string("expected ") + what);
        pos_ += static_cast<std::size_t>(ptr - begin);
        return value;
    }

    NodePtr number() {
        const auto* begin = text_.data() + pos_;
        const auto* end = text_.data() + text_.size();
        double value = 0.0;
        auto [ptr, ec] = std::from_chars(begin, end, value);
        if (ec != std::errc{} || ptr == begin) fail("malformed number");
        pos_ += static_cast<std::size_t>(ptr - begin);
        // a literal directly followed by 'i' is an imaginary constant
        if (pos_ < text_.size() && text_[pos_] == 'i' &&
            text_.substr(pos_, 3) != std::string_view("im(")) {
            ++pos_;
            return Node::constant(Cplx{0.0, value});
        }
        return Node::constant(Cplx{value, 0.0});
    }

    std::string_view text_;
    int n_;
    std::size_t pos_ = 0;
};

} // namespace

Expr parse_expr(std::string_view text, int n) {
    if (n < 0) throw std::out_of_range("dimension must be non-negative");
    Parser p(text, n);
    return Expr(p.run(), n);
}

Cplx parse_complex(std::string_view text) {
    Expr e = parse_expr(text, 0);
    if (!e.is_constant()) throw ParseError("expected a constant expression", 0);
    return evaluate(e, {});
}

CPoint parse_point(std::string_view text, int n) {
    CPoint w;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t comma = text.find(',', start);
        if (comma == std::string_view::npos) comma = text.size();
        w.push_back(parse_complex(text.substr(start, comma - start)));
        start = comma + 1;
        if (comma == text.size()) break;
    }
    if (static_cast<int>(w.size()) != n)
        throw DimensionMismatch("point has " + std::to_string(w.size()) +
                                " coordinates, expected " + std::to_string(n));
    return w;
}

} // namespace pshlab
