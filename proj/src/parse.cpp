#include "sf/parse.hpp"

#include <cctype>

namespace sf {

namespace {

class Parser {
public:
    explicit Parser(const std::string& text) : s_(text) {}

    ExprPtr run() {
        ExprPtr e = expr();
        skip_ws();
        if (pos_ != s_.size()) fail("trailing input");
        return e;
    }

private:
    const std::string& s_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }

    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    char peek() {
        skip_ws();
        return pos_ < s_.size() ? s_[pos_] : '\0';
    }

    bool eat(char c) {
        if (peek() == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!eat(c)) fail(std::string("expected '") + c + "'");
    }

    ExprPtr expr() {
        std::vector<ExprPtr> terms;
        terms.push_back(term());
        for (;;) {
            if (eat('+'))
                terms.push_back(term());
            else if (eat('-'))
                terms.push_back(neg(term()));
            else
                break;
        }
        return make_sum(std::move(terms));
    }

    ExprPtr term() {
        ExprPtr acc = factor();
        for (;;) {
            if (eat('*'))
                acc = mul(acc, factor());
            else if (eat('/'))
                acc = div(acc, factor());
            else
                break;
        }
        return acc;
    }

    ExprPtr factor() {
        if (eat('-')) return neg(factor());
        ExprPtr base = atom();
        if (eat('^')) {
            std::size_t at = pos_;
            ExprPtr e = factor();  // right-associative
            if (!is_rational(e)) throw ParseError("exponent must be a rational constant", at);
            return make_power(std::move(base), e->value);
        }
        return base;
    }

    ExprPtr atom() {
        char c = peek();
        if (c == '(') {
            expect('(');
            ExprPtr e = expr();
            expect(')');
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) return integer();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return name_atom();
        fail("unexpected character");
    }

    ExprPtr integer() {
        skip_ws();
        std::size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        return make_rational(Rat(s_.substr(start, pos_ - start)));
    }

    std::string ident() {
        skip_ws();
        std::size_t start = pos_;
        while (pos_ < s_.size() &&
               (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
            ++pos_;
        if (start == pos_) fail("expected identifier");
        return s_.substr(start, pos_ - start);
    }

    int integer_signed() {
        skip_ws();
        bool negv = eat('-');
        std::size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (start == pos_) fail("expected integer");
        int v = std::stoi(s_.substr(start, pos_ - start));
        return negv ? -v : v;
    }

    std::vector<ExprPtr> args() {
        expect('(');
        std::vector<ExprPtr> out;
        out.push_back(expr());
        while (eat(',')) out.push_back(expr());
        expect(')');
        return out;
    }

    ExprPtr name_atom() {
        // D[...]name(args): explicit derivative multi-index
        if (peek() == 'D' && pos_ + 1 < s_.size() && s_[pos_ + 1] == '[') {
            ++pos_;
            expect('[');
            std::vector<int> deriv;
            deriv.push_back(integer_signed());
            while (eat(',')) deriv.push_back(integer_signed());
            expect(']');
            std::string sym = ident();
            std::size_t at = pos_;
            auto as = args();
            if (as.size() != deriv.size())
                throw ParseError("derivative index arity mismatch for " + sym, at);
            return make_opaque(std::move(sym), std::move(as), std::move(deriv));
        }
        std::string id = ident();
        // prime suffix: one-argument derivative sugar
        int primes = 0;
        while (pos_ < s_.size() && s_[pos_] == '\'') {
            ++primes;
            ++pos_;
        }
        if (peek() == '(') {
            if (id == "exp") {
                if (primes) fail("cannot differentiate exp with primes");
                expect('(');
                ExprPtr a = expr();
                expect(')');
                return make_exp(std::move(a));
            }
            std::size_t at = pos_;
            auto as = args();
            if (primes && as.size() != 1)
                throw ParseError("prime notation needs a one-argument symbol", at);
            std::vector<int> deriv(as.size(), 0);
            if (primes) deriv[0] = primes;
            return make_opaque(std::move(id), std::move(as), std::move(deriv));
        }
        if (primes) fail("prime notation needs an argument list");
        return make_var(std::move(id));
    }
};

}  // namespace

ExprPtr parse(const std::string& text) { return Parser(text).run(); }

}  // namespace sf
