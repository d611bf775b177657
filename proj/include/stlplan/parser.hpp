#pragma once

// Recursive-descent parser for the concrete STL grammar:
//
//   expr   := term ("|" term)*
//   term   := factor ("&" factor)*
//   factor := "!" factor
//           | "F[" INT "," INT "](" expr ")"
//           | "G[" INT "," INT "](" expr ")"
//           | "U[" INT "," INT "](" expr "," expr ")"
//           | "(" expr ")"
//           | "in(" IDENT ")"
//
// Whitespace is ignored between tokens. "&" binds tighter than "|", "!"
// binds tightest. Chains at one precedence level collapse into a single
// n-ary And/Or node.

#include <cctype>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "stlplan/ast.hpp"

namespace stlplan {

class ParseError : public std::runtime_error {
public:
    enum class Kind { Syntax, Interval };

    ParseError(Kind kind, std::size_t offset, const std::string& message)
        : std::runtime_error(message + " (at byte " + std::to_string(offset) + ")"),
          kind_(kind),
          offset_(offset) {}

    Kind kind() const { return kind_; }
    std::size_t offset() const { return offset_; }

private:
    Kind kind_;
    std::size_t offset_;
};

namespace detail {

class FormulaParser {
public:
    explicit FormulaParser(std::string_view text) : text_(text) {}

    FormulaPtr run() {
        if (text_.empty()) {
            fail("empty formula");
        }
        FormulaPtr f = parse_expr();
        skip_ws();
        if (pos_ != text_.size()) {
            fail("unexpected trailing input");
        }
        return f;
    }

private:
    FormulaPtr parse_expr() {
        std::vector<FormulaPtr> parts;
        parts.push_back(parse_term());
        while (accept('|')) {
            parts.push_back(parse_term());
        }
        return Formula::disjunction(std::move(parts));
    }

    FormulaPtr parse_term() {
        std::vector<FormulaPtr> parts;
        parts.push_back(parse_factor());
        while (accept('&')) {
            parts.push_back(parse_factor());
        }
        return Formula::conjunction(std::move(parts));
    }

    FormulaPtr parse_factor() {
        skip_ws();
        if (pos_ >= text_.size()) {
            fail("expected formula");
        }
        const char c = text_[pos_];
        if (c == '!') {
            ++pos_;
            return Formula::negation(parse_factor());
        }
        if (c == '(') {
            ++pos_;
            FormulaPtr inner = parse_expr();
            expect(')');
            return inner;
        }
        if (c == 'F' || c == 'G' || c == 'U') {
            ++pos_;
            TimeInterval iv = parse_interval();
            expect('(');
            FormulaPtr first = parse_expr();
            if (c == 'U') {
                expect(',');
                FormulaPtr second = parse_expr();
                expect(')');
                return Formula::until(iv, std::move(first), std::move(second));
            }
            expect(')');
            return c == 'F' ? Formula::eventually(iv, std::move(first))
                            : Formula::always(iv, std::move(first));
        }
        if (c == 'i' && text_.substr(pos_).rfind("in", 0) == 0) {
            pos_ += 2;
            expect('(');
            std::string name = parse_ident();
            expect(')');
            return Formula::atom(std::move(name));
        }
        fail("expected '!', '(', 'F', 'G', 'U' or 'in'");
    }

    TimeInterval parse_interval() {
        expect('[');
        const std::size_t a_at = pos_;
        const long a = parse_int();
        expect(',');
        const std::size_t b_at = pos_;
        const long b = parse_int();
        expect(']');
        if (a < 0 || b < 0) {
            throw ParseError(ParseError::Kind::Interval, a < 0 ? a_at : b_at,
                             "interval bounds must be non-negative");
        }
        if (a > b) {
            throw ParseError(ParseError::Kind::Interval, a_at,
                             "interval requires a <= b, got [" + std::to_string(a) + "," +
                                 std::to_string(b) + "]");
        }
        return TimeInterval{static_cast<int>(a), static_cast<int>(b)};
    }

    long parse_int() {
        skip_ws();
        const std::size_t start = pos_;
        bool negative = false;
        if (pos_ < text_.size() && text_[pos_] == '-') {
            negative = true;
            ++pos_;
        }
        long value = 0;
        std::size_t digits = 0;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
            value = value * 10 + (text_[pos_] - '0');
            if (value > 1000000000L) {
                throw ParseError(ParseError::Kind::Interval, start, "interval bound too large");
            }
            ++pos_;
            ++digits;
        }
        if (digits == 0) {
            pos_ = start;
            fail("expected integer");
        }
        return negative ? -value : value;
    }

    std::string parse_ident() {
        skip_ws();
        const std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
            ++pos_;
        }
        if (pos_ == start) {
            fail("expected region identifier");
        }
        return std::string(text_.substr(start, pos_ - start));
    }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
            ++pos_;
        }
    }

    bool accept(char c) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!accept(c)) {
            fail(std::string("expected '") + c + "'");
        }
    }

    [[noreturn]] void fail(const std::string& message) const {
        throw ParseError(ParseError::Kind::Syntax, pos_, message);
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

}  // namespace detail

inline FormulaPtr parse(std::string_view text) {
    return detail::FormulaParser(text).run();
}

}  // namespace stlplan
