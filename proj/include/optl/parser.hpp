#ifndef OPTL_PARSER_HPP
#define OPTL_PARSER_HPP

// Recursive-descent parser for the ASCII formula syntax.
//
//   f ::= f -> f | f '|' f | f & f | f BIN f | ~f | UN f | (f) | true | false | atom
//   BIN ::= U | S | U[rels] | S[rels] | HUu | HSu | HUd | HSd
//   UN  ::= X | Y | Xm | Ym | G | F        (NWTL mode: X | Y | Xu | Yu | G | F)
//
// Precedence from loosest: ->, |, &, binary temporal, unary. '->' and the
// temporal operators associate to the right.

#include <cctype>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "optl/formula.hpp"

namespace optl {

class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t column, std::string token, const std::string& msg)
        : std::runtime_error("column " + std::to_string(column) + ": " + msg +
                             (token.empty() ? std::string(" at end of input") : " near '" + token + "'")),
          column_(column),
          token_(std::move(token)) {}
    std::size_t column() const { return column_; }
    const std::string& token() const { return token_; }

private:
    std::size_t column_;
    std::string token_;
};

enum class Dialect { Optl, Nwtl };

namespace detail {

struct Token {
    enum Kind { Ident, Keyword, Sym, End } kind;
    std::string text;
    std::size_t column;  // 1-based
};

inline const std::set<std::string>& keywords() {
    static const std::set<std::string> k{"X", "Y", "Xm", "Ym", "Xu", "Yu", "G", "F", "U", "S",
                                         "HUu", "HSu", "HUd", "HSd", "true", "false"};
    return k;
}

inline std::vector<Token> lex(const std::string& s) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < s.size()) {
        unsigned char c = s[i];
        if (std::isspace(c)) {
            ++i;
            continue;
        }
        std::size_t col = i + 1;
        if (std::isalpha(c) || c == '_') {
            std::size_t j = i;
            while (j < s.size() && (std::isalnum((unsigned char)s[j]) || s[j] == '_')) ++j;
            std::string word = s.substr(i, j - i);
            // U[...] / S[...] is a single token
            if ((word == "U" || word == "S") && j < s.size() && s[j] == '[') {
                auto close = s.find(']', j);
                if (close == std::string::npos) throw ParseError(col, s.substr(i), "unterminated relation set");
                word = s.substr(i, close + 1 - i);
                j = close + 1;
            }
            out.push_back({keywords().count(word) || (word.size() > 1 && word[1] == '[') ? Token::Keyword : Token::Ident,
                           word, col});
            i = j;
            continue;
        }
        if (c == '#') {
            out.push_back({Token::Ident, "#", col});
            ++i;
            continue;
        }
        if (c == '-' && i + 1 < s.size() && s[i + 1] == '>') {
            out.push_back({Token::Sym, "->", col});
            i += 2;
            continue;
        }
        if (c == '~' || c == '&' || c == '|' || c == '(' || c == ')') {
            out.push_back({Token::Sym, std::string(1, char(c)), col});
            ++i;
            continue;
        }
        throw ParseError(col, std::string(1, char(c)), "unexpected character");
    }
    out.push_back({Token::End, "", s.size() + 1});
    return out;
}

class Parser {
public:
    Parser(const std::string& text, Dialect d) : toks_(lex(text)), dialect_(d) {}

    Formula parse() {
        Formula f = implication();
        if (peek().kind != Token::End) fail("unexpected token");
        return f;
    }

private:
    const Token& peek() const { return toks_[pos_]; }
    Token take() { return toks_[pos_++]; }
    bool accept_sym(const char* s) {
        if (peek().kind == Token::Sym && peek().text == s) {
            ++pos_;
            return true;
        }
        return false;
    }
    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(peek().column, peek().text, msg); }

    Formula implication() {
        Formula lhs = disjunction();
        if (accept_sym("->")) return implies(lhs, implication());
        return lhs;
    }

    Formula disjunction() {
        Formula f = conjunction();
        while (accept_sym("|")) f = disj(f, conjunction());
        return f;
    }

    Formula conjunction() {
        Formula f = temporal();
        while (accept_sym("&")) f = conj(f, temporal());
        return f;
    }

    Formula temporal() {
        Formula lhs = prefix();
        const Token& t = peek();
        if (t.kind != Token::Keyword) return lhs;
        const std::string& k = t.text;
        std::optional<Op> op;
        RelSet rels;
        if (k == "U") op = Op::Until;
        else if (k == "S") op = Op::Since;
        else if (k.size() > 1 && k[1] == '[') {
            if (dialect_ == Dialect::Nwtl) fail("summary relation sets are not part of NWTL");
            op = k[0] == 'U' ? Op::SummaryUntil : Op::SummarySince;
            for (std::size_t p = 2; p + 1 < k.size(); ++p) {
                auto r = prec_from_char(k[p]);
                if (!r) fail("relation set may only contain '<', '=', '>'");
                rels = rels.with(*r);
            }
            if (rels.empty()) fail("empty relation set");
        } else if (k == "HUu" || k == "HSu" || k == "HUd" || k == "HSd") {
            if (dialect_ == Dialect::Nwtl) fail("hierarchical operators are not part of NWTL");
            op = k == "HUu" ? Op::HierYieldUntil : k == "HSu" ? Op::HierYieldSince : k == "HUd" ? Op::HierTakeUntil : Op::HierTakeSince;
        }
        if (!op) return lhs;
        take();
        Formula rhs = temporal();
        return binary(*op, lhs, rhs, rels);
    }

    Formula prefix() {
        const Token t = peek();
        if (t.kind == Token::Sym && t.text == "~") {
            take();
            return neg(prefix());
        }
        if (t.kind == Token::Sym && t.text == "(") {
            take();
            Formula f = implication();
            if (!accept_sym(")")) fail("expected ')'");
            return f;
        }
        if (t.kind == Token::Ident) {
            take();
            return atom(t.text);
        }
        if (t.kind == Token::Keyword) {
            const std::string& k = t.text;
            if (k == "true") return take(), top();
            if (k == "false") return take(), bottom();
            std::optional<Op> op;
            if (k == "X") op = Op::Next;
            else if (k == "Y") op = Op::Back;
            else if (k == "Xm" && dialect_ == Dialect::Optl) op = Op::MatchNext;
            else if (k == "Ym" && dialect_ == Dialect::Optl) op = Op::MatchBack;
            else if (k == "Xu" && dialect_ == Dialect::Nwtl) op = Op::MuNext;
            else if (k == "Yu" && dialect_ == Dialect::Nwtl) op = Op::MuBack;
            if (op) {
                take();
                return unary(*op, prefix());
            }
            if (k == "G") return take(), globally(prefix());
            if (k == "F") return take(), eventually(prefix());
        }
        fail(t.kind == Token::End ? "expected a formula" : "unexpected token");
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    Dialect dialect_;
};

}  // namespace detail

inline Formula parse_formula(const std::string& text, Dialect d = Dialect::Optl) {
    return detail::Parser(text, d).parse();
}

inline Formula parse_nwtl(const std::string& text) { return parse_formula(text, Dialect::Nwtl); }

}  // namespace optl

#endif  // OPTL_PARSER_HPP
