#ifndef OPTL_TEXT_IO_HPP
#define OPTL_TEXT_IO_HPP

// Line-oriented text formats for OPMs, words and automata. '//' starts a
// comment anywhere on a line.
//
//   OPM:   labels: a b c        word:  call,pa handle {} ret
//          props: p q                  ({} is the empty set)
//          a < b
//
//   OPA:   state q0 q1   initial q0   final q1
//          push q0 call,p q1   shift q0 ret q1   pop q1 q0 q1

#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "optl/core.hpp"
#include "optl/opa.hpp"

namespace optl {

class InputError : public std::runtime_error {
public:
    InputError(std::size_t line, const std::string& msg)
        : std::runtime_error(line ? "line " + std::to_string(line) + ": " + msg : msg), line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

namespace detail {

inline std::vector<std::string> split_ws(const std::string& s) {
    std::istringstream in(s);
    std::vector<std::string> out;
    for (std::string tok; in >> tok;) out.push_back(tok);
    return out;
}

inline std::string strip_comment(const std::string& line) {
    auto p = line.find("//");
    return p == std::string::npos ? line : line.substr(0, p);
}

/// Non-empty lines with comments removed, paired with 1-based line numbers.
inline std::vector<std::pair<std::size_t, std::vector<std::string>>> tokenized_lines(const std::string& text) {
    std::vector<std::pair<std::size_t, std::vector<std::string>>> out;
    std::istringstream in(text);
    std::size_t no = 0;
    for (std::string line; std::getline(in, line);) {
        ++no;
        auto toks = split_ws(strip_comment(line));
        if (!toks.empty()) out.emplace_back(no, std::move(toks));
    }
    return out;
}

}  // namespace detail

inline Terminal parse_terminal(const std::string& tok, std::size_t line = 0) {
    if (tok == "{}") return Terminal{};
    std::vector<std::string> props;
    std::string cur;
    for (char c : tok + ",") {
        if (c != ',') {
            cur += c;
            continue;
        }
        if (cur.empty()) throw InputError(line, "empty proposition name in '" + tok + "'");
        props.push_back(cur);
        cur.clear();
    }
    return Terminal(props);
}

inline OpMatrix parse_opm(const std::string& text) {
    std::optional<StructuralOpm> s;
    std::vector<std::string> props;
    std::vector<std::tuple<std::size_t, std::string, PrecRel, std::string>> rels;
    for (const auto& [no, toks] : detail::tokenized_lines(text)) {
        if (toks[0] == "labels:") {
            if (s) throw InputError(no, "duplicate 'labels:' header");
            std::vector<std::string> ls(toks.begin() + 1, toks.end());
            if (ls.empty()) throw InputError(no, "no structural labels declared");
            try {
                s = StructuralOpm(ls);
            } catch (const std::invalid_argument& e) {
                throw InputError(no, e.what());
            }
        } else if (toks[0] == "props:") {
            props.insert(props.end(), toks.begin() + 1, toks.end());
        } else {
            if (toks.size() != 3 || toks[1].size() != 1 || !prec_from_char(toks[1][0])) {
                throw InputError(no, "expected a relation line 'a < b', 'a = b' or 'a > b'");
            }
            rels.emplace_back(no, toks[0], *prec_from_char(toks[1][0]), toks[2]);
        }
    }
    if (!s) throw InputError(0, "missing 'labels:' header");
    for (const auto& [no, a, r, b] : rels) {
        if (auto prev = s->get(a, b); prev && *prev != r) throw InputError(no, "conflicting relation for " + a + ", " + b);
        try {
            s->set(a, b, r);
        } catch (const std::invalid_argument& e) {
            throw InputError(no, e.what());
        }
    }
    std::vector<std::string> ap = s->labels;
    ap.insert(ap.end(), props.begin(), props.end());
    try {
        return OpMatrix(*s, ap);
    } catch (const std::invalid_argument& e) {
        throw InputError(0, e.what());
    }
}

inline std::string write_opm(const OpMatrix& m) {
    std::string out = "labels:";
    for (const auto& l : m.structure().labels) out += " " + l;
    out += "\n";
    std::string props;
    for (const auto& p : m.ap()) {
        if (!m.structure().is_label(p)) props += " " + p;
    }
    if (!props.empty()) out += "props:" + props + "\n";
    for (const auto& [k, r] : m.structure().base) out += k.first + " " + to_char(r) + " " + k.second + "\n";
    return out;
}

inline OpWord parse_word(const std::string& text) {
    std::vector<Terminal> ts;
    for (const auto& [no, toks] : detail::tokenized_lines(text)) {
        for (const auto& tok : toks) {
            Terminal x = parse_terminal(tok, no);
            if (x.contains(kDelimiter)) throw InputError(no, "'#' cannot label an interior position");
            ts.push_back(std::move(x));
        }
    }
    return OpWord(std::move(ts));
}

/// Reads an automaton; the matrix is extended with any proposition that
/// appears on a transition.
inline Opa parse_opa(const std::string& text, const OpMatrix& m) {
    const auto lines = detail::tokenized_lines(text);
    std::set<std::string> ap(m.ap().begin(), m.ap().end());
    for (const auto& [no, toks] : lines) {
        if ((toks[0] == "push" || toks[0] == "shift") && toks.size() == 4) {
            Terminal x = parse_terminal(toks[2], no);
            ap.insert(x.props().begin(), x.props().end());
        }
    }
    ap.erase(kDelimiter);
    Opa a(OpMatrix(m.structure(), {ap.begin(), ap.end()}));
    auto state = [&](const std::string& name, std::size_t no) {
        auto q = a.find_state(name);
        if (!q) throw InputError(no, "undeclared state '" + name + "'");
        return *q;
    };
    for (const auto& [no, toks] : lines) {
        const std::string& kw = toks[0];
        try {
            if (kw == "state") {
                for (std::size_t k = 1; k < toks.size(); ++k) a.add_state(toks[k]);
            } else if (kw == "initial" || kw == "final") {
                for (std::size_t k = 1; k < toks.size(); ++k) {
                    kw == "initial" ? a.add_initial(state(toks[k], no)) : a.add_final(state(toks[k], no));
                }
            } else if (kw == "push" || kw == "shift") {
                if (toks.size() != 4) throw InputError(no, "expected '" + kw + " q terminal q2'");
                Terminal x = parse_terminal(toks[2], no);
                if (!a.matrix().structural_label(x)) {
                    throw InputError(no, "terminal '" + toks[2] + "' needs exactly one structural label");
                }
                kw == "push" ? a.add_push(state(toks[1], no), x, state(toks[3], no))
                             : a.add_shift(state(toks[1], no), x, state(toks[3], no));
            } else if (kw == "pop") {
                if (toks.size() != 4) throw InputError(no, "expected 'pop q stored q2'");
                a.add_pop(state(toks[1], no), state(toks[2], no), state(toks[3], no));
            } else {
                throw InputError(no, "unknown directive '" + kw + "'");
            }
        } catch (const std::invalid_argument& e) {
            throw InputError(no, e.what());
        }
    }
    return a;
}

inline std::string write_opa(const Opa& a) {
    std::string out = "state";
    for (StateId q = 0; q < a.state_count(); ++q) out += " " + a.state_name(q);
    out += "\ninitial";
    for (StateId q : a.initial()) out += " " + a.state_name(q);
    out += "\nfinal";
    for (StateId q : a.final_states()) out += " " + a.state_name(q);
    out += "\n";
    for (const auto& t : a.push_transitions()) {
        out += "push " + a.state_name(t.from) + " " + t.symbol.to_string() + " " + a.state_name(t.to) + "\n";
    }
    for (const auto& t : a.shift_transitions()) {
        out += "shift " + a.state_name(t.from) + " " + t.symbol.to_string() + " " + a.state_name(t.to) + "\n";
    }
    for (const auto& t : a.pop_transitions()) {
        out += "pop " + a.state_name(t.from) + " " + a.state_name(t.stored) + " " + a.state_name(t.to) + "\n";
    }
    return out;
}

}  // namespace optl

#endif  // OPTL_TEXT_IO_HPP
