#ifndef OPTL_NWTL_HPP
#define OPTL_NWTL_HPP

// Nested words, NWTL semantics, and their translation into OP words and
// OPTL formulas.
//
// Text format: terminal tokens as in the word format (`{}` is the empty set),
// plus directive lines
//   mu i j      matched call i and return j
//   call i      pending call       ret j    pending return

#include <algorithm>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "optl/core.hpp"
#include "optl/formula.hpp"
#include "optl/text_io.hpp"

namespace optl {

inline constexpr const char* kCall = "call";
inline constexpr const char* kRet = "ret";
inline constexpr const char* kInt = "int";

inline bool is_reserved_nw_name(const std::string& p) {
    return p == kCall || p == kRet || p == kInt || p == kDelimiter;
}

class NestedWord {
public:
    NestedWord() = default;

    /// labels[k] holds the propositions of position k+1. Throws
    /// std::invalid_argument when the structure is not a nested word.
    NestedWord(std::vector<std::set<std::string>> labels, std::set<ChainPair> mu, std::set<Position> pending_calls = {},
               std::set<Position> pending_rets = {})
        : labels_(std::move(labels)), mu_(std::move(mu)) {
        const std::size_t n = labels_.size();
        call_.assign(n + 1, 0);
        ret_.assign(n + 1, 0);
        forward_.assign(n + 2, std::nullopt);
        backward_.assign(n + 2, std::nullopt);
        for (const auto& l : labels_) {
            for (const auto& p : l) {
                if (is_reserved_nw_name(p) || p.empty()) throw std::invalid_argument("reserved proposition '" + p + "'");
            }
        }
        for (auto [i, j] : mu_) {
            if (!(1 <= i && i < j && j <= n)) throw std::invalid_argument("matching pair out of range");
            if (forward_[i] || backward_[j]) throw std::invalid_argument("matching relation is not one-to-one");
            forward_[i] = j;
            backward_[j] = i;
            call_[i] = ret_[j] = 1;
        }
        for (auto i : pending_calls) {
            if (i < 1 || i > n || forward_[i]) throw std::invalid_argument("bad pending call");
            call_[i] = 1;
        }
        for (auto j : pending_rets) {
            if (j < 1 || j > n || backward_[j]) throw std::invalid_argument("bad pending return");
            ret_[j] = 1;
        }
        for (Position i = 1; i <= n; ++i) {
            if (call_[i] && ret_[i]) throw std::invalid_argument("position " + std::to_string(i) + " is both call and return");
        }
        // every return closes the innermost open call, or finds none open
        std::vector<Position> open;
        for (Position i = 1; i <= n; ++i) {
            if (call_[i]) open.push_back(i);
            if (!ret_[i]) continue;
            if (backward_[i] ? open.empty() || open.back() != *backward_[i] : !open.empty()) {
                throw std::invalid_argument("matching relation is not well nested");
            }
            if (backward_[i]) open.pop_back();
        }
    }

    std::size_t length() const { return labels_.size(); }
    const std::set<std::string>& label(Position i) const { return labels_.at(i - 1); }
    const std::set<ChainPair>& mu() const { return mu_; }
    bool is_call(Position i) const { return i >= 1 && i <= length() && call_[i]; }
    bool is_ret(Position i) const { return i >= 1 && i <= length() && ret_[i]; }
    bool is_pending_call(Position i) const { return is_call(i) && !forward_[i]; }
    bool is_pending_ret(Position j) const { return is_ret(j) && !backward_[j]; }
    std::optional<Position> match_forward(Position i) const { return i < forward_.size() ? forward_[i] : std::nullopt; }
    std::optional<Position> match_backward(Position j) const { return j < backward_.size() ? backward_[j] : std::nullopt; }

    std::set<std::string> propositions() const {
        std::set<std::string> out;
        for (const auto& l : labels_) out.insert(l.begin(), l.end());
        return out;
    }

    friend bool operator==(const NestedWord& a, const NestedWord& b) {
        return a.labels_ == b.labels_ && a.mu_ == b.mu_ && a.call_ == b.call_ && a.ret_ == b.ret_;
    }

private:
    std::vector<std::set<std::string>> labels_;
    std::set<ChainPair> mu_;
    std::vector<char> call_, ret_;
    std::vector<std::optional<Position>> forward_, backward_;
};

/// The summary path from i to j (i <= j), ascending.
inline std::vector<Position> nw_summary_path(const NestedWord& w, Position i, Position j) {
    if (i > j || i < 1 || j > w.length()) throw std::out_of_range("bad summary path endpoints");
    std::vector<Position> p{i};
    for (Position cur = i; cur < j;) {
        auto h = w.match_forward(cur);
        cur = h && *h <= j ? *h : cur + 1;
        p.push_back(cur);
    }
    return p;
}

/// Direct NWTL semantics. Until and since are the summary operators; Xu and
/// Yu follow the matching relation.
class NwEvaluator {
public:
    explicit NwEvaluator(const NestedWord& w) : w_(w) {}

    const std::vector<char>& truth(const Formula& f) {
        auto it = memo_.find(f.get());
        if (it != memo_.end()) return it->second;
        std::vector<char> v = compute(f);
        keep_.push_back(f);
        return memo_.emplace(f.get(), std::move(v)).first->second;
    }

    bool eval(Position i, const Formula& f) {
        if (i < 1 || i > w_.length()) throw std::out_of_range("position " + std::to_string(i) + " out of range");
        return truth(f)[i];
    }

private:
    // index 0 is unused; positions are 1..n
    std::vector<char> compute(const Formula& f) {
        const std::size_t n = w_.length();
        std::vector<char> v(n + 1, 0);
        switch (f->op) {
        case Op::True:
            for (Position i = 1; i <= n; ++i) v[i] = 1;
            break;
        case Op::False: break;
        case Op::Atom:
            for (Position i = 1; i <= n; ++i) {
                if (f->name == kCall) v[i] = w_.is_call(i);
                else if (f->name == kRet) v[i] = w_.is_ret(i);
                else v[i] = w_.label(i).count(f->name) > 0;
            }
            break;
        case Op::Not: {
            const auto& a = truth(f->lhs);
            for (Position i = 1; i <= n; ++i) v[i] = !a[i];
            break;
        }
        case Op::And:
        case Op::Or: {
            const auto a = truth(f->lhs);
            const auto& b = truth(f->rhs);
            for (Position i = 1; i <= n; ++i) v[i] = f->op == Op::And ? (a[i] && b[i]) : (a[i] || b[i]);
            break;
        }
        case Op::Next: {
            const auto& a = truth(f->lhs);
            for (Position i = 1; i < n; ++i) v[i] = a[i + 1];
            break;
        }
        case Op::Back: {
            const auto& a = truth(f->lhs);
            for (Position i = 2; i <= n; ++i) v[i] = a[i - 1];
            break;
        }
        case Op::MuNext: {
            const auto& a = truth(f->lhs);
            for (Position i = 1; i <= n; ++i) {
                auto j = w_.match_forward(i);
                v[i] = j && a[*j];
            }
            break;
        }
        case Op::MuBack: {
            const auto& a = truth(f->lhs);
            for (Position i = 1; i <= n; ++i) {
                auto j = w_.match_backward(i);
                v[i] = j && a[*j];
            }
            break;
        }
        case Op::Until:
        case Op::Since: {
            const auto l = truth(f->lhs);
            const auto& r = truth(f->rhs);
            const bool until = f->op == Op::Until;
            for (Position i = 1; i <= n && n > 0; ++i) {
                for (Position j = 1; j <= n && !v[i]; ++j) {
                    if (until ? j < i : j > i) continue;
                    Position from = until ? i : j, to = until ? j : i;
                    if (!r[j]) continue;
                    auto p = nw_summary_path(w_, from, to);
                    bool ok = true;
                    for (auto k : p) {
                        if (k != j && !l[k]) ok = false;
                    }
                    v[i] = ok;
                }
            }
            break;
        }
        default: throw std::invalid_argument("operator '" + std::string(op_keyword(f->op)) + "' is not part of NWTL");
        }
        return v;
    }

    const NestedWord& w_;
    std::map<const Node*, std::vector<char>> memo_;
    std::vector<Formula> keep_;
};

inline bool nw_eval(const NestedWord& w, Position i, const Formula& f) { return NwEvaluator(w).eval(i, f); }

/// The precedence matrix for translated nested words over the given
/// propositions.
inline OpMatrix nw_matrix(const std::set<std::string>& props) {
    StructuralOpm s({kCall, kInt, kRet});
    const PrecRel Y = PrecRel::Yields, E = PrecRel::Equals, T = PrecRel::Takes;
    s.set(kCall, kCall, Y);
    s.set(kCall, kRet, E);
    s.set(kCall, kInt, Y);
    s.set(kRet, kCall, E);
    s.set(kRet, kRet, T);
    s.set(kRet, kInt, E);
    s.set(kInt, kCall, E);
    s.set(kInt, kRet, T);
    s.set(kInt, kInt, E);
    std::vector<std::string> ap{kCall, kInt, kRet};
    for (const auto& p : props) {
        if (is_reserved_nw_name(p)) throw std::invalid_argument("reserved proposition '" + p + "'");
        ap.push_back(p);
    }
    return OpMatrix(s, ap);
}

struct NwTranslation {
    OpWord word;
    OpMatrix matrix;
};

inline NwTranslation translate_word(const NestedWord& w) {
    std::vector<Terminal> ts;
    for (Position i = 1; i <= w.length(); ++i) {
        std::vector<std::string> props(w.label(i).begin(), w.label(i).end());
        props.push_back(w.is_call(i) ? kCall : w.is_ret(i) ? kRet : kInt);
        ts.emplace_back(std::move(props));
    }
    return NwTranslation{OpWord(std::move(ts)), nw_matrix(w.propositions())};
}

namespace detail {

inline Formula not_delim(Formula f) { return conj(std::move(f), neg(atom(kDelimiter))); }

}  // namespace detail

/// The linear translation of NWTL into OPTL. Next, back and the targets of
/// until/since exclude the delimiters, which are positions of the OP word
/// but not of the nested word.
inline Formula translate_formula(const Formula& f) {
    switch (f->op) {
    case Op::True:
    case Op::False: return f;
    case Op::Atom:
        if (f->name == kInt || f->name == kDelimiter) throw std::invalid_argument("reserved atom '" + f->name + "' in NWTL");
        return f;
    case Op::Not: return neg(translate_formula(f->lhs));
    case Op::And: return conj(translate_formula(f->lhs), translate_formula(f->rhs));
    case Op::Or: return disj(translate_formula(f->lhs), translate_formula(f->rhs));
    case Op::Next: return next(detail::not_delim(translate_formula(f->lhs)));
    case Op::Back: return back(detail::not_delim(translate_formula(f->lhs)));
    case Op::MuNext:
        return conj(summary_until(RelSet::of({PrecRel::Equals}), atom(kCall), conj(atom(kRet), translate_formula(f->lhs))),
                    neg(atom(kRet)));
    case Op::MuBack:
        return conj(summary_since(RelSet::of({PrecRel::Equals}), atom(kRet), conj(atom(kCall), translate_formula(f->lhs))),
                    neg(atom(kCall)));
    case Op::Until:
        return summary_until(RelSet::all(), translate_formula(f->lhs), detail::not_delim(translate_formula(f->rhs)));
    case Op::Since:
        return summary_since(RelSet::all(), translate_formula(f->lhs), detail::not_delim(translate_formula(f->rhs)));
    default: throw std::invalid_argument("operator '" + std::string(op_keyword(f->op)) + "' is not part of NWTL");
    }
}

/// Random nested word: kinds drawn uniformly, returns matched last-in
/// first-out, so returns on an empty stack and calls left open are pending.
template <class Rng>
NestedWord random_nested_word(Rng& rng, std::size_t n, const std::vector<std::string>& props) {
    std::vector<std::set<std::string>> labels(n);
    std::set<ChainPair> mu;
    std::set<Position> pc, pr;
    std::vector<Position> open;
    std::uniform_int_distribution<int> kind(0, 2), coin(0, 1);
    for (Position i = 1; i <= n; ++i) {
        for (const auto& p : props) {
            if (coin(rng)) labels[i - 1].insert(p);
        }
        switch (kind(rng)) {
        case 0: open.push_back(i); break;
        case 1:
            if (open.empty()) {
                pr.insert(i);
            } else {
                mu.emplace(open.back(), i);
                open.pop_back();
            }
            break;
        default: break;
        }
    }
    pc.insert(open.begin(), open.end());
    return NestedWord(std::move(labels), std::move(mu), std::move(pc), std::move(pr));
}

inline NestedWord parse_nested_word(const std::string& text) {
    std::vector<std::set<std::string>> labels;
    std::set<ChainPair> mu;
    std::set<Position> pc, pr;
    std::vector<std::pair<std::size_t, std::vector<std::string>>> directives;
    for (const auto& [no, toks] : detail::tokenized_lines(text)) {
        if (toks[0] == "mu" || toks[0] == kCall || toks[0] == kRet) {
            directives.emplace_back(no, toks);
            continue;
        }
        for (const auto& tok : toks) {
            Terminal t = parse_terminal(tok, no);
            labels.emplace_back(t.props().begin(), t.props().end());
        }
    }
    auto num = [](const std::string& s, std::size_t no) -> Position {
        if (s.empty() || !std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; })) {
            throw InputError(no, "expected a position, got '" + s + "'");
        }
        return std::stoul(s);
    };
    for (const auto& [no, toks] : directives) {
        if (toks[0] == "mu") {
            if (toks.size() != 3) throw InputError(no, "expected 'mu i j'");
            mu.emplace(num(toks[1], no), num(toks[2], no));
        } else {
            if (toks.size() != 2) throw InputError(no, "expected '" + toks[0] + " i'");
            (toks[0] == kCall ? pc : pr).insert(num(toks[1], no));
        }
    }
    try {
        return NestedWord(std::move(labels), std::move(mu), std::move(pc), std::move(pr));
    } catch (const std::invalid_argument& e) {
        throw InputError(0, e.what());
    }
}

inline std::string write_nested_word(const NestedWord& w) {
    std::string out;
    for (Position i = 1; i <= w.length(); ++i) {
        const auto& l = w.label(i);
        out += (i > 1 ? " " : "") + Terminal(std::vector<std::string>(l.begin(), l.end())).to_string();
    }
    out += "\n";
    for (auto [i, j] : w.mu()) out += "mu " + std::to_string(i) + " " + std::to_string(j) + "\n";
    for (Position i = 1; i <= w.length(); ++i) {
        if (w.is_pending_call(i)) out += "call " + std::to_string(i) + "\n";
        if (w.is_pending_ret(i)) out += "ret " + std::to_string(i) + "\n";
    }
    return out;
}

}  // namespace optl

#endif  // OPTL_NWTL_HPP
