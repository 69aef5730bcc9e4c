#ifndef OPTL_FORMULA_HPP
#define OPTL_FORMULA_HPP

// OPTL abstract syntax (also reused for NWTL, which only adds the mu-next/back
// constructors).

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "optl/core.hpp"

namespace optl {

enum class Op : std::uint8_t {
    True,
    False,
    Atom,
    Not,
    And,
    Or,
    Next,
    Back,
    MatchNext,
    MatchBack,
    Until,
    Since,
    SummaryUntil,
    SummarySince,
    HierYieldUntil,
    HierYieldSince,
    HierTakeUntil,
    HierTakeSince,
    MuNext,  // NWTL only
    MuBack,  // NWTL only
};

/// Bitmask over precedence relations, used by the summary operators.
class RelSet {
public:
    constexpr RelSet() = default;
    constexpr static RelSet of(std::initializer_list<PrecRel> rels) {
        RelSet s;
        for (auto r : rels) s.bits_ |= bit(r);
        return s;
    }
    constexpr static RelSet all() { return of({PrecRel::Yields, PrecRel::Equals, PrecRel::Takes}); }

    constexpr bool contains(PrecRel r) const { return bits_ & bit(r); }
    constexpr bool empty() const { return bits_ == 0; }
    constexpr std::uint8_t bits() const { return bits_; }
    constexpr RelSet with(PrecRel r) const {
        RelSet s = *this;
        s.bits_ |= bit(r);
        return s;
    }

    /// Canonical text: the members of "<=>" in that order.
    std::string to_string() const {
        std::string out;
        for (auto r : {PrecRel::Yields, PrecRel::Equals, PrecRel::Takes}) {
            if (contains(r)) out += to_char(r);
        }
        return out;
    }

    friend constexpr bool operator==(RelSet, RelSet) = default;

private:
    constexpr static std::uint8_t bit(PrecRel r) { return std::uint8_t(1u << unsigned(r)); }
    std::uint8_t bits_ = 0;
};

struct Node;
using Formula = std::shared_ptr<const Node>;

struct Node {
    Op op;
    std::string name;  // atoms only
    RelSet rels;       // summary operators only
    Formula lhs, rhs;  // unary operators use lhs
    std::string key;   // canonical printed form
    std::size_t size;  // number of AST nodes
};

inline bool is_binary(Op op) {
    switch (op) {
    case Op::And:
    case Op::Or:
    case Op::Until:
    case Op::Since:
    case Op::SummaryUntil:
    case Op::SummarySince:
    case Op::HierYieldUntil:
    case Op::HierYieldSince:
    case Op::HierTakeUntil:
    case Op::HierTakeSince: return true;
    default: return false;
    }
}

inline bool is_unary(Op op) {
    switch (op) {
    case Op::Not:
    case Op::Next:
    case Op::Back:
    case Op::MatchNext:
    case Op::MatchBack:
    case Op::MuNext:
    case Op::MuBack: return true;
    default: return false;
    }
}

inline bool is_hierarchical(Op op) {
    return op == Op::HierYieldUntil || op == Op::HierYieldSince || op == Op::HierTakeUntil ||
           op == Op::HierTakeSince;
}

inline const char* op_keyword(Op op) {
    switch (op) {
    case Op::Not: return "~";
    case Op::And: return "&";
    case Op::Or: return "|";
    case Op::Next: return "X";
    case Op::Back: return "Y";
    case Op::MatchNext: return "Xm";
    case Op::MatchBack: return "Ym";
    case Op::Until: return "U";
    case Op::Since: return "S";
    case Op::SummaryUntil: return "U";
    case Op::SummarySince: return "S";
    case Op::HierYieldUntil: return "HUu";
    case Op::HierYieldSince: return "HSu";
    case Op::HierTakeUntil: return "HUd";
    case Op::HierTakeSince: return "HSd";
    case Op::MuNext: return "Xu";
    case Op::MuBack: return "Yu";
    default: return "";
    }
}

namespace detail {

inline Formula make(Op op, std::string name, RelSet rels, Formula lhs, Formula rhs) {
    auto n = std::make_shared<Node>();
    n->op = op;
    n->name = std::move(name);
    n->rels = rels;
    n->lhs = std::move(lhs);
    n->rhs = std::move(rhs);
    n->size = 1 + (n->lhs ? n->lhs->size : 0) + (n->rhs ? n->rhs->size : 0);
    switch (op) {
    case Op::True: n->key = "true"; break;
    case Op::False: n->key = "false"; break;
    case Op::Atom: n->key = n->name; break;
    case Op::Not: n->key = "~" + n->lhs->key; break;
    default:
        if (is_unary(op)) {
            n->key = std::string(op_keyword(op)) + " " + n->lhs->key;
        } else {
            std::string kw = op_keyword(op);
            if (op == Op::SummaryUntil || op == Op::SummarySince) kw += "[" + rels.to_string() + "]";
            n->key = "(" + n->lhs->key + " " + kw + " " + n->rhs->key + ")";
        }
    }
    return n;
}

}  // namespace detail

inline Formula top() { return detail::make(Op::True, "", {}, nullptr, nullptr); }
inline Formula bottom() { return detail::make(Op::False, "", {}, nullptr, nullptr); }
inline Formula atom(std::string name) {
    if (name.empty()) throw std::invalid_argument("empty atom name");
    return detail::make(Op::Atom, std::move(name), {}, nullptr, nullptr);
}
inline Formula unary(Op op, Formula f) {
    if (!is_unary(op)) throw std::invalid_argument("not a unary operator");
    return detail::make(op, "", {}, std::move(f), nullptr);
}
inline Formula binary(Op op, Formula l, Formula r, RelSet rels = {}) {
    if (!is_binary(op)) throw std::invalid_argument("not a binary operator");
    bool summary = op == Op::SummaryUntil || op == Op::SummarySince;
    if (summary && rels.empty()) throw std::invalid_argument("summary operator with empty relation set");
    return detail::make(op, "", summary ? rels : RelSet{}, std::move(l), std::move(r));
}

inline Formula neg(Formula f) { return unary(Op::Not, std::move(f)); }
inline Formula conj(Formula a, Formula b) { return binary(Op::And, std::move(a), std::move(b)); }
inline Formula disj(Formula a, Formula b) { return binary(Op::Or, std::move(a), std::move(b)); }
inline Formula implies(Formula a, Formula b) { return disj(neg(std::move(a)), std::move(b)); }
inline Formula next(Formula f) { return unary(Op::Next, std::move(f)); }
inline Formula back(Formula f) { return unary(Op::Back, std::move(f)); }
inline Formula match_next(Formula f) { return unary(Op::MatchNext, std::move(f)); }
inline Formula match_back(Formula f) { return unary(Op::MatchBack, std::move(f)); }
inline Formula until(Formula a, Formula b) { return binary(Op::Until, std::move(a), std::move(b)); }
inline Formula since(Formula a, Formula b) { return binary(Op::Since, std::move(a), std::move(b)); }
inline Formula summary_until(RelSet o, Formula a, Formula b) {
    return binary(Op::SummaryUntil, std::move(a), std::move(b), o);
}
inline Formula summary_since(RelSet o, Formula a, Formula b) {
    return binary(Op::SummarySince, std::move(a), std::move(b), o);
}
inline Formula hier_yield_until(Formula a, Formula b) { return binary(Op::HierYieldUntil, std::move(a), std::move(b)); }
inline Formula hier_yield_since(Formula a, Formula b) { return binary(Op::HierYieldSince, std::move(a), std::move(b)); }
inline Formula hier_take_until(Formula a, Formula b) { return binary(Op::HierTakeUntil, std::move(a), std::move(b)); }
inline Formula hier_take_since(Formula a, Formula b) { return binary(Op::HierTakeSince, std::move(a), std::move(b)); }
inline Formula eventually(Formula f) { return until(top(), std::move(f)); }
inline Formula globally(Formula f) { return neg(eventually(neg(std::move(f)))); }

/// Big conjunction/disjunction; empty lists give true/false.
inline Formula conj_all(const std::vector<Formula>& fs) {
    if (fs.empty()) return top();
    Formula acc = fs.back();
    for (std::size_t k = fs.size() - 1; k-- > 0;) acc = conj(fs[k], acc);
    return acc;
}
inline Formula disj_all(const std::vector<Formula>& fs) {
    if (fs.empty()) return bottom();
    Formula acc = fs.back();
    for (std::size_t k = fs.size() - 1; k-- > 0;) acc = disj(fs[k], acc);
    return acc;
}

inline const std::string& to_string(const Formula& f) { return f->key; }
inline std::size_t size(const Formula& f) { return f->size; }
inline bool same(const Formula& a, const Formula& b) { return a->key == b->key; }

inline Formula rebuild(const Formula& f, Formula lhs, Formula rhs) {
    if (f->lhs == lhs && f->rhs == rhs) return f;
    return detail::make(f->op, f->name, f->rels, std::move(lhs), std::move(rhs));
}

inline void collect_atoms(const Formula& f, std::set<std::string>& out) {
    if (f->op == Op::Atom) out.insert(f->name);
    if (f->lhs) collect_atoms(f->lhs, out);
    if (f->rhs) collect_atoms(f->rhs, out);
}

/// Rebuilds f so that structurally equal subformulas are one node.
inline Formula share_subterms(const Formula& f, std::unordered_map<std::string, Formula>& pool) {
    if (auto it = pool.find(f->key); it != pool.end()) return it->second;
    Formula l = f->lhs ? share_subterms(f->lhs, pool) : nullptr;
    Formula r = f->rhs ? share_subterms(f->rhs, pool) : nullptr;
    Formula g = rebuild(f, std::move(l), std::move(r));
    pool.emplace(g->key, g);
    return g;
}

inline Formula share_subterms(const Formula& f) {
    std::unordered_map<std::string, Formula> pool;
    return share_subterms(f, pool);
}

inline std::set<std::string> atoms_of(const Formula& f) {
    std::set<std::string> out;
    collect_atoms(f, out);
    return out;
}

inline bool contains_op(const Formula& f, bool (*pred)(Op)) {
    if (pred(f->op)) return true;
    return (f->lhs && contains_op(f->lhs, pred)) || (f->rhs && contains_op(f->rhs, pred));
}

inline std::size_t depth(const Formula& f) {
    std::size_t d = 0;
    if (f->lhs) d = std::max(d, depth(f->lhs));
    if (f->rhs) d = std::max(d, depth(f->rhs));
    return f->lhs ? d + 1 : 0;
}

}  // namespace optl

#endif  // OPTL_FORMULA_HPP
