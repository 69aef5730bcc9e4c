#ifndef OPTL_LOGIC_HPP
#define OPTL_LOGIC_HPP

// The OP word model and the direct evaluator for OPTL.

#include <optional>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "optl/core.hpp"
#include "optl/formula.hpp"

namespace optl {

struct Model {
    OpWord word;
    OpMatrix matrix;
    ChainStructure chains;

    static Model build(OpWord w, OpMatrix m) {
        ChainStructure c = compute_chains(w, m);
        return Model{std::move(w), std::move(m), std::move(c)};
    }

    std::size_t last() const { return word.last(); }
    std::optional<PrecRel> rel(Position i, Position j) const { return matrix.prec(word.label(i), word.label(j)); }
};

using Path = std::vector<Position>;

/// The unique forward OP-summary path from i to j, if any.
inline std::optional<Path> forward_summary_path(const Model& m, Position i, Position j, RelSet o) {
    if (i > j || j > m.last()) return std::nullopt;
    Path p{i};
    Position cur = i;
    while (cur < j) {
        auto h = m.chains.max_forward(cur);
        if (h && *h <= j) {
            cur = *h;
        } else {
            auto r = m.rel(cur, cur + 1);
            if (!r || !o.contains(*r)) return std::nullopt;
            ++cur;
        }
        p.push_back(cur);
    }
    return p;
}

/// The unique backward OP-summary path ending in j and starting in i,
/// listed in ascending order.
inline std::optional<Path> backward_summary_path(const Model& m, Position i, Position j, RelSet o) {
    if (i > j || j > m.last()) return std::nullopt;
    Path p{j};
    Position cur = j;
    while (cur > i) {
        auto h = m.chains.max_backward(cur);
        if (h && *h >= i) {
            cur = *h;
        } else {
            auto r = m.rel(cur - 1, cur);
            if (!r || !o.contains(*r)) return std::nullopt;
            --cur;
        }
        p.push_back(cur);
    }
    std::reverse(p.begin(), p.end());
    return p;
}

enum class HierKind { Yield, Take };

/// Yield: all k with chi(i,k) and i yields to k. Take: all k with chi(k,i)
/// and k takes precedence over i. Ascending in both cases.
inline std::vector<Position> hier_candidates(const Model& m, Position i, HierKind kind) {
    std::vector<Position> out;
    for (auto [a, b] : m.chains.chains()) {
        if (kind == HierKind::Yield && a == i && m.rel(i, b) == PrecRel::Yields) out.push_back(b);
        if (kind == HierKind::Take && b == i && m.rel(a, i) == PrecRel::Takes) out.push_back(a);
    }
    std::sort(out.begin(), out.end());
    return out;
}

class Evaluator {
public:
    explicit Evaluator(const Model& m) : m_(m) {}

    const std::vector<char>& truth(const Formula& f) {
        auto it = memo_.find(f.get());
        if (it != memo_.end()) return it->second;
        std::vector<char> v = compute(f);
        keep_.push_back(f);
        return memo_.emplace(f.get(), std::move(v)).first->second;
    }

    bool eval(Position i, const Formula& f) {
        if (i > m_.last()) throw std::out_of_range("position " + std::to_string(i) + " out of range");
        return truth(f)[i];
    }

private:
    std::vector<char> compute(const Formula& f) {
        const std::size_t end = m_.last();
        std::vector<char> v(end + 1, 0);
        switch (f->op) {
        case Op::True: std::fill(v.begin(), v.end(), 1); break;
        case Op::False: break;
        case Op::Atom:
            for (Position i = 0; i <= end; ++i) v[i] = m_.word.label(i).contains(f->name);
            break;
        case Op::Not: {
            const auto& a = truth(f->lhs);
            for (Position i = 0; i <= end; ++i) v[i] = !a[i];
            break;
        }
        case Op::And:
        case Op::Or: {
            const auto a = truth(f->lhs);
            const auto& b = truth(f->rhs);
            for (Position i = 0; i <= end; ++i) v[i] = f->op == Op::And ? (a[i] && b[i]) : (a[i] || b[i]);
            break;
        }
        case Op::Next: {
            const auto& a = truth(f->lhs);
            for (Position i = 0; i < end; ++i) v[i] = a[i + 1];
            break;
        }
        case Op::Back: {
            const auto& a = truth(f->lhs);
            for (Position i = 1; i <= end; ++i) v[i] = a[i - 1];
            break;
        }
        case Op::MatchNext: {
            const auto& a = truth(f->lhs);
            for (Position i = 0; i <= end; ++i) {
                auto j = m_.chains.max_forward(i);
                v[i] = j && a[*j];
            }
            break;
        }
        case Op::MatchBack: {
            const auto& a = truth(f->lhs);
            for (Position i = 0; i <= end; ++i) {
                auto j = m_.chains.max_backward(i);
                v[i] = j && a[*j];
            }
            break;
        }
        case Op::Until: {
            const auto l = truth(f->lhs);
            const auto& r = truth(f->rhs);
            for (Position k = end + 1; k-- > 0;) v[k] = r[k] || (l[k] && k < end && v[k + 1]);
            break;
        }
        case Op::Since: {
            const auto l = truth(f->lhs);
            const auto& r = truth(f->rhs);
            for (Position k = 0; k <= end; ++k) v[k] = r[k] || (l[k] && k > 0 && v[k - 1]);
            break;
        }
        case Op::SummaryUntil:
        case Op::SummarySince: {
            const auto l = truth(f->lhs);
            const auto& r = truth(f->rhs);
            const bool fwd = f->op == Op::SummaryUntil;
            for (Position i = 0; i <= end; ++i) {
                if (fwd) {
                    for (Position j = i; j <= end && !v[i]; ++j) {
                        if (r[j]) v[i] = walk_forward(i, j, f->rels, l);
                    }
                } else {
                    for (Position j = i + 1; j-- > 0 && !v[i];) {
                        if (r[j]) v[i] = walk_backward(j, i, f->rels, l);
                    }
                }
            }
            break;
        }
        case Op::HierYieldUntil:
        case Op::HierYieldSince:
        case Op::HierTakeUntil:
        case Op::HierTakeSince: {
            const auto l = truth(f->lhs);
            const auto& r = truth(f->rhs);
            const bool yield = f->op == Op::HierYieldUntil || f->op == Op::HierYieldSince;
            const bool is_until = f->op == Op::HierYieldUntil || f->op == Op::HierTakeUntil;
            for (Position i = 0; i <= end; ++i) {
                auto k = hier_candidates(m_, i, yield ? HierKind::Yield : HierKind::Take);
                if (is_until) {
                    // nonempty prefixes: the operand of the until holds along the prefix
                    for (std::size_t e = 0; e < k.size(); ++e) {
                        if (r[k[e]]) {
                            v[i] = 1;
                            break;
                        }
                        if (!l[k[e]]) break;
                    }
                } else {
                    for (std::size_t e = k.size(); e-- > 0;) {
                        if (r[k[e]]) {
                            v[i] = 1;
                            break;
                        }
                        if (!l[k[e]]) break;
                    }
                }
            }
            break;
        }
        case Op::MuNext:
        case Op::MuBack: throw std::invalid_argument("nested-word operator in an OPTL formula");
        }
        return v;
    }

    // the summary path from i to j exists and l holds on all of it but j
    bool walk_forward(Position i, Position j, RelSet o, const std::vector<char>& l) const {
        for (Position cur = i; cur < j;) {
            if (!l[cur]) return false;
            auto h = m_.chains.max_forward(cur);
            if (h && *h <= j) {
                cur = *h;
            } else {
                auto rel = m_.rel(cur, cur + 1);
                if (!rel || !o.contains(*rel)) return false;
                ++cur;
            }
        }
        return true;
    }

    // the backward summary path from j down to i exists and l holds on all
    // of it but i
    bool walk_backward(Position i, Position j, RelSet o, const std::vector<char>& l) const {
        for (Position cur = j; cur > i;) {
            if (!l[cur]) return false;
            auto h = m_.chains.max_backward(cur);
            if (h && *h >= i) {
                cur = *h;
            } else {
                auto rel = m_.rel(cur - 1, cur);
                if (!rel || !o.contains(*rel)) return false;
                --cur;
            }
        }
        return true;
    }

    const Model& m_;
    std::unordered_map<const Node*, std::vector<char>> memo_;
    std::vector<Formula> keep_;
};

inline bool eval(const Model& m, Position i, const Formula& f) { return Evaluator(m).eval(i, f); }

inline std::vector<char> eval_all(const Model& m, const Formula& f) { return Evaluator(m).truth(f); }

inline bool satisfies(const Model& m, const Formula& f) {
    if (m.word.length() == 0) throw std::invalid_argument("satisfaction is defined on nonempty words");
    return eval(m, 1, f);
}

}  // namespace optl

#endif  // OPTL_LOGIC_HPP
