#ifndef OPTL_REWRITE_HPP
#define OPTL_REWRITE_HPP

// Letters as formulas and the elimination of hierarchical operators in
// favour of summary until/since.

#include <algorithm>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "optl/core.hpp"
#include "optl/formula.hpp"

namespace optl {

enum class LetterMode {
    ByLabel,     // one class per structural label; relations only depend on it
    Restricted,  // every terminal with exactly one structural label
    All          // every subset of the proposition set
};

struct ApContext {
    OpMatrix matrix;
    LetterMode mode = LetterMode::ByLabel;

    const std::vector<std::string>& ap() const { return matrix.ap(); }

    /// Terminals ranged over by sigma-based disjunctions (ByLabel enumerates
    /// like Restricted here).
    std::vector<Terminal> letters() const {
        if (mode != LetterMode::All) return matrix.alphabet();
        const auto& ap = matrix.ap();
        if (ap.size() > 20) throw std::length_error("proposition set too large to enumerate");
        std::vector<Terminal> out;
        for (std::size_t mask = 0; mask < (std::size_t{1} << ap.size()); ++mask) {
            std::vector<std::string> props;
            for (std::size_t k = 0; k < ap.size(); ++k) {
                if (mask >> k & 1) props.push_back(ap[k]);
            }
            out.emplace_back(std::move(props));
        }
        std::sort(out.begin(), out.end());
        return out;
    }
};

namespace detail {

inline Formula and_(Formula a, Formula b) {
    if (a->op == Op::False || b->op == Op::False) return bottom();
    if (a->op == Op::True) return b;
    if (b->op == Op::True) return a;
    return conj(std::move(a), std::move(b));
}

inline Formula or_(Formula a, Formula b) {
    if (a->op == Op::True || b->op == Op::True) return top();
    if (a->op == Op::False) return b;
    if (b->op == Op::False) return a;
    return disj(std::move(a), std::move(b));
}

inline Formula not_(Formula a) {
    if (a->op == Op::True) return bottom();
    if (a->op == Op::False) return top();
    if (a->op == Op::Not) return a->lhs;
    return neg(std::move(a));
}

}  // namespace detail

inline Formula sigma(const ApContext& ctx, const Terminal& a) {
    if (a.is_delimiter()) return atom(kDelimiter);
    for (const auto& p : a.props()) {
        if (std::find(ctx.ap().begin(), ctx.ap().end(), p) == ctx.ap().end()) {
            throw std::invalid_argument("letter '" + p + "' is not in the proposition set");
        }
    }
    std::vector<Formula> parts;
    for (const auto& p : ctx.ap()) parts.push_back(a.contains(p) ? atom(p) : neg(atom(p)));
    return conj_all(parts);
}

/// Disjunction of sigma(b) over the letters b (and '#') satisfying keep.
inline Formula sigma_where(const ApContext& ctx, const std::function<bool(const Terminal&)>& keep) {
    std::vector<Formula> parts;
    if (keep(Terminal::delimiter())) parts.push_back(sigma(ctx, Terminal::delimiter()));
    for (const auto& b : ctx.letters()) {
        if (keep(b)) parts.push_back(sigma(ctx, b));
    }
    return disj_all(parts);
}

inline Formula xi_yield(const ApContext& ctx, const Terminal& a) {
    return sigma_where(ctx, [&](const Terminal& b) { return ctx.matrix.prec(a, b) == PrecRel::Yields; });
}

inline Formula xi_take(const ApContext& ctx, const Terminal& a) {
    return sigma_where(ctx, [&](const Terminal& b) { return ctx.matrix.prec(b, a) == PrecRel::Takes; });
}

/// The displayed translation of the yield until, kept for comparison. It
/// is not sound in general: its path can run past the end of the chain body
/// rooted at the current position (see the rewrite tests).
inline Formula literal_yield_until(const ApContext& ctx, const Formula& phi, const Formula& psi) {
    const RelSet o = RelSet::of({PrecRel::Takes, PrecRel::Equals});
    std::vector<Formula> parts;
    for (const auto& a : ctx.letters()) {
        Formula sa = sigma(ctx, a);
        Formula left = implies(match_back(sa), phi);
        Formula right = conj(match_back(sa), conj(xi_yield(ctx, a), psi));
        parts.push_back(conj(sa, next(summary_until(o, left, right))));
    }
    return disj_all(parts);
}

namespace detail {

// Builds the four translations from one scheme. Forward covers the yield
// operators over positions to the right; the mirror covers the take
// operators. Nearest-first is the until for yield and the since for take.
class HierScheme {
public:
    HierScheme(const ApContext& ctx, bool forward) : ctx_(ctx), fwd_(forward) {
        classes_.push_back({Terminal::delimiter(), atom(kDelimiter)});
        if (ctx.mode == LetterMode::ByLabel) {
            const auto& labels = ctx.matrix.structure().labels;
            for (const auto& l : labels) {
                std::vector<Formula> parts{atom(l)};
                for (const auto& o : labels) {
                    if (o != l) parts.push_back(neg(atom(o)));
                }
                classes_.push_back({Terminal({l}), conj_all(parts)});
            }
        } else {
            for (const auto& a : ctx.letters()) classes_.push_back({a, sigma(ctx, a)});
        }
    }

    Formula nearest_first(const Formula& phi, const Formula& psi) const {
        std::vector<Formula> parts;
        for (const auto& [a, sa] : classes_) {
            Formula c = candidate(a, sa);
            if (c->op == Op::False) continue;
            Formula left = and_(or_(not_(c), phi), guard(a));
            parts.push_back(and_(sa, step(and_(opens(a), sum(left, and_(c, psi))))));
        }
        return disj_all(parts);
    }

    Formula farthest_first(const Formula& phi, const Formula& psi) const {
        std::vector<Formula> parts;
        for (const auto& [a, sa] : classes_) {
            Formula c = candidate(a, sa);
            if (c->op == Op::False) continue;
            Formula g = guard(a);
            Formula later_fails = and_(g, path_next(sum(g, and_(c, not_(phi)))));
            parts.push_back(and_(sa, step(and_(opens(a), sum(g, and_(c, and_(psi, not_(later_fails))))))));
        }
        return disj_all(parts);
    }

private:
    PrecRel toward() const { return fwd_ ? PrecRel::Yields : PrecRel::Takes; }
    PrecRel away() const { return fwd_ ? PrecRel::Takes : PrecRel::Yields; }

    // relation between a and b read in the direction of travel
    std::optional<PrecRel> rel(const Terminal& a, const Terminal& b) const {
        return fwd_ ? ctx_.matrix.prec(a, b) : ctx_.matrix.prec(b, a);
    }

    Formula step(Formula f) const { return fwd_ ? next(std::move(f)) : back(std::move(f)); }
    Formula jump(Formula f) const { return fwd_ ? match_next(std::move(f)) : match_back(std::move(f)); }
    Formula jump_back(Formula f) const { return fwd_ ? match_back(std::move(f)) : match_next(std::move(f)); }
    Formula sum(Formula l, Formula r) const {
        RelSet o = RelSet::of({away(), PrecRel::Equals});
        return fwd_ ? summary_until(o, std::move(l), std::move(r)) : summary_since(o, std::move(l), std::move(r));
    }

    // next position of the summary path: the maximal chain partner if any,
    // the adjacent position otherwise
    Formula path_next(const Formula& f) const { return or_(jump(f), and_(not_(jump(top())), step(f))); }

    Formula where(const std::function<bool(const Terminal&)>& keep) const {
        std::vector<Formula> parts;
        for (const auto& [b, sb] : classes_) {
            if (keep(b)) parts.push_back(sb);
        }
        return disj_all(parts);
    }

    // the neighbour starts a chain body rooted at a position labelled a
    Formula opens(const Terminal& a) const {
        return where([&](const Terminal& b) { return rel(a, b) == toward(); });
    }

    Formula candidate(const Terminal& a, const Formula& sa) const {
        Formula x = opens(a);
        if (x->op == Op::False) return x;
        return and_(jump_back(sa), x);
    }

    // false where the path would next leave the body rooted at a position
    // labelled a
    Formula guard(const Terminal& a) const {
        std::vector<Formula> exits;
        for (const auto& [b, sb] : classes_) {
            Formula out = where([&](const Terminal& c) { return rel(b, c) == away() && rel(a, c) != toward(); });
            if (out->op == Op::False) continue;
            exits.push_back(and_(sb, path_next(out)));
        }
        return not_(disj_all(exits));
    }

    const ApContext& ctx_;
    bool fwd_;
    std::vector<std::pair<Terminal, Formula>> classes_;
};

}  // namespace detail

namespace detail {

inline Formula eliminate(const ApContext& ctx, const Formula& f) {
    if (!f->lhs) return f;
    Formula l = eliminate(ctx, f->lhs);
    Formula r = f->rhs ? eliminate(ctx, f->rhs) : nullptr;
    switch (f->op) {
    case Op::HierYieldUntil: return HierScheme(ctx, true).nearest_first(l, r);
    case Op::HierYieldSince: return HierScheme(ctx, true).farthest_first(l, r);
    case Op::HierTakeSince: return HierScheme(ctx, false).nearest_first(l, r);
    case Op::HierTakeUntil: return HierScheme(ctx, false).farthest_first(l, r);
    default: return rebuild(f, std::move(l), std::move(r));
    }
}

}  // namespace detail

/// Bottom-up replacement of every hierarchical operator.
inline Formula eliminate_hierarchical(const ApContext& ctx, const Formula& f) {
    if (!contains_op(f, is_hierarchical)) return f;
    return share_subterms(detail::eliminate(ctx, f));
}

}  // namespace optl

#endif  // OPTL_REWRITE_HPP
