#ifndef OPTL_TABLEAU_HPP
#define OPTL_TABLEAU_HPP

// Compilation of a formula into an operator-precedence automaton.
//
// A state is a subset of the closure made of
//   - the atom of the lookahead position (every base formula's value),
//   - a copy of the values needed later from the atom of the position whose
//     terminal is on top of the stack,
//   - the scan of that top position's yield candidates seen so far,
//   - a flag telling whether a pop already happened at the lookahead,
//   - the scan of the lookahead's take candidates seen so far.
// Every obligation is checked as an equivalence, so negated operators come
// for free. Position 0 is guessed together with the initial state and
// position n+1 is the lookahead of the final state.
// Formulas that no temporal operator looks through are only needed at
// position 1; elsewhere they are left false and unchecked, which keeps the
// state space small when the root is temporal.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "optl/core.hpp"
#include "optl/formula.hpp"
#include "optl/opa.hpp"

namespace optl {

struct Closure {
    std::vector<std::string> elements;  // formulas with their negations, then markers

    std::size_t size() const { return elements.size(); }
    bool contains(const std::string& e) const {
        return std::find(elements.begin(), elements.end(), e) != elements.end();
    }
};

struct TableauStats {
    std::size_t closure_size = 0;
    std::size_t states = 0;
    std::size_t initial = 0;
    std::size_t final = 0;
    std::size_t push = 0;
    std::size_t shift = 0;
    std::size_t pop = 0;
};

struct Tableau {
    Opa automaton;
    Closure closure;
    /// Per state: the base formulas true at the lookahead position.
    std::vector<std::vector<std::string>> atoms;
    TableauStats stats;
};

namespace detail {

class TableauBuilder {
public:
    TableauBuilder(const Formula& f, const OpMatrix& m, const std::vector<Terminal>* alphabet = nullptr) : f_(f), m_(m) {
        props_ = m.ap();
        props_.push_back(kDelimiter);
        collect(f);
        for (const auto& p : props_) add_base(atom(p));
        std::vector<Formula> extra;
        for (const auto& [k, g] : base_by_key_) {
            switch (g->op) {
            case Op::Until: extra.push_back(next(g)); break;
            case Op::Since: extra.push_back(back(g)); break;
            case Op::SummaryUntil:
                extra.push_back(next(g));
                extra.push_back(match_next(g));
                break;
            case Op::SummarySince:
                extra.push_back(back(g));
                extra.push_back(match_back(g));
                break;
            default: break;
            }
        }
        for (const auto& g : extra) add_base(g);
        for (const auto& [k, g] : base_by_key_) base_.push_back(g);
        std::sort(base_.begin(), base_.end(), [](const Formula& a, const Formula& b) {
            return std::make_pair(a->size, a->key) < std::make_pair(b->size, b->key);
        });
        for (std::size_t i = 0; i < base_.size(); ++i) index_[base_[i]->key] = std::uint32_t(i);
        global_.assign(base_.size(), 0);
        std::set<std::pair<std::string, bool>> marked;
        mark(f, false, marked);
        compile();
        labels_ = alphabet ? *alphabet : m.alphabet();
        std::sort(labels_.begin(), labels_.end());
        labels_.erase(std::unique(labels_.begin(), labels_.end()), labels_.end());
        labels_.erase(std::remove_if(labels_.begin(), labels_.end(),
                                     [&](const Terminal& t) { return t.is_delimiter() || !m.structural_label(t); }),
                      labels_.end());
        labels_.push_back(Terminal::delimiter());
        delim_ = labels_.size() - 1;
        for (std::size_t b = 0; b < labels_.size(); ++b) {
            std::string bits(props_.size(), 0);
            for (std::size_t p = 0; p < props_.size(); ++p) {
                bits[p] = labels_[b].is_delimiter() ? props_[p] == kDelimiter : labels_[b].contains(props_[p]);
            }
            label_by_bits_[bits] = b;
            label_bits_.push_back(std::move(bits));
        }
        nk_ = tracked_.size();
        off_k_ = nb_;
        off_top_first_ = off_k_ + nk_;
        off_y_ = off_top_first_ + 1;
        off_popped_ = off_y_ + yield_width_;
        off_first_ = off_popped_ + 1;
        off_t_ = off_first_ + 1;
        width_ = off_t_ + take_width_;
    }

    Closure closure() const {
        Closure c;
        for (const auto& g : base_) {
            c.elements.push_back(g->key);
            c.elements.push_back(to_string(neg(g)));
        }
        for (auto i : tracked_) c.elements.push_back("top(" + base_[i]->key + ")");
        c.elements.push_back("top(first)");
        for (const auto& s : scans_) {
            const std::string h = base_[s.node]->key;
            if (s.nearest) {
                c.elements.push_back("ended(" + h + ")");
                c.elements.push_back("pending(" + h + ")");
            } else {
                c.elements.push_back("holds(" + h + ")");
            }
        }
        c.elements.push_back("popped");
        c.elements.push_back("first");
        return c;
    }

    Tableau build() {
        Tableau out{Opa(m_), closure(), {}, {}};
        Opa& a = out.automaton;
        constexpr StateId none = StateId(-1);

        std::unordered_map<std::string, StateId> ids;
        std::vector<std::string> states;
        std::vector<char> done;  // top_done, cached per state
        std::vector<std::vector<StateId>> below, popped_to;
        std::vector<std::unordered_set<StateId>> below_set, popped_set;
        std::vector<std::optional<std::vector<std::pair<MoveKind, StateId>>>> reads;
        auto id_of = [&](const std::string& s) {
            auto [it, fresh] = ids.emplace(s, states.size());
            if (fresh) {
                states.push_back(s);
                done.push_back(top_done(s));
                a.add_state("q" + std::to_string(it->second));
                below.emplace_back();
                popped_to.emplace_back();
                below_set.emplace_back();
                popped_set.emplace_back();
                reads.emplace_back();
            }
            return it->second;
        };

        // seen[q][s + 1]: the pair (state q, stored state s on top) was queued
        std::vector<std::vector<bool>> seen;
        std::vector<std::pair<StateId, StateId>> work;
        auto visit = [&](StateId q, StateId s) {
            if (seen.size() <= q) seen.resize(q + 1);
            auto& row = seen[q];
            const std::size_t k = s + 1;
            if (row.size() <= k) row.resize(std::max(k + 1, states.size() + 1));
            if (row[k]) return;
            row[k] = true;
            work.emplace_back(q, s);
        };

        for (const auto& s : initial_states()) {
            StateId q = id_of(s);
            a.add_initial(q);
            visit(q, none);
        }

        while (!work.empty()) {
            auto [q, s] = work.back();
            work.pop_back();
            if (!reads[q]) {
                std::vector<std::pair<MoveKind, std::string>> next_states;
                read_moves(states[q], next_states);
                std::vector<std::pair<MoveKind, StateId>> moves;
                const Terminal sym = labels_[label_of(states[q])];
                for (const auto& [kind, t] : next_states) {
                    StateId to = id_of(t);
                    if (kind == MoveKind::Push) {
                        a.add_push(q, sym, to);
                        visit(to, q);
                    } else {
                        a.add_shift(q, sym, to);
                    }
                    moves.emplace_back(kind, to);
                }
                reads[q] = std::move(moves);
            }
            const auto& moves = *reads[q];
            if (!moves.empty() && moves.front().first == MoveKind::Push && below_set[q].insert(s).second) {
                below[q].push_back(s);
                for (std::size_t k = 0; k < popped_to[q].size(); ++k) visit(popped_to[q][k], s);
            }
            if (s != none) {
                for (auto [kind, t] : moves) {
                    if (kind == MoveKind::Shift) visit(t, s);
                }
            }
            if (s == none || !done[q]) continue;
            StateId to = id_of(pop(states[q], states[s]));
            a.add_pop(q, s, to);
            if (!popped_set[s].insert(to).second) continue;  // already spread over below[s]
            popped_to[s].push_back(to);
            for (std::size_t k = 0; k < below[s].size(); ++k) visit(to, below[s][k]);
        }

        for (StateId q = 0; q < states.size(); ++q) {
            if (is_final(states[q])) a.add_final(q);
            std::vector<std::string> atom_q;
            for (std::size_t i = 0; i < nb_; ++i) {
                if (states[q][i]) atom_q.push_back(base_[i]->key);
            }
            out.atoms.push_back(std::move(atom_q));
        }

        out.stats.closure_size = out.closure.size();
        out.stats.states = a.state_count();
        out.stats.initial = a.initial().size();
        out.stats.final = a.final_states().size();
        out.stats.push = a.push_count();
        out.stats.shift = a.shift_count();
        out.stats.pop = a.pop_count();
        return out;
    }

private:
    struct Ref {
        std::uint32_t idx = 0;
        bool neg = false;
        friend bool operator==(const Ref&, const Ref&) = default;
    };

    struct Cell {
        Op op;
        Ref a, b;
        std::uint32_t step = 0, jump = 0;  // expansion formulas
        RelSet o;
        std::size_t prop = 0;
        std::size_t slot = 0;  // tracked copy of the cell itself or its operand
        bool global = true;
    };

    struct Scan {
        std::uint32_t node;
        bool yield;    // yield candidates, scanned in K; take candidates in T
        bool nearest;  // two bits: ended, pending; otherwise one bit: holds
        Ref a, b;
        std::size_t acc;           // offset within its scan block
        std::size_t sa = 0, sb = 0;  // tracked operands (take)
        std::size_t sv = 0;          // tracked value (yield)
        bool global = true;
    };

    void collect(const Formula& g) {
        if (g->op == Op::MuNext || g->op == Op::MuBack) {
            throw std::invalid_argument("nested-word operator in an OPTL formula: " + g->key);
        }
        if (g->op == Op::Atom) {
            if (std::find(props_.begin(), props_.end(), g->name) == props_.end()) {
                throw std::invalid_argument("atom '" + g->name + "' is not in the proposition set");
            }
        }
        if (g->op != Op::Not) add_base(g);
        if (g->lhs) collect(g->lhs);
        if (g->rhs) collect(g->rhs);
    }

    void add_base(const Formula& g) { base_by_key_.emplace(g->key, g); }

    // global: some temporal operator may need the value away from position 1
    void mark(const Formula& g, bool under, std::set<std::pair<std::string, bool>>& done) {
        if (!done.insert({g->key, under}).second) return;
        const bool boolean = g->op == Op::Not || g->op == Op::And || g->op == Op::Or;
        if (g->op != Op::Not && under) global_[index_.at(g->key)] = 1;
        if (g->lhs) mark(g->lhs, under || !boolean, done);
        if (g->rhs) mark(g->rhs, under || !boolean, done);
    }

    Ref ref(const Formula& g) const {
        if (g->op == Op::Not) {
            Ref r = ref(g->lhs);
            r.neg = !r.neg;
            return r;
        }
        return {index_.at(g->key), false};
    }

    std::size_t track(std::uint32_t i) {
        auto it = std::find(tracked_.begin(), tracked_.end(), i);
        if (it != tracked_.end()) return std::size_t(it - tracked_.begin());
        tracked_.push_back(i);
        return tracked_.size() - 1;
    }

    void compile() {
        nb_ = base_.size();
        cells_.resize(nb_);
        for (std::size_t i = 0; i < nb_; ++i) {
            const Formula& g = base_[i];
            Cell& c = cells_[i];
            c.op = g->op;
            c.o = g->rels;
            if (g->lhs) c.a = ref(g->lhs);
            if (g->rhs) c.b = ref(g->rhs);
            switch (g->op) {
            case Op::Atom:
                c.prop = std::size_t(std::find(props_.begin(), props_.end(), g->name) - props_.begin());
                break;
            case Op::Until: c.step = index_.at(next(g)->key); break;
            case Op::Since: c.step = index_.at(back(g)->key); break;
            case Op::SummaryUntil:
                c.step = index_.at(next(g)->key);
                c.jump = index_.at(match_next(g)->key);
                break;
            case Op::SummarySince:
                c.step = index_.at(back(g)->key);
                c.jump = index_.at(match_back(g)->key);
                break;
            default: break;
            }
        }
        // the expansions refer to the operator at other positions
        for (std::size_t i = 0; i < nb_; ++i) {
            Cell& c = cells_[i];
            if (c.op == Op::Until || c.op == Op::Since || c.op == Op::SummaryUntil || c.op == Op::SummarySince) {
                global_[i] = global_[c.step] = 1;
                if (c.jump) global_[c.jump] = 1;
            }
        }
        for (std::size_t i = 0; i < nb_; ++i) cells_[i].global = global_[i];
        for (std::size_t i = 0; i < nb_; ++i) {
            Cell& c = cells_[i];
            switch (c.op) {
            case Op::MatchNext: c.slot = track(std::uint32_t(i)); break;
            case Op::MatchBack: c.slot = track(c.a.idx); break;
            case Op::HierYieldUntil:
            case Op::HierYieldSince: {
                Scan s{std::uint32_t(i), true, c.op == Op::HierYieldUntil, c.a, c.b, yield_width_};
                s.sv = track(std::uint32_t(i));
                s.global = c.global;
                yield_width_ += s.nearest ? 2 : 1;
                scans_.push_back(s);
                break;
            }
            case Op::HierTakeUntil:
            case Op::HierTakeSince: {
                // take candidates are met from the nearest one leftwards
                Scan s{std::uint32_t(i), false, c.op == Op::HierTakeSince, c.a, c.b, take_width_};
                s.sa = track(c.a.idx);
                s.sb = track(c.b.idx);
                s.global = c.global;
                take_width_ += s.nearest ? 2 : 1;
                scans_.push_back(s);
                break;
            }
            default: break;
            }
        }
    }

    static bool val(const std::string& c, Ref r) { return bool(c[r.idx]) != r.neg; }

    std::size_t label_of(const std::string& s) const {
        std::string bits(props_.size(), 0);
        for (std::size_t i = 0; i < nb_; ++i) {
            if (cells_[i].op == Op::Atom) bits[cells_[i].prop] = s[i];
        }
        return label_by_bits_.at(bits);
    }

    // --- atoms ---

    // Atoms labelled b that may follow prev; atoms of position 0 when prev is
    // null. rel relates prev's label to b.
    std::vector<std::string> atoms(const std::string* prev, std::optional<PrecRel> rel, std::size_t b, bool first) const {
        const bool origin = prev == nullptr;
        const bool end = !origin && b == delim_;
        std::string c(nb_, 0);
        std::vector<std::uint32_t> free;
        for (std::uint32_t i = 0; i < nb_; ++i) {
            const Cell& x = cells_[i];
            if (!x.global && !first && x.op != Op::Atom && x.op != Op::True) continue;
            switch (x.op) {
            case Op::True: c[i] = 1; break;
            case Op::Atom: c[i] = label_bits_[b][x.prop]; break;
            case Op::Back: c[i] = origin ? 0 : val(*prev, x.a); break;
            case Op::SummaryUntil: free.push_back(i); break;
            case Op::Next:
            case Op::MatchNext:
            case Op::HierYieldUntil:
            case Op::HierYieldSince:
                if (!end) free.push_back(i);
                break;
            case Op::MatchBack:
            case Op::HierTakeUntil:
            case Op::HierTakeSince:
                if (!origin) free.push_back(i);
                break;
            default: break;
            }
        }
        if (free.size() > 24) throw std::length_error("formula too large for the tableau construction");
        std::vector<std::string> out;
        for (std::size_t mask = 0; mask < (std::size_t{1} << free.size()); ++mask) {
            for (std::size_t k = 0; k < free.size(); ++k) c[free[k]] = char(mask >> k & 1);
            for (std::size_t i = 0; i < nb_; ++i) {
                const Cell& x = cells_[i];
                switch (x.op) {
                case Op::And: c[i] = val(c, x.a) && val(c, x.b); break;
                case Op::Or: c[i] = val(c, x.a) || val(c, x.b); break;
                case Op::Until:
                case Op::Since: c[i] = val(c, x.b) || (val(c, x.a) && c[x.step]); break;
                case Op::SummarySince:
                    c[i] = val(c, x.b) || (val(c, x.a) && (c[x.jump] || (rel && x.o.contains(*rel) && c[x.step])));
                    break;
                default: break;
                }
            }
            out.push_back(c);
        }
        return out;
    }

    // Constraints between consecutive atoms p (labelled a) and c, rel = a vs c's label.
    bool linked(const std::string& p, bool p_first, std::optional<PrecRel> rel, const std::string& c) const {
        for (std::size_t i = 0; i < nb_; ++i) {
            const Cell& x = cells_[i];
            if (!x.global && !p_first) continue;
            if (x.op == Op::Next) {
                if (bool(p[i]) != val(c, x.a)) return false;
            } else if (x.op == Op::SummaryUntil) {
                bool want = val(p, x.b) || (val(p, x.a) && (p[x.jump] || (rel && x.o.contains(*rel) && p[x.step])));
                if (bool(p[i]) != want) return false;
            }
        }
        return true;
    }

    // successors of p, itself at position 1 if p_first, or of position 0
    const std::vector<std::string>& successors(const std::string& p, bool p_first, std::size_t a, std::size_t b, bool origin = false) {
        std::string key = p;
        key.push_back(char(b));
        key.push_back(char(p_first + 2 * origin));
        auto it = succ_.find(key);
        if (it != succ_.end()) return it->second;
        std::vector<std::string> out;
        auto rel = m_.prec(labels_[a], labels_[b]);
        if (rel) {
            for (auto& c : atoms(&p, rel, b, origin)) {
                if (linked(p, p_first, rel, c)) out.push_back(std::move(c));
            }
        }
        return succ_.emplace(std::move(key), std::move(out)).first->second;
    }

    // --- state components ---

    std::string fresh_state(const std::string& core, bool first, const std::string& top_core, bool top_first) const {
        std::string s(width_, 0);
        std::copy(core.begin(), core.end(), s.begin());
        for (std::size_t k = 0; k < nk_; ++k) s[off_k_ + k] = top_core[tracked_[k]];
        s[off_top_first_] = top_first;
        s[off_first_] = first;
        for (const auto& sc : scans_) {
            if (sc.nearest) s[(sc.yield ? off_y_ : off_t_) + sc.acc + 1] = 1;
        }
        return s;
    }

    static void feed(std::string& s, std::size_t at, bool nearest, bool phi, bool psi) {
        if (nearest) {
            if (s[at + 1] && psi) s[at] = 1;
            if (!phi || s[at]) s[at + 1] = 0;
        } else {
            s[at] = psi || (s[at] && phi);
        }
    }

    bool popped(const std::string& s) const { return s[off_popped_]; }
    bool first(const std::string& s) const { return s[off_first_]; }
    bool top_first(const std::string& s) const { return s[off_top_first_]; }
    bool top_val(const std::string& s, std::size_t slot, bool neg) const { return bool(s[off_k_ + slot]) != neg; }

    // values owed at the lookahead position: match-back and take operators
    bool lookahead_ok(const std::string& s) const {
        for (std::size_t i = 0; i < nb_; ++i) {
            const Cell& x = cells_[i];
            if (!x.global && !first(s)) continue;
            if (x.op == Op::MatchBack && bool(s[i]) != (popped(s) && top_val(s, x.slot, x.a.neg))) return false;
        }
        for (const auto& sc : scans_) {
            if (!sc.global && !first(s)) continue;
            if (!sc.yield && bool(s[sc.node]) != bool(s[off_t_ + sc.acc])) return false;
        }
        return true;
    }

    // the top position leaves the stack top: its last chain, if any, ends at
    // the lookahead and no further yield candidate can appear
    bool top_done(const std::string& s) const {
        for (std::size_t i = 0; i < nb_; ++i) {
            const Cell& x = cells_[i];
            if (!x.global && !top_first(s)) continue;
            if (x.op == Op::MatchNext && bool(s[off_k_ + x.slot]) != (popped(s) && val(s, x.a))) return false;
        }
        for (const auto& sc : scans_) {
            if (!sc.global && !top_first(s)) continue;
            if (sc.yield && s[off_k_ + sc.sv] != s[off_y_ + sc.acc]) return false;
        }
        return true;
    }

    std::vector<std::string> initial_states() {
        std::vector<std::string> out;
        std::set<std::string> seen;
        for (const auto& z : atoms(nullptr, std::nullopt, delim_, false)) {
            for (std::size_t b = 0; b < labels_.size(); ++b) {
                for (const auto& c : successors(z, false, delim_, b, true)) {
                    if (!val(c, ref(f_))) continue;
                    std::string s = fresh_state(c, true, z, false);
                    if (seen.insert(s).second) out.push_back(std::move(s));
                }
            }
        }
        return out;
    }

    void read_moves(const std::string& s, std::vector<std::pair<MoveKind, std::string>>& out) {
        std::size_t a = label_of(s);
        if (a == delim_ || !lookahead_ok(s)) return;
        const std::string core = s.substr(0, nb_);
        const bool shift_ok = top_done(s);
        for (std::size_t b = 0; b < labels_.size(); ++b) {
            for (const auto& c : successors(core, first(s), a, b)) {
                std::string t = fresh_state(c, false, core, first(s));
                out.emplace_back(MoveKind::Push, t);
                if (shift_ok) out.emplace_back(MoveKind::Shift, t);
            }
        }
    }

    // q must satisfy top_done
    std::string pop(const std::string& q, const std::string& stored) const {
        std::string r = stored;
        std::copy(q.begin(), q.begin() + std::ptrdiff_t(nb_), r.begin());
        // the stored entry began at a yield candidate of the revealed position
        // iff it was pushed after a pop
        for (const auto& sc : scans_) {
            if (sc.yield && popped(stored) && (sc.global || top_first(stored))) {
                feed(r, off_y_ + sc.acc, sc.nearest, val(stored, sc.a), val(stored, sc.b));
            }
        }
        // the position being popped is a take candidate of the lookahead iff
        // a chain already ended here
        std::copy(q.begin() + std::ptrdiff_t(off_t_), q.end(), r.begin() + std::ptrdiff_t(off_t_));
        for (const auto& sc : scans_) {
            if (!sc.yield && popped(q) && (sc.global || first(q))) {
                feed(r, off_t_ + sc.acc, sc.nearest, top_val(q, sc.sa, sc.a.neg), top_val(q, sc.sb, sc.b.neg));
            }
        }
        r[off_popped_] = 1;
        r[off_first_] = q[off_first_];
        return r;
    }

    bool is_final(const std::string& s) const {
        if (label_of(s) != delim_ || !lookahead_ok(s) || !top_done(s)) return false;
        for (std::size_t i = 0; i < nb_; ++i) {
            const Cell& x = cells_[i];
            if (x.op == Op::SummaryUntil && bool(s[i]) != val(s, x.b)) return false;
        }
        return true;
    }

    Formula f_;
    OpMatrix m_;
    std::vector<std::string> props_;
    std::map<std::string, Formula> base_by_key_;
    std::vector<Formula> base_;
    std::unordered_map<std::string, std::uint32_t> index_;
    std::vector<Cell> cells_;
    std::vector<std::uint32_t> tracked_;
    std::vector<char> global_;
    std::vector<Scan> scans_;
    std::size_t yield_width_ = 0, take_width_ = 0;
    std::vector<Terminal> labels_;
    std::vector<std::string> label_bits_;
    std::map<std::string, std::size_t> label_by_bits_;
    std::size_t delim_ = 0;
    std::size_t nb_ = 0, nk_ = 0, off_k_ = 0, off_top_first_ = 0, off_y_ = 0, off_popped_ = 0, off_first_ = 0, off_t_ = 0,
                width_ = 0;
    std::unordered_map<std::string, std::vector<std::string>> succ_;
};

}  // namespace detail

inline Closure closure(const Formula& f, const OpMatrix& m) { return detail::TableauBuilder(f, m).closure(); }

inline Tableau build_tableau(const Formula& f, const OpMatrix& m) { return detail::TableauBuilder(f, m).build(); }

/// Restricted to words over the given letters; letters the matrix can't
/// place are dropped.
inline Tableau build_tableau(const Formula& f, const OpMatrix& m, const std::vector<Terminal>& alphabet) {
    return detail::TableauBuilder(f, m, &alphabet).build();
}

inline Opa build_automaton(const Formula& f, const OpMatrix& m) { return build_tableau(f, m).automaton; }

inline Opa build_automaton(const Formula& f, const std::vector<std::string>& ap, const OpMatrix& m) {
    std::set<std::string> x(ap.begin(), ap.end()), y(m.ap().begin(), m.ap().end());
    if (x != y) throw std::invalid_argument("the matrix is not lifted over the given proposition set");
    return build_automaton(f, m);
}

inline std::size_t state_count(const Opa& a) { return a.state_count(); }

}  // namespace optl

#endif  // OPTL_TABLEAU_HPP
