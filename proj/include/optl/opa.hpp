#ifndef OPTL_OPA_HPP
#define OPTL_OPA_HPP

// Operator-precedence automata: construction, runs, max-automaton, product,
// and bounded language queries.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <tuple>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "optl/core.hpp"

namespace optl {

using StateId = std::size_t;

enum class MoveKind { Push, Shift, Pop };

inline const char* to_string(MoveKind k) {
    switch (k) {
    case MoveKind::Push: return "push";
    case MoveKind::Shift: return "shift";
    case MoveKind::Pop: return "pop";
    }
    return "?";
}

class Opa {
public:
    explicit Opa(OpMatrix matrix) : matrix_(std::move(matrix)) {}

    const OpMatrix& matrix() const { return matrix_; }

    StateId add_state(std::string name) {
        if (by_name_.count(name)) throw std::invalid_argument("duplicate state '" + name + "'");
        by_name_.emplace(name, names_.size());
        names_.push_back(std::move(name));
        return names_.size() - 1;
    }

    std::optional<StateId> find_state(const std::string& name) const {
        auto it = by_name_.find(name);
        if (it == by_name_.end()) return std::nullopt;
        return it->second;
    }

    std::size_t state_count() const { return names_.size(); }
    const std::string& state_name(StateId q) const { return names_.at(q); }

    void add_initial(StateId q) { initial_.insert(check(q)); }
    void add_final(StateId q) { final_.insert(check(q)); }
    const std::set<StateId>& initial() const { return initial_; }
    const std::set<StateId>& final_states() const { return final_; }
    bool is_final(StateId q) const { return final_.count(q) != 0; }

    void add_push(StateId from, const Terminal& a, StateId to) { add_read(push_, from, a, to); }
    void add_shift(StateId from, const Terminal& a, StateId to) { add_read(shift_, from, a, to); }
    void add_pop(StateId from, StateId stored, StateId to) {
        auto& targets = pop_[key(check(from), check(stored))];
        insert_sorted(targets, check(to));
    }

    /// Interned terminal id, if the terminal occurs on some transition.
    std::optional<std::size_t> terminal_id(const Terminal& a) const {
        auto it = terminal_ids_.find(a);
        if (it == terminal_ids_.end()) return std::nullopt;
        return it->second;
    }
    const std::vector<Terminal>& terminals() const { return terminals_; }

    const std::vector<StateId>& push_targets(StateId q, std::size_t terminal) const {
        return lookup(push_, key(q, terminal));
    }
    const std::vector<StateId>& shift_targets(StateId q, std::size_t terminal) const {
        return lookup(shift_, key(q, terminal));
    }
    const std::vector<StateId>& pop_targets(StateId q, StateId stored) const {
        return lookup(pop_, key(q, stored));
    }

    struct ReadTransition {
        StateId from;
        Terminal symbol;
        StateId to;
    };
    struct PopTransition {
        StateId from;
        StateId stored;
        StateId to;
    };

    /// Transitions in a deterministic order (by source, then symbol/stored, then target).
    std::vector<ReadTransition> push_transitions() const { return list_reads(push_); }
    std::vector<ReadTransition> shift_transitions() const { return list_reads(shift_); }
    std::vector<PopTransition> pop_transitions() const {
        std::vector<PopTransition> out;
        for (const auto& [k, targets] : pop_) {
            for (StateId t : targets) out.push_back({StateId(k >> 32), StateId(k & 0xffffffffu), t});
        }
        std::sort(out.begin(), out.end(), [](const PopTransition& x, const PopTransition& y) {
            return std::tie(x.from, x.stored, x.to) < std::tie(y.from, y.stored, y.to);
        });
        return out;
    }

    std::size_t push_count() const { return count(push_); }
    std::size_t shift_count() const { return count(shift_); }
    std::size_t pop_count() const { return count(pop_); }

private:
    using Table = std::unordered_map<std::uint64_t, std::vector<StateId>>;

    static std::uint64_t key(std::size_t a, std::size_t b) { return (std::uint64_t(a) << 32) | std::uint64_t(b); }

    static void insert_sorted(std::vector<StateId>& v, StateId s) {
        auto it = std::lower_bound(v.begin(), v.end(), s);
        if (it == v.end() || *it != s) v.insert(it, s);
    }

    static const std::vector<StateId>& lookup(const Table& t, std::uint64_t k) {
        static const std::vector<StateId> none;
        auto it = t.find(k);
        return it == t.end() ? none : it->second;
    }

    static std::size_t count(const Table& t) {
        std::size_t n = 0;
        for (const auto& [k, v] : t) n += v.size();
        return n;
    }

    StateId check(StateId q) const {
        if (q >= names_.size()) throw std::out_of_range("undeclared state");
        return q;
    }

    std::size_t intern(const Terminal& a) {
        if (a.is_delimiter() || a.contains(kDelimiter)) throw std::invalid_argument("'#' cannot be read by a transition");
        auto [it, fresh] = terminal_ids_.emplace(a, terminals_.size());
        if (fresh) terminals_.push_back(a);
        return it->second;
    }

    void add_read(Table& t, StateId from, const Terminal& a, StateId to) {
        insert_sorted(t[key(check(from), intern(a))], check(to));
    }

    std::vector<ReadTransition> list_reads(const Table& t) const {
        std::vector<ReadTransition> out;
        for (const auto& [k, targets] : t) {
            for (StateId to : targets) out.push_back({StateId(k >> 32), terminals_[k & 0xffffffffu], to});
        }
        std::sort(out.begin(), out.end(), [](const ReadTransition& x, const ReadTransition& y) {
            return std::tie(x.from, x.symbol, x.to) < std::tie(y.from, y.symbol, y.to);
        });
        return out;
    }

    OpMatrix matrix_;
    std::vector<std::string> names_;
    std::map<std::string, StateId> by_name_;
    std::set<StateId> initial_, final_;
    std::vector<Terminal> terminals_;
    std::map<Terminal, std::size_t> terminal_ids_;
    Table push_, shift_, pop_;
};

struct StackEntry {
    Position position;  // position whose terminal is currently on top of this entry
    StateId state;

    friend bool operator==(const StackEntry&, const StackEntry&) = default;
};

struct Configuration {
    Position lookahead;  // next position to read; n+1 means only '#' remains
    StateId state;
    std::vector<StackEntry> stack;  // bottom first; the bottom marker is implicit
};

struct RunTrace {
    std::vector<Configuration> configurations;  // initial configuration, then one per move
    std::vector<MoveKind> moves;
};

struct RunResult {
    bool accepted = false;
    std::optional<RunTrace> witness;
    /// Longest input prefix consumed by any explored computation.
    std::size_t longest_prefix = 0;
};

namespace detail {

struct ScheduledMove {
    MoveKind kind;
    Position position;  // lookahead position for the move
};

/// Move kinds are fixed by the OPM alone, so one parse gives the schedule
/// that every computation on the word follows.
inline std::vector<ScheduledMove> move_schedule(const OpWord& w, const OpMatrix& m) {
    std::vector<ScheduledMove> moves;
    std::vector<Position> stack{0};
    const Position end = w.last();
    for (Position j = 1; j <= end; ++j) {
        for (;;) {
            Position top = stack.back();
            if (j == end && stack.size() == 1) break;
            auto rel = m.prec(w.label(top), w.label(j));
            if (!rel) throw IncompatibleWord(w, Incompatibility{top, j});
            if (*rel == PrecRel::Yields) {
                moves.push_back({MoveKind::Push, j});
                stack.push_back(j);
                break;
            }
            if (*rel == PrecRel::Equals) {
                moves.push_back({MoveKind::Shift, j});
                stack.back() = j;
                break;
            }
            moves.push_back({MoveKind::Pop, j});
            stack.pop_back();
        }
    }
    return moves;
}

inline std::vector<std::optional<std::size_t>> terminal_ids(const Opa& a, const OpWord& w) {
    std::vector<std::optional<std::size_t>> ids(w.last() + 1);
    for (Position i = 1; i <= w.length(); ++i) ids[i] = a.terminal_id(w.label(i));
    return ids;
}

}  // namespace detail

/// Acceptance by summarising each stack level as a set of
/// (stored state, current state) pairs; polynomial in the number of states.
inline bool accepts(const Opa& a, const OpWord& w) {
    const auto schedule = detail::move_schedule(w, a.matrix());
    const auto ids = detail::terminal_ids(a, w);
    constexpr StateId bottom = StateId(-1);
    using Pairs = std::vector<std::pair<StateId, StateId>>;
    auto normalize = [](Pairs& v) {
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
    };
    std::vector<Pairs> levels(1);
    for (StateId q : a.initial()) levels[0].emplace_back(bottom, q);

    for (const auto& mv : schedule) {
        if (levels.back().empty()) return false;
        if (mv.kind == MoveKind::Pop) {
            Pairs top = std::move(levels.back());
            levels.pop_back();
            // top is sorted by stored state
            Pairs next;
            for (auto [below, s] : levels.back()) {
                auto it = std::lower_bound(top.begin(), top.end(), std::make_pair(s, StateId(0)));
                for (; it != top.end() && it->first == s; ++it) {
                    for (StateId r : a.pop_targets(it->second, s)) next.emplace_back(below, r);
                }
            }
            normalize(next);
            levels.back() = std::move(next);
            continue;
        }
        const auto& id = ids[mv.position];
        if (!id) return false;
        Pairs next;
        for (auto [s, q] : levels.back()) {
            if (mv.kind == MoveKind::Push) {
                for (StateId r : a.push_targets(q, *id)) next.emplace_back(q, r);
            } else {
                for (StateId r : a.shift_targets(q, *id)) next.emplace_back(s, r);
            }
        }
        normalize(next);
        if (mv.kind == MoveKind::Push) {
            levels.push_back(std::move(next));
        } else {
            levels.back() = std::move(next);
        }
    }
    for (auto [s, q] : levels[0]) {
        if (a.is_final(q)) return true;
    }
    return false;
}

/// Acceptance state after a prefix: every move whose lookahead lies inside
/// the prefix has been done. Copyable, so a search can branch on it.
class PrefixRun {
public:
    explicit PrefixRun(const Opa& a) : a_(&a), levels_(1), labels_{Terminal::delimiter()} {
        for (StateId q : a.initial()) levels_[0].emplace_back(bottom, q);
    }

    /// False once no computation (or no compatible parse) survives.
    bool alive() const { return alive_ && !levels_.back().empty(); }

    bool read(const Terminal& t) {
        if (!alive()) return false;
        auto id = a_->terminal_id(t);
        if (!id || t.is_delimiter()) return alive_ = false;
        const OpMatrix& m = a_->matrix();
        for (;;) {
            auto rel = m.prec(labels_.back(), t);
            if (!rel) return alive_ = false;
            if (*rel != PrecRel::Takes) break;
            pop();
            if (!alive()) return false;
        }
        const bool push = *m.prec(labels_.back(), t) == PrecRel::Yields;
        Pairs next;
        for (auto [s, q] : levels_.back()) {
            if (push) {
                for (StateId r : a_->push_targets(q, *id)) next.emplace_back(q, r);
            } else {
                for (StateId r : a_->shift_targets(q, *id)) next.emplace_back(s, r);
            }
        }
        normalize(next);
        if (push) {
            levels_.push_back(std::move(next));
            labels_.push_back(t);
        } else {
            levels_.back() = std::move(next);
            labels_.back() = t;
        }
        return alive();
    }

    /// Whether the prefix read so far is accepted as a whole word.
    bool accepted() const {
        PrefixRun end = *this;
        while (end.alive() && end.labels_.size() > 1) end.pop();
        if (!end.alive()) return false;
        for (auto [s, q] : end.levels_[0]) {
            if (end.a_->is_final(q)) return true;
        }
        return false;
    }

private:
    using Pairs = std::vector<std::pair<StateId, StateId>>;
    static constexpr StateId bottom = StateId(-1);

    static void normalize(Pairs& v) {
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
    }

    void pop() {
        Pairs top = std::move(levels_.back());
        levels_.pop_back();
        labels_.pop_back();
        Pairs next;
        for (auto [below, s] : levels_.back()) {
            auto it = std::lower_bound(top.begin(), top.end(), std::make_pair(s, StateId(0)));
            for (; it != top.end() && it->first == s; ++it) {
                for (StateId r : a_->pop_targets(it->second, s)) next.emplace_back(below, r);
            }
        }
        normalize(next);
        levels_.back() = std::move(next);
    }

    const Opa* a_;
    std::vector<Pairs> levels_;
    std::vector<Terminal> labels_;
    bool alive_ = true;
};

/// Accepted words of length <= max_len in the order of for_each_compatible,
/// skipping prefixes no computation survives. Returning false from `visit`
/// stops the search.
inline void for_each_accepted(const Opa& a, std::vector<Terminal> alphabet, std::size_t max_len,
                              const std::function<bool(const OpWord&)>& visit) {
    std::sort(alphabet.begin(), alphabet.end());
    alphabet.erase(std::unique(alphabet.begin(), alphabet.end()), alphabet.end());
    std::vector<Terminal> current;
    bool stop = false;
    std::function<void(const PrefixRun&, std::size_t)> extend = [&](const PrefixRun& run, std::size_t len) {
        if (current.size() == len) {
            if (run.accepted() && !visit(OpWord(current))) stop = true;
            return;
        }
        for (const auto& t : alphabet) {
            PrefixRun next = run;
            if (!next.read(t)) continue;
            current.push_back(t);
            extend(next, len);
            current.pop_back();
            if (stop) return;
        }
    };
    for (std::size_t len = 0; len <= max_len && !stop; ++len) extend(PrefixRun(a), len);
}

/// Exhaustive depth-first search over computations; returns a witness trace
/// for the first accepting computation in (initial state, target state) order.
inline RunResult run(const Opa& a, const OpWord& w) {
    const auto schedule = detail::move_schedule(w, a.matrix());
    const auto ids = detail::terminal_ids(a, w);
    RunResult result;

    struct Frame {
        StateId state;
        std::vector<StackEntry> stack;
    };
    std::set<std::pair<std::size_t, std::vector<StateId>>> dead;  // (step, state + stack states)
    std::vector<Configuration> path;
    std::vector<MoveKind> kinds;

    auto signature = [](const Frame& f) {
        std::vector<StateId> sig{f.state};
        for (const auto& e : f.stack) sig.push_back(e.state);
        return sig;
    };

    std::function<bool(std::size_t, Frame&)> search = [&](std::size_t step, Frame& f) -> bool {
        Position consumed = step < schedule.size() ? schedule[step].position - 1 : w.length();
        result.longest_prefix = std::max<std::size_t>(result.longest_prefix, consumed);
        if (step == schedule.size()) return a.is_final(f.state);
        auto sig = std::make_pair(step, signature(f));
        if (dead.count(sig)) return false;

        const auto& mv = schedule[step];
        std::vector<Frame> successors;
        if (mv.kind == MoveKind::Pop) {
            const StackEntry top = f.stack.back();
            for (StateId r : a.pop_targets(f.state, top.state)) {
                Frame g{r, f.stack};
                g.stack.pop_back();
                successors.push_back(std::move(g));
            }
        } else if (const auto& id = ids[mv.position]) {
            if (mv.kind == MoveKind::Push) {
                for (StateId r : a.push_targets(f.state, *id)) {
                    Frame g{r, f.stack};
                    g.stack.push_back({mv.position, f.state});
                    successors.push_back(std::move(g));
                }
            } else {
                for (StateId r : a.shift_targets(f.state, *id)) {
                    Frame g{r, f.stack};
                    g.stack.back().position = mv.position;
                    successors.push_back(std::move(g));
                }
            }
        }
        for (auto& g : successors) {
            Position next_lookahead = mv.kind == MoveKind::Pop ? mv.position : mv.position + 1;
            path.push_back({next_lookahead, g.state, g.stack});
            kinds.push_back(mv.kind);
            if (search(step + 1, g)) return true;
            path.pop_back();
            kinds.pop_back();
        }
        dead.insert(std::move(sig));
        return false;
    };

    for (StateId q0 : a.initial()) {
        Frame f{q0, {}};
        path.assign(1, Configuration{1, q0, {}});
        kinds.clear();
        if (search(0, f)) {
            result.accepted = true;
            result.witness = RunTrace{path, kinds};
            return result;
        }
    }
    return result;
}

inline bool is_deterministic(const Opa& a) {
    if (a.initial().size() != 1) return false;
    for (const auto& t : a.push_transitions()) {
        if (a.push_targets(t.from, *a.terminal_id(t.symbol)).size() > 1) return false;
    }
    for (const auto& t : a.shift_transitions()) {
        if (a.shift_targets(t.from, *a.terminal_id(t.symbol)).size() > 1) return false;
    }
    for (const auto& t : a.pop_transitions()) {
        if (a.pop_targets(t.from, t.stored).size() > 1) return false;
    }
    return true;
}

/// One-state automaton accepting exactly the words compatible with `m`
/// over its alphabet.
inline Opa max_automaton(const OpMatrix& m) {
    Opa a(m);
    StateId q = a.add_state("q");
    a.add_initial(q);
    a.add_final(q);
    for (const auto& t : m.alphabet()) {
        a.add_push(q, t, q);
        a.add_shift(q, t, q);
    }
    a.add_pop(q, q, q);
    return a;
}

class MatrixMismatch : public std::invalid_argument {
public:
    MatrixMismatch() : std::invalid_argument("automata are defined over different precedence matrices") {}
};

/// Synchronous product. Both components see the same move kinds at every
/// step, so the product accepts the intersection of the two languages.
inline Opa product(const Opa& a, const Opa& b) {
    if (!(a.matrix().structure() == b.matrix().structure())) throw MatrixMismatch();
    std::vector<std::string> ap = a.matrix().ap();
    ap.insert(ap.end(), b.matrix().ap().begin(), b.matrix().ap().end());
    Opa p(OpMatrix(a.matrix().structure(), ap));

    const std::size_t nb = b.state_count();
    for (StateId x = 0; x < a.state_count(); ++x) {
        for (StateId y = 0; y < nb; ++y) p.add_state("(" + a.state_name(x) + "," + b.state_name(y) + ")");
    }
    auto pair = [nb](StateId x, StateId y) { return x * nb + y; };
    for (StateId x : a.initial()) {
        for (StateId y : b.initial()) p.add_initial(pair(x, y));
    }
    for (StateId x : a.final_states()) {
        for (StateId y : b.final_states()) p.add_final(pair(x, y));
    }
    auto sync_reads = [&](const std::vector<Opa::ReadTransition>& ta, bool push) {
        for (const auto& t : ta) {
            auto id = b.terminal_id(t.symbol);
            if (!id) continue;
            for (StateId y = 0; y < nb; ++y) {
                const auto& ys = push ? b.push_targets(y, *id) : b.shift_targets(y, *id);
                for (StateId y2 : ys) {
                    if (push) {
                        p.add_push(pair(t.from, y), t.symbol, pair(t.to, y2));
                    } else {
                        p.add_shift(pair(t.from, y), t.symbol, pair(t.to, y2));
                    }
                }
            }
        }
    };
    sync_reads(a.push_transitions(), true);
    sync_reads(a.shift_transitions(), false);
    const auto pops_b = b.pop_transitions();
    for (const auto& ta : a.pop_transitions()) {
        for (const auto& tb : pops_b) {
            p.add_pop(pair(ta.from, tb.from), pair(ta.stored, tb.stored), pair(ta.to, tb.to));
        }
    }
    return p;
}

/// The terminals an automaton can read that may occur in a compatible word.
inline std::vector<Terminal> readable_alphabet(const Opa& a) {
    std::vector<Terminal> out;
    for (const auto& t : a.terminals()) {
        if (a.matrix().structural_label(t)) out.push_back(t);
    }
    std::sort(out.begin(), out.end());
    return out;
}

inline std::vector<OpWord> bounded_language(const Opa& a, std::size_t max_len) {
    std::vector<OpWord> out;
    for_each_accepted(a, readable_alphabet(a), max_len, [&](const OpWord& w) {
        out.push_back(w);
        return true;
    });
    return out;
}

inline bool bounded_empty(const Opa& a, std::size_t max_len) {
    bool empty = true;
    for_each_accepted(a, readable_alphabet(a), max_len, [&](const OpWord&) { return empty = false; });
    return empty;
}

inline bool bounded_equiv(const Opa& a, const Opa& b, std::size_t max_len) {
    if (!(a.matrix().structure() == b.matrix().structure())) throw MatrixMismatch();
    return bounded_language(a, max_len) == bounded_language(b, max_len);
}

}  // namespace optl

#endif  // OPTL_OPA_HPP
