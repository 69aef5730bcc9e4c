#ifndef OPTL_CORE_HPP
#define OPTL_CORE_HPP

// Operator-precedence alphabets, matrices, words, and the chain relation.

#include <algorithm>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace optl {

/// Name reserved for the word delimiter.
inline constexpr const char* kDelimiter = "#";

enum class PrecRel { Yields, Equals, Takes };

inline char to_char(PrecRel r) {
    switch (r) {
    case PrecRel::Yields: return '<';
    case PrecRel::Equals: return '=';
    case PrecRel::Takes: return '>';
    }
    return '?';
}

inline std::optional<PrecRel> prec_from_char(char c) {
    switch (c) {
    case '<': return PrecRel::Yields;
    case '=': return PrecRel::Equals;
    case '>': return PrecRel::Takes;
    default: return std::nullopt;
    }
}

/// A terminal symbol: a set of atomic-proposition names, kept sorted and unique.
class Terminal {
public:
    Terminal() = default;
    Terminal(std::initializer_list<std::string> props) : props_(props) { canonicalize(); }
    explicit Terminal(std::vector<std::string> props) : props_(std::move(props)) { canonicalize(); }

    static const Terminal& delimiter() {
        static const Terminal d{std::string(kDelimiter)};
        return d;
    }

    const std::vector<std::string>& props() const { return props_; }
    bool empty() const { return props_.empty(); }
    bool contains(const std::string& p) const {
        return std::binary_search(props_.begin(), props_.end(), p);
    }
    bool is_delimiter() const { return props_.size() == 1 && props_[0] == kDelimiter; }

    /// Comma-separated form used by every text format; `{}` for the empty set.
    std::string to_string() const {
        if (props_.empty()) return "{}";
        std::string out;
        for (std::size_t i = 0; i < props_.size(); ++i) {
            if (i) out += ',';
            out += props_[i];
        }
        return out;
    }

    friend bool operator==(const Terminal&, const Terminal&) = default;
    friend auto operator<=>(const Terminal&, const Terminal&) = default;

private:
    void canonicalize() {
        std::sort(props_.begin(), props_.end());
        props_.erase(std::unique(props_.begin(), props_.end()), props_.end());
    }

    std::vector<std::string> props_;
};

/// Precedence relations over structural labels. Lifting to terminals goes
/// through the unique structural label each terminal contains.
struct StructuralOpm {
    std::vector<std::string> labels;  // sorted
    std::map<std::pair<std::string, std::string>, PrecRel> base;

    StructuralOpm() = default;
    explicit StructuralOpm(std::vector<std::string> ls) : labels(std::move(ls)) {
        std::sort(labels.begin(), labels.end());
        labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
        for (const auto& l : labels) {
            if (l == kDelimiter) throw std::invalid_argument("'#' cannot be a structural label");
        }
    }

    bool is_label(const std::string& s) const {
        return std::binary_search(labels.begin(), labels.end(), s);
    }

    StructuralOpm& set(const std::string& a, const std::string& b, PrecRel r) {
        if (!is_label(a) || !is_label(b)) {
            throw std::invalid_argument("relation over undeclared label: " + a + ", " + b);
        }
        base[{a, b}] = r;
        return *this;
    }

    std::optional<PrecRel> get(const std::string& a, const std::string& b) const {
        auto it = base.find({a, b});
        if (it == base.end()) return std::nullopt;
        return it->second;
    }

    friend bool operator==(const StructuralOpm&, const StructuralOpm&) = default;
};

/// An OPM over the power set of an atomic-proposition set, derived from a
/// structural OPM. Terminals with zero or several structural labels have no
/// defined relation. The delimiter yields to, and is taken by, every terminal
/// with exactly one structural label.
class OpMatrix {
public:
    OpMatrix() = default;
    OpMatrix(StructuralOpm structure, std::vector<std::string> ap)
        : structure_(std::move(structure)), ap_(std::move(ap)) {
        std::sort(ap_.begin(), ap_.end());
        ap_.erase(std::unique(ap_.begin(), ap_.end()), ap_.end());
        for (const auto& p : ap_) {
            if (p == kDelimiter) throw std::invalid_argument("'#' is reserved and cannot be a proposition");
        }
        for (const auto& l : structure_.labels) {
            if (!std::binary_search(ap_.begin(), ap_.end(), l)) {
                throw std::invalid_argument("structural label '" + l + "' missing from the proposition set");
            }
        }
    }

    const StructuralOpm& structure() const { return structure_; }
    const std::vector<std::string>& ap() const { return ap_; }

    std::optional<std::string> structural_label(const Terminal& t) const {
        std::optional<std::string> found;
        for (const auto& p : t.props()) {
            if (structure_.is_label(p)) {
                if (found) return std::nullopt;
                found = p;
            }
        }
        return found;
    }

    std::optional<PrecRel> prec(const Terminal& a, const Terminal& b) const {
        if (a.is_delimiter()) {
            if (b.is_delimiter()) return std::nullopt;
            return structural_label(b) ? std::optional(PrecRel::Yields) : std::nullopt;
        }
        if (b.is_delimiter()) {
            return structural_label(a) ? std::optional(PrecRel::Takes) : std::nullopt;
        }
        auto la = structural_label(a);
        auto lb = structural_label(b);
        if (!la || !lb) return std::nullopt;
        return structure_.get(*la, *lb);
    }

    /// Every subset of the proposition set with exactly one structural label,
    /// in ascending Terminal order. These are the only terminals that can
    /// appear in a compatible word.
    std::vector<Terminal> alphabet() const {
        std::vector<std::string> extra;
        for (const auto& p : ap_) {
            if (!structure_.is_label(p)) extra.push_back(p);
        }
        if (extra.size() > 20) throw std::length_error("proposition set too large to enumerate");
        std::vector<Terminal> out;
        for (const auto& l : structure_.labels) {
            for (std::size_t mask = 0; mask < (std::size_t{1} << extra.size()); ++mask) {
                std::vector<std::string> props{l};
                for (std::size_t k = 0; k < extra.size(); ++k) {
                    if (mask & (std::size_t{1} << k)) props.push_back(extra[k]);
                }
                out.emplace_back(std::move(props));
            }
        }
        std::sort(out.begin(), out.end());
        return out;
    }

    friend bool operator==(const OpMatrix&, const OpMatrix&) = default;

private:
    StructuralOpm structure_;
    std::vector<std::string> ap_;
};

inline std::optional<PrecRel> prec(const OpMatrix& m, const Terminal& a, const Terminal& b) {
    return m.prec(a, b);
}

inline OpMatrix lift_opm(const StructuralOpm& s, std::vector<std::string> ap) {
    return OpMatrix(s, std::move(ap));
}

/// A finite word; positions 0 and n+1 are the implicit delimiters.
class OpWord {
public:
    OpWord() = default;
    explicit OpWord(std::vector<Terminal> interior) : interior_(std::move(interior)) {
        for (const auto& t : interior_) {
            if (t.contains(kDelimiter)) throw std::invalid_argument("interior position labelled with '#'");
        }
    }

    std::size_t length() const { return interior_.size(); }
    /// Index of the closing delimiter, n+1.
    std::size_t last() const { return interior_.size() + 1; }
    const std::vector<Terminal>& interior() const { return interior_; }

    const Terminal& label(std::size_t i) const {
        if (i == 0 || i == last()) return Terminal::delimiter();
        if (i > last()) throw std::out_of_range("position out of range");
        return interior_[i - 1];
    }

    std::string to_string() const {
        std::string out;
        for (std::size_t i = 0; i < interior_.size(); ++i) {
            if (i) out += ' ';
            out += interior_[i].to_string();
        }
        return out;
    }

    friend bool operator==(const OpWord&, const OpWord&) = default;
    friend auto operator<=>(const OpWord&, const OpWord&) = default;

private:
    std::vector<Terminal> interior_;
};

using Position = std::size_t;
using ChainPair = std::pair<Position, Position>;

class ChainStructure {
public:
    ChainStructure() = default;
    ChainStructure(std::size_t word_length, std::vector<ChainPair> chains)
        : chains_(std::move(chains)), forward_(word_length + 2), backward_(word_length + 2) {
        std::sort(chains_.begin(), chains_.end());
        chains_.erase(std::unique(chains_.begin(), chains_.end()), chains_.end());
        for (auto [i, j] : chains_) {
            if (!forward_[i] || *forward_[i] < j) forward_[i] = j;
            if (!backward_[j] || *backward_[j] > i) backward_[j] = i;
        }
    }

    const std::vector<ChainPair>& chains() const { return chains_; }
    bool contains(Position i, Position j) const {
        return std::binary_search(chains_.begin(), chains_.end(), ChainPair{i, j});
    }
    std::optional<Position> max_forward(Position i) const {
        return i < forward_.size() ? forward_[i] : std::nullopt;
    }
    std::optional<Position> max_backward(Position j) const {
        return j < backward_.size() ? backward_[j] : std::nullopt;
    }

private:
    std::vector<ChainPair> chains_;
    std::vector<std::optional<Position>> forward_;
    std::vector<std::optional<Position>> backward_;
};

inline std::optional<Position> max_forward(const ChainStructure& c, Position i) { return c.max_forward(i); }
inline std::optional<Position> max_backward(const ChainStructure& c, Position j) { return c.max_backward(j); }

/// The pair (left, right) whose relation is undefined; right is the
/// lookahead position at which the parse got stuck.
struct Incompatibility {
    Position left;
    Position right;

    std::string describe(const OpWord& w) const {
        return "no precedence relation between position " + std::to_string(left) + " (" +
               w.label(left).to_string() + ") and position " + std::to_string(right) + " (" +
               w.label(right).to_string() + ")";
    }
};

class IncompatibleWord : public std::runtime_error {
public:
    IncompatibleWord(const OpWord& w, Incompatibility where)
        : std::runtime_error("word incompatible with OPM: " + where.describe(w)), where_(where) {}
    const Incompatibility& where() const { return where_; }

private:
    Incompatibility where_;
};

namespace detail {

/// Left-to-right OP shift-reduce parse. Each stack slot holds the position
/// currently labelling it; every reduce closes the chain whose context is
/// (new top, lookahead).
inline std::optional<Incompatibility> op_parse(const OpWord& w, const OpMatrix& m,
                                               std::vector<ChainPair>* chains) {
    std::vector<Position> stack{0};
    const Position end = w.last();
    for (Position j = 1; j <= end; ++j) {
        for (;;) {
            Position top = stack.back();
            if (j == end && stack.size() == 1) break;
            auto rel = m.prec(w.label(top), w.label(j));
            if (!rel) return Incompatibility{top, j};
            if (*rel == PrecRel::Yields) {
                stack.push_back(j);
                break;
            }
            if (*rel == PrecRel::Equals) {
                stack.back() = j;
                break;
            }
            stack.pop_back();
            if (chains) chains->emplace_back(stack.back(), j);
        }
    }
    return std::nullopt;
}

}  // namespace detail

inline std::optional<Incompatibility> check_compatibility(const OpWord& w, const OpMatrix& m) {
    return detail::op_parse(w, m, nullptr);
}

inline bool is_compatible(const OpWord& w, const OpMatrix& m) {
    return !check_compatibility(w, m).has_value();
}

inline ChainStructure compute_chains(const OpWord& w, const OpMatrix& m) {
    std::vector<ChainPair> chains;
    if (auto bad = detail::op_parse(w, m, &chains)) throw IncompatibleWord(w, *bad);
    return ChainStructure(w.length(), std::move(chains));
}

/// Calls `visit` on every compatible word of length <= max_len over
/// `alphabet`, ordered by length and then lexicographically by alphabet
/// index after sorting the alphabet in Terminal order. Returning false from
/// `visit` stops the enumeration.
inline void for_each_compatible(const OpMatrix& m, std::vector<Terminal> alphabet, std::size_t max_len,
                                const std::function<bool(const OpWord&)>& visit) {
    std::sort(alphabet.begin(), alphabet.end());
    alphabet.erase(std::unique(alphabet.begin(), alphabet.end()), alphabet.end());
    std::vector<Terminal> current;
    bool stop = false;

    std::function<void(std::size_t)> extend = [&](std::size_t len) {
        if (stop) return;
        if (current.size() == len) {
            OpWord w(current);
            if (is_compatible(w, m) && !visit(w)) stop = true;
            return;
        }
        for (const auto& t : alphabet) {
            const Terminal& prev = current.empty() ? Terminal::delimiter() : current.back();
            if (!m.prec(prev, t)) continue;
            current.push_back(t);
            extend(len);
            current.pop_back();
            if (stop) return;
        }
    };
    for (std::size_t len = 0; len <= max_len && !stop; ++len) extend(len);
}

inline std::vector<OpWord> enumerate_compatible(const OpMatrix& m, const std::vector<Terminal>& alphabet,
                                                std::size_t max_len) {
    std::vector<OpWord> out;
    for_each_compatible(m, alphabet, max_len, [&](const OpWord& w) {
        out.push_back(w);
        return true;
    });
    return out;
}

}  // namespace optl

#endif  // OPTL_CORE_HPP
