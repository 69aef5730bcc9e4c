#ifndef OPTL_CHECK_HPP
#define OPTL_CHECK_HPP

// Bounded model checking: build the automaton of the negated formula,
// intersect it with the system and look for the shortest accepted word.

#include <chrono>
#include <optional>
#include <stdexcept>
#include <string>

#include "optl/core.hpp"
#include "optl/formula.hpp"
#include "optl/logic.hpp"
#include "optl/opa.hpp"
#include "optl/tableau.hpp"

namespace optl {

enum class Verdict { HoldsAtBound, Counterexample };

inline const char* to_string(Verdict v) { return v == Verdict::HoldsAtBound ? "holds-at-bound" : "counterexample"; }

struct CheckReport {
    Verdict verdict = Verdict::HoldsAtBound;
    std::size_t bound = 0;
    std::optional<OpWord> counterexample;
    Position failing_position = 0;  // 1 when there is a counterexample
    TableauStats tableau;
    std::size_t search_states = 0;  // states of the automaton searched (product if a system is given)
    double seconds = 0;
};

/// Automaton and evaluator disagree on a word; never reported as a verdict.
class OracleDisagreement : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

inline CheckReport check(const OpMatrix& m, const Formula& f, std::size_t bound, const Opa* system = nullptr) {
    if (bound < 1) throw std::invalid_argument("bound must be at least 1");
    if (system && !(system->matrix().structure() == m.structure())) throw MatrixMismatch();
    const auto start = std::chrono::steady_clock::now();

    CheckReport rep;
    rep.bound = bound;
    std::vector<Terminal> alphabet = system ? readable_alphabet(*system) : m.alphabet();
    Tableau neg_t = build_tableau(neg(f), m, alphabet);
    rep.tableau = neg_t.stats;
    std::optional<Opa> prod;
    if (system) prod = product(*system, neg_t.automaton);
    const Opa& search = prod ? *prod : neg_t.automaton;
    rep.search_states = search.state_count();

    for_each_accepted(search, alphabet, bound, [&](const OpWord& w) {
        if (w.length() == 0) return true;
        bool holds = satisfies(Model::build(w, m), f);
        bool in_system = !system || accepts(*system, w);
        if (holds || !in_system) {
            throw OracleDisagreement("automaton reports [" + w.to_string() + "] as a counterexample but the evaluator says " +
                                     (holds ? "the formula holds" : "the formula fails") +
                                     (in_system ? "" : " and the system rejects the word"));
        }
        rep.verdict = Verdict::Counterexample;
        rep.counterexample = w;
        rep.failing_position = 1;
        return false;
    });
    rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return rep;
}

}  // namespace optl

#endif  // OPTL_CHECK_HPP
