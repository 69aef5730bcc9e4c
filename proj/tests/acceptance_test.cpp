// Acceptance run: one PASS/FAIL line per criterion.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>

#include "testing.hpp"

using namespace optl;
using namespace fixtures;

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Result {
    bool pass;
    std::string detail;
};

bool report(int n, const std::string& name, const std::function<Result()>& body) {
    auto t0 = Clock::now();
    Result r;
    try {
        r = body();
    } catch (const std::exception& e) {
        r = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s %d %s (%.2f s) %s\n", r.pass ? "PASS" : "FAIL", n, name.c_str(), since(t0), r.detail.c_str());
    std::fflush(stdout);
    return r.pass;
}

bool at(const Model& m, Position i, const char* f) { return eval(m, i, parse_formula(f)); }

Result fig2_fidelity() {
    auto t0 = Clock::now();
    Model m = Model::build(fig2_word(), fig2_matrix());
    auto cs = m.chains.chains();
    std::set<ChainPair> got(cs.begin(), cs.end());
    std::set<ChainPair> want{{0, 10}, {1, 9}, {2, 9}, {2, 8}, {2, 7}, {2, 6}, {3, 6}, {4, 6}};
    bool chains_ok = got == want && cs.size() == want.size();

    const RelSet takes = RelSet::of({PrecRel::Takes}), yields = RelSet::of({PrecRel::Yields});
    std::vector<std::pair<std::string, bool>> claims{
        {"Xm throw at 3", at(m, 3, "Xm throw")},
        {"Xm throw at 4", at(m, 4, "Xm throw")},
        {"Ym handle at 6, 7, 8", at(m, 6, "Ym handle") && at(m, 7, "Ym handle") && at(m, 8, "Ym handle")},
        {"not Ym pb at 6", !at(m, 6, "Ym pb")},
        {"(call | throw) U[>] ret at 3 via 3-6-7-8-9",
         at(m, 3, "(call | throw) U[>] ret") && forward_summary_path(m, 3, 9, takes) == Path{3, 6, 7, 8, 9}},
        {"no {=,<} path from 3 to 9", !forward_summary_path(m, 3, 9, RelSet::of({PrecRel::Equals, PrecRel::Yields}))},
        {"(throw | handle) S[<] call at 8 via 1-2-8",
         at(m, 8, "(throw | handle) S[<] call") && backward_summary_path(m, 1, 8, yields) == Path{1, 2, 8}},
        {"throw HUu t3 at 2 via 6-7-8, not by 6 or 6-7",
         at(m, 2, "throw HUu t3") && hier_candidates(m, 2, HierKind::Yield) == std::vector<Position>{6, 7, 8} &&
             !at(m, 6, "t3") && !at(m, 7, "t3")},
        {"throw HSu t1 at 2, not by 8 or 7-8", at(m, 2, "throw HSu t1") && !at(m, 8, "t1") && !at(m, 7, "t1")},
        {"position 9 excluded (2 > 9)", m.rel(2, 9) == PrecRel::Takes && m.chains.contains(2, 9) && !at(m, 2, "true HUu ret")},
        {"call HUd pc at 6 via 3-4, not by 3 alone",
         at(m, 6, "call HUd pc") && hier_candidates(m, 6, HierKind::Take) == std::vector<Position>{3, 4} &&
             !at(m, 3, "pc")},
        {"call HSd pb at 6 via 3-4, not by 4 alone", at(m, 6, "call HSd pb") && !at(m, 4, "pb")},
        {"handles uninstalled; pb terminated by an exception",
         satisfies(m, parse_formula("G (handle -> Xm ret)")) && !satisfies(m, parse_formula("G (throw -> ~(true HSd pb))"))},
    };
    std::size_t ok = 0;
    std::string bad;
    for (const auto& [name, v] : claims) {
        ok += v;
        if (!v) bad += " [" + name + "]";
    }
    double t = since(t0);
    std::ostringstream d;
    d << "chains " << (chains_ok ? "exact" : "WRONG") << ", claims " << ok << "/" << claims.size() << bad;
    return {chains_ok && ok == claims.size() && claims.size() == 13 && t < 1.0, d.str()};
}

Result fig4_fidelity() {
    auto t0 = Clock::now();
    OpMatrix m(fig4_structure(), {"a", "b", "c"});
    Opa a = build_automaton(parse_formula("Xm c"), m);
    RunResult r = run(a, w({"a", "b", "b", "c"}));
    std::string moves;
    for (MoveKind k : r.witness ? r.witness->moves : std::vector<MoveKind>{}) moves += std::string(moves.empty() ? "" : ",") + to_string(k);
    double t = since(t0);
    bool ok = r.accepted && moves == "push,push,pop,push,pop,shift,pop" && t < 1.0;
    return {ok, std::string(r.accepted ? "accepted" : "rejected") + ", moves " + moves};
}

Result keystone() {
    auto t0 = Clock::now();
    OpMatrix mx = two_label_matrix("<=><");
    std::vector<Formula> suite = tableau_constructor_suite();
    for (const auto& f : tableau_random_suite()) suite.push_back(f);
    std::vector<OpWord> words;
    for (const auto& x : enumerate_compatible(mx, mx.alphabet(), 6)) {
        if (x.length()) words.push_back(x);
    }
    std::vector<Model> models;
    for (const auto& x : words) models.push_back(Model::build(x, mx));
    std::size_t mismatches = 0, checks = 0;
    std::string first;
    for (const auto& f : suite) {
        Opa a = build_automaton(f, mx);
        for (std::size_t k = 0; k < words.size(); ++k) {
            ++checks;
            if (accepts(a, words[k]) != satisfies(models[k], f)) {
                if (!mismatches) first = " first: " + to_string(f) + " on [" + words[k].to_string() + "]";
                ++mismatches;
            }
        }
    }
    double t = since(t0);
    std::ostringstream d;
    d << suite.size() << " formulas x " << words.size() << " words, " << mismatches << " mismatches" << first;
    return {mismatches == 0 && t < 600.0, d.str()};
}

Result translation_agrees() {
    std::mt19937 rng(4);
    std::vector<Formula> suite = nwtl_constructor_suite();
    std::mt19937 frng(9);
    for (int k = 0; k < 40; ++k) suite.push_back(random_nwtl_formula(frng, {"a", "b"}, 3));
    std::vector<Formula> translated;
    double worst = 0;
    for (const auto& f : suite) {
        translated.push_back(translate_formula(f));
        worst = std::max(worst, double(size(translated.back())) / double(size(f)));
    }
    std::size_t mismatches = 0, checks = 0, pending = 0;
    const std::size_t n_words = 300;
    for (std::size_t w = 0; w < n_words; ++w) {
        std::size_t n = std::uniform_int_distribution<std::size_t>(0, 8)(rng);
        NestedWord nw = random_nested_word(rng, n, {"a", "b"});
        for (Position i = 1; i <= nw.length(); ++i) pending += nw.is_pending_call(i) || nw.is_pending_ret(i);
        auto [x, m] = translate_word(nw);
        Model om = Model::build(x, m);
        Evaluator ev(om);
        NwEvaluator nev(nw);
        for (std::size_t k = 0; k < suite.size(); ++k) {
            const auto& a = nev.truth(suite[k]);
            const auto& b = ev.truth(translated[k]);
            for (Position i = 1; i <= nw.length(); ++i) {
                ++checks;
                mismatches += a[i] != b[i];
            }
        }
    }
    std::ostringstream d;
    d << suite.size() << " formulas, " << n_words << " nested words (" << pending << " pending positions), " << checks
      << " checks, " << mismatches << " mismatches, max size ratio " << worst;
    return {mismatches == 0 && worst <= 6.0 && pending > 0, d.str()};
}

Result adequacy() {
    std::vector<Formula> suite;
    for (const char* f : {"l HUu r", "p HSu r", "l HUd r", "r HSd p", "~p HUu (p | l)", "true HSu l", "(r | p) HUd ~l",
                          "true HSd true", "X r HUu Y l", "l HSd #", "(l HUu r) HUd p", "p HSu (r HSd l)"}) {
        suite.push_back(parse_formula(f));
    }
    std::size_t mismatches = 0, checks = 0, not_free = 0, over = 0;
    for (const auto& table : {std::string("<=><"), std::string("<>=<")}) {
        OpMatrix mx = two_label_matrix(table);
        ApContext ctx{mx};
        const double n = double(mx.ap().size());
        std::vector<Formula> out;
        for (const auto& f : suite) {
            out.push_back(eliminate_hierarchical(ctx, f));
            not_free += contains_op(out.back(), is_hierarchical);
            over += double(size(out.back())) > n * std::pow(2.0, 2.0 * n * double(size(f)));
        }
        for (const auto& x : enumerate_compatible(mx, mx.alphabet(), 7)) {
            Model m = Model::build(x, mx);
            Evaluator ev(m);
            for (std::size_t k = 0; k < suite.size(); ++k) {
                const auto& a = ev.truth(suite[k]);
                const auto& b = ev.truth(out[k]);
                for (Position i = 0; i <= x.last(); ++i) {
                    ++checks;
                    mismatches += a[i] != b[i];
                }
            }
        }
    }
    std::ostringstream d;
    d << checks << " position checks, " << mismatches << " mismatches, " << not_free << " outputs with hierarchical operators, "
      << over << " over the size envelope";
    return {mismatches == 0 && not_free == 0 && over == 0, d.str()};
}

Result size_bound() {
    OpMatrix mx = two_label_matrix("<=><");
    std::vector<Formula> suite = tableau_constructor_suite();
    for (const auto& f : tableau_random_suite()) suite.push_back(f);
    const double ap = double(mx.ap().size());
    std::size_t bad = 0;
    double worst = 0;
    for (const auto& f : suite) {
        Tableau t = build_tableau(f, mx);
        double k = double(t.closure.size()) / (double(size(f)) + ap);
        worst = std::max(worst, k);
        bad += k > 8.0 || double(t.stats.states) > std::pow(2.0, double(t.closure.size()));
    }
    std::ostringstream d;
    d << suite.size() << " formulas, max |closure|/(|f|+|AP|) " << worst << ", " << bad << " violations";
    return {bad == 0, d.str()};
}

Result structural() {
    std::mt19937 rng(3);
    std::size_t violations = 0, chains = 0;
    for (int k = 0; k < 200; ++k) {
        std::size_t n = std::uniform_int_distribution<std::size_t>(0, 8)(rng);
        NestedWord nw = random_nested_word(rng, n, {"a", "b"});
        auto [x, m] = translate_word(nw);
        Model om = Model::build(x, m);
        std::map<Position, Position> fwd, bwd;
        for (auto [i, j] : om.chains.chains()) {
            if (i < 1 || j > n) continue;
            ++chains;
            violations += !(nw.is_call(i) && nw.is_ret(j));
            violations += !fwd.emplace(i, j).second;
            violations += !bwd.emplace(j, i).second;
        }
        for (Position i = 1; i <= n; ++i) {
            for (Position j = i + 2; j <= n; ++j) violations += (nw.mu().count({i, j}) > 0) != om.chains.contains(i, j);
            for (Position j = i; j <= n; ++j) {
                auto p = std::optional<Path>(nw_summary_path(nw, i, j));
                violations += forward_summary_path(om, i, j, RelSet::all()) != p;
                violations += backward_summary_path(om, i, j, RelSet::all()) != p;
            }
        }
    }
    return {violations == 0, "200 nested words, " + std::to_string(chains) + " interior chains, " +
                                 std::to_string(violations) + " violations"};
}

Result product_soundness() {
    std::size_t mismatches = 0, checks = 0;
    auto pairs = opa_pairs();
    for (const auto& [a, b] : pairs) {
        Opa p = product(a, b);
        for (const auto& x : enumerate_compatible(m_call(), m_call().alphabet(), 6)) {
            ++checks;
            mismatches += accepts(p, x) != (accepts(a, x) && accepts(b, x));
        }
    }
    return {mismatches == 0 && pairs.size() == 5,
            std::to_string(pairs.size()) + " pairs, " + std::to_string(checks) + " words, " + std::to_string(mismatches) + " mismatches"};
}

}  // namespace

int main() {
    bool ok = true;
    ok &= report(1, "fig2-fidelity", fig2_fidelity);
    ok &= report(2, "fig4-fidelity", fig4_fidelity);
    ok &= report(3, "tableau-keystone", keystone);
    ok &= report(4, "nwtl-translation", translation_agrees);
    ok &= report(5, "hierarchical-elimination", adequacy);
    ok &= report(6, "tableau-size-bound", size_bound);
    ok &= report(7, "nested-word-structure", structural);
    ok &= report(8, "product-soundness", product_soundness);
    return ok ? 0 : 1;
}
