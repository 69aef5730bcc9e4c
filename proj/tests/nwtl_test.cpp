#include <gtest/gtest.h>

#include "testing.hpp"

using namespace optl;
using namespace fixtures;

namespace {

std::vector<NestedWord> random_words(std::uint32_t seed, std::size_t count, std::size_t max_len) {
    std::mt19937 rng(seed);
    std::vector<NestedWord> out;
    for (std::size_t k = 0; k < count; ++k) {
        std::size_t n = std::uniform_int_distribution<std::size_t>(0, max_len)(rng);
        out.push_back(random_nested_word(rng, n, {"a", "b"}));
    }
    return out;
}

}  // namespace

TEST(NestedWord, Validation) {
    using L = std::vector<std::set<std::string>>;
    EXPECT_NO_THROW(NestedWord(L(4), {{1, 4}, {2, 3}}));
    EXPECT_THROW(NestedWord(L(4), {{1, 3}, {2, 4}}), std::invalid_argument);
    EXPECT_THROW(NestedWord(L(4), {{1, 3}, {1, 4}}), std::invalid_argument);
    EXPECT_THROW(NestedWord(L(4), {{1, 4}, {2, 4}}), std::invalid_argument);
    EXPECT_THROW(NestedWord(L(3), {{2, 2}}), std::invalid_argument);
    EXPECT_THROW(NestedWord(L(3), {{2, 5}}), std::invalid_argument);
    // a pending call can't enclose a matched pair's return, nor precede a
    // pending return
    EXPECT_THROW(NestedWord(L(3), {{1, 3}}, {2}), std::invalid_argument);
    EXPECT_THROW(NestedWord(L(2), {}, {1}, {2}), std::invalid_argument);
    EXPECT_NO_THROW(NestedWord(L(2), {}, {2}, {1}));
    EXPECT_THROW(NestedWord(L(2), {{1, 2}}, {1}), std::invalid_argument);
    EXPECT_THROW(NestedWord(L{{"call"}}, {}), std::invalid_argument);
    EXPECT_NO_THROW(fig3_nested_word());
}

TEST(NestedWord, WellNestingAgreesWithDefinition) {
    std::mt19937 rng(23);
    std::size_t accepted = 0;
    for (int k = 0; k < 3000; ++k) {
        std::size_t n = std::uniform_int_distribution<std::size_t>(1, 7)(rng);
        std::set<ChainPair> mu;
        std::set<Position> pc, pr, calls, rets;
        std::set<Position> used;
        for (Position i = 1; i <= n; ++i) {
            if (used.count(i)) continue;
            int kind = std::uniform_int_distribution<int>(0, 3)(rng);
            if (kind == 0) {
                Position j = std::uniform_int_distribution<Position>(i, n)(rng);
                if (j > i && !used.count(j)) {
                    mu.emplace(i, j);
                    used.insert(i);
                    used.insert(j);
                }
            } else if (kind == 1) {
                pc.insert(i);
                used.insert(i);
            } else if (kind == 2) {
                pr.insert(i);
                used.insert(i);
            }
        }
        for (auto [i, j] : mu) {
            calls.insert(i);
            rets.insert(j);
        }
        calls.insert(pc.begin(), pc.end());
        rets.insert(pr.begin(), pr.end());
        bool expect = literally_well_nested(n, mu, calls, rets);
        bool got = true;
        try {
            NestedWord(std::vector<std::set<std::string>>(n), mu, pc, pr);
        } catch (const std::invalid_argument&) {
            got = false;
        }
        ASSERT_EQ(got, expect);
        accepted += got;
    }
    EXPECT_GT(accepted, 300u);
}

TEST(NestedWord, RandomWordsAreValidAndHavePendings) {
    std::size_t pending = 0;
    for (const auto& w : random_words(1, 300, 8)) {
        for (Position i = 1; i <= w.length(); ++i) pending += w.is_pending_call(i) || w.is_pending_ret(i);
    }
    EXPECT_GT(pending, 100u);
}

TEST(NestedWord, TextRoundTrip) {
    NestedWord w = fig3_nested_word();
    std::string text = write_nested_word(w);
    EXPECT_EQ(parse_nested_word(text), w);
    for (const auto& x : random_words(2, 100, 8)) EXPECT_EQ(parse_nested_word(write_nested_word(x)), x);
    EXPECT_THROW(parse_nested_word("{} {}\nmu 1 x\n"), InputError);
    EXPECT_THROW(parse_nested_word("{} {}\nmu 1 2\ncall 1\n"), InputError);
}

TEST(Fig3, SummaryPathAndUntil) {
    NestedWord w = fig3_nested_word();
    EXPECT_EQ(nw_summary_path(w, 1, 9), (std::vector<Position>{1, 2, 3, 7, 8, 9}));
    EXPECT_TRUE(nw_eval(w, 1, parse_nwtl("~a U b")));
    EXPECT_FALSE(nw_eval(w, 8, parse_nwtl("Xu true")));
    EXPECT_TRUE(nw_eval(w, 3, parse_nwtl("Xu ret")));
    EXPECT_FALSE(nw_eval(w, 3, parse_nwtl("Xu b")));
    EXPECT_TRUE(nw_eval(w, 10, parse_nwtl("Yu b")));
    EXPECT_FALSE(nw_eval(w, 2, parse_nwtl("Yu true")));
    EXPECT_THROW(nw_eval(w, 0, top()), std::out_of_range);
    EXPECT_THROW(nw_eval(w, 11, top()), std::out_of_range);
    EXPECT_THROW(nw_eval(w, 1, parse_formula("Xm a")), std::invalid_argument);
}

TEST(Fig3, Translation) {
    NestedWord w = fig3_nested_word();
    auto [x, m] = translate_word(w);
    EXPECT_EQ(x.to_string(), "int ret call a,int call ret ret call b,call ret");
    auto chains = compute_chains(x, m).chains();
    std::set<ChainPair> got(chains.begin(), chains.end());
    // the three drawn arrows plus the chain of the whole word
    EXPECT_EQ(got, (std::set<ChainPair>{{0, 2}, {3, 7}, {8, 11}, {0, 11}}));
    Formula f = parse_nwtl("~a U b");
    Formula g = translate_formula(f);
    EXPECT_EQ(to_string(g), "(~a U[<=>] (b & ~#))");
    Model om = Model::build(x, m);
    EXPECT_TRUE(eval(om, 1, g));
    EXPECT_EQ(forward_summary_path(om, 1, 9, RelSet::all()), (Path{1, 2, 3, 7, 8, 9}));
    for (const char* s : {"Xu b", "Xu ret", "Yu call", "Xu (~a U ret)"}) {
        Formula h = parse_nwtl(s);
        for (Position i = 1; i <= w.length(); ++i) EXPECT_EQ(nw_eval(w, i, h), eval(om, i, translate_formula(h))) << s << " @" << i;
    }
}

TEST(Translate, Examples) {
    EXPECT_EQ(to_string(translate_formula(top())), "true");
    EXPECT_EQ(to_string(translate_formula(parse_nwtl("Xu a"))), "((call U[=] (ret & a)) & ~ret)");
    EXPECT_EQ(to_string(translate_formula(parse_nwtl("Yu a"))), "((ret S[=] (call & a)) & ~call)");
    EXPECT_THROW(translate_formula(atom("int")), std::invalid_argument);
    EXPECT_THROW(translate_formula(parse_formula("a HUu b")), std::invalid_argument);
    auto [x, m] = translate_word(NestedWord{});
    EXPECT_EQ(x.length(), 0u);
    EXPECT_EQ(x.last(), 1u);
}

TEST(Translate, MatchedNeighbours) {
    // mu(i, i+1): Xu psi at i iff psi at i+1
    NestedWord w({{"a"}, {"b"}, {}, {"b"}}, {{1, 2}, {3, 4}});
    for (const char* s : {"Xu b", "Xu a", "Yu a"}) {
        Formula f = parse_nwtl(s);
        auto [x, m] = translate_word(w);
        Model om = Model::build(x, m);
        for (Position i = 1; i <= 4; ++i) EXPECT_EQ(nw_eval(w, i, f), eval(om, i, translate_formula(f))) << s << " @" << i;
    }
    EXPECT_TRUE(nw_eval(w, 1, parse_nwtl("Xu b")));
    EXPECT_TRUE(nw_eval(w, 3, parse_nwtl("Xu b")));
    EXPECT_FALSE(nw_eval(w, 1, parse_nwtl("Xu a")));
}

TEST(Translate, HomomorphicNextNeedsDelimiterGuard) {
    // at the last position X sees the closing # in the OP word
    NestedWord w({{"a"}}, {});
    auto [x, m] = translate_word(w);
    Model om = Model::build(x, m);
    EXPECT_FALSE(nw_eval(w, 1, parse_nwtl("X ~a")));
    EXPECT_TRUE(eval(om, 1, next(neg(atom("a")))));
    EXPECT_FALSE(eval(om, 1, translate_formula(parse_nwtl("X ~a"))));
}

TEST(Property, StructuralProperties) {
    for (const auto& w : random_words(3, 200, 8)) {
        auto [x, m] = translate_word(w);
        Model om = Model::build(x, m);
        const std::size_t n = w.length();
        std::map<Position, Position> fwd, bwd;
        for (auto [i, j] : om.chains.chains()) {
            if (i < 1 || j > n) continue;
            EXPECT_TRUE(w.is_call(i) && w.is_ret(j));
            EXPECT_TRUE(fwd.emplace(i, j).second);
            EXPECT_TRUE(bwd.emplace(j, i).second);
        }
        for (Position i = 1; i <= n; ++i) {
            for (Position j = i + 2; j <= n; ++j) EXPECT_EQ(w.mu().count({i, j}) > 0, om.chains.contains(i, j));
            for (Position j = i; j <= n; ++j) {
                auto p = nw_summary_path(w, i, j);
                EXPECT_EQ(forward_summary_path(om, i, j, RelSet::all()), std::optional<Path>(p));
                EXPECT_EQ(backward_summary_path(om, i, j, RelSet::all()), std::optional<Path>(p));
            }
        }
    }
}

TEST(Property, TranslationPreservesTruth) {
    std::mt19937 rng(9);
    std::vector<Formula> suite = nwtl_constructor_suite();
    for (int k = 0; k < 40; ++k) suite.push_back(random_nwtl_formula(rng, {"a", "b"}, 3));
    std::vector<Formula> translated;
    for (const auto& f : suite) translated.push_back(translate_formula(f));
    for (const auto& w : random_words(4, 300, 8)) {
        auto [x, m] = translate_word(w);
        Model om = Model::build(x, m);
        Evaluator ev(om);
        NwEvaluator nev(w);
        for (std::size_t k = 0; k < suite.size(); ++k) {
            const auto& a = nev.truth(suite[k]);
            const auto& b = ev.truth(translated[k]);
            for (Position i = 1; i <= w.length(); ++i) {
                ASSERT_EQ(a[i], b[i]) << write_nested_word(w) << " @" << i << " " << to_string(suite[k]);
            }
        }
    }
}

TEST(Property, LinearLength) {
    std::mt19937 rng(10);
    std::vector<Formula> suite = nwtl_constructor_suite();
    for (int k = 0; k < 200; ++k) suite.push_back(random_nwtl_formula(rng, {"a", "b"}, 3));
    for (const auto& f : suite) EXPECT_LE(size(translate_formula(f)), 6 * size(f)) << to_string(f);
    // nested match-next grows by exactly 7 nodes per level
    Formula f = atom("a");
    for (int d = 0; d < 10; ++d) {
        std::size_t before = size(translate_formula(f));
        f = unary(Op::MuNext, f);
        EXPECT_EQ(size(translate_formula(f)), before + 7);
    }
}
