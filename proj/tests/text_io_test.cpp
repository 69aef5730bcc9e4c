#include <gtest/gtest.h>

#include "testing.hpp"

using namespace optl;
using namespace fixtures;

namespace {

std::size_t error_line(const std::function<void()>& f) {
    try {
        f();
    } catch (const InputError& e) {
        return e.line();
    }
    return std::size_t(-1);
}

}  // namespace

TEST(Opm, ParseAndWrite) {
    OpMatrix m = parse_opm(
        "// calls and returns\n"
        "labels: call ret handle throw\n"
        "props: pa pb\n"
        "call < call\n"
        "call = ret   // trailing comment\n");
    EXPECT_EQ(m.ap(), (std::vector<std::string>{"call", "handle", "pa", "pb", "ret", "throw"}));
    EXPECT_EQ(m.prec(t("call"), t("ret,pa")), PrecRel::Equals);
    EXPECT_FALSE(m.prec(t("ret"), t("call")));
}

TEST(Opm, RoundTrip) {
    for (const OpMatrix& m : {m_call(), fig2_matrix(), two_label_matrix(), OpMatrix(fig4_structure(), {"a", "b", "c"})}) {
        OpMatrix back = parse_opm(write_opm(m));
        EXPECT_EQ(back.ap(), m.ap());
        EXPECT_TRUE(back.structure() == m.structure());
        EXPECT_EQ(write_opm(back), write_opm(m));
    }
}

TEST(Opm, Errors) {
    EXPECT_EQ(error_line([] { parse_opm("labels: a b\na < b\na > b\n"); }), 3u);
    EXPECT_EQ(error_line([] { parse_opm("labels: a\nlabels: b\n"); }), 2u);
    EXPECT_EQ(error_line([] { parse_opm("labels: a b\na ~ b\n"); }), 2u);
    EXPECT_EQ(error_line([] { parse_opm("labels: a b\na < c\n"); }), 2u);
    EXPECT_EQ(error_line([] { parse_opm("a < b\n"); }), 0u);
    EXPECT_EQ(error_line([] { parse_opm("labels: a\nprops: #\n"); }), 0u);
}

TEST(Word, ParseAndRoundTrip) {
    EXPECT_EQ(parse_word("call,pa handle\n{} ret // tail\n"), w({"call,pa", "handle", "", "ret"}));
    EXPECT_EQ(parse_word(""), OpWord{});
    EXPECT_EQ(parse_word(fig2_word().to_string()), fig2_word());
    EXPECT_EQ(error_line([] { parse_word("a\nb,#\n"); }), 2u);
    EXPECT_EQ(error_line([] { parse_word("a,,b"); }), 1u);
}

TEST(Opa, ParseAndRoundTrip) {
    const std::string text =
        "state q0 q1\n"
        "initial q0\n"
        "final q1\n"
        "push q0 call,p q1\n"
        "shift q1 ret q1\n"
        "pop q1 q0 q1\n";
    Opa a = parse_opa(text, m_call());
    EXPECT_EQ(a.state_count(), 2u);
    // p is added to the matrix's propositions
    EXPECT_TRUE(std::count(a.matrix().ap().begin(), a.matrix().ap().end(), "p"));
    EXPECT_EQ(write_opa(a), text);
    EXPECT_TRUE(accepts(a, w({"call,p", "ret"})));
    for (const Opa& b : {max_automaton(m_call()), word_automaton(fig2_word(), fig2_matrix()),
                         build_automaton(parse_formula("Xm c"), OpMatrix(fig4_structure(), {"a", "b", "c"}))}) {
        EXPECT_EQ(write_opa(parse_opa(write_opa(b), b.matrix())), write_opa(b));
    }
}

TEST(Opa, Errors) {
    EXPECT_EQ(error_line([] { parse_opa("state q\nstate q\n", m_call()); }), 2u);
    EXPECT_EQ(error_line([] { parse_opa("state q\ninitial r\n", m_call()); }), 2u);
    EXPECT_EQ(error_line([] { parse_opa("state q\npush q call\n", m_call()); }), 2u);
    EXPECT_EQ(error_line([] { parse_opa("state q\npush q call,ret q\n", m_call()); }), 2u);
    EXPECT_EQ(error_line([] { parse_opa("state q\n\n\npop q q\n", m_call()); }), 4u);
    EXPECT_EQ(error_line([] { parse_opa("state q\njump q q\n", m_call()); }), 2u);
}
