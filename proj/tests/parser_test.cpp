#include <gtest/gtest.h>

#include "testing.hpp"

using namespace optl;
using namespace fixtures;

TEST(Parser, Atoms) {
    EXPECT_EQ(to_string(parse_formula("call")), "call");
    EXPECT_EQ(to_string(parse_formula("#")), "#");
    EXPECT_EQ(to_string(parse_formula("p_1")), "p_1");
    EXPECT_EQ(parse_formula("true")->op, Op::True);
    EXPECT_EQ(parse_formula("false")->op, Op::False);
}

TEST(Parser, Precedence) {
    EXPECT_EQ(to_string(parse_formula("a | b & c")), "(a | (b & c))");
    EXPECT_EQ(to_string(parse_formula("a & b U c")), "(a & (b U c))");
    EXPECT_EQ(to_string(parse_formula("~a U b")), "(~a U b)");
    EXPECT_EQ(to_string(parse_formula("X a & b")), "(X a & b)");
    EXPECT_EQ(to_string(parse_formula("a -> b | c")), "(~a | (b | c))");
    EXPECT_EQ(to_string(parse_formula("a -> b -> c")), "(~a | (~b | c))");
}

TEST(Parser, TemporalRightAssociative) {
    EXPECT_EQ(to_string(parse_formula("a U b U c")), "(a U (b U c))");
    EXPECT_EQ(to_string(parse_formula("a S[<] b HUu c")), "(a S[<] (b HUu c))");
}

TEST(Parser, SummaryRelationSets) {
    auto f = parse_formula("a U[><=] b");
    EXPECT_EQ(f->op, Op::SummaryUntil);
    EXPECT_EQ(f->rels, RelSet::all());
    EXPECT_EQ(to_string(f), "(a U[<=>] b)");
    EXPECT_EQ(parse_formula("a S[>] b")->rels, RelSet::of({PrecRel::Takes}));
    EXPECT_EQ(parse_formula("a U b")->op, Op::Until);
}

TEST(Parser, Hierarchical) {
    EXPECT_EQ(parse_formula("a HUu b")->op, Op::HierYieldUntil);
    EXPECT_EQ(parse_formula("a HSu b")->op, Op::HierYieldSince);
    EXPECT_EQ(parse_formula("a HUd b")->op, Op::HierTakeUntil);
    EXPECT_EQ(parse_formula("a HSd b")->op, Op::HierTakeSince);
}

TEST(Parser, DerivedOperators) {
    EXPECT_EQ(to_string(parse_formula("G a")), "~(true U ~a)");
    EXPECT_EQ(to_string(parse_formula("F a")), "(true U a)");
    EXPECT_EQ(to_string(parse_formula("G (handle -> Xm ret)")), "~(true U ~(~handle | Xm ret))");
}

TEST(Parser, Errors) {
    try {
        parse_formula("a U[] b");
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.column(), 3u);
    }
    try {
        parse_formula("a & & b");
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.column(), 5u);
        EXPECT_EQ(e.token(), "&");
    }
    EXPECT_THROW(parse_formula("(a"), ParseError);
    EXPECT_THROW(parse_formula("a b"), ParseError);
    EXPECT_THROW(parse_formula(""), ParseError);
    EXPECT_THROW(parse_formula("a U[<x] b"), ParseError);
    EXPECT_THROW(parse_formula("a $ b"), ParseError);
    EXPECT_THROW(parse_formula("Xu a"), ParseError);
    EXPECT_THROW(summary_until({}, atom("a"), atom("b")), std::invalid_argument);
}

TEST(Parser, NwtlDialect) {
    auto f = parse_nwtl("Xu b & Yu call | ~a U ret");
    EXPECT_EQ(to_string(f), "((Xu b & Yu call) | (~a U ret))");
    EXPECT_THROW(parse_nwtl("Xm a"), ParseError);
    EXPECT_THROW(parse_nwtl("a U[<] b"), ParseError);
    EXPECT_THROW(parse_nwtl("a HUu b"), ParseError);
}

TEST(Property, PrintParseRoundTrip) {
    std::mt19937 rng(7);
    for (int k = 0; k < 500; ++k) {
        Formula f = random_formula(rng, {"l", "r", "p"}, 4);
        Formula g = parse_formula(to_string(f));
        ASSERT_EQ(to_string(g), to_string(f));
        ASSERT_EQ(size(g), size(f));
    }
}

TEST(Formula, SizeAndDepth) {
    auto f = parse_formula("a U[<] (b & ~c)");
    EXPECT_EQ(size(f), 6u);
    EXPECT_EQ(depth(f), 3u);
    EXPECT_EQ(atoms_of(f), (std::set<std::string>{"a", "b", "c"}));
    EXPECT_TRUE(contains_op(parse_formula("X (a HUd b)"), is_hierarchical));
    EXPECT_FALSE(contains_op(parse_formula("X (a U b)"), is_hierarchical));
}
