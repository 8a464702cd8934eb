#include <gtest/gtest.h>

#include <random>

#include "../common/expr_corpus.hpp"
#include "fuzzyfp/expr.hpp"

using namespace fuzzyfp;
using namespace fuzzyfp::expr;

TEST(Expr, CorpusMatchesOracle) {
    const auto cases = corpus::expressions();
    ASSERT_EQ(cases.size(), 50u);
    const Binding b{{"x", 0.3}, {"y", 2.0}};
    for (const auto& c : cases) {
        const Expr e = Expr::parse(c.text);
        EXPECT_NEAR(e.eval(b), c.oracle(0.3, 2.0), 1e-12) << c.text;
        const Compiled fast(e, {"x", "y"});
        EXPECT_NEAR(fast({0.3, 2.0}), c.oracle(0.3, 2.0), 1e-12) << c.text;
    }
}

TEST(Expr, SpotValues) {
    EXPECT_EQ(Expr::parse("x/2").eval({{"x", 1.0}}), 0.5);
    EXPECT_EQ(Expr::parse("x^2").eval({{"x", 3.0}}), 9.0);
    EXPECT_EQ(Expr::parse("0").eval({}), 0.0);
    EXPECT_EQ(Expr::parse("abs(-2)+1").eval({}), 3.0);
}

TEST(Expr, PrecedenceProperty) {
    const Expr flat = Expr::parse("a+b*c");
    const Expr grouped = Expr::parse("a+(b*c)");
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-100, 100);
    for (int i = 0; i < 1000; ++i) {
        const Binding b{{"a", u(rng)}, {"b", u(rng)}, {"c", u(rng)}};
        EXPECT_EQ(flat.eval(b), grouped.eval(b));
    }
}

TEST(Expr, Variables) {
    EXPECT_EQ(Expr::parse("x * y + min(z, x)").variables(), (std::set<std::string>{"x", "y", "z"}));
    EXPECT_TRUE(Expr::parse("exp(1)").variables().empty());
    EXPECT_EQ(Expr::parse(" x + 1").source(), " x + 1");
}

TEST(Expr, MalformedInputsArePositioned) {
    for (const auto& m : corpus::malformed()) {
        try {
            Expr::parse(m.text);
            ADD_FAILURE() << "parsed: " << m.text;
        } catch (const ParseError& e) {
            EXPECT_EQ(e.offset(), m.offset) << m.text << ": " << e.what();
            EXPECT_FALSE(e.expected().empty()) << m.text;
        }
    }
}

TEST(Expr, OtherSyntaxErrors) {
    EXPECT_THROW(Expr::parse(""), ParseError);
    EXPECT_THROW(Expr::parse("1 2"), ParseError);
    EXPECT_THROW(Expr::parse("x )"), ParseError);
    EXPECT_THROW(Expr::parse("3 $ 4"), ParseError);
    EXPECT_THROW(Expr::parse("log(x)"), InputError);
    EXPECT_THROW(Expr::parse("abs(x, y)"), InputError);
    EXPECT_THROW(Expr::parse("min()"), ParseError);
}

TEST(Expr, DomainErrors) {
    EXPECT_THROW(Expr::parse("1 / x").eval({{"x", 0.0}}), EvalError);
    EXPECT_THROW(Expr::parse("sqrt(x)").eval({{"x", -1.0}}), EvalError);
    EXPECT_THROW(Expr::parse("exp(x)").eval({{"x", 1000.0}}), EvalError);
    EXPECT_THROW(Expr::parse("x + y").eval({{"x", 1.0}}), EvalError);
    EXPECT_THROW(Compiled(Expr::parse("x + y"), {"x"}), InputError);
    const Compiled c(Expr::parse("1 / (x - 1)"), {"x"});
    EXPECT_THROW(c({1.0}), EvalError);
}

TEST(Expr, SharedCopiesAreIndependentOfSource) {
    Expr copy = Expr::parse("x + 1");
    {
        const Expr other = copy;
        EXPECT_EQ(other.eval({{"x", 1.0}}), 2.0);
    }
    EXPECT_EQ(copy.eval({{"x", 2.0}}), 3.0);
}
