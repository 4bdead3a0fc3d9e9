#include <gtest/gtest.h>

#include "oracles.hpp"
#include "random_nets.hpp"
#include "skel/fullness.hpp"
#include "skel/symmetric.hpp"
#include "support.hpp"

using namespace skel;
using namespace skel::testing;

TEST(ConsumptionAutomaton, Fig6FirstTransition) {
    auto net = fig6();
    auto a = consumption_automaton(net, 0);
    a.check_invariants();
    ASSERT_EQ(a.states.size(), 4u);
    const auto& q0 = a.states[a.initial];
    ASSERT_EQ(q0.edges.size(), 1u);
    EXPECT_EQ(q0.edges[0].label, (Interval{1, 4}));
    const auto& q1 = a.states[q0.edges[0].target];
    ASSERT_EQ(q1.edges.size(), 2u);
    EXPECT_EQ(q1.edges[0].label, (Interval{1, 1}));
    EXPECT_TRUE(a.states[q1.edges[0].target].final);
    EXPECT_EQ(q1.edges[1].label, (Interval{2, 3}));
    EXPECT_FALSE(a.states[q1.edges[1].target].final);
}

TEST(ConsumptionAutomaton, Fig6SecondTransition) {
    auto a = consumption_automaton(fig6(), 1);
    const auto& q1 = a.states[a.states[a.initial].edges[0].target];
    ASSERT_EQ(q1.edges.size(), 2u);
    EXPECT_FALSE(a.states[q1.edges[0].target].final);
    EXPECT_EQ(q1.edges[1].label, (Interval{2, 3}));
    EXPECT_TRUE(a.states[q1.edges[1].target].final);
}

TEST(ConsumptionAutomaton, TrueGuardIsUniversal) {
    auto net = fig6();
    net.transitions[0].guard.form = Expr::truth(true);
    EXPECT_TRUE(is_universal(consumption_automaton(net, 0)));
}

TEST(Fullness, Fig6ClassIsFullWithThreeStates) {
    auto net = fig6();
    auto tc = transition_classes(net);
    ASSERT_EQ(tc.classes.size(), 1u);
    ASSERT_EQ(tc.minimal, std::vector<std::size_t>{0});
    auto r = check_fullness(net, tc.classes[0]);
    EXPECT_EQ(r.status, FullnessResult::Status::Full);
    ASSERT_EQ(r.automaton.states.size(), 3u);
    const auto& q0 = r.automaton.states[r.automaton.initial];
    EXPECT_EQ(q0.edges.at(0).label, (Interval{1, 4}));
    const auto& q1 = r.automaton.states[q0.edges[0].target];
    EXPECT_EQ(q1.edges.at(0).label, (Interval{1, 3}));
    EXPECT_TRUE(has_deadlock_preserving_skeleton(net));
}

TEST(Fullness, Example1IsNotFull) {
    auto net = example1();
    EXPECT_FALSE(is_full(net, {0}));
    EXPECT_FALSE(has_deadlock_preserving_skeleton(net));
}

TEST(Fullness, SingleTransitionTrueGuard) {
    auto net = fig2();
    net.transitions[0].guard.form = Expr::truth(true);
    EXPECT_TRUE(is_full(net, {0}));
}

TEST(Fullness, Fig2AgreesWithOracle) {
    auto net = fig2();
    EXPECT_EQ(is_full(net, {0}), oracle_full(net, {0}).value());
    EXPECT_TRUE(is_full(net, {0}));
}

TEST(Fullness, TokenOrderDoesNotMatter) {
    // Two tokens with x < y: every distribution of two distinct colours
    // enables t once the tokens may be taken in either order.
    ColouredNet net;
    net.places.push_back({"p", ColourDomain(BasicSort::range("D", 0, 2)), {0, 0, 0}});
    ColouredTransition t;
    t.name = "t";
    t.inputs.push_back({0, {{"x"}, {"y"}}, 0});
    t.guard.form = Expr::comparison(Term::var("x"), CompareOp::Le, Term::var("y"));
    net.transitions.push_back(t);
    net.validate();
    EXPECT_TRUE(is_full(net, {0}));
    EXPECT_FALSE(is_universal(consumption_automaton(net, 0)));
    EXPECT_TRUE(oracle_full(net, {0}).value());
}

TEST(Fullness, AllInscriptionIsAssumedNonFull) {
    auto net = fig2();
    net.transitions[0].inputs[0].allCopies = 1;
    auto r = check_fullness(net, {0});
    EXPECT_EQ(r.status, FullnessResult::Status::AssumedNonFull);
}

TEST(Classes, OneTransitionOneMinimalClass) {
    auto tc = transition_classes(fig2());
    EXPECT_EQ(tc.classes.size(), 1u);
    EXPECT_EQ(tc.minimal.size(), 1u);
}

TEST(Classes, OrderFollowsInputVectors) {
    auto net = fig6();
    net.transitions[1].inputs.pop_back();
    auto tc = transition_classes(net);
    ASSERT_EQ(tc.classes.size(), 2u);
    EXPECT_TRUE(tc.below(1, 0));
    EXPECT_EQ(tc.minimal, std::vector<std::size_t>{1});
}

TEST(Fullness, AgreesWithOracleOnRandomNets) {
    std::mt19937 rng(11);
    int checked = 0;
    for (int i = 0; i < 60; ++i) {
        auto net = random_coloured_net(rng, {});
        auto tc = transition_classes(net);
        for (auto c : tc.minimal) {
            auto expected = oracle_full(net, tc.classes[c]);
            if (!expected) continue;
            ASSERT_EQ(is_full(net, tc.classes[c]), *expected) << describe(net);
            ++checked;
        }
    }
    EXPECT_GT(checked, 40);
}

TEST(Certificate, Multichoose) {
    EXPECT_EQ(multichoose(10, 1), 10u);
    EXPECT_EQ(multichoose(3, 2), 6u);
    EXPECT_EQ(multichoose(5, 0), 1u);
    EXPECT_EQ(multichoose(0, 2), 0u);
    EXPECT_FALSE(multichoose(1u << 20, 40).has_value());
}

TEST(Certificate, EmptyPresetNeedsOneMode) {
    ColouredNet net;
    net.places.push_back({"q", ColourDomain(BasicSort::dot()), {0}});
    ColouredTransition t;
    t.name = "t";
    t.outputs.push_back({0, {{"y"}}, 0});
    net.transitions.push_back(t);
    net.validate();
    auto cert = fullness_certificate(net, {0});
    EXPECT_EQ(cert.distributions, 1u);
    EXPECT_EQ(cert.modes, 1u);
    EXPECT_TRUE(cert.holds());
}

TEST(Certificate, SoundOnRandomNets) {
    std::mt19937 rng(5);
    for (int i = 0; i < 60; ++i) {
        auto net = random_coloured_net(rng, {});
        auto tc = transition_classes(net);
        for (auto c : tc.minimal) {
            auto cert = fullness_certificate(net, tc.classes[c]);
            if (cert.holds()) {
                EXPECT_TRUE(is_full(net, tc.classes[c])) << describe(net);
            }
        }
    }
}

TEST(Simplify, SumWithSubtractionBecomesTwoFreshVariables) {
    SymmetricNet net;
    auto d = BasicSort::range("D", 0, 3);
    net.places.push_back({"p", ColourDomain(d), {0, 0, 0, 0}});
    HighLevelTransition t;
    t.name = "t";
    HighLevelArc arc{0, {}};
    for (auto v : {"a", "b", "c"}) arc.items.push_back({1, false, false, {Term::var(v)}});
    arc.items.push_back({1, true, false, {Term::var("d")}});
    t.inputs.push_back(arc);
    net.transitions.push_back(t);
    auto c = simplify_inscriptions(net);
    const auto& ct = c.transitions[0];
    ASSERT_EQ(ct.inputs[0].tokens.size(), 2u);
    // Guard is the disjunction over the 6 ways to match a, b, c to the slots.
    const auto& g = ct.guard.expression();
    ASSERT_EQ(g.kind, Expr::Kind::Or);
    EXPECT_EQ(g.children.size(), 6u);
    EXPECT_EQ(ct.hidden.size(), 4u);
}

TEST(Simplify, TupleComponentsGetOneVariableEach) {
    SymmetricNet net;
    auto d = BasicSort::range("D", 0, 1);
    net.places.push_back({"p", ColourDomain(std::vector<BasicSort>{d, d, d}), std::vector<Tokens>(8, 0)});
    HighLevelTransition t;
    t.name = "t";
    t.inputs.push_back({0, {{1, false, false, {Term::var("a", 1), Term::value(0), Term::var("b")}}}});
    net.transitions.push_back(t);
    auto c = simplify_inscriptions(net);
    const auto& ct = c.transitions[0];
    ASSERT_EQ(ct.inputs[0].tokens.size(), 1u);
    EXPECT_EQ(ct.inputs[0].tokens[0].size(), 3u);
    const auto& g = ct.guard.expression();
    ASSERT_EQ(g.kind, Expr::Kind::And);
    EXPECT_EQ(g.children.size(), 3u);
}

TEST(Simplify, PlainVariablesUnchanged) {
    auto lifted = lift(fig2());
    EXPECT_EQ(simplify_inscriptions(lifted), fig2());
}

TEST(Simplify, PreservesUnfoldingSemantics) {
    SymmetricNet net;
    auto d = BasicSort::range("D", 0, 2);
    net.places.push_back({"p", ColourDomain(d), {1, 1, 0}});
    net.places.push_back({"q", ColourDomain(d), {0, 0, 0}});
    HighLevelTransition t;
    t.name = "t";
    t.inputs.push_back({0, {{1, false, false, {Term::var("x")}}, {1, false, false, {Term::value(1)}}}});
    t.outputs.push_back({1, {{2, false, false, {Term::var("x", 1)}}}});
    net.transitions.push_back(t);
    auto c = simplify_inscriptions(net);
    // Firing from {0,1} on p puts two tokens of colour 1 on q.
    auto modes = firing_modes(c, 0);
    ASSERT_FALSE(modes.empty());
    auto u = unfold(c);
    EXPECT_TRUE(u.net.find_transition("t.0_1_1_1") || u.net.find_transition("t.1_0_1_1"));
}
