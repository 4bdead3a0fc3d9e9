#include <gtest/gtest.h>

#include "random_nets.hpp"
#include "skel/checker.hpp"
#include "skel/verify.hpp"
#include "support.hpp"

using namespace skel;
using namespace skel::testing;

namespace {

bool direct_truth(const ColouredNet& net, const Formula& f) {
    auto nnf = to_nnf(f);
    return check_ctl(build_kripke(net, propositions_of(nnf)), nnf);
}

Budgets abstract_only() {
    Budgets b;
    b.direct = false;
    return b;
}

} // namespace

TEST(Transfer, PreservingActlTrue) {
    auto f = to_nnf(parse_formula("A G p <= 1"));
    auto v = transfer(true, classify(f), classify(negated_nnf(f)), Basis::DeadlockPreserving);
    EXPECT_EQ(v.value, Truth::True);
    EXPECT_EQ(v.basis, Basis::DeadlockPreserving);
}

TEST(Transfer, StutteringRejectsNext) {
    auto f = to_nnf(parse_formula("A X p <= 1"));
    auto v = transfer(true, classify(f), classify(negated_nnf(f)), Basis::Stuttering);
    EXPECT_EQ(v.value, Truth::Unknown);
    EXPECT_FALSE(v.reason.empty());
}

TEST(Transfer, LivenessIsNotSafety) {
    auto f = to_nnf(parse_formula("A F p <= 1"));
    auto v = transfer(true, classify(f), classify(negated_nnf(f)), Basis::SafetyAbstraction);
    EXPECT_EQ(v.value, Truth::Unknown);
}

TEST(Transfer, FalseThroughNegation) {
    // !(E F p > 1) is A G p <= 1.
    auto f = to_nnf(parse_formula("E F p > 1"));
    auto v = transfer(false, classify(f), classify(negated_nnf(f)), Basis::SafetyAbstraction);
    EXPECT_EQ(v.value, Truth::False);
    auto g = to_nnf(parse_formula("A G p <= 1"));
    EXPECT_EQ(transfer(false, classify(g), classify(negated_nnf(g)), Basis::DeadlockFree).value, Truth::Unknown);
}

TEST(Soundness, Classes) {
    EXPECT_EQ(soundness_class(fig6(), 1000), SoundnessClass::DeadlockPreserving);
    EXPECT_EQ(soundness_class(example1(), 1000), SoundnessClass::Injectable);
    auto net = fig2();
    net.transitions[0].outputs[0].place = 0;
    EXPECT_EQ(soundness_class(net, 1000), SoundnessClass::DeadlockFree);
}

TEST(Verify, Example1FalseDirectly) {
    auto net = example1();
    auto f = parse_formula("A F p <= 1");
    EXPECT_TRUE(check_ctl(build_kripke(skeleton(net), propositions_of(f)), to_nnf(f)));
    auto v = verify(net, f);
    EXPECT_EQ(v.value, Truth::False);
    EXPECT_EQ(v.basis, Basis::Direct);
    EXPECT_EQ(v.states, 1u);
    auto a = verify(net, f, abstract_only());
    EXPECT_EQ(a.value, Truth::Unknown);
}

TEST(Verify, Example1NeverTrueForFalseFormulas) {
    auto net = example1();
    for (auto text : {"A F p <= 1", "A F q >= 1", "A G p <= 2", "F G q = 1"}) {
        auto f = parse_formula(text);
        ASSERT_FALSE(direct_truth(net, f)) << text;
        EXPECT_NE(verify(net, f, abstract_only()).value, Truth::True) << text;
    }
}

TEST(Verify, Fig6TrueWithoutDirectCheck) {
    auto v = verify(fig6(), parse_formula("A G true"), abstract_only());
    EXPECT_EQ(v.value, Truth::True);
    auto w = verify(fig6(), parse_formula("A F p1 <= 0"), abstract_only());
    EXPECT_EQ(w.value, Truth::True);
    EXPECT_EQ(w.basis, Basis::DeadlockPreserving);
}

TEST(Verify, TrivialFormulaReadsInitialMarking) {
    auto v = verify(example1(), parse_formula("p >= 3 && q = 0"));
    EXPECT_EQ(v.value, Truth::True);
    EXPECT_EQ(v.basis, Basis::Direct);
}

TEST(Verify, PhilosophersFoldAgreesWithWholeNet) {
    auto net = philosophers();
    auto f = parse_formula(philosophers_formula());
    auto whole = check_ctl(build_kripke(net, propositions_of(to_nnf(f))), to_nnf(f));
    auto v = verify(net, f);
    EXPECT_TRUE(v.folded);
    ASSERT_NE(v.value, Truth::Unknown);
    EXPECT_EQ(v.value == Truth::True, whole);
    Budgets nofold;
    nofold.fold = false;
    EXPECT_EQ(verify(net, f, nofold).value, v.value);
}

TEST(Verify, StateCapGivesUnknown) {
    Budgets b;
    b.stateCap = 2;
    b.probeCap = 2;
    auto v = verify(philosophers(), parse_formula(philosophers_formula()), b);
    EXPECT_EQ(v.value, Truth::Unknown);
    EXPECT_FALSE(v.reason.empty());
}

TEST(Verify, RacingAgrees) {
    Budgets race;
    race.race = true;
    std::mt19937 rng(4);
    for (int i = 0; i < 30; ++i) {
        auto net = random_coloured_net(rng, {});
        std::vector<std::string> names;
        for (const auto& p : net.places) names.push_back(p.name);
        auto f = random_formula(rng, names, FormulaShape::ACTL);
        auto v = verify(net, f, race);
        ASSERT_NE(v.value, Truth::Unknown);
        EXPECT_EQ(v.value == Truth::True, direct_truth(net, f));
    }
}

TEST(Verify, TransferredVerdictsAreSound) {
    std::mt19937 rng(17);
    int transferred = 0;
    for (int i = 0; i < 150; ++i) {
        auto net = random_coloured_net(rng, {});
        std::vector<std::string> names;
        for (const auto& p : net.places) names.push_back(p.name);
        auto shape = std::array{FormulaShape::ACTL, FormulaShape::Safety, FormulaShape::Any}[i % 3];
        auto f = random_formula(rng, names, shape);
        auto v = verify(net, f, abstract_only());
        if (v.value == Truth::Unknown) continue;
        ++transferred;
        EXPECT_EQ(v.value == Truth::True, direct_truth(net, f))
            << to_string(f) << " via " << to_string(v.basis) << '\n'
            << describe(net);
    }
    EXPECT_GT(transferred, 40);
}
