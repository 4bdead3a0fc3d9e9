#include <gtest/gtest.h>

#include <functional>
#include <random>

#include "random_nets.hpp"
#include "skel/checker.hpp"
#include "skel/error.hpp"
#include "support.hpp"

using namespace skel;
using namespace skel::testing;
using Op = Formula::Op;

namespace {

// Atoms over two counters p and q.
const std::vector<AtomicProposition>& pool() {
    static const std::vector<AtomicProposition> atoms{
        AtomicProposition::make({{1, "p"}}, 0),
        AtomicProposition::make({{1, "p"}}, 1),
        AtomicProposition::make({{1, "q"}}, 0),
    };
    return atoms;
}

bool holds(const AtomicProposition& a, const Marking& m) {
    std::int64_t sum = 0;
    for (const auto& t : a.terms) sum += t.coefficient * static_cast<std::int64_t>(m[t.place == "p" ? 0 : 1]);
    return sum <= a.bound;
}

// Hand-made structure: markings are (p, q), edges carry a single action "a".
KripkeStructure make_structure(const std::vector<Marking>& markings,
                               const std::vector<std::vector<std::size_t>>& successors) {
    KripkeStructure k;
    k.width = 2;
    k.actions = {"tau", "a"};
    k.silentActions = {1, 0};
    for (const auto& a : pool()) k.propositions.push_back(Formula::proposition(a));
    k.edgeOffsets.push_back(0);
    for (std::size_t s = 0; s < markings.size(); ++s) {
        k.markings.insert(k.markings.end(), markings[s].begin(), markings[s].end());
        for (auto t : successors[s]) k.edges.push_back({1, static_cast<std::uint32_t>(t)});
        k.edgeOffsets.push_back(k.edges.size());
        for (const auto& a : pool()) k.labels.push_back(holds(a, markings[s]));
        k.deadlock.push_back(0);
    }
    return k;
}

std::vector<Marking> random_markings(std::mt19937& rng, std::size_t n) {
    std::vector<Marking> m(n);
    for (auto& x : m) x = {static_cast<Tokens>(pick(rng, 0, 2)), static_cast<Tokens>(pick(rng, 0, 1))};
    return m;
}

Formula random_atom_formula(std::mt19937& rng) {
    auto a = Formula::proposition(pool()[pick(rng, 0, pool().size() - 1)]);
    return pick(rng, 0, 3) == 0 ? Formula::unary(Op::Not, a) : a;
}

// Arbitrary nesting of temporal operators, negations and quantifiers.
Formula random_path_formula(std::mt19937& rng, int depth) {
    if (depth == 0 || pick(rng, 0, 4) == 0) return random_atom_formula(rng);
    static const std::vector<Op> ops{Op::And, Op::Or, Op::Not, Op::X, Op::F, Op::G,
                                     Op::U,   Op::R,  Op::W,   Op::A, Op::E};
    auto op = ops[pick(rng, 0, ops.size() - 1)];
    auto sub = [&] { return random_path_formula(rng, depth - 1); };
    switch (op) {
    case Op::And: return Formula::conjunction({sub(), sub()});
    case Op::Or: return Formula::disjunction({sub(), sub()});
    case Op::U:
    case Op::R:
    case Op::W: return Formula::binary(op, sub(), sub());
    default: return Formula::unary(op, sub());
    }
}

// A quantifier directly in front of every temporal operator.
Formula random_ctl(std::mt19937& rng, int depth) {
    if (depth == 0 || pick(rng, 0, 4) == 0) return random_atom_formula(rng);
    auto sub = [&] { return random_ctl(rng, depth - 1); };
    switch (pick(rng, 0, 3)) {
    case 0: return Formula::conjunction({sub(), sub()});
    case 1: return Formula::disjunction({sub(), sub()});
    case 2: return Formula::unary(Op::Not, sub());
    default: break;
    }
    static const std::vector<Op> temporal{Op::X, Op::F, Op::G, Op::U, Op::R, Op::W};
    auto op = temporal[pick(rng, 0, temporal.size() - 1)];
    auto inner = op == Op::U || op == Op::R || op == Op::W ? Formula::binary(op, sub(), sub())
                                                           : Formula::unary(op, sub());
    return Formula::unary(pick(rng, 0, 1) ? Op::A : Op::E, inner);
}

// Exact semantics on a structure where every state has exactly one successor:
// the path from a state is unique, so quantifiers are transparent.
class FunctionalOracle {
public:
    FunctionalOracle(std::vector<Marking> markings, std::vector<std::size_t> next)
        : markings_(std::move(markings)), next_(std::move(next)) {}

    bool eval(const Formula& f, std::size_t s) const {
        switch (f.op) {
        case Op::True: return true;
        case Op::False: return false;
        case Op::Atom: return holds(f.atom, markings_[s]);
        case Op::Not: return !eval(f.args[0], s);
        case Op::And:
            for (const auto& a : f.args)
                if (!eval(a, s)) return false;
            return true;
        case Op::Or:
            for (const auto& a : f.args)
                if (eval(a, s)) return true;
            return false;
        case Op::A:
        case Op::E: return eval(f.args[0], s);
        case Op::X: return eval(f.args[0], next_[s]);
        case Op::F: return walk(s, [&](std::size_t x) { return eval(f.args[0], x) ? 1 : 0; }, false);
        case Op::G: return walk(s, [&](std::size_t x) { return eval(f.args[0], x) ? 0 : -1; }, true);
        case Op::U:
            return walk(s, [&](std::size_t x) { return eval(f.args[1], x) ? 1 : eval(f.args[0], x) ? 0 : -1; },
                        false);
        case Op::W:
            return walk(s, [&](std::size_t x) { return eval(f.args[1], x) ? 1 : eval(f.args[0], x) ? 0 : -1; },
                        true);
        case Op::R:
            return walk(s, [&](std::size_t x) { return !eval(f.args[1], x) ? -1 : eval(f.args[0], x) ? 1 : 0; },
                        true);
        default: throw std::logic_error("unexpected operator");
        }
    }

private:
    // Follows the path until `step` decides (1 true, -1 false); once every
    // state of the orbit has been seen the path repeats and `atEnd` applies.
    bool walk(std::size_t s, const std::function<int(std::size_t)>& step, bool atEnd) const {
        std::vector<char> seen(next_.size(), 0);
        for (; !seen[s]; s = next_[s]) {
            seen[s] = 1;
            if (auto r = step(s)) return r > 0;
        }
        return atEnd;
    }

    std::vector<Marking> markings_;
    std::vector<std::size_t> next_;
};

// CTL by explicit path search: witnesses for E are simple paths or simple
// lassos, A is evaluated through its dual.
class BranchingOracle {
public:
    BranchingOracle(std::vector<Marking> markings, std::vector<std::vector<std::size_t>> succ)
        : markings_(std::move(markings)), succ_(std::move(succ)) {}

    bool eval(const Formula& f, std::size_t s) const {
        switch (f.op) {
        case Op::True: return true;
        case Op::False: return false;
        case Op::Atom: return holds(f.atom, markings_[s]);
        case Op::Not: return !eval(f.args[0], s);
        case Op::And:
            for (const auto& a : f.args)
                if (!eval(a, s)) return false;
            return true;
        case Op::Or:
            for (const auto& a : f.args)
                if (eval(a, s)) return true;
            return false;
        case Op::E: return exists(f.args[0], s);
        case Op::A: return !exists(dual(f.args[0]), s);
        default: throw std::logic_error("not a CTL state formula");
        }
    }

private:
    static Formula neg(const Formula& f) { return Formula::unary(Op::Not, f); }

    // Negation of a path formula whose arguments are state formulas.
    static Formula dual(const Formula& p) {
        const auto& a = p.args;
        switch (p.op) {
        case Op::X: return Formula::unary(Op::X, neg(a[0]));
        case Op::F: return Formula::unary(Op::G, neg(a[0]));
        case Op::G: return Formula::unary(Op::F, neg(a[0]));
        case Op::U: return Formula::binary(Op::R, neg(a[0]), neg(a[1]));
        case Op::R: return Formula::binary(Op::U, neg(a[0]), neg(a[1]));
        case Op::W: return Formula::binary(Op::U, neg(a[1]), Formula::conjunction({neg(a[0]), neg(a[1])}));
        default: throw std::logic_error("not a temporal operator");
        }
    }

    bool exists(const Formula& p, std::size_t s) const {
        auto is = [&](std::size_t i) { return [this, &p, i](std::size_t x) { return eval(p.args[i], x); }; };
        auto any = [](std::size_t) { return true; };
        switch (p.op) {
        case Op::X:
            for (auto t : succ_[s])
                if (eval(p.args[0], t)) return true;
            return false;
        case Op::F: return path_to(s, any, is(0));
        case Op::G: return lasso(s, is(0));
        case Op::U: return path_to(s, is(0), is(1));
        case Op::W: return path_to(s, is(0), is(1)) || lasso(s, is(0));
        case Op::R: {
            auto both = [&](std::size_t x) { return eval(p.args[0], x) && eval(p.args[1], x); };
            return path_to(s, is(1), both) || lasso(s, is(1));
        }
        default: throw std::logic_error("not a temporal operator");
        }
    }

    // A simple path through `inside` states ending in a `goal` state.
    bool path_to(std::size_t s, const std::function<bool(std::size_t)>& inside,
                 const std::function<bool(std::size_t)>& goal) const {
        std::vector<char> onPath(succ_.size(), 0);
        std::function<bool(std::size_t)> dfs = [&](std::size_t x) {
            if (goal(x)) return true;
            if (!inside(x)) return false;
            onPath[x] = 1;
            for (auto t : succ_[x])
                if (!onPath[t] && dfs(t)) return true;
            onPath[x] = 0;
            return false;
        };
        return dfs(s);
    }

    // A simple path of `inside` states closed by an edge back onto itself.
    bool lasso(std::size_t s, const std::function<bool(std::size_t)>& inside) const {
        std::vector<char> onPath(succ_.size(), 0);
        std::function<bool(std::size_t)> dfs = [&](std::size_t x) {
            if (!inside(x)) return false;
            onPath[x] = 1;
            for (auto t : succ_[x])
                if (onPath[t] || dfs(t)) return true;
            onPath[x] = 0;
            return false;
        };
        return dfs(s);
    }

    std::vector<Marking> markings_;
    std::vector<std::vector<std::size_t>> succ_;
};

bool check_net(const PTNet& net, const std::string& text) {
    auto f = to_nnf(parse_formula(text));
    return check_ctl(build_kripke(net, propositions_of(f)), f);
}

bool check_net(const ColouredNet& net, const std::string& text) {
    auto f = to_nnf(parse_formula(text));
    return check_ctl(build_kripke(net, propositions_of(f)), f);
}

// a -> a (loop), a -> b, b -> c, c -> c, where a and c satisfy p <= 0.
KripkeStructure fg_structure() {
    return make_structure({{0, 0}, {1, 0}, {0, 0}}, {{0, 1}, {2}, {2}});
}

} // namespace

TEST(CheckCtl, Example1SkeletonAndColouredNet) {
    EXPECT_TRUE(check_net(skeleton(example1()), "A F p <= 1"));
    EXPECT_FALSE(check_net(example1(), "A F p <= 1"));
    EXPECT_TRUE(check_net(example1(), "E F true"));
    EXPECT_TRUE(check_net(example1(), "A G p >= 3"));
    EXPECT_FALSE(check_net(skeleton(example1()), "A G p >= 3"));
}

TEST(CheckCtl, Fig2ReachesItsDeadlock) {
    EXPECT_TRUE(check_net(fig2(), "A F q >= 3"));
    EXPECT_TRUE(check_net(fig2(), "A G (p + q = 3)"));
    EXPECT_FALSE(check_net(fig2(), "E F q >= 4"));
    EXPECT_TRUE(check_net(fig2(), "A (p >= 1 U q >= 3)"));
}

TEST(CheckCtl, EnabledPropositions) {
    EXPECT_TRUE(check_net(skeleton(fig2()), "enabled(t) && A F !enabled(t)"));
    EXPECT_FALSE(check_net(example1(), "E F enabled(t)"));
}

TEST(CheckCtl, SatisfyingStatesAgreesAtTheInitialState) {
    auto k = fg_structure();
    auto f = parse_formula("E G p <= 0");
    auto sat = satisfying_states(k, f);
    EXPECT_EQ(sat, (std::vector<char>{1, 0, 1}));
    EXPECT_EQ(check_ctl(k, f), static_cast<bool>(sat[k.initial]));
}

TEST(CheckLtl, PersistenceIsNotStablePersistence) {
    auto k = fg_structure();
    EXPECT_TRUE(check_ctl(k, parse_formula("F G p <= 0")));
    EXPECT_TRUE(check_ctl(k, parse_formula("A F G p <= 0")));
    EXPECT_FALSE(check_ctl(k, parse_formula("A F A G p <= 0")));
    EXPECT_FALSE(check_ctl(k, parse_formula("G F p >= 1")));
    EXPECT_TRUE(check_ctl(k, parse_formula("E G F p >= 1 || E F G p <= 0")));
}

TEST(CheckLtl, ProductCapRaisesUnsupportedFormula) {
    auto k = fg_structure();
    CheckOptions o;
    o.productCap = 1;
    EXPECT_THROW(check_ctl(k, parse_formula("F G p <= 0"), o), UnsupportedFormula);
    // CTL never builds a product.
    EXPECT_FALSE(check_ctl(k, parse_formula("A F A G p <= 0"), o));
}

TEST(Oracle, FunctionalStructuresAnyFormula) {
    std::mt19937 rng(51);
    int trueCount = 0, falseCount = 0;
    for (int i = 0; i < 400; ++i) {
        auto n = pick(rng, 1, 6);
        auto markings = random_markings(rng, n);
        std::vector<std::size_t> next(n);
        std::vector<std::vector<std::size_t>> succ(n);
        for (std::size_t s = 0; s < n; ++s) succ[s] = {next[s] = pick(rng, 0, n - 1)};
        auto k = make_structure(markings, succ);
        FunctionalOracle oracle(markings, next);
        auto f = random_path_formula(rng, 4);
        bool expected = oracle.eval(f, 0);
        EXPECT_EQ(check_ctl(k, f), expected) << to_string(f);
        EXPECT_EQ(check_ctl(k, to_nnf(f)), expected) << to_string(f);
        (expected ? trueCount : falseCount)++;
    }
    EXPECT_GT(trueCount, 50);
    EXPECT_GT(falseCount, 50);
}

TEST(Oracle, BranchingStructuresCtl) {
    std::mt19937 rng(52);
    for (int i = 0; i < 400; ++i) {
        auto n = pick(rng, 1, 6);
        auto markings = random_markings(rng, n);
        std::vector<std::vector<std::size_t>> succ(n);
        for (auto& out : succ) {
            auto d = pick(rng, 1, 3);
            for (std::size_t j = 0; j < d; ++j) out.push_back(pick(rng, 0, n - 1));
        }
        auto k = make_structure(markings, succ);
        BranchingOracle oracle(markings, succ);
        auto f = random_ctl(rng, 3);
        auto sat = satisfying_states(k, f);
        for (std::size_t s = 0; s < n; ++s) EXPECT_EQ(static_cast<bool>(sat[s]), oracle.eval(f, s)) << to_string(f);
        EXPECT_EQ(check_ctl(k, to_nnf(f)), oracle.eval(f, 0)) << to_string(f);
    }
}

TEST(Oracle, NnfPreservesTruthOnNets) {
    std::mt19937 rng(53);
    for (int i = 0; i < 100; ++i) {
        auto net = random_pt_net(rng, 8);
        std::vector<std::string> names(net.places.begin(), net.places.end());
        auto f = random_formula(rng, names, FormulaShape::Any, 3);
        auto nnf = to_nnf(f);
        auto k = build_kripke(net, propositions_of(nnf));
        EXPECT_EQ(check_ctl(k, f), check_ctl(k, nnf)) << to_string(f);
        auto negated = to_nnf(Formula::unary(Op::Not, Formula::unary(Op::A, f)));
        EXPECT_NE(check_ctl(k, nnf), check_ctl(k, negated)) << to_string(f);
    }
}
