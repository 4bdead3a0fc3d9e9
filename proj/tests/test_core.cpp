#include <gtest/gtest.h>

#include <set>

#include "random_nets.hpp"
#include "skel/error.hpp"
#include "skel/statespace.hpp"
#include "support.hpp"

using namespace skel;
using namespace skel::testing;

TEST(Unfold, Fig2HasSixPlacesThreeTransitions) {
    auto u = unfold(fig2());
    EXPECT_EQ(u.net.places, (std::vector<std::string>{"p.r", "p.g", "p.b", "q.r", "q.g", "q.b"}));
    EXPECT_EQ(u.net.transitions, (std::vector<std::string>{"t.r_r", "t.g_g", "t.b_b"}));
    EXPECT_EQ(u.net.initial, (Marking{1, 1, 1, 0, 0, 0}));
    for (std::size_t t = 0; t < 3; ++t) {
        EXPECT_EQ(u.net.pre[t], (std::vector<Arc>{{t, 1}}));
        EXPECT_EQ(u.net.post[t], (std::vector<Arc>{{3 + t, 1}}));
        EXPECT_EQ(u.transitionOrigin[t].first, 0u);
    }
}

TEST(Unfold, Example1ModesMatchBruteForce) {
    // Every assignment of x1 x2 x3 y c over {r, g}; keep the arc part of
    // those satisfying x1 = x2 = x3 = y = c.
    std::set<std::vector<std::size_t>> modes;
    for (unsigned bits = 0; bits < 32; ++bits) {
        std::vector<std::size_t> v;
        for (int i = 0; i < 5; ++i) v.push_back((bits >> i) & 1u);
        if (v[0] == v[4] && v[1] == v[4] && v[2] == v[4] && v[3] == v[4]) modes.insert({v[0], v[1], v[2], v[3]});
    }
    auto u = unfold(example1());
    EXPECT_EQ(u.net.places.size(), 4u);
    ASSERT_EQ(u.net.transitions.size(), modes.size());
    for (std::size_t t = 0; t < u.net.transitions.size(); ++t) {
        ASSERT_EQ(u.net.pre[t].size(), 1u);
        EXPECT_EQ(u.net.pre[t][0].weight, 3u);
        EXPECT_EQ(u.net.post[t].size(), 1u);
        // Consumes from [p,c] and produces on [q,c].
        EXPECT_EQ(u.net.post[t][0].place, u.net.pre[t][0].place + 2);
    }
}

TEST(Unfold, SingletonDomainsMatchSkeleton) {
    ColouredNet net;
    net.places.push_back({"a", ColourDomain(BasicSort::dot()), {2}});
    net.places.push_back({"b", ColourDomain(BasicSort::dot()), {0}});
    ColouredTransition t;
    t.name = "t";
    t.inputs.push_back({0, {{"x"}, {"y"}}, 0});
    t.outputs.push_back({1, {{"z"}}, 0});
    net.transitions.push_back(t);
    net.validate();
    auto u = unfold(net);
    auto s = skeleton(net);
    EXPECT_EQ(u.net.pre, s.pre);
    EXPECT_EQ(u.net.post, s.post);
    EXPECT_EQ(u.net.initial, s.initial);
    auto mu = induced_morphism(net, u);
    EXPECT_EQ(mu.placeMap, (std::vector<std::size_t>{0, 1}));
    EXPECT_EQ(mu.transitionMap, (std::vector<std::size_t>{0}));
}

TEST(Unfold, CapIsReported) {
    try {
        unfold(fig2(), 2);
        FAIL();
    } catch (const UnfoldCapExceeded& e) {
        EXPECT_EQ(e.cap(), 2u);
    }
}

TEST(Unfold, Deterministic) {
    std::mt19937 rng(5);
    for (int i = 0; i < 20; ++i) {
        auto net = random_coloured_net(rng, {});
        auto a = unfold(net), b = unfold(net);
        EXPECT_EQ(a.net, b.net);
        EXPECT_EQ(a.transitionOrigin, b.transitionOrigin);
    }
}

TEST(Skeleton, Fig2AndExample1) {
    auto s = skeleton(fig2());
    EXPECT_EQ(s.initial, (Marking{3, 0}));
    EXPECT_EQ(s.weight_in(0, 0), 1u);
    EXPECT_EQ(s.weight_out(0, 1), 1u);
    auto e = skeleton(example1());
    EXPECT_EQ(e.initial, (Marking{3, 0}));
    EXPECT_EQ(e.weight_in(0, 0), 3u);
    EXPECT_EQ(e.weight_out(0, 1), 1u);
}

TEST(Skeleton, EmptyInitialMarking) {
    auto net = fig2();
    net.places[0].initial = {0, 0, 0};
    EXPECT_EQ(skeleton(net).initial, (Marking{0, 0}));
}

TEST(Morphism, Fig2MapsEveryTransitionToT) {
    auto net = fig2();
    auto u = unfold(net);
    auto mu = induced_morphism(net, u);
    EXPECT_EQ(mu.transitionMap, (std::vector<std::size_t>{0, 0, 0}));
    EXPECT_EQ(mu.placeMap, (std::vector<std::size_t>{0, 0, 0, 1, 1, 1}));
    EXPECT_EQ(map_marking(mu, u.net.initial), (Marking{3, 0}));
    EXPECT_EQ(map_marking(mu, Marking(6, 0)), (Marking{0, 0}));
    EXPECT_THROW(map_marking(mu, Marking(5, 0)), std::invalid_argument);
}

TEST(Morphism, Example1Marking) {
    auto net = example1();
    auto u = unfold(net);
    EXPECT_EQ(map_marking(induced_morphism(net, u), u.net.initial), (Marking{3, 0}));
}

TEST(Morphism, ArcWeightsSumUnderMu) {
    std::mt19937 rng(8);
    for (int i = 0; i < 100; ++i) {
        auto net = random_coloured_net(rng, {});
        auto u = unfold(net);
        auto s = skeleton(net);
        auto mu = induced_morphism(net, u);
        for (std::size_t t = 0; t < u.net.transitions.size(); ++t) {
            auto st = mu.transitionMap[t];
            std::vector<Tokens> in(s.places.size()), out(s.places.size());
            for (const auto& a : u.net.pre[t]) in[mu.placeMap[a.place]] += a.weight;
            for (const auto& a : u.net.post[t]) out[mu.placeMap[a.place]] += a.weight;
            for (std::size_t p = 0; p < s.places.size(); ++p) {
                EXPECT_EQ(in[p], s.weight_in(p, st));
                EXPECT_EQ(out[p], s.weight_out(st, p));
            }
        }
        EXPECT_EQ(map_marking(mu, u.net.initial), s.initial);
    }
}

TEST(Morphism, UnfoldingEdgesMapToSkeletonEdges) {
    std::mt19937 rng(9);
    int edges = 0;
    for (int i = 0; i < 100; ++i) {
        auto net = random_coloured_net(rng, {});
        auto u = unfold(net);
        auto s = skeleton(net);
        auto mu = induced_morphism(net, u);
        auto k = build_kripke(u.net, {});
        for (std::size_t q = 0; q < k.size(); ++q) {
            auto m = k.marking(q);
            auto image = map_marking(mu, Marking(m.begin(), m.end()));
            for (const auto& e : k.successors(q)) {
                if (e.action == 0) continue;
                auto t = u.net.find_transition(k.actions[e.action]);
                ASSERT_TRUE(t);
                auto st = mu.transitionMap[*t];
                ASSERT_TRUE(is_enabled(s, image, st));
                auto target = k.marking(e.target);
                EXPECT_EQ(fire(s, image, st), map_marking(mu, Marking(target.begin(), target.end())));
                ++edges;
            }
        }
    }
    EXPECT_GT(edges, 100);
}

TEST(Validate, RejectsBrokenNets) {
    auto net = example1();
    net.transitions[0].outputs[0].tokens[0][0] = "x1";
    EXPECT_THROW(net.validate(), std::invalid_argument);
    net = example1();
    net.places[0].initial = {1};
    EXPECT_THROW(net.validate(), std::invalid_argument);
    net = example1();
    net.transitions[0].guard.form = eq("x1", "nowhere");
    EXPECT_THROW(net.validate(), std::invalid_argument);
    PTNet pt;
    pt.add_place("a");
    pt.add_transition("a");
    EXPECT_THROW(pt.validate(), std::invalid_argument);
}

TEST(Terms, ShiftsWrapWithinTheSort) {
    auto sort = BasicSort::range("X", 1, 3);
    Valuation at3 = [&](std::string_view) { return std::optional<VariableValue>(VariableValue{3, 1, 3}); };
    EXPECT_EQ(evaluate(Term::var("x", 1), at3), 1);
    EXPECT_EQ(evaluate(Term::var("x", -3), at3), 3);
    EXPECT_EQ(evaluate(Term::value(2), at3), 2);
    EXPECT_EQ(sort.value(0), 1);
    EXPECT_EQ(*sort.index_of("3"), 2u);
}

TEST(Domains, EncodeDecode) {
    ColourDomain d(std::vector<BasicSort>{colours_rg(), colours_rgb()});
    EXPECT_EQ(d.size(), 6u);
    for (std::size_t c = 0; c < d.size(); ++c) EXPECT_EQ(d.encode(d.decode(c)), c);
    EXPECT_EQ(d.decode(1), (std::vector<std::size_t>{0, 1}));
    EXPECT_EQ(d.colour_name(5), "g_b");
    EXPECT_EQ(d.find_colour("g_b"), 5u);
}
