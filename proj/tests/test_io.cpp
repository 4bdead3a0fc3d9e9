#include <gtest/gtest.h>

#include "random_nets.hpp"
#include "skel/error.hpp"
#include "skel/io.hpp"
#include "support.hpp"

using namespace skel;
using namespace skel::testing;

namespace {

std::string fixture(const std::string& name) { return std::string(SKEL_NETS_DIR) + "/" + name; }

template <class Net>
Net as(const AnyNet& any) {
    EXPECT_TRUE(std::holds_alternative<Net>(any));
    return std::get<Net>(any);
}

const char* kMinimalPt = R"(<?xml version="1.0"?>
<pnml xmlns="http://www.pnml.org/version-2009/grammar/pnml">
  <net id="n" type="http://www.pnml.org/version-2009/grammar/ptnet">
    <page id="pg">
      <place id="p"><initialMarking><text>3</text></initialMarking></place>
    </page>
  </net>
</pnml>)";

const char* kAllTerm = R"(<?xml version="1.0"?>
<pnml xmlns="http://www.pnml.org/version-2009/grammar/pnml">
  <net id="n" type="http://www.pnml.org/version-2009/grammar/symmetricnet">
    <declaration><structure><declarations>
      <namedsort id="C" name="C"><finiteenumeration><feconstant id="a" name="a"/><feconstant id="b" name="b"/></finiteenumeration></namedsort>
    </declarations></structure></declaration>
    <page id="pg">
      <place id="p"><type><structure><usersort declaration="C"/></structure></type>
        <hlinitialMarking><structure><all><usersort declaration="C"/></all></structure></hlinitialMarking></place>
      <place id="q"><type><structure><usersort declaration="C"/></structure></type></place>
      <transition id="t"/>
      <arc id="a1" source="p" target="t"><hlinscription><structure><all><usersort declaration="C"/></all></structure></hlinscription></arc>
      <arc id="a2" source="t" target="q"><hlinscription><structure><all><usersort declaration="C"/></all></structure></hlinscription></arc>
    </page>
  </net>
</pnml>)";

} // namespace

TEST(TextFormat, PtRoundTrip) {
    std::mt19937 rng(11);
    for (int i = 0; i < 200; ++i) {
        auto net = random_pt_net(rng);
        auto text = print_net(net);
        EXPECT_EQ(as<PTNet>(parse_net(text)), net) << text;
    }
}

TEST(TextFormat, ColouredRoundTrip) {
    std::mt19937 rng(12);
    for (int i = 0; i < 200; ++i) {
        auto net = random_coloured_net(rng, {});
        auto text = print_net(net);
        EXPECT_EQ(as<ColouredNet>(parse_net(text)), net) << text;
    }
}

TEST(TextFormat, RoundTripOfHandBuiltNets) {
    for (const auto& net : {example1(), fig2(), fig6()}) EXPECT_EQ(as<ColouredNet>(parse_net(print_net(net))), net);
    EXPECT_EQ(as<PTNet>(parse_net(print_net(philosophers()))), philosophers());
}

TEST(TextFormat, ProductsAllAndModes) {
    ColouredNet net;
    auto rg = colours_rg();
    auto x = BasicSort::range("X", -1, 1);
    ColourDomain pair(std::vector<BasicSort>{rg, x});
    Multiset m(pair.size(), 0);
    m[pair.encode(std::vector<std::size_t>{1, 2})] = 2;
    net.places.push_back({"pair", pair, m});
    net.places.push_back({"odd name", ColourDomain(rg), {1, 0}});
    ColouredTransition t;
    t.name = "t";
    t.inputs.push_back({0, {{"a", "b"}}, 0});
    t.outputs.push_back({1, {{"c"}}, 2});
    t.assumedNonFull = true;
    t.guard.form = std::vector<FiringMode>{{{1, 2, 0}}, {{0, 0, 1}}};
    net.transitions.push_back(t);
    ColouredTransition u;
    u.name = "all";
    u.inputs.push_back({1, {{"z"}}, 0});
    u.hidden.push_back({"h", x});
    u.guard.form = Expr::comparison(Term::var("z", 1), CompareOp::Le, Term::var("h"));
    net.transitions.push_back(u);
    ColouredTransition w;
    w.name = "w";
    w.guard.form = std::vector<FiringMode>{};
    net.transitions.push_back(w);
    net.validate();
    auto text = print_net(net);
    EXPECT_NE(text.find("mode g 1 r"), std::string::npos) << text;
    EXPECT_EQ(as<ColouredNet>(parse_net(text)), net) << text;
}

TEST(TextFormat, SortNameConflictIsRejected) {
    ColouredNet net;
    net.places.push_back({"p", ColourDomain(BasicSort::range("S", 0, 1)), {0, 0}});
    net.places.push_back({"q", ColourDomain(BasicSort::range("S", 0, 2)), {0, 0, 0}});
    EXPECT_THROW(print_net(net), std::invalid_argument);
}

TEST(TextFormat, EmptyNet) {
    EXPECT_EQ(as<PTNet>(parse_net("")), PTNet{});
    EXPECT_EQ(as<PTNet>(parse_net("# nothing here\n\n")), PTNet{});
    EXPECT_EQ(as<ColouredNet>(parse_net("net coloured\n")), ColouredNet{});
}

TEST(TextFormat, DiagnosticsCarryLineAndColumn) {
    try {
        parse_net("net coloured\nsort RG = enum { r, g }\nplace p : Missing\n");
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 3u);
        EXPECT_EQ(e.column(), 11u);
    }
    try {
        parse_net("net pt\nplace p\ntransition t\n  in p + q\n");
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 4u);
        EXPECT_EQ(e.column(), 10u);
    }
    EXPECT_THROW(parse_net("net pt\nplace p = x\n"), ParseError);
    EXPECT_THROW(parse_net("net pt\nplace p\nplace p\n"), ParseError);
    EXPECT_THROW(parse_net("place p\n"), ParseError);
    EXPECT_THROW(parse_net("net coloured\nsort S = enum { a }\nsort T = enum { a, b }\nplace p : S = 1'@a\n"),
                 ParseError);
}

TEST(TextFormat, ConstantsAndInscriptionSums) {
    auto net = as<ColouredNet>(parse_net(R"(net coloured
sort RG = enum { r, g }
place p : RG = 2'r + g
place q : RG
transition t
  in p : 2'x
  out q : x++ + @g
)"));
    ASSERT_EQ(net.transitions.size(), 1u);
    auto u = unfold(net);
    // x = r puts g twice on q. x = g puts r and g, bound to the two output
    // variables in either order.
    ASSERT_EQ(u.net.transitions.size(), 3u);
    std::vector<std::size_t> arcs;
    for (std::size_t t = 0; t < 3; ++t) {
        Tokens total = 0;
        for (const auto& a : u.net.post[t]) total += a.weight;
        EXPECT_EQ(total, 2u);
        arcs.push_back(u.net.post[t].size());
    }
    std::sort(arcs.begin(), arcs.end());
    EXPECT_EQ(arcs, (std::vector<std::size_t>{1, 2, 2}));
}

TEST(Fixtures, TextualMatchesHandBuilt) {
    EXPECT_EQ(as<ColouredNet>(load_net(fixture("fig1.net"))), example1());
    EXPECT_EQ(as<ColouredNet>(load_net(fixture("fig2.net"))), fig2());
    EXPECT_EQ(as<ColouredNet>(load_net(fixture("fig6.net"))), fig6());
    const auto& phil = as<PTNet>(load_net(fixture("philosophers5.net")));
    EXPECT_EQ(phil.places.size(), 25u);
    EXPECT_EQ(phil.transitions.size(), 20u);
    EXPECT_EQ(phil, philosophers());
}

TEST(Fixtures, PnmlMatchesTextual) {
    auto pnml = as<ColouredNet>(load_net(fixture("fig2.pnml")));
    EXPECT_EQ(pnml, as<ColouredNet>(load_net(fixture("fig2.net"))));
    auto u = unfold(pnml);
    EXPECT_EQ(u.net.places.size(), 6u);
    EXPECT_EQ(u.net.transitions.size(), 3u);
}

TEST(Pnml, MinimalPtNet) {
    const auto& net = as<PTNet>(parse_pnml(kMinimalPt));
    ASSERT_EQ(net.places.size(), 1u);
    EXPECT_EQ(net.places[0], "p");
    EXPECT_EQ(net.initial[0], 3u);
}

TEST(Pnml, AllTermFlagsTransition) {
    const auto& net = as<ColouredNet>(parse_pnml(kAllTerm));
    ASSERT_EQ(net.transitions.size(), 1u);
    EXPECT_TRUE(net.transitions[0].assumedNonFull);
    EXPECT_EQ(net.transitions[0].inputs[0].allCopies, 1u);
    EXPECT_EQ(net.places[0].initial, (Multiset{1, 1}));
}

TEST(Pnml, UnsupportedConstructNamesElementAndPath) {
    std::string xml = kAllTerm;
    auto at = xml.find("<all>");
    xml.replace(at, 5, "<partition>");
    xml.replace(xml.find("</all>", at), 6, "</partition>");
    try {
        parse_pnml(xml);
        FAIL();
    } catch (const UnsupportedConstruct& e) {
        std::string what = e.what();
        EXPECT_NE(what.find("'partition'"), std::string::npos) << what;
        EXPECT_NE(what.find("place[p]/hlinitialMarking"), std::string::npos) << what;
    }
    EXPECT_THROW(parse_pnml("<pnml><net"), ParseError);
    EXPECT_THROW(parse_pnml("<other/>"), ParseError);
}

TEST(Pnml, PtRoundTrip) {
    std::mt19937 rng(21);
    for (int i = 0; i < 100; ++i) {
        auto net = random_pt_net(rng);
        EXPECT_EQ(as<PTNet>(parse_pnml(write_pnml(net))), net);
    }
}

TEST(Pnml, ColouredRoundTrip) {
    std::mt19937 rng(22);
    RandomNetOptions o;
    o.hiddenVariables = false; // unreferenced declarations are not attached to a transition
    for (int i = 0; i < 100; ++i) {
        auto net = random_coloured_net(rng, o);
        auto xml = write_pnml(net);
        EXPECT_EQ(as<ColouredNet>(parse_pnml(xml)), net) << xml;
    }
    for (const auto& net : {example1(), fig2(), fig6()}) EXPECT_EQ(as<ColouredNet>(parse_pnml(write_pnml(net))), net);
}

TEST(Pnml, ExtensionalGuardBecomesDisjunction) {
    auto net = fig2();
    net.transitions[0].guard.form = std::vector<FiringMode>{{{0, 0}}, {{2, 1}}};
    auto back = as<ColouredNet>(parse_pnml(write_pnml(net)));
    EXPECT_EQ(firing_modes(back, 0), net.transitions[0].guard.modes());
}

TEST(Formulas, FileIdsAreLineNumbers) {
    auto entries = parse_formula_file("# header\n\nA G p <= 1   # trailing\n  E F q >= 2\n");
    ASSERT_EQ(entries.size(), 2u);
    EXPECT_EQ(entries[0].id, 3u);
    EXPECT_EQ(entries[0].text, "A G p <= 1");
    EXPECT_EQ(entries[1].id, 4u);
    EXPECT_EQ(entries[1].formula, parse_formula("E F q >= 2"));
}

TEST(Formulas, AtMostSixteen) {
    std::string text;
    for (int i = 0; i < 16; ++i) text += "A G p <= " + std::to_string(i) + "\n";
    EXPECT_EQ(parse_formula_file(text).size(), 16u);
    text += "A G p <= 99\n";
    try {
        parse_formula_file(text);
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 17u);
    }
}

TEST(Formulas, SyntaxErrorReportsLine) {
    try {
        parse_formula_file("A G p <= 1\nA G (p <= \n");
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 2u);
    }
}

TEST(Output, MachineRecordsAreDeterministic) {
    auto net = as<ColouredNet>(load_net(fixture("fig1.net")));
    auto formulas = parse_formula_file(read_file(fixture("fig1.formulas")));
    ASSERT_EQ(formulas.size(), 1u);
    std::string first, second;
    for (auto* out : {&first, &second})
        for (const auto& f : formulas) *out += machine_record(f.id, verify(net, f.formula)) + "\n";
    EXPECT_EQ(first, second);
    EXPECT_EQ(first, "2\tFALSE\tdirect\t1\t-\n");
}

TEST(Output, DotMarksSilentEdges) {
    auto k = build_kripke(skeleton(example1()), {});
    auto dot = kripke_to_dot(k, "S");
    EXPECT_EQ(dot.rfind("digraph \"S\" {", 0), 0u);
    // The skeleton runs 3 -> 0 tokens on p, then deadlocks.
    EXPECT_NE(dot.find("style=dashed"), std::string::npos) << dot;
    EXPECT_NE(dot.find("-> s1 [label=\"t\"]"), std::string::npos) << dot;
}
