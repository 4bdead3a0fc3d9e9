#pragma once

// Hand-built nets shared by the unit tests and the acceptance runner.

#include <string>
#include <vector>

#include "skel/expr.hpp"
#include "skel/net.hpp"
#include "skel/symmetric.hpp"

namespace skel::testing {

inline BasicSort colours_rg() { return BasicSort::enumeration("RG", {"r", "g"}); }
inline BasicSort colours_rgb() { return BasicSort::enumeration("RGB", {"r", "g", "b"}); }

inline Expr eq(const std::string& a, const std::string& b) {
    return Expr::comparison(Term::var(a), CompareOp::Eq, Term::var(b));
}

// Three equal colours leave p and one of that colour lands on q. Marking {r,g,g}.
inline ColouredNet example1() {
    ColouredNet net;
    net.places.push_back({"p", ColourDomain(colours_rg()), {1, 2}});
    net.places.push_back({"q", ColourDomain(colours_rg()), {0, 0}});
    ColouredTransition t;
    t.name = "t";
    t.inputs.push_back({0, {{"x1"}, {"x2"}, {"x3"}}, 0});
    t.outputs.push_back({1, {{"y"}}, 0});
    t.hidden.push_back({"c", colours_rg()});
    t.guard.form = Expr::conjunction({eq("x1", "c"), eq("x2", "c"), eq("x3", "c"), eq("y", "c")});
    net.transitions.push_back(std::move(t));
    net.validate();
    return net;
}

// One token of each colour on p; t moves a token to q keeping its colour.
inline ColouredNet fig2() {
    ColouredNet net;
    net.places.push_back({"p", ColourDomain(colours_rgb()), {1, 1, 1}});
    net.places.push_back({"q", ColourDomain(colours_rgb()), {0, 0, 0}});
    ColouredTransition t;
    t.name = "t";
    t.inputs.push_back({0, {{"x1"}}, 0});
    t.outputs.push_back({1, {{"x2"}}, 0});
    t.guard.form = eq("x1", "x2");
    net.transitions.push_back(std::move(t));
    net.validate();
    return net;
}

// x over [1..4] on p1, y over [1..3] on p2; t1 needs y = 1, t2 needs y != 1.
inline ColouredNet fig6() {
    ColouredNet net;
    net.places.push_back({"p1", ColourDomain(BasicSort::range("X", 1, 4)), {1, 0, 0, 0}});
    net.places.push_back({"p2", ColourDomain(BasicSort::range("Y", 1, 3)), {1, 0, 0}});
    for (auto [name, op] : {std::pair{"t1", CompareOp::Eq}, std::pair{"t2", CompareOp::Ne}}) {
        ColouredTransition t;
        t.name = name;
        t.inputs.push_back({0, {{"x"}}, 0});
        t.inputs.push_back({1, {{"y"}}, 0});
        t.guard.form = Expr::comparison(Term::var("y"), op, Term::value(1));
        net.transitions.push_back(std::move(t));
    }
    net.validate();
    return net;
}

// Five dining philosophers as a P/T net: th, hl, hr, ea, fo per philosopher
// and tl, tr, rl, rr per philosopher, all weights 1.
inline PTNet philosophers(int n = 5) {
    PTNet net;
    std::vector<std::size_t> th, hl, hr, ea, fo;
    for (int i = 0; i < n; ++i) {
        auto s = std::to_string(i);
        th.push_back(net.add_place("th" + s, 1));
        hl.push_back(net.add_place("hl" + s, 0));
        hr.push_back(net.add_place("hr" + s, 0));
        ea.push_back(net.add_place("ea" + s, 0));
        fo.push_back(net.add_place("fo" + s, 1));
    }
    for (int i = 0; i < n; ++i) {
        auto s = std::to_string(i);
        auto next = static_cast<std::size_t>((i + 1) % n);
        auto tl = net.add_transition("tl" + s);
        net.add_input(th[i], tl, 1);
        net.add_input(fo[i], tl, 1);
        net.add_output(tl, hl[i], 1);
        auto tr = net.add_transition("tr" + s);
        net.add_input(hl[i], tr, 1);
        net.add_input(fo[next], tr, 1);
        net.add_output(tr, ea[i], 1);
        auto rl = net.add_transition("rl" + s);
        net.add_input(ea[i], rl, 1);
        net.add_output(rl, hr[i], 1);
        net.add_output(rl, fo[i], 1);
        auto rr = net.add_transition("rr" + s);
        net.add_input(hr[i], rr, 1);
        net.add_output(rr, fo[next], 1);
        net.add_output(rr, th[i], 1);
    }
    net.validate();
    return net;
}

// AG (!(sum hr = 4) && (sum hl = 1)) over n philosophers.
inline std::string philosophers_formula(int n = 5) {
    std::string hr, hl;
    for (int i = 0; i < n; ++i) {
        hr += (i ? " + hr" : "hr") + std::to_string(i);
        hl += (i ? " + hl" : "hl") + std::to_string(i);
    }
    return "A G (!(" + hr + " = 4) && (" + hl + " = 1))";
}

} // namespace skel::testing
