#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "skel/net.hpp"

namespace skel {

struct LinearTerm {
    std::int64_t coefficient;
    std::string place;

    auto operator<=>(const LinearTerm&) const = default;
};

// sum(coefficient * place) <= bound. Canonical form: terms sorted by place,
// no repeated place, no zero coefficient.
struct AtomicProposition {
    std::vector<LinearTerm> terms;
    std::int64_t bound = 0;

    // Canonicalizes; the result may have no terms (a constant comparison).
    static AtomicProposition make(std::vector<LinearTerm> terms, std::int64_t bound);

    std::strong_ordering operator<=>(const AtomicProposition&) const = default;
};

// The complement over the integers: -sum <= -bound-1.
AtomicProposition negate(const AtomicProposition& a);

struct Formula {
    enum class Op { True, False, Atom, Enabled, Not, And, Or, X, F, G, U, W, R, A, E };

    Op op = Op::True;
    AtomicProposition atom;  // Op::Atom
    std::string transition;  // Op::Enabled
    std::vector<Formula> args;

    static Formula constant(bool value);
    static Formula proposition(AtomicProposition a);
    static Formula enabled(std::string transition);
    static Formula unary(Op op, Formula f);
    static Formula binary(Op op, Formula lhs, Formula rhs);
    static Formula conjunction(std::vector<Formula> parts);
    static Formula disjunction(std::vector<Formula> parts);

    bool is_literal() const noexcept;

    std::strong_ordering operator<=>(const Formula&) const = default;
};

bool is_temporal(Formula::Op op) noexcept;
bool is_path_quantifier(Formula::Op op) noexcept;

// Grammar (whitespace-insensitive):
//   formula  := or
//   or       := and ('||' and)*
//   and      := binary ('&&' binary)*
//   binary   := unary (('U' | 'W' | 'R') binary)?
//   unary    := ('!' | 'X' | 'F' | 'G' | 'A' | 'E') unary | primary
//   primary  := '(' formula ')' | 'true' | 'false' | 'enabled' '(' name ')'
//             | linear cmp linear
//   linear   := ['-'] summand (('+' | '-') summand)*
//   summand  := int | [int '*'] name
//   cmp      := '<=' | '<' | '>=' | '>' | '=' | '!='
// Names are identifiers ([A-Za-z_][A-Za-z0-9_.]*) or double-quoted strings;
// the keywords X F G U W R A E must be quoted when used as place names.
Formula parse_formula(std::string_view text);

std::string to_string(const AtomicProposition& a);
std::string to_string(const Formula& f);

Formula to_nnf(const Formula& f);

struct FragmentReport {
    bool isLTL = false;
    bool isACTLstar = false;
    bool isCTL = false;
    bool isACTL = false;
    bool isXFree = false;
    bool isSafety = false;

    bool operator==(const FragmentReport&) const = default;
};

// Expects NNF.
FragmentReport classify(const Formula& f);

// True when no temporal operator occurs.
bool is_trivial(const Formula& f);

// A formula whose temporal operators all sit directly below A or E.
bool is_state_formula(const Formula& f);

// Distinct proposition leaves (Atom and Enabled). An atom and its negation
// count once; the first one seen is kept.
std::vector<Formula> propositions_of(const Formula& f);
std::vector<AtomicProposition> atoms_of(const Formula& f);
std::vector<std::string> enabled_transitions_of(const Formula& f);

bool eval_ap(const AtomicProposition& a, const PTNet& net, const Marking& m);
bool eval_ap(const AtomicProposition& a, const ColouredNet& net, const Marking& m);

// Replaces each place p by the sum of its unfolded places "p.c".
AtomicProposition unfold_ap(const AtomicProposition& a, const ColouredNet& net);
Formula unfold_props(const Formula& f, const ColouredNet& net);

// Applies `rewrite` to every atom.
template <class F>
Formula map_atoms(const Formula& f, F&& rewrite) {
    Formula out = f;
    if (f.op == Formula::Op::Atom) {
        out.atom = rewrite(f.atom);
        if (out.atom.terms.empty()) return Formula::constant(0 <= out.atom.bound);
        return out;
    }
    for (auto& a : out.args) a = map_atoms(a, rewrite);
    return out;
}

} // namespace skel
