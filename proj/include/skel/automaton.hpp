#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "skel/expr.hpp"

namespace skel {

struct Interval {
    int lo;
    int hi;

    bool contains(int v) const noexcept { return lo <= v && v <= hi; }
    auto operator<=>(const Interval&) const = default;
};

// A variable read by an automaton. `rank` fixes the global reading order;
// automata over different variable sets are aligned by rank.
struct AutomatonVariable {
    std::string name;
    int lo = 0;
    int hi = 0;
    std::size_t rank = 0;

    bool operator==(const AutomatonVariable&) const = default;
};

struct AutomatonEdge {
    Interval label;
    std::uint32_t target;

    bool operator==(const AutomatonEdge&) const = default;
};

struct AutomatonState {
    std::uint32_t level = 0; // number of variables read before this state
    bool final = false;
    std::optional<int> value; // V, for term automata
    std::vector<AutomatonEdge> edges; // sorted, disjoint, covering the domain

    bool operator==(const AutomatonState&) const = default;
};

// Deterministic, complete, levelled automaton: a state at level i reads
// variables[i]; accepting states sit at the last level.
struct ModeAutomaton {
    std::vector<AutomatonVariable> variables; // sorted by rank
    std::vector<AutomatonState> states;
    std::uint32_t initial = 0;

    std::size_t levels() const noexcept { return variables.size() + 1; }
    // Final state reached by reading `values` (one per variable).
    std::uint32_t run(std::span<const int> values) const;
    bool accepts(std::span<const int> values) const;
    std::size_t states_at_level(std::size_t level) const;

    // Throws std::logic_error when determinism, completeness or levelling fails.
    void check_invariants() const;
};

// Accepts everything (or nothing) over the given variables.
ModeAutomaton constant_automaton(std::vector<AutomatonVariable> variables, bool accept);

// `variable` must describe the term's variable; ignored for constants.
ModeAutomaton term_automaton(const Term& term, const AutomatonVariable& variable);

// Cylinder extension by a variable not yet read.
ModeAutomaton insert_variable(const ModeAutomaton& a, const AutomatonVariable& variable);

std::pair<ModeAutomaton, ModeAutomaton> harmonize(const ModeAutomaton& a, const ModeAutomaton& b);

struct Combiner {
    enum class Kind { Compare, And, Or };
    Kind kind = Kind::And;
    CompareOp op = CompareOp::Eq;

    static Combiner comparison(CompareOp op) { return {Kind::Compare, op}; }
    static Combiner conjunction() { return {Kind::And, CompareOp::Eq}; }
    static Combiner disjunction() { return {Kind::Or, CompareOp::Eq}; }
};

// Reachable product. Both operands must read the same variables; throws
// std::invalid_argument otherwise.
ModeAutomaton product(const ModeAutomaton& a, const ModeAutomaton& b, Combiner combiner);

// Level-wise minimization; merges adjacent edges with the same target.
ModeAutomaton minimize(const ModeAutomaton& a);

// Minimized automaton of a guard expression over the variables it mentions.
ModeAutomaton expression_automaton(const Expr& e, const std::map<std::string, AutomatonVariable>& variables);

// Keeps the first `keep` variables; states at that level accept when some
// accepting state is reachable from them.
ModeAutomaton project_prefix(const ModeAutomaton& a, std::size_t keep);

// Accepts exactly the listed value sequences (minimized).
ModeAutomaton sequence_automaton(std::vector<AutomatonVariable> variables,
                                 const std::vector<std::vector<int>>& accepted);

bool is_universal(const ModeAutomaton& a);
bool is_empty(const ModeAutomaton& a);

std::string to_dot(const ModeAutomaton& a, const std::string& name = "automaton");

} // namespace skel
