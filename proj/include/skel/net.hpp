#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "skel/expr.hpp"

namespace skel {

using Tokens = std::uint32_t;

// Token counts indexed by place. For coloured nets the places are flattened:
// all colours of place 0 first, then place 1, and so on (see colour_offsets).
using Marking = std::vector<Tokens>;

// Token counts indexed by colour.
using Multiset = std::vector<Tokens>;

inline constexpr std::size_t kDefaultUnfoldCap = std::size_t{1} << 20;

struct Arc {
    std::size_t place;
    Tokens weight;

    auto operator<=>(const Arc&) const = default;
};

struct PTNet {
    std::vector<std::string> places;
    std::vector<std::string> transitions;
    std::vector<std::vector<Arc>> pre;  // per transition, sorted by place
    std::vector<std::vector<Arc>> post; // per transition, sorted by place
    Marking initial;

    std::size_t add_place(std::string name, Tokens tokens = 0);
    std::size_t add_transition(std::string name);
    // Weights accumulate when the same arc is added twice.
    void add_input(std::size_t place, std::size_t transition, Tokens weight);
    void add_output(std::size_t transition, std::size_t place, Tokens weight);

    Tokens weight_in(std::size_t place, std::size_t transition) const;
    Tokens weight_out(std::size_t transition, std::size_t place) const;
    std::optional<std::size_t> find_place(std::string_view name) const;
    std::optional<std::size_t> find_transition(std::string_view name) const;

    // Throws std::invalid_argument on duplicate names, zero weights or
    // out-of-range indices.
    void validate() const;

    bool operator==(const PTNet&) const = default;
};

// One variable per component of the place's colour domain.
using Token = std::vector<std::string>;

struct ColouredArc {
    std::size_t place;
    std::vector<Token> tokens;
    Tokens allCopies = 0; // multiplicity of an all-colours term

    bool operator==(const ColouredArc&) const = default;
};

// Guard-only variable, existentially quantified when a mode is checked.
struct GuardVariable {
    std::string name;
    BasicSort sort;

    bool operator==(const GuardVariable&) const = default;
};

// Colour index per arc variable, in the order given by variable_layout.
struct FiringMode {
    std::vector<std::size_t> colours;

    auto operator<=>(const FiringMode&) const = default;
};

struct Guard {
    std::variant<Expr, std::vector<FiringMode>> form = Expr::truth(true);

    bool extensional() const noexcept { return form.index() == 1; }
    const Expr& expression() const { return std::get<Expr>(form); }
    const std::vector<FiringMode>& modes() const { return std::get<std::vector<FiringMode>>(form); }

    bool operator==(const Guard&) const = default;
};

struct ColouredTransition {
    std::string name;
    std::vector<ColouredArc> inputs;  // at most one arc per place, sorted by place
    std::vector<ColouredArc> outputs; // at most one arc per place, sorted by place
    std::vector<GuardVariable> hidden;
    Guard guard;
    bool assumedNonFull = false;

    bool operator==(const ColouredTransition&) const = default;
};

struct ColouredPlace {
    std::string name;
    ColourDomain domain;
    Multiset initial;

    bool operator==(const ColouredPlace&) const = default;
};

struct ColouredNet {
    std::vector<ColouredPlace> places;
    std::vector<ColouredTransition> transitions;

    std::optional<std::size_t> find_place(std::string_view name) const;
    std::optional<std::size_t> find_transition(std::string_view name) const;

    // Throws std::invalid_argument when an invariant is broken: duplicate
    // names, a variable on two arcs, an unknown guard variable, a token whose
    // arity differs from the place domain, or a bad initial marking.
    void validate() const;

    bool operator==(const ColouredNet&) const = default;
};

// Offsets of each place in a flattened coloured marking; size places+1.
std::vector<std::size_t> colour_offsets(const ColouredNet& net);
Marking initial_marking(const ColouredNet& net);

struct VariableSlot {
    enum class Role { Input, Output, Hidden };

    std::string name;
    const BasicSort* sort = nullptr;
    Role role = Role::Input;
    std::size_t arc = 0;       // index into inputs or outputs
    std::size_t token = 0;     // position of the token on the arc
    std::size_t component = 0; // component of the token tuple
};

// Arc variables (inputs first, then outputs, in arc and token order) followed
// by the hidden variables. Points into the net, which must outlive the result.
std::vector<VariableSlot> variable_layout(const ColouredNet& net, std::size_t transition);
std::size_t arc_variable_count(const ColouredNet& net, std::size_t transition);

bool satisfies(const ColouredNet& net, std::size_t transition, const FiringMode& mode);

// All firing modes of a transition in lexicographic order. Extensional guards
// return their listed modes. Throws UnfoldCapExceeded past `cap` modes.
std::vector<FiringMode> firing_modes(const ColouredNet& net, std::size_t transition,
                                     std::size_t cap = kDefaultUnfoldCap);

std::string mode_name(const ColouredNet& net, std::size_t transition, const FiringMode& mode);

struct Unfolding {
    PTNet net;
    std::vector<std::pair<std::size_t, std::size_t>> placeOrigin; // (place, colour)
    std::vector<std::pair<std::size_t, FiringMode>> transitionOrigin;
};

Unfolding unfold(const ColouredNet& net, std::size_t cap = kDefaultUnfoldCap);
PTNet skeleton(const ColouredNet& net);

struct NetMorphism {
    std::vector<std::size_t> placeMap;
    std::vector<std::size_t> transitionMap;
    std::size_t targetPlaces = 0;
    std::size_t targetTransitions = 0;
};

NetMorphism induced_morphism(const ColouredNet& net, const Unfolding& unfolding);

// Sums source counts per target place. Throws std::invalid_argument when the
// marking does not range over the morphism's source places.
Marking map_marking(const NetMorphism& morphism, const Marking& m);

} // namespace skel
