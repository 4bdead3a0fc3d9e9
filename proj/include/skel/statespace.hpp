#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <stop_token>
#include <string>
#include <vector>

#include "skel/formula.hpp"
#include "skel/net.hpp"

namespace skel {

inline constexpr std::size_t kDefaultStateCap = 1'000'000;

struct ExplorationLimits {
    std::size_t stateCap = kDefaultStateCap;
    std::optional<std::chrono::steady_clock::time_point> deadline;
    std::stop_token stop;
};

using MarkingView = std::span<const Tokens>;
using PropositionTest = std::function<bool(MarkingView)>;

// Operational semantics seen by the explorer. Action ids are small integers
// chosen by the implementation; names are resolved after exploration.
class TransitionSystem {
public:
    using Emit = std::function<void(std::size_t action, MarkingView next)>;

    virtual ~TransitionSystem() = default;

    virtual std::size_t width() const = 0;
    virtual Marking initial() const = 0;
    virtual void successors(MarkingView m, const Emit& emit) const = 0;
    virtual std::size_t action_count() const = 0;
    virtual std::string action_name(std::size_t action) const = 0;
    virtual bool silent(std::size_t /*action*/) const { return false; }

    // Marking indices whose sum is the token count of the named place.
    virtual std::vector<std::size_t> place_indices(const std::string& place) const = 0;
    virtual PropositionTest enabled_test(const std::string& transition) const = 0;

    // Atoms and enabled-tests; other formulas are rejected.
    PropositionTest compile(const Formula& proposition) const;
};

class PTSystem : public TransitionSystem {
public:
    explicit PTSystem(const PTNet& net);
    // Place groups override how atom places are read (name to indices);
    // silent marks transitions labelled as silent actions.
    PTSystem(const PTNet& net, std::map<std::string, std::vector<std::size_t>> groups,
             std::vector<char> silent);

    std::size_t width() const override { return net_.places.size(); }
    Marking initial() const override { return net_.initial; }
    void successors(MarkingView m, const Emit& emit) const override;
    std::size_t action_count() const override { return net_.transitions.size(); }
    std::string action_name(std::size_t action) const override { return net_.transitions[action]; }
    bool silent(std::size_t action) const override;
    std::vector<std::size_t> place_indices(const std::string& place) const override;
    PropositionTest enabled_test(const std::string& transition) const override;

private:
    const PTNet& net_;
    std::map<std::string, std::vector<std::size_t>> groups_;
    std::vector<char> silent_;
};

class ColouredSystem : public TransitionSystem {
public:
    explicit ColouredSystem(const ColouredNet& net);
    ~ColouredSystem() override;

    std::size_t width() const override;
    Marking initial() const override;
    void successors(MarkingView m, const Emit& emit) const override;
    std::size_t action_count() const override;
    std::string action_name(std::size_t action) const override;
    std::vector<std::size_t> place_indices(const std::string& place) const override;
    PropositionTest enabled_test(const std::string& transition) const override;

    // Enabled (transition, mode) pairs in the marking.
    std::vector<std::pair<std::size_t, FiringMode>> enabled_modes(MarkingView m) const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

struct KripkeEdge {
    std::uint32_t action; // 0 is the deadlock self-loop
    std::uint32_t target;
};

struct KripkeStructure {
    std::size_t width = 0;
    std::vector<Tokens> markings; // state-major, `width` entries per state
    std::vector<std::size_t> edgeOffsets;
    std::vector<KripkeEdge> edges;
    std::vector<std::string> actions; // actions[0] == "tau"
    std::vector<char> silentActions;
    std::vector<Formula> propositions;
    std::vector<char> labels; // state-major, one entry per proposition
    std::vector<char> deadlock;
    std::size_t initial = 0;

    std::size_t size() const noexcept { return deadlock.size(); }
    MarkingView marking(std::size_t s) const { return {markings.data() + s * width, width}; }
    std::span<const KripkeEdge> successors(std::size_t s) const {
        return {edges.data() + edgeOffsets[s], edgeOffsets[s + 1] - edgeOffsets[s]};
    }
    bool label(std::size_t s, std::size_t proposition) const {
        return labels[s * propositions.size() + proposition] != 0;
    }
    std::optional<std::size_t> find(MarkingView m) const;
    std::vector<std::vector<std::size_t>> predecessors() const;
};

// Breadth-first exploration with silent self-loops added at deadlocks.
// Throws StateCapExceeded, or Interrupted on deadline or stop request.
KripkeStructure build_kripke(const TransitionSystem& system, const std::vector<Formula>& propositions,
                             const ExplorationLimits& limits = {});
KripkeStructure build_kripke(const PTNet& net, const std::vector<Formula>& propositions,
                             const ExplorationLimits& limits = {});
KripkeStructure build_kripke(const ColouredNet& net, const std::vector<Formula>& propositions,
                             const ExplorationLimits& limits = {});

std::vector<std::size_t> deadlocks(const KripkeStructure& k);

std::vector<std::size_t> enabled(const PTNet& net, const Marking& m);
bool is_enabled(const PTNet& net, const Marking& m, std::size_t transition);
// Precondition: the transition is enabled.
Marking fire(const PTNet& net, const Marking& m, std::size_t transition);

std::vector<std::pair<std::size_t, FiringMode>> coloured_enabled(const ColouredNet& net, const Marking& m);
// Precondition: the mode is enabled.
Marking coloured_fire(const ColouredNet& net, const Marking& m, std::size_t transition,
                      const FiringMode& mode);

// Pairs (concrete state, abstract state). The relation oracles below are
// exhaustive and intended for small structures.
struct StateRelation {
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
};

// Relates each concrete state to the abstract state holding image(marking);
// concrete states whose image is not reachable in `abstract` stay unrelated.
StateRelation relate_by_map(const KripkeStructure& concrete, const KripkeStructure& abstract,
                            const std::function<Marking(MarkingView)>& image);

// Relates q and r whenever concreteKey(q) == abstractKey(r).
StateRelation relate_by_key(const KripkeStructure& concrete, const KripkeStructure& abstract,
                            const std::function<Marking(MarkingView)>& concreteKey,
                            const std::function<Marking(MarkingView)>& abstractKey);

// Labels are compared position-wise, so both structures must be built from
// the same proposition list. Only abstract states in the image of the
// relation are checked.
bool check_abstraction(const KripkeStructure& concrete, const KripkeStructure& abstract,
                       const StateRelation& sigma);

struct SimulationCounterexample {
    std::size_t concrete;
    std::size_t abstract;
    std::uint32_t action;
    std::size_t concreteTarget;
};

struct SimulationResult {
    bool holds = false;
    std::optional<SimulationCounterexample> counterexample;
};

SimulationResult check_simulation(const KripkeStructure& concrete, const KripkeStructure& abstract,
                                  const StateRelation& sigma);

// Divergence-sensitive: every concrete step, including a deadlock self-loop,
// must be answered by a non-empty abstract path whose intermediate states
// stay related to the source and whose last state is related to the target.
bool check_stuttering_simulation(const KripkeStructure& concrete, const KripkeStructure& abstract,
                                 const StateRelation& sigma);

} // namespace skel
