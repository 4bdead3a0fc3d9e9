#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "skel/automaton.hpp"
#include "skel/net.hpp"

namespace skel {

// Tokens consumed per place (all places, in net order).
using InputVector = std::vector<Tokens>;

InputVector input_vector(const ColouredNet& net, std::size_t transition);

struct TransitionClassification {
    std::vector<std::vector<std::size_t>> classes; // members ascending; classes by first member
    std::vector<InputVector> vectors;              // per class
    std::vector<std::size_t> classOf;              // per transition
    std::vector<std::size_t> minimal;              // class indices, ascending

    // Componentwise strict order on input vectors.
    bool below(std::size_t a, std::size_t b) const;
};

TransitionClassification transition_classes(const ColouredNet& net);

// Token distributions on the pre-places that some firing mode of the
// transition consumes. Reads one variable per token component, named
// "place#k" (or "place#k.c" for tuples) in place order. Output and guard-only
// variables are projected away.
ModeAutomaton consumption_automaton(const ColouredNet& net, std::size_t transition);

inline constexpr std::size_t kMaxTokenOrderings = 40320;

struct FullnessResult {
    enum class Status { Full, NotFull, AssumedNonFull };

    Status status = Status::NotFull;
    std::string reason;     // set for AssumedNonFull
    ModeAutomaton automaton; // minimized or-product; empty for AssumedNonFull

    bool full() const noexcept { return status == Status::Full; }
};

// Members must share an input vector. Token order on an arc is irrelevant to
// a distribution, so the or-product ranges over every member and every
// reordering of the tokens it consumes from each place.
FullnessResult check_fullness(const ColouredNet& net, const std::vector<std::size_t>& members);
bool is_full(const ColouredNet& net, const std::vector<std::size_t>& members);

struct SkeletonAnalysis {
    TransitionClassification classification;
    std::vector<FullnessResult> minimalResults; // aligned with classification.minimal
    bool preserving = false;

    std::vector<std::size_t> non_full_minimal() const; // class indices
};

SkeletonAnalysis analyze_skeleton(const ColouredNet& net);

// True only when every minimal transition class is full.
bool has_deadlock_preserving_skeleton(const ColouredNet& net);

// Whether the transition has at least one firing mode.
bool has_firing_mode(const ColouredNet& net, std::size_t transition);

// Drops transitions without firing modes; they never fire and leave the
// unfolding unchanged. `kept` receives the surviving original indices.
ColouredNet prune_dead_transitions(const ColouredNet& net, std::vector<std::size_t>* kept = nullptr);

struct Certificate {
    std::optional<std::uint64_t> distributions; // nullopt on overflow
    std::uint64_t modes = 0; // distinct consumption patterns over the class
    std::optional<bool> certified; // nullopt when the count overflowed

    bool holds() const noexcept { return certified.value_or(false); }
};

// Counting certificate for a class: the number of token distributions
// matching the input vector equals the number of distinct ways the members
// consume tokens. Sufficient for fullness, not necessary.
Certificate fullness_certificate(const ColouredNet& net, const std::vector<std::size_t>& members,
                                 std::size_t modeCap = kDefaultUnfoldCap);

// One certificate per minimal class, aligned with classification.minimal.
std::vector<Certificate> folded_fullness_check(const ColouredNet& net);

// Number of multisets of size k over n elements; nullopt on overflow.
std::optional<std::uint64_t> multichoose(std::uint64_t n, std::uint64_t k);

} // namespace skel
