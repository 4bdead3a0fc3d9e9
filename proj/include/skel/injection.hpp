#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "skel/formula.hpp"
#include "skel/fullness.hpp"
#include "skel/net.hpp"
#include "skel/statespace.hpp"

namespace skel {

// Skeleton plus a complement place p̄ and a recipient transition t_r (p -> p̄,
// weight 1) for every pre-place p of a non-full minimal class.
struct ModifiedSkeleton {
    PTNet net;
    std::size_t basePlaces = 0;      // skeleton places come first
    std::size_t baseTransitions = 0; // skeleton transitions come first
    std::map<std::size_t, std::size_t> complements; // place -> p̄
    std::map<std::size_t, std::size_t> recipients;  // place -> t_r
    std::vector<std::size_t> sourceClasses;         // class indices of the analysis

    // Skeleton marking: p̄ added back onto p.
    Marking collapse(MarkingView m) const;
    bool injected() const noexcept { return !complements.empty(); }

    // Atoms over p read p + p̄; recipients are silent.
    PTSystem system() const;
};

ModifiedSkeleton inject_deadlocks(const ColouredNet& net, const SkeletonAnalysis& analysis);

// Drops transitions without firing modes first, then analyzes and injects.
ModifiedSkeleton inject_deadlocks(const ColouredNet& net);

KripkeStructure build_kripke(const ModifiedSkeleton& s, const std::vector<Formula>& propositions,
                             const ExplorationLimits& limits = {});

// Skeleton state m relates to S′ state s when m(p) = s(p) + s(p̄) for
// complemented places and m(p) = s(p) elsewhere.
bool markings_related(const ModifiedSkeleton& s, MarkingView skeletonMarking, MarkingView modified);
StateRelation relate_markings(const KripkeStructure& skeleton, const KripkeStructure& modified,
                              const ModifiedSkeleton& s);

// Relation for the stuttering check from a concrete structure into S′:
// the complement sums must equal image(q), and complement places may hold
// tokens only when q is a deadlock. `image` maps a concrete marking to a
// skeleton marking.
StateRelation stuttering_relation(const KripkeStructure& concrete, const KripkeStructure& modified,
                                  const ModifiedSkeleton& s, const std::function<Marking(MarkingView)>& image);

// Image of a flattened coloured marking on the skeleton (sum per place).
Marking skeleton_image(const ColouredNet& net, MarkingView m);

} // namespace skel
